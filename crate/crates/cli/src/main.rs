use std::path::PathBuf;
use std::process::ExitCode;

use brieskorn_cli::commands::{self, Outcome};
use brieskorn_cli::render::RenderSpec;
use brieskorn_cli::{exit, tolerances_from_env, verify, CliError, CliResult};
use brieskorn_core::levine::MIN_EXCELLENCE_SAMPLES;
use brieskorn_core::{DeformationParams, PolarComplex};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

/// Folds and cusps of the deformed map mu (u^p + conj u) + v^q + conj v.
#[derive(Parser, Debug)]
#[command(name = "brieskorn", version, about)]
struct Cli {
    /// Print a machine-readable JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    p: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    q: u32,
    /// Modulus of mu.
    #[arg(long)]
    mu_abs: f64,
    /// Argument of mu in radians.
    #[arg(long, default_value_t = 0.0, conflicts_with = "mu_arg_deg", allow_negative_numbers = true)]
    mu_arg: f64,
    /// Argument of mu in degrees.
    #[arg(long, allow_negative_numbers = true)]
    mu_arg_deg: Option<f64>,
}

impl MapArgs {
    fn params(&self) -> CliResult<DeformationParams> {
        let arg = self.mu_arg_deg.map_or(self.mu_arg, f64::to_radians);
        Ok(DeformationParams::new(self.p, self.q, self.mu_abs, arg)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the singular points and report excellence.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        /// Uniform sample points per singular circle.
        #[arg(long, default_value_t = MIN_EXCELLENCE_SAMPLES)]
        samples: usize,
    },
    /// Count and locate the cusps on every singular circle.
    Count {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Locate the values of |mu| where the cusp count changes.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        p: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        q: u32,
        #[arg(long, default_value_t = 0.0, conflicts_with = "mu_arg_deg", allow_negative_numbers = true)]
        mu_arg: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu_arg_deg: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        lo: f64,
        #[arg(long, default_value_t = 10.0)]
        hi: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Write the critical-value curves as SVG and/or CSV.
    Render {
        #[command(flatten)]
        map: MapArgs,
        /// Samples per circle, a power of two >= 256.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long)]
        out_svg: Option<PathBuf>,
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
    /// Reduce z^p + w^q + a conj(z) + b conj(w) to the one-parameter family.
    Reduce {
        #[arg(long)]
        a_abs: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a_arg: f64,
        #[arg(long)]
        b_abs: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        b_arg: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        p: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        q: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let tol = tolerances_from_env()?;
    match &cli.command {
        Command::Classify { map, samples } => commands::classify(&map.params()?, *samples, &tol),
        Command::Count { map } => Ok(commands::count(&map.params()?)),
        Command::Sweep { p, q, mu_arg, mu_arg_deg, lo, hi, steps } => {
            commands::sweep(*p, *q, mu_arg_deg.map_or(*mu_arg, f64::to_radians), *lo, *hi, *steps)
        }
        Command::Render { map, samples, out_svg, out_csv } => {
            let spec = RenderSpec { samples: *samples, ..RenderSpec::default() };
            commands::render(&map.params()?, &spec, out_svg.as_deref(), out_csv.as_deref())
        }
        Command::Reduce { a_abs, a_arg, b_abs, b_arg, p, q } => {
            if !(*a_abs >= 0.0 && *b_abs >= 0.0) {
                return Err(CliError::Usage("coefficient moduli must be nonnegative".into()));
            }
            commands::reduce(PolarComplex::new(*a_abs, *a_arg), PolarComplex::new(*b_abs, *b_arg), *p, *q)
        }
        Command::Verify { suite } => {
            let checks = verify::run(suite, &tol).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown suite {suite:?}; expected one of {}",
                    verify::suite_names().join(", ")
                ))
            })?;
            let mut text = String::new();
            for c in &checks {
                text.push_str(&format!(
                    "[{}] {} {}: {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.criterion,
                    c.suite,
                    c.detail
                ));
            }
            let all = checks.iter().all(|c| c.passed);
            let json = serde_json::json!({
                "format_version": commands::FORMAT_VERSION,
                "command": "verify",
                "suite": suite,
                "passed": all,
                "checks": checks.iter().map(|c| serde_json::json!({
                    "criterion": c.criterion, "suite": c.suite, "passed": c.passed, "detail": c.detail,
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome { text, json, code: if all { exit::OK } else { exit::DEGENERATE } })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(exit::OK),
                _ => ExitCode::from(exit::USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                // serializing a Value cannot fail
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap_or_default());
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("brieskorn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
