use std::fmt::Write;
use std::path::Path;

use brieskorn_core::{
    classify as classify_point, count_cusps, degenerate_census, is_excellent, mu_from_coefficients, point_on_circle,
    singular_circles, sweep_transitions, Classification, CuspCensus, DeformationParams, DegenerateVerdict, Kind,
    KindCounts, PolarComplex, Tolerances,
};
use serde_json::{json, Value};

use crate::error::{exit, CliError, CliResult};
use crate::output::write_atomic;
use crate::render::{critical_curves, to_csv, to_svg, RenderSpec};

/// Version of the machine-readable documents printed with `--json`.
pub const FORMAT_VERSION: u32 = 1;

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

fn params_json(params: &DeformationParams) -> Value {
    json!({ "p": params.p(), "q": params.q(), "mu_abs": params.mu_abs(), "mu_arg": params.mu_arg() })
}

fn document(command: &str, params: Option<&DeformationParams>, body: Value) -> Value {
    let mut doc = json!({ "format_version": FORMAT_VERSION, "command": command });
    if let Some(p) = params {
        doc["params"] = params_json(p);
    }
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::IndefiniteFold => "IndefiniteFold",
        Kind::DefiniteFold => "DefiniteFold",
        Kind::Cusp => "Cusp",
        Kind::Degenerate => "Degenerate",
    }
}

fn counts_json(c: &KindCounts) -> Value {
    json!({
        "IndefiniteFold": c.indefinite_fold,
        "DefiniteFold": c.definite_fold,
        "Cusp": c.cusp,
        "Degenerate": c.degenerate,
    })
}

fn entry_json(k: u32, theta: f64, c: &Classification) -> Value {
    let d = &c.diagnostics;
    json!({
        "k": k,
        "theta": theta,
        "kind": kind_name(c.kind),
        "phi": d.phi,
        "det_h": d.det_h,
        "det_tolerance": d.det_tolerance,
        "third": d.third,
        "signature": [d.hess_signature.0, d.hess_signature.1, d.hess_signature.2],
        "rank_m": d.rank_m,
        "branch": format!("{:?}", d.branch),
    })
}

/// Classifies `samples` uniform points per circle plus every located zero of
/// the circle function. The table lists the located zeros and any violation;
/// the summary counts every classified point.
pub fn classify(params: &DeformationParams, samples: usize, tol: &Tolerances) -> CliResult<Outcome> {
    let report = is_excellent(params, samples, tol)?;
    let mut summary = report.grid_counts;
    let mut circles = Vec::new();
    let mut text = String::new();
    for spec in singular_circles(params) {
        let circle = &report.census.per_circle[spec.k as usize];
        let mut entries = Vec::new();
        let candidates = circle.cusp_thetas.iter().chain(&circle.multiple_thetas).copied();
        let violations = report.violations.iter().filter(|v| v.k == spec.k).map(|v| v.theta);
        let mut thetas: Vec<f64> = candidates.collect();
        let located = thetas.len();
        thetas.extend(violations);
        for (i, theta) in thetas.iter().enumerate() {
            let c = classify_point(&point_on_circle(&spec, *theta)?, tol);
            if i < located {
                summary.add(c.kind);
            }
            entries.push((*theta, c));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        entries.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
        let _ = writeln!(text, "circle {}:", spec.k);
        for (theta, c) in &entries {
            let d = &c.diagnostics;
            let _ = writeln!(
                text,
                "  theta {theta:.12}  {:<14}  phi {:+.3e}  det {:+.3e}  third {}  signature {:?}",
                kind_name(c.kind),
                d.phi,
                d.det_h,
                d.third.map_or("-".to_string(), |t| format!("{t:+.3e}")),
                d.hess_signature,
            );
        }
        if circle.identically_zero {
            let _ = writeln!(text, "  circle function vanishes identically");
        }
        circles.push(json!({
            "k": spec.k,
            "identically_zero": circle.identically_zero,
            "entries": entries.iter().map(|(t, c)| entry_json(spec.k, *t, c)).collect::<Vec<_>>(),
        }));
    }
    let _ = writeln!(
        text,
        "summary: {} Cusp, {} IndefiniteFold, {} DefiniteFold, {} Degenerate",
        summary.cusp, summary.indefinite_fold, summary.definite_fold, summary.degenerate
    );
    let _ = writeln!(text, "excellent: {}", report.excellent);
    let json = document(
        "classify",
        Some(params),
        json!({
            "samples_per_circle": samples,
            "excellent": report.excellent,
            "equal_exponent_boundary": report.on_equal_exponent_boundary,
            "summary": counts_json(&summary),
            "circles": circles,
        }),
    );
    let code = if report.excellent { exit::OK } else { exit::DEGENERATE };
    Ok(Outcome { text, json, code })
}

fn census_json(c: &CuspCensus) -> Value {
    json!({
        "total": c.total,
        "bounds": [c.bounds.0, c.bounds.1],
        "within_bounds": c.within_bounds(),
        "excellent": c.excellent,
        "circles": c.per_circle.iter().map(|k| json!({
            "k": k.k,
            "cusp_thetas": k.cusp_thetas,
            "multiple_thetas": k.multiple_thetas,
            "identically_zero": k.identically_zero,
        })).collect::<Vec<_>>(),
    })
}

pub fn count(params: &DeformationParams) -> Outcome {
    let c = count_cusps(params);
    let mut text = String::new();
    for k in &c.per_circle {
        let angles: Vec<String> = k.cusp_thetas.iter().map(|t| format!("{t:.12}")).collect();
        let _ = writeln!(text, "circle {}: {} cusps [{}]", k.k, k.cusp_thetas.len(), angles.join(", "));
        if !k.multiple_thetas.is_empty() {
            let _ = writeln!(text, "  multiple zeros at {:?}", k.multiple_thetas);
        }
        if k.identically_zero {
            let _ = writeln!(text, "  circle function vanishes identically");
        }
    }
    let _ = writeln!(text, "total: {} (bounds {}..={})", c.total, c.bounds.0, c.bounds.1);
    let _ = writeln!(text, "excellent: {}", c.excellent);
    let code = if c.excellent { exit::OK } else { exit::DEGENERATE };
    Outcome { text, json: document("count", Some(params), census_json(&c)), code }
}

pub fn sweep(p: u32, q: u32, mu_arg: f64, lo: f64, hi: f64, steps: usize) -> CliResult<Outcome> {
    let rows = sweep_transitions(p, q, mu_arg, lo, hi, steps)?;
    let mut text = format!("p={p} q={q} arg mu={mu_arg} range [{lo}, {hi}] steps {steps}\n");
    if rows.is_empty() {
        text.push_str("no transitions\n");
    }
    for t in &rows {
        let _ = writeln!(text, "|mu|* = {:.9}  {} -> {}", t.mu_abs, t.before, t.after);
    }
    let json = document(
        "sweep",
        None,
        json!({
            "p": p, "q": q, "mu_arg": mu_arg, "lo": lo, "hi": hi, "steps": steps,
            "monotonicity_checked": p > q,
            "transitions": rows.iter().map(|t| json!({ "mu_abs": t.mu_abs, "before": t.before, "after": t.after })).collect::<Vec<_>>(),
        }),
    );
    Ok(Outcome { text, json, code: exit::OK })
}

pub fn render(
    params: &DeformationParams,
    spec: &RenderSpec,
    svg: Option<&Path>,
    csv: Option<&Path>,
) -> CliResult<Outcome> {
    spec.validate()?;
    if svg.is_none() && csv.is_none() {
        return Err(CliError::Usage("render needs --out-svg and/or --out-csv".into()));
    }
    let (curves, census) = critical_curves(params, spec.samples);
    if let Some(path) = csv {
        write_atomic(path, &to_csv(&curves))?;
    }
    if let Some(path) = svg {
        write_atomic(path, &to_svg(&curves, spec))?;
    }
    let marks: usize = curves.iter().map(|c| c.cusp_marks.len()).sum();
    let rows = curves.len() * spec.samples;
    let mut text = format!("{} circle(s), {rows} samples, {marks} cusp marker(s)\n", curves.len());
    for (label, path) in [("svg", svg), ("csv", csv)] {
        if let Some(p) = path {
            let _ = writeln!(text, "wrote {label}: {}", p.display());
        }
    }
    let json = document(
        "render",
        Some(params),
        json!({
            "samples": spec.samples,
            "rows": rows,
            "cusp_markers": marks,
            "excellent": census.excellent,
            "svg": svg.map(|p| p.display().to_string()),
            "csv": csv.map(|p| p.display().to_string()),
        }),
    );
    Ok(Outcome { text, json, code: exit::OK })
}

pub fn reduce(a: PolarComplex, b: PolarComplex, p: u32, q: u32) -> CliResult<Outcome> {
    if a.abs == 0.0 || b.abs == 0.0 {
        let verdict = degenerate_census(a, b, p, q)?;
        let mut text = String::from("notice: a linear coefficient vanishes; using the degenerate family census\n");
        let (body, code) = match &verdict {
            DegenerateVerdict::Census { vanishing, exponent, cusp_thetas } => {
                let _ =
                    writeln!(text, "{} cusps on the single singular circle at {:?}", cusp_thetas.len(), cusp_thetas);
                (
                    json!({ "degenerate": true, "vanishing": format!("{vanishing:?}"), "exponent": exponent,
                            "excellent": true, "cusps": cusp_thetas.len(), "cusp_thetas": cusp_thetas }),
                    exit::OK,
                )
            }
            DegenerateVerdict::NotExcellent { vanishing, pure_exponent } => {
                let _ = writeln!(text, "not excellent: the pure power has exponent {pure_exponent}");
                (
                    json!({ "degenerate": true, "vanishing": format!("{vanishing:?}"), "excellent": false,
                            "pure_exponent": pure_exponent }),
                    exit::DEGENERATE,
                )
            }
        };
        return Ok(Outcome { text, json: document("reduce", None, body), code });
    }
    let red = mu_from_coefficients(a, b, p, q)?;
    let mu = red.params;
    let mut text = format!("mu = {:.15} * exp(i {:.15})\n", mu.mu_abs(), mu.mu_arg());
    let _ = writeln!(
        text,
        "c1 = {:.15} * exp(i {:.15}), c2 = {:.15} * exp(i {:.15})",
        red.c1.abs, red.c1.arg, red.c2.abs, red.c2.arg
    );
    let _ = writeln!(
        text,
        "path: f_t = z^{p} + w^{q} + a t^{} conj(z) + b t^{} conj(w); scaling z = c1 t^{q} u, w = c2 t^{p} v; every t > 0 gives the same mu",
        (p - 1) * q,
        p * (q - 1)
    );
    let json = document(
        "reduce",
        Some(&mu),
        json!({
            "degenerate": false,
            "c1": { "abs": red.c1.abs, "arg": red.c1.arg },
            "c2": { "abs": red.c2.abs, "arg": red.c2.arg },
            "path": { "a_exponent": (p - 1) * q, "b_exponent": p * (q - 1), "c1_exponent": q, "c2_exponent": p },
        }),
    );
    Ok(Outcome { text, json, code: exit::OK })
}
