//! Verification suites, one per acceptance criterion.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use brieskorn_core::angle::{canonical, circular_distance};
use brieskorn_core::levine::MIN_EXCELLENCE_SAMPLES;
use brieskorn_core::polar::{FD_STEPS, FD_TOLERANCES};
use brieskorn_core::{
    branch_of, classify, count_cusps, cusps_by_classifier, degenerate_census, fd_partial, gradient_quad,
    hessian_bundle, partial, point_on_circle, singular_circles, sweep_transitions, theorem13_curve, Branch,
    DeformationParams, DegenerateVerdict, Kind, MultiIndex, PolarComplex, PolarPoint, SingularPoint, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::render::critical_curves;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Suite = fn(&Tolerances) -> Check;

pub const SUITES: [(&str, u8, Suite); 10] = [
    ("theorem13", 1, three_cusp_curve),
    ("equal-exponents", 2, equal_exponents),
    ("bounds", 3, bounds),
    ("cubic-transition", 4, cubic_transition),
    ("quartic-transition", 5, quartic_transition),
    ("indefinite", 6, indefinite),
    ("gradients", 7, gradients),
    ("routes", 8, routes),
    ("degenerate-family", 9, degenerate_family),
    ("monotonicity", 10, monotonicity),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).chain(["all"]).collect()
}

/// Runs the named suite (or `all`); `None` for an unknown name.
pub fn run(name: &str, tol: &Tolerances) -> Option<Vec<Check>> {
    if name == "all" {
        return Some(SUITES.iter().map(|s| (s.2)(tol)).collect());
    }
    SUITES.iter().find(|s| s.0 == name).map(|s| vec![(s.2)(tol)])
}

fn check(criterion: u8, suite: &'static str, failures: Vec<String>, ok_detail: String) -> Check {
    let passed = failures.is_empty();
    let detail = if passed {
        ok_detail
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        format!("{} failure(s): {}", failures.len(), shown.join("; "))
    };
    Check { criterion, suite, passed, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params(p: u32, q: u32, mu_abs: f64, mu_arg: f64) -> DeformationParams {
    // every caller passes p, q >= 2 and a positive finite modulus
    DeformationParams::new(p, q, mu_abs, mu_arg).expect("valid parameters")
}

/// `abs(mu)` log-uniform in `[e^lo, e^hi]`, staying off `abs(mu) = 1`.
fn random_mu(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (f64, f64) {
    loop {
        let l: f64 = rng.random_range(lo..hi);
        if l.abs() > 1e-2 {
            return (l.exp(), rng.random_range(0.0..TAU));
        }
    }
}

/// Maps used by the grid-wide properties, two random moduli per exponent pair.
pub fn test_grid() -> Vec<DeformationParams> {
    let mut rng = rng(0x5eed);
    let mut out = Vec::new();
    for (p, q) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 3), (2, 3), (5, 2)] {
        for _ in 0..2 {
            let (m, a) = random_mu(&mut rng, -1.0, 1.5);
            out.push(params(p, q, m, a));
        }
    }
    out
}

fn three_cusp_curve(_: &Tolerances) -> Check {
    let start = Instant::now();
    let pr = params(2, 2, 0.8, 0.3);
    let mut failures = Vec::new();
    let census = count_cusps(&pr);
    if census.total != 3 {
        failures.push(format!("{} cusps", census.total));
    }
    let mut worst = 0.0f64;
    match theorem13_curve(&pr) {
        Ok(curve) => {
            let (curves, _) = critical_curves(&pr, 1024);
            for s in &curves[0].points {
                let h = curve.eval(s.theta);
                worst = worst.max((s.value.x - h.re).hypot(s.value.y - h.im));
            }
            if worst > 1e-10 {
                failures.push(format!("curve deviation {worst:.2e}"));
            }
            let mapped: Vec<f64> =
                census.per_circle[0].cusp_thetas.iter().map(|t| canonical(t + curve.shift)).collect();
            let targets = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
            let hit = |t: f64| mapped.iter().any(|m| circular_distance(*m, t) <= 1e-9);
            if mapped.len() != 3 || !targets.iter().all(|&t| hit(t)) {
                failures.push(format!("cusp parameters map to {mapped:?}"));
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        failures.push(format!("took {elapsed:.2} s"));
    }
    check(1, "theorem13", failures, format!("3 cusps, curve deviation {worst:.1e}, {elapsed:.3} s"))
}

fn equal_exponents(_: &Tolerances) -> Check {
    let mut rng = rng(2);
    let mut failures = Vec::new();
    for p in 2..=4u32 {
        for _ in 0..5 {
            let (m, a) = random_mu(&mut rng, -1.0, 1.5);
            let c = count_cusps(&params(p, p, m, a));
            if !c.excellent || c.total as u32 != p * p - 1 || c.per_circle.len() as u32 != p - 1 {
                failures.push(format!("p={p} mu={m:.4}: total {} on {} circles", c.total, c.per_circle.len()));
            }
        }
    }
    check(2, "equal-exponents", failures, "p^2 - 1 cusps on p - 1 circles for p = 2, 3, 4".into())
}

fn bounds(_: &Tolerances) -> Check {
    let mut rng = rng(3);
    let mut failures = Vec::new();
    for (p, q) in [(3u32, 2u32), (4, 2), (4, 3), (5, 3)] {
        let (lo, hi) = ((p + 1) * (q - 1), (p - 1) * (q + 1));
        for _ in 0..10 {
            let (m, a) = random_mu(&mut rng, -2.0, 2.0);
            let c = count_cusps(&params(p, q, m, a));
            if !c.excellent || !(lo as usize..=hi as usize).contains(&c.total) {
                failures.push(format!("p={p} q={q} mu={m:.4}: {} not in [{lo}, {hi}]", c.total));
            }
        }
        let arg = rng.random_range(0.0..TAU);
        let small = count_cusps(&params(p, q, 1e-4, arg)).total as u32;
        let large = count_cusps(&params(p, q, 1e4, arg)).total as u32;
        if small != hi || large != lo {
            failures.push(format!("p={p} q={q}: limits {small} and {large}"));
        }
    }
    check(3, "bounds", failures, "40 maps within bounds, both limits attained".into())
}

fn cubic_transition(_: &Tolerances) -> Check {
    let want = 1.5 * 3f64.sqrt();
    let failures = match sweep_transitions(3, 2, 0.0, 0.1, 10.0, 200) {
        Ok(t) if t.len() == 1 && (t[0].mu_abs - want).abs() < 1e-6 && (t[0].before, t[0].after) == (6, 4) => {
            return check(4, "cubic-transition", vec![], format!("|mu|* = {:.9}, 6 -> 4", t[0].mu_abs));
        }
        Ok(t) => vec![format!("{t:?}")],
        Err(e) => vec![e.to_string()],
    };
    check(4, "cubic-transition", failures, String::new())
}

fn quartic_transition(_: &Tolerances) -> Check {
    let failures = match sweep_transitions(4, 2, 0.0, 0.1, 10.0, 200) {
        Ok(t) => match (t.first(), t.last()) {
            (Some(first), Some(last)) if first.before == 9 && last.after == 5 && (last.mu_abs - 2.615).abs() < 1e-2 => {
                let path: Vec<String> =
                    t.iter().map(|r| format!("{:.6}: {} -> {}", r.mu_abs, r.before, r.after)).collect();
                return check(5, "quartic-transition", vec![], path.join(", "));
            }
            _ => vec![format!("{t:?}")],
        },
        Err(e) => vec![e.to_string()],
    };
    check(5, "quartic-transition", failures, String::new())
}

fn indefinite(tol: &Tolerances) -> Check {
    let mut failures = Vec::new();
    let (mut folds, mut maps) = (0usize, 0usize);
    for pr in test_grid() {
        let census = count_cusps(&pr);
        if !census.excellent {
            continue;
        }
        maps += 1;
        for (spec, circle) in singular_circles(&pr).iter().zip(&census.per_circle) {
            let grid = (0..MIN_EXCELLENCE_SAMPLES).map(|i| TAU * i as f64 / MIN_EXCELLENCE_SAMPLES as f64);
            for theta in grid.chain(circle.cusp_thetas.iter().copied()) {
                let Ok(pt) = point_on_circle(spec, theta) else {
                    failures.push(format!("{pr:?}: no point at {theta}"));
                    continue;
                };
                let c = classify(&pt, tol);
                let (pos, neg, _) = c.diagnostics.hess_signature;
                match c.kind {
                    Kind::DefiniteFold => failures.push(format!("{pr:?}: definite fold at {theta:.6}")),
                    Kind::IndefiniteFold if pos == 0 || neg == 0 => {
                        failures.push(format!("{pr:?}: fold signature {:?}", c.diagnostics.hess_signature))
                    }
                    Kind::IndefiniteFold => folds += 1,
                    Kind::Degenerate => failures.push(format!("{pr:?}: degenerate at {theta:.6}")),
                    Kind::Cusp => {}
                }
            }
        }
    }
    check(6, "indefinite", failures, format!("{folds} folds over {maps} maps, all of mixed signature"))
}

/// A singular point on `branch`, chosen through its `th1` value.
fn branch_point(rng: &mut ChaCha8Rng, pr: &DeformationParams, branch: Branch) -> Option<SingularPoint> {
    let p = pr.p() as f64;
    let th1 = match branch {
        Branch::K1Nonzero => rng.random_range(0.0..TAU),
        Branch::K1NonzeroDegenerateTheta => TAU * rng.random_range(0..pr.p() + 1) as f64 / (p + 1.0),
        Branch::K1ZeroCosTheta2Nonzero => (PI + TAU * rng.random_range(0..pr.p() + 1) as f64) / (p + 1.0),
        Branch::CosTheta2Zero => {
            (0.5 * PI + PI * rng.random_range(0..pr.p() - 1) as f64 - pr.mu_arg()) * 2.0 / (p - 1.0)
        }
    };
    let circles = singular_circles(pr);
    let spec = circles[rng.random_range(0..circles.len())];
    let laps = (pr.q() - 1) / spec.r;
    let lap = rng.random_range(0..laps);
    let theta = (canonical(canonical(th1) - spec.phase) + TAU * lap as f64) * spec.r as f64 / (pr.q() as f64 - 1.0);
    point_on_circle(&spec, theta).ok()
}

fn gradients(tol: &Tolerances) -> Check {
    let mut rng = rng(7);
    let mut failures = Vec::new();
    let mut worst_det = 0.0f64;
    for branch in
        [Branch::K1Nonzero, Branch::K1NonzeroDegenerateTheta, Branch::K1ZeroCosTheta2Nonzero, Branch::CosTheta2Zero]
    {
        let (mut done, mut tries) = (0, 0);
        while done < 100 && tries < 100_000 {
            tries += 1;
            let pr = params(
                rng.random_range(2..=4),
                rng.random_range(2..=3),
                rng.random_range(-1.0f64..1.5).exp(),
                rng.random_range(0.0..TAU),
            );
            let Some(pt) = branch_point(&mut rng, &pr, branch) else { continue };
            if branch_of(&pt, tol) != branch {
                continue;
            }
            let b = hessian_bundle(&pt, tol);
            let Some(closed) = b.det_closed else { continue };
            // the closed forms divide by the pivot gradient
            let quad = gradient_quad(&pt);
            let lead = if b.shear.swapped { quad.k_hat } else { quad.k };
            if lead[b.pivot].abs() < 0.05 * quad.scale() {
                continue;
            }
            done += 1;
            let err = (closed - b.det_assembled).abs() / b.det_assembled.abs().max(f64::MIN_POSITIVE);
            worst_det = worst_det.max(err);
            if err >= 1e-8 {
                failures.push(format!("{branch:?}: det rel. error {err:.2e}"));
            }
        }
        if done < 100 {
            failures.push(format!("{branch:?}: only {done} usable points"));
        }
    }
    let mut worst_quad = 0.0f64;
    for _ in 0..200 {
        let pr = params(
            rng.random_range(2..8),
            rng.random_range(2..8),
            rng.random_range(-1.0f64..1.5).exp(),
            rng.random_range(0.0..TAU),
        );
        let Some(pt) = branch_point(&mut rng, &pr, Branch::K1Nonzero) else { continue };
        let quad = gradient_quad(&pt);
        for slot in 0..4 {
            let Ok((dq, dr)) = partial(&pr, &pt.z, MultiIndex::from_slots(&[slot])) else { continue };
            let err = (dq - quad.k[slot]).abs().max((dr - quad.k_hat[slot]).abs()) / (1.0 + quad.scale());
            worst_quad = worst_quad.max(err);
        }
    }
    if worst_quad > 1e-10 {
        failures.push(format!("gradient quads off by {worst_quad:.2e}"));
    }
    let mut worst_fd = [0.0f64; 4];
    for _ in 0..100 {
        let pr = params(
            rng.random_range(2..5),
            rng.random_range(2..5),
            rng.random_range(0.2..2.0),
            rng.random_range(0.0..TAU),
        );
        let z = PolarPoint::new(
            rng.random_range(0.3..1.0),
            rng.random_range(0.0..TAU),
            rng.random_range(0.3..1.0),
            rng.random_range(0.0..TAU),
        );
        for idx in multi_indices() {
            let order = idx.order() as usize;
            let (Ok((aq, ar)), Ok((fq, fr))) = (partial(&pr, &z, idx), fd_partial(&pr, &z, idx, FD_STEPS[order]))
            else {
                failures.push(format!("partial {idx:?} failed"));
                continue;
            };
            let err = ((fq - aq).abs() / (1.0 + aq.abs())).max((fr - ar).abs() / (1.0 + ar.abs()));
            worst_fd[order] = worst_fd[order].max(err);
        }
    }
    for order in 1..=3 {
        if worst_fd[order] >= FD_TOLERANCES[order] {
            failures.push(format!("order {order} finite differences off by {:.2e}", worst_fd[order]));
        }
    }
    check(
        7,
        "gradients",
        failures,
        format!(
            "det {worst_det:.1e}, gradient quads {worst_quad:.1e}, finite differences {:.1e}/{:.1e}/{:.1e}",
            worst_fd[1], worst_fd[2], worst_fd[3]
        ),
    )
}

fn multi_indices() -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for a in 0..=3u8 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                for d in 0..=3 - a - b - c {
                    if a + b + c + d > 0 {
                        out.push(MultiIndex::new(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

fn routes(tol: &Tolerances) -> Check {
    let mut failures = Vec::new();
    let mut cusps = 0;
    for pr in test_grid() {
        let census = count_cusps(&pr);
        if !census.excellent {
            continue;
        }
        match cusps_by_classifier(&pr, 4096, tol) {
            Ok(found) => {
                for (circle, found) in census.per_circle.iter().zip(&found) {
                    let same = circle.cusp_thetas.len() == found.len()
                        && circle.cusp_thetas.iter().zip(found).all(|(a, b)| circular_distance(*a, *b) < 1e-8);
                    if !same {
                        failures.push(format!("{pr:?} circle {}: {:?} vs {:?}", circle.k, circle.cusp_thetas, found));
                    }
                    cusps += found.len();
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    check(8, "routes", failures, format!("{cusps} cusps agree to 1e-8"))
}

fn degenerate_family(_: &Tolerances) -> Check {
    let one = PolarComplex::new(1.0, 0.0);
    let zero = PolarComplex::new(0.0, 0.0);
    let mut failures = Vec::new();
    match degenerate_census(one, zero, 3, 2) {
        Ok(DegenerateVerdict::Census { cusp_thetas, .. }) if cusp_thetas.len() == 4 => {}
        other => failures.push(format!("p=3 q=2: {other:?}")),
    }
    match degenerate_census(one, zero, 5, 3) {
        Ok(DegenerateVerdict::NotExcellent { .. }) => {}
        other => failures.push(format!("p=5 q=3: {other:?}")),
    }
    check(9, "degenerate-family", failures, "4 cusps for (3, 2); (5, 3) not excellent".into())
}

fn monotonicity(_: &Tolerances) -> Check {
    let mut rng = rng(10);
    let mut failures = Vec::new();
    let mut transitions = 0;
    for (p, q) in [(3u32, 2u32), (4, 2), (5, 2), (4, 3)] {
        let arg = rng.random_range(0.0..TAU);
        let counts: Vec<usize> = (0..200)
            .map(|i| count_cusps(&params(p, q, (-3.0 + 6.0 * i as f64 / 199.0f64).exp(), arg)).zero_count())
            .collect();
        if let Some(i) = counts.windows(2).position(|w| w[1] > w[0]) {
            failures.push(format!("p={p} q={q}: count rises {} -> {} at step {i}", counts[i], counts[i + 1]));
        }
        match sweep_transitions(p, q, arg, 0.05, 20.0, 200) {
            Ok(rows) => {
                for t in rows {
                    transitions += 1;
                    if t.before <= t.after || (t.before - t.after) % 2 != 0 {
                        failures.push(format!("p={p} q={q}: transition {} -> {}", t.before, t.after));
                    }
                }
            }
            Err(e) => failures.push(format!("p={p} q={q}: {e}")),
        }
    }
    check(10, "monotonicity", failures, format!("nonincreasing over 4 sweeps, {transitions} even transitions"))
}
