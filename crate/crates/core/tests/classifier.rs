mod common;

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use brieskorn_core::angle::circular_distance;
use brieskorn_core::levine::{cusps_by_classifier, restricted_sheared, weight};
use brieskorn_core::linalg::det3;
use brieskorn_core::polar::{hessians, Mat4};
use brieskorn_core::trig::nested_operator;
use brieskorn_core::{
    big_phi, big_phi_derivative, branch_of, classify, classify_sheared, count_cusps, det_h, eval_qr, gradient_quad,
    hessian_bundle, hessian_entries, is_excellent, partial, phi, point_on_circle, shear_constant, singular_circles,
    sweep_transitions, third_derivative, Branch, DeformationParams, Error, Kind, MultiIndex, PolarPoint, SingularPoint,
    Tolerances,
};
use common::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// `R_hat(z0 + J y)` with `Q = r1'`: the primed chart of the k1 != 0 branch.
fn primed_jacobian(pt: &SingularPoint) -> Mat4 {
    let k = gradient_quad(pt).k;
    let mut j = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
    j[0] = [1.0 / k[0], -k[1] / k[0], -k[2] / k[0], -k[3] / k[0]];
    j
}

fn r_hat_primed(pt: &SingularPoint, s: f64, y: [f64; 4]) -> f64 {
    let j = primed_jacobian(pt);
    let mut x = pt.z.to_array();
    for (i, xi) in x.iter_mut().enumerate() {
        *xi += (0..4).map(|c| j[i][c] * y[c]).sum::<f64>();
    }
    let v = eval_qr(pt.params(), &PolarPoint::from_array(x));
    v.y - s * v.x
}

fn fd_second_primed(pt: &SingularPoint, s: f64, a: usize, b: usize, h: f64) -> f64 {
    let f = |da: f64, db: f64| {
        let mut y = [0.0; 4];
        y[a] += da;
        y[b] += db;
        r_hat_primed(pt, s, y)
    };
    (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h)
}

fn generic_point(rng: &mut impl Rng, pr: &DeformationParams) -> SingularPoint {
    loop {
        let pt = random_point(rng, pr);
        if branch_of(&pt, &tol()) == Branch::K1Nonzero {
            return pt;
        }
    }
}

#[test]
fn shear_constant_examples() {
    // th1 = 0 on the circle: Theta2 = arg mu
    let pr = params(2, 3, 1.0, 0.0);
    let spec = singular_circles(&pr)[0];
    let pt = point_on_circle(&spec, theta_for_th1(&spec, 0.0, 0)).unwrap();
    let s = shear_constant(&pt, branch_of(&pt, &tol()), &tol()).unwrap();
    assert_eq!((s.value.abs() < 1e-15, s.swapped), (true, false));

    let pr = params(2, 3, 1.0, FRAC_PI_4);
    let spec = singular_circles(&pr)[0];
    let pt = point_on_circle(&spec, theta_for_th1(&spec, 0.0, 0)).unwrap();
    let s = shear_constant(&pt, branch_of(&pt, &tol()), &tol()).unwrap();
    assert!((s.value - 1.0).abs() < 1e-14);
}

#[test]
fn shear_matches_gradient_ratio() {
    let mut rng = rng(31);
    for _ in 0..100 {
        let pr = random_params(&mut rng, 2..7, 2..7);
        let pt = generic_point(&mut rng, &pr);
        let s = shear_constant(&pt, Branch::K1Nonzero, &tol()).unwrap();
        let k1 = gradient_quad(&pt).k[0];
        let (_, r_r1) = partial(&pr, &pt.z, MultiIndex::new(1, 0, 0, 0)).unwrap();
        assert!((s.value * k1 - r_r1).abs() < 1e-10 * (1.0 + r_r1.abs()));
        let want = 2.0 * pr.mu_abs() * pt.thetas[1].sin() * pt.thetas[0].cos();
        assert!((r_r1 - want).abs() < 1e-10 * (1.0 + want.abs()));
    }
}

#[test]
fn shear_swaps_when_cos_theta2_vanishes() {
    let mut rng = rng(32);
    let pr = params(3, 2, 0.9, 0.7);
    let pt = cos_theta2_zero_point(&mut rng, &pr);
    assert_eq!(branch_of(&pt, &tol()), Branch::CosTheta2Zero);
    let s = shear_constant(&pt, Branch::CosTheta2Zero, &tol()).unwrap();
    assert!(s.swapped && s.value == 0.0);
    assert!(matches!(shear_constant(&pt, Branch::K1Nonzero, &tol()), Err(Error::BranchMisdispatch(_))));
    assert!(matches!(hessian_entries(&pt, &tol()), Err(Error::BranchMisdispatch(_))));
}

#[test]
fn hessian_entries_reject_vanishing_k1() {
    let mut rng = rng(33);
    let pr = params(4, 3, 1.2, 0.3);
    let pt = k1_zero_point(&mut rng, &pr);
    assert_eq!(branch_of(&pt, &tol()), Branch::K1ZeroCosTheta2Nonzero);
    assert!(matches!(hessian_entries(&pt, &tol()), Err(Error::BranchMisdispatch(_))));
    assert!(matches!(third_derivative(&pt, &tol()), Err(Error::BranchMisdispatch(_))));
}

#[test]
fn entries_vanish_with_sin_theta1() {
    let mut rng = rng(34);
    for _ in 0..20 {
        let pr = random_params(&mut rng, 2..7, 2..5);
        let pt = degenerate_theta_point(&mut rng, &pr);
        if pt.thetas[1].cos().abs() < 1e-3 {
            continue;
        }
        let e = hessian_entries(&pt, &tol()).unwrap();
        let scale = 1.0 + e.b * e.b;
        assert!(e.a.abs() < 1e-12 * scale && e.c.abs() < 1e-12 * scale.sqrt(), "{e:?}");
    }
}

#[test]
fn ac_minus_b_squared() {
    let mut rng = rng(35);
    for _ in 0..200 {
        let pr = random_params(&mut rng, 2..7, 2..7);
        let pt = generic_point(&mut rng, &pr);
        let e = hessian_entries(&pt, &tol()).unwrap();
        let k1 = gradient_quad(&pt).k[0];
        let (p1, m, c2) = (pr.p() as f64 - 1.0, pr.mu_abs(), pt.thetas[1].cos());
        let want = -p1 * p1 * m * m / (k1 * k1 * c2 * c2);
        assert!(rel_err(e.a * e.c - e.b * e.b, want) < 1e-9);
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn entries_match_fd_in_primed_coordinates() {
    let mut rng = rng(36);
    let mut checked = 0;
    while checked < 100 {
        let pr = random_params(&mut rng, 2..5, 2..4);
        let pt = generic_point(&mut rng, &pr);
        let k = gradient_quad(&pt).k;
        // keep the primed chart tame for the difference quotient
        if k[0].abs() < 0.2 || pt.thetas[1].cos().abs() < 0.2 {
            continue;
        }
        checked += 1;
        let e = hessian_entries(&pt, &tol()).unwrap();
        let s = pt.thetas[1].tan();
        let [_, k2, k3, k4] = k;
        // Hessian in (th1', r2', th2') assembled from A..F and k1..k4
        let want = [
            [e.a * k2 * k2 - 2.0 * e.b * k2 + e.c, e.a * k2 * k3 - e.b * k3, e.a * k2 * k4 - e.b * k4],
            [e.a * k2 * k3 - e.b * k3, e.a * k3 * k3 + e.d, e.a * k3 * k4 + e.e],
            [e.a * k2 * k4 - e.b * k4, e.a * k3 * k4 + e.e, e.a * k4 * k4 + e.f],
        ];
        let h = 1e-4;
        for a in 0..3 {
            for b in 0..3 {
                let fd = fd_second_primed(&pt, s, a + 1, b + 1, h);
                assert!(
                    (fd - want[a][b]).abs() / (1.0 + want[a][b].abs()) < 1e-6,
                    "{a}{b}: fd {fd} closed {}",
                    want[a][b]
                );
            }
        }
        assert!((fd_second_primed(&pt, s, 0, 0, h) - e.a).abs() / (1.0 + e.a.abs()) < 1e-6);
        let bundle = hessian_bundle(&pt, &tol());
        for a in 0..3 {
            for b in 0..3 {
                assert!((bundle.h[a][b] - want[a][b]).abs() < 1e-9 * (1.0 + want[a][b].abs()));
                assert!((bundle.h[a][b] - bundle.h[b][a]).abs() <= 1e-12 * (1.0 + bundle.h[a][b].abs()));
            }
        }
    }
}

#[test]
fn theta1_prime_entry_closed_form() {
    let mut rng = rng(37);
    for _ in 0..100 {
        let pr = random_params(&mut rng, 2..7, 2..7);
        let pt = generic_point(&mut rng, &pr);
        let b = hessian_bundle(&pt, &tol());
        let k1 = gradient_quad(&pt).k[0];
        let (p1, m, a) = (pr.p() as f64 - 1.0, pr.mu_abs(), pt.z.r1);
        let want = 4.0 * p1 * m * m * m * a * pt.thetas[0].sin() * pt.thetas[1].cos() / (k1 * k1);
        assert!(rel_err(b.h[0][0], want) < 1e-9);
    }
}

fn branch_sampler(branch: Branch) -> fn(&mut rand_chacha::ChaCha8Rng, &DeformationParams) -> SingularPoint {
    match branch {
        Branch::K1Nonzero => generic_point,
        Branch::K1NonzeroDegenerateTheta => degenerate_theta_point,
        Branch::K1ZeroCosTheta2Nonzero => k1_zero_point,
        Branch::CosTheta2Zero => cos_theta2_zero_point,
    }
}

#[test]
fn closed_form_determinants_match_assembled_matrices() {
    let mut rng = rng(38);
    for branch in
        [Branch::K1Nonzero, Branch::K1NonzeroDegenerateTheta, Branch::K1ZeroCosTheta2Nonzero, Branch::CosTheta2Zero]
    {
        let sample = branch_sampler(branch);
        for p in 2..=4 {
            for q in 2..=3 {
                let mut done = 0;
                while done < 100 {
                    let pr = params(p, q, rng.random_range(-1.0f64..1.5).exp(), rng.random_range(0.0..TAU));
                    let pt = sample(&mut rng, &pr);
                    if branch_of(&pt, &tol()) != branch {
                        continue;
                    }
                    let b = hessian_bundle(&pt, &tol());
                    let Some(closed) = b.det_closed else { continue };
                    // the closed forms divide by the pivot gradient; keep it away from zero
                    let quad = gradient_quad(&pt);
                    let lead = if b.shear.swapped { quad.k_hat } else { quad.k };
                    if lead[b.pivot].abs() < 0.05 * quad.scale() {
                        continue;
                    }
                    done += 1;
                    assert!(
                        rel_err(closed, b.det_assembled) < 1e-8,
                        "{branch:?} p={p} q={q}: closed {closed} assembled {}",
                        b.det_assembled
                    );
                    assert_eq!(b.det_assembled, det3(&b.h));
                }
            }
        }
    }
}

#[test]
fn determinant_vanishes_on_the_cusp_candidates() {
    let mut rng = rng(39);
    for _ in 0..30 {
        let pr = random_params(&mut rng, 2..6, 2..5);
        let census = count_cusps(&pr);
        for (spec, circle) in singular_circles(&pr).iter().zip(&census.per_circle) {
            for &t in &circle.cusp_thetas {
                let pt = point_on_circle(spec, t).unwrap();
                assert!(phi(&pt).abs() < 1e-9);
                let b = hessian_bundle(&pt, &tol());
                assert!(b.det().abs() <= 1e-6 * (1.0 + b.h.iter().flatten().map(|x| x * x).sum::<f64>()).powf(1.5));
            }
        }
    }
}

#[test]
fn quadratic_case_determinant_has_three_zeros() {
    let pr = params(2, 2, 0.8, 0.3);
    let spec = singular_circles(&pr)[0];
    let det_at = |t: f64| det_h(&point_on_circle(&spec, t).unwrap(), &tol());
    let n = 4096;
    let mut zeros = 0;
    for i in 0..n {
        let (mut a, mut b) = (TAU * i as f64 / n as f64, TAU * (i + 1) as f64 / n as f64);
        let fa = det_at(a);
        if fa.signum() == det_at(b).signum() {
            continue;
        }
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if det_at(m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        // a pole of 1 / (k1^2 cos Theta2) also flips the sign; only count genuine zeros
        if det_at(0.5 * (a + b)).abs() < 1e-6 {
            zeros += 1;
        }
    }
    assert_eq!(zeros, 3);
}

#[test]
fn phi_examples() {
    let mut rng = rng(40);
    // p = q, abs(mu) = 1, Theta1 = Theta3 with kappa even
    for _ in 0..200 {
        let p = rng.random_range(2..7);
        let pr = params(p, p, 1.0, rng.random_range(0.0..TAU));
        let pt = random_point(&mut rng, &pr);
        if circular_distance(pt.thetas[0], pt.thetas[2]) < 1e-12 && pt.kappa % 2 == 0 {
            let want = 2.0 * (p as f64 - 1.0) * pt.z.r2 * pt.thetas[0].sin();
            assert!((phi(&pt) - want).abs() < 1e-12);
        }
    }
    // arg mu = 0, p = q: the point theta = 0 has th1 = th2 = 0
    for p in 2..7 {
        let pr = params(p, p, 1.0, 0.0);
        let pt = point_on_circle(&singular_circles(&pr)[0], 0.0).unwrap();
        assert_eq!(pt.kappa, 0);
        assert!(phi(&pt).abs() < 1e-15);
        let pt = point_on_circle(&singular_circles(&pr)[0], 0.7).unwrap();
        assert!(circular_distance(pt.thetas[0], pt.thetas[2]) < 1e-12);
        let want = 2.0 * (p as f64 - 1.0) * pt.z.r2 * pt.thetas[0].sin() * pt.kappa_sign();
        assert!((phi(&pt) - want).abs() < 1e-12);
    }
}

#[test]
fn phi_and_circle_function_share_zeros() {
    let mut rng = rng(41);
    for _ in 0..20 {
        let pr = random_params(&mut rng, 2..6, 2..5);
        let census = count_cusps(&pr);
        for (spec, circle) in singular_circles(&pr).iter().zip(&census.per_circle) {
            let phi_at = |t: f64| phi(&point_on_circle(spec, t).unwrap());
            let mut roots = Vec::new();
            let n = 4096;
            for i in 0..n {
                let (mut a, mut b) = (TAU * i as f64 / n as f64, TAU * (i + 1) as f64 / n as f64);
                let fa = phi_at(a);
                if fa.signum() == phi_at(b).signum() {
                    continue;
                }
                while b - a > 1e-13 {
                    let m = 0.5 * (a + b);
                    if phi_at(m).signum() == fa.signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                // (-1)^kappa jumps where a Theta wraps, which flips the sign without a zero
                if phi_at(0.5 * (a + b)).abs() < 1e-9 {
                    roots.push(0.5 * (a + b));
                }
            }
            let zeros: Vec<f64> = circle.cusp_thetas.iter().chain(&circle.multiple_thetas).copied().collect();
            for &z in &zeros {
                assert!(phi_at(z).abs() < 1e-9);
            }
            for r in roots {
                assert!(zeros.iter().any(|&z| circular_distance(z, r) < 1e-8));
                assert!(big_phi(&pr, spec.k, r).abs() < 1e-10);
            }
        }
    }
}

/// The nested operator chain with central differences (step `h`) on `R_hat`
/// restricted to the circle, evaluated through `eval_qr`.
fn fd_nested(pt: &SingularPoint, s: f64, h: f64) -> f64 {
    let pr = pt.params();
    let (p, q, alpha) = (pr.p() as f64, pr.q() as f64, pr.mu_arg());
    let lambda = (p - 1.0) / (q - 1.0);
    let (t1, t2) = (pt.z.th1, pt.z.th2);
    let f = |x: f64| {
        let v = eval_qr(pr, &PolarPoint::new(pt.z.r1, x, pt.z.r2, lambda * (x - t1) + t2));
        v.y - s * v.x
    };
    let c = |x: f64| ((p + 1.0) * x / 2.0).cos() * ((p - 1.0) * x / 2.0 + alpha).cos();
    let d = |g: &dyn Fn(f64) -> f64, x: f64| (g(x + h) - g(x - h)) / (2.0 * h);
    let g1 = |x: f64| c(x) * d(&f, x);
    let g2 = |x: f64| c(x) * d(&g1, x);
    d(&g2, t1)
}

#[test]
fn nested_operator_matches_finite_differences() {
    let mut rng = rng(42);
    for _ in 0..100 {
        let pr = random_params(&mut rng, 2..6, 2..5);
        let pt = generic_point(&mut rng, &pr);
        let s = pt.thetas[1].tan();
        let exact = nested_operator(&restricted_sheared(&pt, s), &weight(&pr), pt.z.th1);
        // Richardson extrapolation of the O(h^2) nested quotient
        let fd = (4.0 * fd_nested(&pt, s, 5e-4) - fd_nested(&pt, s, 1e-3)) / 3.0;
        assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(1.0), "exact {exact} fd {fd}");
    }
}

#[test]
fn restricted_function_agrees_with_evaluation() {
    let mut rng = rng(43);
    for _ in 0..50 {
        let pr = random_params(&mut rng, 2..8, 2..8);
        let pt = random_point(&mut rng, &pr);
        let s = 0.37;
        let f = restricted_sheared(&pt, s);
        let lambda = (pr.p() as f64 - 1.0) / (pr.q() as f64 - 1.0);
        for x in [pt.z.th1, pt.z.th1 + 0.3, pt.z.th1 - 1.1] {
            let v = eval_qr(&pr, &PolarPoint::new(pt.z.r1, x, pt.z.r2, lambda * (x - pt.z.th1) + pt.z.th2));
            assert!((f.eval(x) - (v.y - s * v.x)).abs() < 1e-12);
        }
    }
}

#[test]
fn nested_operator_is_linear() {
    let mut rng = rng(44);
    let pr = params(4, 3, 1.4, 0.9);
    let pt = random_point(&mut rng, &pr);
    let f = restricted_sheared(&pt, 0.5);
    let c = weight(&pr);
    let base = nested_operator(&f, &c, pt.z.th1);
    for lambda in [-3.0, 0.5, 7.25] {
        let scaled = nested_operator(&f.scale(lambda), &c, pt.z.th1);
        assert!((scaled - lambda * base).abs() < 1e-12 * (1.0 + base.abs() * lambda.abs()));
    }
}

#[test]
fn third_derivative_separates_simple_from_double_zeros() {
    // simple zeros on both sides of the transition near 3 sqrt(3) / 2, arg mu = 0.4
    for mu in [1.0, 1.5, 1.8, 1.9, 2.2, 2.598, 2.7, 4.0] {
        let pr = params(3, 2, mu, 0.4);
        let census = count_cusps(&pr);
        assert!(census.excellent);
        let spec = singular_circles(&pr)[0];
        for &t in &census.per_circle[0].cusp_thetas {
            let pt = point_on_circle(&spec, t).unwrap();
            if branch_of(&pt, &tol()) == Branch::K1Nonzero {
                let third = third_derivative(&pt, &tol()).unwrap();
                assert!(third.abs() > 1e-3, "mu {mu} theta {t}: {third}");
            }
        }
    }
    // the double zero at the transition: Phi = abs(mu) a + b is linear in abs(mu), so a
    // double zero sits where b' a - b a' = 0, at abs(mu) = -b / a
    let sweep = sweep_transitions(3, 2, 0.4, 0.5, 10.0, 40).unwrap();
    assert_eq!(sweep.len(), 1);
    let (p1, p2) = (params(3, 2, 1.0, 0.4), params(3, 2, 2.0, 0.4));
    let ab = |t: f64| {
        let a = big_phi(&p2, 0, t) - big_phi(&p1, 0, t);
        let da = big_phi_derivative(&p2, 0, t) - big_phi_derivative(&p1, 0, t);
        (a, big_phi(&p1, 0, t) - a, da, big_phi_derivative(&p1, 0, t) - da)
    };
    let g = |t: f64| {
        let (a, b, da, db) = ab(t);
        db * a - b * da
    };
    let n = 4096;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..n {
        let (mut lo, mut hi) = (TAU * i as f64 / n as f64, TAU * (i + 1) as f64 / n as f64);
        if g(lo).signum() == g(hi).signum() {
            continue;
        }
        let glo = g(lo);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        let (a, b, _, _) = ab(t);
        let mu = -b / a;
        if mu > 0.0 && best.is_none_or(|(m, _)| (m - sweep[0].mu_abs).abs() > (mu - sweep[0].mu_abs).abs()) {
            best = Some((mu, t));
        }
    }
    let (mu, t) = best.unwrap();
    assert!((mu - sweep[0].mu_abs).abs() < 1e-6, "{mu} vs {:?}", sweep[0]);
    let pr = params(3, 2, mu, 0.4);
    let pt = point_on_circle(&singular_circles(&pr)[0], t).unwrap();
    let third = third_derivative(&pt, &tol()).unwrap();
    assert!(third.abs() < 1e-6, "{third}");
    assert_eq!(classify(&pt, &tol()).kind, Kind::Degenerate);
}

#[test]
fn third_derivative_needs_a_candidate() {
    let mut rng = rng(45);
    let pr = params(3, 3, 0.7, 0.2);
    let pt = generic_point(&mut rng, &pr);
    assert!(phi(&pt).abs() > 1e-6);
    assert!(matches!(third_derivative(&pt, &tol()), Err(Error::NotCuspCandidate { .. })));
}

#[test]
fn classification_examples() {
    let pr = params(2, 2, 0.8, 0.3);
    let spec = singular_circles(&pr)[0];
    let census = count_cusps(&pr);
    assert_eq!(census.total, 3);
    for &t in &census.per_circle[0].cusp_thetas {
        let c = classify(&point_on_circle(&spec, t).unwrap(), &tol());
        assert_eq!(c.kind, Kind::Cusp, "{c:?}");
        assert_eq!(c.diagnostics.rank_m, 3);
        assert_eq!(c.diagnostics.hess_signature, (1, 1, 1));
        assert!(c.diagnostics.det_h.abs() <= c.diagnostics.det_tolerance);
    }
    for i in 0..64 {
        let t = TAU * (i as f64 + 0.5) / 64.0;
        if big_phi(&pr, 0, t).abs() > 1e-3 {
            let c = classify(&point_on_circle(&spec, t).unwrap(), &tol());
            assert_eq!(c.kind, Kind::IndefiniteFold);
            assert!(c.diagnostics.det_h.abs() > c.diagnostics.det_tolerance);
        }
    }
}

#[test]
fn beak_to_beak_point_is_degenerate() {
    let mu = 1.5 * 3f64.sqrt();
    let pr = params(3, 2, mu, 0.0);
    // T = dT/dtheta = 0 located by bisection on dT/dtheta near theta = pi
    let cp = brieskorn_core::CensusParams::new(3, 2);
    let dt = |t: f64| mu * cp.n * (cp.n * t).cos() + cp.c_const * cp.m * (cp.m * t).cos();
    let (mut a, mut b) = (PI - 0.5, PI);
    assert!(dt(a).signum() != dt(b - 1e-3).signum() || dt(b).abs() < 1e-12);
    while b - a > 1e-15 {
        let m = 0.5 * (a + b);
        if dt(m).abs() < 1e-15 || dt(m).signum() != dt(a).signum() {
            b = m;
        } else {
            a = m;
        }
    }
    let theta = 0.5 * (a + b);
    assert!((theta - PI).abs() < 1e-6);
    let c = classify(&point_on_circle(&singular_circles(&pr)[0], theta).unwrap(), &tol());
    assert_eq!(c.kind, Kind::Degenerate, "{c:?}");
    let c = classify(&point_on_circle(&singular_circles(&pr)[0], PI).unwrap(), &tol());
    assert_eq!(c.kind, Kind::Degenerate, "{c:?}");
}

#[test]
fn shear_perturbation_does_not_change_kinds() {
    let mut rng = rng(46);
    for _ in 0..20 {
        let pr = random_params(&mut rng, 2..6, 2..5);
        let census = count_cusps(&pr);
        for (spec, circle) in singular_circles(&pr).iter().zip(&census.per_circle) {
            let thetas = circle.cusp_thetas.iter().copied().chain((0..32).map(|i| TAU * i as f64 / 32.0 + 0.01));
            for t in thetas {
                let pt = point_on_circle(spec, t).unwrap();
                let a = classify(&pt, &tol());
                for eps in [1e-6, -1e-6] {
                    let b = classify_sheared(&pt, &tol(), eps);
                    assert_eq!(a.kind, b.kind, "{a:?} vs {b:?}");
                }
            }
        }
    }
}

#[test]
fn excellence_examples() {
    let pr = params(2, 2, 1.0, 0.0);
    let rep = is_excellent(&pr, 8192, &tol()).unwrap();
    assert!(rep.on_equal_exponent_boundary);
    assert!(rep.excellent, "{:?}", rep.violations);

    let pr = params(3, 2, 1.5 * 3f64.sqrt(), 0.0);
    let rep = is_excellent(&pr, 8192, &tol()).unwrap();
    assert!(!rep.excellent);
    assert!(rep.violations.iter().any(|v| circular_distance(v.theta, PI) < 1e-6));

    assert_eq!(is_excellent(&pr, 100, &tol()), Err(Error::TooFewSamples { got: 100, min: 8192 }));
}

#[test]
fn odd_parity_boundary_is_not_excellent() {
    // p = q = 3, abs(mu) = 1, c'_0 = pi: Phi vanishes on the whole circle C_0
    let pr = params(3, 3, 1.0, PI / 2.0);
    let rep = is_excellent(&pr, 8192, &tol()).unwrap();
    assert!(!rep.excellent);
    assert!(rep.violations.iter().any(|v| v.k == 0));
}

#[test]
fn generic_maps_are_excellent() {
    let mut rng = rng(47);
    let mut seen = 0;
    while seen < 6 {
        let pr = random_params(&mut rng, 2..6, 2..5);
        // rejection: stay away from transitions in abs(mu)
        let near = [0.97, 1.03].iter().any(|f| {
            count_cusps(&pr.with_mu_abs(pr.mu_abs() * f).unwrap()).zero_count() != count_cusps(&pr).zero_count()
        });
        if near {
            continue;
        }
        seen += 1;
        let rep = is_excellent(&pr, 8192, &tol()).unwrap();
        assert!(rep.excellent, "{pr:?}: {:?}", rep.violations);
        assert_eq!(rep.grid_counts.definite_fold, 0);
    }
}

#[test]
fn classifier_and_census_find_the_same_cusps() {
    let mut rng = rng(48);
    for (p, q) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 3), (2, 3), (3, 4)] {
        for _ in 0..3 {
            let pr = params(p, q, rng.random_range(-1.0f64..1.5).exp(), rng.random_range(0.0..TAU));
            let census = count_cusps(&pr);
            if !census.excellent {
                continue;
            }
            let by_classifier = cusps_by_classifier(&pr, 4096, &tol()).unwrap();
            for (circle, found) in census.per_circle.iter().zip(&by_classifier) {
                assert_eq!(circle.cusp_thetas.len(), found.len(), "{pr:?}");
                for (a, b) in circle.cusp_thetas.iter().zip(found) {
                    assert!(circular_distance(*a, *b) < 1e-8, "{pr:?}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn other_branches_classify_consistently() {
    let mut rng = rng(49);
    for branch in [Branch::K1NonzeroDegenerateTheta, Branch::K1ZeroCosTheta2Nonzero, Branch::CosTheta2Zero] {
        let sample = branch_sampler(branch);
        for _ in 0..100 {
            let pr = random_params(&mut rng, 2..6, 2..5);
            let pt = sample(&mut rng, &pr);
            let c = classify(&pt, &tol());
            // these points are folds unless phi vanishes there
            if phi(&pt).abs() > 1e-6 {
                assert_eq!(c.kind, Kind::IndefiniteFold, "{branch:?} {c:?}");
            }
            if branch == Branch::K1ZeroCosTheta2Nonzero && branch_of(&pt, &tol()) == branch {
                assert!(c.diagnostics.phi_prime.is_some());
            }
        }
    }
}

#[test]
fn hessians_are_symmetric() {
    let mut rng = rng(50);
    let pr = params(5, 4, 1.1, 2.0);
    for _ in 0..20 {
        let pt = random_point(&mut rng, &pr);
        let (hq, hr): (Mat4, Mat4) = hessians(&pr, &pt.z);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(hq[i][j], hq[j][i]);
                assert_eq!(hr[i][j], hr[j][i]);
            }
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn away_from_circle_zeros_points_are_indefinite_folds(
            p in 2u32..6, q in 2u32..5, log_mu in -1.5f64..1.5, arg in 0.0f64..TAU, theta in 0.0f64..TAU,
        ) {
            let pr = params(p, q, log_mu.exp(), arg);
            for spec in singular_circles(&pr) {
                let scale = pr.mu_abs() + 1.0;
                prop_assume!(big_phi(&pr, spec.k, theta).abs() > 1e-3 * scale);
                let c = classify(&point_on_circle(&spec, theta).unwrap(), &tol());
                prop_assert_eq!(c.kind, Kind::IndefiniteFold);
            }
        }
    }
}
