#![allow(dead_code)]

use std::f64::consts::{PI, TAU};
use std::ops::Range;

use brieskorn_core::angle::canonical;
use brieskorn_core::{point_on_circle, singular_circles, DeformationParams, SingularCircleSpec, SingularPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn params(p: u32, q: u32, mu_abs: f64, mu_arg: f64) -> DeformationParams {
    DeformationParams::new(p, q, mu_abs, mu_arg).unwrap()
}

/// `abs(mu)` log-uniform in `[e^-1, e^1.5]`, any argument.
pub fn random_params(rng: &mut impl Rng, p: Range<u32>, q: Range<u32>) -> DeformationParams {
    let (p, q) = (rng.random_range(p), rng.random_range(q));
    params(p, q, rng.random_range(-1.0f64..1.5).exp(), rng.random_range(0.0..TAU))
}

pub fn random_point(rng: &mut impl Rng, params: &DeformationParams) -> SingularPoint {
    let circles = singular_circles(params);
    let spec = circles[rng.random_range(0..circles.len())];
    point_on_circle(&spec, rng.random_range(0.0..TAU)).unwrap()
}

/// A circle parameter whose point has the given `th1`; `lap` picks one of the
/// `(q-1)/r` preimages.
pub fn theta_for_th1(spec: &SingularCircleSpec, th1: f64, lap: u32) -> f64 {
    let q = spec.params.q() as f64;
    let r = spec.r as f64;
    let laps = ((q - 1.0) / r).round() as u32;
    (canonical(th1 - spec.phase) + TAU * (lap % laps) as f64) * r / (q - 1.0)
}

pub fn point_with_th1(rng: &mut impl Rng, params: &DeformationParams, th1: f64) -> SingularPoint {
    let circles = singular_circles(params);
    let spec = circles[rng.random_range(0..circles.len())];
    let lap = rng.random_range(0..64);
    point_on_circle(&spec, theta_for_th1(&spec, canonical(th1), lap)).unwrap()
}

/// `sin Theta1 = 0`
pub fn degenerate_theta_point(rng: &mut impl Rng, params: &DeformationParams) -> SingularPoint {
    let p = params.p() as f64;
    let j = rng.random_range(0..params.p() + 1) as f64;
    point_with_th1(rng, params, 2.0 * PI * j / (p + 1.0))
}

/// `cos Theta1 = 0`, hence `k1 = 0`.
pub fn k1_zero_point(rng: &mut impl Rng, params: &DeformationParams) -> SingularPoint {
    let p = params.p() as f64;
    let j = rng.random_range(0..params.p() + 1) as f64;
    point_with_th1(rng, params, (PI + 2.0 * PI * j) / (p + 1.0))
}

/// `cos Theta2 = 0`.
pub fn cos_theta2_zero_point(rng: &mut impl Rng, params: &DeformationParams) -> SingularPoint {
    let p = params.p() as f64;
    let j = rng.random_range(0..params.p() - 1) as f64;
    point_with_th1(rng, params, (0.5 * PI + j * PI - params.mu_arg()) * 2.0 / (p - 1.0))
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}
