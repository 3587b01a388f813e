//! The singular set of `P`.
//!
//! Singular points satisfy `p |u|^{p-1} = q |v|^{q-1} = 1` together with
//! `(p-1)/2 arg u + arg mu = (q-1)/2 arg v + kappa pi` for an integer `kappa`.
//! They form `r = gcd(p-1, q-1)` circles `C_k` on the torus `|u| = A, |v| = B`:
//!
//! ```text
//! (u, v) = (A e^{i((q-1) theta / r + c_k)}, B e^{i (p-1) theta / r}),
//! c_k = (2 pi k - 2 arg mu) / (p - 1).
//! ```

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, fabs, pow, round, sin};
use num_complex::Complex64;

use crate::angle::canonical;
use crate::linalg::singular_values;
use crate::polar::{gradients, DeformationParams, PolarPoint};
use crate::{Error, Result};

/// Residual allowed in the argument relation when building a point on a circle.
pub const ARGUMENT_RELATION_TOL: f64 = 1e-9;

/// Threshold on `abs(cos Theta2)` below which the gradient of `Q` vanishes.
pub const COS_THETA2_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularCircleSpec {
    pub params: DeformationParams,
    /// Circle index in `0..r`.
    pub k: u32,
    /// `gcd(p-1, q-1)`.
    pub r: u32,
    /// `A = p^{-1/(p-1)}`.
    pub radius_u: f64,
    /// `B = q^{-1/(q-1)}`.
    pub radius_v: f64,
    /// `c_k`, not reduced modulo `2 pi`.
    pub phase: f64,
}

/// Torus radii `(A, B)`.
pub fn torus_radii(p: u32, q: u32) -> (f64, f64) {
    (pow(p as f64, -1.0 / (p as f64 - 1.0)), pow(q as f64, -1.0 / (q as f64 - 1.0)))
}

/// All `r` singular circles, indexed `0..r`.
pub fn singular_circles(params: &DeformationParams) -> Vec<SingularCircleSpec> {
    let r = params.circle_count();
    let (a, b) = torus_radii(params.p(), params.q());
    let p1 = params.p() as f64 - 1.0;
    (0..r)
        .map(|k| SingularCircleSpec {
            params: *params,
            k,
            r,
            radius_u: a,
            radius_v: b,
            phase: (2.0 * PI * k as f64 - 2.0 * params.mu_arg()) / p1,
        })
        .collect()
}

/// A point of `C_k` together with the angles `Theta1..Theta4` and `kappa`.
///
/// ```text
/// Theta1 = (p+1)/2 th1,  Theta2 = (p-1)/2 th1 + arg mu,
/// Theta3 = (q+1)/2 th2,  Theta4 = (q-1)/2 th2,
/// ```
///
/// computed from the canonical representatives `th1, th2` in `[0, 2 pi)`. The
/// half-integer multiples make the representative matter; `kappa` is taken from
/// the same representatives so all relations stay consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub spec: SingularCircleSpec,
    /// Circle parameter in `[0, 2 pi)`.
    pub theta: f64,
    pub z: PolarPoint,
    pub thetas: [f64; 4],
    pub kappa: i64,
}

impl SingularPoint {
    pub fn params(&self) -> &DeformationParams {
        &self.spec.params
    }

    /// `(-1)^kappa`
    pub fn kappa_sign(&self) -> f64 {
        if self.kappa.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

pub fn point_on_circle(spec: &SingularCircleSpec, theta: f64) -> Result<SingularPoint> {
    let params = &spec.params;
    let (p, q, r) = (params.p() as f64, params.q() as f64, spec.r as f64);
    let theta = canonical(theta);
    let th1 = canonical((q - 1.0) * theta / r + spec.phase);
    let th2 = canonical((p - 1.0) * theta / r);
    let z = PolarPoint::new(spec.radius_u, th1, spec.radius_v, th2);
    let kappa = nearest_kappa(params, th1, th2)?;
    let thetas =
        [0.5 * (p + 1.0) * th1, 0.5 * (p - 1.0) * th1 + params.mu_arg(), 0.5 * (q + 1.0) * th2, 0.5 * (q - 1.0) * th2];
    Ok(SingularPoint { spec: *spec, theta, z, thetas, kappa })
}

/// `(p-1)/2 th1 + arg mu - (q-1)/2 th2`
pub fn argument_residual(params: &DeformationParams, th1: f64, th2: f64) -> f64 {
    0.5 * (params.p() as f64 - 1.0) * th1 + params.mu_arg() - 0.5 * (params.q() as f64 - 1.0) * th2
}

fn nearest_kappa(params: &DeformationParams, th1: f64, th2: f64) -> Result<i64> {
    let res = argument_residual(params, th1, th2);
    let kappa = round(res / PI);
    let off = fabs(res - kappa * PI);
    if off > ARGUMENT_RELATION_TOL {
        return Err(Error::InconsistentSingularPoint { residual: off });
    }
    Ok(kappa as i64)
}

/// Angular distance in `th1` from a point of the torus `|u| = A, |v| = B` to the
/// nearest singular circle.
pub fn torus_distance_to_locus(params: &DeformationParams, th1: f64, th2: f64) -> f64 {
    let res = argument_residual(params, th1, th2);
    let off = fabs(res - round(res / PI) * PI);
    off / (0.5 * (params.p() as f64 - 1.0))
}

/// Smallest singular value of the `2 x 4` Jacobian of `(Q, R)` in polar coordinates.
pub fn jacobian_min_singular_value(params: &DeformationParams, z: &PolarPoint) -> f64 {
    let (gq, gr) = gradients(params, z);
    let mut jt = [[0.0; 2]; 4];
    for i in 0..4 {
        jt[i] = [gq[i], gr[i]];
    }
    singular_values(&jt)[1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActiveGradient {
    /// `grad Q` is nonzero and drives the coordinate change.
    Q,
    /// `cos Theta2 = 0`: `grad Q` vanishes and `grad R` takes its place.
    R,
}

/// Gradients of `Q` (`k1..k4`) and `R` (`k_hat1..k_hat4`) at a singular point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientQuad {
    pub k: [f64; 4],
    pub k_hat: [f64; 4],
    pub active: ActiveGradient,
}

impl GradientQuad {
    /// Largest absolute entry over both quads.
    pub fn scale(&self) -> f64 {
        self.k.iter().chain(self.k_hat.iter()).fold(0.0, |m, &x| m.max(fabs(x)))
    }
}

pub fn gradient_quad(pt: &SingularPoint) -> GradientQuad {
    let m = pt.params().mu_abs();
    let (a, b) = (pt.z.r1, pt.z.r2);
    let [t1, t2, t3, t4] = pt.thetas;
    let k = [
        2.0 * m * cos(t1) * cos(t2),
        -2.0 * m * a * sin(t1) * cos(t2),
        2.0 * cos(t3) * cos(t4),
        -2.0 * b * sin(t3) * cos(t4),
    ];
    let k_hat = [
        2.0 * m * cos(t1) * sin(t2),
        -2.0 * m * a * sin(t1) * sin(t2),
        2.0 * cos(t3) * sin(t4),
        -2.0 * b * sin(t3) * sin(t4),
    ];
    let active = if fabs(cos(t2)) < COS_THETA2_TOL { ActiveGradient::R } else { ActiveGradient::Q };
    GradientQuad { k, k_hat, active }
}

/// A complex number in polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarComplex {
    pub abs: f64,
    pub arg: f64,
}

impl PolarComplex {
    pub fn new(abs: f64, arg: f64) -> Self {
        Self { abs, arg }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.abs, self.arg)
    }
}

/// The linear deformation `f_t = z^p + w^q + a t^{(p-1)q} conj(z) + b t^{p(q-1)} conj(w)`.
///
/// With `c1(t) = c1 t^q` and `c2(t) = c2 t^p` every member with `t > 0` reduces to
/// the same `P(u, v; mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationPath {
    pub a: Complex64,
    pub b: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub p: u32,
    pub q: u32,
}

impl DeformationPath {
    /// `(A(t), B(t))`
    pub fn coefficients_at(&self, t: f64) -> (Complex64, Complex64) {
        let (p, q) = (self.p as f64, self.q as f64);
        (self.a * pow(t, (p - 1.0) * q), self.b * pow(t, p * (q - 1.0)))
    }

    /// `(c1(t), c2(t))`
    pub fn scalings_at(&self, t: f64) -> (Complex64, Complex64) {
        (self.c1 * pow(t, self.q as f64), self.c2 * pow(t, self.p as f64))
    }

    /// `A(t) conj(c1(t)) / (B(t) conj(c2(t)))`; independent of `t > 0`.
    pub fn mu_at(&self, t: f64) -> Complex64 {
        let (at, bt) = self.coefficients_at(t);
        let (c1, c2) = self.scalings_at(t);
        at * c1.conj() / (bt * c2.conj())
    }
}

/// Result of reducing `z^p + w^q + a conj(z) + b conj(w)` to `b conj(c2) P(u, v; mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    pub params: DeformationParams,
    pub c1: PolarComplex,
    pub c2: PolarComplex,
    pub path: DeformationPath,
}

/// Principal-branch reduction, see [`mu_from_coefficients_on_branch`].
pub fn mu_from_coefficients(a: PolarComplex, b: PolarComplex, p: u32, q: u32) -> Result<Reduction> {
    mu_from_coefficients_on_branch(a, b, p, q, 0, 0)
}

/// Solves `c1^p = a conj(c1)` and `c2^q = b conj(c2)` with
/// `arg c1 = (arg a + 2 pi j1) / (p + 1)` and `arg c2 = (arg b + 2 pi j2) / (q + 1)`,
/// then sets `mu = a conj(c1) / (b conj(c2))`.
pub fn mu_from_coefficients_on_branch(
    a: PolarComplex,
    b: PolarComplex,
    p: u32,
    q: u32,
    j1: u32,
    j2: u32,
) -> Result<Reduction> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidParams("exponents p and q must be at least 2"));
    }
    if !(a.abs > 0.0 && b.abs > 0.0) {
        return Err(Error::ZeroCoefficient);
    }
    let (pf, qf) = (p as f64, q as f64);
    let c1 = PolarComplex::new(pow(a.abs, 1.0 / (pf - 1.0)), (a.arg + 2.0 * PI * j1 as f64) / (pf + 1.0));
    let c2 = PolarComplex::new(pow(b.abs, 1.0 / (qf - 1.0)), (b.arg + 2.0 * PI * j2 as f64) / (qf + 1.0));
    let mu_abs = a.abs * c1.abs / (b.abs * c2.abs);
    let mu_arg = a.arg - c1.arg - b.arg + c2.arg;
    let params = DeformationParams::new(p, q, mu_abs, mu_arg)?;
    let path = DeformationPath { a: a.to_complex(), b: b.to_complex(), c1: c1.to_complex(), c2: c2.to_complex(), p, q };
    Ok(Reduction { params, c1, c2, path })
}
