//! Fold / cusp classification of singular points.
//!
//! At a singular point `z0` the gradients of `Q` and `R` are parallel. After the
//! target shear `R_hat = R - s Q` (with `s = tan Theta2`) the gradient of `R_hat`
//! vanishes and the source coordinates are changed linearly so that `Q` becomes
//! the first coordinate. With `H` the Hessian of `R_hat` in the remaining three
//! coordinates and `M` the `4 x 3` block of second partials, a singular point is
//!
//! * a fold iff `rank H = 3` (definite or indefinite by the signature of `H`),
//! * a cusp iff `rank M = 3`, `rank H = 2` and a third derivative of `R_hat` along
//!   the kernel direction is nonzero.
//!
//! When `cos Theta2 = 0` the gradient of `Q` itself vanishes and the roles of
//! `Q` and `R` are exchanged without shearing.
//!
//! Two third-derivative tests are provided. [`third_derivative`] is the nested
//! operator `d/dth1 (c d/dth1 (c d/dth1 R_hat))` along the singular circle, valid
//! when `k1 != 0`. The frame test used in the other branches evaluates
//! `R_hat_444 - 3 Q_44 R_hat_14` in the eigenframe of `H`, where index 4 is the
//! kernel direction and index 1 the `Q` coordinate.

use alloc::vec::Vec;

use libm::{cos, fabs, pow, sin, tan};

use crate::angle::{canonical, circular_distance};
use crate::census::{count_cusps, CuspCensus};
use crate::linalg::{congruence, det3, frobenius, rank, signature, sym_eigen, Mat3};
use crate::locus::{gradient_quad, point_on_circle, singular_circles, GradientQuad, SingularPoint};
use crate::polar::{hessians, third_tensors, DeformationParams, Mat4, Tensor4};
use crate::trig::{nested_operator, TrigSum};
use crate::{Error, Result};

/// Zero-test bands. All are relative except `third`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `abs(k1)` counts as zero below `k1_rel * max abs(gradient entry)`.
    pub k1_rel: f64,
    /// `det H` counts as zero below `det_rel * frobenius(H)^{3/2}`.
    pub det_rel: f64,
    /// Absolute band for the third-derivative test.
    pub third: f64,
    /// Band for `abs(cos Theta2)` and `abs(sin Theta1)`.
    pub angle: f64,
    /// `phi` counts as zero below `phi_rel * (p - 1 + q - 1)`.
    pub phi_rel: f64,
    /// Relative singular-value / eigenvalue cutoff for ranks and signatures.
    pub rank_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { k1_rel: 1e-8, det_rel: 1e-8, third: 1e-8, angle: 1e-9, phi_rel: 1e-8, rank_rel: 1e-8 }
    }
}

impl Tolerances {
    /// Every band multiplied by `factor`.
    pub fn scaled(factor: f64) -> Self {
        let d = Self::default();
        Self {
            k1_rel: d.k1_rel * factor,
            det_rel: d.det_rel * factor,
            third: d.third * factor,
            angle: d.angle * factor,
            phi_rel: d.phi_rel * factor,
            rank_rel: d.rank_rel * factor,
        }
    }

    pub fn k1(&self, quad: &GradientQuad) -> f64 {
        self.k1_rel * quad.scale()
    }

    pub fn det(&self, h: &Mat3) -> f64 {
        self.det_rel * pow(frobenius(h), 1.5)
    }

    pub fn phi(&self, params: &DeformationParams) -> f64 {
        self.phi_rel * (params.p() as f64 + params.q() as f64 - 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `k1 != 0`, generic.
    K1Nonzero,
    /// `k1 != 0` but the `(th1', th1')` entry of the Hessian vanishes (`sin Theta1 = 0`).
    K1NonzeroDegenerateTheta,
    /// `k1 = 0` (so `cos Theta1 = 0`) with `cos Theta2 != 0`; pivot on `th1`.
    K1ZeroCosTheta2Nonzero,
    /// `cos Theta2 = 0`: `grad Q = 0`, work with `R` as the first target coordinate.
    CosTheta2Zero,
}

/// Dispatch order: `cos Theta2`, then `k1`, then `sin Theta1`.
pub fn branch_of(pt: &SingularPoint, tol: &Tolerances) -> Branch {
    let quad = gradient_quad(pt);
    if fabs(cos(pt.thetas[1])) < tol.angle {
        Branch::CosTheta2Zero
    } else if fabs(quad.k[0]) < tol.k1(&quad) {
        Branch::K1ZeroCosTheta2Nonzero
    } else if fabs(sin(pt.thetas[0])) < tol.angle {
        Branch::K1NonzeroDegenerateTheta
    } else {
        Branch::K1Nonzero
    }
}

/// Target shear `R_hat = R - value * Q`. With `swapped` set the first target
/// coordinate is `R` and `Q` is used unsheared (`value` is then 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shear {
    pub value: f64,
    pub swapped: bool,
}

pub fn shear_constant(pt: &SingularPoint, branch: Branch, tol: &Tolerances) -> Result<Shear> {
    let c2 = cos(pt.thetas[1]);
    match branch {
        Branch::CosTheta2Zero => Ok(Shear { value: 0.0, swapped: true }),
        _ if fabs(c2) < tol.angle => Err(Error::BranchMisdispatch("shear tan(Theta2) needs cos(Theta2) != 0")),
        _ => Ok(Shear { value: tan(pt.thetas[1]), swapped: false }),
    }
}

/// Closed-form second partials of `R_hat` in the coordinates where `Q = r1'`:
///
/// ```text
/// H_full = | A k1^2   B k1  0  0 |      rows/cols (r1', th1, r2, th2)
///          | B k1     C     0  0 |      restricted to the original variables
///          | 0        0     D  E |
///          | 0        0     E  F |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianEntries {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

pub fn hessian_entries(pt: &SingularPoint, tol: &Tolerances) -> Result<HessianEntries> {
    let quad = gradient_quad(pt);
    let [t1, t2, t3, _] = pt.thetas;
    let c2 = cos(t2);
    if fabs(c2) < tol.angle {
        return Err(Error::BranchMisdispatch("Hessian entries need cos(Theta2) != 0"));
    }
    let k1 = quad.k[0];
    if fabs(k1) < tol.k1(&quad) {
        return Err(Error::BranchMisdispatch("Hessian entries need k1 != 0"));
    }
    let params = pt.params();
    let (p, q, m) = (params.p() as f64, params.q() as f64, params.mu_abs());
    let (ra, rb) = (pt.z.r1, pt.z.r2);
    let sg = pt.kappa_sign();
    Ok(HessianEntries {
        a: p * (p - 1.0) * m * pow(ra, p - 2.0) * sin(t1) / (k1 * k1 * c2),
        b: (p - 1.0) * m * cos(t1) / (k1 * c2),
        c: -(p - 1.0) * m * ra * sin(t1) / c2,
        d: sg * q * (q - 1.0) * pow(rb, q - 2.0) * sin(t3) / c2,
        e: sg * (q - 1.0) * cos(t3) / c2,
        f: -sg * (q - 1.0) * rb * sin(t3) / c2,
    })
}

/// `phi = (-1)^kappa (p-1) B sin Theta3 + (q-1) abs(mu) A sin Theta1`
pub fn phi(pt: &SingularPoint) -> f64 {
    let params = pt.params();
    let (p, q) = (params.p() as f64, params.q() as f64);
    pt.kappa_sign() * (p - 1.0) * pt.z.r2 * sin(pt.thetas[2])
        + (q - 1.0) * params.mu_abs() * pt.z.r1 * sin(pt.thetas[0])
}

/// `phi' = (-1)^kappa (q-1) abs(mu) A sin Theta1 sin Theta3 - (p-1) B cos^2 Theta3`,
/// the second factor appearing in the `k1 = 0` branch.
pub fn phi_prime(pt: &SingularPoint) -> f64 {
    let params = pt.params();
    let (p, q) = (params.p() as f64, params.q() as f64);
    let c3 = cos(pt.thetas[2]);
    pt.kappa_sign() * (q - 1.0) * params.mu_abs() * pt.z.r1 * sin(pt.thetas[0]) * sin(pt.thetas[2])
        - (p - 1.0) * pt.z.r2 * c3 * c3
}

/// The matrices of the criterion at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianBundle {
    pub branch: Branch,
    pub shear: Shear,
    /// Source coordinate replaced by the first target coordinate.
    pub pivot: usize,
    /// The remaining three coordinates, in increasing order.
    pub others: [usize; 3],
    /// Closed-form entries; only available when `k1 != 0`.
    pub entries: Option<HessianEntries>,
    /// Hessian of `R_hat` in the three non-pivot primed coordinates.
    pub h: Mat3,
    /// All four primed rows against the three non-pivot columns.
    pub m: [[f64; 3]; 4],
    /// Branch closed form for `det H`; `None` when no closed form applies.
    pub det_closed: Option<f64>,
    pub det_assembled: f64,
}

impl HessianBundle {
    /// The determinant used for decisions: closed form when available.
    pub fn det(&self) -> f64 {
        self.det_closed.unwrap_or(self.det_assembled)
    }
}

struct Frame {
    bundle: HessianBundle,
    j: Mat4,
    h_lead: Mat4,
    h_other: Mat4,
    t_other: Tensor4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PivotChoice {
    /// The pivot the branch closed forms are written for.
    Branch,
    /// The largest gradient entry, which keeps `H` well conditioned near branch boundaries.
    Conditioned,
}

fn frame(pt: &SingularPoint, tol: &Tolerances, shear_offset: f64, choice: PivotChoice) -> Frame {
    let branch = branch_of(pt, tol);
    let quad = gradient_quad(pt);
    let params = pt.params();
    // shear_constant only fails off-branch, and the branch came from branch_of
    let mut shear = shear_constant(pt, branch, tol).unwrap_or(Shear { value: 0.0, swapped: true });
    shear.value += shear_offset;

    let (hq, hr) = hessians(params, &pt.z);
    let (tq, tr) = third_tensors(params, &pt.z);
    let (grad, h_lead, h_raw, t_lead, t_raw) =
        if shear.swapped { (quad.k_hat, hr, hq, tr, tq) } else { (quad.k, hq, hr, tq, tr) };

    let branch_pivot = match branch {
        Branch::K1Nonzero | Branch::K1NonzeroDegenerateTheta => 0,
        Branch::K1ZeroCosTheta2Nonzero => 1,
        Branch::CosTheta2Zero => {
            if fabs(grad[0]) >= tol.k1(&quad) {
                0
            } else {
                1
            }
        }
    };
    let pivot = match choice {
        PivotChoice::Branch => branch_pivot,
        PivotChoice::Conditioned => (0..4).fold(0, |best, i| if fabs(grad[i]) > fabs(grad[best]) { i } else { best }),
    };
    let others = match pivot {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    };

    // Lagrange multiplier of the residual gradient along the lead gradient; zero for the exact
    // shear, and it makes the decision independent of small errors in s
    let grad_raw = if shear.swapped { quad.k } else { quad.k_hat };
    let norm2: f64 = grad.iter().map(|g| g * g).sum();
    let residual: f64 = (0..4).map(|i| (grad_raw[i] - shear.value * grad[i]) * grad[i]).sum();
    let sigma = shear.value + if norm2 > 0.0 { residual / norm2 } else { 0.0 };

    let mut h_other = [[0.0; 4]; 4];
    let mut t_other = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            h_other[i][j] = h_raw[i][j] - sigma * h_lead[i][j];
            for k in 0..4 {
                t_other[i][j][k] = t_raw[i][j][k] - sigma * t_lead[i][j][k];
            }
        }
    }

    // x = J x' with x'_pivot = (lead function)
    let mut j = [[0.0; 4]; 4];
    for (i, row) in j.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for c in 0..4 {
        j[pivot][c] = if c == pivot { 1.0 / grad[pivot] } else { -grad[c] / grad[pivot] };
    }
    let g = congruence(&h_other, &j);
    let mut h = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 4];
    for (a, &oa) in others.iter().enumerate() {
        for (b, &ob) in others.iter().enumerate() {
            h[a][b] = g[oa][ob];
        }
    }
    for (r, row) in m.iter_mut().enumerate() {
        for (b, &ob) in others.iter().enumerate() {
            row[b] = g[r][ob];
        }
    }

    let ph = phi(pt);
    let (p, q, mu) = (params.p() as f64, params.q() as f64, params.mu_abs());
    let [t1, t2, _, _] = pt.thetas;
    let det_closed = if pivot != branch_pivot {
        None
    } else {
        match branch {
            Branch::K1Nonzero | Branch::K1NonzeroDegenerateTheta => {
                let k1 = quad.k[0];
                Some(-4.0 * (p - 1.0) * (q - 1.0) * mu * mu * ph / (k1 * k1 * cos(t2)))
            }
            Branch::K1ZeroCosTheta2Nonzero => {
                let k2 = quad.k[1];
                let r11 = p * (p - 1.0) * mu * pow(pt.z.r1, p - 2.0) * sin(t1) / cos(t2);
                Some(-4.0 * (q - 1.0) * mu * pt.z.r1 * sin(t1) * ph * r11 / (k2 * k2))
            }
            Branch::CosTheta2Zero if pivot == 0 => {
                let kh1 = quad.k_hat[0];
                Some(4.0 * (p - 1.0) * (q - 1.0) * mu * mu * sin(t2) * ph / (kh1 * kh1))
            }
            Branch::CosTheta2Zero => None,
        }
    };
    let entries = hessian_entries(pt, tol).ok().filter(|_| !shear.swapped && pivot == 0);
    let bundle = HessianBundle { branch, shear, pivot, others, entries, h, m, det_closed, det_assembled: det3(&h) };
    Frame { bundle, j, h_lead, h_other, t_other }
}

pub fn hessian_bundle(pt: &SingularPoint, tol: &Tolerances) -> HessianBundle {
    frame(pt, tol, 0.0, PivotChoice::Branch).bundle
}

/// Branch-appropriate closed form of `det H` (assembled determinant where none applies).
pub fn det_h(pt: &SingularPoint, tol: &Tolerances) -> f64 {
    hessian_bundle(pt, tol).det()
}

impl Frame {
    /// `R_hat_444 - 3 Q_44 R_hat_14` along the eigenvector of `H` with the
    /// smallest absolute eigenvalue.
    fn kernel_third(&self) -> f64 {
        let b = &self.bundle;
        let (vals, vecs) = sym_eigen(b.h);
        let col = (0..3).min_by(|&x, &y| fabs(vals[x]).total_cmp(&fabs(vals[y]))).unwrap_or(0);
        let mut w = [0.0; 4];
        for (a, &oa) in b.others.iter().enumerate() {
            w[oa] = vecs[a][col];
        }
        let v = mat_vec(&self.j, &w);
        let mut u1 = [0.0; 4];
        for (i, u) in u1.iter_mut().enumerate() {
            *u = self.j[i][b.pivot];
        }
        let mut t444 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    t444 += self.t_other[i][j][k] * v[i] * v[j] * v[k];
                }
            }
        }
        let q44 = quad_form(&self.h_lead, &v, &v);
        let r14 = quad_form(&self.h_other, &u1, &v);
        t444 - 3.0 * q44 * r14
    }
}

fn mat_vec(m: &Mat4, x: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    }
    out
}

fn quad_form(m: &Mat4, x: &[f64; 4], y: &[f64; 4]) -> f64 {
    (0..4).map(|i| x[i] * (0..4).map(|j| m[i][j] * y[j]).sum::<f64>()).sum()
}

/// `R - s Q` restricted to the singular circle through `pt`, as a function of `th1`,
/// where `th2 = (p-1)/(q-1) (th1 - th1(pt)) + th2(pt)`.
pub fn restricted_sheared(pt: &SingularPoint, s: f64) -> TrigSum {
    let params = pt.params();
    let (p, q, mu, alpha) = (params.p() as f64, params.q() as f64, params.mu_abs(), params.mu_arg());
    let (ra, rb) = (pt.z.r1, pt.z.r2);
    let lambda = (p - 1.0) / (q - 1.0);
    let shift = pt.z.th2 - lambda * pt.z.th1;
    // (amp, freq, phase) of each exponential term as a function of th1
    let parts = [
        (mu * pow(ra, p), p, alpha),
        (mu * ra, -1.0, alpha),
        (pow(rb, q), q * lambda, q * shift),
        (rb, -lambda, -shift),
    ];
    parts.iter().fold(TrigSum::zero(), |acc, &(amp, freq, phase)| {
        acc + TrigSum::sine(amp, freq, phase) - TrigSum::cosine(s * amp, freq, phase)
    })
}

/// `c(th1) = cos((p+1) th1 / 2) cos((p-1) th1 / 2 + arg mu)`
pub fn weight(params: &DeformationParams) -> TrigSum {
    let p = params.p() as f64;
    let alpha = params.mu_arg();
    TrigSum::cosine(0.5, p, alpha) + TrigSum::cosine(0.5, 1.0, -alpha)
}

/// `(32 abs(mu)^2 / k1^2) ((q-1)/(p-1))^3 d/dth1 (c d/dth1 (c d/dth1 R_hat))` at `pt`.
///
/// Only meaningful where `phi = 0` and `k1 != 0`.
pub fn third_derivative(pt: &SingularPoint, tol: &Tolerances) -> Result<f64> {
    third_with_offset(pt, tol, 0.0)
}

fn third_with_offset(pt: &SingularPoint, tol: &Tolerances, shear_offset: f64) -> Result<f64> {
    match branch_of(pt, tol) {
        Branch::K1Nonzero | Branch::K1NonzeroDegenerateTheta => {}
        _ => return Err(Error::BranchMisdispatch("nested third-derivative test needs k1 != 0")),
    }
    let ph = phi(pt);
    if fabs(ph) > tol.phi(pt.params()) {
        return Err(Error::NotCuspCandidate { phi: ph });
    }
    Ok(nested_third(pt, tan(pt.thetas[1]) + shear_offset))
}

fn nested_third(pt: &SingularPoint, s: f64) -> f64 {
    let params = pt.params();
    let (p, q, mu) = (params.p() as f64, params.q() as f64, params.mu_abs());
    let k1 = gradient_quad(pt).k[0];
    let f = restricted_sheared(pt, s);
    let c = weight(params);
    let ratio = (q - 1.0) / (p - 1.0);
    32.0 * mu * mu / (k1 * k1) * ratio * ratio * ratio * nested_operator(&f, &c, pt.z.th1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    IndefiniteFold,
    DefiniteFold,
    Cusp,
    Degenerate,
}

impl Kind {
    pub fn is_fold(self) -> bool {
        matches!(self, Kind::IndefiniteFold | Kind::DefiniteFold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub phi: f64,
    /// Determinant of `H` in the best-conditioned frame; used for the decision.
    pub det_h: f64,
    pub det_tolerance: f64,
    /// Branch closed form (same zero set and sign as `det_h`).
    pub det_closed: f64,
    /// Source coordinate eliminated in the decision frame.
    pub pivot: usize,
    /// The third derivative used for the decision, when one was needed.
    pub third: Option<f64>,
    /// Frame test value, computed at every point.
    pub third_frame: f64,
    /// `(positive, negative, zero)` eigenvalue counts of `H`.
    pub hess_signature: (usize, usize, usize),
    pub rank_m: usize,
    pub branch: Branch,
    /// Only in the `k1 = 0` branch.
    pub phi_prime: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: Kind,
    pub diagnostics: Diagnostics,
}

pub fn classify(pt: &SingularPoint, tol: &Tolerances) -> Classification {
    classify_sheared(pt, tol, 0.0)
}

/// [`classify`] with `R_hat` replaced by `R_hat - shear_offset * Q`. The decision
/// must not depend on `shear_offset`; only diagnostics move.
pub fn classify_sheared(pt: &SingularPoint, tol: &Tolerances, shear_offset: f64) -> Classification {
    let fr = frame(pt, tol, shear_offset, PivotChoice::Conditioned);
    let b = &fr.bundle;
    let det = b.det_assembled;
    let det_tolerance = tol.det(&b.h);
    let (eig, _) = sym_eigen(b.h);
    let hess_signature = signature(&eig, tol.rank_rel);
    let rank_m = rank(&b.m, tol.rank_rel);
    let ph = phi(pt);
    let third_frame = fr.kernel_third();

    let (kind, third) = if fabs(det) > det_tolerance && hess_signature.2 == 0 {
        let definite = hess_signature.0 == 3 || hess_signature.1 == 3;
        (if definite { Kind::DefiniteFold } else { Kind::IndefiniteFold }, None)
    } else {
        let third = match b.branch {
            Branch::K1Nonzero if fabs(ph) <= tol.phi(pt.params()) => {
                Some(nested_third(pt, tan(pt.thetas[1]) + shear_offset))
            }
            Branch::K1Nonzero => None,
            _ => Some(third_frame),
        };
        let cusp = rank_m == 3 && hess_signature.2 == 1 && third.is_some_and(|t| fabs(t) > tol.third);
        (if cusp { Kind::Cusp } else { Kind::Degenerate }, third)
    };

    let phi_prime = (b.branch == Branch::K1ZeroCosTheta2Nonzero).then(|| phi_prime(pt));
    Classification {
        kind,
        diagnostics: Diagnostics {
            phi: ph,
            det_h: det,
            det_tolerance,
            det_closed: det_h(pt, tol),
            pivot: b.pivot,
            third,
            third_frame,
            hess_signature,
            rank_m,
            branch: b.branch,
            phi_prime,
        },
    }
}

/// Minimum number of samples per circle for [`is_excellent`].
pub const MIN_EXCELLENCE_SAMPLES: usize = 2 * 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub k: u32,
    pub theta: f64,
    pub kind: Kind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KindCounts {
    pub indefinite_fold: usize,
    pub definite_fold: usize,
    pub cusp: usize,
    pub degenerate: usize,
}

impl KindCounts {
    pub fn add(&mut self, kind: Kind) {
        match kind {
            Kind::IndefiniteFold => self.indefinite_fold += 1,
            Kind::DefiniteFold => self.definite_fold += 1,
            Kind::Cusp => self.cusp += 1,
            Kind::Degenerate => self.degenerate += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcellenceReport {
    pub excellent: bool,
    /// Classifications of the uniform grid points.
    pub grid_counts: KindCounts,
    /// Degenerate or definite-fold points, from the grid and from the located cusp candidates.
    pub violations: Vec<Violation>,
    /// The trigonometric census run alongside the sampling.
    pub census: CuspCensus,
    /// `p = q`, `abs(mu) = 1` and `sin c'_k = 0` on some circle.
    pub on_equal_exponent_boundary: bool,
}

/// Samples every circle on `samples` uniform points, adds the zeros of the circle
/// function located by the census, and classifies all of them.
pub fn is_excellent(params: &DeformationParams, samples: usize, tol: &Tolerances) -> Result<ExcellenceReport> {
    if samples < MIN_EXCELLENCE_SAMPLES {
        return Err(Error::TooFewSamples { got: samples, min: MIN_EXCELLENCE_SAMPLES });
    }
    let census = count_cusps(params);
    let mut grid_counts = KindCounts::default();
    let mut violations = Vec::new();
    let step = core::f64::consts::TAU / samples as f64;
    for spec in singular_circles(params) {
        let circle = &census.per_circle[spec.k as usize];
        let candidates = circle.cusp_thetas.iter().chain(circle.multiple_thetas.iter());
        let grid = (0..samples).map(|i| (i as f64 * step, true));
        for (theta, on_grid) in grid.chain(candidates.map(|&t| (t, false))) {
            let pt = point_on_circle(&spec, theta)?;
            let kind = classify(&pt, tol).kind;
            if on_grid {
                grid_counts.add(kind);
            }
            if matches!(kind, Kind::Degenerate | Kind::DefiniteFold) {
                violations.push(Violation { k: spec.k, theta: pt.theta, kind });
            }
        }
        for &theta in &circle.multiple_thetas {
            if !violations.iter().any(|v| v.k == spec.k && circular_distance(v.theta, theta) < 1e-9) {
                violations.push(Violation { k: spec.k, theta: canonical(theta), kind: Kind::Degenerate });
            }
        }
        if circle.identically_zero && !violations.iter().any(|v| v.k == spec.k) {
            violations.push(Violation { k: spec.k, theta: 0.0, kind: Kind::Degenerate });
        }
    }
    let on_equal_exponent_boundary = params.p() == params.q()
        && fabs(params.mu_abs() - 1.0) < 1e-12
        && singular_circles(params).iter().any(|s| fabs(sin(0.5 * (params.p() as f64 + 1.0) * s.phase)) < 1e-12);
    Ok(ExcellenceReport {
        excellent: violations.is_empty() && census.excellent,
        grid_counts,
        violations,
        census,
        on_equal_exponent_boundary,
    })
}

/// Cusps found without the circle function: sign changes of `phi` along each
/// circle are refined by bisection and kept where [`classify`] says `Cusp`.
pub fn cusps_by_classifier(params: &DeformationParams, samples: usize, tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    if samples < 16 {
        return Err(Error::TooFewSamples { got: samples, min: 16 });
    }
    let step = core::f64::consts::TAU / samples as f64;
    let mut out = Vec::new();
    for spec in singular_circles(params) {
        let phi_at = |t: f64| point_on_circle(&spec, t).map(|pt| phi(&pt));
        let mut roots: Vec<f64> = Vec::new();
        let mut lo = 0.0;
        let mut f_lo = phi_at(lo)?;
        for i in 1..=samples {
            let hi = i as f64 * step;
            let f_hi = phi_at(hi)?;
            if f_lo == 0.0 {
                roots.push(lo);
            } else if f_lo * f_hi < 0.0 {
                let (mut a, mut b, mut fa) = (lo, hi, f_lo);
                while b - a > 1e-14 {
                    let mid = 0.5 * (a + b);
                    let fm = phi_at(mid)?;
                    if fm == 0.0 {
                        a = mid;
                        b = mid;
                        break;
                    }
                    if (fa < 0.0) == (fm < 0.0) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            lo = hi;
            f_lo = f_hi;
        }
        let mut cusps: Vec<f64> = Vec::new();
        for theta in roots {
            let pt = point_on_circle(&spec, theta)?;
            if classify(&pt, tol).kind == Kind::Cusp && !cusps.iter().any(|&c| circular_distance(c, pt.theta) < 1e-10) {
                cusps.push(pt.theta);
            }
        }
        cusps.sort_by(f64::total_cmp);
        out.push(cusps);
    }
    Ok(out)
}
