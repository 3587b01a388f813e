//! Cusp counting along the singular circles.
//!
//! Along `C_k` the image `P_k(theta)` has derivative
//! `dP_k/dtheta = -2 e^{i (p-1)(q-1) theta / (2r)} Phi(theta)` with the real function
//!
//! ```text
//! Phi(theta) = (-1)^k abs(mu) (q-1)/r A sin(n theta + c'_k) + (p-1)/r B sin(m theta),
//! m = (p-1)(q+1)/(2r),  n = (p+1)(q-1)/(2r),  c'_k = (p+1)/2 c_k,
//! ```
//!
//! so the cusps on `C_k` are the zeros of `Phi`, and the map is excellent exactly when
//! all of them are simple. `Phi = (q-1) A / r * T` with
//! `T(theta) = (-1)^k abs(mu) sin(n theta + c'_k) + C sin(m theta)` and
//! `C = (p-1) B / ((q-1) A)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use libm::{ceil, cos, exp, fabs, log, sin};
use num_complex::Complex64;

use crate::angle::{canonical, circular_distance};
use crate::locus::{singular_circles, torus_radii, PolarComplex, SingularCircleSpec};
use crate::polar::{eval_qr, DeformationParams, PlanePoint};
use crate::{Error, Result};

/// Constants of the circle function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusParams {
    pub r: u32,
    pub m: f64,
    pub n: f64,
    /// `C = (p-1) B / ((q-1) A)`.
    pub c_const: f64,
    pub radius_u: f64,
    pub radius_v: f64,
}

impl CensusParams {
    pub fn new(p: u32, q: u32) -> Self {
        let r = crate::polar::gcd(p - 1, q - 1);
        let (a, b) = torus_radii(p, q);
        let (pf, qf, rf) = (p as f64, q as f64, r as f64);
        Self {
            r,
            m: (pf - 1.0) * (qf + 1.0) / (2.0 * rf),
            n: (pf + 1.0) * (qf - 1.0) / (2.0 * rf),
            c_const: (pf - 1.0) * b / ((qf - 1.0) * a),
            radius_u: a,
            radius_v: b,
        }
    }

    /// `c'_k = (p+1)/2 c_k`
    pub fn c_prime(params: &DeformationParams, k: u32) -> f64 {
        let p = params.p() as f64;
        0.5 * (p + 1.0) * (2.0 * PI * k as f64 - 2.0 * params.mu_arg()) / (p - 1.0)
    }
}

fn circle_sign(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `d^order Phi / d theta^order`, written with `d/dx sin(wx + b) = w sin(wx + b + pi/2)`.
fn phi_derivative(params: &DeformationParams, cp: &CensusParams, k: u32, theta: f64, order: u32) -> f64 {
    let (q, p, r) = (params.q() as f64, params.p() as f64, cp.r as f64);
    let shift = order as f64 * FRAC_PI_2;
    let wn = libm::pow(cp.n, order as f64);
    let wm = libm::pow(cp.m, order as f64);
    circle_sign(k) * params.mu_abs() * (q - 1.0) / r
        * cp.radius_u
        * wn
        * sin(cp.n * theta + CensusParams::c_prime(params, k) + shift)
        + (p - 1.0) / r * cp.radius_v * wm * sin(cp.m * theta + shift)
}

pub fn big_phi(params: &DeformationParams, k: u32, theta: f64) -> f64 {
    phi_derivative(params, &CensusParams::new(params.p(), params.q()), k, theta, 0)
}

pub fn big_phi_derivative(params: &DeformationParams, k: u32, theta: f64) -> f64 {
    phi_derivative(params, &CensusParams::new(params.p(), params.q()), k, theta, 1)
}

/// `P_k(theta)`, the image of the point of `C_k` at parameter `theta`.
pub fn critical_value(spec: &SingularCircleSpec, theta: f64) -> PlanePoint {
    let params = &spec.params;
    let (p, q, r) = (params.p() as f64, params.q() as f64, spec.r as f64);
    let z = crate::polar::PolarPoint::new(
        spec.radius_u,
        (q - 1.0) * theta / r + spec.phase,
        spec.radius_v,
        (p - 1.0) * theta / r,
    );
    eval_qr(params, &z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleCensus {
    pub k: u32,
    /// Simple zeros of `Phi`, sorted, in `[0, 2 pi)`.
    pub cusp_thetas: Vec<f64>,
    /// Zeros where `abs(Phi')` falls under the multiplicity band.
    pub multiple_thetas: Vec<f64>,
    /// `Phi` vanishes on the whole circle.
    pub identically_zero: bool,
}

impl CircleCensus {
    /// All located zeros, simple or not.
    pub fn zero_count(&self) -> usize {
        self.cusp_thetas.len() + self.multiple_thetas.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuspCensus {
    pub per_circle: Vec<CircleCensus>,
    /// Number of simple zeros over all circles.
    pub total: usize,
    /// `(min, max)` of `(p+1)(q-1)` and `(p-1)(q+1)`.
    pub bounds: (usize, usize),
    /// Every zero simple and no circle identically zero.
    pub excellent: bool,
}

impl CuspCensus {
    pub fn zero_count(&self) -> usize {
        self.per_circle.iter().map(CircleCensus::zero_count).sum()
    }

    pub fn within_bounds(&self) -> bool {
        self.bounds.0 <= self.total && self.total <= self.bounds.1
    }
}

/// Default grid factor: cells per unit of `ceil(m + n)`.
pub const GRID_FACTOR: usize = 64;

/// Bisection target for zeros of `Phi` in `theta`.
pub const ROOT_TOL: f64 = 1e-12;

/// Chains of multiple zeros with gaps below this merge into one, and simple
/// zeros this close to a merged zero are absorbed. Near a triple zero the
/// flagged roots spread over about `sqrt(MULTIPLICITY_REL)`.
pub const MULTIPLE_CLUSTER: f64 = 1e-3;

/// Relative band for multiple zeros: `abs(T') < 1e-7 (abs(mu) n + C m)`.
pub const MULTIPLICITY_REL: f64 = 1e-7;

pub fn count_cusps(params: &DeformationParams) -> CuspCensus {
    count_cusps_with(params, GRID_FACTOR)
}

pub fn count_cusps_with(params: &DeformationParams, grid_factor: usize) -> CuspCensus {
    let cp = CensusParams::new(params.p(), params.q());
    let cells = (grid_factor.max(1) * ceil(cp.m + cp.n) as usize).max(64);
    let per_circle: Vec<CircleCensus> = (0..cp.r).map(|k| circle_census(params, &cp, k, cells)).collect();
    let total = per_circle.iter().map(|c| c.cusp_thetas.len()).sum();
    let (p, q) = (params.p() as usize, params.q() as usize);
    let (x, y) = ((p + 1) * (q - 1), (p - 1) * (q + 1));
    let excellent = per_circle.iter().all(|c| c.multiple_thetas.is_empty() && !c.identically_zero);
    CuspCensus { per_circle, total, bounds: (x.min(y), x.max(y)), excellent }
}

/// Highest derivative order whose sign changes are trusted without further splitting.
const MAX_SPLIT_ORDER: u32 = 3;

struct CircleFn<'a> {
    params: &'a DeformationParams,
    cp: CensusParams,
    k: u32,
}

impl CircleFn<'_> {
    fn eval(&self, theta: f64, order: u32) -> f64 {
        phi_derivative(self.params, &self.cp, self.k, theta, order)
    }

    /// Scale of `Phi`, `(q-1) A / r (abs(mu) + C)`.
    fn scale(&self) -> f64 {
        (self.params.q() as f64 - 1.0) * self.cp.radius_u / self.cp.r as f64 * (self.params.mu_abs() + self.cp.c_const)
    }

    /// Band on `abs(Phi')` below which a zero counts as multiple.
    fn slope_band(&self) -> f64 {
        let t_scale = self.params.mu_abs() * self.cp.n + self.cp.c_const * self.cp.m;
        MULTIPLICITY_REL * t_scale * (self.params.q() as f64 - 1.0) * self.cp.radius_u / self.cp.r as f64
    }

    fn bisect(&self, order: u32, mut a: f64, mut b: f64, tol: f64) -> f64 {
        let mut fa = self.eval(a, order);
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let mid = 0.5 * (a + b);
            let fm = self.eval(mid, order);
            if fm == 0.0 {
                return mid;
            }
            if (fa < 0.0) == (fm < 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    /// Zeros of the `order`-th derivative in `[a, b]`, splitting at zeros of the
    /// next derivative so each piece is monotone. Tangential zeros are reported
    /// only for `order = 0`.
    fn zeros(&self, order: u32, a: f64, b: f64, out: &mut Vec<f64>) {
        let mut cuts = vec![a];
        if order < MAX_SPLIT_ORDER {
            let mut inner = Vec::new();
            self.zeros(order + 1, a, b, &mut inner);
            cuts.extend(inner.into_iter().filter(|&x| x > a && x < b));
        }
        cuts.push(b);
        let tangent_band = 1e-13 * self.scale();
        for w in cuts.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let (f0, f1) = (self.eval(x0, order), self.eval(x1, order));
            if f0 == 0.0 {
                out.push(x0);
            } else if f0 * f1 < 0.0 {
                out.push(self.bisect(order, x0, x1, if order == 0 { ROOT_TOL * 0.1 } else { 1e-14 }));
            } else if order == 0 && w[0] != a && fabs(f0) <= tangent_band {
                // interior extremum touching zero
                out.push(x0);
            }
        }
        if self.eval(b, order) == 0.0 {
            out.push(b);
        }
    }
}

fn circle_census(params: &DeformationParams, cp: &CensusParams, k: u32, cells: usize) -> CircleCensus {
    let f = CircleFn { params, cp: *cp, k };
    let step = TAU / cells as f64;
    let max_abs = (0..cells).map(|i| fabs(f.eval(i as f64 * step, 0))).fold(0.0, f64::max);
    if max_abs <= 1e-13 * f.scale() {
        return CircleCensus { k, cusp_thetas: Vec::new(), multiple_thetas: Vec::new(), identically_zero: true };
    }
    let mut raw = Vec::new();
    for i in 0..cells {
        f.zeros(0, i as f64 * step, (i + 1) as f64 * step, &mut raw);
    }
    let mut zeros: Vec<f64> = Vec::new();
    for z in raw {
        let z = canonical(z);
        if !zeros.iter().any(|&y| circular_distance(y, z) < 1e-10) {
            zeros.push(z);
        }
    }
    zeros.sort_by(f64::total_cmp);
    let band = f.slope_band();
    let (multiple, simple): (Vec<f64>, Vec<f64>) = zeros.into_iter().partition(|&z| fabs(f.eval(z, 1)) < band);
    // a zero of multiplicity j is only located to about eps^{1/j}; merge the spread
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for z in multiple {
        match clusters.last_mut() {
            Some(c) if z - c[c.len() - 1] < MULTIPLE_CLUSTER => c.push(z),
            _ => clusters.push(vec![z]),
        }
    }
    if clusters.len() > 1 {
        let (first, last) = (clusters[0][0], *clusters[clusters.len() - 1].last().unwrap_or(&0.0));
        if circular_distance(first, last) < MULTIPLE_CLUSTER {
            let tail = clusters.pop().unwrap_or_default();
            clusters[0].splice(0..0, tail);
        }
    }
    let absorbed = |z: f64| clusters.iter().flatten().any(|&y| circular_distance(y, z) < MULTIPLE_CLUSTER);
    let cusp_thetas = simple.into_iter().filter(|&z| !absorbed(z)).collect();
    let mut multiple_thetas: Vec<f64> = clusters.iter().map(|c| c[c.len() / 2]).collect();
    multiple_thetas.sort_by(f64::total_cmp);
    CircleCensus { k, cusp_thetas, multiple_thetas, identically_zero: false }
}

/// A change of the located zero count between two values of `abs(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub mu_abs: f64,
    pub before: usize,
    pub after: usize,
}

/// Bisection target for transition values of `abs(mu)`.
pub const TRANSITION_TOL: f64 = 1e-9;

/// Zero counts on a log-spaced grid of `steps` values in `[lo, hi]`, with every
/// change of count refined by bisection. For `p > q` an increase is an error.
pub fn sweep_transitions(p: u32, q: u32, mu_arg: f64, lo: f64, hi: f64, steps: usize) -> Result<Vec<Transition>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || steps < 2 {
        return Err(Error::InvalidRange);
    }
    let base = DeformationParams::new(p, q, lo, mu_arg)?;
    let census = |m: f64| -> Result<CuspCensus> { Ok(count_cusps(&base.with_mu_abs(m)?)) };
    let count = |m: f64| -> Result<usize> { Ok(census(m)?.zero_count()) };
    let (l0, l1) = (log(lo), log(hi));
    let grid: Vec<f64> = (0..steps)
        .map(|i| if i + 1 == steps { hi } else { exp(l0 + (l1 - l0) * i as f64 / (steps - 1) as f64) })
        .collect();
    let counts = grid.iter().map(|&m| count(m)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..steps - 1 {
        if counts[i] != counts[i + 1] {
            refine(&count, grid[i], counts[i], grid[i + 1], counts[i + 1], &mut out, 0)?;
        }
    }
    for t in &mut out {
        let (a, b) = (t.mu_abs - TRANSITION_TOL, t.mu_abs + TRANSITION_TOL);
        if let Some(m) = polish(&base, &census(a)?, &census(b)?) {
            if fabs(m - t.mu_abs) < 1e-4 * t.mu_abs {
                t.mu_abs = m;
            }
        }
    }
    if p > q {
        if let Some(t) = out.iter().find(|t| t.after > t.before) {
            return Err(Error::MonotonicityViolation { mu_abs: t.mu_abs, before: t.before, after: t.after });
        }
    }
    Ok(out)
}

fn refine(
    count: &dyn Fn(f64) -> Result<usize>,
    mut a: f64,
    ca: usize,
    right: f64,
    c_right: usize,
    out: &mut Vec<Transition>,
    depth: usize,
) -> Result<()> {
    let mut b = right;
    let mut cb = c_right;
    while b - a > TRANSITION_TOL {
        let mid = 0.5 * (a + b);
        let cm = count(mid)?;
        if cm == ca {
            a = mid;
        } else {
            b = mid;
            cb = cm;
        }
    }
    out.push(Transition { mu_abs: 0.5 * (a + b), before: ca, after: cb });
    if cb != c_right && depth < 32 && right - b > TRANSITION_TOL {
        refine(count, b, cb, right, c_right, out, depth + 1)?;
    }
    Ok(())
}

/// `Phi = abs(mu) alpha(theta) + beta(theta)` is linear in `abs(mu)`, so a multiple
/// zero at `theta` belongs to `abs(mu) = -beta / alpha`. That value is stationary
/// along the curve of zeros, so an approximate `theta` still gives it to second order.
/// Where `alpha` and `beta` vanish together `theta` is a zero for every `abs(mu)`,
/// and the multiple zero comes from `Phi' = 0` instead.
fn transition_value(params: &DeformationParams, k: u32, theta: f64) -> Option<f64> {
    let cp = CensusParams::new(params.p(), params.q());
    let (p, q, r) = (params.p() as f64, params.q() as f64, cp.r as f64);
    let (au, bv) = (circle_sign(k) * (q - 1.0) / r * cp.radius_u, (p - 1.0) / r * cp.radius_v);
    let phase = cp.n * theta + CensusParams::c_prime(params, k);
    let (alpha, d_alpha) = (au * sin(phase), au * cp.n * cos(phase));
    let (beta, d_beta) = (bv * sin(cp.m * theta), bv * cp.m * cos(cp.m * theta));
    let m = if fabs(alpha) > 1e-6 * fabs(d_alpha) { -beta / alpha } else { -d_beta / d_alpha };
    (m > 0.0 && m.is_finite()).then_some(m)
}

/// Transition value from the census on either side of a bracketed count change:
/// a located multiple zero, else the midpoint of the closest pair of zeros.
fn polish(base: &DeformationParams, before: &CuspCensus, after: &CuspCensus) -> Option<f64> {
    for c in [after, before] {
        if let Some((k, t)) = c.per_circle.iter().find_map(|z| z.multiple_thetas.first().map(|&t| (z.k, t))) {
            return transition_value(base, k, t);
        }
    }
    let mut best: Option<(f64, u32, f64)> = None;
    for c in [before, after] {
        for z in &c.per_circle {
            let n = z.cusp_thetas.len();
            for i in 0..n {
                let (x, y) = (z.cusp_thetas[i], z.cusp_thetas[(i + 1) % n]);
                let gap = circular_distance(x, y);
                if n > 1 && best.is_none_or(|b| gap < b.0) {
                    let mid = if y >= x { 0.5 * (x + y) } else { canonical(0.5 * (x + y + TAU)) };
                    best = Some((gap, z.k, mid));
                }
            }
        }
    }
    best.and_then(|(_, k, t)| transition_value(base, k, t))
}

/// Which linear coefficient vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingCoefficient {
    /// `a = 0`: the roles of the two variables are exchanged.
    A,
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DegenerateVerdict {
    /// The surviving pure power has exponent 2; cusps sit on the circle
    /// `(A e^{i theta}, 0)` at the zeros of `sin((p+1) theta / 2)` (with `p` the
    /// exponent of the variable that keeps its conjugate term).
    Census { vanishing: VanishingCoefficient, exponent: u32, cusp_thetas: Vec<f64> },
    /// The pure power has exponent at least 3: every singular point is degenerate.
    NotExcellent { vanishing: VanishingCoefficient, pure_exponent: u32 },
}

/// `z^p + w^q + a conj(z) + b conj(w)` with exactly one of `a`, `b` zero.
pub fn degenerate_census(a: PolarComplex, b: PolarComplex, p: u32, q: u32) -> Result<DegenerateVerdict> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidParams("exponents p and q must be at least 2"));
    }
    let (a0, b0) = (a.abs == 0.0, b.abs == 0.0);
    let (vanishing, exponent, pure) = match (a0, b0) {
        (false, true) => (VanishingCoefficient::B, p, q),
        (true, false) => (VanishingCoefficient::A, q, p),
        _ => return Err(Error::InvalidDegenerateFamily),
    };
    if pure >= 3 {
        return Ok(DegenerateVerdict::NotExcellent { vanishing, pure_exponent: pure });
    }
    let cusp_thetas = (0..=exponent).map(|j| TAU * j as f64 / (exponent as f64 + 1.0)).collect();
    Ok(DegenerateVerdict::Census { vanishing, exponent, cusp_thetas })
}

/// `h(theta) = e^{2 i theta} + 2 e^{-i theta}`, the three-cusp hypocycloid.
pub fn h_curve(theta: f64) -> Complex64 {
    Complex64::new(cos(2.0 * theta) + 2.0 * cos(theta), sin(2.0 * theta) - 2.0 * sin(theta))
}

/// Samples used to verify the closed form of the quadratic critical-value curve.
pub const THEOREM13_SAMPLES: usize = 1024;
pub const THEOREM13_TOL: f64 = 1e-10;

/// For `p = q = 2`: `P_0(theta) = scale e^{i rotation} h(theta + shift)` with
/// `K = abs(mu) e^{-3 i arg mu} + 1`, `scale = abs(K)/4`, `rotation = -arg K / 3`,
/// `shift = 2 arg K / 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem13Curve {
    pub scale: f64,
    pub rotation: f64,
    pub shift: f64,
    /// Circle parameters of the three cusps, sorted.
    pub cusp_thetas: Vec<f64>,
    /// Largest pointwise deviation over the verification grid.
    pub max_deviation: f64,
}

impl Theorem13Curve {
    pub fn eval(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(self.scale, self.rotation) * h_curve(theta + self.shift)
    }
}

pub fn theorem13_curve(params: &DeformationParams) -> Result<Theorem13Curve> {
    if params.p() != 2 || params.q() != 2 {
        return Err(Error::InvalidParams("the closed three-cusp curve needs p = q = 2"));
    }
    let k = Complex64::from_polar(params.mu_abs(), -3.0 * params.mu_arg()) + 1.0;
    if k.norm() < 1e-12 {
        return Err(Error::DegenerateCurve);
    }
    let arg_k = k.arg();
    let mut cusp_thetas: Vec<f64> = (0..3).map(|j| canonical(TAU * j as f64 / 3.0 - 2.0 * arg_k / 3.0)).collect();
    cusp_thetas.sort_by(f64::total_cmp);
    let mut curve = Theorem13Curve {
        scale: k.norm() / 4.0,
        rotation: -arg_k / 3.0,
        shift: 2.0 * arg_k / 3.0,
        cusp_thetas,
        max_deviation: 0.0,
    };
    let spec = singular_circles(params)[0];
    for i in 0..THEOREM13_SAMPLES {
        let theta = TAU * i as f64 / THEOREM13_SAMPLES as f64;
        let pk = critical_value(&spec, theta);
        let d = (Complex64::new(pk.x, pk.y) - curve.eval(theta)).norm();
        curve.max_deviation = curve.max_deviation.max(d);
    }
    if curve.max_deviation.is_nan() || curve.max_deviation > THEOREM13_TOL {
        return Err(Error::CurveMismatch { deviation: curve.max_deviation });
    }
    Ok(curve)
}
