//! The map `P = Q + iR` in polar coordinates `(r1, th1, r2, th2)` with
//! `u = r1 e^{i th1}` and `v = r2 e^{i th2}`.
//!
//! `P` expands into four terms, each of the form `c r^e e^{i(a th + b)}`:
//!
//! | term            | `c`     | `e` | `a`  | `b`      | variables   |
//! |-----------------|---------|-----|------|----------|-------------|
//! | `mu u^p`        | `abs(mu)` | `p` | `p`  | `arg mu` | `(r1, th1)` |
//! | `mu conj(u)`    | `abs(mu)` | `1` | `-1` | `arg mu` | `(r1, th1)` |
//! | `v^q`           | `1`     | `q` | `q`  | `0`      | `(r2, th2)` |
//! | `conj(v)`       | `1`     | `1` | `-1` | `0`      | `(r2, th2)` |
//!
//! Differentiating `j` times in `r` and `l` times in `th` multiplies the term by
//! `e (e-1) ... (e-j+1) r^{-j} (i a)^l`, so every partial derivative is again a
//! four-term trigonometric expression. No derivative ever mixes the `u` and `v`
//! variables.

use libm::{cos, pow, sin};

use crate::angle::canonical;
use crate::{Error, Result};

/// The family member `P(u, v; mu)`, with `mu = mu_abs e^{i mu_arg}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    p: u32,
    q: u32,
    mu_abs: f64,
    mu_arg: f64,
}

impl DeformationParams {
    /// Validates `p, q >= 2` and `mu_abs > 0`; `mu_arg` is reduced into `[0, 2pi)`.
    pub fn new(p: u32, q: u32, mu_abs: f64, mu_arg: f64) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::InvalidParams("exponents p and q must be at least 2"));
        }
        if !(mu_abs.is_finite() && mu_abs > 0.0) {
            return Err(Error::InvalidParams("|mu| must be finite and positive"));
        }
        if !mu_arg.is_finite() {
            return Err(Error::InvalidParams("arg mu must be finite"));
        }
        Ok(Self { p, q, mu_abs, mu_arg: canonical(mu_arg) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn mu_abs(&self) -> f64 {
        self.mu_abs
    }

    pub fn mu_arg(&self) -> f64 {
        self.mu_arg
    }

    /// Same exponents and argument, different modulus.
    pub fn with_mu_abs(&self, mu_abs: f64) -> Result<Self> {
        Self::new(self.p, self.q, mu_abs, self.mu_arg)
    }

    /// Number of singular circles, `gcd(p-1, q-1)`.
    pub fn circle_count(&self) -> u32 {
        gcd(self.p - 1, self.q - 1)
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarPoint {
    pub r1: f64,
    pub th1: f64,
    pub r2: f64,
    pub th2: f64,
}

impl PolarPoint {
    pub fn new(r1: f64, th1: f64, r2: f64, th2: f64) -> Self {
        Self { r1, th1, r2, th2 }
    }

    /// Coordinates in the fixed order `(r1, th1, r2, th2)`.
    pub fn to_array(self) -> [f64; 4] {
        [self.r1, self.th1, self.r2, self.th2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

/// A point `(Q, R)` of the target plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Number of differentiations in each of `(r1, th1, r2, th2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(pub [u8; 4]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; 4]);

    pub fn new(r1: u8, th1: u8, r2: u8, th2: u8) -> Self {
        Self([r1, th1, r2, th2])
    }

    /// Multi-index of a product of first-order partials in the given coordinate slots.
    pub fn from_slots(slots: &[usize]) -> Self {
        let mut m = [0u8; 4];
        for &s in slots {
            m[s] += 1;
        }
        Self(m)
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// `mu u^p`
    MuPower,
    /// `mu conj(u)`
    MuConjugate,
    /// `v^q`
    VPower,
    /// `conj(v)`
    VConjugate,
}

/// One summand `coef r^exponent e^{i(freq th + phase)}` of `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub coef: f64,
    pub exponent: u32,
    pub freq: f64,
    pub phase: f64,
}

impl Term {
    fn uses_u(&self) -> bool {
        matches!(self.kind, TermKind::MuPower | TermKind::MuConjugate)
    }

    /// `(d^j/dr^j d^l/dth^l)` of the real and imaginary parts of this term.
    pub fn partial(&self, z: &PolarPoint, idx: MultiIndex) -> (f64, f64) {
        let [nr1, nt1, nr2, nt2] = idx.0;
        let (r, th, j, l, foreign) =
            if self.uses_u() { (z.r1, z.th1, nr1, nt1, nr2 + nt2) } else { (z.r2, z.th2, nr2, nt2, nr1 + nt1) };
        if foreign > 0 {
            return (0.0, 0.0);
        }
        let ff = falling_factorial(self.exponent, j as u32);
        if ff == 0.0 {
            return (0.0, 0.0);
        }
        let radial = pow(r, self.exponent as f64 - j as f64);
        let amp = self.coef * ff * radial * pow(self.freq, l as f64);
        // i^l rotates the phase by l * pi/2
        let ph = self.freq * th + self.phase + l as f64 * core::f64::consts::FRAC_PI_2;
        (amp * cos(ph), amp * sin(ph))
    }

    pub fn eval(&self, z: &PolarPoint) -> (f64, f64) {
        self.partial(z, MultiIndex::ZERO)
    }
}

fn falling_factorial(e: u32, j: u32) -> f64 {
    (0..j).map(|i| e as f64 - i as f64).product()
}

/// The four summands of `P` for the given parameters.
pub fn terms(params: &DeformationParams) -> [Term; 4] {
    let (m, a) = (params.mu_abs, params.mu_arg);
    [
        Term { kind: TermKind::MuPower, coef: m, exponent: params.p, freq: params.p as f64, phase: a },
        Term { kind: TermKind::MuConjugate, coef: m, exponent: 1, freq: -1.0, phase: a },
        Term { kind: TermKind::VPower, coef: 1.0, exponent: params.q, freq: params.q as f64, phase: 0.0 },
        Term { kind: TermKind::VConjugate, coef: 1.0, exponent: 1, freq: -1.0, phase: 0.0 },
    ]
}

/// `(Q, R)` at `z`. Valid on the whole chart, including `r1 = 0` or `r2 = 0`.
pub fn eval_qr(params: &DeformationParams, z: &PolarPoint) -> PlanePoint {
    let (x, y) = terms(params).iter().map(|t| t.eval(z)).fold((0.0, 0.0), |(ax, ay), (x, y)| (ax + x, ay + y));
    PlanePoint::new(x, y)
}

/// Analytic partial derivative `(d^idx Q, d^idx R)` at `z`, total order at most 3.
pub fn partial(params: &DeformationParams, z: &PolarPoint, idx: MultiIndex) -> Result<(f64, f64)> {
    if idx.order() > 3 {
        return Err(Error::OrderTooHigh(idx.order()));
    }
    Ok(partial_unchecked(params, z, idx))
}

pub(crate) fn partial_unchecked(params: &DeformationParams, z: &PolarPoint, idx: MultiIndex) -> (f64, f64) {
    terms(params).iter().map(|t| t.partial(z, idx)).fold((0.0, 0.0), |(ax, ay), (x, y)| (ax + x, ay + y))
}

/// Gradients of `Q` and `R` in `(r1, th1, r2, th2)`.
pub fn gradients(params: &DeformationParams, z: &PolarPoint) -> ([f64; 4], [f64; 4]) {
    let mut gq = [0.0; 4];
    let mut gr = [0.0; 4];
    for i in 0..4 {
        let (a, b) = partial_unchecked(params, z, MultiIndex::from_slots(&[i]));
        gq[i] = a;
        gr[i] = b;
    }
    (gq, gr)
}

pub type Mat4 = [[f64; 4]; 4];
pub type Tensor4 = [[[f64; 4]; 4]; 4];

/// Hessians of `Q` and `R` in `(r1, th1, r2, th2)`.
pub fn hessians(params: &DeformationParams, z: &PolarPoint) -> (Mat4, Mat4) {
    let mut hq = [[0.0; 4]; 4];
    let mut hr = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let (a, b) = partial_unchecked(params, z, MultiIndex::from_slots(&[i, j]));
            hq[i][j] = a;
            hq[j][i] = a;
            hr[i][j] = b;
            hr[j][i] = b;
        }
    }
    (hq, hr)
}

/// Third-derivative tensors of `Q` and `R`.
pub fn third_tensors(params: &DeformationParams, z: &PolarPoint) -> (Tensor4, Tensor4) {
    let mut tq = [[[0.0; 4]; 4]; 4];
    let mut tr = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let (a, b) = partial_unchecked(params, z, MultiIndex::from_slots(&[i, j, k]));
                tq[i][j][k] = a;
                tr[i][j][k] = b;
            }
        }
    }
    (tq, tr)
}

/// Central-difference steps for derivative orders 1, 2, 3 (index 0 unused).
pub const FD_STEPS: [f64; 4] = [0.0, 1e-4, 5e-4, 2e-3];

/// Relative tolerances, `abs(fd - analytic) / (1 + abs(analytic))`, matching [`FD_STEPS`].
/// Truncation is `O(h^2)` at every order; round-off grows like `eps / h^order`.
pub const FD_TOLERANCES: [f64; 4] = [1e-12, 1e-7, 1e-5, 1e-3];

/// Nested central differences of [`eval_qr`]. Truncation error is second order in `step`.
pub fn fd_partial(params: &DeformationParams, z: &PolarPoint, idx: MultiIndex, step: f64) -> Result<(f64, f64)> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidStep(step));
    }
    let order = idx.order();
    if order > 3 {
        return Err(Error::OrderTooHigh(order));
    }
    if order > 0 {
        let radius = if z.r1 < z.r2 { z.r1 } else { z.r2 };
        if radius < 4.0 * step {
            return Err(Error::ChartTooClose { radius, step });
        }
    }
    let mut slots = [0usize; 3];
    let mut n = 0;
    for (slot, &count) in idx.0.iter().enumerate() {
        for _ in 0..count {
            slots[n] = slot;
            n += 1;
        }
    }
    Ok(nested_difference(params, z.to_array(), &slots[..n], step))
}

fn nested_difference(params: &DeformationParams, x: [f64; 4], slots: &[usize], h: f64) -> (f64, f64) {
    match slots.split_first() {
        None => {
            let v = eval_qr(params, &PolarPoint::from_array(x));
            (v.x, v.y)
        }
        Some((&s, rest)) => {
            let mut plus = x;
            let mut minus = x;
            plus[s] += h;
            minus[s] -= h;
            let (a1, b1) = nested_difference(params, plus, rest, h);
            let (a0, b0) = nested_difference(params, minus, rest, h);
            ((a1 - a0) / (2.0 * h), (b1 - b0) / (2.0 * h))
        }
    }
}
