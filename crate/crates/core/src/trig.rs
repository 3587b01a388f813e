//! Finite sums `sum a_j sin(w_j x + b_j)` with exact differentiation and products.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::ops::{Add, Mul, Neg, Sub};

use libm::sin;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigSum {
    terms: Vec<Sinusoid>,
}

impl TrigSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn sine(amp: f64, freq: f64, phase: f64) -> Self {
        Self { terms: alloc::vec![Sinusoid { amp, freq, phase }] }
    }

    pub fn cosine(amp: f64, freq: f64, phase: f64) -> Self {
        Self::sine(amp, freq, phase + FRAC_PI_2)
    }

    pub fn constant(c: f64) -> Self {
        Self::sine(c, 0.0, FRAC_PI_2)
    }

    pub fn terms(&self) -> &[Sinusoid] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.amp * sin(t.freq * x + t.phase)).sum()
    }

    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.freq != 0.0)
            .map(|t| Sinusoid { amp: t.amp * t.freq, freq: t.freq, phase: t.phase + FRAC_PI_2 })
            .collect();
        Self { terms }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { terms: self.terms.iter().map(|t| Sinusoid { amp: t.amp * k, ..*t }).collect() }
    }
}

impl Add for TrigSum {
    type Output = TrigSum;
    fn add(mut self, rhs: TrigSum) -> TrigSum {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for TrigSum {
    type Output = TrigSum;
    fn neg(self) -> TrigSum {
        self.scale(-1.0)
    }
}

impl Sub for TrigSum {
    type Output = TrigSum;
    fn sub(self, rhs: TrigSum) -> TrigSum {
        self + (-rhs)
    }
}

impl Mul for &TrigSum {
    type Output = TrigSum;
    /// `sin a sin b = (cos(a - b) - cos(a + b)) / 2`
    fn mul(self, rhs: &TrigSum) -> TrigSum {
        let mut terms = Vec::with_capacity(2 * self.terms.len() * rhs.terms.len());
        for s in &self.terms {
            for t in &rhs.terms {
                let half = 0.5 * s.amp * t.amp;
                terms.push(Sinusoid { amp: half, freq: s.freq - t.freq, phase: s.phase - t.phase + FRAC_PI_2 });
                terms.push(Sinusoid { amp: -half, freq: s.freq + t.freq, phase: s.phase + t.phase + FRAC_PI_2 });
            }
        }
        TrigSum { terms }
    }
}

/// `d/dx ( c d/dx ( c d/dx f ) )` evaluated at `x0`.
pub fn nested_operator(f: &TrigSum, c: &TrigSum, x0: f64) -> f64 {
    let inner = c * &f.derivative();
    let middle = c * &inner.derivative();
    middle.derivative().eval(x0)
}
