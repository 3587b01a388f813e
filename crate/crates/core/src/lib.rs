//! Analysis of the real maps `P(u, v; mu) = mu (u^p + conj(u)) + v^q + conj(v)`
//! from R^4 to R^2.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`polar`]: evaluation of `P = Q + iR` in polar coordinates together with
//!   exact partial derivatives up to order three and a finite-difference oracle,
//! * [`locus`]: the singular set, which is a union of `gcd(p-1, q-1)` circles on a
//!   fixed torus, and the reduction of `z^p + w^q + a conj(z) + b conj(w)` to the
//!   one-parameter normal form,
//! * [`levine`]: classification of singular points into folds (definite or
//!   indefinite), cusps and degenerate points,
//! * [`census`]: cusp counting along the singular circles, transition sweeps in
//!   `|mu|` and the closed three-cusp curve of the quadratic case.
//!
//! Everything here is a pure function of its arguments.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod angle;
pub mod census;
mod error;
pub mod levine;
pub mod linalg;
pub mod locus;
pub mod polar;
pub mod trig;

pub use census::{
    big_phi, big_phi_derivative, count_cusps, count_cusps_with, critical_value, degenerate_census, h_curve,
    sweep_transitions, theorem13_curve, CensusParams, CircleCensus, CuspCensus, DegenerateVerdict, Theorem13Curve,
    Transition, VanishingCoefficient,
};
pub use error::{Error, Result};
pub use levine::{
    branch_of, classify, classify_sheared, cusps_by_classifier, det_h, hessian_bundle, hessian_entries, is_excellent,
    phi, phi_prime, shear_constant, third_derivative, Branch, Classification, Diagnostics, ExcellenceReport,
    HessianBundle, HessianEntries, Kind, KindCounts, Shear, Tolerances, Violation,
};
pub use locus::{
    gradient_quad, mu_from_coefficients, mu_from_coefficients_on_branch, point_on_circle, singular_circles,
    ActiveGradient, DeformationPath, GradientQuad, PolarComplex, Reduction, SingularCircleSpec, SingularPoint,
};
pub use polar::{eval_qr, fd_partial, partial, DeformationParams, MultiIndex, PlanePoint, PolarPoint};
