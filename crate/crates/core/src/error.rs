use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the analysis routines.
///
/// Degenerate singular points are never errors; they come back as
/// [`crate::Kind::Degenerate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Exponents below 2, a non-positive or non-finite `|mu|`, or a non-finite angle.
    InvalidParams(&'static str),
    /// Derivative multi-index of total order above three.
    OrderTooHigh(u32),
    /// Finite-difference step that is not strictly positive.
    InvalidStep(f64),
    /// The finite-difference stencil would leave the polar chart.
    ChartTooClose { radius: f64, step: f64 },
    /// A point produced on a singular circle fails the argument relation by more than 1e-9.
    InconsistentSingularPoint { residual: f64 },
    /// A closed form was requested outside the branch it is valid on.
    BranchMisdispatch(&'static str),
    /// The third-derivative test was requested away from the cusp candidate locus.
    NotCuspCandidate { phi: f64 },
    /// Reduction to the normal form needs both linear coefficients nonzero.
    ZeroCoefficient,
    /// The vanishing-coefficient family needs exactly one of the coefficients to vanish.
    InvalidDegenerateFamily,
    /// The quadratic critical-value curve collapses (`K = 0`).
    DegenerateCurve,
    /// Pointwise check of the quadratic critical-value curve failed.
    CurveMismatch { deviation: f64 },
    /// The cusp count increased along a sweep with `p > q`.
    MonotonicityViolation { mu_abs: f64, before: usize, after: usize },
    /// Sweep range or step count is unusable.
    InvalidRange,
    /// Too few samples for the requested scan.
    TooFewSamples { got: usize, min: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(what) => write!(f, "invalid parameters: {what}"),
            Error::OrderTooHigh(order) => {
                write!(f, "derivative order {order} exceeds the supported maximum of 3")
            }
            Error::InvalidStep(h) => write!(f, "finite-difference step must be positive, got {h}"),
            Error::ChartTooClose { radius, step } => {
                write!(f, "radius {radius} is closer than 4 steps ({step}) to the origin of the polar chart")
            }
            Error::InconsistentSingularPoint { residual } => {
                write!(f, "singular point violates the argument relation (residual {residual:e} from a multiple of pi)")
            }
            Error::BranchMisdispatch(what) => write!(f, "branch misdispatch: {what}"),
            Error::NotCuspCandidate { phi } => {
                write!(f, "third-derivative test needs phi = 0, got {phi:e}")
            }
            Error::ZeroCoefficient => {
                write!(f, "both linear coefficients must be nonzero for the reduction")
            }
            Error::InvalidDegenerateFamily => {
                write!(f, "exactly one of the linear coefficients must vanish")
            }
            Error::DegenerateCurve => write!(f, "critical-value curve collapses (K = 0)"),
            Error::CurveMismatch { deviation } => {
                write!(f, "critical-value curve deviates from the scaled h by {deviation:e}")
            }
            Error::MonotonicityViolation { mu_abs, before, after } => {
                write!(f, "cusp count increased from {before} to {after} near |mu| = {mu_abs}")
            }
            Error::InvalidRange => write!(f, "invalid sweep range"),
            Error::TooFewSamples { got, min } => write!(f, "{got} samples requested, need at least {min}"),
        }
    }
}

impl core::error::Error for Error {}
