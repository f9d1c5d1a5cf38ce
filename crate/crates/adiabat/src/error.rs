use core::fmt;

/// Errors shared by every module in the crate.
#[derive(Clone, Debug, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A probability entry was negative.
    NegativeEntry { index: usize, value: f64 },
    /// Probabilities do not sum to 1 within the renormalization tolerance.
    NotNormalized { sum: f64 },
    /// A label list does not match the spectrum length.
    LengthMismatch { expected: usize, found: usize },
    /// Flat scaling was asked for a nonpositive support weight.
    NonpositiveBase { base: f64 },
    /// Matrix is not Hermitian within tolerance.
    NotHermitian { max_asymmetry: f64 },
    /// Matrix has an eigenvalue below the PSD tolerance.
    NotPsd { eigenvalue: f64 },
    /// Matrix trace deviates from 1 beyond tolerance.
    NotUnitTrace { trace: f64 },
    /// The two spectra were rescaled with different reservoirs, or with a
    /// reservoir other than the relation's.
    WeightMismatch,
    /// Gauge reference states are not strictly ordered (z0 < z1 required).
    GaugeDegenerate { z0: f64, z1: f64 },
    /// An operation defined only for flat states was given a non-flat one.
    NotFlat { ratio_spread: f64 },
    /// The source spectrum does not precede the target; `prefix` is the first
    /// breakpoint index at which the partial-sum check fails.
    NotMajorized { prefix: usize },
    /// Reservoir labels required by the operation are absent.
    MissingLabels,
    /// The λ-search bracket does not contain the predicate boundary.
    BracketExceeded { lo: f64, hi: f64 },
    /// Invalid trial configuration for the randomized harness.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeEntry { index, value } => {
                write!(f, "negative probability at index {index}: {value}")
            }
            Error::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1 within 1e-9")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "label list has length {found}, spectrum has {expected}")
            }
            Error::NonpositiveBase { base } => {
                write!(f, "flat scaling needs a positive support weight, got {base}")
            }
            Error::NotHermitian { max_asymmetry } => {
                write!(f, "matrix not Hermitian: max |a_ij - conj(a_ji)| = {max_asymmetry}")
            }
            Error::NotPsd { eigenvalue } => {
                write!(f, "matrix not positive semidefinite: eigenvalue {eigenvalue}")
            }
            Error::NotUnitTrace { trace } => {
                write!(f, "matrix trace is {trace}, expected 1 within 1e-10")
            }
            Error::WeightMismatch => {
                write!(f, "spectra were not rescaled with the relation's reservoir")
            }
            Error::GaugeDegenerate { z0, z1 } => {
                write!(f, "gauge needs z0 < z1 strictly, got z0 = {z0}, z1 = {z1}")
            }
            Error::NotFlat { ratio_spread } => {
                write!(f, "state is not flat: rescaled ratios spread by {ratio_spread}")
            }
            Error::NotMajorized { prefix } => {
                write!(f, "source does not precede target: partial sum fails at breakpoint {prefix}")
            }
            Error::MissingLabels => write!(f, "operation needs reservoir labels that are absent"),
            Error::BracketExceeded { lo, hi } => {
                write!(f, "λ-search bracket [{lo}, {hi}] does not contain the boundary")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid trial configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
