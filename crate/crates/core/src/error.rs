//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation point outside the closed unit disk (beyond tolerance).
    #[error("evaluation point {z} lies outside the closed unit disk")]
    OutsideDisk { z: Complex64 },

    /// An intermediate value of a principal-branch power or logarithm landed
    /// exactly on the branch cut. Reported, never silently perturbed.
    #[error("intermediate value {value} lies on the principal branch cut")]
    BranchCut { value: Complex64 },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Taylor sampling radius too close to 1: the geometric aliasing bound
    /// cannot be met within the sample budget.
    #[error(
        "sampling radius {radius} needs {required} samples to reach aliasing \
         tolerance {tolerance:e}, cap is {cap}"
    )]
    AliasingBudget {
        radius: f64,
        required: usize,
        cap: usize,
        tolerance: f64,
    },

    #[error("truncation {requested} exceeds configured maximum {max}")]
    TruncationTooLarge { requested: usize, max: usize },

    /// Boundary quadrature did not stabilize (or exceeded its value cap).
    #[error("boundary quadrature diverged: last estimate {last:e} after {nodes} nodes")]
    QuadratureDivergent { last: f64, nodes: usize },

    #[error("weight has sup-norm {sup} >= 1 on the boundary grid")]
    WeightNotContractive { sup: f64 },

    /// The Bergman column-norm sum shows no square-summability; the operator
    /// truncations carry unboundedness evidence, not a spectrum.
    #[error("no square-summable column norms: {detail} (last estimate {estimate:.6e})")]
    UnboundedEvidence { estimate: f64, detail: String },

    #[error("spectral floor {floor:e} unreachable: only {certified} certified values")]
    FloorUnreachable { floor: f64, certified: usize },

    #[error("dense decomposition failed to converge")]
    Decomposition,

    #[error("lattice count exceeds {cap} points")]
    CountOverflow { cap: u64 },

    #[error("spectrum is not decaying (or all zero); nothing to fit")]
    NotDecaying,

    #[error("need at least {needed} usable values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("unknown parameter `{key}` for experiment `{experiment}`")]
    UnknownParameter { experiment: String, key: String },

    #[error("bad value for parameter `{key}`: {message}")]
    BadParameter { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
