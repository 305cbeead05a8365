//! The Fay identity: residuals, coefficient formulas and reconstruction.

mod affine;
mod formulas;
mod homog;
mod reconstruct;
mod residual;

use thiserror::Error;

pub use affine::Affine;
pub use formulas::{formula_c, reduced_series, Slot};
pub use homog::Homog4;
pub use reconstruct::{extract_seeds, reconstruct, Strategy};
pub use residual::{
    fay_residual, fay_residual_component, fay_residual_with_tol, FayResidual, ResidualReport,
};

/// Relative tolerance for numeric zero tests on residuals.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Linear forms the cleared Fay combination is divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Divisor {
    /// `u1 + u2`
    USum,
    /// `v1 - v2`
    VDifference,
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Divisor::USum => write!(f, "u1+u2"),
            Divisor::VDifference => write!(f, "v1-v2"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FayError {
    #[error(
        "division by {divisor} leaves remainder of size {magnitude:e} at {index:?}; \
         the series has a non-simple pole or is not odd"
    )]
    NonzeroRemainder {
        divisor: Divisor,
        index: [u32; 4],
        magnitude: f64,
    },
    #[error("residual has a nonzero coefficient at negative exponent {index:?}")]
    NegativeExponent { index: [i32; 4] },
    #[error("residual requested through degree {requested} but the series determines only {available}")]
    InsufficientOrder { requested: i32, available: i32 },
    #[error("order must be at least 1, got {0}")]
    BadOrder(i32),
    #[error("slot {slot:?} is not defined for k = {k}")]
    BadSlot { k: u32, slot: Slot },
    #[error("linear system at degree {degree} is inconsistent at residual index {index:?}")]
    Inconsistent { degree: i32, index: [u32; 4] },
    #[error("linear system at degree {degree} does not determine every coefficient")]
    Underdetermined { degree: i32 },
    #[error("pivot at degree {degree} is not a unit of the coefficient ring")]
    NonUnitPivot { degree: i32 },
    #[error("seeds are not consistent with a solution: {0}")]
    BadSeeds(&'static str),
}
