//! Formal solutions of the Fay identity: Kronecker function expansions,
//! reconstruction from seeds, classification and period relations.
//!
//! Everything is generic over a [`CoefficientRing`]; the aliases below fix
//! the three rings used in practice.

pub mod arith;
pub mod classify;
pub mod fay;
pub mod json;
pub mod laurent;
pub mod qseries;
pub mod ring;
pub mod theta;
pub mod zagier;

pub use num_complex::Complex64;
pub use qseries::QSeries;
pub use ring::{CoefficientRing, RingKind};

/// Exact rational scalars.
pub type Rational = num_rational::BigRational;
/// Truncated q-series with rational coefficients.
pub type RationalQSeries = QSeries<Rational>;

pub type RationalLaurent = laurent::BiLaurent<Rational>;
pub type QSeriesLaurent = laurent::BiLaurent<RationalQSeries>;
pub type ComplexLaurent = laurent::BiLaurent<Complex64>;
