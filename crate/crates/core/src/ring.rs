//! Coefficient rings.
//!
//! Every series in this crate is generic over a [`CoefficientRing`]. Three
//! families are provided:
//!
//! - exact rationals ([`BigRational`]),
//! - truncated q-series over a coefficient ring ([`crate::QSeries`]),
//! - floating point scalars (`f32`, `f64`, [`Complex64`]).
//!
//! Exact rings answer zero tests exactly; floating rings are compared against
//! a tolerance by the callers that need it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Values below this magnitude are not invertible in floating rings.
pub const MIN_INVERTIBLE: f64 = 1e-300;

/// A commutative ring with unit that series coefficients live in.
pub trait CoefficientRing:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Image of a rational number under the canonical map Q -> R.
    fn from_rational(r: &BigRational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;

    fn mul_int(&self, k: i64) -> Self {
        self.mul_ref(&Self::from_int(k))
    }

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add_ref(&a.mul_ref(b));
    }

    /// Multiplicative inverse if `self` is a unit.
    fn try_inv(&self) -> Option<Self>;

    /// A non-negative size used for tolerances and reports.
    fn magnitude(&self) -> f64;

    /// Numeric value, if the element denotes a single number.
    fn to_complex(&self) -> Option<Complex64>;

    /// Element denoting the number `z`, if representable.
    fn from_complex(z: Complex64) -> Option<Self>;

    /// Zero test: exact in exact rings, `magnitude <= abs_tol` otherwise.
    fn is_negligible(&self, abs_tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= abs_tol
        }
    }

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl CoefficientRing for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        self * rhs
    }

    fn mul_int(&self, k: i64) -> Self {
        self * BigInt::from(k)
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a * b;
    }

    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Option<Complex64> {
        self.to_f64().map(|x| Complex64::new(x, 0.0))
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        if z.im != 0.0 {
            return None;
        }
        BigRational::from_float(z.re)
    }
}

macro_rules! real_float_ring {
    ($t:ty) => {
        impl CoefficientRing for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn add_ref(&self, rhs: &Self) -> Self {
                self + rhs
            }

            fn sub_ref(&self, rhs: &Self) -> Self {
                self - rhs
            }

            fn mul_ref(&self, rhs: &Self) -> Self {
                self * rhs
            }

            fn mul_int(&self, k: i64) -> Self {
                self * k as $t
            }

            fn add_mul_assign(&mut self, a: &Self, b: &Self) {
                *self += a * b;
            }

            fn try_inv(&self) -> Option<Self> {
                ((self.abs() as f64) >= MIN_INVERTIBLE).then(|| 1.0 / self)
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }

            fn to_complex(&self) -> Option<Complex64> {
                Some(Complex64::new(*self as f64, 0.0))
            }

            fn from_complex(z: Complex64) -> Option<Self> {
                (z.im == 0.0).then(|| z.re as $t)
            }
        }
    };
}

real_float_ring!(f32);
real_float_ring!(f64);

impl CoefficientRing for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn mul_int(&self, k: i64) -> Self {
        self * k as f64
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn try_inv(&self) -> Option<Self> {
        (self.norm() >= MIN_INVERTIBLE).then(|| self.inv())
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Option<Complex64> {
        Some(*self)
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(z)
    }
}

/// Runtime tag naming the ring a serialized object lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Rational,
    /// Truncated q-series over the rationals with the given precision.
    QSeries(usize),
    Complex,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Rational => write!(f, "rational"),
            RingKind::QSeries(n) => write!(f, "qseries(N_q={n})"),
            RingKind::Complex => write!(f, "complex"),
        }
    }
}

/// Principal `n`-th root.
pub fn principal_root(z: Complex64, n: u32) -> Complex64 {
    if z == Complex64::zero() {
        return z;
    }
    Complex64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}
