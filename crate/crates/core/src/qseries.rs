//! Truncated power series in the nome `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::CoefficientRing;

/// `c_0 + c_1 q + ... + c_{N-1} q^{N-1} + O(q^N)`.
///
/// `precision == None` marks an exact polynomial; this is how constants
/// embedded from the base ring are stored, so that they combine with series
/// of any precision. Arithmetic truncates at the smaller precision of the
/// operands. Trailing zero coefficients are never stored.
#[derive(Clone)]
pub struct QSeries<C = BigRational> {
    coeffs: Vec<C>,
    precision: Option<usize>,
}

impl<C: CoefficientRing> QSeries<C> {
    pub fn new(mut coeffs: Vec<C>, precision: usize) -> Self {
        coeffs.truncate(precision);
        let mut s = QSeries {
            coeffs,
            precision: Some(precision),
        };
        s.trim();
        s
    }

    /// Exact constant (infinite precision).
    pub fn constant(c: C) -> Self {
        let mut s = QSeries {
            coeffs: vec![c],
            precision: None,
        };
        s.trim();
        s
    }

    /// `c * q^e + O(q^precision)`.
    pub fn monomial(e: usize, c: C, precision: usize) -> Self {
        if e >= precision {
            return Self::new(Vec::new(), precision);
        }
        let mut coeffs = vec![C::zero(); e + 1];
        coeffs[e] = c;
        Self::new(coeffs, precision)
    }

    pub fn precision(&self) -> Option<usize> {
        self.precision
    }

    /// Coefficient of `q^i` (zero beyond the stored terms).
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Same series with precision lowered to `n` (never raised).
    pub fn truncated(&self, n: usize) -> Self {
        let p = self.precision.map_or(n, |p| p.min(n));
        Self::new(self.coeffs.clone(), p)
    }

    fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.precision.is_none()
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn joint_precision(&self, other: &Self) -> Option<usize> {
        min_precision(self.precision, other.precision)
    }

    fn from_parts(mut coeffs: Vec<C>, precision: Option<usize>) -> Self {
        if let Some(p) = precision {
            coeffs.truncate(p);
        }
        let mut s = QSeries { coeffs, precision };
        s.trim();
        s
    }

    /// Sum the series at a numeric nome.
    pub fn eval(&self, q: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c.to_complex()?;
        }
        Some(acc)
    }

    /// Formal derivative with respect to `q`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_int(i as i64))
            .collect();
        Self::from_parts(coeffs, self.precision.map(|p| p.saturating_sub(1)))
    }
}

fn min_precision(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

impl<C: CoefficientRing> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries{:?}", self.coeffs)?;
        match self.precision {
            Some(p) => write!(f, " + O(q^{p})"),
            None => Ok(()),
        }
    }
}

impl<C: CoefficientRing> PartialEq for QSeries<C> {
    /// Equality of the coefficients both operands determine.
    fn eq(&self, other: &Self) -> bool {
        let n = match self.joint_precision(other) {
            Some(p) => p,
            None => self.coeffs.len().max(other.coeffs.len()),
        };
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl<C: CoefficientRing> Zero for QSeries<C> {
    fn zero() -> Self {
        QSeries {
            coeffs: Vec::new(),
            precision: None,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: CoefficientRing> One for QSeries<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: CoefficientRing> Neg for QSeries<C> {
    type Output = Self;
    fn neg(self) -> Self {
        QSeries {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }
}

impl<C: CoefficientRing> Add for QSeries<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<C: CoefficientRing> Sub for QSeries<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<C: CoefficientRing> Mul for QSeries<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<C: CoefficientRing> CoefficientRing for QSeries<C> {
    const EXACT: bool = C::EXACT;

    fn from_rational(r: &BigRational) -> Self {
        Self::constant(C::from_rational(r))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let p = self.joint_precision(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Self::from_parts(coeffs, p)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&-rhs.clone())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Self::zero();
        }
        let p = self.joint_precision(rhs);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::from_parts(Vec::new(), p);
        }
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let n = p.map_or(full, |p| p.min(full));
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j].add_mul_assign(a, b);
            }
        }
        Self::from_parts(out, p)
    }

    fn mul_int(&self, k: i64) -> Self {
        Self::from_parts(
            self.coeffs.iter().map(|c| c.mul_int(k)).collect(),
            self.precision,
        )
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_exact_zero() || b.is_exact_zero() {
            return;
        }
        *self = self.add_ref(&a.mul_ref(b));
    }

    /// A series is a unit iff its constant term is a unit of `C`.
    fn try_inv(&self) -> Option<Self> {
        let c0_inv = self.coeffs.first()?.try_inv()?;
        let n = match self.precision {
            Some(p) => p,
            None if self.coeffs.len() == 1 => return Some(Self::constant(c0_inv)),
            None => return None,
        };
        let mut g: Vec<C> = Vec::with_capacity(n);
        g.push(c0_inv.clone());
        for k in 1..n {
            let mut acc = C::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_mul_assign(&self.coeffs[i], &g[k - i]);
            }
            g.push(-(c0_inv.mul_ref(&acc)));
        }
        Some(Self::new(g, n))
    }

    fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn to_complex(&self) -> Option<Complex64> {
        match self.coeffs.len() {
            0 => Some(Complex64::zero()),
            1 => self.coeffs[0].to_complex(),
            _ => None,
        }
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        C::from_complex(z).map(Self::constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn series(v: &[i64], p: usize) -> QSeries {
        QSeries::new(v.iter().map(|&x| r(x)).collect(), p)
    }

    #[test]
    fn product_truncates() {
        let a = series(&[1, 1], 3);
        let sq = a.mul_ref(&a).mul_ref(&a);
        assert_eq!(sq.coeffs(), &[r(1), r(3), r(3)]);
        assert_eq!(sq.precision(), Some(3));
    }

    #[test]
    fn units_and_inverse() {
        let a = series(&[1, -1], 6);
        let inv = a.try_inv().unwrap();
        assert_eq!(inv, series(&[1, 1, 1, 1, 1, 1], 6));
        assert!(series(&[0, 1], 6).try_inv().is_none());
        assert_eq!(a.mul_ref(&inv), QSeries::one());
    }

    #[test]
    fn constants_adopt_precision() {
        let a = series(&[2, 5], 4);
        let b = a.add_ref(&QSeries::from_int(3));
        assert_eq!(b.precision(), Some(4));
        assert_eq!(b.coeff(0), r(5));
    }

    #[test]
    fn eval_and_derivative() {
        let a = series(&[1, 2, 3], 3);
        let v = a.eval(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 2.75).abs() < 1e-15);
        assert_eq!(a.derivative(), series(&[2, 6], 2));
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec(-20i64..20, 0..8).prop_map(|v| series(&v, 8))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            prop_assert_eq!(a.mul_ref(&QSeries::one()), a.clone());
        }
    }
}
