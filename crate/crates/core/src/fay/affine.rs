use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::CoefficientRing;

/// `c + sum_i l_i x_i` over a ring, for carrying unknowns through the
/// residual. Products of two non-constant values set `nonlinear`, which
/// marks the value as unusable.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<R> {
    pub constant: R,
    /// Sorted by unknown index, no zero entries.
    pub linear: Vec<(usize, R)>,
    pub nonlinear: bool,
}

impl<R: CoefficientRing> Affine<R> {
    pub fn constant(c: R) -> Self {
        Affine {
            constant: c,
            linear: Vec::new(),
            nonlinear: false,
        }
    }

    pub fn unknown(i: usize) -> Self {
        Affine {
            constant: R::zero(),
            linear: vec![(i, R::one())],
            nonlinear: false,
        }
    }

    pub fn coefficient(&self, i: usize) -> R {
        self.linear
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(R::zero)
    }

    fn is_constant(&self) -> bool {
        self.linear.is_empty() && !self.nonlinear
    }

    fn scaled(&self, k: &R) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Affine {
            constant: self.constant.mul_ref(k),
            linear: self
                .linear
                .iter()
                .map(|(i, c)| (*i, c.mul_ref(k)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            nonlinear: self.nonlinear,
        }
    }

    fn combine(&self, rhs: &Self, op: impl Fn(&R, &R) -> R) -> Self {
        let z = R::zero();
        let mut linear = Vec::with_capacity(self.linear.len() + rhs.linear.len());
        let (mut a, mut b) = (self.linear.iter().peekable(), rhs.linear.iter().peekable());
        loop {
            let (i, v) = match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) if i == j => {
                    let out = (*i, op(x, y));
                    a.next();
                    b.next();
                    out
                }
                (Some((i, x)), Some((j, _))) if i < j => {
                    a.next();
                    (*i, op(x, &z))
                }
                (Some((i, x)), None) => {
                    a.next();
                    (*i, op(x, &z))
                }
                (_, Some((j, y))) => {
                    b.next();
                    (*j, op(&z, y))
                }
                (None, None) => break,
            };
            if !v.is_zero() {
                linear.push((i, v));
            }
        }
        Affine {
            constant: op(&self.constant, &rhs.constant),
            linear,
            nonlinear: self.nonlinear || rhs.nonlinear,
        }
    }
}

impl<R: CoefficientRing> Zero for Affine<R> {
    fn zero() -> Self {
        Self::constant(R::zero())
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.is_constant()
    }
}

impl<R: CoefficientRing> One for Affine<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: CoefficientRing> Neg for Affine<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Affine {
            constant: -self.constant,
            linear: self.linear.into_iter().map(|(i, c)| (i, -c)).collect(),
            nonlinear: self.nonlinear,
        }
    }
}

impl<R: CoefficientRing> Add for Affine<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<R: CoefficientRing> Sub for Affine<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<R: CoefficientRing> Mul for Affine<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<R: CoefficientRing> CoefficientRing for Affine<R> {
    const EXACT: bool = R::EXACT;

    fn from_rational(r: &BigRational) -> Self {
        Self::constant(R::from_rational(r))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.add_ref(b))
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.sub_ref(b))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.is_constant() {
            return rhs.scaled(&self.constant);
        }
        if rhs.is_constant() {
            return self.scaled(&rhs.constant);
        }
        let mut out = self.scaled(&rhs.constant).add_ref(&rhs.scaled(&self.constant));
        out.constant = self.constant.mul_ref(&rhs.constant);
        out.nonlinear = true;
        out
    }

    fn mul_int(&self, k: i64) -> Self {
        self.scaled(&R::from_int(k))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_constant() {
            self.constant.try_inv().map(Self::constant)
        } else {
            None
        }
    }

    fn magnitude(&self) -> f64 {
        let lin = self.linear.iter().map(|(_, c)| c.magnitude()).fold(0.0, f64::max);
        let m = self.constant.magnitude().max(lin);
        if self.nonlinear {
            f64::INFINITY
        } else {
            m
        }
    }

    fn to_complex(&self) -> Option<Complex64> {
        if self.is_constant() {
            self.constant.to_complex()
        } else {
            None
        }
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        R::from_complex(z).map(Self::constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = Affine<BigRational>;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn linear_arithmetic() {
        let x = A::unknown(0);
        let y = A::unknown(2);
        let e = x.mul_int(3).add_ref(&y).add_ref(&A::from_int(5));
        let e = e.mul_ref(&A::from_int(2)).sub_ref(&y.mul_int(2));
        assert_eq!(e.constant, r(10));
        assert_eq!(e.linear, vec![(0, r(6))]);
        assert!(!e.nonlinear);
        assert!(x.mul_ref(&y).nonlinear);
        assert!(x.try_inv().is_none());
        assert_eq!(A::from_int(4).try_inv(), Some(A::constant(BigRational::new(1.into(), 4.into()))));
    }
}
