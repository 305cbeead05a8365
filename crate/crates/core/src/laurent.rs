//! Truncated bivariate Laurent series `f(u, v) = sum a_{m,n} u^m v^n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::CoefficientRing;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError {
    #[error("index ({m}, {n}) lies outside the window of the series")]
    OutOfWindow { m: i32, n: i32 },
    #[error("requested total degree {requested} but inputs determine only {available}")]
    Undetermined { requested: i32, available: i32 },
    #[error("{0} is not a unit of the coefficient ring")]
    NonUnit(&'static str),
}

/// Truncated Laurent series in `u, v`.
///
/// Coefficients `a_{m,n}` are stored for `m, n >= -pole_depth` and
/// `m + n <= order`; everything in that window is known, everything outside
/// is either zero (below the window) or undetermined (above `order`).
/// Storage is one vector per antidiagonal `m + n = t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiLaurent<R> {
    order: i32,
    pole_depth: u32,
    diagonals: Vec<Vec<R>>,
}

/// Result of [`BiLaurent::check_shape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    /// `a_{m,n} + (-1)^{m+n} a_{m,n} = 0` for every stored index.
    pub antisymmetric: bool,
    /// `a_{m,n} = 0` whenever `m + n` is even.
    pub parity_ok: bool,
    /// Nonzero polar coefficients only at `(-1, 0)` and `(0, -1)`.
    pub polar_ok: bool,
}

impl ShapeReport {
    pub fn fay_normalized(&self) -> bool {
        self.antisymmetric && self.parity_ok && self.polar_ok
    }
}

impl<R: CoefficientRing> BiLaurent<R> {
    pub fn zero(order: i32, pole_depth: u32) -> Self {
        let p = pole_depth as i32;
        let diagonals = (-2 * p..=order)
            .map(|t| vec![R::zero(); (t + 2 * p + 1) as usize])
            .collect();
        BiLaurent {
            order,
            pole_depth,
            diagonals,
        }
    }

    /// Build from `(m, n, value)` triples; later entries overwrite earlier ones.
    pub fn from_terms<I>(order: i32, pole_depth: u32, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (i32, i32, R)>,
    {
        let mut f = Self::zero(order, pole_depth);
        for (m, n, c) in terms {
            f.set(m, n, c)?;
        }
        Ok(f)
    }

    /// `alpha/u + beta/v`.
    pub fn polar(order: i32, alpha: R, beta: R) -> Self {
        let mut f = Self::zero(order, 1);
        f.set(-1, 0, alpha).expect("in window");
        f.set(0, -1, beta).expect("in window");
        f
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn pole_depth(&self) -> u32 {
        self.pole_depth
    }

    fn p(&self) -> i32 {
        self.pole_depth as i32
    }

    pub fn in_window(&self, m: i32, n: i32) -> bool {
        m >= -self.p() && n >= -self.p() && m + n <= self.order
    }

    pub fn get(&self, m: i32, n: i32) -> Option<&R> {
        if !self.in_window(m, n) {
            return None;
        }
        let p = self.p();
        Some(&self.diagonals[(m + n + 2 * p) as usize][(m + p) as usize])
    }

    /// Coefficient of `u^m v^n`, zero outside the window.
    pub fn coeff(&self, m: i32, n: i32) -> R {
        self.get(m, n).cloned().unwrap_or_else(R::zero)
    }

    pub fn set(&mut self, m: i32, n: i32, value: R) -> Result<(), LaurentError> {
        if !self.in_window(m, n) {
            return Err(LaurentError::OutOfWindow { m, n });
        }
        let p = self.p();
        self.diagonals[(m + n + 2 * p) as usize][(m + p) as usize] = value;
        Ok(())
    }

    /// Entries `(m, n, a_{m,n})` of total degree `t`, zeros included.
    pub fn diagonal(&self, t: i32) -> impl Iterator<Item = (i32, i32, &R)> + '_ {
        let p = self.p();
        let idx = t + 2 * p;
        let slice: &[R] = if idx >= 0 && t <= self.order {
            &self.diagonals[idx as usize]
        } else {
            &[]
        };
        slice
            .iter()
            .enumerate()
            .map(move |(i, c)| (i as i32 - p, t - (i as i32 - p), c))
    }

    /// Nonzero entries in order of increasing total degree, then `m`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, &R)> + '_ {
        let p = self.p();
        (-2 * p..=self.order)
            .flat_map(move |t| self.diagonal(t))
            .filter(|(_, _, c)| !c.is_zero())
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<i32> {
        self.terms().next().map(|(m, n, _)| m + n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms().map(|(_, _, c)| c.magnitude()).fold(0.0, f64::max)
    }

    /// Same series known only through total degree `order` (never raised).
    pub fn truncated(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let p = self.p();
        BiLaurent {
            order,
            pole_depth: self.pole_depth,
            diagonals: self.diagonals[..(order + 2 * p + 1).max(0) as usize].to_vec(),
        }
    }

    /// Re-home into a wider window; fails if a nonzero entry would fall out.
    pub fn with_pole_depth(&self, pole_depth: u32) -> Result<Self, LaurentError> {
        let mut out = Self::zero(self.order, pole_depth);
        for (m, n, c) in self.terms() {
            out.set(m, n, c.clone())?;
        }
        Ok(out)
    }

    pub fn map<S: CoefficientRing>(&self, mut f: impl FnMut(&R) -> S) -> BiLaurent<S> {
        BiLaurent {
            order: self.order,
            pole_depth: self.pole_depth,
            diagonals: self
                .diagonals
                .iter()
                .map(|d| d.iter().map(&mut f).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&R, &R) -> R) -> Self {
        let order = self.order.min(other.order);
        let pole_depth = self.pole_depth.max(other.pole_depth);
        let mut out = Self::zero(order, pole_depth);
        let p = pole_depth as i32;
        for t in -2 * p..=order {
            for m in -p..=t + p {
                let n = t - m;
                let a = self.get(m, n);
                let b = other.get(m, n);
                if a.is_none() && b.is_none() {
                    continue;
                }
                let z = R::zero();
                let v = op(a.unwrap_or(&z), b.unwrap_or(&z));
                out.set(m, n, v).expect("in window");
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub_ref(b))
    }

    /// Highest total degree fully determined by the product with `other`.
    pub fn product_order(&self, other: &Self) -> Option<i32> {
        match (self.min_degree(), other.min_degree()) {
            (Some(ma), Some(mb)) => Some((self.order + mb).min(other.order + ma)),
            _ => None,
        }
    }

    /// Truncated Cauchy product, known through total degree `order`.
    ///
    /// The result window has pole depth `self.P + other.P`. Requests beyond
    /// what the truncated inputs determine are refused.
    pub fn mul(&self, other: &Self, order: i32) -> Result<Self, LaurentError> {
        if let Some(available) = self.product_order(other) {
            if order > available {
                return Err(LaurentError::Undetermined {
                    requested: order,
                    available,
                });
            }
        }
        let mut out = Self::zero(order, self.pole_depth + other.pole_depth);
        let p = out.p();
        let rhs: Vec<(i32, i32, &R)> = other.terms().collect();
        for (m1, n1, a) in self.terms() {
            for &(m2, n2, b) in &rhs {
                let t = m1 + n1 + m2 + n2;
                if t > order {
                    // rhs is sorted by total degree
                    break;
                }
                let m = m1 + m2;
                out.diagonals[(t + 2 * p) as usize][(m + p) as usize].add_mul_assign(a, b);
            }
        }
        Ok(out)
    }

    /// Substitute `(u, v) -> (u/alpha, v/beta)`: `a_{m,n} -> a_{m,n} alpha^{-m} beta^{-n}`.
    pub fn scale_args(&self, alpha: &R, beta: &R) -> Result<Self, LaurentError> {
        let alpha_inv = alpha.try_inv().ok_or(LaurentError::NonUnit("alpha"))?;
        let beta_inv = beta.try_inv().ok_or(LaurentError::NonUnit("beta"))?;
        let power = |x: &R, x_inv: &R, e: i32| {
            if e >= 0 {
                x_inv.pow_u(e as u32)
            } else {
                x.pow_u((-e) as u32)
            }
        };
        let mut out = Self::zero(self.order, self.pole_depth);
        for (m, n, c) in self.terms() {
            let v = c
                .mul_ref(&power(alpha, &alpha_inv, m))
                .mul_ref(&power(beta, &beta_inv, n));
            out.set(m, n, v)?;
        }
        Ok(out)
    }

    /// Multiply by `exp(gamma u v)`, keeping the order of `self`.
    pub fn mul_exp_uv(&self, gamma: &R) -> Self {
        if gamma.is_zero() {
            return self.clone();
        }
        let Some(lowest) = self.min_degree() else {
            return self.clone();
        };
        let mut exp = Self::zero(self.order - lowest, 0);
        let mut term = R::one();
        let mut factorial = BigInt::one();
        let mut k = 0;
        while 2 * k <= self.order - lowest {
            let coeff = term.mul_ref(&R::from_rational(&BigRational::new(
                BigInt::one(),
                factorial.clone(),
            )));
            exp.set(k, k, coeff).expect("in window");
            k += 1;
            term = term.mul_ref(gamma);
            factorial *= k;
        }
        let prod = self
            .mul(&exp, self.order)
            .expect("exp series is determined far enough");
        prod.with_pole_depth(self.pole_depth)
            .expect("multiplying by a power series keeps the window")
    }

    pub fn check_shape(&self) -> ShapeReport {
        let mut report = ShapeReport {
            antisymmetric: true,
            parity_ok: true,
            polar_ok: true,
        };
        for (m, n, c) in self.terms() {
            let even = (m + n).rem_euclid(2) == 0;
            let reflected = if even { c.add_ref(c) } else { c.sub_ref(c) };
            if !reflected.is_zero() {
                report.antisymmetric = false;
            }
            if even {
                report.parity_ok = false;
            }
            if (m < 0 || n < 0) && !((m, n) == (-1, 0) || (m, n) == (0, -1)) {
                report.polar_ok = false;
            }
        }
        report
    }
}

/// The five coefficients that determine a Fay solution.
///
/// `a10` holds `a_{1,0}` except in the branch `a_{0,-1} = 0 != a_{-1,0}`,
/// where the identity forces `a_{1,0} = 0` and the slot carries the free
/// coefficient `a_{0,1}` instead.
#[derive(Clone, Debug, PartialEq)]
pub struct FaySeeds<R> {
    /// `a_{-1,0}`
    pub res_u: R,
    /// `a_{0,-1}`
    pub res_v: R,
    pub a10: R,
    pub a30: R,
    pub a50: R,
}

impl<R: CoefficientRing> FaySeeds<R> {
    pub fn new(res_u: R, res_v: R, a10: R, a30: R, a50: R) -> Self {
        FaySeeds {
            res_u,
            res_v,
            a10,
            a30,
            a50,
        }
    }

    pub fn to_array(&self) -> [R; 5] {
        [
            self.res_u.clone(),
            self.res_v.clone(),
            self.a10.clone(),
            self.a30.clone(),
            self.a50.clone(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn series(order: i32, terms: &[(i32, i32, i64)]) -> BiLaurent<Q> {
        BiLaurent::from_terms(order, 1, terms.iter().map(|&(m, n, c)| (m, n, q(c, 1)))).unwrap()
    }

    #[test]
    fn window_is_enforced() {
        let mut f = BiLaurent::<Q>::zero(3, 1);
        assert!(f.set(-2, 0, q(1, 1)).is_err());
        assert!(f.set(2, 2, q(1, 1)).is_err());
        assert!(f.set(-1, 4, q(1, 1)).is_ok());
        assert_eq!(f.coeff(-1, 4), q(1, 1));
        assert_eq!(f.coeff(7, 7), q(0, 1));
    }

    #[test]
    fn mul_examples() {
        let inv_u = series(3, &[(-1, 0, 1)]);
        let inv_v = series(3, &[(0, -1, 1)]);
        let prod = inv_u.mul(&inv_v, 2).unwrap();
        assert_eq!(prod.pole_depth(), 2);
        assert_eq!(prod.coeff(-1, -1), q(1, 1));
        assert_eq!(prod.terms().count(), 1);

        let sum = series(4, &[(-1, 0, 1), (0, -1, 1)]);
        let uv = series(6, &[(1, 1, 1)]);
        let prod = sum.mul(&uv, 3).unwrap();
        assert_eq!(prod.coeff(1, 0), q(1, 1));
        assert_eq!(prod.coeff(0, 1), q(1, 1));
        assert_eq!(prod.terms().count(), 2);

        let a = series(5, &[(-1, 0, 1), (1, 0, 1)]);
        let sq = a.mul(&a, 4).unwrap();
        assert_eq!(sq.coeff(-2, 0), q(1, 1));
        assert_eq!(sq.coeff(0, 0), q(2, 1));
        assert_eq!(sq.coeff(2, 0), q(1, 1));
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn mul_refuses_undetermined_degrees() {
        let a = series(3, &[(-1, 0, 1), (1, 0, 1)]);
        // known through 3 + (-1) = 2
        assert!(a.mul(&a, 2).is_ok());
        assert_eq!(
            a.mul(&a, 3),
            Err(LaurentError::Undetermined {
                requested: 3,
                available: 2
            })
        );
    }

    #[test]
    fn scale_args_examples() {
        let f = series(3, &[(-1, 0, 1)]);
        let g = f.scale_args(&q(2, 1), &q(1, 1)).unwrap();
        assert_eq!(g.coeff(-1, 0), q(2, 1));
        let f = series(3, &[(1, 2, 1)]);
        let g = f.scale_args(&q(2, 1), &q(3, 1)).unwrap();
        assert_eq!(g.coeff(1, 2), q(1, 18));
        assert_eq!(f.scale_args(&q(1, 1), &q(1, 1)).unwrap(), f);
        assert_eq!(
            f.scale_args(&q(0, 1), &q(1, 1)),
            Err(LaurentError::NonUnit("alpha"))
        );
    }

    #[test]
    fn mul_exp_uv_examples() {
        let alpha = q(3, 1);
        let gamma = q(5, 7);
        let f = BiLaurent::polar(5, alpha.clone(), q(0, 1));
        let g = f.mul_exp_uv(&gamma);
        assert_eq!(g.coeff(0, 1), &alpha * &gamma);
        assert_eq!(g.coeff(1, 2), &alpha * &gamma * &gamma / q(2, 1));
        assert_eq!(f.mul_exp_uv(&q(0, 1)), f);
        let f = series(5, &[(-1, 0, 1), (0, -1, 1)]);
        let g = f.mul_exp_uv(&gamma);
        assert_eq!(g.coeff(1, 0), gamma);
        assert_eq!(g.order(), 5);
        assert_eq!(g.pole_depth(), 1);
    }

    #[test]
    fn shape_examples() {
        let polar = series(3, &[(-1, 0, 1), (0, -1, 1)]);
        let s = polar.check_shape();
        assert!(s.antisymmetric && s.parity_ok && s.polar_ok);
        let s = series(3, &[(-1, 0, 1), (2, 0, 1)]).check_shape();
        assert!(!s.parity_ok && !s.antisymmetric && s.polar_ok);
        let f = BiLaurent::from_terms(3, 2, [(-2, 0, q(1, 1))]).unwrap();
        assert!(!f.check_shape().polar_ok);
    }

    fn arb_series(order: i32) -> impl Strategy<Value = BiLaurent<Q>> {
        let len = ((order + 3) * (order + 4) / 2) as usize;
        prop::collection::vec((-5i64..5, 1i64..4), len).prop_map(move |vals| {
            let mut f = BiLaurent::zero(order, 1);
            let mut it = vals.into_iter();
            for t in -2..=order {
                for m in -1..=t + 1 {
                    let (a, b) = it.next().unwrap();
                    f.set(m, t - m, q(a, b)).unwrap();
                }
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mul_commutative_and_associative(a in arb_series(4), b in arb_series(4), c in arb_series(4)) {
            prop_assert_eq!(a.mul(&b, 2).unwrap(), b.mul(&a, 2).unwrap());
            let left = a.mul(&b, 2).unwrap().mul(&c, 0).unwrap();
            let right = a.mul(&b.mul(&c, 2).unwrap(), 0).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn scale_args_round_trip(f in arb_series(5), a in 1i64..7, b in -6i64..-1) {
            let (alpha, beta) = (q(a, 3), q(b, 5));
            let g = f.scale_args(&alpha, &beta).unwrap();
            let back = g.scale_args(&alpha.recip(), &beta.recip()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn exp_twists_compose(f in arb_series(6), g1 in -4i64..4, g2 in -4i64..4) {
            let (a, b) = (q(g1, 3), q(g2, 2));
            prop_assert_eq!(f.mul_exp_uv(&a).mul_exp_uv(&b), f.mul_exp_uv(&(a + b)));
        }
    }
}
