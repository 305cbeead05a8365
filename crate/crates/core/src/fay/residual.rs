use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::homog::Homog4;
use super::{Divisor, FayError, RESIDUAL_TOL};
use crate::laurent::BiLaurent;
use crate::ring::CoefficientRing;

/// Coefficients `c_{m1,m2,n1,n2}` of the Fay combination
/// `F(u1,v1)F(u2,v2) + F(-u2,v1-v2)F(u1+u2,v1) + F(-u1-u2,-v2)F(u1,v1-v2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FayResidual<R> {
    order: i32,
    pole_depth: u32,
    /// Homogeneous components of degree `0..=order`.
    components: Vec<Homog4<R>>,
    /// The combination times `(u1 u2 v1 v2 (u1+u2)(v1-v2))^P`, components of
    /// degree `6P..=order+6P`.
    cleared: Vec<Homog4<R>>,
}

/// Summary of a residual: largest coefficient and where it sits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub order: i32,
    pub max_abs: f64,
    pub worst_index: Option<[u32; 4]>,
    /// `max_abs` over the squared largest input coefficient.
    pub relative: f64,
}

impl<R: CoefficientRing> FayResidual<R> {
    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, index: [u32; 4]) -> R {
        let t = index.iter().sum::<u32>() as usize;
        self.components
            .get(t)
            .map(|h| h.get(index))
            .unwrap_or_else(R::zero)
    }

    pub fn component(&self, t: u32) -> Option<&Homog4<R>> {
        self.components.get(t as usize)
    }

    /// Coefficient of the cleared form.
    pub fn cleared_coeff(&self, index: [u32; 4]) -> R {
        let s = index.iter().sum::<u32>() as i64 - 6 * self.pole_depth as i64;
        if s < 0 {
            return R::zero();
        }
        self.cleared
            .get(s as usize)
            .map(|h| h.get(index))
            .unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 4], &R)> + '_ {
        self.components.iter().flat_map(|h| h.terms())
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn report(&self, input_scale: f64) -> ResidualReport {
        let mut max_abs = 0.0;
        let mut worst = None;
        for h in &self.components {
            let (m, e) = h.max_magnitude();
            if e.is_some() && (worst.is_none() || m > max_abs) {
                max_abs = m;
                worst = e;
            }
        }
        let denom = input_scale * input_scale;
        ResidualReport {
            order: self.order,
            max_abs,
            worst_index: worst,
            relative: if denom > 0.0 { max_abs / denom } else { max_abs },
        }
    }
}

type Terms<R> = Vec<([u32; 4], R)>;

/// `P(x, y) = (xy)^P f(x, y)` with its arguments replaced by linear forms,
/// split by total degree.
struct Substituted<R> {
    /// `[A, B, C, D, E, F]`: `P(u1,v1)`, `P(u2,v2)`, `P(-u2,v1-v2)`,
    /// `P(u1+u2,v1)`, `P(-u1-u2,-v2)`, `P(u1,v1-v2)`; index by degree.
    parts: [Vec<Terms<R>>; 6],
    lowest: u32,
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn sign(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<R: CoefficientRing> Substituted<R> {
    fn new(f: &BiLaurent<R>, lowest: u32) -> Self {
        let p = f.pole_depth() as i32;
        let top = (f.order() + 2 * p).max(-1);
        let mut parts: [Vec<Terms<R>>; 6] = Default::default();
        for e in 0..=top {
            let mut out: [Terms<R>; 6] = Default::default();
            for i in 0..=e as u32 {
                let j = e as u32 - i;
                let c = f.coeff(i as i32 - p, j as i32 - p);
                if c.is_zero() {
                    continue;
                }
                let scaled = |k: i64| if k == 1 { c.clone() } else { c.mul_int(k) };
                out[0].push(([i, 0, j, 0], c.clone()));
                out[1].push(([0, i, 0, j], c.clone()));
                for k in 0..=j {
                    // (-u2)^i (v1 - v2)^j
                    out[2].push(([0, i, k, j - k], scaled(sign(i + j - k) * binomial(j, k))));
                    // u1^i (v1 - v2)^j
                    out[5].push(([i, 0, k, j - k], scaled(sign(j - k) * binomial(j, k))));
                }
                for k in 0..=i {
                    // (u1 + u2)^i v1^j
                    out[3].push(([k, i - k, j, 0], scaled(binomial(i, k))));
                    // (-u1 - u2)^i (-v2)^j
                    out[4].push(([k, i - k, 0, j], scaled(sign(i + j) * binomial(i, k))));
                }
            }
            for (dst, src) in parts.iter_mut().zip(out) {
                dst.push(src);
            }
        }
        Substituted { parts, lowest }
    }

    fn top(&self) -> i64 {
        self.parts[0].len() as i64 - 1
    }

    /// Degree-`total` part of `parts[a] * parts[b]`.
    fn product(&self, a: usize, b: usize, total: u32) -> Homog4<R> {
        let mut out = Homog4::<R>::zero(total);
        let lo = self.lowest as i64;
        let hi = self.top();
        for e1 in lo.max(total as i64 - hi)..=hi.min(total as i64 - lo) {
            let e2 = total as i64 - e1;
            for (x, cx) in &self.parts[a][e1 as usize] {
                for (y, cy) in &self.parts[b][e2 as usize] {
                    let e = [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]];
                    out.at_mut(e).add_mul_assign(cx, cy);
                }
            }
        }
        out
    }
}

/// Components `(c_t, G_{t+6P})` for a single total degree `t`.
fn component<R: CoefficientRing>(
    sub: &Substituted<R>,
    p: u32,
    t: i32,
    abs_tol: f64,
) -> Result<(Option<Homog4<R>>, Homog4<R>), FayError> {
    let s = t + 6 * p as i32;
    let inner = (s - 2 * p as i32) as u32;
    let mut g = Homog4::zero(s as u32);

    let t1 = sub.product(0, 1, inner);
    // ((u1 + u2)(v1 - v2))^P
    for a in 0..=p {
        for c in 0..=p {
            let k = binomial(p, a) * binomial(p, c) * sign(p - c);
            g.add_shifted(&t1, [a, p - a, c, p - c], k);
        }
    }
    g.add_shifted(&sub.product(2, 3, inner), [p, 0, 0, p], sign(p));
    g.add_shifted(&sub.product(4, 5, inner), [0, p, p, 0], 1);

    let mut h = g.clone();
    for _ in 0..p {
        h = h.div_u_sum(abs_tol).map_err(|(index, magnitude)| FayError::NonzeroRemainder {
            divisor: Divisor::USum,
            index,
            magnitude,
        })?;
    }
    for _ in 0..p {
        h = h
            .div_v_difference(abs_tol)
            .map_err(|(index, magnitude)| FayError::NonzeroRemainder {
                divisor: Divisor::VDifference,
                index,
                magnitude,
            })?;
    }

    let mut c = (t >= 0).then(|| Homog4::zero(t as u32));
    for (e, v) in h.terms() {
        if e.iter().all(|&x| x >= p) {
            if let Some(c) = c.as_mut() {
                *c.at_mut([e[0] - p, e[1] - p, e[2] - p, e[3] - p]) = v.clone();
            }
        } else if !v.is_negligible(abs_tol) {
            let q = p as i32;
            return Err(FayError::NegativeExponent {
                index: [e[0] as i32 - q, e[1] as i32 - q, e[2] as i32 - q, e[3] as i32 - q],
            });
        }
    }
    Ok((c, g))
}

fn setup<R: CoefficientRing>(f: &BiLaurent<R>, order: i32) -> Result<Option<(Substituted<R>, i32)>, FayError> {
    let Some(mu) = f.min_degree() else {
        return Ok(None);
    };
    let available = f.order() + mu;
    if order > available {
        return Err(FayError::InsufficientOrder {
            requested: order,
            available,
        });
    }
    let lowest = (mu + 2 * f.pole_depth() as i32) as u32;
    Ok(Some((Substituted::new(f, lowest), mu)))
}

/// Fay residual through total degree `order`, with the default tolerance.
pub fn fay_residual<R: CoefficientRing>(f: &BiLaurent<R>, order: i32) -> Result<FayResidual<R>, FayError> {
    fay_residual_with_tol(f, order, RESIDUAL_TOL)
}

/// Fay residual through total degree `order`.
///
/// Remainders of the exact divisions must vanish; in floating rings they are
/// compared against `rel_tol` times the squared largest input coefficient.
pub fn fay_residual_with_tol<R: CoefficientRing>(
    f: &BiLaurent<R>,
    order: i32,
    rel_tol: f64,
) -> Result<FayResidual<R>, FayError> {
    let p = f.pole_depth();
    let scale = f.max_magnitude();
    let abs_tol = rel_tol * scale * scale;
    let empty = |order: i32| FayResidual {
        order,
        pole_depth: p,
        components: (0..=order.max(-1)).map(|t| Homog4::zero(t as u32)).collect(),
        cleared: (0..=order.max(-1))
            .map(|t| Homog4::zero((t + 6 * p as i32) as u32))
            .collect(),
    };
    let Some((sub, mu)) = setup(f, order)? else {
        return Ok(empty(order));
    };
    let results = (2 * mu..=order)
        .into_par_iter()
        .map(|t| component(&sub, p, t, abs_tol).map(|r| (t, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = empty(order);
    for (t, (c, g)) in results {
        if t >= 0 {
            out.components[t as usize] = c.expect("non-negative degree");
            out.cleared[t as usize] = g;
        }
    }
    Ok(out)
}

/// The single homogeneous component of degree `t` of the residual.
pub fn fay_residual_component<R: CoefficientRing>(
    f: &BiLaurent<R>,
    t: u32,
    rel_tol: f64,
) -> Result<Homog4<R>, FayError> {
    let scale = f.max_magnitude();
    let Some((sub, _)) = setup(f, t as i32)? else {
        return Ok(Homog4::zero(t));
    };
    let (c, _) = component(&sub, f.pole_depth(), t as i32, rel_tol * scale * scale)?;
    Ok(c.expect("non-negative degree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{kronecker_expand, kronecker_inf, NumericNome};
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn polar_solution_has_zero_residual() {
        let f = BiLaurent::polar(11, q(1), q(1));
        let r = fay_residual(&f, 10).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.order(), 10);
        let f = BiLaurent::polar(11, q(1), q(1)).mul_exp_uv(&q(3));
        assert!(fay_residual(&f, 10).unwrap().is_zero());
    }

    #[test]
    fn first_coefficient_by_hand() {
        let mut f = BiLaurent::polar(5, q(1), q(1));
        f.set(1, 0, q(1)).unwrap();
        let r = fay_residual(&f, 2).unwrap();
        assert_eq!(r.coeff([0, 0, 0, 0]), q(-3));
        let rep = r.report(1.0);
        assert_eq!(rep.worst_index.map(|e| e.iter().sum::<u32>()), Some(0));
    }

    #[test]
    fn cusp_series_is_a_solution() {
        let f = kronecker_inf(13);
        assert!(fay_residual(&f, 12).unwrap().is_zero());
    }

    #[test]
    fn numeric_kronecker_is_a_solution() {
        let f = kronecker_expand(&NumericNome(Complex64::new(0.002, 0.0)), 13).unwrap();
        let r = fay_residual(&f, 12).unwrap();
        let rep = r.report(f.max_magnitude());
        assert!(rep.relative <= 1e-9, "{rep:?}");
    }

    #[test]
    fn component_matches_full_residual() {
        let mut f = kronecker_inf(9);
        f.set(2, 1, q(1)).unwrap();
        let full = fay_residual(&f, 8).unwrap();
        for t in 0..=8 {
            let c = fay_residual_component(&f, t, RESIDUAL_TOL).unwrap();
            assert_eq!(Some(&c), full.component(t));
        }
        assert!(!full.is_zero());
    }

    #[test]
    fn order_is_bounded_by_input() {
        let f = kronecker_inf(9);
        assert_eq!(
            fay_residual(&f, 9),
            Err(FayError::InsufficientOrder { requested: 9, available: 8 })
        );
    }

    #[test]
    fn cleared_form_times_divisors() {
        let mut f = kronecker_inf(5);
        f.set(0, 1, q(2)).unwrap();
        let r = fay_residual(&f, 2).unwrap();
        // G = (u1 u2 v1 v2)(u1 + u2)(v1 - v2) * c; compare the lowest coefficient
        let c0 = r.coeff([0, 0, 0, 0]);
        assert_eq!(r.cleared_coeff([2, 1, 2, 1]), c0.clone());
        assert_eq!(r.cleared_coeff([1, 2, 1, 2]), -c0);
    }
}
