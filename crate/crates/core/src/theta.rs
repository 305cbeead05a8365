//! Jacobi theta function, the Kronecker function and its cusp limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::arith::{bernoulli, factorial};
use crate::laurent::BiLaurent;
use crate::qseries::QSeries;
use crate::ring::CoefficientRing;

/// Relative size below which a theta term is dropped in numeric mode.
pub const NUMERIC_CUTOFF: f64 = 1e-18;
/// Minimum distance of trisecant arguments from the zeros of theta.
pub const ZERO_MARGIN: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("order must be at least 1, got {0}")]
    BadOrder(i32),
    #[error("nome {0} is not inside the unit disc")]
    NomeOutsideDisc(Complex64),
    #[error("leading theta coefficient is not a unit")]
    NonUnit,
}

/// Where the theta function is expanded.
pub trait Nome: Sync {
    type Ring: CoefficientRing;

    /// Taylor coefficients `t_0..=t_{j_max}` of `q^{-1/8} theta(u)`.
    fn theta_coefficients(&self, j_max: usize) -> Result<Vec<Self::Ring>, ThetaError>;
}

/// Formal nome: coefficients are q-series truncated at `q^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormalNome {
    pub precision: usize,
}

/// A numeric nome `|q| < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericNome(pub Complex64);

/// The cusp `q = 0` over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cusp;

fn triangular(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `2 (n + 1/2)^j / j!` as an exact rational.
fn pair_weight(n: usize, j: usize) -> BigRational {
    let half = BigRational::new((2 * n as i64 + 1).into(), 2.into());
    let mut w = BigRational::from_integer(2.into());
    for _ in 0..j {
        w *= &half;
    }
    w / BigRational::from_integer(factorial(j as u32))
}

impl Nome for FormalNome {
    type Ring = QSeries<BigRational>;

    fn theta_coefficients(&self, j_max: usize) -> Result<Vec<Self::Ring>, ThetaError> {
        let n_q = self.precision;
        Ok((0..=j_max)
            .map(|j| {
                let mut coeffs = vec![BigRational::zero(); n_q];
                if j % 2 == 1 {
                    let mut n = 0;
                    while triangular(n) < n_q {
                        let w = pair_weight(n, j);
                        coeffs[triangular(n)] = if n % 2 == 0 { w } else { -w };
                        n += 1;
                    }
                }
                QSeries::new(coeffs, n_q)
            })
            .collect())
    }
}

impl Nome for Cusp {
    type Ring = BigRational;

    fn theta_coefficients(&self, j_max: usize) -> Result<Vec<Self::Ring>, ThetaError> {
        Ok((0..=j_max)
            .map(|j| {
                if j % 2 == 1 {
                    pair_weight(0, j)
                } else {
                    BigRational::zero()
                }
            })
            .collect())
    }
}

impl Nome for NumericNome {
    type Ring = Complex64;

    fn theta_coefficients(&self, j_max: usize) -> Result<Vec<Self::Ring>, ThetaError> {
        let q = self.0;
        let r = q.norm();
        if !(r < 1.0) {
            return Err(ThetaError::NomeOutsideDisc(q));
        }
        let mut out = Vec::with_capacity(j_max + 1);
        let mut j_factorial = 1.0;
        for j in 0..=j_max {
            if j > 0 {
                j_factorial *= j as f64;
            }
            if j % 2 == 0 {
                out.push(Complex64::zero());
                continue;
            }
            // terms relative to the n = 0 term: |q|^{T_n} (2n+1)^j
            let mut acc = Complex64::zero();
            let mut prev_ratio = f64::INFINITY;
            let mut n = 0usize;
            loop {
                let t = triangular(n);
                let ratio = r.powi(t as i32) * ((2 * n + 1) as f64).powi(j as i32);
                if n > 0 && ratio < NUMERIC_CUTOFF && ratio < prev_ratio {
                    break;
                }
                if ratio == 0.0 && n > 0 {
                    break;
                }
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let magnitude = 2.0 * (n as f64 + 0.5).powi(j as i32) / j_factorial;
                acc += q.powu(t as u32) * (sign * magnitude);
                prev_ratio = ratio;
                n += 1;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

pub fn nome_from_tau(tau: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * tau).exp()
}

/// Taylor coefficients of `q^{-1/8} theta(u) = sum_j t_j u^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSeries<R> {
    pub coeffs: Vec<R>,
}

pub fn theta_u_series<N: Nome>(nome: &N, j_max: usize) -> Result<ThetaSeries<N::Ring>, ThetaError> {
    Ok(ThetaSeries {
        coeffs: nome.theta_coefficients(j_max)?,
    })
}

/// Laurent expansion of `F(u, v) = theta'(0) theta(u+v) / (theta(u) theta(v))`
/// through total degree `order`.
pub fn kronecker_expand<N: Nome>(nome: &N, order: i32) -> Result<BiLaurent<N::Ring>, ThetaError> {
    if order < 1 {
        return Err(ThetaError::BadOrder(order));
    }
    // uv F is a power series known through degree order + 2
    let top = (order + 2) as usize;
    let t = nome.theta_coefficients(top)?;

    // V(x) = x / theta(x)
    let unit: Vec<N::Ring> = t[1..].to_vec();
    let inv0 = unit[0].try_inv().ok_or(ThetaError::NonUnit)?;
    let mut v: Vec<N::Ring> = vec![inv0.clone()];
    for k in 1..=top {
        let mut acc = N::Ring::zero();
        for i in 1..=k.min(unit.len() - 1) {
            acc.add_mul_assign(&unit[i], &v[k - i]);
        }
        v.push(-inv0.mul_ref(&acc));
    }

    let top = top as i32;
    let mut theta_sum = BiLaurent::zero(top, 0);
    for j in 1..=top {
        let tj = t[j as usize].mul_ref(&t[1]);
        if tj.is_zero() {
            continue;
        }
        let mut binom = num_bigint::BigInt::one();
        for m in 0..=j {
            let c = tj.mul_ref(&N::Ring::from_rational(&BigRational::from_integer(
                binom.clone(),
            )));
            theta_sum.set(m, j - m, c).expect("in window");
            binom = binom * (j - m) / (m + 1);
        }
    }
    let v_u = BiLaurent::from_terms(top, 0, v.iter().enumerate().map(|(k, c)| (k as i32, 0, c.clone())))
        .expect("in window");
    let v_v = BiLaurent::from_terms(top, 0, v.iter().enumerate().map(|(k, c)| (0, k as i32, c.clone())))
        .expect("in window");
    let h = theta_sum
        .mul(&v_u, top)
        .and_then(|p| p.mul(&v_v, top))
        .expect("power series products are determined");

    let mut f = BiLaurent::zero(order, 1);
    for (m, n, c) in h.terms() {
        if m + n - 2 <= order {
            f.set(m - 1, n - 1, c.clone()).expect("in window");
        }
    }
    Ok(f)
}

/// `F` at the cusp: `(coth(u/2) + coth(v/2)) / 2`, exactly.
pub fn kronecker_inf(order: i32) -> BiLaurent<BigRational> {
    let mut f = BiLaurent::zero(order.max(-1), 1);
    let _ = f.set(-1, 0, BigRational::one());
    let _ = f.set(0, -1, BigRational::one());
    let mut k = 1;
    while 2 * k - 1 <= order {
        let c = bernoulli(2 * k as usize)
            / BigRational::from_integer(factorial(2 * k as u32));
        f.set(2 * k - 1, 0, c.clone()).expect("in window");
        f.set(0, 2 * k - 1, c).expect("in window");
        k += 1;
    }
    f
}

fn canonical_sign(z: Complex64) -> bool {
    z.re > 0.0 || (z.re == 0.0 && z.im >= 0.0)
}

/// `q^{-1/8} theta(u)` by direct summation, exactly odd in `u`.
pub fn theta_value(q: Complex64, u: Complex64) -> Complex64 {
    if !canonical_sign(u) {
        return -theta_value(q, -u);
    }
    let r = q.norm();
    let mut acc = Complex64::zero();
    let mut n = 0usize;
    loop {
        let x = u * (n as f64 + 0.5);
        let bound = r.powi(triangular(n) as i32) * 2.0 * x.re.abs().exp();
        if n > 0 && (bound <= NUMERIC_CUTOFF * acc.norm() || bound == 0.0) {
            break;
        }
        let term = q.powu(triangular(n) as u32) * x.sinh() * 2.0;
        acc += if n % 2 == 0 { term } else { -term };
        n += 1;
        if n > 200 {
            break;
        }
    }
    acc
}

/// A trisecant sample `(alpha_0, alpha_1, beta_0, beta_1)`.
pub type TrisecantSample = [Complex64; 4];

/// The three products of four theta arguments in the symmetric four-term
/// identity.
pub fn trisecant_arguments(sample: &TrisecantSample) -> [[Complex64; 4]; 3] {
    let [a0, a1, b0, b1] = *sample;
    let a = [a0, a1, -a0 - a1];
    let b = [b0, b1, -b0 - b1];
    let mut out = [[Complex64::zero(); 4]; 3];
    for i in 0..3 {
        let prev = (i + 2) % 3;
        let next = (i + 1) % 3;
        out[i] = [a[i], b[i], a[prev] + b[next], a[next] - b[prev]];
    }
    out
}

/// `|sum of products| / max |product|` for the given argument table.
pub fn trisecant_residual_of(q: Complex64, args: &[[Complex64; 4]; 3]) -> f64 {
    let mut sum = Complex64::zero();
    let mut biggest: f64 = 0.0;
    for row in args {
        let mut negative = false;
        let mut factors: Vec<Complex64> = row
            .iter()
            .map(|&x| {
                let mut t = theta_value(q, x);
                if !canonical_sign(t) {
                    t = -t;
                    negative = !negative;
                }
                t
            })
            .collect();
        // fixed multiplication order so equal multisets give equal products
        factors.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        let mut p = factors.iter().fold(Complex64::one(), |acc, f| acc * f);
        if negative {
            p = -p;
        }
        biggest = biggest.max(p.norm());
        sum += p;
    }
    if biggest == 0.0 {
        0.0
    } else {
        sum.norm() / biggest
    }
}

/// Maximum relative residual of the four-term theta identity over the samples.
pub fn trisecant_check(q: Complex64, samples: &[TrisecantSample]) -> Result<f64, ThetaError> {
    if !(q.norm() < 1.0) {
        return Err(ThetaError::NomeOutsideDisc(q));
    }
    Ok(samples
        .iter()
        .map(|s| trisecant_residual_of(q, &trisecant_arguments(s)))
        .fold(0.0, f64::max))
}

/// Distance from `z` to the zero lattice `2 pi i Z + Z log q` of theta.
pub fn distance_to_theta_zeros(q: Complex64, z: Complex64) -> f64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    if q.norm() == 0.0 {
        let m = (z.im / (2.0 * PI)).round();
        return (z - two_pi_i * m).norm();
    }
    let log_q = q.ln();
    let n0 = (z.re / log_q.re).round() as i64;
    let mut best = f64::INFINITY;
    for n in n0 - 2..=n0 + 2 {
        let w = z - log_q * n as f64;
        let m0 = (w.im / (2.0 * PI)).round() as i64;
        for m in m0 - 1..=m0 + 1 {
            best = best.min((w - two_pi_i * m as f64).norm());
        }
    }
    best
}

/// Draw a sample in the box `|Re|, |Im| <= 1` whose twelve theta arguments
/// all stay `ZERO_MARGIN` away from the zeros.
pub fn admissible_sample<G: Rng + ?Sized>(q: Complex64, rng: &mut G) -> TrisecantSample {
    loop {
        let mut s = [Complex64::zero(); 4];
        for z in s.iter_mut() {
            *z = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        }
        let ok = trisecant_arguments(&s)
            .iter()
            .flatten()
            .all(|&x| distance_to_theta_zeros(q, x) >= ZERO_MARGIN);
        if ok {
            return s;
        }
    }
}
