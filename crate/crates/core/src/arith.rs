//! Modular-form scalar kernels: Bernoulli numbers, divisor sums, Eisenstein
//! q-expansions and the numeric inversion of `G4^3 / G6^2`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::qseries::QSeries;

/// Default q-precision for exact computations.
pub const EXACT_Q_PRECISION: usize = 16;
/// Default number of q-terms summed in numeric evaluations.
pub const NUMERIC_Q_PRECISION: usize = 40;
/// Newton iterations allowed in [`invert_ratio`].
pub const NEWTON_MAX_ITER: usize = 50;
/// Nomes returned by the inversion stay inside this disc.
pub const NOME_BASIN_RADIUS: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("Eisenstein weight must be even and at least 2, got {0}")]
    BadWeight(i64),
    #[error("nome |q| = {0} is not inside the unit disc")]
    NomeOutsideDisc(f64),
    #[error("q-precision must be at least 1")]
    EmptyPrecision,
    #[error("Newton inversion did not converge: {0}")]
    NoConvergence(String),
}

fn bernoulli_table() -> &'static RwLock<Vec<BigRational>> {
    static TABLE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    if let Some(b) = bernoulli_table().read().expect("bernoulli table poisoned").get(n) {
        return b.clone();
    }
    let mut table = bernoulli_table().write().expect("bernoulli table poisoned");
    while table.len() <= n {
        let m = table.len();
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += b * &binom;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / BigInt::from(m + 1));
    }
    table[n].clone()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `sigma_k(n) = sum_{d | n} d^k`.
pub fn divisor_sigma(k: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

fn check_weight(k: i64) -> Result<u32, ArithError> {
    if k < 2 || k.is_odd() {
        return Err(ArithError::BadWeight(k));
    }
    Ok(k as u32)
}

/// Constant term `-B_k / (2k)` of the Hecke-normalised Eisenstein series.
pub fn eisenstein_constant(k: i64) -> Result<BigRational, ArithError> {
    let k = check_weight(k)?;
    Ok(-bernoulli(k as usize) / BigInt::from(2 * k))
}

/// `G_k = -B_k/(2k) + sum_{n>=1} sigma_{k-1}(n) q^n + O(q^{n_q})`.
pub fn eisenstein_q(k: i64, n_q: usize) -> Result<QSeries, ArithError> {
    let constant = eisenstein_constant(k)?;
    if n_q == 0 {
        return Err(ArithError::EmptyPrecision);
    }
    let mut coeffs = Vec::with_capacity(n_q);
    coeffs.push(constant);
    for n in 1..n_q {
        coeffs.push(BigRational::from_integer(divisor_sigma(k as u32 - 1, n as u64)));
    }
    Ok(QSeries::new(coeffs, n_q))
}

/// Numeric value of a truncated Eisenstein series, with a tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinValue {
    pub value: Complex64,
    /// `|q|^N * N^k / (1 - |q|)`.
    pub tail_bound: f64,
}

fn check_nome(q: Complex64) -> Result<(), ArithError> {
    if !(q.norm() < 1.0) {
        return Err(ArithError::NomeOutsideDisc(q.norm()));
    }
    Ok(())
}

/// Floating point coefficients of `G_k` up to `q^{n_q - 1}`.
fn eisenstein_f64(k: i64, n_q: usize) -> Result<Vec<f64>, ArithError> {
    let series = eisenstein_q(k, n_q)?;
    Ok((0..n_q)
        .map(|i| series.coeff(i).to_f64().unwrap_or(f64::INFINITY))
        .collect())
}

fn horner(coeffs: &[f64], q: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::zero();
    let mut deriv = Complex64::zero();
    for &c in coeffs.iter().rev() {
        deriv = deriv * q + value;
        value = value * q + c;
    }
    (value, deriv)
}

/// Evaluate `G_k(q)` by summing its first `n_q` terms.
pub fn eisenstein_at(k: i64, q: Complex64, n_q: usize) -> Result<EisensteinValue, ArithError> {
    check_nome(q)?;
    let coeffs = eisenstein_f64(k, n_q)?;
    let (value, _) = horner(&coeffs, q);
    let r = q.norm();
    let tail_bound = r.powi(n_q as i32) * (n_q as f64).powi(k as i32) / (1.0 - r);
    Ok(EisensteinValue { value, tail_bound })
}

/// The modular function `R = G4^3 / G6^2` as an exact q-series.
///
/// Its radius of convergence is limited by the zero of `G6` at `q = e^{-2 pi}`,
/// so numeric work evaluates `G4` and `G6` separately instead.
pub fn ratio_q(n_q: usize) -> Result<QSeries, ArithError> {
    use crate::ring::CoefficientRing;
    let g4 = eisenstein_q(4, n_q)?;
    let g6 = eisenstein_q(6, n_q)?;
    let inv = g6.mul_ref(&g6).try_inv().expect("G6 has a nonzero constant term");
    Ok(g4.mul_ref(&g4).mul_ref(&g4).mul_ref(&inv))
}

/// `R(q) = G4(q)^3 / G6(q)^2`, summing `n_q` terms of each series.
pub fn ratio_at(q: Complex64, n_q: usize) -> Result<Complex64, ArithError> {
    check_nome(q)?;
    let g4 = horner(&eisenstein_f64(4, n_q)?, q).0;
    let g6 = horner(&eisenstein_f64(6, n_q)?, q).0;
    Ok(g4 * g4 * g4 / (g6 * g6))
}

/// A value of `R` in projective form `num / den`; `den = 0` is the pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioTarget {
    pub num: Complex64,
    pub den: Complex64,
}

impl RatioTarget {
    pub fn finite(value: Complex64) -> Self {
        RatioTarget {
            num: value,
            den: Complex64::one(),
        }
    }

    fn normalized(self) -> Self {
        let s = self.num.norm().max(self.den.norm());
        if s == 0.0 {
            return self;
        }
        RatioTarget {
            num: self.num / s,
            den: self.den / s,
        }
    }
}

/// Newton start points for the nome inversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NomeStart {
    /// `q = 0` (the cusp).
    #[default]
    Cusp,
    /// `q(i) = e^{-2 pi}`, where `G6` vanishes.
    SquareRootOfMinusOne,
    /// `q(rho) = -e^{-pi sqrt 3}`, where `G4` vanishes.
    CubeRootOfUnity,
}

impl NomeStart {
    pub fn nome(self) -> Complex64 {
        match self {
            NomeStart::Cusp => Complex64::zero(),
            NomeStart::SquareRootOfMinusOne => {
                Complex64::new((-2.0 * std::f64::consts::PI).exp(), 0.0)
            }
            NomeStart::CubeRootOfUnity => {
                Complex64::new(-(-std::f64::consts::PI * 3f64.sqrt()).exp(), 0.0)
            }
        }
    }
}

/// Solve `R(q) = target` by Newton iteration from `q = 0`.
pub fn invert_ratio(target: Complex64, tol: f64) -> Result<Complex64, ArithError> {
    invert_ratio_from(RatioTarget::finite(target), tol, NomeStart::Cusp)
}

/// Solve `den * G4(q)^3 - num * G6(q)^2 = 0` by damped Newton iteration.
///
/// The projective form has no poles, so the same routine reaches the zeros
/// of `G4` (`num = 0`) and of `G6` (`den = 0`). A step is halved while it
/// leaves the disc `|q| < 0.05` or fails to decrease the defect.
pub fn invert_ratio_from(
    target: RatioTarget,
    tol: f64,
    start: NomeStart,
) -> Result<Complex64, ArithError> {
    if !(target.num.is_finite() && target.den.is_finite()) {
        return Err(ArithError::NoConvergence("target is not finite".into()));
    }
    let RatioTarget { num, den } = target.normalized();
    if num == Complex64::zero() && den == Complex64::zero() {
        return Err(ArithError::NoConvergence("target 0/0".into()));
    }
    let g4c = eisenstein_f64(4, NUMERIC_Q_PRECISION)?;
    let g6c = eisenstein_f64(6, NUMERIC_Q_PRECISION)?;
    let eval = |q: Complex64| {
        let (g4, d4) = horner(&g4c, q);
        let (g6, d6) = horner(&g6c, q);
        let h = den * g4 * g4 * g4 - num * g6 * g6;
        let dh = den * 3.0 * g4 * g4 * d4 - num * 2.0 * g6 * d6;
        // floor at the cusp values so that the zeros of G4, G6 keep a scale
        let scale = den.norm() * g4.norm().max(1.0 / 240.0).powi(3)
            + num.norm() * g6.norm().max(1.0 / 504.0).powi(2);
        (h, dh, scale)
    };

    let mut q = start.nome();
    let (mut h, mut dh, mut scale) = eval(q);
    for _ in 0..NEWTON_MAX_ITER {
        if h.norm() <= tol * scale {
            return Ok(q);
        }
        if dh.norm() == 0.0 {
            return Err(ArithError::NoConvergence(format!("flat derivative at q = {q}")));
        }
        let mut step = h / dh;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = q - step;
            if cand.norm() < NOME_BASIN_RADIUS {
                let next = eval(cand);
                if next.0.norm() < h.norm() {
                    accepted = Some((cand, next));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((cand, next)) = accepted else {
            return Err(ArithError::NoConvergence(format!(
                "no damped step decreases the defect at q = {q}"
            )));
        };
        q = cand;
        (h, dh, scale) = next;
    }
    if h.norm() <= tol * scale {
        return Ok(q);
    }
    Err(ArithError::NoConvergence(format!(
        "{NEWTON_MAX_ITER} iterations exhausted, defect {:.3e}",
        h.norm() / scale.max(f64::MIN_POSITIVE)
    )))
}

/// `|x|` for rationals, used in reports.
pub fn rational_abs_f64(x: &BigRational) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}
