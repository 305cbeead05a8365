//! Classification of Fay solutions and recovery of their parameters.
//!
//! Every solution is zero, a polar series `e^{g uv}(a/u + b/v)` (possibly with
//! one residue zero), or `d e^{g uv} F_tau(u/a, v/b)` for the Kronecker
//! function `F_tau`.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{eisenstein_at, invert_ratio_from, NomeStart, RatioTarget, NUMERIC_Q_PRECISION};
use crate::fay::{fay_residual_with_tol, FayError, RESIDUAL_TOL};
use crate::json::JsonScalar;
use crate::laurent::BiLaurent;
use crate::ring::{principal_root, CoefficientRing};
use crate::theta::{kronecker_expand, Cusp, NumericNome};

/// Order at which parameter tuples are compared.
pub const EQUIVALENCE_ORDER: i32 = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("not a solution of the Fay identity: {detail}")]
    NotAFaySolution {
        worst_index: Option<[u32; 4]>,
        detail: String,
    },
    #[error("parameter recovery failed: {0}")]
    RecoveryFailed(String),
    #[error("classification needs order at least 7, got {0}")]
    InsufficientOrder(i32),
    #[error("{0}")]
    Unsupported(String),
}

/// A point of the upper half plane or the cusp, stored as its nome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModularPoint {
    pub q: Complex64,
}

impl ModularPoint {
    pub fn cusp() -> Self {
        ModularPoint { q: Complex64::zero() }
    }

    pub fn is_cusp(&self) -> bool {
        self.q == Complex64::zero()
    }

    /// `log q / (2 pi i)` on the principal branch; `None` at the cusp.
    pub fn tau(&self) -> Option<Complex64> {
        if self.is_cusp() {
            return None;
        }
        Some(self.q.ln() / Complex64::new(0.0, 2.0 * std::f64::consts::PI))
    }
}

/// `f = delta e^{gamma uv} F_q(u/alpha, v/beta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub point: ModularPoint,
}

impl EllipticParams {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64, q: Complex64) -> Self {
        EllipticParams {
            alpha,
            beta,
            gamma,
            delta,
            point: ModularPoint { q },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionClass<R> {
    Zero,
    /// `alpha e^{gamma uv} / u`
    PolarU { alpha: R, gamma: R },
    /// `beta e^{gamma uv} / v`
    PolarV { beta: R, gamma: R },
    /// `e^{gamma uv} (alpha/u + beta/v)`
    Polar { alpha: R, beta: R, gamma: R },
    Elliptic(EllipticParams),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Relative tolerance for vanishing tests and the rebuild check.
    pub tol: f64,
    /// Relative tolerance for the Fay residual.
    pub residual_tol: f64,
    /// Newton starts tried in order for the elliptic branch.
    pub starts: Vec<NomeStart>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol: 1e-6,
            residual_tol: RESIDUAL_TOL,
            starts: vec![
                NomeStart::Cusp,
                NomeStart::CubeRootOfUnity,
                NomeStart::SquareRootOfMinusOne,
            ],
        }
    }
}

fn complex_of<R: CoefficientRing>(x: &R, what: &str) -> Result<Complex64, ClassifyError> {
    x.to_complex().ok_or_else(|| {
        ClassifyError::Unsupported(format!("{what} has no numeric value in this coefficient ring"))
    })
}

fn vanishes<R: CoefficientRing>(x: &R, tol: f64, scale: f64) -> bool {
    x.is_negligible(tol * scale)
}

/// Decide which family `f` belongs to and recover its parameters.
pub fn classify<R: CoefficientRing>(
    f: &BiLaurent<R>,
    opts: &ClassifyOptions,
) -> Result<SolutionClass<R>, ClassifyError> {
    if f.order() < 7 {
        return Err(ClassifyError::InsufficientOrder(f.order()));
    }
    let scale = f.max_magnitude();
    let stray_pole = f.terms().into_iter().any(|(m, n, c)| {
        (m < 0 || n < 0) && (m, n) != (-1, 0) && (m, n) != (0, -1) && !vanishes(c, opts.tol, scale)
    });
    if stray_pole {
        return Err(ClassifyError::NotAFaySolution {
            worst_index: None,
            detail: "poles beyond 1/u and 1/v".into(),
        });
    }
    let residual = fay_residual_with_tol(f, f.order() - 1, opts.residual_tol).map_err(|e| {
        let worst_index = match &e {
            FayError::NonzeroRemainder { index, .. } => Some(*index),
            _ => None,
        };
        ClassifyError::NotAFaySolution {
            worst_index,
            detail: e.to_string(),
        }
    })?;
    let report = residual.report(scale);
    let fails = if R::EXACT {
        report.worst_index.is_some()
    } else {
        report.relative > opts.residual_tol
    };
    if fails {
        return Err(ClassifyError::NotAFaySolution {
            worst_index: report.worst_index,
            detail: format!(
                "residual {:.3e} at {:?}",
                report.relative,
                report.worst_index.unwrap_or_default()
            ),
        });
    }

    let res_u = f.coeff(-1, 0);
    let res_v = f.coeff(0, -1);
    let zero_u = vanishes(&res_u, opts.tol, scale);
    let zero_v = vanishes(&res_v, opts.tol, scale);
    let div = |num: R, den: &R| -> Result<R, ClassifyError> {
        let inv = den
            .try_inv()
            .ok_or_else(|| ClassifyError::RecoveryFailed("residue is not a unit".into()))?;
        Ok(num.mul_ref(&inv))
    };
    let candidate = match (zero_u, zero_v) {
        (true, true) => SolutionClass::Zero,
        (false, true) => SolutionClass::PolarU {
            gamma: div(f.coeff(0, 1), &res_u)?,
            alpha: res_u,
        },
        (true, false) => SolutionClass::PolarV {
            gamma: div(f.coeff(1, 0), &res_v)?,
            beta: res_v,
        },
        (false, false) => {
            if vanishes(&f.coeff(3, 0), opts.tol, scale) && vanishes(&f.coeff(5, 0), opts.tol, scale) {
                SolutionClass::Polar {
                    gamma: div(f.coeff(1, 0), &res_v)?,
                    alpha: res_u,
                    beta: res_v,
                }
            } else {
                return classify_elliptic(f, opts);
            }
        }
    };
    let rebuilt = build_solution(&candidate, f.order())?;
    if agrees(f, &rebuilt, opts.tol) {
        Ok(candidate)
    } else {
        Err(ClassifyError::RecoveryFailed(
            "rebuilt polar series does not reproduce the input".into(),
        ))
    }
}

fn classify_elliptic<R: CoefficientRing>(
    f: &BiLaurent<R>,
    opts: &ClassifyOptions,
) -> Result<SolutionClass<R>, ClassifyError> {
    let target = to_complex_series(f)?;
    let mut last = ClassifyError::RecoveryFailed("no Newton start configured".into());
    for &start in &opts.starts {
        match recover_elliptic_params(f, opts.tol, start) {
            Ok(p) => {
                let rebuilt = build_elliptic(&p, f.order())
                    .map_err(|e| ClassifyError::RecoveryFailed(e.to_string()))?;
                if agrees(&target, &rebuilt, opts.tol) {
                    return Ok(SolutionClass::Elliptic(p));
                }
                last = ClassifyError::RecoveryFailed(format!(
                    "parameters from the {start:?} start do not reproduce the input"
                ));
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn to_complex_series<R: CoefficientRing>(f: &BiLaurent<R>) -> Result<BiLaurent<Complex64>, ClassifyError> {
    let mut out = BiLaurent::zero(f.order(), f.pole_depth());
    for (m, n, c) in f.terms() {
        out.set(m, n, complex_of(c, "a coefficient")?)
            .expect("same window");
    }
    Ok(out)
}

/// `max |f - g| <= tol * max |f|`; exact rings demand equality.
fn agrees<R: CoefficientRing>(f: &BiLaurent<R>, g: &BiLaurent<R>, tol: f64) -> bool {
    let diff = f.sub(g);
    if R::EXACT {
        return diff.is_zero();
    }
    diff.max_magnitude() <= tol * f.max_magnitude().max(g.max_magnitude())
}

/// Drop real or imaginary parts that are rounding noise relative to `reference`.
fn chop(z: Complex64, reference: f64) -> Complex64 {
    let eps = 1e-13 * reference;
    let part = |x: f64| if x.abs() <= eps { 0.0 } else { x };
    Complex64::new(part(z.re), part(z.im))
}

/// `(alpha, beta, gamma, delta, q)` with `f = delta e^{gamma uv} F_q(u/alpha, v/beta)`.
///
/// The Newton start also selects how `alpha` is taken: from `alpha^4` and
/// `alpha^6` together at the cusp start, from `alpha^6` alone at the
/// `rho` start (where `G4` vanishes) and from `alpha^4` alone at the `i`
/// start (where `G6` vanishes).
pub fn recover_elliptic_params<R: CoefficientRing>(
    f: &BiLaurent<R>,
    tol: f64,
    start: NomeStart,
) -> Result<EllipticParams, ClassifyError> {
    let a = complex_of(&f.coeff(-1, 0), "a_{-1,0}")?;
    let b = complex_of(&f.coeff(0, -1), "a_{0,-1}")?;
    let a10 = complex_of(&f.coeff(1, 0), "a_{1,0}")?;
    let a30 = complex_of(&f.coeff(3, 0), "a_{3,0}")?;
    let a50 = complex_of(&f.coeff(5, 0), "a_{5,0}")?;
    if a == Complex64::zero() || b == Complex64::zero() {
        return Err(ClassifyError::RecoveryFailed("a residue vanishes".into()));
    }
    let target = RatioTarget {
        num: -3.0 * a30 * a30 * a30,
        den: 400.0 * a50 * a50 * a,
    };
    let q = invert_ratio_from(target, 1e-13, start)
        .map_err(|e| ClassifyError::RecoveryFailed(e.to_string()))?;
    let g = |k: i64| -> Result<Complex64, ClassifyError> {
        eisenstein_at(k, q, NUMERIC_Q_PRECISION)
            .map(|v| v.value)
            .map_err(|e| ClassifyError::RecoveryFailed(e.to_string()))
    };
    let (g2, g4, g6) = (g(2)?, g(4)?, g(6)?);
    let alpha4 = (a30 != Complex64::zero()).then(|| -g4 * a / (3.0 * a30));
    let alpha6 = (a50 != Complex64::zero()).then(|| -g6 * a / (60.0 * a50));
    let alpha = match (start, alpha4, alpha6) {
        (NomeStart::Cusp, Some(x4), Some(x6)) => {
            let alpha2 = x6 / x4;
            if (x4 - alpha2 * alpha2).norm() > tol * x4.norm() {
                return Err(ClassifyError::RecoveryFailed(format!(
                    "alpha^4 = {x4} disagrees with (alpha^6/alpha^4)^2 = {}",
                    alpha2 * alpha2
                )));
            }
            principal_root(alpha2, 2)
        }
        (NomeStart::CubeRootOfUnity, _, Some(x6)) => principal_root(x6, 6),
        (NomeStart::SquareRootOfMinusOne, Some(x4), _) => principal_root(x4, 4),
        _ => {
            return Err(ClassifyError::RecoveryFailed(format!(
                "a_{{3,0}} or a_{{5,0}} vanishes; the {start:?} start cannot fix alpha"
            )))
        }
    };
    if !(alpha.is_finite() && alpha.norm() > 0.0) {
        return Err(ClassifyError::RecoveryFailed(format!("degenerate alpha {alpha}")));
    }
    for (power, value) in [(4, alpha4), (6, alpha6)] {
        if let Some(v) = value {
            if (alpha.powu(power) - v).norm() > tol * v.norm() {
                return Err(ClassifyError::RecoveryFailed(format!(
                    "alpha^{power} is inconsistent with a_{{{},0}}",
                    power - 1
                )));
            }
        }
    }
    let alpha = chop(alpha, alpha.norm());
    let delta = chop(a / alpha, (a / alpha).norm());
    let beta = chop(b / delta, (b / delta).norm());
    let shift = 2.0 * a * g2 / (alpha * alpha);
    let gamma = chop((a10 + shift) / b, (a10.norm() + shift.norm()) / b.norm());
    Ok(EllipticParams::new(alpha, beta, gamma, delta, chop(q, q.norm())))
}

/// Expansion of an elliptic parameter tuple with complex coefficients.
pub fn build_elliptic(p: &EllipticParams, order: i32) -> Result<BiLaurent<Complex64>, ClassifyError> {
    let base = kronecker_expand(&NumericNome(p.point.q), order)
        .map_err(|e| ClassifyError::Unsupported(e.to_string()))?;
    twist(&base, &p.alpha, &p.beta, &p.gamma, &p.delta)
}

fn twist<R: CoefficientRing>(base: &BiLaurent<R>, alpha: &R, beta: &R, gamma: &R, delta: &R) -> Result<BiLaurent<R>, ClassifyError> {
    let scaled = base
        .scale_args(alpha, beta)
        .map_err(|e| ClassifyError::Unsupported(e.to_string()))?;
    Ok(scaled.mul_exp_uv(gamma).scale(delta))
}

/// Expansion of the closed form named by `class`.
///
/// Elliptic classes at the cusp are built exactly when the parameters are
/// representable in `R`; elsewhere their complex expansion is converted.
pub fn build_solution<R: CoefficientRing>(
    class: &SolutionClass<R>,
    order: i32,
) -> Result<BiLaurent<R>, ClassifyError> {
    let zero = R::zero;
    Ok(match class {
        SolutionClass::Zero => BiLaurent::zero(order, 1),
        SolutionClass::PolarU { alpha, gamma } => BiLaurent::polar(order, alpha.clone(), zero()).mul_exp_uv(gamma),
        SolutionClass::PolarV { beta, gamma } => BiLaurent::polar(order, zero(), beta.clone()).mul_exp_uv(gamma),
        SolutionClass::Polar { alpha, beta, gamma } => {
            BiLaurent::polar(order, alpha.clone(), beta.clone()).mul_exp_uv(gamma)
        }
        SolutionClass::Elliptic(p) => {
            let conv = |z: Complex64| {
                R::from_complex(z).ok_or_else(|| {
                    ClassifyError::Unsupported(format!("{z} is not representable in this ring"))
                })
            };
            if p.point.is_cusp() {
                let base = kronecker_expand(&Cusp, order)
                    .map_err(|e| ClassifyError::Unsupported(e.to_string()))?
                    .map(|c: &BigRational| R::from_rational(c));
                twist(&base, &conv(p.alpha)?, &conv(p.beta)?, &conv(p.gamma)?, &conv(p.delta)?)?
            } else {
                let c = build_elliptic(p, order)?;
                let mut out = BiLaurent::zero(order, 1);
                for (m, n, v) in c.terms() {
                    out.set(m, n, conv(*v)?).expect("same window");
                }
                out
            }
        }
    })
}

/// Whether two parameter tuples give the same series through order 9.
pub fn params_equivalent(p1: &EllipticParams, p2: &EllipticParams, tol: f64) -> bool {
    match (build_elliptic(p1, EQUIVALENCE_ORDER), build_elliptic(p2, EQUIVALENCE_ORDER)) {
        (Ok(f), Ok(g)) => agrees(&f, &g, tol),
        _ => false,
    }
}

/// Real numbers with 15 significant digits, shortest form.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        return "0".into();
    }
    if (1e-4..1e15).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    let re = format_real(z.re);
    let im: f64 = format_real(z.im).parse().unwrap_or(z.im);
    if im == 0.0 {
        return re;
    }
    let sign = if im < 0.0 { "-" } else { "+" };
    let mag = format_real(im.abs());
    if format_real(z.re).parse::<f64>().unwrap_or(z.re) == 0.0 {
        let s = if im < 0.0 { "-" } else { "" };
        return format!("{s}{mag}i");
    }
    format!("{re}{sign}{mag}i")
}

/// Ring elements with a short human-readable form.
pub trait DisplayScalar {
    fn show(&self) -> String;
}

impl DisplayScalar for BigRational {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl DisplayScalar for Complex64 {
    fn show(&self) -> String {
        format_complex(*self)
    }
}

impl DisplayScalar for crate::QSeries<BigRational> {
    fn show(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 => format!("({c})q"),
                _ => format!("({c})q^{i}"),
            });
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        match self.precision() {
            Some(p) => format!("{body} + O(q^{p})"),
            None => body,
        }
    }
}

impl<R: DisplayScalar> fmt::Display for SolutionClass<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionClass::Zero => write!(f, "Zero"),
            SolutionClass::PolarU { alpha, gamma } => {
                write!(f, "PolarU α={} γ={}", alpha.show(), gamma.show())
            }
            SolutionClass::PolarV { beta, gamma } => {
                write!(f, "PolarV β={} γ={}", beta.show(), gamma.show())
            }
            SolutionClass::Polar { alpha, beta, gamma } => {
                write!(f, "Polar α={} β={} γ={}", alpha.show(), beta.show(), gamma.show())
            }
            SolutionClass::Elliptic(p) => {
                let tau = match p.point.tau() {
                    None => "i∞".to_string(),
                    Some(t) => format_complex(t),
                };
                write!(
                    f,
                    "Elliptic α={} β={} γ={} δ={} q={} (τ={tau})",
                    format_complex(p.alpha),
                    format_complex(p.beta),
                    format_complex(p.gamma),
                    format_complex(p.delta),
                    format_complex(p.point.q),
                )
            }
        }
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

impl<R: JsonScalar> SolutionClass<R> {
    pub fn to_json(&self) -> Value {
        match self {
            SolutionClass::Zero => json!({"class": "zero"}),
            SolutionClass::PolarU { alpha, gamma } => {
                json!({"class": "polar_u", "alpha": alpha.to_json(), "gamma": gamma.to_json()})
            }
            SolutionClass::PolarV { beta, gamma } => {
                json!({"class": "polar_v", "beta": beta.to_json(), "gamma": gamma.to_json()})
            }
            SolutionClass::Polar { alpha, beta, gamma } => json!({
                "class": "polar",
                "alpha": alpha.to_json(),
                "beta": beta.to_json(),
                "gamma": gamma.to_json(),
            }),
            SolutionClass::Elliptic(p) => json!({
                "class": "elliptic",
                "alpha": complex_json(p.alpha),
                "beta": complex_json(p.beta),
                "gamma": complex_json(p.gamma),
                "delta": complex_json(p.delta),
                "q": complex_json(p.point.q),
                "tau": p.point.tau().map(complex_json),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::kronecker_inf;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_and_polar_examples() {
        let opts = ClassifyOptions::default();
        let zero = BiLaurent::<BigRational>::zero(9, 1);
        assert_eq!(classify(&zero, &opts).unwrap(), SolutionClass::Zero);

        let f = BiLaurent::polar(9, q(3, 1), q(0, 1)).mul_exp_uv(&q(2, 1));
        assert_eq!(f.coeff(0, 1), q(6, 1));
        assert_eq!(
            classify(&f, &opts).unwrap(),
            SolutionClass::PolarU { alpha: q(3, 1), gamma: q(2, 1) }
        );

        let class = SolutionClass::Polar { alpha: q(1, 1), beta: q(1, 1), gamma: q(0, 1) };
        assert_eq!(build_solution(&class, 7).unwrap(), BiLaurent::polar(7, q(1, 1), q(1, 1)));
    }

    #[test]
    fn cusp_is_elliptic_with_trivial_parameters() {
        let class = classify(&kronecker_inf(9), &ClassifyOptions::default()).unwrap();
        let SolutionClass::Elliptic(p) = class.clone() else {
            panic!("{class:?}")
        };
        assert!(p.point.is_cusp());
        for (got, want) in [(p.alpha, 1.0), (p.beta, 1.0), (p.gamma, 0.0), (p.delta, 1.0)] {
            assert!((got - want).norm() < 1e-12, "{got}");
        }
        assert_eq!(class.to_string(), "Elliptic α=1 β=1 γ=0 δ=1 q=0 (τ=i∞)");

        let exact = SolutionClass::<BigRational>::Elliptic(EllipticParams::new(
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
        ));
        assert_eq!(build_solution(&exact, 9).unwrap(), kronecker_inf(9));
    }

    #[test]
    fn elliptic_round_trip() {
        let p = EllipticParams::new(c(1.3, 0.0), c(0.7, 0.0), c(0.2, 0.1), c(2.0, 0.0), c(0.0005, 0.0003));
        let f = build_elliptic(&p, 9).unwrap();
        let got = recover_elliptic_params(&f, 1e-6, NomeStart::Cusp).unwrap();
        assert!((got.alpha - p.alpha).norm() < 1e-6 || (got.alpha + p.alpha).norm() < 1e-6, "{got:?}");
        assert!((got.gamma - p.gamma).norm() < 1e-6);
        assert!((got.point.q - p.point.q).norm() < 1e-9);
        assert!(params_equivalent(&p, &got, 1e-6));
    }

    #[test]
    fn recovery_may_move_to_an_equivalent_point() {
        // tau = 0.989i lies below the unit circle; Newton finds -1/tau
        let p = EllipticParams::new(c(1.3, 0.0), c(0.7, 0.0), c(0.2, 0.1), c(2.0, 0.0), c(0.002, 0.0));
        let f = build_elliptic(&p, 9).unwrap();
        let SolutionClass::Elliptic(got) = classify(&f, &ClassifyOptions::default()).unwrap() else {
            panic!()
        };
        let tau = p.point.tau().unwrap();
        assert!((got.point.tau().unwrap() + 1.0 / tau).norm() < 1e-8);
        assert!((got.alpha - p.alpha * tau).norm() < 1e-6 || (got.alpha + p.alpha * tau).norm() < 1e-6);
        assert!(params_equivalent(&p, &got, 1e-6));
    }

    #[test]
    fn equivalence_examples() {
        let p = EllipticParams::new(c(1.1, 0.2), c(0.9, 0.0), c(0.3, 0.0), c(1.5, 0.0), c(0.001, 0.001));
        assert!(params_equivalent(&p, &p, 1e-9));
        let m = EllipticParams::new(-p.alpha, -p.beta, p.gamma, -p.delta, p.point.q);
        assert!(params_equivalent(&p, &m, 1e-9));
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let a = EllipticParams::new(one, one, zero, one, zero);
        let b = EllipticParams::new(c(2.0, 0.0), one, zero, one, zero);
        assert!(!params_equivalent(&a, &b, 1e-6));
    }

    #[test]
    fn special_points_need_special_starts() {
        // tau = rho: G4 = 0, so a_{3,0} = 0
        let rho = NomeStart::CubeRootOfUnity.nome();
        let p = EllipticParams::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), rho);
        let mut f = build_elliptic(&p, 9).unwrap();
        assert!(f.coeff(3, 0).norm() < 1e-12);
        f.set(3, 0, c(0.0, 0.0)).unwrap();
        f.set(0, 3, c(0.0, 0.0)).unwrap();
        assert!(matches!(
            recover_elliptic_params(&f, 1e-6, NomeStart::Cusp),
            Err(ClassifyError::RecoveryFailed(_))
        ));
        let got = recover_elliptic_params(&f, 1e-6, NomeStart::CubeRootOfUnity).unwrap();
        assert!(params_equivalent(&p, &got, 1e-6));
        assert!(matches!(classify(&f, &ClassifyOptions::default()).unwrap(), SolutionClass::Elliptic(_)));
    }

    #[test]
    fn non_solutions_are_rejected() {
        let mut f = kronecker_inf(9);
        f.set(2, 1, q(1, 1)).unwrap();
        assert!(matches!(
            classify(&f, &ClassifyOptions::default()),
            Err(ClassifyError::NotAFaySolution { .. })
        ));
        assert!(matches!(
            classify(&kronecker_inf(5), &ClassifyOptions::default()),
            Err(ClassifyError::InsufficientOrder(5))
        ));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_real(1.0000000000000002), "1");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(0.1234567890123456789), "0.123456789012346");
        assert_eq!(format_complex(c(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(format_complex(c(0.0, 2.0)), "2i");
        assert_eq!(format_real(1.25e-16), "1.25e-16");
        assert_eq!(format_real(-3.0e20), "-3e20");
    }
}
