//! Generating series of period polynomials and their period relations.
//!
//! `C_f(X,Y,T) = f(T, -XYT) f(XT, YT)` is stored weight by weight: the
//! coefficient of `T^{k-2}` is `N(X,Y) / (X^2 Y^2)` for a polynomial `N`
//! with degrees at most `k+2` in each variable.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{binomial, factorial};
use crate::json::{array, field, int_field, join, ring_kind_from_json, JsonError, JsonScalar};
use crate::laurent::BiLaurent;
use crate::qseries::QSeries;
use crate::ring::{CoefficientRing, RingKind};
use crate::theta::{kronecker_expand, Nome, NumericNome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZagierError {
    #[error("order {order} determines weights up to {}, requested {k_max}", order + 1)]
    InsufficientOrder { order: i32, k_max: u32 },
    #[error("weight {0} is not present")]
    MissingWeight(u32),
    #[error("{0}")]
    Expansion(String),
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error("slash by {element:?} leaves a pole at exponent {exponent}")]
    NotCleared { element: GroupElement, exponent: i32 },
    #[error("weight {0} does not have a one-dimensional cusp space")]
    UnsupportedWeight(u32),
    #[error("elimination is degenerate: {0}")]
    DegenerateElimination(String),
}

/// `N(X,Y) / (X^2 Y^2)` in weight `k`; `N` is dense with index `(i, j)` for `X^i Y^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct XYLaurentPoly<R> {
    k: u32,
    numerator: Vec<R>,
}

impl<R: CoefficientRing> XYLaurentPoly<R> {
    pub fn zero(k: u32) -> Self {
        let side = (k + 3) as usize;
        XYLaurentPoly {
            k,
            numerator: vec![R::zero(); side * side],
        }
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    /// Exponent of `T` carrying this entry.
    pub fn t_power(&self) -> i32 {
        self.k as i32 - 2
    }

    /// Largest numerator index.
    pub fn side(&self) -> u32 {
        self.k + 2
    }

    fn slot(&self, i: u32, j: u32) -> usize {
        assert!(i <= self.side() && j <= self.side(), "index ({i}, {j}) outside weight {}", self.k);
        (j * (self.k + 3) + i) as usize
    }

    /// Coefficient of `X^i Y^j` in the numerator.
    pub fn get(&self, i: u32, j: u32) -> &R {
        &self.numerator[self.slot(i, j)]
    }

    pub fn get_mut(&mut self, i: u32, j: u32) -> &mut R {
        let s = self.slot(i, j);
        &mut self.numerator[s]
    }

    /// Coefficient of `X^x Y^y` in the entry itself.
    pub fn coeff(&self, x: i32, y: i32) -> R {
        let (i, j) = (x + 2, y + 2);
        let side = self.side() as i32;
        if (0..=side).contains(&i) && (0..=side).contains(&j) {
            self.get(i as u32, j as u32).clone()
        } else {
            R::zero()
        }
    }

    /// Nonzero numerator entries `(i, j, value)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &R)> {
        let w = self.k + 3;
        self.numerator
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(s, c)| (s as u32 % w, s as u32 / w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.iter().all(|c| c.is_zero())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.numerator.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: &R) -> Self {
        XYLaurentPoly {
            k: self.k,
            numerator: self.numerator.iter().map(|c| c.mul_ref(s)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        XYLaurentPoly {
            k: self.k,
            numerator: self
                .numerator
                .iter()
                .zip(&other.numerator)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn map<S: CoefficientRing>(&self, f: impl Fn(&R) -> S) -> XYLaurentPoly<S> {
        XYLaurentPoly {
            k: self.k,
            numerator: self.numerator.iter().map(f).collect(),
        }
    }
}

/// Weight `k` to entry; weights absent from the map are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CSeries<R> {
    k_max: u32,
    weights: BTreeMap<u32, XYLaurentPoly<R>>,
}

impl<R: CoefficientRing> CSeries<R> {
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn weight(&self, k: u32) -> Option<&XYLaurentPoly<R>> {
        self.weights.get(&k)
    }

    pub fn weight_mut(&mut self, k: u32) -> Option<&mut XYLaurentPoly<R>> {
        self.weights.get_mut(&k)
    }

    pub fn weights(&self) -> impl Iterator<Item = (u32, &XYLaurentPoly<R>)> {
        self.weights.iter().map(|(k, p)| (*k, p))
    }
}

/// `C_f(X,Y,T) = f(T, -XYT) f(XT, YT)` through `T^{k_max - 2}`.
///
/// Even weights up to `k_max` are always present; odd weights appear only
/// when some product lands there.
pub fn build_c<R: CoefficientRing>(f: &BiLaurent<R>, k_max: u32) -> Result<CSeries<R>, ZagierError> {
    if f.order() + 1 < k_max as i32 {
        return Err(ZagierError::InsufficientOrder { order: f.order(), k_max });
    }
    let max_t = k_max as i32 - 2;
    let terms: Vec<(i32, i32, &R)> = f.terms().collect();
    let mut weights: BTreeMap<u32, XYLaurentPoly<R>> = (0..=k_max)
        .step_by(2)
        .map(|k| (k, XYLaurentPoly::zero(k)))
        .collect();
    for &(m1, n1, a) in &terms {
        let signed = if n1.rem_euclid(2) == 1 { R::zero().sub_ref(a) } else { a.clone() };
        for &(m2, n2, b) in &terms {
            let t = m1 + n1 + m2 + n2;
            if t > max_t {
                continue;
            }
            let (x, y) = (n1 + m2, n1 + n2);
            let k = (t + 2) as u32;
            let entry = weights.entry(k).or_insert_with(|| XYLaurentPoly::zero(k));
            let side = entry.side() as i32;
            if !(-2..=side - 2).contains(&x) || !(-2..=side - 2).contains(&y) {
                return Err(ZagierError::Expansion(format!(
                    "term X^{x} Y^{y} outside weight {k}; the input has poles beyond 1/u, 1/v"
                )));
            }
            entry
                .get_mut((x + 2) as u32, (y + 2) as u32)
                .add_mul_assign(&signed, b);
        }
    }
    Ok(CSeries { k_max, weights })
}

/// The generating series `F(T, -XYT) F(XT, YT)` for the Kronecker function at `nome`.
pub fn zagier_c<N: Nome>(nome: &N, k_max: u32) -> Result<CSeries<N::Ring>, ZagierError>
where
    N::Ring: CoefficientRing,
{
    let order = (k_max as i32 - 1).max(1);
    let f = kronecker_expand(nome, order).map_err(|e| ZagierError::Expansion(e.to_string()))?;
    build_c(&f, k_max)
}

/// `c_k = (k-2)!` times the weight-`k` entry.
pub fn extract_ck<R: CoefficientRing>(c: &CSeries<R>, k: u32) -> Result<XYLaurentPoly<R>, ZagierError> {
    if k < 2 {
        return Err(ZagierError::MissingWeight(k));
    }
    let entry = c.weight(k).ok_or(ZagierError::MissingWeight(k))?;
    let fact = R::from_rational(&BigRational::from_integer(factorial(k - 2)));
    Ok(entry.scale(&fact))
}

/// An element of `SL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub const S: GroupElement = GroupElement { a: 0, b: -1, c: 1, d: 0 };
pub const U: GroupElement = GroupElement { a: 1, b: -1, c: 1, d: 0 };
pub const U2: GroupElement = GroupElement { a: 0, b: -1, c: 1, d: -1 };
pub const IDENTITY: GroupElement = GroupElement { a: 1, b: 0, c: 0, d: 1 };

/// `r X + s` sorted by how a clearing multiplier `X^p (X-1)^q` can absorb it.
enum Linear {
    Constant(BigRational),
    X(BigRational),
    XMinusOne(BigRational),
    General(BigRational, BigRational),
}

impl Linear {
    fn new(r: i64, s: i64) -> Self {
        let (rr, ss) = (BigRational::from_integer(r.into()), BigRational::from_integer(s.into()));
        if r == 0 {
            Linear::Constant(ss)
        } else if s == 0 {
            Linear::X(rr)
        } else if s == -r {
            Linear::XMinusOne(rr)
        } else {
            Linear::General(rr, ss)
        }
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(r X + s)^n` for `n >= 0`.
fn linear_pow(r: &BigRational, s: &BigRational, n: u32) -> Vec<BigRational> {
    (0..=n)
        .map(|i| {
            BigRational::from_integer(binomial(n, i)) * num_traits::pow(r.clone(), i as usize) * num_traits::pow(s.clone(), (n - i) as usize)
        })
        .collect()
}

fn rational_pow(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ZagierError> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(ZagierError::NotUnimodular(det));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// `X^p (X-1)^q (cX+d)^{w-e} (aX+b)^e` as a polynomial in `X`.
    fn cleared_monomial(&self, w: i32, e: i32, p: u32, q: u32) -> Result<Vec<BigRational>, ZagierError> {
        let mut x_power = p as i32;
        let mut x1_power = q as i32;
        let mut constant = BigRational::one();
        let mut general = vec![BigRational::one()];
        for (lin, n) in [(Linear::new(self.c, self.d), w - e), (Linear::new(self.a, self.b), e)] {
            match lin {
                Linear::Constant(s) => constant *= rational_pow(&s, n),
                Linear::X(r) => {
                    constant *= rational_pow(&r, n);
                    x_power += n;
                }
                Linear::XMinusOne(r) => {
                    constant *= rational_pow(&r, n);
                    x1_power += n;
                }
                Linear::General(r, s) => {
                    if n < 0 {
                        return Err(ZagierError::NotCleared { element: *self, exponent: e });
                    }
                    general = poly_mul(&general, &linear_pow(&r, &s, n as u32));
                }
            }
        }
        if x_power < 0 || x1_power < 0 {
            return Err(ZagierError::NotCleared { element: *self, exponent: e });
        }
        let one = BigRational::one();
        let mut out = vec![BigRational::zero(); x_power as usize];
        out.push(constant);
        out = poly_mul(&out, &linear_pow(&one, &(-one.clone()), x1_power as u32));
        Ok(poly_mul(&out, &general))
    }

    /// `X^p (X-1)^q Y^2 (C_k | g)`, one polynomial in `X` per power of `Y`.
    pub fn slash_cleared<R: CoefficientRing>(
        &self,
        entry: &XYLaurentPoly<R>,
        p: u32,
        q: u32,
    ) -> Result<PeriodPoly<R>, ZagierError> {
        let w = entry.t_power();
        let side = entry.side();
        let mut columns: Vec<Vec<R>> = vec![Vec::new(); side as usize + 1];
        for i in 0..=side {
            let e = i as i32 - 2;
            if (0..=side).all(|j| entry.get(i, j).is_zero()) {
                continue;
            }
            let mono: Vec<R> = self
                .cleared_monomial(w, e, p, q)?
                .iter()
                .map(R::from_rational)
                .collect();
            for (j, col) in columns.iter_mut().enumerate() {
                let c = entry.get(i, j as u32);
                if c.is_zero() {
                    continue;
                }
                if col.len() < mono.len() {
                    col.resize(mono.len(), R::zero());
                }
                for (slot, m) in col.iter_mut().zip(&mono) {
                    slot.add_mul_assign(c, m);
                }
            }
        }
        Ok(PeriodPoly { columns })
    }
}

/// Polynomial in `X` and `Y`, stored as one `X`-polynomial per power of `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodPoly<R> {
    columns: Vec<Vec<R>>,
}

impl<R: CoefficientRing> PeriodPoly<R> {
    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> R {
        self.columns
            .get(j)
            .and_then(|c| c.get(i))
            .cloned()
            .unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.columns.iter().enumerate().flat_map(|(j, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| (i, j, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms().map(|(_, _, c)| c.magnitude()).fold(0.0, f64::max)
    }

    fn add(mut self, other: &PeriodPoly<R>) -> Self {
        if self.columns.len() < other.columns.len() {
            self.columns.resize(other.columns.len(), Vec::new());
        }
        for (col, o) in self.columns.iter_mut().zip(&other.columns) {
            if col.len() < o.len() {
                col.resize(o.len(), R::zero());
            }
            for (a, b) in col.iter_mut().zip(o) {
                *a = a.add_ref(b);
            }
        }
        self
    }
}

/// Cleared forms of `C_k | (1 + S)` and `C_k | (1 + U + U^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodResidual<R> {
    pub k: u32,
    pub poly_s: PeriodPoly<R>,
    pub poly_u: PeriodPoly<R>,
}

impl<R: CoefficientRing> PeriodResidual<R> {
    pub fn is_zero(&self) -> bool {
        self.poly_s.is_zero() && self.poly_u.is_zero()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.poly_s.max_magnitude().max(self.poly_u.max_magnitude())
    }
}

/// Both relations for one weight, multiplied through by `X^{w+4} (X-1)^{w+4} Y^2`.
pub fn period_residual_weight<R: CoefficientRing>(entry: &XYLaurentPoly<R>) -> PeriodResidual<R> {
    let m = (entry.t_power() + 4) as u32;
    let slash = |g: &GroupElement| g.slash_cleared(entry, m, m).expect("multiplier clears S and U orbits");
    PeriodResidual {
        k: entry.weight(),
        poly_s: slash(&IDENTITY).add(&slash(&S)),
        poly_u: slash(&IDENTITY).add(&slash(&U)).add(&slash(&U2)),
    }
}

pub fn period_residual<R: CoefficientRing>(c: &CSeries<R>) -> BTreeMap<u32, PeriodResidual<R>> {
    c.weights().map(|(k, p)| (k, period_residual_weight(p))).collect()
}

/// Per-weight sizes of the cleared relations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub k: u32,
    pub max_s: f64,
    pub max_u: f64,
}

pub fn period_report<R: CoefficientRing>(residuals: &BTreeMap<u32, PeriodResidual<R>>) -> Vec<PeriodReport> {
    residuals
        .values()
        .map(|r| PeriodReport {
            k: r.k,
            max_s: r.poly_s.max_magnitude(),
            max_u: r.poly_u.max_magnitude(),
        })
        .collect()
}

/// Weights where the cusp space is a line.
pub const CUSP_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// The cusp part of `c_k` up to scalar, normalized so its largest coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspPeriod {
    pub poly: XYLaurentPoly<Complex64>,
    pub mu: [Complex64; 2],
}

impl CuspPeriod {
    /// Coefficients of `X^x Y^y` with `x, y >= 0` of the given parities, rows by `x`.
    pub fn block(&self, x_parity: u32, y_parity: u32) -> DMatrix<Complex64> {
        let n = self.poly.t_power().max(0) as usize + 1;
        let pick = |parity: u32| (0..n).filter(move |e| *e as u32 % 2 == parity).collect::<Vec<_>>();
        let (rows, cols) = (pick(x_parity), pick(y_parity));
        DMatrix::from_fn(rows.len(), cols.len(), |r, c| self.poly.coeff(rows[r] as i32, cols[c] as i32))
    }

    pub fn block_singular_values(&self, x_parity: u32, y_parity: u32) -> Vec<f64> {
        let mut s: Vec<f64> = self.block(x_parity, y_parity).singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    fn part(&self, parity: i32) -> XYLaurentPoly<Complex64> {
        let mut out = self.poly.clone();
        let side = out.side();
        for i in 0..=side {
            if (i as i32 - 2).rem_euclid(2) != parity {
                for j in 0..=side {
                    *out.get_mut(i, j) = Complex64::zero();
                }
            }
        }
        out
    }

    /// Terms with even `X`-exponent.
    pub fn even_part(&self) -> XYLaurentPoly<Complex64> {
        self.part(0)
    }

    /// Terms with odd `X`-exponent.
    pub fn odd_part(&self) -> XYLaurentPoly<Complex64> {
        self.part(1)
    }
}

const RANK_TOL: f64 = 1e-9;

/// Eliminate the Eisenstein part of `c_k` between two nomes.
///
/// Only the Eisenstein series contributes monomials with a negative
/// exponent, so a null vector of those rows leaves a multiple of the cusp
/// form's period bilinear form.
pub fn cusp_period_extract(k: u32, q1: Complex64, q2: Complex64) -> Result<CuspPeriod, ZagierError> {
    if !CUSP_WEIGHTS.contains(&k) {
        return Err(ZagierError::UnsupportedWeight(k));
    }
    if q1 == q2 {
        return Err(ZagierError::DegenerateElimination("the two nomes coincide".into()));
    }
    let ck = |q: Complex64| zagier_c(&NumericNome(q), k).and_then(|c| extract_ck(&c, k));
    let (c1, c2) = (ck(q1)?, ck(q2)?);
    let side = c1.side();
    let polar: Vec<(u32, u32)> = (0..=side)
        .flat_map(|j| (0..=side).map(move |i| (i, j)))
        .filter(|&(i, j)| i < 2 || j < 2)
        .collect();
    let a = DMatrix::from_fn(polar.len(), 2, |r, col| {
        let (i, j) = polar[r];
        if col == 0 {
            *c1.get(i, j)
        } else {
            *c2.get(i, j)
        }
    });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (s, order) = {
        let mut idx = [0usize, 1];
        idx.sort_by(|x, y| svd.singular_values[*y].total_cmp(&svd.singular_values[*x]));
        ([svd.singular_values[idx[0]], svd.singular_values[idx[1]]], idx)
    };
    if s[0] == 0.0 {
        return Err(ZagierError::DegenerateElimination("no Eisenstein contribution (rank 0)".into()));
    }
    if s[1] > RANK_TOL * s[0] {
        return Err(ZagierError::DegenerateElimination(format!(
            "polar rows have rank 2 (singular values {:.3e}, {:.3e})",
            s[0], s[1]
        )));
    }
    let null = v_t.row(order[1]);
    let mu = [null[0].conj(), null[1].conj()];
    let mut poly = c1.scale(&mu[0]);
    for (slot, c) in poly.numerator.iter_mut().zip(&c2.numerator) {
        *slot += mu[1] * c;
    }
    for &(i, j) in &polar {
        *poly.get_mut(i, j) = Complex64::zero();
    }
    let scale = c1.max_magnitude().max(c2.max_magnitude());
    let lead = poly
        .numerator
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or_default();
    if lead.norm() <= RANK_TOL * scale {
        return Err(ZagierError::DegenerateElimination("the combination vanishes".into()));
    }
    let poly = poly.scale(&lead.inv());
    Ok(CuspPeriod { poly, mu })
}

impl<R: JsonScalar> CSeries<R> {
    pub fn to_json(&self) -> Value {
        let kind = R::ring_kind(self.weights.values().flat_map(|p| p.terms().map(|t| t.2)));
        let weights: Vec<Value> = self
            .weights
            .iter()
            .map(|(k, p)| {
                let numerator: Vec<Value> = p
                    .terms()
                    .map(|(i, j, c)| json!({"i": i, "j": j, "value": c.to_json()}))
                    .collect();
                json!({"k": k, "numerator": numerator})
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("ring".into(), serde_json::to_value(kind).expect("plain enum"));
        obj.insert("k_max".into(), json!(self.k_max));
        obj.insert("weights".into(), Value::Array(weights));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let kind = ring_kind_from_json(field(v, "ring", "")?, "ring")?;
        Self::from_json_with_kind(v, kind)
    }

    fn from_json_with_kind(v: &Value, kind: RingKind) -> Result<Self, JsonError> {
        let small = |x: i64, path: &str| {
            u32::try_from(x)
                .ok()
                .filter(|x| *x <= 1024)
                .ok_or_else(|| JsonError::field(path, "out of range"))
        };
        let k_max = small(int_field(v, "k_max", "")?, "k_max")?;
        let mut weights = BTreeMap::new();
        for (n, w) in array(field(v, "weights", "")?, "weights")?.iter().enumerate() {
            let path = format!("weights[{n}]");
            let k = small(int_field(w, "k", &path)?, &join(&path, "k"))?;
            let mut p = XYLaurentPoly::zero(k);
            let entries = field(w, "numerator", &path)?;
            for (t, e) in array(entries, &join(&path, "numerator"))?.iter().enumerate() {
                let ep = format!("{path}.numerator[{t}]");
                let i = small(int_field(e, "i", &ep)?, &join(&ep, "i"))?;
                let j = small(int_field(e, "j", &ep)?, &join(&ep, "j"))?;
                if i > p.side() || j > p.side() {
                    return Err(JsonError::field(&ep, format!("index ({i}, {j}) outside weight {k}")));
                }
                *p.get_mut(i, j) = R::from_json(field(e, "value", &ep)?, kind, &join(&ep, "value"))?;
            }
            weights.insert(k, p);
        }
        Ok(CSeries { k_max, weights })
    }
}

/// A C-series read from text whose ring is known only at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyCSeries {
    Rational(CSeries<BigRational>),
    QSeries(CSeries<QSeries<BigRational>>),
    Complex(CSeries<Complex64>),
}

impl AnyCSeries {
    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let kind = ring_kind_from_json(field(v, "ring", "")?, "ring")?;
        Ok(match kind {
            RingKind::Rational => AnyCSeries::Rational(CSeries::from_json_with_kind(v, kind)?),
            RingKind::QSeries(_) => AnyCSeries::QSeries(CSeries::from_json_with_kind(v, kind)?),
            RingKind::Complex => AnyCSeries::Complex(CSeries::from_json_with_kind(v, kind)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyCSeries::Rational(c) => c.to_json(),
            AnyCSeries::QSeries(c) => c.to_json(),
            AnyCSeries::Complex(c) => c.to_json(),
        }
    }
}
