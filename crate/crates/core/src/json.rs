//! Structured-text encoding of ring elements and series.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::laurent::BiLaurent;
use crate::qseries::QSeries;
use crate::ring::{CoefficientRing, RingKind};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("field `{path}`: {msg}")]
    Field { path: String, msg: String },
}

impl JsonError {
    pub fn field(path: &str, msg: impl Into<String>) -> Self {
        JsonError::Field {
            path: path.to_string(),
            msg: msg.into(),
        }
    }
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        JsonError::Syntax {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    Ok(serde_json::from_str(text)?)
}

pub fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    obj.as_object()
        .ok_or_else(|| JsonError::field(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| JsonError::field(&join(path, key), "missing"))
}

pub fn int_field(obj: &Value, key: &str, path: &str) -> Result<i64, JsonError> {
    field(obj, key, path)?
        .as_i64()
        .ok_or_else(|| JsonError::field(&join(path, key), "expected an integer"))
}

pub fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array()
        .ok_or_else(|| JsonError::field(path, "expected an array"))
}

pub fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Ring elements with a structured-text form.
pub trait JsonScalar: CoefficientRing {
    /// Tag written next to a collection of elements.
    fn ring_kind<'a>(elements: impl Iterator<Item = &'a Self>) -> RingKind;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, kind: RingKind, path: &str) -> Result<Self, JsonError>;
}

fn bigint(v: &Value, path: &str) -> Result<BigInt, JsonError> {
    let s = v
        .as_str()
        .ok_or_else(|| JsonError::field(path, "expected an integer string"))?;
    BigInt::from_str(s).map_err(|_| JsonError::field(path, format!("`{s}` is not an integer")))
}

fn expect_kind(found: RingKind, wanted: &str, path: &str) -> Result<(), JsonError> {
    let ok = matches!(
        (found, wanted),
        (RingKind::Rational, "rational") | (RingKind::Complex, "complex") | (RingKind::QSeries(_), "qseries")
    );
    if ok {
        Ok(())
    } else {
        Err(JsonError::field(path, format!("ring is {found}, expected {wanted}")))
    }
}

impl JsonScalar for BigRational {
    fn ring_kind<'a>(_: impl Iterator<Item = &'a Self>) -> RingKind {
        RingKind::Rational
    }

    fn to_json(&self) -> Value {
        json!({"num": self.numer().to_string(), "den": self.denom().to_string()})
    }

    fn from_json(v: &Value, kind: RingKind, path: &str) -> Result<Self, JsonError> {
        expect_kind(kind, "rational", "ring")?;
        let num = bigint(field(v, "num", path)?, &join(path, "num"))?;
        let den = bigint(field(v, "den", path)?, &join(path, "den"))?;
        if den == BigInt::from(0) {
            return Err(JsonError::field(&join(path, "den"), "zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

impl JsonScalar for Complex64 {
    fn ring_kind<'a>(_: impl Iterator<Item = &'a Self>) -> RingKind {
        RingKind::Complex
    }

    fn to_json(&self) -> Value {
        json!({"re": self.re, "im": self.im})
    }

    fn from_json(v: &Value, kind: RingKind, path: &str) -> Result<Self, JsonError> {
        expect_kind(kind, "complex", "ring")?;
        let part = |key: &str| {
            field(v, key, path)?
                .as_f64()
                .ok_or_else(|| JsonError::field(&join(path, key), "expected a number"))
        };
        Ok(Complex64::new(part("re")?, part("im")?))
    }
}

impl JsonScalar for QSeries<BigRational> {
    /// Smallest precision among the elements; exact elements do not count.
    fn ring_kind<'a>(elements: impl Iterator<Item = &'a Self>) -> RingKind {
        let n = elements.filter_map(|s| s.precision()).min();
        RingKind::QSeries(n.unwrap_or(crate::arith::EXACT_Q_PRECISION))
    }

    fn to_json(&self) -> Value {
        Value::Array(self.coeffs().iter().map(|c| c.to_json()).collect())
    }

    fn from_json(v: &Value, kind: RingKind, path: &str) -> Result<Self, JsonError> {
        expect_kind(kind, "qseries", "ring")?;
        let RingKind::QSeries(n) = kind else {
            unreachable!()
        };
        let items = array(v, path)?;
        if items.len() > n {
            return Err(JsonError::field(
                path,
                format!("{} coefficients exceed the precision {n}", items.len()),
            ));
        }
        let coeffs = items
            .iter()
            .enumerate()
            .map(|(i, c)| BigRational::from_json(c, RingKind::Rational, &format!("{path}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QSeries::new(coeffs, n))
    }
}

pub fn ring_kind_from_json(v: &Value, path: &str) -> Result<RingKind, JsonError> {
    serde_json::from_value(v.clone()).map_err(|_| {
        JsonError::field(
            path,
            "expected \"rational\", \"complex\" or {\"qseries\": N}",
        )
    })
}

impl<R: JsonScalar> BiLaurent<R> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<(i32, i32, &R)> = self.terms().collect();
        let kind = R::ring_kind(terms.iter().map(|t| t.2));
        let coeffs: Vec<Value> = terms
            .iter()
            .map(|(m, n, c)| json!({"m": m, "n": n, "value": c.to_json()}))
            .collect();
        let mut obj = Map::new();
        obj.insert("ring".into(), serde_json::to_value(kind).expect("plain enum"));
        obj.insert("order".into(), json!(self.order()));
        obj.insert("pole_depth".into(), json!(self.pole_depth()));
        obj.insert("coeffs".into(), Value::Array(coeffs));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let kind = ring_kind_from_json(field(v, "ring", "")?, "ring")?;
        Self::from_json_with_kind(v, kind)
    }

    fn from_json_with_kind(v: &Value, kind: RingKind) -> Result<Self, JsonError> {
        let order = i32::try_from(int_field(v, "order", "")?)
            .map_err(|_| JsonError::field("order", "out of range"))?;
        let pole_depth = u32::try_from(int_field(v, "pole_depth", "")?)
            .map_err(|_| JsonError::field("pole_depth", "must be a small non-negative integer"))?;
        if pole_depth > 64 || order > 4096 || order < -2 * pole_depth as i32 {
            return Err(JsonError::field("order", "window out of supported range"));
        }
        let mut f = BiLaurent::zero(order, pole_depth);
        for (i, entry) in array(field(v, "coeffs", "")?, "coeffs")?.iter().enumerate() {
            let path = format!("coeffs[{i}]");
            let index = |key: &str| {
                int_field(entry, key, &path).and_then(|x| {
                    i32::try_from(x).map_err(|_| JsonError::field(&join(&path, key), "out of range"))
                })
            };
            let (m, n) = (index("m")?, index("n")?);
            let value = R::from_json(field(entry, "value", &path)?, kind, &join(&path, "value"))?;
            f.set(m, n, value)
                .map_err(|e| JsonError::field(&path, e.to_string()))?;
        }
        Ok(f)
    }
}

/// A series read from text whose ring is known only at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyLaurent {
    Rational(BiLaurent<BigRational>),
    QSeries(BiLaurent<QSeries<BigRational>>),
    Complex(BiLaurent<Complex64>),
}

impl AnyLaurent {
    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let kind = ring_kind_from_json(field(v, "ring", "")?, "ring")?;
        Ok(match kind {
            RingKind::Rational => AnyLaurent::Rational(BiLaurent::from_json_with_kind(v, kind)?),
            RingKind::QSeries(_) => AnyLaurent::QSeries(BiLaurent::from_json_with_kind(v, kind)?),
            RingKind::Complex => AnyLaurent::Complex(BiLaurent::from_json_with_kind(v, kind)?),
        })
    }

    pub fn from_str(text: &str) -> Result<Self, JsonError> {
        Self::from_json(&parse(text)?)
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyLaurent::Rational(f) => f.to_json(),
            AnyLaurent::QSeries(f) => f.to_json(),
            AnyLaurent::Complex(f) => f.to_json(),
        }
    }

    pub fn ring_kind(&self) -> RingKind {
        match self {
            AnyLaurent::Rational(_) => RingKind::Rational,
            AnyLaurent::QSeries(f) => QSeries::ring_kind(f.terms().map(|t| t.2)),
            AnyLaurent::Complex(_) => RingKind::Complex,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_round_trip() {
        let f = BiLaurent::from_terms(5, 1, [(-1, 0, q(1, 1)), (3, 0, q(-1, 720)), (2, 1, q(7, 3))])
            .unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let g = AnyLaurent::from_str(&text).unwrap();
        assert_eq!(g, AnyLaurent::Rational(f));
        assert_eq!(serde_json::to_string(&g.to_json()).unwrap(), text);
    }

    #[test]
    fn qseries_and_complex_round_trip() {
        let s = QSeries::new(vec![q(1, 2), q(0, 1), q(-3, 1)], 6);
        let f = BiLaurent::from_terms(3, 1, [(0, -1, s.clone()), (1, 0, s)]).unwrap();
        let v = f.to_json();
        assert_eq!(v["ring"], json!({"qseries": 6}));
        assert_eq!(AnyLaurent::from_json(&v).unwrap(), AnyLaurent::QSeries(f));

        let f = BiLaurent::from_terms(3, 1, [(1, 0, Complex64::new(0.1, -1.0 / 3.0))]).unwrap();
        let back = BiLaurent::<Complex64>::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = AnyLaurent::from_str(
            r#"{"ring":"rational","order":3,"pole_depth":1,
                "coeffs":[{"m":1,"n":0,"value":{"num":"1","den":"x"}}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("coeffs[0].value.den"), "{err}");

        let err = AnyLaurent::from_str(r#"{"ring":"rational","order":3}"#).unwrap_err();
        assert!(err.to_string().contains("pole_depth"), "{err}");

        let err = AnyLaurent::from_str("{\"ring\":\n}").unwrap_err();
        assert!(err.to_string().starts_with("line 2"), "{err}");

        let err = AnyLaurent::from_str(
            r#"{"ring":"rational","order":3,"pole_depth":1,
                "coeffs":[{"m":-2,"n":0,"value":{"num":"1","den":"1"}}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("coeffs[0]"), "{err}");
    }
}
