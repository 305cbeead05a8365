use num_bigint::BigInt;
use num_rational::BigRational;

use super::FayError;
use crate::arith::binomial;
use crate::laurent::BiLaurent;
use crate::ring::CoefficientRing;

/// Residual coefficients with a closed linear formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// `c_{0,0,0,0}` (only for `k = 0`).
    Constant,
    /// `c_{0,0,0,k}`
    V2Power,
    /// `c_{0,k,0,0}`
    U2Power,
    /// `c_{0,0,2,k-2}`
    V1SquaredV2Power,
    /// `c_{k-2,2,0,0}`
    U1PowerU2Squared,
    /// `c_{0,m,0,k-m}` with `0 < m < k`
    Mixed(u32),
}

impl Slot {
    fn check(self, k: u32) -> Result<(), FayError> {
        let ok = match self {
            Slot::Constant => k == 0,
            Slot::Mixed(m) => k >= 2 && k % 2 == 0 && 0 < m && m < k,
            _ => k >= 2 && k % 2 == 0,
        };
        if ok {
            Ok(())
        } else {
            Err(FayError::BadSlot { k, slot: self })
        }
    }

    /// Exponent vector `(m1, m2, n1, n2)` of the coefficient.
    pub fn index(self, k: u32) -> Result<[u32; 4], FayError> {
        self.check(k)?;
        Ok(match self {
            Slot::Constant => [0, 0, 0, 0],
            Slot::V2Power => [0, 0, 0, k],
            Slot::U2Power => [0, k, 0, 0],
            Slot::V1SquaredV2Power => [0, 0, 2, k - 2],
            Slot::U1PowerU2Squared => [k - 2, 2, 0, 0],
            Slot::Mixed(m) => [0, m, 0, k - m],
        })
    }

    /// `(r, s)` of the reduced series whose residual realizes this formula.
    pub fn reduced_pair(self, k: u32) -> Result<(i32, i32), FayError> {
        self.check(k)?;
        let k = k as i32;
        Ok(match self {
            Slot::Constant | Slot::V2Power | Slot::V1SquaredV2Power => (0, k),
            Slot::U2Power | Slot::U1PowerU2Squared => (k, 0),
            Slot::Mixed(m) => (m as i32, k - m as i32),
        })
    }

    /// Every slot defined for `k`.
    pub fn all(k: u32) -> Vec<Slot> {
        if k == 0 {
            return vec![Slot::Constant];
        }
        let mut out = vec![
            Slot::V2Power,
            Slot::U2Power,
            Slot::V1SquaredV2Power,
            Slot::U1PowerU2Squared,
        ];
        out.extend((1..k).map(Slot::Mixed));
        out.retain(|s| s.check(k).is_ok());
        out
    }
}

/// `alpha/u + beta/v + x u^r v^{s+1} + y u^{r+1} v^s` for the slot's `(r, s)`.
pub fn reduced_series<R: CoefficientRing>(
    k: u32,
    slot: Slot,
    res_u: R,
    res_v: R,
    x: R,
    y: R,
) -> Result<BiLaurent<R>, FayError> {
    let (r, s) = slot.reduced_pair(k)?;
    let mut f = BiLaurent::polar(k as i32 + 2, res_u, res_v);
    f.set(r, s + 1, x).expect("in window");
    f.set(r + 1, s, y).expect("in window");
    Ok(f)
}

fn int<R: CoefficientRing>(n: BigInt) -> R {
    R::from_rational(&BigRational::from_integer(n))
}

/// Linear part of the residual coefficient in `slot`, read off `a`.
///
/// Only polar entries and the two degree-`k+1` entries named by the formula
/// are used.
pub fn formula_c<R: CoefficientRing>(k: u32, slot: Slot, a: &BiLaurent<R>) -> Result<R, FayError> {
    slot.check(k)?;
    let res_u = a.coeff(-1, 0);
    let res_v = a.coeff(0, -1);
    let ki = k as i32;
    let term = |c1: BigInt, lhs: &R, i: (i32, i32), c2: BigInt, rhs: &R, j: (i32, i32)| {
        int::<R>(c1)
            .mul_ref(lhs)
            .mul_ref(&a.coeff(i.0, i.1))
            .sub_ref(&int::<R>(c2).mul_ref(rhs).mul_ref(&a.coeff(j.0, j.1)))
    };
    let b = |n: i64| BigInt::from(n);
    let delta = if k == 2 { 1 } else { 0 };
    let big = binomial(k + 2, 3) + 1;
    let small = binomial(k, 2) + delta;
    Ok(match slot {
        Slot::Constant => term(b(3), &res_v, (0, 1), b(3), &res_u, (1, 0)),
        Slot::V2Power => term(b(ki as i64 + 3), &res_v, (0, ki + 1), b(2), &res_u, (1, ki)),
        Slot::U2Power => term(b(2), &res_v, (ki, 1), b(ki as i64 + 3), &res_u, (ki + 1, 0)),
        Slot::V1SquaredV2Power => term(big, &res_v, (0, ki + 1), small, &res_u, (1, ki)),
        Slot::U1PowerU2Squared => term(small, &res_v, (ki, 1), big, &res_u, (ki + 1, 0)),
        Slot::Mixed(m) => {
            let m = m as i32;
            term(
                b((ki + 2 - m) as i64),
                &res_v,
                (m, ki + 1 - m),
                b(m as i64 + 2),
                &res_u,
                (m + 1, ki - m),
            )
        }
    })
}
