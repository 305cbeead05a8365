use crate::ring::CoefficientRing;

/// Homogeneous polynomial of fixed degree in `u1, u2, v1, v2`.
///
/// Dense over the first three exponents; the `v2` exponent is implied.
#[derive(Clone, Debug, PartialEq)]
pub struct Homog4<R> {
    degree: u32,
    data: Vec<R>,
}

impl<R: CoefficientRing> Homog4<R> {
    pub fn zero(degree: u32) -> Self {
        let side = degree as usize + 1;
        Homog4 {
            degree,
            data: vec![R::zero(); side * side * side],
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn slot(&self, e: [u32; 4]) -> usize {
        debug_assert_eq!(e.iter().sum::<u32>(), self.degree);
        let side = self.degree as usize + 1;
        (e[0] as usize * side + e[1] as usize) * side + e[2] as usize
    }

    /// Coefficient of `u1^e0 u2^e1 v1^e2 v2^e3`; zero off-degree.
    pub fn get(&self, e: [u32; 4]) -> R {
        if e.iter().sum::<u32>() != self.degree {
            return R::zero();
        }
        self.data[self.slot(e)].clone()
    }

    pub(crate) fn at(&self, e: [u32; 4]) -> &R {
        &self.data[self.slot(e)]
    }

    pub(crate) fn at_mut(&mut self, e: [u32; 4]) -> &mut R {
        let i = self.slot(e);
        &mut self.data[i]
    }

    /// Every exponent vector of this degree.
    pub fn indices(&self) -> impl Iterator<Item = [u32; 4]> {
        let s = self.degree;
        (0..=s).flat_map(move |a| {
            (0..=s - a).flat_map(move |b| (0..=s - a - b).map(move |c| [a, b, c, s - a - b - c]))
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 4], &R)> + '_ {
        self.indices()
            .map(|e| (e, self.at(e)))
            .filter(|(_, c)| !c.is_zero())
    }

    /// Divide by `u1 + u2`. Returns the quotient, or the first remainder
    /// entry whose size exceeds `abs_tol` (exact rings test for zero).
    pub fn div_u_sum(&self, abs_tol: f64) -> Result<Self, ([u32; 4], f64)> {
        let s = self.degree;
        if s == 0 {
            return self.zero_or_remainder(abs_tol);
        }
        let mut h = Self::zero(s - 1);
        for j1 in 0..=s {
            for j2 in 0..=s - j1 {
                let sp = s - j1 - j2;
                if sp == 0 {
                    let g = self.at([0, 0, j1, j2]);
                    check_rem(g, [0, 0, j1, j2], abs_tol)?;
                    continue;
                }
                // g_{a,b} = h_{a-1,b} + h_{a,b-1}
                let mut prev = R::zero();
                for a in (1..=sp).rev() {
                    let b = sp - a;
                    let val = self.at([a, b, j1, j2]).sub_ref(&prev);
                    *h.at_mut([a - 1, b, j1, j2]) = val.clone();
                    prev = val;
                }
                let rem = self.at([0, sp, j1, j2]).sub_ref(&prev);
                check_rem(&rem, [0, sp, j1, j2], abs_tol)?;
            }
        }
        Ok(h)
    }

    /// Divide by `v1 - v2`, as [`Homog4::div_u_sum`].
    pub fn div_v_difference(&self, abs_tol: f64) -> Result<Self, ([u32; 4], f64)> {
        let s = self.degree;
        if s == 0 {
            return self.zero_or_remainder(abs_tol);
        }
        let mut h = Self::zero(s - 1);
        for i1 in 0..=s {
            for i2 in 0..=s - i1 {
                let sp = s - i1 - i2;
                if sp == 0 {
                    check_rem(self.at([i1, i2, 0, 0]), [i1, i2, 0, 0], abs_tol)?;
                    continue;
                }
                // g_{c,d} = h_{c-1,d} - h_{c,d-1}
                let mut prev = R::zero();
                for c in (1..=sp).rev() {
                    let d = sp - c;
                    let val = self.at([i1, i2, c, d]).add_ref(&prev);
                    *h.at_mut([i1, i2, c - 1, d]) = val.clone();
                    prev = val;
                }
                let rem = self.at([i1, i2, 0, sp]).add_ref(&prev);
                check_rem(&rem, [i1, i2, 0, sp], abs_tol)?;
            }
        }
        Ok(h)
    }

    fn zero_or_remainder(&self, abs_tol: f64) -> Result<Self, ([u32; 4], f64)> {
        check_rem(self.at([0, 0, 0, 0]), [0, 0, 0, 0], abs_tol)?;
        // the quotient of a constant by a linear form is empty; degree 0 stands in
        Ok(Self::zero(0))
    }

    /// `self += k * m * other` where `m` is the monomial with exponent `shift`.
    pub(crate) fn add_shifted(&mut self, other: &Self, shift: [u32; 4], k: i64) {
        for (e, c) in other.terms() {
            let t = [e[0] + shift[0], e[1] + shift[1], e[2] + shift[2], e[3] + shift[3]];
            let v = if k == 1 { c.clone() } else { c.mul_int(k) };
            let slot = self.at_mut(t);
            *slot = slot.add_ref(&v);
        }
    }

    pub fn max_magnitude(&self) -> (f64, Option<[u32; 4]>) {
        let mut best = (0.0, None);
        for (e, c) in self.terms() {
            let m = c.magnitude();
            if best.1.is_none() || m > best.0 {
                best = (m, Some(e));
            }
        }
        best
    }
}

fn check_rem<R: CoefficientRing>(r: &R, at: [u32; 4], abs_tol: f64) -> Result<(), ([u32; 4], f64)> {
    if r.is_negligible(abs_tol) && !r.magnitude().is_nan() {
        Ok(())
    } else {
        Err((at, r.magnitude()))
    }
}
