use super::affine::Affine;
use super::homog::Homog4;
use super::residual::fay_residual_component;
use super::{FayError, RESIDUAL_TOL};
use crate::laurent::{BiLaurent, FaySeeds};
use crate::ring::CoefficientRing;

/// How the linear system at each degree is solved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Solve along a fixed chain of rows, one unknown at a time.
    #[default]
    Pivot,
    /// Eliminate over every row of the degree.
    Full,
}

/// Read the five seeds of `f`.
///
/// When `a_{0,-1} = 0 != a_{-1,0}` the third slot holds `a_{0,1}`.
pub fn extract_seeds<R: CoefficientRing>(f: &BiLaurent<R>) -> Result<FaySeeds<R>, FayError> {
    if f.order() < 5 {
        return Err(FayError::InsufficientOrder {
            requested: 5,
            available: f.order(),
        });
    }
    let res_u = f.coeff(-1, 0);
    let res_v = f.coeff(0, -1);
    let a10 = if res_v.is_zero() && !res_u.is_zero() {
        f.coeff(0, 1)
    } else {
        f.coeff(1, 0)
    };
    Ok(FaySeeds::new(res_u, res_v, a10, f.coeff(3, 0), f.coeff(5, 0)))
}

/// The unique solution of order `order` with the given seeds.
pub fn reconstruct<R: CoefficientRing>(
    seeds: &FaySeeds<R>,
    order: i32,
    strategy: Strategy,
) -> Result<BiLaurent<R>, FayError> {
    if order < 1 {
        return Err(FayError::BadOrder(order));
    }
    match (seeds.res_u.is_zero(), seeds.res_v.is_zero()) {
        (true, true) => {
            if !(seeds.a10.is_zero() && seeds.a30.is_zero() && seeds.a50.is_zero()) {
                return Err(FayError::BadSeeds("both residues vanish but a seed does not"));
            }
            Ok(BiLaurent::zero(order, 1))
        }
        (false, true) => degenerate(seeds, order, false),
        (true, false) => degenerate(seeds, order, true),
        (false, false) => elliptic(seeds, order, strategy),
    }
}

/// `a e^{g uv} / u` (or `/ v` when `transposed`) from the squaring recurrence
/// `(2^n - 2) a_{-1,0} a_{n-1,n} = sum_{i+j=n} a_{i-1,i} a_{j-1,j}`.
fn degenerate<R: CoefficientRing>(
    seeds: &FaySeeds<R>,
    order: i32,
    transposed: bool,
) -> Result<BiLaurent<R>, FayError> {
    if !(seeds.a30.is_zero() && seeds.a50.is_zero()) {
        return Err(FayError::BadSeeds("a single residue forces a_{3,0} = a_{5,0} = 0"));
    }
    let residue = if transposed { &seeds.res_v } else { &seeds.res_u };
    let place = |n: i32| if transposed { (n, n - 1) } else { (n - 1, n) };
    let mut chain: Vec<R> = vec![residue.clone(), seeds.a10.clone()];
    let mut n = 2;
    while 2 * n - 1 <= order {
        let mut acc = R::zero();
        for i in 1..n {
            acc.add_mul_assign(&chain[i as usize], &chain[(n - i) as usize]);
        }
        let pivot = residue.mul_int((1i64 << n) - 2);
        let inv = pivot.try_inv().ok_or(FayError::NonUnitPivot { degree: 2 * n - 1 })?;
        chain.push(acc.mul_ref(&inv));
        n += 1;
    }
    let mut f = BiLaurent::zero(order, 1);
    for (n, c) in chain.into_iter().enumerate() {
        let (m, k) = place(n as i32);
        if m + k <= order {
            f.set(m, k, c).expect("in window");
        }
    }
    Ok(f)
}

/// Linear rows `constant + sum coeff_i x_i = 0` of one residual component.
struct Rows<R> {
    rows: Vec<([u32; 4], Affine<R>)>,
}

impl<R: CoefficientRing> Rows<R> {
    fn row(&self, index: [u32; 4]) -> &Affine<R> {
        &self
            .rows
            .iter()
            .find(|(e, _)| *e == index)
            .expect("row index of the right degree")
            .1
    }
}

fn elliptic<R: CoefficientRing>(
    seeds: &FaySeeds<R>,
    order: i32,
    strategy: Strategy,
) -> Result<BiLaurent<R>, FayError> {
    let mut f = BiLaurent::polar(order, seeds.res_u.clone(), seeds.res_v.clone());
    for d in (1..=order).step_by(2) {
        let fixed = match d {
            1 => Some(&seeds.a10),
            3 => Some(&seeds.a30),
            5 => Some(&seeds.a50),
            _ => None,
        };
        // unknown i is a_{i, d-i}
        let mut g: BiLaurent<Affine<R>> = f.truncated(d - 1).map(|c| Affine::constant(c.clone()));
        g = extend(&g, d);
        for m in 0..=d {
            let v = match (m == d, fixed) {
                (true, Some(c)) => Affine::constant(c.clone()),
                _ => Affine::unknown(m as usize),
            };
            g.set(m, d - m, v).expect("in window");
        }
        let comp: Homog4<Affine<R>> = fay_residual_component(&g, (d - 1) as u32, RESIDUAL_TOL)?;
        let rows = Rows {
            rows: comp.indices().map(|e| (e, comp.get(e))).collect(),
        };
        if rows.rows.iter().any(|(_, r)| r.nonlinear) {
            return Err(FayError::Inconsistent { degree: d, index: [0; 4] });
        }
        let known: Vec<Option<R>> = (0..=d)
            .map(|m| if m == d { fixed.cloned() } else { None })
            .collect();
        let values = match strategy {
            Strategy::Pivot => solve_pivot(&rows, known, d)?,
            Strategy::Full => solve_full(&rows, known, d)?,
        };
        verify(&rows, &values, d)?;
        for (m, v) in values.into_iter().enumerate() {
            f.set(m as i32, d - m as i32, v).expect("in window");
        }
    }
    Ok(f)
}

fn extend<R: CoefficientRing>(g: &BiLaurent<R>, order: i32) -> BiLaurent<R> {
    let mut out = BiLaurent::zero(order, g.pole_depth());
    for (m, n, c) in g.terms() {
        out.set(m, n, c.clone()).expect("in window");
    }
    out
}

/// `constant + sum over solved unknowns` of a row, and its coefficient on `target`.
fn substitute<R: CoefficientRing>(
    row: &Affine<R>,
    values: &[Option<R>],
    targets: &[usize],
    degree: i32,
    index: [u32; 4],
) -> Result<R, FayError> {
    let mut acc = row.constant.clone();
    for (i, c) in &row.linear {
        if targets.contains(i) {
            continue;
        }
        match &values[*i] {
            Some(x) => acc.add_mul_assign(c, x),
            None => return Err(FayError::Inconsistent { degree, index }),
        }
    }
    Ok(acc)
}

fn solve_pivot<R: CoefficientRing>(
    rows: &Rows<R>,
    mut values: Vec<Option<R>>,
    d: i32,
) -> Result<Vec<R>, FayError> {
    let du = d as u32;
    if d == 1 {
        solve_one(rows, &mut values, [0, 0, 0, 0], 0, d)?;
    } else {
        let k = du - 1;
        if values[d as usize].is_some() {
            solve_one(rows, &mut values, [0, k, 0, 0], k as usize, d)?;
        } else {
            solve_two(rows, &mut values, [[0, k, 0, 0], [k - 2, 2, 0, 0]], [du as usize, k as usize], d)?;
        }
        for m in (1..k).rev() {
            solve_one(rows, &mut values, [0, m, 0, k - m], m as usize, d)?;
        }
        solve_one(rows, &mut values, [0, 0, 0, k], 0, d)?;
    }
    Ok(values.into_iter().map(|v| v.expect("solved")).collect())
}

fn solve_one<R: CoefficientRing>(
    rows: &Rows<R>,
    values: &mut [Option<R>],
    index: [u32; 4],
    target: usize,
    d: i32,
) -> Result<(), FayError> {
    let row = rows.row(index);
    let rest = substitute(row, values, &[target], d, index)?;
    let pivot = row.coefficient(target);
    let inv = pivot.try_inv().ok_or(FayError::NonUnitPivot { degree: d })?;
    values[target] = Some(-rest.mul_ref(&inv));
    Ok(())
}

fn solve_two<R: CoefficientRing>(
    rows: &Rows<R>,
    values: &mut [Option<R>],
    index: [[u32; 4]; 2],
    target: [usize; 2],
    d: i32,
) -> Result<(), FayError> {
    let (r1, r2) = (rows.row(index[0]), rows.row(index[1]));
    let b1 = -substitute(r1, values, &target, d, index[0])?;
    let b2 = -substitute(r2, values, &target, d, index[1])?;
    let (a11, a12) = (r1.coefficient(target[0]), r1.coefficient(target[1]));
    let (a21, a22) = (r2.coefficient(target[0]), r2.coefficient(target[1]));
    let det = a11.mul_ref(&a22).sub_ref(&a12.mul_ref(&a21));
    let inv = det.try_inv().ok_or(FayError::NonUnitPivot { degree: d })?;
    let x = b1.mul_ref(&a22).sub_ref(&b2.mul_ref(&a12)).mul_ref(&inv);
    let y = a11.mul_ref(&b2).sub_ref(&a21.mul_ref(&b1)).mul_ref(&inv);
    values[target[0]] = Some(x);
    values[target[1]] = Some(y);
    Ok(())
}

fn solve_full<R: CoefficientRing>(
    rows: &Rows<R>,
    known: Vec<Option<R>>,
    d: i32,
) -> Result<Vec<R>, FayError> {
    let unknowns: Vec<usize> = (0..known.len()).filter(|&i| known[i].is_none()).collect();
    let n = unknowns.len();
    // augmented matrix [A | b] with A x = b
    let mut m: Vec<(Vec<R>, R, [u32; 4])> = Vec::new();
    for (e, row) in &rows.rows {
        let rhs = -substitute(row, &known, &unknowns, d, *e)?;
        let coeffs: Vec<R> = unknowns.iter().map(|&i| row.coefficient(i)).collect();
        m.push((coeffs, rhs, *e));
    }
    let mut pivot_rows = Vec::with_capacity(n);
    let mut used = vec![false; m.len()];
    for col in 0..n {
        let candidates = (0..m.len()).filter(|&r| !used[r] && !m[r].0[col].is_zero());
        let chosen = if R::EXACT {
            let mut nonzero = false;
            let mut unit = None;
            for r in candidates {
                nonzero = true;
                if m[r].0[col].try_inv().is_some() {
                    unit = Some(r);
                    break;
                }
            }
            match (unit, nonzero) {
                (Some(r), _) => r,
                (None, true) => return Err(FayError::NonUnitPivot { degree: d }),
                (None, false) => return Err(FayError::Underdetermined { degree: d }),
            }
        } else {
            candidates
                .max_by(|&a, &b| m[a].0[col].magnitude().total_cmp(&m[b].0[col].magnitude()))
                .ok_or(FayError::Underdetermined { degree: d })?
        };
        let inv = m[chosen].0[col]
            .try_inv()
            .ok_or(FayError::NonUnitPivot { degree: d })?;
        let (prow, prhs, _) = m[chosen].clone();
        let prow: Vec<R> = prow.iter().map(|c| c.mul_ref(&inv)).collect();
        let prhs = prhs.mul_ref(&inv);
        for (r, entry) in m.iter_mut().enumerate() {
            if r == chosen || entry.0[col].is_zero() {
                continue;
            }
            let factor = entry.0[col].clone();
            for (c, p) in entry.0.iter_mut().zip(&prow) {
                *c = c.sub_ref(&factor.mul_ref(p));
            }
            entry.1 = entry.1.sub_ref(&factor.mul_ref(&prhs));
        }
        m[chosen] = (prow, prhs, m[chosen].2);
        used[chosen] = true;
        pivot_rows.push(chosen);
    }
    let mut values = known;
    for (col, &r) in pivot_rows.iter().enumerate() {
        values[unknowns[col]] = Some(m[r].1.clone());
    }
    Ok(values.into_iter().map(|v| v.expect("solved")).collect())
}

/// Every row must vanish at the solution.
fn verify<R: CoefficientRing>(rows: &Rows<R>, values: &[R], d: i32) -> Result<(), FayError> {
    let scale = values
        .iter()
        .map(|v| v.magnitude())
        .fold(1.0f64, f64::max);
    for (e, row) in &rows.rows {
        let mut acc = row.constant.clone();
        let mut size = row.constant.magnitude();
        for (i, c) in &row.linear {
            acc.add_mul_assign(c, &values[*i]);
            size = size.max(c.magnitude() * scale);
        }
        let tol = 1e-8 * size.max(f64::MIN_POSITIVE);
        if !acc.is_negligible(tol) || acc.magnitude().is_nan() {
            return Err(FayError::Inconsistent { degree: d, index: *e });
        }
    }
    Ok(())
}

impl<R: CoefficientRing> FaySeeds<R> {
    /// Seeds of the cusp solution `(coth(u/2) + coth(v/2)) / 2`.
    pub fn cusp() -> Self {
        let r = |n: i64, d: i64| {
            R::from_rational(&num_rational::BigRational::new(n.into(), d.into()))
        };
        FaySeeds::new(R::one(), R::one(), r(1, 12), r(-1, 720), r(1, 30240))
    }
}
