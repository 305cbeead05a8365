//! Acceptance criteria, one line each.
//!
//! Run with `cargo test -p fayk --test acceptance`.

use std::time::{Duration, Instant};

use fayk_core::arith::eisenstein_q;
use fayk_core::classify::{
    build_elliptic, build_solution, classify, params_equivalent, ClassifyOptions, EllipticParams, SolutionClass,
};
use fayk_core::fay::{fay_residual, formula_c, reconstruct, reduced_series, Slot, Strategy};
use fayk_core::laurent::{BiLaurent, FaySeeds};
use fayk_core::ring::CoefficientRing;
use fayk_core::theta::{admissible_sample, kronecker_expand, kronecker_inf, trisecant_check, Cusp, FormalNome, NumericNome};
use fayk_core::zagier::{build_c, cusp_period_extract, period_residual, period_residual_weight, zagier_c};
use fayk_core::{Complex64, QSeries, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let x = r(rng.gen_range(-50..=50), rng.gen_range(1..=12));
        if !nonzero || x != r(0, 1) {
            return x;
        }
    }
}

fn fayk(args: &[&str]) -> fayk::Outcome {
    fayk::run(std::iter::once("fayk").chain(args.iter().copied()))
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {:.2?}, limit {:.0?}", elapsed, limit))
    }
}

fn fay_identity_numeric() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f = dir.path().join("f.json");
    let f = f.to_str().unwrap();
    let start = Instant::now();
    let exp = fayk(&["expand", "--q", "0.002+0.001i", "--order", "13", "-o", f]);
    let chk = fayk(&["check-fay", f, "--json"]);
    let elapsed = start.elapsed();
    if exp.status != 0 || chk.status != 0 {
        return Err(format!("exit codes {} / {}: {}{}", exp.status, chk.status, exp.stderr, chk.stdout));
    }
    let v: serde_json::Value = serde_json::from_str(&chk.stdout).map_err(|e| e.to_string())?;
    let rel = v["relative"].as_f64().ok_or("no relative residual")?;
    within(elapsed, Duration::from_secs(5))?;
    if rel <= 1e-9 {
        Ok(format!("relative residual {rel:.2e} in {elapsed:.2?}"))
    } else {
        Err(format!("relative residual {rel:.2e}"))
    }
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let nq = 8;
    let g = |k| eisenstein_q(k, nq).map_err(|e| e.to_string());
    let one = QSeries::from_rational(&r(1, 1));
    let seeds = FaySeeds::new(
        one.clone(),
        one,
        g(2)?.mul_ref(&QSeries::from_rational(&r(-2, 1))),
        g(4)?.mul_ref(&QSeries::from_rational(&r(-2, 6))),
        g(6)?.mul_ref(&QSeries::from_rational(&r(-2, 120))),
    );
    let rebuilt = reconstruct(&seeds, 9, Strategy::Pivot).map_err(|e| e.to_string())?;
    let oracle = kronecker_expand(&FormalNome { precision: nq }, 9).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(30))?;
    if rebuilt == oracle {
        Ok(format!("{} coefficients equal in {:.2?}", oracle.terms().count(), start.elapsed()))
    } else {
        Err("reconstruction differs from the theta expansion".into())
    }
}

fn cusp_degeneration() -> Verdict {
    let f = kronecker_expand(&Cusp, 13).map_err(|e| e.to_string())?;
    if f != kronecker_inf(13) {
        return Err("q = 0 expansion differs from the trigonometric series".into());
    }
    let pinned = [(1, r(1, 12)), (3, r(-1, 720)), (5, r(1, 30240)), (7, r(-1, 1209600))];
    for (m, want) in &pinned {
        if f.coeff(*m, 0) != *want {
            return Err(format!("a_{{{m},0}} = {}, expected {want}", f.coeff(*m, 0)));
        }
    }
    if let Some((m, n, c)) = f.terms().find(|(m, n, _)| *m != 0 && *n != 0) {
        return Err(format!("mixed coefficient a_{{{m},{n}}} = {c}"));
    }
    Ok("pinned values match, no mixed terms".into())
}

fn coefficient_formulas() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for k in [2u32, 4, 6, 8] {
        for slot in Slot::all(k) {
            for _ in 0..10 {
                let a = random_rational(&mut rng, true);
                let b = random_rational(&mut rng, true);
                let x = random_rational(&mut rng, false);
                let y = random_rational(&mut rng, false);
                let f = reduced_series(k, slot, a, b, x, y).map_err(|e| e.to_string())?;
                let res = fay_residual(&f, k as i32).map_err(|e| e.to_string())?;
                let idx = slot.index(k).map_err(|e| e.to_string())?;
                if res.coeff(idx) != formula_c(k, slot, &f).map_err(|e| e.to_string())? {
                    return Err(format!("k = {k}, {slot:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact comparisons"))
}

fn classification_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = ClassifyOptions::default();
    let polar_z = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
    };
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let p = EllipticParams::new(
            polar_z(&mut rng, 0.5, 2.0),
            polar_z(&mut rng, 0.5, 2.0),
            polar_z(&mut rng, 0.0, 1.0),
            polar_z(&mut rng, 0.5, 2.0),
            polar_z(&mut rng, 0.0, 0.004),
        );
        let f = build_elliptic(&p, 9).map_err(|e| e.to_string())?;
        let class = classify(&f, &opts).map_err(|e| format!("case {case}: {e}"))?;
        let SolutionClass::Elliptic(got) = &class else {
            return Err(format!("case {case}: classified as {class}"));
        };
        if !params_equivalent(&p, got, 1e-6) {
            return Err(format!("case {case}: parameters not equivalent"));
        }
        let g = build_solution(&class, 9).map_err(|e| e.to_string())?;
        worst = worst.max(f.sub(&g).max_magnitude() / f.max_magnitude());
    }
    if worst > 1e-6 {
        return Err(format!("rebuild differs by {worst:.2e}"));
    }
    for _ in 0..5 {
        let (a, b, g) = (
            random_rational(&mut rng, true),
            random_rational(&mut rng, true),
            random_rational(&mut rng, false),
        );
        for class in [
            SolutionClass::Polar { alpha: a.clone(), beta: b.clone(), gamma: g.clone() },
            SolutionClass::PolarU { alpha: a.clone(), gamma: g.clone() },
            SolutionClass::PolarV { beta: b.clone(), gamma: g.clone() },
        ] {
            let f = build_solution(&class, 9).map_err(|e| e.to_string())?;
            let got = classify(&f, &opts).map_err(|e| e.to_string())?;
            if got != class {
                return Err(format!("{class} came back as {got}"));
            }
        }
    }
    Ok(format!("20 elliptic tuples (worst {worst:.1e}), 15 polar classes exact"))
}

fn period_relations() -> Verdict {
    let exact = zagier_c(&Cusp, 14).map_err(|e| e.to_string())?;
    if let Some((k, _)) = period_residual(&exact).iter().find(|(_, p)| !p.is_zero()) {
        return Err(format!("rational residual nonzero at weight {k}"));
    }
    let numeric = zagier_c(&NumericNome(Complex64::new(0.002, 0.0)), 12).map_err(|e| e.to_string())?;
    let worst = period_residual(&numeric)
        .values()
        .map(|p| p.max_magnitude())
        .fold(0.0, f64::max);
    if worst <= 1e-9 {
        Ok(format!("exact through weight 14; numeric max {worst:.2e}"))
    } else {
        Err(format!("numeric max coefficient {worst:.2e}"))
    }
}

fn periods_iff_fay() -> Verdict {
    for d in [1, 3, 5, 7, 9] {
        for eps in [r(0, 1), r(1, 1000)] {
            let mut f = kronecker_inf(9);
            let old = f.coeff(d - 1, 1);
            f.set(d - 1, 1, old + eps.clone()).map_err(|e| e.to_string())?;
            let fay_zero = matches!(fay_residual(&f, 8), Ok(res) if res.is_zero());
            let c = build_c(&f, 10).map_err(|e| e.to_string())?;
            let periods_zero = period_residual(&c).values().all(|p| p.is_zero());
            let expect = eps == r(0, 1);
            if fay_zero != expect || periods_zero != expect {
                return Err(format!("degree {d}, eps {eps}: fay zero {fay_zero}, periods zero {periods_zero}"));
            }
        }
    }
    Ok("degrees 1..9: both vanish at eps = 0, both nonzero otherwise".into())
}

fn polar_generating_series() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let (a, b) = (random_rational(&mut rng, false), random_rational(&mut rng, false));
        let g = random_rational(&mut rng, false);
        for f in [
            BiLaurent::polar(9, a.clone(), b.clone()),
            BiLaurent::polar(9, a.clone(), b.clone()).mul_exp_uv(&g),
        ] {
            let c = build_c(&f, 10).map_err(|e| e.to_string())?;
            let mut want = fayk_core::zagier::XYLaurentPoly::zero(0);
            // (aXY - b)(bX + aY)
            *want.get_mut(2, 1) = &a * &b;
            *want.get_mut(1, 2) = &a * &a;
            *want.get_mut(1, 0) = -(&b * &b);
            *want.get_mut(0, 1) = -(&a * &b);
            if c.weight(0) != Some(&want) {
                return Err(format!("weight 0 differs for alpha = {a}, beta = {b}"));
            }
            let stray = c.weights().find(|(k, p)| *k != 0 && !p.is_zero()).map(|(k, _)| k);
            if let Some(k) = stray {
                return Err(format!("weight {k} is nonzero for alpha = {a}, beta = {b}, gamma = {g}"));
            }
        }
    }
    Ok("5 pairs, with and without the exponential factor".into())
}

fn trisecant() -> Verdict {
    let q = Complex64::new(0.003, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pts: Vec<_> = (0..100).map(|_| admissible_sample(q, &mut rng)).collect();
    let worst = trisecant_check(q, &pts).map_err(|e| e.to_string())?;
    if worst <= 1e-10 {
        Ok(format!("100 samples, max residual {worst:.2e}"))
    } else {
        Err(format!("max residual {worst:.2e}"))
    }
}

fn cusp_period() -> Verdict {
    let p = cusp_period_extract(12, Complex64::new(0.002, 0.0), Complex64::new(0.0, 0.003))
        .map_err(|e| e.to_string())?;
    let res = period_residual_weight(&p.poly).max_magnitude();
    if res > 1e-8 {
        return Err(format!("period residual {res:.2e}"));
    }
    let odd = p.block_singular_values(1, 1);
    if odd[1] > 1e-6 * odd[0] {
        return Err(format!("odd-odd singular values {odd:?}"));
    }
    let mut ratios = Vec::new();
    for (x, y) in [(0, 1), (1, 0)] {
        let s = p.block_singular_values(x, y);
        if s[1] > 1e-6 * s[0] {
            return Err(format!("block ({x}, {y}) has singular values {:.2e}, {:.2e}", s[0], s[1]));
        }
        ratios.push(s[1] / s[0]);
    }
    Ok(format!(
        "residual {res:.1e}; odd-odd block {:.1e} (vanishes); mixed blocks rank 1 ({:.1e}, {:.1e})",
        odd[0], ratios[0], ratios[1]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("Fay identity of the Kronecker function", fay_identity_numeric),
        ("exact oracle equivalence", oracle_equivalence),
        ("cusp degeneration pin", cusp_degeneration),
        ("coefficient formulas", coefficient_formulas),
        ("classification round trip", classification_round_trip),
        ("period relations", period_relations),
        ("period relations iff Fay identity", periods_iff_fay),
        ("polar generating series", polar_generating_series),
        ("trisecant numeric check", trisecant),
        ("cusp period extraction", cusp_period),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", n + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
