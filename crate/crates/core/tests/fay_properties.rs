use fayk_core::fay::{
    extract_seeds, fay_residual, formula_c, reconstruct, reduced_series, FayError, Slot, Strategy as Solver,
};
use fayk_core::laurent::{BiLaurent, FaySeeds};
use fayk_core::theta::{kronecker_expand, FormalNome};
use fayk_core::{QSeries, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn unit() -> impl Strategy<Value = Rational> {
    rational().prop_filter("unit", |r| *r != Rational::from_integer(0.into()))
}

#[test]
fn reconstruct_matches_formal_kronecker_expansion() {
    let f = kronecker_expand(&FormalNome { precision: 8 }, 9).unwrap();
    let seeds: FaySeeds<QSeries> = extract_seeds(&f).unwrap();
    for strategy in [Solver::Pivot, Solver::Full] {
        let g = reconstruct(&seeds, 9, strategy).unwrap();
        assert_eq!(g, f, "{strategy:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn reconstructed_series_solve_fay(a in unit(), b in unit(), c in rational(), d in rational(), e in rational()) {
        let seeds = FaySeeds::new(a, b, c, d, e);
        let f = reconstruct(&seeds, 9, Solver::Pivot).unwrap();
        prop_assert!(f.check_shape().fay_normalized());
        prop_assert!(fay_residual(&f, 8).unwrap().is_zero());
        prop_assert_eq!(extract_seeds(&f).unwrap(), seeds.clone());
        prop_assert_eq!(reconstruct(&seeds, 9, Solver::Full).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn double_poles_never_solve_fay(
        lead in unit(),
        rest in prop::collection::vec(rational(), 45),
    ) {
        let mut f = BiLaurent::zero(4, 2);
        let mut it = rest.into_iter();
        for t in -4..=4 {
            for m in -2..=t + 2 {
                f.set(m, t - m, it.next().unwrap()).unwrap();
            }
        }
        f.set(-2, 0, lead).unwrap();
        let order = f.order() + f.min_degree().unwrap();
        match fay_residual(&f, order) {
            Ok(r) => prop_assert!(!r.is_zero()),
            Err(FayError::NonzeroRemainder { .. } | FayError::NegativeExponent { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn coefficient_formulas_match_residual(
        a in unit(), b in unit(), x in rational(), y in rational()
    ) {
        for k in [2u32, 4, 6, 8] {
            for slot in Slot::all(k) {
                let f = reduced_series(k, slot, a.clone(), b.clone(), x.clone(), y.clone()).unwrap();
                let r = fay_residual(&f, k as i32).unwrap();
                prop_assert_eq!(r.coeff(slot.index(k).unwrap()), formula_c(k, slot, &f).unwrap());
            }
        }
    }
}
