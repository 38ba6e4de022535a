mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use walker::exprparse::{parse_expr, render, render_nf};
use walker::symcore::{linear_membership, ArgSet, CoefficientMode, NormalForm, Rational, Substitution};

fn expr_nf(seed: u64, depth: u32) -> Option<NormalForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::random_expr(&mut rng, depth).normalize().ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        if let Some(nf) = expr_nf(seed, 3) {
            prop_assert_eq!(nf.to_expr().normalize().unwrap(), nf);
        }
    }

    #[test]
    fn rendering_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = common::random_expr(&mut rng, 3);
        if let Ok(nf) = e.normalize() {
            let back = parse_expr(&render(&e), &common::scope()).unwrap().normalize().unwrap();
            prop_assert_eq!(&back, &nf);
            let back = parse_expr(&render_nf(&nf), &common::scope()).unwrap().normalize().unwrap();
            prop_assert_eq!(back, nf);
        }
    }

    #[test]
    fn partial_derivatives_commute(seed in any::<u64>(), i in 1u8..=4, j in 1u8..=4) {
        if let Some(f) = expr_nf(seed, 3) {
            prop_assert_eq!(f.diff(i).diff(j), f.diff(j).diff(i));
        }
    }

    #[test]
    fn tree_and_normal_form_derivatives_agree(seed in any::<u64>(), i in 1u8..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = common::random_expr(&mut rng, 3);
        if let Ok(nf) = e.normalize() {
            prop_assert_eq!(e.diff(i).normalize().unwrap(), nf.diff(i));
        }
    }

    #[test]
    fn leibniz_rule(s1 in any::<u64>(), s2 in any::<u64>(), i in 1u8..=4) {
        if let (Some(f), Some(g)) = (expr_nf(s1, 2), expr_nf(s2, 2)) {
            let lhs = (&f * &g).diff(i);
            let rhs = &(&f.diff(i) * &g) + &(&f * &g.diff(i));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn substitution_commutes_with_differentiation(s1 in any::<u64>(), s2 in any::<u64>(), i in 1u8..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(s2);
        let value = common::random_poly(&mut rng, 2);
        if let Some(f) = expr_nf(s1, 2) {
            let mut sub = Substitution::new()
                .bind("a", ArgSet::ALL, value)
                .unwrap()
                .bind("b", common::r34(), NormalForm::coord(3))
                .unwrap();
            if let (Ok(lhs), Ok(inner)) = (sub.apply(&f.diff(i)), sub.apply(&f)) {
                prop_assert_eq!(lhs, inner.diff(i));
            }
        }
    }

    #[test]
    fn membership_is_sound(seed in any::<u64>(), c in -5i64..5, product in any::<bool>(), noise in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<NormalForm> = (0..3).map(|_| common::random_poly(&mut rng, 2)).collect();
        let q = |n: i64| Rational::from_integer(n.into());
        let mut target = &(&basis[0].scale(&q(c)) + &basis[1].scale(&q(2))) - &basis[2];
        if product {
            target = &target + &(&basis[1] * &basis[2]);
        }
        if noise {
            target = &target + &NormalForm::coord(1);
        }
        for mode in [CoefficientMode::RationalConstant, CoefficientMode::Expression] {
            if let Some(coeffs) = linear_membership(&target, &basis, mode).unwrap() {
                prop_assert!((&coeffs.combine(&basis) - &target).is_zero());
            }
        }
        if !product && !noise {
            prop_assert!(linear_membership(&target, &basis, CoefficientMode::RationalConstant).unwrap().is_some());
        }
    }
}
