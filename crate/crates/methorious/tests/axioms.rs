//! Property tests for the integro-differential axioms on exponential
//! polynomials. All identities are exact; no tolerances.

use methorious::expalg::{eval_projector, rat, ExpPoly, Scalar};
use proptest::prelude::*;

fn exppoly() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec(
        (-5i64..=5, 1i64..=3, 0u32..=4, -3i64..=3),
        0..4,
    )
    .prop_map(|terms| {
        let mut out = ExpPoly::zero();
        for (num, den, deg, freq) in terms {
            out = &out
                + &ExpPoly::term(
                    Scalar::from_rat(rat(num, den)),
                    deg,
                    methorious::expalg::rat_int(freq),
                );
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn section_axiom(f in exppoly()) {
        prop_assert_eq!(f.integrate().derive(), f);
    }

    #[test]
    fn leibniz_axiom(f in exppoly(), g in exppoly()) {
        let lhs = (&f * &g).derive();
        let rhs = &(&f.derive() * &g) + &(&f * &g.derive());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_baxter_axiom(f in exppoly(), g in exppoly()) {
        // (∫f′)(∫g′) + ∫(fg)′ = (∫f′)g + f(∫g′)
        let int_fp = f.derive().integrate();
        let int_gp = g.derive().integrate();
        let lhs = &(&int_fp * &int_gp) + &(&f * &g).derive().integrate();
        let rhs = &(&int_fp * &g) + &(&f * &int_gp);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn old_differential_baxter_axiom(f in exppoly(), g in exppoly()) {
        // ∫fg = f∫g − ∫f′∫g (nested integral binds to the right)
        let lhs = (&f * &g).integrate();
        let int_g = g.integrate();
        let rhs = &(&f * &int_g) - &(&f.derive() * &int_g).integrate();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pure_baxter_axiom(f in exppoly(), g in exppoly()) {
        // (∫f)(∫g) = ∫f∫g + ∫g∫f
        let int_f = f.integrate();
        let int_g = g.integrate();
        let lhs = &int_f * &int_g;
        let rhs = &(&f * &int_g).integrate() + &(&g * &int_f).integrate();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_multiplicative_projector(f in exppoly(), g in exppoly()) {
        let e_fg = eval_projector(&(&f * &g));
        let product = &eval_projector(&f) * &eval_projector(&g);
        prop_assert_eq!(e_fg, product);
        // e∘e = e
        prop_assert_eq!(eval_projector(&eval_projector(&f)), eval_projector(&f));
    }

    #[test]
    fn direct_sum_decomposition(f in exppoly()) {
        // f = e(f) + ∫(f′), with the integral part vanishing at 0.
        let constant = eval_projector(&f);
        let initialized = f.derive().integrate();
        prop_assert_eq!(&constant + &initialized, f);
        prop_assert!(initialized.value_at_zero().is_zero());
    }

    #[test]
    fn evaluation_characters_are_multiplicative(f in exppoly(), g in exppoly(), a in -2i64..=2) {
        let ch = methorious::expalg::Character::at_int(a);
        prop_assert_eq!(ch.apply(&(&f * &g)), &ch.apply(&f) * &ch.apply(&g));
    }

    #[test]
    fn integration_lands_in_initialized_functions(f in exppoly()) {
        prop_assert!(f.integrate().value_at_zero().is_zero());
    }
}
