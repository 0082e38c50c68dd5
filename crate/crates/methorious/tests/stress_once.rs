//! One-off heavier stress runs (ignored by default; run explicitly).

use methorious::expalg::{rat_int, ExpPoly};
use methorious::operators::{IntDiffOperator, OperatorTerm};
use methorious::sample::{random_exppoly, random_nonzero_exppoly, Rng};

fn random_big_operator(rng: &mut Rng) -> IntDiffOperator {
    let mut out = IntDiffOperator::zero();
    for _ in 0..(1 + rng.below(3)) {
        let coeff = random_nonzero_exppoly(rng, 3, 2, 2);
        match rng.below(4) {
            0 => out.add_term(OperatorTerm::Diff { coeff, order: rng.below(4) as u32 }),
            1 => out.add_term(OperatorTerm::Int {
                coeff,
                kernel: random_nonzero_exppoly(rng, 3, 2, 2),
            }),
            2 => out.add_term(OperatorTerm::BoundLocal {
                coeff,
                point: methorious::expalg::rat(rng.int_in(-2, 2), rng.int_in(1, 2)),
                order: rng.below(3) as u32,
            }),
            _ => out.add_term(OperatorTerm::BoundGlobal {
                coeff,
                point: methorious::expalg::rat(rng.int_in(1, 2), rng.int_in(1, 2)),
                kernel: random_nonzero_exppoly(rng, 2, 2, 2),
            }),
        }
    }
    out
}

#[test]
#[ignore]
fn stress_operator_ring() {
    let mut rng = Rng::new(0x57e55);
    for round in 0..60 {
        let p = random_big_operator(&mut rng);
        let q = random_big_operator(&mut rng);
        let r = random_big_operator(&mut rng);
        assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)), "assoc round {round}");
        let pq = p.mul(&q);
        for _ in 0..2 {
            let f = random_exppoly(&mut rng, 3, 3, 2);
            assert_eq!(pq.apply(&f), p.apply(&q.apply(&f)), "action round {round}");
        }
        // distributivity
        let lhs = p.mul(&(&q + &r));
        let rhs = &p.mul(&q) + &p.mul(&r);
        assert_eq!(lhs, rhs, "dist round {round}");
    }
}

#[test]
#[ignore]
fn stress_integration_identities() {
    let mut rng = Rng::new(0x1d5);
    for _ in 0..200 {
        let f = random_exppoly(&mut rng, 5, 5, 4);
        let g = random_exppoly(&mut rng, 5, 5, 4);
        assert_eq!(f.integrate().derive(), f);
        let int_f = f.integrate();
        let int_g = g.integrate();
        assert_eq!(
            &int_f * &int_g,
            &(&f * &int_g).integrate() + &(&g * &int_f).integrate()
        );
        assert_eq!(ExpPoly::exp(rat_int(0)), ExpPoly::one());
    }
}

#[test]
#[ignore]
fn stress_greens_and_ore() {
    use methorious::methfun::{act, mf_eq, MethoriousFunction, Verdict};
    use methorious::ore::ore_quadruple;
    use methorious::sample::{random_regular_problem, standard_points};
    let mut rng = Rng::new(0x90e);
    let pts = standard_points();
    for round in 0..25 {
        let o1 = 1 + rng.below(3) as u32;
        let o2 = 1 + rng.below(2) as u32;
        let p1 = random_regular_problem(&mut rng, o1, &pts, true);
        let p2 = random_regular_problem(&mut rng, o2, &pts, true);
        // anti-isomorphism at order up to 3 x 2
        let lhs = p1.multiply(&p2).greens_operator().unwrap();
        let rhs = p2.greens_operator().unwrap().mul(&p1.greens_operator().unwrap());
        assert_eq!(lhs, rhs, "anti round {round}");
        // quadruple identity
        let (q1, q2) = ore_quadruple(&p1, &p2, 50).unwrap();
        assert!(q1.multiply(&p1).same_problem(&q2.multiply(&p2)), "quad round {round}");
        // module law with an ideal element
        let base = random_regular_problem(&mut rng, 1, &pts, false);
        let g = base.system().unwrap().basis()[0].clone();
        let m = MethoriousFunction::new(
            random_exppoly(&mut rng, 2, 2, 1),
            vec![methorious::methfun::IdealElement::new(
                methorious::Scalar::one(),
                g,
                base,
            )
            .unwrap()],
        );
        let lhs = act(&p1.multiply(&p2), &m).unwrap();
        let rhs = act(&p1, &act(&p2, &m).unwrap()).unwrap();
        assert_eq!(mf_eq(&lhs, &rhs), Verdict::Equal, "module round {round}");
    }
}
