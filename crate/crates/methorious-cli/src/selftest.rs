//! The built-in axiom suite: exact checks of the defining identities on
//! seeded random exponential polynomials.

use methorious::expalg::{eval_projector, ExpPoly};
use methorious::sample::{random_exppoly, Rng};

/// Outcome of one identity over all sampled cases.
#[derive(Debug, Clone)]
pub struct SuiteLine {
    pub name: &'static str,
    pub cases: u32,
    pub ok: bool,
}

fn pair(rng: &mut Rng) -> (ExpPoly, ExpPoly) {
    (random_exppoly(rng, 4, 4, 3), random_exppoly(rng, 4, 4, 3))
}

/// Runs the axiom suite on `cases` random pairs (degree ≤ 4, |freq| ≤ 3).
pub fn run(seed: u64, cases: u32) -> Vec<SuiteLine> {
    let mut rng = Rng::new(seed);
    let mut section = true;
    let mut leibniz = true;
    let mut diff_baxter = true;
    let mut old_baxter = true;
    let mut pure_baxter = true;
    let mut eval_mult = true;
    for _ in 0..cases {
        let (f, g) = pair(&mut rng);
        section &= f.integrate().derive() == f;
        leibniz &= (&f * &g).derive() == &(&f.derive() * &g) + &(&f * &g.derive());
        let int_fp = f.derive().integrate();
        let int_gp = g.derive().integrate();
        diff_baxter &= &(&int_fp * &int_gp) + &(&f * &g).derive().integrate()
            == &(&int_fp * &g) + &(&f * &int_gp);
        let int_g = g.integrate();
        old_baxter &=
            (&f * &g).integrate() == &(&f * &int_g) - &(&f.derive() * &int_g).integrate();
        let int_f = f.integrate();
        pure_baxter &= &int_f * &int_g
            == &(&f * &int_g).integrate() + &(&g * &int_f).integrate();
        eval_mult &= eval_projector(&(&f * &g))
            == &eval_projector(&f) * &eval_projector(&g);
    }
    vec![
        SuiteLine { name: "section axiom (Af)' = f", cases, ok: section },
        SuiteLine { name: "Leibniz rule (fg)' = f'g + fg'", cases, ok: leibniz },
        SuiteLine {
            name: "differential Baxter axiom (Af')(Ag') + A(fg)' = (Af')g + f(Ag')",
            cases,
            ok: diff_baxter,
        },
        SuiteLine { name: "integration by parts Afg = fAg - Af'Ag", cases, ok: old_baxter },
        SuiteLine { name: "pure Baxter axiom (Af)(Ag) = AfAg + AgAf", cases, ok: pure_baxter },
        SuiteLine { name: "evaluation is multiplicative", cases, ok: eval_mult },
    ]
}
