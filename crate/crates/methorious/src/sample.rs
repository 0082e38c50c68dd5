//! Deterministic sampling of algebra elements, conditions and problems.
//!
//! The randomized identity suites (library property tests and the command
//! line self test) draw their inputs here so that a run is reproducible
//! from a single seed.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::expalg::{rat, rat_int, ExpPoly, Rat, Scalar};
use crate::operators::StieltjesCondition;
use crate::problems::{BoundaryProblem, DiffOperator};

/// SplitMix64: tiny, seedable, good enough for test-input generation.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}

/// A small rational with numerator in `-max..=max` and denominator in
/// `1..=den_max`.
pub fn random_rat(rng: &mut Rng, max: i64, den_max: i64) -> Rat {
    rat(rng.int_in(-max, max), rng.int_in(1, den_max))
}

/// An exponential polynomial with up to `terms` monomials of degree
/// `≤ max_degree` and integer frequencies `|μ| ≤ max_freq`.
pub fn random_exppoly(rng: &mut Rng, terms: u32, max_degree: u32, max_freq: i64) -> ExpPoly {
    let mut out = ExpPoly::zero();
    for _ in 0..terms {
        let c = random_rat(rng, 5, 3);
        if c.is_zero() {
            continue;
        }
        let deg = rng.below(max_degree as u64 + 1) as u32;
        let freq = rat_int(rng.int_in(-max_freq, max_freq));
        out = &out + &ExpPoly::term(Scalar::from_rat(c), deg, freq);
    }
    out
}

/// Like [`random_exppoly`] but never returns the zero polynomial.
pub fn random_nonzero_exppoly(
    rng: &mut Rng,
    terms: u32,
    max_degree: u32,
    max_freq: i64,
) -> ExpPoly {
    loop {
        let f = random_exppoly(rng, terms, max_degree, max_freq);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A boundary condition over the given points: a combination of point
/// values, first derivatives, and optionally a definite-integral part.
pub fn random_condition(rng: &mut Rng, points: &[Rat], with_global: bool) -> StieltjesCondition {
    let mut out = StieltjesCondition::zero();
    let n_local = 1 + rng.below(2);
    for _ in 0..n_local {
        let a = rng.pick(points).clone();
        let order = rng.below(2) as u32;
        let c = random_rat(rng, 3, 2);
        if !c.is_zero() {
            out = &out + &StieltjesCondition::local_term(Scalar::from_rat(c), a, order);
        }
    }
    if with_global && rng.below(2) == 0 {
        let a = rng.pick(points).clone();
        let f = random_exppoly(rng, 2, 1, 1);
        if !f.is_zero() {
            out = &out + &StieltjesCondition::global_term(a, f);
        }
    }
    out
}

/// A monic constant-coefficient operator with rational roots drawn from a
/// fixed small set, of the exact given order.
pub fn random_operator(rng: &mut Rng, order: u32) -> DiffOperator {
    let pool = [rat_int(0), rat_int(1), rat_int(-1), rat_int(2)];
    let roots: Vec<Rat> = (0..order).map(|_| rng.pick(&pool).clone()).collect();
    DiffOperator::from_roots(&roots)
}

/// A regular boundary problem of the given order over the given points,
/// found by rejection sampling.
pub fn random_regular_problem(
    rng: &mut Rng,
    order: u32,
    points: &[Rat],
    with_global: bool,
) -> BoundaryProblem {
    loop {
        let op = random_operator(rng, order);
        let conds: Vec<StieltjesCondition> =
            (0..order).map(|_| random_condition(rng, points, with_global)).collect();
        let p = BoundaryProblem::new(op, conds);
        if p.dim() == order as usize && p.is_regular().unwrap_or(false) {
            return p;
        }
    }
}

/// A singular boundary problem (regularity rejected instead of accepted).
pub fn random_singular_problem(
    rng: &mut Rng,
    max_order: u32,
    max_conditions: u32,
    points: &[Rat],
) -> BoundaryProblem {
    loop {
        let order = 1 + rng.below(max_order as u64) as u32;
        let n_conds = 1 + rng.below(max_conditions as u64) as u32;
        let op = random_operator(rng, order);
        let conds: Vec<StieltjesCondition> =
            (0..n_conds).map(|_| random_condition(rng, points, true)).collect();
        let p = BoundaryProblem::new(op, conds);
        if !p.is_regular().unwrap_or(true) {
            return p;
        }
    }
}

/// The standard point set `{0, 1/2, 1}` used by the randomized suites.
pub fn standard_points() -> Vec<Rat> {
    alloc::vec![rat_int(0), rat(1, 2), rat_int(1)]
}
