//! Left Ore machinery over the monoid of regular boundary problems and the
//! resulting left fraction ring of methorious operators.
//!
//! Regular boundary problems admit common left multiples: merge the
//! boundary spaces over a common left multiple of the operators,
//! regularize, and divide by each factor. Iterating the quadruple
//! construction commutes a whole combination past a problem (`ore_linear`),
//! which yields multiplication and addition of left fractions
//! `den⁻¹·Σ λᵢ·pᵢ`. The extension of the problem ring into the fraction
//! ring has a nontrivial kernel; a bounded witness search semi-decides
//! membership.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expalg::{ExpPoly, Rat, Scalar};
use crate::operators::StieltjesCondition;
use crate::problems::{divide_left, BoundaryProblem, DiffOperator};
use crate::umbral::regularize;

/// An element of the ring of boundary problems: a rational combination of
/// regular problems, merged by problem equality.
#[derive(Debug, Clone, Default)]
pub struct ProblemCombination {
    terms: Vec<(Rat, BoundaryProblem)>,
}

impl ProblemCombination {
    pub fn zero() -> Self {
        ProblemCombination::default()
    }

    /// The image `ε(p)` of a single regular problem.
    ///
    /// # Errors
    /// [`Error::SingularProblem`] for singular problems (the ring is the
    /// monoid algebra over the regular ones).
    pub fn from_problem(p: BoundaryProblem) -> Result<Self> {
        ProblemCombination::zero().with_term(Rat::one(), p)
    }

    pub fn with_term(mut self, coeff: Rat, p: BoundaryProblem) -> Result<Self> {
        if !p.is_regular()? {
            return Err(Error::SingularProblem);
        }
        self.push(coeff, p);
        Ok(self)
    }

    fn push(&mut self, coeff: Rat, p: BoundaryProblem) {
        if coeff.is_zero() {
            return;
        }
        for (c, q) in self.terms.iter_mut() {
            if q.same_problem(&p) {
                *c += coeff;
                if c.is_zero() {
                    let keep: Vec<_> = core::mem::take(&mut self.terms)
                        .into_iter()
                        .filter(|(c, _)| !c.is_zero())
                        .collect();
                    self.terms = keep;
                }
                return;
            }
        }
        self.terms.push((coeff, p));
    }

    pub fn terms(&self) -> &[(Rat, BoundaryProblem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return ProblemCombination::zero();
        }
        ProblemCombination {
            terms: self.terms.iter().map(|(c, p)| (c * q, p.clone())).collect(),
        }
    }

    pub fn add(&self, rhs: &ProblemCombination) -> Self {
        let mut out = self.clone();
        for (c, p) in rhs.terms.iter() {
            out.push(c.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &ProblemCombination) -> Self {
        self.add(&rhs.scale(&-Rat::one()))
    }

    /// Left multiplication by a problem: `s·Σλᵢpᵢ = Σλᵢ(s·pᵢ)`, merged.
    pub fn premultiply(&self, s: &BoundaryProblem) -> Self {
        let mut out = ProblemCombination::zero();
        for (c, p) in self.terms.iter() {
            out.push(c.clone(), s.multiply(p));
        }
        out
    }

    /// Ring product of two combinations.
    pub fn multiply(&self, rhs: &ProblemCombination) -> Self {
        let mut out = ProblemCombination::zero();
        for (c, p) in self.terms.iter() {
            for (d, q) in rhs.terms.iter() {
                out.push(c * d, p.multiply(q));
            }
        }
        out
    }

    /// Equality in the problem ring (difference merges to zero).
    pub fn same_combination(&self, rhs: &ProblemCombination) -> bool {
        self.sub(rhs).is_zero()
    }

    /// All character points occurring in any condition of any term,
    /// together with the basepoint 0.
    pub fn points(&self) -> Vec<Rat> {
        let mut pts = vec![Rat::zero()];
        for (_, p) in self.terms.iter() {
            for beta in p.conditions() {
                pts.extend(beta.points());
            }
        }
        pts.sort_by(crate::expalg::rat_cmp);
        pts.dedup();
        pts
    }

    pub fn max_order(&self) -> u32 {
        self.terms.iter().map(|(_, p)| p.order()).max().unwrap_or(0)
    }
}

/// A methorious operator: a left fraction `den⁻¹·num` with regular
/// denominator.
#[derive(Debug, Clone)]
pub struct MethoriousOperator {
    den: BoundaryProblem,
    num: ProblemCombination,
}

impl MethoriousOperator {
    pub fn new(den: BoundaryProblem, num: ProblemCombination) -> Result<Self> {
        if !den.is_regular()? {
            return Err(Error::SingularProblem);
        }
        Ok(MethoriousOperator { den, num })
    }

    /// The extension `ε(p)` of a problem into the fraction ring.
    pub fn embed(p: BoundaryProblem) -> Result<Self> {
        let num = ProblemCombination::from_problem(p)?;
        MethoriousOperator::new(BoundaryProblem::neutral(), num)
    }

    /// The inverse `p⁻¹` of a regular problem.
    pub fn inverse_of(p: BoundaryProblem) -> Result<Self> {
        let num = ProblemCombination::from_problem(BoundaryProblem::neutral())?;
        MethoriousOperator::new(p, num)
    }

    pub fn den(&self) -> &BoundaryProblem {
        &self.den
    }

    pub fn num(&self) -> &ProblemCombination {
        &self.num
    }

    /// Syntactic equality after normalization (same denominator problem and
    /// same numerator combination). Deciding semantic equality in the
    /// fraction ring is open; see `methfun::frac_eq` for the three-valued
    /// oracle.
    pub fn same_representation(&self, rhs: &MethoriousOperator) -> bool {
        self.den.same_problem(&rhs.den) && self.num.same_combination(&rhs.num)
    }
}

// Rational polynomial helpers (low-to-high coefficients, zero = empty).

pub(crate) fn rpoly_trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn rpoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn rpoly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem: Vec<Rat> = num.to_vec();
    rpoly_trim(&mut rem);
    let dlead = den.last().expect("nonzero divisor");
    let mut quot = vec![Rat::zero(); rem.len().saturating_sub(den.len()) + 1];
    while rem.len() >= den.len() && !rem.is_empty() {
        let q = rem.last().unwrap() / dlead;
        let shift = rem.len() - den.len();
        quot[shift] = q.clone();
        for (i, c) in den.iter().enumerate() {
            let t = &rem[shift + i] - &(c * &q);
            rem[shift + i] = t;
        }
        rpoly_trim(&mut rem);
    }
    rpoly_trim(&mut quot);
    (quot, rem)
}

pub(crate) fn rpoly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    rpoly_trim(&mut a);
    rpoly_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = rpoly_divrem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = &*c / &lead;
        }
    }
    a
}

pub(crate) fn diffop_from_char_poly(mut cp: Vec<Rat>) -> DiffOperator {
    let lead = cp.last().expect("nonzero polynomial").clone();
    if !lead.is_one() {
        for c in cp.iter_mut() {
            *c = &*c / &lead;
        }
    }
    cp.pop();
    DiffOperator::from_coeffs(cp.into_iter().map(ExpPoly::from_rat).collect())
}

/// Minimal common left multiple of constant-coefficient operators through
/// the least common multiple of their characteristic polynomials: returns
/// `(T, C₁, C₂)` with `T = C₁∘T₁ = C₂∘T₂` monic.
///
/// # Errors
/// [`Error::UnsupportedOperator`] for variable coefficients, where monic
/// common left multiples need adapted elimination methods.
pub fn common_left_multiple(
    t1: &DiffOperator,
    t2: &DiffOperator,
) -> Result<(DiffOperator, DiffOperator, DiffOperator)> {
    let p1 = t1.char_poly().ok_or(Error::UnsupportedOperator)?;
    let p2 = t2.char_poly().ok_or(Error::UnsupportedOperator)?;
    let g = rpoly_gcd(&p1, &p2);
    let (c2_poly, rem) = rpoly_divrem(&p1, &g);
    debug_assert!(rem.is_empty());
    let lcm = rpoly_mul(&c2_poly, &p2);
    let (c1_poly, rem) = rpoly_divrem(&lcm, &p1);
    debug_assert!(rem.is_empty());
    Ok((
        diffop_from_char_poly(lcm),
        diffop_from_char_poly(c1_poly),
        diffop_from_char_poly(c2_poly),
    ))
}

/// Ore quadruple: regular `(q₁, q₂)` with `q₁·p₁ = q₂·p₂`, by merging the
/// boundary spaces over a common left multiple, regularizing, and dividing
/// by each factor.
pub fn ore_quadruple(
    p1: &BoundaryProblem,
    p2: &BoundaryProblem,
    bound: u32,
) -> Result<(BoundaryProblem, BoundaryProblem)> {
    if !(p1.is_regular()? && p2.is_regular()?) {
        return Err(Error::SingularProblem);
    }
    if p1.same_problem(p2) {
        return Ok((BoundaryProblem::neutral(), BoundaryProblem::neutral()));
    }
    let (t, _, _) = common_left_multiple(p1.operator(), p2.operator())?;
    let mut conds: Vec<StieltjesCondition> = p1.conditions().to_vec();
    conds.extend(p2.conditions().iter().cloned());
    let merged = BoundaryProblem::new(t, conds);
    let s = regularize(&merged, bound)?;
    let c1 = s.operator().right_divide(p1.operator()).ok_or(Error::FactorMismatch)?;
    let c2 = s.operator().right_divide(p2.operator()).ok_or(Error::FactorMismatch)?;
    let q1 = divide_left(&c1, p1, &s)?;
    let q2 = divide_left(&c2, p2, &s)?;
    debug_assert!(q1.multiply(p1).same_problem(&q2.multiply(p2)));
    Ok((q1, q2))
}

/// Commutes a combination past a problem: regular `s̃` and a combination
/// `r̃` with `s̃·r = r̃·s` in the problem ring, by the cascade of Ore
/// quadruples (coefficients are carried over unchanged).
pub fn ore_linear(
    r: &ProblemCombination,
    s: &BoundaryProblem,
    bound: u32,
) -> Result<(BoundaryProblem, ProblemCombination)> {
    let mut accumulated = BoundaryProblem::neutral();
    let mut lefts: Vec<BoundaryProblem> = Vec::with_capacity(r.terms().len());
    let mut rights: Vec<BoundaryProblem> = Vec::with_capacity(r.terms().len());
    for (_, p) in r.terms().iter() {
        let staged = accumulated.multiply(p);
        let (l, rt) = ore_quadruple(&staged, s, bound)?;
        accumulated = l.multiply(&accumulated);
        lefts.push(l);
        rights.push(rt);
    }
    // Cofactor of term i picks up the left factors introduced afterwards.
    let mut suffix = BoundaryProblem::neutral();
    let mut cofactors = vec![BoundaryProblem::neutral(); rights.len()];
    for i in (0..rights.len()).rev() {
        cofactors[i] = suffix.multiply(&rights[i]);
        suffix = suffix.multiply(&lefts[i]);
    }
    let mut num = ProblemCombination::zero();
    for ((coeff, _), cof) in r.terms().iter().zip(cofactors) {
        num.push(coeff.clone(), cof);
    }
    debug_assert!(r
        .premultiply(&suffix)
        .same_combination(&num.multiply(&ProblemCombination::from_problem(s.clone())?)));
    Ok((suffix, num))
}

/// Product of left fractions: `(A⁻¹·P)·(B⁻¹·Q) = (s̃·A)⁻¹·(r̃·Q)` where
/// `s̃·P = r̃·B`.
pub fn frac_mul(
    a: &MethoriousOperator,
    b: &MethoriousOperator,
    bound: u32,
) -> Result<MethoriousOperator> {
    let (s_tilde, r_tilde) = ore_linear(a.num(), b.den(), bound)?;
    let den = s_tilde.multiply(a.den());
    let num = r_tilde.multiply(b.num());
    MethoriousOperator::new(den, num)
}

/// Sum of left fractions over the common left denominator produced by the
/// Ore quadruple of the denominators.
pub fn frac_add(
    a: &MethoriousOperator,
    b: &MethoriousOperator,
    bound: u32,
) -> Result<MethoriousOperator> {
    if a.den().same_problem(b.den()) {
        return MethoriousOperator::new(a.den().clone(), a.num().add(b.num()));
    }
    let (qa, qb) = ore_quadruple(a.den(), b.den(), bound)?;
    let den = qa.multiply(a.den());
    let num = a.num().premultiply(&qa).add(&b.num().premultiply(&qb));
    MethoriousOperator::new(den, num)
}

/// The candidate boundary conditions used by the bounded searches: for each
/// point `a` the local conditions `ev_a`, `ev_a∂` and the global conditions
/// `ev_a∫xⁿ`, `n ≤ 2`.
pub fn condition_dictionary(points: &[Rat]) -> Vec<StieltjesCondition> {
    let mut out = Vec::new();
    for a in points {
        out.push(StieltjesCondition::local_term(Scalar::one(), a.clone(), 0));
        out.push(StieltjesCondition::local_term(Scalar::one(), a.clone(), 1));
        for n in 0..=2u32 {
            let c = StieltjesCondition::global_term(a.clone(), ExpPoly::x_pow(n));
            if !c.is_zero() {
                out.push(c);
            }
        }
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Bounded search for a regular problem `s` with `s·r = 0` in the problem
/// ring. Denominator skeletons are `∂ʲ` times the common left multiple of
/// the occurring operators, up to the order budget; boundary conditions are
/// drawn from [`condition_dictionary`] over the occurring points. Returns
/// the first witness in the fixed enumeration order, or `None` — the exact
/// kernel of the extension is not decided, so absence of a witness within
/// the budget proves nothing.
pub fn kernel_witness(r: &ProblemCombination, max_order: u32) -> Option<BoundaryProblem> {
    if r.is_zero() {
        return Some(BoundaryProblem::neutral());
    }
    let mut clm = r.terms()[0].1.operator().clone();
    for (_, p) in r.terms().iter().skip(1) {
        let Ok((t, _, _)) = common_left_multiple(&clm, p.operator()) else {
            return None;
        };
        clm = t;
    }
    let dict = condition_dictionary(&r.points());
    for extra in 0..=max_order.saturating_sub(clm.order()) {
        let s_op = DiffOperator::derivation(extra).compose(&clm);
        let k = s_op.order() as usize;
        if k == 0 {
            continue;
        }
        for subset in subsets_of_size(dict.len(), k) {
            let conds: Vec<StieltjesCondition> =
                subset.iter().map(|&i| dict[i].clone()).collect();
            let cand = BoundaryProblem::new(s_op.clone(), conds);
            if cand.dim() != k || !cand.is_regular().unwrap_or(false) {
                continue;
            }
            if r.premultiply(&cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// Consistency check for the conjectured kernel description: the
/// corresponding combination of Green's operators lies in the boundary
/// ideal (no differential and no integral part).
pub fn greens_combination_is_boundary(r: &ProblemCombination) -> Result<bool> {
    let mut acc = crate::operators::IntDiffOperator::zero();
    for (c, p) in r.terms().iter() {
        let g = p.greens_operator()?;
        acc = &acc + &g.scale(&Scalar::from_rat(c.clone()));
    }
    Ok(acc.is_boundary_only())
}

/// Exhaustive bounded search for common right multiples
/// `(T,B₁)(S,C₁) = (T,B₂)(S,C₂)`: every solution found is returned for
/// inspection (the factors turn out singular whenever `B₁ ≠ B₂`).
pub fn right_factor_search(
    p1: &BoundaryProblem,
    p2: &BoundaryProblem,
    max_order: u32,
) -> Vec<(BoundaryProblem, BoundaryProblem)> {
    let mut points = p1.conditions().iter().flat_map(|c| c.points()).collect::<Vec<_>>();
    points.extend(p2.conditions().iter().flat_map(|c| c.points()));
    points.push(Rat::zero());
    points.sort_by(crate::expalg::rat_cmp);
    points.dedup();
    let dict = condition_dictionary(&points);
    let mut out = Vec::new();
    for ord in 1..=max_order {
        let s_op = DiffOperator::derivation(ord);
        for size1 in 0..=ord as usize {
            for c1_idx in subsets_of_size(dict.len(), size1) {
                let c1: Vec<StieltjesCondition> =
                    c1_idx.iter().map(|&i| dict[i].clone()).collect();
                let f1 = BoundaryProblem::new(s_op.clone(), c1);
                let prod1 = p1.multiply(&f1);
                for size2 in 0..=ord as usize {
                    for c2_idx in subsets_of_size(dict.len(), size2) {
                        let c2: Vec<StieltjesCondition> =
                            c2_idx.iter().map(|&i| dict[i].clone()).collect();
                        let f2 = BoundaryProblem::new(s_op.clone(), c2);
                        let prod2 = p2.multiply(&f2);
                        if prod1.same_problem(&prod2) {
                            out.push((f1.clone(), f2));
                        }
                    }
                }
            }
        }
    }
    out
}
