//! The module of methorious functions and its localization interface.
//!
//! A methorious function is a smooth exponential polynomial plus a formal
//! sum of ideal elements `c·g:(T,B)` with `Tg = 0`, taken modulo the
//! redundancy relations `g:(T,B) = G̃g:((T,B)(T̃,B̃))`. A boundary problem
//! acts by `(T,B)·f = Tf + Pf:(T,B)` on the smooth part and by problem
//! multiplication on ideal elements; the action of a regular problem's
//! inverse recovers Green's operators, which solves inhomogeneous boundary
//! problems inside the calculus.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{Error, Result};
use crate::expalg::{ExpPoly, Rat, Scalar};
use crate::linalg::Matrix;
use crate::operators::{RowSpace, StieltjesCondition};
use crate::ore::{
    self, kernel_witness, ore_quadruple, MethoriousOperator, ProblemCombination,
};
use crate::problems::{lift_factorization, rational_roots, BoundaryProblem, DiffOperator};

/// Outcome of a semi-decidable comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
}

/// A generator `c·g:(T,B)` of the ideal part; the stored function lies in
/// the kernel of the problem's differential operator.
#[derive(Debug, Clone)]
pub struct IdealElement {
    coeff: Scalar,
    generator: ExpPoly,
    problem: BoundaryProblem,
}

impl IdealElement {
    /// # Errors
    /// [`Error::FactorMismatch`] if the function is not annihilated by the
    /// problem's operator.
    pub fn new(coeff: Scalar, generator: ExpPoly, problem: BoundaryProblem) -> Result<Self> {
        if !problem.operator().apply(&generator).is_zero() {
            return Err(Error::FactorMismatch);
        }
        Ok(IdealElement { coeff, generator, problem })
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }

    pub fn generator(&self) -> &ExpPoly {
        &self.generator
    }

    pub fn problem(&self) -> &BoundaryProblem {
        &self.problem
    }

    /// The function carried, with the coefficient folded in.
    pub fn weighted(&self) -> ExpPoly {
        self.generator.scale(&self.coeff)
    }
}

/// An element of the module of methorious functions: smooth part plus
/// ideal part, the latter merged by problem equality.
#[derive(Debug, Clone, Default)]
pub struct MethoriousFunction {
    smooth: ExpPoly,
    ideal: Vec<IdealElement>,
}

impl MethoriousFunction {
    pub fn zero() -> Self {
        MethoriousFunction::default()
    }

    pub fn smooth(f: ExpPoly) -> Self {
        MethoriousFunction { smooth: f, ideal: vec![] }
    }

    pub fn new(smooth: ExpPoly, ideal: Vec<IdealElement>) -> Self {
        let mut out = MethoriousFunction { smooth, ideal: vec![] };
        for el in ideal {
            out.push_ideal(el);
        }
        out
    }

    fn push_ideal(&mut self, el: IdealElement) {
        if el.coeff.is_zero() || el.generator.is_zero() {
            return;
        }
        for existing in self.ideal.iter_mut() {
            if existing.problem.same_problem(&el.problem) {
                let merged = &existing.weighted() + &el.weighted();
                if merged.is_zero() {
                    let keep: Vec<_> = core::mem::take(&mut self.ideal)
                        .into_iter()
                        .filter(|e| !e.problem.same_problem(&el.problem))
                        .collect();
                    self.ideal = keep;
                } else {
                    *existing = IdealElement {
                        coeff: Scalar::one(),
                        generator: merged,
                        problem: existing.problem.clone(),
                    };
                }
                return;
            }
        }
        self.ideal.push(el);
    }

    pub fn smooth_part(&self) -> &ExpPoly {
        &self.smooth
    }

    pub fn ideal_part(&self) -> &[IdealElement] {
        &self.ideal
    }

    /// Structural zero test (the representative, not the quotient class).
    pub fn is_zero(&self) -> bool {
        self.smooth.is_zero() && self.ideal.is_empty()
    }

    pub fn add(&self, rhs: &MethoriousFunction) -> Self {
        let mut out = self.clone();
        out.smooth = &out.smooth + &rhs.smooth;
        for el in rhs.ideal.iter() {
            out.push_ideal(el.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return MethoriousFunction::zero();
        }
        MethoriousFunction {
            smooth: self.smooth.scale(c),
            ideal: self
                .ideal
                .iter()
                .map(|el| IdealElement {
                    coeff: &el.coeff * c,
                    generator: el.generator.clone(),
                    problem: el.problem.clone(),
                })
                .collect(),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        self.scale(&Scalar::from_rat(q.clone()))
    }

    pub fn sub(&self, rhs: &MethoriousFunction) -> Self {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }
}

/// The monoid action `(T,B)·m`: on the smooth part
/// `f ↦ Tf + Pf:(T,B)` with `Pf` decomposed explicitly in the kernel
/// basis, on ideal elements by problem multiplication.
///
/// # Errors
/// [`Error::SingularProblem`] unless `p` is regular (the projector is
/// needed).
pub fn act(p: &BoundaryProblem, m: &MethoriousFunction) -> Result<MethoriousFunction> {
    if !p.is_regular()? {
        return Err(Error::SingularProblem);
    }
    let smooth = p.operator().apply(m.smooth_part());
    let mut ideal = Vec::new();
    if !m.smooth_part().is_zero() {
        let pf = p.project_onto_kernel(m.smooth_part())?;
        if !pf.is_zero() {
            ideal.push(IdealElement::new(Scalar::one(), pf, p.clone())?);
        }
    }
    for el in m.ideal_part() {
        ideal.push(IdealElement {
            coeff: el.coeff.clone(),
            generator: el.generator.clone(),
            problem: p.multiply(&el.problem),
        });
    }
    Ok(MethoriousFunction::new(smooth, ideal))
}

/// Linear extension of the action to problem combinations.
pub fn act_combination(
    r: &ProblemCombination,
    m: &MethoriousFunction,
) -> Result<MethoriousFunction> {
    let mut out = MethoriousFunction::zero();
    for (c, p) in r.terms().iter() {
        out = out.add(&act(p, m)?.scale_rat(c));
    }
    Ok(out)
}

/// One deflation step: writes the element's problem as `p_a·p_b` with a
/// proper regular right factor whose projector kills the stored function,
/// and peels the factor off. Returns `None` when no step applies.
fn deflate_step(el: &IdealElement) -> Option<IdealElement> {
    let q = &el.problem;
    let order = q.order();
    if order <= 1 || !q.is_regular().ok()? {
        return None;
    }
    let cp = q.operator().char_poly()?;
    let roots = rational_roots(&cp)?;
    // Proper right divisors from sub-multisets of the roots, small first.
    let mut divisors: Vec<DiffOperator> = Vec::new();
    collect_root_subsets(&roots, &mut divisors);
    divisors.sort_by_key(|t| t.order());
    for t_b in divisors {
        if t_b.order() == 0 || t_b.order() >= order {
            continue;
        }
        let Some(t_a) = q.operator().right_divide(&t_b) else { continue };
        let Ok((p_a, p_b)) = lift_factorization(q, &t_a, &t_b) else { continue };
        if !p_a.multiply(&p_b).same_problem(q) {
            continue;
        }
        let Ok(proj) = p_b.project_onto_kernel(&el.generator) else { continue };
        if proj.is_zero() {
            let g = t_b.apply(&el.generator);
            return IdealElement::new(el.coeff.clone(), g, p_a).ok();
        }
    }
    None
}

fn collect_root_subsets(roots: &[(Rat, u32)], out: &mut Vec<DiffOperator>) {
    // Multiplicity vectors enumerated lexicographically.
    let mut counts = vec![0u32; roots.len()];
    loop {
        let mut sel = Vec::new();
        for (i, (r, _)) in roots.iter().enumerate() {
            for _ in 0..counts[i] {
                sel.push(r.clone());
            }
        }
        out.push(DiffOperator::from_roots(&sel));
        // increment
        let mut i = 0;
        loop {
            if i == roots.len() {
                return;
            }
            if counts[i] < roots[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn deflate_fully(el: &IdealElement) -> IdealElement {
    let mut cur = el.clone();
    while let Some(next) = deflate_step(&cur) {
        cur = next;
    }
    cur
}

/// Equality modulo the redundancy relations, three-valued.
///
/// Smooth parts are compared exactly (the module is a direct sum). Ideal
/// parts are first deflated maximally, then inflated to the common left
/// multiple of their operators through initial-value problems and grouped
/// by problem equality. Since initial-value inflations never merge
/// distinct boundary spaces over a common operator, the verdict at the
/// minimal common multiple is stable under further inflation; `Unknown` is
/// returned only when no common inflation can be built (variable
/// coefficients or irrational spectra).
pub fn mf_eq(a: &MethoriousFunction, b: &MethoriousFunction) -> Verdict {
    let diff = a.sub(b);
    if !diff.smooth_part().is_zero() {
        return Verdict::NotEqual;
    }
    if diff.ideal_part().is_empty() {
        return Verdict::Equal;
    }
    let mut reduced = MethoriousFunction::zero();
    for el in diff.ideal_part() {
        reduced.push_ideal(deflate_fully(el));
    }
    if reduced.ideal_part().is_empty() {
        return Verdict::Equal;
    }
    // Common inflation over the least common multiple of the operators.
    let mut lcm_cp = vec![Rat::one()];
    for el in reduced.ideal_part() {
        let Some(cp) = el.problem().operator().char_poly() else {
            return Verdict::Unknown;
        };
        let g = ore::rpoly_gcd(&lcm_cp, &cp);
        let (cof, _) = ore::rpoly_divrem(&lcm_cp, &g);
        lcm_cp = ore::rpoly_mul(&cof, &cp);
    }
    let mut inflated = MethoriousFunction::zero();
    for el in reduced.ideal_part() {
        let cp = el.problem().operator().char_poly().expect("checked above");
        let (cof, rem) = ore::rpoly_divrem(&lcm_cp, &cp);
        debug_assert!(rem.is_empty());
        let t_tilde = ore::diffop_from_char_poly(cof);
        if t_tilde.order() == 0 {
            inflated.push_ideal(el.clone());
            continue;
        }
        let ivp = BoundaryProblem::initial_value(t_tilde);
        let Ok(greens) = ivp.greens_operator() else {
            return Verdict::Unknown;
        };
        let g = greens.apply(el.generator());
        let Ok(new_el) =
            IdealElement::new(el.coeff().clone(), g, el.problem().multiply(&ivp))
        else {
            return Verdict::Unknown;
        };
        inflated.push_ideal(new_el);
    }
    if inflated.ideal_part().is_empty() {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    }
}

/// The action of a regular problem's inverse: `p⁻¹·f = Gf` on smooth
/// parts; an ideal element with problem exactly `p` loses its problem
/// (`p⁻¹·g:(p) = g`); other ideal elements are decomposed as
/// `g:(p·q) ↦ g:(q)` through operator division and a boundary-space
/// complement.
///
/// # Errors
/// [`Error::SingularProblem`] if `p` is singular;
/// [`Error::NotLeftDivisible`] if some ideal element's problem has no such
/// decomposition.
pub fn apply_inverse(p: &BoundaryProblem, m: &MethoriousFunction) -> Result<MethoriousFunction> {
    if !p.is_regular()? {
        return Err(Error::SingularProblem);
    }
    let greens = p.greens_operator()?;
    let mut out = MethoriousFunction::smooth(greens.apply(m.smooth_part()));
    for el in m.ideal_part() {
        if el.problem().same_problem(p) {
            out.smooth = &out.smooth + &el.weighted();
            continue;
        }
        // Operator division p.T ∘ T' = el.T (constant coefficients, where
        // left and right division coincide).
        if !(p.operator().has_constant_coeffs()
            && el.problem().operator().has_constant_coeffs())
        {
            return Err(Error::NotLeftDivisible);
        }
        let t_prime = el
            .problem()
            .operator()
            .right_divide(p.operator())
            .ok_or(Error::NotLeftDivisible)?;
        // Composed conditions of p must sit inside the element's space.
        let composed: Vec<StieltjesCondition> = {
            let t_prime_op = t_prime.to_operator();
            p.conditions().iter().map(|b| b.compose(&t_prime_op)).collect()
        };
        let el_space = RowSpace::from_conditions(el.problem().conditions());
        if !composed.iter().all(|c| el_space.contains(c)) {
            return Err(Error::NotLeftDivisible);
        }
        // Greedy complement of the composed space inside the element's
        // stored basis.
        let mut space = RowSpace::from_conditions(&composed);
        let mut complement = Vec::new();
        for c in el.problem().conditions() {
            if space.insert(c) {
                complement.push(c.clone());
            }
        }
        if composed.len() + complement.len() != el.problem().dim()
            || !t_prime.apply(el.generator()).is_zero()
        {
            return Err(Error::NotLeftDivisible);
        }
        let q = BoundaryProblem::new(t_prime, complement);
        out.push_ideal(IdealElement::new(el.coeff().clone(), el.generator().clone(), q)?);
    }
    Ok(out)
}

/// Solves the inhomogeneous boundary problem `Tu = f`, `βᵢ(u) = cᵢ`:
/// `u = Gf + Σ uᵢ·(β(u)⁻¹)ᵢⱼ·cⱼ`.
///
/// # Errors
/// [`Error::DimensionMismatch`] if the value list does not match the
/// conditions; [`Error::SingularProblem`] if the homogeneous problem is
/// singular.
pub fn solve_bvp(
    op: &DiffOperator,
    conditions: &[StieltjesCondition],
    f: &ExpPoly,
    values: &[Scalar],
) -> Result<ExpPoly> {
    if conditions.len() != values.len() {
        return Err(Error::DimensionMismatch);
    }
    let p = BoundaryProblem::new(op.clone(), conditions.to_vec());
    if p.dim() != conditions.len() || !p.is_regular()? {
        return Err(Error::SingularProblem);
    }
    let greens = p.greens_operator()?;
    let mut u = greens.apply(f);
    let fs = p.system()?;
    // The matrix is built from the conditions as given so that the value
    // list pairs with them positionally (the stored basis is rescaled).
    let m = Matrix::from_fn(conditions.len(), fs.dim(), |i, j| {
        conditions[i].apply(&fs.basis()[j])
    });
    let coeffs = m.inverse()?.apply(values);
    for (c, basis_fn) in coeffs.iter().zip(fs.basis()) {
        u = &u + &basis_fn.scale(c);
    }
    Ok(u)
}

/// An element of the localized module: a formal pair `den⁻¹·value`.
#[derive(Debug, Clone)]
pub struct MethoriousHyperfunction {
    den: BoundaryProblem,
    value: MethoriousFunction,
}

impl MethoriousHyperfunction {
    pub fn new(den: BoundaryProblem, value: MethoriousFunction) -> Result<Self> {
        if !den.is_regular()? {
            return Err(Error::SingularProblem);
        }
        Ok(MethoriousHyperfunction { den, value })
    }

    pub fn plain(value: MethoriousFunction) -> Self {
        MethoriousHyperfunction { den: BoundaryProblem::neutral(), value }
    }

    pub fn den(&self) -> &BoundaryProblem {
        &self.den
    }

    pub fn value(&self) -> &MethoriousFunction {
        &self.value
    }

    /// True if the denominator is trivial (the value lives in the
    /// unlocalized module).
    pub fn is_plain(&self) -> bool {
        self.den.is_neutral()
    }
}

/// The action of a methorious operator on a methorious function: the
/// numerator acts by linear extension, the result is divided by the
/// denominator eagerly when possible and kept as a formal pair otherwise.
pub fn hyper_act(
    frac: &MethoriousOperator,
    m: &MethoriousFunction,
) -> Result<MethoriousHyperfunction> {
    let v = act_combination(frac.num(), m)?;
    if frac.den().is_neutral() {
        return Ok(MethoriousHyperfunction::plain(v));
    }
    match apply_inverse(frac.den(), &v) {
        Ok(res) => Ok(MethoriousHyperfunction::plain(res)),
        Err(Error::NotLeftDivisible) => MethoriousHyperfunction::new(frac.den().clone(), v),
        Err(e) => Err(e),
    }
}

/// Fixed probe functions for action-based comparisons.
pub fn probe_functions() -> Vec<ExpPoly> {
    vec![
        ExpPoly::one(),
        ExpPoly::x(),
        ExpPoly::x_pow(2),
        ExpPoly::exp(crate::expalg::rat_int(1)),
        &ExpPoly::x() * &ExpPoly::exp(crate::expalg::rat_int(2)),
    ]
}

/// Three-valued equality of methorious operators.
///
/// After syntactic comparison, the denominators are brought to a common
/// left multiple and the numerator difference `d` is tested: a kernel
/// witness (`s·d = 0` for regular `s`) certifies equality by the defining
/// property of the localization. For refutation, the sound direction of
/// the kernel characterization is used: `s·d = 0` forces the combination
/// of Green's operators of `d` into the boundary ideal (multiplying
/// `(Σλᵢ Gᵢ)·G_s = 0` by `T_s` from the right leaves `X = X∘P_s ∈ (Φ)`),
/// so a non-boundary Green's combination proves the fractions distinct.
/// The action oracle on smooth probes adds a second refutation route. The
/// remaining cases are honestly `Unknown` (the exact kernel is open).
pub fn frac_eq(a: &MethoriousOperator, b: &MethoriousOperator, bound: u32) -> Verdict {
    if a.same_representation(b) {
        return Verdict::Equal;
    }
    if let Ok((u, v)) = ore_quadruple(a.den(), b.den(), bound) {
        let d = a.num().premultiply(&u).sub(&b.num().premultiply(&v));
        if d.is_zero() {
            return Verdict::Equal;
        }
        if kernel_witness(&d, d.max_order() + 2).is_some() {
            return Verdict::Equal;
        }
        if let Ok(false) = ore::greens_combination_is_boundary(&d) {
            return Verdict::NotEqual;
        }
    }
    for f in probe_functions() {
        let m = MethoriousFunction::smooth(f);
        let (Ok(va), Ok(vb)) = (hyper_act(a, &m), hyper_act(b, &m)) else {
            continue;
        };
        if va.is_plain() && vb.is_plain() {
            let d = va.value().sub(vb.value());
            if !d.smooth_part().is_zero() && d.ideal_part().is_empty() {
                return Verdict::NotEqual;
            }
        }
    }
    Verdict::Unknown
}

/// Evaluation-matrix inverse of a regular problem (exposed for solvers).
pub fn evaluation_inverse(p: &BoundaryProblem) -> Result<Matrix> {
    let fs = p.system()?;
    p.evaluation_matrix(&fs).inverse()
}
