//! The monoid of boundary problems.
//!
//! A boundary problem is a pair `(T, B)` of a monic differential operator
//! and a finite-dimensional boundary space given by a basis of Stieltjes
//! conditions. Problems multiply by `(T₁,B₁)(T₂,B₂) = (T₁T₂, B₁T₂ + B₂)`;
//! regular problems (those with `ord T = dim B` and regular evaluation
//! matrix) possess a Green's operator `G = (1−P)·T^▽`, where `T^▽` solves
//! the initial value problem by variation of constants and `P` projects
//! onto `Ker T` along the admissible functions. Products of Green's
//! operators reverse the product of problems, and a regular problem can be
//! divided by any regular subproblem.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expalg::{ExpPoly, Rat, Scalar};
use crate::linalg::Matrix;
use crate::operators::{
    independent_subset, same_span, IntDiffOperator, OperatorTerm, RowSpace, StieltjesCondition,
};

/// A monic differential operator `∂ⁿ + c_{n−1}∂^{n−1} + … + c₀` with
/// exponential-polynomial coefficients (the leading 1 is implicit).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiffOperator {
    coeffs: Vec<ExpPoly>,
}

impl DiffOperator {
    /// The identity operator (order 0).
    pub fn one() -> Self {
        DiffOperator { coeffs: vec![] }
    }

    /// `∂ⁿ`.
    pub fn derivation(n: u32) -> Self {
        DiffOperator { coeffs: vec![ExpPoly::zero(); n as usize] }
    }

    /// Builds from the list of trailing coefficients `c₀ … c_{n−1}`.
    pub fn from_coeffs(coeffs: Vec<ExpPoly>) -> Self {
        DiffOperator { coeffs }
    }

    /// The monic operator with the given characteristic roots, e.g.
    /// `[1, 2] ↦ (∂−1)(∂−2) = ∂²−3∂+2`.
    pub fn from_roots(roots: &[Rat]) -> Self {
        let mut cp = vec![Rat::one()];
        for r in roots {
            // multiply by (λ − r)
            let mut next = vec![Rat::zero(); cp.len() + 1];
            for (i, c) in cp.iter().enumerate() {
                next[i + 1] += c.clone();
                next[i] -= c * r;
            }
            cp = next;
        }
        let n = cp.len() - 1;
        DiffOperator {
            coeffs: cp[..n].iter().map(|q| ExpPoly::from_rat(q.clone())).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Trailing coefficients `c₀ … c_{n−1}`.
    pub fn coeffs(&self) -> &[ExpPoly] {
        &self.coeffs
    }

    /// The monic characteristic polynomial (low to high) when all
    /// coefficients are rational constants.
    pub fn char_poly(&self) -> Option<Vec<Rat>> {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        for c in &self.coeffs {
            out.push(c.as_rat()?);
        }
        out.push(Rat::one());
        Some(out)
    }

    pub fn has_constant_coeffs(&self) -> bool {
        self.char_poly().is_some()
    }

    /// Embeds into the operator ring.
    pub fn to_operator(&self) -> IntDiffOperator {
        let mut out = IntDiffOperator::derivation(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(OperatorTerm::Diff { coeff: c.clone(), order: i as u32 });
        }
        out
    }

    /// Applies the operator to a function.
    pub fn apply(&self, f: &ExpPoly) -> ExpPoly {
        let mut out = f.derive_n(self.order());
        let mut fk = f.clone();
        for c in self.coeffs.iter() {
            out = &out + &(c * &fk);
            fk = fk.derive();
        }
        out
    }

    /// Composition `self ∘ rhs` (noncommutative for function coefficients).
    pub fn compose(&self, rhs: &DiffOperator) -> DiffOperator {
        // Work with full coefficient vectors including the leading 1.
        let a = self.full_coeffs();
        let b = rhs.full_coeffs();
        let n = self.order() as usize;
        let m = rhs.order() as usize;
        let mut out = vec![ExpPoly::zero(); n + m + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            // aᵢ∂ⁱ ∘ bⱼ∂ʲ = aᵢ Σ_k C(i,k) bⱼ^{(k)} ∂^{i+j−k}
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let mut bk = bj.clone();
                for k in 0..=i {
                    let coef = binom_rat(i as u32, k as u32);
                    out[i + j - k] = &out[i + j - k] + &(ai * &bk).scale_rat(&coef);
                    if k < i {
                        bk = bk.derive();
                    }
                }
            }
        }
        debug_assert!(out[n + m].is_one(), "composition of monic operators is monic");
        out.pop();
        DiffOperator { coeffs: out }
    }

    fn full_coeffs(&self) -> Vec<ExpPoly> {
        let mut out = self.coeffs.clone();
        out.push(ExpPoly::one());
        out
    }

    /// Right division: returns `Q` with `self = Q ∘ rhs` if the division is
    /// exact, `None` otherwise.
    pub fn right_divide(&self, rhs: &DiffOperator) -> Option<DiffOperator> {
        if rhs.order() > self.order() {
            return None;
        }
        let mut rem = self.full_coeffs();
        let m = rhs.order() as usize;
        let mut quot = vec![ExpPoly::zero(); self.order() as usize - m + 1];
        while rem.len() > m {
            let d = rem.len() - 1 - m;
            let lead = rem.last().unwrap().clone();
            if !lead.is_zero() {
                quot[d] = lead.clone();
                // subtract (lead·∂^d) ∘ rhs
                let prod = single_term_compose(&lead, d as u32, rhs);
                for (k, c) in prod.iter().enumerate() {
                    rem[k] = &rem[k] - c;
                }
            }
            rem.pop();
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(DiffOperator::from_monic_full(quot))
        } else {
            None
        }
    }

    fn from_monic_full(mut full: Vec<ExpPoly>) -> DiffOperator {
        debug_assert!(full.last().is_some_and(|c| c.is_one()));
        full.pop();
        DiffOperator { coeffs: full }
    }

    /// Left division for constant-coefficient operators (where composition
    /// is commutative): returns `Q` with `self = rhs ∘ Q`.
    pub fn left_divide_constant(&self, rhs: &DiffOperator) -> Option<DiffOperator> {
        if !(self.has_constant_coeffs() && rhs.has_constant_coeffs()) {
            return None;
        }
        self.right_divide(rhs)
    }
}

/// `(f·∂^d) ∘ rhs` as a full coefficient vector of length `d + ord rhs + 1`.
fn single_term_compose(f: &ExpPoly, d: u32, rhs: &DiffOperator) -> Vec<ExpPoly> {
    let b = {
        let mut out = rhs.coeffs.clone();
        out.push(ExpPoly::one());
        out
    };
    let mut out = vec![ExpPoly::zero(); d as usize + rhs.order() as usize + 1];
    for (j, bj) in b.iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        let mut bk = bj.clone();
        for k in 0..=d {
            let coef = binom_rat(d, k);
            let idx = (d - k) as usize + j;
            out[idx] = &out[idx] + &(f * &bk).scale_rat(&coef);
            if k < d {
                bk = bk.derive();
            }
        }
    }
    out
}

fn binom_rat(n: u32, k: u32) -> Rat {
    let mut out = Rat::one();
    for j in 0..k {
        out = out * Rat::from(BigInt::from(n - j)) / Rat::from(BigInt::from(j + 1));
    }
    out
}

/// Rational roots with multiplicities of a monic rational polynomial
/// (low-to-high coefficients). Returns `None` unless the polynomial splits
/// completely over the rationals.
pub fn rational_roots(poly: &[Rat]) -> Option<Vec<(Rat, u32)>> {
    let mut p: Vec<Rat> = poly.to_vec();
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    while p.len() > 1 {
        let root = find_rational_root(&p)?;
        p = synthetic_divide(&p, &root);
        match roots.iter_mut().find(|(r, _)| *r == root) {
            Some((_, m)) => *m += 1,
            None => roots.push((root, 1)),
        }
    }
    roots.sort_by(|a, b| crate::expalg::rat_cmp(&a.0, &b.0));
    Some(roots)
}

fn synthetic_divide(p: &[Rat], root: &Rat) -> Vec<Rat> {
    let n = p.len() - 1;
    let mut q = vec![Rat::zero(); n];
    let mut carry = Rat::zero();
    for k in (0..n).rev() {
        let c = &p[k + 1] + &(&carry * root);
        carry = c.clone();
        q[k] = c;
    }
    q
}

fn find_rational_root(p: &[Rat]) -> Option<Rat> {
    if p.first().is_some_and(|c| c.is_zero()) {
        return Some(Rat::zero());
    }
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rat::from(lcm.clone())).to_integer()).collect();
    let a0 = ints.first()?.clone();
    let an = ints.last()?.clone();
    let eval = |x: &Rat| -> Rat {
        let mut acc = Rat::zero();
        for c in p.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    };
    for num in divisors(&a0.abs())? {
        for den in divisors(&an.abs())? {
            for sign in [1i64, -1] {
                let cand = Rat::new(&num * BigInt::from(sign), den.clone());
                if eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Positive divisors by trial division; gives up (None) beyond u64 range.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n: u64 = u64::try_from(n).ok()?;
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// A fundamental system for a monic differential operator: a basis of
/// `Ker T` together with its Wronskian and the Wronskian's inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSystem {
    basis: Vec<ExpPoly>,
    wronskian: ExpPoly,
    wronskian_inv: ExpPoly,
}

impl FundamentalSystem {
    /// Verifies and packages a user-supplied kernel basis for `op`.
    ///
    /// # Errors
    /// [`Error::UnsupportedOperator`] if some `uᵢ` is not annihilated by
    /// `op`, the basis length differs from `ord op`, or the Wronskian is
    /// not a unit of the algebra.
    pub fn from_basis(op: &DiffOperator, basis: Vec<ExpPoly>) -> Result<Self> {
        if basis.len() != op.order() as usize {
            return Err(Error::UnsupportedOperator);
        }
        for u in &basis {
            if !op.apply(u).is_zero() {
                return Err(Error::UnsupportedOperator);
            }
        }
        let wronskian = wronskian_det(&basis);
        let wronskian_inv = wronskian.invert().ok_or(Error::UnsupportedOperator)?;
        debug_assert!((&wronskian * &wronskian_inv).is_one());
        Ok(FundamentalSystem { basis, wronskian, wronskian_inv })
    }

    pub fn basis(&self) -> &[ExpPoly] {
        &self.basis
    }

    pub fn wronskian(&self) -> &ExpPoly {
        &self.wronskian
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Wronskian matrix determinant of a list of functions, by minor expansion.
fn wronskian_det(basis: &[ExpPoly]) -> ExpPoly {
    let n = basis.len();
    if n == 0 {
        return ExpPoly::one();
    }
    // rows: derivative order, columns: basis index
    let mut rows: Vec<Vec<ExpPoly>> = Vec::with_capacity(n);
    let mut current: Vec<ExpPoly> = basis.to_vec();
    for _ in 0..n {
        rows.push(current.clone());
        current = current.iter().map(|f| f.derive()).collect();
    }
    minor_det(&rows, 0, &(0..n).collect::<Vec<_>>())
}

fn minor_det(rows: &[Vec<ExpPoly>], row: usize, cols: &[usize]) -> ExpPoly {
    if cols.is_empty() {
        return ExpPoly::one();
    }
    let mut out = ExpPoly::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &rows[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = minor_det(rows, row + 1, &rest);
        let signed = if k % 2 == 0 { sub } else { -&sub };
        out = &out + &(entry * &signed);
    }
    out
}

/// Computes a fundamental system for a constant-coefficient operator whose
/// characteristic polynomial splits over the rationals: for each root `λ`
/// of multiplicity `m` the functions `x^k e^{λx}/k!`, `k < m`.
///
/// # Errors
/// [`Error::UnsupportedOperator`] otherwise.
pub fn fundamental_system(op: &DiffOperator) -> Result<FundamentalSystem> {
    if op.order() == 0 {
        return Ok(FundamentalSystem {
            basis: vec![],
            wronskian: ExpPoly::one(),
            wronskian_inv: ExpPoly::one(),
        });
    }
    let cp = op.char_poly().ok_or(Error::UnsupportedOperator)?;
    let roots = rational_roots(&cp).ok_or(Error::UnsupportedOperator)?;
    let mut basis = Vec::with_capacity(op.order() as usize);
    for (root, mult) in roots.iter() {
        for k in 0..*mult {
            basis.push(ExpPoly::term(
                Scalar::from_rat(crate::expalg::inv_factorial(k)),
                k,
                root.clone(),
            ));
        }
    }
    let wronskian = wronskian_det(&basis);
    let wronskian_inv = wronskian.invert().ok_or(Error::UnsupportedOperator)?;
    Ok(FundamentalSystem { basis, wronskian, wronskian_inv })
}

/// The space of initial conditions `[ev₀, ev₀∂, …, ev₀∂^{n−1}]`.
pub fn initial_conditions(n: u32) -> Vec<StieltjesCondition> {
    (0..n)
        .map(|i| StieltjesCondition::local_term(Scalar::one(), Rat::zero(), i))
        .collect()
}

/// A boundary problem `(T, B)`.
///
/// The stored basis is linearly independent; dependent generators passed to
/// [`BoundaryProblem::new`] are dropped in first-occurrence order, matching
/// the span semantics of boundary spaces.
#[derive(Debug, Clone)]
pub struct BoundaryProblem {
    op: DiffOperator,
    basis: Vec<StieltjesCondition>,
    attached_system: Option<FundamentalSystem>,
}

impl BoundaryProblem {
    pub fn new(op: DiffOperator, conditions: Vec<StieltjesCondition>) -> Self {
        let basis = independent_subset(&conditions)
            .into_iter()
            .map(|c| c.monic())
            .collect();
        BoundaryProblem { op, basis, attached_system: None }
    }

    /// The neutral element `(1, O)`.
    pub fn neutral() -> Self {
        BoundaryProblem::new(DiffOperator::one(), vec![])
    }

    /// The initial value problem `(T, [ev₀, …, ev₀∂^{n−1}])`.
    pub fn initial_value(op: DiffOperator) -> Self {
        let conds = initial_conditions(op.order());
        BoundaryProblem::new(op, conds)
    }

    /// Attaches a verified user-supplied fundamental system.
    pub fn with_system(mut self, system: FundamentalSystem) -> Result<Self> {
        if system.dim() != self.op.order() as usize {
            return Err(Error::UnsupportedOperator);
        }
        self.attached_system = Some(system);
        Ok(self)
    }

    pub fn operator(&self) -> &DiffOperator {
        &self.op
    }

    pub fn conditions(&self) -> &[StieltjesCondition] {
        &self.basis
    }

    pub fn order(&self) -> u32 {
        self.op.order()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_neutral(&self) -> bool {
        self.op.is_one() && self.basis.is_empty()
    }

    /// Equality as boundary problems: equal operators and equal boundary
    /// spaces (mutual containment of the spans).
    pub fn same_problem(&self, other: &BoundaryProblem) -> bool {
        self.op == other.op && same_span(&self.basis, &other.basis)
    }

    /// Subproblem relation: the operator right-divides and the boundary
    /// space is contained.
    pub fn is_subproblem_of(&self, other: &BoundaryProblem) -> bool {
        if other.op.right_divide(&self.op).is_none() {
            return false;
        }
        let space = RowSpace::from_conditions(&other.basis);
        self.basis.iter().all(|b| space.contains(b))
    }

    /// The fundamental system: attached if present, else computed for
    /// constant coefficients.
    pub fn system(&self) -> Result<FundamentalSystem> {
        match &self.attached_system {
            Some(s) => Ok(s.clone()),
            None => fundamental_system(&self.op),
        }
    }

    /// The evaluation matrix `[βᵢ(uⱼ)]`.
    pub fn evaluation_matrix(&self, fs: &FundamentalSystem) -> Matrix {
        Matrix::from_fn(self.basis.len(), fs.dim(), |i, j| {
            self.basis[i].apply(&fs.basis()[j])
        })
    }

    /// Regularity test: `ord T = dim B` and the evaluation matrix is
    /// regular.
    pub fn is_regular(&self) -> Result<bool> {
        if self.order() as usize != self.dim() {
            return Ok(false);
        }
        if self.order() == 0 {
            return Ok(true);
        }
        let fs = self.system()?;
        Ok(!self.evaluation_matrix(&fs).det().is_zero())
    }

    /// Well-posedness: regular, and the boundary space is generated by
    /// conditions of order below `ord T`. Since any combination of
    /// low-order conditions is low-order, this holds exactly when every
    /// stored basis condition has order `< ord T` after reduction.
    pub fn is_well_posed(&self) -> Result<bool> {
        if !self.is_regular()? {
            return Ok(false);
        }
        let n = self.order();
        // Gaussian elimination on the high-order coefficient rows: the
        // space has a low-order generating set iff the high-order
        // projection of the whole span is zero.
        Ok(self.basis.iter().all(|b| b.order() < n || b.local_part().keys().all(|(_, i)| *i < n)))
    }

    /// Multiplication `(T₁,B₁)(T₂,B₂) = (T₁T₂, B₁T₂ + B₂)`.
    pub fn multiply(&self, rhs: &BoundaryProblem) -> BoundaryProblem {
        let op = self.op.compose(&rhs.op);
        let rhs_op = rhs.op.to_operator();
        let mut conds: Vec<StieltjesCondition> =
            self.basis.iter().map(|b| b.compose(&rhs_op)).collect();
        conds.extend(rhs.basis.iter().cloned());
        BoundaryProblem::new(op, conds)
    }

    /// The fundamental right inverse `T^▽ = Σ uᵢ·∫·(Cᵢ/W)` by variation of
    /// constants (`Cᵢ` the last-row cofactors of the Wronskian matrix).
    pub fn fundamental_right_inverse(&self) -> Result<IntDiffOperator> {
        fundamental_right_inverse(&self.op, &self.system()?)
    }

    /// The projector onto `Ker T` along the admissible functions,
    /// `P = Σ uᵢ·(β(u)⁻¹)ᵢⱼ·βⱼ`.
    ///
    /// # Errors
    /// [`Error::SingularProblem`] unless the problem is regular.
    pub fn projector(&self) -> Result<IntDiffOperator> {
        let fs = self.system()?;
        if self.order() as usize != self.dim() {
            return Err(Error::SingularProblem);
        }
        let minv = self.evaluation_matrix(&fs).inverse()?;
        let mut out = IntDiffOperator::zero();
        for (j, beta) in self.basis.iter().enumerate() {
            let beta_op = beta.to_operator();
            for (i, u) in fs.basis().iter().enumerate() {
                let w = beta_op.scale(&minv[(i, j)]).premultiply(u);
                out = &out + &w;
            }
        }
        Ok(out)
    }

    /// Decomposes the kernel projection `Pf` explicitly in the fundamental
    /// basis: returns the coefficient vector `c = β(u)⁻¹·β(f)`.
    pub fn kernel_projection_coeffs(&self, f: &ExpPoly) -> Result<Vec<Scalar>> {
        let fs = self.system()?;
        if self.order() as usize != self.dim() {
            return Err(Error::SingularProblem);
        }
        let minv = self.evaluation_matrix(&fs).inverse()?;
        let values: Vec<Scalar> = self.basis.iter().map(|b| b.apply(f)).collect();
        Ok(minv.apply(&values))
    }

    /// `Pf` as an explicit element of `Ker T`.
    pub fn project_onto_kernel(&self, f: &ExpPoly) -> Result<ExpPoly> {
        let fs = self.system()?;
        let coeffs = self.kernel_projection_coeffs(f)?;
        let mut out = ExpPoly::zero();
        for (c, u) in coeffs.iter().zip(fs.basis()) {
            out = &out + &u.scale(c);
        }
        Ok(out)
    }

    /// The Green's operator `G = (1 − P)·T^▽` with `TG = 1` and
    /// `Img G = B⊥`.
    ///
    /// # Errors
    /// [`Error::SingularProblem`] unless the problem is regular.
    pub fn greens_operator(&self) -> Result<IntDiffOperator> {
        if !self.is_regular()? {
            return Err(Error::SingularProblem);
        }
        let fri = self.fundamental_right_inverse()?;
        let p = self.projector()?;
        Ok(&fri - &p.mul(&fri))
    }
}

/// Variation of constants for the initial value problem of `op`.
pub fn fundamental_right_inverse(
    op: &DiffOperator,
    fs: &FundamentalSystem,
) -> Result<IntDiffOperator> {
    let n = fs.dim();
    if n != op.order() as usize {
        return Err(Error::UnsupportedOperator);
    }
    if n == 0 {
        return Ok(IntDiffOperator::one());
    }
    // Wronskian matrix rows (derivative orders) for cofactor computation.
    let mut rows: Vec<Vec<ExpPoly>> = Vec::with_capacity(n);
    let mut current: Vec<ExpPoly> = fs.basis().to_vec();
    for _ in 0..n {
        rows.push(current.clone());
        current = current.iter().map(|f| f.derive()).collect();
    }
    let winv = fs
        .wronskian()
        .invert()
        .ok_or(Error::UnsupportedOperator)?;
    let mut out = IntDiffOperator::zero();
    for (i, u) in fs.basis().iter().enumerate() {
        // Cofactor deleting the last row and column i.
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let minor = minor_det(&rows[..n - 1], 0, &cols);
        let signed = if (n - 1 + i).is_multiple_of(2) { minor } else { -&minor };
        let kernel = &signed * &winv;
        out.add_term(OperatorTerm::Int { coeff: u.clone(), kernel });
    }
    Ok(out)
}

/// Division Lemma: the unique left factor `(T₁, B₁)` with
/// `(T₁,B₁)·p₂ = p` for regular subproblems `p₂ ≤ p`, computed as
/// `B₁ = B∘G₂`.
///
/// # Errors
/// [`Error::FactorMismatch`] if `p.T ≠ T₁∘p₂.T`; [`Error::SingularProblem`]
/// if `p₂` is singular or the composed conditions do not span a boundary
/// space of dimension `ord T₁` (which happens when `p₂` is not a
/// subproblem of `p`).
pub fn divide_left(
    t1: &DiffOperator,
    p2: &BoundaryProblem,
    p: &BoundaryProblem,
) -> Result<BoundaryProblem> {
    if t1.compose(&p2.op) != p.op {
        return Err(Error::FactorMismatch);
    }
    let g2 = p2.greens_operator()?;
    let conds: Vec<StieltjesCondition> = p.basis.iter().map(|b| b.compose(&g2)).collect();
    let result = BoundaryProblem::new(t1.clone(), conds);
    if result.dim() != t1.order() as usize {
        return Err(Error::SingularProblem);
    }
    Ok(result)
}

/// Factorization Theorem: lifts a factorization `p.T = T₁∘T₂` of a regular
/// problem to problem factors `(T₁,B₁)·(T₂,B₂) = p` with `B₂ ≤ B` whenever
/// a regular selection exists among subsets of the stored basis (greedy in
/// basis order); otherwise `B₂` falls back to initial conditions.
pub fn lift_factorization(
    p: &BoundaryProblem,
    t1: &DiffOperator,
    t2: &DiffOperator,
) -> Result<(BoundaryProblem, BoundaryProblem)> {
    if t1.compose(t2) != p.op {
        return Err(Error::FactorMismatch);
    }
    if !p.is_regular()? {
        return Err(Error::SingularProblem);
    }
    let fs2 = fundamental_system(t2)?;
    let m = t2.order() as usize;
    // Greedy Gaussian selection of conditions whose evaluation rows on
    // Ker T₂ are independent; ties broken by basis order.
    let mut reducer = ScalarRows::new(m);
    let mut selected: Vec<StieltjesCondition> = Vec::new();
    for beta in p.basis.iter() {
        if selected.len() == m {
            break;
        }
        let row: Vec<Scalar> = fs2.basis().iter().map(|u| beta.apply(u)).collect();
        if reducer.insert(row) {
            selected.push(beta.clone());
        }
    }
    let b2 = if selected.len() == m {
        selected
    } else {
        initial_conditions(t2.order())
    };
    let p2 = BoundaryProblem::new(t2.clone(), b2);
    let p1 = divide_left(t1, &p2, p)?;
    Ok((p1, p2))
}

/// Incremental row reduction over the scalar field (dense rows).
pub(crate) struct ScalarRows {
    cols: usize,
    rows: Vec<Vec<Scalar>>,
}

impl ScalarRows {
    pub(crate) fn new(cols: usize) -> Self {
        ScalarRows { cols, rows: Vec::new() }
    }

    /// Reduces `row` against the stored rows; returns true (and stores it)
    /// iff it is independent.
    pub(crate) fn insert(&mut self, mut row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.cols);
        for stored in &self.rows {
            let pivot = stored.iter().position(|c| !c.is_zero()).unwrap();
            if !row[pivot].is_zero() {
                let factor = &row[pivot] / &stored[pivot];
                for j in 0..self.cols {
                    let t = &row[j] - &(&factor * &stored[j]);
                    row[j] = t;
                }
            }
        }
        if row.iter().any(|c| !c.is_zero()) {
            self.rows.push(row);
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::{rat, rat_int, Character};
    use crate::operators::StieltjesCondition as SC;

    fn ev(a: i64) -> SC {
        SC::evaluation(&Character::at_int(a))
    }

    fn int01() -> SC {
        SC::definite_integral(&rat_int(0), &rat_int(1))
    }

    fn dirichlet() -> BoundaryProblem {
        BoundaryProblem::new(DiffOperator::derivation(2), vec![ev(0), ev(1)])
    }

    #[test]
    fn fundamental_systems() {
        let fs = fundamental_system(&DiffOperator::derivation(2)).unwrap();
        assert_eq!(fs.basis(), &[ExpPoly::one(), ExpPoly::x()]);

        let fs = fundamental_system(&DiffOperator::from_roots(&[rat_int(1)])).unwrap();
        assert_eq!(fs.basis(), &[ExpPoly::exp(rat_int(1))]);

        // ∂²−3∂+2 → {e^x, e^{2x}}
        let t = DiffOperator::from_coeffs(vec![ExpPoly::from_int(2), ExpPoly::from_int(-3)]);
        let fs = fundamental_system(&t).unwrap();
        assert_eq!(fs.basis(), &[ExpPoly::exp(rat_int(1)), ExpPoly::exp(rat_int(2))]);

        // irrational splitting is unsupported
        let t = DiffOperator::from_coeffs(vec![ExpPoly::from_int(-2), ExpPoly::zero()]);
        assert_eq!(fundamental_system(&t).unwrap_err(), Error::UnsupportedOperator);
    }

    #[test]
    fn evaluation_matrices() {
        let p = dirichlet();
        let fs = p.system().unwrap();
        let m = p.evaluation_matrix(&fs);
        assert_eq!(m
            .apply(&[Scalar::one(), Scalar::zero()]), vec![Scalar::one(), Scalar::one()]);
        assert_eq!(m[(0, 0)], Scalar::one());
        assert_eq!(m[(0, 1)], Scalar::zero());
        assert_eq!(m[(1, 0)], Scalar::one());
        assert_eq!(m[(1, 1)], Scalar::one());

        // Initial problem: identity matrix.
        let init = BoundaryProblem::initial_value(DiffOperator::derivation(3));
        let fs = init.system().unwrap();
        assert_eq!(init.evaluation_matrix(&fs), Matrix::identity(3));

        // Non-square matrix of an underdetermined problem: [[0, 1]].
        let p = BoundaryProblem::new(DiffOperator::derivation(2), vec![&ev(1) - &ev(0)]);
        let fs = p.system().unwrap();
        let m = p.evaluation_matrix(&fs);
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert!(m[(0, 0)].is_zero());
        // the stored basis is rescaled to leading coefficient 1 (ev₀ − ev₁)
        assert_eq!(m[(0, 1)], Scalar::from_int(-1));
    }

    #[test]
    fn regularity_examples() {
        assert!(dirichlet().is_regular().unwrap());
        let p = BoundaryProblem::new(DiffOperator::derivation(1), vec![&ev(1) - &ev(0)]);
        assert!(!p.is_regular().unwrap());
        // (∂−1, [ev₀∂²]) is regular but not well-posed.
        let p = BoundaryProblem::new(
            DiffOperator::from_roots(&[rat_int(1)]),
            vec![SC::local_term(Scalar::one(), rat_int(0), 2)],
        );
        assert!(p.is_regular().unwrap());
        assert!(!p.is_well_posed().unwrap());
        assert!(dirichlet().is_well_posed().unwrap());
    }

    #[test]
    fn well_posedness_high_order_ineliminable() {
        let beta = &SC::local_term(Scalar::one(), rat_int(0), 2) + &ev(0);
        let p = BoundaryProblem::new(DiffOperator::derivation(2), vec![beta, ev(1)]);
        assert!(p.is_regular().unwrap());
        assert!(!p.is_well_posed().unwrap());
    }

    #[test]
    fn product_reproduces_quadrature_example() {
        // (∂,[∫₀¹])·(∂,[ev₀]) = (∂², [ev₀, ev₁])
        let p1 = BoundaryProblem::new(DiffOperator::derivation(1), vec![int01()]);
        let p2 = BoundaryProblem::new(DiffOperator::derivation(1), vec![ev(0)]);
        let prod = p1.multiply(&p2);
        assert!(prod.same_problem(&dirichlet()));

        // neutral element
        assert!(BoundaryProblem::neutral().multiply(&p2).same_problem(&p2));
        assert!(p2.multiply(&BoundaryProblem::neutral()).same_problem(&p2));

        // degenerate product (∂,[∫₀¹])·(∂,[ev₁−ev₀]) = (∂², [ev₁−ev₀])
        let p3 = BoundaryProblem::new(DiffOperator::derivation(1), vec![&ev(1) - &ev(0)]);
        let prod = p1.multiply(&p3);
        assert_eq!(prod.dim(), 1);
        assert!(!prod.is_regular().unwrap());
        assert!(same_span(prod.conditions(), &[&ev(1) - &ev(0)]));
    }

    #[test]
    fn fundamental_right_inverse_examples() {
        // ∂ → ∫
        let p = BoundaryProblem::initial_value(DiffOperator::derivation(1));
        assert_eq!(p.fundamental_right_inverse().unwrap(), IntDiffOperator::integral());

        // ∂² → x·∫ − ∫·x, check ∂²∘T▽ = 1 and initial conditions vanish.
        let p = BoundaryProblem::initial_value(DiffOperator::derivation(2));
        let fri = p.fundamental_right_inverse().unwrap();
        let mut expected = IntDiffOperator::zero();
        expected.add_term(OperatorTerm::Int { coeff: ExpPoly::x(), kernel: ExpPoly::one() });
        expected.add_term(OperatorTerm::Int { coeff: -&ExpPoly::one(), kernel: ExpPoly::x() });
        assert_eq!(fri, expected);
        let t_op = DiffOperator::derivation(2).to_operator();
        assert_eq!(t_op.mul(&fri), IntDiffOperator::one());
        for k in 0..2 {
            let cond = SC::local_term(Scalar::one(), rat_int(0), k).compose(&fri);
            assert!(cond.is_zero());
        }

        // ∂−1 → e^x·∫·e^{−x}
        let p = BoundaryProblem::initial_value(DiffOperator::from_roots(&[rat_int(1)]));
        let fri = p.fundamental_right_inverse().unwrap();
        let mut expected = IntDiffOperator::zero();
        expected.add_term(OperatorTerm::Int {
            coeff: ExpPoly::exp(rat_int(1)),
            kernel: ExpPoly::exp(rat_int(-1)),
        });
        assert_eq!(fri, expected);
    }

    #[test]
    fn projector_examples() {
        // Dirichlet: Pu = u(0)(1−x) + u(1)x
        let p = dirichlet();
        let proj = p.projector().unwrap();
        let mut expected = IntDiffOperator::zero();
        expected.add_term(OperatorTerm::BoundLocal {
            coeff: &ExpPoly::one() - &ExpPoly::x(),
            point: rat_int(0),
            order: 0,
        });
        expected.add_term(OperatorTerm::BoundLocal {
            coeff: ExpPoly::x(),
            point: rat_int(1),
            order: 0,
        });
        assert_eq!(proj, expected);
        // idempotence
        assert_eq!(proj.mul(&proj), proj);
        // P reproduces kernel elements and boundary data.
        let fs = p.system().unwrap();
        for u in fs.basis() {
            assert_eq!(proj.apply(u), u.clone());
        }
        let probe = &ExpPoly::x_pow(2) * &ExpPoly::exp(rat_int(1));
        for beta in p.conditions() {
            assert_eq!(beta.apply(&proj.apply(&probe)), beta.apply(&probe));
        }

        // (∂, [ev₀]): Pu = u(0)·1
        let p = BoundaryProblem::initial_value(DiffOperator::derivation(1));
        let proj = p.projector().unwrap();
        assert_eq!(proj, IntDiffOperator::evaluation(&Character::origin()));

        // (∂−1, [ev₀∂²]): P = e^x·ev₀∂², idempotent, Pe^x = e^x.
        let p = BoundaryProblem::new(
            DiffOperator::from_roots(&[rat_int(1)]),
            vec![SC::local_term(Scalar::one(), rat_int(0), 2)],
        );
        let proj = p.projector().unwrap();
        let mut expected = IntDiffOperator::zero();
        expected.add_term(OperatorTerm::BoundLocal {
            coeff: ExpPoly::exp(rat_int(1)),
            point: rat_int(0),
            order: 2,
        });
        assert_eq!(proj, expected);
        assert_eq!(proj.mul(&proj), proj);
        let ex = ExpPoly::exp(rat_int(1));
        assert_eq!(proj.apply(&ex), ex);
    }

    #[test]
    fn greens_operator_examples() {
        // (∂, [ev₀]) → ∫
        let p = BoundaryProblem::initial_value(DiffOperator::derivation(1));
        assert_eq!(p.greens_operator().unwrap(), IntDiffOperator::integral());

        // Dirichlet: normal form −∫·x + x·∫ + x·ev₁∫·(x−1), G(1) = x²/2 − x/2.
        let p = dirichlet();
        let g = p.greens_operator().unwrap();
        let mut expected = IntDiffOperator::zero();
        expected.add_term(OperatorTerm::Int { coeff: ExpPoly::x(), kernel: ExpPoly::one() });
        expected.add_term(OperatorTerm::Int { coeff: -&ExpPoly::one(), kernel: ExpPoly::x() });
        expected.add_term(OperatorTerm::BoundGlobal {
            coeff: ExpPoly::x(),
            point: rat_int(1),
            kernel: &ExpPoly::x() - &ExpPoly::one(),
        });
        assert_eq!(g, expected);
        let g1 = g.apply(&ExpPoly::one());
        let expected_g1 =
            &ExpPoly::x_pow(2).scale_rat(&rat(1, 2)) - &ExpPoly::x().scale_rat(&rat(1, 2));
        assert_eq!(g1, expected_g1);
        // TG = 1 and boundary conditions annihilate the image.
        assert_eq!(p.op.to_operator().mul(&g), IntDiffOperator::one());
        for f in [ExpPoly::one(), ExpPoly::x(), ExpPoly::exp(rat_int(1))] {
            let u = g.apply(&f);
            assert_eq!(p.op.apply(&u), f);
            for beta in p.conditions() {
                assert!(beta.apply(&u).is_zero());
            }
        }

        // Ill-posed example: G = e^x∫e^{−x} − e^x·ev₀ − e^x·ev₀∂.
        let p = BoundaryProblem::new(
            DiffOperator::from_roots(&[rat_int(1)]),
            vec![SC::local_term(Scalar::one(), rat_int(0), 2)],
        );
        let g = p.greens_operator().unwrap();
        let ex = ExpPoly::exp(rat_int(1));
        let mut expected = IntDiffOperator::zero();
        expected.add_term(OperatorTerm::Int {
            coeff: ex.clone(),
            kernel: ExpPoly::exp(rat_int(-1)),
        });
        expected.add_term(OperatorTerm::BoundLocal {
            coeff: -&ex,
            point: rat_int(0),
            order: 0,
        });
        expected.add_term(OperatorTerm::BoundLocal { coeff: -&ex, point: rat_int(0), order: 1 });
        assert_eq!(g, expected);
    }

    #[test]
    fn greens_contract_with_repeated_roots() {
        // T = ∂(∂−1)²: kernel {1, e^x, x·e^x} with Wronskian e^{2x}.
        let t = DiffOperator::from_roots(&[rat_int(0), rat_int(1), rat_int(1)]);
        let p = BoundaryProblem::new(
            t.clone(),
            vec![ev(0), ev(1), SC::local_term(Scalar::one(), rat_int(0), 1)],
        );
        assert!(p.is_regular().unwrap());
        let g = p.greens_operator().unwrap();
        assert_eq!(t.to_operator().mul(&g), IntDiffOperator::one());
        for f in [ExpPoly::one(), ExpPoly::x(), ExpPoly::exp(rat_int(2))] {
            let u = g.apply(&f);
            assert_eq!(t.apply(&u), f);
            for beta in p.conditions() {
                assert!(beta.apply(&u).is_zero());
            }
        }
    }

    #[test]
    fn anti_isomorphism_on_quadrature_example() {
        let p1 = BoundaryProblem::new(DiffOperator::derivation(1), vec![int01()]);
        let p2 = BoundaryProblem::new(DiffOperator::derivation(1), vec![ev(0)]);
        let prod = p1.multiply(&p2);
        let g = prod.greens_operator().unwrap();
        let composed = p2.greens_operator().unwrap().mul(&p1.greens_operator().unwrap());
        assert_eq!(g, composed);
    }

    #[test]
    fn division_examples() {
        // T₁ = ∂, p₂ = (∂,[ev₀]), p = (∂²,[ev₀,ev₁]) → (∂, [∫₀¹])
        let p2 = BoundaryProblem::initial_value(DiffOperator::derivation(1));
        let p = dirichlet();
        let p1 = divide_left(&DiffOperator::derivation(1), &p2, &p).unwrap();
        assert!(p1.same_problem(&BoundaryProblem::new(
            DiffOperator::derivation(1),
            vec![int01()]
        )));
        assert!(p1.multiply(&p2).same_problem(&p));

        // Trivial division
        let q = divide_left(&DiffOperator::one(), &p, &p).unwrap();
        assert!(q.same_problem(&BoundaryProblem::neutral()));

        // T₁ = ∂−1, p₂ = (∂,[ev₀]), p = ((∂−1)∂, [ev₀, ev₁])
        let t1 = DiffOperator::from_roots(&[rat_int(1)]);
        let p = BoundaryProblem::new(
            t1.compose(&DiffOperator::derivation(1)),
            vec![ev(0), ev(1)],
        );
        let p1 = divide_left(&t1, &p2, &p).unwrap();
        assert_eq!(p1.dim(), 1);
        assert!(p1.multiply(&p2).same_problem(&p));

        let bad = divide_left(&DiffOperator::derivation(2), &p2, &p);
        assert_eq!(bad.unwrap_err(), Error::FactorMismatch);
    }

    #[test]
    fn division_left_factor_is_unique_across_subproblems() {
        // The left factor computed against one regular subproblem
        // multiplies back to p with every other regular subproblem too.
        let p = dirichlet();
        let d1 = DiffOperator::derivation(1);
        let via_ev0 =
            divide_left(&d1, &BoundaryProblem::new(d1.clone(), vec![ev(0)]), &p).unwrap();
        let via_ev1 =
            divide_left(&d1, &BoundaryProblem::new(d1.clone(), vec![ev(1)]), &p).unwrap();
        assert!(via_ev0.same_problem(&via_ev1));
        for sub in [
            BoundaryProblem::new(d1.clone(), vec![ev(0)]),
            BoundaryProblem::new(d1.clone(), vec![ev(1)]),
        ] {
            assert!(via_ev0.multiply(&sub).same_problem(&p));
        }

        // ((∂−1)∂, [ev₀, ev₁]) / (∂−1): the composed basis collapses to the
        // single definite-integral condition.
        let t1 = DiffOperator::from_roots(&[rat_int(1)]);
        let p = BoundaryProblem::new(t1.compose(&d1), vec![ev(0), ev(1)]);
        let left = divide_left(&t1, &BoundaryProblem::new(d1, vec![ev(0)]), &p).unwrap();
        assert!(same_span(left.conditions(), &[int01()]));
    }

    #[test]
    fn factorization_examples() {
        let p = dirichlet();
        let d1 = DiffOperator::derivation(1);
        let (p1, p2) = lift_factorization(&p, &d1, &d1).unwrap();
        // Greedy picks ev₀ (first regular subset in basis order).
        assert!(p2.same_problem(&BoundaryProblem::new(d1.clone(), vec![ev(0)])));
        assert!(p1.same_problem(&BoundaryProblem::new(d1.clone(), vec![int01()])));
        assert!(p1.multiply(&p2).same_problem(&p));
        assert!(p1.is_regular().unwrap() && p2.is_regular().unwrap());

        // Trivial lift
        let (q1, q2) = lift_factorization(&p, &DiffOperator::one(), &p.op.clone()).unwrap();
        assert!(q1.same_problem(&BoundaryProblem::neutral()));
        assert!(q2.same_problem(&p));

        // ((∂−1)∂, [ev₀, ev₁]) with T₁ = ∂−1, T₂ = ∂ → B₂ = [ev₀]
        let t1 = DiffOperator::from_roots(&[rat_int(1)]);
        let p = BoundaryProblem::new(t1.compose(&d1), vec![ev(0), ev(1)]);
        let (p1, p2) = lift_factorization(&p, &t1, &d1).unwrap();
        assert!(p2.same_problem(&BoundaryProblem::new(d1, vec![ev(0)])));
        assert!(p1.multiply(&p2).same_problem(&p));
    }

    #[test]
    fn product_evaluation_matrix_is_block_triangular() {
        // In the combined fundamental system {T₂^▽ fᵢ, gⱼ} the rows β∘T₂
        // evaluate to zero on the gⱼ-block exactly.
        let p1 = BoundaryProblem::new(
            DiffOperator::from_roots(&[rat_int(1)]),
            vec![&ev(1) + &SC::local_term(Scalar::from_int(2), rat_int(0), 0)],
        );
        let p2 = BoundaryProblem::new(DiffOperator::derivation(1), vec![ev(1)]);
        let t2_op = p2.operator().to_operator();
        let fs2 = p2.system().unwrap();
        for beta in p1.conditions() {
            let composed = beta.compose(&t2_op);
            for g in fs2.basis() {
                assert!(composed.apply(g).is_zero());
            }
        }
    }

    #[test]
    fn right_division_of_operators() {
        let t1 = DiffOperator::from_roots(&[rat_int(1), rat_int(2)]);
        let t2 = DiffOperator::from_roots(&[rat_int(2)]);
        let q = t1.right_divide(&t2).unwrap();
        assert_eq!(q, DiffOperator::from_roots(&[rat_int(1)]));
        assert!(t1.right_divide(&DiffOperator::from_roots(&[rat_int(3)])).is_none());

        // Variable-coefficient division: (∂ + x)∘∂ divided by ∂.
        let t = DiffOperator::from_coeffs(vec![ExpPoly::zero(), ExpPoly::x()]);
        let d = DiffOperator::derivation(1);
        let td = t.compose(&d);
        let q = td.right_divide(&d).unwrap();
        assert_eq!(q, t);
    }
}
