//! Umbral machinery for boundary conditions.
//!
//! Every nondegenerate Stieltjes condition over this algebra is umbral: it
//! takes a nonzero value on some monomial `x^m`. The expansion coefficients
//! `b_k = β(x^k/k!)` define the associated shift-invariant operator; the
//! minimal nonvanishing monomial drives the embedding of a single condition
//! into a regular problem, and iterating the embedding regularizes an
//! arbitrary boundary problem.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expalg::{factorial, monomial_over_factorial, ExpPoly, Rat, Scalar};
use crate::linalg::Matrix;
use crate::operators::{RowSpace, StieltjesCondition};
use crate::problems::{initial_conditions, BoundaryProblem, DiffOperator};

/// Default bound for the search of a nonvanishing umbral coefficient.
pub const DEFAULT_UMBRAL_BOUND: u32 = 50;

/// The falling factorial `n·(n−1)···(n−k+1)`.
pub fn falling_factorial(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for j in 0..k {
        out *= BigInt::from(n - j);
    }
    out
}

/// The superfactorial `1!·2!···i!`.
pub fn superfactorial(i: u32) -> BigInt {
    let mut out = BigInt::one();
    for j in 1..=i {
        out *= factorial(j);
    }
    out
}

/// The expansion coefficients `b_k = β(x^k/k!)` of a boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct UmbralExpansion {
    coefficients: Vec<Scalar>,
    source: StieltjesCondition,
}

impl UmbralExpansion {
    pub fn coefficients(&self) -> &[Scalar] {
        &self.coefficients
    }

    pub fn source(&self) -> &StieltjesCondition {
        &self.source
    }

    pub fn bound(&self) -> u32 {
        self.coefficients.len() as u32 - 1
    }
}

/// Computes `b_0 … b_N` by direct application of the condition.
pub fn umbral_coefficients(beta: &StieltjesCondition, n: u32) -> UmbralExpansion {
    let coefficients = (0..=n).map(|k| beta.apply(&monomial_over_factorial(k))).collect();
    UmbralExpansion { coefficients, source: beta.clone() }
}

/// The expansion coefficients of a pure global condition `φ_a∫f` relative
/// to its own character, `b'_k = (−1)^k·φ(f^{(−k−1)})`, so that
/// `β = φ∘Σ b'_k∂ᵏ` on polynomials.
pub fn global_route_coefficients(point: &Rat, f: &ExpPoly, n: u32) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut anti = f.integrate();
    for k in 0..=n {
        let v = anti.value_at(point);
        out.push(if k % 2 == 0 { v } else { -&v });
        anti = anti.integrate();
    }
    out
}

/// Umbral coefficients computed by the antiderivative route: each global
/// part contributes its φ-relative expansion composed with the Taylor
/// shift by `φ(x) = a` (so that `β = ev₀∘S_a∘Σ b'_k∂ᵏ`), local parts are
/// applied directly. Agrees with [`umbral_coefficients`] exactly.
pub fn umbral_coefficients_via_antiderivatives(
    beta: &StieltjesCondition,
    n: u32,
) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n as usize + 1];
    for ((a, i), c) in beta.local_part().iter() {
        for (k, slot) in out.iter_mut().enumerate() {
            let m = monomial_over_factorial(k as u32).derive_n(*i).value_at(a);
            *slot = &*slot + &(c * &m);
        }
    }
    for (a, f) in beta.global_part().iter() {
        let prim = global_route_coefficients(a, f, n);
        // b_k = Σ_{i+j=k} (a^j/j!)·b'_i: composition with the shift S_a.
        let mut apow = Rat::one();
        for j in 0..=n as usize {
            let w = Scalar::from_rat(&apow / Rat::from(factorial(j as u32)));
            for i in 0..=(n as usize - j) {
                out[i + j] = &out[i + j] + &(&prim[i] * &w);
            }
            apow *= a.clone();
        }
    }
    out
}

/// The least `m ≤ bound` with `β(x^m) ≠ 0`.
///
/// # Errors
/// [`Error::ZeroCondition`] for the zero normal form and
/// [`Error::UmbralSearchExceeded`] when all coefficients vanish up to the
/// bound.
pub fn minimal_monomial(beta: &StieltjesCondition, bound: u32) -> Result<u32> {
    if beta.is_zero() {
        return Err(Error::ZeroCondition);
    }
    let mut xm = ExpPoly::one();
    for m in 0..=bound {
        if !beta.apply(&xm).is_zero() {
            return Ok(m);
        }
        xm = &xm * &ExpPoly::x();
    }
    Err(Error::UmbralSearchExceeded)
}

/// Embeds a single umbral condition into the regular problem
/// `(∂^{k+1}, [ev₀, …, ev₀∂^{k−1}, β])` with `k` its minimal monomial.
pub fn embed_single(beta: &StieltjesCondition, bound: u32) -> Result<BoundaryProblem> {
    let k = minimal_monomial(beta, bound)?;
    let mut conds = initial_conditions(k);
    conds.push(beta.clone());
    let p = BoundaryProblem::new(DiffOperator::derivation(k + 1), conds);
    debug_assert!(p.is_regular().unwrap_or(false));
    Ok(p)
}

/// Embeds an arbitrary boundary problem into a regular one that contains it
/// as a subproblem (operator right-divides, boundary space contained).
///
/// Inductive construction: starting from the initial value problem
/// `(T, [ev₀, …])`, each condition `β` of the input either already lies in
/// the current boundary space, or `β∘G̃` is zero (then `β` is spanned as
/// well), or `β∘G̃` is embedded through its minimal monomial and the
/// current problem is multiplied from the left, with `β∘G̃∘S̃` exchanged
/// for the equivalent `β` in the product basis. Regular inputs are
/// returned unchanged.
pub fn regularize(p: &BoundaryProblem, bound: u32) -> Result<BoundaryProblem> {
    if p.order() == 0 {
        return Err(Error::UnsupportedOperator);
    }
    if p.is_regular()? {
        return Ok(p.clone());
    }
    let mut current = BoundaryProblem::initial_value(p.operator().clone());
    for beta in p.conditions() {
        let space = RowSpace::from_conditions(current.conditions());
        if space.contains(beta) {
            continue;
        }
        let greens = current.greens_operator()?;
        let gamma = beta.compose(&greens);
        if gamma.is_zero() {
            // β annihilates the admissible functions of the current
            // problem, hence lies in its boundary space already.
            continue;
        }
        let embed = embed_single(&gamma, bound)?;
        let s_op = current.operator().to_operator();
        let mut conds: Vec<StieltjesCondition> = embed
            .conditions()
            .iter()
            .take(embed.dim() - 1)
            .map(|c| c.compose(&s_op))
            .collect();
        // The product basis would contain γ∘S̃ = β − β∘P̃; on the
        // admissible functions this condition is equivalent to β itself,
        // so β is stored directly.
        conds.push(beta.clone());
        conds.extend(current.conditions().iter().cloned());
        let op = embed.operator().compose(current.operator());
        current = BoundaryProblem::new(op, conds);
        debug_assert!(current.is_regular()?);
    }
    Ok(current)
}

/// Checks the antiderivative Leibniz identity
/// `∫ f·xⁿ = Σ_{k=0}^n (−1)^k·(n)_k·x^{n−k}·f^{(−k−1)}` exactly.
pub fn int_part_pol_check(f: &ExpPoly, n: u32) -> bool {
    let lhs = (f * &ExpPoly::x_pow(n)).integrate();
    let mut rhs = ExpPoly::zero();
    let mut anti = f.integrate();
    for k in 0..=n {
        let ff = Rat::from(falling_factorial(n, k));
        let term = ExpPoly::x_pow(n - k).scale_rat(&ff);
        let signed = if k % 2 == 0 { term } else { -&term };
        rhs = &rhs + &(&signed * &anti);
        anti = anti.integrate();
    }
    lhs == rhs
}

/// The shifted-monomial block `M_{ns}(x)`: `n×s` with entries
/// `x^{r−c}/(r−c)!` for `r ≥ c` (1-indexed), 0 above the diagonal.
fn block_matrix_entry(row: usize, col: usize, x: &Rat) -> Scalar {
    if row < col {
        return Scalar::zero();
    }
    let k = (row - col) as u32;
    let mut pow = Rat::one();
    for _ in 0..k {
        pow *= x.clone();
    }
    Scalar::from_rat(pow / Rat::from(factorial(k)))
}

fn check_distinct(points: &[Rat]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            if a == b {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    Ok(())
}

/// Builds the block matrix `M(x) = (M_{ns}(x₁) ⋯ M_{ns}(x_r))`, `n = rs`.
pub fn block_vandermonde_matrix(points: &[Rat], s: u32) -> Result<Matrix> {
    check_distinct(points)?;
    let r = points.len();
    let n = r * s as usize;
    Ok(Matrix::from_fn(n, n, |row, col| {
        let block = col / s as usize;
        let inner = col % s as usize;
        block_matrix_entry(row + 1, inner + 1, &points[block])
    }))
}

/// Determinant of the block matrix by elimination.
pub fn block_vandermonde_det(points: &[Rat], s: u32) -> Result<Scalar> {
    Ok(block_vandermonde_matrix(points, s)?.det())
}

/// The closed form `V(r)^{s²}·sf(s−1)^r / sf(n−1)` of the same determinant,
/// with `V` the Vandermonde product and `sf` the superfactorial.
pub fn block_vandermonde_formula(points: &[Rat], s: u32) -> Result<Scalar> {
    check_distinct(points)?;
    let r = points.len();
    let n = (r as u32) * s;
    let mut vandermonde = Rat::one();
    for i in 0..r {
        for j in i + 1..r {
            vandermonde *= &points[j] - &points[i];
        }
    }
    let mut v_pow = Rat::one();
    for _ in 0..s * s {
        v_pow *= vandermonde.clone();
    }
    let mut sf_pow = Rat::one();
    let sf = Rat::from(superfactorial(s - 1));
    for _ in 0..r {
        sf_pow *= sf.clone();
    }
    let out = v_pow * sf_pow / Rat::from(superfactorial(n - 1));
    Ok(Scalar::from_rat(out))
}
