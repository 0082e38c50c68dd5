//! The ring of integro-differential operators with point-evaluation
//! characters.
//!
//! Elements are kept in the canonical normal form dictated by the direct
//! sum `F[∂] ∔ F[∫] ∔ (Φ)`: a differential part `Σ f·∂ⁱ`, an integral part
//! `Σ f·∫·m` with basis monomials `m` on the right, and a boundary part of
//! terms `f·ev_a·∂ⁱ` and `f·ev_a·∫·m`. Multiplication rewrites compositions
//! into this normal form using the rules
//!
//! ```text
//! ∂∘f = f·∂ + f′         ∂∘∫ = 1          ∂∘φ = 0
//! φ∘f = φ(f)·φ           φ∘ψ = ψ          ev₀∘∫ = 0
//! ∫∘f∘∂ = f − ∫∘f′ − ev₀(f)·ev₀
//! ∫∘f∘∫ = (∫f)·∫ − ∫∘(∫f)
//! ∫∘f∘φ = (∫f)·φ
//! ```
//!
//! together with bilinearity. Each rule strictly reduces the number of
//! `∂`/`∫` symbols to the left of a function or character (or keeps it and
//! reduces the derivative order), so innermost application terminates; the
//! result is unique because the target monomials form a direct sum.

mod condition;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::expalg::{Character, ExpPoly, Monomial, Rat, Scalar};

pub use condition::{
    cond_independent, independent_subset, same_span, CondKey, RowSpace, StieltjesCondition,
};

/// A basis term of the operator ring.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorTerm {
    /// `f·∂ⁱ`
    Diff { coeff: ExpPoly, order: u32 },
    /// `f·∫·g`
    Int { coeff: ExpPoly, kernel: ExpPoly },
    /// `f·ev_a·∂ⁱ`
    BoundLocal { coeff: ExpPoly, point: Rat, order: u32 },
    /// `f·ev_a·∫·g`
    BoundGlobal { coeff: ExpPoly, point: Rat, kernel: ExpPoly },
}

/// An integro-differential operator in canonical normal form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntDiffOperator {
    diff: BTreeMap<u32, ExpPoly>,
    int: BTreeMap<Monomial, ExpPoly>,
    blocal: BTreeMap<(Rat, u32), ExpPoly>,
    bglobal: BTreeMap<(Rat, Monomial), ExpPoly>,
}

impl IntDiffOperator {
    pub fn zero() -> Self {
        IntDiffOperator::default()
    }

    /// The identity operator (multiplication by 1).
    pub fn one() -> Self {
        IntDiffOperator::mult(ExpPoly::one())
    }

    /// Multiplication operator by `f`.
    pub fn mult(f: ExpPoly) -> Self {
        let mut out = IntDiffOperator::zero();
        out.add_diff(f, 0);
        out
    }

    /// `∂ⁱ`.
    pub fn derivation(order: u32) -> Self {
        let mut out = IntDiffOperator::zero();
        out.add_diff(ExpPoly::one(), order);
        out
    }

    /// The integral operator `∫` from 0.
    pub fn integral() -> Self {
        let mut out = IntDiffOperator::zero();
        out.add_int(ExpPoly::one(), &ExpPoly::one());
        out
    }

    /// The evaluation `ev_a`.
    pub fn evaluation(ch: &Character) -> Self {
        let mut out = IntDiffOperator::zero();
        out.add_blocal(ExpPoly::one(), ch.point().clone(), 0);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.diff.is_empty()
            && self.int.is_empty()
            && self.blocal.is_empty()
            && self.bglobal.is_empty()
    }

    /// True if the operator lies in the boundary ideal `(Φ)`.
    pub fn is_boundary_only(&self) -> bool {
        self.diff.is_empty() && self.int.is_empty()
    }

    /// True if the operator has no boundary part.
    pub fn has_no_boundary_part(&self) -> bool {
        self.blocal.is_empty() && self.bglobal.is_empty()
    }

    fn add_diff(&mut self, f: ExpPoly, order: u32) {
        if f.is_zero() {
            return;
        }
        let entry = self.diff.entry(order).or_insert_with(ExpPoly::zero);
        *entry = &*entry + &f;
        if entry.is_zero() {
            self.diff.remove(&order);
        }
    }

    fn add_int(&mut self, f: ExpPoly, kernel: &ExpPoly) {
        if f.is_zero() || kernel.is_zero() {
            return;
        }
        for (m, c) in kernel.iter() {
            let entry = self.int.entry(m.clone()).or_insert_with(ExpPoly::zero);
            *entry = &*entry + &f.scale(c);
            if entry.is_zero() {
                self.int.remove(m);
            }
        }
    }

    fn add_blocal(&mut self, f: ExpPoly, point: Rat, order: u32) {
        if f.is_zero() {
            return;
        }
        let key = (point, order);
        let entry = self.blocal.entry(key.clone()).or_insert_with(ExpPoly::zero);
        *entry = &*entry + &f;
        if entry.is_zero() {
            self.blocal.remove(&key);
        }
    }

    fn add_bglobal(&mut self, f: ExpPoly, point: Rat, kernel: &ExpPoly) {
        // ev₀∘∫ = 0: global terms at the basepoint vanish identically.
        if f.is_zero() || kernel.is_zero() || point.is_zero() {
            return;
        }
        for (m, c) in kernel.iter() {
            let key = (point.clone(), m.clone());
            let entry = self.bglobal.entry(key.clone()).or_insert_with(ExpPoly::zero);
            *entry = &*entry + &f.scale(c);
            if entry.is_zero() {
                self.bglobal.remove(&key);
            }
        }
    }

    pub fn add_term(&mut self, term: OperatorTerm) {
        match term {
            OperatorTerm::Diff { coeff, order } => self.add_diff(coeff, order),
            OperatorTerm::Int { coeff, kernel } => self.add_int(coeff, &kernel),
            OperatorTerm::BoundLocal { coeff, point, order } => {
                self.add_blocal(coeff, point, order)
            }
            OperatorTerm::BoundGlobal { coeff, point, kernel } => {
                self.add_bglobal(coeff, point, &kernel)
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = OperatorTerm>) -> Self {
        let mut out = IntDiffOperator::zero();
        for t in terms {
            out.add_term(t);
        }
        out
    }

    /// The canonically merged term list.
    pub fn terms(&self) -> Vec<OperatorTerm> {
        let mut out = Vec::new();
        for (i, f) in self.diff.iter() {
            out.push(OperatorTerm::Diff { coeff: f.clone(), order: *i });
        }
        for (m, f) in self.int.iter() {
            out.push(OperatorTerm::Int { coeff: f.clone(), kernel: m.to_poly() });
        }
        for ((a, i), f) in self.blocal.iter() {
            out.push(OperatorTerm::BoundLocal { coeff: f.clone(), point: a.clone(), order: *i });
        }
        for ((a, m), f) in self.bglobal.iter() {
            out.push(OperatorTerm::BoundGlobal {
                coeff: f.clone(),
                point: a.clone(),
                kernel: m.to_poly(),
            });
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return IntDiffOperator::zero();
        }
        IntDiffOperator {
            diff: self.diff.iter().map(|(i, f)| (*i, f.scale(c))).collect(),
            int: self.int.iter().map(|(m, f)| (m.clone(), f.scale(c))).collect(),
            blocal: self.blocal.iter().map(|(k, f)| (k.clone(), f.scale(c))).collect(),
            bglobal: self.bglobal.iter().map(|(k, f)| (k.clone(), f.scale(c))).collect(),
        }
    }

    /// Left multiplication by the function `g`.
    pub fn premultiply(&self, g: &ExpPoly) -> Self {
        if g.is_zero() {
            return IntDiffOperator::zero();
        }
        IntDiffOperator {
            diff: self.diff.iter().map(|(i, f)| (*i, f * g)).collect(),
            int: self.int.iter().map(|(m, f)| (m.clone(), f * g)).collect(),
            blocal: self.blocal.iter().map(|(k, f)| (k.clone(), f * g)).collect(),
            bglobal: self.bglobal.iter().map(|(k, f)| (k.clone(), f * g)).collect(),
        }
    }

    /// Composition `self ∘ rhs`, normalized.
    pub fn mul(&self, rhs: &IntDiffOperator) -> Self {
        let mut out = IntDiffOperator::zero();
        for s in self.terms() {
            for t in rhs.terms() {
                out = &out + &term_mul(&s, &t);
            }
        }
        out
    }

    /// The left action on functions.
    pub fn apply(&self, f: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (i, g) in self.diff.iter() {
            out = &out + &(g * &f.derive_n(*i));
        }
        for (m, g) in self.int.iter() {
            out = &out + &(g * &(&m.to_poly() * f).integrate());
        }
        for ((a, i), g) in self.blocal.iter() {
            out = &out + &g.scale(&f.derive_n(*i).value_at(a));
        }
        for ((a, m), g) in self.bglobal.iter() {
            out = &out + &g.scale(&(&m.to_poly() * f).integrate().value_at(a));
        }
        out
    }

    /// The differential part as a coefficient map `order ↦ coefficient`.
    pub fn diff_part(&self) -> &BTreeMap<u32, ExpPoly> {
        &self.diff
    }

    pub fn int_part(&self) -> &BTreeMap<Monomial, ExpPoly> {
        &self.int
    }

    pub fn blocal_part(&self) -> &BTreeMap<(Rat, u32), ExpPoly> {
        &self.blocal
    }

    pub fn bglobal_part(&self) -> &BTreeMap<(Rat, Monomial), ExpPoly> {
        &self.bglobal
    }
}

impl Add for &IntDiffOperator {
    type Output = IntDiffOperator;
    fn add(self, rhs: &IntDiffOperator) -> IntDiffOperator {
        let mut out = self.clone();
        for (i, f) in rhs.diff.iter() {
            out.add_diff(f.clone(), *i);
        }
        for (m, f) in rhs.int.iter() {
            out.add_int(f.clone(), &m.to_poly());
        }
        for ((a, i), f) in rhs.blocal.iter() {
            out.add_blocal(f.clone(), a.clone(), *i);
        }
        for ((a, m), f) in rhs.bglobal.iter() {
            out.add_bglobal(f.clone(), a.clone(), &m.to_poly());
        }
        out
    }
}

impl Sub for &IntDiffOperator {
    type Output = IntDiffOperator;
    fn sub(self, rhs: &IntDiffOperator) -> IntDiffOperator {
        self + &(-rhs)
    }
}

impl Neg for &IntDiffOperator {
    type Output = IntDiffOperator;
    fn neg(self) -> IntDiffOperator {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul for &IntDiffOperator {
    type Output = IntDiffOperator;
    fn mul(self, rhs: &IntDiffOperator) -> IntDiffOperator {
        IntDiffOperator::mul(self, rhs)
    }
}

fn binomial(n: u32, k: u32) -> Rat {
    let mut out = crate::expalg::rat_int(1);
    for j in 0..k {
        out = out * crate::expalg::rat_int((n - j) as i64) / crate::expalg::rat_int((j + 1) as i64);
    }
    out
}

/// `∂ⁱ ∘ t` for a single term `t`.
fn diff_compose(i: u32, t: &OperatorTerm) -> IntDiffOperator {
    match t {
        OperatorTerm::Diff { coeff, order } => {
            // General Leibniz rule: ∂ⁱ∘g = Σ C(i,k)·g^{(k)}·∂^{i−k}.
            let mut out = IntDiffOperator::zero();
            let mut gk = coeff.clone();
            for k in 0..=i {
                out.add_diff(gk.scale_rat(&binomial(i, k)), i - k + order);
                gk = gk.derive();
            }
            out
        }
        OperatorTerm::Int { coeff, kernel } => {
            if i == 0 {
                let mut out = IntDiffOperator::zero();
                out.add_int(coeff.clone(), kernel);
                return out;
            }
            // ∂∘(g∫h) = g′∫h + g·h, then recurse on the remaining ∂^{i−1}.
            let inner = IntDiffOperator::from_terms([
                OperatorTerm::Int { coeff: coeff.derive(), kernel: kernel.clone() },
                OperatorTerm::Diff { coeff: coeff * kernel, order: 0 },
            ]);
            let mut out = IntDiffOperator::zero();
            for t in inner.terms() {
                out = &out + &diff_compose(i - 1, &t);
            }
            out
        }
        OperatorTerm::BoundLocal { coeff, point, order } => {
            // ∂∘(g·φ∂ʲ) = g′·φ∂ʲ since characters output constants.
            let mut out = IntDiffOperator::zero();
            out.add_blocal(coeff.derive_n(i), point.clone(), *order);
            out
        }
        OperatorTerm::BoundGlobal { coeff, point, kernel } => {
            let mut out = IntDiffOperator::zero();
            out.add_bglobal(coeff.derive_n(i), point.clone(), kernel);
            out
        }
    }
}

/// `∫ ∘ h ∘ ∂ʲ` with multiplication operator `h` in the middle.
fn int_then_diff(h: &ExpPoly, j: u32) -> IntDiffOperator {
    if j == 0 {
        let mut out = IntDiffOperator::zero();
        out.add_int(ExpPoly::one(), h);
        return out;
    }
    // ∫∘h∘∂ = h − ∫∘h′ − ev₀(h)·ev₀ applied once, rest recursively.
    let mut out = IntDiffOperator::zero();
    out.add_diff(h.clone(), j - 1);
    out = &out - &int_then_diff(&h.derive(), j - 1);
    let h0 = h.value_at_zero();
    if !h0.is_zero() {
        out.add_blocal(ExpPoly::constant(-&h0), Rat::zero(), j - 1);
    }
    out
}

/// `∫ ∘ h ∘ t` for a single term `t`.
fn int_compose(h: &ExpPoly, t: &OperatorTerm) -> IntDiffOperator {
    match t {
        OperatorTerm::Diff { coeff, order } => int_then_diff(&(h * coeff), *order),
        OperatorTerm::Int { coeff, kernel } => {
            // ∫∘F∘∫ = (∫F)·∫ − ∫∘(∫F) with F = h·g.
            let int_f = (h * coeff).integrate();
            let mut out = IntDiffOperator::zero();
            out.add_int(int_f.clone(), kernel);
            out.add_int(-&ExpPoly::one(), &(&int_f * kernel));
            out
        }
        OperatorTerm::BoundLocal { coeff, point, order } => {
            let mut out = IntDiffOperator::zero();
            out.add_blocal((h * coeff).integrate(), point.clone(), *order);
            out
        }
        OperatorTerm::BoundGlobal { coeff, point, kernel } => {
            let mut out = IntDiffOperator::zero();
            out.add_bglobal((h * coeff).integrate(), point.clone(), kernel);
            out
        }
    }
}

/// `ev_a ∘ op`: characters are multiplicative, so every term collapses to a
/// scalar times a boundary monomial.
fn char_compose(a: &Rat, op: &IntDiffOperator) -> IntDiffOperator {
    let mut out = IntDiffOperator::zero();
    for t in op.terms() {
        match t {
            OperatorTerm::Diff { coeff, order } => {
                out.add_blocal(ExpPoly::constant(coeff.value_at(a)), a.clone(), order);
            }
            OperatorTerm::Int { coeff, kernel } => {
                out.add_bglobal(ExpPoly::constant(coeff.value_at(a)), a.clone(), &kernel);
            }
            OperatorTerm::BoundLocal { coeff, point, order } => {
                out.add_blocal(ExpPoly::constant(coeff.value_at(a)), point, order);
            }
            OperatorTerm::BoundGlobal { coeff, point, kernel } => {
                out.add_bglobal(ExpPoly::constant(coeff.value_at(a)), point, &kernel);
            }
        }
    }
    out
}

fn term_mul(s: &OperatorTerm, t: &OperatorTerm) -> IntDiffOperator {
    match s {
        OperatorTerm::Diff { coeff, order } => diff_compose(*order, t).premultiply(coeff),
        OperatorTerm::Int { coeff, kernel } => int_compose(kernel, t).premultiply(coeff),
        OperatorTerm::BoundLocal { coeff, point, order } => {
            char_compose(point, &diff_compose(*order, t)).premultiply(coeff)
        }
        OperatorTerm::BoundGlobal { coeff, point, kernel } => {
            char_compose(point, &int_compose(kernel, t)).premultiply(coeff)
        }
    }
}
