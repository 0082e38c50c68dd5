//! Exponential polynomials `Σ c·xⁿ·e^{μx}` and point-evaluation characters.
//!
//! The type [`ExpPoly`] realizes an ordinary integro-differential algebra:
//! it is closed under multiplication, the derivation `∂`, and the integral
//! `∫` from 0, and it satisfies the section, Leibniz and differential
//! Baxter axioms exactly. Zero testing is structural (empty term map).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::constant::{inv_factorial, rat_int, ExpConstant, Rat, Scalar};

/// Basis monomial `xⁿ·e^{μx}`, ordered by `(frequency, degree)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub freq: Rat,
    pub degree: u32,
}

impl Monomial {
    pub fn new(degree: u32, freq: Rat) -> Self {
        Monomial { freq, degree }
    }

    pub fn constant() -> Self {
        Monomial { freq: Rat::zero(), degree: 0 }
    }

    pub fn to_poly(&self) -> ExpPoly {
        ExpPoly::term(Scalar::one(), self.degree, self.freq.clone())
    }
}

/// An exponential polynomial `Σ c·xⁿ·e^{μx}` with scalar coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ExpPoly::term(Scalar::one(), 0, Rat::zero())
    }

    /// The distinguished element `x = ∫1`.
    pub fn x() -> Self {
        ExpPoly::term(Scalar::one(), 1, Rat::zero())
    }

    /// The exponential `e^{μx}`.
    pub fn exp(mu: Rat) -> Self {
        ExpPoly::term(Scalar::one(), 0, mu)
    }

    /// The single term `c·xⁿ·e^{μx}`.
    pub fn term(c: Scalar, degree: u32, freq: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial { freq, degree }, c);
        }
        ExpPoly { terms }
    }

    pub fn constant(c: Scalar) -> Self {
        ExpPoly::term(c, 0, Rat::zero())
    }

    pub fn from_rat(q: Rat) -> Self {
        ExpPoly::constant(Scalar::from_rat(q))
    }

    pub fn from_int(n: i64) -> Self {
        ExpPoly::from_rat(rat_int(n))
    }

    /// The monomial `x^n`.
    pub fn x_pow(n: u32) -> Self {
        ExpPoly::term(Scalar::one(), n, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// Returns the scalar value if the polynomial is constant (degree 0,
    /// frequency 0, possibly zero).
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::constant()) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Returns the rational value if the polynomial is a rational constant.
    pub fn as_rat(&self) -> Option<Rat> {
        self.as_scalar().and_then(|c| c.as_rat())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn insert_add(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect(),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        self.scale(&Scalar::from_rat(q.clone()))
    }

    /// Derivation: `(c·xⁿe^{μx})' = c·n·x^{n-1}e^{μx} + c·μ·xⁿe^{μx}`.
    pub fn derive(&self) -> Self {
        let mut out = ExpPoly::zero();
        for (m, c) in self.terms.iter() {
            if m.degree > 0 {
                out.insert_add(
                    Monomial { freq: m.freq.clone(), degree: m.degree - 1 },
                    c * &Scalar::from_rat(rat_int(m.degree as i64)),
                );
            }
            if !m.freq.is_zero() {
                out.insert_add(m.clone(), c * &Scalar::from_rat(m.freq.clone()));
            }
        }
        out
    }

    /// Iterated derivation.
    pub fn derive_n(&self, n: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derive();
        }
        out
    }

    /// The integral from 0: the unique antiderivative `F` with `F(0) = 0`,
    /// so that `Img ∫ = Ker ev₀`.
    pub fn integrate(&self) -> Self {
        let mut out = ExpPoly::zero();
        for (m, c) in self.terms.iter() {
            if m.freq.is_zero() {
                // ∫ xⁿ = x^{n+1}/(n+1)
                out.insert_add(
                    Monomial { freq: Rat::zero(), degree: m.degree + 1 },
                    c * &Scalar::from_rat(Rat::new(1.into(), (m.degree as i64 + 1).into())),
                );
            } else {
                // ∫ xⁿ e^{μx}: antiderivative by the recurrence
                // A(xⁿe^{μx}) = xⁿe^{μx}/μ − (n/μ)·A(x^{n-1}e^{μx}),
                // then the value at 0 is subtracted below.
                let mu_inv = Scalar::from_rat(m.freq.recip());
                let mut coeff = c * &mu_inv;
                let mut deg = m.degree;
                loop {
                    out.insert_add(Monomial { freq: m.freq.clone(), degree: deg }, coeff.clone());
                    if deg == 0 {
                        break;
                    }
                    coeff = &(&coeff * &Scalar::from_rat(rat_int(deg as i64))) * &(-&mu_inv);
                    deg -= 1;
                }
            }
        }
        let at_zero = out.value_at_zero();
        if !at_zero.is_zero() {
            out.insert_add(Monomial::constant(), -&at_zero);
        }
        out
    }

    /// Iterated integral from 0.
    pub fn integrate_n(&self, n: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.integrate();
        }
        out
    }

    /// Value at the point 0 (the distinguished evaluation).
    pub fn value_at_zero(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in self.terms.iter() {
            if m.degree == 0 {
                out = &out + c;
            }
        }
        out
    }

    /// Value at a rational point: `xⁿe^{μx} ↦ aⁿ·E(μ·a)`.
    pub fn value_at(&self, a: &Rat) -> Scalar {
        if a.is_zero() {
            return self.value_at_zero();
        }
        let mut out = Scalar::zero();
        for (m, c) in self.terms.iter() {
            let mut pow = Rat::one();
            for _ in 0..m.degree {
                pow *= a.clone();
            }
            let factor = Scalar::from_constant(ExpConstant::monomial(pow, &m.freq * a));
            out = &out + &(c * &factor);
        }
        out
    }

    /// Multiplicative inverse, defined exactly for single-term elements of
    /// degree 0 (units `c·e^{μx}` of the algebra).
    pub fn invert(&self) -> Option<ExpPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if m.degree != 0 {
            return None;
        }
        Some(ExpPoly::term(c.inv().ok()?, 0, -m.freq.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = ExpPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// All frequencies occurring in the support.
    pub fn frequencies(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.terms.keys().map(|m| m.freq.clone()).collect();
        out.dedup();
        out
    }

    /// Largest polynomial degree in the support (0 for the zero element).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree).max().unwrap_or(0)
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.insert_add(m.clone(), -c);
        }
        out
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (m, c) in self.terms.iter() {
            for (n, d) in rhs.terms.iter() {
                out.insert_add(
                    Monomial { freq: &m.freq + &n.freq, degree: m.degree + n.degree },
                    c * d,
                );
            }
        }
        out
    }
}

/// A point-evaluation character `ev_a: f ↦ f(a)` with rational `a`.
///
/// Characters act multiplicatively; `ev_0` coincides with the evaluation
/// `e = 1 − ∫∂` built into the integro-differential structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Character {
    point: Rat,
}

impl Character {
    pub fn new(point: Rat) -> Self {
        Character { point }
    }

    pub fn at_int(a: i64) -> Self {
        Character::new(rat_int(a))
    }

    /// The distinguished evaluation at 0.
    pub fn origin() -> Self {
        Character::new(Rat::zero())
    }

    pub fn point(&self) -> &Rat {
        &self.point
    }

    pub fn is_origin(&self) -> bool {
        self.point.is_zero()
    }

    pub fn apply(&self, f: &ExpPoly) -> Scalar {
        f.value_at(&self.point)
    }
}

/// `evaluate(f, ch)` as a free function mirroring the character action.
pub fn evaluate(f: &ExpPoly, ch: &Character) -> Scalar {
    ch.apply(f)
}

/// `k`-fold integral from 0, written `f^{(-k)}`: `antider(f, 0) = f` and
/// `antider(f, k+1) = ∫ antider(f, k)`.
pub fn antider(f: &ExpPoly, k: u32) -> ExpPoly {
    f.integrate_n(k)
}

/// The evaluation `e = 1 − ∫∂` applied to `f`; projects onto constants.
pub fn eval_projector(f: &ExpPoly) -> ExpPoly {
    ExpPoly::constant(f.value_at_zero())
}

/// `x^k/k!` as an exponential polynomial.
pub fn monomial_over_factorial(k: u32) -> ExpPoly {
    ExpPoly::term(Scalar::from_rat(inv_factorial(k)), k, Rat::zero())
}

/// Sorts rationals (used for deterministic orderings of points).
pub(crate) fn rat_cmp(a: &Rat, b: &Rat) -> core::cmp::Ordering {
    if a == b {
        core::cmp::Ordering::Equal
    } else if (a - b).is_negative() {
        core::cmp::Ordering::Less
    } else {
        core::cmp::Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::super::constant::rat;
    use super::*;

    #[test]
    fn derive_power_rule_and_eigenfunction() {
        assert_eq!(ExpPoly::x_pow(2).derive(), ExpPoly::x().scale_rat(&rat_int(2)));
        let ex = ExpPoly::exp(rat_int(1));
        assert_eq!(ex.derive(), ex);
        // x·e^{2x} → e^{2x} + 2x·e^{2x}
        let f = &ExpPoly::x() * &ExpPoly::exp(rat_int(2));
        let expected = &ExpPoly::exp(rat_int(2)) + &f.scale_rat(&rat_int(2));
        assert_eq!(f.derive(), expected);
    }

    #[test]
    fn integrate_vanishes_at_zero_and_sections_derive() {
        assert_eq!(ExpPoly::one().integrate(), ExpPoly::x());
        // ∫ e^x = e^x − 1
        let ex = ExpPoly::exp(rat_int(1));
        assert_eq!(ex.integrate(), &ex - &ExpPoly::one());
        // ∫ x·e^x = x·e^x − e^x + 1 (integration by parts, checked by derive)
        let f = &ExpPoly::x() * &ex;
        let int = f.integrate();
        assert_eq!(int, &(&f - &ex) + &ExpPoly::one());
        assert_eq!(int.derive(), f);
        assert!(int.value_at_zero().is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let ch1 = Character::at_int(1);
        assert_eq!(ExpPoly::x().value_at(ch1.point()), Scalar::one());
        // (e^x − 1)(1) = E(1) − 1
        let f = &ExpPoly::exp(rat_int(1)) - &ExpPoly::one();
        let v = ch1.apply(&f);
        let expected =
            Scalar::from_constant(&ExpConstant::exp(rat_int(1)) - &ExpConstant::one());
        assert_eq!(v, expected);
        // (x²e^{2x})(1/2) = (1/4)·E(1)
        let g = &ExpPoly::x_pow(2) * &ExpPoly::exp(rat_int(2));
        let v = g.value_at(&rat(1, 2));
        assert_eq!(
            v,
            Scalar::from_constant(ExpConstant::monomial(rat(1, 4), rat_int(1)))
        );
    }

    #[test]
    fn antider_examples() {
        assert_eq!(antider(&ExpPoly::one(), 2), ExpPoly::x_pow(2).scale_rat(&rat(1, 2)));
        let ex = ExpPoly::exp(rat_int(1));
        assert_eq!(antider(&ex, 1), ex.integrate());
        assert_eq!(antider(&ExpPoly::x(), 2), ExpPoly::x_pow(3).scale_rat(&rat(1, 6)));
    }

    #[test]
    fn kernel_of_derivation_powers_is_polynomial(){
        // ∂ⁿ kills polynomials of degree < n and ∂ⁿ(xⁿ/n!) = 1.
        for n in 1..5u32 {
            for d in 0..n {
                assert!(ExpPoly::x_pow(d).derive_n(n).is_zero());
            }
            assert_eq!(monomial_over_factorial(n).derive_n(n), ExpPoly::one());
        }
    }
}
