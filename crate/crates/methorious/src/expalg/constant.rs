//! The ground field of exponential constants.
//!
//! An [`ExpConstant`] is a finite sum `Σ qᵢ·E(μᵢ)` with rational `qᵢ, μᵢ`,
//! where `E(μ)` stands for `e^μ` and multiplies by `E(μ)·E(ν) = E(μ+ν)`.
//! This is the group algebra of `(ℚ, +)` over `ℚ`; distinct `E(μ)` are
//! treated as linearly independent, which models the real exponentials
//! faithfully (Lindemann–Weierstrass). A [`Scalar`] is a fraction of two
//! such constants and forms the ground field of the whole crate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for coefficients, exponents, frequencies and
/// evaluation points throughout the crate.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integer rational.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// A formal sum `Σ qᵢ·E(μᵢ)` of exponential constants.
///
/// Invariants: no stored coefficient is zero and exponents are kept sorted
/// (map keys). The zero element has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpConstant {
    terms: BTreeMap<Rat, Rat>,
}

impl ExpConstant {
    /// The zero constant.
    pub fn zero() -> Self {
        ExpConstant { terms: BTreeMap::new() }
    }

    /// The multiplicative unit `E(0) = 1`.
    pub fn one() -> Self {
        ExpConstant::from_rat(Rat::one())
    }

    /// Embeds a rational as `q·E(0)`.
    pub fn from_rat(q: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Rat::zero(), q);
        }
        ExpConstant { terms }
    }

    /// The monomial `E(mu) = e^mu`.
    pub fn exp(mu: Rat) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mu, Rat::one());
        ExpConstant { terms }
    }

    /// The monomial `q·E(mu)`.
    pub fn monomial(q: Rat, mu: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(mu, q);
        }
        ExpConstant { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rat().is_some_and(|q| q.is_one())
    }

    /// Returns the rational value if the constant is `q·E(0)` (or zero).
    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(q) = self.terms.get(&Rat::zero()) {
                return Some(q.clone());
            }
        }
        None
    }

    /// Iterates over `(exponent, coefficient)` pairs in exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, mu: Rat, q: Rat) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&mu) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&mu);
                }
            }
            None => {
                self.terms.insert(mu, q);
            }
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return ExpConstant::zero();
        }
        ExpConstant {
            terms: self.terms.iter().map(|(mu, c)| (mu.clone(), c * q)).collect(),
        }
    }

    /// Multiplies by the monomial `E(shift)`, shifting all exponents.
    fn shift(&self, shift: &Rat) -> Self {
        ExpConstant {
            terms: self
                .terms
                .iter()
                .map(|(mu, c)| (mu + shift, c.clone()))
                .collect(),
        }
    }

    /// Least exponent with nonzero coefficient, together with that
    /// coefficient. `None` for the zero constant.
    fn least_term(&self) -> Option<(&Rat, &Rat)> {
        self.terms.iter().next()
    }

    /// Common denominator of all exponents.
    fn exponent_denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for mu in self.terms.keys() {
            d = d.lcm(mu.denom());
        }
        d
    }

    /// Writes the constant as a Laurent polynomial in `t = E(1/d)`:
    /// returns `(offset, coeffs)` so that the constant equals
    /// `Σ coeffs[k]·t^(offset+k)`.
    fn to_laurent(&self, d: &BigInt) -> (BigInt, Vec<Rat>) {
        if self.terms.is_empty() {
            return (BigInt::zero(), vec![]);
        }
        let exps: Vec<BigInt> = self
            .terms
            .keys()
            .map(|mu| (mu * Rat::from(d.clone())).to_integer())
            .collect();
        let lo = exps.iter().min().unwrap().clone();
        let hi = exps.iter().max().unwrap().clone();
        let len = usize::try_from(&hi - &lo).expect("exponent range fits in usize") + 1;
        let mut coeffs = vec![Rat::zero(); len];
        for ((_, c), e) in self.terms.iter().zip(exps.iter()) {
            let idx = usize::try_from(e - &lo).unwrap();
            coeffs[idx] = c.clone();
        }
        (lo, coeffs)
    }

    fn from_laurent(offset: &BigInt, coeffs: &[Rat], d: &BigInt) -> Self {
        let mut out = ExpConstant::zero();
        let den = Rat::from(d.clone());
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = Rat::from(offset + BigInt::from(k)) / den.clone();
                out.insert_add(e, c.clone());
            }
        }
        out
    }
}

impl Add for &ExpConstant {
    type Output = ExpConstant;
    fn add(self, rhs: &ExpConstant) -> ExpConstant {
        let mut out = self.clone();
        for (mu, q) in rhs.terms.iter() {
            out.insert_add(mu.clone(), q.clone());
        }
        out
    }
}

impl Sub for &ExpConstant {
    type Output = ExpConstant;
    fn sub(self, rhs: &ExpConstant) -> ExpConstant {
        let mut out = self.clone();
        for (mu, q) in rhs.terms.iter() {
            out.insert_add(mu.clone(), -q.clone());
        }
        out
    }
}

impl Neg for &ExpConstant {
    type Output = ExpConstant;
    fn neg(self) -> ExpConstant {
        ExpConstant {
            terms: self.terms.iter().map(|(mu, q)| (mu.clone(), -q.clone())).collect(),
        }
    }
}

impl Mul for &ExpConstant {
    type Output = ExpConstant;
    fn mul(self, rhs: &ExpConstant) -> ExpConstant {
        let mut out = ExpConstant::zero();
        for (mu, p) in self.terms.iter() {
            for (nu, q) in rhs.terms.iter() {
                out.insert_add(mu + nu, p * q);
            }
        }
        out
    }
}

// Univariate polynomial helpers over the rationals, used for the exact
// gcd reduction of scalar fractions. Coefficient vectors are low-to-high
// with nonzero leading coefficient (empty = zero polynomial).

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_rem(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = num.to_vec();
    let dlead = den.last().expect("nonzero divisor");
    while rem.len() >= den.len() {
        let q = rem.last().unwrap() / dlead;
        let shift = rem.len() - den.len();
        for (i, c) in den.iter().enumerate() {
            let t = &rem[shift + i] - &(c * &q);
            rem[shift + i] = t;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    rem
}

fn poly_monicize(p: &mut [Rat]) {
    if let Some(lead) = p.last().cloned() {
        if !lead.is_one() {
            for c in p.iter_mut() {
                *c = &*c / &lead;
            }
        }
    }
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    // Keeping remainders monic bounds the rational coefficient growth.
    poly_monicize(&mut b);
    while !b.is_empty() {
        let mut r = poly_rem(&a, &b);
        poly_monicize(&mut r);
        a = b;
        b = r;
    }
    poly_monicize(&mut a);
    a
}

/// Exact division, assuming it is exact; used only with gcd divisors.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = num.to_vec();
    let mut quot = vec![Rat::zero(); num.len().saturating_sub(den.len()) + 1];
    let dlead = den.last().expect("nonzero divisor");
    while rem.len() >= den.len() && !rem.is_empty() {
        let q = rem.last().unwrap() / dlead;
        let shift = rem.len() - den.len();
        quot[shift] = q.clone();
        for (i, c) in den.iter().enumerate() {
            let t = &rem[shift + i] - &(c * &q);
            rem[shift + i] = t;
        }
        poly_trim(&mut rem);
    }
    debug_assert!(rem.is_empty(), "inexact polynomial division");
    poly_trim(&mut quot);
    quot
}

/// An element of the ground field: a fraction of exponential constants.
///
/// The denominator is never zero. Equality is well-defined through cross
/// multiplication; internally the fraction is kept reduced (numerator and
/// denominator coprime as Laurent polynomials) and the denominator is
/// normalized so that its least term is `1·E(0)`. This makes structural
/// equality coincide with field equality, but `eq` never relies on it.
#[derive(Debug, Clone)]
pub struct Scalar {
    num: ExpConstant,
    den: ExpConstant,
}

impl Scalar {
    /// Builds `num/den`, reducing the fraction.
    ///
    /// # Errors
    /// [`Error::DivisionByZero`] if `den` is zero.
    pub fn new(num: ExpConstant, den: ExpConstant) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut s = Scalar { num, den };
        s.reduce();
        Ok(s)
    }

    pub fn zero() -> Self {
        Scalar { num: ExpConstant::zero(), den: ExpConstant::one() }
    }

    pub fn one() -> Self {
        Scalar { num: ExpConstant::one(), den: ExpConstant::one() }
    }

    pub fn from_rat(q: Rat) -> Self {
        Scalar { num: ExpConstant::from_rat(q), den: ExpConstant::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat_int(n))
    }

    /// The exponential constant `e^mu` as a scalar.
    pub fn exp(mu: Rat) -> Self {
        Scalar { num: ExpConstant::exp(mu), den: ExpConstant::one() }
    }

    pub fn from_constant(c: ExpConstant) -> Self {
        Scalar { num: c, den: ExpConstant::one() }
    }

    pub fn numerator(&self) -> &ExpConstant {
        &self.num
    }

    pub fn denominator(&self) -> &ExpConstant {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
    }

    /// Returns the rational value if both parts are rational multiples of
    /// `E(0)`.
    pub fn as_rat(&self) -> Option<Rat> {
        let n = self.num.as_rat()?;
        let d = self.den.as_rat()?;
        Some(n / d)
    }

    /// Multiplicative inverse.
    ///
    /// # Errors
    /// [`Error::DivisionByZero`] on the zero scalar.
    pub fn inv(&self) -> Result<Self> {
        Scalar::new(self.den.clone(), self.num.clone())
    }

    /// Cancels common Laurent-polynomial factors and normalizes the
    /// denominator so that its least term is `1·E(0)`.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = ExpConstant::one();
            return;
        }
        if !self.den.is_one() {
            let d = self.num.exponent_denominator().lcm(&self.den.exponent_denominator());
            let (noff, ncoef) = self.num.to_laurent(&d);
            let (doff, dcoef) = self.den.to_laurent(&d);
            let g = poly_gcd(&ncoef, &dcoef);
            if g.len() > 1 {
                let nq = poly_div_exact(&ncoef, &g);
                let dq = poly_div_exact(&dcoef, &g);
                self.num = ExpConstant::from_laurent(&noff, &nq, &d);
                self.den = ExpConstant::from_laurent(&doff, &dq, &d);
            }
        }
        // Unit normalization: divide through by the denominator's least term.
        let (mu, c) = {
            let (mu, c) = self.den.least_term().expect("nonzero denominator");
            (mu.clone(), c.clone())
        };
        if !mu.is_zero() || !c.is_one() {
            let inv = c.recip();
            self.num = self.num.shift(&-mu.clone()).scale(&inv);
            self.den = self.den.shift(&-mu).scale(&inv);
        }
    }

    /// Exponentiation by a machine integer (negative allowed for nonzero
    /// scalars; panics on `0^-n`).
    pub fn pow(&self, n: i32) -> Self {
        if n == 0 {
            return Scalar::one();
        }
        let base = if n < 0 {
            self.inv().expect("negative power of zero scalar")
        } else {
            self.clone()
        };
        let mut out = base.clone();
        for _ in 1..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Scalar {}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Scalar::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominators");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Scalar::new(num, den).expect("nonzero denominators")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        // Multiplying by a unit c·E(μ) of the group algebra keeps the
        // fraction reduced and the denominator normalized, so the gcd
        // pass is skipped.
        if rhs.den.is_one() && rhs.num.num_terms() == 1 {
            return Scalar { num: &self.num * &rhs.num, den: self.den.clone() };
        }
        if self.den.is_one() && self.num.num_terms() == 1 {
            return Scalar { num: &self.num * &rhs.num, den: rhs.den.clone() };
        }
        Scalar::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.num * &rhs.den, &self.den * &rhs.num).expect("division by zero scalar")
    }
}

/// Exact integer helpers shared by the umbral machinery.
pub fn factorial(n: u32) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=n as u64 {
        out *= BigInt::from(k);
    }
    out
}

/// `1/n!` as a rational.
pub fn inv_factorial(n: u32) -> Rat {
    Rat::new(BigInt::one(), factorial(n))
}

pub(crate) fn rat_abs(q: &Rat) -> Rat {
    if q.is_negative() {
        -q.clone()
    } else {
        q.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(mu: i64) -> ExpConstant {
        ExpConstant::exp(rat_int(mu))
    }

    #[test]
    fn exp_constants_multiply_by_adding_exponents() {
        assert_eq!(&e(1) * &e(-1), ExpConstant::one());
        let a = &e(1) - &ExpConstant::one();
        assert_eq!(&a * &ExpConstant::one(), a);
        let b = &e(1) + &ExpConstant::one();
        assert_eq!(&a * &b, &e(2) - &ExpConstant::one());
    }

    #[test]
    fn scalar_inverse_roundtrip() {
        let one = Scalar::one();
        assert_eq!(one.inv().unwrap(), one);

        let s = Scalar::exp(rat_int(1));
        assert_eq!(&s * &s.inv().unwrap(), one);

        let t = Scalar::new(&e(1) - &ExpConstant::one(), ExpConstant::one()).unwrap();
        let ti = t.inv().unwrap();
        assert_eq!(&t * &ti, one);
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn fraction_reduction_produces_canonical_forms() {
        // (E(2) - 1) / (E(1) - 1) = E(1) + 1
        let num = &e(2) - &ExpConstant::one();
        let den = &e(1) - &ExpConstant::one();
        let s = Scalar::new(num, den).unwrap();
        let expected = Scalar::from_constant(&e(1) + &ExpConstant::one());
        assert_eq!(s, expected);
        assert!(s.denominator().is_one());

        // Monomial denominators reduce away entirely.
        let s = Scalar::new(ExpConstant::from_rat(rat_int(2)), e(1)).unwrap();
        assert!(s.denominator().is_one());
        assert_eq!(s, Scalar::from_constant(ExpConstant::monomial(rat_int(2), rat_int(-1))));
    }

    #[test]
    fn fractional_exponents_reduce() {
        // (E(1) - 1)/(E(1/2) - 1) = E(1/2) + 1
        let num = &e(1) - &ExpConstant::one();
        let den = &ExpConstant::exp(rat(1, 2)) - &ExpConstant::one();
        let s = Scalar::new(num, den).unwrap();
        assert!(s.denominator().is_one());
        assert_eq!(
            s,
            Scalar::from_constant(&ExpConstant::exp(rat(1, 2)) + &ExpConstant::one())
        );
    }

    #[test]
    fn field_laws_on_samples() {
        let samples = [
            Scalar::from_rat(rat(1, 2)),
            Scalar::exp(rat_int(1)),
            Scalar::new(&e(1) - &ExpConstant::one(), &e(2) + &ExpConstant::one()).unwrap(),
            Scalar::from_int(-3),
        ];
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let ab_c = &(a * b) * c;
                    let a_bc = a * &(b * c);
                    assert_eq!(ab_c, a_bc);
                    let distl = a * &(b + c);
                    let distr = &(a * b) + &(a * c);
                    assert_eq!(distl, distr);
                }
            }
        }
    }
}
