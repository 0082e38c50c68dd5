//! Guaranteed-precision numeric evaluation of scalars.
//!
//! A [`Scalar`] is a fraction of sums `Σ qᵢ·e^{μᵢ}`. Each `e^{μ}` is
//! enclosed in a rational interval via argument halving and a Taylor tail
//! bound, the intervals are combined exactly, and the working precision is
//! doubled until the requested output tolerance is met.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::constant::{rat_abs, ExpConstant, Rat, Scalar};
use crate::error::{Error, Result};

/// Default output tolerance for [`eval_float`].
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    fn point(q: Rat) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    fn add(&self, rhs: &Interval) -> Interval {
        Interval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    fn scale(&self, q: &Rat) -> Interval {
        if q.is_negative() {
            Interval { lo: &self.hi * q, hi: &self.lo * q }
        } else {
            Interval { lo: &self.lo * q, hi: &self.hi * q }
        }
    }

    fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from(BigInt::from(2))
    }
}

/// Encloses `e^mu` within `eps` for `|mu| ≤ 1/2` by a Taylor polynomial
/// with an explicit geometric tail bound.
fn exp_small(mu: &Rat, eps: &Rat) -> Interval {
    let mut sum = Rat::one();
    let mut term = Rat::one();
    let mut k = BigInt::one();
    let abs = rat_abs(mu);
    loop {
        term = term * mu / Rat::from(k.clone());
        sum += term.clone();
        k += BigInt::one();
        // Tail after the last added term: |term|·|mu|/(k) · 1/(1−|mu|/k),
        // bounded by 2·|term|·|mu| once k ≥ 1 and |mu| ≤ 1/2.
        let tail = rat_abs(&term) * &abs * Rat::from(BigInt::from(2));
        if tail < *eps {
            return Interval { lo: &sum - &tail, hi: &sum + &tail };
        }
    }
}

/// Encloses `e^mu` for arbitrary rational `mu` within `eps`.
fn exp_interval(mu: &Rat, eps: &Rat) -> Interval {
    if mu.is_zero() {
        return Interval::point(Rat::one());
    }
    // Halve the argument until |mu/2^m| ≤ 1/2, then square back up.
    let mut m = 0u32;
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let mut arg = mu.clone();
    while rat_abs(&arg) > half {
        arg /= Rat::from(BigInt::from(2));
        m += 1;
    }
    // Squaring at most doubles the relative error each step; demand enough
    // headroom at the bottom. e^{1/2} < 2, so magnitudes stay controlled by
    // the final |e^mu| ≤ 4^{2^m}; a crude but safe shrink: eps / 8^{m+1}
    // per halving step.
    let mut local_eps = eps.clone();
    for _ in 0..=m {
        local_eps /= Rat::from(BigInt::from(8));
    }
    // Additionally scale by an a-priori bound of the result magnitude.
    let bound = exp_magnitude_bound(mu);
    local_eps /= bound;
    let mut iv = exp_small(&arg, &local_eps);
    for _ in 0..m {
        // [lo,hi]² for 0 < lo ≤ hi
        iv = Interval { lo: &iv.lo * &iv.lo, hi: &iv.hi * &iv.hi };
    }
    iv
}

/// A rational upper bound for `max(1, e^mu)`, safe and rough: `4^{⌈|mu|⌉}`.
fn exp_magnitude_bound(mu: &Rat) -> Rat {
    let ceil = rat_abs(mu).ceil().to_integer();
    let mut out = Rat::one();
    let four = Rat::from(BigInt::from(4));
    let mut k = BigInt::zero();
    while k < ceil {
        out *= four.clone();
        k += BigInt::one();
    }
    out
}

fn constant_interval(c: &ExpConstant, eps: &Rat) -> Interval {
    let mut out = Interval::point(Rat::zero());
    let n = c.num_terms().max(1);
    let per_term = eps / Rat::from(BigInt::from(n as i64));
    for (mu, q) in c.iter() {
        let scale_div = rat_abs(q).max(Rat::one());
        let iv = exp_interval(mu, &(per_term.clone() / scale_div)).scale(q);
        out = out.add(&iv);
    }
    out
}

/// Evaluates a scalar to a float with `|result − value| < tol`.
///
/// # Errors
/// [`Error::DivisionByZero`] on a structurally zero denominator (cannot
/// happen for invariant-respecting scalars) and [`Error::PrecisionExhausted`]
/// if interval refinement cannot separate the denominator from zero within
/// the iteration cap.
pub fn eval_float(s: &Scalar, tol: f64) -> Result<f64> {
    if s.denominator().is_zero() {
        return Err(Error::DivisionByZero);
    }
    if s.is_zero() {
        return Ok(0.0);
    }
    let tol = Rat::from_float(tol.max(1e-300)).ok_or(Error::PrecisionExhausted)?;
    let mut eps = tol.clone();
    for _ in 0..64 {
        let num = constant_interval(s.numerator(), &eps);
        let den = constant_interval(s.denominator(), &eps);
        if !den.contains_zero() {
            // Exact interval division [a,b]/[c,d] with 0 ∉ [c,d].
            let candidates = [
                &num.lo / &den.lo,
                &num.lo / &den.hi,
                &num.hi / &den.lo,
                &num.hi / &den.hi,
            ];
            let mut lo = candidates[0].clone();
            let mut hi = candidates[0].clone();
            for c in &candidates[1..] {
                if *c < lo {
                    lo = c.clone();
                }
                if *c > hi {
                    hi = c.clone();
                }
            }
            let iv = Interval { lo, hi };
            if iv.width() < tol {
                return iv.mid().to_f64().ok_or(Error::PrecisionExhausted);
            }
        }
        eps /= Rat::from(BigInt::from(16));
    }
    Err(Error::PrecisionExhausted)
}

#[cfg(test)]
mod tests {
    use super::super::constant::{rat, rat_int};
    use super::*;

    #[test]
    fn eval_float_matches_oracle() {
        let e1 = Scalar::exp(rat_int(1));
        let v = eval_float(&e1, 1e-9).unwrap();
        assert!((v - core::f64::consts::E).abs() < 1e-9);

        let half = Scalar::from_rat(rat(1, 2));
        assert_eq!(eval_float(&half, 1e-12).unwrap(), 0.5);

        let em1 = &e1 - &Scalar::one();
        let v = eval_float(&em1, 1e-9).unwrap();
        assert!((v - (core::f64::consts::E - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn eval_float_handles_fractions_and_negatives() {
        // (e² − 1)/(e − 1) = e + 1
        let num = &Scalar::exp(rat_int(2)) - &Scalar::one();
        let den = &Scalar::exp(rat_int(1)) - &Scalar::one();
        let v = eval_float(&(&num / &den), 1e-10).unwrap();
        assert!((v - (core::f64::consts::E + 1.0)).abs() < 1e-10);

        let v = eval_float(&Scalar::exp(rat_int(-3)), 1e-12).unwrap();
        assert!((v - (-3.0f64).exp()).abs() < 1e-12);

        let v = eval_float(&Scalar::exp(rat(7, 2)), 1e-10).unwrap();
        assert!((v - 3.5f64.exp()).abs() < 1e-10);
    }
}
