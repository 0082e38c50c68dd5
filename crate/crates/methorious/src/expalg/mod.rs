//! The ground field of exponential constants and the integro-differential
//! algebra of exponential polynomials.

mod constant;
mod numeric;
mod poly;

pub use constant::{factorial, inv_factorial, rat, rat_int, ExpConstant, Rat, Scalar};
pub use numeric::{eval_float, DEFAULT_TOLERANCE};
pub use poly::{
    antider, eval_projector, evaluate, monomial_over_factorial, Character, ExpPoly, Monomial,
};

pub(crate) use poly::rat_cmp;
