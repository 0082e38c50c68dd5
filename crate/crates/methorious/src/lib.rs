//! Exact symbolic calculus for linear ordinary boundary problems.
//!
//! The crate implements, over the computable algebra of exponential
//! polynomials with rational frequencies:
//!
//! - [`expalg`]: the ground field of exponential constants and the
//!   integro-differential algebra itself (derivation, integral from 0,
//!   point evaluations),
//! - [`operators`]: normal forms and rewrite-based multiplication for the
//!   ring of integro-differential operators, including Stieltjes boundary
//!   conditions,
//! - [`problems`]: the monoid of boundary problems with regularity test,
//!   Green's operators, factorization and division,
//! - [`umbral`]: umbral expansion coefficients, minimal monomials,
//!   single-condition embedding and the regularization of singular
//!   problems,
//! - [`ore`]: common left multiples, Ore quadruples and the left fraction
//!   ring of boundary problems ("methorious operators"),
//! - [`methfun`]: the module of methorious functions carrying Dirac-like
//!   ideal elements, its fraction module, and boundary-problem solving.
//!
//! All arithmetic is exact (big rationals); the only floating-point entry
//! point is [`expalg::eval_float`], which encloses exponential constants in
//! rational intervals of guaranteed width.
//!
//! The crate is `no_std` (with `alloc`); parsing, rendering to files and
//! the command line front end live in the companion `methorious-cli` crate.
//!
//! ```
//! use methorious::expalg::{Character, ExpPoly};
//! use methorious::operators::StieltjesCondition;
//! use methorious::problems::{BoundaryProblem, DiffOperator};
//!
//! // u'' = f with u(0) = u(1) = 0
//! let dirichlet = BoundaryProblem::new(
//!     DiffOperator::derivation(2),
//!     vec![
//!         StieltjesCondition::evaluation(&Character::at_int(0)),
//!         StieltjesCondition::evaluation(&Character::at_int(1)),
//!     ],
//! );
//! let greens = dirichlet.greens_operator().unwrap();
//! let u = greens.apply(&ExpPoly::one()); // x²/2 − x/2, exactly
//! assert_eq!(dirichlet.operator().apply(&u), ExpPoly::one());
//! assert!(u.value_at_zero().is_zero());
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod expalg;
pub mod linalg;
pub mod methfun;
pub mod operators;
pub mod ore;
pub mod problems;
pub mod sample;
pub mod umbral;

pub use error::Error;
pub use expalg::{Character, ExpConstant, ExpPoly, Rat, Scalar};
pub use methfun::{IdealElement, MethoriousFunction, MethoriousHyperfunction, Verdict};
pub use operators::{IntDiffOperator, OperatorTerm, StieltjesCondition};
pub use ore::{MethoriousOperator, ProblemCombination};
pub use problems::{BoundaryProblem, DiffOperator, FundamentalSystem};
