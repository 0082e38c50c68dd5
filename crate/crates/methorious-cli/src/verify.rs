//! Floating-point cross-validation of symbolic solutions.
//!
//! The exact solution of a boundary problem is evaluated through interval
//! refinement, while a second value is produced independently: integral
//! terms of the Green's operator are integrated by adaptive Simpson
//! quadrature over float samples of the integrand. The maximal deviation
//! over equispaced sample points is reported.

use methorious::expalg::{eval_float, rat, ExpPoly, Scalar};
use methorious::operators::{IntDiffOperator, OperatorTerm};
use methorious::problems::BoundaryProblem;
use methorious::Error;

/// Float evaluation of an exponential polynomial at a float point.
pub fn expr_at_f64(f: &ExpPoly, x: f64) -> f64 {
    let mut out = 0.0;
    for (m, c) in f.iter() {
        let coeff = eval_float(c, 1e-13).unwrap_or(f64::NAN);
        let freq = rat_to_f64(&m.freq);
        out += coeff * x.powi(m.degree as i32) * (freq * x).exp();
    }
    out
}

fn rat_to_f64(q: &methorious::Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Adaptive Simpson quadrature with an absolute tolerance.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn rec(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, left, tol / 2.0, depth - 1)
                + rec(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let whole = simpson(f, a, m, b);
    rec(f, a, b, whole, tol, 30)
}

/// Applies an operator to a function numerically at a single point:
/// integral terms go through quadrature, local terms through float
/// evaluation of the (symbolically differentiated) argument.
pub fn numeric_apply(op: &IntDiffOperator, f: &ExpPoly, x: f64, quad_tol: f64) -> f64 {
    let mut out = 0.0;
    for term in op.terms() {
        match term {
            OperatorTerm::Diff { coeff, order } => {
                out += expr_at_f64(&coeff, x) * expr_at_f64(&f.derive_n(order), x);
            }
            OperatorTerm::Int { coeff, kernel } => {
                let integrand = |xi: f64| expr_at_f64(&kernel, xi) * expr_at_f64(f, xi);
                out += expr_at_f64(&coeff, x) * adaptive_simpson(&integrand, 0.0, x, quad_tol);
            }
            OperatorTerm::BoundLocal { coeff, point, order } => {
                let a = rat_to_f64(&point);
                out += expr_at_f64(&coeff, x) * expr_at_f64(&f.derive_n(order), a);
            }
            OperatorTerm::BoundGlobal { coeff, point, kernel } => {
                let a = rat_to_f64(&point);
                let integrand = |xi: f64| expr_at_f64(&kernel, xi) * expr_at_f64(f, xi);
                out += expr_at_f64(&coeff, x) * adaptive_simpson(&integrand, 0.0, a, quad_tol);
            }
        }
    }
    out
}

/// One sample of the verification table.
#[derive(Debug, Clone)]
pub struct VerifySample {
    pub point: f64,
    pub exact: f64,
    pub quadrature: f64,
}

/// Result of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub samples: Vec<VerifySample>,
    pub max_deviation: f64,
}

/// Verifies `u = solve_bvp(p, f, values)` numerically at `n` equispaced
/// rational points of `[0, 1]`: the exact `u` is evaluated through
/// interval refinement and compared against adaptive Simpson quadrature of
/// the Green's-operator integral (plus the exactly evaluated boundary
/// interpolant).
pub fn verify_solution(
    p: &BoundaryProblem,
    f: &ExpPoly,
    values: &[Scalar],
    n: u32,
    quad_tol: f64,
) -> Result<VerifyReport, Error> {
    let u = methorious::methfun::solve_bvp(p.operator(), p.conditions(), f, values)?;
    let greens = p.greens_operator()?;
    // Boundary interpolant Σ uᵢ·(β(u)⁻¹·c)ᵢ evaluated exactly, then as
    // floats.
    let fs = p.system()?;
    let minv = p.evaluation_matrix(&fs).inverse()?;
    let coeffs = minv.apply(values);
    let mut samples = Vec::new();
    let mut max_dev: f64 = 0.0;
    for k in 0..n {
        let t = rat(k as i64, (n - 1) as i64);
        let exact = eval_float(&u.value_at(&t), 1e-12)?;
        let x = rat_to_f64(&t);
        let mut numeric = numeric_apply(&greens, f, x, quad_tol * 0.01);
        for (c, basis_fn) in coeffs.iter().zip(fs.basis()) {
            numeric += eval_float(c, 1e-13)? * expr_at_f64(basis_fn, x);
        }
        let dev = (exact - numeric).abs();
        max_dev = max_dev.max(dev);
        samples.push(VerifySample { point: x, exact, quadrature: numeric });
    }
    Ok(VerifyReport { samples, max_deviation: max_dev })
}
