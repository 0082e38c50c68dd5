//! Canonical text and LaTeX rendering.
//!
//! The text output reparses to the same value: expressions sort their terms
//! by (frequency, degree), operators follow the normal-form term order, and
//! pure definite-integral conditions use the `I[0,b]` sugar.

use methorious::expalg::{ExpConstant, ExpPoly, Rat, Scalar};
use methorious::methfun::{MethoriousFunction, MethoriousHyperfunction};
use methorious::operators::{IntDiffOperator, StieltjesCondition};
use methorious::ore::{MethoriousOperator, ProblemCombination};
use methorious::problems::{BoundaryProblem, DiffOperator};
use num_traits::{One, Signed, Zero};

/// Output syntax selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Latex,
}

pub fn rat(q: &Rat) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat_latex(q: &Rat) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else if q.is_negative() {
        format!("-\\tfrac{{{}}}{{{}}}", -q.numer(), q.denom())
    } else {
        format!("\\tfrac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

/// Renders `Σ q·E(μ)` as e.g. `2*exp(1) - 1/2`.
pub fn exp_constant(c: &ExpConstant, fmt: Format) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mu, q)) in c.iter().enumerate() {
        let neg = q.is_negative();
        let abs = if neg { -q.clone() } else { q.clone() };
        let exp_part = if mu.is_zero() {
            None
        } else {
            Some(match fmt {
                Format::Plain => format!("exp({})", rat(mu)),
                Format::Latex => format!("e^{{{}}}", rat_latex(mu)),
            })
        };
        let body = match (&exp_part, abs.is_one()) {
            (None, _) => match fmt {
                Format::Plain => rat(&abs),
                Format::Latex => rat_latex(&abs),
            },
            (Some(e), true) => e.clone(),
            (Some(e), false) => match fmt {
                Format::Plain => format!("{}*{}", rat(&abs), e),
                Format::Latex => format!("{} {}", rat_latex(&abs), e),
            },
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

pub fn scalar(s: &Scalar, fmt: Format) -> String {
    if s.denominator().is_one() {
        exp_constant(s.numerator(), fmt)
    } else {
        match fmt {
            Format::Plain => format!(
                "({})/({})",
                exp_constant(s.numerator(), fmt),
                exp_constant(s.denominator(), fmt)
            ),
            Format::Latex => format!(
                "\\frac{{{}}}{{{}}}",
                exp_constant(s.numerator(), fmt),
                exp_constant(s.denominator(), fmt)
            ),
        }
    }
}

fn scalar_is_simple_rat(s: &Scalar) -> Option<Rat> {
    s.as_rat()
}

fn monomial_body(degree: u32, freq: &Rat, fmt: Format) -> Vec<String> {
    let mut parts = Vec::new();
    match degree {
        0 => {}
        1 => parts.push("x".to_string()),
        d => parts.push(match fmt {
            Format::Plain => format!("x^{d}"),
            Format::Latex => format!("x^{{{d}}}"),
        }),
    }
    if !freq.is_zero() {
        parts.push(match fmt {
            Format::Plain => {
                if freq.is_one() {
                    "exp(x)".into()
                } else if (-freq.clone()).is_one() {
                    "exp(-x)".into()
                } else {
                    format!("exp({}*x)", rat(freq))
                }
            }
            Format::Latex => format!("e^{{{} x}}", rat_latex(freq)),
        });
    }
    parts
}

/// Term order used for display: frequency ascending, degree descending
/// (so plain polynomials read highest power first).
fn display_sorted(f: &ExpPoly) -> Vec<(methorious::expalg::Monomial, Scalar)> {
    let mut terms: Vec<_> = f.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.sort_by(|(a, _), (b, _)| {
        (a.freq.clone(), std::cmp::Reverse(a.degree)).cmp(&(b.freq.clone(), std::cmp::Reverse(b.degree)))
    });
    terms
}

/// Renders an exponential polynomial in canonical term order.
pub fn expr(f: &ExpPoly, fmt: Format) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let join = match fmt {
        Format::Plain => "*",
        Format::Latex => " ",
    };
    let mut out = String::new();
    for (i, (m, c)) in display_sorted(f).iter().enumerate() {
        let mut parts = monomial_body(m.degree, &m.freq, fmt);
        // Rational coefficients render numerator-first with the
        // denominator trailing the monomial: 1/2·x² reads "x^2/2".
        let mut denom_suffix = None;
        let (sign_negative, coeff_str) = match scalar_is_simple_rat(c) {
            Some(q) => {
                let neg = q.is_negative();
                let abs = if neg { -q } else { q };
                if parts.is_empty() {
                    let s = match fmt {
                        Format::Plain => rat(&abs),
                        Format::Latex => rat_latex(&abs),
                    };
                    (neg, Some(s))
                } else {
                    if fmt == Format::Plain && !abs.denom().is_one() {
                        denom_suffix = Some(format!("/{}", abs.denom()));
                    }
                    let num_part = match fmt {
                        Format::Plain => {
                            let n = abs.numer();
                            if n.is_one() {
                                None
                            } else {
                                Some(format!("{n}"))
                            }
                        }
                        Format::Latex => {
                            if abs.is_one() {
                                None
                            } else {
                                Some(rat_latex(&abs))
                            }
                        }
                    };
                    (neg, num_part)
                }
            }
            None => {
                // Single exponential-constant coefficients read fine bare;
                // sums and fractions need parentheses.
                let s = scalar(c, fmt);
                if c.denominator().is_one() && c.numerator().num_terms() == 1 {
                    match s.strip_prefix('-') {
                        Some(rest) => (true, Some(rest.to_string())),
                        None => (false, Some(s)),
                    }
                } else {
                    (false, Some(format!("({s})")))
                }
            }
        };
        let mut term_parts = Vec::new();
        if let Some(cs) = coeff_str {
            term_parts.push(cs);
        }
        term_parts.append(&mut parts);
        let mut body = term_parts.join(join);
        if let Some(suffix) = denom_suffix {
            body.push_str(&suffix);
        }
        if i == 0 {
            if sign_negative {
                out.push('-');
            }
        } else {
            out.push_str(if sign_negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn wrap_function(f: &ExpPoly, fmt: Format) -> String {
    // Parenthesize unless the function is a single positive simple term.
    let body = expr(f, fmt);
    let simple = f.num_terms() == 1 && !body.starts_with('-') && !body.contains(' ');
    if simple {
        body
    } else {
        format!("({body})")
    }
}

fn d_power(order: u32, fmt: Format) -> Option<String> {
    match (order, fmt) {
        (0, _) => None,
        (1, Format::Plain) => Some("D".into()),
        (n, Format::Plain) => Some(format!("D^{n}")),
        (1, Format::Latex) => Some("\\partial".into()),
        (n, Format::Latex) => Some(format!("\\partial^{{{n}}}")),
    }
}

fn ev_point(a: &Rat, fmt: Format) -> String {
    match fmt {
        Format::Plain => format!("E[{}]", rat(a)),
        Format::Latex => format!("\\mathrm{{e}}_{{{}}}", rat_latex(a)),
    }
}

fn int_sign(fmt: Format) -> &'static str {
    match fmt {
        Format::Plain => "A",
        Format::Latex => "\\textstyle\\int",
    }
}

/// Splits a leading sign off a function whose first coefficient is a
/// negative rational.
fn sign_split(f: &ExpPoly) -> (bool, ExpPoly) {
    if let Some((_, c)) = display_sorted(f).first() {
        if let Some(q) = c.as_rat() {
            if q.is_negative() {
                return (true, -f);
            }
        }
    }
    (false, f.clone())
}

/// Proportionality test: returns `c` with `f = c·g`.
fn proportional(f: &ExpPoly, g: &ExpPoly) -> Option<Scalar> {
    let (mf, cf) = f.iter().next()?;
    let (mg, cg) = g.iter().next()?;
    if mf != mg {
        return None;
    }
    let ratio = cf / cg;
    if *f == g.scale(&ratio) {
        Some(ratio)
    } else {
        None
    }
}

struct DisplayTerm {
    negative: bool,
    body: String,
}

fn push_coeff(parts: &mut Vec<String>, coeff: &ExpPoly, fmt: Format, force: bool) {
    if !coeff.is_one() || force {
        parts.push(wrap_function(coeff, fmt));
    }
}

/// Groups integral terms with proportional left coefficients back into
/// `f·A·kernel` display form.
fn group_integral_terms(pairs: Vec<(ExpPoly, ExpPoly)>) -> Vec<(ExpPoly, ExpPoly)> {
    let mut groups: Vec<(ExpPoly, ExpPoly)> = Vec::new();
    'outer: for (coeff, kernel) in pairs {
        for (gc, gk) in groups.iter_mut() {
            if let Some(ratio) = proportional(&coeff, gc) {
                *gk = &*gk + &kernel.scale(&ratio);
                continue 'outer;
            }
        }
        groups.push((coeff, kernel));
    }
    groups
}

fn display_terms(op: &IntDiffOperator, fmt: Format) -> Vec<DisplayTerm> {
    let join = match fmt {
        Format::Plain => "*",
        Format::Latex => " \\, ",
    };
    let mut out = Vec::new();
    for (order, coeff) in op.diff_part().iter() {
        let (neg, coeff) = sign_split(coeff);
        let mut parts = Vec::new();
        let dp = d_power(*order, fmt);
        push_coeff(&mut parts, &coeff, fmt, dp.is_none());
        parts.extend(dp);
        out.push(DisplayTerm { negative: neg, body: parts.join(join) });
    }
    let int_pairs: Vec<(ExpPoly, ExpPoly)> = op
        .int_part()
        .iter()
        .map(|(m, f)| (f.clone(), m.to_poly()))
        .collect();
    for (coeff, kernel) in group_integral_terms(int_pairs) {
        let (cneg, coeff) = sign_split(&coeff);
        let kernel = if cneg { -&kernel } else { kernel };
        let (neg, kernel) = sign_split(&kernel);
        let mut parts = Vec::new();
        push_coeff(&mut parts, &coeff, fmt, false);
        parts.push(int_sign(fmt).to_string());
        if !kernel.is_one() {
            parts.push(wrap_function(&kernel, fmt));
        }
        out.push(DisplayTerm { negative: neg, body: parts.join(join) });
    }
    for ((point, order), coeff) in op.blocal_part().iter() {
        let (neg, coeff) = sign_split(coeff);
        let mut parts = Vec::new();
        push_coeff(&mut parts, &coeff, fmt, false);
        parts.push(ev_point(point, fmt));
        parts.extend(d_power(*order, fmt));
        out.push(DisplayTerm { negative: neg, body: parts.join(join) });
    }
    // Boundary-global terms group per character point.
    let mut by_point: Vec<(Rat, Vec<(ExpPoly, ExpPoly)>)> = Vec::new();
    for ((point, m), coeff) in op.bglobal_part().iter() {
        match by_point.iter_mut().find(|(p, _)| p == point) {
            Some((_, v)) => v.push((coeff.clone(), m.to_poly())),
            None => by_point.push((point.clone(), vec![(coeff.clone(), m.to_poly())])),
        }
    }
    for (point, pairs) in by_point {
        for (coeff, kernel) in group_integral_terms(pairs) {
            let (cneg, coeff) = sign_split(&coeff);
            let kernel = if cneg { -&kernel } else { kernel };
            let (neg, kernel) = sign_split(&kernel);
            let mut parts = Vec::new();
            push_coeff(&mut parts, &coeff, fmt, false);
            parts.push(ev_point(&point, fmt));
            parts.push(int_sign(fmt).to_string());
            if !kernel.is_one() {
                parts.push(wrap_function(&kernel, fmt));
            }
            out.push(DisplayTerm { negative: neg, body: parts.join(join) });
        }
    }
    out
}

/// Renders an integro-differential operator in normal-form term order.
pub fn operator(op: &IntDiffOperator, fmt: Format) -> String {
    let terms = display_terms(op, fmt);
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            if t.negative {
                out.push('-');
            }
        } else {
            out.push_str(if t.negative { " - " } else { " + " });
        }
        out.push_str(&t.body);
    }
    out
}

/// Renders a boundary condition; the pure definite integral from 0 uses
/// the `I[0,b]` sugar.
pub fn condition(c: &StieltjesCondition, fmt: Format) -> String {
    if c.local_part().is_empty() && c.global_part().len() == 1 {
        let (b, w) = c.global_part().iter().next().unwrap();
        if w.is_one() {
            return match fmt {
                Format::Plain => format!("I[0,{}]", rat(b)),
                Format::Latex => format!("\\textstyle\\int_0^{{{}}}", rat_latex(b)),
            };
        }
    }
    operator(&c.to_operator(), fmt)
}

pub fn diff_operator(op: &DiffOperator, fmt: Format) -> String {
    operator(&op.to_operator(), fmt)
}

pub fn problem(p: &BoundaryProblem, fmt: Format) -> String {
    let conds: Vec<String> = p.conditions().iter().map(|c| condition(c, fmt)).collect();
    format!("({}, [{}])", diff_operator(p.operator(), fmt), conds.join(", "))
}

pub fn combination(r: &ProblemCombination, fmt: Format) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (coeff, p)) in r.terms().iter().enumerate() {
        let neg = coeff.is_negative();
        let abs = if neg { -coeff.clone() } else { coeff.clone() };
        let mut body = String::new();
        if !abs.is_one() {
            body.push_str(&rat(&abs));
            body.push('*');
        }
        body.push_str(&problem(p, fmt));
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

pub fn fraction(f: &MethoriousOperator, fmt: Format) -> String {
    let p = f.den();
    let conds: Vec<String> = p.conditions().iter().map(|c| condition(c, fmt)).collect();
    format!(
        "inv({}, [{}]) * ({})",
        diff_operator(p.operator(), fmt),
        conds.join(", "),
        combination(f.num(), fmt)
    )
}

pub fn methorious_function(m: &MethoriousFunction, fmt: Format) -> String {
    let mut out = expr(m.smooth_part(), fmt);
    for el in m.ideal_part() {
        out.push_str(" + ");
        let coeff = if el.coeff().is_one() {
            String::new()
        } else {
            format!("({})*", scalar(el.coeff(), fmt))
        };
        out.push_str(&format!(
            "{}[{} : {}]",
            coeff,
            expr(el.generator(), fmt),
            problem(el.problem(), fmt)
        ));
    }
    out
}

pub fn hyperfunction(h: &MethoriousHyperfunction, fmt: Format) -> String {
    if h.is_plain() {
        methorious_function(h.value(), fmt)
    } else {
        format!(
            "inv{} * ({})",
            problem(h.den(), fmt),
            methorious_function(h.value(), fmt)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use methorious::expalg::{rat as mkrat, rat_int, Character};

    #[test]
    fn renders_expressions_canonically() {
        let f = &ExpPoly::x_pow(2).scale_rat(&mkrat(1, 2)) - &ExpPoly::x().scale_rat(&mkrat(1, 2));
        assert_eq!(expr(&f, Format::Plain), "x^2/2 - x/2");
        let g = &ExpPoly::exp(rat_int(-1)) + &ExpPoly::one();
        assert_eq!(expr(&g, Format::Plain), "exp(-x) + 1");
    }

    #[test]
    fn renders_operators() {
        let p = BoundaryProblem::new(
            DiffOperator::derivation(2),
            vec![
                StieltjesCondition::evaluation(&Character::at_int(0)),
                StieltjesCondition::evaluation(&Character::at_int(1)),
            ],
        );
        let g = p.greens_operator().unwrap();
        assert_eq!(operator(&g, Format::Plain), "x*A - A*x + x*E[1]*A*(x - 1)");
        assert_eq!(problem(&p, Format::Plain), "(D^2, [E[0], E[1]])");
    }

    #[test]
    fn renders_integral_condition_sugar() {
        let c = StieltjesCondition::definite_integral(&rat_int(0), &rat_int(1));
        assert_eq!(condition(&c, Format::Plain), "I[0,1]");
    }

    #[test]
    fn latex_output() {
        let f = ExpPoly::exp(rat_int(2)).scale_rat(&mkrat(1, 2));
        assert_eq!(expr(&f, Format::Latex), "\\tfrac{1}{2} e^{2 x}");
        assert_eq!(
            operator(&IntDiffOperator::derivation(2), Format::Latex),
            "\\partial^{2}"
        );
    }
}
