//! Parsers for the text syntax shared by the command line.
//!
//! One token grammar covers everything: `D` is the derivation, `A` the
//! integral from 0, `E[a]` the evaluation at a rational point, `I[a,b]`
//! the definite integral `∫_a^b`, `x` and `exp(q*x)` build exponential
//! polynomials acting as multiplication operators, `+ - * / ^` combine
//! them (division only by invertible constants) and juxtaposition
//! composes. Expressions are operators that happen to be multiplication
//! operators; conditions are operators that happen to be boundary
//! functionals; problems are `(T, [β₁, …])` pairs; combinations are sums
//! `λ*(T,B) ± …`; fractions are `inv(S, [A]) * (combination)`.

use std::fmt;

use methorious::expalg::{rat_int, ExpPoly, Rat, Scalar};
use methorious::operators::{IntDiffOperator, StieltjesCondition};
use methorious::ore::{MethoriousOperator, ProblemCombination};
use methorious::problems::{BoundaryProblem, DiffOperator};

/// A parse failure with position and expectation information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: found {}, expected {}",
            self.line,
            self.column,
            self.found,
            self.expected.join(" | ")
        )
    }
}

impl std::error::Error for ParseError {}

pub type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> PResult<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as i64))
                            .ok_or_else(|| ParseError {
                                line: tline,
                                column: tcol,
                                expected: vec!["integer within i64 range".into()],
                                found: "overflowing literal".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Int(n), tline, tcol));
            }
            // Single-letter operator names lex as one-character tokens so
            // that juxtapositions like `E[1]AD` split correctly.
            'D' | 'A' | 'E' | 'I' => {
                chars.next();
                col += 1;
                toks.push((Tok::Ident(c.to_string()), tline, tcol));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), tline, tcol));
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    other => {
                        return Err(ParseError {
                            line,
                            column: col,
                            expected: vec!["token".into()],
                            found: format!("'{other}'"),
                        })
                    }
                };
                chars.next();
                col += 1;
                toks.push((tok, tline, tcol));
            }
        }
    }
    toks.push((Tok::Eof, line, col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: format!("{}", self.peek()),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }
}

/// Parses a rational: `int`, `int/uint`, with optional leading sign
/// handled by callers.
fn parse_rational(lx: &mut Lexer) -> PResult<Rat> {
    let neg = if *lx.peek() == Tok::Minus {
        lx.next();
        true
    } else {
        false
    };
    let Tok::Int(n) = *lx.peek() else {
        return Err(lx.error(&["integer"]));
    };
    lx.next();
    let mut out = rat_int(n);
    if *lx.peek() == Tok::Slash {
        lx.next();
        let Tok::Int(d) = *lx.peek() else {
            return Err(lx.error(&["denominator"]));
        };
        if d == 0 {
            return Err(lx.error(&["nonzero denominator"]));
        }
        lx.next();
        out /= rat_int(d);
    }
    if neg {
        out = -out;
    }
    Ok(out)
}

// Operator expression grammar.

fn parse_op_expr(lx: &mut Lexer) -> PResult<IntDiffOperator> {
    let mut acc = parse_op_term(lx)?;
    loop {
        match lx.peek() {
            Tok::Plus => {
                lx.next();
                let t = parse_op_term(lx)?;
                acc = &acc + &t;
            }
            Tok::Minus => {
                lx.next();
                let t = parse_op_term(lx)?;
                acc = &acc - &t;
            }
            _ => return Ok(acc),
        }
    }
}

fn starts_factor(tok: &Tok) -> bool {
    matches!(tok, Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
}

fn parse_op_term(lx: &mut Lexer) -> PResult<IntDiffOperator> {
    let mut negate = false;
    while *lx.peek() == Tok::Minus {
        lx.next();
        negate = !negate;
    }
    let mut acc = parse_op_power(lx)?;
    loop {
        match lx.peek() {
            Tok::Star => {
                lx.next();
                let f = parse_op_power(lx)?;
                acc = acc.mul(&f);
            }
            Tok::Slash => {
                lx.next();
                let pos = lx.here();
                let f = parse_op_power(lx)?;
                let divisor = operator_as_function(&f)
                    .and_then(|p| p.invert())
                    .ok_or(ParseError {
                        line: pos.0,
                        column: pos.1,
                        expected: vec!["invertible constant divisor".into()],
                        found: "non-invertible divisor".into(),
                    })?;
                acc = acc.mul(&IntDiffOperator::mult(divisor));
            }
            tok if starts_factor(tok) => {
                let f = parse_op_power(lx)?;
                acc = acc.mul(&f);
            }
            _ => break,
        }
    }
    if negate {
        acc = -&acc;
    }
    Ok(acc)
}

fn parse_op_power(lx: &mut Lexer) -> PResult<IntDiffOperator> {
    let base = parse_op_atom(lx)?;
    if *lx.peek() == Tok::Caret {
        lx.next();
        let Tok::Int(n) = *lx.peek() else {
            return Err(lx.error(&["nonnegative integer exponent"]));
        };
        lx.next();
        let mut out = IntDiffOperator::one();
        for _ in 0..n {
            out = out.mul(&base);
        }
        return Ok(out);
    }
    Ok(base)
}

fn parse_op_atom(lx: &mut Lexer) -> PResult<IntDiffOperator> {
    match lx.peek().clone() {
        Tok::Int(_) => {
            let q = parse_rational(lx)?;
            Ok(IntDiffOperator::mult(ExpPoly::from_rat(q)))
        }
        Tok::LParen => {
            lx.next();
            let inner = parse_op_expr(lx)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(inner)
        }
        Tok::Ident(name) => match name.as_str() {
            "D" => {
                lx.next();
                Ok(IntDiffOperator::derivation(1))
            }
            "A" => {
                lx.next();
                Ok(IntDiffOperator::integral())
            }
            "E" => {
                lx.next();
                lx.expect(Tok::LBracket, "'['")?;
                let a = parse_rational(lx)?;
                lx.expect(Tok::RBracket, "']'")?;
                Ok(IntDiffOperator::evaluation(&methorious::expalg::Character::new(a)))
            }
            "I" => {
                lx.next();
                lx.expect(Tok::LBracket, "'['")?;
                let a = parse_rational(lx)?;
                lx.expect(Tok::Comma, "','")?;
                let b = parse_rational(lx)?;
                lx.expect(Tok::RBracket, "']'")?;
                let evb = IntDiffOperator::evaluation(&methorious::expalg::Character::new(b));
                let eva = IntDiffOperator::evaluation(&methorious::expalg::Character::new(a));
                let int = IntDiffOperator::integral();
                Ok(&evb.mul(&int) - &eva.mul(&int))
            }
            "x" => {
                lx.next();
                Ok(IntDiffOperator::mult(ExpPoly::x()))
            }
            "exp" => {
                lx.next();
                lx.expect(Tok::LParen, "'('")?;
                let poly = parse_exp_argument(lx)?;
                lx.expect(Tok::RParen, "')'")?;
                Ok(IntDiffOperator::mult(poly))
            }
            _ => Err(lx.error(&["'D'", "'A'", "'E[a]'", "'I[a,b]'", "'x'", "'exp'"])),
        },
        _ => Err(lx.error(&["operator factor"])),
    }
}

/// The argument of `exp(...)`: `q*x`, `q x`, `x`, `-x`, `x/q`, or a bare
/// rational (an exponential constant).
fn parse_exp_argument(lx: &mut Lexer) -> PResult<ExpPoly> {
    let mut neg = false;
    while *lx.peek() == Tok::Minus {
        lx.next();
        neg = !neg;
    }
    let mut coeff = rat_int(1);
    let mut saw_number = false;
    if matches!(lx.peek(), Tok::Int(_)) {
        coeff = parse_rational(lx)?;
        saw_number = true;
        if *lx.peek() == Tok::Star {
            lx.next();
        }
    }
    let has_x = if let Tok::Ident(name) = lx.peek() {
        if name == "x" {
            lx.next();
            true
        } else {
            return Err(lx.error(&["'x'"]));
        }
    } else {
        false
    };
    if has_x && *lx.peek() == Tok::Slash {
        lx.next();
        let d = parse_rational(lx)?;
        coeff /= d;
    }
    if neg {
        coeff = -coeff;
    }
    if has_x {
        Ok(ExpPoly::exp(coeff))
    } else if saw_number {
        // exp of a constant: an exponential-constant scalar.
        Ok(ExpPoly::constant(Scalar::exp(coeff)))
    } else {
        Err(lx.error(&["'x'", "rational"]))
    }
}

/// Extracts the multiplied function if the operator is a pure
/// multiplication operator.
pub fn operator_as_function(op: &IntDiffOperator) -> Option<ExpPoly> {
    if !op.int_part().is_empty()
        || !op.blocal_part().is_empty()
        || !op.bglobal_part().is_empty()
    {
        return None;
    }
    if op.diff_part().is_empty() {
        return Some(ExpPoly::zero());
    }
    if op.diff_part().len() == 1 {
        if let Some(f) = op.diff_part().get(&0) {
            return Some(f.clone());
        }
    }
    None
}

/// Extracts a monic differential operator.
pub fn operator_as_diffop(op: &IntDiffOperator) -> Option<DiffOperator> {
    if !op.int_part().is_empty()
        || !op.blocal_part().is_empty()
        || !op.bglobal_part().is_empty()
        || op.diff_part().is_empty()
    {
        return None;
    }
    let order = *op.diff_part().keys().max().unwrap();
    if !op.diff_part().get(&order).is_some_and(|c| c.is_one()) {
        return None;
    }
    let coeffs: Vec<ExpPoly> = (0..order)
        .map(|i| op.diff_part().get(&i).cloned().unwrap_or_else(ExpPoly::zero))
        .collect();
    Some(DiffOperator::from_coeffs(coeffs))
}

fn finish<T>(lx: &mut Lexer, value: T) -> PResult<T> {
    if *lx.peek() == Tok::Eof {
        Ok(value)
    } else {
        Err(lx.error(&["end of input"]))
    }
}

/// Parses an integro-differential operator.
pub fn parse_operator(src: &str) -> PResult<IntDiffOperator> {
    let mut lx = lex(src)?;
    let op = parse_op_expr(&mut lx)?;
    finish(&mut lx, op)
}

/// Parses an exponential polynomial (an operator that multiplies).
pub fn parse_expr(src: &str) -> PResult<ExpPoly> {
    let mut lx = lex(src)?;
    let op = parse_op_expr(&mut lx)?;
    let op = finish(&mut lx, op)?;
    operator_as_function(&op).ok_or(ParseError {
        line: 1,
        column: 1,
        expected: vec!["an expression without D/A/E[a] parts".into()],
        found: "an operator".into(),
    })
}

/// Parses a scalar constant.
pub fn parse_scalar(src: &str) -> PResult<Scalar> {
    let poly = parse_expr(src)?;
    poly.as_scalar().ok_or(ParseError {
        line: 1,
        column: 1,
        expected: vec!["a constant (no 'x')".into()],
        found: "a non-constant expression".into(),
    })
}

/// Parses a boundary condition (an operator in the boundary ideal with
/// constant coefficients).
pub fn parse_condition(src: &str) -> PResult<StieltjesCondition> {
    let mut lx = lex(src)?;
    let op = parse_op_expr(&mut lx)?;
    let op = finish(&mut lx, op)?;
    condition_from_operator(&op)
}

fn condition_from_operator(op: &IntDiffOperator) -> PResult<StieltjesCondition> {
    StieltjesCondition::from_operator(op).ok_or(ParseError {
        line: 1,
        column: 1,
        expected: vec!["a boundary condition (combination of E[a], E[a]*D^k, E[a]*A*f)".into()],
        found: "an operator with differential or integral part".into(),
    })
}

fn parse_problem_body(lx: &mut Lexer) -> PResult<BoundaryProblem> {
    // operator ',' '[' conditions ']'
    let op = parse_problem_operator(lx)?;
    lx.expect(Tok::Comma, "','")?;
    lx.expect(Tok::LBracket, "'['")?;
    let mut conds = Vec::new();
    if *lx.peek() != Tok::RBracket {
        loop {
            let c = parse_op_expr(lx)?;
            conds.push(condition_from_operator(&c)?);
            if *lx.peek() == Tok::Comma {
                lx.next();
            } else {
                break;
            }
        }
    }
    lx.expect(Tok::RBracket, "']'")?;
    Ok(BoundaryProblem::new(op, conds))
}

fn parse_problem_operator(lx: &mut Lexer) -> PResult<DiffOperator> {
    let pos = lx.here();
    let op = parse_op_expr(lx)?;
    operator_as_diffop(&op).ok_or(ParseError {
        line: pos.0,
        column: pos.1,
        expected: vec!["a monic differential operator".into()],
        found: "a non-monic or non-differential operator".into(),
    })
}

/// Parses a boundary problem literal `(T, [β, …])`.
pub fn parse_problem(src: &str) -> PResult<BoundaryProblem> {
    let mut lx = lex(src)?;
    lx.expect(Tok::LParen, "'('")?;
    let p = parse_problem_body(&mut lx)?;
    lx.expect(Tok::RParen, "')'")?;
    finish(&mut lx, p)
}

fn parse_combination_tokens(lx: &mut Lexer) -> PResult<ProblemCombination> {
    let mut out = ProblemCombination::zero();
    let mut first = true;
    loop {
        let sign = match lx.peek() {
            Tok::Minus => {
                lx.next();
                -rat_int(1)
            }
            Tok::Plus => {
                lx.next();
                rat_int(1)
            }
            _ if first => rat_int(1),
            Tok::Eof | Tok::RParen => break,
            _ => return Err(lx.error(&["'+'", "'-'", "end of combination"])),
        };
        first = false;
        // optional rational coefficient with '*'
        let coeff = if matches!(lx.peek(), Tok::Int(_)) {
            let q = parse_rational(lx)?;
            lx.expect(Tok::Star, "'*'")?;
            q
        } else {
            rat_int(1)
        };
        lx.expect(Tok::LParen, "'(' starting a problem")?;
        let pos = lx.here();
        let p = parse_problem_body(lx)?;
        lx.expect(Tok::RParen, "')'")?;
        out = out.with_term(sign * coeff, p).map_err(|_| ParseError {
            line: pos.0,
            column: pos.1,
            expected: vec!["a regular boundary problem".into()],
            found: "a singular problem".into(),
        })?;
        if matches!(lx.peek(), Tok::Eof | Tok::RParen) {
            break;
        }
    }
    Ok(out)
}

/// Parses a combination `λ1*(T1,[…]) ± λ2*(T2,[…]) ± …` of regular
/// problems.
pub fn parse_combination(src: &str) -> PResult<ProblemCombination> {
    let mut lx = lex(src)?;
    let c = parse_combination_tokens(&mut lx)?;
    finish(&mut lx, c)
}

/// Parses a methorious operator `inv(S, [A]) * (combination)`; a bare
/// combination means a trivial denominator.
pub fn parse_fraction(src: &str) -> PResult<MethoriousOperator> {
    let mut lx = lex(src)?;
    let den = if matches!(lx.peek(), Tok::Ident(name) if name == "inv") {
        lx.next();
        lx.expect(Tok::LParen, "'('")?;
        let p = parse_problem_body(&mut lx)?;
        lx.expect(Tok::RParen, "')'")?;
        if *lx.peek() == Tok::Star {
            lx.next();
        }
        Some(p)
    } else {
        None
    };
    let num = match lx.peek() {
        Tok::Eof if den.is_some() => {
            ProblemCombination::from_problem(BoundaryProblem::neutral()).expect("neutral")
        }
        Tok::LParen => {
            // Either "(combination)" or a bare single problem "(T, [..])".
            let save = lx.pos;
            lx.next();
            if *lx.peek() == Tok::LParen || matches!(lx.peek(), Tok::Int(_) | Tok::Minus | Tok::Plus)
            {
                // parenthesized combination
                let c = parse_combination_tokens(&mut lx)?;
                lx.expect(Tok::RParen, "')'")?;
                c
            } else {
                lx.pos = save;
                parse_combination_tokens(&mut lx)?
            }
        }
        _ => parse_combination_tokens(&mut lx)?,
    };
    let num = finish(&mut lx, num)?;
    let den = den.unwrap_or_else(BoundaryProblem::neutral);
    MethoriousOperator::new(den, num).map_err(|_| ParseError {
        line: 1,
        column: 1,
        expected: vec!["a regular denominator problem".into()],
        found: "a singular problem".into(),
    })
}
