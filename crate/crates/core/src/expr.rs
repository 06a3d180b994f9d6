//! A small expression language for test functions with exact jets.
//!
//! Grammar (standard precedence, left associativity):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' nat)*
//! atom   := number | 'sin'|'cos'|'exp' '(' expr ')' | 'x'<k> | '(' expr ')'
//! ```
//!
//! Variables are `x1..xd`. Powers take non-negative integer exponents only,
//! which keeps every jet coefficient-exact.
//!
//! Jets are computed by truncated-Taylor passes along integer directions
//! `c ≤ α` and assembled through the polarization identity
//! `∂^α γ(x) = Σ_{0≤c≤α} (-1)^{|α|-|c|} Π_i C(α_i, c_i) · S_c[|α|]`,
//! where `S_c` is the series of `t ↦ γ(x + t c)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::calculus::jet::Jet;
use crate::calculus::multi_index::{multi_indices, MultiIndex, MAX_ORDER};
use crate::calculus::series::Series;
use crate::domains::BoxUnion;
use crate::error::{Error, Result};
use crate::provider::JetProvider;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// 0-based variable index
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    /// Highest variable index used, plus one.
    pub fn min_dim(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.min_dim().max(b.min_dim())
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.min_dim()
            }
        }
    }

    /// Series of `t ↦ expr(x + t dir)` truncated at order `k`.
    pub fn series(&self, x: &[f64], dir: &[f64], k: usize) -> Result<Series> {
        match self {
            Expr::Const(c) => Ok(Series::constant(*c, k)),
            Expr::Var(i) => {
                let mut coeffs = vec![0.0; k + 1];
                coeffs[0] = x[*i];
                if k >= 1 {
                    coeffs[1] = dir[*i];
                }
                Ok(Series::from_coeffs(coeffs))
            }
            Expr::Add(a, b) => Ok(a.series(x, dir, k)?.add(&b.series(x, dir, k)?)),
            Expr::Sub(a, b) => Ok(a.series(x, dir, k)?.sub(&b.series(x, dir, k)?)),
            Expr::Mul(a, b) => Ok(a.series(x, dir, k)?.mul(&b.series(x, dir, k)?)),
            Expr::Div(a, b) => {
                let den = b.series(x, dir, k)?;
                if den.value() == 0.0 {
                    return Err(Error::Singularity(format!(
                        "division by zero in `{b}` on the evaluation path"
                    )));
                }
                a.series(x, dir, k)?.div(&den)
            }
            Expr::Pow(a, e) => Ok(a.series(x, dir, k)?.powi(*e)),
            Expr::Neg(a) => Ok(a.series(x, dir, k)?.neg()),
            Expr::Sin(a) => Ok(a.series(x, dir, k)?.sin()),
            Expr::Cos(a) => Ok(a.series(x, dir, k)?.cos()),
            Expr::Exp(a) => Ok(a.series(x, dir, k)?.exp()),
        }
    }

    /// Plain value at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        Ok(self.series(x, &vec![0.0; x.len()], 0)?.value())
    }

    /// Exact partial derivatives up to order `k` at `x` (scalar jet).
    pub fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let d = x.len();
        // one series pass per direction c with |c| <= k
        let mut passes: BTreeMap<MultiIndex, Series> = BTreeMap::new();
        for c in multi_indices(d, k) {
            let dir: Vec<f64> = c.entries().iter().map(|&e| e as f64).collect();
            passes.insert(c, self.series(x, &dir, k)?);
        }
        let mut table = BTreeMap::new();
        for alpha in multi_indices(d, k) {
            let j = alpha.order();
            let mut acc = 0.0;
            for (c, series) in &passes {
                if !alpha.dominates(c) {
                    continue;
                }
                let sign = if (j - c.order()) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * alpha.binomial(c) * series.coeff(j);
            }
            table.insert(alpha, vec![acc]);
        }
        Jet::new(x.to_vec(), k, table)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence levels: add=0, mul=1, unary=2, pow=3, atom=4
        fn go(e: &Expr, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
            let prec = match e {
                Expr::Add(..) | Expr::Sub(..) => 0,
                Expr::Mul(..) | Expr::Div(..) => 1,
                Expr::Neg(..) => 2,
                Expr::Pow(..) => 3,
                _ => 4,
            };
            let need = prec < parent;
            if need {
                write!(f, "(")?;
            }
            match e {
                Expr::Const(c) => write!(f, "{c}")?,
                Expr::Var(i) => write!(f, "x{}", i + 1)?,
                Expr::Add(a, b) => {
                    go(a, f, 0)?;
                    write!(f, "+")?;
                    go(b, f, 1)?;
                }
                Expr::Sub(a, b) => {
                    go(a, f, 0)?;
                    write!(f, "-")?;
                    go(b, f, 1)?;
                }
                Expr::Mul(a, b) => {
                    go(a, f, 1)?;
                    write!(f, "*")?;
                    go(b, f, 2)?;
                }
                Expr::Div(a, b) => {
                    go(a, f, 1)?;
                    write!(f, "/")?;
                    go(b, f, 2)?;
                }
                Expr::Neg(a) => {
                    write!(f, "-")?;
                    go(a, f, 2)?;
                }
                Expr::Pow(a, e2) => {
                    go(a, f, 4)?;
                    write!(f, "^{e2}")?;
                }
                Expr::Sin(a) => {
                    write!(f, "sin(")?;
                    go(a, f, 0)?;
                    write!(f, ")")?;
                }
                Expr::Cos(a) => {
                    write!(f, "cos(")?;
                    go(a, f, 0)?;
                    write!(f, ")")?;
                }
                Expr::Exp(a) => {
                    write!(f, "exp(")?;
                    go(a, f, 0)?;
                    write!(f, ")")?;
                }
            }
            if need {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, f, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i], b'0'..=b'9' | b'.') {
                    i += 1;
                }
                // exponent part
                if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s = &text[start..i];
                let v = s.parse::<f64>().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{s}`"),
                })?;
                out.push((Tok::Num(v), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let off = self.offset();
            match self.bump() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    base = Expr::Pow(Box::new(base), v as u32);
                }
                _ => {
                    return Err(Error::Syntax {
                        offset: off,
                        message: "expected a non-negative integer exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "sin" | "cos" | "exp" => {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(match name.as_str() {
                        "sin" => Expr::Sin(Box::new(inner)),
                        "cos" => Expr::Cos(Box::new(inner)),
                        _ => Expr::Exp(Box::new(inner)),
                    })
                }
                _ => {
                    if let Some(rest) = name.strip_prefix('x') {
                        if let Ok(idx) = rest.parse::<usize>() {
                            if idx >= 1 {
                                return Ok(Expr::Var(idx - 1));
                            }
                        }
                    }
                    Err(Error::UnknownIdentifier { name, offset: off })
                }
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Error::Syntax {
                offset: off,
                message: "expected a number, variable, function, or `(`".into(),
            }),
        }
    }
}

/// Parse an expression string.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
        text,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Syntax {
            offset: p.offset(),
            message: "trailing input".into(),
        });
    }
    let _ = p.text;
    Ok(e)
}

/// A vector-valued expression function implementing the jet contract.
pub struct ExprFunction {
    exprs: Vec<Expr>,
    dim: usize,
    order: usize,
    domain: BoxUnion,
}

impl ExprFunction {
    pub fn new(exprs: Vec<Expr>, dim: usize, domain: BoxUnion) -> Result<Self> {
        let need = exprs.iter().map(|e| e.min_dim()).max().unwrap_or(0);
        if need > dim {
            return Err(Error::Precondition(format!(
                "expression uses x{need} but the domain dimension is {dim}"
            )));
        }
        if domain.dim() != dim {
            return Err(Error::Precondition(format!(
                "domain dimension {} does not match dim {dim}",
                domain.dim()
            )));
        }
        Ok(ExprFunction {
            exprs,
            dim,
            order: MAX_ORDER,
            domain,
        })
    }

    pub fn parse_components(texts: &[&str], dim: usize, domain: BoxUnion) -> Result<Self> {
        let exprs = texts.iter().map(|t| parse(t)).collect::<Result<Vec<_>>>()?;
        ExprFunction::new(exprs, dim, domain)
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    pub fn into_arc(self) -> Arc<dyn JetProvider> {
        Arc::new(self)
    }
}

impl JetProvider for ExprFunction {
    fn dim(&self) -> usize {
        self.dim
    }
    fn target_dim(&self) -> usize {
        self.exprs.len()
    }
    fn order(&self) -> usize {
        self.order
    }
    fn domain(&self) -> &BoxUnion {
        &self.domain
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let jets = self
            .exprs
            .iter()
            .map(|e| e.jet(x, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Jet::stack(&jets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mi(e: &[u8]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn parse_shape() {
        let e = parse("sin(x1+2*x2)").unwrap();
        assert_eq!(
            e,
            Expr::Sin(Box::new(Expr::Add(
                Box::new(Expr::Var(0)),
                Box::new(Expr::Mul(
                    Box::new(Expr::Const(2.0)),
                    Box::new(Expr::Var(1))
                ))
            )))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("1+2*3").unwrap().eval(&[]).unwrap(), 7.0);
        assert_eq!(parse("2*3^2").unwrap().eval(&[]).unwrap(), 18.0);
        assert_eq!(parse("-2^2").unwrap().eval(&[]).unwrap(), -4.0);
        assert_eq!(parse("(1+2)*3").unwrap().eval(&[]).unwrap(), 9.0);
        assert_eq!(parse("8/4/2").unwrap().eval(&[]).unwrap(), 1.0);
    }

    #[test]
    fn syntax_error_offsets() {
        match parse("x1/") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("x1 + y") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "y");
                assert_eq!(offset, 5);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn jet_of_sine_sum() {
        // sin(x1+2*x2) at (0,0), k=2
        let e = parse("sin(x1+2*x2)").unwrap();
        let j = e.jet(&[0.0, 0.0], 2).unwrap();
        assert_abs_diff_eq!(j.value()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j.partial(&mi(&[1, 0]))[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.partial(&mi(&[0, 1]))[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.partial(&mi(&[2, 0]))[0], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(j.partial(&mi(&[1, 1]))[0], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(j.partial(&mi(&[0, 2]))[0], 0.0, epsilon = 1e-13);
    }

    #[test]
    fn jet_of_square() {
        let e = parse("x1^2").unwrap();
        let j = e.jet(&[3.0], 2).unwrap();
        assert_eq!(j.value()[0], 9.0);
        assert_eq!(j.partial(&mi(&[1]))[0], 6.0);
        assert_eq!(j.partial(&mi(&[2]))[0], 2.0);
    }

    #[test]
    fn jet_of_product_rule_case() {
        // exp(x1)*x2 at (1,2), k=1 -> (2e, 2e, e)
        let e = parse("exp(x1)*x2").unwrap();
        let j = e.jet(&[1.0, 2.0], 1).unwrap();
        let ev = 1f64.exp();
        assert_abs_diff_eq!(j.value()[0], 2.0 * ev, epsilon = 1e-13);
        assert_abs_diff_eq!(j.partial(&mi(&[1, 0]))[0], 2.0 * ev, epsilon = 1e-13);
        assert_abs_diff_eq!(j.partial(&mi(&[0, 1]))[0], ev, epsilon = 1e-13);
    }

    #[test]
    fn division_by_zero_reports_subexpression() {
        let e = parse("exp(x1)/x2").unwrap();
        match e.jet(&[0.0, 0.0], 1) {
            Err(Error::Singularity(msg)) => assert!(msg.contains("x2")),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "sin(x1+2*x2)",
            "1+2*3",
            "x1^2-3*x2/(x1+5)",
            "-x1^3",
            "exp(x1)*cos(x2)-4",
            "2-(3-x1)",
            "1-2-3",
            "x1/(x2*x1)",
        ] {
            let e1 = parse(src).unwrap();
            let printed = e1.to_string();
            let e2 = parse(&printed).unwrap();
            assert_eq!(e1, e2, "round trip through `{printed}`");
        }
    }

    #[test]
    fn jets_match_central_differences() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        let exprs = ["sin(x1)*exp(x2)", "x1^3+x2^2*x1", "cos(x1*x2)"];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for src in exprs {
            let e = parse(src).unwrap();
            for _ in 0..50 {
                let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.5..1.5)).collect();
                let jet = e.jet(&x, 1).unwrap();
                let h = 1e-5;
                for axis in 0..2 {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[axis] += h;
                    xm[axis] -= h;
                    let fd = (e.eval(&xp).unwrap() - e.eval(&xm).unwrap()) / (2.0 * h);
                    let exact = jet.partial(&MultiIndex::unit(2, axis))[0];
                    let scale = exact.abs().max(1.0);
                    assert!(
                        (fd - exact).abs() / scale < 1e-6,
                        "{src} at {x:?}: fd {fd} vs exact {exact}"
                    );
                }
            }
        }
    }
}
