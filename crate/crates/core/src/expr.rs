//! Expression grammar shared by scalars and noncommutative relations.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := int | name | '(' expr ')'
//! ```
//! Names are parameters or generators; a name may carry a bracketed index
//! suffix such as `z[1,2]`.

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

#[derive(Clone, Debug)]
pub enum Expr {
    Int(BigInt),
    Name(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Scans one name starting at `i`; returns the end offset.
pub fn scan_name(chars: &[char], mut i: usize) -> usize {
    if i >= chars.len() || !is_name_start(chars[i]) {
        return i;
    }
    i += 1;
    loop {
        if i < chars.len() && is_name_char(chars[i]) {
            i += 1;
        } else if i < chars.len() && chars[i] == '[' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == ',') {
                j += 1;
            }
            if j < chars.len() && chars[j] == ']' {
                i = j + 1;
            } else {
                return i;
            }
        } else {
            return i;
        }
    }
}

pub fn is_valid_name(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    !chars.is_empty() && scan_name(&chars, 0) == chars.len()
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[s..i].iter().collect();
            out.push((Tok::Int(digits.parse().unwrap()), s + 1));
        } else if is_name_start(c) {
            let s = i;
            i = scan_name(&chars, i);
            out.push((Tok::Name(chars[s..i].iter().collect()), s + 1));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i + 1));
            i += 1;
        } else {
            return Err(Error::syntax(1, i + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let neg = self.eat('-');
        let mut e = self.term()?;
        if neg {
            e = Expr::Neg(Box::new(e));
        }
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let col = self.col();
                self.pos += 1;
                e = Expr::Div(Box::new(e), Box::new(self.factor()?), col);
            } else {
                return Ok(e);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let a = self.atom()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            let col = self.col();
            self.pos += 1;
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let n: i64 = n
                        .try_into()
                        .map_err(|_| Error::syntax(1, col, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(a), if neg { -n } else { n }, col))
                }
                _ => Err(Error::syntax(1, self.col(), "expected integer exponent")),
            }
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                Ok(Expr::Name(s, col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::syntax(1, self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(Error::syntax(1, col, format!("unexpected `{c}`"))),
            None => Err(Error::syntax(1, col, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end_col: text.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::syntax(1, p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

pub fn eval_scalar(e: &Expr, field: &FieldSpec) -> Result<Scalar> {
    Ok(match e {
        Expr::Int(n) => Scalar::rational(BigRational::from_integer(n.clone())),
        Expr::Name(s, _) => field.param(s)?,
        Expr::Neg(a) => -eval_scalar(a, field)?,
        Expr::Add(a, b) => eval_scalar(a, field)? + eval_scalar(b, field)?,
        Expr::Sub(a, b) => eval_scalar(a, field)? - eval_scalar(b, field)?,
        Expr::Mul(a, b) => eval_scalar(a, field)? * eval_scalar(b, field)?,
        Expr::Div(a, b, _) => eval_scalar(a, field)?.checked_div(&eval_scalar(b, field)?)?,
        Expr::Pow(a, n, _) => eval_scalar(a, field)?.pow(*n)?,
    })
}

pub fn parse_scalar(text: &str, field: &FieldSpec) -> Result<Scalar> {
    eval_scalar(&parse_expr(text)?, field)
}

/// Noncommutative polynomial: words in generator indices with scalar
/// coefficients; no zero coefficients are stored.
pub type NcPoly = BTreeMap<Vec<usize>, Scalar>;

fn nc_add(mut a: NcPoly, b: NcPoly, negate: bool) -> NcPoly {
    for (w, c) in b {
        let c = if negate { -c } else { c };
        let e = a.entry(w).or_default();
        *e = &*e + &c;
    }
    a.retain(|_, c| !c.is_zero());
    a
}

fn nc_mul(a: &NcPoly, b: &NcPoly) -> NcPoly {
    let mut out = NcPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let e = out.entry(w).or_default();
            *e = &*e + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn nc_scalar(p: &NcPoly) -> Option<Scalar> {
    match p.len() {
        0 => Some(Scalar::zero()),
        1 => p.get(&Vec::new()).cloned(),
        _ => None,
    }
}

pub fn eval_nc(e: &Expr, field: &FieldSpec, gens: &[String]) -> Result<NcPoly> {
    let constant = |s: Scalar| {
        let mut p = NcPoly::new();
        if !s.is_zero() {
            p.insert(Vec::new(), s);
        }
        p
    };
    Ok(match e {
        Expr::Int(n) => constant(Scalar::rational(BigRational::from_integer(n.clone()))),
        Expr::Name(s, _) => {
            if let Some(i) = gens.iter().position(|g| g == s) {
                let mut p = NcPoly::new();
                p.insert(vec![i], Scalar::one());
                p
            } else if field.index_of(s).is_some() {
                constant(field.param(s)?)
            } else {
                return Err(Error::UnknownGenerator(s.clone()));
            }
        }
        Expr::Neg(a) => nc_add(NcPoly::new(), eval_nc(a, field, gens)?, true),
        Expr::Add(a, b) => nc_add(eval_nc(a, field, gens)?, eval_nc(b, field, gens)?, false),
        Expr::Sub(a, b) => nc_add(eval_nc(a, field, gens)?, eval_nc(b, field, gens)?, true),
        Expr::Mul(a, b) => nc_mul(&eval_nc(a, field, gens)?, &eval_nc(b, field, gens)?),
        Expr::Div(a, b, col) => {
            let d = nc_scalar(&eval_nc(b, field, gens)?)
                .ok_or_else(|| Error::syntax(1, *col, "division by a non-scalar"))?;
            let inv = d.checked_inv()?;
            eval_nc(a, field, gens)?.into_iter().map(|(w, c)| (w, &c * &inv)).collect()
        }
        Expr::Pow(a, n, col) => {
            let base = eval_nc(a, field, gens)?;
            if let Some(s) = nc_scalar(&base) {
                constant(s.pow(*n)?)
            } else if *n < 0 {
                return Err(Error::syntax(1, *col, "negative power of a non-scalar"));
            } else {
                let mut out = constant(Scalar::one());
                for _ in 0..*n {
                    out = nc_mul(&out, &base);
                }
                out
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::new(&["q"]).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let f = q();
        assert_eq!(parse_scalar("(q^2-1)/(q-1)", &f).unwrap(), parse_scalar("q+1", &f).unwrap());
        assert_eq!(parse_scalar("1/2 + 1/3", &f).unwrap(), Scalar::ratio(5, 6));
        assert_eq!(parse_scalar("1/(q-q)", &f), Err(Error::DivisionByZero));
        assert_eq!(parse_scalar("q^-2", &f).unwrap(), parse_scalar("1/q^2", &f).unwrap());
    }

    #[test]
    fn scalar_errors() {
        let f = q();
        assert!(matches!(parse_scalar("r+1", &f), Err(Error::UnknownParameter(_))));
        assert!(matches!(parse_scalar("q+", &f), Err(Error::Syntax { col: 3, .. })));
        assert!(matches!(parse_scalar("q $ 1", &f), Err(Error::Syntax { col: 3, .. })));
    }

    #[test]
    fn relation_words() {
        let f = q();
        let gens = vec!["x".to_string(), "y".to_string()];
        let p = eval_nc(&parse_expr("x*y - q*y*x").unwrap(), &f, &gens).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[&vec![0, 1]], Scalar::one());
        assert_eq!(p[&vec![1, 0]], -f.param("q").unwrap());
        assert!(matches!(
            eval_nc(&parse_expr("x*w").unwrap(), &f, &gens),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn bracket_names() {
        assert!(is_valid_name("z[1,2]"));
        assert!(is_valid_name("z[1,2]_x"));
        assert!(!is_valid_name("1z"));
    }
}
