//! A small expression reader for the notation used in data files:
//! `1+2xq+2xq^2+x^2q^3`, `(1-xq^{6})^2`, `q^{3n+8}`, `p_3`.
//!
//! Adjacent factors multiply. A bare exponent is one token (`q^12` is
//! `q^{12}`); braces or parentheses delimit longer exponents. Names are single
//! letters, optionally subscripted (`p_3`, `r_{1}`), unless the caller
//! supplies longer names that should be matched greedily.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Int(BigInt),
    Name(String),
    Op(char),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

pub fn tokenize(src: &str, long_names: &[&str]) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Token::Int(src[start..i].parse().unwrap())));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut best: Option<&str> = None;
            for name in long_names {
                if src[i..].starts_with(name) && best.is_none_or(|b| name.len() > b.len()) {
                    best = Some(name);
                }
            }
            if let Some(name) = best {
                out.push((i, Token::Name(name.to_string())));
                i += name.len();
                continue 'outer;
            }
            let start = i;
            i += 1;
            if i + 1 < bytes.len() && bytes[i] == b'_' {
                if bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let name = format!("{}_{}", c, &src[start + 2..i]);
                    out.push((start, Token::Name(name)));
                    continue;
                }
                if bytes[i + 1] == b'{' {
                    let close = src[i..].find('}').ok_or(Error::Parse { pos: i, msg: "unclosed subscript".into() })?;
                    let sub = src[i + 2..i + close].trim();
                    if sub.is_empty() || !sub.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(Error::Parse { pos: i, msg: format!("bad subscript {sub:?}") });
                    }
                    out.push((start, Token::Name(format!("{c}_{sub}"))));
                    i += close + 1;
                    continue;
                }
            }
            out.push((start, Token::Name(c.to_string())));
            continue;
        }
        if "+-*^(){}".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
            continue;
        }
        return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Token)],
    i: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Token::Op(c)) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut neg = false;
        match self.peek() {
            Some(Token::Op('-')) => {
                self.i += 1;
                neg = true;
            }
            Some(Token::Op('+')) => self.i += 1,
            _ => {}
        }
        loop {
            let t = self.product()?;
            terms.push(if neg { Expr::Neg(Box::new(t)) } else { t });
            match self.peek() {
                Some(Token::Op('+')) => neg = false,
                Some(Token::Op('-')) => neg = true,
                _ => break,
            }
            self.i += 1;
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut fs = vec![self.power()?];
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.i += 1;
                    fs.push(self.power()?);
                }
                Some(Token::Int(_)) | Some(Token::Name(_)) | Some(Token::Op('(')) | Some(Token::Op('{')) => {
                    fs.push(self.power()?)
                }
                _ => break,
            }
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Product(fs) })
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Op('^')) {
            self.i += 1;
            let exp = match self.peek() {
                Some(Token::Op('-')) => {
                    self.i += 1;
                    Expr::Neg(Box::new(self.atom()?))
                }
                _ => self.atom()?,
            };
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.i += 1;
                Ok(Expr::Int(n))
            }
            Some(Token::Name(s)) => {
                self.i += 1;
                Ok(Expr::Name(s))
            }
            Some(Token::Op('(')) => {
                self.i += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Token::Op('{')) => {
                self.i += 1;
                let e = self.sum()?;
                self.expect('}')?;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an expression into a syntax tree.
pub fn parse_expr(src: &str, long_names: &[&str]) -> Result<Expr> {
    let toks = tokenize(src, long_names)?;
    let mut p = Parser { toks: &toks, i: 0, end: src.len() };
    let e = p.sum()?;
    if p.i != toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Evaluate an integer-valued expression (no names).
pub fn eval_int(e: &Expr) -> Result<i64> {
    let v = match e {
        Expr::Int(n) => n.to_i64().ok_or_else(|| Error::Parse { pos: 0, msg: "integer too large".into() })?,
        Expr::Name(s) => return Err(Error::Parse { pos: 0, msg: format!("expected an integer, found {s}") }),
        Expr::Neg(x) => -eval_int(x)?,
        Expr::Sum(ts) => ts.iter().map(eval_int).sum::<Result<i64>>()?,
        Expr::Product(fs) => fs.iter().map(eval_int).product::<Result<i64>>()?,
        Expr::Pow(b, x) => {
            let x = eval_int(x)?;
            if x < 0 {
                return Err(Error::Parse { pos: 0, msg: "negative integer power".into() });
            }
            eval_int(b)?.pow(x as u32)
        }
    };
    Ok(v)
}

fn to_poly(e: &Expr, template: &LaurentPoly) -> Result<LaurentPoly> {
    Ok(match e {
        Expr::Int(n) => template.constant_like(n.clone()),
        Expr::Name(s) => template
            .var_like(s)
            .map_err(|_| Error::Parse { pos: 0, msg: format!("unknown variable {s} (ring {:?})", template.vars()) })?,
        Expr::Neg(x) => -to_poly(x, template)?,
        Expr::Sum(ts) => {
            let mut acc = template.zero_like();
            for t in ts {
                acc = acc.checked_add(&to_poly(t, template)?)?;
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = template.one_like();
            for f in fs {
                acc = acc.checked_mul(&to_poly(f, template)?)?;
            }
            acc
        }
        Expr::Pow(b, x) => {
            let k = eval_int(x)?;
            let base = to_poly(b, template)?;
            if k >= 0 {
                base.pow(k as u32)
            } else if base.is_monomial() {
                let (e, c) = base.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
                if !c.is_one() && c != -BigInt::one() {
                    return Err(Error::Parse { pos: 0, msg: "negative power of a non-unit monomial".into() });
                }
                let inv = template.monomial_like(e.iter().map(|x| -x).collect(), c);
                inv.pow((-k) as u32)
            } else {
                return Err(Error::Parse { pos: 0, msg: "negative power of a non-monomial".into() });
            }
        }
    })
}

/// Parse a Laurent polynomial over `vars`.
///
/// ```
/// use bipartid::algebra::parse_poly;
/// let p = parse_poly("1+2xq+2xq^2+x^2q^3", &["x", "q"]).unwrap();
/// assert_eq!(p.num_terms(), 4);
/// ```
pub fn parse_poly(src: &str, vars: &[&str]) -> Result<LaurentPoly> {
    let long: Vec<&str> = vars.iter().copied().filter(|v| v.len() > 1).collect();
    let e = parse_expr(src, &long)?;
    let template = LaurentPoly::zero(vars);
    to_poly(&e, &template)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_products_and_powers() {
        let p = parse_poly("x^2q^7(2+2q)", &["x", "q"]).unwrap();
        let expect = LaurentPoly::from_terms(
            &["x", "q"],
            [(vec![2, 7], BigInt::from(2)), (vec![2, 8], BigInt::from(2))],
        )
        .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn braces_and_multi_digit_exponents() {
        let a = parse_poly("x^4q^{21}(1-xq^6)^2", &["x", "q"]).unwrap();
        let b = parse_poly("x^4*q^21*(1-x*q^6)*(1-x*q^6)", &["x", "q"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negative_exponents_and_long_names() {
        let p = parse_poly("v1^-1*q^{-2}K1", &["q", "v1", "K1"]).unwrap();
        let expect = LaurentPoly::monomial(&["q", "v1", "K1"], vec![-2, -1, 1], BigInt::one());
        assert_eq!(p, expect);
    }

    #[test]
    fn subscripted_names_tokenize_whole() {
        let t = tokenize("p_3+r_{12}", &[]).unwrap();
        assert_eq!(t[0].1, Token::Name("p_3".into()));
        assert_eq!(t[2].1, Token::Name("r_12".into()));
    }

    #[test]
    fn unknown_variable_is_an_error() {
        assert!(matches!(parse_poly("x+y", &["x"]), Err(Error::Parse { .. })));
    }
}
