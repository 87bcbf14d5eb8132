//! The shared literal grammar: integers, `s`, `+`, `-`, `*`, `/`, `^`,
//! parentheses, whitespace insignificant. Target expressions may also use
//! `t` (with integer, possibly negative, exponents), and for q = p^e with
//! e > 1 the generator of F_q is written `g`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::ratfn::RatFn;

/// An exact Laurent polynomial in t over k, the value domain of the
/// grammar. Entries are (exponent of t, nonzero coefficient).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Fq,
    terms: BTreeMap<i64, RatFn>,
}

impl LaurentPoly {
    pub fn zero(field: Fq) -> LaurentPoly {
        LaurentPoly { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: RatFn) -> LaurentPoly {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        LaurentPoly { field, terms }
    }

    pub fn monomial(c: RatFn, exp: i64) -> LaurentPoly {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { field, terms }
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatFn)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (&e, c) in &other.terms {
            let entry = terms.entry(e).or_insert_with(|| RatFn::zero(self.field));
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(&e);
            }
        }
        LaurentPoly { field: self.field, terms }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i64, RatFn> = BTreeMap::new();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                let e = e1 + e2;
                let prod = c1.mul(c2);
                let entry = acc.entry(e).or_insert_with(|| RatFn::zero(self.field));
                *entry = entry.add(&prod);
                if entry.is_zero() {
                    acc.remove(&e);
                }
            }
        }
        LaurentPoly { field: self.field, terms: acc }
    }

    /// Division is supported exactly when the divisor is a single term;
    /// this covers the full pure-s grammar (where all divisors live at
    /// t-exponent 0) plus monomial t-shifts in target expressions.
    pub fn div(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if other.terms.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if other.terms.len() != 1 {
            return Err(Error::ParseError(
                "division by a non-monomial Laurent expression".to_string(),
            ));
        }
        let (&e, c) = other.terms.iter().next().unwrap();
        let cinv = c.inv()?;
        Ok(LaurentPoly {
            field: self.field,
            terms: self.terms.iter().map(|(&k, v)| (k - e, v.mul(&cinv))).collect(),
        })
    }

    pub fn pow(&self, n: i64) -> Result<LaurentPoly> {
        if n < 0 {
            let inv = LaurentPoly::constant(RatFn::one(self.field)).div(self)?;
            return inv.pow(-n);
        }
        let mut acc = LaurentPoly::constant(RatFn::one(self.field));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Specialize to an element of k; errors if t actually occurs.
    pub fn as_ratfn(&self) -> Result<RatFn> {
        match self.terms.len() {
            0 => Ok(RatFn::zero(self.field)),
            1 => {
                let (&e, c) = self.terms.iter().next().unwrap();
                if e == 0 {
                    Ok(c.clone())
                } else {
                    Err(Error::ParseError("expression involves t".to_string()))
                }
            }
            _ => Err(Error::ParseError("expression involves t".to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(i64),
    S,
    T,
    Gen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = text[start..i]
                    .parse()
                    .map_err(|_| Error::ParseError("integer literal too large".to_string()))?;
                tokens.push(Token::Int(n));
            }
            's' => {
                tokens.push(Token::S);
                i += 1;
            }
            't' => {
                tokens.push(Token::T);
                i += 1;
            }
            'g' => {
                tokens.push(Token::Gen);
                i += 1;
            }
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            other => {
                return Err(Error::ParseError(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    field: Fq,
    tokens: &'a [Token],
    pos: usize,
    allow_t: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.bump();
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            let t_base = (base.terms.len() == 1 && base.terms.keys().next() == Some(&1))
                || base.is_zero();
            let exp = self.exponent()?;
            if exp < 0 && !(self.allow_t && t_base) {
                return Err(Error::ParseError(
                    "negative exponents are only allowed on t".to_string(),
                ));
            }
            return base.pow(exp);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg = matches!(self.peek(), Some(Token::Minus));
        if neg {
            self.bump();
        }
        match self.bump() {
            Some(Token::Int(n)) => Ok(if neg { -n } else { n }),
            _ => Err(Error::ParseError("expected integer exponent after ^".to_string())),
        }
    }

    fn primary(&mut self) -> Result<LaurentPoly> {
        match self.bump() {
            Some(Token::Int(n)) => Ok(LaurentPoly::constant(RatFn::from_int(self.field, n))),
            Some(Token::S) => Ok(LaurentPoly::constant(RatFn::s(self.field))),
            Some(Token::T) if self.allow_t => {
                Ok(LaurentPoly::monomial(RatFn::one(self.field), 1))
            }
            Some(Token::T) => {
                Err(Error::ParseError("t is not allowed in a coefficient literal".to_string()))
            }
            Some(Token::Gen) if self.field.e() > 1 => Ok(LaurentPoly::constant(
                RatFn::from_poly(crate::poly::PolyS::constant(self.field, self.field.element(self.field.p()))),
            )),
            Some(Token::Gen) => {
                Err(Error::ParseError("g requires a field extension (q = p^e, e > 1)".to_string()))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::ParseError("expected ')'".to_string())),
                }
            }
            other => Err(Error::ParseError(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse(field: Fq, text: &str, allow_t: bool) -> Result<LaurentPoly> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::ParseError("empty expression".to_string()));
    }
    let mut parser = Parser { field, tokens: &tokens, pos: 0, allow_t };
    let v = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(Error::ParseError("trailing tokens".to_string()));
    }
    Ok(v)
}

/// Parse an element of k = F_q(s).
pub fn parse_ratfn(field: Fq, text: &str) -> Result<RatFn> {
    parse(field, text, false)?.as_ratfn()
}

/// Parse a target expression in k and t (negative exponents allowed on t).
pub fn parse_laurent_poly(field: Fq, text: &str) -> Result<LaurentPoly> {
    parse(field, text, true)
}

/// Render a RatFn as a string the grammar parses back to the same value.
pub fn ratfn_to_string(value: &RatFn) -> String {
    format!("{value}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fq {
        Fq::prime(2).unwrap()
    }

    #[test]
    fn parses_rational_functions() {
        let a = parse_ratfn(f2(), "s^2 + 1").unwrap();
        let b = parse_ratfn(f2(), "(s+1)*(s+1)").unwrap();
        assert_eq!(a, b);
        let c = parse_ratfn(f2(), "(s^3 + s) / (s^2 + s + 1)").unwrap();
        assert!(!c.is_zero());
    }

    #[test]
    fn unary_minus_and_integers() {
        let f = Fq::prime(3).unwrap();
        assert_eq!(parse_ratfn(f, "-1").unwrap(), RatFn::from_int(f, 2));
        assert_eq!(parse_ratfn(f, "4").unwrap(), RatFn::one(f));
    }

    #[test]
    fn rejects_t_in_coefficients() {
        assert!(parse_ratfn(f2(), "t + 1").is_err());
    }

    #[test]
    fn parses_targets_with_negative_t_exponent() {
        let v = parse_laurent_poly(f2(), "t^-1 + 1 + t").unwrap();
        assert_eq!(v.min_exp(), Some(-1));
        assert_eq!(v.max_exp(), Some(1));
    }

    #[test]
    fn rejects_negative_s_exponent() {
        assert!(parse_ratfn(f2(), "s^-1").is_err());
        // but 1/s is fine
        assert!(parse_ratfn(f2(), "1/s").is_ok());
    }

    #[test]
    fn display_round_trips() {
        for text in ["s^2+s", "(s^3+s)/(s^2+s+1)", "1/(s+1)", "0", "1"] {
            let v = parse_ratfn(f2(), text).unwrap();
            let shown = ratfn_to_string(&v);
            assert_eq!(parse_ratfn(f2(), &shown).unwrap(), v, "{shown}");
        }
    }

    #[test]
    fn generator_symbol_in_extension() {
        let f4 = Fq::extension(2, &[1, 1, 1]).unwrap();
        let g = parse_ratfn(f4, "g").unwrap();
        // g^2 + g + 1 = 0
        assert!(g.mul(&g).add(&g).add(&RatFn::one(f4)).is_zero());
        assert!(parse_ratfn(f2(), "g").is_err());
    }
}
