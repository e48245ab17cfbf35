//! Recursive-descent parser for the polynomial text syntax.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Division is only allowed by nonzero constants, so `3/4*x` and `x/2` are
//! accepted while `1/x` is not.

use super::poly::{Ambient, MPoly};
use super::scalar::Field;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(AlgebraError::Parse {
                    offset: start,
                    expected: vec!["integer", "identifier", "operator", "parenthesis"],
                    found: format!("character `{}`", text[start..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ambient: &'a Ambient,
    _field: std::marker::PhantomData<F>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> AlgebraError {
        AlgebraError::Parse { offset: self.offset(), expected, found: self.peek().describe() }
    }

    fn expr(&mut self) -> Result<MPoly<F>, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<F>, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    if !rhs.is_constant() {
                        return Err(AlgebraError::Parse {
                            offset: at,
                            expected: vec!["nonzero constant divisor"],
                            found: format!("`{rhs}`"),
                        });
                    }
                    let c = rhs.constant_term();
                    if c.is_zero() {
                        return Err(AlgebraError::Parse {
                            offset: at,
                            expected: vec!["nonzero constant divisor"],
                            found: "0".into(),
                        });
                    }
                    acc = acc.scale(&c.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly<F>, AlgebraError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly<F>, AlgebraError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Int(s) => {
                    let e: u32 = s.parse().map_err(|_| AlgebraError::Parse {
                        offset: self.toks[self.pos - 1].0,
                        expected: vec!["exponent below 2^32"],
                        found: s.clone(),
                    })?;
                    Ok(base.pow(e))
                }
                _ => {
                    self.pos -= 1;
                    Err(self.error(vec!["non-negative integer exponent"]))
                }
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly<F>, AlgebraError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                let ten = F::from_u32(10).expect("10 in field");
                let mut v = F::zero();
                for d in s.bytes() {
                    v = v * ten.clone() + F::from_u8(d - b'0').expect("digit in field");
                }
                Ok(MPoly::constant(self.ambient, v))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.ambient.index_of(&name) {
                    Some(i) => Ok(MPoly::var(self.ambient, i)),
                    None => Err(AlgebraError::UnknownVariable { name, offset: at }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(vec!["`)`", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(vec!["integer", "identifier", "`(`", "`-`"])),
        }
    }
}

/// Parses `text` into a polynomial over `ambient`.
pub fn parse_poly<F: Field>(text: &str, ambient: &Ambient) -> Result<MPoly<F>, AlgebraError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ambient, _field: std::marker::PhantomData };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(vec!["operator", "end of input"]));
    }
    Ok(out)
}

/// Parses a rational literal such as `-3/4` or `5`.
pub fn parse_rational(text: &str) -> Result<crate::Rational, AlgebraError> {
    let amb = Ambient::new::<&str>(&[]);
    let p: MPoly<crate::Rational> = parse_poly(text, &amb)?;
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, Poly};

    #[test]
    fn parses_products_and_powers() {
        let a = Ambient::new(&["x1"]);
        let p: Poly = parse_poly("x1*(x1-1)", &a).unwrap();
        assert_eq!(p.to_string(), "x1^2 - x1");
    }

    #[test]
    fn parses_arrangement_divisor() {
        let a = Ambient::new(&["z0", "z1", "z2", "z3"]);
        let p: Poly = parse_poly("z0*z1*z2*z3", &a).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff_of(&[1, 1, 1, 1]), q(1));
    }

    #[test]
    fn malformed_input_reports_offset() {
        let a = Ambient::new(&["x1"]);
        match parse_poly::<crate::Rational>("x1 +", &a) {
            Err(AlgebraError::Parse { offset, expected, .. }) => {
                assert_eq!(offset, 4);
                assert!(expected.contains(&"identifier"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_variable() {
        let a = Ambient::new(&["x"]);
        assert!(matches!(
            parse_poly::<crate::Rational>("x + y", &a),
            Err(AlgebraError::UnknownVariable { ref name, offset: 4 }) if name == "y"
        ));
    }

    #[test]
    fn rational_literals_and_division() {
        let a = Ambient::new(&["x"]);
        let p: Poly = parse_poly("3/4*x - x/2", &a).unwrap();
        assert_eq!(p.coeff_of(&[1]), q(1) / q(4));
        assert!(parse_poly::<crate::Rational>("1/x", &a).is_err());
        assert!(parse_poly::<crate::Rational>("1/0", &a).is_err());
        assert_eq!(parse_rational("-3/4").unwrap(), q(-3) / q(4));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let a = Ambient::new(&["x"]);
        let p: Poly = parse_poly("-x^2", &a).unwrap();
        assert_eq!(p.coeff_of(&[2]), q(-1));
    }
}
