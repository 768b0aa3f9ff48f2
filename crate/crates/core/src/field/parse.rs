//! Text syntax for field elements: `a/b`, `a/b+c/d*i`, `i`, `2-1*i`, ...
//!
//! The accepted language is a small expression grammar over integers, `i`,
//! `+ - * /` and parentheses, so the canonical printed forms parse back to
//! themselves. Whitespace is ignored.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use super::{FieldElem, FieldId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|(o, _)| *o).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::new(self.offset(), msg)
    }

    fn expr(&mut self) -> Result<FieldElem, ParseError> {
        let mut acc = self.product()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                '-' => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<FieldElem, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    acc = acc
                        .checked_div(&d)
                        .map_err(|_| ParseError::new(at, "division by zero"))?;
                }
                // `5i` means `5*i`
                Some('i') => {
                    self.bump();
                    acc = &acc * &FieldElem::i();
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElem, ParseError> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.bump();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<FieldElem, ParseError> {
        match self.peek() {
            Some('i') => {
                self.bump();
                Ok(FieldElem::i())
            }
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                    digits.push(d);
                    self.bump();
                }
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(FieldElem::from_int(FieldId::Rationals, n))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl FieldElem {
    /// Parses `text` as an element of `field`.
    pub fn parse_in(field: FieldId, text: &str) -> Result<FieldElem, ParseError> {
        let mut p = Parser::new(text);
        if p.peek().is_none() {
            return Err(ParseError::new(0, "empty element"));
        }
        let v = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        v.in_field(field)
            .map_err(|_| ParseError::new(0, "imaginary part in an element of Q"))
    }
}

/// Infers the field: `Q(i)` when the text mentions `i`, `Q` otherwise.
impl FromStr for FieldElem {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let field = if s.contains('i') {
            FieldId::GaussianRationals
        } else {
            FieldId::Rationals
        };
        FieldElem::parse_in(field, s)
    }
}

/// Parses a `;`-separated tuple such as `"5; 1; i"`.
pub fn parse_tuple(field: FieldId, text: &str) -> Result<Vec<FieldElem>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let v = FieldElem::parse_in(field, part).map_err(|e| {
            ParseError::new(offset + e.position, e.message.to_string())
        })?;
        out.push(v);
        offset += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_examples() {
        let qi = FieldId::GaussianRationals;
        assert_eq!(FieldElem::parse_in(FieldId::Rationals, "2/4").unwrap().to_string(), "1/2");
        assert_eq!(FieldElem::parse_in(FieldId::Rationals, "0/5").unwrap().to_string(), "0");
        assert_eq!(FieldElem::parse_in(qi, "3/6 + 2/8*i").unwrap().to_string(), "1/2+1/4*i");
        assert_eq!(FieldElem::parse_in(qi, "i").unwrap(), FieldElem::i());
        assert_eq!(FieldElem::parse_in(qi, "2-1*i").unwrap().to_string(), "2-1*i");
        assert_eq!(FieldElem::parse_in(qi, "5i").unwrap().to_string(), "5*i");
        assert_eq!(FieldElem::parse_in(qi, "-(1+i)").unwrap().to_string(), "-1-1*i");
    }

    #[test]
    fn field_is_respected() {
        assert!(FieldElem::parse_in(FieldId::Rationals, "1+i").is_err());
        let x = FieldElem::parse_in(FieldId::GaussianRationals, "3").unwrap();
        assert_eq!(x.field(), FieldId::GaussianRationals);
    }

    #[test]
    fn errors_are_positioned() {
        let e = FieldElem::parse_in(FieldId::Rationals, "1/0").unwrap_err();
        assert_eq!(e.position, 2);
        let e = FieldElem::parse_in(FieldId::Rationals, "3x").unwrap_err();
        assert_eq!(e.position, 1);
        assert!(FieldElem::parse_in(FieldId::Rationals, "  ").is_err());
    }

    #[test]
    fn tuples() {
        let t = parse_tuple(FieldId::GaussianRationals, "5; 1; i").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[2], FieldElem::i());
    }
}
