//! Text form of map expressions and complex numbers.
//!
//! Disc maps:
//!
//! ```text
//! identity | const(c) | mobius(a, phase) | power(n)
//! blaschke(phase, a1^m1, a2, ...) | compose(f, g) | mix(t, f, g) | product(f, g)
//! ```
//!
//! Bidisc components use `z1`, `z2`, `const(c)`, `compose(disc_map, expr)`,
//! `product(expr, expr)` and `mix(t, expr, expr)`; a bidisc map is written
//! `f1; f2`. Complex numbers are written `re+imj`, `re-imj`, `imj` or `re`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::holomap::{BidiscExpr, BidiscMap, DiscMap, DiscNode};

/// Formats a complex number as `re+imj`, or as a plain real when the
/// imaginary part is zero. The output parses back to the same value.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{}{}{}j", z.re, sign, z.im.abs())
    }
}

fn parse_real_text(text: &str, offset: usize) -> Result<f64> {
    text.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse {
            offset,
            message: format!("invalid number `{text}`"),
        })
}

fn parse_complex_at(text: &str, offset: usize) -> Result<C64> {
    let text = text.trim();
    let Some(body) = text.strip_suffix('j') else {
        return Ok(C64::new(parse_real_text(text, offset)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = parse_real_text(&body[..i], offset)?;
            let im_text = &body[i..];
            let im = if im_text == "+" || im_text == "-" {
                if im_text == "-" { -1.0 } else { 1.0 }
            } else {
                parse_real_text(im_text, offset + i)?
            };
            Ok(C64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => parse_real_text(body, offset)?,
            };
            Ok(C64::new(0.0, im))
        }
    }
}

/// Parses a complex literal such as `0.5`, `-0.2+0.4j`, `3e-2j`.
pub fn parse_complex(text: &str) -> Result<C64> {
    parse_complex_at(text, 0)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(String),
    Open,
    Close,
    Comma,
    Caret,
    Semicolon,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => tokens.push((start, Token::Open)),
            b')' => tokens.push((start, Token::Close)),
            b',' => tokens.push((start, Token::Comma)),
            b'^' => tokens.push((start, Token::Caret)),
            b';' => tokens.push((start, Token::Semicolon)),
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            b'0'..=b'9' | b'.' | b'+' | b'-' => {
                i += 1;
                while i < bytes.len() {
                    let c = bytes[i];
                    let exponent_sign = (c == b'+' || c == b'-') && matches!(bytes[i - 1], b'e' | b'E');
                    let infix_sign = (c == b'+' || c == b'-') && bytes[i - 1].is_ascii_digit()
                        || (c == b'+' || c == b'-') && bytes[i - 1] == b'.';
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exponent_sign || infix_sign {
                        i += 1;
                    } else if c == b'j' {
                        i += 1;
                        break;
                    } else {
                        break;
                    }
                }
                tokens.push((start, Token::Number(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{}`", b as char),
                })
            }
        }
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Self {
            tokens: tokenize(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => self.error("expected a constructor name"),
        }
    }

    fn complex(&mut self) -> Result<C64> {
        let offset = self.offset();
        match self.peek() {
            Some(Token::Number(text)) => {
                let text = text.clone();
                self.pos += 1;
                parse_complex_at(&text, offset)
            }
            _ => self.error("expected a number"),
        }
    }

    fn real(&mut self) -> Result<f64> {
        let offset = self.offset();
        let z = self.complex()?;
        if z.im != 0.0 {
            return Err(Error::Parse {
                offset,
                message: "expected a real number".into(),
            });
        }
        Ok(z.re)
    }

    fn integer(&mut self) -> Result<u32> {
        let offset = self.offset();
        match self.peek() {
            Some(Token::Number(text)) => {
                let value = text.parse::<u32>().map_err(|_| Error::Parse {
                    offset,
                    message: format!("expected a non-negative integer, got `{text}`"),
                })?;
                self.pos += 1;
                Ok(value)
            }
            _ => self.error("expected an integer"),
        }
    }

    fn at_parameters(&self, err: Error) -> Error {
        match err {
            Error::InvalidParameter(message) => Error::Parse {
                offset: self.offset(),
                message,
            },
            other => other,
        }
    }

    fn unknown<T>(offset: usize, kind: &str, name: &str) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: format!("unknown {kind} constructor `{name}`"),
        })
    }

    fn disc(&mut self) -> Result<DiscMap> {
        let start = self.offset();
        let name = self.ident()?;
        if name == "identity" {
            return Ok(DiscMap::identity());
        }
        self.expect(Token::Open, "`(`")?;
        let map = match name.as_str() {
            "const" => {
                let c = self.complex()?;
                DiscMap::constant(c)
            }
            "mobius" => {
                let a = self.complex()?;
                self.expect(Token::Comma, "`,`")?;
                let phase = self.real()?;
                DiscMap::mobius(a, phase)
            }
            "power" => {
                let n = self.integer()?;
                DiscMap::power(n)
            }
            "blaschke" => {
                let phase = self.real()?;
                let mut factors = Vec::new();
                while self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                    let a = self.complex()?;
                    let m = if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        self.integer()?
                    } else {
                        1
                    };
                    factors.push((a, m));
                }
                DiscMap::blaschke(phase, factors)
            }
            "compose" => {
                let f = self.disc()?;
                self.expect(Token::Comma, "`,`")?;
                let g = self.disc()?;
                Ok(DiscMap::compose(f, g))
            }
            "mix" => {
                let t = self.real()?;
                self.expect(Token::Comma, "`,`")?;
                let f = self.disc()?;
                self.expect(Token::Comma, "`,`")?;
                let g = self.disc()?;
                DiscMap::mix(t, f, g)
            }
            "product" => {
                let f = self.disc()?;
                self.expect(Token::Comma, "`,`")?;
                let g = self.disc()?;
                Ok(DiscMap::product(f, g))
            }
            other => return Self::unknown(start, "disc map", other),
        }
        .map_err(|e| self.at_parameters(e))?;
        self.expect(Token::Close, "`)`")?;
        Ok(map)
    }

    fn bidisc(&mut self) -> Result<BidiscExpr> {
        let start = self.offset();
        let name = self.ident()?;
        match name.as_str() {
            "z1" => return Ok(BidiscExpr::Coord(1)),
            "z2" => return Ok(BidiscExpr::Coord(2)),
            _ => {}
        }
        self.expect(Token::Open, "`(`")?;
        let expr = match name.as_str() {
            "const" => {
                let c = self.complex()?;
                BidiscExpr::constant(c)
            }
            "compose" => {
                let g = self.disc()?;
                self.expect(Token::Comma, "`,`")?;
                let inner = self.bidisc()?;
                Ok(BidiscExpr::apply(g, inner))
            }
            "product" => {
                let a = self.bidisc()?;
                self.expect(Token::Comma, "`,`")?;
                let b = self.bidisc()?;
                Ok(BidiscExpr::product(a, b))
            }
            "mix" => {
                let t = self.real()?;
                self.expect(Token::Comma, "`,`")?;
                let a = self.bidisc()?;
                self.expect(Token::Comma, "`,`")?;
                let b = self.bidisc()?;
                BidiscExpr::mix(t, a, b)
            }
            other => return Self::unknown(start, "bidisc", other),
        }
        .map_err(|e| self.at_parameters(e))?;
        self.expect(Token::Close, "`)`")?;
        Ok(expr)
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }
}

pub fn parse_disc_map(text: &str) -> Result<DiscMap> {
    let mut parser = Parser::new(text)?;
    let map = parser.disc()?;
    parser.finish()?;
    Ok(map)
}

pub fn parse_bidisc_expr(text: &str) -> Result<BidiscExpr> {
    let mut parser = Parser::new(text)?;
    let expr = parser.bidisc()?;
    parser.finish()?;
    Ok(expr)
}

pub fn parse_bidisc_map(text: &str) -> Result<BidiscMap> {
    let mut parser = Parser::new(text)?;
    let f1 = parser.bidisc()?;
    parser.expect(Token::Semicolon, "`;` between the two components")?;
    let f2 = parser.bidisc()?;
    parser.finish()?;
    BidiscMap::new(f1, f2)
}

pub(crate) fn write_disc(map: &DiscMap, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match map.tree() {
        DiscNode::Constant(c) => write!(f, "const({})", format_complex(*c)),
        DiscNode::Identity => write!(f, "identity"),
        DiscNode::Mobius { a, phase } => write!(f, "mobius({}, {})", format_complex(*a), phase),
        DiscNode::Power(n) => write!(f, "power({n})"),
        DiscNode::Blaschke { phase, factors } => {
            write!(f, "blaschke({phase}")?;
            for (a, m) in factors {
                write!(f, ", {}", format_complex(*a))?;
                if *m != 1 {
                    write!(f, "^{m}")?;
                }
            }
            write!(f, ")")
        }
        DiscNode::Compose(outer, inner) => write!(f, "compose({outer}, {inner})"),
        DiscNode::Mix(t, a, b) => write!(f, "mix({t}, {a}, {b})"),
        DiscNode::Product(a, b) => write!(f, "product({a}, {b})"),
    }
}

pub(crate) fn write_bidisc_expr(expr: &BidiscExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match expr {
        BidiscExpr::Coord(i) => write!(f, "z{i}"),
        BidiscExpr::Constant(c) => write!(f, "const({})", format_complex(*c)),
        BidiscExpr::Apply(g, inner) => write!(f, "compose({g}, {inner})"),
        BidiscExpr::Product(a, b) => write!(f, "product({a}, {b})"),
        BidiscExpr::Mix(t, a, b) => write!(f, "mix({t}, {a}, {b})"),
    }
}

impl FromStr for DiscMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_disc_map(s)
    }
}

impl FromStr for BidiscExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_bidisc_expr(s)
    }
}

impl FromStr for BidiscMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_bidisc_map(s)
    }
}

macro_rules! serde_as_text {
    ($ty:ty) => {
        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
                let text = <String as serde::Deserialize>::deserialize(deserializer)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_as_text!(DiscMap);
serde_as_text!(BidiscExpr);
serde_as_text!(BidiscMap);

/// Serde adapter storing a complex number in its text form.
pub mod complex_text {
    use super::*;

    pub fn serialize<S: serde::Serializer>(z: &C64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_complex(*z))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<C64, D::Error> {
        let text = <String as serde::Deserialize>::deserialize(deserializer)?;
        parse_complex(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a pair of complex numbers written as a two-element list.
pub mod complex_pair_text {
    use super::*;

    pub fn serialize<S: serde::Serializer>(z: &(C64, C64), serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&format_complex(z.0))?;
        seq.serialize_element(&format_complex(z.1))?;
        seq.end()
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<(C64, C64), D::Error> {
        let [a, b] = <[String; 2] as serde::Deserialize>::deserialize(deserializer)?;
        let a = parse_complex(&a).map_err(serde::de::Error::custom)?;
        let b = parse_complex(&b).map_err(serde::de::Error::custom)?;
        Ok((a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-0.2+0.4j").unwrap(), c(-0.2, 0.4));
        assert_eq!(parse_complex("0.3-1e-3j").unwrap(), c(0.3, -1e-3));
        assert_eq!(parse_complex("1e-3-2e-4j").unwrap(), c(1e-3, -2e-4));
        assert_eq!(parse_complex("0.4j").unwrap(), c(0.0, 0.4));
        assert_eq!(parse_complex("-j").unwrap(), c(0.0, -1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+").is_err());
        assert_eq!(format_complex(c(0.5, -0.25)), "0.5-0.25j");
        assert_eq!(format_complex(c(-1.0, 0.0)), "-1");
    }

    #[test]
    fn parses_nested_expressions() {
        let map = parse_disc_map("compose(mobius(0.5, 0), power(2))").unwrap();
        let t = 0.6;
        let expected = (t * t - 0.5) / (1.0 - t * t / 2.0);
        assert!((map.eval_raw(c(t, 0.0)).re - expected).abs() < 1e-15);
        let b = parse_disc_map("blaschke(0.1, 0.3, -0.2+0.4j^2)").unwrap();
        assert_eq!(b.to_string(), "blaschke(0.1, 0.3, -0.2+0.4j^2)");
        let f = parse_bidisc_map("compose(mobius(-0.5,0),z1); product(z1,z2)").unwrap();
        assert_eq!(f.to_string(), "compose(mobius(-0.5, 0), z1); product(z1, z2)");
        assert!(!f.component(1).is_coordinate(1));
    }

    #[test]
    fn reports_errors_with_offsets() {
        match parse_disc_map("compose(identity, powr(2))") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 18),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_disc_map("const(1.2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_disc_map("identity identity"), Err(Error::Parse { .. })));
        assert!(matches!(parse_bidisc_map("z1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_disc_map("mobius(0.5)"), Err(Error::Parse { .. })));
    }
}
