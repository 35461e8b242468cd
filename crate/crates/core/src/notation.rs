//! Compact method notation.
//!
//! ```text
//! method := term+
//! term   := "(" number ")" ["^T"]
//!         | "[" term+ "]" ["^" power]
//!         | "{" term+ "}" ["^" power]
//! power  := int | "{" int "}"
//! number := signed integer, decimal, or ratio p/q
//! ```
//!
//! Whitespace between tokens is ignored. Formatting never emits brackets.

use thiserror::Error;

use crate::method::{Method, MethodError, Target, Unit};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero coefficient at byte {pos}")]
    ZeroCoefficient { pos: usize },
    #[error("empty method")]
    Empty,
}

impl ParseError {
    /// Byte offset of the problem, if it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::ZeroCoefficient { pos } => Some(*pos),
            ParseError::Empty => None,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => self.err(format!("expected `{want}`, found `{c}`")),
            None => self.err(format!("expected `{want}`, found end of input")),
        }
    }

    fn terms<S: Scalar>(&mut self, close: Option<char>) -> Result<Vec<Unit<S>>, ParseError> {
        let mut units = Vec::new();
        loop {
            match self.peek() {
                None if close.is_none() => break,
                None => return self.err(format!("unclosed group, expected `{}`", close.unwrap())),
                Some(c) if Some(c) == close => break,
                Some('(') => units.push(self.unit()?),
                Some(open @ ('[' | '{')) => {
                    let start = self.pos;
                    self.pos += 1;
                    let closing = if open == '[' { ']' } else { '}' };
                    let inner = self.terms::<S>(Some(closing))?;
                    self.expect(closing)?;
                    if inner.is_empty() {
                        self.pos = start;
                        return self.err("empty group");
                    }
                    let k = self.group_power()?;
                    for _ in 0..k {
                        units.extend(inner.iter().cloned());
                    }
                }
                Some(c) => return self.err(format!("unexpected `{c}`")),
            }
        }
        Ok(units)
    }

    fn group_power(&mut self) -> Result<usize, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let braced = self.peek() == Some('{');
        if braced {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a positive integer power");
        }
        let k: usize = match self.src[start..start + digits].parse() {
            Ok(k) => k,
            Err(_) => return self.err("power too large"),
        };
        if k == 0 {
            return self.err("power must be at least 1");
        }
        self.pos += digits;
        if braced {
            self.expect('}')?;
        }
        Ok(k)
    }

    fn unit<S: Scalar>(&mut self) -> Result<Unit<S>, ParseError> {
        self.expect('(')?;
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .bytes()
            .take_while(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'/'))
            .count();
        let text = &self.src[start..start + len];
        let value = match S::parse_decimal(text) {
            Some(v) if !text.is_empty() => v,
            _ => return self.err(if text.is_empty() { "expected a number".to_string() } else { format!("bad number `{text}`") }),
        };
        self.pos += len;
        self.expect(')')?;
        let transposed = if self.src[self.pos..].trim_start().starts_with("^T") {
            self.skip_ws();
            self.pos += 2;
            true
        } else {
            false
        };
        Unit::from_label(value, transposed).map_err(|e| match e {
            MethodError::ZeroCoefficient => ParseError::ZeroCoefficient { pos: start },
            _ => ParseError::Syntax { pos: start, msg: e.to_string() },
        })
    }
}

/// Parses a method in compact notation; the target defaults to [`Target::Sum`].
pub fn parse_method<S: Scalar>(text: &str) -> Result<Method<S>, ParseError> {
    parse_method_with_target(text, Target::Sum)
}

pub fn parse_method_with_target<S: Scalar>(text: &str, target: Target) -> Result<Method<S>, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let units = p.terms::<S>(None)?;
    if units.is_empty() {
        return Err(ParseError::Empty);
    }
    Method::new(units, target).map_err(|_| ParseError::Empty)
}

/// Canonical bracket-free form.
pub fn format_method<S: Scalar>(m: &Method<S>) -> String {
    let mut out = String::new();
    for u in m.units() {
        out.push('(');
        out.push_str(&u.label().to_notation());
        out.push(')');
        if u.is_transposed() {
            out.push_str("^T");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::method::Sign;
    use crate::scalar::Rational;

    fn parse(s: &str) -> Result<Method<Rational>, ParseError> {
        parse_method(s)
    }

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn basic_units() {
        let m = parse("(1)(1)^T").unwrap();
        assert_eq!(m.units()[0], Unit::new(Sign::Plus, q(1)).unwrap());
        assert_eq!(m.units()[1], Unit::new(Sign::Minus, q(-1)).unwrap());
        let m = parse("(-2)^T").unwrap();
        assert_eq!(m.units()[0], Unit::new(Sign::Minus, q(2)).unwrap());
    }

    #[test]
    fn groups_expand() {
        let m = parse("[(1)(1)^T]^2").unwrap();
        assert_eq!(format_method(&m), "(1)(1)^T(1)(1)^T");
        let m = parse("(-2)^T(2)^T[(-1)(1)]^{12}[(1)(-1)]^4").unwrap();
        assert_eq!(m.len(), 34);
        let m = parse("{[(1)(1)^T]^2 (3)}^3").unwrap();
        assert_eq!(m.len(), 15);
        assert_eq!(parse("[(1)]").unwrap().len(), 1);
    }

    #[test]
    fn format_examples() {
        let m = Method::<Rational>::from_pairs(&[(-1, -5)], Target::Sum).unwrap();
        assert_eq!(format_method(&m), "(5)^T");
        let z31 = "(1)^T(1)(1)(1)(1)^T(-2)^T(1)(1)(1)";
        assert_eq!(format_method(&parse(z31).unwrap()), z31);
        assert_eq!(format_method(&parse(" ( 7/3 ) ^T ( 0.5 )").unwrap()), "(7/3)^T(1/2)");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("  "), Err(ParseError::Empty));
        assert_eq!(parse("(1)(0)").unwrap_err(), ParseError::ZeroCoefficient { pos: 4 });
        assert_eq!(parse("(1)x").unwrap_err().position(), Some(3));
        assert_eq!(parse("(1").unwrap_err().position(), Some(2));
        assert!(parse("[(1)]^0").is_err());
        assert!(parse("[]^2").is_err());
        assert!(parse("[(1)").is_err());
        assert!(parse("(1-)").is_err());
        assert!(parse("()").is_err());
    }

    #[test]
    fn float_backend() {
        let m: Method<f64> = parse_method("(0.451525513208585723409578820)(-0.63)^T").unwrap();
        assert_eq!(m.units()[1].label(), -0.63);
        assert_eq!(*m.units()[1].a(), 0.63);
    }
}
