//! A small infix reader shared by the commutative polynomial ring and the
//! (noncommutative) Weyl algebra. Products are evaluated left to right, so
//! operator order is preserved.
//!
//! Grammar: sums of products of powers; juxtaposition multiplies
//! (`2i q1 p1`), `/` is only allowed in front of a numeric literal, and the
//! bare identifier `i` is the imaginary unit.

use num_traits::Zero;

use crate::error::ParseError;
use crate::gaussian::{parse_rational, GaussianRational};
use crate::poly::{Poly, Var};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ParseError::new(src, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Reader<'a, T, R, L> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    resolve: R,
    lift: L,
    _t: std::marker::PhantomData<T>,
}

impl<T, R, L> Reader<'_, T, R, L>
where
    T: Scalar,
    R: Fn(&str) -> Option<T>,
    L: Fn(GaussianRational) -> T,
{
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.src, msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<T, ParseError> {
        let mut acc = T::zero();
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    return Ok(acc);
                }
                false
            };
            first = false;
            let t = self.product()?;
            acc += if neg { -t } else { t };
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn product(&mut self) -> Result<T, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc * self.power()?;
            } else if self.eat('/') {
                let d = match self.toks.get(self.pos) {
                    Some(Tok::Num(s)) => parse_rational(s).ok_or_else(|| self.err("bad divisor"))?,
                    _ => return Err(self.err("division is only allowed by a number")),
                };
                self.pos += 1;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc * (self.lift)(GaussianRational::real(d.recip()));
            } else if self.starts_factor() {
                acc = acc * self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<T, ParseError> {
        if self.eat('-') {
            return Ok(-self.power()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(s)) => s.parse::<u32>().map_err(|_| self.err("bad exponent"))?,
                _ => return Err(self.err("exponent must be a non-negative integer")),
            };
            self.pos += 1;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<T, ParseError> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(s) => {
                let r = parse_rational(&s).ok_or_else(|| self.err(format!("bad number `{s}`")))?;
                Ok((self.lift)(GaussianRational::real(r)))
            }
            Tok::Ident(name) if name == "i" => Ok((self.lift)(GaussianRational::i())),
            Tok::Ident(name) => (self.resolve)(&name).ok_or_else(|| self.err(format!("unknown symbol `{name}`"))),
            Tok::Op('(') => {
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(v)
            }
            Tok::Op(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }
}

/// Parse `src` into `T`, resolving identifiers with `resolve` and embedding
/// numeric constants with `lift`.
pub fn parse_with<T: Scalar>(
    src: &str,
    resolve: impl Fn(&str) -> Option<T>,
    lift: impl Fn(GaussianRational) -> T,
) -> Result<T, ParseError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(ParseError::new(src, "empty expression"));
    }
    let mut r = Reader { src, toks, pos: 0, resolve, lift, _t: std::marker::PhantomData };
    let v = r.sum()?;
    if r.pos != r.toks.len() {
        return Err(r.err("trailing input"));
    }
    Ok(v)
}

/// Parse a polynomial in `g1, g2, …, n, B, u, E, H, K, K1`.
pub fn parse_poly(src: &str) -> Result<Poly<GaussianRational>, ParseError> {
    parse_with(src, |name| Var::from_name(name).map(Poly::var), Poly::constant)
}

/// Parse a number (possibly with `i`) into a Gaussian rational.
pub fn parse_constant(src: &str) -> Result<GaussianRational, ParseError> {
    parse_with(src, |_| None, |g| g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_juxtaposition() {
        assert_eq!(parse_poly("-g1^2").unwrap(), -Poly::gamma(1).pow(2));
        assert_eq!(parse_poly("2i g1").unwrap(), parse_poly("(2*i)*g1").unwrap());
        assert_eq!(parse_constant("1/2 - 3i/4").unwrap(), "1/2-3/4i".parse().unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("g1 +").is_err());
        assert!(parse_poly("x").is_err());
        assert!(parse_poly("g1 / g2").is_err());
        assert!(parse_poly("(g1").is_err());
    }
}
