//! Exact text form of operators.
//!
//! One term per (operator monomial, parameter monomial) pair, in ascending
//! graded-lex order, joined by ` + `:
//!
//! ```text
//! (1)+(0)i * p1^2 + (0)+(1)i * g1 * q1 p1 + (-1/2)+(0)i * g2^2 * Id
//! ```
//!
//! The zero operator is written `0`.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::gaussian::GaussianRational;
use crate::poly::{Monomial, Poly, Var};
use crate::scalar::Scalar;

use super::{NormalMonomial, WeylOperator};

/// Coefficient types with an exact term-wise serialization.
pub trait SerialCoeff: Scalar {
    /// `(parameter monomial, numeric coefficient)` pieces in ascending order.
    fn pieces(&self) -> Vec<(Option<Monomial>, GaussianRational)>;
    fn from_piece(mono: Option<Monomial>, c: GaussianRational) -> Result<Self, String>;
}

impl SerialCoeff for GaussianRational {
    fn pieces(&self) -> Vec<(Option<Monomial>, GaussianRational)> {
        vec![(None, self.clone())]
    }
    fn from_piece(mono: Option<Monomial>, c: GaussianRational) -> Result<Self, String> {
        match mono {
            None => Ok(c),
            Some(_) => Err("parameter monomial in a numeric operator".into()),
        }
    }
}

impl SerialCoeff for Poly<GaussianRational> {
    fn pieces(&self) -> Vec<(Option<Monomial>, GaussianRational)> {
        self.terms().map(|(m, c)| ((!m.is_one()).then(|| m.clone()), c.clone())).collect()
    }
    fn from_piece(mono: Option<Monomial>, c: GaussianRational) -> Result<Self, String> {
        Ok(Poly::term(mono.unwrap_or_else(Monomial::one), c))
    }
}

fn fmt_param_monomial(m: &Monomial) -> String {
    m.pairs().map(|(v, e)| if e == 1 { v.name() } else { format!("{}^{e}", v.name()) }).collect::<Vec<_>>().join(" ")
}

fn parse_power(tok: &str) -> Option<(&str, u32)> {
    match tok.split_once('^') {
        Some((base, e)) => {
            let e: u32 = e.parse().ok()?;
            (e >= 2 && e.to_string() == tok.split_once('^')?.1).then_some((base, e))
        }
        None => Some((tok, 1)),
    }
}

fn parse_param_monomial(s: &str) -> Option<Monomial> {
    let mut pairs = Vec::new();
    for tok in s.split(' ') {
        let (base, e) = parse_power(tok)?;
        let v = Var::from_name(base)?;
        v.gamma_index()?;
        pairs.push((v, e));
    }
    let m = Monomial::from_pairs(pairs);
    (fmt_param_monomial(&m) == s).then_some(m)
}

fn parse_op_monomial(s: &str) -> Option<NormalMonomial> {
    if s == "Id" {
        return Some(NormalMonomial::ID);
    }
    let mut m = NormalMonomial::ID;
    for tok in s.split(' ') {
        let (base, e) = parse_power(tok)?;
        let slot = match base {
            "q1" => &mut m.a,
            "q2" => &mut m.b,
            "p1" => &mut m.c,
            "p2" => &mut m.d,
            _ => return None,
        };
        if *slot != 0 {
            return None;
        }
        *slot = e;
    }
    (m.to_string() == s).then_some(m)
}

impl<C: SerialCoeff> WeylOperator<C> {
    pub fn to_serial(&self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms() {
            for (pm, z) in c.pieces() {
                let mut t = z.to_serial();
                if let Some(pm) = pm {
                    t.push_str(" * ");
                    t.push_str(&fmt_param_monomial(&pm));
                }
                t.push_str(" * ");
                t.push_str(&m.to_string());
                parts.push(t);
            }
        }
        parts.join(" + ")
    }

    /// Strict inverse of [`WeylOperator::to_serial`].
    pub fn from_serial(s: &str) -> Result<Self, ParseError> {
        if s == "0" {
            return Ok(Self::default());
        }
        let mut out = Self::default();
        for term in s.split(" + ") {
            let err = |msg: &str| ParseError::new(s, format!("{msg} in term `{term}`"));
            let fields: Vec<&str> = term.split(" * ").collect();
            let (coeff, pm, om) = match fields.as_slice() {
                [c, o] => (*c, None, *o),
                [c, p, o] => (*c, Some(*p), *o),
                _ => return Err(err("malformed term")),
            };
            let z = GaussianRational::from_serial(coeff)?;
            let pm = match pm {
                Some(p) => Some(parse_param_monomial(p).ok_or_else(|| err("bad parameter monomial"))?),
                None => None,
            };
            let om = parse_op_monomial(om).ok_or_else(|| err("bad operator monomial"))?;
            if num_traits::Zero::is_zero(&z) {
                return Err(err("zero coefficient"));
            }
            let c = C::from_piece(pm, z).map_err(|m| err(&m))?;
            out.add_term(om, c);
        }
        if out.to_serial() != s {
            return Err(ParseError::new(s, "terms not in canonical order or repeated"));
        }
        Ok(out)
    }
}

impl<C: SerialCoeff> fmt::Display for WeylOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_serial())
    }
}

impl<C: SerialCoeff> FromStr for WeylOperator<C> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        Self::from_serial(s)
    }
}

impl<C: SerialCoeff> serde::Serialize for WeylOperator<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_serial())
    }
}
