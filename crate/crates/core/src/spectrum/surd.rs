//! Elements `a + b·√r` of a quadratic extension of the rational-function
//! field, enough to carry the closed-form roots of quadratic eliminants.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::poly::Var;
use crate::ratfun::RationalFunction as RF;

#[derive(Clone, Debug)]
pub struct Surd {
    pub rational: RF,
    pub irrational: RF,
    pub radicand: Option<RF>,
}

impl Surd {
    pub fn from_rf(a: RF) -> Self {
        Self { rational: a, irrational: RF::zero(), radicand: None }
    }

    /// `a + b √r`.
    pub fn new(a: RF, b: RF, r: RF) -> Self {
        if b.is_zero() || r.is_zero() {
            return Self::from_rf(a);
        }
        Self { rational: a, irrational: b, radicand: Some(r) }
    }

    pub fn as_rf(&self) -> Option<&RF> {
        self.radicand.is_none().then_some(&self.rational)
    }

    fn join(&self, other: &Self) -> Option<RF> {
        match (&self.radicand, &other.radicand) {
            (None, r) | (r, None) => r.clone(),
            (Some(a), Some(b)) => {
                assert!(a == b, "surds with different radicands");
                Some(a.clone())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.join(other);
        let a = self.rational.clone() + other.rational.clone();
        let b = self.irrational.clone() + other.irrational.clone();
        match r {
            Some(r) => Self::new(a, b, r),
            None => Self::from_rf(a),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let Some(r) = self.join(other) else {
            return Self::from_rf(self.rational.clone() * other.rational.clone());
        };
        let (a1, b1, a2, b2) = (&self.rational, &self.irrational, &other.rational, &other.irrational);
        let a = a1.clone() * a2.clone() + b1.clone() * b2.clone() * r.clone();
        let b = a1.clone() * b2.clone() + a2.clone() * b1.clone();
        Self::new(a, b, r)
    }

    pub fn scale(&self, c: &RF) -> Self {
        let b = self.irrational.clone() * c.clone();
        match &self.radicand {
            Some(r) => Self::new(self.rational.clone() * c.clone(), b, r.clone()),
            None => Self::from_rf(self.rational.clone() * c.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    /// Value of `Σ c_j x^j` at `x = self`, with `c_j` rational functions.
    pub fn eval_poly(&self, coeffs: &[RF]) -> Self {
        let mut acc = Self::from_rf(RF::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&Self::from_rf(c.clone()));
        }
        acc
    }

    /// The rational part and `b²r`; both stay finite exactly when the surd
    /// does.
    pub fn finiteness_witnesses(&self) -> Vec<RF> {
        let mut out = vec![self.rational.clone()];
        if let Some(r) = &self.radicand {
            out.push(self.irrational.clone() * self.irrational.clone() * r.clone());
        }
        out
    }

    /// Principal square root; `None` on a missing variable or pole.
    pub fn eval_complex(&self, values: &BTreeMap<Var, Complex64>) -> Option<Complex64> {
        let a = self.rational.eval_complex(values)?;
        match &self.radicand {
            None => Some(a),
            Some(r) => Some(a + self.irrational.eval_complex(values)? * r.eval_complex(values)?.sqrt()),
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational
            && self.irrational == other.irrational
            && match (&self.radicand, &other.radicand) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            None => write!(f, "{}", self.rational),
            Some(r) => {
                if !self.rational.is_zero() {
                    write!(f, "{} + ", self.rational)?;
                }
                if self.irrational != RF::one() {
                    write!(f, "({})*", self.irrational)?;
                }
                write!(f, "sqrt({r})")
            }
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn rf(s: &str) -> RF {
        RF::from_poly(parse_poly(s).unwrap())
    }

    #[test]
    fn squares_reduce() {
        let s = Surd::new(rf("1"), rf("1"), rf("g1"));
        let sq = s.mul(&s);
        assert_eq!(sq, Surd::new(rf("1 + g1"), rf("2"), rf("g1")));
        let conj = Surd::new(rf("1"), rf("-1"), rf("g1"));
        assert_eq!(s.mul(&conj), Surd::from_rf(rf("1 - g1")));
    }
}
