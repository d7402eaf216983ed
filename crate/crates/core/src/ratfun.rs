//! Rational functions in the crate's polynomial variables.
//!
//! The denominator is kept as a list of monic factors with multiplicities.
//! Common factors are cancelled by exact division trial, which is enough for
//! the denominators that occur here (powers of single γ_k and the leading
//! coefficients of quadratic residual factors).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::gaussian::GaussianRational;
use crate::poly::{Monomial, Poly, Var};
use crate::scalar::{Field, Scalar};

type P = Poly<GaussianRational>;

#[derive(Clone)]
pub struct RationalFunction {
    num: P,
    den: Vec<(P, u32)>,
}

/// Split `p` into a scalar and monic factors: one per variable in the
/// monomial content and one for the remaining cofactor.
fn split_factors(p: &P) -> (GaussianRational, Vec<(P, u32)>) {
    let content = p.monomial_content();
    let rest = p.div_monomial(&content).expect("content divides");
    let mut factors: Vec<(P, u32)> = content.pairs().map(|(v, e)| (P::var(v), e)).collect();
    let lc = rest.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussianRational::one);
    if !rest.is_constant() {
        factors.push((rest.monic(), 1));
    }
    (lc, factors)
}

fn product(factors: &[(P, u32)]) -> P {
    factors.iter().fold(P::one(), |acc, (f, e)| acc * f.pow(*e))
}

fn merge(into: &mut Vec<(P, u32)>, f: P, e: u32) {
    if e == 0 {
        return;
    }
    match into.iter_mut().find(|(g, _)| *g == f) {
        Some(slot) => slot.1 += e,
        None => into.push((f, e)),
    }
}

impl RationalFunction {
    pub fn from_poly(p: P) -> Self {
        Self { num: p, den: Vec::new() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(P::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(P::var(v))
    }

    /// `num / den`; `None` when `den` is zero.
    pub fn new(num: P, den: P) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (lc, factors) = split_factors(&den);
        let inv = lc.checked_inv()?;
        let mut out = Self { num: num.scale(&inv), den: Vec::new() };
        for (f, e) in factors {
            merge(&mut out.den, f, e);
        }
        out.reduce();
        Some(out)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in &mut self.den {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
        self.den.sort_by(|a, b| a.0.leading().map(|t| t.0).cmp(&b.0.leading().map(|t| t.0)));
    }

    pub fn numerator(&self) -> &P {
        &self.num
    }

    pub fn denominator(&self) -> P {
        product(&self.den)
    }

    pub fn denominator_factors(&self) -> &[(P, u32)] {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&P> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Variables occurring in the denominator.
    pub fn denominator_vars(&self) -> BTreeSet<Var> {
        self.den.iter().flat_map(|(f, _)| f.vars()).collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.denominator_vars());
        v
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let (lc, factors) = split_factors(&self.num);
        let mut out = Self { num: product(&self.den).scale(&lc.checked_inv()?), den: Vec::new() };
        for (f, e) in factors {
            merge(&mut out.den, f, e);
        }
        out.reduce();
        Some(out)
    }

    /// Replace `v` by a rational function.
    pub fn substitute(&self, v: Var, value: &Self) -> Self {
        let sub = |p: &P| -> Self {
            let coeffs = p.coefficients_in(v);
            let d = coeffs.len() as u32 - 1;
            // Σ c_j P^j Q^(d-j) / Q^d
            let mut num = P::zero();
            for (j, c) in coeffs.iter().enumerate() {
                let j = j as u32;
                num += c.clone() * value.num.pow(j) * value.denominator().pow(d - j);
            }
            let mut out = Self { num, den: Vec::new() };
            for (f, e) in &value.den {
                merge(&mut out.den, f.clone(), e * d);
            }
            out.reduce();
            out
        };
        let mut out = sub(&self.num);
        for (f, e) in &self.den {
            let fe = sub(f).pow(*e);
            out = out / fe;
        }
        out
    }

    pub fn substitute_poly(&self, v: Var, value: &P) -> Self {
        self.substitute(v, &Self::from_poly(value.clone()))
    }

    /// Substitute scalar values; `None` if the denominator vanishes.
    pub fn eval_partial(&self, values: &BTreeMap<Var, GaussianRational>) -> Option<Self> {
        let num = self.num.eval_partial(values);
        let den = self.denominator().eval_partial(values);
        Self::new(num, den)
    }

    /// Floating-point evaluation; `None` if a variable is missing or the
    /// denominator is (numerically) zero.
    pub fn eval_complex(&self, values: &BTreeMap<Var, Complex64>) -> Option<Complex64> {
        let ev = |p: &P| p.map_coeffs(GaussianRational::to_complex64).eval(values);
        let n = ev(&self.num)?;
        let d = ev(&self.denominator())?;
        d.checked_inv().map(|di| n * di)
    }

    pub fn map_polys(&self, f: impl Fn(&P) -> P) -> Option<Self> {
        Self::new(f(&self.num), f(&self.denominator()))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.clone() * other.denominator() == other.num.clone() * self.denominator()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                let base = if p.len() > 1 { format!("({p})") } else { p.to_string() };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{num}/{}", parts[0])
        } else {
            write!(f, "{num}/({})", parts.join("*"))
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<P> for RationalFunction {
    fn from(p: P) -> Self {
        Self::from_poly(p)
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(P::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(P::one())
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if rhs.den.is_empty() && self.den.is_empty() {
            return Self::from_poly(self.num + rhs.num);
        }
        let mut lcm = self.den.clone();
        for (f, e) in &rhs.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => lcm.push((f.clone(), *e)),
            }
        }
        let cofactor = |den: &[(P, u32)]| -> P {
            lcm.iter()
                .map(|(f, e)| {
                    let have = den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                    f.pow(e - have)
                })
                .fold(P::one(), |a, b| a * b)
        };
        let num = self.num * cofactor(&self.den) + rhs.num * cofactor(&rhs.den);
        let mut out = Self { num, den: lcm };
        out.reduce();
        out
    }
}

impl AddAssign for RationalFunction {
    fn add_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) + rhs;
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self { num: self.num * rhs.num, den: self.den };
        for (f, e) in rhs.den {
            merge(&mut out.den, f, e);
        }
        out.reduce();
        out
    }
}

impl Div for RationalFunction {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero rational function")
    }
}

impl Scalar for RationalFunction {
    fn from_i64(n: i64) -> Self {
        Self::from_poly(P::from_i64(n))
    }
}

impl Field for RationalFunction {
    fn checked_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0 / (1.0 + self.num.len() as f64)
        }
    }
}

/// Convenience: the monomial `v^e` as a rational function.
pub fn var_pow(v: Var, e: u32) -> RationalFunction {
    RationalFunction::from_poly(P::term(Monomial::var(v, e), GaussianRational::one()))
}
