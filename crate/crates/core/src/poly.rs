//! Sparse multivariate polynomials over a [`Scalar`] ring.
//!
//! One variable namespace is shared by the whole crate: the Hamiltonian
//! parameters `g1, g2, …` (the γ_k) and the formal symbols `n, B, u, E, H, K`
//! used by the structure functions and the representation constraints.
//! [`ParamScalar`](crate::ParamScalar) is a `Poly<GaussianRational>` that only
//! mentions the `g` variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;
use smallvec::SmallVec;

use crate::scalar::{Field, ImaginaryUnit, Scalar};

/// A polynomial variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Var(pub u16);

impl Var {
    pub const N: Var = Var(1000);
    pub const B: Var = Var(1001);
    pub const U: Var = Var(1002);
    pub const E: Var = Var(1003);
    pub const H: Var = Var(1004);
    pub const K: Var = Var(1005);
    pub const K1: Var = Var(1006);

    /// The Hamiltonian coefficient γ_k, `k >= 1`.
    pub fn gamma(k: u32) -> Var {
        assert!((1..1000).contains(&k), "gamma index out of range: {k}");
        Var(k as u16)
    }

    pub fn gamma_index(self) -> Option<u32> {
        (self.0 >= 1 && self.0 < 1000).then_some(self.0 as u32)
    }

    pub fn name(self) -> String {
        match self {
            Var::N => "n".into(),
            Var::B => "B".into(),
            Var::U => "u".into(),
            Var::E => "E".into(),
            Var::H => "H".into(),
            Var::K => "K".into(),
            Var::K1 => "K1".into(),
            Var(k) => format!("g{k}"),
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Some(match name {
            "n" => Var::N,
            "B" => Var::B,
            "u" => Var::U,
            "E" => Var::E,
            "H" => Var::H,
            "K" => Var::K,
            "K1" => Var::K1,
            _ => {
                let k: u32 = name.strip_prefix('g')?.parse().ok()?;
                if !(1..1000).contains(&k) {
                    return None;
                }
                Var::gamma(k)
            }
        })
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Self(smallvec::smallvec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut acc = Self::one();
        for (v, e) in pairs {
            acc = acc.mul(&Self::var(v, e));
        }
        acc
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        for &(v, e) in &self.0 {
            let d = other.exponent(v);
            if d > e {
                return None;
            }
            if e > d {
                out.push((v, e - d));
            }
        }
        if other.0.iter().any(|&(v, _)| self.exponent(v) == 0) {
            return None;
        }
        Some(Self(out))
    }

    /// Split off the power of `v`: returns `(exponent, remaining monomial)`.
    pub fn split(&self, v: Var) -> (u32, Self) {
        let e = self.exponent(v);
        let rest = self.0.iter().copied().filter(|&(w, _)| w != v).collect();
        (e, Self(rest))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let m = e.min(other.exponent(v));
                    (m > 0).then_some((v, m))
                })
                .collect(),
        )
    }
}

fn lex_cmp(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                if va != vb {
                    // the monomial carrying the earlier variable is larger
                    return vb.cmp(&va);
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| lex_cmp(&self.0, &other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|&(v, e)| if e == 1 { v.name() } else { format!("{}^{e}", v.name()) }).collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A polynomial: map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Poly<C> {
    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), C::one())
    }

    pub fn gamma(k: u32) -> Self {
        Self::var(Var::gamma(k))
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.pairs().map(|(v, _)| v)).collect()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn map_coeffs<D: Scalar>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Coefficients with respect to `v`: entry `j` is the coefficient of `v^j`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Self> {
        let mut out = vec![Self::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Rebuild from coefficients in `v` (inverse of [`Poly::coefficients_in`]).
    pub fn from_coefficients(v: Var, coeffs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (j, c) in coeffs.iter().enumerate() {
            out += c.mul_monomial(&Monomial::var(v, j as u32));
        }
        out
    }

    /// Replace `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Self) -> Self {
        let coeffs = self.coefficients_in(v);
        // Horner
        let mut acc = Self::zero();
        for c in coeffs.into_iter().rev() {
            acc = acc * value.clone() + c;
        }
        acc
    }

    /// Substitute several variables by scalars.
    pub fn eval_partial(&self, values: &BTreeMap<Var, C>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m.pairs() {
                match values.get(&v) {
                    Some(x) => coeff = coeff * x.pow(e),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), coeff);
        }
        out
    }

    /// Evaluate completely; `None` if some variable has no value.
    pub fn eval(&self, values: &BTreeMap<Var, C>) -> Option<C> {
        let p = self.eval_partial(values);
        p.is_constant().then(|| p.constant_term())
    }

    /// Set the listed variables to zero.
    pub fn drop_vars(&self, vars: &BTreeSet<Var>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.pairs().all(|(v, _)| !vars.contains(&v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Greatest common monomial factor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    /// Exact division by a monomial (every term must be divisible).
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(Self { terms })
    }
}

impl<C: Field> Poly<C> {
    /// Exact multivariate division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.checked_inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(lm)?;
            let qc = rc.clone() * lc_inv.clone();
            let t = Self::term(qm, qc);
            rem = rem - d.clone() * t.clone();
            quot += t;
        }
        Some(quot)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading().and_then(|(_, c)| c.checked_inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }
}

impl<C: Scalar + fmt::Display> Poly<C> {
    fn fmt_term(m: &Monomial, c: &C) -> String {
        let cs = c.to_string();
        if m.is_one() {
            return cs;
        }
        let simple = !cs[1..].contains(['+', '-']);
        let prefix = match cs.as_str() {
            "1" => String::new(),
            "-1" => "-".into(),
            _ if simple => format!("{cs}*"),
            _ => format!("({cs})*"),
        };
        format!("{prefix}{m}")
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for Poly<C> {
    /// Leading term first, e.g. `4*g2*u^2 - 2i*g1*u + E`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let t = Self::fmt_term(m, c);
            if idx == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        f.write_str(&out)
    }
}

impl<C: Scalar> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(m, c)| format!("({c:?})*{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<C: Scalar + fmt::Display> Serialize for Poly<C> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<C: Scalar> Zero for Poly<C> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Scalar> One for Poly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Scalar> AddAssign for Poly<C> {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        if self.terms.len() < rhs.terms.len() {
            let mut r = rhs;
            r += self;
            return r;
        }
        self += rhs;
        self
    }
}

impl<C: Scalar> Neg for Poly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a, C: Scalar> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Scalar> Scalar for Poly<C> {
    fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }

    fn times_int(&self, n: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.times_int(n))))
    }
}

impl<C: ImaginaryUnit> ImaginaryUnit for Poly<C> {
    fn imag_unit() -> Self {
        Self::constant(C::imag_unit())
    }

    fn times_int_ipow(&self, n: i64, k: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.times_int_ipow(n, k))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;

    type P = Poly<G>;

    fn p(s: &str) -> P {
        crate::expr::parse_poly(s).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::var(Var::gamma(1), 2);
        let b = Monomial::from_pairs([(Var::gamma(1), 1), (Var::gamma(2), 1)]);
        let c = Monomial::var(Var::gamma(2), 2);
        let d = Monomial::var(Var::gamma(1), 3);
        assert!(a > b && b > c && d > a);
        assert!(Monomial::one() < c);
    }

    #[test]
    fn arithmetic_and_zero_pruning() {
        let x = p("g1 + g2");
        let y = p("g1 - g2");
        assert_eq!(&x * &y, p("g1^2 - g2^2"));
        assert!((x.clone() - x).is_zero());
    }

    #[test]
    fn exact_division() {
        let num = p("g1^2 - g2^2");
        assert_eq!(num.div_exact(&p("g1 - g2")), Some(p("g1 + g2")));
        assert_eq!(num.div_exact(&p("g1 + 2")), None);
    }

    #[test]
    fn substitute_and_coefficients() {
        let f = p("u^2 + 2*n*u + 1");
        assert_eq!(f.substitute(Var::U, &p("n")), p("3*n^2 + 1"));
        let cs = f.coefficients_in(Var::U);
        assert_eq!(cs, vec![p("1"), p("2*n"), p("1")]);
        assert_eq!(P::from_coefficients(Var::U, &cs), f);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p("4*g2*u^2 - 2i*g1*u + E").to_string(), "4*g2*u^2 - 2i*g1*u + E");
        assert_eq!(p("(1+i)*n").to_string(), "(1+i)*n");
    }
}
