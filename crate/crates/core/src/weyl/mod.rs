//! The Weyl algebra generated by `q1, q2, p1, p2` with `[q_j, p_k] = i δ_jk`.
//!
//! Operators are kept in normal order `q1^a q2^b p1^c p2^d`. Products are
//! computed with the closed reordering rule
//!
//! ```text
//! p^c q^b = Σ_k  k! C(c,k) C(b,k) (-i)^k  q^(b-k) p^(c-k)
//! ```
//!
//! applied independently to each coordinate.

mod action;
mod formula;
mod serial;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::{Monomial, Poly, Var};
use crate::scalar::{ImaginaryUnit, Scalar};

pub use action::{apply_to_polynomial, QPolynomial};
pub use formula::parse_formula;
pub use serial::SerialCoeff;

/// `q1^a q2^b p1^c p2^d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct NormalMonomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl NormalMonomial {
    pub const ID: NormalMonomial = NormalMonomial { a: 0, b: 0, c: 0, d: 0 };

    pub const fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { a, b, c, d }
    }

    /// `a + b - c - d`.
    pub fn grade(&self) -> i64 {
        self.a as i64 + self.b as i64 - self.c as i64 - self.d as i64
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c + self.d
    }

    pub fn momentum_order(&self) -> u32 {
        self.c + self.d
    }

    /// Exchange the labels 1 and 2.
    pub fn swapped(&self) -> Self {
        Self::new(self.b, self.a, self.d, self.c)
    }

    fn key(&self) -> (u32, u32, u32, u32, u32) {
        (self.degree(), self.a, self.b, self.c, self.d)
    }
}

impl Ord for NormalMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for NormalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::ID {
            return f.write_str("Id");
        }
        let mut parts = Vec::new();
        for (name, e) in [("q1", self.a), ("q2", self.b), ("p1", self.c), ("p2", self.d)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `k! C(c,k) C(b,k)` for `k = 0..=min(b,c)`.
fn reorder_coefficients(c: u32, b: u32) -> SmallVec<[i128; 8]> {
    let kmax = c.min(b);
    let mut out = SmallVec::with_capacity(kmax as usize + 1);
    // term k+1 from term k: * (c-k)(b-k)/(k+1)
    let mut t: i128 = 1;
    for k in 0..=kmax {
        out.push(t);
        if k < kmax {
            t = t * (c - k) as i128 * (b - k) as i128 / (k + 1) as i128;
        }
    }
    out
}

/// Normal-ordered expansion of `x * y`: `(monomial, integer factor, k)` where
/// the full coefficient is `factor * (-i)^k`.
fn monomial_product(x: &NormalMonomial, y: &NormalMonomial) -> SmallVec<[(NormalMonomial, i128, u32); 16]> {
    let r1 = reorder_coefficients(x.c, y.a);
    let r2 = reorder_coefficients(x.d, y.b);
    let mut out = SmallVec::new();
    for (k1, &n1) in r1.iter().enumerate() {
        for (k2, &n2) in r2.iter().enumerate() {
            let (k1, k2) = (k1 as u32, k2 as u32);
            let m = NormalMonomial::new(x.a + y.a - k1, x.b + y.b - k2, x.c + y.c - k1, x.d + y.d - k2);
            out.push((m, n1 * n2, k1 + k2));
        }
    }
    out
}

fn times_big<C: ImaginaryUnit>(c: &C, n: i128, k: u32) -> C {
    // (-i)^k = i^(3k)
    let ipow = (3 * k) % 4;
    match i64::try_from(n) {
        Ok(small) => c.times_int_ipow(small, ipow),
        Err(_) => {
            let hi = (n >> 32) as i64;
            let lo = (n & 0xffff_ffff) as i64;
            let base = c.times_int(hi).times_int(1 << 32) + c.times_int(lo);
            base.times_int_ipow(1, ipow)
        }
    }
}

/// An element of the Weyl algebra with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylOperator<C> {
    terms: BTreeMap<NormalMonomial, C>,
}

impl<C: Scalar> Default for WeylOperator<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> WeylOperator<C> {
    pub fn identity() -> Self {
        Self::monomial(NormalMonomial::ID, C::one())
    }

    pub fn monomial(m: NormalMonomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn scalar(c: C) -> Self {
        Self::monomial(NormalMonomial::ID, c)
    }

    /// `q_j`, `j ∈ {1, 2}`.
    pub fn q(j: u8) -> Self {
        match j {
            1 => Self::monomial(NormalMonomial::new(1, 0, 0, 0), C::one()),
            2 => Self::monomial(NormalMonomial::new(0, 1, 0, 0), C::one()),
            _ => panic!("coordinate index must be 1 or 2"),
        }
    }

    /// `p_j`, `j ∈ {1, 2}`.
    pub fn p(j: u8) -> Self {
        match j {
            1 => Self::monomial(NormalMonomial::new(0, 0, 1, 0), C::one()),
            2 => Self::monomial(NormalMonomial::new(0, 0, 0, 1), C::one()),
            _ => panic!("coordinate index must be 1 or 2"),
        }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (NormalMonomial, C)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: NormalMonomial, c: C) {
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&NormalMonomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &NormalMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, a)| (*m, a.clone() * c.clone())))
    }

    pub fn map_coefficients<D: Scalar>(&self, mut f: impl FnMut(&C) -> D) -> WeylOperator<D> {
        WeylOperator::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// The set of grades `a + b - c - d` present.
    pub fn grade_spectrum(&self) -> BTreeSet<i64> {
        self.terms.keys().map(NormalMonomial::grade).collect()
    }

    /// The homogeneous component of grade `g`.
    pub fn grade_component(&self, g: i64) -> Self {
        self.filter(|m| m.grade() == g)
    }

    pub fn filter(&self, mut keep: impl FnMut(&NormalMonomial) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone())).collect() }
    }

    /// Maximal total degree; 0 for the zero operator.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(NormalMonomial::degree).max().unwrap_or(0)
    }

    /// Maximal order in the momenta.
    pub fn momentum_order(&self) -> u32 {
        self.terms.keys().map(NormalMonomial::momentum_order).max().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<NormalMonomial> {
        self.terms.keys().next_back().copied()
    }

    /// Exchange the coordinate labels 1 ↔ 2.
    pub fn swap_indices(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.swapped(), c.clone())).collect() }
    }
}

impl<C: ImaginaryUnit> WeylOperator<C> {
    /// Normal-ordered product `self * rhs`.
    pub fn normal_product(&self, rhs: &Self) -> Self {
        const PAR_THRESHOLD: usize = 4096;
        let lhs: Vec<_> = self.terms.iter().collect();
        let work = |chunk: &[(&NormalMonomial, &C)]| -> BTreeMap<NormalMonomial, C> {
            let mut acc = Self::zero();
            for (mx, cx) in chunk {
                for (my, cy) in &rhs.terms {
                    let base = (*cx).clone() * cy.clone();
                    for (m, n, k) in monomial_product(mx, my) {
                        acc.add_term(m, times_big(&base, n, k));
                    }
                }
            }
            acc.terms
        };
        if lhs.len() * rhs.terms.len() < PAR_THRESHOLD {
            return Self { terms: work(&lhs) };
        }
        // chunks are merged in order, so the result does not depend on the
        // thread count
        let chunk = lhs.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
        let parts: Vec<_> = lhs.par_chunks(chunk).map(work).collect();
        let mut out = Self::zero();
        for part in parts {
            for (m, c) in part {
                out.add_term(m, c);
            }
        }
        out
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.normal_product(rhs) - rhs.normal_product(self)
    }
}

/// `Σ γ_k D^k`-style parameter polynomial coefficients.
pub type ParamOperator = WeylOperator<Poly<GaussianRational>>;

impl WeylOperator<Poly<GaussianRational>> {
    /// Evaluate every γ_k. Fails with the smallest unassigned index.
    pub fn substitute_params(
        &self,
        assignment: &BTreeMap<u32, GaussianRational>,
    ) -> Result<WeylOperator<GaussianRational>> {
        let missing = self.params().into_iter().filter_map(Var::gamma_index).find(|k| !assignment.contains_key(k));
        if let Some(k) = missing {
            return Err(Error::MissingParameter(k));
        }
        let values: BTreeMap<Var, GaussianRational> =
            assignment.iter().map(|(&k, v)| (Var::gamma(k), v.clone())).collect();
        Ok(self.map_coefficients(|c| c.eval(&values).expect("all parameters assigned")))
    }

    /// Substitute only the listed parameters, keeping the rest symbolic.
    pub fn substitute_params_partial(&self, assignment: &BTreeMap<u32, GaussianRational>) -> Self {
        let values: BTreeMap<Var, GaussianRational> =
            assignment.iter().map(|(&k, v)| (Var::gamma(k), v.clone())).collect();
        self.map_coefficients(|c| c.eval_partial(&values))
    }

    /// Variables appearing in any coefficient.
    pub fn params(&self) -> BTreeSet<Var> {
        self.terms.values().flat_map(|c| c.vars()).collect()
    }

    /// Replace parameters by polynomials in other parameters.
    pub fn specialize(&self, values: &BTreeMap<Var, Poly<GaussianRational>>) -> Self {
        self.map_coefficients(|c| {
            values.iter().fold(c.clone(), |acc, (v, p)| if acc.mentions(*v) { acc.substitute(*v, p) } else { acc })
        })
    }

    /// Split as `Σ_α γ^α O_α` with numeric operators `O_α`.
    pub fn param_components(&self) -> BTreeMap<Monomial, WeylOperator<GaussianRational>> {
        let mut out: BTreeMap<Monomial, WeylOperator<GaussianRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (pm, z) in c.terms() {
                out.entry(pm.clone()).or_default().add_term(*m, z.clone());
            }
        }
        out
    }

    /// Inverse of [`WeylOperator::param_components`].
    pub fn from_param_components<'a>(
        parts: impl IntoIterator<Item = (&'a Monomial, &'a WeylOperator<GaussianRational>)>,
    ) -> Self {
        let mut out = Self::zero();
        for (pm, op) in parts {
            for (m, z) in op.terms() {
                out.add_term(*m, Poly::term(pm.clone(), z.clone()));
            }
        }
        out
    }
}

impl WeylOperator<GaussianRational> {
    /// View as an operator with (constant) parameter-polynomial coefficients.
    pub fn lift(&self) -> ParamOperator {
        self.map_coefficients(|c| Poly::constant(c.clone()))
    }
}

impl<C: Scalar> fmt::Debug for WeylOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c:?}) {m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<C: Scalar> Zero for WeylOperator<C> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: ImaginaryUnit> One for WeylOperator<C> {
    fn one() -> Self {
        Self::identity()
    }
}

impl<C: Scalar> AddAssign for WeylOperator<C> {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<C: Scalar> Add for WeylOperator<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<C: Scalar> Neg for WeylOperator<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Scalar> Sub for WeylOperator<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: ImaginaryUnit> Mul for WeylOperator<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.normal_product(&rhs)
    }
}

impl<'a, C: ImaginaryUnit> Mul<&'a WeylOperator<C>> for &'a WeylOperator<C> {
    type Output = WeylOperator<C>;
    fn mul(self, rhs: &WeylOperator<C>) -> WeylOperator<C> {
        self.normal_product(rhs)
    }
}

/// Lets the operator ring reuse the generic power and parsing helpers. The
/// product is not commutative; everything built on [`Scalar`] that is used
/// with operators only relies on associativity.
impl<C: ImaginaryUnit> Scalar for WeylOperator<C> {
    fn from_i64(n: i64) -> Self {
        Self::scalar(C::from_i64(n))
    }

    fn times_int(&self, n: i64) -> Self {
        self.map_coefficients(|c| c.times_int(n))
    }
}

impl<C: ImaginaryUnit> ImaginaryUnit for WeylOperator<C> {
    fn imag_unit() -> Self {
        Self::scalar(C::imag_unit())
    }

    fn times_int_ipow(&self, n: i64, k: u32) -> Self {
        self.map_coefficients(|c| c.times_int_ipow(n, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;

    type Op = WeylOperator<G>;

    fn op(s: &str) -> Op {
        parse_formula(s).unwrap().substitute_params(&BTreeMap::new()).unwrap()
    }

    #[test]
    fn ccr() {
        let i = Op::scalar(G::i());
        for j in 1..=2u8 {
            for k in 1..=2u8 {
                let expect = if j == k { i.clone() } else { Op::zero() };
                assert_eq!(Op::q(j).commutator(&Op::p(k)), expect);
                assert!(Op::q(j).commutator(&Op::q(k)).is_zero());
                assert!(Op::p(j).commutator(&Op::p(k)).is_zero());
            }
        }
    }

    #[test]
    fn single_rewrite() {
        assert_eq!(Op::p(1) * Op::q(1), op("q1 p1 - i"));
        assert_eq!(Op::q(1) * Op::p(1), op("q1 p1"));
    }

    #[test]
    fn dilation_squared() {
        let d = op("q1 p1 + q2 p2");
        let expect = op("q1^2 p1^2 + 2 q1 q2 p1 p2 + q2^2 p2^2 - i (q1 p1 + q2 p2)");
        assert_eq!(&d * &d, expect);
    }

    #[test]
    fn commutator_example() {
        assert_eq!(op("q1 p1").commutator(&op("p1^2")), op("2i p1^2"));
    }

    #[test]
    fn grades() {
        assert_eq!(op("q1 p2").grade_spectrum(), [0].into());
        assert_eq!(op("p1^2").grade_spectrum(), [-2].into());
        assert!(Op::zero().grade_spectrum().is_empty());
    }

    #[test]
    fn reorder_coefficients_small() {
        // p^2 q^2 = q^2 p^2 - 4i q p - 2
        assert_eq!(reorder_coefficients(2, 2).as_slice(), &[1, 4, 2]);
    }

    #[test]
    fn large_integer_factors() {
        let c = G::one();
        let n: i128 = (1i128 << 70) + 12345;
        let v = times_big(&c, n, 0);
        assert_eq!(v.re, num_rational::BigRational::from_integer(n.into()));
    }
}
