//! The Hamiltonians `H_N`, the angular momentum `C`, the quadratic-leading
//! symmetries `I_N`, `I'_N` and the graded ansatz that produces them.
//!
//! A symmetry with leading part `p_l²` is sought as `I = p_l² + X` with `X`
//! of grade zero. Grade-zero operators commute with every power of the
//! dilation `D = q·p`, so `[I, H_N] = 0` collapses to the linear system
//!
//! ```text
//! [X, p²] = Σ_k γ_k [D^k, p_l²]
//! ```
//!
//! whose matrix does not depend on γ. Each `γ_k` column of the right-hand
//! side is solved separately over the Gaussian rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::linalg::{solve_many, span_coefficients};
use crate::poly::{Monomial, Var};
use crate::scalar::Scalar;
use crate::weyl::{parse_formula, NormalMonomial, WeylOperator};
use crate::{ExactOperator, Operator, ParamScalar};

/// The order `N` and the coefficients γ_1..γ_N (symbolic or numeric).
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    order: u32,
    params: Vec<ParamScalar>,
}

impl HamiltonianSpec {
    /// All γ_k left as free symbols.
    pub fn symbolic(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(order));
        }
        Ok(Self { order, params: (1..=order).map(ParamScalar::gamma).collect() })
    }

    /// Concrete values; the last one must be nonzero.
    pub fn numeric(values: &[GaussianRational]) -> Result<Self> {
        let order = values.len() as u32;
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        if values[values.len() - 1].is_zero() {
            return Err(Error::VanishingLeadingParameter(order));
        }
        Ok(Self { order, params: values.iter().cloned().map(ParamScalar::constant).collect() })
    }

    /// Arbitrary parameter polynomials (no check on γ_N).
    pub fn from_params(params: Vec<ParamScalar>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::InvalidOrder(0));
        }
        Ok(Self { order: params.len() as u32, params })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn params(&self) -> &[ParamScalar] {
        &self.params
    }

    /// γ_k, zero beyond the order.
    pub fn gamma(&self, k: u32) -> ParamScalar {
        self.params.get(k as usize - 1).cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn is_symbolic(&self) -> bool {
        self.params.iter().enumerate().all(|(i, p)| *p == ParamScalar::gamma(i as u32 + 1))
    }

    /// Substitution `γ_k ↦ params[k]` for operators written with symbolic γ.
    pub fn substitution(&self) -> BTreeMap<Var, ParamScalar> {
        (1..=self.order.max(5)).map(|k| (Var::gamma(k), self.gamma(k))).collect()
    }

    /// Numeric values of all γ_k, if every parameter is a constant.
    pub fn numeric_values(&self) -> Option<Vec<GaussianRational>> {
        self.params.iter().map(|p| p.is_constant().then(|| p.constant_term())).collect()
    }
}

/// `D = q1 p1 + q2 p2`.
pub fn dilation<C: crate::ImaginaryUnit>() -> WeylOperator<C> {
    WeylOperator::q(1) * WeylOperator::p(1) + WeylOperator::q(2) * WeylOperator::p(2)
}

/// `p² = p1² + p2²`.
pub fn laplacian<C: crate::ImaginaryUnit>() -> WeylOperator<C> {
    WeylOperator::monomial(NormalMonomial::new(0, 0, 2, 0), C::one())
        + WeylOperator::monomial(NormalMonomial::new(0, 0, 0, 2), C::one())
}

/// `H_N = p² + Σ γ_k D^k`.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Operator {
    let d: Operator = dilation();
    let mut h = laplacian();
    let mut dk = Operator::one();
    for k in 1..=spec.order {
        dk = &dk * &d;
        h += dk.scale(&spec.gamma(k));
    }
    h
}

/// `C = q1 p2 - q2 p1`.
pub fn build_angular_momentum<C: crate::ImaginaryUnit>() -> WeylOperator<C> {
    WeylOperator::q(1) * WeylOperator::p(2) - WeylOperator::q(2) * WeylOperator::p(1)
}

/// A pair of symmetries with leading parts `p2²` (`i`) and `p1²` (`i_prime`).
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryPair {
    pub i: Operator,
    pub i_prime: Operator,
    pub order: u32,
    pub source: Source,
}

/// Where a [`SymmetryPair`] came from. The two differ by polynomials in `C`,
/// so they satisfy differently shaped dependence relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// The closed forms for `N = 2..=5`.
    Tabulated,
    /// Particular solutions of the graded ansatz, any `N`.
    Derived,
}

impl SymmetryPair {
    /// `([I, H], [I', H])`.
    pub fn residuals(&self, h: &Operator) -> (Operator, Operator) {
        (self.i.commutator(h), self.i_prime.commutator(h))
    }
}

const I_PRIME_TERMS: [&str; 5] = [
    "p1^2 + g1 q1 p1",
    "g2 (q1^2 + q2^2) p1^2",
    "g3 (q1^3 (p1^3 - p1 p2^2) + (q2^3 + 3 q1^2 q2) p1^2 p2 - 3i q1^2 p1^2 - 3i q1 q2 p1 p2 - q1 p1)",
    "g4 ((q1^4 - q2^4)(p1^4 - p1^2 p2^2) + 4 (q1 q2^3 + q1^3 q2) p1^3 p2 - 6i (q1^3 + q1 q2^2) p1^3 \
     - 6i (q2^3 + q1^2 q2) p1^2 p2 - 4 (q1^2 + q2^2) p1^2)",
    "g5 (q1^5 (p1^5 + p1 p2^4) - (q2^5 - 5 q1^4 q2)(p1^4 p2 - p1^2 p2^3) \
     - (q1^5 - 10 q1^3 q2^2 - 5 q1 q2^4) p1^3 p2^2 - 10i q1^4 (p1^4 - p1^2 p2^2) \
     - 10i (q1 q2^3 + 4 q1^3 q2) p1^3 p2 - 10i (q2^4 + 3 q1^2 q2^2) p1^2 p2^2 \
     + 10i q1^3 q2 p1 p2^3 - 25 q1^3 p1^3 - 10 (q2^3 + 6 q1^2 q2) p1^2 p2 \
     + 5 (2 q1^3 - 3 q1 q2^2) p1 p2^2 + 15i q1^2 p1^2 + 15i q1 q2 p1 p2 + q1 p1)",
];

const I_TERMS: [&str; 4] = [
    "p2^2 + g1 q2 p2",
    "g2 ((q1^2 + q2^2) p2^2 - C^2)",
    "g3 (q2^3 (p2^3 - p1^2 p2) + (q1^3 + 3 q1 q2^2) p1 p2^2 - 3i q2^2 p2^2 - 3i q1 q2 p1 p2 - q2 p2)",
    "g4 ((q2^4 - q1^4)(p2^4 - p1^2 p2^2) + 4 (q1^3 q2 + q1 q2^3) p1 p2^3 - 6i (q2^3 + q1^2 q2) p2^3 \
     - 6i (q1^3 + q1 q2^2) p1 p2^2 - 4 (q1^2 + q2^2) p2^2 + 4 C^2)",
];

fn sum_terms(terms: &[&str]) -> Operator {
    terms.iter().map(|t| parse_formula(t).expect("built-in formula parses")).fold(Operator::zero(), |a, b| a + b)
}

/// `4γ_4 C² − γ_4 C⁴`, the correction in the dependence relation for `N ≥ 4`.
fn dependence_correction(spec: &HamiltonianSpec) -> Operator {
    if spec.order < 4 {
        return Operator::zero();
    }
    let c: Operator = build_angular_momentum();
    let c2 = &c * &c;
    let c4 = &c2 * &c2;
    let g4 = spec.gamma(4);
    c2.scale(&(g4.times_int(4))) - c4.scale(&g4)
}

/// The tabulated symmetries for `N = 2..=5`, specialized to `spec`'s
/// parameters. For `N = 5` only `I'` is tabulated and `I` is recovered from
/// the dependence relation.
pub fn tabulated_symmetries(spec: &HamiltonianSpec) -> Result<SymmetryPair> {
    let n = spec.order;
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedOrder(n, "2..=5"));
    }
    let sub = spec.substitution();
    let i_prime = sum_terms(&I_PRIME_TERMS[..n as usize]).specialize(&sub);
    let i = if n <= 4 {
        sum_terms(&I_TERMS[..n as usize]).specialize(&sub)
    } else {
        build_hamiltonian(spec) - i_prime.clone() + dependence_correction(spec)
    };
    Ok(SymmetryPair { i, i_prime, order: n, source: Source::Tabulated })
}

/// Particular solutions of the ansatz for both leading terms. These satisfy
/// `H = I + I'` exactly at every order.
pub fn derived_symmetries(spec: &HamiltonianSpec) -> Result<SymmetryPair> {
    let i = solve_symmetry_ansatz(spec, Leading::P2)?.particular;
    let i_prime = solve_symmetry_ansatz(spec, Leading::P1)?.particular;
    Ok(SymmetryPair { i, i_prime, order: spec.order, source: Source::Derived })
}

/// Tabulated symmetries where they exist, derived ones otherwise.
pub fn symmetries(spec: &HamiltonianSpec) -> Result<SymmetryPair> {
    match spec.order {
        2..=5 => tabulated_symmetries(spec),
        _ => derived_symmetries(spec),
    }
}

/// `H − I − I'`, plus `4γ_4 C² − γ_4 C⁴` for tabulated pairs at N = 4, 5.
pub fn check_dependence_relation(spec: &HamiltonianSpec, pair: &SymmetryPair) -> Result<Operator> {
    let plain = build_hamiltonian(spec) - pair.i.clone() - pair.i_prime.clone();
    match pair.source {
        Source::Derived => Ok(plain),
        Source::Tabulated if (2..=5).contains(&spec.order) => Ok(plain + dependence_correction(spec)),
        Source::Tabulated => Err(Error::UnsupportedOrder(spec.order, "2..=5")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Leading {
    /// `p1²`, giving `I'`.
    P1,
    /// `p2²`, giving `I`.
    P2,
}

impl Leading {
    fn monomial(self) -> NormalMonomial {
        match self {
            Leading::P1 => NormalMonomial::new(0, 0, 2, 0),
            Leading::P2 => NormalMonomial::new(0, 0, 0, 2),
        }
    }
}

/// `particular + span(homogeneous_basis)` with exact-rational span
/// coefficients that may be polynomials in γ.
#[derive(Clone, Debug, Serialize)]
pub struct AnsatzSolutionSpace {
    pub order: u32,
    pub leading: Leading,
    pub particular: Operator,
    pub homogeneous_basis: Vec<ExactOperator>,
    /// Number of unknowns in the ansatz.
    pub unknowns: usize,
}

impl AnsatzSolutionSpace {
    /// Whether `op − particular` is a combination of the homogeneous basis
    /// with γ-polynomial coefficients.
    pub fn contains(&self, op: &Operator) -> bool {
        let diff = op.clone() - self.particular.clone();
        diff.param_components().values().all(|part| in_span(&self.homogeneous_basis, part))
    }
}

fn in_span(basis: &[ExactOperator], op: &ExactOperator) -> bool {
    let mut index: BTreeMap<NormalMonomial, usize> = BTreeMap::new();
    for m in basis.iter().chain(std::iter::once(op)).flat_map(|b| b.terms().map(|(m, _)| *m)) {
        let len = index.len();
        index.entry(m).or_insert(len);
    }
    let vec_of = |o: &ExactOperator| {
        let mut v = vec![GaussianRational::zero(); index.len()];
        for (m, c) in o.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let b: Vec<_> = basis.iter().map(vec_of).collect();
    span_coefficients(&b, &vec_of(op)).is_some()
}

/// Grade-zero monomials with `1 <= momentum order <= n`, ascending.
fn ansatz_monomials(n: u32) -> Vec<NormalMonomial> {
    let mut out = Vec::new();
    for s in 1..=n {
        for a in 0..=s {
            for c in 0..=s {
                out.push(NormalMonomial::new(a, s - a, c, s - c));
            }
        }
    }
    out.sort();
    out
}

/// Solve `[p_l² + X, H_N] = 0` for grade-zero `X` of degree `<= 2N`.
///
/// The identity is left out of the ansatz (it commutes with everything).
/// Among the affine solutions the one with all free unknowns set to zero is
/// returned as `particular`.
pub fn solve_symmetry_ansatz(spec: &HamiltonianSpec, leading: Leading) -> Result<AnsatzSolutionSpace> {
    let n = spec.order;
    let p2: ExactOperator = laplacian();
    let d: ExactOperator = dilation();
    let lead = ExactOperator::monomial(leading.monomial(), GaussianRational::one());

    let unknowns = ansatz_monomials(n);
    let columns: Vec<ExactOperator> =
        unknowns.iter().map(|m| ExactOperator::monomial(*m, GaussianRational::one()).commutator(&p2)).collect();
    let mut dk = ExactOperator::one();
    let rhs_ops: Vec<ExactOperator> = (1..=n)
        .map(|_| {
            dk = &dk * &d;
            dk.commutator(&lead)
        })
        .collect();

    let mut rows: BTreeMap<NormalMonomial, usize> = BTreeMap::new();
    for op in columns.iter().chain(&rhs_ops) {
        for (m, _) in op.terms() {
            let len = rows.len();
            rows.entry(*m).or_insert(len);
        }
    }
    let mut a = vec![vec![GaussianRational::zero(); columns.len()]; rows.len()];
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            a[rows[m]][j] = c.clone();
        }
    }
    let rhs: Vec<Vec<GaussianRational>> = rhs_ops
        .iter()
        .map(|op| {
            let mut b = vec![GaussianRational::zero(); rows.len()];
            for (m, c) in op.terms() {
                b[rows[m]] = c.clone();
            }
            b
        })
        .collect();

    let sol = solve_many(&a, columns.len(), &rhs);
    let to_op = |x: &[GaussianRational]| -> ExactOperator {
        ExactOperator::from_terms(unknowns.iter().zip(x).map(|(m, c)| (*m, c.clone())))
    };
    let mut particular = lead.lift();
    for (k, x) in sol.particular.iter().enumerate() {
        let k = k as u32 + 1;
        let gamma = spec.gamma(k);
        let x = match x {
            Some(x) => x,
            None if gamma.is_zero() => continue,
            None => return Err(Error::InconsistentAnsatz { order: n, gamma: k }),
        };
        particular += to_op(x).lift().scale(&gamma);
    }
    let homogeneous_basis = sol.kernel.iter().map(|v| to_op(v)).collect();
    Ok(AnsatzSolutionSpace { order: n, leading, particular, homogeneous_basis, unknowns: unknowns.len() })
}

/// Coefficients of `op` in terms of `{γ^α}`; convenience for reports.
pub fn param_monomials(op: &Operator) -> Vec<Monomial> {
    op.param_components().into_keys().collect()
}
