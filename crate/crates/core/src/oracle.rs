//! Exact matrix of `H_N` on polynomials in `q1, q2`.
//!
//! In the realization `p_j = −i ∂_j` the dilation `q·p` acts on a degree-m
//! homogeneous polynomial as `−i m`, and `p² = −∇²` lowers the degree by two.
//! So the matrix is block triangular in the degree, each diagonal block is
//! the scalar `Σ γ_k (−i m)^k`, and the spectrum can be read off exactly.
//! The construction uses these formulas directly rather than the operator
//! product, so comparing it with [`apply_to_polynomial`] is an independent
//! check of both.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::gaussian::GaussianRational;
use crate::poly::Var;
use crate::scalar::{Field, ImaginaryUnit};
use crate::spectrum::{Family, SpectrumSolution, TypeLabel};
use crate::weyl::{apply_to_polynomial, QPolynomial, WeylOperator};

/// `H_N` restricted to polynomials of degree at most `max_degree`.
///
/// Basis of degree m: `q1^(m−j) q2^j` for `j = 0..=m`.
#[derive(Clone, Debug)]
pub struct GradedMatrix<C> {
    pub max_degree: u32,
    /// `diagonal[m]` is the scalar by which `H` acts on degree m, modulo
    /// lower degrees.
    pub diagonal: Vec<C>,
    /// `lowering[m][row][col]`: degree m (column) into degree m − 2 (row).
    /// Empty for m < 2.
    pub lowering: Vec<Vec<Vec<C>>>,
}

/// `Σ γ_k (−i m)^k`.
pub fn diagonal_entry<C: ImaginaryUnit>(gammas: &[C], m: u32) -> C {
    let mut acc = C::zero();
    for (idx, g) in gammas.iter().enumerate() {
        let k = idx as u32 + 1;
        let mk = (m as i64).checked_pow(k).expect("degree power overflow");
        acc += g.times_int_ipow(mk, (3 * k) % 4);
    }
    acc
}

/// `−∇²` from degree m into degree m − 2.
fn laplacian_block<C: ImaginaryUnit>(m: u32) -> Vec<Vec<C>> {
    let mut block = vec![vec![C::zero(); m as usize + 1]; m as usize - 1];
    for j in 0..=m {
        let a = m - j;
        let b = j;
        // ∂1² q1^a q2^b = a(a−1) q1^(a−2) q2^b, which sits at index b
        if a >= 2 {
            block[b as usize][j as usize] += C::from_i64(-((a * (a - 1)) as i64));
        }
        if b >= 2 {
            block[(b - 2) as usize][j as usize] += C::from_i64(-((b * (b - 1)) as i64));
        }
    }
    block
}

pub fn build_matrix<C: ImaginaryUnit>(gammas: &[C], max_degree: u32) -> GradedMatrix<C> {
    let diagonal = (0..=max_degree).into_par_iter().map(|m| diagonal_entry(gammas, m)).collect();
    let lowering =
        (0..=max_degree).into_par_iter().map(|m| if m < 2 { Vec::new() } else { laplacian_block(m) }).collect();
    GradedMatrix { max_degree, diagonal, lowering }
}

fn basis_monomial(m: u32, j: u32) -> (u32, u32) {
    (m - j, j)
}

impl<C: ImaginaryUnit> GradedMatrix<C> {
    /// The image of the basis monomial `q1^(m−j) q2^j`.
    pub fn column(&self, m: u32, j: u32) -> QPolynomial<C> {
        let mut out = QPolynomial::new();
        out.insert(basis_monomial(m, j), self.diagonal[m as usize].clone());
        if m >= 2 {
            for (row, entries) in self.lowering[m as usize].iter().enumerate() {
                out.insert(basis_monomial(m - 2, row as u32), entries[j as usize].clone());
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Compare every column with the action of `op` (as a polynomial
    /// differential operator). Returns the monomials that disagree.
    pub fn mismatches_against(&self, op: &WeylOperator<C>) -> Vec<(u32, u32)> {
        let mut bad = Vec::new();
        for m in 0..=self.max_degree {
            for j in 0..=m {
                let f: QPolynomial<C> = [(basis_monomial(m, j), C::one())].into();
                if apply_to_polynomial(op, &f) != self.column(m, j) {
                    bad.push(basis_monomial(m, j));
                }
            }
        }
        bad
    }

    /// Every entry maps degree m to degree m or m − 2 (the storage enforces
    /// it); here we check the block shapes.
    pub fn is_graded_triangular(&self) -> bool {
        self.diagonal.len() == self.max_degree as usize + 1
            && self.lowering.iter().enumerate().all(|(m, block)| {
                if m < 2 {
                    block.is_empty()
                } else {
                    block.len() == m - 1 && block.iter().all(|r| r.len() == m + 1)
                }
            })
    }
}

/// Sparse eigenvector keyed by the `(x, y)` exponents of `q1^x q2^y`.
pub type Eigenvector<C> = Vec<((u32, u32), C)>;

/// One degree of the oracle spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeLevel<C> {
    pub degree: u32,
    pub eigenvalue: C,
    pub multiplicity: u32,
    /// Eigenvectors, one per basis monomial of this degree, when requested
    /// and not blocked by a resonance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Eigenvector<C>>>,
    /// Lower degree whose diagonal entry equals this one and blocked the
    /// back-substitution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resonance: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport<C> {
    pub max_degree: u32,
    pub levels: Vec<DegreeLevel<C>>,
}

impl<C: ImaginaryUnit + Field> OracleReport<C> {
    /// Distinct eigenvalues with their total multiplicities.
    pub fn eigenvalue_multiplicities(&self) -> Vec<(C, u32)> {
        let mut out: Vec<(C, u32)> = Vec::new();
        for l in &self.levels {
            match out.iter_mut().find(|(v, _)| *v == l.eigenvalue) {
                Some(slot) => slot.1 += l.multiplicity,
                None => out.push((l.eigenvalue.clone(), l.multiplicity)),
            }
        }
        out
    }
}

/// Solve `(H − λ_m) v = 0` with `v` starting at a basis monomial of degree
/// m, descending two degrees at a time. `Err(d)` names the resonant degree.
fn eigenvector<C: ImaginaryUnit + Field>(mat: &GradedMatrix<C>, m: u32, j: u32) -> Result<Eigenvector<C>, u32> {
    let lambda = &mat.diagonal[m as usize];
    let mut out = vec![(basis_monomial(m, j), C::one())];
    let mut current: Vec<C> = (0..=m).map(|i| if i == j { C::one() } else { C::zero() }).collect();
    let mut d = m;
    while d >= 2 {
        let block = &mat.lowering[d as usize];
        let image: Vec<C> = block
            .iter()
            .map(|row| row.iter().zip(&current).fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect();
        if image.iter().all(|c| c.is_zero()) {
            break;
        }
        let gap = lambda.clone() - mat.diagonal[d as usize - 2].clone();
        let inv = gap.checked_inv().ok_or(d - 2)?;
        current = image.into_iter().map(|c| c * inv.clone()).collect();
        d -= 2;
        for (i, c) in current.iter().enumerate() {
            if !c.is_zero() {
                out.push((basis_monomial(d, i as u32), c.clone()));
            }
        }
    }
    Ok(out)
}

/// Eigenvalues (with multiplicity `m + 1` per degree) and, optionally,
/// eigenvectors by back-substitution.
pub fn oracle_spectrum<C: ImaginaryUnit + Field>(mat: &GradedMatrix<C>, with_eigenvectors: bool) -> OracleReport<C> {
    let levels = (0..=mat.max_degree)
        .into_par_iter()
        .map(|m| {
            let mut level = DegreeLevel {
                degree: m,
                eigenvalue: mat.diagonal[m as usize].clone(),
                multiplicity: m + 1,
                eigenvectors: None,
                resonance: None,
            };
            if with_eigenvectors {
                match (0..=m).map(|j| eigenvector(mat, m, j)).collect::<Result<Vec<_>, u32>>() {
                    Ok(vs) => level.eigenvectors = Some(vs),
                    Err(d) => level.resonance = Some(d),
                }
            }
            level
        })
        .collect();
    OracleReport { max_degree: mat.max_degree, levels }
}

type G = GaussianRational;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FormulaComparison {
    Matched {
        degrees: u32,
    },
    Mismatched {
        mismatches: Vec<(u32, G, G)>,
    },
    /// Only Type I spectra live on polynomial eigenfunctions.
    NotOracleComparable {
        type_label: TypeLabel,
    },
}

/// Compare the oracle levels with `E(m)` of a Type I family at `gammas`.
pub fn compare_with_formula(report: &OracleReport<G>, solution: &SpectrumSolution, gammas: &[G]) -> FormulaComparison {
    let energy = match (&solution.family, solution.type_label) {
        (Family::Explicit { energy, .. }, TypeLabel::I) => energy.as_rf().expect("Type I is rational").clone(),
        _ => return FormulaComparison::NotOracleComparable { type_label: solution.type_label },
    };
    let mut values: BTreeMap<Var, G> =
        gammas.iter().enumerate().map(|(i, g)| (Var::gamma(i as u32 + 1), g.clone())).collect();
    let mut mismatches = Vec::new();
    for level in &report.levels {
        values.insert(Var::N, G::from_ints(level.degree as i64, 0));
        let formula = energy
            .eval_partial(&values)
            .and_then(|v| v.as_poly().filter(|p| p.is_constant()).map(|p| p.constant_term()));
        match formula {
            Some(f) if f == level.eigenvalue => {}
            Some(f) => mismatches.push((level.degree, level.eigenvalue.clone(), f)),
            None => mismatches.push((level.degree, level.eigenvalue.clone(), G::from_ints(0, 0))),
        }
    }
    if mismatches.is_empty() {
        FormulaComparison::Matched { degrees: report.levels.len() as u32 }
    } else {
        FormulaComparison::Mismatched { mismatches }
    }
}
