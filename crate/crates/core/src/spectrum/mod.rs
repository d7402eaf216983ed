//! Algebraic spectra from finite-dimensional representations of the
//! deformed oscillator algebra.
//!
//! With `K ↦ B + u` and `H ↦ E` the structure function factors as
//!
//! ```text
//! Φ1(B, E, u) = (E − Σ (2i)^k γ_k (B + u)^k) / 4
//! Φ2(B, E, u) =  E − Σ (−2i)^k γ_k (B + u − 1)^k
//! ```
//!
//! and an `(n+1)`-dimensional representation needs `Φ(0) = Φ(n+1) = 0`.
//! Each of the four branches `Φ_i(0) = 0`, `Φ_j(n+1) = 0` is linear in `E`;
//! eliminating `E` leaves one polynomial in `u` per branch.

pub mod roots;
pub mod surd;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::{Monomial, Var};
use crate::ratfun::RationalFunction as RF;
use crate::scalar::{Field, Scalar};
use crate::symmetries::HamiltonianSpec;
use crate::ParamScalar;

pub use roots::{polynomial_roots, PolishedRoot};
pub use surd::Surd;

type G = GaussianRational;

/// One factor of the representation-level structure function, a polynomial
/// in `B, E, u` (and γ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepPolynomial {
    pub expression: ParamScalar,
    pub factor_index: u8,
}

fn pvar(v: Var) -> ParamScalar {
    ParamScalar::var(v)
}

/// `(±2i)^k`.
fn two_i_pow(k: u32, sign: i64) -> G {
    G::from_ints(sign.pow(k) * (1 << k), 0).mul_ipow(k)
}

/// `Σ c_k γ_k x^k` with `c_k = (sign·2i)^k`.
fn gamma_series(spec: &HamiltonianSpec, x: &ParamScalar, sign: i64) -> ParamScalar {
    let mut s = ParamScalar::zero();
    for k in 1..=spec.order() {
        s += (spec.gamma(k) * x.pow(k)).scale(&two_i_pow(k, sign));
    }
    s
}

pub fn rep_structure_function(spec: &HamiltonianSpec) -> [RepPolynomial; 2] {
    let e = pvar(Var::E);
    let x = pvar(Var::B) + pvar(Var::U);
    let phi1 = (e.clone() - gamma_series(spec, &x, 1)).scale(&G::ratio(1, 4));
    let phi2 = e - gamma_series(spec, &(x - ParamScalar::one()), -1);
    [RepPolynomial { expression: phi1, factor_index: 1 }, RepPolynomial { expression: phi2, factor_index: 2 }]
}

/// Which factor vanishes at `B = 0` and which at `B = n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Branch {
    pub at_zero: u8,
    pub at_top: u8,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi{}(0)=0, Phi{}(n+1)=0", self.at_zero, self.at_top)
    }
}

pub const BRANCHES: [Branch; 4] = [
    Branch { at_zero: 1, at_top: 1 },
    Branch { at_zero: 1, at_top: 2 },
    Branch { at_zero: 2, at_top: 1 },
    Branch { at_zero: 2, at_top: 2 },
];

/// `E` as a polynomial in `u` from `Φ_i(0) = 0`, and the eliminant
/// `Φ_j(n + 1)` after substituting it.
#[derive(Clone, Debug)]
pub struct BranchEliminant {
    pub branch: Branch,
    pub energy: ParamScalar,
    pub eliminant: ParamScalar,
}

pub fn branch_eliminants(spec: &HamiltonianSpec) -> Vec<BranchEliminant> {
    let phis = rep_structure_function(spec);
    let top = pvar(Var::N) + ParamScalar::one();
    BRANCHES
        .iter()
        .map(|&branch| {
            let at_zero = phis[branch.at_zero as usize - 1].expression.substitute(Var::B, &ParamScalar::zero());
            let c = at_zero.coefficients_in(Var::E);
            assert!(c.len() == 2 && c[1].is_constant(), "each factor is linear in E");
            let energy = (-c[0].clone()).scale(&c[1].constant_term().checked_inv().expect("nonzero"));
            let eliminant =
                phis[branch.at_top as usize - 1].expression.substitute(Var::B, &top).substitute(Var::E, &energy);
            BranchEliminant { branch, energy, eliminant }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TypeLabel {
    I,
    II,
    III,
    IV,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeLabel::I => "I",
            TypeLabel::II => "II",
            TypeLabel::III => "III",
            TypeLabel::IV => "IV",
            TypeLabel::Other => "other",
        })
    }
}

/// A family of solutions `(u(n), E(n))`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Family {
    /// Closed form in `n` and γ (at most one square root).
    Explicit {
        u: Surd,
        energy: Surd,
        /// `[Φ1(B, n), Φ2(B, n)]` when `u` and `E` are rational.
        phi: Option<[RF; 2]>,
    },
    /// The roots of `eliminant(u) = 0` (degree `roots`), with `E = energy(u)`.
    Algebraic { eliminant: ParamScalar, energy: ParamScalar, roots: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSolution {
    pub branch: Branch,
    pub family: Family,
    pub type_label: TypeLabel,
    /// Whether `u` and `E` stay finite as each γ_k → 0.
    pub limit_valid: BTreeMap<u32, bool>,
}

impl SpectrumSolution {
    /// Number of `(u, E)` pairs this family stands for.
    pub fn root_count(&self) -> u32 {
        match &self.family {
            Family::Explicit { .. } => 1,
            Family::Algebraic { roots, .. } => *roots,
        }
    }

    /// `Φ(B, n) = Φ1 Φ2` for rational families.
    pub fn phi_product(&self) -> Option<RF> {
        match &self.family {
            Family::Explicit { phi: Some([a, b]), .. } => Some(a.clone() * b.clone()),
            _ => None,
        }
    }

    /// Whether `u` and `E` remain finite when all of `ks` vanish together.
    pub fn finite_when_vanishing(&self, ks: &[u32]) -> bool {
        let zeros: BTreeMap<Var, G> = ks.iter().map(|&k| (Var::gamma(k), G::zero())).collect();
        match &self.family {
            Family::Explicit { u, energy, .. } => u
                .finiteness_witnesses()
                .iter()
                .chain(&energy.finiteness_witnesses())
                .all(|w| !w.denominator().eval_partial(&zeros).is_zero()),
            Family::Algebraic { eliminant, .. } => {
                let lead = eliminant.coefficients_in(Var::U).pop().unwrap_or_default();
                !lead.eval_partial(&zeros).is_zero()
            }
        }
    }
}

fn rf(p: ParamScalar) -> RF {
    RF::from_poly(p)
}

/// `−n/2`.
fn half_minus_n() -> RF {
    rf(pvar(Var::N).scale(&G::ratio(-1, 2)))
}

/// `Σ (−i)^k γ_k n^k`.
pub fn energy_type_i(spec: &HamiltonianSpec) -> ParamScalar {
    let n = pvar(Var::N);
    (1..=spec.order())
        .map(|k| (spec.gamma(k) * n.pow(k)).scale(&G::one().mul_ipow(3 * k)))
        .fold(ParamScalar::zero(), |a, b| a + b)
}

/// `Σ i^k γ_k (n + 2)^k`.
pub fn energy_type_ii(spec: &HamiltonianSpec) -> ParamScalar {
    let n2 = pvar(Var::N) + ParamScalar::from_i64(2);
    (1..=spec.order())
        .map(|k| (spec.gamma(k) * n2.pow(k)).scale(&G::one().mul_ipow(k)))
        .fold(ParamScalar::zero(), |a, b| a + b)
}

/// `(u, E)` of the quadratic-only families III and IV.
fn quadratic_special(spec: &HamiltonianSpec) -> Option<[(RF, RF); 2]> {
    if spec.order() != 2 || spec.gamma(2).is_zero() {
        return None;
    }
    let g1 = rf(spec.gamma(1));
    let g2 = rf(spec.gamma(2));
    let n = rf(pvar(Var::N));
    let one = RF::one();
    let ig1_4g2 = rf(spec.gamma(1).scale(&G::i())) / (g2.clone() * RF::from_i64(4));
    let half = RF::constant(G::ratio(1, 2));
    let energy = -(g1.clone() * g1) / (g2.clone() * RF::from_i64(4)) - g2 * (n.clone() + one.clone()).pow(2);
    let u3 = -(half.clone() * (n.clone() - one.clone() + ig1_4g2.times_int(2)));
    let u4 = -(half * (n + one - ig1_4g2.times_int(2)));
    Some([(u3, energy.clone()), (u4, energy)])
}

/// Label a family with rational `u`, `E`.
fn classify_rational(spec: &HamiltonianSpec, u: &RF, e: &RF) -> TypeLabel {
    if *u == half_minus_n() {
        if *e == rf(energy_type_i(spec)) {
            return TypeLabel::I;
        }
        if *e == rf(energy_type_ii(spec)) {
            return TypeLabel::II;
        }
    }
    if let Some([iii, iv]) = quadratic_special(spec) {
        if (u, e) == (&iii.0, &iii.1) {
            return TypeLabel::III;
        }
        if (u, e) == (&iv.0, &iv.1) {
            return TypeLabel::IV;
        }
    }
    TypeLabel::Other
}

pub fn classify_type(spec: &HamiltonianSpec, solution: &SpectrumSolution) -> TypeLabel {
    match &solution.family {
        Family::Explicit { u, energy, .. } => match (u.as_rf(), energy.as_rf()) {
            (Some(u), Some(e)) => classify_rational(spec, u, e),
            _ => TypeLabel::Other,
        },
        Family::Algebraic { .. } => TypeLabel::Other,
    }
}

/// Strip monomial content free of `u` and factors `n + 1`.
fn normalize_residual(p: ParamScalar) -> ParamScalar {
    let content = p.monomial_content();
    let strip = Monomial::from_pairs(content.pairs().filter(|(v, _)| *v != Var::U));
    let mut p = p.div_monomial(&strip).expect("content divides");
    let n1 = pvar(Var::N) + ParamScalar::one();
    while p.degree_in(Var::N) > 0 {
        match p.div_exact(&n1) {
            Some(q) => p = q,
            None => break,
        }
    }
    p
}

fn gamma_vars(spec: &HamiltonianSpec) -> BTreeSet<u32> {
    spec.params().iter().flat_map(|p| p.vars()).filter_map(Var::gamma_index).collect()
}

fn explicit_solution(spec: &HamiltonianSpec, elim: &BranchEliminant, u: Surd) -> SpectrumSolution {
    let coeffs: Vec<RF> = elim.energy.coefficients_in(Var::U).into_iter().map(rf).collect();
    let energy = u.eval_poly(&coeffs);
    let phi = match (u.as_rf(), energy.as_rf()) {
        (Some(uu), Some(ee)) => {
            let phis = rep_structure_function(spec);
            Some(phis.map(|p| rf(p.expression).substitute(Var::U, uu).substitute(Var::E, ee)))
        }
        _ => None,
    };
    let type_label = match (u.as_rf(), energy.as_rf()) {
        (Some(uu), Some(ee)) => classify_rational(spec, uu, ee),
        _ => TypeLabel::Other,
    };
    let mut sol = SpectrumSolution {
        branch: elim.branch,
        family: Family::Explicit { u, energy, phi },
        type_label,
        limit_valid: BTreeMap::new(),
    };
    sol.limit_valid = gamma_vars(spec).into_iter().map(|k| (k, sol.finite_when_vanishing(&[k]))).collect();
    sol
}

/// All solution families with `n` kept symbolic. The root `u = −n/2` is
/// split off exactly; residual factors of degree one or two are solved in
/// closed form, higher ones are returned as algebraic descriptors.
pub fn solve_symbolic(spec: &HamiltonianSpec) -> Vec<SpectrumSolution> {
    let mut out: Vec<SpectrumSolution> = Vec::new();
    let lin = pvar(Var::U).times_int(2) + pvar(Var::N);
    for elim in branch_eliminants(spec) {
        let mut rest = elim.eliminant.clone();
        let mut found = Vec::new();
        if let Some(q) = rest.div_exact(&lin) {
            found.push(explicit_solution(spec, &elim, Surd::from_rf(half_minus_n())));
            rest = q;
        }
        let rest = normalize_residual(rest);
        let c: Vec<RF> = rest.coefficients_in(Var::U).into_iter().map(rf).collect();
        match c.len() {
            0 | 1 => {}
            2 => {
                let u = -(c[0].clone() / c[1].clone());
                found.push(explicit_solution(spec, &elim, Surd::from_rf(u)));
            }
            3 => {
                let two_a = c[2].times_int(2);
                let disc = c[1].clone() * c[1].clone() - c[2].times_int(4) * c[0].clone();
                let p = -(c[1].clone() / two_a.clone());
                let q = RF::one() / two_a;
                for sign in [1, -1] {
                    let u = Surd::new(p.clone(), q.times_int(sign), disc.clone());
                    found.push(explicit_solution(spec, &elim, u));
                }
            }
            d => {
                let mut sol = SpectrumSolution {
                    branch: elim.branch,
                    family: Family::Algebraic { eliminant: rest, energy: elim.energy.clone(), roots: d as u32 - 1 },
                    type_label: TypeLabel::Other,
                    limit_valid: BTreeMap::new(),
                };
                sol.limit_valid = gamma_vars(spec).into_iter().map(|k| (k, sol.finite_when_vanishing(&[k]))).collect();
                found.push(sol);
            }
        }
        for sol in found {
            let dup = out.iter().any(|o| match (&o.family, &sol.family) {
                (Family::Explicit { u: u1, energy: e1, .. }, Family::Explicit { u: u2, energy: e2, .. }) => {
                    u1 == u2 && e1 == e2
                }
                _ => false,
            });
            if !dup {
                out.push(sol);
            }
        }
    }
    out
}

/// The default limit set `{k : 3 <= k <= N}`.
pub fn default_vanish_set(order: u32) -> BTreeSet<u32> {
    (3..=order).collect()
}

/// Keep the families that stay finite as each γ_k in `vanish_set` → 0 and
/// as all of them vanish together.
pub fn filter_well_defined(solutions: &[SpectrumSolution], vanish_set: &BTreeSet<u32>) -> Vec<SpectrumSolution> {
    let all: Vec<u32> = vanish_set.iter().copied().collect();
    solutions
        .iter()
        .filter(|s| all.iter().all(|&k| s.finite_when_vanishing(&[k])) && s.finite_when_vanishing(&all))
        .cloned()
        .collect()
}

/// Numeric cross-check of a limit: evaluate the family with γ_k = ε for
/// ε ∈ {1e-2, 1e-4, 1e-6} and the other parameters from `values`; the
/// family is bounded if its largest root magnitude grows by less than ten.
pub fn bounded_along_limit(solution: &SpectrumSolution, k: u32, values: &BTreeMap<Var, Complex64>) -> bool {
    let sizes: Vec<f64> = [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&eps| {
            let mut v = values.clone();
            v.insert(Var::gamma(k), Complex64::new(eps, 0.0));
            family_magnitude(solution, &v).unwrap_or(f64::INFINITY)
        })
        .collect();
    sizes.iter().all(|s| s.is_finite()) && sizes[2] <= 10.0 * sizes[0].max(1.0)
}

fn family_magnitude(solution: &SpectrumSolution, v: &BTreeMap<Var, Complex64>) -> Option<f64> {
    match &solution.family {
        Family::Explicit { u, energy, .. } => Some(u.eval_complex(v)?.norm().max(energy.eval_complex(v)?.norm())),
        Family::Algebraic { eliminant, energy, .. } => {
            let coeffs = complex_coefficients(eliminant, v)?;
            let ecoeffs = complex_coefficients(energy, v)?;
            let roots = polynomial_roots(&coeffs)?;
            let mut m: f64 = 0.0;
            for r in roots {
                m = m.max(r.value.norm()).max(roots::horner(&ecoeffs, r.value).0.norm());
            }
            Some(m)
        }
    }
}

/// Coefficients in `u` evaluated at `v`, trimmed of (exactly) vanishing
/// leading terms.
fn complex_coefficients(p: &ParamScalar, v: &BTreeMap<Var, Complex64>) -> Option<Vec<Complex64>> {
    let mut out = Vec::new();
    for c in p.coefficients_in(Var::U) {
        out.push(c.map_coeffs(G::to_complex64).eval(v)?);
    }
    while out.last().is_some_and(|c| c.norm() == 0.0) {
        out.pop();
    }
    Some(out)
}

/// One numeric `(u, E)` pair at a fixed `n`.
#[derive(Clone, Debug, Serialize)]
pub struct NumericSolution {
    pub branch: Branch,
    pub n: u32,
    pub u: Complex64,
    pub energy: Complex64,
    /// Size of the Newton correction applied to the companion-matrix root.
    pub newton_step: f64,
    /// Largest constraint residual divided by its scale.
    pub residual: f64,
    pub type_label: TypeLabel,
}

fn gamma_values(spec: &HamiltonianSpec) -> Result<BTreeMap<Var, G>> {
    let vals =
        spec.numeric_values().ok_or_else(|| Error::Invalid("numeric solving needs concrete parameters".into()))?;
    if vals.last().is_none_or(|g| g.is_zero()) {
        return Err(Error::VanishingLeadingParameter(spec.order()));
    }
    Ok(vals.into_iter().enumerate().map(|(i, g)| (Var::gamma(i as u32 + 1), g)).collect())
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

/// Solve the constraints at a concrete `n` with concrete γ. `n = 0` (the
/// trivial one-dimensional representation) is refused unless `allow_zero`.
pub fn solve_numeric(spec: &HamiltonianSpec, n: u32, allow_zero: bool) -> Result<Vec<NumericSolution>> {
    if n == 0 && !allow_zero {
        return Err(Error::Invalid("n must be at least 1 (pass the ground-state flag for n = 0)".into()));
    }
    let mut exact = gamma_values(spec)?;
    exact.insert(Var::N, G::from_ints(n as i64, 0));
    let values: BTreeMap<Var, Complex64> = exact.iter().map(|(v, g)| (*v, g.to_complex64())).collect();
    let phis = rep_structure_function(spec);
    let e_i = energy_type_i(spec).eval(&exact).expect("numeric").to_complex64();
    let e_ii = energy_type_ii(spec).eval(&exact).expect("numeric").to_complex64();
    let special: Option<Vec<(Complex64, Complex64)>> = quadratic_special(spec).map(|fams| {
        fams.iter()
            .map(|(u, e)| (u.eval_complex(&values).unwrap_or_default(), e.eval_complex(&values).unwrap_or_default()))
            .collect()
    });
    let mut out: Vec<NumericSolution> = Vec::new();
    for elim in branch_eliminants(spec) {
        let fail = || Error::RootFinder { branch: elim.branch.to_string() };
        let coeffs = complex_coefficients(&elim.eliminant, &values).ok_or_else(fail)?;
        let ecoeffs = complex_coefficients(&elim.energy, &values).ok_or_else(fail)?;
        for root in polynomial_roots(&coeffs).ok_or_else(fail)? {
            let u = root.value;
            let energy = roots::horner(&ecoeffs, u).0;
            let mut point = values.clone();
            point.insert(Var::U, u);
            point.insert(Var::E, energy);
            let at = |idx: u8, b: f64| {
                let mut p = point.clone();
                p.insert(Var::B, Complex64::new(b, 0.0));
                phis[idx as usize - 1].expression.map_coeffs(G::to_complex64).eval(&p).unwrap_or_default()
            };
            let scale = 1.0
                + energy.norm()
                + (1..=spec.order())
                    .map(|k| {
                        values[&Var::gamma(k)].norm() * 2f64.powi(k as i32) * (u.norm() + n as f64 + 1.0).powi(k as i32)
                    })
                    .sum::<f64>();
            let residual =
                at(elim.branch.at_zero, 0.0).norm().max(at(elim.branch.at_top, n as f64 + 1.0).norm()) / scale;
            let half = Complex64::new(-(n as f64) / 2.0, 0.0);
            let type_label = if close(u, half, 1e-8) && close(energy, e_i, 1e-8) {
                TypeLabel::I
            } else if close(u, half, 1e-8) && close(energy, e_ii, 1e-8) {
                TypeLabel::II
            } else {
                match special.as_deref() {
                    Some([(u3, e3), _]) if close(u, *u3, 1e-8) && close(energy, *e3, 1e-8) => TypeLabel::III,
                    Some([_, (u4, e4)]) if close(u, *u4, 1e-8) && close(energy, *e4, 1e-8) => TypeLabel::IV,
                    _ => TypeLabel::Other,
                }
            };
            let sol = NumericSolution {
                branch: elim.branch,
                n,
                u,
                energy,
                newton_step: root.newton_step,
                residual,
                type_label,
            };
            if !out.iter().any(|o| close(o.u, sol.u, 1e-8) && close(o.energy, sol.energy, 1e-8)) {
                out.push(sol);
            }
        }
    }
    Ok(out)
}

/// A random Gaussian rational with numerators and denominators up to 100.
/// With `part = Some(true)` the value is real, `Some(false)` imaginary.
pub fn random_gaussian(rng: &mut impl Rng, part: Option<bool>) -> G {
    let ratio = |rng: &mut dyn rand::RngCore| {
        let num = rng.gen_range(-100..=100i64);
        G::ratio(num, rng.gen_range(1..=100))
    };
    let re = ratio(rng);
    let im = ratio(rng);
    match part {
        None => re + im * G::i(),
        Some(true) => re,
        Some(false) => im * G::i(),
    }
}

/// Random γ_1..γ_N with nonzero γ_N. With `reality`, odd-k values are
/// imaginary and even-k values real, so Types I/II are real.
pub fn random_gammas(order: u32, reality: bool, rng: &mut impl Rng) -> Vec<G> {
    (1..=order)
        .map(|k| loop {
            let g = random_gaussian(rng, reality.then_some(k % 2 == 0));
            if !g.is_zero() {
                break g;
            }
        })
        .collect()
}

/// Solve at generic γ: resample until no two roots of one branch eliminant
/// collide within `1e-6` relative. Returns the parameters and solutions.
pub fn solve_generic(order: u32, n: u32, rng: &mut impl Rng) -> Result<(Vec<G>, Vec<NumericSolution>)> {
    for _ in 0..64 {
        let gammas = random_gammas(order, false, rng);
        let spec = HamiltonianSpec::numeric(&gammas)?;
        let sols = solve_numeric(&spec, n, false)?;
        let all = {
            let mut exact = gamma_values(&spec)?;
            exact.insert(Var::N, G::from_ints(n as i64, 0));
            let values: BTreeMap<Var, Complex64> = exact.iter().map(|(v, g)| (*v, g.to_complex64())).collect();
            let mut pts = Vec::new();
            for elim in branch_eliminants(&spec) {
                let coeffs = complex_coefficients(&elim.eliminant, &values).unwrap_or_default();
                let ecoeffs = complex_coefficients(&elim.energy, &values).unwrap_or_default();
                for r in polynomial_roots(&coeffs).unwrap_or_default() {
                    pts.push((r.value, roots::horner(&ecoeffs, r.value).0));
                }
            }
            pts
        };
        // a collision inside the family list means the sample is degenerate;
        // the deduplicated count would then undercount
        let expected: usize = all.len();
        let degenerate = (0..all.len())
            .any(|a| (a + 1..all.len()).any(|b| close(all[a].0, all[b].0, 1e-6) && close(all[a].1, all[b].1, 1e-6)));
        if !degenerate && sols.len() == expected {
            return Ok((gammas, sols));
        }
    }
    Err(Error::Invalid("could not draw a non-degenerate parameter sample".into()))
}

/// One row of a spectrum table.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub energy: G,
    /// `Φ(B, n)` for `B = 1..=n`.
    pub phi: Vec<G>,
    pub unitary: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTable {
    pub type_label: TypeLabel,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    /// Columns `n,E,unitary`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,E,unitary\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", r.n, r.energy, r.unitary));
        }
        s
    }
}

fn eval_exact(f: &RF, values: &BTreeMap<Var, G>) -> Result<G> {
    let v = f.eval_partial(values).ok_or_else(|| Error::Invalid(format!("pole of {f}")))?;
    match v.as_poly() {
        Some(p) if p.is_constant() => Ok(p.constant_term()),
        _ => Err(Error::Invalid(format!("{f} does not evaluate to a number"))),
    }
}

/// Energies and `Φ(B, n)` of a rational family at concrete parameters.
/// A row is unitary when every `Φ(B, n)` is real and positive.
pub fn spectrum_table(solution: &SpectrumSolution, params: &[G], ns: RangeInclusive<u32>) -> Result<SpectrumTable> {
    let Family::Explicit { energy, phi: Some([p1, p2]), .. } = &solution.family else {
        return Err(Error::Invalid("tables need a family with rational u(n) and E(n)".into()));
    };
    let energy = energy.as_rf().expect("rational family");
    let phi = p1.clone() * p2.clone();
    let mut values: BTreeMap<Var, G> =
        params.iter().enumerate().map(|(i, g)| (Var::gamma(i as u32 + 1), g.clone())).collect();
    for k in params.len() as u32 + 1..=solution.limit_valid.keys().max().copied().unwrap_or(0) {
        values.insert(Var::gamma(k), G::zero());
    }
    let mut rows = Vec::new();
    for n in ns {
        values.insert(Var::N, G::from_ints(n as i64, 0));
        let e = eval_exact(energy, &values)?;
        let mut phis = Vec::with_capacity(n as usize);
        for b in 1..=n {
            let mut v = values.clone();
            v.insert(Var::B, G::from_ints(b as i64, 0));
            phis.push(eval_exact(&phi, &v)?);
        }
        let unitary = phis.iter().all(|p| p.im.is_zero() && p.re.is_positive());
        rows.push(SpectrumRow { n, energy: e, phi: phis, unitary });
    }
    Ok(SpectrumTable { type_label: solution.type_label, rows })
}

/// The closed-form Type I/II structure functions for any order:
/// `Φ_I = ¼ (Σ (−i)^k γ_k (n^k − (n−2B)^k)) (Σ (−i)^k γ_k (n^k − (2B−n−2)^k))`
/// and the analogous Type II product.
pub fn closed_form_phi(spec: &HamiltonianSpec, label: TypeLabel) -> Option<ParamScalar> {
    let n = pvar(Var::N);
    let b = pvar(Var::B);
    let two = ParamScalar::from_i64(2);
    let series = |ipow: u32, base: &ParamScalar, other: &ParamScalar| {
        (1..=spec.order())
            .map(|k| (spec.gamma(k) * (base.pow(k) - other.pow(k))).scale(&G::one().mul_ipow(ipow * k)))
            .fold(ParamScalar::zero(), |a, c| a + c)
    };
    let (f1, f2) = match label {
        TypeLabel::I => {
            (series(3, &n, &(n.clone() - b.times_int(2))), series(3, &n, &(b.times_int(2) - n.clone() - two.clone())))
        }
        TypeLabel::II => {
            let n2 = n.clone() + two;
            (series(1, &n2, &(b.times_int(2) - n.clone())), series(1, &n2, &(n2.clone() - b.times_int(2))))
        }
        _ => return None,
    };
    Some((f1 * f2).scale(&G::ratio(1, 4)))
}

/// Residuals of the Type I and Type II closed forms in the constraints,
/// kept symbolic in `n` and γ.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub order: u32,
    /// `[Φ1(0), Φ2(n+1)]` at `u = −n/2`, `E = E_I`.
    pub type_i: [ParamScalar; 2],
    /// `[Φ2(0), Φ1(n+1)]` at `u = −n/2`, `E = E_II`.
    pub type_ii: [ParamScalar; 2],
    /// `Φ1 Φ2` at Type I minus the closed-form product, and the same for
    /// Type II.
    pub phi_residuals: [ParamScalar; 2],
}

impl ClosedFormCheck {
    pub fn holds(&self) -> bool {
        self.type_i.iter().chain(&self.type_ii).chain(&self.phi_residuals).all(|r| r.is_zero())
    }
}

/// Substitute the Type I/II families into the constraints and into the
/// structure function. Works for any order.
pub fn check_closed_forms(spec: &HamiltonianSpec) -> ClosedFormCheck {
    let [p1, p2] = rep_structure_function(spec);
    let u = pvar(Var::N).scale(&G::ratio(-1, 2));
    let top = pvar(Var::N) + ParamScalar::one();
    let at = |p: &ParamScalar, e: &ParamScalar| p.substitute(Var::U, &u).substitute(Var::E, e);
    let e1 = energy_type_i(spec);
    let e2 = energy_type_ii(spec);
    let zero = ParamScalar::zero();
    let phi_i = at(&p1.expression, &e1) * at(&p2.expression, &e1);
    let phi_ii = at(&p1.expression, &e2) * at(&p2.expression, &e2);
    ClosedFormCheck {
        order: spec.order(),
        type_i: [at(&p1.expression, &e1).substitute(Var::B, &zero), at(&p2.expression, &e1).substitute(Var::B, &top)],
        type_ii: [at(&p2.expression, &e2).substitute(Var::B, &zero), at(&p1.expression, &e2).substitute(Var::B, &top)],
        phi_residuals: [
            phi_i - closed_form_phi(spec, TypeLabel::I).expect("type I"),
            phi_ii - closed_form_phi(spec, TypeLabel::II).expect("type II"),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn spec(n: u32) -> HamiltonianSpec {
        HamiltonianSpec::symbolic(n).unwrap()
    }

    #[test]
    fn factors_match_quadratic_form() {
        let [p1, p2] = rep_structure_function(&spec(2));
        assert_eq!(p1.expression, parse_poly("(E - 2i*g1*(B + u) + 4*g2*(B + u)^2)/4").unwrap());
        assert_eq!(p2.expression, parse_poly("E + 2i*g1*(B + u - 1) + 4*g2*(B + u - 1)^2").unwrap());
    }

    #[test]
    fn free_case_factors() {
        let s = HamiltonianSpec::from_params(vec![ParamScalar::zero(); 2]).unwrap();
        let [p1, p2] = rep_structure_function(&s);
        assert_eq!(p1.expression, parse_poly("E/4").unwrap());
        assert_eq!(p2.expression, parse_poly("E").unwrap());
    }

    #[test]
    fn quadratic_has_four_families() {
        let sols = solve_symbolic(&spec(2));
        let mut labels: Vec<_> = sols.iter().map(|s| s.type_label).collect();
        labels.sort();
        assert_eq!(labels, [TypeLabel::I, TypeLabel::II, TypeLabel::III, TypeLabel::IV]);
    }

    #[test]
    fn type_i_at_zero_energy_scale() {
        let gammas = [G::from_ints(0, 2), G::from_ints(-1, 0)];
        let s = HamiltonianSpec::numeric(&gammas).unwrap();
        let sols = solve_symbolic(&s);
        let t1 = sols.iter().find(|x| x.type_label == TypeLabel::I).unwrap();
        let table = spectrum_table(t1, &gammas, 3..=3).unwrap();
        assert_eq!(table.rows[0].energy, G::from_ints(15, 0));
        assert_eq!(table.rows[0].phi[1], G::from_ints(64, 0));
        assert!(table.rows[0].unitary);
    }

    #[test]
    fn closed_forms_up_to_eight() {
        for n in 1..=8 {
            assert!(check_closed_forms(&spec(n)).holds(), "N = {n}");
        }
    }

    #[test]
    fn zero_n_needs_flag() {
        let s = HamiltonianSpec::numeric(&[G::i()]).unwrap();
        assert!(solve_numeric(&s, 0, false).is_err());
        assert!(solve_numeric(&s, 0, true).is_ok());
    }
}
