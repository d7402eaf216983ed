//! Curved and perturbed isotropic oscillators.
//!
//! With `γ1 = −iβ`, `γ2 = −κ`, `γ3 = iμ`, `γ4 = −ν` the Type I spectrum is
//! real:
//!
//! ```text
//! E(n) = −βn + κn² − μn³ − νn⁴
//! ```
//!
//! `κ > 0` is the sphere, `κ < 0` the hyperbolic plane, and `β = −2` fixes
//! unit frequency. Everything here is generic over [`Real`], so exact
//! rational parameters give exact tables.

use num_complex::Complex;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillatorSpec<R> {
    pub kappa: R,
    pub beta: R,
    pub mu: R,
    pub nu: R,
}

impl<R: Real> OscillatorSpec<R> {
    /// Unit frequency (`β = −2`).
    pub fn new(kappa: R, mu: R, nu: R) -> Self {
        Self { kappa, beta: R::from_i64(-2), mu, nu }
    }

    pub fn curvature(kappa: R) -> Self {
        Self::new(kappa, R::zero(), R::zero())
    }

    pub fn cubic(kappa: R, mu: R) -> Self {
        Self::new(kappa, mu, R::zero())
    }

    /// `[γ1, γ2, γ3, γ4]` with trailing zeros dropped (at least one entry).
    pub fn map_params(&self) -> Vec<Complex<R>> {
        let mut g = vec![
            Complex::new(R::zero(), -self.beta.clone()),
            Complex::new(-self.kappa.clone(), R::zero()),
            Complex::new(R::zero(), self.mu.clone()),
            Complex::new(-self.nu.clone(), R::zero()),
        ];
        while g.len() > 1 && g.last().is_some_and(|c| c.re.is_zero() && c.im.is_zero()) {
            g.pop();
        }
        g
    }

    /// Inverse of [`map_params`](Self::map_params). Fails unless odd-k
    /// parameters are imaginary and even-k ones real.
    pub fn from_gammas(gammas: &[Complex<R>]) -> Result<Self> {
        if gammas.len() > 4 {
            return Err(Error::Invalid(format!("oscillator parameters stop at g4, got {}", gammas.len())));
        }
        let mut out = Self { kappa: R::zero(), beta: R::zero(), mu: R::zero(), nu: R::zero() };
        for (idx, g) in gammas.iter().enumerate() {
            let k = idx + 1;
            let ok = if k % 2 == 1 { g.re.is_zero() } else { g.im.is_zero() };
            if !ok {
                return Err(Error::Invalid(format!("g{k} breaks the reality convention")));
            }
            match k {
                1 => out.beta = -g.im.clone(),
                2 => out.kappa = -g.re.clone(),
                3 => out.mu = g.im.clone(),
                _ => out.nu = -g.re.clone(),
            }
        }
        Ok(out)
    }

    /// Real coefficients `c_k = (−i)^k γ_k` of `E(n) = Σ c_k n^k`.
    pub fn energy_coefficients(&self) -> [R; 4] {
        [-self.beta.clone(), self.kappa.clone(), -self.mu.clone(), -self.nu.clone()]
    }

    /// `E` at real argument `x` (used for `n` and for the shifted arguments
    /// of the structure function).
    pub fn energy_at(&self, x: &R) -> R {
        let c = self.energy_coefficients();
        let mut acc = R::zero();
        for ck in c.iter().rev() {
            acc = (acc + ck.clone()) * x.clone();
        }
        acc
    }

    pub fn energy(&self, n: u64) -> R {
        self.energy_at(&from_u64(n))
    }

    /// Closed-form `E(n+1) − E(n)`.
    pub fn spacing(&self, n: u64) -> R {
        let x = from_u64::<R>(n);
        let x2 = x.clone() * x.clone();
        let x3 = x2.clone() * x.clone();
        let lin = x.times_int(2) + R::one();
        let quad = x2.times_int(3) + x.times_int(3) + R::one();
        let cub = x3.times_int(4) + x2.times_int(6) + x.times_int(4) + R::one();
        -self.beta.clone() + self.kappa.clone() * lin - self.mu.clone() * quad - self.nu.clone() * cub
    }

    /// Type I structure function
    /// `Φ(B, n) = ¼ (E(n) − E(n − 2B)) (E(n) − E(2B − n − 2))`.
    pub fn phi(&self, b: u64, n: u64) -> R {
        let nn = from_u64::<R>(n);
        let bb = from_u64::<R>(b);
        let e = self.energy_at(&nn);
        let f1 = e.clone() - self.energy_at(&(nn.clone() - bb.times_int(2)));
        let f2 = e - self.energy_at(&(bb.times_int(2) - nn - R::from_i64(2)));
        f1 * f2 / R::from_i64(4)
    }

    pub fn classify(&self) -> PerturbationClass {
        PerturbationClass {
            geometry: match sign(&self.kappa) {
                0 => Geometry::Euclidean,
                s if s > 0 => Geometry::Spherical,
                _ => Geometry::Hyperbolic,
            },
            cubic: perturbation(&self.mu),
            quartic: perturbation(&self.nu),
        }
    }

    fn positive(v: &R) -> bool {
        *v > R::tolerance()
    }

    /// Largest `n` such that `E(m) > 0` and `E(m) − E(m−1) > 0` for every
    /// `1 <= m <= n`, or `None` when no such bound exists.
    pub fn n_max(&self) -> Result<Option<u64>> {
        let e1 = self.energy(1);
        if !Self::positive(&e1) {
            return Err(Error::NoBoundState { energy: format!("{}", e1.to_f64()) });
        }
        let c = self.energy_coefficients();
        let Some(lead) = (0..4).rev().find(|&k| !c[k].is_negligible()) else {
            return Ok(None);
        };
        // Beyond the Cauchy bound of E and ΔE the signs are those of the
        // leading coefficient.
        let lc = c[lead].abs();
        let ratio = c[..lead].iter().map(|ck| (ck.abs() / lc.clone()).to_f64()).fold(0.0, f64::max);
        let limit = (2.0 * (1.0 + ratio) * (lead as f64 + 1.0)).ceil() as u64 + 2;
        if limit > 100_000_000 {
            return Err(Error::Invalid("parameters too close to a flat limit for a direct scan".into()));
        }
        for n in 2..=limit {
            if !Self::positive(&self.energy(n)) || !Self::positive(&self.spacing(n - 1)) {
                return Ok(Some(n - 1));
            }
        }
        if c[lead] > R::zero() {
            Ok(None)
        } else {
            unreachable!("a negative leading coefficient fails before the bound")
        }
    }

    /// Rows `n, E(n), ΔE(n), bound` over `ns`.
    pub fn energy_levels(&self, ns: std::ops::RangeInclusive<u64>) -> Result<LevelTable<R>> {
        let n_max = match self.n_max() {
            Ok(v) => v,
            Err(Error::NoBoundState { .. }) => Some(0),
            Err(e) => return Err(e),
        };
        let rows = ns
            .map(|n| LevelRow {
                n,
                energy: self.energy(n),
                spacing: self.energy(n + 1) - self.energy(n),
                bound: n_max.is_none_or(|m| n <= m),
            })
            .collect();
        Ok(LevelTable { n_max, rows })
    }

    /// Check `Φ(B, n) > 0` for `1 <= B <= n <= n_max`.
    pub fn phi_positivity(&self, n_max: u64) -> PhiReport<R> {
        let mut checked = 0;
        for n in 1..=n_max {
            for b in 1..=n {
                checked += 1;
                let v = self.phi(b, n);
                if !Self::positive(&v) {
                    return PhiReport { checked, all_positive: false, first_failure: Some((b, n, v)) };
                }
            }
        }
        PhiReport { checked, all_positive: true, first_failure: None }
    }
}

impl OscillatorSpec<BigRational> {
    pub fn gaussian_params(&self) -> Vec<GaussianRational> {
        self.map_params().into_iter().map(|c| GaussianRational::new(c.re, c.im)).collect()
    }
}

fn from_u64<R: Real>(n: u64) -> R {
    R::from_i64(i64::try_from(n).expect("level index fits in i64"))
}

fn sign<R: Real>(v: &R) -> i8 {
    if v.is_negligible() {
        0
    } else if *v > R::zero() {
        1
    } else {
        -1
    }
}

fn perturbation<R: Real>(v: &R) -> Perturbation {
    // the term enters E with a minus sign: negative parameters raise the
    // levels like curvature on the sphere does
    match sign(v) {
        0 => Perturbation::None,
        s if s < 0 => Perturbation::Spherical,
        _ => Perturbation::Hyperbolic,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Euclidean,
    Spherical,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Perturbation {
    None,
    Spherical,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationClass {
    pub geometry: Geometry,
    pub cubic: Perturbation,
    pub quartic: Perturbation,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow<R> {
    pub n: u64,
    pub energy: R,
    pub spacing: R,
    pub bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelTable<R> {
    /// `None` for an unbounded spectrum, `Some(0)` when there are no bound
    /// states.
    pub n_max: Option<u64>,
    pub rows: Vec<LevelRow<R>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport<R> {
    pub checked: u64,
    pub all_positive: bool,
    pub first_failure: Option<(u64, u64, R)>,
}

/// Families with closed-form parameter intervals for a given `n_max`
/// (unit frequency).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum IntervalClass<R> {
    /// `E = 2n − |κ|n²`, interval in `|κ|`.
    HyperbolicOscillator,
    /// `E = 2n − μn³`, interval in `μ`.
    FlatCubic,
    /// `E = 2n + κn² − μn³` with fixed `κ >= 0`, interval in `μ`.
    SphericalCubic { kappa: R },
}

/// Half-open `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval<R> {
    pub parameter: &'static str,
    pub lo: R,
    pub hi: R,
}

impl<R: Real> Interval<R> {
    pub fn contains(&self, x: &R) -> bool {
        self.lo <= *x && *x < self.hi
    }

    /// `points` values `lo + (hi − lo) i / points`, `i = 0..points`.
    pub fn grid(&self, points: i64) -> Vec<R> {
        let width = self.hi.clone() - self.lo.clone();
        (0..points).map(|i| self.lo.clone() + width.clone() * R::from_ratio(i, points)).collect()
    }
}

pub fn admissible_interval<R: Real>(class: &IntervalClass<R>, n_max: u64) -> Result<Interval<R>> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let n = from_u64::<R>(n_max);
    let one = R::one();
    let two = R::from_i64(2);
    Ok(match class {
        IntervalClass::HyperbolicOscillator => Interval {
            parameter: "|kappa|",
            lo: two.clone() / (n.times_int(2) + one.clone()),
            hi: two / (n.times_int(2) - one),
        },
        IntervalClass::FlatCubic => {
            let (lo_den, hi_den) = cubic_denominators(&n);
            Interval { parameter: "mu", lo: two.clone() / lo_den, hi: two / hi_den }
        }
        IntervalClass::SphericalCubic { kappa } => {
            let (lo_den, hi_den) = cubic_denominators(&n);
            Interval {
                parameter: "mu",
                lo: (two.clone() + kappa.clone() * (n.times_int(2) + one.clone())) / lo_den,
                hi: (two + kappa.clone() * (n.times_int(2) - one)) / hi_den,
            }
        }
    })
}

/// `1 + 3n(n+1)` and `1 + 3n(n−1)`.
fn cubic_denominators<R: Real>(n: &R) -> (R, R) {
    let one = R::one();
    let lo = one.clone() + (n.clone() * (n.clone() + one.clone())).times_int(3);
    let hi = one.clone() + (n.clone() * (n.clone() - one)).times_int(3);
    (lo, hi)
}

impl<R: Real> IntervalClass<R> {
    /// The oscillator with this class's free parameter set to `x`.
    pub fn spec_at(&self, x: R) -> OscillatorSpec<R> {
        match self {
            IntervalClass::HyperbolicOscillator => OscillatorSpec::curvature(-x),
            IntervalClass::FlatCubic => OscillatorSpec::cubic(R::zero(), x),
            IntervalClass::SphericalCubic { kappa } => OscillatorSpec::cubic(kappa.clone(), x),
        }
    }
}

/// One plotted point.
#[derive(Clone, Debug, Serialize)]
pub struct FigurePoint<R> {
    pub series: String,
    pub n: u64,
    pub energy: R,
}

/// The series of a figure: label, spec, and the last plotted level.
pub fn figure_series<R: Real>(id: u32) -> Result<Vec<(String, OscillatorSpec<R>, u64)>> {
    let dec = |num: i64| R::from_ratio(num, 1000);
    let flat = || ("euclidean".to_string(), OscillatorSpec::curvature(R::zero()));
    let mut series: Vec<(String, OscillatorSpec<R>)> = Vec::new();
    match id {
        1 => {
            for (label, k) in [("0.5", 500), ("0.25", 250), ("0.15", 150)] {
                series.push((format!("kappa={label}"), OscillatorSpec::curvature(dec(k))));
            }
            series.push(flat());
        }
        2 => {
            for (label, k) in [("-0.25", -250), ("-0.16", -160), ("-0.12", -120)] {
                series.push((format!("kappa={label}"), OscillatorSpec::curvature(dec(k))));
            }
            series.push(flat());
        }
        3 => {
            for (label, m) in [("-0.05", -50), ("-0.025", -25), ("-0.01", -10)] {
                series.push((format!("mu={label}"), OscillatorSpec::cubic(R::zero(), dec(m))));
            }
            series.push(flat());
        }
        4 => {
            for (label, m) in [("0.06", 60), ("0.03", 30), ("0.015", 15)] {
                series.push((format!("mu={label}"), OscillatorSpec::cubic(R::zero(), dec(m))));
            }
            series.push(flat());
        }
        5 => {
            for (label, m) in [("0.2", 200), ("0.12", 120), ("0.1", 100), ("0.07", 70)] {
                series.push((format!("kappa=1,mu={label}"), OscillatorSpec::cubic(R::one(), dec(m))));
            }
        }
        _ => return Err(Error::InvalidFigure(id)),
    }
    // unbounded series run to n = 10 in the figures with unbounded spectra
    // and to the largest n_max among the truncated ones otherwise
    let mut bounds = Vec::with_capacity(series.len());
    for (_, spec) in &series {
        bounds.push(spec.n_max()?);
    }
    let open_end = bounds.iter().flatten().copied().max().unwrap_or(10);
    Ok(series.into_iter().zip(bounds).map(|((label, spec), b)| (label, spec, b.unwrap_or(open_end))).collect())
}

pub fn figure_data<R: Real>(id: u32) -> Result<Vec<FigurePoint<R>>> {
    let mut out = Vec::new();
    for (series, spec, last) in figure_series::<R>(id)? {
        for n in 1..=last {
            out.push(FigurePoint { series: series.clone(), n, energy: spec.energy(n) });
        }
    }
    Ok(out)
}

/// CSV with columns `series,n,E`; floats carry 17 significant digits.
pub fn figure_csv<R: Real>(points: &[FigurePoint<R>]) -> String {
    let mut s = String::from("series,n,E\n");
    for p in points {
        s.push_str(&format!("{},{},{:.16e}\n", p.series, p.n, p.energy.to_f64()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(num: i64, den: i64) -> Q {
        Q::from_ratio(num, den)
    }

    #[test]
    fn level_examples() {
        assert_eq!(OscillatorSpec::curvature(q(1, 1)).energy(1), q(3, 1));
        assert_eq!(OscillatorSpec::curvature(q(-1, 4)).energy(4), q(4, 1));
        assert_eq!(OscillatorSpec::cubic(q(0, 1), q(6, 100)).energy(3), q(438, 100));
        assert_eq!(OscillatorSpec::curvature(q(1, 1)).spacing(1), q(5, 1));
        assert_eq!(OscillatorSpec::curvature(q(-1, 4)).spacing(3), q(1, 4));
    }

    #[test]
    fn parameter_map_round_trips() {
        let s = OscillatorSpec::new(q(1, 3), q(-2, 7), q(5, 1));
        assert_eq!(OscillatorSpec::from_gammas(&s.map_params()).unwrap(), s);
        let z = OscillatorSpec::curvature(q(1, 1)).gaussian_params();
        assert_eq!(z, vec![GaussianRational::from_ints(0, 2), GaussianRational::from_ints(-1, 0)]);
    }

    #[test]
    fn reference_counts() {
        for (k, want) in [(-25, 4), (-16, 6), (-12, 8)] {
            assert_eq!(OscillatorSpec::curvature(q(k, 100)).n_max().unwrap(), Some(want));
        }
        assert_eq!(OscillatorSpec::curvature(q(1, 2)).n_max().unwrap(), None);
        assert!(OscillatorSpec::curvature(q(-2, 1)).n_max().is_err());
    }

    #[test]
    fn euclidean_phi() {
        let s = OscillatorSpec::curvature(q(0, 1));
        for n in 1..6 {
            for b in 1..=n {
                assert_eq!(s.phi(b, n), q(4 * (b * (n + 1 - b)) as i64, 1));
            }
        }
    }

    #[test]
    fn interval_examples() {
        let h = admissible_interval::<Q>(&IntervalClass::HyperbolicOscillator, 2).unwrap();
        assert_eq!((h.lo, h.hi), (q(2, 5), q(2, 3)));
        let f = admissible_interval::<Q>(&IntervalClass::FlatCubic, 1).unwrap();
        assert_eq!((f.lo, f.hi), (q(2, 7), q(2, 1)));
    }

    #[test]
    fn figure_truncation() {
        let pts = figure_data::<f64>(2).unwrap();
        assert_eq!(pts.iter().filter(|p| p.series == "kappa=-0.25").map(|p| p.n).max(), Some(4));
        let pts = figure_data::<f64>(1).unwrap();
        let p = pts.iter().find(|p| p.series == "kappa=0.5" && p.n == 10).unwrap();
        assert!((p.energy - 70.0).abs() < 1e-12);
        assert!(figure_data::<f64>(6).is_err());
    }
}
