use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use zernike::higgs::{
    higgs_relations, structure_function, verify_conjecture1, verify_factorization, StructureFunctionPair,
};
use zernike::oracle::{build_matrix, compare_with_formula, oracle_spectrum, FormulaComparison};
use zernike::oscillators::{figure_csv, figure_data, figure_series, OscillatorSpec};
use zernike::spectrum::{
    check_closed_forms, default_vanish_set, filter_well_defined, solve_numeric, solve_symbolic, spectrum_table, Family,
    SpectrumSolution, TypeLabel,
};
use zernike::symmetries::{
    build_angular_momentum, build_hamiltonian, check_dependence_relation, solve_symmetry_ansatz, symmetries,
    tabulated_symmetries, HamiltonianSpec, Leading,
};
use zernike::{GaussianRational, Operator, Real};

use crate::parse::{exact_gammas, range, Number};
use crate::{
    DeriveArgs, FigureArgs, LeadingArg, OracleArgs, OrderArgs, OscillatorArgs, Outcome, SpectrumArgs, VerifyArgs,
};

fn spec_from(order: u32, gammas: &[String]) -> Result<HamiltonianSpec> {
    Ok(if gammas.is_empty() {
        HamiltonianSpec::symbolic(order)?
    } else {
        HamiltonianSpec::numeric(&exact_gammas(gammas, order)?)?
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let spec = spec_from(a.order, &a.gammas)?;
    let pair = tabulated_symmetries(&spec)?;
    let h = build_hamiltonian(&spec);
    let (ri, rip) = pair.residuals(&h);
    let c: Operator = build_angular_momentum();
    let rc = c.commutator(&h);
    let dep = check_dependence_relation(&spec, &pair)?;
    let passed = ri.is_zero() && rip.is_zero() && rc.is_zero() && dep.is_zero();
    let mut results = json!({
        "order": a.order,
        "symbolic": spec.is_symbolic(),
        "residual_terms": {
            "[I,H]": ri.len(),
            "[I',H]": rip.len(),
            "[C,H]": rc.len(),
            "dependence": dep.len(),
        },
        "passed": passed,
    });
    if a.show_operators {
        results["operators"] = json!({ "H": h, "I": pair.i, "I'": pair.i_prime });
    }
    Ok(Outcome { results, csv: None, passed })
}

pub fn derive(a: &DeriveArgs) -> Result<Outcome> {
    let spec = HamiltonianSpec::symbolic(a.order)?;
    let h = build_hamiltonian(&spec);
    let known = tabulated_symmetries(&spec).ok();
    let leads = match a.leading {
        LeadingArg::P1 => vec![Leading::P1],
        LeadingArg::P2 => vec![Leading::P2],
        LeadingArg::Both => vec![Leading::P2, Leading::P1],
    };
    let mut passed = true;
    let mut rows = Vec::new();
    for lead in leads {
        let space = solve_symmetry_ansatz(&spec, lead)?;
        let commutes = space.particular.commutator(&h).is_zero();
        let matches_known = known.as_ref().map(|p| match lead {
            Leading::P2 => space.contains(&p.i),
            Leading::P1 => space.contains(&p.i_prime),
        });
        passed &= commutes && matches_known.unwrap_or(true);
        rows.push(json!({
            "leading": lead,
            "unknowns": space.unknowns,
            "homogeneous_dimension": space.homogeneous_basis.len(),
            "particular": space.particular,
            "commutes": commutes,
            "matches_known_symmetry": matches_known,
        }));
    }
    Ok(Outcome { results: json!({ "order": a.order, "symmetries": rows, "passed": passed }), csv: None, passed })
}

fn phi_csv(phi: &StructureFunctionPair) -> String {
    let mut s = String::from("factor,H,K,coefficient\n");
    for (name, poly) in [("phi1", &phi.phi1), ("phi2", &phi.phi2)] {
        for (hp, kp, c) in StructureFunctionPair::table(poly) {
            let _ = writeln!(s, "{name},{hp},{kp},\"{c}\"");
        }
    }
    s
}

pub fn higgs(a: &OrderArgs) -> Result<Outcome> {
    let spec = HamiltonianSpec::symbolic(a.order)?;
    let pair = symmetries(&spec)?;
    let (rel, ladder) = higgs_relations(&spec, &pair)?;
    let phi = structure_function(&spec);
    let fact = verify_factorization(&spec, &ladder, &phi);
    let passed = fact.holds();
    let results = json!({
        "symmetries": pair.source,
        "relations": rel,
        "structure_function": phi,
        "factorization_holds": passed,
    });
    Ok(Outcome { results, csv: Some(phi_csv(&phi)), passed })
}

fn solution_json(sol: &SpectrumSolution, kept: bool) -> Value {
    let family = match &sol.family {
        Family::Explicit { u, energy, phi } => json!({
            "kind": "explicit",
            "u": u,
            "E": energy,
            "phi_factors": phi,
        }),
        Family::Algebraic { eliminant, energy, roots } => json!({
            "kind": "algebraic",
            "eliminant_in_u": eliminant,
            "E_in_u": energy,
            "roots": roots,
        }),
    };
    json!({
        "type": sol.type_label,
        "branch": sol.branch.to_string(),
        "family": family,
        "limit_valid": sol.limit_valid,
        "well_defined": kept,
    })
}

fn parse_label(s: &str) -> Result<TypeLabel> {
    Ok(match s {
        "I" => TypeLabel::I,
        "II" => TypeLabel::II,
        "III" => TypeLabel::III,
        "IV" => TypeLabel::IV,
        _ => bail!("unknown family `{s}` (expected I, II, III or IV)"),
    })
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let spec = spec_from(a.order, &a.gammas)?;
    let vanish: BTreeSet<u32> =
        if a.vanish.is_empty() { default_vanish_set(a.order) } else { a.vanish.iter().copied().collect() };
    if let Some(k) = vanish.iter().find(|&&k| k == 0 || k > a.order) {
        bail!("vanish index {k} is outside 1..={}", a.order);
    }
    let ns = a.n.as_deref().map(range).transpose()?;
    if a.symbolic {
        let sols = solve_symbolic(&spec);
        let kept = filter_well_defined(&sols, &vanish);
        let is_kept = |s: &SpectrumSolution| kept.iter().any(|k| k.branch == s.branch && k.type_label == s.type_label);
        let solutions: Vec<Value> = sols.iter().map(|s| solution_json(s, is_kept(s))).collect();
        let mut tables = Vec::new();
        let mut csv = None;
        if let (Some(ns), Some(g)) = (&ns, spec.numeric_values()) {
            let lo = u32::try_from(*ns.start())?;
            let hi = u32::try_from(*ns.end())?;
            let want = parse_label(&a.family)?;
            for s in sols.iter().filter(|s| s.phi_product().is_some()) {
                let t = spectrum_table(s, &g, lo.max(1)..=hi)?;
                if s.type_label == want && csv.is_none() {
                    csv = Some(t.to_csv());
                }
                tables.push(t);
            }
        }
        let total: u32 = sols.iter().map(|s| s.root_count()).sum();
        let results = json!({
            "mode": "symbolic",
            "family_count": sols.len(),
            "solution_count": total,
            "vanish_set": vanish,
            "solutions": solutions,
            "tables": tables,
        });
        return Ok(Outcome { results, csv, passed: true });
    }
    if spec.is_symbolic() {
        bail!("numeric solving needs --gammas (or pass --symbolic)");
    }
    let ns = ns.ok_or_else(|| anyhow!("numeric solving needs --n"))?;
    let levels: Vec<u32> = ns.map(u32::try_from).collect::<Result<_, _>>()?;
    let per_n =
        levels.par_iter().map(|&n| solve_numeric(&spec, n, a.allow_ground_state)).collect::<Result<Vec<_>, _>>()?;
    let max_residual = per_n.iter().flatten().map(|s| s.residual).fold(0.0, f64::max);
    let mut csv = String::from("n,type,branch,u_re,u_im,E_re,E_im,residual\n");
    for s in per_n.iter().flatten() {
        let _ = writeln!(
            csv,
            "{},{},\"{}\",{:.16e},{:.16e},{:.16e},{:.16e},{:.3e}",
            s.n, s.type_label, s.branch, s.u.re, s.u.im, s.energy.re, s.energy.im, s.residual
        );
    }
    let passed = max_residual < 1e-9;
    let results = json!({
        "mode": "numeric",
        "levels": levels.iter().zip(&per_n).map(|(n, sols)| json!({
            "n": n,
            "solution_count": sols.len(),
            "solutions": sols,
        })).collect::<Vec<_>>(),
        "max_scaled_residual": max_residual,
    });
    Ok(Outcome { results, csv: Some(csv), passed })
}

pub fn oracle(a: &OracleArgs) -> Result<Outcome> {
    let g = exact_gammas(&a.gammas, a.order)?;
    let spec = HamiltonianSpec::numeric(&g)?;
    let mat = build_matrix(&g, a.max_degree);
    let report = oracle_spectrum(&mat, a.eigenvectors);
    let exact_h = build_hamiltonian(&spec).map_coefficients(|c| c.constant_term());
    let action_mismatches = mat.mismatches_against(&exact_h);
    let sols = solve_symbolic(&spec);
    let compare =
        |label: TypeLabel| sols.iter().find(|s| s.type_label == label).map(|s| compare_with_formula(&report, s, &g));
    let type_i = compare(TypeLabel::I);
    let type_ii = compare(TypeLabel::II);
    let passed = matches!(type_i, Some(FormulaComparison::Matched { .. }))
        && action_mismatches.is_empty()
        && mat.is_graded_triangular();
    let mut csv = String::from("degree,eigenvalue,multiplicity\n");
    for l in &report.levels {
        let _ = writeln!(csv, "{},{},{}", l.degree, l.eigenvalue, l.multiplicity);
    }
    let results = json!({
        "graded_triangular": mat.is_graded_triangular(),
        "operator_action_mismatches": action_mismatches,
        "report": report,
        "type_i": type_i,
        "type_ii": type_ii,
        "passed": passed,
    });
    Ok(Outcome { results, csv: Some(csv), passed })
}

/// JSON and CSV rendering of the oscillator scalars.
trait Emit: Real {
    fn json(&self) -> Value;
    fn text(&self) -> String;
    fn close_to(&self, other: &Self) -> bool;
}

impl Emit for BigRational {
    fn json(&self) -> Value {
        Value::String(GaussianRational::real(self.clone()).to_string())
    }
    fn text(&self) -> String {
        GaussianRational::real(self.clone()).to_string()
    }
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

impl Emit for f64 {
    fn json(&self) -> Value {
        json!(self)
    }
    fn text(&self) -> String {
        format!("{self:.16e}")
    }
    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-12 * self.abs().max(other.abs()).max(1.0)
    }
}

fn oscillator_report<R: Emit>(spec: OscillatorSpec<R>, ns: std::ops::RangeInclusive<u64>) -> Result<Outcome> {
    let table = spec.energy_levels(ns.clone())?;
    let mut consistent = true;
    let mut rows = Vec::new();
    let mut csv = String::from("n,E,dE,bound\n");
    for r in &table.rows {
        let closed = spec.spacing(r.n);
        consistent &= closed.close_to(&r.spacing);
        let _ = writeln!(csv, "{},{},{},{}", r.n, r.energy.text(), r.spacing.text(), r.bound);
        rows.push(json!({ "n": r.n, "E": r.energy.json(), "dE": r.spacing.json(), "bound": r.bound }));
    }
    let n_max = spec.n_max();
    let scan_to = match &n_max {
        Ok(Some(m)) => (*m).min(*ns.end()),
        Ok(None) => *ns.end(),
        Err(_) => 0,
    };
    let phi = spec.phi_positivity(scan_to);
    let gammas: Vec<Value> =
        spec.map_params().iter().map(|c| json!({ "re": c.re.json(), "im": c.im.json() })).collect();
    let passed = consistent && phi.all_positive;
    let results = json!({
        "exact": R::is_exact(),
        "gammas": gammas,
        "class": spec.classify(),
        "n_max": match &n_max {
            Ok(Some(m)) => json!(m),
            Ok(None) => json!("unbounded"),
            Err(e) => json!({ "error": e.to_string() }),
        },
        "levels": rows,
        "spacing_matches_closed_form": consistent,
        "phi_positivity": {
            "checked_up_to": scan_to,
            "checked": phi.checked,
            "all_positive": phi.all_positive,
            "first_failure": phi.first_failure.map(|(b, n, v)| json!({ "B": b, "n": n, "phi": v.json() })),
        },
        "passed": passed,
    });
    Ok(Outcome { results, csv: Some(csv), passed })
}

pub fn oscillator(a: &OscillatorArgs) -> Result<Outcome> {
    let nums = [&a.kappa, &a.mu, &a.nu, &a.beta].map(|s| Number::parse(s));
    let [kappa, mu, nu, beta] = nums;
    let (kappa, mu, nu, beta) = (kappa?, mu?, nu?, beta?);
    let ns = range(&a.n)?;
    if [&kappa, &mu, &nu, &beta].iter().all(|x| x.is_exact()) {
        let spec = OscillatorSpec { kappa: kappa.exact(), beta: beta.exact(), mu: mu.exact(), nu: nu.exact() };
        oscillator_report(spec, ns)
    } else {
        let spec = OscillatorSpec { kappa: kappa.float(), beta: beta.float(), mu: mu.float(), nu: nu.float() };
        oscillator_report(spec, ns)
    }
}

pub fn figure(a: &FigureArgs) -> Result<Outcome> {
    let series = figure_series::<BigRational>(a.id)?;
    let points = figure_data::<BigRational>(a.id)?;
    let csv = figure_csv(&points);
    let results = json!({
        "id": a.id,
        "series": series.iter().map(|(label, spec, last)| json!({
            "label": label,
            "last_n": last,
            "n_max": spec.n_max().ok().flatten(),
            "points": points.iter().filter(|p| &p.series == label)
                .map(|p| json!({ "n": p.n, "E": p.energy.to_f64() })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome { results, csv: Some(csv), passed: true })
}

pub fn conjecture_check(a: &OrderArgs) -> Result<Outcome> {
    let spec = HamiltonianSpec::symbolic(a.order)?;
    let closed = check_closed_forms(&spec);
    let mut passed = closed.holds();
    let report = verify_conjecture1(&spec)?;
    passed &= report.passed;
    let factorization = serde_json::to_value(&report)?;
    let surviving = if a.order <= 5 {
        let kept = filter_well_defined(&solve_symbolic(&spec), &default_vanish_set(a.order));
        let labels: Vec<TypeLabel> = kept.iter().map(|s| s.type_label).collect();
        if a.order >= 3 {
            passed &= labels.len() == 2 && labels.contains(&TypeLabel::I) && labels.contains(&TypeLabel::II);
        }
        json!(labels)
    } else {
        Value::Null
    };
    let results = json!({
        "order": a.order,
        "factorization": factorization,
        "closed_forms": {
            "holds": closed.holds(),
            "type_i_residuals": closed.type_i,
            "type_ii_residuals": closed.type_ii,
            "phi_residuals": closed.phi_residuals,
        },
        "well_defined_families": surviving,
        "passed": passed,
    });
    Ok(Outcome { results, csv: None, passed })
}
