use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zernike::higgs::structure_function;
use zernike::spectrum::{
    closed_form_phi, energy_type_i, energy_type_ii, random_gammas, solve_numeric, solve_symbolic, TypeLabel,
};
use zernike::symmetries::HamiltonianSpec;
use zernike::{GaussianRational, ParamScalar, Var};

type G = GaussianRational;

fn at(p: &ParamScalar, gammas: &[G], extra: &[(Var, i64)]) -> G {
    let mut v: BTreeMap<Var, G> =
        gammas.iter().enumerate().map(|(i, g)| (Var::gamma(i as u32 + 1), g.clone())).collect();
    v.extend(extra.iter().map(|&(var, x)| (var, G::from_ints(x, 0))));
    p.eval(&v).expect("all variables bound")
}

#[test]
fn dropping_the_top_parameter_reduces_the_order() {
    for order in 3..=6 {
        let lower = HamiltonianSpec::symbolic(order - 1).unwrap();
        let mut params = lower.params().to_vec();
        params.push(ParamScalar::zero());
        let padded = HamiltonianSpec::from_params(params).unwrap();
        assert_eq!(energy_type_i(&padded), energy_type_i(&lower));
        assert_eq!(energy_type_ii(&padded), energy_type_ii(&lower));
        for label in [TypeLabel::I, TypeLabel::II] {
            assert_eq!(closed_form_phi(&padded, label), closed_form_phi(&lower, label));
        }
        assert_eq!(structure_function(&padded), structure_function(&lower));
    }
}

#[test]
fn cubic_families_reduce_to_quadratic_ones() {
    let zero = BTreeMap::from([(Var::gamma(3), G::zero())]);
    let cubic = solve_symbolic(&HamiltonianSpec::symbolic(3).unwrap());
    let quadratic = solve_symbolic(&HamiltonianSpec::symbolic(2).unwrap());
    for label in [TypeLabel::I, TypeLabel::II] {
        let c = cubic.iter().find(|s| s.type_label == label).unwrap().phi_product().unwrap();
        let q = quadratic.iter().find(|s| s.type_label == label).unwrap().phi_product().unwrap();
        assert_eq!(c.eval_partial(&zero).unwrap(), q);
    }
}

#[test]
fn quartic_solution_count() {
    let sols = solve_symbolic(&HamiltonianSpec::symbolic(4).unwrap());
    assert_eq!(sols.iter().map(|s| s.root_count()).sum::<u32>(), 12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reality_convention_gives_real_levels(order in 1u32..=6, n in 1i64..=30, seed in any::<u64>()) {
        let gammas = random_gammas(order, true, &mut ChaCha8Rng::seed_from_u64(seed));
        let spec = HamiltonianSpec::symbolic(order).unwrap();
        for e in [energy_type_i(&spec), energy_type_ii(&spec)] {
            prop_assert!(at(&e, &gammas, &[(Var::N, n)]).is_real());
        }
        for label in [TypeLabel::I, TypeLabel::II] {
            let phi = closed_form_phi(&spec, label).unwrap();
            for b in 1..=n.min(6) {
                prop_assert!(at(&phi, &gammas, &[(Var::N, n), (Var::B, b)]).is_real());
            }
        }
    }

    #[test]
    fn structure_function_closes_the_representation(order in 1u32..=6, n in 1i64..=12, seed in any::<u64>()) {
        let gammas = random_gammas(order, false, &mut ChaCha8Rng::seed_from_u64(seed));
        let spec = HamiltonianSpec::symbolic(order).unwrap();
        for label in [TypeLabel::I, TypeLabel::II] {
            let phi = closed_form_phi(&spec, label).unwrap();
            prop_assert!(at(&phi, &gammas, &[(Var::N, n), (Var::B, 0)]).is_zero());
            prop_assert!(at(&phi, &gammas, &[(Var::N, n), (Var::B, n + 1)]).is_zero());
        }
    }

    #[test]
    fn numeric_roots_satisfy_the_constraints(order in 2u32..=4, n in 1u32..=6, seed in any::<u64>()) {
        let gammas = random_gammas(order, false, &mut ChaCha8Rng::seed_from_u64(seed));
        let spec = HamiltonianSpec::numeric(&gammas).unwrap();
        let sols = solve_numeric(&spec, n, false).unwrap();
        prop_assert!(sols.iter().any(|s| s.type_label == TypeLabel::I));
        for s in &sols {
            prop_assert!(s.residual < 1e-8, "{:?}", s);
        }
    }
}
