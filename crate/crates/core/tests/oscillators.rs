use num_rational::BigRational;
use proptest::prelude::*;

use zernike::oscillators::{admissible_interval, IntervalClass, OscillatorSpec};
use zernike::spectrum::energy_type_i;
use zernike::symmetries::HamiltonianSpec;
use zernike::{GaussianRational, Var};

type Q = BigRational;

fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

#[test]
fn flat_limit_is_continuous() {
    let flat = OscillatorSpec::<f64>::curvature(0.0);
    for eps in [1e-6, -1e-6] {
        let near = OscillatorSpec::curvature(eps);
        for n in 1..=10 {
            assert!((near.energy(n) - flat.energy(n)).abs() < 1e-4, "kappa = {eps}, n = {n}");
        }
    }
    assert_eq!(flat.n_max().unwrap(), None);
}

#[test]
fn levels_follow_the_type_one_energy() {
    let spec = OscillatorSpec::new(q(1, 3), q(-2, 7), q(1, 11));
    let gammas = spec.gaussian_params();
    let e = energy_type_i(&HamiltonianSpec::numeric(&gammas).unwrap());
    for n in 1..=8i64 {
        let mut v: std::collections::BTreeMap<Var, GaussianRational> =
            gammas.iter().enumerate().map(|(i, g)| (Var::gamma(i as u32 + 1), g.clone())).collect();
        v.insert(Var::N, GaussianRational::from_ints(n, 0));
        assert_eq!(e.eval(&v).unwrap(), GaussianRational::real(spec.energy(n as u64)));
    }
}

#[test]
fn hyperbolic_bound_levels_are_unitary() {
    for k in [25, 16, 12] {
        let spec = OscillatorSpec::curvature(q(-k, 100));
        let n_max = spec.n_max().unwrap().unwrap();
        assert!(spec.phi_positivity(n_max).all_positive, "kappa = -{k}/100");
    }
}

#[test]
fn cubic_bound_levels_need_not_be_unitary() {
    // E(−6) > E(6) here, so the second factor of Φ(1, 6) turns negative
    let spec = OscillatorSpec::cubic(q(1, 1), q(7, 100));
    let report = spec.phi_positivity(spec.n_max().unwrap().unwrap());
    assert_eq!(report.first_failure, Some((1, 6, q(-13026, 625))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stronger_curvature_binds_fewer_levels(a in 1i64..=150, b in 1i64..=150) {
        let (weak, strong) = (a.min(b), a.max(b));
        let count = |k: i64| OscillatorSpec::curvature(q(-k, 100)).n_max().unwrap().unwrap();
        prop_assert!(count(strong) <= count(weak));
    }

    #[test]
    fn stronger_cubic_binds_fewer_levels(a in 1i64..=150, b in 1i64..=150, kappa in 0i64..=3) {
        let (weak, strong) = (a.min(b), a.max(b));
        let count = |m: i64| {
            OscillatorSpec::cubic(q(kappa, 2), q(m, 100)).n_max().map(|v| v.unwrap()).unwrap_or(0)
        };
        prop_assert!(count(strong) <= count(weak));
    }

    #[test]
    fn interval_contains_its_own_count(n_max in 1u64..=12, t in 0i64..1000, class in 0usize..3) {
        let class = [
            IntervalClass::HyperbolicOscillator,
            IntervalClass::FlatCubic,
            IntervalClass::SphericalCubic { kappa: q(1, 2) },
        ][class].clone();
        let interval = admissible_interval(&class, n_max).unwrap();
        let x = interval.lo.clone() + (interval.hi.clone() - interval.lo.clone()) * q(t, 1000);
        prop_assert!(interval.contains(&x));
        prop_assert_eq!(class.spec_at(x).n_max().unwrap(), Some(n_max));
        prop_assert!(class.spec_at(interval.hi.clone()).n_max().map(|v| v != Some(n_max)).unwrap_or(true));
    }

    #[test]
    fn parameter_map_round_trips(k in -50i64..=50, m in -50i64..=50, v in -50i64..=50) {
        let spec = OscillatorSpec::new(q(k, 17), q(m, 19), q(v, 23));
        prop_assert_eq!(OscillatorSpec::from_gammas(&spec.map_params()).unwrap(), spec);
    }
}
