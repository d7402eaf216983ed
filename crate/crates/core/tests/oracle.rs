use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zernike::oracle::{build_matrix, compare_with_formula, oracle_spectrum, FormulaComparison};
use zernike::spectrum::{random_gammas, solve_symbolic, TypeLabel};
use zernike::symmetries::{build_hamiltonian, HamiltonianSpec};
use zernike::weyl::{apply_to_polynomial, QPolynomial};
use zernike::GaussianRational;

type G = GaussianRational;

#[test]
fn zernike_levels_match_the_type_one_family() {
    let gammas = [G::from_ints(0, 2), G::from_ints(-1, 0)];
    let report = oracle_spectrum(&build_matrix(&gammas, 12), false);
    let sols = solve_symbolic(&HamiltonianSpec::numeric(&gammas).unwrap());
    let t1 = sols.iter().find(|s| s.type_label == TypeLabel::I).unwrap();
    assert_eq!(compare_with_formula(&report, t1, &gammas), FormulaComparison::Matched { degrees: 13 });
    for level in &report.levels {
        let m = level.degree as i64;
        assert_eq!(level.eigenvalue, G::from_ints(m * (m + 2), 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn eigenvectors_have_fixed_parity_and_solve_h(order in 1u32..=3, seed in any::<u64>()) {
        let gammas = random_gammas(order, true, &mut ChaCha8Rng::seed_from_u64(seed));
        let h = build_hamiltonian(&HamiltonianSpec::numeric(&gammas).unwrap())
            .substitute_params(&Default::default())
            .unwrap();
        let report = oracle_spectrum(&build_matrix(&gammas, 8), true);
        for level in &report.levels {
            let Some(vectors) = &level.eigenvectors else { continue };
            for v in vectors {
                prop_assert!(v.iter().all(|((x, y), _)| (x + y) % 2 == level.degree % 2 && x + y <= level.degree));
                let f: QPolynomial<G> = v.iter().cloned().collect();
                let hf = apply_to_polynomial(&h, &f);
                for (key, c) in &hf {
                    let want = f.get(key).cloned().unwrap_or_else(G::zero) * level.eigenvalue.clone();
                    prop_assert_eq!(c, &want);
                }
            }
        }
    }
}
