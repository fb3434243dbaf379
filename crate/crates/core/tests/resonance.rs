use polydyn_core::linalg::eigenvalues;
use polydyn_core::linearize::{check_resonance_numeric, check_resonance_symbolic, eigen_symbols_gamma_d};
use polydyn_core::{make_gamma_d, rat, Coefficient, RangeCheck, Rational};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

// Distinct primes as denominators keep the parameters multiplicatively independent.
const PRIMES: [i64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn random_lambdas(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rational> {
    let mut pool = PRIMES.to_vec();
    (0..d)
        .map(|_| {
            let idx = (rng.next_u32() as usize) % pool.len();
            rat(1, pool.swap_remove(idx))
        })
        .collect()
}

#[test]
fn symbolic_and_numeric_checkers_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for d in 3..=5 {
        let symbols = eigen_symbols_gamma_d(d).unwrap();
        for trial in 0..4 {
            let lambdas = random_lambdas(&mut rng, d);
            let g = make_gamma_d(&lambdas, RangeCheck::Strict).unwrap();
            let linear: Vec<Vec<_>> = g
                .linear_part()
                .unwrap()
                .iter()
                .map(|row| row.iter().map(Coefficient::to_complex).collect())
                .collect();
            let alphas = eigenvalues(&linear).unwrap();
            for m in [2, 6, 12] {
                let sym = check_resonance_symbolic(&symbols, m);
                let num = check_resonance_numeric(&alphas, m, 1e-10);
                assert_eq!(sym.resonant, num.resonant, "d={d} trial={trial} M={m} lambdas={lambdas:?}");
                assert_eq!(sym.checked, num.checked);
            }
        }
    }
}

#[test]
fn numeric_checker_finds_planted_resonance() {
    // l3 = l1 * l2 gives a_3 = a_1^2.
    let lambdas = [rat(1, 3), rat(1, 4), rat(1, 12)];
    let g = make_gamma_d(&lambdas, RangeCheck::Strict).unwrap();
    let linear: Vec<Vec<_>> =
        g.linear_part().unwrap().iter().map(|row| row.iter().map(Coefficient::to_complex).collect()).collect();
    let alphas = eigenvalues(&linear).unwrap();
    let report = check_resonance_numeric(&alphas, 4, 1e-10);
    assert!(report.resonant);
    assert!(report.witnesses.iter().any(|w| w.target == 2 && w.multi_index == [2, 0, 0]));
}
