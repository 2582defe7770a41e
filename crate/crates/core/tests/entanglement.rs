mod common;

use common::{broken_pair_aee, broken_pair_aee_enumerated, c, geometric_oracle, random_state, rng};
use floquet_ent::chain::{make_ghz, make_polarized_state, Axis, Direction, StateVector};
use floquet_ent::entanglement::{
    aee_report, average_entanglement_entropy, detect_bell_pairs, geometric_measure, min_bipartition_entropy,
    power_iteration, GeometricOptions,
};
use floquet_ent::floquet::{Boundary, Floquet, FloquetSpec, Model};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn bell_product(pairs: usize) -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::from_amplitudes(2, vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]).unwrap();
    (1..pairs).fold(bell.clone(), |acc, _| acc.tensor(&bell).unwrap())
}

fn random_start(l: usize, seed: u64) -> Vec<[Complex64; 2]> {
    let mut g = rng(seed);
    (0..l)
        .map(|_| {
            let t: f64 = g.random_range(0.0..std::f64::consts::PI);
            let p: f64 = g.random_range(0.0..std::f64::consts::TAU);
            [c((t / 2.0).cos(), 0.0), Complex64::from_polar((t / 2.0).sin(), p)]
        })
        .collect()
}

#[test]
fn geometric_matches_grid_oracle() {
    let mut g = rng(11);
    for l in [2usize, 3] {
        for _ in 0..6 {
            let s = random_state(l, &mut g);
            let ours = geometric_measure(&s, &GeometricOptions::default()).unwrap().lambda;
            let oracle = geometric_oracle(&s);
            // The oracle grid can only under-estimate.
            assert!(ours >= oracle - 1e-9, "L={l}: {ours} < {oracle}");
            assert!(ours - oracle < 1e-4, "L={l}: {ours} vs {oracle}");
        }
    }
}

#[test]
fn lambda_dominates_largest_amplitude() {
    let mut g = rng(5);
    for l in 2..=7 {
        let s = random_state(l, &mut g);
        let r = geometric_measure(&s, &GeometricOptions::default()).unwrap();
        assert!(r.lambda >= s.max_amplitude().1 - 1e-9);
        assert!(r.lambda <= 1.0);
        assert!((r.e_g - (1.0 - r.lambda * r.lambda)).abs() < 1e-12);
    }
}

#[test]
fn closed_form_examples() {
    for l in [3, 6, 10] {
        let r = geometric_measure(&make_ghz(l, Direction::Z).unwrap(), &GeometricOptions::default()).unwrap();
        assert!((r.e_g - 0.5).abs() < 1e-9);
    }
    let r = geometric_measure(&bell_product(2), &GeometricOptions::default()).unwrap();
    assert!((r.e_g - 0.75).abs() < 1e-9, "{}", r.e_g);
    let r = geometric_measure(&make_polarized_state(5, Axis::Y_MINUS).unwrap(), &GeometricOptions::default()).unwrap();
    assert!(r.e_g.abs() < 1e-12);
}

#[test]
fn broken_pair_state_at_ten_sites() {
    let spec = FloquetSpec::new(Model::U0, 10, Boundary::Open).unwrap();
    let s = Floquet::new(spec)
        .unwrap()
        .evolve(&make_polarized_state(10, Axis::Z_PLUS).unwrap(), 5)
        .unwrap();
    let pairing = detect_bell_pairs(&s, 1e-8).unwrap().expect("state is a product of pairs");
    assert_eq!(pairing.len(), 5);
    let report = aee_report(&s).unwrap();
    for (l, entry) in &report.per_l {
        let closed = broken_pair_aee(10, *l);
        let enumerated = broken_pair_aee_enumerated(10, *l, &pairing);
        assert!((closed - enumerated).abs() < 1e-12);
        assert!((entry.entropy - enumerated).abs() < 1e-8, "l={l}");
    }
    // Any complete pair is a zero-entropy subsystem.
    let min = min_bipartition_entropy(&s).unwrap();
    assert!(min.entropy.abs() < 1e-8);
    assert!(pairing.iter().any(|&(a, b)| min.subset == vec![a.min(b), a.max(b)]));
}

#[test]
fn aee_of_product_and_ghz() {
    let p = make_polarized_state(6, Axis::X_PLUS).unwrap();
    let ghz = make_ghz(6, Direction::X).unwrap();
    for l in 1..6 {
        assert!(average_entanglement_entropy(&p, l).unwrap().entropy.abs() < 1e-10);
        let e = average_entanglement_entropy(&ghz, l).unwrap();
        assert!((e.entropy - 1.0).abs() < 1e-10);
        assert!((e.normalized - 1.0 / l as f64).abs() < 1e-10);
    }
    assert!(average_entanglement_entropy(&p, 0).is_err());
    assert!(average_entanglement_entropy(&p, 6).is_err());
}

#[test]
fn no_pairing_for_ghz() {
    assert_eq!(detect_bell_pairs(&make_ghz(4, Direction::Z).unwrap(), 1e-8).unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_iteration_is_monotone(seed in any::<u64>(), l in 2usize..=6) {
        let s = random_state(l, &mut rng(seed));
        let t = power_iteration(&s, random_start(l, seed ^ 1), 200, 1e-12).unwrap();
        for w in t.history.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12, "{} -> {}", w[0], w[1]);
        }
        prop_assert!(t.lambda <= 1.0 + 1e-12);
    }

    #[test]
    fn aee_within_page_bounds(seed in any::<u64>(), l in 2usize..=6) {
        let s = random_state(l, &mut rng(seed));
        for k in 1..l {
            let e = average_entanglement_entropy(&s, k).unwrap().entropy;
            prop_assert!(e >= -1e-10 && e <= k.min(l - k) as f64 + 1e-10);
        }
    }
}
