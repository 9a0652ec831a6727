use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use ps_purify::gaussian::{GaussianState, Gate, SymplecticTransform};
use ps_purify::quadrature::{purity_by_grid, GridSpec};
use ps_purify::scenarios::{random_state, RandomRanges};

fn ranges() -> RandomRanges {
    RandomRanges { n_max: 20.0, r_max: 1.5, d_max: 8.0 }
}

fn gate_strategy(m: usize) -> impl Strategy<Value = Gate> {
    let mode = 0..m;
    prop_oneof![
        (mode.clone(), -3.0..3.0f64).prop_map(|(mode, theta)| Gate::PhaseRotation { mode, theta }),
        (mode.clone(), -1.0..1.0f64).prop_map(|(mode, r)| Gate::Squeezer { mode, r }),
        (mode.clone(), 0..m, -0.8..0.8f64).prop_filter_map("distinct modes", |(a, b, r)| {
            (a != b).then_some(Gate::TwoModeSqueezer { mode_a: a, mode_b: b, r })
        }),
        (mode.clone(), 0..m, 0.0..=1.0f64).prop_filter_map("distinct modes", |(a, b, t)| {
            (a != b).then_some(Gate::Beamsplitter { mode_a: a, mode_b: b, transmittance: t })
        }),
        (mode, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(mode, re, im)| Gate::displacement(mode, Complex64::new(re, im))),
    ]
}

proptest! {
    #[test]
    fn generated_states_are_physical(m in 1usize..=4, seed in any::<u64>()) {
        let st = random_state(m, seed, &ranges()).unwrap();
        let nu = st.symplectic_eigenvalues().unwrap();
        prop_assert!(nu.iter().all(|&n| n >= 1.0 - 1e-9));
        let mu = st.purity();
        prop_assert!(mu > 0.0 && mu <= 1.0 + 1e-12);
    }

    #[test]
    fn gates_preserve_purity(seed in any::<u64>(), gates in prop::collection::vec(gate_strategy(3), 1..8)) {
        let st = random_state(3, seed, &ranges()).unwrap();
        let s = gates
            .iter()
            .filter(|g| !matches!(g, Gate::Displacement { .. }))
            .fold(SymplecticTransform::identity(3), |acc, g| acc.then(&g.symplectic(3).unwrap()).unwrap());
        let out = st.apply_symplectic(&s).unwrap();
        prop_assert!((out.purity() / st.purity() - 1.0).abs() < 1e-12);
        let via_gates = st.apply_gates(&gates).unwrap();
        prop_assert!((via_gates.purity() / st.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn williamson_round_trip(m in 1usize..=4, seed in any::<u64>()) {
        let st = random_state(m, seed, &ranges()).unwrap();
        let w = st.williamson().unwrap();
        let v = st.covariance();
        prop_assert!((w.reconstruct() - v).norm() / v.norm() < 1e-9);
        prop_assert!(w.symplectic.defect() < 1e-8);
    }

    #[test]
    fn reduce_of_product_keeps_purity(seed_a in any::<u64>(), seed_b in any::<u64>(), ma in 1usize..=2, mb in 1usize..=2) {
        let a = random_state(ma, seed_a, &ranges()).unwrap();
        let b = random_state(mb, seed_b, &ranges()).unwrap();
        let joint = a.tensor(&b);
        let back = joint.reduce(&(0..ma).collect::<Vec<_>>()).unwrap();
        prop_assert!((back.purity() - a.purity()).abs() < 1e-12);
        prop_assert!((joint.purity() - a.purity() * b.purity()).abs() < 1e-12);
    }

    #[test]
    fn purity_matches_single_mode_grid(seed in any::<u64>()) {
        let st = random_state(1, seed, &ranges()).unwrap();
        let grid = purity_by_grid(&st.wigner_density().unwrap(), &GridSpec::for_modes(1)).unwrap();
        prop_assert!((grid.value - st.purity()).abs() < 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn purity_matches_two_mode_grid(seed in any::<u64>()) {
        let st = random_state(2, seed, &RandomRanges { n_max: 3.0, r_max: 0.6, d_max: 2.0 }).unwrap();
        let grid = purity_by_grid(&st.wigner_density().unwrap(), &GridSpec::for_modes(2)).unwrap();
        prop_assert!((grid.value - st.purity()).abs() < 1e-4);
    }
}

#[test]
fn vacuum_is_identity() {
    let v = GaussianState::vacuum(2).unwrap();
    assert_eq!(v.covariance(), &DMatrix::<f64>::identity(4, 4));
    assert_eq!(v.purity(), 1.0);
}
