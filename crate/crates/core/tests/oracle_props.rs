use proptest::prelude::*;
use ps_purify::fock::{gaussian_state_to_fock_auto, run_circuit_fock, TruncationSpec};
use ps_purify::gaussian::{Gate, ModeSelector};
use ps_purify::quadrature::{purity_by_grid, GridSpec};
use ps_purify::scenarios::{random_state, single_mode_family, sweep, RandomRanges, SweepSpec};
use ps_purify::subtraction::{extract_bogoliubov, relative_purity_closed_form, subtract_photon};

fn small() -> RandomRanges {
    RandomRanges { n_max: 2.0, r_max: 0.4, d_max: 1.2 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fock_matches_closed_form(seed in any::<u64>()) {
        let st = random_state(1, seed, &small()).unwrap();
        let closed = relative_purity_closed_form(&extract_bogoliubov(&st, &ModeSelector::computational(1, 0).unwrap()).unwrap()).unwrap();
        let fock = gaussian_state_to_fock_auto(&st, 1e-8).unwrap();
        let after = fock.subtract_photon(0).unwrap();
        let ratio = after.reduced_purity(&[0]).unwrap() / fock.reduced_purity(&[0]).unwrap();
        prop_assert!(fock.leakage() <= 1e-8);
        prop_assert!((ratio - closed).abs() < 1e-3);
    }

    #[test]
    fn partial_trace_order_is_irrelevant(r1 in -0.5..0.5f64, r2 in -0.5..0.5f64, t in 0.0..=1.0f64) {
        let gates = [
            Gate::TwoModeSqueezer { mode_a: 0, mode_b: 1, r: r1 },
            Gate::Beamsplitter { mode_a: 1, mode_b: 2, transmittance: t },
            Gate::TwoModeSqueezer { mode_a: 0, mode_b: 2, r: r2 },
        ];
        let st = run_circuit_fock(3, &gates, &TruncationSpec { cutoff_per_mode: vec![8; 3], deficiency_tolerance: 1.0 }).unwrap();
        let full = st.reduced_density_matrix(&[0, 1, 2]).unwrap();
        let a = full.trace_out(2).unwrap().trace_out(1).unwrap();
        let b = full.trace_out(1).unwrap().trace_out(1).unwrap();
        prop_assert!((&a.data - &b.data).iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn leakage_never_grows_with_cutoff(r in 0.1..1.2f64, d in 6usize..30) {
        let gates = [Gate::Squeezer { mode: 0, r }];
        let run = |c| run_circuit_fock(1, &gates, &TruncationSpec { cutoff_per_mode: vec![c], deficiency_tolerance: 1.0 }).unwrap().leakage();
        prop_assert!(run(d + 1) <= run(d) * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn doubling_within_error_estimate(seed in any::<u64>()) {
        let st = random_state(1, seed, &RandomRanges::default()).unwrap();
        let sub = subtract_photon(&st, &ModeSelector::computational(1, 0).unwrap()).unwrap();
        let coarse = purity_by_grid(&sub, &GridSpec { points_per_axis: 201, ..GridSpec::default() }).unwrap();
        let fine = purity_by_grid(&sub, &GridSpec { points_per_axis: 401, ..GridSpec::default() }).unwrap();
        prop_assert!((coarse.value - fine.value).abs() <= coarse.error_estimate + 1e-12);
    }

    #[test]
    fn phase_symmetry(n_g in 1.0..30.0f64, s_db in -20.0..30.0f64, alpha in 0.0..10.0f64, phi in 0.0..std::f64::consts::PI) {
        let ratio = |p: f64| {
            let st = single_mode_family(n_g, s_db, alpha, p).unwrap();
            relative_purity_closed_form(&extract_bogoliubov(&st, &ModeSelector::computational(1, 0).unwrap()).unwrap()).unwrap()
        };
        let pi = std::f64::consts::PI;
        prop_assert!((ratio(pi + phi) - ratio(pi - phi)).abs() < 1e-9);
        prop_assert!((ratio(phi) - ratio(phi + 2.0 * pi)).abs() < 1e-9);
    }
}

#[test]
fn sweep_records_match_fresh_computation() {
    let first = sweep(&SweepSpec::fig1a()).unwrap();
    assert_eq!(first, sweep(&SweepSpec::fig1a()).unwrap());
    for rec in first.iter().step_by(37) {
        let st = single_mode_family(
            rec.input("n_g").unwrap(),
            rec.input("s_db").unwrap(),
            rec.input("alpha_mag").unwrap(),
            rec.input("phi").unwrap(),
        )
        .unwrap();
        let fresh = relative_purity_closed_form(&extract_bogoliubov(&st, &ModeSelector::computational(1, 0).unwrap()).unwrap()).unwrap();
        assert_eq!(fresh.to_bits(), rec.ratios[0].ratio.to_bits());
    }
}
