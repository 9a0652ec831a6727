//! Cross-oracle suite: every quantity is computed by two independent routes and the
//! largest disagreement is compared with a fixed tolerance.

use std::io::Write;

use ps_purify::fock::gaussian_state_to_fock_auto;
use ps_purify::gaussian::ModeSelector;
use ps_purify::quadrature::{purity_by_grid, GridSpec};
use ps_purify::scenarios::{fuzz_case, random_state, single_mode_family, three_mode_report, RandomRanges, Topology};
use ps_purify::subtraction::{extract_bogoliubov, relative_purity_closed_form, subtract_photon};

use super::CommandError;
use crate::config::RunConfig;
use crate::output::header_line;

struct Check {
    name: &'static str,
    cases: usize,
    deviation: f64,
    tolerance: f64,
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn closed_form(state: &ps_purify::gaussian::GaussianState, sel: &ModeSelector) -> ps_purify::Result<f64> {
    relative_purity_closed_form(&extract_bogoliubov(state, sel)?)
}

fn grid(cfg: &RunConfig, modes: usize) -> GridSpec {
    let points_per_axis = if modes == 1 { cfg.grid_points_one_mode } else { cfg.grid_points_two_mode };
    GridSpec { half_width_sigmas: cfg.grid_half_width_sigmas, points_per_axis, center: None }
}

fn checks(cfg: &RunConfig) -> ps_purify::Result<Vec<Check>> {
    let ranges = cfg.ranges();
    let sel1 = ModeSelector::computational(1, 0)?;
    let mut out = Vec::new();

    let red = closed_form(&single_mode_family(cfg.n_g, cfg.s_db, cfg.alpha_mag, cfg.phi)?, &sel1)?;
    out.push(Check { name: "single-mode ratio vs 1.1967", cases: 1, deviation: red - 1.1967, tolerance: 5e-4 });

    let mut dev = Vec::new();
    for i in 0..cfg.verify_count {
        let case = fuzz_case(cfg.seed, i, &ranges)?;
        let sub = subtract_photon(&case.state, &case.selector)?;
        dev.push(closed_form(&case.state, &case.selector)? - sub.relative_purity()?);
    }
    out.push(Check { name: "closed form vs Isserlis moments", cases: dev.len(), deviation: max_abs(dev), tolerance: 1e-9 });

    let mut dev = Vec::new();
    for seed in 0..20 {
        let st = random_state(1, cfg.seed.wrapping_add(seed), &ranges)?;
        let sub = subtract_photon(&st, &sel1)?;
        dev.push(closed_form(&st, &sel1)? - purity_by_grid(&sub, &grid(cfg, 1))?.value / st.purity());
    }
    out.push(Check { name: "closed form vs grid (one mode)", cases: dev.len(), deviation: max_abs(dev), tolerance: 1e-4 });

    let mut dev = Vec::new();
    let gentle = RandomRanges { n_max: 3.0, r_max: 0.5, d_max: 1.5 };
    for seed in 0..2 {
        let st = random_state(2, cfg.seed.wrapping_add(seed), &gentle)?;
        let sel = ModeSelector::computational(2, 0)?;
        let sub = subtract_photon(&st, &sel)?;
        dev.push(closed_form(&st, &sel)? - purity_by_grid(&sub, &grid(cfg, 2))?.value / st.purity());
    }
    out.push(Check { name: "closed form vs grid (two modes)", cases: dev.len(), deviation: max_abs(dev), tolerance: 1e-4 });

    let mut dev = Vec::new();
    for seed in 0..10 {
        let st = random_state(1, cfg.seed.wrapping_add(seed), &gentle)?;
        let fock = gaussian_state_to_fock_auto(&st, cfg.fock_deficiency)?;
        let ratio = fock.subtract_photon(0)?.reduced_purity(&[0])? / fock.reduced_purity(&[0])?;
        dev.push(closed_form(&st, &sel1)? - ratio);
    }
    out.push(Check { name: "closed form vs Fock (one mode, mixed)", cases: dev.len(), deviation: max_abs(dev), tolerance: 1e-3 });

    let topology = cfg.topology().unwrap_or(Topology::CHAIN);
    let r = three_mode_report(&topology, cfg.three_mode_alpha, cfg.three_mode_s_db, cfg.two_mode_db_rule)?;
    out.push(Check { name: "three-mode table: phase space vs Fock", cases: 9, deviation: r.max_fock_deviation, tolerance: 1e-3 });
    out.push(Check { name: "three-mode diagonal: marginal vs closed form", cases: 3, deviation: r.max_diagonal_deviation, tolerance: 1e-9 });
    let global = max_abs(r.analytic.global_purity.iter().map(|p| p - 1.0));
    out.push(Check { name: "three-mode global purity after subtraction", cases: 3, deviation: global, tolerance: 1e-7 });
    Ok(out)
}

/// Returns whether every check met its tolerance.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool, CommandError> {
    writeln!(out, "{}", header_line("verify", cfg))?;
    let mut all = true;
    for c in checks(cfg)? {
        let ok = c.deviation.abs() <= c.tolerance;
        all &= ok;
        writeln!(
            out,
            "{} {:<46} cases={:<5} max_deviation={:.3e} tolerance={:.0e}",
            if ok { "ok  " } else { "FAIL" },
            c.name,
            c.cases,
            c.deviation.abs(),
            c.tolerance
        )?;
    }
    writeln!(out, "{}", if all { "all checks passed" } else { "some checks failed" })?;
    Ok(all)
}
