//! Property checks of the ratio bounds and the purification verdict over a seeded corpus.

use std::io::Write;

use ps_purify::bounds::{bound_f_max, purification_conditions};
use ps_purify::gaussian::GaussianState;
use ps_purify::scenarios::{fuzz_case, FuzzCase, RandomRanges};
use ps_purify::subtraction::{extract_bogoliubov, relative_purity_closed_form};
use serde_json::json;

use super::CommandError;
use crate::config::RunConfig;
use crate::output::header_line;

const FLOOR: f64 = 0.5 - 1e-10;
const CEILING: f64 = 1.2;
const SLACK: f64 = 1e-9;

fn violation(case: &FuzzCase, ratio: f64) -> Result<Option<String>, CommandError> {
    let row = extract_bogoliubov(&case.state, &case.selector)?;
    let report = purification_conditions(&row)?;
    let f_max = bound_f_max(report.x, report.y, report.z).map(|(_, f)| f).unwrap_or(1.0);
    let msg = if !(FLOOR..CEILING).contains(&ratio) {
        format!("ratio {ratio} outside [0.5, 1.2)")
    } else if report.purifiable != (ratio >= 1.0 - SLACK) {
        format!("verdict purifiable={} but ratio {ratio}", report.purifiable)
    } else if ratio > report.f_alpha + SLACK {
        format!("ratio {ratio} above envelope f = {}", report.f_alpha)
    } else if report.f_alpha > f_max + SLACK {
        format!("envelope f = {} above f_max = {f_max}", report.f_alpha)
    } else {
        return Ok(None);
    };
    Ok(Some(msg))
}

fn serialize(state: &GaussianState, case: &FuzzCase, seed: u64, reason: &str) -> String {
    let v = state.covariance();
    let rows: Vec<Vec<f64>> = (0..v.nrows()).map(|i| v.row(i).iter().copied().collect()).collect();
    json!({
        "seed": seed,
        "index": case.index,
        "reason": reason,
        "covariance": rows,
        "displacement": state.displacement().iter().copied().collect::<Vec<_>>(),
        "selector_basis_x": case.selector.basis_x().iter().copied().collect::<Vec<_>>(),
    })
    .to_string()
}

/// Returns whether the corpus produced no violation.
pub fn run(cfg: &RunConfig, count: u64, seed: u64, out: &mut dyn Write) -> Result<bool, CommandError> {
    writeln!(out, "{}", header_line(&format!("fuzz --count {count} --seed {seed}"), cfg))?;
    let displaced = cfg.ranges();
    let undisplaced = RandomRanges { d_max: 0.0, ..displaced };
    let (mut lo, mut hi, mut undisplaced_max, mut purifiable) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY, 0u64);
    for index in 0..count {
        let case = fuzz_case(seed, index, &displaced)?;
        let ratio = relative_purity_closed_form(&extract_bogoliubov(&case.state, &case.selector)?)?;
        if let Some(reason) = violation(&case, ratio)? {
            writeln!(out, "violation {}", serialize(&case.state, &case, seed, &reason))?;
            return Ok(false);
        }
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        purifiable += u64::from(ratio >= 1.0 - SLACK);

        let flat = fuzz_case(seed, index, &undisplaced)?;
        let r0 = relative_purity_closed_form(&extract_bogoliubov(&flat.state, &flat.selector)?)?;
        if r0 > 1.0 + 1e-10 {
            let reason = format!("undisplaced ratio {r0} above 1");
            writeln!(out, "violation {}", serialize(&flat.state, &flat, seed, &reason))?;
            return Ok(false);
        }
        undisplaced_max = undisplaced_max.max(r0);
    }
    writeln!(out, "cases={count} ratio_min={lo} ratio_max={hi} purifiable={purifiable} undisplaced_ratio_max={undisplaced_max}")?;
    writeln!(out, "no violations")?;
    Ok(true)
}
