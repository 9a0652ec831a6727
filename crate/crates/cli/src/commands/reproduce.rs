use std::io::Write;

use ps_purify::gaussian::ModeSelector;
use ps_purify::scenarios::{single_mode_family, sweep, three_mode_report, topology_search, SweepRecord};
use ps_purify::subtraction::subtract_photon;
use serde_json::json;

use super::{CommandError, Figure};
use crate::config::RunConfig;
use crate::output::{header_json, header_line};

pub fn run(figure: Figure, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CommandError> {
    let command = format!("reproduce {}", figure.as_str());
    match figure {
        Figure::Fig1a => {
            let records = sweep(&cfg.fig1a())?;
            write_csv(out, &header_line(&command, cfg), &["phi", "s_db", "ratio", "f_alpha"], &records, |r| {
                vec![r.input("phi").unwrap(), r.input("s_db").unwrap(), r.ratios[0].ratio, r.bounds[0].f_alpha]
            })
        }
        Figure::Fig1b => {
            let records = sweep(&cfg.fig1b())?;
            write_csv(out, &header_line(&command, cfg), &["alpha_mag", "n_g", "phi", "ratio"], &records, |r| {
                vec![r.input("alpha_mag").unwrap(), r.input("n_g").unwrap(), r.input("phi").unwrap(), r.ratios[0].ratio]
            })
        }
        Figure::Fig2 => fig2(cfg, &command, out),
        Figure::Fig3 => fig3(cfg, &command, out),
    }
}

fn write_csv(
    out: &mut dyn Write,
    header: &str,
    columns: &[&str],
    records: &[SweepRecord],
    row: impl Fn(&SweepRecord) -> Vec<f64>,
) -> Result<(), CommandError> {
    writeln!(out, "{header}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for r in records {
        w.write_record(row(r).iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Gaussian and subtracted Wigner functions of the configured single-mode state on a
/// square grid around the Gaussian mean.
fn fig2(cfg: &RunConfig, command: &str, out: &mut dyn Write) -> Result<(), CommandError> {
    let state = single_mode_family(cfg.n_g, cfg.s_db, cfg.alpha_mag, cfg.phi)?;
    let sub = subtract_photon(&state, &ModeSelector::computational(1, 0)?)?;
    let (v, d) = (state.covariance(), state.displacement());
    let n = cfg.fig2_points;
    let axis = |k: usize| -> Vec<f64> {
        let half = cfg.fig2_half_width_sigmas * v[(k, k)].sqrt();
        (0..n).map(|i| d[k] - half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
    };
    let (qs, ps) = (axis(0), axis(1));
    writeln!(out, "{}", header_line(command, cfg))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "p", "W_gaussian", "W_subtracted"])?;
    for &q in &qs {
        for &p in &ps {
            let point = [q, p];
            let row = [q, p, state.wigner_at(&point)?, sub.wigner_at(&point)?];
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn fig3(cfg: &RunConfig, command: &str, out: &mut dyn Write) -> Result<(), CommandError> {
    let (alpha, db, rule) = (cfg.three_mode_alpha, cfg.three_mode_s_db, cfg.two_mode_db_rule);
    let (topology, search) = match cfg.topology() {
        Some(t) => (Some(t), json!({ "performed": false })),
        None => {
            let s = topology_search(alpha, db, rule)?;
            let info = json!({ "performed": true, "candidates_checked": s.candidates_checked, "matched": s.found.is_some() });
            (s.found.map(|(t, _)| t), info)
        }
    };
    let body = match topology {
        Some(t) => {
            let r = three_mode_report(&t, alpha, db, rule)?;
            json!({
                "topology": t.to_string(),
                "matches_reference_pattern": r.matches_reference,
                "ratios": r.analytic.ratios,
                "ratios_fock": r.fock.ratios,
                "closed_form_diagonal": r.closed_form_diagonal,
                "global_purity_after": r.analytic.global_purity,
                "global_purity_after_fock": r.fock.global_purity,
                "oracle_deltas": {
                    "max_analytic_vs_fock": r.max_fock_deviation,
                    "max_marginal_vs_closed_form_diagonal": r.max_diagonal_deviation,
                    "fock_leakage": r.fock_leakage,
                },
            })
        }
        None => json!({ "topology": null }),
    };
    let doc = json!({
        "header": header_json(command, cfg),
        "alpha": alpha,
        "s_db": db,
        "search": search,
        "result": body,
    });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}
