//! Parameter sweeps. Records come out in grid order and each ratio is recomputed from
//! scratch, so repeated runs are bit-identical.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use super::{ratio_table_analytic, single_mode_family, three_mode_circuit, Topology};
use crate::bounds::{purification_conditions, BoundReport};
use crate::conventions::DbRule;
use crate::error::{Error, Result};
use crate::gaussian::ModeSelector;
use crate::subtraction::{extract_bogoliubov, relative_purity_closed_form};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "figure", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSpec {
    /// Ratio against the displacement direction `φ ∈ [0, 2π]`, one curve per squeezing.
    Fig1a { n_g: f64, alpha_mag: f64, s_db: Vec<f64>, phi_points: usize },
    /// Ratio against `α̃ ∈ [0, alpha_max]`, one curve per `(n_g, φ)`.
    Fig1b { s_db: f64, alpha_max: f64, alpha_points: usize, curves: Vec<(f64, f64)> },
    /// 3×3 table of the three-mode circuit.
    Fig3 { alpha: f64, s_db: f64, rule: DbRule, topology: Topology },
}

impl SweepSpec {
    pub fn fig1a() -> Self {
        SweepSpec::Fig1a { n_g: 10.0, alpha_mag: 6.0, s_db: vec![1.0, 10.0, 30.0], phi_points: 361 }
    }

    pub fn fig1b() -> Self {
        SweepSpec::Fig1b {
            s_db: 10.0,
            alpha_max: 12.0,
            alpha_points: 241,
            curves: vec![(10.0, 0.0), (20.0, 0.0), (10.0, FRAC_PI_2), (20.0, FRAC_PI_2)],
        }
    }

    pub fn fig3() -> Self {
        SweepSpec::Fig3 { alpha: 1.6, s_db: 3.0, rule: DbRule::Amplitude, topology: Topology::CHAIN }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEntry {
    pub subtracted: usize,
    pub measured: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    /// Named input parameters of this grid point.
    pub inputs: Vec<(String, f64)>,
    pub ratios: Vec<RatioEntry>,
    /// Bound report of each subtracted mode's own row.
    pub bounds: Vec<BoundReport>,
}

impl SweepRecord {
    pub fn input(&self, name: &str) -> Option<f64> {
        self.inputs.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

fn grid(max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!("sweep needs at least 2 points, got {points}")));
    }
    Ok((0..points).map(|i| max * i as f64 / (points - 1) as f64).collect())
}

fn single_mode_record(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64) -> Result<SweepRecord> {
    let state = single_mode_family(n_g, s_db, alpha_mag, phi)?;
    let row = extract_bogoliubov(&state, &ModeSelector::computational(1, 0)?)?;
    Ok(SweepRecord {
        inputs: vec![
            ("n_g".into(), n_g),
            ("s_db".into(), s_db),
            ("alpha_mag".into(), alpha_mag),
            ("phi".into(), phi),
        ],
        ratios: vec![RatioEntry { subtracted: 0, measured: 0, ratio: relative_purity_closed_form(&row)? }],
        bounds: vec![purification_conditions(&row)?],
    })
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    match spec {
        SweepSpec::Fig1a { n_g, alpha_mag, s_db, phi_points } => {
            let phis = grid(TAU, *phi_points)?;
            let mut out = Vec::with_capacity(s_db.len() * phis.len());
            for &s in s_db {
                for &phi in &phis {
                    out.push(single_mode_record(*n_g, s, *alpha_mag, phi)?);
                }
            }
            Ok(out)
        }
        SweepSpec::Fig1b { s_db, alpha_max, alpha_points, curves } => {
            let alphas = grid(*alpha_max, *alpha_points)?;
            let mut out = Vec::with_capacity(curves.len() * alphas.len());
            for &(n_g, phi) in curves {
                for &a in &alphas {
                    out.push(single_mode_record(n_g, *s_db, a, phi)?);
                }
            }
            Ok(out)
        }
        SweepSpec::Fig3 { alpha, s_db, rule, topology } => {
            let state = three_mode_circuit(topology, *alpha, *s_db, *rule)?.to_gaussian()?;
            let table = ratio_table_analytic(&state)?;
            let mut ratios = Vec::with_capacity(9);
            for (g, row) in table.ratios.iter().enumerate() {
                ratios.extend(row.iter().enumerate().map(|(j, &ratio)| RatioEntry { subtracted: g, measured: j, ratio }));
            }
            let bounds = (0..3)
                .map(|g| {
                    let reduced = state.reduce(&[g])?;
                    purification_conditions(&extract_bogoliubov(&reduced, &ModeSelector::computational(1, 0)?)?)
                })
                .collect::<Result<_>>()?;
            Ok(vec![SweepRecord { inputs: vec![("alpha".into(), *alpha), ("s_db".into(), *s_db)], ratios, bounds }])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1a_peaks_at_multiples_of_pi() {
        let recs = sweep(&SweepSpec::fig1a()).unwrap();
        let curve: Vec<&SweepRecord> = recs.iter().filter(|r| r.input("s_db") == Some(10.0)).collect();
        let best = curve.iter().max_by(|a, b| a.ratios[0].ratio.total_cmp(&b.ratios[0].ratio)).unwrap();
        let phi = best.input("phi").unwrap();
        let step = TAU / 360.0;
        assert!([0.0, std::f64::consts::PI, TAU].iter().any(|p| (phi - p).abs() <= step), "{phi}");
        // symmetric about π and 2π-periodic
        let n = curve.len();
        for k in 0..n {
            let (a, b) = (curve[k].ratios[0].ratio, curve[n - 1 - k].ratios[0].ratio);
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn fig1b_half_pi_rows_never_exceed_one() {
        for r in sweep(&SweepSpec::fig1b()).unwrap() {
            if r.input("phi") == Some(FRAC_PI_2) {
                assert!(r.ratios[0].ratio <= 1.0 + 1e-9);
                assert!(!r.bounds[0].purifiable || r.bounds[0].boundary);
            }
        }
    }

    #[test]
    fn fig1b_reaches_envelope_maximum() {
        let recs = sweep(&SweepSpec::Fig1b { s_db: 10.0, alpha_max: 12.0, alpha_points: 2401, curves: vec![(10.0, 0.0)] }).unwrap();
        let best = recs.iter().max_by(|a, b| a.ratios[0].ratio.total_cmp(&b.ratios[0].ratio)).unwrap();
        let report = &best.bounds[0];
        assert!((best.ratios[0].ratio - report.f_max).abs() < 1e-5);
        assert!((best.input("alpha_mag").unwrap().powi(2) - report.alpha_star.unwrap()).abs() < 0.1);
    }

    #[test]
    fn fig3_has_nine_entries() {
        let recs = sweep(&SweepSpec::fig3()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].ratios.len(), 9);
        assert_eq!(recs[0].bounds.len(), 3);
    }

    #[test]
    fn spec_round_trips_through_toml() {
        for spec in [SweepSpec::fig1a(), SweepSpec::fig1b(), SweepSpec::fig3()] {
            let text = toml::to_string(&spec).unwrap();
            assert_eq!(toml::from_str::<SweepSpec>(&text).unwrap(), spec);
        }
    }
}
