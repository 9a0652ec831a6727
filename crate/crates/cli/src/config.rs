//! Flat TOML run configuration. Every key is optional; unknown keys are rejected.

use std::path::Path;

use ps_purify::conventions::DbRule;
use ps_purify::scenarios::{RandomRanges, SweepSpec, Topology};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Used when no subcommand is given: `"reproduce fig1a"`, `"verify"`, `"fuzz"`, ...
    pub command: Option<String>,
    /// Output file; standard output when absent.
    pub output: Option<String>,

    // single-mode family (reference state by default)
    pub n_g: f64,
    pub s_db: f64,
    pub alpha_mag: f64,
    pub phi: f64,

    pub fig1a_s_db: Vec<f64>,
    pub fig1a_phi_points: usize,
    pub fig1b_s_db: f64,
    pub fig1b_alpha_max: f64,
    pub fig1b_alpha_points: usize,
    /// `[n_g, phi]` per curve.
    pub fig1b_curves: Vec<[f64; 2]>,
    pub fig2_points: usize,
    pub fig2_half_width_sigmas: f64,

    pub three_mode_alpha: f64,
    pub three_mode_s_db: f64,
    /// `"amplitude"` (s = 10^(dB/20)) or `"power"` (s = 10^(dB/10)) for the two-mode squeezers.
    pub two_mode_db_rule: DbRule,
    /// 1-based pairs such as `"(1,2),(2,3),(1,3)"`; searched when absent.
    pub topology: Option<String>,

    pub fock_deficiency: f64,
    pub grid_half_width_sigmas: f64,
    pub grid_points_one_mode: usize,
    pub grid_points_two_mode: usize,

    pub seed: u64,
    pub fuzz_count: u64,
    pub verify_count: u64,
    pub n_max: f64,
    pub r_max: f64,
    pub d_max: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            output: None,
            n_g: 10.0,
            s_db: 10.0,
            alpha_mag: 6.0,
            phi: 0.0,
            fig1a_s_db: vec![1.0, 10.0, 30.0],
            fig1a_phi_points: 361,
            fig1b_s_db: 10.0,
            fig1b_alpha_max: 12.0,
            fig1b_alpha_points: 241,
            fig1b_curves: vec![[10.0, 0.0], [20.0, 0.0], [10.0, std::f64::consts::FRAC_PI_2], [20.0, std::f64::consts::FRAC_PI_2]],
            fig2_points: 201,
            fig2_half_width_sigmas: 5.0,
            three_mode_alpha: 1.6,
            three_mode_s_db: 3.0,
            two_mode_db_rule: DbRule::Amplitude,
            topology: None,
            fock_deficiency: 1e-8,
            grid_half_width_sigmas: 8.0,
            grid_points_one_mode: 401,
            grid_points_two_mode: 81,
            seed: 7,
            fuzz_count: 10_000,
            verify_count: 1000,
            n_max: 5.0,
            r_max: 1.5,
            d_max: 5.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form of the resolved configuration, excluding the
    /// output path so that the same run written to two places hashes the same.
    pub fn hash(&self) -> String {
        let canonical = RunConfig { output: None, ..self.clone() };
        let digest = Sha256::digest(canonical.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(t) = &self.topology {
            t.parse::<Topology>().map_err(|e| format!("topology: {e}"))?;
        }
        if self.fig1a_phi_points < 2 || self.fig1b_alpha_points < 2 || self.fig2_points < 2 {
            return Err("sweep point counts must be at least 2".into());
        }
        if !(self.fock_deficiency > 0.0) {
            return Err("fock_deficiency must be positive".into());
        }
        Ok(())
    }

    pub fn topology(&self) -> Option<Topology> {
        self.topology.as_ref().map(|t| t.parse().expect("validated"))
    }

    pub fn ranges(&self) -> RandomRanges {
        RandomRanges { n_max: self.n_max, r_max: self.r_max, d_max: self.d_max }
    }

    pub fn fig1a(&self) -> SweepSpec {
        SweepSpec::Fig1a { n_g: self.n_g, alpha_mag: self.alpha_mag, s_db: self.fig1a_s_db.clone(), phi_points: self.fig1a_phi_points }
    }

    pub fn fig1b(&self) -> SweepSpec {
        SweepSpec::Fig1b {
            s_db: self.fig1b_s_db,
            alpha_max: self.fig1b_alpha_max,
            alpha_points: self.fig1b_alpha_points,
            curves: self.fig1b_curves.iter().map(|&[n, p]| (n, p)).collect(),
        }
    }
}
