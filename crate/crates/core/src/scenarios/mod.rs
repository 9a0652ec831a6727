//! Worked examples, seeded random states and parameter sweeps.
//!
//! * [`single_mode_family`]: displaced squeezed thermal states `diag(n s, n/s)`.
//! * [`three_mode_circuit`]: a displacement on mode 0 followed by three two-mode squeezers
//!   on a chosen [`Topology`]; [`topology_search`] looks for the pairing whose 3×3
//!   relative-purity table has the reference sign pattern.
//! * [`random`]: seeded random states and selectors for fuzzing the bounds.
//! * [`sweep`]: the curves and tables behind the figures.

pub mod random;
pub mod sweep;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conventions::{db_to_factor, DbRule};
use crate::error::{Error, Result};
use crate::fock::{run_circuit_fock_auto, DEFAULT_DEFICIENCY_TOLERANCE};
use crate::gaussian::{GaussianState, Gate, ModeSelector};
use crate::subtraction::{extract_bogoliubov, relative_purity_closed_form, subtract_photon};

pub use random::{fuzz_case, random_selector, random_state, FuzzCase, RandomRanges};
pub use sweep::{sweep, RatioEntry, SweepRecord, SweepSpec};

/// A gate sequence applied to the vacuum of `modes` modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDescription {
    pub modes: usize,
    pub gates: Vec<Gate>,
}

impl CircuitDescription {
    pub fn new(modes: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Self { modes, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidArgument("circuit has no modes".into()));
        }
        self.gates.iter().try_for_each(|g| g.validate(self.modes))
    }

    pub fn to_gaussian(&self) -> Result<GaussianState> {
        self.validate()?;
        GaussianState::vacuum(self.modes)?.apply_gates(&self.gates)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

/// `V = diag(n_g s, n_g/s)` with `s = 10^(s_db/10)`, displaced to `⟨â⟩ = α̃ e^{iφ}`.
pub fn single_mode_family(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64) -> Result<GaussianState> {
    if ![n_g, s_db, alpha_mag, phi].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite single-mode parameter".into()));
    }
    if n_g < 1.0 {
        return Err(Error::UnphysicalState(format!("noise factor {n_g} below 1")));
    }
    if alpha_mag < 0.0 {
        return Err(Error::InvalidArgument(format!("negative displacement magnitude {alpha_mag}")));
    }
    let s = db_to_factor(s_db);
    let v = DMatrix::from_diagonal(&DVector::from_vec(vec![n_g * s, n_g / s]));
    let d = DVector::from_vec(vec![2.0 * alpha_mag * phi.cos(), 2.0 * alpha_mag * phi.sin()]);
    GaussianState::new(v, d)
}

/// Returns `state` with its displacement replaced along the selected mode so that
/// `⟨â_g⟩ = amplitude`; components orthogonal to the selector are kept.
pub fn with_selected_amplitude(state: &GaussianState, selector: &ModeSelector, amplitude: Complex64) -> Result<GaussianState> {
    if selector.mode_count() != state.mode_count() {
        return Err(Error::DimensionMismatch { expected: 2 * state.mode_count(), actual: 2 * selector.mode_count() });
    }
    let (gx, gp) = (selector.basis_x(), selector.basis_p());
    let d = state.displacement();
    let shifted = d - gx * d.dot(gx) - gp * d.dot(gp) + gx * (2.0 * amplitude.re) + gp * (2.0 * amplitude.im);
    GaussianState::new(state.covariance().clone(), shifted)
}

/// Which mode pairs the three two-mode squeezers of the three-mode circuit couple,
/// in application order. Modes are 0-based; [`fmt::Display`] prints them 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    pub pairs: [[usize; 2]; 3],
}

impl Topology {
    /// `(1,2), (2,3), (1,3)`
    pub const CHAIN: Topology = Topology { pairs: [[0, 1], [1, 2], [0, 2]] };

    /// All 27 sequences of three unordered pairs of `{0, 1, 2}`.
    ///
    /// A two-mode squeezer is symmetric in its modes, so ordered pairs would only add
    /// duplicates.
    pub fn all() -> Vec<Topology> {
        const PAIRS: [[usize; 2]; 3] = [[0, 1], [1, 2], [0, 2]];
        let mut out = Vec::with_capacity(27);
        for a in PAIRS {
            for b in PAIRS {
                for c in PAIRS {
                    out.push(Topology { pairs: [a, b, c] });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for [a, b] in self.pairs {
            if a > 2 || b > 2 || a == b {
                return Err(Error::InvalidArgument(format!("invalid mode pair ({}, {})", a + 1, b + 1)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.pairs;
        write!(f, "({},{}),({},{}),({},{})", p[0][0] + 1, p[0][1] + 1, p[1][0] + 1, p[1][1] + 1, p[2][0] + 1, p[2][1] + 1)
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    /// Parses the 1-based form printed by [`fmt::Display`], e.g. `(1,2),(2,3),(1,3)`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        if digits.len() != 6 || digits.contains(&0) {
            return Err(Error::Parse(format!("expected three 1-based mode pairs, got '{s}'")));
        }
        let d = |i: usize| digits[i] - 1;
        let t = Topology { pairs: [[d(0), d(1)], [d(2), d(3)], [d(4), d(5)]] };
        t.validate()?;
        Ok(t)
    }
}

/// `Ŝ₃Ŝ₂Ŝ₁D̂|0,0,0⟩`: a real displacement `alpha` on mode 0, then the three squeezers.
pub fn three_mode_circuit(topology: &Topology, alpha: f64, s_db: f64, rule: DbRule) -> Result<CircuitDescription> {
    topology.validate()?;
    let mut gates = vec![Gate::displacement(0, Complex64::new(alpha, 0.0))];
    gates.extend(topology.pairs.iter().map(|&[a, b]| Gate::two_mode_squeezer_db(a, b, s_db, rule)));
    CircuitDescription::new(3, gates)
}

/// Relative purities after subtraction from each mode of a pure multimode state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRatioTable {
    /// `ratios[g][j]`: subtraction on mode `g`, purity of mode `j`.
    pub ratios: Vec<Vec<f64>>,
    /// Global purity after each subtraction.
    pub global_purity: Vec<f64>,
}

impl ModeRatioTable {
    pub fn max_deviation(&self, other: &ModeRatioTable) -> f64 {
        let a = self.ratios.iter().flatten().zip(other.ratios.iter().flatten());
        let b = self.global_purity.iter().zip(&other.global_purity);
        a.chain(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// Phase-space route: each entry is the purity of a one-mode marginal of the subtracted
/// Wigner function relative to the reduced Gaussian state.
pub fn ratio_table_analytic(state: &GaussianState) -> Result<ModeRatioTable> {
    let m = state.mode_count();
    let mut ratios = Vec::with_capacity(m);
    let mut global_purity = Vec::with_capacity(m);
    for g in 0..m {
        let sub = subtract_photon(state, &ModeSelector::computational(m, g)?)?;
        ratios.push((0..m).map(|j| sub.marginal(&[j])?.relative_purity()).collect::<Result<Vec<_>>>()?);
        global_purity.push(sub.purity()?);
    }
    Ok(ModeRatioTable { ratios, global_purity })
}

/// Closed-form ratio of the subtracted mode's own purity, `ratios[g][g]`, for each `g`.
pub fn diagonal_closed_form(state: &GaussianState) -> Result<Vec<f64>> {
    (0..state.mode_count())
        .map(|g| {
            let reduced = state.reduce(&[g])?;
            relative_purity_closed_form(&extract_bogoliubov(&reduced, &ModeSelector::computational(1, 0)?)?)
        })
        .collect()
}

/// Fock route for a pure circuit state, with automatically chosen cutoffs.
pub fn ratio_table_fock(circuit: &CircuitDescription, tolerance: f64) -> Result<(ModeRatioTable, f64)> {
    let m = circuit.modes;
    let fock = run_circuit_fock_auto(m, &circuit.gates, tolerance)?;
    let before: Vec<f64> = (0..m).map(|j| fock.reduced_purity(&[j])).collect::<Result<_>>()?;
    let mut ratios = Vec::with_capacity(m);
    let mut global_purity = Vec::with_capacity(m);
    for g in 0..m {
        let sub = fock.subtract_photon(g)?;
        ratios.push((0..m).map(|j| Ok(sub.reduced_purity(&[j])? / before[j])).collect::<Result<Vec<_>>>()?);
        global_purity.push(sub.reduced_purity(&(0..m).collect::<Vec<_>>())?);
    }
    Ok((ModeRatioTable { ratios, global_purity }, fock.leakage()))
}

/// Reference sign pattern of the three-mode example: subtraction on mode 1 raises all
/// three purities, on mode 2 lowers all three, on mode 3 raises modes 1 and 2 and lowers
/// mode 3.
pub const REFERENCE_PATTERN: [[bool; 3]; 3] = [[true, true, true], [false, false, false], [true, true, false]];

pub fn sign_pattern(table: &ModeRatioTable) -> Vec<Vec<bool>> {
    table.ratios.iter().map(|row| row.iter().map(|&r| r > 1.0).collect()).collect()
}

pub fn matches_reference(table: &ModeRatioTable) -> bool {
    table.ratios.len() == 3
        && table.ratios.iter().zip(REFERENCE_PATTERN).all(|(row, want)| {
            row.len() == 3 && row.iter().zip(want).all(|(&r, up)| if up { r > 1.0 } else { r < 1.0 })
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologySearch {
    pub candidates_checked: usize,
    /// First topology (in [`Topology::all`] order) with the reference sign pattern.
    pub found: Option<(Topology, ModeRatioTable)>,
}

pub fn topology_search(alpha: f64, s_db: f64, rule: DbRule) -> Result<TopologySearch> {
    let mut checked = 0;
    for t in Topology::all() {
        checked += 1;
        // pairings that leave a mode in vacuum cannot subtract from it
        let table = match ratio_table_analytic(&three_mode_circuit(&t, alpha, s_db, rule)?.to_gaussian()?) {
            Err(Error::SubtractionFromVacuum { .. }) => continue,
            other => other?,
        };
        if matches_reference(&table) {
            return Ok(TopologySearch { candidates_checked: checked, found: Some((t, table)) });
        }
    }
    Ok(TopologySearch { candidates_checked: checked, found: None })
}

/// Analytic table, closed-form diagonal and Fock table for one three-mode circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeModeReport {
    pub topology: Topology,
    pub analytic: ModeRatioTable,
    pub closed_form_diagonal: Vec<f64>,
    pub fock: ModeRatioTable,
    pub fock_leakage: f64,
    pub max_fock_deviation: f64,
    pub max_diagonal_deviation: f64,
    pub matches_reference: bool,
}

pub fn three_mode_report(topology: &Topology, alpha: f64, s_db: f64, rule: DbRule) -> Result<ThreeModeReport> {
    let circuit = three_mode_circuit(topology, alpha, s_db, rule)?;
    let analytic = ratio_table_analytic(&circuit.to_gaussian()?)?;
    let closed_form_diagonal = diagonal_closed_form(&circuit.to_gaussian()?)?;
    let (fock, fock_leakage) = ratio_table_fock(&circuit, DEFAULT_DEFICIENCY_TOLERANCE)?;
    let max_diagonal_deviation = closed_form_diagonal
        .iter()
        .enumerate()
        .map(|(g, r)| (r - analytic.ratios[g][g]).abs())
        .fold(0.0, f64::max);
    Ok(ThreeModeReport {
        topology: *topology,
        max_fock_deviation: analytic.max_deviation(&fock),
        matches_reference: matches_reference(&analytic),
        analytic,
        closed_form_diagonal,
        fock,
        fock_leakage,
        max_diagonal_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_vacuum_and_errors() {
        let vac = single_mode_family(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(vac, GaussianState::vacuum(1).unwrap());
        assert!(single_mode_family(0.5, 0.0, 0.0, 0.0).is_err());
        let st = single_mode_family(10.0, 10.0, 6.0, 0.0).unwrap();
        assert!((st.covariance()[(0, 0)] - 100.0).abs() < 1e-12);
        assert!((st.displacement()[0] - 12.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_toml_round_trip() {
        let c = three_mode_circuit(&Topology::CHAIN, 1.6, 3.0, DbRule::Amplitude).unwrap();
        let text = c.to_toml().unwrap();
        assert_eq!(CircuitDescription::from_toml(&text).unwrap(), c);
        assert!(CircuitDescription::from_toml("modes = 1\ngates = []\nextra = 1\n").is_err());
        assert!(CircuitDescription::from_toml("modes = 1\n[[gates]]\nkind = \"squeezer\"\nmode = 3\nr = 0.1\n").is_err());
    }

    #[test]
    fn topology_parse_and_validate() {
        assert_eq!("(1,2),(2,3),(1,3)".parse::<Topology>().unwrap(), Topology::CHAIN);
        assert_eq!(Topology::CHAIN.to_string(), "(1,2),(2,3),(1,3)");
        assert!("(1,1),(2,3),(1,3)".parse::<Topology>().is_err());
        assert!(three_mode_circuit(&Topology { pairs: [[0, 3], [1, 2], [0, 2]] }, 1.6, 3.0, DbRule::Power).is_err());
        assert_eq!(Topology::all().len(), 27);
    }

    #[test]
    fn three_mode_state_is_pure() {
        let st = three_mode_circuit(&Topology::CHAIN, 1.6, 3.0, DbRule::Power).unwrap().to_gaussian().unwrap();
        assert!((st.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn undisplaced_never_purifies() {
        for t in Topology::all() {
            let st = three_mode_circuit(&t, 0.0, 3.0, DbRule::Power).unwrap().to_gaussian().unwrap();
            let table = match ratio_table_analytic(&st) {
                Err(Error::SubtractionFromVacuum { .. }) => continue,
                other => other.unwrap(),
            };
            assert!(table.ratios.iter().flatten().all(|&r| r <= 1.0 + 1e-10), "{t}");
        }
    }

    #[test]
    fn diagonal_routes_agree() {
        let st = three_mode_circuit(&Topology::CHAIN, 1.6, 3.0, DbRule::Amplitude).unwrap().to_gaussian().unwrap();
        let table = ratio_table_analytic(&st).unwrap();
        let diag = diagonal_closed_form(&st).unwrap();
        for g in 0..3 {
            assert!((table.ratios[g][g] - diag[g]).abs() < 1e-9);
            assert!((table.global_purity[g] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn selected_amplitude_is_set() {
        let st = GaussianState::thermal(&[2.0, 3.0]).unwrap();
        let sel = ModeSelector::from_amplitudes(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let a = Complex64::new(1.5, -0.25);
        let out = with_selected_amplitude(&st, &sel, a).unwrap();
        let row = extract_bogoliubov(&out, &sel).unwrap();
        assert!((row.alpha_g - a).norm() < 1e-12);
    }
}
