//! Truncated Fock-space simulation, used as an independent check of the phase-space
//! results.
//!
//! States are pure vectors over a product basis. Mixed Gaussian states are prepared as
//! purifications with ancilla modes (see [`preparation_circuit`]), so reduced purities
//! are computed by partial trace over the ancillas and any other unwanted modes.
//!
//! Every gate is applied on a basis padded beyond the cutoff of its target modes. The
//! weight that lands above the cutoff is recorded as leakage and the state is truncated
//! and renormalized.

mod decompose;
mod propagate;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use decompose::{preparation_circuit, PreparationCircuit};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, Gate, ModeSelector};
use propagate::{apply_ladder, expm_action, norm, strides, Generator, Ladder};

/// Default tolerance on the total weight lost above the cutoffs.
pub const DEFAULT_DEFICIENCY_TOLERANCE: f64 = 1e-8;

/// Environment variable holding the memory budget of the Fock oracle in bytes.
pub const MEMORY_BUDGET_ENV: &str = "PS_PURIFY_FOCK_MEMORY_BYTES";

const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

pub fn memory_budget() -> usize {
    std::env::var(MEMORY_BUDGET_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MEMORY_BUDGET)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSpec {
    /// Number of Fock levels `|0⟩ … |d−1⟩` kept per mode.
    pub cutoff_per_mode: Vec<usize>,
    pub deficiency_tolerance: f64,
}

impl TruncationSpec {
    pub fn new(cutoff_per_mode: Vec<usize>) -> Self {
        Self { cutoff_per_mode, deficiency_tolerance: DEFAULT_DEFICIENCY_TOLERANCE }
    }

    pub fn uniform(modes: usize, cutoff: usize) -> Self {
        Self::new(vec![cutoff; modes])
    }

    fn validate(&self) -> Result<()> {
        if self.cutoff_per_mode.is_empty() {
            return Err(Error::InvalidArgument("truncation lists no modes".into()));
        }
        if let Some(c) = self.cutoff_per_mode.iter().find(|&&c| c < 2) {
            return Err(Error::InvalidArgument(format!("cutoff {c} below 2")));
        }
        if !(self.deficiency_tolerance >= 0.0) {
            return Err(Error::InvalidArgument("negative deficiency tolerance".into()));
        }
        Ok(())
    }
}

/// Quadrature moments of one mode: `x̂ = â + â†`, `p̂ = i(â† − â)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// Symmetrized `⟨{Δx̂, Δp̂}⟩/2`.
    pub cov_xp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
    physical_modes: usize,
    leakage: f64,
    mode_leakage: Vec<f64>,
}

impl FockState {
    /// Vacuum on the given cutoffs; modes past `physical_modes` are ancillas.
    pub fn vacuum(truncation: &TruncationSpec, physical_modes: usize) -> Result<Self> {
        truncation.validate()?;
        let dims = truncation.cutoff_per_mode.clone();
        if physical_modes == 0 || physical_modes > dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{physical_modes} physical modes out of {}",
                dims.len()
            )));
        }
        let size = checked_size(&dims)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        let modes = dims.len();
        Ok(Self { dims, amplitudes, physical_modes, leakage: 0.0, mode_leakage: vec![0.0; modes] })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Modes excluding ancillas.
    pub fn mode_count(&self) -> usize {
        self.physical_modes
    }

    pub fn total_modes(&self) -> usize {
        self.dims.len()
    }

    /// Total weight discarded above the cutoffs so far.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Discarded weight attributed to each mode.
    pub fn mode_leakage(&self) -> &[f64] {
        &self.mode_leakage
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.dims.len() {
            return Err(Error::ModeOutOfRange { index: mode, modes: self.dims.len() });
        }
        Ok(())
    }

    fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn mean_photon(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let a = apply_ladder(&self.dims, Ladder::Annihilate(mode), &self.amplitudes);
        Ok(norm(&a).powi(2))
    }

    /// `⟨(−1)^{n̂}⟩` on one mode; `W(0) = ⟨(−1)^{n̂}⟩/(2π)` for a single-mode state.
    pub fn parity(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let (s, d) = (strides(&self.dims)[mode], self.dims[mode]);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if (i / s) % d % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }

    pub fn quadrature_moments(&self, mode: usize) -> Result<QuadratureMoments> {
        self.check_mode(mode)?;
        let a1 = apply_ladder(&self.dims, Ladder::Annihilate(mode), &self.amplitudes);
        let a2 = apply_ladder(&self.dims, Ladder::Annihilate(mode), &a1);
        let mean_a = self.inner(&a1);
        let mean_a2 = self.inner(&a2);
        let n = norm(&a1).powi(2);
        let (mx, mp) = (2.0 * mean_a.re, 2.0 * mean_a.im);
        Ok(QuadratureMoments {
            mean_x: mx,
            mean_p: mp,
            var_x: 2.0 * mean_a2.re + 2.0 * n + 1.0 - mx * mx,
            var_p: -2.0 * mean_a2.re + 2.0 * n + 1.0 - mp * mp,
            cov_xp: 2.0 * mean_a2.im - mx * mp,
        })
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<Self> {
        gate.validate(self.dims.len())?;
        if let Gate::PhaseRotation { mode, theta } = *gate {
            let (s, d) = (strides(&self.dims)[mode], self.dims[mode]);
            let mut out = self.clone();
            for (i, a) in out.amplitudes.iter_mut().enumerate() {
                *a *= Complex64::from_polar(1.0, theta * ((i / s) % d) as f64);
            }
            return Ok(out);
        }
        let generator = Generator::for_gate(gate).expect("non-diagonal gate has a generator");
        let targets = gate.modes();
        let mut padded = self.dims.clone();
        for &t in &targets {
            padded[t] += (self.dims[t] / 4).max(8);
        }
        check_memory(&padded)?;
        let psi = expm_action(&generator, &padded, embed(&self.dims, &padded, &self.amplitudes))?;

        let st = strides(&padded);
        let mut out = self.clone();
        let mut kept = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        let out_st = strides(&self.dims);
        let mut lost = 0.0;
        for (i, a) in psi.iter().enumerate() {
            let mut j = 0;
            let mut inside = true;
            for k in 0..padded.len() {
                let n = (i / st[k]) % padded[k];
                if n >= self.dims[k] {
                    inside = false;
                    out.mode_leakage[k] += a.norm_sqr();
                }
                j += n * out_st[k];
            }
            if inside {
                kept[j] = *a;
            } else {
                lost += a.norm_sqr();
            }
        }
        let total = norm(&psi).powi(2);
        let remaining = norm(&kept);
        if remaining == 0.0 {
            return Err(Error::TruncationInsufficient { leakage: 1.0, tolerance: 0.0 });
        }
        kept.iter_mut().for_each(|a| *a /= remaining);
        out.amplitudes = kept;
        out.leakage += lost / total;
        Ok(out)
    }

    /// `â|ψ⟩/‖â|ψ⟩‖` on a computational mode.
    pub fn subtract_photon(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut a = apply_ladder(&self.dims, Ladder::Annihilate(mode), &self.amplitudes);
        let n = norm(&a);
        if !(n * n > 1e-10) {
            return Err(Error::SubtractionFromVacuum { normalization: 4.0 * n * n });
        }
        a.iter_mut().for_each(|c| *c /= n);
        Ok(Self { amplitudes: a, ..self.clone() })
    }

    /// `ρ_J` for the listed modes, basis ordered as listed (first listed slowest).
    pub fn reduced_density_matrix(&self, modes: &[usize]) -> Result<DensityMatrix> {
        let psi = self.bipartition(modes)?;
        Ok(DensityMatrix { dims: modes.iter().map(|&k| self.dims[k]).collect(), data: &psi * psi.adjoint() })
    }

    /// `tr ρ_J²` computed from the smaller Gram matrix of the bipartition.
    pub fn reduced_purity(&self, modes: &[usize]) -> Result<f64> {
        let psi = self.bipartition(modes)?;
        let gram = if psi.nrows() <= psi.ncols() { &psi * psi.adjoint() } else { psi.adjoint() * &psi };
        let trace: f64 = gram.diagonal().iter().map(|c| c.re).sum();
        Ok(gram.iter().map(|c| c.norm_sqr()).sum::<f64>() / (trace * trace))
    }

    /// `|⟨ψ|φ⟩|²` for states on the same basis.
    pub fn fidelity(&self, other: &FockState) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::InvalidArgument("fidelity needs identical truncations".into()));
        }
        Ok(self.inner(&other.amplitudes).norm_sqr() / (self.norm() * other.norm()).powi(2))
    }

    /// `Ψ[j, r]` with `j` running over the listed modes and `r` over the rest.
    fn bipartition(&self, modes: &[usize]) -> Result<DMatrix<Complex64>> {
        if modes.is_empty() {
            return Err(Error::InvalidArgument("empty mode subset".into()));
        }
        for (k, &m) in modes.iter().enumerate() {
            self.check_mode(m)?;
            if modes[..k].contains(&m) {
                return Err(Error::InvalidArgument(format!("mode {m} listed twice")));
            }
        }
        let rest: Vec<usize> = (0..self.dims.len()).filter(|k| !modes.contains(k)).collect();
        let rows: usize = modes.iter().map(|&k| self.dims[k]).product();
        let cols: usize = rest.iter().map(|&k| self.dims[k]).product();
        let st = strides(&self.dims);
        let mut psi = DMatrix::zeros(rows, cols);
        for (i, a) in self.amplitudes.iter().enumerate() {
            let (mut r, mut c) = (0, 0);
            for &k in modes {
                r = r * self.dims[k] + (i / st[k]) % self.dims[k];
            }
            for &k in &rest {
                c = c * self.dims[k] + (i / st[k]) % self.dims[k];
            }
            psi[(r, c)] = *a;
        }
        Ok(psi)
    }
}

fn checked_size(dims: &[usize]) -> Result<usize> {
    check_memory(dims)?;
    Ok(dims.iter().product())
}

/// Propagation holds about four vectors of the padded size.
fn check_memory(dims: &[usize]) -> Result<()> {
    let budget = memory_budget();
    let required = dims
        .iter()
        .try_fold(4 * std::mem::size_of::<Complex64>(), |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    if required > budget {
        return Err(Error::MemoryBudget { required, budget });
    }
    Ok(())
}

fn embed(from: &[usize], to: &[usize], psi: &[Complex64]) -> Vec<Complex64> {
    let (fs, ts) = (strides(from), strides(to));
    let mut out = vec![Complex64::new(0.0, 0.0); to.iter().product()];
    for (i, a) in psi.iter().enumerate() {
        let j: usize = (0..from.len()).map(|k| ((i / fs[k]) % from[k]) * ts[k]).sum();
        out[j] = *a;
    }
    out
}

/// A density matrix over a truncated product basis (first mode slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dims: Vec<usize>,
    pub data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn trace(&self) -> f64 {
        self.data.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn purity(&self) -> f64 {
        let t = self.trace();
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>() / (t * t)
    }

    /// Traces out the mode at position `local` of `dims`.
    pub fn trace_out(&self, local: usize) -> Result<DensityMatrix> {
        if local >= self.dims.len() || self.dims.len() < 2 {
            return Err(Error::ModeOutOfRange { index: local, modes: self.dims.len() });
        }
        let st = strides(&self.dims);
        let d = self.dims[local];
        let mut dims = self.dims.clone();
        dims.remove(local);
        let size: usize = dims.iter().product();
        let (outer, inner) = (st[local] * d, st[local]);
        let expand = |i: usize, n: usize| (i / inner) * outer + n * inner + i % inner;
        let data = DMatrix::from_fn(size, size, |i, j| (0..d).map(|n| self.data[(expand(i, n), expand(j, n))]).sum());
        Ok(DensityMatrix { dims, data })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.data - self.data.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn run_circuit_fock(modes: usize, gates: &[Gate], truncation: &TruncationSpec) -> Result<FockState> {
    if truncation.cutoff_per_mode.len() != modes {
        return Err(Error::DimensionMismatch { expected: modes, actual: truncation.cutoff_per_mode.len() });
    }
    run_on(FockState::vacuum(truncation, modes)?, gates, truncation.deficiency_tolerance)
}

fn run_on(mut state: FockState, gates: &[Gate], tolerance: f64) -> Result<FockState> {
    for g in gates {
        state = state.apply_gate(g)?;
    }
    if state.leakage > tolerance {
        return Err(Error::TruncationInsufficient { leakage: state.leakage, tolerance });
    }
    Ok(state)
}

/// Runs the circuit with cutoffs chosen automatically.
///
/// Each mode starts at `⌈4⟨n̂⟩ + 10⌉` levels, `⟨n̂⟩` being the largest occupation along the
/// circuit; cutoffs of modes that leak are doubled until the total leakage is within
/// `tolerance` or the memory budget is exceeded.
pub fn run_circuit_fock_auto(modes: usize, gates: &[Gate], tolerance: f64) -> Result<FockState> {
    run_auto(modes, modes, gates, tolerance)
}

fn run_auto(total: usize, physical: usize, gates: &[Gate], tolerance: f64) -> Result<FockState> {
    let mut occupation = vec![0.0f64; total];
    let mut g = GaussianState::vacuum(total)?;
    for gate in gates {
        g = g.apply_gate(gate)?;
        for (k, occ) in occupation.iter_mut().enumerate() {
            *occ = occ.max(g.mean_photon(&ModeSelector::computational(total, k)?)?);
        }
    }
    let mut cutoffs: Vec<usize> = occupation.iter().map(|n| (4.0 * n + 10.0).ceil() as usize).collect();
    loop {
        let spec = TruncationSpec { cutoff_per_mode: cutoffs.clone(), deficiency_tolerance: tolerance };
        let state = run_on(FockState::vacuum(&spec, physical)?, gates, f64::INFINITY)?;
        if state.leakage <= tolerance {
            return Ok(state);
        }
        let share = tolerance / total as f64;
        let mut grew = false;
        for (k, c) in cutoffs.iter_mut().enumerate() {
            if state.mode_leakage[k] > share {
                *c *= 2;
                grew = true;
            }
        }
        if !grew {
            cutoffs.iter_mut().for_each(|c| *c *= 2);
        }
        check_memory(&cutoffs)?;
    }
}

pub fn subtract_photon_fock(state: &FockState, mode: usize) -> Result<FockState> {
    state.subtract_photon(mode)
}

pub fn reduced_purity_fock(state: &FockState, modes: &[usize]) -> Result<f64> {
    state.reduced_purity(modes)
}

/// Fock representation of a Gaussian state (ancillas appended after the physical modes).
///
/// `truncation` lists cutoffs for all modes of [`preparation_circuit`].
pub fn gaussian_state_to_fock(state: &GaussianState, truncation: &TruncationSpec) -> Result<FockState> {
    let circuit = preparation_circuit(state)?;
    if truncation.cutoff_per_mode.len() != circuit.total_modes {
        return Err(Error::DimensionMismatch {
            expected: circuit.total_modes,
            actual: truncation.cutoff_per_mode.len(),
        });
    }
    run_on(FockState::vacuum(truncation, circuit.physical_modes)?, &circuit.gates, truncation.deficiency_tolerance)
}

pub fn gaussian_state_to_fock_auto(state: &GaussianState, tolerance: f64) -> Result<FockState> {
    let circuit = preparation_circuit(state)?;
    run_auto(circuit.total_modes, circuit.physical_modes, &circuit.gates, tolerance)
}
