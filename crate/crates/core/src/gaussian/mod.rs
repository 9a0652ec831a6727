//! Gaussian states in the covariance-matrix formalism.
//!
//! A state of `m` modes is a symmetric `2m × 2m` covariance matrix `V` and a
//! displacement `α₀`, both in xx…pp order with vacuum `V = I`. States are immutable;
//! every operation returns a new value.

mod gates;
mod williamson;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use gates::{Gate, SymplecticTransform};
pub use williamson::WilliamsonDecomposition;

use crate::conventions::{
    amplitude_to_phase_space, PHYSICALITY_TOLERANCE, SYMMETRY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::linalg::{is_symmetric, omega, symmetrize};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    covariance: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl GaussianState {
    /// Validates symmetry and physicality (all symplectic eigenvalues `≥ 1 − 1e-9`).
    pub fn new(covariance: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let n = covariance.nrows();
        if n == 0 || !n.is_multiple_of(2) || !covariance.is_square() {
            return Err(Error::InvalidArgument(format!(
                "covariance must be 2m x 2m with m >= 1, got {}x{}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if displacement.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: displacement.len() });
        }
        if covariance.iter().chain(displacement.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite entry in state".into()));
        }
        if !is_symmetric(&covariance, SYMMETRY_TOLERANCE) {
            return Err(Error::UnphysicalState("covariance matrix is not symmetric".into()));
        }
        let state = Self { covariance: symmetrize(&covariance), displacement };
        state.check_physical()?;
        Ok(state)
    }

    /// For results of operations that preserve physicality by construction.
    pub(crate) fn from_parts(covariance: DMatrix<f64>, displacement: DVector<f64>) -> Self {
        Self { covariance: symmetrize(&covariance), displacement }
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidArgument("a state needs at least one mode".into()));
        }
        Ok(Self::from_parts(DMatrix::identity(2 * modes, 2 * modes), DVector::zeros(2 * modes)))
    }

    /// Product of thermal states, `V = diag(n, n)`.
    pub fn thermal(noise_factors: &[f64]) -> Result<Self> {
        if noise_factors.is_empty() {
            return Err(Error::InvalidArgument("a state needs at least one mode".into()));
        }
        if let Some(bad) = noise_factors.iter().find(|&&n| !(n >= 1.0)) {
            return Err(Error::UnphysicalState(format!("noise factor {bad} below 1")));
        }
        let diag: Vec<f64> = noise_factors.iter().chain(noise_factors).copied().collect();
        let m = noise_factors.len();
        Ok(Self::from_parts(DMatrix::from_diagonal(&DVector::from_vec(diag)), DVector::zeros(2 * m)))
    }

    /// Product of coherent states with amplitudes `⟨â_i⟩`.
    pub fn coherent(amplitudes: &[Complex64]) -> Result<Self> {
        let m = amplitudes.len();
        let mut state = Self::vacuum(m)?;
        for (i, &a) in amplitudes.iter().enumerate() {
            let (x, p) = amplitude_to_phase_space(a);
            state.displacement[i] = x;
            state.displacement[m + i] = p;
        }
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.covariance.nrows() / 2
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn check_physical(&self) -> Result<()> {
        let nu = self.symplectic_eigenvalues()?;
        match nu.last() {
            Some(&min) if min < 1.0 - PHYSICALITY_TOLERANCE => Err(Error::UnphysicalState(
                format!("symplectic eigenvalue {min} below 1"),
            )),
            _ => Ok(()),
        }
    }

    /// Symplectic eigenvalues `ν_i`, descending.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        williamson::symplectic_eigenvalues(&self.covariance)
    }

    pub fn williamson(&self) -> Result<WilliamsonDecomposition> {
        williamson::williamson(&self.covariance)
    }

    pub fn apply_symplectic(&self, s: &SymplecticTransform) -> Result<Self> {
        let sm = s.matrix();
        if sm.nrows() != self.covariance.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.covariance.nrows(),
                actual: sm.nrows(),
            });
        }
        Ok(Self::from_parts(sm * &self.covariance * sm.transpose(), sm * &self.displacement))
    }

    pub fn apply_displacement(&self, delta: &DVector<f64>) -> Result<Self> {
        if delta.len() != self.displacement.len() {
            return Err(Error::DimensionMismatch {
                expected: self.displacement.len(),
                actual: delta.len(),
            });
        }
        Ok(Self { covariance: self.covariance.clone(), displacement: &self.displacement + delta })
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<Self> {
        let m = self.mode_count();
        gate.validate(m)?;
        match gate.displacement_vector(m) {
            Some(d) => self.apply_displacement(&d),
            None => self.apply_symplectic(&gate.symplectic(m)?),
        }
    }

    pub fn apply_gates<'a>(&self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<Self> {
        gates.into_iter().try_fold(self.clone(), |s, g| s.apply_gate(g))
    }

    /// `μ = 1/√det V`.
    pub fn purity(&self) -> f64 {
        1.0 / self.covariance.determinant().sqrt()
    }

    /// Precomputes `V⁻¹` and the normalization for repeated Wigner evaluations.
    pub fn wigner_density(&self) -> Result<GaussianDensity> {
        GaussianDensity::new(&self.covariance, &self.displacement)
    }

    pub fn wigner_at(&self, point: &[f64]) -> Result<f64> {
        self.wigner_density()?.eval(point)
    }

    /// Marginal state on the listed modes, in the listed order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        let m = self.mode_count();
        let idx = phase_space_indices(modes, m)?;
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.covariance[(idx[i], idx[j])]);
        let disp = DVector::from_fn(idx.len(), |i, _| self.displacement[idx[i]]);
        Ok(Self::from_parts(cov, disp))
    }

    /// Product state `self ⊗ other`; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &GaussianState) -> Self {
        let (a, b) = (self.mode_count(), other.mode_count());
        let m = a + b;
        let mut cov = DMatrix::zeros(2 * m, 2 * m);
        let mut disp = DVector::zeros(2 * m);
        let place = |k: usize, own: usize, offset: usize| if k < own { offset + k } else { m + offset + k - own };
        for (state, own, offset) in [(self, a, 0), (other, b, a)] {
            for i in 0..2 * own {
                disp[place(i, own, offset)] = state.displacement[i];
                for j in 0..2 * own {
                    cov[(place(i, own, offset), place(j, own, offset))] = state.covariance[(i, j)];
                }
            }
        }
        Self::from_parts(cov, disp)
    }

    /// `⟨n̂_g⟩ = (tr GᵀVG − 2 + ‖Gᵀα₀‖²)/4`.
    pub fn mean_photon(&self, selector: &ModeSelector) -> Result<f64> {
        selector.check_modes(self.mode_count())?;
        let g = selector.matrix();
        let vg = g.transpose() * &self.covariance * &g;
        let ag = g.transpose() * &self.displacement;
        Ok((vg.trace() - 2.0 + ag.norm_squared()) / 4.0)
    }
}

/// `(x_i, p_i)` row indices of the listed modes: all x rows first, then all p rows.
pub(crate) fn phase_space_indices(modes: &[usize], m: usize) -> Result<Vec<usize>> {
    if modes.is_empty() {
        return Err(Error::InvalidArgument("empty mode subset".into()));
    }
    for (k, &i) in modes.iter().enumerate() {
        if i >= m {
            return Err(Error::ModeOutOfRange { index: i, modes: m });
        }
        if modes[..k].contains(&i) {
            return Err(Error::InvalidArgument(format!("mode {i} listed twice")));
        }
    }
    Ok(modes.iter().copied().chain(modes.iter().map(|i| m + i)).collect())
}

/// A Gaussian probability density `N(mean, cov)` ready for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct GaussianDensity {
    mean: DVector<f64>,
    inverse: DMatrix<f64>,
    norm: f64,
    covariance: DMatrix<f64>,
}

impl GaussianDensity {
    pub fn new(cov: &DMatrix<f64>, mean: &DVector<f64>) -> Result<Self> {
        let det = cov.determinant();
        if !(det > 1e-300) {
            return Err(Error::NumericDegenerate(format!("covariance determinant {det:e}")));
        }
        let inverse = cov
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericDegenerate("covariance is singular".into()))?;
        let dim = cov.nrows() as f64;
        let norm = 1.0 / ((2.0 * std::f64::consts::PI).powf(dim / 2.0) * det.sqrt());
        Ok(Self { mean: mean.clone(), inverse: symmetrize(&inverse), norm, covariance: cov.clone() })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.mean.len() {
            return Err(Error::DimensionMismatch { expected: self.mean.len(), actual: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[f64]) -> f64 {
        let n = self.mean.len();
        let mut q = 0.0;
        for i in 0..n {
            let di = point[i] - self.mean[i];
            let mut row = 0.0;
            for j in 0..n {
                row += self.inverse[(i, j)] * (point[j] - self.mean[j]);
            }
            q += di * row;
        }
        self.norm * (-0.5 * q).exp()
    }
}

/// The phase-space plane of one bosonic mode `â_g`.
///
/// `x̂_g = g⁽ˣ⁾·r̂` and `p̂_g = g⁽ᵖ⁾·r̂` with `g⁽ᵖ⁾ = Ωᵀ g⁽ˣ⁾`, which makes
/// `[â_g, â_g†] = 1` for `â_g = (x̂_g + i p̂_g)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSelector {
    basis_x: DVector<f64>,
    basis_p: DVector<f64>,
}

impl ModeSelector {
    pub fn computational(modes: usize, mode: usize) -> Result<Self> {
        if mode >= modes {
            return Err(Error::ModeOutOfRange { index: mode, modes });
        }
        let mut gx = DVector::zeros(2 * modes);
        gx[mode] = 1.0;
        Self::from_basis_x(gx)
    }

    /// Builds the pair from a unit `g⁽ˣ⁾`.
    pub fn from_basis_x(basis_x: DVector<f64>) -> Result<Self> {
        if basis_x.is_empty() || !basis_x.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "selector vector must have even length, got {}",
                basis_x.len()
            )));
        }
        let norm = basis_x.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("selector vector has norm {norm}, expected 1")));
        }
        let m = basis_x.len() / 2;
        let basis_p = omega(m).transpose() * &basis_x;
        Ok(Self { basis_x, basis_p })
    }

    /// The superposition mode `â_g = Σ u_i â_i` with `Σ|u_i|² = 1`.
    pub fn from_amplitudes(u: &[Complex64]) -> Result<Self> {
        let m = u.len();
        let mut gx = DVector::zeros(2 * m);
        for (i, c) in u.iter().enumerate() {
            gx[i] = c.re;
            gx[m + i] = -c.im;
        }
        Self::from_basis_x(gx)
    }

    pub fn basis_x(&self) -> &DVector<f64> {
        &self.basis_x
    }

    pub fn basis_p(&self) -> &DVector<f64> {
        &self.basis_p
    }

    pub fn mode_count(&self) -> usize {
        self.basis_x.len() / 2
    }

    /// `G = [g⁽ˣ⁾ g⁽ᵖ⁾]`, a `2m × 2` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&[self.basis_x.clone(), self.basis_p.clone()])
    }

    /// Complex weights `u_i` of `â_g = Σ u_i â_i`.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let m = self.mode_count();
        (0..m).map(|i| Complex64::new(self.basis_x[i], -self.basis_x[m + i])).collect()
    }

    pub(crate) fn check_modes(&self, modes: usize) -> Result<()> {
        if self.mode_count() != modes {
            return Err(Error::DimensionMismatch { expected: 2 * modes, actual: self.basis_x.len() });
        }
        Ok(())
    }
}
