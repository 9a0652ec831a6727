use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conventions::{amplitude_to_phase_space, DbRule, SYMPLECTIC_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::omega;

/// A real `2m × 2m` matrix with `S Ω Sᵀ = Ω`.
///
/// `S` is the Heisenberg image of a Gaussian unitary `Û`: `Û† r̂ Û = S r̂`, so a state
/// transforms as `V → S V Sᵀ`, `α₀ → S α₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || !matrix.nrows().is_multiple_of(2) || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "symplectic matrix must be 2m x 2m, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = symplectic_defect(&matrix);
        let scale = matrix.norm_squared().max(1.0);
        if defect > SYMPLECTIC_TOLERANCE * scale {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic (|S Ω Sᵀ − Ω| = {defect:e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn identity(modes: usize) -> Self {
        Self { matrix: DMatrix::identity(2 * modes, 2 * modes) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn mode_count(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let om = omega(self.mode_count());
        Self { matrix: -(&om * self.matrix.transpose() * &om) }
    }

    /// The transform of applying `self` first and `next` afterwards.
    pub fn then(&self, next: &SymplecticTransform) -> Result<Self> {
        if next.matrix.nrows() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                actual: next.matrix.nrows(),
            });
        }
        Ok(Self { matrix: &next.matrix * &self.matrix })
    }

    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.matrix)
    }
}

pub(crate) fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let om = omega(s.nrows() / 2);
    (s * &om * s.transpose() - om).amax()
}

/// Elementary operations used to build circuits.
///
/// Every variant except [`Gate::Displacement`] is a Gaussian unitary with a
/// [`SymplecticTransform`]. In Heisenberg form:
///
/// | gate | action |
/// |------|--------|
/// | `PhaseRotation` | `â → e^{iθ} â` |
/// | `Squeezer` | `â → â cosh r + â† sinh r` (`x → eʳ x`, `p → e⁻ʳ p`) |
/// | `TwoModeSqueezer` | `â → â cosh r + b̂† sinh r` |
/// | `Beamsplitter` | `â → √τ â + √(1−τ) b̂`, `b̂ → √τ b̂ − √(1−τ) â` |
/// | `Displacement` | `â → â + γ` with `γ = re + i·im` |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Gate {
    PhaseRotation { mode: usize, theta: f64 },
    Squeezer { mode: usize, r: f64 },
    TwoModeSqueezer { mode_a: usize, mode_b: usize, r: f64 },
    Beamsplitter { mode_a: usize, mode_b: usize, transmittance: f64 },
    Displacement { mode: usize, re: f64, im: f64 },
}

impl Gate {
    /// Single-mode squeezer specified in dB (power rule, `s = 10^(dB/10)`).
    pub fn squeezer_db(mode: usize, db: f64) -> Self {
        Gate::Squeezer { mode, r: DbRule::Power.squeezing_parameter(db) }
    }

    pub fn two_mode_squeezer_db(mode_a: usize, mode_b: usize, db: f64, rule: DbRule) -> Self {
        Gate::TwoModeSqueezer { mode_a, mode_b, r: rule.squeezing_parameter(db) }
    }

    pub fn displacement(mode: usize, amplitude: Complex64) -> Self {
        Gate::Displacement { mode, re: amplitude.re, im: amplitude.im }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Gate::PhaseRotation { mode, .. }
            | Gate::Squeezer { mode, .. }
            | Gate::Displacement { mode, .. } => vec![mode],
            Gate::TwoModeSqueezer { mode_a, mode_b, .. }
            | Gate::Beamsplitter { mode_a, mode_b, .. } => vec![mode_a, mode_b],
        }
    }

    pub fn validate(&self, modes: usize) -> Result<()> {
        let targets = self.modes();
        for &t in &targets {
            if t >= modes {
                return Err(Error::ModeOutOfRange { index: t, modes });
            }
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::InvalidArgument(format!(
                "two-mode gate needs distinct modes, got ({}, {})",
                targets[0], targets[1]
            )));
        }
        let finite = match *self {
            Gate::PhaseRotation { theta, .. } => theta.is_finite(),
            Gate::Squeezer { r, .. } | Gate::TwoModeSqueezer { r, .. } => r.is_finite(),
            Gate::Beamsplitter { transmittance, .. } => {
                if !(0.0..=1.0).contains(&transmittance) {
                    return Err(Error::InvalidArgument(format!(
                        "beamsplitter transmittance {transmittance} outside [0, 1]"
                    )));
                }
                true
            }
            Gate::Displacement { re, im, .. } => re.is_finite() && im.is_finite(),
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("non-finite gate parameter in {self:?}")))
        }
    }

    /// Phase-space displacement vector of a displacement gate.
    pub(crate) fn displacement_vector(&self, modes: usize) -> Option<nalgebra::DVector<f64>> {
        match *self {
            Gate::Displacement { mode, re, im } => {
                let mut d = nalgebra::DVector::zeros(2 * modes);
                let (x, p) = amplitude_to_phase_space(Complex64::new(re, im));
                d[mode] = x;
                d[modes + mode] = p;
                Some(d)
            }
            _ => None,
        }
    }

    /// Symplectic matrix of the gate on `modes` modes.
    pub fn symplectic(&self, modes: usize) -> Result<SymplecticTransform> {
        self.validate(modes)?;
        let m = modes;
        let mut s = DMatrix::identity(2 * m, 2 * m);
        match *self {
            Gate::PhaseRotation { mode, theta } => {
                let (sn, cs) = theta.sin_cos();
                s[(mode, mode)] = cs;
                s[(mode, m + mode)] = -sn;
                s[(m + mode, mode)] = sn;
                s[(m + mode, m + mode)] = cs;
            }
            Gate::Squeezer { mode, r } => {
                s[(mode, mode)] = r.exp();
                s[(m + mode, m + mode)] = (-r).exp();
            }
            Gate::TwoModeSqueezer { mode_a: a, mode_b: b, r } => {
                let (c, sh) = (r.cosh(), r.sinh());
                s[(a, a)] = c;
                s[(b, b)] = c;
                s[(a, b)] = sh;
                s[(b, a)] = sh;
                s[(m + a, m + a)] = c;
                s[(m + b, m + b)] = c;
                s[(m + a, m + b)] = -sh;
                s[(m + b, m + a)] = -sh;
            }
            Gate::Beamsplitter { mode_a: a, mode_b: b, transmittance } => {
                let (c, sn) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
                for off in [0, m] {
                    s[(off + a, off + a)] = c;
                    s[(off + a, off + b)] = sn;
                    s[(off + b, off + a)] = -sn;
                    s[(off + b, off + b)] = c;
                }
            }
            Gate::Displacement { .. } => {
                return Err(Error::InvalidArgument(
                    "a displacement has no symplectic matrix".into(),
                ))
            }
        }
        Ok(SymplecticTransform::new_unchecked(s))
    }
}
