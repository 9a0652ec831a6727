//! Brute-force phase-space integration for one- and two-mode Wigner functions.
//!
//! Tensor-product Simpson rule on a box spanned by the principal axes of the covariance,
//! `±half_width_sigmas` standard deviations along each axis, around the state mean.
//! Aligning the box with the axes keeps strongly squeezed directions resolved. The error estimate is the
//! Richardson difference to the same rule on every other grid point, `|I_h − I_2h|/15`.
//! Summation runs in fixed index order, so results are reproducible bit for bit.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::GaussianDensity;
use crate::linalg::sorted_eigen;
use crate::subtraction::{PolynomialWigner, SubtractedState};

/// Largest allowed `|∫W − 1|` before the grid is declared too small.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub half_width_sigmas: f64,
    /// Odd, and `≡ 1 (mod 4)` so the half-resolution grid is also a Simpson grid.
    pub points_per_axis: usize,
    /// Defaults to the mean of the function being integrated.
    pub center: Option<Vec<f64>>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { half_width_sigmas: 8.0, points_per_axis: 401, center: None }
    }
}

impl GridSpec {
    /// 401 points per axis for one mode, 81 for two (81⁴ ≈ 4·10⁷ evaluations).
    pub fn for_modes(modes: usize) -> Self {
        let points_per_axis = if modes >= 2 { 81 } else { 401 };
        Self { points_per_axis, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_axis < 5 || self.points_per_axis % 4 != 1 {
            return Err(Error::InvalidArgument(format!(
                "points_per_axis must be 1 mod 4 and at least 5, got {}",
                self.points_per_axis
            )));
        }
        if !(self.half_width_sigmas >= 5.0) {
            return Err(Error::InvalidArgument(format!(
                "half width of {} sigma is below 5",
                self.half_width_sigmas
            )));
        }
        Ok(())
    }
}

/// A real function on phase space with a natural integration box.
pub trait PhaseSpaceFunction {
    fn dim(&self) -> usize;
    fn value(&self, point: &[f64]) -> f64;
    fn center(&self) -> Vec<f64>;
    /// Orthonormal integration axes (columns) and the standard deviation along each.
    fn frame(&self) -> (DMatrix<f64>, Vec<f64>);
}

fn eigen_frame(cov: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let (values, vectors) = sorted_eigen(cov);
    (vectors, values.iter().map(|v| v.max(0.0).sqrt()).collect())
}

impl PhaseSpaceFunction for GaussianDensity {
    fn dim(&self) -> usize {
        GaussianDensity::dim(self)
    }

    fn value(&self, point: &[f64]) -> f64 {
        self.eval_unchecked(point)
    }

    fn center(&self) -> Vec<f64> {
        self.mean().iter().copied().collect()
    }

    fn frame(&self) -> (DMatrix<f64>, Vec<f64>) {
        eigen_frame(self.covariance())
    }
}

/// Centered on the subtracted mean, on the axes of the Gaussian covariance; along each axis
/// the box covers the wider of the Gaussian and the subtracted spread.
impl PhaseSpaceFunction for PolynomialWigner {
    fn dim(&self) -> usize {
        2 * self.mode_count()
    }

    fn value(&self, point: &[f64]) -> f64 {
        self.eval_unchecked(point)
    }

    fn center(&self) -> Vec<f64> {
        match self.moments() {
            Ok(m) => m.mean.iter().copied().collect(),
            Err(_) => self.gaussian().displacement().iter().copied().collect(),
        }
    }

    fn frame(&self) -> (DMatrix<f64>, Vec<f64>) {
        let (axes, mut sigmas) = eigen_frame(self.gaussian().covariance());
        if let Ok(m) = self.moments() {
            for (k, s) in sigmas.iter_mut().enumerate() {
                let u = axes.column(k);
                *s = s.max((u.transpose() * &m.covariance * u)[(0, 0)].max(0.0).sqrt());
            }
        }
        (axes, sigmas)
    }
}

impl PhaseSpaceFunction for SubtractedState {
    fn dim(&self) -> usize {
        self.as_wigner().dim()
    }

    fn value(&self, point: &[f64]) -> f64 {
        self.as_wigner().value(point)
    }

    fn center(&self) -> Vec<f64> {
        self.as_wigner().center()
    }

    fn frame(&self) -> (DMatrix<f64>, Vec<f64>) {
        self.as_wigner().frame()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEstimate {
    pub value: f64,
    pub error_estimate: f64,
    /// `∫W` on the same grid.
    pub normalization: f64,
}

/// Simpson sums, on the full and the half-resolution grid, of the `count` values that
/// `observables` writes for `(β, W(β))`. Slot 0 must be `W` itself.
fn simpson<F: PhaseSpaceFunction + ?Sized>(
    f: &F,
    grid: &GridSpec,
    count: usize,
    observables: impl Fn(&[f64], f64, &mut [f64]),
) -> Result<(Vec<f64>, Vec<f64>)> {
    grid.validate()?;
    let dim = f.dim();
    if dim != 2 && dim != 4 {
        return Err(Error::Unsupported(format!(
            "grid integration supports one or two modes, got {}",
            dim / 2
        )));
    }
    let center = match &grid.center {
        Some(c) if c.len() != dim => return Err(Error::DimensionMismatch { expected: dim, actual: c.len() }),
        Some(c) => c.clone(),
        None => f.center(),
    };
    let n = grid.points_per_axis;
    let (axes, sigmas) = f.frame();
    if sigmas.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::NumericDegenerate("degenerate integration frame".into()));
    }
    // unit-σ coordinates t ∈ [−w, w]; β = center + axes · (σ ⊙ t)
    let half_width = grid.half_width_sigmas;
    let h = 2.0 * half_width / (n - 1) as f64;
    let jacobian: f64 = sigmas.iter().product();
    let weight = |i: usize, last: usize| -> f64 {
        if i == 0 || i == last {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let full_w: Vec<f64> = (0..n).map(|i| weight(i, n - 1) * h / 3.0).collect();
    let half_w: Vec<f64> =
        (0..n).map(|i| if i % 2 == 0 { weight(i / 2, (n - 1) / 2) * 2.0 * h / 3.0 } else { 0.0 }).collect();
    let t: Vec<f64> = (0..n).map(|i| -half_width + i as f64 * h).collect();
    let scaled = DMatrix::from_fn(dim, dim, |r, c| axes[(r, c)] * sigmas[c]);

    let mut full = vec![0.0; count];
    let mut half = vec![0.0; count];
    let mut values = vec![0.0; count];
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    let total = n.pow(dim as u32);
    for _ in 0..total {
        let mut wf = jacobian;
        let mut wh = jacobian;
        for d in 0..dim {
            wf *= full_w[idx[d]];
            wh *= half_w[idx[d]];
        }
        for (r, p) in point.iter_mut().enumerate() {
            *p = center[r] + (0..dim).map(|c| scaled[(r, c)] * t[idx[c]]).sum::<f64>();
        }
        observables(&point, f.value(&point), &mut values);
        for k in 0..count {
            full[k] += wf * values[k];
            half[k] += wh * values[k];
        }
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
        }
    }
    let norm = full[0];
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InsufficientGrid { normalization: norm, tolerance: NORMALIZATION_TOLERANCE });
    }
    Ok((full, half))
}

/// `(4π)^m ∫ W²`.
pub fn purity_by_grid<F: PhaseSpaceFunction + ?Sized>(f: &F, grid: &GridSpec) -> Result<GridEstimate> {
    let (full, half) = simpson(f, grid, 2, |_, w, out| {
        out[0] = w;
        out[1] = w * w;
    })?;
    let scale = (4.0 * std::f64::consts::PI).powi((f.dim() / 2) as i32);
    Ok(GridEstimate {
        value: scale * full[1],
        error_estimate: scale * (full[1] - half[1]).abs() / 15.0,
        normalization: full[0],
    })
}

/// Phase-space axis of a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    P,
}

/// `∫ q² W − (∫ q W)²` for the quadrature `q` of `mode`.
pub fn variance_by_grid<F: PhaseSpaceFunction + ?Sized>(
    f: &F,
    mode: usize,
    axis: Axis,
    grid: &GridSpec,
) -> Result<GridEstimate> {
    let m = f.dim() / 2;
    if mode >= m {
        return Err(Error::ModeOutOfRange { index: mode, modes: m });
    }
    let k = match axis {
        Axis::X => mode,
        Axis::P => m + mode,
    };
    let (full, half) = simpson(f, grid, 3, |p, w, out| {
        out[0] = w;
        out[1] = p[k] * w;
        out[2] = p[k] * p[k] * w;
    })?;
    let var = |s: &[f64]| s[2] - s[1] * s[1];
    Ok(GridEstimate {
        value: var(&full),
        error_estimate: (var(&full) - var(&half)).abs() / 15.0,
        normalization: full[0],
    })
}

/// Grid mean of the phase-space vector.
pub fn mean_by_grid<F: PhaseSpaceFunction + ?Sized>(f: &F, grid: &GridSpec) -> Result<DVector<f64>> {
    let dim = f.dim();
    let (full, _) = simpson(f, grid, dim + 1, |p, w, out| {
        out[0] = w;
        for k in 0..p.len() {
            out[k + 1] = p[k] * w;
        }
    })?;
    Ok(DVector::from_iterator(dim, full[1..].iter().copied()))
}
