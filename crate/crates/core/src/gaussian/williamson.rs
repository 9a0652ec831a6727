use nalgebra::{DMatrix, DVector};

use super::gates::SymplecticTransform;
use crate::conventions::PHYSICALITY_TOLERANCE;
use crate::error::{Error, Result};
use crate::linalg::{clusters, omega, pick_from_projector, projector, sorted_eigen, sqrt_spd};

/// Eigenvalues of `M = BᵀB` closer than this (relative) are treated as one eigenspace.
const CLUSTER_TOLERANCE: f64 = 1e-8;

/// `V = S · diag(n₁ … n_m, n₁ … n_m) · Sᵀ` with `S` symplectic and `n₁ ≥ … ≥ n_m ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonDecomposition {
    pub symplectic: SymplecticTransform,
    pub noise_factors: Vec<f64>,
}

impl WilliamsonDecomposition {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self.noise_factors.iter().chain(self.noise_factors.iter()).copied().collect();
        let s = self.symplectic.matrix();
        s * DMatrix::from_diagonal(&DVector::from_vec(d)) * s.transpose()
    }
}

/// Symplectic spectrum and the orthonormal pairing basis of `B = V^{1/2} Ω V^{1/2}`.
struct Spectrum {
    sqrt_v: DMatrix<f64>,
    values: Vec<f64>,
    u: Vec<DVector<f64>>,
    w: Vec<DVector<f64>>,
}

/// The eigenvalues of `BᵀB` are `ν_i²`, each twice. Inside every eigenspace the
/// vectors are paired as `(u, w = −Bu/ν)`; `u` is the normalized projector column with
/// the largest weight, signed so its first non-negligible entry is positive.
fn spectrum(v: &DMatrix<f64>) -> Result<Spectrum> {
    let m = v.nrows() / 2;
    let sqrt_v = sqrt_spd(v)?;
    let b = &sqrt_v * omega(m) * &sqrt_v;
    let (values, vectors) = sorted_eigen(&(b.transpose() * &b));
    let mut out = Spectrum { sqrt_v, values: Vec::with_capacity(m), u: Vec::new(), w: Vec::new() };
    for range in clusters(&values, CLUSTER_TOLERANCE) {
        if range.len() % 2 != 0 {
            return Err(Error::Decomposition(format!(
                "odd-dimensional eigenspace of size {} (eigenvalues {:?})",
                range.len(),
                &values[range.clone()]
            )));
        }
        let mut p = projector(&vectors, range.clone());
        for _ in 0..range.len() / 2 {
            let mut u = pick_from_projector(&p).ok_or_else(|| {
                Error::Decomposition("eigenspace exhausted before pairing completed".into())
            })?;
            if let Some(first) = u.iter().find(|c| c.abs() > 1e-10) {
                if *first < 0.0 {
                    u = -u;
                }
            }
            let bu = &b * &u;
            let nu = bu.norm();
            let w = -bu / nu;
            p -= &u * u.transpose() + &w * w.transpose();
            out.values.push(nu);
            out.u.push(u);
            out.w.push(w);
        }
    }
    if out.values.len() != m {
        return Err(Error::Decomposition(format!(
            "found {} symplectic eigenvalues for {m} modes",
            out.values.len()
        )));
    }
    Ok(out)
}

/// Symplectic eigenvalues in descending order (no clamping).
pub(crate) fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let sqrt_v = sqrt_spd(v)?;
    let m = v.nrows() / 2;
    let b = &sqrt_v * omega(m) * &sqrt_v;
    let (values, _) = sorted_eigen(&(b.transpose() * b));
    Ok(values.iter().step_by(2).map(|x| x.max(0.0).sqrt()).collect())
}

pub(crate) fn williamson(v: &DMatrix<f64>) -> Result<WilliamsonDecomposition> {
    let m = v.nrows() / 2;
    let spec = spectrum(v)?;
    if let Some(&min) = spec.values.last() {
        if min < 1.0 - PHYSICALITY_TOLERANCE {
            return Err(Error::UnphysicalState(format!("symplectic eigenvalue {min} below 1")));
        }
    }
    let mut o = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        o.set_column(i, &spec.u[i]);
        o.set_column(m + i, &spec.w[i]);
    }
    let scale: Vec<f64> = spec.values.iter().chain(spec.values.iter()).map(|n| n.powf(-0.5)).collect();
    let s = &spec.sqrt_v * o * DMatrix::from_diagonal(&DVector::from_vec(scale));
    let noise_factors = spec.values.iter().map(|&n| n.max(1.0)).collect();
    Ok(WilliamsonDecomposition { symplectic: SymplecticTransform::new_unchecked(s), noise_factors })
}
