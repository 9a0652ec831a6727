//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// The symplectic form `Ω = [[0, I], [−I, 0]]` in xx…pp ordering.
pub(crate) fn omega(modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        om[(i, modes + i)] = 1.0;
        om[(modes + i, i)] = -1.0;
    }
    om
}

/// `‖A − Aᵀ‖_max ≤ tol · max(1, ‖A‖_max)`.
pub(crate) fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    let scale = a.amax().max(1.0);
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[(i, j)] - a[(j, i)]).abs() > tol * scale {
                return false;
            }
        }
    }
    true
}

pub(crate) fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted descending.
pub(crate) fn sorted_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(symmetrize(a));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Square root of a symmetric positive-definite matrix.
pub(crate) fn sqrt_spd(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (values, vectors) = sorted_eigen(a);
    let min = values.last().copied().unwrap_or(0.0);
    if min <= 0.0 {
        return Err(Error::UnphysicalState(format!(
            "covariance matrix is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    let roots = DVector::from_iterator(values.len(), values.iter().map(|v| v.sqrt()));
    Ok(&vectors * DMatrix::from_diagonal(&roots) * vectors.transpose())
}

/// Groups indices of a descending spectrum into clusters of near-equal eigenvalues.
pub(crate) fn clusters(values: &[f64], rel_tol: f64) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > rel_tol * scale {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Projector onto the span of the given orthonormal columns.
pub(crate) fn projector(vectors: &DMatrix<f64>, cols: std::ops::Range<usize>) -> DMatrix<f64> {
    let block = vectors.columns(cols.start, cols.len());
    block * block.transpose()
}

/// Deterministic unit vector inside the range of a projector: the normalized column
/// with the largest diagonal weight (first index on ties).
pub(crate) fn pick_from_projector(p: &DMatrix<f64>) -> Option<DVector<f64>> {
    let diag_max = (0..p.nrows()).map(|i| p[(i, i)]).fold(f64::MIN, f64::max);
    if diag_max <= 1e-8 {
        return None;
    }
    let c = (0..p.nrows()).find(|&i| p[(i, i)] >= diag_max - 1e-9)?;
    let col = p.column(c).into_owned();
    let norm = col.norm();
    Some(col / norm)
}

/// Relative Frobenius distance `‖a − b‖ / max(‖b‖, tiny)`.
#[cfg(test)]
pub(crate) fn relative_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_squares_to_minus_identity() {
        let om = omega(3);
        assert_eq!(&om * &om, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]));
        let r = sqrt_spd(&a).unwrap();
        assert!((r[(0, 0)] - 2.0).abs() < 1e-14 && (r[(1, 1)] - 3.0).abs() < 1e-14);
        assert!(sqrt_spd(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]))).is_err());
    }

    #[test]
    fn clusters_split_on_gaps() {
        let c = clusters(&[5.0, 5.0, 2.0, 1.0, 1.0 - 1e-14], 1e-9);
        assert_eq!(c, vec![0..2, 2..3, 3..5]);
    }
}
