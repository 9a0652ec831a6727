//! Exact Gaussian expectations of low-degree polynomials (Isserlis / Wick).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Highest total degree [`gaussian_polynomial_moment`] accepts.
pub const MAX_MOMENT_DEGREE: usize = 4;

/// A real polynomial in phase-space coordinates `β_0, β_1, …`.
///
/// Monomials are keyed by their sorted multiset of variable indices, so `β₀²β₃` is
/// `[0, 0, 3]` and the constant term is `[]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Vec<usize>, f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn variable(i: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![i], 1.0);
        p
    }

    /// `c + bᵀβ + βᵀQβ`.
    pub fn quadratic(c: f64, b: &DVector<f64>, q: &DMatrix<f64>) -> Self {
        let mut p = Self::constant(c);
        for i in 0..b.len() {
            p.add_term(vec![i], b[i]);
        }
        for i in 0..q.nrows() {
            for j in 0..q.ncols() {
                p.add_term(if i <= j { vec![i, j] } else { vec![j, i] }, q[(i, j)]);
            }
        }
        p
    }

    /// Adds `coefficient · ∏ β_i` for the given indices (any order).
    pub fn add_term(&mut self, mut indices: Vec<usize>, coefficient: f64) {
        if coefficient == 0.0 {
            return;
        }
        indices.sort_unstable();
        match self.terms.entry(indices) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coefficient;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coefficient);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// One past the largest variable index used.
    pub fn variable_bound(&self) -> usize {
        self.terms.keys().filter_map(|k| k.last()).map(|i| i + 1).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * factor);
        }
        out
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(k, v)| v * k.iter().map(|&i| point[i]).product::<f64>()).sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                out.add_term(k, va * vb);
            }
        }
        out
    }
}

/// `E[β_{i₁} ⋯ β_{i_k}]` for a centered Gaussian: sum over perfect pairings.
fn centered_moment(cov: &DMatrix<f64>, idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        n if n % 2 == 1 => 0.0,
        _ => {
            let first = idx[0];
            let mut total = 0.0;
            for j in 1..idx.len() {
                let rest: Vec<usize> = idx[1..]
                    .iter()
                    .enumerate()
                    .filter(|&(pos, _)| pos + 1 != j)
                    .map(|(_, &v)| v)
                    .collect();
                total += cov[(first, idx[j])] * centered_moment(cov, &rest);
            }
            total
        }
    }
}

/// `∫ poly(β) · N(mean, cov)(β) dβ`, exact for degree ≤ 4.
///
/// Each monomial `∏(μ_i + δ_i)` is expanded over subsets of its factors and the centered
/// parts are contracted pairwise with `cov`.
pub fn gaussian_polynomial_moment(cov: &DMatrix<f64>, mean: &DVector<f64>, poly: &Polynomial) -> Result<f64> {
    let degree = poly.degree();
    if degree > MAX_MOMENT_DEGREE {
        return Err(Error::Unsupported(format!(
            "polynomial degree {degree} exceeds {MAX_MOMENT_DEGREE}"
        )));
    }
    if !cov.is_square() || cov.nrows() != mean.len() {
        return Err(Error::DimensionMismatch { expected: mean.len(), actual: cov.nrows() });
    }
    if poly.variable_bound() > mean.len() {
        return Err(Error::DimensionMismatch { expected: mean.len(), actual: poly.variable_bound() });
    }
    let mut total = 0.0;
    for (idx, coeff) in poly.terms() {
        let k = idx.len();
        let mut term = 0.0;
        for mask in 0u32..(1 << k) {
            let mut centered = Vec::with_capacity(k);
            let mut mean_part = 1.0;
            for (pos, &i) in idx.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    centered.push(i);
                } else {
                    mean_part *= mean[i];
                }
            }
            if mean_part != 0.0 {
                term += mean_part * centered_moment(cov, &centered);
            }
        }
        total += coeff * term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_moments() {
        let cov = DMatrix::identity(2, 2);
        let zero = DVector::zeros(2);
        assert_eq!(gaussian_polynomial_moment(&cov, &zero, &Polynomial::constant(1.0)).unwrap(), 1.0);
        let x2 = &Polynomial::variable(0) * &Polynomial::variable(0);
        assert_eq!(gaussian_polynomial_moment(&cov, &zero, &x2).unwrap(), 1.0);
        let v = 2.5;
        let cov1 = DMatrix::from_element(1, 1, v);
        let x4 = &x2 * &x2;
        let m4 = gaussian_polynomial_moment(&cov1, &DVector::zeros(1), &x4).unwrap();
        assert!((m4 - 3.0 * v * v).abs() < 1e-12);
    }

    #[test]
    fn shifted_fourth_moment() {
        // E[(μ+δ)^4] = μ⁴ + 6μ²v + 3v²
        let (mu, v) = (1.3, 0.7);
        let x = Polynomial::variable(0);
        let x4 = &(&x * &x) * &(&x * &x);
        let got = gaussian_polynomial_moment(&DMatrix::from_element(1, 1, v), &DVector::from_element(1, mu), &x4).unwrap();
        assert!((got - (mu.powi(4) + 6.0 * mu * mu * v + 3.0 * v * v)).abs() < 1e-12);
    }

    #[test]
    fn cross_moment() {
        // E[x²y²] = σxx σyy + 2σxy² for a centered pair
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0]);
        let p = Polynomial::quadratic(0.0, &DVector::zeros(2), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        let got = gaussian_polynomial_moment(&cov, &DVector::zeros(2), &(&p * &p)).unwrap();
        assert!((got - (6.0 + 2.0 * 0.25)).abs() < 1e-12);
    }

    #[test]
    fn degree_five_unsupported() {
        let x = Polynomial::variable(0);
        let x5 = &(&(&x * &x) * &(&x * &x)) * &x;
        assert!(matches!(
            gaussian_polynomial_moment(&DMatrix::identity(1, 1), &DVector::zeros(1), &x5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn algebra() {
        let x = Polynomial::variable(0);
        let y = Polynomial::variable(1);
        let p = &(&x + &y) * &(&x + &y.scale(-1.0));
        assert_eq!(p.degree(), 2);
        assert!((p.eval(&[3.0, 2.0]) - 5.0).abs() < 1e-15);
        assert_eq!(p.terms().count(), 2);
    }
}
