//! Purification conditions and the upper bounds on the relative purity.
//!
//! Writing `A = |α_g|²` and `K = Σ k_i l_i (n_i²−1)/(2n_i)`, the closed-form ratio obeys
//!
//! ```text
//! μ⁻/μ − 1 = [4AC − (y² − x² − 2|K|²)] / (2(y + A)²),   C = Re(e^{−2iφ} K)
//! ```
//!
//! so purification needs `C > 0` and `A ≥ (y² − x² − 2|K|²)/(4C)`. Aligning every phase
//! (`2φ = φ_i + θ_i`) gives the envelope `f(α)`, whose maximum stays below 1.2.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subtraction::{relative_purity_closed_form, BogoliubovRow};

/// `|μ⁻/μ − 1|` below this counts as the equality boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// `Σ Ñ_i / n_i` (can be negative)
    pub x: f64,
    /// `Σ N_i`
    pub y: f64,
    /// `Σ 2k̃_i l̃_i (n_i²−1)/(2n_i)`
    pub z: f64,
    /// `α̃²`
    pub alpha: f64,
    /// `x / y` when `0 < x ≤ y`
    pub zeta: Option<f64>,
    /// `Σ k̃_i l̃_i (n_i²−1)/(2n_i) · cos(2φ − φ_i − θ_i)`
    pub condition_direction: f64,
    /// `α̃²` at which the ratio crosses one; defined only for a positive direction.
    pub threshold_alpha_sq: Option<f64>,
    /// `4AC − (y² − x² − 2|K|²)`, same sign as `μ⁻/μ − 1`
    pub margin: f64,
    /// The ratio equals one within [`BOUNDARY_TOLERANCE`].
    pub boundary: bool,
    pub f_alpha: f64,
    /// `None` when `f` has no interior maximum (`z = 0`); then `f_max = 1`.
    pub alpha_star: Option<f64>,
    pub f_max: f64,
    pub purifiable: bool,
}

pub fn purification_conditions(row: &BogoliubovRow) -> Result<BoundReport> {
    // validates the row and rejects vacuum-like modes
    relative_purity_closed_form(row)?;
    let agg = row.aggregates();
    let (x, y, z, a) = (agg.x, agg.y, agg.z, agg.alpha_sq);
    let phase = if a > 0.0 { row.alpha_g.arg() } else { 0.0 };
    let direction = (num_complex::Complex64::from_polar(1.0, -2.0 * phase) * agg.cross).re;
    let gap = y * y - x * x - 2.0 * agg.cross.norm_sqr();
    let margin = 4.0 * a * direction - gap;
    let boundary = margin.abs() <= BOUNDARY_TOLERANCE * 2.0 * (y + a) * (y + a);
    let threshold = (direction > 0.0).then(|| gap / (4.0 * direction));
    let purifiable = boundary || threshold.is_some_and(|t| a >= t);
    let zeta = (x > 0.0 && y > 0.0 && x <= y).then(|| x / y);
    let (alpha_star, f_max) = match bound_f_max(x, y, z) {
        Ok((s, f)) => (Some(s), f),
        Err(_) => (None, 1.0),
    };
    Ok(BoundReport {
        x,
        y,
        z,
        alpha: a,
        zeta,
        condition_direction: direction,
        threshold_alpha_sq: threshold,
        margin,
        boundary,
        f_alpha: bound_f(x, y, z, a)?,
        alpha_star,
        f_max,
        purifiable,
    })
}

/// `f(α) = 1 + ½(x² − y² + ½z² + 2αz)/(y + α)²`.
pub fn bound_f(x: f64, y: f64, z: f64, alpha: f64) -> Result<f64> {
    let d = y + alpha;
    if !(d > 0.0) {
        return Err(Error::NumericDegenerate(format!("y + α = {d}")));
    }
    Ok(1.0 + 0.5 * (x * x - y * y + 0.5 * z * z + 2.0 * alpha * z) / (d * d))
}

/// `(α*, f(α*))` with `α* = (y² − x² + yz − ½z²)/z` and
/// `f(α*) = 1 + z²/(2(y² − x² + 2yz − ½z²))`.
pub fn bound_f_max(x: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!("no interior maximum for z = {z}")));
    }
    let d = y * y - x * x + 2.0 * y * z - 0.5 * z * z;
    if !(d > 0.0) {
        return Err(Error::InvalidArgument(format!("y² − x² + 2yz − z²/2 = {d} is not positive")));
    }
    let alpha_star = (y * y - x * x + y * z - 0.5 * z * z) / z;
    Ok((alpha_star, 1.0 + z * z / (2.0 * d)))
}

/// `1 + 1/(5 + 8ζ/(1−ζ))`, decreasing from the open supremum 1.2 at `ζ → 0⁺` to 1 at `ζ = 1`.
pub fn zeta_bound(zeta: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::InvalidArgument(format!("ζ = {zeta} outside (0, 1]")));
    }
    if zeta == 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 + 1.0 / (5.0 + 8.0 * zeta / (1.0 - zeta)))
}

/// Relative purity of an undisplaced row, which never exceeds one.
pub fn zero_displacement_ratio_bound(row: &BogoliubovRow) -> Result<f64> {
    if row.alpha_g.norm() >= 1e-12 {
        return Err(Error::InvalidPrecondition(format!(
            "row has displacement |α_g| = {}",
            row.alpha_g.norm()
        )));
    }
    relative_purity_closed_form(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{GaussianState, ModeSelector};
    use crate::subtraction::extract_bogoliubov;
    use nalgebra::{DMatrix, DVector};
    use std::f64::consts::PI;

    fn single_mode_row(n: f64, s: f64, amp: f64, phi: f64) -> BogoliubovRow {
        let v = DMatrix::from_diagonal(&DVector::from_vec(vec![n * s, n / s]));
        let d = DVector::from_vec(vec![2.0 * amp * phi.cos(), 2.0 * amp * phi.sin()]);
        let st = GaussianState::new(v, d).unwrap();
        extract_bogoliubov(&st, &ModeSelector::computational(1, 0).unwrap()).unwrap()
    }

    #[test]
    fn reference_state_aggregates() {
        let rep = purification_conditions(&single_mode_row(10.0, 10.0, 6.0, 0.0)).unwrap();
        assert!((rep.x + 0.2475).abs() < 1e-12);
        assert!((rep.y - 24.75).abs() < 1e-12);
        assert!((rep.z - 24.5025).abs() < 1e-12);
        assert!((rep.f_alpha - 1.1967).abs() < 5e-4);
        assert!(rep.purifiable && !rep.boundary);
        assert!(rep.zeta.is_none());
        let t = rep.threshold_alpha_sq.unwrap();
        let expected = (rep.y * rep.y - rep.x * rep.x - rep.z * rep.z / 2.0) / (2.0 * rep.z);
        assert!((t - expected).abs() < 1e-12 && (t - 6.37).abs() < 0.01);
        assert!((rep.alpha_star.unwrap() - 37.5).abs() < 0.01);
        assert!((rep.f_max - 1.1968).abs() < 1e-4);
    }

    #[test]
    fn threshold_agrees_with_scan() {
        // bisect the ratio = 1 crossing along α̃
        let ratio = |a: f64| relative_purity_closed_form(&single_mode_row(10.0, 10.0, a, 0.0)).unwrap();
        let (mut lo, mut hi) = (0.1, 6.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ratio(mid) < 1.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let rep = purification_conditions(&single_mode_row(10.0, 10.0, 6.0, 0.0)).unwrap();
        assert!((lo * lo - rep.threshold_alpha_sq.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_direction_never_purifies() {
        for a in [0.5, 3.0, 6.0, 12.0] {
            let rep = purification_conditions(&single_mode_row(10.0, 10.0, a, PI / 2.0)).unwrap();
            assert!(rep.condition_direction < 0.0 && !rep.purifiable);
            assert!(rep.threshold_alpha_sq.is_none());
        }
    }

    #[test]
    fn undisplaced_rows() {
        let mixed = single_mode_row(10.0, 10.0, 0.0, 0.0);
        assert!(!purification_conditions(&mixed).unwrap().purifiable);
        let r = zero_displacement_ratio_bound(&mixed).unwrap();
        assert!((0.5..=1.0).contains(&r));
        let pure = single_mode_row(1.0, 4.0, 0.0, 0.0);
        assert!((zero_displacement_ratio_bound(&pure).unwrap() - 1.0).abs() < 1e-12);
        let rep = purification_conditions(&pure).unwrap();
        assert!(rep.boundary && rep.purifiable);
        assert!(matches!(
            zero_displacement_ratio_bound(&single_mode_row(10.0, 10.0, 1.0, 0.0)),
            Err(Error::InvalidPrecondition(_))
        ));
    }

    #[test]
    fn f_max_matches_numeric_maximum() {
        let (x, y, z) = (-0.2475, 24.75, 24.5025);
        let (star, fmax) = bound_f_max(x, y, z).unwrap();
        assert!((bound_f(x, y, z, star).unwrap() - fmax).abs() < 1e-12);
        let best = (0..200_000)
            .map(|i| bound_f(x, y, z, i as f64 * 1e-3).unwrap())
            .fold(f64::MIN, f64::max);
        assert!(best <= fmax + 1e-12 && fmax - best < 1e-9);
        assert!((bound_f(x, y, z, 36.0).unwrap() - 1.1967).abs() < 5e-4);
        assert!((bound_f(0.7, 0.7, 0.0, 5.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(bound_f_max(x, y, 0.0).is_err());
        let (_, tiny) = bound_f_max(0.0, 1.0, 1e-6).unwrap();
        assert!((tiny - 1.0).abs() < 1e-11);
    }

    #[test]
    fn zeta_bound_values() {
        assert_eq!(zeta_bound(1.0).unwrap(), 1.0);
        assert!((zeta_bound(0.5).unwrap() - (1.0 + 1.0 / 13.0)).abs() < 1e-15);
        assert!(zeta_bound(1e-12).unwrap() < 1.2);
        assert!((zeta_bound(1e-12).unwrap() - 1.2).abs() < 1e-10);
        assert!(zeta_bound(0.0).is_err() && zeta_bound(1.5).is_err());
    }
}
