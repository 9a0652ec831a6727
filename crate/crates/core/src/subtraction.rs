//! Single-photon subtraction `ρ̂ → â_g ρ̂ â_g† / ⟨n̂_g⟩` on a Gaussian state.
//!
//! The subtracted Wigner function is a quadratic polynomial times the original Gaussian,
//!
//! ```text
//! W⁻(β) = [‖X V⁻¹(β − α₀) + α_g‖² + tr(V_g − X V⁻¹ Xᵀ) − 2] · W(β) / (‖α_g‖² + tr V_g − 2)
//! ```
//!
//! with `X = Gᵀ(V − I)`, `V_g = GᵀVG` and the phase-space pair `α_g = Gᵀα₀`. Purity and
//! moments of `W⁻` are evaluated exactly with [`gaussian_polynomial_moment`]. The
//! closed-form relative purity [`relative_purity_closed_form`] is an independent route
//! through the Bogoliubov row of the subtracted mode.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::conventions::{phase_space_to_amplitude, PHYSICALITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::gaussian::{phase_space_indices, GaussianDensity, GaussianState, ModeSelector};
use crate::moments::{gaussian_polynomial_moment, Polynomial};

/// Below this the subtracted mode is treated as empty.
pub const VACUUM_NORMALIZATION: f64 = 1e-12;

/// Tolerance on `Σ|l_i|² − |k_i|² = 1` accepted by [`relative_purity_closed_form`].
pub const ROW_CONSISTENCY_TOLERANCE: f64 = 1e-6;

/// `c₀ + c₁·β + βᵀC₂β` in absolute phase-space coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPrefactor {
    pub constant: f64,
    pub linear: DVector<f64>,
    pub quadratic: DMatrix<f64>,
}

impl QuadraticPrefactor {
    pub fn eval(&self, point: &[f64]) -> f64 {
        let n = self.linear.len();
        let mut total = self.constant;
        for i in 0..n {
            let mut row = self.linear[i];
            for j in 0..n {
                row += self.quadratic[(i, j)] * point[j];
            }
            total += row * point[i];
        }
        total
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::quadratic(self.constant, &self.linear, &self.quadratic)
    }

    /// Coefficients `(c, b, Q)` of the same polynomial in `δ = β − mean`.
    fn centered(&self, mean: &DVector<f64>) -> (f64, DVector<f64>, DMatrix<f64>) {
        let q = self.quadratic.clone();
        let b = &self.linear + 2.0 * &q * mean;
        let c = self.constant + self.linear.dot(mean) + mean.dot(&(&q * mean));
        (c, b, q)
    }

    fn from_centered(c: f64, b: &DVector<f64>, q: &DMatrix<f64>, mean: &DVector<f64>) -> Self {
        let qm = q * mean;
        Self {
            constant: c - b.dot(mean) + mean.dot(&qm),
            linear: b - 2.0 * qm,
            quadratic: q.clone(),
        }
    }
}

/// `W(β) = P(β) · N(α₀, V)(β) / normalization` for a quadratic `P`.
///
/// This is the shape of a photon-subtracted Gaussian and of all its marginals.
#[derive(Debug, Clone)]
pub struct PolynomialWigner {
    gaussian: GaussianState,
    prefactor: QuadraticPrefactor,
    normalization: f64,
    density: GaussianDensity,
}

impl PolynomialWigner {
    fn new(gaussian: GaussianState, prefactor: QuadraticPrefactor, normalization: f64) -> Result<Self> {
        let density = gaussian.wigner_density()?;
        Ok(Self { gaussian, prefactor, normalization, density })
    }

    pub fn gaussian(&self) -> &GaussianState {
        &self.gaussian
    }

    pub fn prefactor(&self) -> &QuadraticPrefactor {
        &self.prefactor
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn mode_count(&self) -> usize {
        self.gaussian.mode_count()
    }

    pub fn wigner_at(&self, point: &[f64]) -> Result<f64> {
        let g = self.density.eval(point)?;
        Ok(self.prefactor.eval(point) * g / self.normalization)
    }

    pub(crate) fn eval_unchecked(&self, point: &[f64]) -> f64 {
        self.prefactor.eval(point) * self.density.eval_unchecked(point) / self.normalization
    }

    /// `∫ W` (one up to rounding).
    pub fn total_probability(&self) -> Result<f64> {
        let poly = self.prefactor.to_polynomial();
        Ok(gaussian_polynomial_moment(self.gaussian.covariance(), self.gaussian.displacement(), &poly)?
            / self.normalization)
    }

    /// `μ / μ_G = E[P²] / normalization²` with the expectation under `N(α₀, V/2)`.
    pub fn relative_purity(&self) -> Result<f64> {
        let p = self.prefactor.to_polynomial();
        let half = self.gaussian.covariance() * 0.5;
        let second = gaussian_polynomial_moment(&half, self.gaussian.displacement(), &(&p * &p))?;
        Ok(second / (self.normalization * self.normalization))
    }

    /// `(4π)^m ∫ W²`.
    pub fn purity(&self) -> Result<f64> {
        Ok(self.relative_purity()? * self.gaussian.purity())
    }

    pub fn moments(&self) -> Result<MomentReport> {
        let n = 2 * self.mode_count();
        let cov = self.gaussian.covariance();
        let mean0 = self.gaussian.displacement();
        let p = self.prefactor.to_polynomial();
        let expect = |poly: &Polynomial| -> Result<f64> {
            Ok(gaussian_polynomial_moment(cov, mean0, poly)? / self.normalization)
        };
        let mut mean = DVector::zeros(n);
        for i in 0..n {
            mean[i] = expect(&(&p * &Polynomial::variable(i)))?;
        }
        let mut second = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut pair = Polynomial::zero();
                pair.add_term(vec![i, j], 1.0);
                let v = expect(&(&p * &pair))? - mean[i] * mean[j];
                second[(i, j)] = v;
                second[(j, i)] = v;
            }
        }
        Ok(MomentReport { mean, covariance: second, purity: self.purity()? })
    }

    /// Marginal on the listed modes, again polynomial times Gaussian.
    ///
    /// With `δ = L δ_J + ε`, `L = [I; V_RJ V_JJ⁻¹]`, the prefactor becomes
    /// `δ_Jᵀ LᵀQL δ_J + (Lᵀb)·δ_J + c + tr(Q Σ_ε)` where `Σ_ε` is the conditional covariance.
    pub fn marginal(&self, modes: &[usize]) -> Result<PolynomialWigner> {
        let m = self.mode_count();
        let keep = phase_space_indices(modes, m)?;
        let rest: Vec<usize> = (0..2 * m).filter(|i| !keep.contains(i)).collect();
        let v = self.gaussian.covariance();
        let mean = self.gaussian.displacement();
        let (c, b, q) = self.prefactor.centered(mean);

        let sub = |rows: &[usize], cols: &[usize]| DMatrix::from_fn(rows.len(), cols.len(), |i, j| v[(rows[i], cols[j])]);
        let v_jj = sub(&keep, &keep);
        let v_jj_inv = v_jj
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericDegenerate("singular marginal covariance".into()))?;
        let v_rj = sub(&rest, &keep);
        let gain = &v_rj * &v_jj_inv;
        let cond = sub(&rest, &rest) - &gain * sub(&keep, &rest);

        let mut l = DMatrix::zeros(2 * m, keep.len());
        for (k, &row) in keep.iter().enumerate() {
            l[(row, k)] = 1.0;
        }
        for (k, &row) in rest.iter().enumerate() {
            l.set_row(row, &gain.row(k));
        }
        let q_j = l.transpose() * &q * &l;
        let b_j = l.transpose() * &b;
        let mut c_j = c;
        for (a, &ra) in rest.iter().enumerate() {
            for (bb, &rb) in rest.iter().enumerate() {
                c_j += q[(ra, rb)] * cond[(bb, a)];
            }
        }
        let reduced = self.gaussian.reduce(modes)?;
        let prefactor = QuadraticPrefactor::from_centered(c_j, &b_j, &q_j, reduced.displacement());
        PolynomialWigner::new(reduced, prefactor, self.normalization)
    }
}

/// First and second moments of a Wigner function and its purity.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub purity: f64,
}

/// A Gaussian state after subtracting one photon from the mode picked by `selector`.
#[derive(Debug, Clone)]
pub struct SubtractedState {
    wigner: PolynomialWigner,
    selector: ModeSelector,
}

impl SubtractedState {
    pub fn base(&self) -> &GaussianState {
        self.wigner.gaussian()
    }

    pub fn selector(&self) -> &ModeSelector {
        &self.selector
    }

    pub fn prefactor(&self) -> &QuadraticPrefactor {
        self.wigner.prefactor()
    }

    /// `‖α_g‖² + tr V_g − 2 = 4⟨n̂_g⟩`.
    pub fn normalization(&self) -> f64 {
        self.wigner.normalization()
    }

    pub fn as_wigner(&self) -> &PolynomialWigner {
        &self.wigner
    }

    pub fn wigner_at(&self, point: &[f64]) -> Result<f64> {
        self.wigner.wigner_at(point)
    }

    pub fn purity(&self) -> Result<f64> {
        self.wigner.purity()
    }

    pub fn relative_purity(&self) -> Result<f64> {
        self.wigner.relative_purity()
    }

    pub fn moments(&self) -> Result<MomentReport> {
        self.wigner.moments()
    }

    pub fn marginal(&self, modes: &[usize]) -> Result<PolynomialWigner> {
        self.wigner.marginal(modes)
    }
}

pub fn subtract_photon(state: &GaussianState, selector: &ModeSelector) -> Result<SubtractedState> {
    let m = state.mode_count();
    selector.check_modes(m)?;
    let v = state.covariance();
    let alpha = state.displacement();
    let g = selector.matrix();

    let v_inv = v
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericDegenerate("singular covariance".into()))?;
    let x = g.transpose() * (v - DMatrix::identity(2 * m, 2 * m));
    let a = &x * &v_inv;
    let v_g = g.transpose() * v * &g;
    let alpha_g = g.transpose() * alpha;
    let normalization = alpha_g.norm_squared() + v_g.trace() - 2.0;
    if !(normalization > VACUUM_NORMALIZATION) {
        return Err(Error::SubtractionFromVacuum { normalization });
    }
    let t = (v_g - &a * x.transpose()).trace();

    let q = a.transpose() * &a;
    let b = 2.0 * a.transpose() * &alpha_g;
    let c = alpha_g.norm_squared() + t - 2.0;
    let prefactor = QuadraticPrefactor::from_centered(c, &b, &q, alpha);
    Ok(SubtractedState {
        wigner: PolynomialWigner::new(state.clone(), prefactor, normalization)?,
        selector: selector.clone(),
    })
}

pub fn wigner_subtracted_at(sub: &SubtractedState, point: &[f64]) -> Result<f64> {
    sub.wigner_at(point)
}

pub fn purity_subtracted(sub: &SubtractedState) -> Result<f64> {
    sub.purity()
}

pub fn moments_subtracted(sub: &SubtractedState) -> Result<MomentReport> {
    sub.moments()
}

/// The subtracted mode in the thermal-mode frame of the state:
///
/// `D̂†Û† â_g ÛD̂ = α_g + Σ_i (k_i b̂_i† + l_i b̂_i)`
///
/// where `b̂_i` are the Williamson modes with noise factors `n_i` and `α_g = ⟨â_g⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovRow {
    pub alpha_g: Complex64,
    pub k: Vec<Complex64>,
    pub l: Vec<Complex64>,
    pub noise: Vec<f64>,
}

impl BogoliubovRow {
    pub fn new(alpha_g: Complex64, k: Vec<Complex64>, l: Vec<Complex64>, noise: Vec<f64>) -> Result<Self> {
        if k.len() != l.len() || k.len() != noise.len() || k.is_empty() {
            return Err(Error::InconsistentRow(format!(
                "coefficient lengths differ: k {}, l {}, n {}",
                k.len(),
                l.len(),
                noise.len()
            )));
        }
        if let Some(n) = noise.iter().find(|&&n| !(n >= 1.0 - PHYSICALITY_TOLERANCE)) {
            return Err(Error::InconsistentRow(format!("noise factor {n} below 1")));
        }
        Ok(Self { alpha_g, k, l, noise })
    }

    pub fn mode_count(&self) -> usize {
        self.k.len()
    }

    /// `Σ|l_i|² − |k_i|² − 1`, zero for a bosonic mode.
    pub fn commutator_defect(&self) -> f64 {
        self.l.iter().zip(&self.k).map(|(l, k)| l.norm_sqr() - k.norm_sqr()).sum::<f64>() - 1.0
    }

    /// `|Re Σ k_i l_i*|`: how far `Σ k_i l_i*` is from purely imaginary.
    ///
    /// Reported for inspection; a single row has no reason to satisfy it (a squeezed
    /// mode gives `(s² − 1)/(4s)`).
    pub fn second_constraint_residual(&self) -> f64 {
        self.k.iter().zip(&self.l).map(|(k, l)| k * l.conj()).sum::<Complex64>().re.abs()
    }

    pub fn alpha_polar(&self) -> (f64, f64) {
        self.alpha_g.to_polar()
    }

    pub fn k_polar(&self) -> Vec<(f64, f64)> {
        self.k.iter().map(|c| c.to_polar()).collect()
    }

    pub fn l_polar(&self) -> Vec<(f64, f64)> {
        self.l.iter().map(|c| c.to_polar()).collect()
    }

    /// The sums `x`, `y`, `z`, `K` and `|α_g|²` entering the closed form and the bounds.
    pub fn aggregates(&self) -> RowAggregates {
        let mut agg = RowAggregates::default();
        for ((k, l), &n) in self.k.iter().zip(&self.l).zip(&self.noise) {
            let (k2, l2) = (k.norm_sqr(), l.norm_sqr());
            let big_n = k2 * (n + 1.0) / 2.0 + l2 * (n - 1.0) / 2.0;
            let tilde_n = k2 * (n + 1.0) / 2.0 - l2 * (n - 1.0) / 2.0;
            agg.x += tilde_n / n;
            agg.y += big_n;
            agg.cross += k * l * ((n * n - 1.0) / (2.0 * n));
            agg.z += k.norm() * l.norm() * ((n * n - 1.0) / n);
        }
        agg.alpha_sq = self.alpha_g.norm_sqr();
        agg
    }
}

/// Sums entering the relative-purity formula.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RowAggregates {
    /// `Σ Ñ_i / n_i`
    pub x: f64,
    /// `Σ N_i`
    pub y: f64,
    /// `Σ k̃_i l̃_i (n_i² − 1)/n_i`
    pub z: f64,
    /// `K = Σ k_i l_i (n_i² − 1)/(2n_i)`
    pub cross: Complex64,
    /// `|α_g|²`
    pub alpha_sq: f64,
}

/// Reads the Bogoliubov row of `â_g` off the Williamson decomposition `V = S D Sᵀ`.
///
/// With `r̂ = S r̂_b + α₀`, `â_g = (g⁽ˣ⁾ + i g⁽ᵖ⁾)·r̂ / 2`. Writing `c = (Sᵀg⁽ˣ⁾ + i Sᵀg⁽ᵖ⁾)/2`
/// and `x̂_b = b̂ + b̂†`, `p̂_b = i(b̂† − b̂)` gives `l_i = c_i − i c_{m+i}` and
/// `k_i = c_i + i c_{m+i}`. This is the only place where the phase-space pair
/// `Gᵀα₀` becomes the complex amplitude `⟨â_g⟩`.
pub fn extract_bogoliubov(state: &GaussianState, selector: &ModeSelector) -> Result<BogoliubovRow> {
    let m = state.mode_count();
    selector.check_modes(m)?;
    let w = state.williamson()?;
    let st = w.symplectic.matrix().transpose();
    let cx = &st * selector.basis_x();
    let cp = &st * selector.basis_p();
    let c = |i: usize| Complex64::new(cx[i], cp[i]) * 0.5;
    let i_unit = Complex64::i();
    let l = (0..m).map(|i| c(i) - i_unit * c(m + i)).collect();
    let k = (0..m).map(|i| c(i) + i_unit * c(m + i)).collect();
    let alpha = state.displacement();
    let alpha_g = phase_space_to_amplitude(alpha.dot(selector.basis_x()), alpha.dot(selector.basis_p()));
    BogoliubovRow::new(alpha_g, k, l, w.noise_factors)
}

/// `μ⁻/μ` from the Bogoliubov row:
///
/// `½ + [½x² + ½|α_g|⁴ + |K|² + 2 Re(α_g*² K) + |α_g|² y] / (y + |α_g|²)²`
///
/// with `N_i = |k_i|²(n_i+1)/2 + |l_i|²(n_i−1)/2`, `Ñ_i = |k_i|²(n_i+1)/2 − |l_i|²(n_i−1)/2`,
/// `x = Σ Ñ_i/n_i`, `y = Σ N_i` and `K = Σ k_i l_i (n_i²−1)/(2n_i)`.
pub fn relative_purity_closed_form(row: &BogoliubovRow) -> Result<f64> {
    let defect = row.commutator_defect();
    if defect.abs() > ROW_CONSISTENCY_TOLERANCE {
        return Err(Error::InconsistentRow(format!("Σ|l|² − |k|² − 1 = {defect:e}")));
    }
    let agg = row.aggregates();
    let a = agg.alpha_sq;
    let denom = agg.y + a;
    if !(denom > VACUUM_NORMALIZATION) {
        return Err(Error::SubtractionFromVacuum { normalization: 4.0 * denom });
    }
    let phase_term = (row.alpha_g.conj() * row.alpha_g.conj() * agg.cross).re;
    let numerator =
        0.5 * agg.x * agg.x + 0.5 * a * a + agg.cross.norm_sqr() + 2.0 * phase_term + a * agg.y;
    Ok(0.5 + numerator / (denom * denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::Gate;

    fn squeezed_thermal(n: f64, s: f64, amp: Complex64) -> GaussianState {
        let v = DMatrix::from_diagonal(&DVector::from_vec(vec![n * s, n / s]));
        let (x, p) = crate::conventions::amplitude_to_phase_space(amp);
        GaussianState::new(v, DVector::from_vec(vec![x, p])).unwrap()
    }

    fn mode0(m: usize) -> ModeSelector {
        ModeSelector::computational(m, 0).unwrap()
    }

    #[test]
    fn coherent_state_is_a_fixed_point() {
        let st = GaussianState::coherent(&[Complex64::new(6.0, 0.0)]).unwrap();
        let sub = subtract_photon(&st, &mode0(1)).unwrap();
        assert!(sub.prefactor().quadratic.amax() < 1e-15);
        assert!(sub.prefactor().linear.amax() < 1e-15);
        for pt in [[12.0, 0.0], [11.0, 0.5], [13.0, -1.0]] {
            let a = sub.wigner_at(&pt).unwrap();
            let b = st.wigner_at(&pt).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
        assert!((sub.purity().unwrap() - 1.0).abs() < 1e-12);
        let row = extract_bogoliubov(&st, &mode0(1)).unwrap();
        assert_eq!(relative_purity_closed_form(&row).unwrap(), 1.0);
    }

    #[test]
    fn vacuum_subtraction_fails() {
        let st = GaussianState::vacuum(2).unwrap();
        assert!(matches!(subtract_photon(&st, &mode0(2)), Err(Error::SubtractionFromVacuum { .. })));
        let row = extract_bogoliubov(&st, &mode0(2)).unwrap();
        assert!(matches!(relative_purity_closed_form(&row), Err(Error::SubtractionFromVacuum { .. })));
    }

    #[test]
    fn squeezed_vacuum_origin_is_negative() {
        let st = GaussianState::vacuum(1).unwrap().apply_gate(&Gate::Squeezer { mode: 0, r: 0.6 }).unwrap();
        let sub = subtract_photon(&st, &mode0(1)).unwrap();
        assert!(sub.wigner_at(&[0.0, 0.0]).unwrap() < 0.0);
        assert!((sub.as_wigner().total_probability().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_row_closed_forms() {
        for (n, s) in [(10.0, 10.0), (1.0, 3.0), (4.5, 0.2)] {
            let row = extract_bogoliubov(&squeezed_thermal(n, s, Complex64::new(1.0, 2.0)), &mode0(1)).unwrap();
            let kt = (s - 1.0) / (2.0 * s.sqrt());
            let lt = (s + 1.0) / (2.0 * s.sqrt());
            assert!((row.k[0].re - kt).abs() < 1e-12 && row.k[0].im.abs() < 1e-12);
            assert!((row.l[0].re - lt).abs() < 1e-12 && row.l[0].im.abs() < 1e-12);
            assert!((row.noise[0] - n).abs() < 1e-9);
            assert!(row.commutator_defect().abs() < 1e-12);
            assert_eq!(row.alpha_g, Complex64::new(1.0, 2.0));
        }
    }

    #[test]
    fn reference_state_routes_agree() {
        let st = squeezed_thermal(10.0, 10.0, Complex64::new(6.0, 0.0));
        let row = extract_bogoliubov(&st, &mode0(1)).unwrap();
        let closed = relative_purity_closed_form(&row).unwrap();
        assert!((closed - 1.1967).abs() < 5e-4);
        let sub = subtract_photon(&st, &mode0(1)).unwrap();
        assert!((sub.relative_purity().unwrap() - closed).abs() < 1e-12);
        let mom = sub.moments().unwrap();
        assert!((mom.covariance[(0, 0)] / 100.0 - 0.85).abs() < 0.01);
        assert!((mom.covariance[(1, 1)] - 1.0).abs() < 1e-9);
        // ⟨â⟩ of the subtracted state is ⟨â†ââ⟩/⟨â†â⟩ = 10.89 for this state
        assert!((mom.mean[0] / 2.0 - 10.889).abs() < 1e-3);
    }

    #[test]
    fn prefactor_matches_closed_form_expectation() {
        // E[(δᵀQδ + bᵀδ + c)²] under N(0, Σ) = (tr QΣ)² + 2 tr(QΣQΣ) + bᵀΣb + 2c tr QΣ + c²
        let st = GaussianState::vacuum(2)
            .unwrap()
            .apply_gates(&[
                Gate::TwoModeSqueezer { mode_a: 0, mode_b: 1, r: 0.4 },
                Gate::Squeezer { mode: 1, r: -0.3 },
                Gate::Beamsplitter { mode_a: 0, mode_b: 1, transmittance: 0.3 },
                Gate::displacement(1, Complex64::new(0.7, -1.1)),
            ])
            .unwrap();
        let sub = subtract_photon(&st, &ModeSelector::computational(2, 1).unwrap()).unwrap();
        let (c, b, q) = sub.prefactor().centered(st.displacement());
        let sigma = st.covariance() * 0.5;
        let qs = &q * &sigma;
        let expected = qs.trace().powi(2) + 2.0 * (&qs * &qs).trace() + b.dot(&(&sigma * &b))
            + 2.0 * c * qs.trace()
            + c * c;
        let n = sub.normalization();
        assert!((sub.relative_purity().unwrap() - expected / (n * n)).abs() < 1e-12);
        // pure global state stays pure
        assert!((sub.purity().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn marginal_of_product_state() {
        // subtracting from mode 0 of a product state leaves mode 1 untouched
        let a = squeezed_thermal(3.0, 2.0, Complex64::new(0.5, 0.0));
        let b = squeezed_thermal(2.0, 0.5, Complex64::new(0.0, 1.0));
        let st = a.tensor(&b);
        let sub = subtract_photon(&st, &mode0(2)).unwrap();
        let m1 = sub.marginal(&[1]).unwrap();
        assert!((m1.purity().unwrap() - b.purity()).abs() < 1e-12);
        let m0 = sub.marginal(&[0]).unwrap();
        let direct = subtract_photon(&a, &mode0(1)).unwrap();
        assert!((m0.purity().unwrap() - direct.purity().unwrap()).abs() < 1e-12);
        assert!((m0.total_probability().unwrap() - 1.0).abs() < 1e-12);
        let pt = [0.3, -0.2];
        assert!((m0.wigner_at(&pt).unwrap() - direct.wigner_at(&pt).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_row_rejected() {
        let row = BogoliubovRow::new(
            Complex64::new(1.0, 0.0),
            vec![Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0)],
            vec![1.0],
        )
        .unwrap();
        assert!(matches!(relative_purity_closed_form(&row), Err(Error::InconsistentRow(_))));
    }
}
