//! Seeded random Gaussian states and mode selectors.
//!
//! `V = S diag(n, n) Sᵀ` with `S = O₁ Z O₂`, where `O₁`, `O₂` are the orthogonal
//! symplectic images of Haar-random unitaries and `Z = diag(e^{r}, e^{−r})`. Squeezing
//! magnitudes are log-uniform so both near-identity and strongly squeezed rows occur.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, ModeSelector};

const MIN_SQUEEZING: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomRanges {
    /// Noise factors are uniform in `[1, n_max]`.
    pub n_max: f64,
    /// `|r|` is log-uniform in `[0.01, r_max]`.
    pub r_max: f64,
    /// Per-mode `|⟨â⟩|` is uniform in `[0, d_max]`.
    pub d_max: f64,
}

impl Default for RandomRanges {
    fn default() -> Self {
        Self { n_max: 5.0, r_max: 1.5, d_max: 5.0 }
    }
}

impl RandomRanges {
    fn validate(&self) -> Result<()> {
        if !(self.n_max >= 1.0 && self.r_max >= 0.0 && self.d_max >= 0.0)
            || ![self.n_max, self.r_max, self.d_max].iter().all(|v| v.is_finite())
        {
            return Err(Error::InvalidArgument(format!("invalid random ranges {self:?}")));
        }
        Ok(())
    }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of `diag(R)`
/// moved into `Q`.
pub(crate) fn haar_unitary(m: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(m, m, |_, _| complex_normal(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `u = X + iY ↦ [[X, −Y], [Y, X]]`.
pub(crate) fn unitary_to_orthogonal(u: &DMatrix<Complex64>) -> DMatrix<f64> {
    let m = u.nrows();
    DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let c = u[(i % m, j % m)];
        match (i < m, j < m) {
            (true, true) | (false, false) => c.re,
            (true, false) => -c.im,
            (false, true) => c.im,
        }
    })
}

fn sample_state(m: usize, rng: &mut ChaCha8Rng, ranges: &RandomRanges) -> Result<GaussianState> {
    ranges.validate()?;
    if m == 0 {
        return Err(Error::InvalidArgument("random state needs at least one mode".into()));
    }
    let noise: Vec<f64> = (0..m).map(|_| 1.0 + (ranges.n_max - 1.0) * rng.random::<f64>()).collect();
    let squeeze: Vec<f64> = (0..m)
        .map(|_| {
            let mag = if ranges.r_max > MIN_SQUEEZING {
                (MIN_SQUEEZING.ln() + (ranges.r_max / MIN_SQUEEZING).ln() * rng.random::<f64>()).exp()
            } else {
                ranges.r_max * rng.random::<f64>()
            };
            if rng.random::<bool>() { mag } else { -mag }
        })
        .collect();
    let o1 = unitary_to_orthogonal(&haar_unitary(m, rng));
    let o2 = unitary_to_orthogonal(&haar_unitary(m, rng));
    let z = DVector::from_iterator(2 * m, squeeze.iter().map(|r| r.exp()).chain(squeeze.iter().map(|r| (-r).exp())));
    let s = o1 * DMatrix::from_diagonal(&z) * o2;
    let n = DVector::from_iterator(2 * m, noise.iter().chain(&noise).copied());
    let v = &s * DMatrix::from_diagonal(&n) * s.transpose();
    let v = (&v + v.transpose()) * 0.5;
    let mut d = DVector::zeros(2 * m);
    for i in 0..m {
        let a = Complex64::from_polar(ranges.d_max * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>());
        d[i] = 2.0 * a.re;
        d[m + i] = 2.0 * a.im;
    }
    GaussianState::new(v, d)
}

/// Reproducible per `(m, seed, ranges)`.
pub fn random_state(m: usize, seed: u64, ranges: &RandomRanges) -> Result<GaussianState> {
    sample_state(m, &mut ChaCha8Rng::seed_from_u64(seed), ranges)
}

/// A Haar-random superposition mode `â_g = Σ u_i â_i`.
pub fn random_selector(m: usize, seed: u64) -> Result<ModeSelector> {
    sample_selector(m, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sample_selector(m: usize, rng: &mut ChaCha8Rng) -> Result<ModeSelector> {
    let u: Vec<Complex64> = (0..m).map(|_| complex_normal(rng)).collect();
    let norm = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    ModeSelector::from_amplitudes(&u.iter().map(|c| c / norm).collect::<Vec<_>>())
}

/// One entry of the fuzz corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzCase {
    pub index: u64,
    pub state: GaussianState,
    pub selector: ModeSelector,
}

/// Case `index` of the corpus for `seed`: 1 to 4 modes, and half of the cases subtract
/// from a random superposition mode instead of a single computational mode.
pub fn fuzz_case(seed: u64, index: u64, ranges: &RandomRanges) -> Result<FuzzCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let m = rng.random_range(1..=4);
    let state = sample_state(m, &mut rng, ranges)?;
    let selector = if rng.random::<bool>() {
        ModeSelector::computational(m, rng.random_range(0..m))?
    } else {
        sample_selector(m, &mut rng)?
    };
    Ok(FuzzCase { index, state, selector })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subtraction::{extract_bogoliubov, relative_purity_closed_form};

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(4, &mut rng);
        assert!((u.adjoint() * &u - DMatrix::<Complex64>::identity(4, 4)).iter().all(|c| c.norm() < 1e-12));
        let o = unitary_to_orthogonal(&u);
        let sym = crate::gaussian::SymplecticTransform::new(o.clone());
        assert!(sym.is_ok());
        assert!((o.transpose() * &o - DMatrix::<f64>::identity(8, 8)).amax() < 1e-12);
    }

    #[test]
    fn deterministic_and_physical() {
        let r = RandomRanges::default();
        for seed in 0..20 {
            let a = random_state(3, seed, &r).unwrap();
            assert_eq!(a, random_state(3, seed, &r).unwrap());
            a.check_physical().unwrap();
        }
        assert_ne!(random_state(2, 1, &r).unwrap(), random_state(2, 2, &r).unwrap());
    }

    #[test]
    fn pure_undisplaced_never_purifies() {
        let r = RandomRanges { n_max: 1.0, r_max: 1.5, d_max: 0.0 };
        for index in 0..200 {
            let case = fuzz_case(11, index, &r).unwrap();
            let ratio = relative_purity_closed_form(&extract_bogoliubov(&case.state, &case.selector).unwrap()).unwrap();
            assert!(ratio <= 1.0 + 1e-10, "case {index}: {ratio}");
        }
    }

    #[test]
    fn noise_factors_within_range() {
        let r = RandomRanges { n_max: 3.0, ..RandomRanges::default() };
        for seed in 0..10 {
            let n = random_state(2, seed, &r).unwrap().symplectic_eigenvalues().unwrap();
            assert!(n.iter().all(|&v| (1.0 - 1e-9..=3.0 + 1e-9).contains(&v)));
        }
    }
}
