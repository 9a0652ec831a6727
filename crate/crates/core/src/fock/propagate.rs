//! `exp(G)ψ` for ladder-operator generators on a truncated product basis.
//!
//! The action is computed by Taylor series over adaptively sized sub-steps, never by
//! forming the matrix exponential, so memory stays at a few state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::Gate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// `Σ coeff · (ops applied left to right in the vector)` i.e. `ops[0]` acts first.
#[derive(Debug, Clone)]
pub(crate) struct Generator {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl Generator {
    /// Anti-Hermitian generator `G` with `Û = exp(G)` for every gate except the phase
    /// rotation, which is diagonal and applied directly.
    pub(crate) fn for_gate(gate: &Gate) -> Option<Self> {
        use Ladder::*;
        let c = |x: f64| Complex64::new(x, 0.0);
        let terms = match *gate {
            Gate::PhaseRotation { .. } => return None,
            Gate::Displacement { mode, re, im } => {
                let g = Complex64::new(re, im);
                vec![(g, vec![Create(mode)]), (-g.conj(), vec![Annihilate(mode)])]
            }
            Gate::Squeezer { mode, r } => vec![
                (c(r / 2.0), vec![Create(mode), Create(mode)]),
                (c(-r / 2.0), vec![Annihilate(mode), Annihilate(mode)]),
            ],
            Gate::TwoModeSqueezer { mode_a, mode_b, r } => vec![
                (c(r), vec![Create(mode_a), Create(mode_b)]),
                (c(-r), vec![Annihilate(mode_a), Annihilate(mode_b)]),
            ],
            Gate::Beamsplitter { mode_a, mode_b, transmittance } => {
                let theta = transmittance.sqrt().clamp(0.0, 1.0).acos();
                vec![
                    // θ(â†b̂ − âb̂†)
                    (c(theta), vec![Annihilate(mode_b), Create(mode_a)]),
                    (c(-theta), vec![Create(mode_b), Annihilate(mode_a)]),
                ]
            }
        };
        Some(Self { terms })
    }
}

/// Row-major strides with mode 0 varying slowest.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

pub(crate) fn apply_ladder(dims: &[usize], op: Ladder, psi: &[Complex64]) -> Vec<Complex64> {
    let st = strides(dims);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    match op {
        Ladder::Annihilate(k) => {
            let (s, d) = (st[k], dims[k]);
            for (i, &v) in psi.iter().enumerate() {
                let n = (i / s) % d;
                if n > 0 && v != Complex64::new(0.0, 0.0) {
                    out[i - s] = v * (n as f64).sqrt();
                }
            }
        }
        Ladder::Create(k) => {
            let (s, d) = (st[k], dims[k]);
            for (i, &v) in psi.iter().enumerate() {
                let n = (i / s) % d;
                if n + 1 < d && v != Complex64::new(0.0, 0.0) {
                    out[i + s] = v * ((n + 1) as f64).sqrt();
                }
            }
        }
    }
    out
}

fn apply_generator(gen: &Generator, dims: &[usize], psi: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (coeff, ops) in &gen.terms {
        let mut tmp = apply_ladder(dims, ops[0], psi);
        for &op in &ops[1..] {
            tmp = apply_ladder(dims, op, &tmp);
        }
        for (o, t) in out.iter_mut().zip(&tmp) {
            *o += coeff * t;
        }
    }
    out
}

pub(crate) fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// One Taylor step `exp(hG)ψ`; `None` if terms grow enough to lose precision or the
/// series has not converged after 60 terms.
fn taylor_step(gen: &Generator, dims: &[usize], psi: &[Complex64], h: f64) -> Option<Vec<Complex64>> {
    let base = norm(psi);
    let mut term = psi.to_vec();
    let mut acc = psi.to_vec();
    for k in 1..=60 {
        term = apply_generator(gen, dims, &term);
        let scale = h / k as f64;
        term.iter_mut().for_each(|t| *t *= scale);
        let tn = norm(&term);
        if tn > 1e2 * base {
            return None;
        }
        acc.iter_mut().zip(&term).for_each(|(a, t)| *a += t);
        if tn <= 1e-17 * base {
            return Some(acc);
        }
    }
    None
}

pub(crate) fn expm_action(gen: &Generator, dims: &[usize], psi: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let base = norm(&psi);
    if base == 0.0 {
        return Ok(psi);
    }
    let rate = norm(&apply_generator(gen, dims, &psi)) / base;
    let mut h = if rate > 0.0 { (2.0 / rate).min(1.0) } else { 1.0 };
    let mut remaining = 1.0f64;
    let mut psi = psi;
    while remaining > 1e-15 {
        let step = h.min(remaining);
        match taylor_step(gen, dims, &psi, step) {
            Some(next) => {
                psi = next;
                remaining -= step;
                h = step * 1.5;
            }
            None => {
                h = step / 2.0;
                if h < 1e-9 {
                    return Err(Error::NumericDegenerate("Taylor propagation failed to converge".into()));
                }
            }
        }
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vacuum(d: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn squeezed_vacuum_amplitudes() {
        // ⟨2n|S(r)|0⟩ = tanh(r)^n √((2n)!) / (2^n n!) / √cosh r
        let r: f64 = 0.8;
        let d = 120;
        let gen = Generator::for_gate(&Gate::Squeezer { mode: 0, r }).unwrap();
        let psi = expm_action(&gen, &[d], vacuum(d)).unwrap();
        let mut log_fact = vec![0.0f64; 2 * 30 + 1];
        for i in 1..log_fact.len() {
            log_fact[i] = log_fact[i - 1] + (i as f64).ln();
        }
        for n in 0..30usize {
            let expected = (n as f64 * r.tanh().ln() + 0.5 * log_fact[2 * n]
                - n as f64 * 2f64.ln()
                - log_fact[n]
                - 0.5 * r.cosh().ln())
            .exp();
            assert!((psi[2 * n].re - expected).abs() < 1e-12, "n={n}");
            assert!(psi[2 * n].im.abs() < 1e-12 && psi[2 * n + 1].norm() < 1e-12);
        }
    }

    #[test]
    fn displacement_is_coherent() {
        let d = 80;
        let g = Complex64::new(1.2, -0.7);
        let gen = Generator::for_gate(&Gate::displacement(0, g)).unwrap();
        let psi = expm_action(&gen, &[d], vacuum(d)).unwrap();
        let mut coeff = Complex64::new((-g.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..40 {
            assert!((psi[n] - coeff).norm() < 1e-12);
            coeff = coeff * g / ((n + 1) as f64).sqrt();
        }
    }

    #[test]
    fn strides_row_major() {
        assert_eq!(strides(&[3, 4, 5]), vec![20, 5, 1]);
    }
}
