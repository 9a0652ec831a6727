//! Turning a Gaussian state into a gate list that prepares it from vacuum.
//!
//! Thermal noise is purified with one ancilla per mixed Williamson mode, the Williamson
//! symplectic is split as `S = O₁ Z O₂` (Bloch–Messiah), and each passive `O` is written
//! as phase shifters and beamsplitters by Givens elimination of its unitary.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, Gate};
use crate::linalg::{omega, pick_from_projector, sorted_eigen, sqrt_spd};

/// `O = [[X, −Y], [Y, X]] ↦ u = X + iY`, the action `â → u â` of a passive transform.
pub(crate) fn passive_to_unitary(o: &DMatrix<f64>) -> DMatrix<Complex64> {
    let m = o.nrows() / 2;
    DMatrix::from_fn(m, m, |i, j| Complex64::new(o[(i, j)], o[(m + i, j)]))
}

fn phase_gates(modes: [usize; 2], phases: [f64; 2], out: &mut Vec<Gate>) {
    for (mode, theta) in modes.into_iter().zip(phases) {
        if theta.abs() > 1e-15 {
            out.push(Gate::PhaseRotation { mode, theta });
        }
    }
}

/// Gates for `w ∈ U(2)` on `(a, b)`, using `w = diag(e^{iα}, e^{iβ}) · B · diag(1, e^{iδ})`
/// with `B = [[c, s], [−s, c]]` the beamsplitter of transmittance `c²`.
fn two_mode_unitary_gates(w: [[Complex64; 2]; 2], a: usize, b: usize, out: &mut Vec<Gate>) {
    const TINY: f64 = 1e-12;
    let (c, s) = (w[0][0].norm(), w[0][1].norm());
    let alpha = if c > TINY { w[0][0].arg() } else { 0.0 };
    let (beta, delta) = if s > TINY {
        ((-w[1][0]).arg(), w[0][1].arg() - alpha)
    } else {
        (w[1][1].arg(), 0.0)
    };
    phase_gates([a, b], [0.0, delta], out);
    let transmittance = (c * c / (c * c + s * s)).clamp(0.0, 1.0);
    if transmittance < 1.0 - 1e-15 {
        out.push(Gate::Beamsplitter { mode_a: a, mode_b: b, transmittance });
    }
    phase_gates([a, b], [alpha, beta], out);
}

/// Gates whose combined action is `â → u â` on the listed modes, in application order.
pub(crate) fn unitary_to_gates(u: &DMatrix<Complex64>, modes: &[usize]) -> Vec<Gate> {
    let m = u.nrows();
    let mut w = u.clone();
    let mut rotations = Vec::new();
    for j in 0..m {
        for i in (j + 1..m).rev() {
            let (a, b) = (w[(i - 1, j)], w[(i, j)]);
            if b.norm() < 1e-15 {
                continue;
            }
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let t = [[a.conj() / r, b.conj() / r], [-b / r, a / r]];
            for col in 0..m {
                let (x, y) = (w[(i - 1, col)], w[(i, col)]);
                w[(i - 1, col)] = t[0][0] * x + t[0][1] * y;
                w[(i, col)] = t[1][0] * x + t[1][1] * y;
            }
            rotations.push((i - 1, i, t));
        }
    }
    // T_N ⋯ T_1 u = D, so u = T_1† ⋯ T_N† D: apply D first and T_1† last.
    let mut gates = Vec::new();
    for k in 0..m {
        let theta = w[(k, k)].arg();
        if theta.abs() > 1e-15 {
            gates.push(Gate::PhaseRotation { mode: modes[k], theta });
        }
    }
    for &(p, q, t) in rotations.iter().rev() {
        let dagger = [[t[0][0].conj(), t[1][0].conj()], [t[0][1].conj(), t[1][1].conj()]];
        two_mode_unitary_gates(dagger, modes[p], modes[q], &mut gates);
    }
    gates
}

/// `S = O₁ · diag(e^{r}, e^{−r}) · O₂` with `O₁`, `O₂` orthogonal symplectic.
pub(crate) struct BlochMessiah {
    pub o1: DMatrix<f64>,
    pub squeezing: Vec<f64>,
    pub o2: DMatrix<f64>,
}

pub(crate) fn bloch_messiah(s: &DMatrix<f64>) -> Result<BlochMessiah> {
    let m = s.nrows() / 2;
    let p = sqrt_spd(&(s.transpose() * s))?;
    let o = s * p.clone().try_inverse().ok_or_else(|| Error::Decomposition("singular polar factor".into()))?;
    let (values, vectors) = sorted_eigen(&p);
    let om_t = omega(m).transpose();
    const UNIT: f64 = 1e-9;

    let mut picked: Vec<(DVector<f64>, f64)> = Vec::with_capacity(m);
    let mut start = 0;
    while start < values.len() && values[start] > 1.0 + UNIT {
        let mut end = start + 1;
        while end < values.len() && (values[end] - values[start]).abs() <= UNIT * values[start] {
            end += 1;
        }
        let block = vectors.columns(start, end - start);
        let mut proj = block * block.transpose();
        for _ in start..end {
            let u = pick_from_projector(&proj)
                .ok_or_else(|| Error::Decomposition("squeezing eigenspace exhausted".into()))?;
            proj -= &u * u.transpose();
            picked.push((u, values[start]));
        }
        start = end;
    }
    let unit_end = (start..values.len()).find(|&i| values[i] < 1.0 - UNIT).unwrap_or(values.len());
    if (unit_end - start) % 2 != 0 {
        return Err(Error::Decomposition("odd unit eigenspace in Bloch–Messiah".into()));
    }
    let block = vectors.columns(start, unit_end - start);
    let mut proj = block * block.transpose();
    for _ in 0..(unit_end - start) / 2 {
        let u = pick_from_projector(&proj)
            .ok_or_else(|| Error::Decomposition("unit eigenspace exhausted".into()))?;
        let w = &om_t * &u;
        proj -= &u * u.transpose() + &w * w.transpose();
        picked.push((u, 1.0));
    }
    if picked.len() != m {
        return Err(Error::Decomposition(format!("paired {} of {m} modes", picked.len())));
    }
    let mut q = DMatrix::zeros(2 * m, 2 * m);
    for (i, (u, _)) in picked.iter().enumerate() {
        q.set_column(i, u);
        q.set_column(m + i, &(&om_t * u));
    }
    Ok(BlochMessiah {
        o1: o * &q,
        squeezing: picked.iter().map(|(_, l)| l.ln()).collect(),
        o2: q.transpose(),
    })
}

/// A gate list preparing a (purified) Gaussian state from vacuum.
#[derive(Debug, Clone)]
pub struct PreparationCircuit {
    /// Physical modes come first, ancillas after them.
    pub total_modes: usize,
    pub physical_modes: usize,
    pub gates: Vec<Gate>,
}

/// Williamson noise below `1 + this` needs no ancilla.
const PURE_TOLERANCE: f64 = 1e-12;

pub fn preparation_circuit(state: &GaussianState) -> Result<PreparationCircuit> {
    let m = state.mode_count();
    let w = state.williamson()?;
    let mut gates = Vec::new();
    let mut total = m;
    for (i, &n) in w.noise_factors.iter().enumerate() {
        if n > 1.0 + PURE_TOLERANCE {
            gates.push(Gate::TwoModeSqueezer { mode_a: i, mode_b: total, r: n.acosh() / 2.0 });
            total += 1;
        }
    }
    let bm = bloch_messiah(w.symplectic.matrix())?;
    let physical: Vec<usize> = (0..m).collect();
    gates.extend(unitary_to_gates(&passive_to_unitary(&bm.o2), &physical));
    for (i, &r) in bm.squeezing.iter().enumerate() {
        if r.abs() > 1e-15 {
            gates.push(Gate::Squeezer { mode: i, r });
        }
    }
    gates.extend(unitary_to_gates(&passive_to_unitary(&bm.o1), &physical));
    let alpha = state.displacement();
    for i in 0..m {
        let (re, im) = (alpha[i] / 2.0, alpha[m + i] / 2.0);
        if re != 0.0 || im != 0.0 {
            gates.push(Gate::Displacement { mode: i, re, im });
        }
    }
    Ok(PreparationCircuit { total_modes: total, physical_modes: m, gates })
}
