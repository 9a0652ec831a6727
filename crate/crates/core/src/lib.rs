//! Single-photon subtraction on multimode Gaussian states.
//!
//! The crate works in the covariance-matrix formalism (vacuum covariance = identity,
//! see [`conventions`]) and answers one question: by how much does subtracting a single
//! photon from a Gaussian state change its purity?
//!
//! * [`gaussian`] holds Gaussian states, symplectic gates and the Williamson decomposition.
//! * [`subtraction`] builds the photon-subtracted Wigner function (a quadratic polynomial
//!   times the Gaussian), extracts the Bogoliubov row of the subtracted mode, and
//!   evaluates the relative purity both in closed form and by exact Gaussian moments.
//! * [`bounds`] evaluates the purification conditions, the reachable envelope `f(α)`,
//!   its maximum and the `ζ` bound (all strictly below 1.2).
//! * [`fock`] and [`quadrature`] are independent numerical oracles: truncated Fock-space
//!   simulation and phase-space grid integration.
//! * [`scenarios`] builds the single-mode and three-mode examples, seeded random
//!   states and parameter sweeps.
//!
//! ```
//! use ps_purify::scenarios::single_mode_family;
//! use ps_purify::gaussian::ModeSelector;
//! use ps_purify::subtraction::{extract_bogoliubov, relative_purity_closed_form};
//!
//! let state = single_mode_family(10.0, 10.0, 6.0, 0.0).unwrap();
//! let row = extract_bogoliubov(&state, &ModeSelector::computational(1, 0).unwrap()).unwrap();
//! let ratio = relative_purity_closed_form(&row).unwrap();
//! assert!((ratio - 1.1967).abs() < 5e-4);
//! ```

pub mod bounds;
pub mod conventions;
pub mod error;
pub mod fock;
pub mod gaussian;
mod linalg;
pub mod moments;
pub mod quadrature;
pub mod scenarios;
pub mod subtraction;

pub use error::{Error, Result};
