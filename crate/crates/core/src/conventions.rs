//! Units and conventions shared by every module.
//!
//! * Quadratures are `x̂ = â† + â` and `p̂ = i(â† − â)`, so the vacuum covariance is the
//!   identity and `[x̂, p̂] = 2i`.
//! * Phase-space vectors are ordered `(x₁ … x_m, p₁ … p_m)`.
//! * A phase-space displacement entry pair is `(2 Re⟨â⟩, 2 Im⟨â⟩)`. Complex amplitudes
//!   `⟨â⟩` appear only in [`BogoliubovRow`](crate::subtraction::BogoliubovRow) and in
//!   displacement gates; [`amplitude_to_phase_space`] and [`phase_space_to_amplitude`]
//!   are the only conversions.
//! * Single-mode squeezing in dB uses the power rule `s = 10^(dB/10)`, `r = ln(s)/2`, and
//!   acts as `x → √s x`, `p → p/√s`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance on symplectic eigenvalues below one before a state is rejected.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Relative tolerance on the symmetry of covariance matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Tolerance on `S Ω Sᵀ = Ω`, relative to `max(1, ‖S‖²)`.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-10;

/// How a squeezing figure quoted in dB maps onto the squeezing parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DbRule {
    /// `s = 10^(dB/10)`, `r = ln(s)/2`: the variance ratio is `s`.
    Power,
    /// `s = 10^(dB/20)`, `r = ln(s)/2`: half the exponent of the power rule.
    Amplitude,
}

impl DbRule {
    pub fn factor(self, db: f64) -> f64 {
        match self {
            DbRule::Power => 10f64.powf(db / 10.0),
            DbRule::Amplitude => 10f64.powf(db / 20.0),
        }
    }

    pub fn squeezing_parameter(self, db: f64) -> f64 {
        self.factor(db).ln() / 2.0
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DbRule::Power => "power",
            DbRule::Amplitude => "amplitude",
        }
    }
}

impl std::str::FromStr for DbRule {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power" => Ok(DbRule::Power),
            "amplitude" => Ok(DbRule::Amplitude),
            other => Err(crate::Error::Parse(format!("unknown dB rule '{other}'"))),
        }
    }
}

/// Squeezing factor `s = 10^(dB/10)` for single-mode squeezers.
pub fn db_to_factor(db: f64) -> f64 {
    DbRule::Power.factor(db)
}

/// Squeezing parameter `r = ln(s)/2` for single-mode squeezers.
pub fn db_to_squeezing_parameter(db: f64) -> f64 {
    DbRule::Power.squeezing_parameter(db)
}

/// Phase-space displacement pair `(2 Re a, 2 Im a)` for a complex amplitude `a = ⟨â⟩`.
pub fn amplitude_to_phase_space(amplitude: Complex64) -> (f64, f64) {
    (2.0 * amplitude.re, 2.0 * amplitude.im)
}

pub fn phase_space_to_amplitude(x: f64, p: f64) -> Complex64 {
    Complex64::new(x / 2.0, p / 2.0)
}

/// One-line summary embedded in output headers.
pub fn describe() -> String {
    "quadrature=x:a+a^dag,p:i(a^dag-a);vacuum_cov=identity;order=xx..pp;\
     displacement=(2Re<a>,2Im<a>);single_mode_db=power(s=10^(dB/10),r=ln(s)/2)"
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_db_is_factor_ten() {
        assert!((db_to_factor(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_squeezing_parameter(10.0) - 10f64.ln() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn amplitude_rule_halves_parameter() {
        let p = DbRule::Power.squeezing_parameter(3.0);
        let a = DbRule::Amplitude.squeezing_parameter(3.0);
        assert!((p - 2.0 * a).abs() < 1e-15);
    }

    #[test]
    fn displacement_round_trip() {
        let a = Complex64::new(6.0, -1.5);
        let (x, p) = amplitude_to_phase_space(a);
        assert_eq!((x, p), (12.0, -3.0));
        assert_eq!(phase_space_to_amplitude(x, p), a);
    }
}
