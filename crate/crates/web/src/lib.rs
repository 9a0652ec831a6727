//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions return `Result<_, String>` so they can be tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors into JavaScript exceptions.

use ps_purify::bounds::purification_conditions;
use ps_purify::gaussian::{GaussianState, ModeSelector};
use ps_purify::scenarios::single_mode_family;
use ps_purify::subtraction::{extract_bogoliubov, relative_purity_closed_form, subtract_photon};
use wasm_bindgen::prelude::*;

fn state(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64) -> Result<GaussianState, String> {
    single_mode_family(n_g, s_db, alpha_mag, phi).map_err(|e| e.to_string())
}

fn selector() -> ModeSelector {
    ModeSelector::computational(1, 0).expect("one mode")
}

/// Ratio and envelope `f(α)` at `points` phases spread evenly over `[0, π]`,
/// interleaved as `[phi, ratio, f_alpha, phi, ...]`.
pub fn ratio_curve(n_g: f64, s_db: f64, alpha_mag: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least two points".into());
    }
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let phi = std::f64::consts::PI * i as f64 / (points - 1) as f64;
        let row = extract_bogoliubov(&state(n_g, s_db, alpha_mag, phi)?, &selector()).map_err(|e| e.to_string())?;
        let ratio = relative_purity_closed_form(&row).map_err(|e| e.to_string())?;
        let report = purification_conditions(&row).map_err(|e| e.to_string())?;
        out.extend([phi, ratio, report.f_alpha]);
    }
    Ok(out)
}

/// Wigner functions before and after subtraction on a square grid of `points²` samples
/// spanning `±half_width` standard deviations around the mean.
#[wasm_bindgen]
pub struct WignerMaps {
    points: usize,
    bounds: Vec<f64>,
    gaussian: Vec<f64>,
    subtracted: Vec<f64>,
}

#[wasm_bindgen]
impl WignerMaps {
    #[wasm_bindgen(getter)]
    pub fn points(&self) -> usize {
        self.points
    }

    /// `[q_min, q_max, p_min, p_max]`
    #[wasm_bindgen(getter)]
    pub fn bounds(&self) -> Vec<f64> {
        self.bounds.clone()
    }

    /// Row-major with `p` varying slowest.
    #[wasm_bindgen(getter)]
    pub fn gaussian(&self) -> Vec<f64> {
        self.gaussian.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn subtracted(&self) -> Vec<f64> {
        self.subtracted.clone()
    }
}

pub fn wigner_maps(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64, points: usize, half_width: f64) -> Result<WignerMaps, String> {
    if points < 2 || !(half_width > 0.0) {
        return Err("grid needs at least two points and a positive width".into());
    }
    let st = state(n_g, s_db, alpha_mag, phi)?;
    let sub = subtract_photon(&st, &selector()).map_err(|e| e.to_string())?;
    let (v, d) = (st.covariance(), st.displacement());
    let hq = half_width * v[(0, 0)].sqrt();
    let hp = half_width * v[(1, 1)].sqrt();
    let bounds = vec![d[0] - hq, d[0] + hq, d[1] - hp, d[1] + hp];
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (points - 1) as f64;
    let mut gaussian = Vec::with_capacity(points * points);
    let mut subtracted = Vec::with_capacity(points * points);
    for j in 0..points {
        let p = step(bounds[2], bounds[3], j);
        for i in 0..points {
            let pt = [step(bounds[0], bounds[1], i), p];
            gaussian.push(st.wigner_at(&pt).map_err(|e| e.to_string())?);
            subtracted.push(sub.wigner_at(&pt).map_err(|e| e.to_string())?);
        }
    }
    Ok(WignerMaps { points, bounds, gaussian, subtracted })
}

/// Ratio, purities and the full bound report for one state, as JSON.
pub fn bound_report(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64) -> Result<String, String> {
    let st = state(n_g, s_db, alpha_mag, phi)?;
    let row = extract_bogoliubov(&st, &selector()).map_err(|e| e.to_string())?;
    let ratio = relative_purity_closed_form(&row).map_err(|e| e.to_string())?;
    let report = purification_conditions(&row).map_err(|e| e.to_string())?;
    let doc = serde_json::json!({
        "ratio": ratio,
        "purity_before": st.purity(),
        "purity_after": ratio * st.purity(),
        "bounds": report,
    });
    Ok(doc.to_string())
}

#[wasm_bindgen(js_name = ratioCurve)]
pub fn ratio_curve_js(n_g: f64, s_db: f64, alpha_mag: f64, points: usize) -> Result<Vec<f64>, JsError> {
    ratio_curve(n_g, s_db, alpha_mag, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = wignerMaps)]
pub fn wigner_maps_js(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64, points: usize, half_width: f64) -> Result<WignerMaps, JsError> {
    wigner_maps(n_g, s_db, alpha_mag, phi, points, half_width).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = boundReport)]
pub fn bound_report_js(n_g: f64, s_db: f64, alpha_mag: f64, phi: f64) -> Result<String, JsError> {
    bound_report(n_g, s_db, alpha_mag, phi).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_starts_at_the_reference_state() {
        let c = ratio_curve(10.0, 10.0, 6.0, 5).unwrap();
        assert_eq!(c.len(), 15);
        assert_eq!(c[0], 0.0);
        assert!((c[1] - 1.1967).abs() < 5e-4);
        assert!(c.chunks(3).all(|r| r[1] <= r[2] + 1e-9));
    }

    #[test]
    fn maps_have_requested_shape_and_unit_mass() {
        let m = wigner_maps(2.0, 3.0, 1.0, 0.3, 81, 6.0).unwrap();
        assert_eq!(m.gaussian.len(), 81 * 81);
        let cell = (m.bounds[1] - m.bounds[0]) * (m.bounds[3] - m.bounds[2]) / 80.0 / 80.0;
        let mass: f64 = m.subtracted.iter().sum::<f64>() * cell;
        assert!((mass - 1.0).abs() < 1e-2, "{mass}");
    }

    #[test]
    fn report_is_json_and_rejects_bad_input() {
        let v: serde_json::Value = serde_json::from_str(&bound_report(10.0, 10.0, 6.0, 0.0).unwrap()).unwrap();
        assert_eq!(v["bounds"]["purifiable"], true);
        assert!(bound_report(0.5, 10.0, 6.0, 0.0).is_err());
        assert!(wigner_maps(1.0, 0.0, 0.0, 0.0, 1, 5.0).is_err());
    }
}
