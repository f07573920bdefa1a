//! Browser bindings: q-expansions, the completed integral `Z(Δ; s)` along
//! the real line, and multiple zeta values.
//!
//! Each export wraps a plain function so the same code runs in native tests.

use moditer_core::forms::BuiltinForm;
use moditer_core::iterint::{completed_z, IterSpec};
use moditer_core::mzv::{mzv_modular_integral, mzv_p1_integral, mzv_series, MzvIndex};
use moditer_core::qseries::{builtin_form, BuiltinSeries};
use moditer_core::quad::NumericsConfig;
use moditer_core::C64;
use wasm_bindgen::prelude::*;

const MAX_ORDER: usize = 500;
const MAX_STEPS: usize = 400;

/// Coefficients of a named series as strings (integers or `p/q`).
pub fn qexp_coefficients(name: &str, order: usize) -> Result<Vec<String>, String> {
    if order > MAX_ORDER {
        return Err(format!("order is capped at {MAX_ORDER}"));
    }
    let which = BuiltinSeries::parse(name).map_err(|e| e.to_string())?;
    let s = builtin_form(which, order).map_err(|e| e.to_string())?;
    Ok(s.coeffs().iter().map(|c| c.to_string()).collect())
}

/// `[s, Re Z, Im Z, ...]` for `Z(Δ; s)` at `steps` evenly spaced real `s`.
pub fn z_curve(s_min: f64, s_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    if !(s_min < s_max) || !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("need s_min < s_max and 2 <= steps <= {MAX_STEPS}"));
    }
    let cfg = NumericsConfig::default();
    let delta = BuiltinForm::Delta.build(cfg.order + 1).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * steps);
    for i in 0..steps {
        let s = s_min + (s_max - s_min) * i as f64 / (steps - 1) as f64;
        let spec = IterSpec::forms(std::slice::from_ref(&delta), &[C64::new(s, 0.0)]).map_err(|e| e.to_string())?;
        let z = completed_z(&spec, &cfg).map_err(|e| e.to_string())?.value;
        out.extend([s, z.re, z.im]);
    }
    Ok(out)
}

/// `ζ(k_1, ..., k_d)` by `series`, `p1` or `modular`.
pub fn mzv_value(index: &str, method: &str) -> Result<f64, String> {
    let idx: MzvIndex = index.parse().map_err(|e: moditer_core::Error| e.to_string())?;
    if idx.weight() > 12 {
        return Err("weight is capped at 12 in the demo".into());
    }
    match method {
        "series" => mzv_series(&idx, 200_000),
        "p1" => mzv_p1_integral(&idx),
        "modular" => mzv_modular_integral(&idx, &NumericsConfig::default()),
        other => return Err(format!("unknown method '{other}'")),
    }
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn qexp(name: &str, order: usize) -> Result<Vec<String>, JsError> {
    qexp_coefficients(name, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = zCurve)]
pub fn z_curve_js(s_min: f64, s_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    z_curve(s_min, s_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mzv(index: &str, method: &str) -> Result<f64, JsError> {
    mzv_value(index, method).map_err(|e| JsError::new(&e))
}
