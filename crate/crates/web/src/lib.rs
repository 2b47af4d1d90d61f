//! wasm-bindgen surface for the browser page in `www/`.
//!
//! Three operations: a slice of a state's characteristic function, the
//! optimized swapping fidelity as a function of `r₁₂`, and one full
//! optimization report.

use std::f64::consts::PI;

use cvswap::optimizer::{optimize, Scenario};
use cvswap::states::{preset_params, sb_cf, Family, SqueezedBellParams};
use cvswap::swapping::ApparatusParams;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn family(name: &str) -> Result<Family, JsValue> {
    name.parse().map_err(js_err)
}

fn apparatus(lossy: bool) -> ApparatusParams {
    if lossy {
        ApparatusParams::lossy_reference()
    } else {
        ApparatusParams::ideal()
    }
}

fn state(kind: Family, r: f64, delta: f64) -> cvswap::Result<SqueezedBellParams> {
    match kind {
        Family::SB => SqueezedBellParams::new(r, PI, delta, 0.0),
        other => preset_params(other, r, PI),
    }
}

/// Real part of `χ(x₁, 0, x₂, 0)` on an `n x n` grid over `[-extent, extent]²`,
/// row-major with `x₁` along rows.
#[wasm_bindgen]
pub fn cf_slice(kind: &str, r: f64, delta: f64, extent: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    if n < 2 || n > 400 || !(extent > 0.0) {
        return Err(js_err("need 2 <= n <= 400 and a positive extent"));
    }
    let cf = sb_cf(&state(family(kind)?, r, delta).map_err(js_err)?).map_err(js_err)?;
    let step = 2.0 * extent / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = [-extent + i as f64 * step, 0.0, -extent + j as f64 * step, 0.0];
            out.push(cf.eval_unchecked(&z).re);
        }
    }
    Ok(out)
}

/// Optimized fidelity at `points` evenly spaced `r₁₂ ∈ [0, r_max]`; NaN where
/// the optimization fails.
#[wasm_bindgen]
pub fn fidelity_curve(input: &str, resource: &str, r34: f64, lossy: bool, r_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    let (a, b) = (family(input)?, family(resource)?);
    if points < 2 || points > 200 {
        return Err(js_err("need 2 <= points <= 200"));
    }
    Ok((0..points)
        .map(|i| {
            let r12 = r_max * i as f64 / (points - 1) as f64;
            let s = Scenario::new(a, b, r12, r34).with_apparatus(apparatus(lossy));
            optimize(&s).map_or(f64::NAN, |rep| rep.best_fidelity)
        })
        .collect())
}

/// Full optimization report as JSON.
#[wasm_bindgen]
pub fn optimize_json(input: &str, resource: &str, r12: f64, r34: f64, lossy: bool) -> Result<String, JsValue> {
    let s = Scenario::new(family(input)?, family(resource)?, r12, r34).with_apparatus(apparatus(lossy));
    let rep = optimize(&s).map_err(js_err)?;
    serde_json::to_string_pretty(&rep).map_err(js_err)
}
