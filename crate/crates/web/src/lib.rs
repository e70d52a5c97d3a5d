//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every function takes plain numbers and returns a JSON string, so the page
//! needs no generated type glue beyond `JSON.parse`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use tiltperc::bounds::bounds_report;
use tiltperc::lambda::{surface_field, Window};
use tiltperc::mc::{estimate_pc, PcOptions};
use tiltperc::stats::ReplicaPlan;
use tiltperc::{Alpha, ConfigField, FloorSpec, TiltSpec};

fn fail(e: impl ToString) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn plane(alpha: &str, d: usize, k: usize) -> Result<FloorSpec, JsValue> {
    let a: Alpha = alpha.parse().map_err(fail)?;
    Ok(FloorSpec::plane(TiltSpec::canonical(a, d, k).map_err(fail)?))
}

/// All bounds for `(alpha, d, k)`; `alpha` is a rational such as `"1/2"`.
#[wasm_bindgen]
pub fn bounds(alpha: &str, d: usize, k: usize) -> Result<String, JsValue> {
    let a: Alpha = alpha.parse().map_err(fail)?;
    let rep = bounds_report(a, d, k).map_err(fail)?;
    Ok(json!({
        "entries": rep.entries,
        "max_exact_lower": rep.max_exact_lower(),
        "min_exact_upper": rep.min_exact_upper(),
    })
    .to_string())
}

/// `F_R` over the columns of a one-dimensional window, with the floor.
#[wasm_bindgen]
pub fn surface_1d(alpha: &str, q: f64, seed: u32, radius: i32, height_cap: i32) -> Result<String, JsValue> {
    let floor = plane(alpha, 1, 1)?;
    let w = Window::new(radius.into(), height_cap.into()).map_err(fail)?;
    let sf = surface_field(&ConfigField::new(q, seed as u64), &floor, &w).map_err(fail)?;
    let xs: Vec<i64> = (0..sf.len()).map(|i| sf.bar(i)[0]).collect();
    Ok(json!({
        "x": xs,
        "floor": sf.floors,
        "height": sf.heights,
        "capped": sf.capped,
        "diverged": sf.diverged,
    })
    .to_string())
}

/// Proxy threshold estimate on a small window.
#[wasm_bindgen]
pub fn estimate(alpha: &str, d: usize, radius: i32, replicas: usize, seed: u32) -> Result<String, JsValue> {
    let floor = plane(alpha, d, d)?;
    let w = Window::new(radius.into(), 2 * i64::from(radius)).map_err(fail)?;
    let opts = PcOptions {
        resolution: 1.0 / 512.0,
        ..PcOptions::default()
    };
    let est = estimate_pc(&floor, &w, &ReplicaPlan::new(replicas, seed as u64), &opts).map_err(fail)?;
    Ok(json!({
        "q_hat": est.ci.point,
        "lo": est.ci.lo,
        "hi": est.ci.hi,
        "h_star": est.h_star,
        "censored": est.ci.censored_count,
    })
    .to_string())
}
