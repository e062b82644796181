//! Browser bindings for the static demo page in `www/`.
//!
//! Each export takes plain numbers or a JSON string and returns a JSON
//! string, so the page needs no generated glue beyond wasm-bindgen's.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use optdesign::bounds::{k_factor, lambda_factor, m_interp, m_taylor};
use optdesign::designs::{build_design, chebyshev_knots, DesignSpace};
use optdesign::mc::TestFunction;
use optdesign::numeric::uniform_grid;
use optdesign::polybasis::{equidistant_knots, LagrangeBasis};

const MAX_DEGREE: usize = 60;

#[derive(Debug, Serialize)]
pub struct InterpolationCurves {
    pub x: Vec<f64>,
    pub truth: Vec<f64>,
    pub chebyshev: Vec<f64>,
    pub equidistant: Vec<f64>,
    pub chebyshev_knots: Vec<f64>,
    pub equidistant_knots: Vec<f64>,
    pub chebyshev_error: f64,
    pub equidistant_error: f64,
}

fn interpolant(knots: &[f64], phi: &TestFunction, xs: &[f64]) -> Result<Vec<f64>, String> {
    let basis = LagrangeBasis::new(knots).map_err(|e| e.to_string())?;
    let values: Vec<f64> = knots.iter().map(|&s| phi.value(s)).collect();
    let mut buf = vec![0.0; knots.len()];
    Ok(xs
        .iter()
        .map(|&x| {
            basis.values_at(x, &mut buf);
            buf.iter().zip(&values).map(|(b, v)| b * v).sum()
        })
        .collect())
}

/// Interpolates the Runge function `1 / (1 + (c x)^2)` on `[-1, 1]` with
/// Chebyshev and with equispaced knots of degree `l`.
pub fn runge_curves(l: usize, scale: f64, points: usize) -> Result<InterpolationCurves, String> {
    if l > MAX_DEGREE {
        return Err(format!("degree is capped at {MAX_DEGREE}"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err("scale must be positive".into());
    }
    let phi = TestFunction::Runge { scale };
    let x: Vec<f64> = uniform_grid(-1.0, 1.0, points.clamp(2, 4000)).collect();
    let truth: Vec<f64> = x.iter().map(|&v| phi.value(v)).collect();
    let ck = chebyshev_knots(l, -1.0, 1.0).map_err(|e| e.to_string())?;
    let ek = equidistant_knots(l, -1.0, 1.0).map_err(|e| e.to_string())?;
    let chebyshev = interpolant(&ck, &phi, &x)?;
    let equidistant = interpolant(&ek, &phi, &x)?;
    let sup = |fit: &[f64]| fit.iter().zip(&truth).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(InterpolationCurves {
        chebyshev_error: sup(&chebyshev),
        equidistant_error: sup(&equidistant),
        x,
        truth,
        chebyshev,
        equidistant,
        chebyshev_knots: ck,
        equidistant_knots: ek,
    })
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct DesignRequest {
    pub space: DesignSpace,
    pub l: usize,
    pub m: usize,
    pub n: usize,
}

pub fn design_json(request: &str) -> Result<String, String> {
    let req: DesignRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    req.space.validate().map_err(|e| e.to_string())?;
    if req.l > MAX_DEGREE {
        return Err(format!("degree is capped at {MAX_DEGREE}"));
    }
    let design = build_design(&req.space, req.l, req.m, req.n).map_err(|e| e.to_string())?;
    serde_json::to_string(&design).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct BoundRequest {
    pub space: DesignSpace,
    pub m: usize,
    pub alpha: usize,
    /// Bound on `|phi|`.
    pub r: f64,
    pub l_max: usize,
}

#[derive(Debug, Serialize)]
pub struct BoundCurves {
    pub l: Vec<usize>,
    pub m_interp: Vec<f64>,
    pub lambda: Vec<f64>,
    pub k_factor: Vec<f64>,
    /// Truncation term, constant in `l`.
    pub m_taylor: f64,
}

/// Deterministic bound terms and the noise amplification `Lambda` as the
/// degree grows, for a fixed Taylor order.
pub fn bound_curves(request: &BoundRequest) -> Result<BoundCurves, String> {
    let s = &request.space;
    s.validate().map_err(|e| e.to_string())?;
    if request.m == 0 || request.l_max > MAX_DEGREE {
        return Err(format!("need m >= 1 and l_max <= {MAX_DEGREE}"));
    }
    let ls: Vec<usize> = (0..=request.l_max).collect();
    let lambda = ls
        .iter()
        .map(|&l| {
            let knots = chebyshev_knots(l, s.s_lo, s.s_hi).map_err(|e| e.to_string())?;
            lambda_factor(&knots, request.m, s.d, s.s_star, s.target).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoundCurves {
        m_interp: ls
            .iter()
            .map(|&l| m_interp(request.r, s.d, request.m, l, request.alpha, s.s_lo, s.s_hi, s.s_star, s.target))
            .collect(),
        k_factor: ls.iter().map(|&l| k_factor(l, request.alpha)).collect(),
        m_taylor: m_taylor(request.r, s.d, request.m, s.s_star, s.target, s.a, s.b),
        lambda,
        l: ls,
    })
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn runge(l: usize, scale: f64, points: usize) -> Result<String, JsValue> {
    to_js(runge_curves(l, scale, points))
}

#[wasm_bindgen]
pub fn design(request: &str) -> Result<String, JsValue> {
    design_json(request).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bounds(request: &str) -> Result<String, JsValue> {
    let req: Result<BoundRequest, String> = serde_json::from_str(request).map_err(|e| e.to_string());
    to_js(req.and_then(|r| bound_curves(&r)))
}
