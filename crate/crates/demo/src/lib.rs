//! Browser bindings: each export takes and returns JSON strings so the page
//! needs no generated types.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use toroidal_core::bigcell::{Calculus, CalculusError, MixedPoint};
use toroidal_core::lattice::{IntVector, Matrix, Rat};
use toroidal_core::polyhedral::{Cone, Fan, FanSpec};
use toroidal_core::report;
use toroidal_core::root_datum::{RootDatum, RootDatumSpec};
use toroidal_core::toric::ChartPoint;

fn error(msg: impl ToString) -> String {
    json!({"error": msg.to_string()}).to_string()
}

/// Dual cone, Hilbert basis, faces and lattice index of a cone given as a
/// JSON ray list such as `[[1,0],[1,2]]`.
#[wasm_bindgen]
pub fn cone_summary(rays_json: &str) -> String {
    let rays: Vec<IntVector> = match serde_json::from_str(rays_json) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let Some(dim) = rays.first().map(Vec::len) else {
        return error("give at least one ray");
    };
    let cone = match Cone::new(dim, &rays) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    json!({
        "rays": cone.rays(),
        "dual": cone.dual_generators(),
        "hilbert_basis": cone.hilbert().elements(),
        "faces": cone.faces().iter().map(|f| f.rays().to_vec()).collect::<Vec<_>>(),
        "index": cone.lattice_index(),
        "smooth": cone.is_smooth(),
    })
    .to_string()
}

/// Maximal cones of `W·Σ` and whether they cover `N_ℝ`. The root datum is
/// `{"type": "A", "rank": 2}` or a Cartan matrix; the fan is
/// `{"cones": [{"rays": [...]}, ...]}`.
#[wasm_bindgen]
pub fn weyl_orbit(root_datum_json: &str, fan_json: &str) -> String {
    let rd = match serde_json::from_str::<RootDatumSpec>(root_datum_json)
        .map_err(|e| e.to_string())
        .and_then(|s| RootDatum::from_spec(&s).map_err(|e| e.to_string()))
    {
        Ok(rd) => rd,
        Err(e) => return error(e),
    };
    let spec: FanSpec = match serde_json::from_str(fan_json) {
        Ok(s) => s,
        Err(e) => return error(e),
    };
    let fan = match Fan::from_spec(&spec, rd.rank()) {
        Ok(f) => f,
        Err(e) => return error(e),
    };
    let orbit = match rd.weyl_group().map_err(|e| e.to_string()).and_then(|w| fan.weyl_orbit(&w).map_err(|e| e.to_string())) {
        Ok(o) => o,
        Err(e) => return error(e),
    };
    let maximal: Vec<Vec<IntVector>> = orbit.maximal_cones().iter().map(|c| c.rays().to_vec()).collect();
    json!({
        "chamber_rays": rd.negative_chamber_rays(),
        "supported_in_chamber": fan.supported_in_chamber(&rd),
        "maximal_cones": maximal,
        "proper": orbit.is_complete(),
        "smooth": fan.is_smooth(),
    })
    .to_string()
}

/// Full analysis report, as written by the command-line tool.
#[wasm_bindgen]
pub fn analyze(root_datum_json: &str, fan_json: &str) -> String {
    let rd = match report::parse_root_datum("root datum", root_datum_json) {
        Ok(rd) => rd,
        Err(e) => return error(e),
    };
    let spec = match report::parse_fan_spec("fan", fan_json) {
        Ok(s) => s,
        Err(e) => return error(e),
    };
    match report::analyze(&rd, &spec) {
        Ok(r) => report::value_of(&r).to_string(),
        Err(e) => error(e),
    }
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| e.to_string())
}

/// `f_1` on `SL_2` applied to `(p_{−α}(x), χ, p_α(y))`, where the chart
/// point `χ` is the torus element with coordinate `t`, or the boundary point
/// `λ(0)` when `t` is `"boundary"`. Rationals are strings such as `"-3/2"`.
#[wasm_bindgen]
pub fn sl2_f(x: &str, t: &str, y: &str) -> String {
    let run = || -> Result<Value, String> {
        let (x, y) = (parse_rat(x)?, parse_rat(y)?);
        let calc = Calculus::new(2).map_err(|e| e.to_string())?;
        let cone = Arc::new(Cone::new(1, &[vec![-1]]).map_err(|e| e.to_string())?);
        let chart = if t.trim() == "boundary" {
            ChartPoint::limit_point(cone, &[-1]).map_err(|e| e.to_string())?
        } else {
            ChartPoint::torus_point(cone, &[parse_rat(t)?]).map_err(|e| e.to_string())?
        };
        let one = Rat::one();
        let zero = Rat::zero();
        let p = MixedPoint {
            u_minus: Matrix::from_rows(vec![vec![one.clone(), zero.clone()], vec![x, one.clone()]]),
            chart,
            u_plus: Matrix::from_rows(vec![vec![one.clone(), y], vec![zero, one]]),
        };
        let input = p.to_json();
        match calc.f_i(&p, 0) {
            Ok(q) => Ok(json!({
                "input": input,
                "output": q.to_json(),
                "x": q.u_minus[(1, 0)].to_string(),
                "y": q.u_plus[(0, 1)].to_string(),
                "closed_orbit": q.chart.in_closed_orbit(),
                "group_element": calc.to_group(&q).map(|g| g.to_strings()),
            })),
            Err(e @ CalculusError::OutsideV { .. }) => Ok(json!({"input": input, "outside_domain": e.to_string()})),
            Err(e) => Err(e.to_string()),
        }
    };
    match run() {
        Ok(v) => v.to_string(),
        Err(e) => error(e),
    }
}
