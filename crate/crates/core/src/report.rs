//! JSON reports produced by the command-line tool.

use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::lattice::{IntVector, Rat};
use crate::polyhedral::{Cone, Fan, FanSpec, FanViolation, PolyhedralError};
use crate::root_datum::{RootDatum, RootDatumError, RootDatumSpec};
use crate::toric::ChartPoint;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVALID_FAN: i32 = 2;
pub const EXIT_CHAMBER: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Input that could not be turned into a root datum, fan or ray list.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{source_name}: {message}")]
pub struct ParseError {
    pub source_name: String,
    pub message: String,
}

impl ParseError {
    fn new(source_name: &str, message: impl ToString) -> Self {
        ParseError {
            source_name: source_name.to_string(),
            message: message.to_string(),
        }
    }

    fn json(source_name: &str, e: serde_json::Error) -> Self {
        ParseError::new(source_name, format!("line {} column {}: {e}", e.line(), e.column()))
    }
}

pub fn parse_root_datum(name: &str, text: &str) -> Result<RootDatum, ParseError> {
    let spec: RootDatumSpec = serde_json::from_str(text).map_err(|e| ParseError::json(name, e))?;
    RootDatum::from_spec(&spec).map_err(|e: RootDatumError| ParseError::new(name, e))
}

pub fn parse_fan_spec(name: &str, text: &str) -> Result<FanSpec, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::json(name, e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluingEntry {
    pub face: Vec<IntVector>,
    pub witness: IntVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeReport {
    pub rays: Vec<IntVector>,
    pub index: i64,
    pub smooth: bool,
    pub dual: Vec<IntVector>,
    pub hilbert_basis: Vec<IntVector>,
    pub faces: Vec<Vec<IntVector>>,
    pub gluing: Vec<GluingEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior_cocharacter: Option<IntVector>,
    /// `(−α_i)(λ(0))` as exact strings; absent when some `−α_i` is not a
    /// character of the chart.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wonderful_coords: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub root_datum: String,
    pub fan: FanSpec,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<FanViolation>,
    pub supported_in_chamber: bool,
    pub cones: Vec<ConeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth: Option<bool>,
    /// Completeness of `W·Σ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper: Option<bool>,
    /// Maximal cones of `W·Σ`, one chart each.
    pub charts: Vec<Vec<IntVector>>,
    pub chart_count: usize,
    /// Pairs of charts whose cones share a wall.
    pub adjacency: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn exit_code(&self) -> i32 {
        if !self.valid {
            EXIT_INVALID_FAN
        } else if !self.supported_in_chamber {
            EXIT_CHAMBER
        } else {
            EXIT_OK
        }
    }
}

fn cone_report(rd: &RootDatum, cone: &Cone) -> ConeReport {
    let faces = cone.faces();
    let gluing = faces
        .iter()
        .filter(|f| f != &cone)
        .map(|f| GluingEntry {
            face: f.rays().to_vec(),
            witness: cone.face_witness(f).expect("face of cone"),
        })
        .collect();
    let lam = cone.interior_cocharacter().ok();
    let wonderful = lam.as_ref().and_then(|l| {
        let p = ChartPoint::<Rat>::limit_point(Arc::new(cone.clone()), l).ok()?;
        let w = p.wonderful_coords(rd).ok()?;
        Some(w.iter().map(|x| x.to_string()).collect())
    });
    ConeReport {
        rays: cone.rays().to_vec(),
        index: cone.lattice_index(),
        smooth: cone.is_smooth(),
        dual: cone.dual_generators(),
        hilbert_basis: cone.hilbert().elements().to_vec(),
        faces: faces.iter().map(|f| f.rays().to_vec()).collect(),
        gluing,
        interior_cocharacter: lam,
        wonderful_coords: wonderful,
    }
}

/// Analyze a fan against a root datum. Structural problems with the fan are
/// reported inside the result; only unusable input is an error.
pub fn analyze(rd: &RootDatum, spec: &FanSpec) -> Result<AnalysisReport, ParseError> {
    let dim = rd.rank();
    let mut report = AnalysisReport {
        root_datum: rd.label().to_string(),
        fan: spec.clone(),
        valid: false,
        violation: None,
        supported_in_chamber: false,
        cones: Vec::new(),
        smooth: None,
        proper: None,
        charts: Vec::new(),
        chart_count: 0,
        adjacency: Vec::new(),
        notes: Vec::new(),
    };
    let fan = match Fan::from_spec(spec, dim) {
        Ok(f) => f,
        Err(PolyhedralError::InvalidFan(v)) => {
            report.violation = Some(v);
            return Ok(report);
        }
        Err(e) => return Err(ParseError::new("fan", e)),
    };
    report.valid = true;
    report.supported_in_chamber = fan.supported_in_chamber(rd);
    report.cones = fan.cones().iter().map(|c| cone_report(rd, c)).collect();
    report.smooth = Some(fan.is_smooth());

    let weyl = rd.weyl_group().map_err(|e| ParseError::new("root datum", e))?;
    match fan.weyl_orbit(&weyl) {
        Ok(orbit) => {
            report.proper = Some(orbit.is_complete());
            let maximal: Vec<&Cone> = orbit.maximal_cones();
            report.charts = maximal.iter().map(|c| c.rays().to_vec()).collect();
            report.chart_count = maximal.len();
            for (i, a) in maximal.iter().enumerate() {
                for (j, b) in maximal.iter().enumerate().skip(i + 1) {
                    let common = a.intersection(b);
                    if common.cone_dim() + 1 == dim && a.cone_dim() == dim && b.cone_dim() == dim {
                        report.adjacency.push((i, j));
                    }
                }
            }
        }
        Err(PolyhedralError::InvalidFan(v)) => {
            report.notes.push(format!("W-translates do not form a fan: {v}"));
        }
        Err(e) => return Err(ParseError::new("fan", e)),
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HilbertReport {
    pub rays: Vec<IntVector>,
    pub dual: Vec<IntVector>,
    pub hilbert_basis: Vec<IntVector>,
}

/// Parse a ray list given either inline as JSON or as a path to a JSON file.
pub fn parse_rays(arg: &str) -> Result<Vec<IntVector>, ParseError> {
    let text = match std::fs::read_to_string(arg) {
        Ok(t) => t,
        Err(_) => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| ParseError::json("rays", e))
}

/// Dual generators and Hilbert basis of the cone spanned by `rays`. The
/// ambient dimension is read off the rays; `dim` is needed only for an empty
/// list.
pub fn hilbert(rays: &[IntVector], dim: Option<usize>) -> Result<HilbertReport, ParseError> {
    let d = match (rays.first(), dim) {
        (Some(r), Some(d)) if r.len() != d => {
            return Err(ParseError::new("rays", format!("rays have dimension {}, --dim is {d}", r.len())))
        }
        (Some(r), _) => r.len(),
        (None, Some(d)) => d,
        (None, None) => return Err(ParseError::new("rays", "empty ray list needs --dim")),
    };
    if let Some(r) = rays.iter().find(|r| r.len() != d) {
        return Err(ParseError::new("rays", format!("ray {r:?} does not have dimension {d}")));
    }
    let cone = Cone::new(d, rays).map_err(|e| ParseError::new("rays", e))?;
    Ok(HilbertReport {
        rays: rays.to_vec(),
        dual: cone.dual_generators(),
        hilbert_basis: cone.hilbert().elements().to_vec(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn value_of<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}
