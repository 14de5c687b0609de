//! JSON instance, points and report formats. Every rational travels as a
//! reduced `"p/q"` string; nothing in these formats is floating point.

use std::fs;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::covercheck::{CoverVerdict, FourPointReport, Obstruction, Witness};
use crate::currents::{DivisorCurrent, LevelSet};
use crate::error::Error;
use crate::projgeom::{Conic, Curve, ProjLine, ProjPoint};
use crate::rational::{RatStr, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid JSON: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

impl FormatError {
    fn field(field: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), FormatError> {
    let io_err = |e: std::io::Error| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub type PointJson = [RatStr; 3];

pub fn point_json(p: &ProjPoint) -> PointJson {
    p.coords().clone().map(RatStr)
}

pub fn point_from_json(p: &PointJson, field: &str) -> Result<ProjPoint, FormatError> {
    ProjPoint::from_coords(p.clone().map(|r| r.0)).map_err(|e| FormatError::field(field, e))
}

fn rats<const N: usize>(v: &[Rational; N]) -> Vec<RatStr> {
    v.iter().map(RatStr::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default)]
    pub lines: Vec<[RatStr; 3]>,
    #[serde(default)]
    pub conics: Vec<[RatStr; 6]>,
    pub weights: Vec<RatStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<RatStr>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&read_text(path)?)
    }

    pub fn from_current(current: &DivisorCurrent, alpha: Option<&Rational>) -> Self {
        let mut lines = Vec::new();
        let mut conics = Vec::new();
        let mut line_w = Vec::new();
        let mut conic_w = Vec::new();
        for c in current.components() {
            match &c.curve {
                Curve::Line(l) => {
                    lines.push(l.coeffs().clone().map(RatStr));
                    line_w.push(RatStr::from(&c.weight));
                }
                Curve::Conic(q) => {
                    conics.push(q.coeffs().clone().map(RatStr));
                    conic_w.push(RatStr::from(&c.weight));
                }
            }
        }
        line_w.extend(conic_w);
        InstanceFile {
            lines,
            conics,
            weights: line_w,
            alpha: alpha.map(RatStr::from),
        }
    }

    /// Structural checks that do not need the geometry: shapes, nonzero
    /// coefficients, nonnegative weights and unit mass when `alpha` is given.
    pub fn validate(&self) -> Result<(), FormatError> {
        let expected = self.lines.len() + self.conics.len();
        if self.weights.len() != expected {
            return Err(FormatError::field(
                "weights",
                format!(
                    "expected {expected} weights ({} lines then {} conics), found {}",
                    self.lines.len(),
                    self.conics.len(),
                    self.weights.len()
                ),
            ));
        }
        for (i, l) in self.lines.iter().enumerate() {
            if l.iter().all(|c| c.0.is_zero()) {
                return Err(FormatError::field(format!("lines[{i}]"), "all coefficients are zero"));
            }
        }
        for (i, q) in self.conics.iter().enumerate() {
            if q.iter().all(|c| c.0.is_zero()) {
                return Err(FormatError::field(format!("conics[{i}]"), "all coefficients are zero"));
            }
        }
        for (i, w) in self.weights.iter().enumerate() {
            if w.0 < Rational::zero() {
                return Err(FormatError::field(format!("weights[{i}]"), format!("negative weight {w}")));
            }
        }
        if let Some(alpha) = &self.alpha {
            let mass: Rational = self
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let deg = if i < self.lines.len() { 1 } else { 2 };
                    &w.0 * Rational::from_integer(deg.into())
                })
                .sum();
            if !mass.is_one() {
                return Err(FormatError::field(
                    "weights",
                    format!("mass must be exactly 1 when alpha ({alpha}) is given, found {mass}"),
                ));
            }
        }
        Ok(())
    }

    /// Builds the current. Reducible conics are replaced by their rational
    /// line components (a double line carries twice the weight).
    pub fn to_current(&self) -> Result<DivisorCurrent, FormatError> {
        self.validate()?;
        let mut parts = Vec::new();
        for (i, l) in self.lines.iter().enumerate() {
            let line = ProjLine::from_coeffs(l.clone().map(|r| r.0))
                .map_err(|e| FormatError::field(format!("lines[{i}]"), e))?;
            parts.push((self.weights[i].0.clone(), Curve::Line(line)));
        }
        for (i, q) in self.conics.iter().enumerate() {
            let field = format!("conics[{i}]");
            let w = self.weights[self.lines.len() + i].0.clone();
            let conic = Conic::new(q.clone().map(|r| r.0)).map_err(|e| FormatError::field(&field, e))?;
            if conic.is_irreducible() {
                parts.push((w, Curve::Conic(conic)));
            } else {
                let (a, b) = conic.factor_lines().map_err(|e| FormatError::field(&field, e))?;
                parts.push((w.clone(), Curve::Line(a)));
                parts.push((w, Curve::Line(b)));
            }
        }
        DivisorCurrent::new(parts).map_err(|e| FormatError::field("instance", e))
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref().map(|a| &a.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsFile {
    pub points: Vec<PointJson>,
}

impl PointsFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: PointsFile = serde_json::from_str(text)?;
        file.to_points()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&read_text(path)?)
    }

    pub fn from_points(points: &[ProjPoint]) -> Self {
        PointsFile {
            points: points.iter().map(point_json).collect(),
        }
    }

    pub fn to_points(&self) -> Result<Vec<ProjPoint>, FormatError> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| point_from_json(p, &format!("points[{i}]")))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveJson {
    Line { coeffs: [RatStr; 3] },
    Conic { coeffs: [RatStr; 6] },
}

impl CurveJson {
    pub fn from_curve(c: &Curve) -> Self {
        match c {
            Curve::Line(l) => CurveJson::Line {
                coeffs: l.coeffs().clone().map(RatStr),
            },
            Curve::Conic(q) => CurveJson::Conic {
                coeffs: q.coeffs().clone().map(RatStr),
            },
        }
    }

    pub fn to_curve(&self) -> Result<Curve, Error> {
        match self {
            CurveJson::Line { coeffs } => Ok(Curve::Line(ProjLine::from_coeffs(coeffs.clone().map(|r| r.0))?)),
            CurveJson::Conic { coeffs } => Curve::conic(Conic::new(coeffs.clone().map(|r| r.0))?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSetReport {
    pub threshold: RatStr,
    pub strict: bool,
    pub component_curves: Vec<CurveJson>,
    pub isolated_points: Vec<PointJson>,
}

impl LevelSetReport {
    pub fn from_level_set(e: &LevelSet) -> Self {
        LevelSetReport {
            threshold: e.threshold().into(),
            strict: e.strict(),
            component_curves: e.component_curves().iter().map(CurveJson::from_curve).collect(),
            isolated_points: e.isolated_points().iter().map(point_json).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// `line` or `conic`; a line witness is also given as its square.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<[RatStr; 3]>,
    /// Coefficients of x², xy, xz, y², yz, z².
    pub conic: Vec<RatStr>,
}

impl WitnessJson {
    pub fn from_witness(w: &Witness) -> Self {
        let (kind, line) = match w {
            Witness::Line(l) => ("line", Some(l.coeffs().clone().map(RatStr))),
            Witness::Conic(_) => ("conic", None),
        };
        WitnessJson {
            kind: kind.into(),
            line,
            conic: rats(w.as_conic().coeffs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObstructionJson {
    Curve { curve: CurveJson },
    Points { points: Vec<PointJson> },
}

impl ObstructionJson {
    pub fn from_obstruction(o: &Obstruction) -> Self {
        match o {
            Obstruction::Curve(c) => ObstructionJson::Curve {
                curve: CurveJson::from_curve(c),
            },
            Obstruction::Points(ps) => ObstructionJson::Points {
                points: ps.iter().map(point_json).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    /// `covered` or `not_coverable`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omitted: Option<PointJson>,
    pub omitted_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionJson>,
}

impl VerdictJson {
    pub fn from_verdict(v: &CoverVerdict) -> Self {
        match v {
            CoverVerdict::Covered { witness, omitted } => VerdictJson {
                verdict: v.kind().into(),
                witness: Some(WitnessJson::from_witness(witness)),
                omitted: omitted.as_ref().map(point_json),
                omitted_count: usize::from(omitted.is_some()),
                obstruction: None,
            },
            CoverVerdict::NotCoverable { obstruction } => VerdictJson {
                verdict: v.kind().into(),
                witness: None,
                omitted: None,
                omitted_count: 0,
                obstruction: Some(ObstructionJson::from_obstruction(obstruction)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointValue {
    pub point: PointJson,
    pub nu: RatStr,
}

/// Per-point Lelong numbers at every candidate point of the current.
pub fn lelong_table(current: &DivisorCurrent) -> Vec<PointValue> {
    current
        .candidate_points()
        .iter()
        .map(|p| PointValue {
            point: point_json(p),
            nu: current.lelong_number(p).into(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    /// `covered`, `not_coverable` or `precondition_failed`.
    pub status: String,
    pub alpha: RatStr,
    pub beta: RatStr,
    pub mass: RatStr,
    pub heavy_points: Vec<PointJson>,
    pub heavy_curves: Vec<CurveJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precondition_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_set: Option<LevelSetReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_through_heavy: Option<bool>,
    pub lelong: Vec<PointValue>,
    pub elapsed_micros: u64,
}

impl CheckReport {
    pub fn from_report(
        current: &DivisorCurrent,
        alpha: &Rational,
        beta: &Rational,
        heavy_points: &[ProjPoint],
        heavy_curves: &[Curve],
        report: &FourPointReport,
    ) -> Self {
        CheckReport {
            status: report.verdict.kind().into(),
            alpha: alpha.into(),
            beta: beta.into(),
            mass: current.mass().into(),
            heavy_points: heavy_points.iter().map(point_json).collect(),
            heavy_curves: heavy_curves.iter().map(CurveJson::from_curve).collect(),
            precondition_error: None,
            level_set: Some(LevelSetReport::from_level_set(&report.level_set)),
            verdict: Some(VerdictJson::from_verdict(&report.verdict)),
            witness_through_heavy: report.witness_through_heavy,
            lelong: lelong_table(current),
            elapsed_micros: 0,
        }
    }

    pub fn precondition_failed(
        current: &DivisorCurrent,
        alpha: &Rational,
        beta: &Rational,
        heavy_points: &[ProjPoint],
        error: &Error,
    ) -> Self {
        CheckReport {
            status: "precondition_failed".into(),
            alpha: alpha.into(),
            beta: beta.into(),
            mass: current.mass().into(),
            heavy_points: heavy_points.iter().map(point_json).collect(),
            heavy_curves: Vec::new(),
            precondition_error: Some(error.to_string()),
            level_set: None,
            verdict: None,
            witness_through_heavy: None,
            lelong: lelong_table(current),
            elapsed_micros: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LelongReport {
    pub point: PointJson,
    pub nu: RatStr,
    pub mass: RatStr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MjReport {
    pub degree: usize,
    pub point_count: usize,
    pub m: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const TRIANGLE: &str = r#"{
        "lines": [["1","0","0"], [0, 1, 0], ["0","0","1"]],
        "weights": ["1/3", "1/3", "2/6"],
        "alpha": "2/3"
    }"#;

    #[test]
    fn parses_instance() {
        let f = InstanceFile::parse(TRIANGLE).unwrap();
        let t = f.to_current().unwrap();
        assert_eq!(t.mass(), rat(1, 1));
        assert_eq!(f.alpha(), Some(&rat(2, 3)));
        assert_eq!(t.components().len(), 3);
    }

    #[test]
    fn instance_round_trip() {
        let f = InstanceFile::parse(TRIANGLE).unwrap();
        let t = f.to_current().unwrap();
        let back = InstanceFile::from_current(&t, f.alpha());
        let text = to_json(&back);
        let again = InstanceFile::parse(&text).unwrap();
        assert_eq!(again, back);
        assert_eq!(again.to_current().unwrap(), t);
    }

    #[test]
    fn zero_denominator_is_positioned() {
        let err = InstanceFile::parse(r#"{"lines": [["1/0","0","1"]], "weights": ["1"]}"#).unwrap_err();
        match err {
            FormatError::Syntax { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("zero denominator"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn field_errors_name_the_field() {
        let zero = r#"{"lines": [["0","0","0"]], "weights": ["1"]}"#;
        assert!(InstanceFile::parse(zero).unwrap_err().to_string().starts_with("lines[0]"));
        let neg = r#"{"lines": [["1","0","0"]], "weights": ["-1"]}"#;
        assert!(InstanceFile::parse(neg).unwrap_err().to_string().starts_with("weights[0]"));
        let count = r#"{"lines": [["1","0","0"]], "weights": []}"#;
        assert!(InstanceFile::parse(count).unwrap_err().to_string().starts_with("weights"));
        let mass = r#"{"lines": [["1","0","0"]], "weights": ["1/2"], "alpha": "1/2"}"#;
        assert!(InstanceFile::parse(mass).unwrap_err().to_string().contains("mass"));
    }

    #[test]
    fn reducible_conic_splits() {
        // xy = 0 and x² = 0
        let text = r#"{"conics": [["0","1","0","0","0","0"], ["1","0","0","0","0","0"]], "weights": ["1/4", "1/4"]}"#;
        let t = InstanceFile::parse(text).unwrap().to_current().unwrap();
        assert_eq!(t.mass(), rat(1, 1));
        assert_eq!(t.components().len(), 2);
        let x_axis = Curve::Line(ProjLine::ints(1, 0, 0));
        assert_eq!(t.generic_lelong_along(&x_axis), rat(3, 4));
        assert_eq!(t.lelong_number(&ProjPoint::ints(0, 1, 0)), rat(3, 4));
        assert_eq!(t.lelong_number(&ProjPoint::ints(0, 0, 1)), rat(1, 1));
    }

    #[test]
    fn irrational_pair_rejected() {
        // x² - 2y²
        let text = r#"{"conics": [["1","0","0","-2","0","0"]], "weights": ["1/2"]}"#;
        let err = InstanceFile::parse(text).unwrap().to_current().unwrap_err();
        assert!(err.to_string().starts_with("conics[0]"));
    }

    #[test]
    fn points_file() {
        let f = PointsFile::parse(r#"{"points": [[1,0,0], ["2","4","0"]]}"#).unwrap();
        let pts = f.to_points().unwrap();
        assert_eq!(pts[1], ProjPoint::ints(1, 2, 0));
        assert!(PointsFile::parse(r#"{"points": [[0,0,0]]}"#).is_err());
    }

    #[test]
    fn curve_json_round_trip() {
        let c = CurveJson::from_curve(&Curve::Line(ProjLine::ints(2, 4, 6)));
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"kind":"line","coeffs":["1","2","3"]}"#);
        let back: CurveJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_curve().unwrap(), Curve::Line(ProjLine::ints(1, 2, 3)));
    }
}
