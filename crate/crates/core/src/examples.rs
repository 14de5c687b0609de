//! Exact coordinatizations of the four extremal configurations (six points on
//! four lines, the `β`-sharpness quadrangle, the triangle, and the collinear
//! triple) with every fact they are supposed to exhibit.
//!
//! Configurations are built from a seed frame by joins and meets only, so the
//! required incidences hold by construction; an audit then rejects seeds that
//! create extra incidences.

use std::fmt;
use std::str::FromStr;

use crate::covercheck::{
    beta_of, beta_sharpness, conic_cover_check, four_point_conic_check, CoverVerdict,
    FourPointInstance, Obstruction,
};
use crate::currents::DivisorCurrent;
use crate::error::{Error, Result};
use crate::projgeom::{
    conic_space, intersect_lines, line_through, m_j, Curve, ProjLine, ProjPoint, Transform,
    Transformable,
};
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleId {
    /// Four general lines with weight 1/4: every conic misses one point.
    FourLines,
    /// Complete quadrangle with six lines: `β` cannot be lowered.
    BetaSharpness,
    /// Triangle with weight 1/3: three heavy points are not enough.
    Triangle,
    /// Seven lines, three collinear heavy points: the cover fails.
    CollinearTriple,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [
        ExampleId::FourLines,
        ExampleId::BetaSharpness,
        ExampleId::Triangle,
        ExampleId::CollinearTriple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::FourLines => "four-lines",
            ExampleId::BetaSharpness => "beta-sharpness",
            ExampleId::Triangle => "triangle",
            ExampleId::CollinearTriple => "collinear-triple",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExampleId::ALL.iter().map(|i| i.name()).collect();
                format!("unknown example {s:?} (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedExample {
    pub id: ExampleId,
    pub current: DivisorCurrent,
    pub alpha: Rational,
    pub points: Vec<(String, ProjPoint)>,
    pub lines: Vec<(String, ProjLine)>,
    /// For each labelled line, the labelled points it must contain (and no others).
    pub incidences: Vec<(String, Vec<String>)>,
    pub expected_lelong: Vec<(String, Rational)>,
}

impl NamedExample {
    pub fn point(&self, label: &str) -> &ProjPoint {
        &self
            .points
            .iter()
            .find(|(l, _)| l == label)
            .unwrap_or_else(|| panic!("no point labelled {label}"))
            .1
    }

    pub fn line(&self, label: &str) -> &ProjLine {
        &self
            .lines
            .iter()
            .find(|(l, _)| l == label)
            .unwrap_or_else(|| panic!("no line labelled {label}"))
            .1
    }

    fn labelled_points(&self, labels: &[&str]) -> Vec<ProjPoint> {
        labels.iter().map(|l| self.point(l).clone()).collect()
    }

    /// Lists the incidences that differ from the declared ones.
    pub fn incidence_mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (ll, line) in &self.lines {
            let expected = self
                .incidences
                .iter()
                .find(|(l, _)| l == ll)
                .map(|(_, pts)| pts.as_slice())
                .unwrap_or(&[]);
            for (pl, p) in &self.points {
                let want = expected.contains(pl);
                if line.contains(p) != want {
                    out.push(format!(
                        "{pl} {} {ll}",
                        if want { "missing from" } else { "unexpectedly on" }
                    ));
                }
            }
        }
        for (i, (la, a)) in self.points.iter().enumerate() {
            for (lb, b) in &self.points[i + 1..] {
                if a == b {
                    out.push(format!("{la} coincides with {lb}"));
                }
            }
        }
        for (i, (la, a)) in self.lines.iter().enumerate() {
            for (lb, b) in &self.lines[i + 1..] {
                if a == b {
                    out.push(format!("{la} coincides with {lb}"));
                }
            }
        }
        out
    }
}

impl Transformable for NamedExample {
    fn transformed(&self, t: &Transform) -> Self {
        NamedExample {
            id: self.id,
            current: self.current.transformed(t),
            alpha: self.alpha.clone(),
            points: self
                .points
                .iter()
                .map(|(l, p)| (l.clone(), p.transformed(t)))
                .collect(),
            lines: self
                .lines
                .iter()
                .map(|(l, p)| (l.clone(), p.transformed(t)))
                .collect(),
            incidences: self.incidences.clone(),
            expected_lelong: self.expected_lelong.clone(),
        }
    }
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn current_from_lines(lines: &[(String, ProjLine)], weights: &[Rational]) -> Result<DivisorCurrent> {
    DivisorCurrent::new(
        weights
            .iter()
            .zip(lines)
            .map(|(w, (_, l))| (w.clone(), Curve::Line(l.clone()))),
    )
}

/// Seed frames tried in order; any four points in general position will do.
fn seed_frames() -> Vec<[ProjPoint; 4]> {
    vec![
        [
            ProjPoint::ints(1, 0, 0),
            ProjPoint::ints(0, 1, 0),
            ProjPoint::ints(0, 0, 1),
            ProjPoint::ints(1, 1, 1),
        ],
        [
            ProjPoint::ints(1, 2, 1),
            ProjPoint::ints(3, -1, 1),
            ProjPoint::ints(0, 1, 2),
            ProjPoint::ints(2, 5, -3),
        ],
    ]
}

pub fn build_example(id: ExampleId) -> Result<NamedExample> {
    match id {
        ExampleId::FourLines => four_lines(),
        ExampleId::Triangle => triangle(),
        ExampleId::BetaSharpness => first_valid_seed(beta_sharpness_from),
        ExampleId::CollinearTriple => first_valid_seed(collinear_triple_from),
    }
}

fn first_valid_seed(build: fn(&[ProjPoint; 4]) -> Result<NamedExample>) -> Result<NamedExample> {
    seed_frames()
        .iter()
        .filter_map(|seed| build(seed).ok())
        .find(|ex| ex.incidence_mismatches().is_empty())
        .ok_or(Error::DegenerateSeed)
}

fn four_lines() -> Result<NamedExample> {
    let lines: Vec<(String, ProjLine)> = vec![
        ("L1".into(), ProjLine::ints(1, 0, 0)),
        ("L2".into(), ProjLine::ints(0, 1, 0)),
        ("L3".into(), ProjLine::ints(0, 0, 1)),
        ("L4".into(), ProjLine::ints(1, 1, 1)),
    ];
    let mut points = Vec::new();
    let mut incidences: Vec<(String, Vec<String>)> =
        lines.iter().map(|(l, _)| (l.clone(), Vec::new())).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            let label = format!("x{}{}", i + 1, j + 1);
            points.push((label.clone(), intersect_lines(&lines[i].1, &lines[j].1)?));
            incidences[i].1.push(label.clone());
            incidences[j].1.push(label);
        }
    }
    let current = current_from_lines(&lines, &[rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)])?;
    let expected_lelong = points.iter().map(|(l, _)| (l.clone(), rat(1, 2))).collect();
    Ok(NamedExample {
        id: ExampleId::FourLines,
        current,
        alpha: rat(1, 2),
        points,
        lines,
        incidences,
        expected_lelong,
    })
}

fn triangle() -> Result<NamedExample> {
    let lines: Vec<(String, ProjLine)> = vec![
        ("L1".into(), ProjLine::ints(1, 0, 0)),
        ("L2".into(), ProjLine::ints(0, 1, 0)),
        ("L3".into(), ProjLine::ints(0, 0, 1)),
    ];
    let points = vec![
        ("q1".to_string(), intersect_lines(&lines[2].1, &lines[1].1)?),
        ("q2".to_string(), intersect_lines(&lines[0].1, &lines[2].1)?),
        ("q3".to_string(), intersect_lines(&lines[0].1, &lines[1].1)?),
    ];
    let incidences = vec![
        ("L1".into(), labels(&["q2", "q3"])),
        ("L2".into(), labels(&["q1", "q3"])),
        ("L3".into(), labels(&["q1", "q2"])),
    ];
    let current = current_from_lines(&lines, &[rat(1, 3), rat(1, 3), rat(1, 3)])?;
    Ok(NamedExample {
        id: ExampleId::Triangle,
        current,
        alpha: rat(2, 3),
        expected_lelong: points.iter().map(|(l, _)| (l.clone(), rat(2, 3))).collect(),
        points,
        lines,
        incidences,
    })
}

/// Triangle `q1 q2 q3`, a fourth point `q4`, the three lines from `q4` to the
/// vertices, and their feet `p1 p2 p3` on the opposite sides.
fn beta_sharpness_from(seed: &[ProjPoint; 4]) -> Result<NamedExample> {
    let [q1, q2, q3, q4] = seed.clone();
    let l1 = line_through(&q2, &q3)?;
    let l2 = line_through(&q1, &q3)?;
    let l3 = line_through(&q1, &q2)?;
    let l4 = line_through(&q4, &q1)?;
    let l5 = line_through(&q4, &q2)?;
    let l6 = line_through(&q4, &q3)?;
    let p1 = intersect_lines(&l4, &l1)?;
    let p2 = intersect_lines(&l5, &l2)?;
    let p3 = intersect_lines(&l6, &l3)?;
    let lines: Vec<(String, ProjLine)> = [l1, l2, l3, l4, l5, l6]
        .into_iter()
        .enumerate()
        .map(|(i, l)| (format!("L{}", i + 1), l))
        .collect();
    let points: Vec<(String, ProjPoint)> = [
        ("q1", q1),
        ("q2", q2),
        ("q3", q3),
        ("q4", q4),
        ("p1", p1),
        ("p2", p2),
        ("p3", p3),
    ]
    .into_iter()
    .map(|(l, p)| (l.to_string(), p))
    .collect();
    let incidences = vec![
        ("L1".into(), labels(&["q2", "q3", "p1"])),
        ("L2".into(), labels(&["q1", "q3", "p2"])),
        ("L3".into(), labels(&["q1", "q2", "p3"])),
        ("L4".into(), labels(&["q4", "q1", "p1"])),
        ("L5".into(), labels(&["q4", "q2", "p2"])),
        ("L6".into(), labels(&["q4", "q3", "p3"])),
    ];
    let current = current_from_lines(&lines, &vec![rat(1, 6); 6])?;
    let expected_lelong = ["q1", "q2", "q3", "q4"]
        .iter()
        .map(|l| (l.to_string(), rat(1, 2)))
        .chain(["p1", "p2", "p3"].iter().map(|l| (l.to_string(), rat(1, 3))))
        .collect();
    Ok(NamedExample {
        id: ExampleId::BetaSharpness,
        current,
        alpha: rat(1, 2),
        points,
        lines,
        incidences,
        expected_lelong,
    })
}

/// From a quadrangle `p2 p3 p4 p5`: its diagonal points `q2, p1, p6`, the line
/// `L1` through `q2` and `p1`, and its meets `q1, q3` with the sides through `p6`.
fn collinear_triple_from(seed: &[ProjPoint; 4]) -> Result<NamedExample> {
    let [p2, p3, p4, p5] = seed.clone();
    let side_l1 = line_through(&p2, &p4)?;
    let side_l2 = line_through(&p3, &p5)?;
    let side_l3 = line_through(&p2, &p5)?;
    let side_l4 = line_through(&p3, &p4)?;
    let big_l2 = line_through(&p2, &p3)?;
    let big_l3 = line_through(&p4, &p5)?;
    let q2 = intersect_lines(&side_l1, &side_l2)?;
    let p1 = intersect_lines(&side_l3, &side_l4)?;
    let p6 = intersect_lines(&big_l2, &big_l3)?;
    let big_l1 = line_through(&q2, &p1)?;
    let q1 = intersect_lines(&big_l1, &big_l2)?;
    let q3 = intersect_lines(&big_l1, &big_l3)?;
    let lines: Vec<(String, ProjLine)> = vec![
        ("L1".into(), big_l1),
        ("L2".into(), big_l2),
        ("L3".into(), big_l3),
        ("l1".into(), side_l1),
        ("l2".into(), side_l2),
        ("l3".into(), side_l3),
        ("l4".into(), side_l4),
    ];
    let points: Vec<(String, ProjPoint)> = [
        ("q1", q1),
        ("q2", q2),
        ("q3", q3),
        ("p1", p1),
        ("p2", p2),
        ("p3", p3),
        ("p4", p4),
        ("p5", p5),
        ("p6", p6),
    ]
    .into_iter()
    .map(|(l, p)| (l.to_string(), p))
    .collect();
    let incidences = vec![
        ("L1".into(), labels(&["q1", "q2", "q3", "p1"])),
        ("L2".into(), labels(&["q1", "p2", "p3", "p6"])),
        ("L3".into(), labels(&["q3", "p4", "p5", "p6"])),
        ("l1".into(), labels(&["q2", "p2", "p4"])),
        ("l2".into(), labels(&["q2", "p3", "p5"])),
        ("l3".into(), labels(&["p1", "p2", "p5"])),
        ("l4".into(), labels(&["p1", "p3", "p4"])),
    ];
    let w = |n: i64| rat(n, 180);
    let current = current_from_lines(&lines, &[w(46), w(37), w(37), w(19), w(19), w(11), w(11)])?;
    let expected_lelong = [
        ("q1", 83),
        ("q2", 84),
        ("q3", 83),
        ("p1", 68),
        ("p2", 67),
        ("p3", 67),
        ("p4", 67),
        ("p5", 67),
        ("p6", 74),
    ]
    .iter()
    .map(|&(l, n)| (l.to_string(), w(n)))
    .collect();
    Ok(NamedExample {
        id: ExampleId::CollinearTriple,
        current,
        alpha: w(81),
        points,
        lines,
        incidences,
        expected_lelong,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleReport {
    pub id: ExampleId,
    pub facts: Vec<Fact>,
}

impl ExampleReport {
    pub fn all_pass(&self) -> bool {
        self.facts.iter().all(|f| f.pass)
    }
}

#[derive(Default)]
struct Facts(Vec<Fact>);

impl Facts {
    fn check(&mut self, name: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let expected = expected.to_string();
        let actual = actual.to_string();
        self.0.push(Fact {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        });
    }
}

fn verdict_summary(v: &CoverVerdict) -> String {
    match v {
        CoverVerdict::Covered { omitted: None, .. } => "covered, nothing omitted".into(),
        CoverVerdict::Covered { omitted: Some(_), .. } => "covered, one point omitted".into(),
        CoverVerdict::NotCoverable {
            obstruction: Obstruction::Curve(_),
        } => "not coverable (curve)".into(),
        CoverVerdict::NotCoverable {
            obstruction: Obstruction::Points(p),
        } => format!("not coverable ({} points)", p.len()),
    }
}

fn heavy_count(ex: &NamedExample) -> String {
    match FourPointInstance::new(ex.current.clone(), ex.alpha.clone()) {
        Ok(inst) => format!("{} heavy points", inst.heavy_points().len()),
        Err(Error::TooFewHeavyPoints { found, .. }) => format!("precondition fails: {found} heavy points"),
        Err(e) => format!("error: {e}"),
    }
}

fn point_set(points: &[ProjPoint]) -> String {
    let mut v = points.to_vec();
    v.sort();
    v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

/// Recomputes every fact the configuration is expected to exhibit.
pub fn verify_example(ex: &NamedExample) -> ExampleReport {
    let mut f = Facts::default();
    f.check("mass", int(1), ex.current.mass());
    for (label, nu) in &ex.expected_lelong {
        f.check(format!("nu({label})"), nu, ex.current.lelong_number(ex.point(label)));
    }
    let mismatches = ex.incidence_mismatches();
    f.check(
        "incidence audit",
        "no mismatches",
        if mismatches.is_empty() {
            "no mismatches".to_string()
        } else {
            mismatches.join("; ")
        },
    );
    let beta = beta_of(&ex.alpha).expect("examples use alpha > 2/5");
    let all_points: Vec<ProjPoint> = ex.points.iter().map(|(_, p)| p.clone()).collect();
    let strict = ex.current.level_set(&beta, true).expect("beta > 0");

    match ex.id {
        ExampleId::FourLines => {
            f.check("heavy points at alpha", "6 heavy points", heavy_count(ex));
            f.check("strict level set curves", 0, strict.component_curves().len());
            f.check("strict level set points", 6, strict.isolated_points().len());
            f.check(
                "conics through all six points",
                0,
                conic_space(&all_points).len(),
            );
            for (label, _) in &ex.lines {
                let line = ex.line(label);
                let on = strict.isolated_points().iter().filter(|p| line.contains(p)).count();
                f.check(format!("points of E on {label}"), 3, on);
            }
            for i in 0..ex.lines.len() {
                for j in i + 1..ex.lines.len() {
                    let (a, b) = (&ex.lines[i].1, &ex.lines[j].1);
                    let on = strict
                        .isolated_points()
                        .iter()
                        .filter(|p| a.contains(p) || b.contains(p))
                        .count();
                    f.check(
                        format!("points of E on {} and {}", ex.lines[i].0, ex.lines[j].0),
                        5,
                        on,
                    );
                }
            }
            let verdict = FourPointInstance::new(ex.current.clone(), ex.alpha.clone())
                .map(|inst| verdict_summary(&four_point_conic_check(&inst).verdict))
                .unwrap_or_else(|e| e.to_string());
            f.check("four-point verdict", "covered, one point omitted", verdict);
        }
        ExampleId::BetaSharpness => {
            let quad = ex.labelled_points(&["p1", "p2", "p3", "q4"]);
            f.check("m1(p1, p2, p3, q4)", 2, m_j(&quad, 1).expect("degree 1"));
            f.check("heavy points at alpha", "4 heavy points", heavy_count(ex));
            f.check(
                "strict level set",
                point_set(&ex.labelled_points(&["q1", "q2", "q3", "q4"])),
                point_set(strict.isolated_points()),
            );
            match beta_sharpness(&ex.current, &ex.alpha) {
                Ok(report) => {
                    f.check(
                        "strict verdict",
                        "covered, nothing omitted",
                        verdict_summary(&report.strict_verdict),
                    );
                    f.check(
                        "closed level set",
                        point_set(&all_points),
                        point_set(report.closed_set.isolated_points()),
                    );
                    f.check(
                        "m2 of closed level set",
                        "5",
                        report.closed_m2.map_or("infinite".into(), |m| m.to_string()),
                    );
                    f.check("closed verdict covered", false, report.closed_verdict.is_covered());
                    f.check("sharpness certified", true, report.certifies());
                }
                Err(e) => f.check("sharpness report", "ok", e),
            }
        }
        ExampleId::Triangle => {
            f.check("heavy points at alpha", "precondition fails: 3 heavy points", heavy_count(ex));
            f.check("strict level set curves", 3, strict.component_curves().len());
            f.check("strict level set points", 0, strict.isolated_points().len());
            let v = conic_cover_check(&strict);
            f.check("cover verdict", "not coverable (curve)", verdict_summary(&v));
        }
        ExampleId::CollinearTriple => {
            f.check("heavy points at alpha", "precondition fails: 3 heavy points", heavy_count(ex));
            let heavy = ex.current.level_set(&ex.alpha, false).expect("alpha > 0");
            f.check(
                "points with nu >= alpha",
                point_set(&ex.labelled_points(&["q1", "q2", "q3"])),
                point_set(heavy.isolated_points()),
            );
            f.check("m1 of heavy points", 3, m_j(heavy.isolated_points(), 1).expect("degree 1"));
            let between = ["p1", "p2", "p3", "p4", "p5", "p6"].iter().all(|l| {
                let nu = ex.current.lelong_number(ex.point(l));
                nu > beta && nu < ex.alpha
            });
            f.check("beta < nu(p_i) < alpha", true, between);
            f.check("strict level set curves", 0, strict.component_curves().len());
            f.check(
                "strict level set",
                point_set(&all_points),
                point_set(strict.isolated_points()),
            );
            f.check("m2 of the nine points", 7, m_j(&all_points, 2).expect("degree 2"));
            let v = conic_cover_check(&strict);
            f.check("cover verdict covered", false, v.is_covered());
        }
    }
    ExampleReport { id: ex.id, facts: f.0 }
}
