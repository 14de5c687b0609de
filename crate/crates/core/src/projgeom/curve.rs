use std::fmt;

use super::conic::{Conic, LineMeet};
use super::point::{intersect_lines, ProjLine, ProjPoint};
use crate::error::{Error, Result};

/// A component curve of a divisor current: a line, or an irreducible conic.
/// Reducible conics enter as their line components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    Line(ProjLine),
    Conic(Conic),
}

impl Curve {
    pub fn line(l: ProjLine) -> Self {
        Curve::Line(l)
    }

    pub fn conic(c: Conic) -> Result<Self> {
        match c.rank() {
            3 => Ok(Curve::Conic(c)),
            r => Err(Error::ReducibleConic(r)),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Curve::Line(_) => 1,
            Curve::Conic(_) => 2,
        }
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        match self {
            Curve::Line(l) => l.contains(p),
            Curve::Conic(c) => c.contains(p),
        }
    }

    pub fn as_line(&self) -> Option<&ProjLine> {
        match self {
            Curve::Line(l) => Some(l),
            Curve::Conic(_) => None,
        }
    }

    /// The defining quadratic form; a line becomes its double line.
    pub fn quadratic_form(&self) -> Conic {
        match self {
            Curve::Line(l) => Conic::double_line(l),
            Curve::Conic(c) => c.clone(),
        }
    }

    /// Distinct rational points on the curve, deterministic.
    pub fn sample_points(&self, count: usize) -> Vec<ProjPoint> {
        match self {
            Curve::Line(l) => l.sample_points(count),
            Curve::Conic(c) => conic_points(c, count),
        }
    }
}

/// Rational points on an irreducible conic, found by sweeping lines through a
/// known rational point when one is available among simple probes.
fn conic_points(c: &Conic, count: usize) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::new();
    let push = |p: ProjPoint, out: &mut Vec<ProjPoint>| {
        if !out.contains(&p) {
            out.push(p);
        }
    };
    // Rational points on coordinate lines first.
    for l in [
        ProjLine::ints(1, 0, 0),
        ProjLine::ints(0, 1, 0),
        ProjLine::ints(0, 0, 1),
    ] {
        if let LineMeet::Points(pts) = c.meet_line(&l) {
            for p in pts {
                push(p, &mut out);
            }
        }
    }
    let Some(base) = out.first().cloned() else {
        return out;
    };
    let mut k = 0i64;
    while out.len() < count && k < 10_000 {
        k += 1;
        for dir in [[1, k, 0], [0, 1, k], [k, 0, 1], [1, -k, 1]] {
            let other = ProjPoint::ints(dir[0], dir[1], dir[2]);
            if other == base {
                continue;
            }
            let Ok(l) = super::line_through(&base, &other) else {
                continue;
            };
            if let LineMeet::Points(pts) = c.meet_line(&l) {
                for p in pts {
                    push(p, &mut out);
                }
            }
        }
    }
    out.truncate(count);
    out
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Line(l) => write!(f, "line {l}"),
            Curve::Conic(c) => write!(f, "conic {c}"),
        }
    }
}

pub fn incidence(p: &ProjPoint, c: &Curve) -> bool {
    c.contains(p)
}

pub fn multiplicity(p: &ProjPoint, c: &Curve) -> u8 {
    match c {
        Curve::Line(l) => u8::from(l.contains(p)),
        Curve::Conic(q) => q.multiplicity(p),
    }
}

/// Common points of two distinct component curves, all rational.
pub fn intersect_curves(a: &Curve, b: &Curve) -> Result<Vec<ProjPoint>> {
    match (a, b) {
        (Curve::Line(l1), Curve::Line(l2)) => Ok(vec![intersect_lines(l1, l2)?]),
        (Curve::Line(l), Curve::Conic(c)) | (Curve::Conic(c), Curve::Line(l)) => {
            match c.meet_line(l) {
                LineMeet::Points(pts) => Ok(pts),
                LineMeet::Contained => unreachable!("irreducible conics contain no lines"),
                LineMeet::Irrational => Err(Error::IrrationalIntersection(
                    a.to_string(),
                    b.to_string(),
                )),
            }
        }
        (Curve::Conic(_), Curve::Conic(_)) => Err(Error::ConicPair(a.to_string(), b.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reducible_conics_are_not_curves() {
        assert_eq!(
            Curve::conic(Conic::ints([0, 1, 0, 0, 0, 0])),
            Err(Error::ReducibleConic(2))
        );
        assert!(Curve::conic(Conic::ints([1, 0, 0, 0, -1, 0])).is_ok());
    }

    #[test]
    fn multiplicities() {
        let l = Curve::line(ProjLine::ints(1, 1, -5));
        assert_eq!(multiplicity(&ProjPoint::ints(2, 3, 1), &l), 1);
        assert_eq!(multiplicity(&ProjPoint::ints(2, 3, 2), &l), 0);
        let c = Curve::conic(Conic::ints([1, 0, 0, 0, -1, 0])).unwrap();
        assert_eq!(multiplicity(&ProjPoint::ints(1, 1, 1), &c), 1);
        assert!(incidence(&ProjPoint::ints(1, 1, 1), &c));
    }

    #[test]
    fn conic_sample_points() {
        let c = Conic::ints([1, 0, 0, 0, -1, 0]);
        let pts = conic_points(&c, 8);
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|p| c.contains(p)));
    }

    #[test]
    fn curve_intersections() {
        let c = Curve::conic(Conic::ints([1, 0, 0, 0, -1, 0])).unwrap();
        let l = Curve::line(ProjLine::ints(0, 1, -1));
        assert_eq!(intersect_curves(&l, &c).unwrap().len(), 2);
        let bad = Curve::line(ProjLine::ints(0, 1, -2));
        assert!(matches!(
            intersect_curves(&c, &bad),
            Err(Error::IrrationalIntersection(..))
        ));
        assert!(matches!(intersect_curves(&c, &c), Err(Error::ConicPair(..))));
    }
}
