use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Scales a nonzero vector so its first nonzero entry is 1.
pub(crate) fn canonicalize<const N: usize>(mut v: [Rational; N]) -> Result<[Rational; N]> {
    let lead = v.iter().find(|c| !c.is_zero()).cloned().ok_or(Error::ZeroVector)?;
    if !lead.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &lead;
        }
    }
    Ok(v)
}

pub(crate) fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn fmt_triple(f: &mut fmt::Formatter<'_>, v: &[Rational; 3], sep: &str) -> fmt::Result {
    write!(f, "({}{sep}{}{sep}{})", v[0], v[1], v[2])
}

/// A point of the projective plane, stored with its first nonzero coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Rational; 3],
}

impl ProjPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        Self::from_coords([x, y, z])
    }

    pub fn from_coords(coords: [Rational; 3]) -> Result<Self> {
        Ok(ProjPoint {
            coords: canonicalize(coords)?,
        })
    }

    /// Integer coordinates; panics on the zero vector.
    pub fn ints(x: i64, y: i64, z: i64) -> Self {
        Self::new(int(x), int(y), int(z)).expect("nonzero point")
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_triple(f, &self.coords, ":")
    }
}

/// A line `a x + b y + c z = 0`, canonicalized like [`ProjPoint`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    coeffs: [Rational; 3],
}

impl ProjLine {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        Self::from_coeffs([a, b, c])
    }

    pub fn from_coeffs(coeffs: [Rational; 3]) -> Result<Self> {
        Ok(ProjLine {
            coeffs: canonicalize(coeffs)?,
        })
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        Self::new(int(a), int(b), int(c)).expect("nonzero line")
    }

    pub fn coeffs(&self) -> &[Rational; 3] {
        &self.coeffs
    }

    pub fn eval(&self, p: &ProjPoint) -> Rational {
        dot(&self.coeffs, p.coords())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Two distinct points spanning the line.
    pub fn spanning_points(&self) -> (ProjPoint, ProjPoint) {
        let basis = [
            [int(1), int(0), int(0)],
            [int(0), int(1), int(0)],
            [int(0), int(0), int(1)],
        ];
        let candidates: Vec<ProjPoint> = basis
            .iter()
            .filter_map(|e| ProjPoint::from_coords(cross(&self.coeffs, e)).ok())
            .collect();
        let first = candidates[0].clone();
        let second = candidates
            .iter()
            .find(|p| **p != first)
            .cloned()
            .expect("a line has two distinct basis crossings");
        (first, second)
    }

    /// A few distinct rational points on the line, in a fixed order.
    pub fn sample_points(&self, count: usize) -> Vec<ProjPoint> {
        let (p, q) = self.spanning_points();
        let mut out = vec![p.clone(), q.clone()];
        let mut t = 1i64;
        while out.len() < count {
            let coords = std::array::from_fn(|i| &p.coords[i] + int(t) * &q.coords[i]);
            if let Ok(pt) = ProjPoint::from_coords(coords) {
                if !out.contains(&pt) {
                    out.push(pt);
                }
            }
            t += 1;
        }
        out.truncate(count);
        out
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_triple(f, &self.coeffs, ", ")
    }
}

pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::EqualPoints);
    }
    ProjLine::from_coeffs(cross(p.coords(), q.coords()))
}

pub fn intersect_lines(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint> {
    if l1 == l2 {
        return Err(Error::EqualLines);
    }
    ProjPoint::from_coords(cross(l1.coeffs(), l2.coeffs()))
}

/// True when the three points lie on a common line.
pub fn collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    dot(&cross(a.coords(), b.coords()), c.coords()).is_zero()
}
