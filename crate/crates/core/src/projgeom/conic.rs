use std::fmt;

use num_traits::Zero;

use super::point::{canonicalize, cross, dot, ProjLine, ProjPoint};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat3};
use crate::rational::{int, rational_sqrt, rat, Rational};

/// Degree-2 monomials in the fixed order `x², xy, xz, y², yz, z²`.
pub fn veronese(p: &ProjPoint) -> [Rational; 6] {
    let [x, y, z] = p.coords();
    [x * x, x * y, x * z, y * y, y * z, z * z]
}

/// A nonzero quadratic form up to scale, `Σ cᵢ·mᵢ` over the monomials of
/// [`veronese`]. Any rank is allowed: line pairs and double lines are conics too.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conic {
    coeffs: [Rational; 6],
}

/// How a line meets a quadratic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineMeet {
    /// The line is a component of the conic.
    Contained,
    /// One or two rational points (one means tangency).
    Points(Vec<ProjPoint>),
    /// The intersection points need a quadratic extension.
    Irrational,
}

impl Conic {
    pub fn new(coeffs: [Rational; 6]) -> Result<Self> {
        Ok(Conic {
            coeffs: canonicalize(coeffs)?,
        })
    }

    pub fn ints(c: [i64; 6]) -> Self {
        Self::new(c.map(int)).expect("nonzero conic")
    }

    pub fn coeffs(&self) -> &[Rational; 6] {
        &self.coeffs
    }

    /// Product of two linear forms.
    pub fn line_pair(l1: &ProjLine, l2: &ProjLine) -> Self {
        let [a1, b1, c1] = l1.coeffs();
        let [a2, b2, c2] = l2.coeffs();
        Conic::new([
            a1 * a2,
            a1 * b2 + b1 * a2,
            a1 * c2 + c1 * a2,
            b1 * b2,
            b1 * c2 + c1 * b2,
            c1 * c2,
        ])
        .expect("product of nonzero forms is nonzero")
    }

    pub fn double_line(l: &ProjLine) -> Self {
        Self::line_pair(l, l)
    }

    /// Symmetric matrix `A` with `Q(p) = pᵀ A p`.
    pub fn matrix(&self) -> Mat3 {
        let [a, b, c, d, e, f] = &self.coeffs;
        let h = rat(1, 2);
        [
            [a.clone(), b * &h, c * &h],
            [b * &h, d.clone(), e * &h],
            [c * &h, e * &h, f.clone()],
        ]
    }

    pub fn from_matrix(m: &Mat3) -> Result<Self> {
        Conic::new([
            m[0][0].clone(),
            &m[0][1] + &m[1][0],
            &m[0][2] + &m[2][0],
            m[1][1].clone(),
            &m[1][2] + &m[2][1],
            m[2][2].clone(),
        ])
    }

    pub fn eval(&self, p: &ProjPoint) -> Rational {
        self.coeffs
            .iter()
            .zip(veronese(p).iter())
            .map(|(c, m)| c * m)
            .sum()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    fn bilinear(&self, p: &ProjPoint, q: &ProjPoint) -> Rational {
        let ap = linalg::mat_vec(&self.matrix(), p.coords());
        dot(&ap, q.coords())
    }

    /// Half the gradient, `A p`.
    pub fn polar(&self, p: &ProjPoint) -> [Rational; 3] {
        linalg::mat_vec(&self.matrix(), p.coords())
    }

    pub fn rank(&self) -> usize {
        let m = self.matrix();
        let rows: Vec<Vec<Rational>> = m.iter().map(|r| r.to_vec()).collect();
        linalg::rank(&rows, 3)
    }

    pub fn is_irreducible(&self) -> bool {
        !linalg::det3(&self.matrix()).is_zero()
    }

    /// Multiplicity of the point on the conic's zero set: 0 off it, 1 at smooth
    /// points, 2 at singular points (the vertex of a line pair, any point of a
    /// double line).
    pub fn multiplicity(&self, p: &ProjPoint) -> u8 {
        if !self.contains(p) {
            0
        } else if self.polar(p).iter().all(Zero::is_zero) {
            2
        } else {
            1
        }
    }

    /// Vanishes identically along the line.
    pub fn contains_line(&self, l: &ProjLine) -> bool {
        matches!(self.meet_line(l), LineMeet::Contained)
    }

    pub fn meet_line(&self, l: &ProjLine) -> LineMeet {
        let (p, q) = l.spanning_points();
        // Q(s p + t q) = A s² + 2 B s t + C t²
        let a = self.eval(&p);
        let b = self.bilinear(&p, &q);
        let c = self.eval(&q);
        let combine = |s: &Rational, t: &Rational| {
            ProjPoint::from_coords(std::array::from_fn(|i| {
                s * &p.coords()[i] + t * &q.coords()[i]
            }))
        };
        if a.is_zero() {
            if b.is_zero() && c.is_zero() {
                return LineMeet::Contained;
            }
            // t (2B s + C t) = 0
            let mut pts = vec![p.clone()];
            if let Ok(other) = combine(&c, &(-int(2) * &b)) {
                if other != p {
                    pts.push(other);
                }
            }
            return LineMeet::Points(pts);
        }
        let disc = &b * &b - &a * &c;
        let Some(root) = rational_sqrt(&disc) else {
            return LineMeet::Irrational;
        };
        let mut pts = Vec::with_capacity(2);
        for sign in [int(1), int(-1)] {
            let s = -&b + &sign * &root;
            let pt = combine(&s, &a).expect("t = A is nonzero");
            if !pts.contains(&pt) {
                pts.push(pt);
            }
        }
        pts.sort();
        LineMeet::Points(pts)
    }

    /// The singular point of a rank-2 form.
    pub fn vertex(&self) -> Option<ProjPoint> {
        if self.rank() != 2 {
            return None;
        }
        let m = self.matrix();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if let Ok(v) = ProjPoint::from_coords(cross(&m[i], &m[j])) {
                return Some(v);
            }
        }
        None
    }

    /// Splits a reducible conic into its two lines (equal for a double line).
    pub fn factor_lines(&self) -> Result<(ProjLine, ProjLine)> {
        match self.rank() {
            3 => Err(Error::IrreducibleConic),
            1 => {
                let m = self.matrix();
                let row = m
                    .iter()
                    .find(|r| r.iter().any(|v| !v.is_zero()))
                    .expect("rank one has a nonzero row");
                let l = ProjLine::from_coeffs(row.clone())?;
                Ok((l.clone(), l))
            }
            _ => {
                let v = self.vertex().expect("rank two has a vertex");
                let probe = [
                    ProjLine::ints(1, 0, 0),
                    ProjLine::ints(0, 1, 0),
                    ProjLine::ints(0, 0, 1),
                ]
                .into_iter()
                .find(|l| !l.contains(&v))
                .expect("some coordinate line misses a point");
                match self.meet_line(&probe) {
                    LineMeet::Points(pts) if pts.len() == 2 => {
                        let l1 = super::line_through(&v, &pts[0])?;
                        let l2 = super::line_through(&v, &pts[1])?;
                        Ok(if l1 <= l2 { (l1, l2) } else { (l2, l1) })
                    }
                    _ => Err(Error::IrrationalComponents),
                }
            }
        }
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeffs;
        write!(f, "[{}, {}, {}, {}, {}, {}]", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}
