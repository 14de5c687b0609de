//! Exact projective-plane primitives over the rationals.

mod conic;
mod curve;
mod point;
mod transform;

use std::collections::BTreeSet;

use itertools::Itertools;

pub use conic::{veronese, Conic, LineMeet};
pub use curve::{incidence, intersect_curves, multiplicity, Curve};
pub use point::{collinear, intersect_lines, line_through, ProjLine, ProjPoint};
pub use transform::{apply_transform, frame_transform, Transform, Transformable};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

fn monomial_rows(points: &[ProjPoint], degree: usize) -> Result<Vec<Vec<Rational>>> {
    match degree {
        1 => Ok(points.iter().map(|p| p.coords().to_vec()).collect()),
        2 => Ok(points.iter().map(|p| veronese(p).to_vec()).collect()),
        d => Err(Error::UnsupportedDegree(d)),
    }
}

fn form_dimension(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Basis of the quadratic forms vanishing at every point.
pub fn conic_space(points: &[ProjPoint]) -> Vec<Conic> {
    let rows = monomial_rows(points, 2).expect("degree 2 is supported");
    linalg::nullspace(&rows, 6)
        .into_iter()
        .map(|v| {
            let arr: [Rational; 6] = v.try_into().expect("six columns");
            Conic::new(arr).expect("nullspace vectors are nonzero")
        })
        .collect()
}

/// Whether some nonzero form of degree `j` vanishes on all the points.
pub fn subset_on_curve_of_degree(points: &[ProjPoint], j: usize) -> Result<bool> {
    let rows = monomial_rows(points, j)?;
    let dim = form_dimension(j);
    Ok(linalg::rank(&rows, dim) < dim)
}

/// Largest number of the points lying on one curve of degree `j`.
///
/// Lines are spanned by pairs of points. A conic through six or more of the
/// points either contains four collinear ones, and is then a line pair, or is
/// the unique conic through some five of them.
pub fn m_j(points: &[ProjPoint], j: usize) -> Result<usize> {
    let pts: Vec<ProjPoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    match j {
        1 => Ok(max_on_line(&pts)),
        2 => Ok(max_on_conic(&pts)),
        d => Err(Error::UnsupportedDegree(d)),
    }
}

fn spanned_lines(pts: &[ProjPoint]) -> BTreeSet<ProjLine> {
    pts.iter()
        .tuple_combinations()
        .map(|(a, b)| line_through(a, b).expect("points are distinct"))
        .collect()
}

fn max_on_line(pts: &[ProjPoint]) -> usize {
    spanned_lines(pts)
        .iter()
        .map(|l| pts.iter().filter(|p| l.contains(p)).count())
        .max()
        .unwrap_or(pts.len())
}

fn max_on_conic(pts: &[ProjPoint]) -> usize {
    let n = pts.len();
    if n <= 5 {
        return n;
    }
    let mut best = 5;
    for l in spanned_lines(pts) {
        let rest: Vec<ProjPoint> = pts.iter().filter(|p| !l.contains(p)).cloned().collect();
        best = best.max(n - rest.len() + max_on_line(&rest));
    }
    if best == n {
        return n;
    }
    for five in pts.iter().cloned().combinations(5) {
        let space = conic_space(&five);
        if let [conic] = space.as_slice() {
            best = best.max(pts.iter().filter(|p| conic.contains(p)).count());
            if best == n {
                break;
            }
        }
    }
    best
}
