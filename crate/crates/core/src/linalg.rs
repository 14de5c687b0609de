//! Fraction-free (Bareiss) elimination over the integers for exact rank and
//! nullspace computations on rational matrices.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{denominator_lcm, Rational};

/// Row echelon form produced by Bareiss elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// A basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.ncols];
                x[f] = Rational::from_integer(1.into());
                for (k, &pc) in self.pivots.iter().enumerate().rev() {
                    let row = &self.rows[k];
                    let mut acc = Rational::zero();
                    for j in pc + 1..self.ncols {
                        if !row[j].is_zero() && !x[j].is_zero() {
                            acc += Rational::from_integer(row[j].clone()) * &x[j];
                        }
                    }
                    x[pc] = -acc / Rational::from_integer(row[pc].clone());
                }
                x
            })
            .collect()
    }
}

/// Scales each rational row by the lcm of its denominators.
pub fn clear_denominators(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = denominator_lcm(row.iter());
            row.iter()
                .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Bareiss elimination with row pivoting; every intermediate entry is a minor
/// of the input, so all divisions are exact.
pub fn bareiss(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let mut prev = BigInt::from(1);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: m,
        pivots,
        ncols,
    }
}

pub fn echelon(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    bareiss(clear_denominators(rows), ncols)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    echelon(rows, ncols).rank()
}

pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    echelon(rows, ncols).nullspace()
}

pub type Mat3 = [[Rational; 3]; 3];

pub fn det3(m: &Mat3) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Inverse via the adjugate; `None` when singular.
pub fn inverse3(m: &Mat3) -> Option<Mat3> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    // inv[i][j] = cofactor(j, i) / det
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Some(adj.map(|row| row.map(|v| v / &d)))
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum())
    })
}

pub fn transpose(a: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

pub fn mat_vec(a: &Mat3, v: &[Rational; 3]) -> [Rational; 3] {
    std::array::from_fn(|i| (0..3).map(|k| &a[i][k] * &v[k]).sum())
}
