//! Independent oracles and random inputs shared by the integration tests.
//!
//! Nothing here calls the library's elimination code: conics through five
//! points come from 5×5 cofactor determinants, and lines from cross products.

#![allow(dead_code)]

use itertools::Itertools;
use lelong_core::currents::DivisorCurrent;
use lelong_core::projgeom::{Conic, Curve, ProjLine, ProjPoint, Transform};
use lelong_core::rational::{int, rat, Rational};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Homogeneous coordinates scaled to coprime integers.
pub fn int_coords(p: &ProjPoint) -> [i128; 3] {
    let lcm = p
        .coords()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    p.coords().clone().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer().to_i128().unwrap())
}

pub fn veronese(p: &ProjPoint) -> [i128; 6] {
    let [x, y, z] = int_coords(p);
    [x * x, x * y, x * z, y * y, y * z, z * z]
}

fn permutation_sign(perm: &[usize]) -> i128 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Leibniz expansion.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|perm| permutation_sign(&perm) * perm.iter().enumerate().map(|(r, &c)| m[r][c]).product::<i128>())
        .sum()
}

/// Conic through five points by signed maximal minors of the 5×6 Veronese
/// matrix; `None` when every minor vanishes (four of the points collinear).
pub fn conic_through_five(pts: &[ProjPoint]) -> Option<[i128; 6]> {
    assert_eq!(pts.len(), 5);
    let rows: Vec<[i128; 6]> = pts.iter().map(veronese).collect();
    let coeffs: Vec<i128> = (0..6)
        .map(|k| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| (0..6).filter(|&c| c != k).map(|c| r[c]).collect())
                .collect();
            if k % 2 == 0 {
                det(&minor)
            } else {
                -det(&minor)
            }
        })
        .collect();
    if coeffs.iter().all(|c| *c == 0) {
        None
    } else {
        Some(coeffs.try_into().unwrap())
    }
}

pub fn on_conic(c: &[i128; 6], p: &ProjPoint) -> bool {
    veronese(p).iter().zip(c).map(|(a, b)| a * b).sum::<i128>() == 0
}

fn on_rational_conic(c: &[Rational; 6], p: &ProjPoint) -> bool {
    let [x, y, z] = p.coords();
    let v = [x * x, x * y, x * z, y * y, y * z, z * z];
    v.iter().zip(c).map(|(a, b)| a * b).sum::<Rational>().is_zero()
}

pub fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dedup(points: &[ProjPoint]) -> Vec<ProjPoint> {
    let mut v = points.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Lines through pairs of the points, as raw coefficient triples.
fn pair_lines(points: &[ProjPoint]) -> Vec<[Rational; 3]> {
    points
        .iter()
        .tuple_combinations()
        .map(|(a, b)| cross(a.coords(), b.coords()))
        .collect()
}

fn count_on_line(l: &[Rational; 3], points: &[ProjPoint]) -> usize {
    points.iter().filter(|p| dot(l, p.coords()).is_zero()).count()
}

pub fn m1_oracle(points: &[ProjPoint]) -> usize {
    let pts = dedup(points);
    pair_lines(&pts)
        .iter()
        .map(|l| count_on_line(l, &pts))
        .max()
        .unwrap_or(pts.len())
}

/// Best of: any five points, every conic through five of the points, and
/// every pair of lines spanned by the points.
pub fn m2_oracle(points: &[ProjPoint]) -> usize {
    let pts = dedup(points);
    let n = pts.len();
    let mut best = n.min(5);
    for five in pts.iter().cloned().combinations(5) {
        if let Some(c) = conic_through_five(&five) {
            best = best.max(pts.iter().filter(|p| on_conic(&c, p)).count());
        }
    }
    for l in pair_lines(&pts) {
        let rest: Vec<ProjPoint> = pts.iter().filter(|p| !dot(&l, p.coords()).is_zero()).cloned().collect();
        best = best.max(n - rest.len() + m1_oracle(&rest));
    }
    best
}

/// A finite set is coverable when some conic misses at most one point.
pub fn coverable_oracle(points: &[ProjPoint]) -> bool {
    let n = dedup(points).len();
    n == 0 || m2_oracle(points) + 1 >= n
}

/// ν(T, p) from weights and incidences: lines count once, conics count their
/// multiplicity (vanishing gradient means a singular point).
pub fn lelong_oracle(t: &DivisorCurrent, p: &ProjPoint) -> Rational {
    t.components()
        .iter()
        .map(|c| match &c.curve {
            Curve::Line(l) => {
                if dot(l.coeffs(), p.coords()).is_zero() {
                    c.weight.clone()
                } else {
                    int(0)
                }
            }
            Curve::Conic(q) => {
                if !on_rational_conic(q.coeffs(), p) {
                    return int(0);
                }
                let [a, b, cc, d, e, f] = q.coeffs();
                let [x, y, z] = p.coords();
                let grad = [
                    int(2) * a * x + b * y + cc * z,
                    b * x + int(2) * d * y + e * z,
                    cc * x + e * y + int(2) * f * z,
                ];
                if grad.iter().all(Zero::is_zero) {
                    int(2) * &c.weight
                } else {
                    c.weight.clone()
                }
            }
        })
        .sum()
}

pub fn random_grid_point(rng: &mut ChaCha8Rng, b: i64) -> ProjPoint {
    loop {
        let c = [rng.gen_range(-b..=b), rng.gen_range(-b..=b), rng.gen_range(-b..=b)];
        if c != [0, 0, 0] {
            return ProjPoint::ints(c[0], c[1], c[2]);
        }
    }
}

/// Rational point of `x² + y² = z²` from the parameter `s/t`.
pub fn circle_point(s: i64, t: i64) -> ProjPoint {
    ProjPoint::ints(t * t - s * s, 2 * s * t, t * t + s * s)
}

pub fn unit_circle() -> Conic {
    Conic::ints([1, 0, 0, 1, 0, -1])
}

/// Point sets mixing a small grid (many collinear triples) with points of a
/// fixed conic (many co-conic sextuples).
pub fn random_point_set(rng: &mut ChaCha8Rng, max_size: usize) -> Vec<ProjPoint> {
    let size = rng.gen_range(0..=max_size);
    let conic_share = rng.gen_range(0..=size);
    let mut pts: Vec<ProjPoint> = Vec::new();
    let mut guard = 0;
    while pts.len() < size && guard < 1000 {
        guard += 1;
        let p = if pts.len() < conic_share {
            circle_point(rng.gen_range(-4..=4), rng.gen_range(1..=4))
        } else {
            random_grid_point(rng, 2)
        };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

pub fn random_transform(rng: &mut ChaCha8Rng) -> Transform {
    loop {
        let mut m = [[0i64; 3]; 3];
        for row in &mut m {
            for x in row.iter_mut() {
                *x = rng.gen_range(-3..=3);
            }
        }
        let rows: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        if det(&rows) != 0 {
            return Transform::from_ints(m).unwrap();
        }
    }
}

/// Unit-mass current of 3 to 6 lines with small coefficients, concurrent
/// lines being common; occasionally the unit circle with secants.
pub fn random_current(rng: &mut ChaCha8Rng) -> DivisorCurrent {
    let with_conic = rng.gen_bool(0.25);
    let mut curves: Vec<Curve> = Vec::new();
    if with_conic {
        let params: Vec<ProjPoint> = (0..6).map(|k| circle_point(k - 2, 3)).collect();
        let n = rng.gen_range(1..=4);
        while curves.len() < n {
            let pair: Vec<&ProjPoint> = params.choose_multiple(rng, 2).collect();
            let l = Curve::Line(ProjLine::from_coeffs(cross(pair[0].coords(), pair[1].coords())).unwrap());
            if !curves.contains(&l) {
                curves.push(l);
            }
        }
        curves.push(Curve::conic(unit_circle()).unwrap());
    } else {
        let n = rng.gen_range(3..=6);
        let pool: Vec<ProjLine> = (-1..=1)
            .flat_map(|a| (-1..=1).flat_map(move |b| (-1..=1).map(move |c| (a, b, c))))
            .filter(|t| *t != (0, 0, 0))
            .map(|(a, b, c)| ProjLine::ints(a, b, c))
            .unique()
            .collect();
        for l in pool.choose_multiple(rng, n) {
            curves.push(Curve::Line(l.clone()));
        }
    }
    let raw: Vec<i64> = curves.iter().map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().zip(&curves).map(|(w, c)| w * i64::from(c.degree())).sum();
    DivisorCurrent::new(raw.iter().zip(curves).map(|(w, c)| (rat(*w, total), c))).unwrap()
}

pub fn random_alpha_prime(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = rng.gen_range(2..=1000);
        let p = rng.gen_range(1..q);
        let a = rat(p, q);
        if a > rat(2, 5) && a.is_positive() {
            return a;
        }
    }
}
