//! Line and conic covers of level sets, with checkable certificates either way.
//!
//! A covering conic must contain every curve of the level set as a component:
//! a curve that is not a component meets the conic in at most four points and
//! leaves infinitely many points uncovered. What remains is a finite problem
//! on the isolated points, settled by rank tests on the monomial matrices.

use std::fmt;

use crate::currents::{DivisorCurrent, LevelSet};
use crate::error::{Error, Result};
use crate::projgeom::{
    conic_space, line_through, m_j, subset_on_curve_of_degree, Conic, Curve, ProjLine, ProjPoint,
};
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Line(ProjLine),
    Conic(Conic),
}

impl Witness {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        match self {
            Witness::Line(l) => l.contains(p),
            Witness::Conic(c) => c.contains(p),
        }
    }

    /// Whether `curve` is a component of the witness.
    pub fn contains_curve(&self, curve: &Curve) -> bool {
        match (self, curve) {
            (Witness::Line(l), Curve::Line(m)) => l == m,
            (Witness::Line(_), Curve::Conic(_)) => false,
            (Witness::Conic(q), Curve::Line(m)) => q.contains_line(m),
            (Witness::Conic(q), Curve::Conic(c)) => q == c,
        }
    }

    pub fn as_conic(&self) -> Conic {
        match self {
            Witness::Line(l) => Conic::double_line(l),
            Witness::Conic(c) => c.clone(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Line(l) => write!(f, "line {l}"),
            Witness::Conic(c) => write!(f, "conic {c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// A level-set curve that no admissible cover can contain.
    Curve(Curve),
    /// An inclusion-minimal set of isolated points that no admissible cover
    /// (together with the forced curve components) contains up to one omission.
    Points(Vec<ProjPoint>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverVerdict {
    Covered {
        witness: Witness,
        omitted: Option<ProjPoint>,
    },
    NotCoverable {
        obstruction: Obstruction,
    },
}

impl CoverVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverVerdict::Covered { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            CoverVerdict::Covered { witness, .. } => Some(witness),
            CoverVerdict::NotCoverable { .. } => None,
        }
    }

    pub fn omitted(&self) -> Option<&ProjPoint> {
        match self {
            CoverVerdict::Covered { omitted, .. } => omitted.as_ref(),
            CoverVerdict::NotCoverable { .. } => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoverVerdict::Covered { .. } => "covered",
            CoverVerdict::NotCoverable { .. } => "not_coverable",
        }
    }
}

/// `(2/3)(1 − α)` for `α > 2/5`.
pub fn beta_of(alpha: &Rational) -> Result<Rational> {
    if alpha <= &rat(2, 5) {
        return Err(Error::AlphaOutOfRange(alpha.clone()));
    }
    Ok(rat(2, 3) * (int(1) - alpha))
}

/// Level-set elements a witness misses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Uncovered {
    pub curves: Vec<Curve>,
    pub points: Vec<ProjPoint>,
}

impl Uncovered {
    /// At most one point missed and no curve missed.
    pub fn within_one(&self) -> bool {
        self.curves.is_empty() && self.points.len() <= 1
    }
}

/// Re-verifies a witness against a level set by direct incidence.
pub fn uncovered(e: &LevelSet, witness: &Witness) -> Uncovered {
    Uncovered {
        curves: e
            .component_curves()
            .iter()
            .filter(|c| !witness.contains_curve(c))
            .cloned()
            .collect(),
        points: e
            .isolated_points()
            .iter()
            .filter(|p| !witness.contains(p))
            .cloned()
            .collect(),
    }
}

/// Omission choices in the fixed order: nothing first, then each point.
fn omission_choices(points: &[ProjPoint]) -> impl Iterator<Item = Option<usize>> + '_ {
    std::iter::once(None).chain((0..points.len()).map(Some))
}

fn without(points: &[ProjPoint], skip: Option<usize>) -> Vec<ProjPoint> {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(_, p)| p.clone())
        .collect()
}

/// Some line through all the points, if one exists.
fn line_through_all(points: &[ProjPoint]) -> Option<ProjLine> {
    match points {
        [] => None,
        [p] => {
            let other = [
                ProjPoint::ints(1, 0, 0),
                ProjPoint::ints(0, 1, 0),
                ProjPoint::ints(0, 0, 1),
            ]
            .into_iter()
            .find(|q| q != p)
            .expect("a point differs from some basis point");
            line_through(p, &other).ok()
        }
        [p, q, rest @ ..] => {
            let l = line_through(p, q).ok()?;
            rest.iter().all(|r| l.contains(r)).then_some(l)
        }
    }
}

fn conic_through_all(points: &[ProjPoint]) -> Option<Conic> {
    conic_space(points).into_iter().next()
}

/// Greedily shrinks an uncoverable point set to an inclusion-minimal one.
/// Coverability is monotone under taking subsets, so one pass suffices.
fn minimal_obstruction(
    points: &[ProjPoint],
    coverable: impl Fn(&[ProjPoint]) -> bool,
) -> Vec<ProjPoint> {
    let mut kept: Vec<ProjPoint> = points.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let trial = without(&kept, Some(i));
        if coverable(&trial) {
            i += 1;
        } else {
            kept = trial;
        }
    }
    kept
}

fn search<F>(points: &[ProjPoint], find: F) -> Option<(Witness, Option<ProjPoint>)>
where
    F: Fn(&[ProjPoint]) -> Option<Witness>,
{
    omission_choices(points).find_map(|skip| {
        find(&without(points, skip)).map(|w| (w, skip.map(|i| points[i].clone())))
    })
}

fn finish<F>(points: &[ProjPoint], find: F) -> CoverVerdict
where
    F: Fn(&[ProjPoint]) -> Option<Witness>,
{
    match search(points, &find) {
        Some((witness, omitted)) => CoverVerdict::Covered { witness, omitted },
        None => CoverVerdict::NotCoverable {
            obstruction: Obstruction::Points(minimal_obstruction(points, |s| {
                search(s, &find).is_some()
            })),
        },
    }
}

/// Is the level set contained in a line up to one point?
pub fn line_cover_check(e: &LevelSet) -> CoverVerdict {
    let curves = e.component_curves();
    if curves.len() >= 2 {
        return CoverVerdict::NotCoverable {
            obstruction: Obstruction::Curve(curves[1].clone()),
        };
    }
    if let Some(curve) = curves.first() {
        let Curve::Line(l) = curve else {
            return CoverVerdict::NotCoverable {
                obstruction: Obstruction::Curve(curve.clone()),
            };
        };
        let forced = l.clone();
        let off: Vec<ProjPoint> = e
            .isolated_points()
            .iter()
            .filter(|p| !forced.contains(p))
            .cloned()
            .collect();
        return finish(&off, move |rest| {
            rest.is_empty().then(|| Witness::Line(forced.clone()))
        });
    }
    finish(e.isolated_points(), |rest| {
        if rest.is_empty() {
            Some(Witness::Line(ProjLine::ints(0, 0, 1)))
        } else {
            line_through_all(rest).map(Witness::Line)
        }
    })
}

/// Is the level set contained in a (possibly reducible) conic up to one point?
pub fn conic_cover_check(e: &LevelSet) -> CoverVerdict {
    let mut forced: Vec<&Curve> = Vec::new();
    let mut degree = 0;
    for c in e.component_curves() {
        degree += c.degree();
        if degree > 2 {
            return CoverVerdict::NotCoverable {
                obstruction: Obstruction::Curve(c.clone()),
            };
        }
        forced.push(c);
    }
    match forced.as_slice() {
        [] => finish(e.isolated_points(), |rest| {
            conic_through_all(rest).map(Witness::Conic)
        }),
        [Curve::Line(f)] => {
            let f = f.clone();
            let off: Vec<ProjPoint> = e
                .isolated_points()
                .iter()
                .filter(|p| !f.contains(p))
                .cloned()
                .collect();
            finish(&off, move |rest| {
                let second = if rest.is_empty() {
                    Some(f.clone())
                } else {
                    line_through_all(rest)
                };
                second.map(|l| Witness::Conic(Conic::line_pair(&f, &l)))
            })
        }
        full => {
            let form = match full {
                [Curve::Conic(c)] => c.clone(),
                [Curve::Line(a), Curve::Line(b)] => Conic::line_pair(a, b),
                _ => unreachable!("forced degree is exactly two"),
            };
            let off: Vec<ProjPoint> = e
                .isolated_points()
                .iter()
                .filter(|p| !form.contains(p))
                .cloned()
                .collect();
            finish(&off, move |rest| {
                rest.is_empty().then(|| Witness::Conic(form.clone()))
            })
        }
    }
}

/// A unit-mass divisor current together with `α > 2/5` and at least four
/// points of Lelong number `≥ α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointInstance {
    current: DivisorCurrent,
    alpha: Rational,
    beta: Rational,
    heavy_points: Vec<ProjPoint>,
    heavy_curves: Vec<Curve>,
}

impl FourPointInstance {
    /// Finds the heavy points itself. A component of weight `≥ α` makes every
    /// point of that curve heavy; a few sample points stand in for it.
    pub fn new(current: DivisorCurrent, alpha: Rational) -> Result<Self> {
        let beta = beta_of(&alpha)?;
        let mass = current.mass();
        if mass != int(1) {
            return Err(Error::NonUnitMass(mass));
        }
        let heavy = current.level_set(&alpha, false)?;
        let mut points: Vec<ProjPoint> = heavy.isolated_points().to_vec();
        for c in heavy.component_curves() {
            let on_curve: Vec<ProjPoint> = current
                .candidate_points()
                .iter()
                .filter(|p| c.contains(p))
                .cloned()
                .chain(c.sample_points(4))
                .collect();
            for p in on_curve {
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
        if heavy.component_curves().is_empty() && points.len() < 4 {
            return Err(Error::TooFewHeavyPoints {
                found: points.len(),
                alpha,
            });
        }
        points.sort();
        Ok(FourPointInstance {
            current,
            alpha,
            beta,
            heavy_points: points,
            heavy_curves: heavy.component_curves().to_vec(),
        })
    }

    /// Uses caller-supplied heavy points, each checked.
    pub fn with_heavy_points(
        current: DivisorCurrent,
        alpha: Rational,
        points: Vec<ProjPoint>,
    ) -> Result<Self> {
        let beta = beta_of(&alpha)?;
        let mass = current.mass();
        if mass != int(1) {
            return Err(Error::NonUnitMass(mass));
        }
        let mut pts = points;
        pts.sort();
        pts.dedup();
        let heavy: Vec<ProjPoint> = pts
            .into_iter()
            .filter(|p| current.lelong_number(p) >= alpha)
            .collect();
        if heavy.len() < 4 {
            return Err(Error::TooFewHeavyPoints {
                found: heavy.len(),
                alpha,
            });
        }
        Ok(FourPointInstance {
            current,
            alpha,
            beta,
            heavy_points: heavy,
            heavy_curves: Vec::new(),
        })
    }

    pub fn current(&self) -> &DivisorCurrent {
        &self.current
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn heavy_points(&self) -> &[ProjPoint] {
        &self.heavy_points
    }

    pub fn heavy_curves(&self) -> &[Curve] {
        &self.heavy_curves
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointReport {
    pub level_set: LevelSet,
    pub verdict: CoverVerdict,
    /// Whether the witness passes through every listed heavy point. Recorded
    /// only; nothing requires it.
    pub witness_through_heavy: Option<bool>,
}

impl FourPointReport {
    /// A valid instance whose strict `β` level set has no conic cover.
    pub fn is_counterexample(&self) -> bool {
        !self.verdict.is_covered()
    }
}

/// Conic cover of `{ν > β}` for a four-heavy-point instance. A
/// `NotCoverable` verdict here contradicts the covering statement and is
/// reported as a counterexample rather than raised as an error.
pub fn four_point_conic_check(inst: &FourPointInstance) -> FourPointReport {
    let level_set = inst
        .current
        .level_set(&inst.beta, true)
        .expect("beta is positive for alpha < 1");
    let verdict = conic_cover_check(&level_set);
    let witness_through_heavy = verdict
        .witness()
        .map(|w| inst.heavy_points.iter().all(|p| w.contains(p)));
    FourPointReport {
        level_set,
        verdict,
        witness_through_heavy,
    }
}

/// Compares the strict and closed level sets at `β` for the same current.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessReport {
    pub strict_set: LevelSet,
    pub closed_set: LevelSet,
    pub strict_verdict: CoverVerdict,
    pub closed_verdict: CoverVerdict,
    /// `m₂` of the closed set when it is finite.
    pub closed_m2: Option<usize>,
}

impl SharpnessReport {
    /// The strict set is coverable while the closed set misses at least two
    /// points of every conic.
    pub fn certifies(&self) -> bool {
        let Some(m2) = self.closed_m2 else {
            return false;
        };
        self.strict_verdict.is_covered() && m2 + 1 < self.closed_set.isolated_points().len()
    }
}

pub fn beta_sharpness(current: &DivisorCurrent, alpha: &Rational) -> Result<SharpnessReport> {
    let beta = beta_of(alpha)?;
    let strict_set = current.level_set(&beta, true)?;
    let closed_set = current.level_set(&beta, false)?;
    let closed_m2 = if closed_set.is_finite() {
        Some(m_j(closed_set.isolated_points(), 2)?)
    } else {
        None
    };
    Ok(SharpnessReport {
        strict_verdict: conic_cover_check(&strict_set),
        closed_verdict: conic_cover_check(&closed_set),
        strict_set,
        closed_set,
        closed_m2,
    })
}

/// True when the points (no curves) admit a conic through all but one,
/// via `m₂`; used as a cross-check of the rank search.
pub fn finite_cover_by_m2(points: &[ProjPoint]) -> bool {
    let n = points.len();
    n == 0 || m_j(points, 2).expect("degree 2") + 1 >= n
}

/// True when all points lie on one line.
pub fn all_collinear(points: &[ProjPoint]) -> bool {
    subset_on_curve_of_degree(points, 1).expect("degree 1")
}
