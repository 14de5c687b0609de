//! Divisor currents: finite nonnegative combinations of lines and irreducible
//! conics, with their Lelong numbers and upper level sets.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::projgeom::{intersect_curves, multiplicity, Curve, ProjPoint, Transform, Transformable};
use crate::rational::{bit_size, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub weight: Rational,
    pub curve: Curve,
}

/// `Σ wᵢ [Cᵢ]` with positive weights and distinct curves, sorted by curve.
///
/// Construction merges repeated curves, drops zero weights and precomputes the
/// pairwise intersection points of the components. Those are the only places
/// where the Lelong number can differ from a single component weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorCurrent {
    components: Vec<Component>,
    candidates: Vec<ProjPoint>,
}

impl DivisorCurrent {
    pub fn new(parts: impl IntoIterator<Item = (Rational, Curve)>) -> Result<Self> {
        let mut merged: BTreeMap<Curve, Rational> = BTreeMap::new();
        for (w, c) in parts {
            if w.is_negative() {
                return Err(Error::NegativeWeight(w));
            }
            *merged.entry(c).or_insert_with(Rational::zero) += w;
        }
        let components: Vec<Component> = merged
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(curve, weight)| Component { weight, curve })
            .collect();
        let mut candidates = BTreeSet::new();
        for (i, a) in components.iter().enumerate() {
            for b in &components[i + 1..] {
                candidates.extend(intersect_curves(&a.curve, &b.curve)?);
            }
        }
        Ok(DivisorCurrent {
            components,
            candidates: candidates.into_iter().collect(),
        })
    }

    pub fn empty() -> Self {
        DivisorCurrent {
            components: Vec::new(),
            candidates: Vec::new(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Pairwise intersection points of the components, sorted.
    pub fn candidate_points(&self) -> &[ProjPoint] {
        &self.candidates
    }

    pub fn mass(&self) -> Rational {
        self.components
            .iter()
            .map(|c| &c.weight * Rational::from_integer(c.curve.degree().into()))
            .sum()
    }

    pub fn lelong_number(&self, p: &ProjPoint) -> Rational {
        self.components
            .iter()
            .map(|c| &c.weight * Rational::from_integer(multiplicity(p, &c.curve).into()))
            .sum()
    }

    /// Generic Lelong number along `c`: its coefficient, zero if absent.
    pub fn generic_lelong_along(&self, c: &Curve) -> Rational {
        self.components
            .iter()
            .find(|comp| &comp.curve == c)
            .map(|comp| comp.weight.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `T − a[c]`, refusing to go negative.
    pub fn siu_subtract(&self, c: &Curve, a: &Rational) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::NegativeWeight(a.clone()));
        }
        let available = self.generic_lelong_along(c);
        if a > &available {
            return Err(Error::WeightExceeded {
                requested: a.clone(),
                available,
            });
        }
        DivisorCurrent::new(self.components.iter().map(|comp| {
            let w = if &comp.curve == c {
                &comp.weight - a
            } else {
                comp.weight.clone()
            };
            (w, comp.curve.clone())
        }))
    }

    pub fn scale(&self, factor: &Rational) -> Result<Self> {
        if factor.is_negative() {
            return Err(Error::NegativeScale(factor.clone()));
        }
        DivisorCurrent::new(
            self.components
                .iter()
                .map(|c| (&c.weight * factor, c.curve.clone())),
        )
    }

    pub fn add(&self, other: &DivisorCurrent) -> Result<Self> {
        DivisorCurrent::new(
            self.components
                .iter()
                .chain(other.components.iter())
                .map(|c| (c.weight.clone(), c.curve.clone())),
        )
    }

    /// Upper level set `{ν ≥ t}` (or `{ν > t}` when `strict`).
    pub fn level_set(&self, threshold: &Rational, strict: bool) -> Result<LevelSet> {
        if !threshold.is_positive() {
            return Err(Error::NonpositiveThreshold(threshold.clone()));
        }
        let passes = |v: &Rational| if strict { v > threshold } else { v >= threshold };
        let curves: Vec<Curve> = self
            .components
            .iter()
            .filter(|c| passes(&c.weight))
            .map(|c| c.curve.clone())
            .collect();
        let points = self
            .candidates
            .iter()
            .filter(|p| !curves.iter().any(|c| c.contains(p)))
            .filter(|p| passes(&self.lelong_number(p)))
            .cloned()
            .collect();
        Ok(LevelSet {
            threshold: threshold.clone(),
            strict,
            component_curves: curves,
            isolated_points: points,
        })
    }

    /// Largest numerator/denominator bit length among weights, curve
    /// coefficients and candidate coordinates.
    pub fn max_bit_size(&self) -> u64 {
        let weights = self.components.iter().map(|c| bit_size(&c.weight));
        let curves = self.components.iter().flat_map(|c| match &c.curve {
            Curve::Line(l) => l.coeffs().iter().map(bit_size).collect::<Vec<_>>(),
            Curve::Conic(q) => q.coeffs().iter().map(bit_size).collect(),
        });
        let points = self
            .candidates
            .iter()
            .flat_map(|p| p.coords().iter().map(bit_size));
        weights.chain(curves).chain(points).max().unwrap_or(0)
    }
}

impl Transformable for DivisorCurrent {
    fn transformed(&self, t: &Transform) -> Self {
        DivisorCurrent::new(
            self.components
                .iter()
                .map(|c| (c.weight.clone(), c.curve.transformed(t))),
        )
        .expect("projective maps preserve rational intersections")
    }
}

/// A level set of Lelong numbers: whole curves plus finitely many points off them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    threshold: Rational,
    strict: bool,
    component_curves: Vec<Curve>,
    isolated_points: Vec<ProjPoint>,
}

impl LevelSet {
    /// Builds a level set directly, checking that points are distinct and off
    /// the curves.
    pub fn new(
        threshold: Rational,
        strict: bool,
        mut curves: Vec<Curve>,
        points: Vec<ProjPoint>,
    ) -> Result<Self> {
        curves.sort();
        curves.dedup();
        let set: BTreeSet<ProjPoint> = points.iter().cloned().collect();
        if set.len() != points.len() {
            return Err(Error::InvalidInstance("repeated level-set point".into()));
        }
        if let Some(p) = set.iter().find(|p| curves.iter().any(|c| c.contains(p))) {
            return Err(Error::InvalidInstance(format!(
                "isolated point {p} lies on a component curve"
            )));
        }
        Ok(LevelSet {
            threshold,
            strict,
            component_curves: curves,
            isolated_points: set.into_iter().collect(),
        })
    }

    /// A finite level set with no curves.
    pub fn finite(points: Vec<ProjPoint>) -> Result<Self> {
        Self::new(Rational::from_integer(1.into()), true, Vec::new(), points)
    }

    pub fn threshold(&self) -> &Rational {
        &self.threshold
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn component_curves(&self) -> &[Curve] {
        &self.component_curves
    }

    pub fn isolated_points(&self) -> &[ProjPoint] {
        &self.isolated_points
    }

    pub fn is_finite(&self) -> bool {
        self.component_curves.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.component_curves.is_empty() && self.isolated_points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.component_curves.iter().any(|c| c.contains(p)) || self.isolated_points.contains(p)
    }
}

impl Transformable for LevelSet {
    fn transformed(&self, t: &Transform) -> Self {
        LevelSet::new(
            self.threshold.clone(),
            self.strict,
            self.component_curves.transformed(t),
            self.isolated_points.transformed(t),
        )
        .expect("projective maps preserve the level-set invariants")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{Conic, ProjLine};
    use crate::rational::{int, rat};

    fn line(a: i64, b: i64, c: i64) -> Curve {
        Curve::Line(ProjLine::ints(a, b, c))
    }

    fn four_lines() -> DivisorCurrent {
        DivisorCurrent::new(
            [line(1, 0, 0), line(0, 1, 0), line(0, 0, 1), line(1, 1, 1)]
                .into_iter()
                .map(|l| (rat(1, 4), l)),
        )
        .unwrap()
    }

    #[test]
    fn mass_examples() {
        assert_eq!(four_lines().mass(), int(1));
        assert_eq!(DivisorCurrent::empty().mass(), int(0));
        let conic = Curve::conic(Conic::ints([1, 0, 0, 0, -1, 0])).unwrap();
        let t = DivisorCurrent::new([(rat(1, 4), conic), (rat(1, 2), line(0, 1, -1))]).unwrap();
        assert_eq!(t.mass(), int(1));
    }

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let t = DivisorCurrent::new([
            (rat(1, 4), line(1, 0, 0)),
            (rat(1, 4), line(2, 0, 0)),
            (int(0), line(0, 1, 0)),
        ])
        .unwrap();
        assert_eq!(t.components().len(), 1);
        assert_eq!(t.generic_lelong_along(&line(1, 0, 0)), rat(1, 2));
        assert!(matches!(
            DivisorCurrent::new([(rat(-1, 4), line(1, 0, 0))]),
            Err(Error::NegativeWeight(_))
        ));
    }

    #[test]
    fn lelong_values() {
        let t = four_lines();
        assert_eq!(t.lelong_number(&ProjPoint::ints(0, 0, 1)), rat(1, 2));
        assert_eq!(t.lelong_number(&ProjPoint::ints(0, 1, 5)), rat(1, 4));
        assert_eq!(t.lelong_number(&ProjPoint::ints(1, 2, 3)), int(0));
        assert_eq!(t.candidate_points().len(), 6);
    }

    #[test]
    fn conic_component_lelong() {
        let conic = Curve::conic(Conic::ints([1, 0, 0, 0, -1, 0])).unwrap();
        let t = DivisorCurrent::new([(rat(1, 4), conic), (rat(1, 2), line(0, 1, -1))]).unwrap();
        assert_eq!(t.lelong_number(&ProjPoint::ints(1, 1, 1)), rat(3, 4));
        assert_eq!(t.candidate_points().len(), 2);
        let bad = DivisorCurrent::new([
            (rat(1, 4), Curve::conic(Conic::ints([1, 0, 0, 0, -1, 0])).unwrap()),
            (rat(1, 2), line(0, 1, -2)),
        ]);
        assert!(matches!(bad, Err(Error::IrrationalIntersection(..))));
    }

    #[test]
    fn siu_subtraction() {
        let t = four_lines();
        let l = line(1, 0, 0);
        assert_eq!(t.siu_subtract(&l, &int(0)).unwrap(), t);
        let r = t.siu_subtract(&l, &rat(1, 4)).unwrap();
        assert_eq!(r.components().len(), 3);
        assert_eq!(r.generic_lelong_along(&l), int(0));
        let r = t.siu_subtract(&l, &rat(1, 8)).unwrap();
        assert_eq!(r.mass(), rat(7, 8));
        assert_eq!(r.generic_lelong_along(&l), rat(1, 8));
        assert!(matches!(
            t.siu_subtract(&l, &rat(1, 3)),
            Err(Error::WeightExceeded { .. })
        ));
        assert!(matches!(
            t.siu_subtract(&line(3, 1, 1), &rat(1, 8)),
            Err(Error::WeightExceeded { .. })
        ));
    }

    #[test]
    fn scale_and_add() {
        let t = four_lines();
        assert_eq!(t.scale(&int(1)).unwrap(), t);
        assert_eq!(t.add(&t).unwrap().mass(), int(2));
        assert!(matches!(t.scale(&int(-1)), Err(Error::NegativeScale(_))));
        // rescaled residual
        let a = rat(1, 4);
        let l = line(1, 0, 0);
        let s = t
            .siu_subtract(&l, &a)
            .unwrap()
            .scale(&(int(1) / (int(1) - &a)))
            .unwrap();
        for p in t.candidate_points() {
            let mult = Rational::from_integer(multiplicity(p, &l).into());
            let expected = (t.lelong_number(p) - &a * mult) / (int(1) - &a);
            assert_eq!(s.lelong_number(p), expected);
        }
    }

    #[test]
    fn level_sets() {
        let t = four_lines();
        let e = t.level_set(&rat(1, 3), true).unwrap();
        assert!(e.component_curves().is_empty());
        assert_eq!(e.isolated_points().len(), 6);
        let e = t.level_set(&rat(1, 4), false).unwrap();
        assert_eq!(e.component_curves().len(), 4);
        assert!(e.isolated_points().is_empty());
        assert!(t.level_set(&int(2), false).unwrap().is_empty());
        assert!(matches!(
            t.level_set(&int(0), true),
            Err(Error::NonpositiveThreshold(_))
        ));
        let tri = DivisorCurrent::new(
            [line(1, 0, 0), line(0, 1, 0), line(0, 0, 1)]
                .into_iter()
                .map(|l| (rat(1, 3), l)),
        )
        .unwrap();
        let e = tri.level_set(&rat(2, 9), true).unwrap();
        assert_eq!(e.component_curves().len(), 3);
        assert!(e.isolated_points().is_empty());
    }
}
