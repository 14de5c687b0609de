use std::collections::BTreeSet;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covercheck::{beta_of, FourPointInstance};
use crate::currents::DivisorCurrent;
use crate::error::{Error, Result};
use crate::projgeom::{conic_space, line_through, Curve, LineMeet, ProjLine, ProjPoint};
use crate::rational::{int, rat, RatStr, Rational};

pub const DEFAULT_BIT_CAP: u64 = 4096;

const MAX_LINES: usize = 16;
const MAX_COEFFICIENT_BOUND: i64 = 64;
/// Chance that a new line is forced through an existing intersection point.
const CONCURRENCY_PERCENT: u32 = 70;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightScheme {
    /// Every component gets `1 / total degree`.
    Uniform,
    /// Integer weights in `1..=denominator_bound`, normalized to unit mass.
    RandomRational { denominator_bound: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub min_lines: usize,
    pub max_lines: usize,
    /// 0 or 1. With a conic, every line is a secant through two rational
    /// points of it so that all intersections stay rational.
    #[serde(default)]
    pub n_conics: usize,
    pub coefficient_bound: i64,
    pub weight_scheme: WeightScheme,
    /// Each trial draws its `α` from this list.
    pub alphas: Vec<RatStr>,
    pub seed: u64,
    #[serde(default = "default_bit_cap")]
    pub bit_cap: u64,
}

fn default_bit_cap() -> u64 {
    DEFAULT_BIT_CAP
}

impl GenSpec {
    pub fn new(n_lines: usize, coefficient_bound: i64, alpha: Rational, seed: u64) -> Self {
        GenSpec {
            min_lines: n_lines,
            max_lines: n_lines,
            n_conics: 0,
            coefficient_bound,
            weight_scheme: WeightScheme::Uniform,
            alphas: vec![RatStr(alpha)],
            seed,
            bit_cap: DEFAULT_BIT_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.min_lines < 3 {
            return bad(format!("at least 3 lines are needed, got {}", self.min_lines));
        }
        if self.min_lines > self.max_lines {
            return bad(format!("line range {}..={} is empty", self.min_lines, self.max_lines));
        }
        if self.max_lines > MAX_LINES {
            return bad(format!("at most {MAX_LINES} lines are supported"));
        }
        if self.n_conics > 1 {
            return bad("at most one conic component is supported".into());
        }
        if self.coefficient_bound < 1 {
            return bad("coefficient bound must be at least 1 (no nonzero lines otherwise)".into());
        }
        if self.coefficient_bound > MAX_COEFFICIENT_BOUND {
            return bad(format!("coefficient bound above {MAX_COEFFICIENT_BOUND}"));
        }
        if let WeightScheme::RandomRational { denominator_bound: 0 } = self.weight_scheme {
            return bad("denominator bound must be at least 1".into());
        }
        if self.alphas.is_empty() {
            return bad("no alpha values given".into());
        }
        for a in &self.alphas {
            beta_of(&a.0).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            if a.0 >= int(1) {
                return bad(format!("alpha must be below 1, got {a}"));
            }
        }
        if self.bit_cap == 0 {
            return bad("bit cap must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    Valid(FourPointInstance),
    SkippedPrecondition { heavy_points: usize },
    SkippedInvalid { reason: String },
    SkippedOverflow { bits: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub index: u64,
    pub alpha: Rational,
    /// The generated current, when generation got that far.
    pub current: Option<DivisorCurrent>,
    pub outcome: TrialOutcome,
}

impl Trial {
    pub fn is_valid(&self) -> bool {
        matches!(self.outcome, TrialOutcome::Valid(_))
    }
}

/// Deterministic trial source: trial `i` depends only on the spec and `i`.
#[derive(Debug, Clone)]
pub struct Generator {
    spec: GenSpec,
    /// Primitive integer lines with coefficients in `−B..=B`.
    line_table: Vec<[i128; 3]>,
}

pub fn generate(spec: &GenSpec) -> Result<Generator> {
    spec.validate()?;
    let b = spec.coefficient_bound;
    let mut table = BTreeSet::new();
    for a in -b..=b {
        for c in -b..=b {
            for d in -b..=b {
                if (a, c, d) != (0, 0, 0) {
                    table.insert(primitive([a.into(), c.into(), d.into()]));
                }
            }
        }
    }
    Ok(Generator {
        spec: spec.clone(),
        line_table: table.into_iter().collect(),
    })
}

impl Generator {
    pub fn spec(&self) -> &GenSpec {
        &self.spec
    }

    /// The infinite trial stream `0, 1, 2, …`.
    pub fn trials(&self) -> impl Iterator<Item = Trial> + '_ {
        (0u64..).map(|i| self.trial(i))
    }

    pub fn trial(&self, index: u64) -> Trial {
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed);
        rng.set_stream(index);
        let n_lines = rng.gen_range(self.spec.min_lines..=self.spec.max_lines);
        let alpha = self
            .spec
            .alphas
            .choose(&mut rng)
            .expect("validated non-empty")
            .0
            .clone();
        let skip = |current, outcome| Trial {
            index,
            alpha: alpha.clone(),
            current,
            outcome,
        };
        let curves = if self.spec.n_conics == 1 {
            self.conic_arrangement(&mut rng, n_lines)
        } else {
            self.line_arrangement(&mut rng, n_lines).map(|ls| ls.into_iter().map(Curve::Line).collect())
        };
        let curves = match curves {
            Ok(c) => c,
            Err(reason) => return skip(None, TrialOutcome::SkippedInvalid { reason }),
        };
        let weights = self.weights(&mut rng, &curves);
        let current = match DivisorCurrent::new(weights.into_iter().zip(curves)) {
            Ok(c) => c,
            Err(e) => return skip(None, TrialOutcome::SkippedInvalid { reason: e.to_string() }),
        };
        let bits = current.max_bit_size();
        if bits > self.spec.bit_cap {
            return skip(Some(current), TrialOutcome::SkippedOverflow { bits });
        }
        match FourPointInstance::new(current.clone(), alpha.clone()) {
            Ok(inst) => skip(Some(current), TrialOutcome::Valid(inst)),
            Err(Error::TooFewHeavyPoints { found, .. }) => {
                skip(Some(current), TrialOutcome::SkippedPrecondition { heavy_points: found })
            }
            Err(e) => skip(Some(current), TrialOutcome::SkippedInvalid { reason: e.to_string() }),
        }
    }

    /// Lines from the coefficient table; most new lines are forced through an
    /// existing intersection point so that heavy points actually occur.
    fn line_arrangement(&self, rng: &mut ChaCha8Rng, n: usize) -> std::result::Result<Vec<ProjLine>, String> {
        let mut lines: Vec<[i128; 3]> = Vec::with_capacity(n);
        let mut points: Vec<[i128; 3]> = Vec::new();
        while lines.len() < n {
            let mut added = false;
            for _ in 0..64 {
                let through = (!points.is_empty() && rng.gen_range(0..100) < CONCURRENCY_PERCENT)
                    .then(|| *points.choose(rng).expect("non-empty"));
                let candidate = match through {
                    Some(p) => {
                        let options: Vec<&[i128; 3]> = self
                            .line_table
                            .iter()
                            .filter(|l| dot(l, &p) == 0 && !lines.contains(l))
                            .collect();
                        match options.choose(rng) {
                            Some(l) => **l,
                            None => continue,
                        }
                    }
                    None => *self.line_table.choose(rng).expect("bound ≥ 1"),
                };
                if lines.contains(&candidate) {
                    continue;
                }
                for l in &lines {
                    let p = primitive(cross(l, &candidate));
                    if !points.contains(&p) {
                        points.push(p);
                    }
                }
                lines.push(candidate);
                added = true;
                break;
            }
            if !added {
                return Err(format!("could not place {n} distinct lines"));
            }
        }
        Ok(lines
            .into_iter()
            .map(|l| ProjLine::ints(l[0] as i64, l[1] as i64, l[2] as i64))
            .collect())
    }

    /// One irreducible conic through five random integer points, plus secants
    /// joining rational points of it.
    fn conic_arrangement(&self, rng: &mut ChaCha8Rng, n: usize) -> std::result::Result<Vec<Curve>, String> {
        let b = self.spec.coefficient_bound;
        let random_point = |rng: &mut ChaCha8Rng| loop {
            let c = [rng.gen_range(-b..=b), rng.gen_range(-b..=b), rng.gen_range(-b..=b)];
            if c != [0, 0, 0] {
                break ProjPoint::ints(c[0], c[1], c[2]);
            }
        };
        let five: Vec<ProjPoint> = (0..5).map(|_| random_point(rng)).collect();
        let conic = match conic_space(&five).as_slice() {
            [q] if q.is_irreducible() => q.clone(),
            _ => return Err("five sampled points do not span an irreducible conic".into()),
        };
        let mut pool: Vec<ProjPoint> = Vec::new();
        for p in five {
            if !pool.contains(&p) {
                pool.push(p);
            }
        }
        let base = pool[0].clone();
        for _ in 0..4 * n {
            let q = random_point(rng);
            let Ok(l) = line_through(&base, &q) else { continue };
            if let LineMeet::Points(pts) = conic.meet_line(&l) {
                for p in pts {
                    if !pool.contains(&p) {
                        pool.push(p);
                    }
                }
            }
        }
        let mut lines: Vec<ProjLine> = Vec::new();
        for _ in 0..64 * n {
            if lines.len() == n {
                break;
            }
            let pair: Vec<&ProjPoint> = pool.choose_multiple(rng, 2).collect();
            let l = line_through(pair[0], pair[1]).expect("pool points are distinct");
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
        if lines.len() < n {
            return Err(format!("could not place {n} distinct secants"));
        }
        let mut curves: Vec<Curve> = lines.into_iter().map(Curve::Line).collect();
        curves.push(Curve::conic(conic).map_err(|e| e.to_string())?);
        Ok(curves)
    }

    fn weights(&self, rng: &mut ChaCha8Rng, curves: &[Curve]) -> Vec<Rational> {
        let raw: Vec<i64> = match self.spec.weight_scheme {
            WeightScheme::Uniform => vec![1; curves.len()],
            WeightScheme::RandomRational { denominator_bound } => (0..curves.len())
                .map(|_| rng.gen_range(1..=i64::from(denominator_bound)))
                .collect(),
        };
        let total: i64 = raw
            .iter()
            .zip(curves)
            .map(|(w, c)| w * i64::from(c.degree()))
            .sum();
        raw.iter().map(|w| rat(*w, total)).collect()
    }
}

fn dot(a: &[i128; 3], b: &[i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Divides out the content and makes the first nonzero entry positive.
fn primitive(v: [i128; 3]) -> [i128; 3] {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    let sign = if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) { -1 } else { 1 };
    v.map(|x| sign * x / g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn spec() -> GenSpec {
        GenSpec {
            min_lines: 4,
            max_lines: 7,
            n_conics: 0,
            coefficient_bound: 5,
            weight_scheme: WeightScheme::Uniform,
            alphas: vec![RatStr(rat(9, 20)), RatStr(rat(1, 2))],
            seed: 11,
            bit_cap: DEFAULT_BIT_CAP,
        }
    }

    #[test]
    fn deterministic_stream() {
        let g = generate(&spec()).unwrap();
        let a: Vec<Trial> = g.trials().take(20).collect();
        let b: Vec<Trial> = generate(&spec()).unwrap().trials().take(20).collect();
        assert_eq!(a, b);
        assert_eq!(g.trial(13), a[13]);
    }

    #[test]
    fn generated_currents_have_unit_mass() {
        let g = generate(&spec()).unwrap();
        for t in g.trials().take(40) {
            if let Some(c) = t.current {
                assert_eq!(c.mass(), int(1));
                for comp in c.components() {
                    let l = comp.curve.as_line().unwrap();
                    assert!(l.coeffs().iter().all(|x| x.abs() <= int(5)));
                }
            }
        }
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec();
        s.coefficient_bound = 0;
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
        let mut s = spec();
        s.min_lines = 2;
        assert!(generate(&s).is_err());
        let mut s = spec();
        s.alphas = vec![RatStr(rat(2, 5))];
        assert!(generate(&s).is_err());
        let mut s = spec();
        s.n_conics = 2;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn triangle_spec_fails_precondition() {
        let g = generate(&GenSpec::new(3, 5, rat(2, 3), 1)).unwrap();
        for t in g.trials().take(10) {
            assert!(matches!(t.outcome, TrialOutcome::SkippedPrecondition { .. }), "{:?}", t.outcome);
        }
    }

    #[test]
    fn conic_spec_gives_rational_instances() {
        let mut s = spec();
        s.n_conics = 1;
        s.weight_scheme = WeightScheme::RandomRational { denominator_bound: 6 };
        let g = generate(&s).unwrap();
        let mut built = 0;
        for t in g.trials().take(30) {
            if let Some(c) = t.current {
                built += 1;
                assert_eq!(c.mass(), int(1));
                assert!(c.components().iter().any(|k| k.curve.degree() == 2));
            }
        }
        assert!(built > 0);
    }
}
