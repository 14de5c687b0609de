use std::collections::BTreeSet;
use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::run::{aggregate, summarize_valid, Summary, TrialSummary};
use super::RunReport;
use crate::covercheck::{beta_of, conic_cover_check, four_point_conic_check, FourPointInstance};
use crate::currents::DivisorCurrent;
use crate::error::{Error, Result};
use crate::io::InstanceFile;
use crate::par::{map_indexed, Execution};
use crate::projgeom::{m_j, Curve, ProjLine};
use crate::rational::{int, rat, RatStr, Rational};

pub const DEFAULT_INSTANCE_CAP: u128 = 2_000_000;
const MAX_RECORDED_HITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightGrid {
    Uniform,
    /// Every vector of positive integers summing to `denominator`, over it.
    Compositions { denominator: u32 },
    /// Listed weight vectors, each aligned with base lines then extra lines.
    Explicit { vectors: Vec<Vec<RatStr>> },
}

/// Configurations are the base lines plus every choice of `extra_lines`
/// further lines with coefficients in `−coefficient_bound..=coefficient_bound`.
/// The default base is the frame `x, y, z, x+y+z`, to which any four lines in
/// general position can be moved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub base_lines: Vec<[i64; 3]>,
    pub extra_lines: usize,
    pub coefficient_bound: i64,
    pub weights: WeightGrid,
    pub alphas: Vec<RatStr>,
    pub instance_cap: u128,
}

impl SweepGrid {
    pub fn new(extra_lines: usize, coefficient_bound: i64, weights: WeightGrid, alphas: Vec<Rational>) -> Self {
        SweepGrid {
            base_lines: vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
            extra_lines,
            coefficient_bound,
            weights,
            alphas: alphas.into_iter().map(RatStr).collect(),
            instance_cap: DEFAULT_INSTANCE_CAP,
        }
    }
}

/// A configuration outside the four-point hypotheses whose strict `β` level
/// set is finite yet has no conic cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepHit {
    pub instance: InstanceFile,
    pub heavy_points: usize,
    pub heavy_collinear: bool,
    pub strict_points: usize,
    pub m2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ExtremalStats {
    /// Largest finite strict level set among valid instances.
    pub max_strict_points: usize,
    /// Valid instances whose closed `β` level set has no conic cover.
    pub closed_not_coverable: u64,
    /// Precondition failures with a finite, uncoverable strict level set.
    pub sharpness_hits: u64,
    /// Largest `|E| − m₂(E)` among those hits.
    pub max_deficit: usize,
    pub hits: Vec<SweepHit>,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts as u32 - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn weight_vectors(grid: &WeightGrid, n: usize) -> Result<Vec<Vec<Rational>>> {
    match grid {
        WeightGrid::Uniform => Ok(vec![vec![rat(1, n as i64); n]]),
        WeightGrid::Compositions { denominator } => {
            if binomial(u128::from(*denominator), n as u128) > DEFAULT_INSTANCE_CAP {
                return Err(Error::InvalidSpec("too many weight compositions".into()));
            }
            Ok(compositions(*denominator, n)
                .into_iter()
                .map(|v| v.into_iter().map(|k| rat(i64::from(k), i64::from(*denominator))).collect())
                .collect())
        }
        WeightGrid::Explicit { vectors } => vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() != n {
                    return Err(Error::InvalidSpec(format!(
                        "weight vector {i} has {} entries for {n} lines",
                        v.len()
                    )));
                }
                let w: Vec<Rational> = v.iter().map(|r| r.0.clone()).collect();
                let mass: Rational = w.iter().sum();
                if mass != int(1) {
                    return Err(Error::InvalidSpec(format!("weight vector {i} has mass {mass}")));
                }
                Ok(w)
            })
            .collect(),
    }
}

struct Evaluation {
    summary: TrialSummary,
    strict_points: Option<usize>,
    closed_not_coverable: bool,
    hit: Option<SweepHit>,
}

fn evaluate(index: u64, lines: &[ProjLine], weights: &[Rational], alpha: &Rational) -> Evaluation {
    let current = DivisorCurrent::new(
        weights
            .iter()
            .cloned()
            .zip(lines.iter().cloned().map(Curve::Line)),
    )
    .expect("lines are distinct and weights nonnegative");
    let bits = Some(current.max_bit_size());
    let beta = beta_of(alpha).expect("alphas validated");
    match FourPointInstance::new(current.clone(), alpha.clone()) {
        Ok(inst) => {
            let report = four_point_conic_check(&inst);
            let strict_points = report
                .level_set
                .is_finite()
                .then(|| report.level_set.isolated_points().len());
            let closed = current.level_set(&beta, false).expect("beta > 0");
            Evaluation {
                summary: TrialSummary {
                    summary: summarize_valid(index, &inst, &report),
                    bits,
                },
                strict_points,
                closed_not_coverable: !conic_cover_check(&closed).is_covered(),
                hit: None,
            }
        }
        Err(Error::TooFewHeavyPoints { found, .. }) => {
            let strict = current.level_set(&beta, true).expect("beta > 0");
            let hit = (strict.is_finite() && !conic_cover_check(&strict).is_covered()).then(|| {
                let heavy = current.level_set(alpha, false).expect("alpha > 0");
                let pts = strict.isolated_points();
                SweepHit {
                    instance: InstanceFile::from_current(&current, Some(alpha)),
                    heavy_points: found,
                    heavy_collinear: m_j(heavy.isolated_points(), 1).expect("degree 1") == found,
                    strict_points: pts.len(),
                    m2: m_j(pts, 2).expect("degree 2"),
                }
            });
            Evaluation {
                summary: TrialSummary {
                    summary: Summary::Precondition(found),
                    bits,
                },
                strict_points: None,
                closed_not_coverable: false,
                hit,
            }
        }
        Err(_) => Evaluation {
            summary: TrialSummary {
                summary: Summary::Invalid,
                bits,
            },
            strict_points: None,
            closed_not_coverable: false,
            hit: None,
        },
    }
}

/// Enumerates every configuration of the grid and checks each one.
pub fn exhaustive_sweep(grid: &SweepGrid, mode: Execution) -> Result<RunReport> {
    let start = Instant::now();
    let mut base = Vec::new();
    for (i, c) in grid.base_lines.iter().enumerate() {
        let l = ProjLine::from_coeffs(c.map(int))
            .map_err(|e| Error::InvalidSpec(format!("base line {i}: {e}")))?;
        if base.contains(&l) {
            return Err(Error::InvalidSpec(format!("base line {i} repeats an earlier one")));
        }
        base.push(l);
    }
    for a in &grid.alphas {
        if a.0 >= int(1) {
            return Err(Error::InvalidSpec(format!("alpha must be below 1, got {a}")));
        }
        beta_of(&a.0).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    }
    if grid.coefficient_bound < 0 {
        return Err(Error::InvalidSpec("negative coefficient bound".into()));
    }
    let b = grid.coefficient_bound;
    let mut pool = BTreeSet::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                if (x, y, z) != (0, 0, 0) {
                    pool.insert(ProjLine::ints(x, y, z));
                }
            }
        }
    }
    let pool: Vec<ProjLine> = pool.into_iter().filter(|l| !base.contains(l)).collect();
    let n = base.len() + grid.extra_lines;
    let configs_count = binomial(pool.len() as u128, grid.extra_lines as u128);
    let per_config = match &grid.weights {
        WeightGrid::Uniform => 1,
        WeightGrid::Compositions { denominator } => {
            binomial(u128::from(denominator.saturating_sub(1)), n.saturating_sub(1) as u128)
        }
        WeightGrid::Explicit { vectors } => vectors.len() as u128,
    } * grid.alphas.len() as u128;
    let size = configs_count.saturating_mul(per_config);
    if size > grid.instance_cap {
        return Err(Error::GridTooLarge {
            size,
            cap: grid.instance_cap,
        });
    }
    if size == 0 || n == 0 {
        let mut report = aggregate(Vec::new());
        report.extremal = Some(ExtremalStats::default());
        report.wall_time = start.elapsed();
        return Ok(report);
    }
    let weights = weight_vectors(&grid.weights, n)?;
    let alphas: Vec<Rational> = grid.alphas.iter().map(|a| a.0.clone()).collect();
    let configs: Vec<Vec<ProjLine>> = pool
        .iter()
        .cloned()
        .combinations(grid.extra_lines)
        .map(|extra| base.iter().cloned().chain(extra).collect())
        .collect();
    let inner = weights.len() * alphas.len();
    let evaluations = map_indexed(mode, configs.len() * inner, |i| {
        let (c, rest) = (i / inner, i % inner);
        let (w, a) = (rest / alphas.len(), rest % alphas.len());
        evaluate(i as u64, &configs[c], &weights[w], &alphas[a])
    });
    let mut stats = ExtremalStats::default();
    let mut summaries = Vec::with_capacity(evaluations.len());
    for e in evaluations {
        stats.max_strict_points = stats.max_strict_points.max(e.strict_points.unwrap_or(0));
        stats.closed_not_coverable += u64::from(e.closed_not_coverable);
        if let Some(hit) = e.hit {
            stats.sharpness_hits += 1;
            stats.max_deficit = stats.max_deficit.max(hit.strict_points - hit.m2);
            if stats.hits.len() < MAX_RECORDED_HITS {
                stats.hits.push(hit);
            }
        }
        summaries.push(e.summary);
    }
    let mut report = aggregate(summaries);
    report.extremal = Some(stats);
    report.wall_time = start.elapsed();
    Ok(report)
}
