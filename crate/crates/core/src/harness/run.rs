use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::gen::{generate, GenSpec, Generator, TrialOutcome};
use super::sweep::ExtremalStats;
use crate::covercheck::{four_point_conic_check, FourPointInstance, FourPointReport};
use crate::error::{Error, Result};
use crate::io::{InstanceFile, LevelSetReport, ObstructionJson, VerdictJson};
use crate::par::{map_indexed, Execution};
use crate::rational::Rational;

/// A valid instance whose strict `β` level set has no conic cover, with
/// everything needed to re-check it from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: u64,
    pub instance: InstanceFile,
    pub level_set: LevelSetReport,
    pub obstruction: Option<ObstructionJson>,
}

impl Counterexample {
    pub(crate) fn new(index: u64, inst: &FourPointInstance, verdict: &FourPointReport) -> Self {
        Counterexample {
            index,
            instance: InstanceFile::from_current(inst.current(), Some(inst.alpha())),
            level_set: LevelSetReport::from_level_set(&verdict.level_set),
            obstruction: VerdictJson::from_verdict(&verdict.verdict).obstruction,
        }
    }

    /// Reloads the instance and reruns the check; `true` when the cover still
    /// fails.
    pub fn reverify(&self) -> Result<bool> {
        let current = self
            .instance
            .to_current()
            .map_err(|e| Error::InvalidInstance(e.to_string()))?;
        let alpha = self
            .instance
            .alpha()
            .cloned()
            .ok_or_else(|| Error::InvalidInstance("payload has no alpha".into()))?;
        let inst = FourPointInstance::new(current, alpha)?;
        Ok(four_point_conic_check(&inst).is_counterexample())
    }
}

/// Aggregate of a batch run. Wall time is kept out of the serialized form so
/// that identical runs produce identical files, and equality ignores it too.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct RunReport {
    pub tried: u64,
    pub valid: u64,
    pub skipped_precondition: u64,
    pub skipped_invalid: u64,
    pub skipped_overflow: u64,
    /// Heavy-point counts seen on precondition skips.
    pub precondition_heavy_counts: BTreeMap<usize, u64>,
    /// Valid instances per `α`.
    pub alphas: BTreeMap<String, u64>,
    pub verdicts: BTreeMap<String, u64>,
    pub omission_counts: BTreeMap<usize, u64>,
    pub counterexamples: Vec<Counterexample>,
    pub max_bit_size: u64,
    pub median_bit_size: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremal: Option<ExtremalStats>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for RunReport {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

impl Eq for RunReport {}

impl RunReport {
    pub fn counterexample_count(&self) -> usize {
        self.counterexamples.len()
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Summary {
    Valid {
        alpha: Rational,
        verdict: &'static str,
        omitted: usize,
        counterexample: Option<Box<Counterexample>>,
    },
    Precondition(usize),
    Invalid,
    Overflow,
}

#[derive(Debug, Clone)]
pub(crate) struct TrialSummary {
    pub summary: Summary,
    pub bits: Option<u64>,
}

impl TrialSummary {
    pub fn is_valid(&self) -> bool {
        matches!(self.summary, Summary::Valid { .. })
    }
}

pub(crate) fn summarize_valid(index: u64, inst: &FourPointInstance, report: &FourPointReport) -> Summary {
    Summary::Valid {
        alpha: inst.alpha().clone(),
        verdict: report.verdict.kind(),
        omitted: usize::from(report.verdict.omitted().is_some()),
        counterexample: report
            .is_counterexample()
            .then(|| Box::new(Counterexample::new(index, inst, report))),
    }
}

fn evaluate(gen: &Generator, index: u64) -> TrialSummary {
    let trial = gen.trial(index);
    let bits = trial.current.as_ref().map(|c| c.max_bit_size());
    let summary = match &trial.outcome {
        TrialOutcome::Valid(inst) => summarize_valid(index, inst, &four_point_conic_check(inst)),
        TrialOutcome::SkippedPrecondition { heavy_points } => Summary::Precondition(*heavy_points),
        TrialOutcome::SkippedInvalid { .. } => Summary::Invalid,
        TrialOutcome::SkippedOverflow { .. } => Summary::Overflow,
    };
    TrialSummary { summary, bits }
}

/// Folds summaries in index order, so the result does not depend on how
/// they were computed.
pub(crate) fn aggregate(summaries: Vec<TrialSummary>) -> RunReport {
    let mut r = RunReport::default();
    let mut bits = Vec::new();
    for s in summaries {
        r.tried += 1;
        bits.extend(s.bits);
        match s.summary {
            Summary::Valid {
                alpha,
                verdict,
                omitted,
                counterexample,
            } => {
                r.valid += 1;
                *r.alphas.entry(alpha.to_string()).or_default() += 1;
                *r.verdicts.entry(verdict.to_string()).or_default() += 1;
                if counterexample.is_none() {
                    *r.omission_counts.entry(omitted).or_default() += 1;
                }
                r.counterexamples.extend(counterexample.map(|c| *c));
            }
            Summary::Precondition(found) => {
                r.skipped_precondition += 1;
                *r.precondition_heavy_counts.entry(found).or_default() += 1;
            }
            Summary::Invalid => r.skipped_invalid += 1,
            Summary::Overflow => r.skipped_overflow += 1,
        }
    }
    bits.sort_unstable();
    r.max_bit_size = bits.last().copied().unwrap_or(0);
    r.median_bit_size = bits.get(bits.len() / 2).copied().unwrap_or(0);
    r
}

/// Runs trials `0..trials` of the spec.
pub fn run_suite(spec: &GenSpec, trials: u64, mode: Execution) -> Result<RunReport> {
    if trials == 0 {
        return Err(Error::InvalidSpec("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let gen = generate(spec)?;
    let summaries = map_indexed(mode, trials as usize, |i| evaluate(&gen, i as u64));
    let mut report = aggregate(summaries);
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Runs trials in index order until `target_valid` valid instances have been
/// checked or `max_trials` trials are used up. The report covers exactly the
/// trials up to and including the last valid one counted.
pub fn run_valid(spec: &GenSpec, target_valid: u64, max_trials: u64, mode: Execution) -> Result<RunReport> {
    let start = Instant::now();
    let gen = generate(spec)?;
    let batch = (target_valid.max(64) * 2).min(max_trials.max(1));
    let mut summaries: Vec<TrialSummary> = Vec::new();
    let mut valid = 0u64;
    let mut next = 0u64;
    while valid < target_valid && next < max_trials {
        let len = batch.min(max_trials - next);
        let base = next;
        let chunk = map_indexed(mode, len as usize, |i| evaluate(&gen, base + i as u64));
        next += len;
        for s in chunk {
            if valid == target_valid {
                break;
            }
            valid += u64::from(s.is_valid());
            summaries.push(s);
        }
    }
    let mut report = aggregate(summaries);
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::WeightScheme;
    use crate::rational::{rat, RatStr};

    fn spec(seed: u64) -> GenSpec {
        GenSpec {
            min_lines: 4,
            max_lines: 6,
            n_conics: 0,
            coefficient_bound: 3,
            weight_scheme: WeightScheme::RandomRational { denominator_bound: 5 },
            alphas: vec![RatStr(rat(9, 20)), RatStr(rat(1, 2))],
            seed,
            bit_cap: 4096,
        }
    }

    #[test]
    fn suite_is_deterministic_and_mode_independent() {
        let a = run_suite(&spec(3), 60, Execution::Sequential).unwrap();
        let b = run_suite(&spec(3), 60, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(crate::io::to_json(&a), crate::io::to_json(&b));
        assert_eq!(a.tried, 60);
        assert_eq!(
            a.valid + a.skipped_precondition + a.skipped_invalid + a.skipped_overflow,
            a.tried
        );
        assert!(a.counterexamples.is_empty());
    }

    #[test]
    fn run_valid_stops_at_target() {
        let r = run_valid(&spec(5), 10, 10_000, Execution::Parallel).unwrap();
        assert_eq!(r.valid, 10);
        let again = run_valid(&spec(5), 10, 10_000, Execution::Sequential).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_suite(&spec(1), 0, Execution::Sequential).is_err());
    }

    #[test]
    fn report_round_trips() {
        let r = run_suite(&spec(9), 30, Execution::Parallel).unwrap();
        let text = crate::io::to_json(&r);
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn triangle_trial_is_a_precondition_skip() {
        let s = GenSpec::new(3, 5, rat(2, 3), 0);
        let r = run_suite(&s, 1, Execution::Sequential).unwrap();
        assert_eq!(r.skipped_precondition, 1);
        assert_eq!(r.valid, 0);
    }
}
