mod common;

use lelong_core::harness::{
    exhaustive_sweep, generate, run_suite, GenSpec, SweepGrid, TrialOutcome, WeightGrid, WeightScheme,
    DEFAULT_BIT_CAP,
};
use lelong_core::io::to_json;
use lelong_core::par::Execution;
use lelong_core::rational::{rat, RatStr};

fn spec(seed: u64) -> GenSpec {
    GenSpec {
        min_lines: 4,
        max_lines: 7,
        n_conics: 0,
        coefficient_bound: 5,
        weight_scheme: WeightScheme::RandomRational { denominator_bound: 8 },
        alphas: vec![RatStr(rat(9, 20)), RatStr(rat(1, 2)), RatStr(rat(3, 5))],
        seed,
        bit_cap: DEFAULT_BIT_CAP,
    }
}

#[test]
fn reports_are_byte_identical_across_runs_and_modes() {
    let a = run_suite(&spec(77), 300, Execution::Parallel).unwrap();
    let b = run_suite(&spec(77), 300, Execution::Parallel).unwrap();
    let c = run_suite(&spec(77), 300, Execution::Sequential).unwrap();
    assert_eq!(to_json(&a), to_json(&b));
    assert_eq!(to_json(&a), to_json(&c));
    assert!(a.valid > 0);
    assert!(a.counterexamples.is_empty());
}

#[test]
fn different_seeds_differ() {
    let a = run_suite(&spec(1), 200, Execution::Parallel).unwrap();
    let b = run_suite(&spec(2), 200, Execution::Parallel).unwrap();
    assert_ne!(to_json(&a), to_json(&b));
}

#[test]
fn four_uniform_general_lines_behave_like_the_six_point_example() {
    let mut s = GenSpec::new(4, 5, rat(1, 2), 3);
    s.weight_scheme = WeightScheme::Uniform;
    let gen = generate(&s).unwrap();
    let mut seen = 0;
    for trial in gen.trials().take(400) {
        let TrialOutcome::Valid(inst) = &trial.outcome else { continue };
        if inst.current().candidate_points().len() != 6 {
            continue;
        }
        seen += 1;
        let report = lelong_core::covercheck::four_point_conic_check(inst);
        assert_eq!(report.level_set.isolated_points().len(), 6);
        assert!(report.verdict.is_covered());
        assert!(report.verdict.omitted().is_some());
    }
    assert!(seen > 0);
}

#[test]
fn conic_instances_are_checked_too() {
    let mut s = spec(12);
    s.n_conics = 1;
    s.min_lines = 3;
    s.max_lines = 5;
    let r = run_suite(&s, 300, Execution::Parallel).unwrap();
    assert!(r.tried == 300);
    assert!(r.counterexamples.is_empty());
}

#[test]
fn sweep_rediscovers_the_collinear_triple_profile() {
    // The seven lines of the collinear-triple configuration, with four of them
    // moved to the frame, have their other three lines among coefficients
    // in {-1, 0, 1}. Weights follow the base order x, y, z, x+y+z.
    let base = [11, 19, 37, 46];
    let mut vectors = Vec::new();
    for perm in [[37, 19, 11], [37, 11, 19], [19, 37, 11], [19, 11, 37], [11, 37, 19], [11, 19, 37]] {
        vectors.push(
            base.iter()
                .chain(perm.iter())
                .map(|&n| RatStr(rat(n, 180)))
                .collect(),
        );
    }
    let grid = SweepGrid::new(3, 1, WeightGrid::Explicit { vectors }, vec![rat(81, 180)]);
    let r = exhaustive_sweep(&grid, Execution::Parallel).unwrap();
    assert!(r.counterexamples.is_empty());
    let stats = r.extremal.unwrap();
    assert!(stats.sharpness_hits > 0);
    let profile = stats
        .hits
        .iter()
        .find(|h| h.heavy_points == 3 && h.heavy_collinear && h.strict_points == 9 && h.m2 == 7);
    assert!(profile.is_some(), "hits: {:?}", stats.hits);
    assert_eq!(stats.max_deficit, 2);
}

#[test]
fn sweep_reports_are_deterministic() {
    let grid = SweepGrid::new(1, 2, WeightGrid::Compositions { denominator: 7 }, vec![rat(9, 20), rat(1, 2)]);
    let a = exhaustive_sweep(&grid, Execution::Parallel).unwrap();
    let b = exhaustive_sweep(&grid, Execution::Sequential).unwrap();
    assert_eq!(to_json(&a), to_json(&b));
    assert!(a.counterexamples.is_empty());
    assert!(a.valid > 0);
}

#[test]
fn valid_instance_payload_does_not_reverify_as_counterexample() {
    let gen = generate(&spec(4)).unwrap();
    let inst = gen
        .trials()
        .find_map(|t| match t.outcome {
            TrialOutcome::Valid(i) => Some(i),
            _ => None,
        })
        .unwrap();
    let report = lelong_core::covercheck::four_point_conic_check(&inst);
    let payload = lelong_core::harness::Counterexample {
        index: 0,
        instance: lelong_core::io::InstanceFile::from_current(inst.current(), Some(inst.alpha())),
        level_set: lelong_core::io::LevelSetReport::from_level_set(&report.level_set),
        obstruction: None,
    };
    let text = to_json(&payload);
    let back: lelong_core::harness::Counterexample = serde_json::from_str(&text).unwrap();
    assert_eq!(back, payload);
    assert!(!back.reverify().unwrap());
}
