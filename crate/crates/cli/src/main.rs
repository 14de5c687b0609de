//! `lelong`: exact Lelong numbers, level sets and conic-cover checks from the
//! command line.
//!
//! Exit codes: 0 success, 1 usage, parse or internal error, 2 the instance
//! does not meet the four-heavy-point precondition, 3 a counterexample was
//! found (or an example fact failed).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lelong_core::covercheck::{beta_of, four_point_conic_check, FourPointInstance};
use lelong_core::examples::{build_example, verify_example, ExampleId, NamedExample};
use lelong_core::harness::{run_suite, GenSpec, WeightScheme, DEFAULT_BIT_CAP};
use lelong_core::io::{
    point_json, to_json, write_atomic, CheckReport, InstanceFile, LelongReport, LevelSetReport, MjReport,
    PointsFile,
};
use lelong_core::par::Execution;
use lelong_core::projgeom::{m_j, ProjPoint};
use lelong_core::rational::{int, parse_rational, RatStr, Rational};
use lelong_core::Error;

const EXIT_ERROR: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;

#[derive(Parser)]
#[command(name = "lelong", version, about = "Exact Lelong-number level sets and conic-cover checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the four reference configurations and check every stated fact.
    VerifyExamples,
    /// Run the four-point conic check on an instance file.
    Check {
        path: PathBuf,
        /// Overrides the alpha stored in the file.
        #[arg(long, value_parser = rational_arg)]
        alpha: Option<Rational>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Lelong number of an instance at one point.
    Lelong {
        path: PathBuf,
        /// Homogeneous coordinates, e.g. "1,-1,0" or "1/2,1,0".
        #[arg(long, value_parser = point_arg, allow_hyphen_values = true)]
        point: ProjPoint,
        #[command(flatten)]
        out: OutArg,
    },
    /// Upper level set of an instance.
    Levelset {
        path: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        threshold: Rational,
        /// Use `ν > threshold` instead of `ν ≥ threshold`.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Largest number of points on one curve of the given degree.
    Mj {
        points: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
        #[command(flatten)]
        out: OutArg,
    },
    /// Randomized search for instances violating the conic cover.
    Search(SearchArgs),
    /// Write a reference configuration as an instance file (or its points).
    ExportExample {
        #[arg(value_parser = example_arg)]
        name: ExampleId,
        /// Write the labelled points as a points file instead.
        #[arg(long)]
        points: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Uniform,
    Random,
}

#[derive(Args)]
struct SearchArgs {
    /// Number of lines (the minimum when --max-lines is given).
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=16))]
    lines: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=16))]
    max_lines: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// May be repeated; each trial draws one.
    #[arg(long, value_parser = rational_arg, required = true)]
    alpha: Vec<Rational>,
    #[arg(long, default_value_t = 5)]
    coeff_bound: i64,
    #[arg(long, value_enum, default_value_t = Weights::Random)]
    weights: Weights,
    /// Largest integer weight before normalization, for random weights.
    #[arg(long, default_value_t = 8)]
    denominator_bound: u32,
    /// Add one conic with secant lines.
    #[arg(long)]
    conic: bool,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: OutArg,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn point_arg(s: &str) -> std::result::Result<ProjPoint, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(format!("expected three comma-separated coordinates, got {s:?}"));
    };
    let coords = [rational_arg(x)?, rational_arg(y)?, rational_arg(z)?];
    ProjPoint::from_coords(coords).map_err(|e| e.to_string())
}

fn example_arg(s: &str) -> std::result::Result<ExampleId, String> {
    s.parse()
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => write_atomic(path, text).map_err(|e| anyhow!(e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<InstanceFile> {
    InstanceFile::load(path).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// `r` as `n/180` when 180 clears its denominator.
fn per_180(r: &Rational) -> String {
    let scaled = r * int(180);
    if scaled.is_integer() {
        format!("{}/180", scaled)
    } else {
        r.to_string()
    }
}

fn cmd_verify_examples() -> Result<u8> {
    let mut failed = 0;
    for id in ExampleId::ALL {
        let ex = build_example(id).with_context(|| format!("building {id}"))?;
        let report = verify_example(&ex);
        println!("== {id}");
        for f in &report.facts {
            let status = if f.pass { "PASS" } else { "FAIL" };
            if f.pass {
                println!("[{status}] {}: {}", f.name, f.actual);
            } else {
                failed += 1;
                println!("[{status}] {}: expected {}, got {}", f.name, f.expected, f.actual);
            }
        }
        if id == ExampleId::CollinearTriple {
            print_table(&ex);
        }
    }
    if failed == 0 {
        println!("all example facts hold");
        Ok(0)
    } else {
        println!("{failed} example facts failed");
        Ok(EXIT_COUNTEREXAMPLE)
    }
}

fn print_table(ex: &NamedExample) {
    println!("point  nu       reduced");
    for (label, p) in &ex.points {
        let nu = ex.current.lelong_number(p);
        println!("{label:<6} {:<8} {nu}", per_180(&nu));
    }
    let alpha = &ex.alpha;
    let beta = beta_of(alpha).expect("example alpha exceeds 2/5");
    println!("alpha = {}, beta = {}", per_180(alpha), per_180(&beta));
}

fn cmd_check(path: &Path, alpha: Option<Rational>, out: &OutArg) -> Result<u8> {
    let start = Instant::now();
    let file = load_instance(path)?;
    let alpha = alpha
        .or_else(|| file.alpha().cloned())
        .ok_or_else(|| anyhow!("no alpha: pass --alpha or add \"alpha\" to the instance"))?;
    let current = file.to_current().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let beta = beta_of(&alpha)?;
    let (mut report, code) = match FourPointInstance::new(current.clone(), alpha.clone()) {
        Ok(inst) => {
            let r = four_point_conic_check(&inst);
            let code = if r.is_counterexample() { EXIT_COUNTEREXAMPLE } else { 0 };
            let report = CheckReport::from_report(&current, &alpha, &beta, inst.heavy_points(), inst.heavy_curves(), &r);
            (report, code)
        }
        Err(e @ Error::TooFewHeavyPoints { .. }) => {
            let heavy = current.level_set(&alpha, false)?;
            let report = CheckReport::precondition_failed(&current, &alpha, &beta, heavy.isolated_points(), &e);
            (report, EXIT_PRECONDITION)
        }
        Err(e) => return Err(e.into()),
    };
    report.elapsed_micros = start.elapsed().as_micros() as u64;
    emit(out, &to_json(&report))?;
    let omitted = report.verdict.as_ref().map_or(0, |v| v.omitted_count);
    match code {
        0 => eprintln!("covered (omitted {omitted}); alpha {alpha}, beta {beta}"),
        EXIT_PRECONDITION => eprintln!(
            "precondition not met: {}",
            report.precondition_error.as_deref().unwrap_or_default()
        ),
        _ => eprintln!("COUNTEREXAMPLE: the strict beta level set has no conic cover"),
    }
    Ok(code)
}

fn cmd_lelong(path: &Path, point: &ProjPoint, out: &OutArg) -> Result<u8> {
    let current = load_instance(path)?.to_current().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let nu = current.lelong_number(point);
    eprintln!("nu{point} = {nu} ({})", per_180(&nu));
    let report = LelongReport {
        point: point_json(point),
        nu: RatStr(nu),
        mass: RatStr(current.mass()),
    };
    emit(out, &to_json(&report))?;
    Ok(0)
}

fn cmd_levelset(path: &Path, threshold: &Rational, strict: bool, out: &OutArg) -> Result<u8> {
    let current = load_instance(path)?.to_current().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let e = current.level_set(threshold, strict)?;
    eprintln!(
        "{} component curves, {} isolated points",
        e.component_curves().len(),
        e.isolated_points().len()
    );
    emit(out, &to_json(&LevelSetReport::from_level_set(&e)))?;
    Ok(0)
}

fn cmd_mj(path: &Path, degree: u8, out: &OutArg) -> Result<u8> {
    let points = PointsFile::load(path)
        .and_then(|f| f.to_points())
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let m = m_j(&points, usize::from(degree))?;
    let report = MjReport {
        degree: usize::from(degree),
        point_count: points.len(),
        m,
    };
    emit(out, &to_json(&report))?;
    Ok(0)
}

fn cmd_search(args: &SearchArgs) -> Result<u8> {
    let spec = GenSpec {
        min_lines: args.lines as usize,
        max_lines: args.max_lines.unwrap_or(args.lines) as usize,
        n_conics: usize::from(args.conic),
        coefficient_bound: args.coeff_bound,
        weight_scheme: match args.weights {
            Weights::Uniform => WeightScheme::Uniform,
            Weights::Random => WeightScheme::RandomRational {
                denominator_bound: args.denominator_bound,
            },
        },
        alphas: args.alpha.iter().cloned().map(RatStr).collect(),
        seed: args.seed,
        bit_cap: DEFAULT_BIT_CAP,
    };
    let mode = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let report = run_suite(&spec, args.trials, mode).map_err(|e| match e {
        Error::InvalidSpec(m) => anyhow!("invalid search parameters: {m}"),
        other => anyhow!(other),
    })?;
    emit(&args.out, &to_json(&report))?;
    eprintln!(
        "{} trials: {} valid, {} precondition skips, {} invalid, {} overflow; {} counterexamples; {:.3}s",
        report.tried,
        report.valid,
        report.skipped_precondition,
        report.skipped_invalid,
        report.skipped_overflow,
        report.counterexamples.len(),
        report.wall_time.as_secs_f64()
    );
    Ok(if report.counterexamples.is_empty() { 0 } else { EXIT_COUNTEREXAMPLE })
}

fn cmd_export(id: ExampleId, points: bool, out: &OutArg) -> Result<u8> {
    let ex = build_example(id)?;
    let text = if points {
        let pts: Vec<ProjPoint> = ex.points.iter().map(|(_, p)| p.clone()).collect();
        to_json(&PointsFile::from_points(&pts))
    } else {
        to_json(&InstanceFile::from_current(&ex.current, Some(&ex.alpha)))
    };
    emit(out, &text)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::VerifyExamples => cmd_verify_examples(),
        Command::Check { path, alpha, out } => cmd_check(&path, alpha, &out),
        Command::Lelong { path, point, out } => cmd_lelong(&path, &point, &out),
        Command::Levelset {
            path,
            threshold,
            strict,
            out,
        } => {
            if threshold <= int(0) {
                bail!("threshold must be positive");
            }
            cmd_levelset(&path, &threshold, strict, &out)
        }
        Command::Mj { points, degree, out } => cmd_mj(&points, degree, &out),
        Command::Search(args) => cmd_search(&args),
        Command::ExportExample { name, points, out } => cmd_export(name, points, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
