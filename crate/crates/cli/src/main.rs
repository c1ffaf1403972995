//! `nepritz`: reproduce the worked demonstrations, run deviation sweeps and
//! verify every bound over an instance suite. Exit status is 0 iff every
//! applicable check held.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nepritz::bounds::BoundReport;
use nepritz::experiments::{
    builtin_suite, load_suite_file, random_nep, run_example1, run_example2, run_jordan_sweep, run_sweep, verify_all,
    write_reports_jsonl, write_summary_csv, write_sweep_csv, Check, ExperimentConfig, InstanceSummary, ProblemKind,
    SelectionMode, SweepResult,
};
use nepritz::model::load_problem;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "nepritz", version, about = "Rayleigh-Ritz and refined Rayleigh-Ritz bound laboratory")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON file with configuration keys; flags given here override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `oracle` (nearest the reference eigenvalue) or `target=<complex>`.
    #[arg(long, global = true)]
    selection: Option<SelectionMode>,
    /// Multiplier on the dropped quadratic terms in first-order bounds.
    #[arg(long, global = true)]
    slack: Option<f64>,
    /// Relative threshold for the leading nonzero derivative in the order detection.
    #[arg(long, global = true)]
    tau_deriv: Option<f64>,
    /// Radius of the disc searched for Ritz values.
    #[arg(long, global = true)]
    region_radius: Option<f64>,
    /// Base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory receiving reports.jsonl, summary.csv and, for sweeps, sweep.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the full result as JSON on stdout.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print the CSV summary on stdout.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact-subspace demonstration: nonunique Ritz vector, exact refined vector.
    Example1 {
        /// Project onto the whole space instead of the two-dimensional subspace.
        #[arg(long)]
        full_space: bool,
    },
    /// Perturbed-subspace demonstration over several seeds.
    Example2 {
        #[arg(long)]
        sigma: Option<f64>,
        /// Number of seeds.
        #[arg(long)]
        seeds: Option<usize>,
        /// First seed; defaults to the base seed.
        #[arg(long)]
        seed_base: Option<u64>,
    },
    /// Sweep the subspace deviation and fit convergence rates.
    Sweep {
        /// Problem file with a reference pair. Defaults to a seeded random polynomial problem.
        #[arg(long, conflicts_with = "jordan")]
        problem: Option<PathBuf>,
        /// Use the projected Jordan block problem; the levels become tilts.
        #[arg(long)]
        jordan: bool,
        /// Comma-separated deviation levels.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
        /// Subspace dimension.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Evaluate every bound on every instance of a suite.
    VerifyAll {
        /// `builtin` or a suite file.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn load_config(g: &GlobalArgs) -> Result<ExperimentConfig> {
    let mut c = match &g.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(v) = g.selection {
        c.selection = v;
    }
    if let Some(v) = g.slack {
        c.slack = v;
    }
    if let Some(v) = g.tau_deriv {
        c.tau_deriv = v;
    }
    if let Some(v) = g.region_radius {
        c.region_radius = v;
    }
    if let Some(v) = g.seed {
        c.seed = v;
    }
    if let Some(v) = &g.out {
        c.output_dir = Some(v.clone());
    }
    Ok(c)
}

/// What every command produces: bound reports to emit, checks to print and
/// the list of failures deciding the exit status.
struct Outcome<'a> {
    summaries: Vec<&'a InstanceSummary>,
    sweep: Option<&'a SweepResult>,
    lines: Vec<String>,
    failures: Vec<String>,
}

impl<'a> Outcome<'a> {
    fn new() -> Self {
        Self {
            summaries: Vec::new(),
            sweep: None,
            lines: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn checks(&mut self, checks: &[Check]) {
        for c in checks {
            self.lines
                .push(format!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
            if !c.passed {
                self.failures.push(format!("check {}: {}", c.name, c.detail));
            }
        }
    }

    fn bounds(&mut self, summary: &'a InstanceSummary) {
        for r in summary.failures() {
            self.failures.push(format!(
                "{} {}: lhs {:e} > rhs {:e}",
                summary.id,
                r.theorem_id.as_str(),
                r.lhs,
                r.rhs
            ));
        }
        for (id, msg) in &summary.errors {
            self.failures.push(format!("{} {}: {msg}", summary.id, id.as_str()));
        }
        self.summaries.push(summary);
    }

    fn reports(&self) -> impl Iterator<Item = (&'a str, &'a BoundReport)> + '_ {
        self.summaries
            .iter()
            .flat_map(|s| s.reports.iter().map(move |r| (s.id.as_str(), r)))
    }
}

fn emit<T: Serialize>(global: &GlobalArgs, config: &ExperimentConfig, result: &T, outcome: &Outcome) -> Result<()> {
    if let Some(dir) = &config.output_dir {
        write_outputs(dir, result, outcome)?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if global.json {
        serde_json::to_writer_pretty(&mut out, result)?;
        writeln!(out)?;
    } else if global.csv {
        match outcome.sweep {
            Some(s) => write_sweep_csv(&mut out, &s.records)?,
            None => write_summary_csv(&mut out, outcome.reports())?,
        }
    } else {
        for l in &outcome.lines {
            writeln!(out, "{l}")?;
        }
        let n: usize = outcome.summaries.iter().map(|s| s.reports.len()).sum();
        let skipped: usize = outcome.summaries.iter().map(|s| s.inapplicable.len()).sum();
        writeln!(out, "bound reports: {n}, inapplicable: {skipped}, failures: {}", outcome.failures.len())?;
    }
    Ok(())
}

fn write_outputs<T: Serialize>(dir: &Path, result: &T, outcome: &Outcome) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let create = |name: &str| -> Result<BufWriter<File>> {
        let p = dir.join(name);
        Ok(BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?))
    };
    let mut w = create("reports.jsonl")?;
    write_reports_jsonl(&mut w, outcome.reports())?;
    w.flush()?;
    let mut w = create("summary.csv")?;
    write_summary_csv(&mut w, outcome.reports())?;
    w.flush()?;
    if let Some(s) = outcome.sweep {
        let mut w = create("sweep.csv")?;
        write_sweep_csv(&mut w, &s.records)?;
        w.flush()?;
    }
    let mut w = create("result.json")?;
    serde_json::to_writer_pretty(&mut w, result)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn fmt_c(z: nepritz::linalg::C64) -> String {
    format!("{:.6e}{:+.6e}i", z.re, z.im)
}

fn fmt_slope(s: Option<f64>) -> String {
    s.map_or("n/a".into(), |v| format!("{v:.3}"))
}

fn run(cli: Cli) -> Result<Vec<String>> {
    let mut config = load_config(&cli.global)?;
    match cli.command {
        Command::Example1 { full_space } => {
            config.full_space |= full_space;
            config.validate()?;
            let report = run_example1(config.selection, config.full_space, &config.pipeline_options())?;
            let mut o = Outcome::new();
            o.lines.push(format!(
                "example1 (full space: {}): mu = {}, spectrum = [{}]",
                report.full_space,
                fmt_c(report.mu),
                report.spectrum.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(", ")
            ));
            o.checks(&report.checks);
            o.bounds(&report.bounds);
            emit(&cli.global, &config, &report, &o)?;
            Ok(o.failures)
        }
        Command::Example2 { sigma, seeds, seed_base } => {
            if let Some(v) = sigma {
                config.sigma = v;
            }
            if let Some(v) = seeds {
                config.seeds = v;
            }
            config.validate()?;
            let base = seed_base.unwrap_or(config.seed);
            let seed_list: Vec<u64> = (0..config.seeds as u64).map(|k| base.wrapping_add(k)).collect();
            let report = run_example2(config.sigma, &seed_list, &config.pipeline_options())?;
            let mut o = Outcome::new();
            o.lines.push(format!(
                "example2 (sigma {:e}, {} seeds): median sin Ritz {:.3e}, median sin refined {:.3e}, \
                 median residual ratio {:.3e}, max |mu| {:.3e}",
                report.sigma,
                report.records.len(),
                report.median_sin_ritz,
                report.median_sin_refined,
                report.median_ratio,
                report.max_abs_mu
            ));
            o.checks(&report.checks);
            for r in &report.records {
                o.bounds(&r.bounds);
            }
            emit(&cli.global, &config, &report, &o)?;
            Ok(o.failures)
        }
        Command::Sweep {
            problem,
            jordan,
            eps,
            trials,
            m,
        } => {
            if let Some(v) = eps {
                config.epsilon_list = v;
            }
            if let Some(v) = trials {
                config.trials = v;
            }
            if m.is_some() {
                config.subspace_dim = m;
            }
            if problem.is_some() {
                config.problem_path = problem;
            }
            config.validate()?;
            let options = config.pipeline_options();
            let result = if jordan {
                run_jordan_sweep(&config.epsilon_list, config.trials, config.seed, &options)?
            } else {
                let (t, reference) = match &config.problem_path {
                    Some(p) => {
                        let pr = load_problem(p).with_context(|| format!("loading {}", p.display()))?;
                        let Some(r) = pr.reference else {
                            bail!("{} has no reference pair", p.display());
                        };
                        (pr.function, r)
                    }
                    None => random_nep(ProblemKind::Polynomial, 8, config.seed)?,
                };
                if let Some(m) = config.subspace_dim {
                    if m >= t.dim() {
                        bail!("subspace dimension {m} must be below the problem dimension {}", t.dim());
                    }
                }
                run_sweep(
                    &t,
                    &reference,
                    &config.epsilon_list,
                    config.trials,
                    config.subspace_dim,
                    config.seed,
                    &options,
                )?
            };
            let mut o = Outcome::new();
            o.lines.push(format!(
                "sweep ({} records): distance slope {}, refined slope {}, predicted {}",
                result.records.len(),
                fmt_slope(result.distance_slope),
                fmt_slope(result.refined_slope),
                fmt_slope(result.predicted_slope)
            ));
            for r in &result.records {
                o.bounds(&r.bounds);
            }
            o.sweep = Some(&result);
            emit(&cli.global, &config, &result, &o)?;
            Ok(o.failures)
        }
        Command::VerifyAll { suite } => {
            if let Some(v) = suite {
                config.suite = v;
            }
            config.validate()?;
            let instances = if config.suite == "builtin" {
                builtin_suite(config.seed)?
            } else {
                let p = Path::new(&config.suite);
                load_suite_file(p).with_context(|| format!("loading suite {}", p.display()))?
            };
            let result = verify_all(&instances, &config.pipeline_options());
            let mut o = Outcome::new();
            o.lines.push(format!("verify-all: {} instances", result.instances.len()));
            for s in &result.instances {
                o.bounds(s);
            }
            // Instances that could not run at all have no summary.
            for (id, msg) in &result.errors {
                if !result.instances.iter().any(|s| &s.id == id) {
                    o.failures.push(format!("{id}: {msg}"));
                }
            }
            emit(&cli.global, &config, &result, &o)?;
            Ok(o.failures)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("{} failure(s):", failures.len());
            for f in &failures {
                eprintln!("  {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
