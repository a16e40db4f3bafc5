//! Command-line driver: simulation campaigns, formula evaluation, fitting and
//! run-record reporting.

mod config;
mod records;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use percolog::analysis::{fit_n_log, prefactor_report};
use percolog::cft;
use percolog::estimators::{
    estimate_arm, estimate_cut_window, estimate_event_b, estimate_segment_expectation_multi,
    estimate_window_grid, fingerprint, RunOpts, ScalePartition,
};
use percolog::lattice::DomainKind;
use percolog::percolation::{ArmKind, BVertexRule};
use serde_json::json;

use config::{resolve, resolve_opt, FileConfig};
use records::RunRecord;

#[derive(Parser)]
#[command(name = "percolog", version, about = "Critical-percolation cluster counting on the triangular lattice")]
struct Cli {
    /// Config file (key = value lines or one JSON object); flags win over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; falls back to PERCOLOG_WORKERS, then all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run-record JSONL file, appended to by every simulation command.
    #[arg(long, global = true, default_value = "percolog-runs.jsonl")]
    records: PathBuf,
    /// Write the output table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Half,
    Full,
}

impl From<DomainArg> for DomainKind {
    fn from(d: DomainArg) -> DomainKind {
        match d {
            DomainArg::Half => DomainKind::HalfPlane,
            DomainArg::Full => DomainKind::FullPlane,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowObservable {
    /// E[T(i)] from half/full-plane samples.
    T,
    /// S(i) and T~(i) from cut-plane samples, one domain per window.
    S,
    /// P(B(i)) from full-plane samples.
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArmArg {
    One,
    Three,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaOp {
    Cardy,
    Watts,
    /// Expected number of crossing clusters N(lambda).
    CrossingClusters,
    /// 3F2(1, 4/3, 1; 5/3, 2; x) from the Watts/N formulas.
    Hyp3f2,
    /// Limit of P(W'_k) at window aspect eps.
    WprimeLimit,
    /// Cross-ratio lambda(eps) of the cut-plane window.
    CutLambda,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expected number of clusters meeting the segment [1, n].
    Simulate {
        #[arg(long, value_enum, default_value = "half")]
        domain: DomainArg,
        /// Segment lengths, ascending (shared samples).
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<i32>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        truncation: Option<i32>,
    },
    /// Window statistics T(i), S(i)/T~(i) or B(i) on a scale partition.
    Windows {
        #[arg(long, value_enum, default_value = "half")]
        domain: DomainArg,
        #[arg(long)]
        n: i32,
        /// Window aspect ratios (shared samples for observable t).
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value = "t")]
        observable: WindowObservable,
        /// Window indices for observable s (default: every window).
        #[arg(long, value_delimiter = ',')]
        window: Vec<usize>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        truncation: Option<i32>,
        /// Append the eps -> 0 prefactor extrapolation rows (observable t).
        #[arg(long)]
        extrapolate: bool,
    },
    /// One-arm or three-arm probability between centered boxes.
    Arm {
        #[arg(long)]
        m: i32,
        #[arg(long)]
        n: i32,
        #[arg(long, value_enum, default_value = "three")]
        kind: ArmArg,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        truncation: Option<i32>,
    },
    /// Evaluate a scaling-limit formula on a grid.
    Formula {
        #[arg(long, value_enum)]
        op: FormulaOp,
        /// Cross-ratio grid for cardy/watts/crossing-clusters/hyp3f2.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<f64>,
        /// Aspect grid for wprime-limit/cut-lambda.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Series-domain cap above which the symmetry continuation is used.
        #[arg(long)]
        lambda_cap: Option<f64>,
    },
    /// Fit E(n) = A n + B ln n + C to simulate records.
    Fit {
        /// Records file (defaults to --records).
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Merge run records by fingerprint and print one row per observable.
    Report {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run a self-check suite; exit 0 iff everything passes.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<percolog::Error>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

/// Rows go through a single writer; workers never touch the output.
struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    fn open(out: &Option<PathBuf>, header: &[&str]) -> Result<Table> {
        let sink: Box<dyn Write> = match out {
            Some(path) => Box::new(
                std::fs::File::create(path)
                    .with_context(|| format!("creating {}", path.display()))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

fn fmt(x: f64) -> String {
    format!("{x}")
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let workers = match resolve_opt(cli.workers, &cfg, "workers")? {
        Some(w) => Some(w),
        None => std::env::var("PERCOLOG_WORKERS").ok().map(|v| v.parse()).transpose()?,
    };
    if let Some(w) = workers {
        rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global().ok();
    }

    let started = RunRecord::started();
    match cli.cmd {
        Cmd::Simulate { domain, n, trials, seed, truncation } => {
            let opts = run_opts(trials, seed, truncation, &cfg)?;
            let kind: DomainKind = domain.into();
            let reports = estimate_segment_expectation_multi(&n, kind, &opts)?;
            let fp = fingerprint(&[1, domain as u64, *n.last().unwrap() as u64, opts.trials]);
            let mut table = Table::open(&cli.out, &["observable", "n", "mean", "stderr", "trials", "truncation"])?;
            for (r, &len) in reports.iter().zip(&n) {
                table.row(&[r.observable.clone(), len.to_string(), fmt(r.mean), fmt(r.stderr), r.trials.to_string(), r.truncation.to_string()])?;
            }
            table.finish()?;
            let params = json!({
                "domain": domain_name(domain), "n": n, "trials": opts.trials,
                "seed": opts.master_seed, "truncation": opts.truncation,
            });
            let accs = reports.iter().map(|r| records::accumulator_of(r, fp)).collect();
            records::append(&cli.records, &RunRecord::new("simulate", params, fp, started, accs))?;
        }
        Cmd::Windows { domain, n, ref eps, observable, ref window, trials, seed, truncation, extrapolate } => {
            let opts = run_opts(trials, seed, truncation, &cfg)?;
            let (eps, window) = (eps.clone(), window.clone());
            run_windows(&cli, &cfg, domain, n, &eps, observable, &window, &opts, extrapolate, started)?;
        }
        Cmd::Arm { m, n, kind, trials, seed, truncation } => {
            let opts = run_opts(trials, seed, truncation, &cfg)?;
            let kind = match kind {
                ArmArg::One => ArmKind::OneArm,
                ArmArg::Three => ArmKind::ThreeArm,
            };
            let r = estimate_arm(m, n, kind, &opts)?;
            let fp = fingerprint(&[6, m as u64, n as u64, opts.trials]);
            let mut table = Table::open(&cli.out, &["observable", "m", "n", "mean", "stderr", "trials", "truncation"])?;
            table.row(&[r.observable.clone(), m.to_string(), n.to_string(), fmt(r.mean), fmt(r.stderr), r.trials.to_string(), r.truncation.to_string()])?;
            table.finish()?;
            let params = json!({
                "m": m, "n": n, "kind": r.observable, "trials": opts.trials,
                "seed": opts.master_seed, "truncation": opts.truncation,
            });
            let accs = vec![records::accumulator_of(&r, fp)];
            records::append(&cli.records, &RunRecord::new("arm", params, fp, started, accs))?;
        }
        Cmd::Formula { op, lambda, eps, lambda_cap } => {
            let cap = resolve(lambda_cap, &cfg, "lambda-cap", cft::X_MAX)?;
            run_formula(&cli.out, op, &lambda, &eps, cap)?;
        }
        Cmd::Fit { input } => {
            let path = input.unwrap_or_else(|| cli.records.clone());
            run_fit(&cli.out, &path)?;
        }
        Cmd::Report { input } => {
            let path = input.unwrap_or_else(|| cli.records.clone());
            let merged = records::merge(records::load(&path)?);
            let mut table = Table::open(&cli.out, &["command", "fingerprint", "observable", "trials", "mean", "stderr"])?;
            for rec in &merged {
                for a in &rec.accumulators {
                    table.row(&[rec.command.clone(), format!("{:016x}", rec.fingerprint), a.observable.clone(), a.trials.to_string(), fmt(a.mean()), fmt(a.stderr())])?;
                }
            }
            table.finish()?;
        }
        Cmd::Verify { suite } => verify::run(suite)?,
    }
    Ok(())
}

fn domain_name(d: DomainArg) -> &'static str {
    match d {
        DomainArg::Half => "half",
        DomainArg::Full => "full",
    }
}

fn run_opts(
    trials: Option<u64>,
    seed: Option<u64>,
    truncation: Option<i32>,
    cfg: &FileConfig,
) -> Result<RunOpts> {
    let trials = resolve(trials, cfg, "trials", 10_000)?;
    let seed = resolve(seed, cfg, "seed", 0)?;
    let mut opts = RunOpts::new(trials, seed);
    opts.truncation = resolve_opt(truncation, cfg, "truncation")?;
    Ok(opts)
}

#[allow(clippy::too_many_arguments)]
fn run_windows(
    cli: &Cli,
    _cfg: &FileConfig,
    domain: DomainArg,
    n: i32,
    eps: &[f64],
    observable: WindowObservable,
    window: &[usize],
    opts: &RunOpts,
    extrapolate: bool,
    started: u64,
) -> Result<()> {
    let kind: DomainKind = domain.into();
    let fp = fingerprint(&[3, domain as u64, n as u64, observable as u64, opts.trials]);
    let params = json!({
        "domain": domain_name(domain), "n": n, "eps": eps, "trials": opts.trials,
        "seed": opts.master_seed, "truncation": opts.truncation,
    });
    let header = ["n", "eps", "window", "lo", "hi", "observable", "mean", "stderr", "trials"];
    let mut table = Table::open(&cli.out, &header)?;
    let mut accs = Vec::new();
    match observable {
        WindowObservable::T => {
            let grids = estimate_window_grid(n, eps, kind, opts)?;
            for g in &grids {
                let p = &g.partition;
                table.row(&[n.to_string(), fmt(g.eps), "0".into(), "2".into(), p.a(1).to_string(), g.f0.observable.clone(), fmt(g.f0.mean()), fmt(g.f0.stderr()), g.f0.trials.to_string()])?;
                for (i, w) in g.windows.iter().enumerate() {
                    let (lo, hi) = p.window_bounds(i + 1);
                    table.row(&[n.to_string(), fmt(g.eps), (i + 1).to_string(), lo.to_string(), hi.to_string(), w.observable.clone(), fmt(w.mean()), fmt(w.stderr()), w.trials.to_string()])?;
                }
                table.row(&[n.to_string(), fmt(g.eps), "-".into(), "2".into(), n.to_string(), g.total.observable.clone(), fmt(g.total.mean()), fmt(g.total.stderr()), g.total.trials.to_string()])?;
                accs.push(records::retag(g.f0.clone(), fp));
                accs.extend(g.windows.iter().map(|w| records::retag(w.clone(), fp)));
                accs.push(records::retag(g.total.clone(), fp));
            }
            if extrapolate && eps.len() >= 2 {
                let rep = prefactor_report(&grids)?;
                table.row(&[n.to_string(), "0".into(), "-".into(), "-".into(), "-".into(), "L_hat(eps->0)".into(), fmt(rep.extrapolated), fmt(rep.extrapolated_stderr), opts.trials.to_string()])?;
            }
        }
        WindowObservable::S => {
            for &e in eps {
                let p = ScalePartition::new(n, e)?;
                let picked: Vec<usize> = if window.is_empty() {
                    (1..=p.window_count()).collect()
                } else {
                    window.to_vec()
                };
                for &i in &picked {
                    let r = estimate_cut_window(n, e, i, opts)?;
                    let (lo, hi) = r.bounds;
                    table.row(&[n.to_string(), fmt(e), i.to_string(), lo.to_string(), hi.to_string(), r.s.observable.clone(), fmt(r.s.mean()), fmt(r.s.stderr()), r.s.trials.to_string()])?;
                    table.row(&[n.to_string(), fmt(e), i.to_string(), lo.to_string(), hi.to_string(), r.t_tilde.observable.clone(), fmt(r.t_tilde.mean()), fmt(r.t_tilde.stderr()), r.t_tilde.trials.to_string()])?;
                    accs.push(records::retag(r.s.clone(), fp));
                    accs.push(records::retag(r.t_tilde.clone(), fp));
                }
            }
        }
        WindowObservable::B => {
            for &e in eps {
                let p = ScalePartition::new(n, e)?;
                let reports = estimate_event_b(n, e, BVertexRule::EitherVertex, opts)?;
                for (i, r) in reports.iter().enumerate() {
                    let (lo, hi) = p.window_bounds(i + 1);
                    table.row(&[n.to_string(), fmt(e), (i + 1).to_string(), lo.to_string(), hi.to_string(), r.observable.clone(), fmt(r.mean), fmt(r.stderr), r.trials.to_string()])?;
                    accs.push(records::accumulator_of(r, fp));
                }
            }
        }
    }
    table.finish()?;
    records::append(&cli.records, &RunRecord::new("windows", params, fp, started, accs))?;
    Ok(())
}

fn run_formula(
    out: &Option<PathBuf>,
    op: FormulaOp,
    lambda: &[f64],
    eps: &[f64],
    cap: f64,
) -> Result<()> {
    let err = |what: &str| percolog::Error::Argument(format!("formula --op {what}"));
    let mut table = Table::open(out, &["op", "argument", "value", "abs_error_bound"])?;
    let lambda_based = |name: &str,
                        f: &dyn Fn(f64) -> percolog::Result<cft::FormulaValue>,
                        table: &mut Table|
     -> Result<()> {
        if lambda.is_empty() {
            return Err(err(&format!("{name} needs --lambda")).into());
        }
        for &x in lambda {
            let v = f(x)?;
            table.row(&[name.into(), fmt(x), fmt(v.value), fmt(v.abs_error_bound)])?;
        }
        Ok(())
    };
    match op {
        FormulaOp::Cardy => lambda_based("cardy", &|x| cft::cardy_with_cap(x, cap), &mut table)?,
        FormulaOp::Watts => lambda_based("watts", &|x| cft::watts_with_cap(x, cap), &mut table)?,
        FormulaOp::CrossingClusters => lambda_based(
            "crossing-clusters",
            &|x| cft::expected_crossing_clusters_with_cap(x, cap),
            &mut table,
        )?,
        FormulaOp::Hyp3f2 => {
            lambda_based("hyp3f2", &|x| cft::hyp3f2_special_with_cap(x, cap), &mut table)?
        }
        FormulaOp::WprimeLimit => {
            if eps.is_empty() {
                return Err(err("wprime-limit needs --eps").into());
            }
            for &e in eps {
                let v = cft::halfplane_wprime_limit_with_cap(e, cap)?;
                table.row(&["wprime-limit".into(), fmt(e), fmt(v.value), fmt(v.abs_error_bound)])?;
            }
        }
        FormulaOp::CutLambda => {
            if eps.is_empty() {
                return Err(err("cut-lambda needs --eps").into());
            }
            for &e in eps {
                let v = cft::cut_plane_lambda(e)?;
                table.row(&["cut-lambda".into(), fmt(e), fmt(v.lambda), "0".into()])?;
            }
        }
    }
    table.finish()
}

fn run_fit(out: &Option<PathBuf>, path: &PathBuf) -> Result<()> {
    let merged = records::merge(records::load(path)?);
    let mut points: Vec<(i32, f64, f64)> = Vec::new();
    for rec in &merged {
        if rec.command != "simulate" {
            continue;
        }
        for a in &rec.accumulators {
            // observable form: segment_clusters(n=N)
            if let Some(n) = a
                .observable
                .strip_prefix("segment_clusters(n=")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.parse::<i32>().ok())
            {
                points.push((n, a.mean(), a.stderr()));
            }
        }
    }
    let fit = fit_n_log(&points)?;
    let summary = json!({
        "model": "mean = A*n + B*ln(n) + C",
        "points": points.len(),
        "a": fit.a, "a_stderr": fit.stderr_a(),
        "b": fit.b, "b_stderr": fit.stderr_b(),
        "c": fit.c, "c_stderr": fit.stderr_c(),
        "residual_norm": fit.residual_norm,
        "halfplane_log_prefactor": cft::halfplane_prefactor(),
    });
    match out {
        Some(path) => std::fs::write(path, format!("{summary:#}\n"))?,
        None => println!("{summary:#}"),
    }
    Ok(())
}
