//! `hullsep`: estimate disjoint convex hull decompositions, build and verify
//! explicit separating networks, and run training size sweeps.
//!
//! Exit codes: 0 success, 1 construction or verification failed, 2 input
//! error.

mod dataset;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hullsep::activation::min_delta;
use hullsep::constructor::construct_reusing;
use hullsep::decomposition::{
    validate_decomposition_with, DecomposerRegistry, Decomposition, EstimateConfig,
    ValidationReport,
};
use hullsep::geometry::hull_distance_with;
use hullsep::trainer::{size_sweep, write_sweep_csv, TrainConfig};
use hullsep::{verify_separation, ActivationSpec, ConstructedNetwork, Error, PointSet, Tolerances};
use log::info;
use serde_json::json;

use dataset::{DatasetArgs, Loaded};
use report::{DatasetSummary, DecompositionSummary, DeltaRow, RunReport};

#[derive(Debug, Parser)]
#[command(name = "hullsep", version, about)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DecomposeOpts {
    /// Random projections for the residual overlap (default max(200, 2 * dim)).
    #[arg(long)]
    projections: Option<usize>,

    /// Decomposition strategy.
    #[arg(long, default_value = "peel")]
    strategy: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate L1 and L2 and validate the decomposition.
    Decompose {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        dec: DecomposeOpts,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the raw inter-class distance and the minimal delta per activation.
    Delta {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        dec: DecomposeOpts,
        /// Only this activation (default: all four).
        #[arg(long)]
        activation: Option<String>,
        /// Part count; estimated from the data when absent.
        #[arg(long = "L")]
        parts: Option<usize>,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a separating network, write it, and verify it.
    Construct {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        dec: DecomposeOpts,
        /// Activation name, e.g. `sigmoid` or `leaky_relu:0.2:1`.
        #[arg(long, default_value = "relu")]
        activation: String,
        /// Network JSON path.
        #[arg(long)]
        out: PathBuf,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a written network against a dataset.
    Verify {
        /// Network JSON path.
        #[arg(long)]
        net: PathBuf,
        #[command(flatten)]
        data: DatasetArgs,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Train networks over a grid of sizes and activations.
    Train {
        #[command(flatten)]
        data: DatasetArgs,
        /// Hidden sizes as `h1xh2` pairs.
        #[arg(long, value_delimiter = ',', default_value = "1x1,2x1,4x2,9x3,36x6")]
        sizes: Vec<String>,
        /// Activation names to sweep.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "sigmoid,tanh,relu,leaky_relu"
        )]
        activations: Vec<String>,
        /// Passes over the data per run.
        #[arg(long, default_value_t = 20)]
        epochs: usize,
        /// Minibatch size.
        #[arg(long, default_value_t = 150)]
        batch: usize,
        /// SGD step size.
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        /// Independent runs averaged per cell.
        #[arg(long, default_value_t = 3)]
        runs: usize,
        /// Sweep CSV path.
        #[arg(long)]
        out: PathBuf,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Construction and validation failures are 1, everything else is bad input.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Construction { .. }
            | Error::InvalidDecomposition { .. }
            | Error::NotSeparated { .. }
            | Error::DeltaTooSmall { .. },
        ) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let seed = cli.seed;
    match cli.command {
        Command::Decompose { data, dec, out } => {
            let mut rep = RunReport::new(
                "decompose",
                seed,
                json!({ "data": &data, "projections": dec.projections, "strategy": &dec.strategy }),
            );
            let l = load(&data, seed, &mut rep)?;
            let (d, v) = decompose(&l, &dec, seed, &mut rep)?;
            println!(
                "L1={} L2={} valid={} min_distance={:.6}",
                d.l1(),
                d.l2(),
                v.valid,
                v.min_distance
            );
            finish(&rep, out.as_deref())?;
            Ok(if v.valid {
                Outcome::Ok
            } else {
                Outcome::Failed
            })
        }
        Command::Delta {
            data,
            dec,
            activation,
            parts,
            out,
        } => {
            let mut rep = RunReport::new(
                "delta",
                seed,
                json!({ "data": &data, "projections": dec.projections, "strategy": &dec.strategy, "activation": &activation, "L": parts }),
            );
            let activations = match &activation {
                Some(a) => vec![ActivationSpec::parse(a)?],
                None => ActivationSpec::standard(),
            };
            let l = load(&data, seed, &mut rep)?;
            let tol = Tolerances::default();
            let raw = rep.time("raw_delta", || {
                hull_distance_with(&l.x, &l.y, &tol.hull_options())
            })?;
            rep.raw_delta = Some(raw.distance);
            println!("delta={:.6}", raw.distance);
            let parts = match parts {
                Some(0) => bail!("--L must be at least 1"),
                Some(p) => p,
                None => {
                    let (d, v) = decompose(&l, &dec, seed, &mut rep)?;
                    println!(
                        "L1={} L2={} min_part_distance={:.6}",
                        d.l1(),
                        d.l2(),
                        v.min_distance
                    );
                    d.l1().max(d.l2())
                }
            };
            let diameter = diameter_bound(&l.x.concat(&l.y)?);
            for a in &activations {
                let dia = a.leaky_slopes().map(|_| diameter);
                let m = min_delta(&**a, parts, dia)?;
                println!("min_delta[{a}] L={parts}: {m:.4}");
                rep.delta_table.push(DeltaRow {
                    activation: a.to_string(),
                    parts,
                    min_delta: m,
                    diameter: dia,
                });
            }
            finish(&rep, out.as_deref())?;
            Ok(Outcome::Ok)
        }
        Command::Construct {
            data,
            dec,
            activation,
            out,
            report,
        } => {
            let mut rep = RunReport::new(
                "construct",
                seed,
                json!({ "data": &data, "projections": dec.projections, "strategy": &dec.strategy, "activation": &activation, "out": &out }),
            );
            let a = ActivationSpec::parse(&activation)?;
            let l = load(&data, seed, &mut rep)?;
            let (d, v) = decompose(&l, &dec, seed, &mut rep)?;
            if !v.valid {
                let (i, j) = v.offending.unwrap_or_default();
                return Err(Error::InvalidDecomposition {
                    part_1: i,
                    part_2: j,
                }
                .into());
            }
            let tol = Tolerances::default();
            let mut net = rep.time("construct", || {
                construct_reusing(&l.x, &l.y, &d, &a, &tol, Some(&v))
            })?;
            net.labels = Some(l.labels.clone());
            std::fs::write(&out, net.to_json()?)
                .with_context(|| format!("writing {}", out.display()))?;
            let ok = check(&net, &l, &mut rep)?;
            finish(&rep, report.as_deref())?;
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Verify {
            net,
            mut data,
            report,
        } => {
            let mut rep = RunReport::new("verify", seed, json!({ "data": &data, "net": &net }));
            let s = std::fs::read_to_string(&net)
                .with_context(|| format!("reading {}", net.display()))?;
            let net = ConstructedNetwork::from_json(&s)?;
            if data.labels.is_none() {
                data.labels = net.labels.clone().map(|(a, b)| vec![a, b]);
            }
            let l = load(&data, seed, &mut rep)?;
            let ok = check(&net, &l, &mut rep)?;
            finish(&rep, report.as_deref())?;
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Train {
            data,
            sizes,
            activations,
            epochs,
            batch,
            lr,
            runs,
            out,
            report,
        } => {
            let mut rep = RunReport::new(
                "train",
                seed,
                json!({ "data": &data, "sizes": &sizes, "activations": &activations, "epochs": epochs, "batch": batch, "lr": lr, "runs": runs, "out": &out }),
            );
            let sizes = sizes
                .iter()
                .map(|s| parse_size(s))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let activations = activations
                .iter()
                .map(|a| ActivationSpec::parse(a))
                .collect::<Result<Vec<_>, _>>()?;
            let l = load(&data, seed, &mut rep)?;
            let two = two_class(&l)?;
            let cfg = TrainConfig {
                epochs,
                batch_size: batch,
                learning_rate: lr,
                seed,
                runs,
                ..TrainConfig::default()
            };
            let rows = rep.time("train", || size_sweep(&two, &sizes, &activations, &cfg))?;
            write_sweep_csv(&rows, &out)?;
            for r in &rows {
                match &r.error {
                    Some(e) => println!("{}x{} {}: error: {e}", r.h1, r.h2, r.activation),
                    None => println!(
                        "{}x{} {}: loss={:.5} accuracy={:.4}",
                        r.h1, r.h2, r.activation, r.final_loss, r.accuracy
                    ),
                }
            }
            finish(&rep, report.as_deref())?;
            Ok(if rows.iter().any(|r| r.error.is_some()) {
                Outcome::Failed
            } else {
                Outcome::Ok
            })
        }
    }
}

fn load(data: &DatasetArgs, seed: u64, rep: &mut RunReport) -> anyhow::Result<Loaded> {
    let l = rep.time("load", || data.load(seed))?;
    info!(
        "loaded {} + {} points in {} dims",
        l.x.len(),
        l.y.len(),
        l.x.dim()
    );
    rep.dataset = Some(DatasetSummary {
        name: l.dataset.name.clone(),
        labels: l.labels.clone(),
        n1: l.x.len(),
        n2: l.y.len(),
        dim: l.x.dim(),
    });
    Ok(l)
}

fn decompose(
    l: &Loaded,
    opts: &DecomposeOpts,
    seed: u64,
    rep: &mut RunReport,
) -> anyhow::Result<(Decomposition, ValidationReport)> {
    let registry = DecomposerRegistry::default();
    let strategy = registry.get(&opts.strategy)?;
    let cfg = EstimateConfig {
        n_projections: opts.projections,
        seed,
        separation_tol: None,
    };
    let d = rep.time("decompose", || strategy.decompose(&l.x, &l.y, &cfg))?;
    let tol = Tolerances::default();
    let sep = tol.separation_tol(l.x.scale().max(l.y.scale()));
    let v = rep.time("validate", || {
        validate_decomposition_with(&d, sep, &tol.hull_options())
    })?;
    rep.decomposition = Some(DecompositionSummary {
        strategy: strategy.name().to_string(),
        l1: d.l1(),
        l2: d.l2(),
        valid: v.valid,
        min_distance: v.min_distance,
        offending: v.offending,
        projections_used: d.projections_used,
        peel_iterations: d.peel_iterations,
    });
    Ok((d, v))
}

fn check(net: &ConstructedNetwork, l: &Loaded, rep: &mut RunReport) -> anyhow::Result<bool> {
    let s = rep.time("verify", || verify_separation(net, &l.x, &l.y))?;
    let (h1, h2) = net.hidden_sizes();
    println!(
        "hidden=({h1},{h2}) activation={} all_correct={} misclassified={} certified={} final_hull_distance={:.3e}",
        net.activation,
        s.all_correct,
        s.misclassified.len(),
        s.certified,
        s.final_hull_distance
    );
    let ok = s.all_correct;
    rep.hidden_sizes = Some((h1, h2));
    rep.construction = Some(s);
    Ok(ok)
}

/// The dataset restricted to the chosen pair, first label first.
fn two_class(l: &Loaded) -> anyhow::Result<hullsep::LabeledDataset> {
    let points = l.x.concat(&l.y)?;
    let labels = std::iter::repeat_n(l.labels.0.clone(), l.x.len())
        .chain(std::iter::repeat_n(l.labels.1.clone(), l.y.len()))
        .collect();
    Ok(hullsep::LabeledDataset::new(
        points,
        labels,
        l.dataset.name.clone(),
    )?)
}

fn parse_size(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("size {s:?} is not of the form h1xh2"))?;
    Ok((
        a.trim()
            .parse()
            .with_context(|| format!("bad size {s:?}"))?,
        b.trim()
            .parse()
            .with_context(|| format!("bad size {s:?}"))?,
    ))
}

/// Twice the largest distance from the centroid, an upper bound on the
/// diameter that costs one pass.
fn diameter_bound(p: &PointSet) -> f64 {
    let c = p.mean().unwrap_or_default();
    2.0 * p
        .iter()
        .map(|q| hullsep::geometry::dist(q, &c))
        .fold(0.0, f64::max)
}

fn finish(rep: &RunReport, out: Option<&std::path::Path>) -> anyhow::Result<()> {
    if let Some(p) = out {
        rep.write(p)?;
    }
    Ok(())
}
