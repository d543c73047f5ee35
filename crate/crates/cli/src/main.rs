use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use capdetect::channels::{self, Channel, DOCUMENT_COMPLETENESS_TOL};
use capdetect::detection::sweep::{sweep, Axis, ChannelSpec, FamilyKind, Mode, SweepRow};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Detected lower bounds on quantum channel capacities.
///
/// Without a subcommand the flags are those of `run`.
#[derive(Parser, Debug)]
#[command(name = "capdetect", version, args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one channel or a parameter sweep.
    Run(RunArgs),
    /// Check a custom channel file and print a summary.
    Validate {
        path: PathBuf,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Family name or path to a channel JSON file.
    #[arg(long, required = true)]
    channel: Option<String>,
    /// Fixed parameter, `name=value`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Comma-separated weights for `pauli` or `generalized-pauli`.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Shots per measurement setting in shot mode.
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// One swept parameter, `name:start:stop:step`.
    #[arg(long, conflicts_with = "grid")]
    sweep: Option<String>,
    /// Two swept parameters, long-format output.
    #[arg(long, num_args = 2, value_names = ["AXIS1", "AXIS2"])]
    grid: Option<Vec<String>>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Shots,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct Metadata {
    version: &'static str,
    command: String,
    channel: String,
    dim: usize,
    mode: &'static str,
    shots: Option<u64>,
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Run(args)) => run(&args),
        Some(Command::Validate { path }) => validate(&path),
        None => run(&cli.run),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn parse_param(s: &str) -> Result<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .with_context(|| format!("parameter `{s}` is not NAME=VALUE"))?;
    let value: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("parameter `{s}` has a non-numeric value"))?;
    Ok((name.trim().to_string(), value))
}

fn channel_spec(args: &RunArgs) -> Result<ChannelSpec> {
    let name = args.channel.as_deref().context("--channel is required")?;
    let mut spec = match name.parse::<FamilyKind>() {
        Ok(kind) => ChannelSpec::family(kind, args.dim),
        Err(_) if Path::new(name).is_file() => {
            ChannelSpec::custom(channels::load_channel_file(name).with_context(|| format!("loading {name}"))?)
        }
        Err(_) => {
            let known: Vec<_> = FamilyKind::ALL.iter().map(|k| k.name()).collect();
            bail!("`{name}` is neither a channel family ({}) nor a file", known.join(", "));
        }
    };
    for p in &args.params {
        let (k, v) = parse_param(p)?;
        spec.params.insert(k, v);
    }
    spec.weights = args.weights.clone();
    Ok(spec)
}

fn axes(args: &RunArgs) -> Result<Vec<Axis>> {
    let raw: Vec<&String> = args.sweep.iter().chain(args.grid.iter().flatten()).collect();
    Ok(raw.into_iter().map(|s| s.parse()).collect::<capdetect::Result<_>>()?)
}

fn run(args: &RunArgs) -> Result<ExitCode> {
    let spec = channel_spec(args)?;
    let axes = axes(args)?;
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Shots => {
            if args.shots == 0 {
                bail!("--shots must be at least 1");
            }
            Mode::Shots {
                shots: args.shots,
                seed: args.seed,
            }
        }
    };
    let rows = sweep(&spec, &axes, mode)?;

    // fixed parameters that no axis overrides are repeated on every row
    let fixed: BTreeMap<&str, f64> = spec
        .params
        .iter()
        .filter(|(k, _)| !axes.iter().any(|a| &a.name == *k))
        .map(|(k, &v)| (k.as_str(), v))
        .collect();

    let meta = Metadata {
        version: VERSION,
        command: command_line(),
        channel: args.channel.clone().unwrap_or_default(),
        dim: spec.dim,
        mode: match mode {
            Mode::Exact => "exact",
            Mode::Shots { .. } => "shots",
        },
        shots: match mode {
            Mode::Shots { shots, .. } => Some(shots),
            Mode::Exact => None,
        },
        seed: args.seed,
    };
    let text = match args.format {
        Format::Csv => render_csv(&meta, &fixed, &axes, &rows),
        Format::Json => render_json(&meta, &fixed, &rows)?,
    };
    match &args.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

/// Arguments after the program name; the program path itself is left out so
/// the header does not depend on where the binary lives.
fn command_line() -> String {
    std::iter::once("capdetect".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

const COLUMNS: [&str; 14] = [
    "q_det_optimized",
    "q_det_bell",
    "output_entropy",
    "shannon_H",
    "capacity",
    "capacity_exact",
    "hashing_bound",
    "upper_bound",
    "ce_lower",
    "p_lower",
    "basis_family",
    "theta1",
    "theta2",
    "clamped",
];

fn render_csv(meta: &Metadata, fixed: &BTreeMap<&str, f64>, axes: &[Axis], rows: &[SweepRow]) -> String {
    let mut out = String::new();
    writeln!(out, "# capdetect {}", meta.version).unwrap();
    writeln!(out, "# command: {}", meta.command).unwrap();
    writeln!(out, "# channel: {} (dim {})", meta.channel, meta.dim).unwrap();
    match meta.shots {
        Some(s) => writeln!(out, "# mode: shots ({s} per setting)").unwrap(),
        None => writeln!(out, "# mode: {}", meta.mode).unwrap(),
    }
    writeln!(out, "# seed: {}", meta.seed).unwrap();

    let header: Vec<&str> = fixed
        .keys()
        .copied()
        .chain(axes.iter().map(|a| a.name.as_str()))
        .chain(COLUMNS)
        .collect();
    writeln!(out, "{}", header.join(",")).unwrap();
    for r in rows {
        let mut cells: Vec<String> = fixed.values().map(f64::to_string).collect();
        cells.extend(r.params.iter().map(|(_, v)| v.to_string()));
        cells.extend([
            r.q_det_optimized.to_string(),
            opt(r.q_det_bell),
            r.output_entropy.to_string(),
            r.shannon.to_string(),
            opt(r.capacity),
            r.capacity_exact.map(|b| b.to_string()).unwrap_or_default(),
            opt(r.hashing_bound),
            opt(r.upper_bound),
            r.ce_lower.to_string(),
            r.p_lower.to_string(),
            r.family.name().to_string(),
            r.theta1.to_string(),
            r.theta2.to_string(),
            r.clamped.to_string(),
        ]);
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

fn render_json(meta: &Metadata, fixed: &BTreeMap<&str, f64>, rows: &[SweepRow]) -> Result<String> {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut params: serde_json::Map<String, serde_json::Value> =
                fixed.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
            for (k, v) in &r.params {
                params.insert(k.clone(), (*v).into());
            }
            let mut row = serde_json::to_value(r)?;
            row["params"] = params.into();
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let doc = serde_json::json!({ "metadata": meta, "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

fn validate(path: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = channels::parse_document(&text)?;
    let label = doc.label.clone().unwrap_or_else(|| "custom".into());
    let kraus = doc.matrices()?;
    let count = kraus.len();
    // unchecked build, only to measure the residual
    let residual = Channel::with_tolerance(doc.d_in, doc.d_out, kraus, label.as_str(), f64::INFINITY)?
        .completeness_residual();
    println!("channel: {label}");
    println!("dimensions: {} -> {}", doc.d_in, doc.d_out);
    println!("kraus operators: {count}");
    println!("completeness residual: {residual:.3e}");
    if residual > DOCUMENT_COMPLETENESS_TOL {
        println!("status: INVALID (not trace preserving, tolerance {DOCUMENT_COMPLETENESS_TOL:e})");
        return Ok(ExitCode::FAILURE);
    }
    println!("status: OK");
    Ok(ExitCode::SUCCESS)
}
