use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use signlab_cli::config::ModeName;
use signlab_cli::{run, write_outputs, CliError, ExperimentConfig, Format, EXIT_ACCEPTANCE};

/// Sieves, sign-pattern densities, random-graph simulations and prime-triple counts.
///
/// Every run can be described by a JSON config (`--config`); flags given on the
/// command line override the file. Results go to `--out` (or stdout) and a
/// manifest `<out>.manifest.json` records the config, timings and checksums.
///
/// Exit status: 0 success, 1 runtime error, 2 usage or config error,
/// 3 a report contains a failed claim.
#[derive(Parser, Debug)]
#[command(name = "signlab", version)]
struct Cli {
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Result file; written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Result format: json, csv or edgelist (graph only).
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed for stochastic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated window ends N₁ < N₂ < … for pattern ladders.
    #[arg(long, global = true, value_delimiter = ',')]
    scales: Option<Vec<u64>>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sieve λ, μ (and μ² truncated at w) over [start, start + len).
    Sieve(SieveArgs),
    /// Density of a sign pattern such as "^+-+" across a window ladder.
    Pattern(PatternArgs),
    /// Joint distribution of (μ(n), μ(n+1)) for n < N.
    Pairs(PairsArgs),
    /// Short-interval sums of λ or μ, optionally twisted.
    Interval(IntervalArgs),
    /// Density of runs λ ≡ +1 on (t − a, t + a).
    Rundensity(RunDensityArgs),
    /// Random-graph samples: components, connectivity of {0, X}, edge invariants.
    Graph(GraphArgs),
    /// Weighted path ensemble: S₁, endpoints and the collision diagnostic.
    Ensemble(EnsembleArgs),
    /// Prime triples m = −p₁ + p₂ − p₃ against the circle-method main term.
    Triples(TriplesArgs),
    /// Verdict table over result files.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct SieveArgs {
    #[arg(long)]
    start: Option<u64>,
    #[arg(long)]
    len: Option<u64>,
    /// Truncation bound for the μ² mask.
    #[arg(long)]
    w: Option<u64>,
    /// Cache file or directory.
    #[arg(long, env = "SIGNLAB_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PatternArgs {
    /// Pattern over + - * with ^ before the marked symbol.
    #[arg(long)]
    expr: Option<String>,
    /// lambda or mu2.
    #[arg(long = "fn")]
    function: Option<String>,
    /// Largest window when --scales is absent.
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct PairsArgs {
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct IntervalArgs {
    /// lambda or mu.
    #[arg(long = "fn")]
    function: Option<String>,
    /// none, chi3, chi+ or chi-.
    #[arg(long)]
    twist: Option<String>,
    /// Comma-separated interval lengths.
    #[arg(long, value_delimiter = ',')]
    h: Option<Vec<u64>>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct RunDensityArgs {
    /// Comma-separated half-widths.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// profinite or integer.
    #[arg(long)]
    mode: Option<ModeName>,
    /// Base integer in integer mode.
    #[arg(long)]
    n0: Option<u64>,
    #[arg(long)]
    x: Option<i64>,
    /// Window as lo,hi; defaults to 0,2X.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    window: Option<Vec<i64>>,
    #[arg(long)]
    w: Option<u64>,
    /// Largest prime with a sampled residue; defaults to the window diameter.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Args, Debug)]
struct EnsembleArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    imin: Option<u64>,
    #[arg(long)]
    imax: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    w: Option<u64>,
    #[arg(long)]
    mode: Option<ModeName>,
    #[arg(long)]
    n0: Option<u64>,
}

#[derive(Args, Debug)]
struct TriplesArgs {
    #[arg(long)]
    x: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<i64>,
    #[arg(long)]
    w: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<i64>,
    /// Prime cutoff for the singular series.
    #[arg(long)]
    cutoff: Option<u64>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Result files to summarize.
    #[arg(long = "in", num_args = 1..)]
    inputs: Option<Vec<PathBuf>>,
}

fn put<T: serde::Serialize>(map: &mut Map<String, Value>, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        map.insert(key.to_string(), serde_json::to_value(v).expect("flag serializes"));
    }
}

fn parse_flag<T: std::str::FromStr>(name: &str, raw: &Option<String>) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    raw.as_deref()
        .map(|s| s.parse::<T>().map_err(|e| CliError::config(format!("params.{name}"), e.to_string())))
        .transpose()
}

/// Name and flag overlay of the subcommand.
fn overlay(cmd: &Cmd) -> Result<(&'static str, Map<String, Value>), CliError> {
    use signlab::pattern::SignField;
    use signlab::short_interval::{ArithmeticFunction, Twist};
    let mut m = Map::new();
    let name = match cmd {
        Cmd::Sieve(a) => {
            put(&mut m, "start", &a.start);
            put(&mut m, "len", &a.len);
            put(&mut m, "w", &a.w);
            put(&mut m, "cache", &a.cache);
            "sieve"
        }
        Cmd::Pattern(a) => {
            put(&mut m, "expr", &a.expr);
            put(&mut m, "fn", &parse_flag::<SignField>("fn", &a.function)?);
            put(&mut m, "n", &a.n);
            "pattern"
        }
        Cmd::Pairs(a) => {
            put(&mut m, "n", &a.n);
            "pairs"
        }
        Cmd::Interval(a) => {
            put(&mut m, "fn", &parse_flag::<ArithmeticFunction>("fn", &a.function)?);
            put(&mut m, "twist", &parse_flag::<Twist>("twist", &a.twist)?);
            put(&mut m, "h", &a.h);
            put(&mut m, "n", &a.n);
            "interval"
        }
        Cmd::Rundensity(a) => {
            put(&mut m, "a", &a.a);
            put(&mut m, "n", &a.n);
            "rundensity"
        }
        Cmd::Graph(a) => {
            put(&mut m, "mode", &a.mode);
            put(&mut m, "n0", &a.n0);
            put(&mut m, "x", &a.x);
            put(&mut m, "window", &a.window);
            put(&mut m, "w", &a.w);
            put(&mut m, "p", &a.p);
            put(&mut m, "trials", &a.trials);
            "graph"
        }
        Cmd::Ensemble(a) => {
            put(&mut m, "k", &a.k);
            put(&mut m, "imin", &a.imin);
            put(&mut m, "imax", &a.imax);
            put(&mut m, "trials", &a.trials);
            put(&mut m, "w", &a.w);
            put(&mut m, "mode", &a.mode);
            put(&mut m, "n0", &a.n0);
            "ensemble"
        }
        Cmd::Triples(a) => {
            put(&mut m, "x", &a.x);
            put(&mut m, "m", &a.m);
            put(&mut m, "shift", &a.shift);
            put(&mut m, "w", &a.w);
            put(&mut m, "k", &a.k);
            put(&mut m, "a1", &a.a1);
            put(&mut m, "a2", &a.a2);
            put(&mut m, "cutoff", &a.cutoff);
            "triples"
        }
        Cmd::Report(a) => {
            put(&mut m, "in", &a.inputs);
            "report"
        }
    };
    Ok((name, m))
}

/// Merge the config file (if any) with the flags into one JSON value.
fn build_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut root = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
            serde_json::from_str::<Value>(&text).map_err(|e| CliError::config(".", e.to_string()))?
        }
        None => json!({}),
    };
    let obj = root
        .as_object_mut()
        .ok_or_else(|| CliError::config(".", "config must be a JSON object"))?;
    if let Some(cmd) = &cli.command {
        let (name, flags) = overlay(cmd)?;
        let same = obj.get("command").and_then(Value::as_str) == Some(name);
        let mut params = match obj.remove("params") {
            Some(Value::Object(p)) if same => p,
            _ => Map::new(),
        };
        params.extend(flags);
        obj.insert("command".into(), Value::String(name.into()));
        obj.insert("params".into(), Value::Object(params));
    } else if !obj.contains_key("command") {
        return Err(CliError::config("command", "no subcommand and no config file"));
    }
    if let Some(seed) = cli.seed {
        obj.insert("seed".into(), json!(seed));
    }
    if let Some(scales) = &cli.scales {
        obj.insert("scales".into(), json!(scales));
    }
    if cli.out.is_some() || cli.format.is_some() {
        let output = obj.entry("output").or_insert_with(|| json!({}));
        let output = output
            .as_object_mut()
            .ok_or_else(|| CliError::config("output", "must be an object"))?;
        if let Some(out) = &cli.out {
            output.insert("path".into(), json!(out));
        }
        if let Some(format) = cli.format {
            output.insert("format".into(), serde_json::to_value(format).expect("format serializes"));
        }
    }
    ExperimentConfig::from_value(root)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|config| {
        let mut outcome = run(&config, cli.threads)?;
        write_outputs(&mut outcome, cli.manifest.as_deref())?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if let Some(report) = &outcome.report {
                if config_prints_table(&cli) {
                    eprint!("{}", report.render());
                }
                if report.failed() {
                    return ExitCode::from(EXIT_ACCEPTANCE as u8);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("signlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// The human-readable table goes to stderr when the report itself was written to a file.
fn config_prints_table(cli: &Cli) -> bool {
    cli.out.is_some()
}
