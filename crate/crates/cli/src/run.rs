//! Command dispatch, result encoding, manifests and atomic file output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use signlab::circle::{
    count_triples, count_triples_in_classes, main_term_prediction_with_cutoff, TripleSpec,
    DEFAULT_SINGULAR_CUTOFF,
};
use signlab::graph::{summarize, EnsembleSpec, GraphExperiment, GraphMode, TrialRecord};
use signlab::pattern::{
    geometric_ladder, mobius_pair_table, pattern_density, predicted_constants, run_density,
    SignPattern, DEFAULT_CONSTANT_CUTOFF, DEFAULT_LADDER_STEPS,
};
use signlab::short_interval::interval_profile;
use signlab::sieve::{read_segment, sieve_mu, sieve_squarefree_w, write_segment, SieveSegment};

use crate::config::{
    Command, EnsembleParams, ExperimentConfig, Format, GraphParams, ModeName, SieveParams,
    TriplesParams,
};
use crate::error::{CliError, Result};
use crate::report::{emit_report, Report};
use crate::results::*;

/// Everything needed to repeat a run, written next to the result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub threads: usize,
    pub wall_time_seconds: f64,
    /// Seconds per stage.
    pub timings: BTreeMap<String, f64>,
    /// SHA-256 of every binary cache read or written.
    pub caches: BTreeMap<String, String>,
    /// SHA-256 of every result file written.
    pub outputs: BTreeMap<String, String>,
}

pub struct RunOutcome {
    /// Encoded result in the configured format.
    pub bytes: Vec<u8>,
    pub doc: Option<ResultDoc>,
    pub report: Option<Report>,
    pub manifest: RunManifest,
}

struct Context {
    timings: BTreeMap<String, f64>,
    caches: BTreeMap<String, String>,
}

impl Context {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(stage.to_string(), t.elapsed().as_secs_f64());
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Write `bytes` to `path` through a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e| CliError::io(path.display(), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Run `config` on a pool of `threads` workers (all cores when `None`).
pub fn run(config: &ExperimentConfig, threads: Option<usize>) -> Result<RunOutcome> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    let started = Instant::now();
    let mut ctx = Context {
        timings: BTreeMap::new(),
        caches: BTreeMap::new(),
    };
    let (bytes, doc, report) = pool.install(|| execute(config, &mut ctx))?;
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        threads: pool.current_num_threads(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        timings: ctx.timings,
        caches: ctx.caches,
        outputs: BTreeMap::new(),
    };
    Ok(RunOutcome {
        bytes,
        doc,
        report,
        manifest,
    })
}

/// Write the result to the configured path (or stdout) and the manifest beside it.
pub fn write_outputs(outcome: &mut RunOutcome, manifest_path: Option<&Path>) -> Result<()> {
    match outcome.manifest.config.output_path().cloned() {
        Some(path) => {
            write_atomic(&path, &outcome.bytes)?;
            outcome
                .manifest
                .outputs
                .insert(path.display().to_string(), sha256_hex(&outcome.bytes));
            let manifest_path = manifest_path
                .map(Path::to_path_buf)
                .unwrap_or_else(|| default_manifest_path(&path));
            let text = serde_json::to_vec_pretty(&outcome.manifest).expect("manifest serializes");
            write_atomic(&manifest_path, &text)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&outcome.bytes)
                .map_err(|e| CliError::io("stdout", e))?;
            if let Some(path) = manifest_path {
                let text = serde_json::to_vec_pretty(&outcome.manifest).expect("manifest serializes");
                write_atomic(path, &text)?;
            }
        }
    }
    Ok(())
}

pub fn default_manifest_path(result: &Path) -> PathBuf {
    let mut name = result.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    result.with_file_name(name)
}

type Executed = (Vec<u8>, Option<ResultDoc>, Option<Report>);

fn json_doc(doc: ResultDoc) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("result serializes");
    bytes.push(b'\n');
    bytes
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    to_csv(rows).map_err(|e| CliError::Runtime(format!("csv encoding: {e}")))
}

fn encode(doc: ResultDoc, format: Format) -> Result<Executed> {
    let bytes = match format {
        Format::Json => json_doc(doc.clone()),
        Format::Csv => match &doc {
            ResultDoc::Sieve(s) => csv_bytes(std::slice::from_ref(s))?,
            ResultDoc::Pattern(d) => {
                csv_bytes(&d.scales.iter().map(ScaleRow::from).collect::<Vec<_>>())?
            }
            ResultDoc::Pairs(p) => csv_bytes(&pair_rows(&p.table))?,
            ResultDoc::Interval(i) => {
                csv_bytes(&i.profiles.iter().map(ProfileRow::from).collect::<Vec<_>>())?
            }
            ResultDoc::RunDensity(r) => csv_bytes(&run_rows(r))?,
            ResultDoc::Triples(t) => csv_bytes(std::slice::from_ref(t))?,
            ResultDoc::Graph(_) | ResultDoc::Ensemble(_) => unreachable!("encoded with records"),
        },
        Format::Edgelist => unreachable!("validated"),
    };
    Ok((bytes, Some(doc), None))
}

/// JSON lines (one record per trial, then the summary document) or CSV trial rows.
fn encode_trials(records: &[TrialRecord], doc: ResultDoc, format: Format) -> Result<Executed> {
    let bytes = match format {
        Format::Json => {
            let mut out = Vec::new();
            for r in records {
                serde_json::to_writer(&mut out, r).expect("record serializes");
                out.push(b'\n');
            }
            serde_json::to_writer(&mut out, &doc).expect("summary serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => csv_bytes(&records.iter().map(TrialRow::from).collect::<Vec<_>>())?,
        Format::Edgelist => unreachable!("handled by the graph command"),
    };
    Ok((bytes, Some(doc), None))
}

fn execute(config: &ExperimentConfig, ctx: &mut Context) -> Result<Executed> {
    let format = config.format();
    match &config.command {
        Command::Sieve(p) => {
            let doc = sieve(p, ctx)?;
            encode(ResultDoc::Sieve(doc), format)
        }
        Command::Pattern(p) => {
            let pattern: SignPattern = p.expr.parse()?;
            let scales: Vec<(u64, u64)> = match &config.scales {
                Some(s) => s.iter().map(|&n| (1, n)).collect(),
                None => geometric_ladder(p.n, DEFAULT_LADDER_STEPS),
            };
            let report = ctx.time("pattern", || pattern_density(&pattern, p.field, &scales))?;
            encode(ResultDoc::Pattern(report), format)
        }
        Command::Pairs(p) => {
            let table = ctx.time("pairs", || mobius_pair_table(p.n))?;
            let predicted = ctx.time("constants", || predicted_constants(DEFAULT_CONSTANT_CUTOFF))?;
            encode(ResultDoc::Pairs(PairsResult { table, predicted }), format)
        }
        Command::Interval(p) => {
            let profiles = ctx.time("interval", || {
                p.h.iter()
                    .map(|&h| interval_profile(p.function, p.twist, h, (1, p.n)))
                    .collect::<signlab::error::Result<Vec<_>>>()
            })?;
            encode(ResultDoc::Interval(IntervalResult { profiles }), format)
        }
        Command::RunDensity(p) => {
            let rows = ctx.time("rundensity", || {
                p.a.iter()
                    .map(|&a| Ok(RunDensityRow { a, estimate: run_density(a, p.n)? }))
                    .collect::<signlab::error::Result<Vec<_>>>()
            })?;
            encode(ResultDoc::RunDensity(RunDensityResult { n: p.n, rows }), format)
        }
        Command::Graph(p) => graph(p, config.seed.expect("validated"), format, ctx),
        Command::Ensemble(p) => ensemble(p, config.seed.expect("validated"), format, ctx),
        Command::Triples(p) => {
            let doc = ctx.time("triples", || triples(p))?;
            encode(ResultDoc::Triples(doc), format)
        }
        Command::Report(p) => {
            let docs = p
                .inputs
                .iter()
                .map(|path| read_result(path))
                .collect::<Result<Vec<_>>>()?;
            let report = emit_report(&docs);
            let bytes = match format {
                _ if config.output_path().is_none() => report.render().into_bytes(),
                Format::Json => {
                    let mut b = serde_json::to_vec_pretty(&report).expect("report serializes");
                    b.push(b'\n');
                    b
                }
                Format::Csv => csv_bytes(&report.rows)?,
                Format::Edgelist => unreachable!("validated"),
            };
            Ok((bytes, None, Some(report)))
        }
    }
}

/// Parse a result file: a whole JSON document, or JSON lines ending in the summary document.
pub fn read_result(path: &Path) -> Result<ResultDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let parse = |s: &str| serde_json::from_str::<ResultDoc>(s);
    parse(&text)
        .or_else(|_| {
            let last = text.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or("");
            parse(last)
        })
        .map_err(|e| CliError::config(path.display().to_string(), e.to_string()))
}

fn cache_file(p: &SieveParams) -> Option<PathBuf> {
    let path = p.cache.clone()?;
    if path.is_dir() {
        let w = p.w.unwrap_or(0);
        Some(path.join(format!("lmsg-{}-{}-w{w}.bin", p.start, p.len)))
    } else {
        Some(path)
    }
}

fn sieve(p: &SieveParams, ctx: &mut Context) -> Result<SieveResult> {
    let compute = || match p.w {
        Some(w) => sieve_squarefree_w(p.start, p.len, w),
        None => sieve_mu(p.start, p.len),
    };
    let segment: SieveSegment = match cache_file(p) {
        Some(path) if path.exists() => {
            let bytes = std::fs::read(&path).map_err(|e| CliError::io(path.display(), e))?;
            let segment = ctx.time("cache_read", || read_segment(bytes.as_slice()))?;
            let w = segment.squarefree_mask().map(|m| m.w);
            if segment.start() != p.start || segment.len() != p.len || w != p.w {
                return Err(CliError::Runtime(format!(
                    "cache {} holds a different range",
                    path.display()
                )));
            }
            ctx.caches.insert(path.display().to_string(), sha256_hex(&bytes));
            segment
        }
        Some(path) => {
            let segment = ctx.time("sieve", compute)?;
            let mut bytes = Vec::new();
            write_segment(&segment, &mut bytes)?;
            write_atomic(&path, &bytes)?;
            ctx.caches.insert(path.display().to_string(), sha256_hex(&bytes));
            segment
        }
        None => ctx.time("sieve", compute)?,
    };
    let mut lambda_negative = 0;
    let mut mu_counts = [0u64; 3];
    for (l, m) in segment.lambda_values().zip(segment.mu_values()) {
        lambda_negative += (l < 0) as u64;
        mu_counts[(m + 1) as usize] += 1;
    }
    let squarefree_w = p.w.map(|_| {
        (segment.start()..segment.end())
            .filter(|&n| segment.squarefree_w(n) == Some(true))
            .count() as u64
    });
    Ok(SieveResult {
        start: p.start,
        len: p.len,
        w: p.w,
        lambda_negative,
        mu_counts,
        squarefree_density: (mu_counts[0] + mu_counts[2]) as f64 / p.len as f64,
        squarefree_w,
    })
}

fn mode(name: ModeName, n0: Option<u64>) -> GraphMode {
    match name {
        ModeName::Profinite => GraphMode::Profinite,
        ModeName::Integer => GraphMode::Integer {
            n0: n0.expect("validated"),
        },
    }
}

fn graph_experiment(p: &GraphParams, seed: u64) -> GraphExperiment {
    let window = p.window.unwrap_or((0, 2 * p.x));
    GraphExperiment {
        mode: mode(p.mode, p.n0),
        seed,
        x: p.x,
        window: Some(window),
        w: p.w,
        p: p.p.unwrap_or(window.1.abs_diff(window.0).max(p.w)),
        trials: p.trials,
        ensemble: None,
    }
}

fn graph(p: &GraphParams, seed: u64, format: Format, ctx: &mut Context) -> Result<Executed> {
    let exp = graph_experiment(p, seed);
    if format == Format::Edgelist {
        let mut out = Vec::new();
        for trial in 0..exp.trials {
            let g = exp.graph(trial)?.expect("window configured");
            writeln!(out, "# trial {trial}").expect("in-memory write");
            g.write_edge_list(&mut out).expect("in-memory write");
        }
        return Ok((out, None, None));
    }
    let records = ctx.time("graph", || exp.run())?;
    let doc = ResultDoc::Graph(GraphResult {
        mode: p.mode,
        x: p.x,
        window: exp.window.expect("window configured"),
        w: p.w,
        p: exp.p,
        summary: summarize(&records),
    });
    encode_trials(&records, doc, format)
}

fn ensemble(p: &EnsembleParams, seed: u64, format: Format, ctx: &mut Context) -> Result<Executed> {
    let exp = GraphExperiment {
        mode: mode(p.mode, p.n0),
        seed,
        x: 0,
        window: None,
        w: p.w,
        p: p.imax.max(p.w),
        trials: p.trials,
        ensemble: Some(EnsembleSpec {
            k: p.k,
            imin: p.imin,
            imax: p.imax,
        }),
    };
    let records = ctx.time("ensemble", || exp.run())?;
    let doc = ResultDoc::Ensemble(EnsembleResult {
        mode: p.mode,
        k: p.k,
        interval: (p.imin, p.imax),
        w: p.w,
        summary: summarize(&records),
    });
    encode_trials(&records, doc, format)
}

fn triples(p: &TriplesParams) -> Result<TriplesResult> {
    let mut spec = TripleSpec::new(p.x, p.m, p.shift, p.w)?;
    let count = match p.k {
        Some(k) => {
            spec = spec.with_classes(k, p.a1.unwrap_or(1), p.a2.unwrap_or(1))?;
            count_triples_in_classes(&spec)?
        }
        None => count_triples(&spec)?,
    };
    let prediction =
        main_term_prediction_with_cutoff(&spec, p.cutoff.unwrap_or(DEFAULT_SINGULAR_CUTOFF))?;
    let classes = spec.classes;
    Ok(TriplesResult {
        x: p.x,
        m: p.m,
        shift: p.shift,
        w: p.w,
        k: classes.map(|c| c.k),
        a1: classes.map(|c| c.a1),
        a2: classes.map(|c| c.a2),
        count,
        g_m: prediction.lattice,
        s_m: prediction.singular,
        prediction: prediction.value,
        ratio: (prediction.value > 0.0).then(|| count as f64 / prediction.value),
        tail_bound: prediction.tail_bound,
    })
}
