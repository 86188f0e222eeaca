//! The `skein` command line.
//!
//! Exit codes: 0 success, 2 input error, 3 semantic error, 4 property failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{check_axioms, make_algebra, AlgebraKind, ConwayAlgebra};
use crate::catalog::{bundled_catalog, cache_key, find_entry, load_catalog, parse_input, CorpusEntry, ResultCache, ResultRecord};
use crate::diagram::Diagram;
use crate::laurent::LaurentPoly;
use crate::moves::{format_events, parse_events, random_perturb, replay, trivialize, MoveEvent};
use crate::skein::{evaluate, trace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

/// Fraction of cache hits re-evaluated on each run.
const VERIFY_FRACTION: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(name = "skein", version, about = "Conway-type skein invariants of oriented links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one diagram.
    Compute(ComputeArgs),
    /// Check the algebra axioms symbolically.
    Axioms(AlgebraArgs),
    /// Compare values before and after random Reidemeister moves.
    Fuzz(FuzzArgs),
    /// Evaluate a whole corpus into a CSV table.
    Table(TableArgs),
    /// Apply a move list to a diagram.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct AlgebraArgs {
    /// classic3, homflypt, gen-conway, gen-homflypt or nonlinear
    #[arg(long)]
    algebra: String,
    /// Root degree for the nonlinear algebra
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
struct InputArgs {
    /// PD code, e.g. `PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]`
    #[arg(long, group = "input")]
    pd: Option<String>,
    /// Braid word, e.g. `braid(2; 1 1 1)`
    #[arg(long, group = "input")]
    braid: Option<String>,
    /// Corpus entry name
    #[arg(long, group = "input")]
    name: Option<String>,
    /// Corpus CSV used by --name (defaults to the bundled corpus)
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Print the result record as JSON
    #[arg(long)]
    json: bool,
    /// Print the resolution tree
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, default_value_t = 14)]
    cap: usize,
    /// Perturbations per diagram
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value = "gen-conway")]
    algebra: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long)]
    max_components: Option<usize>,
    /// Restrict to these corpus entries
    #[arg(long = "name")]
    names: Vec<String>,
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Corpus CSV (defaults to the bundled corpus)
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Directory of cached result records
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Output file (defaults to stdout)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Event list, one per line; `-` reads stdin
    #[arg(long, conflicts_with = "trivialize")]
    events: Option<PathBuf>,
    /// Generate and replay the trivializing move list
    #[arg(long)]
    trivialize: bool,
    /// Also check that the value is unchanged, ignoring crossing changes
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long)]
    k: Option<u32>,
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn semantic_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_SEMANTIC, message: message.into() }
}

type Outcome = Result<i32, Failure>;

/// Value text, a record to write back to the cache, and whether a cached record failed re-verification.
type TableRow = (String, Option<ResultRecord>, bool);

/// Runs the CLI, writing to the given streams. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(a, out),
        Command::Axioms(a) => axioms(a, out),
        Command::Fuzz(a) => fuzz(a, out),
        Command::Table(a) => table(a, out, err),
        Command::Replay(a) => replay_cmd(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn algebra(name: &str, k: Option<u32>) -> Result<ConwayAlgebra, Failure> {
    make_algebra(name, k).map_err(|e| semantic_error(e.to_string()))
}

fn corpus(path: Option<&Path>) -> Result<Vec<CorpusEntry>, Failure> {
    match path {
        None => Ok(bundled_catalog()),
        Some(p) => load_catalog(p).map_err(|e| input_error(e.to_string())),
    }
}

fn read_input(a: &InputArgs) -> Result<Diagram, Failure> {
    if let Some(pd) = &a.pd {
        return parse_input(pd).map_err(|e| input_error(e.to_string()));
    }
    if let Some(b) = &a.braid {
        return parse_input(b).map_err(|e| input_error(e.to_string()));
    }
    let name = a.name.as_deref().expect("clap requires one input");
    let entries = corpus(a.corpus.as_deref())?;
    find_entry(&entries, name).map(|e| e.diagram.clone()).ok_or_else(|| semantic_error(format!("no corpus entry named `{name}`")))
}

fn display_value(alg: &ConwayAlgebra, v: &LaurentPoly) -> String {
    match alg.kind() {
        AlgebraKind::NonlinearK(_) => alg.to_formal(v).unwrap_or_else(|_| v.to_text()),
        AlgebraKind::Linear => v.to_text(),
    }
}

fn io_failure(e: io::Error) -> Failure {
    input_error(e.to_string())
}

fn compute(a: ComputeArgs, out: &mut dyn Write) -> Outcome {
    let d = read_input(&a.input)?;
    let alg = algebra(&a.algebra.algebra, a.algebra.k)?;
    let v = evaluate(&d, &alg).map_err(|e| semantic_error(e.to_string()))?;
    if a.trace {
        let t = trace(&d, &alg).map_err(|e| semantic_error(e.to_string()))?;
        out.write_all(t.render().as_bytes()).map_err(io_failure)?;
    }
    if a.json {
        let rec = ResultRecord::new(&d, &alg, &v);
        let text = serde_json::to_string_pretty(&rec).expect("records serialize");
        writeln!(out, "{text}").map_err(io_failure)?;
    } else {
        writeln!(out, "{}", display_value(&alg, &v)).map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}

fn axioms(a: AlgebraArgs, out: &mut dyn Write) -> Outcome {
    let alg = algebra(&a.algebra, a.k)?;
    let report = check_axioms(&alg).map_err(|e| semantic_error(e.to_string()))?;
    write!(out, "{report}").map_err(io_failure)?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_PROPERTY })
}

/// Seed for one perturbation; distinct per entry and trial.
fn trial_seed(seed: u64, entry: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((entry as u64) << 32) ^ trial as u64
}

fn fuzz(a: FuzzArgs, out: &mut dyn Write) -> Outcome {
    let alg = algebra(&a.algebra, a.k)?;
    let entries = corpus(a.corpus.as_deref())?;
    for n in &a.names {
        if find_entry(&entries, n).is_none() {
            return Err(semantic_error(format!("no corpus entry named `{n}`")));
        }
    }
    let selected: Vec<&CorpusEntry> = entries
        .iter()
        .filter(|e| a.max_crossings.is_none_or(|m| e.crossings <= m))
        .filter(|e| a.max_components.is_none_or(|m| e.components <= m))
        .filter(|e| a.names.is_empty() || a.names.contains(&e.name))
        .collect();
    let reports: Vec<Result<(bool, String), String>> = selected
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let base = evaluate(&entry.diagram, &alg).map_err(|e| format!("{}: {e}", entry.name))?;
            let mut failures = String::new();
            for t in 0..a.trials {
                let p = random_perturb(&entry.diagram, trial_seed(a.seed, i, t), a.steps, a.cap);
                let v = evaluate(&p.diagram, &alg).map_err(|e| format!("{}: {e}", entry.name))?;
                if v != base {
                    failures.push_str(&format!("  trial {t}: expected {base}, got {v}\n"));
                    for e in &p.events {
                        failures.push_str(&format!("    {e}\n"));
                    }
                }
            }
            Ok((failures.is_empty(), failures))
        })
        .collect();
    let mut passed = 0;
    for (entry, report) in selected.iter().zip(reports) {
        let (pass, detail) = report.map_err(semantic_error)?;
        passed += usize::from(pass);
        writeln!(out, "{} {}", if pass { "PASS" } else { "FAIL" }, entry.name).map_err(io_failure)?;
        out.write_all(detail.as_bytes()).map_err(io_failure)?;
    }
    writeln!(out, "{passed} of {} diagrams passed", selected.len()).map_err(io_failure)?;
    Ok(if passed == selected.len() { EXIT_OK } else { EXIT_PROPERTY })
}

fn table(a: TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let alg = algebra(&a.algebra.algebra, a.algebra.k)?;
    let entries = corpus(a.input.as_deref())?;
    let mut cache = match &a.cache {
        None => None,
        Some(dir) => match ResultCache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                let _ = writeln!(err, "warning: cache disabled: {e}");
                None
            }
        },
    };
    let started = Instant::now();
    let rows: Vec<Result<TableRow, String>> = entries
        .par_iter()
        .map(|entry| {
            let canonical = entry.diagram.canonical_encode();
            let key = cache_key(&canonical, &alg);
            if let Some(rec) = cache.as_ref().and_then(|c| c.get(&key)) {
                let verify = rand::thread_rng().gen_bool(VERIFY_FRACTION);
                if !verify {
                    return Ok((rec.value, None, false));
                }
                let fresh = evaluate(&entry.diagram, &alg).map_err(|e| format!("{}: {e}", entry.name))?;
                let fresh_rec = ResultRecord::new(&entry.diagram, &alg, &fresh);
                if fresh_rec == rec {
                    return Ok((rec.value, None, false));
                }
                return Ok((fresh_rec.value.clone(), Some(fresh_rec), true));
            }
            let v = evaluate(&entry.diagram, &alg).map_err(|e| format!("{}: {e}", entry.name))?;
            let rec = ResultRecord::new(&entry.diagram, &alg, &v);
            Ok((rec.value.clone(), Some(rec), false))
        })
        .collect();
    let mut text = String::from("name,algebra,value\n");
    for (entry, row) in entries.iter().zip(rows) {
        let (value, fresh, stale) = row.map_err(semantic_error)?;
        if stale {
            let _ = writeln!(err, "warning: cached value for {} did not re-verify; replaced", entry.name);
        }
        if let (Some(c), Some(rec)) = (&cache, fresh) {
            if let Err(e) = c.put(&cache_key(&rec.input, &alg), &rec) {
                let _ = writeln!(err, "warning: cache write failed, continuing without cache: {e}");
                cache = None;
            }
        }
        text.push_str(&csv_line(&[&entry.name, &alg.label(), &value]));
    }
    match &a.output {
        Some(path) => fs::write(path, &text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(io_failure)?,
    }
    let _ = writeln!(err, "{} rows in {:.2?}", entries.len(), started.elapsed());
    Ok(EXIT_OK)
}

fn csv_line(fields: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn replay_cmd(a: ReplayArgs, out: &mut dyn Write) -> Outcome {
    let d = read_input(&a.input)?;
    let events: Vec<MoveEvent> = if a.trivialize {
        trivialize(&d).map_err(|e| semantic_error(e.to_string()))?
    } else {
        let path = a.events.as_ref().ok_or_else(|| input_error("one of --events or --trivialize is required"))?;
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_failure)?;
            s
        } else {
            fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?
        };
        parse_events(&text).map_err(|e| input_error(e.to_string()))?
    };
    if a.trivialize {
        out.write_all(format_events(&events).as_bytes()).map_err(io_failure)?;
    }
    let end = replay(&d, &events).map_err(|e| semantic_error(e.to_string()))?;
    writeln!(out, "{}", end.canonical_encode()).map_err(io_failure)?;
    if let Some(name) = &a.algebra {
        let has_cc = events.iter().any(|e| matches!(e, MoveEvent::CrossingChange { .. }));
        if has_cc {
            return Err(semantic_error("value check needs a move list without crossing changes"));
        }
        let alg = algebra(name, a.k)?;
        let before = evaluate(&d, &alg).map_err(|e| semantic_error(e.to_string()))?;
        let after = evaluate(&end, &alg).map_err(|e| semantic_error(e.to_string()))?;
        if before != after {
            writeln!(out, "FAIL value changed: {} -> {}", display_value(&alg, &before), display_value(&alg, &after)).map_err(io_failure)?;
            return Ok(EXIT_PROPERTY);
        }
        writeln!(out, "PASS value {}", display_value(&alg, &before)).map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}
