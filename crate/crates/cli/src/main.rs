//! `turan`: formulas, constructions, containment checks, the exhaustive
//! oracle and the verification suites from the command line.
//!
//! Exit codes: 0 success (or "free" for `check`), 1 pattern found or a suite
//! failed, 2 usage, input or hypothesis errors.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use turan::constructions::{self, ConstructionError};
use turan::detectors::{contains_pattern, DetectorError, PatternSpec};
use turan::formulas::{self, FormulaError, FormulaResult};
use turan::graph::{self, Graph, GraphError};
use turan::io::{self as gio, Format};
use turan::oracle::{self, OracleError, SearchOptions};
use turan::treelab::TreeError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("writing output: {0}")]
    Output(String),
}

#[derive(Parser)]
#[command(name = "turan", version, about = "Turán numbers of disjoint paths and equibipartite forests")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form value or bound.
    Formula(FormulaArgs),
    /// Build an extremal or lower-bound graph.
    Construct(ConstructArgs),
    /// Decide whether a graph contains a pattern (exit 0 free, 1 contains).
    Check(CheckArgs),
    /// Compute ex(n, pattern) exactly by exhaustive search.
    Oracle(OracleArgs),
    /// Run a verification suite.
    Verify(verify::VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Subject {
    Kp3,
    Kpl,
    Forest,
    EgBound,
    Gorgol,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(value_enum)]
    subject: Subject,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    /// Forest file (graph6 or edge list).
    #[arg(long)]
    h: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// K_{k-1} + M_{n-k+1}
    P3,
    /// K_t + E_{n-t}, plus one edge for odd l
    Pl,
    /// disjoint cliques K_{l-1}
    Eg,
    /// K_{l-1} + E_{n-l+1} or E_{l-1} + E_{n-l+1}
    Forest,
    /// K_{3k-1} ∪ M_{n-3k+1}
    GorgolLow,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Graph6,
    Edgelist,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Graph6 => Format::Graph6,
            FormatArg::Edgelist => Format::Edgelist,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Forest file for the `forest` family.
    #[arg(long)]
    h: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    format: FormatArg,
    /// Write the graph here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Confirm with the detector that the forbidden pattern is absent.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `k*Pl`, `Pl` or `@file` (a forest).
    #[arg(long)]
    forbid: String,
    /// Input format; guessed from the file when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    forbid: String,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Worker threads (0: one per core). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value_t = oracle::DEFAULT_ORACLE_CAP)]
    cap: usize,
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Reads a graph, taking the format from `format`, the extension, or the
/// first line (an edge list starts with `n m`).
pub fn read_graph(path: &Path, format: Option<Format>) -> Result<Graph, CliError> {
    let bytes = read_file(path)?;
    let format = format.unwrap_or_else(|| {
        match path.extension().and_then(|e| e.to_str()) {
            Some("g6" | "graph6") => Format::Graph6,
            Some("el" | "edges" | "edgelist") => Format::Edgelist,
            _ => {
                let first = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
                if first.contains(&b' ') {
                    Format::Edgelist
                } else {
                    Format::Graph6
                }
            }
        }
    });
    Ok(gio::decode(&bytes, format)?)
}

pub fn parse_pattern(s: &str) -> Result<PatternSpec, CliError> {
    match s.strip_prefix('@') {
        Some(path) => {
            let h = read_graph(Path::new(path), None)?;
            Ok(PatternSpec::forest(h)?)
        }
        None => Ok(s.parse()?),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

fn print_json(value: &impl Serialize) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn print_formula(result: &FormulaResult) {
    println!("value              {}", result.value);
    println!("exact              {}", result.exact_rational);
    println!("kind               {:?}", result.kind);
    println!("in_proved_range    {}", result.in_proved_range);
    if result.conjectured {
        println!("conjectured        true");
    }
    println!("conditional        {}", result.conditional_on_erdos_sos);
    if let Some(t) = result.threshold {
        println!("threshold          n >= {t}");
    }
    println!("citation           {}", result.citation);
}

fn cmd_formula(a: &FormulaArgs, json: bool) -> Result<ExitCode, CliError> {
    let (name, result) = match a.subject {
        Subject::Kp3 => ("kp3", formulas::ex_k_p3(a.n, need(a.k, "k")?)?),
        Subject::Kpl => ("kpl", formulas::ex_k_pl(a.n, need(a.k, "k")?, need(a.l, "l")?)?),
        Subject::EgBound => ("eg-bound", formulas::erdos_gallai_bound(a.n, need(a.l, "l")?)?),
        Subject::Gorgol => ("gorgol", formulas::gorgol_lower_p3(a.n, need(a.k, "k")?)?),
        Subject::Forest => {
            let h = read_graph(&need(a.h.clone(), "h")?, None)?;
            ("forest", formulas::ex_equibipartite_forest(a.n, &h)?)
        }
    };
    if json {
        print_json(&json!({
            "subject": name,
            "params": { "n": a.n, "k": a.k, "l": a.l },
            "result": result,
        }))?;
    } else {
        print_formula(&result);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(a: &ConstructArgs, json: bool) -> Result<ExitCode, CliError> {
    let (g, formula, pattern) = match a.family {
        Family::P3 => {
            let k = need(a.k, "k")?;
            let f = formulas::ex_k_p3(a.n as u64, k as u64).ok().map(|r| r.value);
            (constructions::p3_extremal(a.n, k)?, f, PatternSpec::disjoint_paths(k, 3)?)
        }
        Family::Pl => {
            let (k, l) = (need(a.k, "k")?, need(a.l, "l")?);
            let f = formulas::ex_k_pl(a.n as u64, k as u64, l as u64)?.value;
            (constructions::pl_extremal(a.n, k, l)?, Some(f), PatternSpec::disjoint_paths(k, l)?)
        }
        Family::Eg => {
            let l = need(a.l, "l")?;
            let f = formulas::erdos_gallai_bound(a.n as u64, l as u64)?.value;
            (constructions::erdos_gallai_extremal(a.n, l)?, Some(f), PatternSpec::single_path(l)?)
        }
        Family::Forest => {
            let h = read_graph(&need(a.h.clone(), "h")?, None)?;
            let f = formulas::ex_equibipartite_forest(a.n as u64, &h)?.value;
            (constructions::forest_extremal(a.n, &h)?, Some(f), PatternSpec::forest(h)?)
        }
        Family::GorgolLow => {
            let k = need(a.k, "k")?;
            let f = formulas::gorgol_lower_p3(a.n as u64, k as u64)?.value;
            (constructions::gorgol_low_p3(a.n, k)?, Some(f), PatternSpec::disjoint_paths(k, 3)?)
        }
    };
    let format = Format::from(a.format);
    let mut encoded = String::from_utf8(gio::encode(&g, format)).expect("encoders emit ASCII");
    if !encoded.ends_with('\n') {
        encoded.push('\n');
    }
    if let Some(out) = &a.out {
        fs::write(out, &encoded).map_err(|source| CliError::Io {
            path: out.clone(),
            source,
        })?;
    }
    let free = a.check.then(|| contains_pattern(&g, &pattern).is_none());
    if json {
        print_json(&json!({
            "n": g.n(),
            "edges": g.m(),
            "formula": formula,
            "format": match format { Format::Graph6 => "graph6", Format::Edgelist => "edgelist" },
            "graph": if a.out.is_none() { Some(encoded.trim_end()) } else { None },
            "out": a.out,
            "check": free.map(|f| json!({ "pattern": pattern.to_string(), "free": f })),
        }))?;
    } else {
        println!("vertices {}", g.n());
        println!("edges {}", g.m());
        if let Some(f) = formula {
            println!("formula {f}");
        }
        if let Some(f) = free {
            println!("free of {pattern}: {}", if f { "yes" } else { "no" });
        }
        match &a.out {
            Some(out) => println!("written to {}", out.display()),
            None => print!("{encoded}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(a: &CheckArgs, json: bool) -> Result<ExitCode, CliError> {
    let pattern = parse_pattern(&a.forbid)?;
    let g = read_graph(&a.graph, a.format.map(Format::from))?;
    let witness = contains_pattern(&g, &pattern);
    if json {
        print_json(&json!({
            "pattern": pattern.to_string(),
            "n": g.n(),
            "m": g.m(),
            "contains": witness.is_some(),
            "witness": witness.as_ref().map(|w| &w.parts),
        }))?;
    } else {
        match &witness {
            Some(w) => {
                println!("contains {pattern}");
                for part in &w.parts {
                    let line: Vec<String> = part.iter().map(|v| v.to_string()).collect();
                    println!("  {}", line.join(" "));
                }
            }
            None => println!("free of {pattern}"),
        }
    }
    Ok(if witness.is_some() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_oracle(a: &OracleArgs, json: bool) -> Result<ExitCode, CliError> {
    let pattern = parse_pattern(&a.forbid)?;
    let opts = SearchOptions {
        max_nodes: a.budget_nodes,
        max_time: a.budget_seconds.map(Duration::from_secs_f64),
        threads: a.threads,
        cap: a.cap,
    };
    let report = oracle::exact_ex(a.n, &pattern, &opts)?;
    if json {
        print_json(&report)?;
    } else {
        let max = report.max_edges.map_or("none".to_string(), |m| m.to_string());
        println!("n                {}", report.n);
        println!("pattern          {}", report.pattern);
        println!("max_edges        {max}");
        println!("complete         {}", report.complete);
        println!("nodes_explored   {}", report.nodes_explored);
        println!("wall_time        {:.3}s", report.wall_time.as_secs_f64());
        println!("witnesses        {}", report.witnesses.len());
        for g in report.witness_graphs() {
            println!("  {}", gio::to_graph6(&g));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn apply_vertex_cap() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("TURAN_VERTEX_CAP") {
        let cap: usize = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("TURAN_VERTEX_CAP must be an integer, got `{raw}`")))?;
        graph::set_vertex_cap(cap)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    apply_vertex_cap()?;
    match &cli.command {
        Command::Formula(a) => cmd_formula(a, cli.json),
        Command::Construct(a) => cmd_construct(a, cli.json),
        Command::Check(a) => cmd_check(a, cli.json),
        Command::Oracle(a) => cmd_oracle(a, cli.json),
        Command::Verify(a) => verify::run(a, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
