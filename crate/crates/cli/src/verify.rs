//! Verification suites behind `turan verify`.

use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, ValueEnum};
use serde::Serialize;

use turan::constructions;
use turan::detectors::{contains_pattern, PatternSpec};
use turan::formulas;
use turan::oracle::{self, Family, SearchOptions};
use turan::treelab;

use crate::{print_json, CliError};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    P3,
    Pl,
    Trees,
    Eg,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest n handed to the oracle.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Largest tree order for the `trees` suite.
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Largest n for the construction checks.
    #[arg(long, default_value_t = 60)]
    construct_max: usize,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Per-oracle-run time limit.
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Print rows as CSV instead of a table.
    #[arg(long)]
    csv: bool,
}

/// One checked fact.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub suite: &'static str,
    pub case: String,
    pub n: usize,
    pub expected: Option<u64>,
    pub observed: Option<u64>,
    pub relation: String,
    pub in_proved_range: Option<bool>,
    pub ok: bool,
}

fn oracle_opts(a: &VerifyArgs) -> SearchOptions {
    SearchOptions {
        threads: a.threads,
        max_time: a.budget_seconds.map(Duration::from_secs_f64),
        ..SearchOptions::default()
    }
}

fn formula_rows(
    suite: &'static str,
    family: &Family,
    range: std::ops::RangeInclusive<usize>,
    a: &VerifyArgs,
) -> Result<Vec<Row>, CliError> {
    Ok(oracle::verify_formula_range(family, range, &oracle_opts(a))?
        .into_iter()
        .map(|r| Row {
            suite,
            case: format!("{} formula vs oracle", r.family),
            n: r.n,
            expected: Some(r.formula),
            observed: r.oracle.map(|v| v as u64),
            relation: r.relation.symbol().to_string(),
            in_proved_range: Some(r.in_proved_range),
            ok: !r.contradiction,
        })
        .collect())
}

fn construction_row(
    suite: &'static str,
    n: usize,
    g: &turan::Graph,
    formula: u64,
    pattern: &PatternSpec,
) -> Row {
    let free = contains_pattern(g, pattern).is_none();
    let ok = free && g.m() as u64 == formula;
    Row {
        suite,
        case: format!("construction free of {pattern}: {}", if free { "yes" } else { "no" }),
        n,
        expected: Some(formula),
        observed: Some(g.m() as u64),
        relation: if g.m() as u64 == formula { "=" } else { "!=" }.to_string(),
        in_proved_range: None,
        ok,
    }
}

fn suite_p3(a: &VerifyArgs) -> Result<Vec<Row>, CliError> {
    let k = a.k.unwrap_or(2);
    let n_max = a.n_max.unwrap_or(9);
    let mut rows = formula_rows("p3", &Family::KP3 { k }, 3 * k..=n_max, a)?;
    let pattern = PatternSpec::disjoint_paths(k, 3)?;
    for n in 3 * k..=a.construct_max {
        let g = constructions::p3_extremal(n, k)?;
        let f = formulas::ex_k_p3(n as u64, k as u64)?.value;
        rows.push(construction_row("p3", n, &g, f, &pattern));
    }
    Ok(rows)
}

fn suite_pl(a: &VerifyArgs) -> Result<Vec<Row>, CliError> {
    let k = a.k.unwrap_or(2);
    let l = a.l.unwrap_or(4);
    let n_max = a.n_max.unwrap_or(10);
    let start = k * (l / 2) + 1;
    let mut rows = formula_rows("pl", &Family::KPl { k, l }, start..=n_max, a)?;
    let pattern = PatternSpec::disjoint_paths(k, l)?;
    for n in start..=a.construct_max {
        let g = constructions::pl_extremal(n, k, l)?;
        let f = formulas::ex_k_pl(n as u64, k as u64, l as u64)?.value;
        rows.push(construction_row("pl", n, &g, f, &pattern));
    }
    Ok(rows)
}

fn suite_trees(a: &VerifyArgs) -> Result<Vec<Row>, CliError> {
    let max = a.max_vertices.unwrap_or(12);
    let mut rows = Vec::new();
    for two_l in (2..=max).step_by(2) {
        let mut with_pm = 0u64;
        let mut without = 0u64;
        let mut failures = 0u64;
        for t in treelab::enumerate_equibipartite_trees(two_l)? {
            if treelab::has_perfect_matching(&t).0 {
                with_pm += 1;
                if !treelab::check_all_unequal_partitions(&t)? {
                    failures += 1;
                }
            } else {
                without += 1;
                let ok = treelab::nopm_partition(&t)
                    .map(|c| c.verify(&t) && c.small_class.len() < two_l / 2)
                    .unwrap_or(false);
                if !ok {
                    failures += 1;
                }
            }
        }
        rows.push(Row {
            suite: "trees",
            case: format!("{with_pm} with perfect matching, {without} without"),
            n: two_l,
            expected: Some(0),
            observed: Some(failures),
            relation: "failures".into(),
            in_proved_range: None,
            ok: failures == 0,
        });
    }
    Ok(rows)
}

fn suite_eg(a: &VerifyArgs) -> Result<Vec<Row>, CliError> {
    let l = a.l.unwrap_or(6);
    let n_max = a.n_max.unwrap_or(10);
    let pattern = PatternSpec::single_path(l)?;
    let opts = oracle_opts(a);
    let mut rows = Vec::new();
    for n in l.saturating_sub(1).max(1)..=n_max {
        let report = oracle::exact_ex(n, &pattern, &opts)?;
        let bound = formulas::erdos_gallai_bound(n as u64, l as u64)?.value;
        let ex = report.max_edges.filter(|_| report.complete).map(|v| v as u64);
        let (relation, ok) = match ex {
            Some(ex) if n % (l - 1) == 0 => (if ex == bound { "=" } else { "<" }, ex == bound),
            Some(ex) => (if ex <= bound { "<=" } else { ">" }, ex <= bound),
            None => ("n/a", true),
        };
        rows.push(Row {
            suite: "eg",
            case: format!("ex(n,{pattern}) vs (l-2)n/2"),
            n,
            expected: Some(bound),
            observed: ex,
            relation: relation.into(),
            in_proved_range: Some(true),
            ok,
        });
    }
    Ok(rows)
}

pub fn run(a: &VerifyArgs, json: bool) -> Result<ExitCode, CliError> {
    let mut rows = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::P3 {
        rows.extend(suite_p3(a)?);
    }
    if all || a.suite == Suite::Pl {
        rows.extend(suite_pl(a)?);
    }
    if all || a.suite == Suite::Trees {
        rows.extend(suite_trees(a)?);
    }
    if all || a.suite == Suite::Eg {
        rows.extend(suite_eg(a)?);
    }
    let passed = rows.iter().all(|r| r.ok);
    if json {
        print_json(&serde_json::json!({ "passed": passed, "rows": rows }))?;
    } else if a.csv {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        for r in &rows {
            w.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    } else {
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        println!("{:<6} {:>3} {:>9} {:>9} {:>8} {:>6}  case", "suite", "n", "expected", "observed", "relation", "ok");
        for r in &rows {
            println!(
                "{:<6} {:>3} {:>9} {:>9} {:>8} {:>6}  {}",
                r.suite,
                r.n,
                opt(r.expected),
                opt(r.observed),
                r.relation,
                if r.ok { "pass" } else { "FAIL" },
                r.case
            );
        }
        println!("{}", if passed { "all checks passed" } else { "some checks FAILED" });
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
