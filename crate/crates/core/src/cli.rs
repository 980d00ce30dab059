//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or malformed input, 3 infeasible or
//! invalid conformation, 4 search budget exhausted, 5 I/O, 6 bound or
//! alternating-edge violation, 7 claimed census differs from the recount.
//! Data goes to stdout (or `--out`), diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{bench, fold_report, random_hp, summarize, theorem_check, BenchConfig, BenchRow, BenchSummary, FoldReport, Verdicts};
use crate::conformation::{check_lemma2, upper_bound, Conformation};
use crate::error::FoldError;
use crate::folding::{brute_force_max, helix_arrangement, layer_arrangement, Algorithm};
use crate::format::{bench_table, claim_mismatches, document, from_json, load, report_table, to_json, xyz, xyz_records, LoadError, SearchSummary};
use crate::lattice::LatticeVertex;
use crate::sequence::{parse_hp, HpSequence};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_BOUND: i32 = 6;
pub const EXIT_CENSUS: i32 = 7;

#[derive(Debug, Parser)]
#[command(name = "hexfold", version, about = "HP folding on the hexagonal prism lattice with diagonals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fold a string and write the conformation document.
    Fold(FoldArgs),
    /// Fold a string and print the bound report with theorem verdicts.
    Analyze(FoldArgs),
    /// Re-validate a conformation document from scratch.
    Verify(DocArgs),
    /// Fold a seeded suite of random strings.
    Bench(BenchArgs),
    /// Convert a conformation document, by default to XYZ.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgArg {
    Helix,
    Layer,
    Brute,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Helix => Algorithm::Helix,
            AlgArg::Layer => Algorithm::Layer,
            AlgArg::Brute => Algorithm::BruteForce,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Structured,
    Table,
    Xyz,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// HP string, plain (`HPPH`) or compact (`H2P2H`).
    #[arg(conflicts_with_all = ["file", "random"])]
    input: Option<String>,
    /// Read the HP string from a file; whitespace is ignored.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Generate a string with N H's in K runs from --seed.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    random: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct FoldArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = AlgArg::Helix)]
    algorithm: AlgArg,
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Node budget for the exhaustive search.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Write data here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DocArgs {
    /// Conformation document (JSON).
    path: PathBuf,
}

#[derive(Debug, Args)]
struct ExportArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Xyz)]
    output: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 18)]
    n_min: usize,
    #[arg(long, default_value_t = 400)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    #[arg(long, default_value_t = 40)]
    k_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeat to fold each instance with several algorithms.
    #[arg(long, value_enum, default_values_t = [AlgArg::Helix])]
    algorithm: Vec<AlgArg>,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Bound(String),
    #[error("{0}")]
    Census(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Io(_) => EXIT_IO,
            CliError::Bound(_) => EXIT_BOUND,
            CliError::Census(_) => EXIT_CENSUS,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Document(_) => CliError::Parse(e.to_string()),
            LoadError::Conformation(_) => CliError::Infeasible(e.to_string()),
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Fold(a) => cmd_fold(a, false, out, err),
        Command::Analyze(a) => cmd_fold(a, true, out, err),
        Command::Verify(a) => cmd_verify(&a.path, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Export(a) => cmd_export(a, out),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, to: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match to {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn read_sequence(a: &InputArgs) -> Result<HpSequence, CliError> {
    let text = match (&a.input, &a.file, &a.random) {
        (Some(s), _, _) => s.clone(),
        (None, Some(p), _) => read_file(p)?,
        (None, None, Some(nk)) => {
            return random_hp(nk[0], nk[1], a.seed).map_err(|e| CliError::Parse(e.to_string()));
        }
        (None, None, None) => return Err(CliError::Parse("no input: give a string, --file or --random".into())),
    };
    parse_hp(&text).map_err(|e| CliError::Parse(e.to_string()))
}

fn fold_error(e: FoldError) -> CliError {
    match e {
        FoldError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        _ => CliError::Infeasible(e.to_string()),
    }
}

#[derive(Serialize)]
struct Analysis<'a> {
    report: &'a FoldReport,
    verdicts: Verdicts,
}

fn cmd_fold(a: FoldArgs, analyze: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let seq = read_sequence(&a.input)?;
    let algorithm = Algorithm::from(a.algorithm);
    let (c, search): (Conformation, Option<SearchSummary>) = match algorithm {
        Algorithm::Helix => (helix_arrangement(&seq).map_err(fold_error)?, None),
        Algorithm::Layer => (layer_arrangement(&seq).map_err(fold_error)?, None),
        Algorithm::BruteForce => match brute_force_max(&seq, a.budget) {
            Ok(r) => {
                let s = SearchSummary { max_contacts: r.max_contacts, nodes: r.nodes, exhaustive: r.exhaustive };
                (r.conformation, Some(s))
            }
            Err(FoldError::BudgetExceeded { budget, best }) => {
                if let Some(b) = best {
                    let _ = writeln!(err, "best found before the budget ran out: {} contacts", b.max_contacts);
                }
                return Err(CliError::Budget(format!("search budget of {budget} nodes exhausted")));
            }
            Err(e) => return Err(fold_error(e)),
        },
    };
    let report = fold_report(&seq, &c, algorithm);
    let format = a.output.unwrap_or(if analyze { OutputFormat::Table } else { OutputFormat::Structured });
    let text = match (format, analyze) {
        (OutputFormat::Xyz, _) => xyz(&c),
        (OutputFormat::Table, _) => {
            let mut t = report_table(&report);
            if let Some(s) = &search {
                t.push_str(&format!("max_contacts\t{}\nnodes\t{}\nexhaustive\t{}\n", s.max_contacts, s.nodes, s.exhaustive));
            }
            t
        }
        (OutputFormat::Structured, true) => {
            let mut s = serde_json::to_string_pretty(&Analysis { report: &report, verdicts: theorem_check(&report) })
                .expect("report serializes");
            s.push('\n');
            s
        }
        (OutputFormat::Structured, false) => {
            let mut doc = document(&c);
            doc.report = Some(report.clone());
            doc.search = search;
            to_json(&doc)
        }
    };
    emit(&text, a.out.as_deref(), out)?;
    if report.paper_lower_bound > report.contact_score as i64 {
        let _ = writeln!(
            err,
            "note: {} contacts, {} short of the lower bound {}",
            report.contact_score,
            report.paper_lower_bound - report.contact_score as i64,
            report.paper_lower_bound
        );
    }
    Ok(())
}

fn cmd_verify(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = from_json(&read_file(path)?).map_err(|e| CliError::Parse(e.to_string()))?;
    let c = load(&doc)?;
    let census = c.census();
    let ub = upper_bound(c.sequence());
    let l2 = check_lemma2(&c);
    let mut text = String::new();
    text.push_str(&format!(
        "residues\t{}\nbinding\t{}\ncontacts\t{}\nalternating\t{}\nloss\t{}\ncontact_score\t{}\nupper_bound\t{}\n",
        c.placement().len(),
        census.binding,
        census.contacts,
        census.alternating,
        census.loss,
        c.contact_score(),
        ub
    ));
    text.push_str(&format!("lemma2_max_alternating\t{}\nlemma2_violations\t{}\n", l2.max_alternating, l2.violations.len()));
    let mismatches = claim_mismatches(&doc, &c);
    for (field, claimed, fresh) in &mismatches {
        text.push_str(&format!("mismatch\t{field}\tclaimed {claimed}\trecounted {fresh}\n"));
    }
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    if Rational64::from_integer(c.contact_score() as i64) > ub.ratio() {
        return Err(CliError::Bound(format!("{} contacts exceed the upper bound {ub}", c.contact_score())));
    }
    if !l2.holds() {
        let (x, w, n) = l2.violations[0];
        return Err(CliError::Bound(format!("loss edge {} - {} has {n} alternating edges nearby", show(x), show(w))));
    }
    if !mismatches.is_empty() {
        return Err(CliError::Census(format!("{} claimed value(s) differ from the recount", mismatches.len())));
    }
    Ok(())
}

fn show(v: LatticeVertex) -> String {
    format!("({}, {}, {}, {:?})", v.layer, v.u, v.v, v.sublattice)
}

#[derive(Serialize)]
struct BenchDoc<'a> {
    config: &'a BenchConfig,
    summary: BenchSummary,
    rows: &'a [BenchRow],
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if a.n_min < 1 || a.n_min > a.n_max || a.k_min < 1 || a.k_min > a.k_max {
        return Err(CliError::Parse("need 1 <= n-min <= n-max and 1 <= k-min <= k-max".into()));
    }
    let cfg = BenchConfig {
        count: a.count,
        n_min: a.n_min,
        n_max: a.n_max,
        k_min: a.k_min,
        k_max: a.k_max,
        seed: a.seed,
        algorithms: a.algorithm.iter().map(|&x| x.into()).collect(),
        budget: a.budget,
    };
    let rows = bench(&cfg);
    let summary = summarize(&rows);
    for row in rows.iter().filter(|r| r.outcome.is_err()) {
        let _ = writeln!(err, "seed {} {}: {}", row.seed, row.algorithm, row.outcome.as_ref().unwrap_err());
    }
    let text = match a.output {
        OutputFormat::Structured => {
            let mut s = serde_json::to_string_pretty(&BenchDoc { config: &cfg, summary: summary.clone(), rows: &rows })
                .expect("bench serializes");
            s.push('\n');
            s
        }
        _ => bench_table(&rows),
    };
    emit(&text, a.out.as_deref(), out)?;
    let _ = writeln!(
        err,
        "{} rows, {} failed, {} below the lower bound, {} above the upper bound",
        summary.rows, summary.failures, summary.below_lower_bound, summary.bound_violations
    );
    if summary.bound_violations > 0 {
        return Err(CliError::Bound(format!("{} rows exceed the upper bound", summary.bound_violations)));
    }
    Ok(())
}

fn cmd_export(a: ExportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = from_json(&read_file(&a.path)?).map_err(|e| CliError::Parse(e.to_string()))?;
    let text = if doc.residues.is_empty() && doc.sequence.trim().is_empty() && a.output == OutputFormat::Xyz {
        xyz_records("", &[])
    } else {
        let c = load(&doc)?;
        match a.output {
            OutputFormat::Xyz => xyz(&c),
            OutputFormat::Structured => {
                let mut fresh = document(&c);
                fresh.report = doc.report.clone();
                fresh.search = doc.search.clone();
                to_json(&fresh)
            }
            OutputFormat::Table => report_table(&fold_report(c.sequence(), &c, doc.report.map_or(Algorithm::Helix, |r| r.algorithm))),
        }
    };
    emit(&text, a.out.as_deref(), out)
}
