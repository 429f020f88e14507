//! Command-line front end. Every verb yields one report per (input, theory)
//! or per input; output order follows input order regardless of threads.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on any input or
//! computation error.

mod ingest;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use crate::cube::DEFAULT_MAX_CROSSINGS;
use crate::error::{Error, Result};
use crate::exactalg::CoefficientRing;
use crate::frobenius::{Theory, TheoryTriple};
use crate::homology::ComputeOptions;
use crate::linkio::parse_input;

pub use ingest::{
    ingest_pairs, ingest_pairs_str, ingest_table, ingest_table_str, is_pair_table, DiagramPair, Ingest, NamedDiagram, RowError,
    KNOTS_CSV, LINKS_CSV, REIDEMEISTER_CSV,
};

#[derive(Parser, Debug)]
#[command(name = "khlab", version, about = "Filtered Khovanov-type link homologies and the s-invariant")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology and filtration profile in every degree.
    Homology(ComputeArgs),
    /// The s-invariant of a knot.
    S(ComputeArgs),
    /// s under every theory of a panel; fails unless all values agree.
    VerifyTheorem(ComputeArgs),
    /// Check that the basis change between two theories is a filtered chain isomorphism.
    VerifyTwist(TwistArgs),
    /// Compare integral homology with its reduction mod p.
    VerifyTorsion(TorsionArgs),
    /// Canonical cycles, one per orientation.
    Canonical(ComputeArgs),
    /// Batch checks: dimension law and s agreement per row, or invariance per diagram pair.
    Table(ComputeArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// A PD code, e.g. "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".
    #[arg(long)]
    pub pd: Option<String>,
    /// A braid closure `<strands>:<letters>`, e.g. `2:1,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub braid: Option<String>,
    /// A CSV table with header `name,input` (or `name,left,right,move` for `table`).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// A bundled table.
    #[arg(long, value_enum)]
    pub bundled: Option<Bundled>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bundled {
    Knots,
    Links,
    Reidemeister,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TheoryArgs {
    /// khovanov, lee or bar-natan.
    #[arg(long, value_parser = parse_theory, conflicts_with_all = ["h", "t"])]
    pub theory: Option<Theory>,
    /// q, z or fp:<p>.
    #[arg(long)]
    pub ring: Option<String>,
    /// Integer h of x^2 = h x + t (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<i64>,
    /// Integer t of x^2 = h x + t (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
    /// A theory as `ring/h/t`; repeatable.
    #[arg(long = "triple")]
    pub triples: Vec<String>,
    #[arg(long, value_enum)]
    pub panel: Option<Panel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    /// q/0/1, fp:2/1/0, fp:3/1/0, fp:5/0/1, z/0/1, z/1/0.
    Default,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Skip filtered Gaussian elimination.
    #[arg(long)]
    pub no_reduce: bool,
    /// Refuse diagrams with more crossings.
    #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
    pub max_crossings: usize,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, env = "KHLAB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    fn compute(&self) -> ComputeOptions {
        ComputeOptions { reduce: !self.no_reduce, max_crossings: self.max_crossings }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub theory: TheoryArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct TwistArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Source theory `ring/h/t`.
    #[arg(long)]
    pub src: String,
    /// Target theory `ring/h/t` over the same ring.
    #[arg(long)]
    pub dst: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct TorsionArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub theory: TheoryArgs,
    /// Prime to reduce by; repeatable.
    #[arg(long = "prime", required = true)]
    pub primes: Vec<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_theory(s: &str) -> std::result::Result<Theory, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Triples selected by flags, or `fallback` when none are given.
pub fn resolve_triples(args: &TheoryArgs, fallback: &[TheoryTriple]) -> Result<Vec<TheoryTriple>> {
    let mut out = Vec::new();
    let ring = args.ring.as_deref().map(CoefficientRing::parse).transpose()?;
    if let Some(theory) = args.theory {
        out.push(TheoryTriple::named(theory, ring.unwrap_or(theory.default_ring())));
    } else if ring.is_some() || args.h.is_some() || args.t.is_some() {
        out.push(TheoryTriple::from_ints(ring.unwrap_or(CoefficientRing::Rationals), args.h.unwrap_or(0), args.t.unwrap_or(0))?);
    }
    for t in &args.triples {
        out.push(TheoryTriple::parse(t)?);
    }
    if args.panel == Some(Panel::Default) {
        out.extend(TheoryTriple::default_panel());
    }
    if out.is_empty() {
        out.extend_from_slice(fallback);
    }
    Ok(out)
}

pub(crate) enum Inputs {
    Inline(NamedDiagram),
    Rows(Vec<NamedDiagram>),
    Pairs(Vec<DiagramPair>),
}

/// Parse the input source; row-level problems are returned as warnings.
pub(crate) fn load_inputs(input: &InputArgs) -> Result<(Inputs, Vec<RowError>)> {
    let inline = |text: String| -> Result<(Inputs, Vec<RowError>)> {
        let diagram = parse_input(&text)?;
        Ok((Inputs::Inline(NamedDiagram { name: text.clone(), input: text, diagram, line: 0 }), Vec::new()))
    };
    if let Some(pd) = &input.pd {
        return inline(pd.clone());
    }
    if let Some(b) = &input.braid {
        return inline(format!("braid:{b}"));
    }
    let (text, pairs) = match (&input.file, input.bundled) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
                _ => Error::Io(format!("{}: {e}", path.display())),
            })?;
            let pairs = is_pair_table(&text);
            (text, pairs)
        }
        (None, Some(Bundled::Knots)) => (KNOTS_CSV.to_owned(), false),
        (None, Some(Bundled::Links)) => (LINKS_CSV.to_owned(), false),
        (None, Some(Bundled::Reidemeister)) => (REIDEMEISTER_CSV.to_owned(), true),
        (None, None) => return Err(Error::BadInput("no input given".into())),
    };
    if pairs {
        let ingest = ingest_pairs_str(&text)?;
        Ok((Inputs::Pairs(ingest.rows), ingest.errors))
    } else {
        let ingest = ingest_table_str(&text)?;
        Ok((Inputs::Rows(ingest.rows), ingest.errors))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Status {
    Ok,
    Fail,
    Error,
}

/// One report: JSON value, one line of text, and its status.
pub(crate) struct Item {
    pub value: Value,
    pub text: String,
    pub status: Status,
}

impl Item {
    fn error(name: &str, triple: Option<&TheoryTriple>, e: &Error) -> Item {
        let mut value = serde_json::json!({ "name": name });
        if let Some(t) = triple {
            value["triple"] = Value::String(t.to_string());
        }
        value["error"] = serde_json::json!({ "code": e.code(), "message": e.to_string() });
        let prefix = triple.map_or(String::new(), |t| format!(" {t}"));
        Item { value, text: format!("{name}{prefix}: error [{}] {e}", e.code()), status: Status::Error }
    }
}

/// Result of a CLI invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run with explicit arguments (the first is the program name).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> Outcome {
    let common = match &cli.command {
        Command::Homology(a) | Command::S(a) | Command::VerifyTheorem(a) | Command::Canonical(a) | Command::Table(a) => {
            a.common.clone()
        }
        Command::VerifyTwist(a) => a.common.clone(),
        Command::VerifyTorsion(a) => a.common.clone(),
    };
    let mut stderr = String::new();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: thread pool: {e}\n") },
    };
    let result = pool.install(|| dispatch(&cli.command));
    let (items, single, warnings) = match result {
        Ok(r) => r,
        Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error [{}]: {e}\n", e.code()) },
    };
    for w in &warnings {
        stderr.push_str(&format!("warning: skipped {w}\n"));
    }
    for item in items.iter().filter(|i| i.status == Status::Error) {
        stderr.push_str(&format!("{}\n", item.text));
    }
    let worst = items.iter().map(|i| i.status).max().unwrap_or(Status::Ok);
    let mut code = match worst {
        Status::Ok => 0,
        Status::Fail => 1,
        Status::Error => 2,
    };
    if !warnings.is_empty() {
        code = 2;
    }
    let body = match common.format {
        Format::Json => {
            let value = if single && items.len() == 1 {
                items.into_iter().next().map(|i| i.value).unwrap_or(Value::Null)
            } else {
                Value::Array(items.into_iter().map(|i| i.value).collect())
            };
            let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Table => items.iter().map(|i| format!("{}\n", i.text)).collect(),
    };
    match &common.out {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr },
            Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("{stderr}error: {}: {e}\n", path.display()) },
        },
        None => Outcome { code, stdout: body, stderr },
    }
}

/// Items, whether the input was a single inline diagram, and skipped rows.
fn dispatch(cmd: &Command) -> Result<(Vec<Item>, bool, Vec<RowError>)> {
    let lee = [TheoryTriple::named(Theory::Lee, CoefficientRing::Rationals)];
    let (input, triples, per_input): (&InputArgs, Vec<TheoryTriple>, bool) = match cmd {
        Command::Homology(a) => (&a.input, resolve_triples(&a.theory, &lee)?, false),
        Command::S(a) => (&a.input, resolve_triples(&a.theory, &lee)?, false),
        Command::Canonical(a) => (&a.input, resolve_triples(&a.theory, &lee)?, false),
        Command::VerifyTheorem(a) => (&a.input, resolve_triples(&a.theory, &TheoryTriple::default_panel())?, true),
        Command::Table(a) => (&a.input, resolve_triples(&a.theory, &TheoryTriple::default_panel())?, true),
        Command::VerifyTorsion(a) => {
            let z = |h, t| TheoryTriple::from_ints(CoefficientRing::Integers, h, t).expect("valid");
            (&a.input, resolve_triples(&a.theory, &[z(0, 1), z(1, 0)])?, false)
        }
        Command::VerifyTwist(a) => (&a.input, vec![TheoryTriple::parse(&a.src)?, TheoryTriple::parse(&a.dst)?], true),
    };
    let (inputs, warnings) = load_inputs(input)?;
    let single = matches!(inputs, Inputs::Inline(_));
    let rows = match inputs {
        Inputs::Inline(d) => vec![d],
        Inputs::Rows(rows) => rows,
        Inputs::Pairs(pairs) => {
            let Command::Table(a) = cmd else {
                return Err(Error::BadInput("diagram-pair tables are only accepted by `table`".into()));
            };
            let opts = a.common.compute();
            let items = pairs.par_iter().map(|p| render::pair_item(p, &triples, opts)).collect();
            return Ok((items, false, warnings));
        }
    };
    let items: Vec<Item> = if per_input {
        rows.par_iter().map(|row| per_input_item(cmd, row, &triples)).collect()
    } else {
        let jobs: Vec<(&NamedDiagram, &TheoryTriple)> = rows.iter().flat_map(|r| triples.iter().map(move |t| (r, t))).collect();
        match cmd {
            Command::VerifyTorsion(a) => {
                let jobs: Vec<(&NamedDiagram, &TheoryTriple, u64)> =
                    jobs.iter().flat_map(|(r, t)| a.primes.iter().map(move |p| (*r, *t, *p))).collect();
                jobs.par_iter().map(|(r, t, p)| render::torsion_item(r, t, *p, a.common.compute())).collect()
            }
            _ => jobs.par_iter().map(|(r, t)| per_triple_item(cmd, r, t)).collect(),
        }
    };
    Ok((items, single, warnings))
}

fn per_triple_item(cmd: &Command, row: &NamedDiagram, t: &TheoryTriple) -> Item {
    match cmd {
        Command::Homology(a) => render::homology_item(row, t, a.common.compute()),
        Command::S(a) => render::s_item(row, t, a.common.compute()),
        Command::Canonical(a) => render::canonical_item(row, t, a.common.max_crossings),
        _ => unreachable!("per-input verbs are handled separately"),
    }
}

fn per_input_item(cmd: &Command, row: &NamedDiagram, triples: &[TheoryTriple]) -> Item {
    match cmd {
        Command::VerifyTheorem(a) => render::theorem_item(row, triples, a.common.compute()),
        Command::Table(a) => render::table_item(row, triples, a.common.compute()),
        Command::VerifyTwist(a) => render::twist_item(row, &triples[0], &triples[1], a.common.max_crossings),
        _ => unreachable!("per-triple verbs are handled separately"),
    }
}

/// Entry point for the binary: runs, prints, and returns the exit status.
pub fn main() -> i32 {
    let out = run_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
