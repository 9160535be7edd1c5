//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::generate::blowup_family;
use crate::locality::sample_signature;
use crate::module_builder::{build, Method, PipelineConfig};
use crate::normalize::clausify;
use crate::oracle::{inseparable_sampled, TableauConfig};
use crate::parser_io::{
    parse_ontology, parse_signature, serialize_axiom, serialize_clauses, serialize_concept,
    serialize_ontology, serialize_signature,
};
use crate::report::emit_report;
use crate::syntax::{Ontology, Signature};

#[derive(Debug, Parser)]
#[command(name = "alcmod", version, about = "General modules, deductive modules and uniform interpolants for ALC")]
pub struct Cli {
    #[command(flatten)]
    pub budgets: Budgets,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Budgets {
    /// Time limit for subsumption deletion.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub subsumption_budget_ms: u64,
    /// Time limit per role for conflict computation; roles that run out are
    /// added to the signature.
    #[arg(long, global = true, default_value_t = 30_000)]
    pub conflict_budget_ms: u64,
    /// Node limit of the tableau used by `check`.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_tableau_nodes: usize,
    /// Skip the ⊤⊥*-module preprocessing step.
    #[arg(long, global = true)]
    pub no_star_module: bool,
}

impl Budgets {
    fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            subsumption_budget: Duration::from_millis(self.subsumption_budget_ms),
            conflict_budget: Some(Duration::from_millis(self.conflict_budget_ms)),
            star_module: !self.no_star_module,
            ..PipelineConfig::default()
        }
    }

    fn tableau(&self) -> TableauConfig {
        TableauConfig {
            max_nodes: self.max_tableau_nodes.max(1),
        }
    }
}

#[derive(Debug, Args)]
pub struct Request {
    #[arg(long)]
    pub ontology: PathBuf,
    #[arg(long)]
    pub signature: PathBuf,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Gm,
    GmStar,
    Dm,
    Ui,
    Locality,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Gm => Method::Gm,
            MethodArg::GmStar => Method::GmStar,
            MethodArg::Dm => Method::Dm,
            MethodArg::Ui => Method::Ui,
            MethodArg::Locality => Method::Locality,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal-form clauses and the definer map.
    Normalize {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// General module.
    Gm(Request),
    /// General module with definer elimination.
    GmStar(Request),
    /// Deductive module (a subset of the input).
    Dm(Request),
    /// Uniform interpolant; the report records whether it is exact.
    Ui(Request),
    /// ⊤⊥*-locality module.
    Locality(Request),
    /// Sampled Σ-inseparability check of two ontologies.
    Check {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        signature: PathBuf,
        #[arg(long)]
        against: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(0..=3))]
        depth: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one method on sampled signatures and report result sizes and times.
    Bench {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        sig_size: usize,
        #[arg(long, default_value_t = 10)]
        sig_count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Gm)]
        method: MethodArg,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the exponential-blowup ontology Oₙ and its signature Σₙ.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Signature file; defaults to the output path with extension `sig`.
        #[arg(long)]
        signature_out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 on success, 1 on input errors, 2 when a budget or resource
/// limit stops the run.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::ResourceExceeded { .. } => 2,
        Error::Parse(_) | Error::NotRoleIsolated | Error::SignatureTooLarge { .. } | Error::Io { .. } => 1,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_ontology(path: &Path) -> Result<Ontology, Error> {
    Ok(parse_ontology(&read(path)?)?)
}

fn load_signature(path: &Path) -> Result<Signature, Error> {
    Ok(parse_signature(&read(path)?)?)
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let cfg = cli.budgets.pipeline();
    match &cli.command {
        Command::Normalize { ontology, out } => {
            let n = clausify(&load_ontology(ontology)?);
            let mut text = serialize_clauses(&n.clauses);
            for (d, c) in &n.definers.defs {
                let _ = writeln!(text, "# {d} := {}", serialize_concept(c));
            }
            emit(out.as_deref(), &text)
        }
        Command::Gm(r) => request(r, Method::Gm, &cfg),
        Command::GmStar(r) => request(r, Method::GmStar, &cfg),
        Command::Dm(r) => request(r, Method::Dm, &cfg),
        Command::Ui(r) => request(r, Method::Ui, &cfg),
        Command::Locality(r) => request(r, Method::Locality, &cfg),
        Command::Check {
            ontology,
            signature,
            against,
            samples,
            depth,
            seed,
        } => {
            let o1 = load_ontology(ontology)?;
            let o2 = load_ontology(against)?;
            let sigma = load_signature(signature)?;
            let verdict = inseparable_sampled(&o1, &o2, &sigma, *samples, *depth as usize, *seed, cli.budgets.tableau())?;
            match verdict {
                None => println!("inseparable"),
                Some(cex) => println!(
                    "separable: {} is entailed only by {}",
                    serialize_axiom(&cex.axiom),
                    if cex.entailed_by_first { "--ontology" } else { "--against" }
                ),
            }
            Ok(())
        }
        Command::Bench {
            ontology,
            sig_size,
            sig_count,
            seed,
            method,
            report,
        } => bench(&load_ontology(ontology)?, *sig_size, *sig_count, *seed, (*method).into(), report.as_deref(), &cfg),
        Command::Family { n, out, signature_out } => {
            let (o, sigma) = blowup_family(*n);
            write(out, &serialize_ontology(&o))?;
            let sig_path = signature_out.clone().unwrap_or_else(|| out.with_extension("sig"));
            write(&sig_path, &serialize_signature(&sigma))
        }
    }
}

fn request(r: &Request, method: Method, cfg: &PipelineConfig) -> Result<(), Error> {
    let o = load_ontology(&r.ontology)?;
    let sigma = load_signature(&r.signature)?;
    let outcome = build(method, &o, &sigma, cfg)?;
    emit(r.out.as_deref(), &serialize_ontology(&outcome.ontology))?;
    if let Some(p) = &r.report {
        write(p, &emit_report(&outcome.report))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct BenchRun {
    seed: u64,
    signature_size: usize,
    result_length: usize,
    result_axioms: usize,
    max_axiom_length: usize,
    time_ms: f64,
    ui_status: Option<String>,
}

#[derive(Debug, Serialize)]
struct BenchSummary {
    runs: usize,
    length_max: usize,
    length_avg: f64,
    length_median: f64,
    max_axiom_length: usize,
    time_avg_ms: f64,
}

#[derive(Debug, Serialize)]
struct BenchReport {
    method: String,
    input_length: usize,
    summary: BenchSummary,
    runs: Vec<BenchRun>,
}

fn median(mut xs: Vec<usize>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_unstable();
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m] as f64
    } else {
        (xs[m - 1] + xs[m]) as f64 / 2.0
    }
}

fn bench(
    o: &Ontology,
    sig_size: usize,
    sig_count: usize,
    seed: u64,
    method: Method,
    report: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<(), Error> {
    let mut runs = Vec::new();
    println!("{:>6} {:>6} {:>8} {:>7} {:>8} {:>10}", "seed", "|Σ|", "length", "axioms", "max-ax", "time-ms");
    for i in 0..sig_count as u64 {
        let s = seed.wrapping_add(i);
        let sigma = sample_signature(o, sig_size, s)?;
        let start = Instant::now();
        let outcome = build(method, o, &sigma, cfg)?;
        let run = BenchRun {
            seed: s,
            signature_size: sigma.len(),
            result_length: outcome.report.result_length,
            result_axioms: outcome.report.result_axioms,
            max_axiom_length: outcome.report.max_axiom_length,
            time_ms: start.elapsed().as_secs_f64() * 1e3,
            ui_status: outcome.report.ui_status,
        };
        println!(
            "{:>6} {:>6} {:>8} {:>7} {:>8} {:>10.2}",
            run.seed, run.signature_size, run.result_length, run.result_axioms, run.max_axiom_length, run.time_ms
        );
        runs.push(run);
    }
    let lengths: Vec<usize> = runs.iter().map(|r| r.result_length).collect();
    let count = runs.len().max(1) as f64;
    let summary = BenchSummary {
        runs: runs.len(),
        length_max: lengths.iter().copied().max().unwrap_or(0),
        length_avg: lengths.iter().sum::<usize>() as f64 / count,
        length_median: median(lengths),
        max_axiom_length: runs.iter().map(|r| r.max_axiom_length).max().unwrap_or(0),
        time_avg_ms: runs.iter().map(|r| r.time_ms).sum::<f64>() / count,
    };
    if let Some(p) = report {
        let rep = BenchReport {
            method: format!("{method:?}"),
            input_length: o.length(),
            summary,
            runs,
        };
        write(p, &serde_json::to_string_pretty(&rep).expect("bench report serializes"))?;
    }
    Ok(())
}
