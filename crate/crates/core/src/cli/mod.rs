//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for usage errors, refused guards and I/O failures.

pub mod certificate;
pub mod dot;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::brute_force::{exact_alpha, exact_f, DEFAULT_BUDGET};
use crate::construction::{select_witness, WitnessSpec};
use crate::counting::count_residues;
use crate::error::{Error, Result};
use crate::hamming::{unrank, HammingParams, VertexId};
use crate::isoperimetry::{exhaustive_lemma_check, sampled_lemma_check, EXHAUSTIVE_GUARD};
use crate::partition::{make_partition, BalancedPartition};
use crate::verifier::{certify, certify_family, CertifyOptions, CheckStatus, Mode, DEFAULT_ENUMERATION_LIMIT};

pub use certificate::{format_certificate, parse_certificate};

/// Environment variable capping the worker pool; 0 or unset means automatic.
pub const THREADS_ENV: &str = "HW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hamming-witness", version, about = "Witness subgraphs of Hamming graphs with small maximum degree")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and certify the witness subgraph for H(n,k).
    Witness(WitnessArgs),
    /// Exact f and independence number on tiny instances.
    Bruteforce(BruteforceArgs),
    /// Check the edge-count inequality on vertex subsets.
    Isoper(IsoperArgs),
    /// Write the witness subgraph as a Graphviz graph.
    ExportDot(DotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Number of coordinates.
    #[arg(long)]
    pub n: usize,
    /// Alphabet size.
    #[arg(long)]
    pub k: u32,
    /// Write output here (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
    CountsOnly,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Member vertices drawn in sampled mode.
    #[arg(long = "samples", default_value_t = 10_000)]
    pub sample_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest k^n enumerated in exhaustive mode.
    #[arg(long = "limit", default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub enumeration_limit: u64,
    /// Explicit partition, e.g. "1,2;3,4"; must still be balanced.
    #[arg(long)]
    pub blocks: Option<String>,
    /// Also scan every residue pair and report it on stderr.
    #[arg(long)]
    pub all_pairs: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BruteforceArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Search-node budget per search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct IsoperArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Random subsets when the graph is too large for full enumeration.
    #[arg(long = "samples", default_value_t = 10_000)]
    pub sample_size: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DotArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Override the selected X residue.
    #[arg(long, requires = "i2")]
    pub i1: Option<u32>,
    /// Override the selected Y residue.
    #[arg(long, requires = "i1")]
    pub i2: Option<u32>,
}

/// Text produced by a command and whether its checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    /// Extra diagnostics for stderr.
    pub notes: String,
    pub passed: bool,
}

impl Report {
    fn new(text: String, passed: bool) -> Self {
        Self {
            text,
            notes: String::new(),
            passed,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Exit code for a command that could not complete.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) => 1,
        _ => 2,
    }
}

fn params(g: &GraphArgs) -> Result<HammingParams> {
    HammingParams::new(g.n, g.k)
}

fn digit_strings(ids: &[VertexId], p: &HammingParams) -> Result<String> {
    let words = ids
        .iter()
        .map(|&id| unrank(id, p).map(|v| v.digit_string(p.k())))
        .collect::<Result<Vec<_>>>()?;
    Ok(words.join(","))
}

pub fn run_witness(args: &WitnessArgs) -> Result<Report> {
    let p = params(&args.graph)?;
    let part = match &args.blocks {
        Some(text) => BalancedPartition::parse_blocks(p.n(), text)?.checked()?,
        None => make_partition(p.n())?,
    };
    let mode = match args.mode {
        ModeArg::Auto => Mode::auto(&p, args.enumeration_limit),
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Sampled => Mode::Sampled,
        ModeArg::CountsOnly => Mode::CountsOnly,
    };
    let opts = CertifyOptions {
        mode,
        sample_size: args.sample_size,
        seed: args.seed,
        limit: args.enumeration_limit,
    };
    let cert = certify(&p, &part, &opts)?;
    let mut report = Report::new(format_certificate(&cert), cert.passed());
    if args.all_pairs {
        for m in certify_family(&p, &part, &opts)? {
            let observed = m.delta_observed.map_or("none".to_string(), |d| d.to_string());
            writeln!(
                report.notes,
                "pair i1={} i2={} size={} delta_observed={observed} degree_le_bound={} bipartite={}",
                m.i1, m.i2, m.size, m.degree_le_bound, m.bipartite
            )
            .unwrap();
            report.passed &= m.degree_le_bound != CheckStatus::Fail && m.bipartite != CheckStatus::Fail;
        }
    }
    Ok(report)
}

pub fn run_bruteforce(args: &BruteforceArgs) -> Result<Report> {
    let p = params(&args.graph)?;
    let f = exact_f(&p, args.budget)?;
    let alpha = exact_alpha(&p, args.budget)?;
    let alpha_ok = p.alpha() == alpha.into();
    let f_ok = !f.exhausted || f.value <= p.degree_cap();
    let text = format!(
        "n={}\nk={}\nalpha={alpha}\nf={}\nexhausted={}\nnodes={}\nwitness={}\n",
        p.n(),
        p.k(),
        f.value,
        f.exhausted,
        f.nodes_explored,
        digit_strings(&f.witness_subset, &p)?
    );
    Ok(Report::new(text, alpha_ok && f_ok))
}

pub fn run_isoper(args: &IsoperArgs) -> Result<Report> {
    let p = params(&args.graph)?;
    let exhaustive = p.vertex_count_u64().is_some_and(|c| c <= EXHAUSTIVE_GUARD);
    let r = if exhaustive {
        exhaustive_lemma_check(&p)?
    } else {
        sampled_lemma_check(&p, args.sample_size, args.seed)?
    };
    let mut text = format!(
        "n={}\nk={}\nmode={}\nseed={}\nsubsets={}\nviolations={}\nmin_margin={:.12}\nmin_margin_vertices={}\nmin_margin_edges={}\nmin_margin_witness={}\n",
        p.n(),
        p.k(),
        if exhaustive { "exhaustive" } else { "sampled" },
        args.seed,
        r.subsets_checked,
        r.violation_count,
        r.min_margin,
        r.min_margin_stats.vertex_count,
        r.min_margin_stats.edge_count,
        digit_strings(&r.min_margin_witness, &p)?
    );
    for v in &r.violations {
        writeln!(text, "violation={}", digit_strings(v, &p)?).unwrap();
    }
    Ok(Report::new(text, r.passed()))
}

pub fn run_export_dot(args: &DotArgs) -> Result<Report> {
    let p = params(&args.graph)?;
    let part = make_partition(p.n())?;
    let (i1, i2) = match (args.i1, args.i2) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let counts = count_residues(&p, &part)?;
            select_witness(&counts.x_counts, &counts.y_counts)
        }
    };
    let w = WitnessSpec::new(p, part, i1, i2)?;
    Ok(Report::new(dot::witness_dot(&w)?, true))
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Witness(a) => run_witness(a),
        Command::Bruteforce(a) => run_bruteforce(a),
        Command::Isoper(a) => run_isoper(a),
        Command::ExportDot(a) => run_export_dot(a),
    }
}

impl Command {
    pub fn out_path(&self) -> Option<&Path> {
        let g = match self {
            Command::Witness(a) => &a.graph,
            Command::Bruteforce(a) => &a.graph,
            Command::Isoper(a) => &a.graph,
            Command::ExportDot(a) => &a.graph,
        };
        g.out.as_deref()
    }
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::from(e.error))?;
    Ok(())
}

pub fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
    }
}

/// Runs a parsed command line, writes its output and returns the exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = thread_count().and_then(|threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        let report = pool.install(|| run(&cli.command))?;
        match cli.command.out_path() {
            Some(path) => write_atomic(path, &report.text)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(report.text.as_bytes())?;
                stdout.flush()?;
            }
        }
        Ok(report)
    });
    match result {
        Ok(report) => {
            eprint!("{}", report.notes);
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}
