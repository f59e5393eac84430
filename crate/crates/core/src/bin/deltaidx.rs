//! Command-line front end: build, query, inspect and verify indexes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
//! 3 malformed index file.

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltaidx::bundle::MAGIC;
use deltaidx::compressor::HeightMode;
use deltaidx::corpus::CorpusSpec;
use deltaidx::error::Error;
use deltaidx::index::{Index, IndexConfig};
use deltaidx::pattern::CutMode;
use deltaidx::query::QueryOptions;
use deltaidx::stats::Stats;
use deltaidx::verify::{verify, VerifyConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "deltaidx", version, about = "Grammar-based self-index for repetitive texts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a text file.
    Build(BuildArgs),
    /// Print the sorted 1-based positions of a pattern, one per line.
    Locate(QueryArgs),
    /// Print the number of occurrences of a pattern.
    Count(QueryArgs),
    /// Print size and complexity metrics of an index or a text file.
    Stats(StatsArgs),
    /// Compare the index against a naive scan of the text.
    Verify(VerifyArgs),
    /// Write a generated corpus, e.g. `fibonacci:20` or `random:4096,26,7`.
    Gen(GenArgs),
}

#[derive(Args)]
struct BuildConfigArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap the number of parsing levels (the default).
    #[arg(long, conflicts_with = "no_cap")]
    cap_height: bool,
    /// Parse until a single symbol remains.
    #[arg(long)]
    no_cap: bool,
    /// Extra compression attempts when the grammar is too large.
    #[arg(long, default_value_t = 4)]
    retries: u32,
    /// Depth of the short-pattern trie (default: ceil(log2 g)).
    #[arg(long)]
    trie_len: Option<usize>,
    /// Index whitespace-separated tokens instead of bytes.
    #[arg(long)]
    tokens: bool,
}

impl BuildConfigArgs {
    fn config(&self) -> IndexConfig {
        IndexConfig {
            seed: self.seed,
            height: if self.no_cap { HeightMode::Uncapped } else { HeightMode::Capped },
            attempts: self.retries + 1,
            trie_len: self.trie_len,
            ..Default::default()
        }
    }

    fn build(&self, text: &[u8]) -> Result<Index, Error> {
        if self.tokens {
            let s = std::str::from_utf8(text).map_err(|_| Error::InvalidArgument("token input is not UTF-8".into()))?;
            Index::build_tokens(s, &self.config())
        } else {
            Index::build_bytes(text, &self.config())
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    input: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    cfg: BuildConfigArgs,
}

#[derive(Args)]
struct QueryArgs {
    index: PathBuf,
    /// The pattern; use --pattern-file for binary patterns.
    #[arg(required_unless_present = "pattern_file")]
    pattern: Option<String>,
    /// Read the pattern verbatim from a file.
    #[arg(long, conflicts_with = "pattern")]
    pattern_file: Option<PathBuf>,
    #[arg(long, default_value = "mcut")]
    cuts: CutMode,
    /// Skip the short-pattern trie.
    #[arg(long)]
    no_trie: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct StatsArgs {
    /// An index file, or a text file to index first.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: StatsFormat,
    #[command(flatten)]
    cfg: BuildConfigArgs,
}

#[derive(Args)]
struct VerifyArgs {
    index: PathBuf,
    /// Original text; defaults to the text reconstructed from the grammar.
    #[arg(long)]
    text: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    patterns: usize,
    #[arg(long, default_value_t = 64)]
    max_m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    spec: CorpusSpec,
    /// Output file (default: stdout).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

enum Failure {
    Verify,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn read_pattern(a: &QueryArgs) -> Result<Vec<u8>, Failure> {
    match (&a.pattern, &a.pattern_file) {
        (_, Some(f)) => Ok(std::fs::read(f)?),
        (Some(p), None) => Ok(p.clone().into_bytes()),
        (None, None) => unreachable!("clap requires one of them"),
    }
}

fn query_opts(a: &QueryArgs) -> QueryOptions {
    QueryOptions {
        cuts: a.cuts,
        use_trie: !a.no_trie,
        ..Default::default()
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    match cli.command {
        Command::Build(a) => {
            let text = std::fs::read(&a.input)?;
            let t0 = Instant::now();
            let idx = a.cfg.build(&text)?;
            let ms = t0.elapsed().as_millis();
            idx.save(&a.out)?;
            let h = idx.header();
            writeln!(out, "n: {}", h.n)?;
            writeln!(out, "sigma: {}", h.sigma)?;
            writeln!(out, "delta: {} ({}/{})", h.delta.as_f64(), h.delta.num, h.delta.den)?;
            writeln!(out, "g: {}", h.grammar_size)?;
            writeln!(out, "bound_term: {:.3}", h.bound_term)?;
            writeln!(out, "attempts: {}", h.attempts_made)?;
            writeln!(out, "build_ms: {ms}")?;
        }
        Command::Locate(a) => {
            let idx = Index::load(&a.index)?;
            let p = read_pattern(&a)?;
            for pos in idx.locate_bytes(&p, &query_opts(&a))? {
                writeln!(out, "{pos}")?;
            }
        }
        Command::Count(a) => {
            let idx = Index::load(&a.index)?;
            let p = read_pattern(&a)?;
            writeln!(out, "{}", idx.count_bytes(&p, &query_opts(&a))?)?;
        }
        Command::Stats(a) => {
            let bytes = std::fs::read(&a.input)?;
            let stats = if bytes.starts_with(MAGIC) {
                Stats::from_index(&Index::from_bytes(&bytes)?)
            } else {
                Stats::from_index(&a.cfg.build(&bytes)?)
            };
            match a.format {
                StatsFormat::Json => writeln!(out, "{}", stats.to_json())?,
                StatsFormat::Csv => write!(out, "{}", stats.to_csv())?,
            }
        }
        Command::Verify(a) => {
            let idx = Index::load(&a.index)?;
            let text = match &a.text {
                Some(path) => {
                    let raw = std::fs::read(path)?;
                    match idx.alphabet().encode(&raw) {
                        Some(t) if !t.is_empty() => t,
                        _ => {
                            writeln!(out, "text does not match the index alphabet")?;
                            out.flush()?;
                            return Err(Failure::Verify);
                        }
                    }
                }
                None => idx.text(),
            };
            let cfg = VerifyConfig {
                patterns: a.patterns,
                max_m: a.max_m,
                seed: a.seed,
            };
            let mut r = verify(&idx, &text, &cfg);
            if text.len() as u64 != idx.text_len() {
                r.locate_mismatches += 1;
            }
            writeln!(out, "patterns: {}", r.patterns)?;
            writeln!(out, "occurrences: {}", r.total_occurrences)?;
            writeln!(out, "locate mismatches: {}", r.locate_mismatches)?;
            writeln!(out, "count mismatches: {}", r.count_mismatches)?;
            writeln!(out, "cut mismatches: {}", r.cut_mismatches)?;
            writeln!(out, "mismatches: {}", r.mismatches())?;
            writeln!(out, "duplicates: {}", r.duplicates)?;
            writeln!(out, "max cut set: {}", r.max_cut_set)?;
            out.flush()?;
            if !r.passed() {
                return Err(Failure::Verify);
            }
        }
        Command::Gen(a) => {
            let data = a.spec.generate()?;
            match &a.out {
                Some(path) => std::fs::write(path, data)?,
                None => out.write_all(&data)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Lib(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("deltaidx: {e}");
            match e {
                Error::Format { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
