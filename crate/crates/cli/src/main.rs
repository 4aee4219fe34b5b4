//! `supersem`: detection, validation, statistics, scoring and analysis of
//! superlative frame corpora, plus the annotation server.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Failure classes, mapped to exit codes 2 and 1.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, configuration or missing files.
    Usage(String),
    /// Input that loads but fails validation, or any other data error.
    Data(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "supersem", version, about = "Superlative frame toolkit")]
pub struct Cli {
    /// Key-value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write the command's report as JSON to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Table {
    Table1,
    Fig2,
    Fig3,
    Fig4,
    Predicates,
    Discourse,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find superlative candidates in a documents file.
    Detect {
        #[arg(long = "in")]
        input: PathBuf,
        /// Candidate JSONL output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra adjectives, whitespace separated.
        #[arg(long)]
        adjectives: Option<PathBuf>,
        /// Hand-marked sentences to measure recall on instead of detecting.
        #[arg(long)]
        marked: Option<PathBuf>,
    },
    /// Check every frame of a corpus file.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Report role and anchor problems as warnings.
        #[arg(long)]
        non_strict: bool,
    },
    /// Corpus statistics tables.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table1")]
        table: Table,
        /// NP-NP relations (TSV) for the discourse table.
        #[arg(long)]
        relations: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Stratified train/dev/test split.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Three comma-separated fractions, e.g. 0.8,0.1,0.1.
        #[arg(long)]
        fractions: Option<String>,
        #[arg(long)]
        superlatives_only: bool,
    },
    /// Score slot predictions against a gold corpus.
    Score {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
    },
    /// Agreement between two annotations of the same instances.
    Iaa {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Score a seeded random subset of this size.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Entropy of comparison types in prediction beams.
    Entropy {
        #[arg(long)]
        beams: PathBuf,
        /// nats or bits.
        #[arg(long)]
        base: Option<String>,
    },
    /// Conditional log-probability preferences.
    Prefs {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Challenge-set accuracy by reading.
    Challenge {
        #[arg(long)]
        items: PathBuf,
        #[arg(long)]
        beams: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Parse, canonicalize and classify a comparison-set expression.
    Notation { text: String },
    /// Run the annotation server.
    Serve {
        /// Documents JSONL; candidates are detected unless given.
        #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
        docs: Option<PathBuf>,
        /// An annotated corpus to import as the `gold` annotator.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, requires = "docs")]
        candidates: Option<PathBuf>,
        #[arg(long)]
        journal: Option<PathBuf>,
        /// Lines of `annotator<TAB>instance_id`.
        #[arg(long)]
        assignments: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
    /// Export annotations recorded in a journal as corpus JSONL.
    Export {
        #[arg(long)]
        docs: PathBuf,
        #[arg(long)]
        journal: PathBuf,
        #[arg(long)]
        candidates: Option<PathBuf>,
        /// One annotator's writes (latest decided write otherwise).
        #[arg(long)]
        annotator: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Data(_) => ExitCode::from(1),
            }
        }
    }
}
