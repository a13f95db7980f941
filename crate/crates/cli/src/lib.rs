//! The `dip` command line: annotation, prompt rendering, dictionary
//! construction and parsing, matrix runs, scoring, and report rendering.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/format error, 3
//! provider/transport error. Diagnostics go to stderr; data goes to stdout
//! or to output files.

mod commands;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use dip_core::prompts::PromptStrategy;

#[derive(Parser)]
#[command(
    name = "dip",
    version,
    about = "Dictionary-insertion prompting: annotate questions with bilingual glosses, run prompting strategies against LLM providers or replay stores, and score the results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate text from stdin with interleaved English glosses
    Annotate {
        /// Lexicon JSONL file
        #[arg(long)]
        lexicon: PathBuf,
        /// Emit the dictionary block instead of the annotated text
        #[arg(long)]
        block: bool,
        /// Reject duplicate normalized keys instead of keeping the first
        #[arg(long)]
        strict_duplicates: bool,
    },
    /// Render a strategy prompt for a question read from stdin
    Prompt {
        #[arg(long, value_parser = commands::parse_strategy)]
        strategy: PromptStrategy,
        /// Language code of the question, e.g. bug_Latn
        #[arg(long)]
        language: String,
        /// Final-answer type: numeric, choice, or boolean
        #[arg(long, default_value = "numeric", value_parser = commands::parse_answer_type)]
        answer_type: dip_core::datasets::AnswerType,
        /// Lexicon JSONL file (required for dictionary strategies)
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Emit dictionary-construction prompts for a bitext JSONL file
    Dictgen {
        /// Language code the source sentences are written in
        #[arg(long)]
        language: String,
        /// Bitext JSONL of {"english", "source"}; stdin when omitted
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Parse dictionary-construction transcripts into a lexicon
    Dictparse {
        /// Language code expected in the transcripts
        #[arg(long)]
        language: String,
        /// Transcript JSONL of {"raw", ...}; stdin when omitted
        #[arg(long)]
        input: Option<PathBuf>,
        /// Reject duplicate normalized keys instead of keeping the first
        #[arg(long)]
        strict_duplicates: bool,
    },
    /// Execute the strategy × language × dataset matrix from a config file
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured output directory
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Score a JSONL file of hypothesis/reference or prediction/gold pairs
    Score {
        /// bleu, chrfpp, or accuracy
        #[arg(long, value_parser = commands::parse_metric)]
        metric: commands::Metric,
        /// Input JSONL; stdin when omitted
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Re-render tables and statistics from a records.jsonl file
    Report {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

/// Errors mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input data, config, or file contents (exit 2).
    Data(String),
    /// Provider or transport failure (exit 3).
    Provider(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 2,
            CliError::Provider(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Data(m) | CliError::Provider(m) => m,
        }
    }
}

/// Parse `argv` and run the selected subcommand, returning the process exit
/// code.
pub fn dispatch(argv: Vec<String>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default()).try_init();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(error) => {
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{error}");
                    0
                }
                _ => {
                    eprint!("{error}");
                    1
                }
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => 0,
        Err(error) => {
            eprintln!("dip: {}", error.message());
            error.exit_code()
        }
    }
}
