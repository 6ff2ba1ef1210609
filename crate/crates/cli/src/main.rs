mod commands;
mod report;
mod run_config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use run_config::RunArgs;

/// Lexical simplification with a masked language model.
#[derive(Debug, Parser)]
#[command(name = "lsbert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LsMode {
    /// Substitute generation only: precision, recall, F1.
    Sg,
    /// Generation, ranking and acceptance: precision and accuracy.
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simplify sentences, one per line.
    Simplify {
        #[command(flatten)]
        run: RunArgs,
        /// Input file (stdin when omitted).
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        /// Trace file when --out is not given.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Show candidates and the ranking table for one word.
    Candidates {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        sentence: String,
        /// Token index of the word to simplify.
        #[arg(long)]
        index: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate on a lexical simplification benchmark (TSV).
    EvalLs {
        #[command(flatten)]
        run: RunArgs,
        dataset: PathBuf,
        /// What to score: generated substitutes only, or the full pipeline.
        #[arg(long, value_enum, default_value = "sg")]
        task: LsMode,
        #[arg(long)]
        json: bool,
    },
    /// SARI and reading ease of system output against references.
    EvalTs {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_name = "PATH")]
        source: PathBuf,
        /// System output; when omitted the source is simplified first.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Reference file, one per annotator (repeatable).
        #[arg(long = "reference", value_name = "PATH", required = true)]
        references: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simplify { run, input, trace } => commands::simplify(&run, input, trace),
        Command::Candidates {
            run,
            sentence,
            index,
            json,
        } => commands::candidates(&run, &sentence, index, json),
        Command::EvalLs {
            run,
            dataset,
            task,
            json,
        } => commands::eval_ls(&run, &dataset, task, json),
        Command::EvalTs {
            run,
            source,
            output,
            references,
            json,
        } => commands::eval_ts(&run, &source, output.as_deref(), &references, json),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
