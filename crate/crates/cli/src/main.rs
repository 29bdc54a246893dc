use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qharm::report::EXIT_INPUT;
use qharm::run::{expand_paths, DEFAULT_MAX_DIM};
use qharm::{corpus, run, Options, Source};
use qharm_core::scenario::Stage;
use qharm_core::Tolerance;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qharm",
    version,
    about = "Harmonic elements of finite quantum group actions"
)]
struct Cli {
    /// Comparison tolerance (overrides eps_compare).
    #[arg(long, global = true, env = "QHARM_TOLERANCE")]
    tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    report: ReportFormat,
    /// Seed for randomized state sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Refuse scenarios whose quantum group or module exceeds this dimension.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Hopf, action and state axioms.
    Verify { paths: Vec<PathBuf> },
    /// Ergodicity, non-degeneracy, harmonic space and Choi–Effros product.
    Harmonic { paths: Vec<PathBuf> },
    /// Everything, including the theorem suite and the classical oracle.
    Suite { paths: Vec<PathBuf> },
    /// The full suite over files or directories; the built-in corpus if none are given.
    Battery { paths: Vec<PathBuf> },
    /// Write the built-in corpus as JSON files.
    ExportCorpus { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("qharm: {msg}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<i32, String> {
    let mut tolerance = Tolerance::default();
    if let Some(t) = cli.tolerance {
        tolerance = tolerance.with_compare(t).map_err(|e| e.to_string())?;
    }
    let (stage, paths) = match cli.command {
        Command::ExportCorpus { dir } => {
            let n =
                corpus::export(&dir).map_err(|e| format!("cannot write {}: {e}", dir.display()))?;
            println!("wrote {n} scenarios to {}", dir.display());
            return Ok(0);
        }
        Command::Verify { paths } => (Stage::Verify, paths),
        Command::Harmonic { paths } => (Stage::Harmonic, paths),
        Command::Suite { paths } => (Stage::Suite, paths),
        Command::Battery { paths } => (Stage::Suite, paths),
    };
    let sources: Vec<Source> = if paths.is_empty() {
        corpus::corpus()
            .into_iter()
            .map(|f| Source::Inline(Box::new(f)))
            .collect()
    } else {
        expand_paths(&paths)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(Source::File)
            .collect()
    };
    let opts = Options {
        tolerance,
        seed: cli.seed,
        max_dim: cli.max_dim,
        stage,
    };
    let report = run(&sources, &opts);
    let text = match cli.report {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json() + "\n",
    };
    match &cli.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?
        }
        None => print!("{text}"),
    }
    Ok(report.exit_code)
}
