use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use saddlefw::ingest::ParseOptions;
use saddlefw_harness::{compare, presets, stats, HarnessError};

#[derive(Parser)]
#[command(name = "saddlefw", version, about = "Run and compare saddle-point solver benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every algorithm of a TOML config; writes trace.csv and summary.json.
    Run { config: PathBuf },
    /// Check a trace against thresholds and a baseline trace.
    Compare {
        trace: PathBuf,
        baseline: PathBuf,
        spec: PathBuf,
    },
    /// Describe a named preset, or print it as TOML with --emit.
    Preset {
        name: String,
        #[arg(long)]
        emit: bool,
    },
    /// Parse a LIBSVM file.
    Parse {
        path: PathBuf,
        /// Print sizes and class counts.
        #[arg(long)]
        stats: bool,
        /// Feature indices start at 0.
        #[arg(long)]
        zero_based: bool,
        /// Minimum feature dimension.
        #[arg(long)]
        dim: Option<usize>,
    },
}

fn dispatch(cmd: Command) -> Result<(), HarnessError> {
    match cmd {
        Command::Run { config } => {
            let (out, summary) = saddlefw_harness::run_config_file(&config)?;
            for r in &summary.runs {
                let best = r
                    .best_gap
                    .as_ref()
                    .map(|g| format!("best gap_z {:e} at k={}", g.gap_z, g.k))
                    .unwrap_or_else(|| "no best iterate".to_string());
                println!("{:<7} {} iterations, {best}", r.algorithm, r.iterations_completed);
            }
            println!("trace {}", out.trace.display());
            println!("summary {}", out.summary.display());
            Ok(())
        }
        Command::Compare { trace, baseline, spec } => {
            let outcomes = compare::compare_files(&trace, &baseline, &spec)?;
            for o in &outcomes {
                println!("{}", o.line);
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} checks, {failed} failed", outcomes.len());
            if failed > 0 {
                return Err(HarnessError::Failed(format!("{failed} check(s) failed")));
            }
            Ok(())
        }
        Command::Preset { name, emit } => {
            let cfg = presets::preset(&name)?;
            if emit {
                print!("{}", cfg.to_toml_string());
            } else {
                println!("{name}: {}", presets::describe(&cfg));
            }
            Ok(())
        }
        Command::Parse {
            path,
            stats: show,
            zero_based,
            dim,
        } => {
            let opts = ParseOptions {
                declared_dim: dim,
                one_based: !zero_based,
            };
            let ds = stats::load_dataset(&path, opts)?;
            if show {
                print!("{}", stats::describe(&ds));
            } else {
                println!("ok: {} samples, {} features", ds.len(), ds.dim());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
