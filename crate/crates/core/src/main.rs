use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use adams_lab::cli::{load_config, output_dir, run, thread_count, CliError, Command};

#[derive(Parser, Debug)]
#[command(name = "adams-lab", version, about = "Weighted Adams inequality experiments and mountain-pass solves")]
struct Args {
    /// constants, norms, adams-sweep, sharpness, solve, hypotheses or admissibility
    command: String,
    /// key=value experiment file
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out=` in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the summary on stdout
    #[arg(long)]
    quiet: bool,
}

fn main_inner(args: Args) -> Result<(), CliError> {
    let command: Command = args.command.parse().map_err(CliError::validation)?;
    let threads = thread_count(std::env::var("ADAMS_LAB_THREADS").ok().as_deref())?;
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::validation(format!("thread pool: {e}")))?;
    }
    let cfg = load_config(&args.config)?;
    let dir = output_dir(&cfg, args.out.as_deref());
    let out = run(command, &cfg, &dir)?;
    if !args.quiet {
        for t in &out.tables {
            println!("{}: {} rows -> {}", t.name, t.rows.len(), dir.join(format!("{}.csv", t.name)).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let text: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", CliError::validation(text.join(" ").trim_start_matches("error: ")));
            return ExitCode::from(1);
        }
    };
    match main_inner(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
