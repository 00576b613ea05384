use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dsk_cli::{evidence_csv, execute, grid_csv, report, RunError, Scenario};

#[derive(Parser)]
#[command(name = "dsk", version, about = "Run disc, shift and contour scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its report
    Run(Opts),
    /// Export the scenario's grid as CSV
    Grid(Opts),
    /// Check a scenario against the schema without running it
    Validate { file: PathBuf },
}

#[derive(Args)]
struct Opts {
    file: PathBuf,
    /// Overrides the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the report and CSV files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the scenario tolerance
    #[arg(long)]
    tol: Option<f64>,
}

fn load(path: &Path) -> Result<Scenario, RunError> {
    let text = fs::read_to_string(path).map_err(|source| RunError::Io { path: path.display().to_string(), source })?;
    Scenario::from_json(&text)
}

fn write(path: &Path, text: &str) -> Result<(), RunError> {
    fs::write(path, text).map_err(|source| RunError::Io { path: path.display().to_string(), source })
}

/// `--out DIR` wins over the scenario's own paths; with neither, text goes to stdout.
fn destination(out: &Option<PathBuf>, own: &Option<PathBuf>, file: String) -> Option<PathBuf> {
    match out {
        Some(dir) => Some(dir.join(file)),
        None => own.clone(),
    }
}

fn emit(dest: Option<PathBuf>, text: &str) -> Result<(), RunError> {
    match dest {
        Some(p) => write(&p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn prepare(opts: &Opts) -> Result<Scenario, RunError> {
    let mut s = load(&opts.file)?;
    if let Some(seed) = opts.seed {
        s.seed = seed;
    }
    if let Some(tol) = opts.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(RunError::Usage(format!("--tol must be positive, got {tol}")));
        }
        s.tol = Some(tol);
    }
    if let Some(dir) = &opts.out {
        fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.display().to_string(), source })?;
    }
    Ok(s)
}

fn run(opts: &Opts) -> Result<u8, RunError> {
    let s = prepare(opts)?;
    let outcome = execute(&s)?;
    emit(destination(&opts.out, &s.outputs.report, format!("{}.json", s.name)), &report(&s, &outcome))?;
    if !outcome.evidence.is_empty() {
        if let Some(p) = destination(&opts.out, &s.outputs.csv, format!("{}_evidence.csv", s.name)) {
            write(&p, &evidence_csv(&outcome.evidence))?;
        }
    }
    if let Some(m) = &outcome.message {
        eprintln!("{}: {m}", s.name);
    }
    Ok(outcome.status.exit_code())
}

fn grid(opts: &Opts) -> Result<u8, RunError> {
    let s = prepare(opts)?;
    let csv = grid_csv(&s)?;
    emit(destination(&opts.out, &s.outputs.grid, format!("{}_grid.csv", s.name)), &csv)?;
    Ok(0)
}

fn init_threads() {
    if let Some(n) = std::env::var("DSK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match &cli.command {
        Command::Run(opts) => run(opts),
        Command::Grid(opts) => grid(opts),
        Command::Validate { file } => load(file).map(|s| {
            println!("{}: valid {:?} scenario", s.name, s.task.kind());
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
