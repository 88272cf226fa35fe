use clap::{Args, Parser, Subcommand};
use simlab::config::SetSource;
use simlab::experiments;
use simlab::{sum_pattern_table, validation_text, ExperimentConfig, Kind, Result, SimError};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// UDAS grant-free multiple-access laboratory.
///
/// Exit status: 0 on success, 1 when `validate` finds an invalid set or on
/// I/O failure, 2 on configuration errors, 3 when a numerical routine misses
/// its tolerance.
#[derive(Parser)]
#[command(name = "simlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a structured set in the `T L mode` text form.
    Construct(SetArgs),
    /// Check the unique-decodability conditions of a set.
    Validate {
        #[command(flatten)]
        set: SetArgs,
        /// Allowed relative deviation of row powers.
        #[arg(long)]
        power_tol: Option<f64>,
        /// Largest allowed peak-to-average amplitude ratio.
        #[arg(long)]
        papr_bound: Option<f64>,
    },
    /// List sum-pattern powers for every (or one) active subset.
    Sumpatterns {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long)]
        mu: Option<usize>,
    },
    /// Simulated and analytic active-user-count error rate.
    Auer(RunArgs),
    /// Coded bit and frame error rates of the full receiver.
    Ber(RunArgs),
    /// Analytic active-user-count error rate per user count.
    TheoryAuer(RunArgs),
    /// Minimum Eb/N0 for a list of code rates.
    Shannon(RunArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Experiment file; its set keys are used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cyclic, block_cyclic or qc.
    #[arg(long)]
    mode: Option<String>,
    /// Generator tokens, e.g. "1 1i 2 2i"; `|` separates blocks, `;` block rows.
    #[arg(long)]
    generator: Option<String>,
    /// Set in the text form.
    #[arg(long, conflicts_with = "generator")]
    set_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the file's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the file's output path; stdout when neither is given.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Run with N0 = 0.
    #[arg(long)]
    no_noise: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("simlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn set_config(args: &SetArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if args.generator.is_some() || args.mode.is_some() {
        let mut text = String::new();
        if let Some(m) = &args.mode {
            text.push_str(&format!("mode = {m}\n"));
        }
        if let Some(g) = &args.generator {
            text.push_str(&format!("generator = {g}\n"));
        }
        cfg.set = ExperimentConfig::parse(&text)?.set;
    }
    if let Some(path) = &args.set_file {
        cfg.set = SetSource::File(path.clone());
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct(args) => {
            let set = set_config(&args)?.build_set()?;
            emit(args.out.as_ref(), &set.to_text())?;
        }
        Command::Validate {
            set,
            power_tol,
            papr_bound,
        } => {
            let udas = set_config(&set)?.build_set()?;
            let (text, ok) = validation_text(&udas, power_tol, papr_bound)?;
            emit(set.out.as_ref(), &text)?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Sumpatterns { set, tau, mu } => {
            let udas = set_config(&set)?.build_set()?;
            emit(set.out.as_ref(), &sum_pattern_table(&udas, tau, mu)?.to_csv())?;
        }
        Command::Auer(args) => experiment(args, Kind::Auer)?,
        Command::Ber(args) => experiment(args, Kind::Ber)?,
        Command::TheoryAuer(args) => experiment(args, Kind::TheoryAuer)?,
        Command::Shannon(args) => experiment(args, Kind::ShannonTable)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: RunArgs, kind: Kind) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    match cfg.kind {
        None => cfg.kind = Some(kind),
        Some(k) if k != kind => {
            return Err(SimError::at(cfg.line("kind"), format!("file is for {k:?}, not {kind:?}")));
        }
        _ => {}
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.no_noise |= args.no_noise;
    let out = args.out.or_else(|| cfg.out.clone());
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| SimError::Invalid(format!("threads: {e}")))?;
    }
    let start = Instant::now();
    let table = experiments::run(&cfg)?;
    emit(out.as_ref(), &table.to_csv())?;
    eprintln!("simlab: {} rows in {:.2?}", table.rows.len(), start.elapsed());
    Ok(())
}
