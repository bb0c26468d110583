use std::path::PathBuf;
use std::process::ExitCode;

use bec_metrology::config::Preset;
use bec_metrology_cli::commands;
use bec_metrology_cli::config::RunConfig;
use bec_metrology_cli::output::Output;
use bec_metrology_cli::CliError;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "becmetro", version, about = "Metrology sweeps for two-mode condensates, written as CSV")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for Monte Carlo runs; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Species preset; overrides the config.
    #[arg(long, global = true, value_enum)]
    preset: Option<PresetArg>,
    /// Also write index.json describing the emitted files.
    #[arg(long, global = true)]
    index: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Sensitivity against N for each protocol, with bounds and purity.
    Bounds,
    /// Scaling exponents against hardness and critical atom numbers.
    Scaling,
    /// Ground states, two-mode evolution and loss budget.
    Condensate,
    /// Counting-noise penalty, analytic against Monte Carlo.
    Counting,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Bounds => "bounds",
            Command::Scaling => "scaling",
            Command::Condensate => "condensate",
            Command::Counting => "counting",
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum PresetArg {
    Rb87,
    Typical,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let preset = cli.preset.map(|p| match p {
        PresetArg::Rb87 => Preset::Rb87,
        PresetArg::Typical => Preset::Typical,
    });
    let cfg = base.resolve(preset, cli.seed)?;
    let mut out = Output::new(&cli.out, cli.command.name(), cfg.seed, &cfg.to_toml()?)?;
    match cli.command {
        Command::Bounds => commands::bounds(&cfg, &mut out)?,
        Command::Scaling => commands::scaling(&cfg, &mut out)?,
        Command::Condensate => commands::condensate(&cfg, &mut out)?,
        Command::Counting => commands::counting(&cfg, &mut out)?,
    }
    if cli.index {
        out.write_index()?;
    }
    for e in out.entries() {
        println!("{}", cli.out.join(&e.file).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("becmetro: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
