use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use floquet_ent::chain::Axis;
use floquet_ent::floquet::{Boundary, Model};
use floquet_ent::runner::{
    evolve_state, format_float, generate_summary, run_experiment, write_state, write_summary,
    ExperimentConfig, Measure, SummaryOptions,
};
use floquet_ent::Result;

#[derive(Parser)]
#[command(name = "floquet-ent", version, about = "Entanglement dynamics of kicked Ising chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-energy histogram of the Floquet operator.
    Spectrum(Common),
    /// Evolve the initial state and write its amplitudes.
    Evolve(Common),
    /// Per-period measurements written as CSV.
    Measure(Common),
    /// Peak certified depth over one projective period for a grid of systems.
    Summary(SummaryArgs),
}

#[derive(Args)]
struct Common {
    /// key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    size: Option<String>,
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    periods: Option<String>,
    /// Comma-separated subset of aee, geom, qfi, spectrum (or `all`).
    #[arg(long)]
    measures: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let flags = [
            ("model", &self.model),
            ("size", &self.size),
            ("boundary", &self.boundary),
            ("initial", &self.initial),
            ("periods", &self.periods),
            ("measures", &self.measures),
            ("seed", &self.seed),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SummaryArgs {
    #[arg(long, value_delimiter = ',', default_value = "u0,ux")]
    models: Vec<Model>,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "open,closed")]
    boundaries: Vec<Boundary>,
    #[arg(long, value_delimiter = ',', default_value = "x+,y+,z+")]
    initials: Vec<Axis>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(common) => {
            let mut config = common.resolve()?;
            config.measures = [Measure::Spectrum].into();
            let output = run_experiment(&config)?;
            let rows = output.spectrum.unwrap_or_default();
            println!("{} distinct quasi-energies", rows.len());
            for (theta, m) in &rows {
                println!("{} {m}", format_float(*theta));
            }
        }
        Command::Evolve(common) => {
            let config = common.resolve()?;
            let state = evolve_state(&config, config.n_max)?;
            let path = config.out_dir.join("state.csv");
            write_state(&path, &state)?;
            println!("{}", path.display());
        }
        Command::Measure(common) => {
            let output = run_experiment(&common.resolve()?)?;
            for f in output.files {
                println!("{}", f.display());
            }
        }
        Command::Summary(args) => {
            let options = SummaryOptions {
                seed: args.seed,
                ..SummaryOptions::default()
            };
            let rows = generate_summary(&args.models, &args.sizes, &args.boundaries, &args.initials, &options)?;
            let path = args.out.join("summary.csv");
            write_summary(&path, &rows)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("floquet-ent: {e}");
            ExitCode::FAILURE
        }
    }
}
