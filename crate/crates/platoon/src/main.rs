use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use platoon::generate::ScenarioConfig;
use platoon::synth::SynthConfig;
use platoon::{generate_command, report_command, run_command, synth_command, Timing};

#[derive(Parser)]
#[command(
    name = "platoon",
    version,
    about = "Hub-based truck platoon coordination simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimingArg {
    /// Measure each solve with the wall clock.
    Wall,
    /// Record zero solve time, making every output reproducible byte for byte.
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random truck fleet over a network.
    Generate {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        trucks: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 480)]
        window_start: u32,
        #[arg(long, default_value_t = 540)]
        window_end: u32,
        #[arg(long, default_value_t = 30)]
        wait_max_per_hub: u32,
        #[arg(long, default_value_t = 60)]
        wait_budget_total: u32,
        #[arg(long, default_value_t = 0.96)]
        xi_per_min: f64,
        #[arg(long, default_value_t = 0.75)]
        eps_per_min: f64,
    },
    /// Simulate a scenario directory.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "wall")]
        timing: TimingArg,
    },
    /// Build the table, summary and plot series from a run directory.
    Report {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic road network.
    SynthNetwork {
        #[arg(long, default_value_t = 84)]
        hubs: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Links from each hub to this many nearest neighbours.
        #[arg(long, default_value_t = SynthConfig::default().nearest)]
        nearest: usize,
        /// Share of hubs placed in the southern region.
        #[arg(long, default_value_t = SynthConfig::default().south_share)]
        south_share: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: Cli) -> platoon::Result<()> {
    match cli.command {
        Command::Generate {
            network,
            trucks,
            seed,
            out,
            window_start,
            window_end,
            wait_max_per_hub,
            wait_budget_total,
            xi_per_min,
            eps_per_min,
        } => {
            let config = ScenarioConfig {
                trucks,
                window_start,
                window_end,
                wait_max_per_hub,
                wait_budget_total,
                xi_per_min,
                eps_per_min,
                seed,
            };
            generate_command(&network, &config, &out)
        }
        Command::Run {
            scenario,
            out,
            timing,
        } => {
            let timing = match timing {
                TimingArg::Wall => Timing::Wall,
                TimingArg::Off => Timing::Off,
            };
            run_command(&scenario, &out, timing).map(drop)
        }
        Command::Report { log, out } => report_command(&log, &out).map(drop),
        Command::SynthNetwork {
            hubs,
            seed,
            nearest,
            south_share,
            out,
        } => {
            let config = SynthConfig {
                hubs,
                seed,
                nearest,
                south_share,
            };
            synth_command(&config, &out)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
