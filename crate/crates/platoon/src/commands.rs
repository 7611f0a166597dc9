use std::fs;
use std::path::Path;

use platoon_core::{run_with_clock, NoClock, SimulationLog};

use crate::clock::WallClock;
use crate::error::{io_err, Error, Result};
use crate::eventlog::format_log;
use crate::files::{load_network, read_json, write_scenario, NetworkFile};
use crate::generate::{generate_trucks, ScenarioConfig};
use crate::report::{self, rows_from_log, write_table, Summary, EVENTS_FILE};
use crate::synth::{synth_network, SynthConfig};

/// How solve durations are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Timing {
    #[default]
    Wall,
    /// Every solve takes zero time, so outputs depend only on the scenario.
    Off,
}

/// Generates a scenario directory from a network file.
pub fn generate_command(network: &Path, config: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    load_network(network)?;
    let file: NetworkFile = read_json(network)?;
    let trucks = generate_trucks(&file, config)?;
    write_scenario(out_dir, &file, &trucks, &config.meta())
}

pub fn synth_command(config: &SynthConfig, out: &Path) -> Result<()> {
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    crate::files::write_json(out, &synth_network(config))
}

pub fn simulate(scenario_dir: &Path, timing: Timing) -> Result<SimulationLog> {
    let scenario = crate::files::load_scenario(scenario_dir)?;
    Ok(match timing {
        Timing::Wall => run_with_clock(&scenario, &WallClock::new())?,
        Timing::Off => run_with_clock(&scenario, &NoClock)?,
    })
}

/// Runs a scenario and writes `events.log`, `trucks.csv` and `summary.json`.
pub fn run_command(scenario_dir: &Path, out_dir: &Path, timing: Timing) -> Result<Summary> {
    let log = simulate(scenario_dir, timing)?;
    write_run(&log, out_dir)
}

pub fn write_run(log: &SimulationLog, out_dir: &Path) -> Result<Summary> {
    let rows = rows_from_log(log).map_err(|e| Error::IncompleteLog {
        path: out_dir.to_path_buf(),
        message: e.to_string(),
    })?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let events = out_dir.join(EVENTS_FILE);
    fs::write(&events, format_log(&log.events)).map_err(io_err(&events))?;
    write_table(out_dir, &rows)
}

pub fn report_command(log_dir: &Path, out_dir: &Path) -> Result<Summary> {
    report::report(log_dir, out_dir)
}
