//! File formats, scenario generation, reporting and the command-line
//! front end for the platoon coordination simulator.

pub mod clock;
pub mod commands;
pub mod error;
pub mod eventlog;
pub mod files;
pub mod generate;
pub mod report;
pub mod synth;

pub use clock::WallClock;
pub use commands::{
    generate_command, report_command, run_command, simulate, synth_command, write_run, Timing,
};
pub use error::{Error, Result};
