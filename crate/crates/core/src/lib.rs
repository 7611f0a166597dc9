//! Hub-based truck platoon coordination.
//!
//! Each truck follows a fixed route through a hub network and decides, every
//! time it reaches a hub, how long to wait there and at the hubs ahead. The
//! decision maximizes its own predicted platooning reward minus waiting cost,
//! given the departure times the other trucks have published on a shared
//! board. The [`simulator`] runs this for a whole fleet and records which
//! platoons actually form.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and wall-clock timing live in the `platoon` crate.

#![no_std]

extern crate alloc;

pub mod clock;
pub mod fleet;
pub mod money;
pub mod network;
pub mod simulator;
pub mod solver;
pub mod utility;

pub use clock::{Clock, NoClock};
pub use fleet::{
    advance, board_update, zero_wait_trajectory, PredictionBoard, Tick, TruckSpec, TruckState,
};
pub use money::Money;
pub use network::{
    build_network, build_partner_index, is_common_segment, Hub, HubId, Network, PartnerIndex,
    Route, Segment, TruckId,
};
pub use simulator::{run, run_with_clock, Scenario, SimulationLog, World};
pub use solver::{
    brute_force_oracle, candidate_window, solve_mpc, solve_mpc_with_clock, SolveResult,
};
pub use utility::{utility, WaitPlan};
