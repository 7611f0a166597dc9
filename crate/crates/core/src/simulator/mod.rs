//! Event-triggered coordination loop.
//!
//! The clock advances one minute per step. At each tick, in this order:
//! arrivals are recorded, every truck that just reached a non-destination hub
//! re-solves its plan (ascending truck id, each seeing the board updates of
//! those before it), committed departures leave, and equal departures are
//! grouped into platoons.

mod audit;
mod log;

pub use audit::{audit, Rule, Violation};
pub use log::{
    realize_platoons, DecisionRecord, DepartureEvent, Event, LogError, PlatoonRecord,
    SimulationLog, TruckRecord,
};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::clock::{Clock, NoClock};
use crate::fleet::{PredictionBoard, SpecError, Tick, TruckSpec, TruckState};
use crate::network::{build_partner_index, Network, PartnerIndex, Route, TruckId};
use crate::solver::{solve_mpc_with_clock, SolveError};

/// Network plus trucks; the input of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub network: Network,
    pub trucks: Vec<TruckSpec>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioError {
    DuplicateTruck(TruckId),
    /// A route segment is missing from the network or has a different
    /// travel time.
    RouteNotInNetwork(TruckId),
    InvalidTruck(TruckId, SpecError),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::DuplicateTruck(t) => write!(f, "truck id {t} is used more than once"),
            ScenarioError::RouteNotInNetwork(t) => {
                write!(f, "route of truck {t} does not match the network")
            }
            ScenarioError::InvalidTruck(t, e) => write!(f, "truck {t}: {e}"),
        }
    }
}

impl core::error::Error for ScenarioError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimError {
    ScenarioInvalid(ScenarioError),
    Solve {
        truck: TruckId,
        tick: Tick,
        error: SolveError,
    },
    Unfinished(Vec<TruckId>),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::ScenarioInvalid(e) => write!(f, "invalid scenario: {e}"),
            SimError::Solve { truck, tick, error } => {
                write!(f, "truck {truck} at tick {tick}: {error}")
            }
            SimError::Unfinished(ts) => {
                write!(f, "{} trucks did not finish by the last deadline", ts.len())
            }
        }
    }
}

impl core::error::Error for SimError {}

impl From<ScenarioError> for SimError {
    fn from(e: ScenarioError) -> Self {
        SimError::ScenarioInvalid(e)
    }
}

fn route_matches(net: &Network, route: &Route) -> bool {
    route
        .hubs()
        .windows(2)
        .zip(route.segment_minutes())
        .all(|(p, &m)| net.travel_minutes(p[0], p[1]) == Some(m))
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut seen = BTreeSet::new();
        for spec in &self.trucks {
            let id = spec.id();
            if !seen.insert(id) {
                return Err(ScenarioError::DuplicateTruck(id));
            }
            if !route_matches(&self.network, &spec.route) {
                return Err(ScenarioError::RouteNotInNetwork(id));
            }
            spec.validate()
                .map_err(|e| ScenarioError::InvalidTruck(id, e))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Truck {
    spec: TruckSpec,
    state: TruckState,
}

/// Full simulation state.
#[derive(Clone, Debug)]
pub struct World {
    /// Last processed tick; `None` before the first step.
    t_sys: Option<Tick>,
    end: Tick,
    trucks: BTreeMap<TruckId, Truck>,
    board: PredictionBoard,
    index: PartnerIndex,
    log: SimulationLog,
}

impl World {
    pub fn new(scenario: &Scenario) -> Result<World, SimError> {
        scenario.validate()?;
        let routes: Vec<Route> = scenario.trucks.iter().map(|s| s.route.clone()).collect();
        let index = build_partner_index(&routes);
        let mut board = PredictionBoard::new();
        let mut trucks = BTreeMap::new();
        let mut log = SimulationLog {
            seed: scenario.seed,
            ..SimulationLog::default()
        };
        for spec in &scenario.trucks {
            let state = TruckState::at_origin(spec);
            // Initial predictions: no waiting beyond the minimum.
            board
                .update(spec, &state, &spec.minimum_wait_plan(0))
                .expect("validated spec admits the minimum-wait plan");
            log.trucks.insert(
                spec.id(),
                TruckRecord {
                    xi_per_min: spec.xi_per_min,
                    eps_per_min: spec.eps_per_min,
                    start_tick: spec.start_tick,
                    ..TruckRecord::default()
                },
            );
            trucks.insert(
                spec.id(),
                Truck {
                    spec: spec.clone(),
                    state,
                },
            );
        }
        let end = scenario
            .trucks
            .iter()
            .map(|s| s.deadline_tick)
            .max()
            .unwrap_or(Tick::ZERO);
        Ok(World {
            t_sys: None,
            end,
            trucks,
            board,
            index,
            log,
        })
    }

    pub fn t_sys(&self) -> Option<Tick> {
        self.t_sys
    }

    pub fn board(&self) -> &PredictionBoard {
        &self.board
    }

    pub fn partner_index(&self) -> &PartnerIndex {
        &self.index
    }

    pub fn log(&self) -> &SimulationLog {
        &self.log
    }

    pub fn into_log(self) -> SimulationLog {
        self.log
    }

    pub fn state(&self, truck: TruckId) -> Option<&TruckState> {
        self.trucks.get(&truck).map(|t| &t.state)
    }

    fn arrived(&self, t: &Truck) -> bool {
        t.state.at_destination(&t.spec) && self.t_sys.is_some_and(|now| t.state.arrival_tick <= now)
    }

    /// Every truck has reached its destination.
    pub fn all_finished(&self) -> bool {
        self.trucks.values().all(|t| self.arrived(t))
    }

    /// True once every truck has arrived or the last deadline has passed.
    pub fn is_done(&self) -> bool {
        self.all_finished() || self.t_sys.is_some_and(|t| t >= self.end)
    }

    fn next_tick(&self) -> Tick {
        self.t_sys.map_or(Tick::ZERO, |t| t + 1)
    }

    /// Trucks that reached a non-destination hub at the current tick, in
    /// ascending id.
    pub fn decision_set(&self) -> Vec<TruckId> {
        let Some(now) = self.t_sys else {
            return Vec::new();
        };
        self.trucks
            .iter()
            .filter(|(_, t)| {
                t.state.arrival_tick == now
                    && !t.state.at_destination(&t.spec)
                    && t.state.committed_departure.is_none()
            })
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn step(&mut self) -> Result<(), SimError> {
        self.step_with_clock(&NoClock)
    }

    pub fn step_with_clock<C: Clock>(&mut self, clock: &C) -> Result<(), SimError> {
        let now = self.next_tick();
        self.t_sys = Some(now);

        for (&id, truck) in &self.trucks {
            if truck.state.arrival_tick != now || truck.state.committed_departure.is_some() {
                continue;
            }
            let hub = truck.spec.route.hubs()[truck.state.hub_index];
            self.log.events.push(Event::Arrive {
                tick: now,
                truck: id,
                hub,
            });
            if truck.state.at_destination(&truck.spec) {
                self.log.events.push(Event::Finish {
                    tick: now,
                    truck: id,
                    hub,
                });
                if let Some(rec) = self.log.trucks.get_mut(&id) {
                    rec.final_arrival = Some(now);
                }
            }
        }

        for id in self.decision_set() {
            let truck = self
                .trucks
                .get_mut(&id)
                .expect("decision set holds known trucks");
            let result =
                solve_mpc_with_clock(&truck.spec, &truck.state, &self.board, &self.index, clock)
                    .map_err(|error| SimError::Solve {
                        truck: id,
                        tick: now,
                        error,
                    })?;
            self.board
                .update(&truck.spec, &truck.state, &result.plan)
                .expect("solver returns feasible plans");
            let wait = result
                .plan
                .first()
                .expect("non-empty plan before destination");
            truck.state.committed_departure = Some(truck.state.arrival_tick + wait);
            self.log.events.push(Event::Decide {
                tick: now,
                truck: id,
                hub: truck.spec.route.hubs()[truck.state.hub_index],
                solve_duration: result.solve_duration,
                predicted_utility: result.utility,
            });
            if let Some(rec) = self.log.trucks.get_mut(&id) {
                rec.solve_durations.push(result.solve_duration);
            }
            self.log.decisions.push(DecisionRecord {
                tick: now,
                truck: id,
                hub_index: truck.state.hub_index,
                plan: result.plan,
                partner_sets: result.partner_sets,
                predicted_utility: result.utility,
                solve_duration: result.solve_duration,
            });
        }

        let mut departures = Vec::new();
        for (&id, truck) in self.trucks.iter_mut() {
            if truck.state.committed_departure != Some(now) {
                continue;
            }
            let k = truck.state.hub_index;
            let (hub, next_hub) = truck
                .spec
                .route
                .segment(k)
                .expect("departing hub has a segment");
            let travel = truck.spec.route.segment_minutes()[k];
            let wait = now.since(truck.state.arrival_tick);
            self.board.mark_realized(&truck.spec, k);
            self.log.events.push(Event::Depart {
                tick: now,
                truck: id,
                hub,
                next_hub,
            });
            departures.push(DepartureEvent {
                truck: id,
                hub,
                tick: now,
                next_hub,
                travel_minutes: travel,
            });
            truck.state = TruckState {
                hub_index: k + 1,
                arrival_tick: now + travel,
                wait_used: truck.state.wait_used + wait,
                committed_departure: None,
            };
            if let Some(rec) = self.log.trucks.get_mut(&id) {
                rec.waits.push(wait);
                rec.total_wait += wait;
                rec.travel_minutes += travel;
            }
        }

        for platoon in realize_platoons(&departures) {
            let n = platoon.members.len();
            for m in &platoon.members {
                if let Some(rec) = self.log.trucks.get_mut(m) {
                    rec.platoon_minutes += platoon.travel_minutes;
                    rec.platoon_reward += crate::utility::segment_reward(
                        rec.xi_per_min,
                        platoon.travel_minutes,
                        n - 1,
                    );
                }
            }
            self.log.events.push(Event::PlatoonForm {
                tick: now,
                members: platoon.members.clone(),
                from: platoon.from,
                to: platoon.to,
            });
            self.log.platoons.push(platoon);
        }
        Ok(())
    }
}

pub fn run(scenario: &Scenario) -> Result<SimulationLog, SimError> {
    run_with_clock(scenario, &NoClock)
}

/// Runs until every truck has arrived, bounded by the latest deadline.
pub fn run_with_clock<C: Clock>(scenario: &Scenario, clock: &C) -> Result<SimulationLog, SimError> {
    let mut world = World::new(scenario)?;
    while !world.is_done() {
        world.step_with_clock(clock)?;
    }
    if !world.all_finished() {
        let stuck = world
            .trucks
            .iter()
            .filter(|(_, t)| !world.arrived(t))
            .map(|(&id, _)| id)
            .collect();
        return Err(SimError::Unfinished(stuck));
    }
    Ok(world.into_log())
}
