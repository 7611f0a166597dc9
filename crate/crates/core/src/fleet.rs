//! Truck specifications, hub-to-hub dynamics and the shared prediction board.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, RangeInclusive};

use crate::money::Money;
use crate::network::{HubId, Route, TruckId};
use crate::utility::{PlanError, WaitPlan};

/// Simulation time in whole minutes since the epoch (midnight).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tick(pub u32);

impl Tick {
    pub const ZERO: Tick = Tick(0);

    pub fn minutes(self) -> u32 {
        self.0
    }

    /// Minutes from `earlier` to `self`; panics if `earlier` is later.
    pub fn since(self, earlier: Tick) -> u32 {
        self.0
            .checked_sub(earlier.0)
            .expect("tick difference would be negative")
    }
}

impl Add<u32> for Tick {
    type Output = Tick;
    fn add(self, minutes: u32) -> Tick {
        Tick(self.0 + minutes)
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arrival at the next hub: `arrival + wait + travel`.
pub fn advance(arrival: Tick, wait: u32, travel: u32) -> Tick {
    debug_assert!(travel > 0);
    arrival + wait + travel
}

/// Static description of one truck's mission.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruckSpec {
    pub route: Route,
    pub start_tick: Tick,
    pub deadline_tick: Tick,
    pub wait_min: u32,
    pub wait_max_per_hub: u32,
    /// Cap on the total waiting over the whole trip.
    pub wait_budget_total: u32,
    /// Platooning benefit per travel minute for a follower.
    pub xi_per_min: Money,
    /// Cost per minute spent waiting.
    pub eps_per_min: Money,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    WaitBoundsInverted {
        wait_min: u32,
        wait_max_per_hub: u32,
    },
    DeadlineBeforeZeroWaitArrival {
        deadline: Tick,
        zero_wait_arrival: Tick,
    },
    MinimumWaitExceedsBudget {
        required: u32,
        budget: u32,
    },
    MinimumWaitMissesDeadline {
        arrival: Tick,
        deadline: Tick,
    },
    NegativeRate,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::WaitBoundsInverted {
                wait_min,
                wait_max_per_hub,
            } => write!(
                f,
                "wait_min ({wait_min}) must not exceed wait_max_per_hub ({wait_max_per_hub})"
            ),
            SpecError::DeadlineBeforeZeroWaitArrival {
                deadline,
                zero_wait_arrival,
            } => write!(
                f,
                "deadline_tick ({deadline}) is before the zero-wait arrival ({zero_wait_arrival})"
            ),
            SpecError::MinimumWaitExceedsBudget { required, budget } => write!(
                f,
                "minimum waiting over the trip ({required}) exceeds wait_budget_total ({budget})"
            ),
            SpecError::MinimumWaitMissesDeadline { arrival, deadline } => write!(
                f,
                "arrival with minimum waits ({arrival}) is after deadline_tick ({deadline})"
            ),
            SpecError::NegativeRate => f.write_str("xi_per_min and eps_per_min must be >= 0"),
        }
    }
}

impl core::error::Error for SpecError {}

impl TruckSpec {
    pub fn id(&self) -> TruckId {
        self.route.truck()
    }

    pub fn zero_wait_arrival(&self) -> Tick {
        self.start_tick + self.route.total_minutes()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.wait_min > self.wait_max_per_hub {
            return Err(SpecError::WaitBoundsInverted {
                wait_min: self.wait_min,
                wait_max_per_hub: self.wait_max_per_hub,
            });
        }
        if self.xi_per_min < Money::ZERO || self.eps_per_min < Money::ZERO {
            return Err(SpecError::NegativeRate);
        }
        let zero_wait_arrival = self.zero_wait_arrival();
        if self.deadline_tick < zero_wait_arrival {
            return Err(SpecError::DeadlineBeforeZeroWaitArrival {
                deadline: self.deadline_tick,
                zero_wait_arrival,
            });
        }
        let required = self.wait_min * self.route.segment_count() as u32;
        if required > self.wait_budget_total {
            return Err(SpecError::MinimumWaitExceedsBudget {
                required,
                budget: self.wait_budget_total,
            });
        }
        if zero_wait_arrival + required > self.deadline_tick {
            return Err(SpecError::MinimumWaitMissesDeadline {
                arrival: zero_wait_arrival + required,
                deadline: self.deadline_tick,
            });
        }
        Ok(())
    }

    /// The plan that waits the minimum at every remaining hub from `k`.
    pub fn minimum_wait_plan(&self, k: usize) -> WaitPlan {
        WaitPlan::new(alloc::vec![self.wait_min; self.route.segment_count() - k])
    }
}

/// Where a truck currently is along its route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruckState {
    pub hub_index: usize,
    pub arrival_tick: Tick,
    pub wait_used: u32,
    pub committed_departure: Option<Tick>,
}

impl TruckState {
    pub fn at_origin(spec: &TruckSpec) -> Self {
        TruckState {
            hub_index: 0,
            arrival_tick: spec.start_tick,
            wait_used: 0,
            committed_departure: None,
        }
    }

    pub fn at_destination(&self, spec: &TruckSpec) -> bool {
        self.hub_index + 1 >= spec.route.len()
    }
}

/// A predicted (or realized) departure from one hub.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlannedDeparture {
    pub hub: HubId,
    pub departure: Tick,
    pub next_hub: HubId,
}

/// Departures along the whole route when the truck never waits.
pub fn zero_wait_trajectory(spec: &TruckSpec) -> Vec<PlannedDeparture> {
    let hubs = spec.route.hubs();
    let mut t = spec.start_tick;
    spec.route
        .segment_minutes()
        .iter()
        .enumerate()
        .map(|(k, &m)| {
            let dep = PlannedDeparture {
                hub: hubs[k],
                departure: t,
                next_hub: hubs[k + 1],
            };
            t = t + m;
            dep
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoardEntry {
    pub departure: Tick,
    pub next_hub: HubId,
    pub realized: bool,
}

/// Key of a board entry: truck, physical hub, and how many earlier visits of
/// that hub the route makes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoardKey {
    pub truck: TruckId,
    pub hub: HubId,
    pub ordinal: u32,
}

/// Every truck's latest predicted departure times, shared between trucks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PredictionBoard {
    entries: BTreeMap<BoardKey, BoardEntry>,
}

impl PredictionBoard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &BoardKey) -> Option<&BoardEntry> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BoardKey, &BoardEntry)> {
        self.entries.iter()
    }

    /// Raw insert; used for seeding boards by hand in tests and tools.
    pub fn insert(&mut self, key: BoardKey, entry: BoardEntry) {
        self.entries.insert(key, entry);
    }

    /// Entries of one truck ordered by key.
    pub fn entries_of(&self, truck: TruckId) -> impl Iterator<Item = (&BoardKey, &BoardEntry)> {
        let lo = BoardKey {
            truck,
            hub: HubId(0),
            ordinal: 0,
        };
        let hi = BoardKey {
            truck,
            hub: HubId(u32::MAX),
            ordinal: u32::MAX,
        };
        self.entries.range(lo..=hi)
    }

    /// Replaces the truck's entries for hubs `state.hub_index ..= N-2` with the
    /// departures implied by `plan`. Earlier entries are left untouched.
    pub fn update(
        &mut self,
        spec: &TruckSpec,
        state: &TruckState,
        plan: &WaitPlan,
    ) -> Result<(), PlanError> {
        plan.check_feasible(spec, state)?;
        let k = state.hub_index;
        let hubs = spec.route.hubs();
        let minutes = spec.route.segment_minutes();
        let mut arrival = state.arrival_tick;
        for (h, &wait) in plan.waits().iter().enumerate() {
            let idx = k + h;
            let departure = arrival + wait;
            self.entries.insert(
                BoardKey {
                    truck: spec.id(),
                    hub: hubs[idx],
                    ordinal: spec.route.ordinal(idx),
                },
                BoardEntry {
                    departure,
                    next_hub: hubs[idx + 1],
                    realized: false,
                },
            );
            arrival = departure + minutes[idx];
        }
        Ok(())
    }

    /// Flags the departure of `spec`'s truck from hub index `k` as realized.
    pub fn mark_realized(&mut self, spec: &TruckSpec, k: usize) {
        let key = BoardKey {
            truck: spec.id(),
            hub: spec.route.hubs()[k],
            ordinal: spec.route.ordinal(k),
        };
        if let Some(e) = self.entries.get_mut(&key) {
            e.realized = true;
        }
    }

    /// Departure of `truck` from `hub` toward `toward` whose tick lies in
    /// `window`; the lowest ordinal wins if several do.
    pub fn departure_of(
        &self,
        truck: TruckId,
        hub: HubId,
        toward: HubId,
        window: RangeInclusive<Tick>,
    ) -> Option<Tick> {
        let lo = BoardKey {
            truck,
            hub,
            ordinal: 0,
        };
        let hi = BoardKey {
            truck,
            hub,
            ordinal: u32::MAX,
        };
        self.entries
            .range(lo..=hi)
            .map(|(_, e)| e)
            .find(|e| e.next_hub == toward && window.contains(&e.departure))
            .map(|e| e.departure)
    }
}

/// Free-function form of [`PredictionBoard::update`].
pub fn board_update(
    board: &mut PredictionBoard,
    spec: &TruckSpec,
    state: &TruckState,
    plan: &WaitPlan,
) -> Result<(), PlanError> {
    board.update(spec, state, plan)
}

pub const ALL_TICKS: RangeInclusive<Tick> = Tick(0)..=Tick(u32::MAX);
