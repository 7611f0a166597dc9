//! Post-hoc checks of a simulation log against its scenario.
//!
//! Everything here is reconstructed from the event stream and the decision
//! records alone, so it can catch bookkeeping errors in the loop itself.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::fleet::{Tick, TruckSpec};
use crate::network::{is_common_segment, HubId, TruckId};

use super::log::{Event, SimulationLog};
use super::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    PerHubWaitBounds,
    TripWaitBudget,
    Deadline,
    OneSolvePerHubArrival,
    PredictedSubsetOfPotential,
    PlatoonMembership,
    ArrivalRecurrence,
    Conservation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub truck: Option<TruckId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.truck {
            Some(t) => write!(f, "{:?} (truck {}): {}", self.rule, t, self.detail),
            None => write!(f, "{:?}: {}", self.rule, self.detail),
        }
    }
}

#[derive(Default)]
struct Timeline {
    arrivals: Vec<(Tick, HubId)>,
    departures: Vec<(Tick, HubId, HubId)>,
    decisions: Vec<(Tick, HubId)>,
    finish: Option<Tick>,
}

/// Returns every invariant violation found; empty means the log is clean.
pub fn audit(scenario: &Scenario, log: &SimulationLog) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |rule, truck, detail: String| {
        out.push(Violation {
            rule,
            truck,
            detail,
        })
    };

    let specs: BTreeMap<TruckId, &TruckSpec> =
        scenario.trucks.iter().map(|s| (s.id(), s)).collect();
    let mut lines: BTreeMap<TruckId, Timeline> =
        specs.keys().map(|&id| (id, Timeline::default())).collect();
    let mut last_tick = Tick::ZERO;
    for e in &log.events {
        if e.tick() < last_tick {
            push(
                Rule::ArrivalRecurrence,
                None,
                format!("events out of order at tick {}", e.tick()),
            );
        }
        last_tick = e.tick();
        let truck = match e {
            Event::Arrive { truck, .. }
            | Event::Decide { truck, .. }
            | Event::Depart { truck, .. }
            | Event::Finish { truck, .. } => Some(*truck),
            Event::PlatoonForm { .. } => None,
        };
        let Some(t) = truck.and_then(|t| lines.get_mut(&t)) else {
            if let Some(t) = truck {
                push(
                    Rule::Conservation,
                    Some(t),
                    String::from("event for a truck not in the scenario"),
                );
            }
            continue;
        };
        match *e {
            Event::Arrive { tick, hub, .. } => t.arrivals.push((tick, hub)),
            Event::Decide { tick, hub, .. } => t.decisions.push((tick, hub)),
            Event::Depart {
                tick,
                hub,
                next_hub,
                ..
            } => t.departures.push((tick, hub, next_hub)),
            Event::Finish { tick, .. } => t.finish = Some(tick),
            Event::PlatoonForm { .. } => {}
        }
    }

    for (&id, spec) in &specs {
        let tl = &lines[&id];
        let hubs = spec.route.hubs();
        let minutes = spec.route.segment_minutes();
        let n = hubs.len();

        if tl.arrivals.len() != n || tl.departures.len() != n - 1 {
            push(
                Rule::Conservation,
                Some(id),
                format!(
                    "{} arrivals and {} departures for a route of {} hubs",
                    tl.arrivals.len(),
                    tl.departures.len(),
                    n
                ),
            );
            continue;
        }
        if tl.arrivals[0].0 != spec.start_tick {
            push(
                Rule::ArrivalRecurrence,
                Some(id),
                format!("origin arrival at {}", tl.arrivals[0].0),
            );
        }

        let mut total_wait = 0u32;
        for k in 0..n - 1 {
            let (arr, arr_hub) = tl.arrivals[k];
            let (dep, dep_hub, next) = tl.departures[k];
            if arr_hub != hubs[k] || dep_hub != hubs[k] || next != hubs[k + 1] {
                push(
                    Rule::ArrivalRecurrence,
                    Some(id),
                    format!("hub mismatch at index {k}"),
                );
                continue;
            }
            if dep < arr {
                push(
                    Rule::PerHubWaitBounds,
                    Some(id),
                    format!("departs hub index {k} before arriving"),
                );
                continue;
            }
            let wait = dep.since(arr);
            if wait < spec.wait_min || wait > spec.wait_max_per_hub {
                push(
                    Rule::PerHubWaitBounds,
                    Some(id),
                    format!(
                        "wait {wait} at hub index {k} outside [{}, {}]",
                        spec.wait_min, spec.wait_max_per_hub
                    ),
                );
            }
            total_wait += wait;
            let (next_arr, _) = tl.arrivals[k + 1];
            if next_arr != arr + wait + minutes[k] {
                push(
                    Rule::ArrivalRecurrence,
                    Some(id),
                    format!(
                        "arrival {next_arr} at index {} != {arr} + {wait} + {}",
                        k + 1,
                        minutes[k]
                    ),
                );
            }
        }
        if total_wait > spec.wait_budget_total {
            push(
                Rule::TripWaitBudget,
                Some(id),
                format!(
                    "total wait {total_wait} > budget {}",
                    spec.wait_budget_total
                ),
            );
        }
        let final_arrival = tl.arrivals[n - 1].0;
        if final_arrival > spec.deadline_tick {
            push(
                Rule::Deadline,
                Some(id),
                format!(
                    "arrives {final_arrival} after deadline {}",
                    spec.deadline_tick
                ),
            );
        }
        if tl.finish != Some(final_arrival) {
            push(
                Rule::Conservation,
                Some(id),
                String::from("missing or misplaced FINISH"),
            );
        }

        // One solve at each non-destination arrival, at that tick and hub.
        let expected: Vec<(Tick, HubId)> = tl.arrivals[..n - 1].to_vec();
        if tl.decisions != expected {
            push(
                Rule::OneSolvePerHubArrival,
                Some(id),
                format!("{} solves for {} decision hubs", tl.decisions.len(), n - 1),
            );
        }

        if let Some(rec) = log.trucks.get(&id) {
            let travel = spec.route.total_minutes();
            if rec.travel_minutes != travel
                || rec.total_wait != total_wait
                || final_arrival.since(spec.start_tick) != travel + total_wait
                || rec.platoon_minutes > rec.travel_minutes
            {
                push(
                    Rule::Conservation,
                    Some(id),
                    String::from("per-truck totals disagree with events"),
                );
            }
        } else {
            push(
                Rule::Conservation,
                Some(id),
                String::from("no per-truck record"),
            );
        }
    }

    for d in &log.decisions {
        let Some(spec) = specs.get(&d.truck) else {
            continue;
        };
        for (h, set) in d.partner_sets.sets().iter().enumerate() {
            for j in set {
                let ok = specs.get(j).is_some_and(|sj| {
                    *j != d.truck
                        && is_common_segment(&spec.route, d.hub_index + h, &sj.route) == Ok(true)
                });
                if !ok {
                    push(
                        Rule::PredictedSubsetOfPotential,
                        Some(d.truck),
                        format!(
                            "truck {j} predicted at offset {h} from hub index {} shares no segment",
                            d.hub_index
                        ),
                    );
                }
            }
        }
    }

    // Platoons: every record equals the set of trucks leaving together, and
    // every group of two or more leaving together is recorded.
    let mut together: BTreeMap<(Tick, HubId, HubId), Vec<TruckId>> = BTreeMap::new();
    for (&id, tl) in &lines {
        for &(tick, from, to) in &tl.departures {
            together.entry((tick, from, to)).or_default().push(id);
        }
    }
    let mut recorded: BTreeMap<(Tick, HubId, HubId), Vec<TruckId>> = BTreeMap::new();
    for p in &log.platoons {
        if recorded
            .insert((p.departure_tick, p.from, p.to), p.members.clone())
            .is_some()
        {
            push(
                Rule::PlatoonMembership,
                None,
                format!("duplicate platoon record at {}", p.departure_tick),
            );
        }
    }
    for (key, members) in &together {
        let want = (members.len() >= 2).then_some(members);
        if want != recorded.get(key) {
            push(
                Rule::PlatoonMembership,
                None,
                format!(
                    "departures {}->{} at {} not recorded as a platoon",
                    key.1, key.2, key.0
                ),
            );
        }
    }
    for (key, members) in &recorded {
        if together.get(key) != Some(members) {
            push(
                Rule::PlatoonMembership,
                None,
                format!(
                    "platoon {}->{} at {} does not match departures",
                    key.1, key.2, key.0
                ),
            );
        }
    }
    out
}
