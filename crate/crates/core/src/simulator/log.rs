use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::fleet::Tick;
use crate::money::Money;
use crate::network::{HubId, TruckId};
use crate::utility::{segment_reward, PartnerSetPrediction, WaitPlan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Arrive {
        tick: Tick,
        truck: TruckId,
        hub: HubId,
    },
    Decide {
        tick: Tick,
        truck: TruckId,
        hub: HubId,
        solve_duration: Duration,
        predicted_utility: Money,
    },
    Depart {
        tick: Tick,
        truck: TruckId,
        hub: HubId,
        next_hub: HubId,
    },
    PlatoonForm {
        tick: Tick,
        members: Vec<TruckId>,
        from: HubId,
        to: HubId,
    },
    Finish {
        tick: Tick,
        truck: TruckId,
        hub: HubId,
    },
}

impl Event {
    pub fn tick(&self) -> Tick {
        match self {
            Event::Arrive { tick, .. }
            | Event::Decide { tick, .. }
            | Event::Depart { tick, .. }
            | Event::PlatoonForm { tick, .. }
            | Event::Finish { tick, .. } => *tick,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Event::Arrive { .. } => "ARRIVE",
            Event::Decide { .. } => "DECIDE",
            Event::Depart { .. } => "DEPART",
            Event::PlatoonForm { .. } => "PLATOON_FORM",
            Event::Finish { .. } => "FINISH",
        }
    }
}

/// One truck leaving a hub.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepartureEvent {
    pub truck: TruckId,
    pub hub: HubId,
    pub tick: Tick,
    pub next_hub: HubId,
    pub travel_minutes: u32,
}

/// Trucks that left the same hub toward the same next hub at the same tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlatoonRecord {
    pub from: HubId,
    pub to: HubId,
    pub departure_tick: Tick,
    /// Ascending, at least two.
    pub members: Vec<TruckId>,
    pub travel_minutes: u32,
}

/// Groups departures by (hub, next hub, tick); groups of two or more become
/// platoons. Output is ordered by tick, then hub pair.
pub fn realize_platoons(departures: &[DepartureEvent]) -> Vec<PlatoonRecord> {
    let mut groups: BTreeMap<(Tick, HubId, HubId), (Vec<TruckId>, u32)> = BTreeMap::new();
    for d in departures {
        let g = groups
            .entry((d.tick, d.hub, d.next_hub))
            .or_insert_with(|| (Vec::new(), d.travel_minutes));
        g.0.push(d.truck);
    }
    groups
        .into_iter()
        .filter(|(_, (members, _))| members.len() >= 2)
        .map(|((tick, from, to), (mut members, travel_minutes))| {
            members.sort_unstable();
            members.dedup();
            PlatoonRecord {
                from,
                to,
                departure_tick: tick,
                members,
                travel_minutes,
            }
        })
        .collect()
}

/// A solve performed when a truck reached a hub.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionRecord {
    pub tick: Tick,
    pub truck: TruckId,
    pub hub_index: usize,
    pub plan: WaitPlan,
    pub partner_sets: PartnerSetPrediction,
    pub predicted_utility: Money,
    pub solve_duration: Duration,
}

/// Realized per-truck accounting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruckRecord {
    pub xi_per_min: Money,
    pub eps_per_min: Money,
    pub start_tick: Tick,
    pub final_arrival: Option<Tick>,
    /// Realized wait at each departed hub.
    pub waits: Vec<u32>,
    pub total_wait: u32,
    pub travel_minutes: u32,
    pub platoon_minutes: u32,
    /// Sum of the per-segment platoon shares, before waiting cost.
    pub platoon_reward: Money,
    pub solve_durations: Vec<Duration>,
}

impl TruckRecord {
    pub fn finished(&self) -> bool {
        self.final_arrival.is_some()
    }

    pub fn mean_solve_duration(&self) -> Duration {
        if self.solve_durations.is_empty() {
            return Duration::ZERO;
        }
        self.solve_durations.iter().sum::<Duration>() / self.solve_durations.len() as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogError {
    UnknownTruck(TruckId),
    TruckNotFinished(TruckId),
    ZeroTravelTime(TruckId),
}

impl fmt::Display for LogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogError::UnknownTruck(t) => write!(f, "truck {t} is not in the log"),
            LogError::TruckNotFinished(t) => write!(f, "truck {t} has not reached its destination"),
            LogError::ZeroTravelTime(t) => write!(f, "truck {t} has zero travel time"),
        }
    }
}

impl core::error::Error for LogError {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimulationLog {
    pub seed: u64,
    pub events: Vec<Event>,
    pub decisions: Vec<DecisionRecord>,
    pub platoons: Vec<PlatoonRecord>,
    pub trucks: BTreeMap<TruckId, TruckRecord>,
}

impl SimulationLog {
    fn finished_record(&self, truck: TruckId) -> Result<&TruckRecord, LogError> {
        let rec = self
            .trucks
            .get(&truck)
            .ok_or(LogError::UnknownTruck(truck))?;
        if !rec.finished() {
            return Err(LogError::TruckNotFinished(truck));
        }
        Ok(rec)
    }

    /// Platoon share on every segment driven in a platoon of `n` trucks,
    /// `xi * c * (n - 1) / n`, minus the realized waiting cost.
    pub fn realized_utility(&self, truck: TruckId) -> Result<Money, LogError> {
        let rec = self.finished_record(truck)?;
        let reward: Money = self
            .platoons
            .iter()
            .filter(|p| p.members.contains(&truck))
            .map(|p| segment_reward(rec.xi_per_min, p.travel_minutes, p.members.len() - 1))
            .sum();
        Ok(reward - rec.eps_per_min.times(rec.total_wait))
    }

    /// Fraction of travel time (waiting excluded) spent in a platoon.
    pub fn platooning_rate(&self, truck: TruckId) -> Result<f64, LogError> {
        let rec = self.finished_record(truck)?;
        if rec.travel_minutes == 0 {
            return Err(LogError::ZeroTravelTime(truck));
        }
        Ok(f64::from(rec.platoon_minutes) / f64::from(rec.travel_minutes))
    }

    pub fn departures(&self) -> impl Iterator<Item = (Tick, TruckId, HubId, HubId)> + '_ {
        self.events.iter().filter_map(|e| match *e {
            Event::Depart {
                tick,
                truck,
                hub,
                next_hub,
            } => Some((tick, truck, hub, next_hub)),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dep(truck: u32, hub: u32, tick: u32, next: u32) -> DepartureEvent {
        DepartureEvent {
            truck: TruckId(truck),
            hub: HubId(hub),
            tick: Tick(tick),
            next_hub: HubId(next),
            travel_minutes: 60,
        }
    }

    #[test]
    fn grouping() {
        let r = realize_platoons(&[dep(1, 1, 10, 2), dep(2, 1, 10, 2)]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].members, vec![TruckId(1), TruckId(2)]);
        assert!(realize_platoons(&[dep(1, 1, 10, 2), dep(2, 1, 11, 2)]).is_empty());
        assert!(realize_platoons(&[dep(1, 1, 10, 2), dep(2, 1, 10, 3)]).is_empty());
    }

    fn log_with(
        total_wait: u32,
        platoons: Vec<PlatoonRecord>,
        travel: u32,
        platoon_minutes: u32,
    ) -> SimulationLog {
        let mut log = SimulationLog::default();
        log.trucks.insert(
            TruckId(1),
            TruckRecord {
                xi_per_min: Money::from_hundredths(96),
                eps_per_min: Money::from_hundredths(75),
                final_arrival: Some(Tick(500)),
                total_wait,
                travel_minutes: travel,
                platoon_minutes,
                ..TruckRecord::default()
            },
        );
        log.platoons = platoons;
        log
    }

    fn platoon(n: u32) -> PlatoonRecord {
        PlatoonRecord {
            from: HubId(1),
            to: HubId(2),
            departure_tick: Tick(0),
            members: (1..=n).map(TruckId).collect(),
            travel_minutes: 60,
        }
    }

    #[test]
    fn realized_utility_examples() {
        let log = log_with(0, vec![], 120, 0);
        assert_eq!(log.realized_utility(TruckId(1)), Ok(Money::ZERO));
        let log = log_with(20, vec![platoon(2), platoon(2)], 120, 120);
        assert_eq!(
            log.realized_utility(TruckId(1)),
            Ok(Money::from_hundredths(4260))
        );
        let log = log_with(0, vec![platoon(3)], 60, 60);
        assert_eq!(
            log.realized_utility(TruckId(1)),
            Ok(Money::from_hundredths(3840))
        );
        assert_eq!(
            log.realized_utility(TruckId(7)),
            Err(LogError::UnknownTruck(TruckId(7)))
        );
    }

    #[test]
    fn platooning_rate_examples() {
        assert_eq!(
            log_with(0, vec![], 120, 60).platooning_rate(TruckId(1)),
            Ok(0.5)
        );
        assert_eq!(
            log_with(0, vec![], 120, 0).platooning_rate(TruckId(1)),
            Ok(0.0)
        );
        assert_eq!(
            log_with(0, vec![], 120, 120).platooning_rate(TruckId(1)),
            Ok(1.0)
        );
        let mut log = log_with(0, vec![], 120, 0);
        log.trucks.get_mut(&TruckId(1)).unwrap().final_arrival = None;
        assert_eq!(
            log.platooning_rate(TruckId(1)),
            Err(LogError::TruckNotFinished(TruckId(1)))
        );
        let log = log_with(0, vec![], 0, 0);
        assert_eq!(
            log.platooning_rate(TruckId(1)),
            Err(LogError::ZeroTravelTime(TruckId(1)))
        );
    }
}
