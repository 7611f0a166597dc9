//! Predicted partner sets, platooning reward, waiting loss and utility of a
//! candidate wait plan.

use alloc::vec::Vec;
use core::fmt;

use crate::fleet::{PredictionBoard, Tick, TruckSpec, TruckState};
use crate::money::Money;
use crate::network::{PartnerIndex, TruckId};

/// Waiting minutes at the current hub and every later non-destination hub.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WaitPlan {
    waits: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanError {
    HubIndexOutOfRange { hub_index: usize, hubs: usize },
    WrongLength { expected: usize, got: usize },
    WaitBelowMinimum { index: usize, wait: u32, min: u32 },
    WaitAboveCap { index: usize, wait: u32, cap: u32 },
    BudgetExceeded { total: u32, budget: u32 },
    DeadlineMissed { arrival: Tick, deadline: Tick },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::HubIndexOutOfRange { hub_index, hubs } => {
                write!(f, "infeasible plan: hub index {hub_index} has no outgoing segment (route has {hubs} hubs)")
            }
            PlanError::WrongLength { expected, got } => {
                write!(f, "infeasible plan: expected {expected} waits, got {got}")
            }
            PlanError::WaitBelowMinimum { index, wait, min } => {
                write!(
                    f,
                    "infeasible plan: wait {wait} at offset {index} is below the minimum {min}"
                )
            }
            PlanError::WaitAboveCap { index, wait, cap } => {
                write!(
                    f,
                    "infeasible plan: wait {wait} at offset {index} exceeds the per-hub cap {cap}"
                )
            }
            PlanError::BudgetExceeded { total, budget } => {
                write!(
                    f,
                    "infeasible plan: trip waiting {total} exceeds the budget {budget}"
                )
            }
            PlanError::DeadlineMissed { arrival, deadline } => {
                write!(
                    f,
                    "infeasible plan: arrival {arrival} is after the deadline {deadline}"
                )
            }
        }
    }
}

impl core::error::Error for PlanError {}

impl WaitPlan {
    pub fn new(waits: Vec<u32>) -> Self {
        WaitPlan { waits }
    }

    pub fn waits(&self) -> &[u32] {
        &self.waits
    }

    pub fn len(&self) -> usize {
        self.waits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waits.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.waits.iter().sum()
    }

    /// Wait to execute now.
    pub fn first(&self) -> Option<u32> {
        self.waits.first().copied()
    }

    /// Checks per-hub bounds, the trip budget and the deadline for a truck in
    /// `state`.
    pub fn check_feasible(&self, spec: &TruckSpec, state: &TruckState) -> Result<(), PlanError> {
        let segments = spec.route.segment_count();
        if state.hub_index >= segments {
            return Err(PlanError::HubIndexOutOfRange {
                hub_index: state.hub_index,
                hubs: spec.route.len(),
            });
        }
        let expected = segments - state.hub_index;
        if self.waits.len() != expected {
            return Err(PlanError::WrongLength {
                expected,
                got: self.waits.len(),
            });
        }
        for (index, &wait) in self.waits.iter().enumerate() {
            if wait < spec.wait_min {
                return Err(PlanError::WaitBelowMinimum {
                    index,
                    wait,
                    min: spec.wait_min,
                });
            }
            if wait > spec.wait_max_per_hub {
                return Err(PlanError::WaitAboveCap {
                    index,
                    wait,
                    cap: spec.wait_max_per_hub,
                });
            }
        }
        let total = state.wait_used + self.total();
        if total > spec.wait_budget_total {
            return Err(PlanError::BudgetExceeded {
                total,
                budget: spec.wait_budget_total,
            });
        }
        let remaining: u32 = spec.route.segment_minutes()[state.hub_index..].iter().sum();
        let arrival = state.arrival_tick + self.total() + remaining;
        if arrival > spec.deadline_tick {
            return Err(PlanError::DeadlineMissed {
                arrival,
                deadline: spec.deadline_tick,
            });
        }
        Ok(())
    }

    /// Planned departure tick at each remaining hub.
    pub fn departures(&self, spec: &TruckSpec, state: &TruckState) -> Vec<Tick> {
        let minutes = &spec.route.segment_minutes()[state.hub_index..];
        let mut t = state.arrival_tick;
        self.waits
            .iter()
            .zip(minutes)
            .map(|(&w, &m)| {
                let dep = t + w;
                t = dep + m;
                dep
            })
            .collect()
    }
}

/// Predicted partners at each horizon offset, ascending by truck id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartnerSetPrediction {
    sets: Vec<Vec<TruckId>>,
}

impl PartnerSetPrediction {
    pub fn new(sets: Vec<Vec<TruckId>>) -> Self {
        PartnerSetPrediction { sets }
    }

    pub fn sets(&self) -> &[Vec<TruckId>] {
        &self.sets
    }

    pub fn at(&self, h: usize) -> &[TruckId] {
        &self.sets[h]
    }

    pub fn counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.sets.iter().map(Vec::len)
    }
}

/// Trucks among the potential partners whose board departure from the same
/// hub toward the same next hub equals this truck's planned departure.
pub fn predicted_partner_set(
    spec: &TruckSpec,
    state: &TruckState,
    plan: &WaitPlan,
    board: &PredictionBoard,
    index: &PartnerIndex,
) -> PartnerSetPrediction {
    let i = spec.id();
    let k = state.hub_index;
    let hubs = spec.route.hubs();
    let sets = plan
        .departures(spec, state)
        .into_iter()
        .enumerate()
        .map(|(h, dep)| {
            let (hub, next) = (hubs[k + h], hubs[k + h + 1]);
            index
                .partners(i, k + h)
                .iter()
                .copied()
                .filter(|&j| board.departure_of(j, hub, next, dep..=dep).is_some())
                .collect()
        })
        .collect();
    PartnerSetPrediction { sets }
}

/// Share of the platooning benefit on one segment with `n_partners` others:
/// `xi * travel * n / (n + 1)`, rounded half-to-even at hundredths.
pub fn segment_reward(xi_per_min: Money, travel: u32, n_partners: usize) -> Money {
    let n = n_partners as u64;
    xi_per_min.times(travel).scale_ratio(n, n + 1)
}

pub fn predicted_reward(spec: &TruckSpec, k: usize, partner_sets: &PartnerSetPrediction) -> Money {
    let minutes = &spec.route.segment_minutes()[k..];
    partner_sets
        .counts()
        .zip(minutes)
        .map(|(n, &m)| segment_reward(spec.xi_per_min, m, n))
        .sum()
}

pub fn predicted_loss(spec: &TruckSpec, plan: &WaitPlan) -> Money {
    spec.eps_per_min.times(plan.total())
}

/// Predicted reward minus predicted loss, with the partner sets it used.
pub fn utility(
    spec: &TruckSpec,
    state: &TruckState,
    plan: &WaitPlan,
    board: &PredictionBoard,
    index: &PartnerIndex,
) -> Result<(Money, PartnerSetPrediction), PlanError> {
    plan.check_feasible(spec, state)?;
    let sets = predicted_partner_set(spec, state, plan, board, index);
    let value = predicted_reward(spec, state.hub_index, &sets) - predicted_loss(spec, plan);
    Ok((value, sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fleet::{BoardEntry, BoardKey};
    use crate::network::{build_network, build_partner_index, Hub, HubId, Route, Segment};
    use alloc::vec;

    const A: u32 = 1;
    const B: u32 = 2;
    const C: u32 = 3;
    const D: u32 = 4;

    fn m(h: i64) -> Money {
        Money::from_hundredths(h)
    }

    struct Fixture {
        spec: TruckSpec,
        index: PartnerIndex,
        board: PredictionBoard,
    }

    /// Truck 1 on A->B->C; truck 2 on the same route; truck 3 on A->D.
    fn fixture(t2_departures: &[(u32, u32, u32)]) -> Fixture {
        let net = build_network(
            [A, B, C, D].into_iter().map(Hub::new).collect(),
            vec![
                Segment::new(A, B, 60),
                Segment::new(B, C, 60),
                Segment::new(A, D, 60),
            ],
        )
        .unwrap();
        let path = |t: u32, hs: &[u32]| {
            Route::from_hubs(&net, TruckId(t), hs.iter().map(|&h| HubId(h)).collect()).unwrap()
        };
        let r1 = path(1, &[A, B, C]);
        let routes = vec![r1.clone(), path(2, &[A, B, C]), path(3, &[A, D])];
        let index = build_partner_index(&routes);
        let mut board = PredictionBoard::new();
        for &(truck, hub, dep) in t2_departures {
            let next = match (truck, hub) {
                (3, _) => D,
                (_, h) if h == A => B,
                _ => C,
            };
            board.insert(
                BoardKey {
                    truck: TruckId(truck),
                    hub: HubId(hub),
                    ordinal: 0,
                },
                BoardEntry {
                    departure: Tick(dep),
                    next_hub: HubId(next),
                    realized: false,
                },
            );
        }
        let spec = TruckSpec {
            route: r1,
            start_tick: Tick(0),
            deadline_tick: Tick(180),
            wait_min: 0,
            wait_max_per_hub: 30,
            wait_budget_total: 60,
            xi_per_min: m(96),
            eps_per_min: m(75),
        };
        Fixture { spec, index, board }
    }

    #[test]
    fn partner_set_equality_cases() {
        let f = fixture(&[(2, B, 80)]);
        let st = TruckState::at_origin(&f.spec);
        let p = predicted_partner_set(
            &f.spec,
            &st,
            &WaitPlan::new(vec![0, 20]),
            &f.board,
            &f.index,
        );
        assert_eq!(p.at(1), &[TruckId(2)]);
        let p = predicted_partner_set(
            &f.spec,
            &st,
            &WaitPlan::new(vec![0, 21]),
            &f.board,
            &f.index,
        );
        assert!(p.at(1).is_empty());
        // truck 3 leaves A at 0 but toward D
        let f = fixture(&[(3, A, 0)]);
        let p = predicted_partner_set(&f.spec, &st, &WaitPlan::new(vec![0, 0]), &f.board, &f.index);
        assert!(p.at(0).is_empty());
    }

    #[test]
    fn segment_reward_examples() {
        assert_eq!(segment_reward(m(96), 60, 1), m(2880));
        assert_eq!(segment_reward(m(96), 60, 0), Money::ZERO);
        assert_eq!(segment_reward(m(96), 60, 2), m(3840));
    }

    #[test]
    fn reward_and_loss_examples() {
        let f = fixture(&[]);
        let two = PartnerSetPrediction::new(vec![vec![TruckId(2)], vec![TruckId(2)]]);
        assert_eq!(predicted_reward(&f.spec, 0, &two), m(5760));
        let none = PartnerSetPrediction::new(vec![vec![], vec![]]);
        assert_eq!(predicted_reward(&f.spec, 0, &none), Money::ZERO);

        let mut last = f.spec.clone();
        let net = build_network(
            [A, B].into_iter().map(Hub::new).collect(),
            vec![Segment::new(A, B, 30)],
        )
        .unwrap();
        last.route = Route::from_hubs(&net, TruckId(1), vec![HubId(A), HubId(B)]).unwrap();
        let pair = PartnerSetPrediction::new(vec![vec![TruckId(2), TruckId(3)]]);
        assert_eq!(predicted_reward(&last, 0, &pair), m(1920));

        assert_eq!(
            predicted_loss(&f.spec, &WaitPlan::new(vec![10, 10])),
            m(1500)
        );
        assert_eq!(
            predicted_loss(&f.spec, &WaitPlan::new(vec![0, 0])),
            Money::ZERO
        );
        let mut free = f.spec.clone();
        free.eps_per_min = Money::ZERO;
        assert_eq!(
            predicted_loss(&free, &WaitPlan::new(vec![7, 30])),
            Money::ZERO
        );
    }

    #[test]
    fn utility_examples() {
        let f = fixture(&[(2, A, 10), (2, B, 80)]);
        let st = TruckState::at_origin(&f.spec);
        let (j, sets) = utility(
            &f.spec,
            &st,
            &WaitPlan::new(vec![10, 10]),
            &f.board,
            &f.index,
        )
        .unwrap();
        assert_eq!(j, m(4260));
        assert_eq!(sets.sets(), &[vec![TruckId(2)], vec![TruckId(2)]]);

        let (j, _) = utility(&f.spec, &st, &WaitPlan::new(vec![0, 0]), &f.board, &f.index).unwrap();
        assert_eq!(j, Money::ZERO);

        assert!(matches!(
            utility(
                &f.spec,
                &st,
                &WaitPlan::new(vec![30, 31]),
                &f.board,
                &f.index
            ),
            Err(PlanError::WaitAboveCap { index: 1, .. })
        ));
        assert!(matches!(
            utility(&f.spec, &st, &WaitPlan::new(vec![0]), &f.board, &f.index),
            Err(PlanError::WrongLength {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn budget_and_deadline_checks() {
        let mut f = fixture(&[]);
        let st = TruckState::at_origin(&f.spec);
        f.spec.wait_budget_total = 40;
        assert!(matches!(
            WaitPlan::new(vec![30, 30]).check_feasible(&f.spec, &st),
            Err(PlanError::BudgetExceeded {
                total: 60,
                budget: 40
            })
        ));
        f.spec.wait_budget_total = 60;
        f.spec.deadline_tick = Tick(150);
        assert!(matches!(
            WaitPlan::new(vec![30, 1]).check_feasible(&f.spec, &st),
            Err(PlanError::DeadlineMissed { .. })
        ));
        assert!(WaitPlan::new(vec![30, 0])
            .check_feasible(&f.spec, &st)
            .is_ok());
    }
}
