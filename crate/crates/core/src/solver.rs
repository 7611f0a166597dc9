//! Exact solver for one truck's waiting-time problem, plus a brute-force
//! reference used to validate it.
//!
//! The remaining route is a sequence of stages, one per non-destination hub.
//! Because every constraint on the plan other than the per-hub bounds is a
//! cap on the cumulative wait, the DP state after stage `h` is the cumulative
//! wait `w`: the departure tick at hub `k + h` is then the zero-wait departure
//! plus `w`. Stage rewards only depend on that tick, and the waiting loss is
//! linear in the final `w`, so the backward recursion is exact.
//!
//! Among optimal plans the smallest total wait wins, then the
//! lexicographically smallest wait vector.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::time::Duration;

use crate::clock::{Clock, NoClock};
use crate::fleet::{PredictionBoard, Tick, TruckSpec, TruckState};
use crate::money::Money;
use crate::network::PartnerIndex;
use crate::utility::{self, segment_reward, PartnerSetPrediction, WaitPlan};

/// Oracle limits: horizon length and number of distinct per-hub waits.
pub const ORACLE_MAX_HORIZON: usize = 5;
pub const ORACLE_MAX_WAIT_VALUES: u32 = 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub plan: WaitPlan,
    pub utility: Money,
    pub partner_sets: PartnerSetPrediction,
    pub solve_duration: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    AtDestination,
    /// Even the minimum-wait completion arrives after the deadline.
    DeadlineInfeasible {
        earliest_arrival: Tick,
        deadline: Tick,
    },
    /// The remaining budget cannot cover the minimum waits.
    BudgetInfeasible {
        required: u32,
        remaining: u32,
    },
    TooLargeForOracle {
        horizon: usize,
        wait_values: u32,
    },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::AtDestination => f.write_str("truck is already at its destination"),
            SolveError::DeadlineInfeasible {
                earliest_arrival,
                deadline,
            } => write!(
                f,
                "deadline infeasible: earliest arrival {earliest_arrival} is after deadline {deadline}"
            ),
            SolveError::BudgetInfeasible {
                required,
                remaining,
            } => write!(
                f,
                "budget infeasible: {required} minutes of minimum waiting but only {remaining} left"
            ),
            SolveError::TooLargeForOracle {
                horizon,
                wait_values,
            } => write!(
                f,
                "instance too large for the exhaustive oracle (horizon {horizon}, {wait_values} wait values)"
            ),
        }
    }
}

impl core::error::Error for SolveError {}

/// Derived bounds of the remaining problem.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bounds {
    /// Zero-wait departure tick per stage.
    base: Vec<Tick>,
    /// Largest admissible cumulative wait over the rest of the trip.
    max_total: u32,
}

fn bounds(spec: &TruckSpec, state: &TruckState) -> Result<Bounds, SolveError> {
    let k = state.hub_index;
    let minutes = spec.route.segment_minutes();
    if k >= minutes.len() {
        return Err(SolveError::AtDestination);
    }
    let horizon = minutes.len() - k;
    let mut base = Vec::with_capacity(horizon);
    let mut t = state.arrival_tick;
    for &m in &minutes[k..] {
        base.push(t);
        t = t + m;
    }
    let required = spec.wait_min * horizon as u32;
    let earliest_arrival = t + required;
    if earliest_arrival > spec.deadline_tick {
        return Err(SolveError::DeadlineInfeasible {
            earliest_arrival,
            deadline: spec.deadline_tick,
        });
    }
    let remaining = spec.wait_budget_total.saturating_sub(state.wait_used);
    if required > remaining {
        return Err(SolveError::BudgetInfeasible {
            required,
            remaining,
        });
    }
    let slack = spec.deadline_tick.since(t);
    Ok(Bounds {
        base,
        max_total: slack.min(remaining),
    })
}

/// Earliest and latest feasible departure tick at each remaining hub.
pub fn candidate_window(
    spec: &TruckSpec,
    state: &TruckState,
) -> Result<Vec<(Tick, Tick)>, SolveError> {
    let b = bounds(spec, state)?;
    let horizon = b.base.len() as u32;
    let wmin = spec.wait_min;
    Ok(b.base
        .iter()
        .enumerate()
        .map(|(h, &e)| {
            let h = h as u32;
            let lo = (h + 1) * wmin;
            let hi = ((h + 1) * spec.wait_max_per_hub).min(b.max_total - (horizon - 1 - h) * wmin);
            (e + lo, e + hi)
        })
        .collect())
}

/// Objective plus tie-break: higher utility, then lower total wait.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Score {
    value: Money,
    total_wait: u32,
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| other.total_wait.cmp(&self.total_wait))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn solve_mpc(
    spec: &TruckSpec,
    state: &TruckState,
    board: &PredictionBoard,
    index: &PartnerIndex,
) -> Result<SolveResult, SolveError> {
    solve_mpc_with_clock(spec, state, board, index, &NoClock)
}

/// Globally optimal wait plan by dynamic programming over cumulative wait.
pub fn solve_mpc_with_clock<C: Clock>(
    spec: &TruckSpec,
    state: &TruckState,
    board: &PredictionBoard,
    index: &PartnerIndex,
    clock: &C,
) -> Result<SolveResult, SolveError> {
    let started = clock.now();
    let b = bounds(spec, state)?;
    let horizon = b.base.len();
    let width = b.max_total as usize + 1;
    let k = state.hub_index;
    let hubs = spec.route.hubs();
    let minutes = spec.route.segment_minutes();
    let wmin = spec.wait_min as usize;
    let cap = spec.wait_max_per_hub as usize;

    // Stage reward indexed by cumulative wait.
    let rewards: Vec<Vec<Money>> = (0..horizon)
        .map(|h| {
            let (hub, next) = (hubs[k + h], hubs[k + h + 1]);
            let lo = b.base[h];
            let hi = lo + b.max_total;
            let mut counts = vec![0usize; width];
            for &j in index.partners(spec.id(), k + h) {
                if let Some(dep) = board.departure_of(j, hub, next, lo..=hi) {
                    counts[dep.since(lo) as usize] += 1;
                }
            }
            counts
                .into_iter()
                .map(|n| segment_reward(spec.xi_per_min, minutes[k + h], n))
                .collect()
        })
        .collect();

    // suffix[h][w]: best score of stages h.. given cumulative wait `w`
    // *before* stage h. suffix[horizon] is the terminal waiting loss.
    let mut suffix: Vec<Vec<Option<Score>>> = vec![vec![None; width]; horizon + 1];
    for (w, slot) in suffix[horizon].iter_mut().enumerate() {
        *slot = Some(Score {
            value: -spec.eps_per_min.times(w as u32),
            total_wait: w as u32,
        });
    }
    for h in (0..horizon).rev() {
        for w_prev in 0..width {
            let mut best: Option<Score> = None;
            for u in wmin..=cap {
                let w = w_prev + u;
                if w >= width {
                    break;
                }
                let Some(tail) = suffix[h + 1][w] else {
                    continue;
                };
                let cand = Score {
                    value: rewards[h][w] + tail.value,
                    total_wait: tail.total_wait,
                };
                if best.is_none_or(|b| cand > b) {
                    best = Some(cand);
                }
            }
            suffix[h][w_prev] = best;
        }
    }

    let target = suffix[0][0].expect("bounds guarantee a feasible plan");
    let mut waits = Vec::with_capacity(horizon);
    let mut w_prev = 0usize;
    for h in 0..horizon {
        let want = suffix[h][w_prev].expect("reachable state has a value");
        let u = (wmin..=cap)
            .find(|&u| {
                let w = w_prev + u;
                w < width
                    && suffix[h + 1][w].is_some_and(|tail| {
                        Score {
                            value: rewards[h][w] + tail.value,
                            total_wait: tail.total_wait,
                        } == want
                    })
            })
            .expect("optimal choice exists");
        waits.push(u as u32);
        w_prev += u;
    }

    let plan = WaitPlan::new(waits);
    let (value, partner_sets) = utility::utility(spec, state, &plan, board, index)
        .expect("dynamic program only produces feasible plans");
    debug_assert_eq!(value, target.value);
    let solve_duration = clock.now().saturating_sub(started);
    Ok(SolveResult {
        plan,
        utility: value,
        partner_sets,
        solve_duration,
    })
}

/// Exhaustive search over every feasible wait vector, scored with
/// [`utility::utility`]. Only for small instances.
pub fn brute_force_oracle(
    spec: &TruckSpec,
    state: &TruckState,
    board: &PredictionBoard,
    index: &PartnerIndex,
) -> Result<SolveResult, SolveError> {
    let segments = spec.route.segment_count();
    if state.hub_index >= segments {
        return Err(SolveError::AtDestination);
    }
    let horizon = segments - state.hub_index;
    let wait_values = spec.wait_max_per_hub.saturating_sub(spec.wait_min) + 1;
    if horizon > ORACLE_MAX_HORIZON || wait_values > ORACLE_MAX_WAIT_VALUES {
        return Err(SolveError::TooLargeForOracle {
            horizon,
            wait_values,
        });
    }
    let b = bounds(spec, state)?;

    struct Search<'a> {
        spec: &'a TruckSpec,
        state: &'a TruckState,
        board: &'a PredictionBoard,
        index: &'a PartnerIndex,
        limit: u32,
        best: Option<(Score, WaitPlan, PartnerSetPrediction)>,
    }

    impl Search<'_> {
        // Visits vectors in lexicographic order; a later vector replaces the
        // incumbent only if strictly better.
        fn visit(&mut self, prefix: &mut Vec<u32>, horizon: usize, used: u32) {
            if prefix.len() == horizon {
                let plan = WaitPlan::new(prefix.clone());
                if let Ok((value, sets)) =
                    utility::utility(self.spec, self.state, &plan, self.board, self.index)
                {
                    let score = Score {
                        value,
                        total_wait: plan.total(),
                    };
                    if self.best.as_ref().is_none_or(|(s, _, _)| score > *s) {
                        self.best = Some((score, plan, sets));
                    }
                }
                return;
            }
            for u in self.spec.wait_min..=self.spec.wait_max_per_hub {
                if used + u > self.limit {
                    break;
                }
                prefix.push(u);
                self.visit(prefix, horizon, used + u);
                prefix.pop();
            }
        }
    }

    let mut search = Search {
        spec,
        state,
        board,
        index,
        limit: b.max_total,
        best: None,
    };
    search.visit(&mut Vec::with_capacity(horizon), horizon, 0);
    let (score, plan, partner_sets) = search.best.expect("bounds guarantee a feasible plan");
    Ok(SolveResult {
        plan,
        utility: score.value,
        partner_sets,
        solve_duration: Duration::ZERO,
    })
}
