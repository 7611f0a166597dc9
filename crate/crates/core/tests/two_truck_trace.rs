//! Two trucks on A -> B -> C with 60-minute legs.
//!
//! Truck 2 must wait exactly 10 minutes at every hub (wait_min = wait_max =
//! 10), so it leaves A at 10 and B at 80. Truck 1 starts at A at tick 0 and is
//! free to wait up to 30 minutes per hub within a 60-minute budget.
//!
//! Hand trace:
//!   t=0   both arrive at A. Truck 1 solves first against truck 2's initial
//!         prediction (A@10, B@80): plan [10, 10], J = 2*28.80 - 20*0.75 = 42.60.
//!         Truck 2 solves its forced plan [10, 10].
//!   t=10  both leave A -> platoon (A,B)@10.
//!   t=70  both arrive at B; truck 1 re-plans [10] (J = 28.80 - 7.50 = 21.30).
//!   t=80  both leave B -> platoon (B,C)@80.
//!   t=140 both arrive at C.

use platoon_core::simulator::{audit, Event, World};
use platoon_core::{
    brute_force_oracle, build_network, run, solve_mpc, Hub, HubId, Money, Network, Route, Scenario,
    Segment, Tick, TruckId, TruckSpec,
};

const A: u32 = 1;
const B: u32 = 2;
const C: u32 = 3;

fn network() -> Network {
    build_network(
        [A, B, C].into_iter().map(Hub::new).collect(),
        vec![Segment::new(A, B, 60), Segment::new(B, C, 60)],
    )
    .unwrap()
}

fn scenario() -> Scenario {
    let net = network();
    let route = |t| Route::from_hubs(&net, TruckId(t), vec![HubId(A), HubId(B), HubId(C)]).unwrap();
    let t1 = TruckSpec {
        route: route(1),
        start_tick: Tick(0),
        deadline_tick: Tick(180),
        wait_min: 0,
        wait_max_per_hub: 30,
        wait_budget_total: 60,
        xi_per_min: Money::from_hundredths(96),
        eps_per_min: Money::from_hundredths(75),
    };
    let t2 = TruckSpec {
        route: route(2),
        start_tick: Tick(0),
        deadline_tick: Tick(140),
        wait_min: 10,
        wait_max_per_hub: 10,
        wait_budget_total: 20,
        ..t1.clone()
    };
    Scenario {
        network: net,
        trucks: vec![t1, t2],
        seed: 7,
    }
}

#[test]
fn first_decision_agrees_with_oracle() {
    let s = scenario();
    let mut world = World::new(&s).unwrap();
    let board = world.board().clone();
    let spec = &s.trucks[0];
    let state = world.state(TruckId(1)).unwrap().clone();
    let dp = solve_mpc(spec, &state, &board, world.partner_index()).unwrap();
    let bf = brute_force_oracle(spec, &state, &board, world.partner_index()).unwrap();
    assert_eq!(dp, bf);
    assert_eq!(dp.plan.waits(), &[10, 10]);
    assert_eq!(dp.utility, Money::from_hundredths(4260));
    world.step().unwrap();
    assert_eq!(world.log().decisions[0].plan.waits(), &[10, 10]);
}

#[test]
fn end_to_end_trace() {
    let s = scenario();
    let log = run(&s).unwrap();
    assert!(audit(&s, &log).is_empty());

    assert_eq!(log.platoons.len(), 2);
    assert_eq!(
        (
            log.platoons[0].from,
            log.platoons[0].to,
            log.platoons[0].departure_tick
        ),
        (HubId(A), HubId(B), Tick(10))
    );
    assert_eq!(
        (
            log.platoons[1].from,
            log.platoons[1].to,
            log.platoons[1].departure_tick
        ),
        (HubId(B), HubId(C), Tick(80))
    );
    for p in &log.platoons {
        assert_eq!(p.members, vec![TruckId(1), TruckId(2)]);
    }

    let t1 = TruckId(1);
    assert_eq!(log.realized_utility(t1), Ok(Money::from_hundredths(4260)));
    assert_eq!(log.trucks[&t1].total_wait, 20);
    assert_eq!(log.platooning_rate(t1), Ok(1.0));
    assert_eq!(log.trucks[&t1].final_arrival, Some(Tick(140)));

    let at_b: Vec<_> = log
        .decisions
        .iter()
        .filter(|d| d.tick == Tick(70))
        .collect();
    assert_eq!(at_b[0].truck, t1);
    assert_eq!(at_b[0].plan.waits(), &[10]);
    assert_eq!(at_b[0].predicted_utility, Money::from_hundredths(2130));

    let kinds: Vec<(u32, &str)> = log.events.iter().map(|e| (e.tick().0, e.kind())).collect();
    assert_eq!(
        &kinds[..4],
        &[(0, "ARRIVE"), (0, "ARRIVE"), (0, "DECIDE"), (0, "DECIDE")]
    );
    assert!(log
        .events
        .iter()
        .any(|e| matches!(e, Event::PlatoonForm { tick: Tick(80), .. })));
    assert_eq!(
        log.events
            .iter()
            .filter(|e| matches!(
                e,
                Event::Finish {
                    tick: Tick(140),
                    ..
                }
            ))
            .count(),
        2
    );
}

#[test]
fn repeated_runs_are_identical() {
    let s = scenario();
    assert_eq!(run(&s).unwrap(), run(&s).unwrap());
}
