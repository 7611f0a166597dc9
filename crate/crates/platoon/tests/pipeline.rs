use std::fs;
use std::path::Path;

use platoon::eventlog::{format_log, parse_log};
use platoon::files::{load_scenario, write_scenario};
use platoon::generate::{generate_trucks, ScenarioConfig};
use platoon::report::{report, SERIES};
use platoon::synth::{synth_network, SynthConfig};
use platoon::{run_command, simulate, Timing};
use platoon_core::simulator::audit;

fn scenario(dir: &Path, hubs: u32, trucks: usize, seed: u64) {
    let net = synth_network(&SynthConfig {
        hubs,
        seed,
        ..SynthConfig::default()
    });
    let cfg = ScenarioConfig {
        trucks,
        seed,
        ..ScenarioConfig::default()
    };
    let records = generate_trucks(&net, &cfg).unwrap();
    write_scenario(dir, &net, &records, &cfg.meta()).unwrap();
}

#[test]
fn generated_fleet_satisfies_spec_checks() {
    let tmp = tempfile::tempdir().unwrap();
    scenario(tmp.path(), 84, 100, 21);
    let s = load_scenario(tmp.path()).unwrap();
    assert_eq!(s.trucks.len(), 100);
    assert_eq!(s.seed, 21);
    for t in &s.trucks {
        assert!(t.validate().is_ok());
        assert_ne!(t.route.origin(), t.route.destination());
        assert!((480..=540).contains(&t.start_tick.0));
        assert_eq!(t.deadline_tick, t.zero_wait_arrival() + 60);
    }
}

#[test]
fn event_log_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    scenario(tmp.path(), 40, 60, 3);
    let log = simulate(tmp.path(), Timing::Off).unwrap();
    let text = format_log(&log.events);
    assert_eq!(parse_log(&text).unwrap(), log.events);
    assert!(audit(&load_scenario(tmp.path()).unwrap(), &log).is_empty());
}

/// Scaled-integer value of a plain decimal string, by hand.
fn scaled(field: &str, digits: usize) -> i128 {
    let neg = field.starts_with('-');
    let body = field.trim_start_matches('-');
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let mut frac = frac.to_owned();
    while frac.len() < digits {
        frac.push('0');
    }
    let v: i128 = format!("{int}{frac}").parse().unwrap();
    if neg {
        -v
    } else {
        v
    }
}

#[test]
fn aggregates_match_recomputation_from_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let (sc, run, rep) = (
        tmp.path().join("sc"),
        tmp.path().join("run"),
        tmp.path().join("rep"),
    );
    scenario(&sc, 84, 100, 8);
    run_command(&sc, &run, Timing::Wall).unwrap();
    report(&run, &rep).unwrap();

    let csv = fs::read_to_string(rep.join("trucks.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let n = rows.len() as i128;
    // column sums in millionths
    let mean = |col: usize, digits: usize| {
        let sum: i128 = rows
            .iter()
            .map(|r| scaled(r[col], digits) * 10i128.pow(6 - digits as u32))
            .sum();
        let (q, r) = (sum / n, sum % n);
        let round_up = 2 * r > n || (2 * r == n && q % 2 == 1);
        q + i128::from(round_up)
    };
    let wait = mean(2, 0);
    let rate = mean(5, 6);
    let solve = mean(6, 3);
    let nonzero = rows.iter().filter(|r| scaled(r[1], 2) != 0).count() as i128 * 1_000_000;
    let frac = {
        let (q, r) = (nonzero / n, nonzero % n);
        q + i128::from(2 * r > n || (2 * r == n && q % 2 == 1))
    };

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(rep.join("summary.json")).unwrap()).unwrap();
    let micro = |k: &str| (summary[k].as_f64().unwrap() * 1e6).round() as i128;
    assert_eq!(micro("mean_wait_min"), wait);
    assert_eq!(micro("mean_platooning_rate"), rate);
    assert_eq!(micro("mean_solve_ms"), solve);
    assert_eq!(micro("frac_nonzero_utility"), frac);
    assert_eq!(summary["total_trucks"], 100);

    // rates within [0, 1] and consistent with the minute columns
    for r in &rows {
        let (travel, platoon) = (scaled(r[3], 0), scaled(r[4], 0));
        assert!(platoon <= travel);
        let rate = scaled(r[5], 6);
        assert!((0..=1_000_000).contains(&rate));
        assert!((rate * travel - platoon * 1_000_000).abs() * 2 <= travel);
    }

    // every series is sorted by utility and has one line per truck
    let series_utility = fs::read_to_string(rep.join("series_utility.dat")).unwrap();
    let utils: Vec<i128> = series_utility
        .lines()
        .skip(1)
        .map(|l| scaled(l.split(' ').nth(1).unwrap(), 2))
        .collect();
    assert!(utils.windows(2).all(|w| w[0] <= w[1]));
    for (file, _) in SERIES {
        assert_eq!(
            fs::read_to_string(rep.join(file)).unwrap().lines().count(),
            101,
            "{file}"
        );
    }
}

#[test]
fn report_copies_run_table() {
    let tmp = tempfile::tempdir().unwrap();
    let (sc, run, rep) = (
        tmp.path().join("sc"),
        tmp.path().join("run"),
        tmp.path().join("rep"),
    );
    scenario(&sc, 30, 20, 2);
    run_command(&sc, &run, Timing::Off).unwrap();
    report(&run, &rep).unwrap();
    for f in ["trucks.csv", "summary.json"] {
        assert_eq!(
            fs::read(run.join(f)).unwrap(),
            fs::read(rep.join(f)).unwrap(),
            "{f}"
        );
    }
}
