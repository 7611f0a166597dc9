//! Randomized truck fleets over a given network.

use platoon_core::{HubId, Network, TruckId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::files::{NetworkFile, ScenarioMeta, TruckRecord};

/// Attempts per truck before an origin/destination draw is given up.
pub const MAX_OD_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub trucks: usize,
    pub window_start: u32,
    pub window_end: u32,
    pub wait_max_per_hub: u32,
    pub wait_budget_total: u32,
    pub xi_per_min: f64,
    pub eps_per_min: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            trucks: 100,
            window_start: 480,
            window_end: 540,
            wait_max_per_hub: 30,
            wait_budget_total: 60,
            xi_per_min: 0.96,
            eps_per_min: 0.75,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn meta(&self) -> ScenarioMeta {
        ScenarioMeta {
            seed: self.seed,
            trucks: self.trucks,
            window_start: self.window_start,
            window_end: self.window_end,
            wait_max_per_hub: self.wait_max_per_hub,
            wait_budget_total: self.wait_budget_total,
            xi_per_min: self.xi_per_min,
            eps_per_min: self.eps_per_min,
        }
    }
}

/// Draws `config.trucks` trucks with uniform origin/destination pairs and
/// uniform start ticks. Each deadline is the zero-wait arrival plus the
/// wait budget.
pub fn generate_trucks(network: &NetworkFile, config: &ScenarioConfig) -> Result<Vec<TruckRecord>> {
    if config.trucks == 0 {
        return Err(Error::Generate("truck count must be at least 1".into()));
    }
    if config.window_start > config.window_end {
        return Err(Error::Generate(format!(
            "start window {}..{} is inverted",
            config.window_start, config.window_end
        )));
    }
    let net: Network = network.to_network()?;
    let hub_ids: Vec<HubId> = net.hubs().map(|h| h.id).collect();
    if hub_ids.len() < 2 {
        return Err(Error::Generate("network needs at least two hubs".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.trucks);
    for i in 0..config.trucks {
        let id = i as u32 + 1;
        let mut drawn = None;
        for _ in 0..MAX_OD_ATTEMPTS {
            let o = hub_ids[rng.random_range(0..hub_ids.len())];
            let d = hub_ids[rng.random_range(0..hub_ids.len())];
            if o == d {
                continue;
            }
            if let Ok(route) = net.plan_route(o, d, TruckId(id)) {
                drawn = Some((o, d, route.total_minutes()));
                break;
            }
        }
        let (o, d, minutes) = drawn.ok_or_else(|| {
            Error::Generate(format!(
                "no reachable origin/destination pair for truck {id} after {MAX_OD_ATTEMPTS} attempts"
            ))
        })?;
        let start = rng.random_range(config.window_start..=config.window_end);
        out.push(TruckRecord {
            id,
            origin: o.0,
            destination: d.0,
            start_tick: start,
            deadline_tick: start + minutes + config.wait_budget_total,
            wait_max_per_hub: config.wait_max_per_hub,
            wait_budget_total: config.wait_budget_total,
            xi_per_min: config.xi_per_min,
            eps_per_min: config.eps_per_min,
            wait_min: None,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::files::{HubRecord, SegmentRecord};

    fn two_hubs() -> NetworkFile {
        NetworkFile {
            hubs: vec![
                HubRecord {
                    id: 1,
                    name: None,
                    lat: None,
                    lon: None,
                },
                HubRecord {
                    id: 2,
                    name: None,
                    lat: None,
                    lon: None,
                },
            ],
            segments: vec![SegmentRecord {
                from: 1,
                to: 2,
                travel_minutes: 45,
            }],
        }
    }

    #[test]
    fn forced_pair() {
        let cfg = ScenarioConfig {
            trucks: 1,
            seed: 3,
            ..ScenarioConfig::default()
        };
        let t = generate_trucks(&two_hubs(), &cfg).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].origin, t[0].destination), (1, 2));
        assert!((480..=540).contains(&t[0].start_tick));
        assert_eq!(t[0].deadline_tick, t[0].start_tick + 45 + 60);
    }

    #[test]
    fn unreachable_everywhere_fails() {
        let mut net = two_hubs();
        net.segments.clear();
        let cfg = ScenarioConfig {
            trucks: 1,
            ..ScenarioConfig::default()
        };
        assert!(matches!(
            generate_trucks(&net, &cfg),
            Err(Error::Generate(_))
        ));
    }

    #[test]
    fn bad_configs() {
        let zero = ScenarioConfig {
            trucks: 0,
            ..ScenarioConfig::default()
        };
        assert!(generate_trucks(&two_hubs(), &zero).is_err());
        let inverted = ScenarioConfig {
            window_start: 600,
            ..ScenarioConfig::default()
        };
        assert!(generate_trucks(&two_hubs(), &inverted).is_err());
    }
}
