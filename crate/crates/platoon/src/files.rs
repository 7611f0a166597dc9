//! JSON network, truck-list and scenario-directory formats.
//!
//! A scenario directory holds `network.json`, `trucks.json` and
//! `scenario.json` (the generation settings, including the seed).

use std::fs;
use std::path::Path;

use platoon_core::{
    build_network, Hub, HubId, Money, Network, Scenario, Segment, Tick, TruckId, TruckSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};

pub const NETWORK_FILE: &str = "network.json";
pub const TRUCKS_FILE: &str = "trucks.json";
pub const SCENARIO_FILE: &str = "scenario.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubRecord {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub from: u32,
    pub to: u32,
    pub travel_minutes: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub hubs: Vec<HubRecord>,
    pub segments: Vec<SegmentRecord>,
}

impl NetworkFile {
    pub fn to_network(&self) -> Result<Network> {
        let hubs = self
            .hubs
            .iter()
            .map(|h| Hub {
                id: HubId(h.id),
                name: h.name.clone(),
                coords: h.lat.zip(h.lon),
            })
            .collect();
        let segments = self
            .segments
            .iter()
            .map(|s| Segment::new(s.from, s.to, s.travel_minutes))
            .collect();
        Ok(build_network(hubs, segments)?)
    }

    pub fn from_network(net: &Network) -> Self {
        NetworkFile {
            hubs: net
                .hubs()
                .map(|h| HubRecord {
                    id: h.id.0,
                    name: h.name.clone(),
                    lat: h.coords.map(|c| c.0),
                    lon: h.coords.map(|c| c.1),
                })
                .collect(),
            segments: net
                .segments()
                .map(|s| SegmentRecord {
                    from: s.from.0,
                    to: s.to.0,
                    travel_minutes: s.travel_minutes,
                })
                .collect(),
        }
    }
}

/// One truck in `trucks.json`. The route is the shortest path between
/// origin and destination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruckRecord {
    pub id: u32,
    pub origin: u32,
    pub destination: u32,
    pub start_tick: u32,
    pub deadline_tick: u32,
    pub wait_max_per_hub: u32,
    pub wait_budget_total: u32,
    pub xi_per_min: f64,
    pub eps_per_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wait_min: Option<u32>,
}

fn rate(path: &Path, truck: u32, field: &str, v: f64) -> Result<Money> {
    Money::from_f64_exact(v).ok_or_else(|| Error::InvalidRecord {
        path: path.to_path_buf(),
        message: format!("truck {truck}: {field} = {v} is not a whole number of hundredths"),
    })
}

impl TruckRecord {
    pub fn to_spec(&self, net: &Network, path: &Path) -> Result<TruckSpec> {
        let route = net
            .plan_route(
                HubId(self.origin),
                HubId(self.destination),
                TruckId(self.id),
            )
            .map_err(|e| Error::InvalidRecord {
                path: path.to_path_buf(),
                message: format!("truck {}: {e}", self.id),
            })?;
        Ok(TruckSpec {
            route,
            start_tick: Tick(self.start_tick),
            deadline_tick: Tick(self.deadline_tick),
            wait_min: self.wait_min.unwrap_or(0),
            wait_max_per_hub: self.wait_max_per_hub,
            wait_budget_total: self.wait_budget_total,
            xi_per_min: rate(path, self.id, "xi_per_min", self.xi_per_min)?,
            eps_per_min: rate(path, self.id, "eps_per_min", self.eps_per_min)?,
        })
    }
}

/// Settings a scenario was generated with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMeta {
    pub seed: u64,
    #[serde(default)]
    pub trucks: usize,
    #[serde(default)]
    pub window_start: u32,
    #[serde(default)]
    pub window_end: u32,
    #[serde(default)]
    pub wait_max_per_hub: u32,
    #[serde(default)]
    pub wait_budget_total: u32,
    #[serde(default)]
    pub xi_per_min: f64,
    #[serde(default)]
    pub eps_per_min: f64,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

pub fn load_network(path: &Path) -> Result<Network> {
    read_json::<NetworkFile>(path)?.to_network()
}

/// Reads and validates a scenario directory.
pub fn load_scenario(dir: &Path) -> Result<Scenario> {
    if !dir.is_dir() {
        return Err(Error::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "scenario directory not found",
            ),
        });
    }
    let network = load_network(&dir.join(NETWORK_FILE))?;
    let trucks_path = dir.join(TRUCKS_FILE);
    let records: Vec<TruckRecord> = read_json(&trucks_path)?;
    let trucks = records
        .iter()
        .map(|r| r.to_spec(&network, &trucks_path))
        .collect::<Result<Vec<_>>>()?;
    let meta_path = dir.join(SCENARIO_FILE);
    let seed = if meta_path.exists() {
        read_json::<ScenarioMeta>(&meta_path)?.seed
    } else {
        0
    };
    let scenario = Scenario {
        network,
        trucks,
        seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn write_scenario(
    dir: &Path,
    network: &NetworkFile,
    trucks: &[TruckRecord],
    meta: &ScenarioMeta,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_json(&dir.join(NETWORK_FILE), network)?;
    write_json(&dir.join(TRUCKS_FILE), &trucks)?;
    write_json(&dir.join(SCENARIO_FILE), meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn network_file_field_names() {
        let text = r#"{"hubs":[{"id":1,"name":"A","lat":59.3,"lon":18.1},{"id":2}],
                       "segments":[{"from":1,"to":2,"travel_minutes":60}]}"#;
        let file: NetworkFile = serde_json::from_str(text).unwrap();
        let net = file.to_network().unwrap();
        assert_eq!(net.hub_count(), 2);
        assert_eq!(net.hub(HubId(1)).unwrap().coords, Some((59.3, 18.1)));
        assert_eq!(NetworkFile::from_network(&net), file);
    }

    #[test]
    fn dangling_segment_is_rejected() {
        let text = r#"{"hubs":[{"id":1}],"segments":[{"from":1,"to":2,"travel_minutes":60}]}"#;
        let file: NetworkFile = serde_json::from_str(text).unwrap();
        assert!(matches!(file.to_network(), Err(Error::Network(_))));
    }

    #[test]
    fn truck_record_defaults_wait_min() {
        let text = r#"{"id":4,"origin":1,"destination":2,"start_tick":480,"deadline_tick":600,
                       "wait_max_per_hub":30,"wait_budget_total":60,"xi_per_min":0.96,"eps_per_min":0.75}"#;
        let rec: TruckRecord = serde_json::from_str(text).unwrap();
        let net = NetworkFile {
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
                travel_minutes: 60,
            }],
        }
        .to_network()
        .unwrap();
        let spec = rec.to_spec(&net, Path::new("trucks.json")).unwrap();
        assert_eq!(spec.wait_min, 0);
        assert_eq!(spec.xi_per_min, Money::from_hundredths(96));
        assert_eq!(spec.eps_per_min, Money::from_hundredths(75));
        assert_eq!(spec.route.hubs(), &[HubId(1), HubId(2)]);

        let bad = TruckRecord {
            xi_per_min: 0.955,
            ..rec
        };
        assert!(matches!(
            bad.to_spec(&net, Path::new("t")),
            Err(Error::InvalidRecord { .. })
        ));
    }
}
