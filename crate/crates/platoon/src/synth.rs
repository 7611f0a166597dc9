//! Synthetic road network loosely shaped like Sweden.
//!
//! Hubs are scattered with most of them in the south, joined by a minimum
//! spanning tree plus links to each hub's nearest neighbours. Every link
//! is driven in both directions at 80 km/h.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::files::{HubRecord, NetworkFile, SegmentRecord};

pub const SPEED_KMH: f64 = 80.0;
const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub hubs: u32,
    pub seed: u64,
    pub nearest: usize,
    pub south_share: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            hubs: 84,
            seed: 1,
            nearest: 8,
            south_share: 0.75,
        }
    }
}

/// Equirectangular distance in kilometres between two (lat, lon) points.
pub fn distance_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let mean_lat = ((a.0 + b.0) / 2.0).to_radians();
    let x = (b.1 - a.1).to_radians() * mean_lat.cos();
    let y = (b.0 - a.0).to_radians();
    EARTH_RADIUS_KM * x.hypot(y)
}

pub fn travel_minutes(km: f64) -> u32 {
    ((km / SPEED_KMH * 60.0).round() as u32).max(1)
}

fn place_hubs(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    (0..cfg.hubs)
        .map(|_| {
            if rng.random_bool(cfg.south_share) {
                (rng.random_range(55.5..61.0), rng.random_range(11.5..18.5))
            } else {
                (rng.random_range(61.0..66.0), rng.random_range(14.0..22.0))
            }
        })
        .collect()
}

/// Undirected links as (i, j) with i < j, indices into `coords`.
fn links(coords: &[(f64, f64)], nearest: usize) -> BTreeSet<(usize, usize)> {
    let n = coords.len();
    let d = |i: usize, j: usize| distance_km(coords[i], coords[j]);
    let mut out = BTreeSet::new();
    let key = |i: usize, j: usize| (i.min(j), i.max(j));

    // Prim's minimum spanning tree
    if n > 1 {
        let mut in_tree = vec![false; n];
        let mut best: Vec<(f64, usize)> = (0..n).map(|j| (d(0, j), 0)).collect();
        in_tree[0] = true;
        for _ in 1..n {
            let (next, _) = (0..n)
                .filter(|&j| !in_tree[j])
                .map(|j| (j, best[j].0))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .unwrap();
            in_tree[next] = true;
            out.insert(key(next, best[next].1));
            for j in 0..n {
                let dj = d(next, j);
                if !in_tree[j] && dj < best[j].0 {
                    best[j] = (dj, next);
                }
            }
        }
    }

    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| d(i, a).total_cmp(&d(i, b)).then(a.cmp(&b)));
        for &j in others.iter().take(nearest) {
            out.insert(key(i, j));
        }
    }
    out
}

pub fn synth_network(cfg: &SynthConfig) -> NetworkFile {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let coords = place_hubs(cfg, &mut rng);
    let hubs = coords
        .iter()
        .enumerate()
        .map(|(i, &(lat, lon))| HubRecord {
            id: i as u32 + 1,
            name: Some(format!("H{:02}", i + 1)),
            lat: Some((lat * 1e4).round() / 1e4),
            lon: Some((lon * 1e4).round() / 1e4),
        })
        .collect();
    let mut segments = Vec::new();
    for (i, j) in links(&coords, cfg.nearest) {
        let minutes = travel_minutes(distance_km(coords[i], coords[j]));
        let (a, b) = (i as u32 + 1, j as u32 + 1);
        segments.push(SegmentRecord {
            from: a,
            to: b,
            travel_minutes: minutes,
        });
        segments.push(SegmentRecord {
            from: b,
            to: a,
            travel_minutes: minutes,
        });
    }
    segments.sort_by_key(|s| (s.from, s.to));
    NetworkFile { hubs, segments }
}
