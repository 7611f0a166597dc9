//! Hub graph, fixed truck routes and the offline potential-partner index.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

/// A physical hub in the transport network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HubId(pub u32);

/// Identifier of a truck.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruckId(pub u32);

impl fmt::Display for HubId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TruckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hub {
    pub id: HubId,
    pub name: Option<String>,
    /// Latitude and longitude in degrees; only used for scenario generation.
    pub coords: Option<(f64, f64)>,
}

impl Hub {
    pub fn new(id: u32) -> Self {
        Hub {
            id: HubId(id),
            name: None,
            coords: None,
        }
    }
}

/// A directed hub-to-hub edge with a fixed travel time in minutes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub from: HubId,
    pub to: HubId,
    pub travel_minutes: u32,
}

impl Segment {
    pub fn new(from: u32, to: u32, travel_minutes: u32) -> Self {
        Segment {
            from: HubId(from),
            to: HubId(to),
            travel_minutes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetworkError {
    EmptyNetwork,
    InvalidHubId,
    DuplicateHub(HubId),
    UnknownEndpoint { from: HubId, to: HubId },
    NonPositiveTravelTime { from: HubId, to: HubId },
    SelfLoop(HubId),
    DuplicateSegment { from: HubId, to: HubId },
    UnknownHub(HubId),
    SameOriginDestination(HubId),
    Unreachable { origin: HubId, destination: HubId },
    RouteTooShort,
    NotASegment { from: HubId, to: HubId },
    RepeatedSegment { from: HubId, to: HubId },
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NetworkError::*;
        match self {
            EmptyNetwork => f.write_str("network has no hubs"),
            InvalidHubId => f.write_str("hub ids must be >= 1"),
            DuplicateHub(h) => write!(f, "duplicate hub id {h}"),
            UnknownEndpoint { from, to } => {
                write!(f, "segment {from}->{to} references an unknown hub")
            }
            NonPositiveTravelTime { from, to } => {
                write!(f, "segment {from}->{to} has non-positive travel time")
            }
            SelfLoop(h) => write!(f, "segment {h}->{h} is a self loop"),
            DuplicateSegment { from, to } => write!(f, "duplicate segment {from}->{to}"),
            UnknownHub(h) => write!(f, "hub {h} is not in the network"),
            SameOriginDestination(h) => write!(f, "origin and destination are both hub {h}"),
            Unreachable {
                origin,
                destination,
            } => write!(f, "hub {destination} is unreachable from hub {origin}"),
            RouteTooShort => f.write_str("a route needs at least two hubs"),
            NotASegment { from, to } => write!(f, "no segment {from}->{to} in the network"),
            RepeatedSegment { from, to } => {
                write!(f, "route traverses segment {from}->{to} more than once")
            }
            IndexOutOfRange { index, len } => {
                write!(
                    f,
                    "segment index {index} out of range for route with {len} segments"
                )
            }
        }
    }
}

impl core::error::Error for NetworkError {}

/// Validated directed hub graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    hubs: BTreeMap<HubId, Hub>,
    segments: BTreeMap<(HubId, HubId), u32>,
}

/// Validates hubs and segments into a [`Network`].
pub fn build_network(hubs: Vec<Hub>, segments: Vec<Segment>) -> Result<Network, NetworkError> {
    if hubs.is_empty() {
        return Err(NetworkError::EmptyNetwork);
    }
    let mut hub_map = BTreeMap::new();
    for hub in hubs {
        if hub.id.0 == 0 {
            return Err(NetworkError::InvalidHubId);
        }
        let id = hub.id;
        if hub_map.insert(id, hub).is_some() {
            return Err(NetworkError::DuplicateHub(id));
        }
    }
    let mut seg_map = BTreeMap::new();
    for s in segments {
        if !hub_map.contains_key(&s.from) || !hub_map.contains_key(&s.to) {
            return Err(NetworkError::UnknownEndpoint {
                from: s.from,
                to: s.to,
            });
        }
        if s.from == s.to {
            return Err(NetworkError::SelfLoop(s.from));
        }
        if s.travel_minutes == 0 {
            return Err(NetworkError::NonPositiveTravelTime {
                from: s.from,
                to: s.to,
            });
        }
        if seg_map.insert((s.from, s.to), s.travel_minutes).is_some() {
            return Err(NetworkError::DuplicateSegment {
                from: s.from,
                to: s.to,
            });
        }
    }
    Ok(Network {
        hubs: hub_map,
        segments: seg_map,
    })
}

impl Network {
    pub fn hub_count(&self) -> usize {
        self.hubs.len()
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn contains(&self, hub: HubId) -> bool {
        self.hubs.contains_key(&hub)
    }

    pub fn hub(&self, id: HubId) -> Option<&Hub> {
        self.hubs.get(&id)
    }

    pub fn hubs(&self) -> impl Iterator<Item = &Hub> {
        self.hubs.values()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.segments.iter().map(|(&(from, to), &m)| Segment {
            from,
            to,
            travel_minutes: m,
        })
    }

    pub fn travel_minutes(&self, from: HubId, to: HubId) -> Option<u32> {
        self.segments.get(&(from, to)).copied()
    }

    /// Outgoing neighbours of `hub`, in ascending hub id.
    pub fn successors(&self, hub: HubId) -> impl Iterator<Item = (HubId, u32)> + '_ {
        self.segments
            .range((hub, HubId(0))..=(hub, HubId(u32::MAX)))
            .map(|(&(_, to), &m)| (to, m))
    }

    /// Shortest travel-time route; ties go to the lexicographically smallest
    /// hub-id sequence.
    pub fn plan_route(
        &self,
        origin: HubId,
        destination: HubId,
        truck: TruckId,
    ) -> Result<Route, NetworkError> {
        for h in [origin, destination] {
            if !self.contains(h) {
                return Err(NetworkError::UnknownHub(h));
            }
        }
        if origin == destination {
            return Err(NetworkError::SameOriginDestination(origin));
        }

        // Distances *to* the destination over reversed edges.
        let mut reverse: BTreeMap<HubId, Vec<(HubId, u32)>> = BTreeMap::new();
        for (&(from, to), &m) in &self.segments {
            reverse.entry(to).or_default().push((from, m));
        }
        let mut dist: BTreeMap<HubId, u64> = BTreeMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(destination, 0);
        heap.push(Reverse((0u64, destination)));
        while let Some(Reverse((d, hub))) = heap.pop() {
            if dist.get(&hub).is_some_and(|&best| d > best) {
                continue;
            }
            for &(prev, m) in reverse.get(&hub).map(Vec::as_slice).unwrap_or(&[]) {
                let nd = d + u64::from(m);
                if dist.get(&prev).is_none_or(|&best| nd < best) {
                    dist.insert(prev, nd);
                    heap.push(Reverse((nd, prev)));
                }
            }
        }
        let Some(&total) = dist.get(&origin) else {
            return Err(NetworkError::Unreachable {
                origin,
                destination,
            });
        };

        // Walk forward, always taking the smallest hub id that stays on a
        // shortest path. Positive weights guarantee progress.
        let mut hubs = alloc::vec![origin];
        let mut minutes = Vec::new();
        let mut current = origin;
        let mut remaining = total;
        while current != destination {
            let (next, m) = self
                .successors(current)
                .find(|&(next, m)| {
                    dist.get(&next)
                        .is_some_and(|&d| d + u64::from(m) == remaining)
                })
                .expect("shortest-path successor exists");
            remaining -= u64::from(m);
            hubs.push(next);
            minutes.push(m);
            current = next;
        }
        Ok(Route {
            truck,
            hubs,
            segment_minutes: minutes,
        })
    }
}

/// A fixed route: physical hubs in visiting order and per-segment travel times.
///
/// The hub at local index `k` is `hubs[k]`; index 0 is the origin and the
/// last index the destination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    truck: TruckId,
    hubs: Vec<HubId>,
    segment_minutes: Vec<u32>,
}

impl Route {
    /// Builds a route from an explicit hub sequence, taking travel times from
    /// the network.
    pub fn from_hubs(
        net: &Network,
        truck: TruckId,
        hubs: Vec<HubId>,
    ) -> Result<Route, NetworkError> {
        if hubs.len() < 2 {
            return Err(NetworkError::RouteTooShort);
        }
        let mut seen = BTreeSet::new();
        let mut minutes = Vec::with_capacity(hubs.len() - 1);
        for pair in hubs.windows(2) {
            let (from, to) = (pair[0], pair[1]);
            for h in [from, to] {
                if !net.contains(h) {
                    return Err(NetworkError::UnknownHub(h));
                }
            }
            let m = net
                .travel_minutes(from, to)
                .ok_or(NetworkError::NotASegment { from, to })?;
            if !seen.insert((from, to)) {
                return Err(NetworkError::RepeatedSegment { from, to });
            }
            minutes.push(m);
        }
        Ok(Route {
            truck,
            hubs,
            segment_minutes: minutes,
        })
    }

    pub fn truck(&self) -> TruckId {
        self.truck
    }

    pub fn hubs(&self) -> &[HubId] {
        &self.hubs
    }

    pub fn segment_minutes(&self) -> &[u32] {
        &self.segment_minutes
    }

    /// Number of hubs on the route (N_i).
    pub fn len(&self) -> usize {
        self.hubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hubs.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.segment_minutes.len()
    }

    pub fn origin(&self) -> HubId {
        self.hubs[0]
    }

    pub fn destination(&self) -> HubId {
        self.hubs[self.hubs.len() - 1]
    }

    pub fn total_minutes(&self) -> u32 {
        self.segment_minutes.iter().sum()
    }

    /// The directed physical pair leaving local index `k`.
    pub fn segment(&self, k: usize) -> Option<(HubId, HubId)> {
        (k + 1 < self.hubs.len()).then(|| (self.hubs[k], self.hubs[k + 1]))
    }

    /// How many times `hubs[k]` appeared before index `k`.
    pub fn ordinal(&self, k: usize) -> u32 {
        let hub = self.hubs[k];
        self.hubs[..k].iter().filter(|&&h| h == hub).count() as u32
    }

    /// Whether the route traverses `from -> to` consecutively.
    pub fn contains_segment(&self, from: HubId, to: HubId) -> bool {
        self.hubs.windows(2).any(|p| p[0] == from && p[1] == to)
    }
}

/// True iff segment `k` of `route_i` also appears on `route_j`.
pub fn is_common_segment(route_i: &Route, k: usize, route_j: &Route) -> Result<bool, NetworkError> {
    let (from, to) = route_i.segment(k).ok_or(NetworkError::IndexOutOfRange {
        index: k,
        len: route_i.segment_count(),
    })?;
    Ok(route_j.contains_segment(from, to))
}

/// For each truck and each non-destination hub index, the trucks sharing the
/// outgoing segment. Depends on routes only, so it is computed once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartnerIndex {
    sets: BTreeMap<TruckId, Vec<Vec<TruckId>>>,
}

impl PartnerIndex {
    /// Potential partners of `truck` at hub index `k`, ascending by id.
    pub fn partners(&self, truck: TruckId, k: usize) -> &[TruckId] {
        self.sets
            .get(&truck)
            .and_then(|v| v.get(k))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn trucks(&self) -> impl Iterator<Item = TruckId> + '_ {
        self.sets.keys().copied()
    }

    pub fn hub_count(&self, truck: TruckId) -> usize {
        self.sets.get(&truck).map_or(0, Vec::len)
    }
}

pub fn build_partner_index(routes: &[Route]) -> PartnerIndex {
    let mut by_segment: BTreeMap<(HubId, HubId), BTreeSet<TruckId>> = BTreeMap::new();
    for route in routes {
        for p in route.hubs.windows(2) {
            by_segment
                .entry((p[0], p[1]))
                .or_default()
                .insert(route.truck);
        }
    }
    let sets = routes
        .iter()
        .map(|route| {
            let per_hub = route
                .hubs
                .windows(2)
                .map(|p| {
                    by_segment[&(p[0], p[1])]
                        .iter()
                        .copied()
                        .filter(|&j| j != route.truck)
                        .collect()
                })
                .collect();
            (route.truck, per_hub)
        })
        .collect();
    PartnerIndex { sets }
}
