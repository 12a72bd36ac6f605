#![allow(dead_code)]

use std::sync::Arc;

use afs_core::netgraph::{OneWayPath, RoundTripPath};
use afs_core::{build_catalog, Instance, Network, StationPlan, VehicleSpec};
use rand::Rng;

/// Connected random network on nodes `1..=n`: a random spanning tree plus
/// `extra` further links, integer distances in `1..=max_d`.
pub fn random_network<R: Rng>(rng: &mut R, n: usize, extra: usize, max_d: u32) -> Network {
    let mut links: Vec<(u32, u32, u32)> = Vec::new();
    let has = |a: u32, b: u32, links: &Vec<(u32, u32, u32)>| {
        links.iter().any(|&(x, y, _)| (x, y) == (a.min(b), a.max(b)))
    };
    for v in 2..=n as u32 {
        let u = rng.gen_range(1..v);
        links.push((u, v, rng.gen_range(1..=max_d)));
    }
    let mut tries = 0;
    while links.len() < n - 1 + extra && tries < 1000 {
        tries += 1;
        let a = rng.gen_range(1..=n as u32);
        let b = rng.gen_range(1..=n as u32);
        if a == b || has(a, b, &links) {
            continue;
        }
        links.push((a.min(b), a.max(b), rng.gen_range(1..=max_d)));
    }
    let mut text = format!("nodes={n} links={} symmetric=1\n", links.len());
    for (a, b, d) in links {
        text.push_str(&format!("{a} {b} {d}\n"));
    }
    Network::parse(&text).unwrap()
}

/// Line `1 - 2 - ... - n` with the given leg lengths.
pub fn line_network(legs: &[u32]) -> Network {
    let n = legs.len() + 1;
    let mut text = format!("nodes={n} links={} symmetric=1\n", legs.len());
    for (i, d) in legs.iter().enumerate() {
        text.push_str(&format!("{} {} {d}\n", i + 1, i + 2));
    }
    Network::parse(&text).unwrap()
}

/// Round trip along the whole line, from node 1 to node n and back.
pub fn line_round_trip(net: &Network) -> RoundTripPath {
    let nodes: Vec<usize> = (0..net.node_count()).collect();
    RoundTripPath::mirror(OneWayPath::from_nodes(net, nodes).unwrap())
}

pub fn random_plan<R: Rng>(rng: &mut R, n: usize, p: f64) -> StationPlan {
    StationPlan::from_mask((0..n).map(|_| rng.gen_bool(p)).collect())
}

/// Random instance on `n` nodes with `extra` links beyond a spanning tree,
/// random probabilities, unit costs and the given budget.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, extra: usize, k: usize, budget: f64) -> Instance {
    let net = Arc::new(random_network(rng, n, extra, 60));
    let cat = Arc::new(build_catalog(&net, k, None).unwrap());
    let range = rng.gen_range(40.0..140.0_f64).round();
    let probs = (0..n).map(|_| (rng.gen::<f64>() * 1000.0).round() / 1000.0).collect();
    Instance::new(net, cat, VehicleSpec::full(range).unwrap())
        .unwrap()
        .with_probabilities(probs)
        .unwrap()
        .with_budget(budget)
        .unwrap()
}

pub fn sioux_falls(k: usize, range: f64, budget: f64) -> Instance {
    afs_core::dataset::sioux_falls_instance(k, VehicleSpec::full(range).unwrap())
        .unwrap()
        .with_budget(budget)
        .unwrap()
}
