mod common;

use std::cmp::Ordering;

use afs_core::dataset::{sioux_falls_network, SIOUX_FALLS_NET};
use afs_core::netgraph::{k_shortest_paths, shortest_path, NetworkError};
use afs_core::{build_catalog, Network, NodeId, PathCatalog};
use common::random_network;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All-pairs shortest distances by Floyd-Warshall over the raw link rows.
fn floyd_warshall(text: &str) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    let mut n = 0;
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("nodes=") {
            n = rest.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        let f: Vec<f64> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        rows.push((f[0] as usize - 1, f[1] as usize - 1, f[2]));
    }
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (a, b, w) in rows {
        d[a][b] = d[a][b].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every simple path from `r` to `s`, ranked by length then node sequence.
fn all_simple_paths(net: &Network, r: usize, s: usize) -> Vec<(f64, Vec<NodeId>)> {
    fn walk(net: &Network, at: usize, s: usize, len: f64, stack: &mut Vec<usize>, out: &mut Vec<(f64, Vec<NodeId>)>) {
        if at == s {
            out.push((len, stack.iter().map(|&i| net.id(i)).collect()));
            return;
        }
        for &(next, d) in net.neighbors(at) {
            if !stack.contains(&next) {
                stack.push(next);
                walk(net, next, s, len + d, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(net, r, s, 0.0, &mut vec![r], &mut out);
    out.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= 1e-9 {
            a.1.cmp(&b.1)
        } else {
            a.0.partial_cmp(&b.0).unwrap()
        }
    });
    out
}

#[test]
fn loads_minimal_network() {
    let net = Network::parse("nodes=3 links=2 symmetric=1\n1 2 5\n2 3 7\n").unwrap();
    assert_eq!(net.node_count(), 3);
    assert_eq!(net.link_count(), 2);
}

#[test]
fn rejects_disconnected_network() {
    let err = Network::parse("nodes=3 links=1 symmetric=1\n1 2 5\n").unwrap_err();
    assert!(matches!(err, NetworkError::Disconnected { .. }), "{err:?}");
}

#[test]
fn distinct_validation_errors() {
    let cases = [
        ("nodes=2 links=2 symmetric=1\n1 2 5\n1 2 6\n", "duplicate"),
        ("nodes=2 links=1 symmetric=1\n1 2 0\n", "nonpositive"),
        ("nodes=2 links=1 symmetric=1\n1 3 5\n", "unknown"),
        ("nodes=2 links=1 symmetric=1\n1 1 5\n", "self loop"),
    ];
    let errs: Vec<NetworkError> = cases.iter().map(|(t, _)| Network::parse(t).unwrap_err()).collect();
    assert!(matches!(errs[0], NetworkError::DuplicateLink(..)), "{:?}", errs[0]);
    assert!(matches!(errs[1], NetworkError::NonPositiveDistance { .. }), "{:?}", errs[1]);
    assert!(matches!(errs[2], NetworkError::UnknownNode(..)), "{:?}", errs[2]);
    assert!(matches!(errs[3], NetworkError::SelfLoop(..)), "{:?}", errs[3]);
}

#[test]
fn sioux_falls_shape() {
    let net = sioux_falls_network();
    assert_eq!(net.node_count(), 24);
    assert_eq!(net.link_count(), 76);
}

#[test]
fn sioux_falls_1_to_20_matches_floyd_warshall() {
    let oracle = floyd_warshall(SIOUX_FALLS_NET);
    let net = sioux_falls_network();
    let path = shortest_path(&net, 1, 20).unwrap();
    assert!((path.length() - oracle[0][19]).abs() < 1e-9);
    assert_eq!(*path.ids(&net).first().unwrap(), 1);
    assert_eq!(*path.ids(&net).last().unwrap(), 20);
}

#[test]
fn sioux_falls_all_pairs_match_floyd_warshall() {
    let oracle = floyd_warshall(SIOUX_FALLS_NET);
    let net = sioux_falls_network();
    for r in 1..=24u32 {
        for s in 1..=24u32 {
            if r != s {
                let len = shortest_path(&net, r, s).unwrap().length();
                assert!((len - oracle[r as usize - 1][s as usize - 1]).abs() < 1e-9, "({r},{s})");
            }
        }
    }
}

#[test]
fn line_and_triangle_examples() {
    let line = Network::parse("nodes=3 links=2 symmetric=1\n1 2 5\n2 3 5\n").unwrap();
    let p = shortest_path(&line, 1, 3).unwrap();
    assert_eq!(p.ids(&line), vec![1, 2, 3]);
    assert_eq!(p.length(), 10.0);

    let tri = Network::parse("nodes=3 links=3 symmetric=1\n1 2 4\n2 3 4\n1 3 9\n").unwrap();
    let ks = k_shortest_paths(&tri, 1, 3, 2, None).unwrap();
    assert_eq!(ks.len(), 2);
    assert_eq!((ks[0].ids(&tri), ks[0].length()), (vec![1, 2, 3], 8.0));
    assert_eq!((ks[1].ids(&tri), ks[1].length()), (vec![1, 3], 9.0));
}

#[test]
fn grid_corner_to_corner_top_three() {
    // 3x3 grid, node (row, col) has id 3*row + col + 1
    let mut rows = Vec::new();
    for r in 0..3u32 {
        for c in 0..3u32 {
            let id = 3 * r + c + 1;
            if c < 2 {
                rows.push(format!("{id} {} 1", id + 1));
            }
            if r < 2 {
                rows.push(format!("{id} {} 1", id + 3));
            }
        }
    }
    let net = Network::parse(&format!("nodes=9 links={} symmetric=1\n{}\n", rows.len(), rows.join("\n"))).unwrap();
    let oracle = all_simple_paths(&net, 0, 8);
    let ks = k_shortest_paths(&net, 1, 9, 3, None).unwrap();
    assert_eq!(ks.len(), 3);
    for (p, (len, ids)) in ks.iter().zip(&oracle) {
        assert_eq!(p.length(), 4.0);
        assert_eq!(p.length(), *len);
        assert_eq!(&p.ids(&net), ids);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_shortest_equals_exhaustive_enumeration(seed in any::<u64>(), n in 2usize..=8, extra in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, n, extra, 9);
        for r in 0..n {
            for s in 0..n {
                if r == s {
                    continue;
                }
                let oracle = all_simple_paths(&net, r, s);
                let ks = k_shortest_paths(&net, net.id(r), net.id(s), usize::MAX, None).unwrap();
                prop_assert_eq!(ks.len(), oracle.len());
                for (p, (len, ids)) in ks.iter().zip(&oracle) {
                    prop_assert!((p.length() - len).abs() < 1e-9);
                    prop_assert_eq!(&p.ids(&net), ids);
                }
            }
        }
    }

    #[test]
    fn k_one_is_shortest_path(seed in any::<u64>(), n in 2usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, n, n, 20);
        let ks = k_shortest_paths(&net, 1, n as NodeId, 1, None).unwrap();
        prop_assert_eq!(ks.len(), 1);
        prop_assert_eq!(&ks[0], &shortest_path(&net, 1, n as NodeId).unwrap());
    }

    #[test]
    fn tolerance_filter_holds(seed in any::<u64>(), tau in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, 7, 6, 9);
        let ks = k_shortest_paths(&net, 1, 7, 10, Some(tau)).unwrap();
        let all = k_shortest_paths(&net, 1, 7, 10, None).unwrap();
        let cap = ks[0].length() * (1.0 + tau) + 1e-9;
        prop_assert!(ks.iter().all(|p| p.length() <= cap));
        let expected: Vec<_> = all.iter().filter(|p| p.length() <= cap).cloned().collect();
        prop_assert_eq!(ks, expected);
    }
}

fn check_catalog_invariants(net: &Network, cat: &PathCatalog) {
    let n = net.node_count();
    assert_eq!(cat.entries().len(), n * (n - 1));
    let mut pairs = Vec::new();
    for e in cat.entries() {
        pairs.push((e.origin, e.destination));
        assert!(!e.paths.is_empty() && e.paths.len() <= cat.k());
        let shortest = shortest_path(net, net.id(e.origin), net.id(e.destination)).unwrap();
        assert!((e.paths[0].one_way_length() - shortest.length()).abs() < 1e-9);
        for w in e.paths.windows(2) {
            assert!(w[0].one_way_length() <= w[1].one_way_length() + 1e-9);
            assert_ne!(w[0].outbound().cmp_rank(w[1].outbound()), Ordering::Greater);
        }
        for p in &e.paths {
            let mid = p.midpoint();
            let prefix = p.prefix();
            assert_eq!(*prefix.last().unwrap(), 2.0 * prefix[mid]);
            assert_eq!(p.length(), 2.0 * p.one_way_length());
            assert_eq!(p.nodes().iter().filter(|&&x| x == e.destination).count(), 1);
            assert_eq!(p.nodes()[mid], e.destination);
            let nodes = p.nodes();
            for i in 0..nodes.len() {
                assert_eq!(nodes[i], nodes[nodes.len() - 1 - i]);
            }
            assert_eq!(p.outbound().origin(), e.origin);
        }
    }
    let mut sorted = pairs.clone();
    sorted.sort();
    assert_eq!(pairs, sorted);
}

#[test]
fn sioux_falls_catalog() {
    let net = sioux_falls_network();
    let cat = build_catalog(&net, 3, None).unwrap();
    assert_eq!(cat.entries().len(), 552);
    check_catalog_invariants(&net, &cat);
    assert!(cat.entries().iter().all(|e| e.paths.len() == 3));

    let again = build_catalog(&net, 3, None).unwrap();
    assert_eq!(cat, again);
    assert_eq!(cat.to_json(), again.to_json());

    let reloaded = PathCatalog::from_json(&cat.to_json()).unwrap();
    assert_eq!(reloaded, cat);
    assert_eq!(reloaded.to_json(), cat.to_json());
}

#[test]
fn three_node_line_catalog() {
    let net = Network::parse("nodes=3 links=2 symmetric=1\n1 2 5\n2 3 5\n").unwrap();
    let cat = build_catalog(&net, 3, None).unwrap();
    assert_eq!(cat.entries().len(), 6);
    assert!(cat.entries().iter().all(|e| e.paths.len() == 1));
    check_catalog_invariants(&net, &cat);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_catalogs_hold_invariants(seed in any::<u64>(), n in 2usize..=9, k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, n, n, 30);
        let cat = build_catalog(&net, k, None).unwrap();
        check_catalog_invariants(&net, &cat);
        prop_assert_eq!(PathCatalog::from_json(&cat.to_json()).unwrap(), cat);
    }
}
