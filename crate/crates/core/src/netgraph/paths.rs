use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use super::network::{Network, NodeId, LENGTH_EPS};
use super::PathError;

/// A loopless path from an origin to a destination, in dense node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct OneWayPath {
    nodes: Vec<usize>,
    prefix: Vec<f64>,
}

impl OneWayPath {
    /// Builds a path along existing links, accumulating prefix distances.
    pub fn from_nodes(net: &Network, nodes: Vec<usize>) -> Result<Self, PathError> {
        if nodes.is_empty() {
            return Err(PathError::EmptyPath);
        }
        let mut prefix = Vec::with_capacity(nodes.len());
        prefix.push(0.0);
        let mut seen = HashSet::new();
        seen.insert(nodes[0]);
        for w in nodes.windows(2) {
            let d = net
                .distance(w[0], w[1])
                .ok_or_else(|| PathError::MissingLink(net.id(w[0]), net.id(w[1])))?;
            if !seen.insert(w[1]) {
                return Err(PathError::RepeatedNode(net.id(w[1])));
            }
            prefix.push(prefix.last().unwrap() + d);
        }
        Ok(OneWayPath { nodes, prefix })
    }

    pub(crate) fn from_parts(nodes: Vec<usize>, prefix: Vec<f64>) -> Self {
        debug_assert_eq!(nodes.len(), prefix.len());
        OneWayPath { nodes, prefix }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Cumulative distance at each node, starting at 0.
    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn length(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    pub fn origin(&self) -> usize {
        self.nodes[0]
    }

    pub fn destination(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn ids(&self, net: &Network) -> Vec<NodeId> {
        self.nodes.iter().map(|&ix| net.id(ix)).collect()
    }

    /// Order by length, ties broken by node sequence.
    pub fn cmp_rank(&self, other: &Self) -> Ordering {
        cmp_rank(self.length(), &self.nodes, other.length(), &other.nodes)
    }
}

pub(crate) fn cmp_rank(la: f64, na: &[usize], lb: f64, nb: &[usize]) -> Ordering {
    if (la - lb).abs() <= LENGTH_EPS * la.abs().max(lb.abs()).max(1.0) {
        na.cmp(nb)
    } else {
        la.total_cmp(&lb)
    }
}

/// A round trip `r, ..., s, ..., r` that retraces its outbound path.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripPath {
    outbound: OneWayPath,
    nodes: Vec<usize>,
    prefix: Vec<f64>,
}

impl RoundTripPath {
    pub fn mirror(outbound: OneWayPath) -> Self {
        let hops = outbound.nodes.len() - 1;
        let total = outbound.length();
        let mut nodes = outbound.nodes.clone();
        let mut prefix = outbound.prefix.clone();
        for j in (0..hops).rev() {
            nodes.push(outbound.nodes[j]);
            prefix.push(total + (total - outbound.prefix[j]));
        }
        RoundTripPath {
            outbound,
            nodes,
            prefix,
        }
    }

    pub fn outbound(&self) -> &OneWayPath {
        &self.outbound
    }

    /// Visit sequence over the whole round trip.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn length(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    pub fn one_way_length(&self) -> f64 {
        self.outbound.length()
    }

    /// Position of the destination visit.
    pub fn midpoint(&self) -> usize {
        self.outbound.nodes.len() - 1
    }

    /// Distance of the link leaving position `pos`.
    pub fn leg(&self, pos: usize) -> f64 {
        self.prefix[pos + 1] - self.prefix[pos]
    }

    /// Membership indicator: does the trip visit `node`?
    pub fn visits(&self, node: usize) -> bool {
        self.outbound.nodes.contains(&node)
    }

    pub fn positions_of(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |&(_, &n)| n == node)
            .map(|(p, _)| p)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Removed nodes and directed arcs for spur searches.
struct Restrictions<'a> {
    banned_nodes: &'a [bool],
    banned_arcs: &'a HashSet<(usize, usize)>,
}

impl Restrictions<'_> {
    fn arc_open(&self, a: usize, b: usize) -> bool {
        !self.banned_nodes[a] && !self.banned_nodes[b] && !self.banned_arcs.contains(&(a, b))
    }
}

/// Distance from every node to `target` over arcs allowed by `limits`.
fn distances_to(net: &Network, target: usize, limits: &Restrictions) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; net.node_count()];
    if limits.banned_nodes[target] {
        return dist;
    }
    dist[target] = 0.0;
    let mut heap = BinaryHeap::from([Reverse(HeapEntry(0.0, target))]);
    while let Some(Reverse(HeapEntry(d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        // relax arcs u -> v backwards; links are symmetric so neighbors(v) lists every u
        for &(u, w) in net.neighbors(v) {
            if !limits.arc_open(u, v) {
                continue;
            }
            let nd = d + w;
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse(HeapEntry(nd, u)));
            }
        }
    }
    dist
}

/// Lexicographically smallest among the shortest `source -> target` paths.
fn lex_shortest(net: &Network, source: usize, target: usize, limits: &Restrictions) -> Option<Vec<usize>> {
    let dist = distances_to(net, target, limits);
    if !dist[source].is_finite() {
        return None;
    }
    let mut path = vec![source];
    let mut cur = source;
    while cur != target {
        let here = dist[cur];
        let tol = LENGTH_EPS * here.max(1.0);
        // neighbors are sorted by index, so the first tight arc is the lexicographic choice
        let next = net
            .neighbors(cur)
            .iter()
            .find(|&&(v, w)| limits.arc_open(cur, v) && dist[v].is_finite() && (dist[v] + w - here).abs() <= tol)
            .map(|&(v, _)| v)?;
        path.push(next);
        cur = next;
    }
    Some(path)
}

fn resolve(net: &Network, id: NodeId) -> Result<usize, PathError> {
    net.index_of(id).ok_or(PathError::UnknownNode(id))
}

/// Shortest loopless path between two node ids.
///
/// Among equally short paths the lexicographically smallest node sequence
/// wins.
pub fn shortest_path(net: &Network, origin: NodeId, destination: NodeId) -> Result<OneWayPath, PathError> {
    let r = resolve(net, origin)?;
    let s = resolve(net, destination)?;
    shortest_path_ix(net, r, s)
}

pub(crate) fn shortest_path_ix(net: &Network, r: usize, s: usize) -> Result<OneWayPath, PathError> {
    if r == s {
        return Err(PathError::SameEndpoints(net.id(r)));
    }
    let banned_nodes = vec![false; net.node_count()];
    let banned_arcs = HashSet::new();
    let limits = Restrictions {
        banned_nodes: &banned_nodes,
        banned_arcs: &banned_arcs,
    };
    let nodes = lex_shortest(net, r, s, &limits).ok_or(PathError::Unreachable(net.id(r), net.id(s)))?;
    OneWayPath::from_nodes(net, nodes)
}

/// Up to `k` loopless paths in (length, node sequence) order.
///
/// This is Yen's deviation scheme with every spur search returning the
/// lexicographically smallest shortest spur, which makes the result the
/// first `k` simple paths under that total order. With `tolerance` set,
/// paths longer than `(1 + tolerance)` times the shortest are dropped.
pub fn k_shortest_paths(
    net: &Network,
    origin: NodeId,
    destination: NodeId,
    k: usize,
    tolerance: Option<f64>,
) -> Result<Vec<OneWayPath>, PathError> {
    let r = resolve(net, origin)?;
    let s = resolve(net, destination)?;
    k_shortest_paths_ix(net, r, s, k, tolerance)
}

pub(crate) fn k_shortest_paths_ix(
    net: &Network,
    r: usize,
    s: usize,
    k: usize,
    tolerance: Option<f64>,
) -> Result<Vec<OneWayPath>, PathError> {
    if k == 0 {
        return Err(PathError::ZeroK);
    }
    let first = shortest_path_ix(net, r, s)?;
    let cap = tolerance.map(|t| first.length() * (1.0 + t) + LENGTH_EPS * first.length().max(1.0));
    let mut found = vec![first];
    let mut candidates: Vec<OneWayPath> = Vec::new();
    let mut banned_nodes = vec![false; net.node_count()];
    let mut banned_arcs = HashSet::new();

    while found.len() < k {
        let last = found.last().unwrap().nodes.clone();
        for i in 0..last.len() - 1 {
            let spur = last[i];
            let root = &last[..=i];
            banned_arcs.clear();
            for p in &found {
                if p.nodes.len() > i + 1 && &p.nodes[..=i] == root {
                    banned_arcs.insert((p.nodes[i], p.nodes[i + 1]));
                }
            }
            banned_nodes.iter_mut().for_each(|b| *b = false);
            for &n in &root[..i] {
                banned_nodes[n] = true;
            }
            let limits = Restrictions {
                banned_nodes: &banned_nodes,
                banned_arcs: &banned_arcs,
            };
            let Some(spur_path) = lex_shortest(net, spur, s, &limits) else {
                continue;
            };
            let mut nodes = root[..i].to_vec();
            nodes.extend(spur_path);
            if found.iter().chain(candidates.iter()).any(|p| p.nodes == nodes) {
                continue;
            }
            candidates.push(OneWayPath::from_nodes(net, nodes)?);
        }
        let Some(best) = candidates
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp_rank(b.1))
            .map(|(i, _)| i)
        else {
            break;
        };
        let next = candidates.swap_remove(best);
        if cap.is_some_and(|c| next.length() > c) {
            break;
        }
        found.push(next);
    }
    Ok(found)
}
