use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::NetworkError;

/// External node identifier as it appears in input files.
pub type NodeId = u32;

/// Tolerance used when comparing path lengths and distances.
pub(crate) const LENGTH_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub from: NodeId,
    pub to: NodeId,
    pub distance: f64,
}

/// An undirected road network.
///
/// Nodes are kept sorted by id, so the dense index order used by every
/// algorithm in this crate coincides with the id order. That makes
/// lexicographic comparisons on index sequences equal to comparisons on
/// id sequences.
#[derive(Debug, Clone)]
pub struct Network {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    links: Vec<Link>,
    symmetric: bool,
    // neighbors sorted by dense index
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Network {
    /// Builds a network from explicit node ids and links.
    ///
    /// With `symmetric` set, every link is usable in both directions. Without
    /// it, every link must be accompanied by its reverse with the same
    /// distance, since round trips retrace the outbound path.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        links: Vec<Link>,
        symmetric: bool,
    ) -> Result<Self, NetworkError> {
        let mut ids: Vec<NodeId> = Vec::new();
        let mut seen = HashSet::new();
        for id in nodes {
            if !seen.insert(id) {
                return Err(NetworkError::DuplicateNode(id));
            }
            ids.push(id);
        }
        ids.sort_unstable();
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let mut arcs: HashMap<(usize, usize), f64> = HashMap::new();
        for link in &links {
            let from = *index.get(&link.from).ok_or(NetworkError::UnknownNode(link.from))?;
            let to = *index.get(&link.to).ok_or(NetworkError::UnknownNode(link.to))?;
            if from == to {
                return Err(NetworkError::SelfLoop(link.from));
            }
            if !(link.distance > 0.0) || !link.distance.is_finite() {
                return Err(NetworkError::NonPositiveDistance {
                    from: link.from,
                    to: link.to,
                    distance: link.distance,
                });
            }
            let duplicate = if symmetric {
                arcs.contains_key(&(from, to)) || arcs.contains_key(&(to, from))
            } else {
                arcs.contains_key(&(from, to))
            };
            if duplicate {
                return Err(NetworkError::DuplicateLink(link.from, link.to));
            }
            arcs.insert((from, to), link.distance);
        }

        if symmetric {
            let forward: Vec<_> = arcs.iter().map(|(&(a, b), &d)| ((b, a), d)).collect();
            arcs.extend(forward);
        } else {
            for (&(a, b), &d) in &arcs {
                match arcs.get(&(b, a)) {
                    Some(&back) if (back - d).abs() <= LENGTH_EPS => {}
                    _ => return Err(NetworkError::Asymmetric(ids[a], ids[b])),
                }
            }
        }

        let mut adjacency = vec![Vec::new(); ids.len()];
        for (&(a, b), &d) in &arcs {
            adjacency[a].push((b, d));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(b, _)| b);
        }

        let net = Network {
            ids,
            index,
            links,
            symmetric,
            adjacency,
        };
        net.check_connected()?;
        Ok(net)
    }

    fn check_connected(&self) -> Result<(), NetworkError> {
        if self.ids.is_empty() {
            return Err(NetworkError::Empty);
        }
        let mut seen = vec![false; self.ids.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(missing) => Err(NetworkError::Disconnected {
                unreachable: self.ids[missing],
                from: self.ids[0],
            }),
            None => Ok(()),
        }
    }

    /// Parses the plain-text link list format.
    ///
    /// ```text
    /// # comment
    /// nodes=3 links=2 symmetric=1
    /// 1 2 5
    /// 2 3 7
    /// ```
    ///
    /// Nodes are numbered `1..=nodes`.
    pub fn parse(source: &str) -> Result<Self, NetworkError> {
        let mut header: Option<(usize, usize, bool)> = None;
        let mut links = Vec::new();
        for (lineno, raw) in source.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let syntax = |msg: String| NetworkError::Syntax { line: lineno, msg };
            if header.is_none() {
                let mut nodes = None;
                let mut count = None;
                let mut symmetric = None;
                for field in line.split_whitespace() {
                    let (key, value) = field
                        .split_once('=')
                        .ok_or_else(|| syntax(format!("expected key=value in header, got `{field}`")))?;
                    match key {
                        "nodes" => nodes = Some(parse_num::<usize>(value).map_err(syntax)?),
                        "links" => count = Some(parse_num::<usize>(value).map_err(syntax)?),
                        "symmetric" => {
                            symmetric = Some(match value {
                                "0" => false,
                                "1" => true,
                                other => return Err(syntax(format!("symmetric must be 0 or 1, got `{other}`"))),
                            })
                        }
                        other => return Err(syntax(format!("unknown header key `{other}`"))),
                    }
                }
                match (nodes, count, symmetric) {
                    (Some(n), Some(m), Some(s)) => header = Some((n, m, s)),
                    _ => return Err(syntax("header must define nodes, links and symmetric".into())),
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(syntax(format!("expected `i j distance`, got `{line}`")));
            }
            links.push(Link {
                from: parse_num(fields[0]).map_err(syntax)?,
                to: parse_num(fields[1]).map_err(syntax)?,
                distance: parse_num(fields[2]).map_err(syntax)?,
            });
        }
        let (nodes, count, symmetric) = header.ok_or(NetworkError::MissingHeader)?;
        if links.len() != count {
            return Err(NetworkError::LinkCountMismatch {
                declared: count,
                found: links.len(),
            });
        }
        let nodes = u32::try_from(nodes).map_err(|_| NetworkError::Syntax {
            line: 1,
            msg: "node count too large".into(),
        })?;
        Network::new(1..=nodes, links, symmetric)
    }

    /// Renders the network back into the link list format.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "nodes={} links={} symmetric={}\n",
            self.ids.len(),
            self.links.len(),
            u8::from(self.symmetric)
        );
        for l in &self.links {
            out.push_str(&format!("{} {} {}\n", l.from, l.to, l.distance));
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of links as declared (one row per link).
    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Node ids in ascending order; position is the dense index.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, ix: usize) -> NodeId {
        self.ids[ix]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn neighbors(&self, ix: usize) -> &[(usize, f64)] {
        &self.adjacency[ix]
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(v, _)| v)
            .ok()
            .map(|pos| self.adjacency[a][pos].1)
    }

    pub fn max_link_distance(&self) -> f64 {
        self.links.iter().map(|l| l.distance).fold(0.0, f64::max)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Network({} nodes, {} links)", self.node_count(), self.link_count())
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse::<T>().map_err(|_| format!("invalid number `{s}`"))
}
