use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::network::{Network, NodeId, LENGTH_EPS};
use super::paths::{k_shortest_paths_ix, OneWayPath, RoundTripPath};
use super::{CatalogError, PathError};

pub const CATALOG_SCHEMA: &str = "afs-catalog/v1";

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub origin: usize,
    pub destination: usize,
    pub paths: Vec<RoundTripPath>,
}

/// Deviation paths for every ordered origin-destination pair.
///
/// Entries are stored in (origin, destination) order of dense indices and
/// each path list is sorted by one-way length.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCatalog {
    k: usize,
    tolerance: Option<f64>,
    node_ids: Vec<NodeId>,
    entries: Vec<CatalogEntry>,
}

/// Generates the catalog over all ordered pairs of distinct nodes.
pub fn build_catalog(net: &Network, k: usize, tolerance: Option<f64>) -> Result<PathCatalog, PathError> {
    let n = net.node_count();
    let entries: Result<Vec<Vec<CatalogEntry>>, PathError> = (0..n)
        .into_par_iter()
        .map(|r| {
            (0..n)
                .filter(|&s| s != r)
                .map(|s| {
                    let paths = k_shortest_paths_ix(net, r, s, k, tolerance)?;
                    Ok(CatalogEntry {
                        origin: r,
                        destination: s,
                        paths: paths.into_iter().map(RoundTripPath::mirror).collect(),
                    })
                })
                .collect()
        })
        .collect();
    Ok(PathCatalog {
        k,
        tolerance,
        node_ids: net.node_ids().to_vec(),
        entries: entries?.into_iter().flatten().collect(),
    })
}

impl PathCatalog {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tolerance(&self) -> Option<f64> {
        self.tolerance
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn path_count(&self) -> usize {
        self.entries.iter().map(|e| e.paths.len()).sum()
    }

    /// Paths for the pair `(r, s)` given as dense indices.
    pub fn paths(&self, r: usize, s: usize) -> &[RoundTripPath] {
        assert_ne!(r, s, "no catalog entry for a self pair");
        let n = self.node_ids.len();
        let idx = r * (n - 1) + if s < r { s } else { s - 1 };
        &self.entries[idx].paths
    }

    /// Keeps only the first `k` paths of every pair.
    pub fn truncated(&self, k: usize) -> PathCatalog {
        let k = k.min(self.k).max(1);
        PathCatalog {
            k,
            tolerance: self.tolerance,
            node_ids: self.node_ids.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| CatalogEntry {
                    origin: e.origin,
                    destination: e.destination,
                    paths: e.paths.iter().take(k).cloned().collect(),
                })
                .collect(),
        }
    }

    pub fn is_compatible_with(&self, net: &Network) -> bool {
        self.node_ids == net.node_ids()
    }

    pub fn to_json(&self) -> String {
        let file = CatalogFile {
            schema: CATALOG_SCHEMA.to_string(),
            k: self.k,
            tolerance: self.tolerance,
            node_ids: self.node_ids.clone(),
            pairs: self
                .entries
                .iter()
                .map(|e| PairRecord {
                    origin: self.node_ids[e.origin],
                    destination: self.node_ids[e.destination],
                    paths: e
                        .paths
                        .iter()
                        .map(|p| PathRecord {
                            nodes: p.outbound().nodes().iter().map(|&ix| self.node_ids[ix]).collect(),
                            prefix: p.outbound().prefix().to_vec(),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("catalog serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let file: CatalogFile = serde_json::from_str(text)?;
        if file.schema != CATALOG_SCHEMA {
            return Err(CatalogError::Schema(file.schema));
        }
        let index = |id: NodeId| -> Result<usize, CatalogError> {
            file.node_ids
                .binary_search(&id)
                .map_err(|_| CatalogError::Invalid(format!("unknown node {id}")))
        };
        if file.node_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CatalogError::Invalid("node ids must be strictly ascending".into()));
        }
        let n = file.node_ids.len();
        let expected = n * n.saturating_sub(1);
        if file.pairs.len() != expected {
            return Err(CatalogError::Invalid(format!(
                "expected {expected} pairs, found {}",
                file.pairs.len()
            )));
        }
        let mut entries = Vec::with_capacity(file.pairs.len());
        let mut order = (0..n).flat_map(|r| (0..n).filter(move |&s| s != r).map(move |s| (r, s)));
        for pair in file.pairs {
            let r = index(pair.origin)?;
            let s = index(pair.destination)?;
            if order.next() != Some((r, s)) {
                return Err(CatalogError::Invalid(format!(
                    "pair ({}, {}) out of order",
                    pair.origin, pair.destination
                )));
            }
            if pair.paths.is_empty() || pair.paths.len() > file.k {
                return Err(CatalogError::Invalid(format!(
                    "pair ({}, {}) has {} paths",
                    pair.origin,
                    pair.destination,
                    pair.paths.len()
                )));
            }
            let mut paths = Vec::with_capacity(pair.paths.len());
            for rec in pair.paths {
                let nodes = rec.nodes.iter().map(|&id| index(id)).collect::<Result<Vec<_>, _>>()?;
                if nodes.len() < 2 || nodes.len() != rec.prefix.len() || nodes[0] != r || *nodes.last().unwrap() != s {
                    return Err(CatalogError::Invalid(format!(
                        "malformed path for pair ({}, {})",
                        pair.origin, pair.destination
                    )));
                }
                if rec.prefix[0] != 0.0 || rec.prefix.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(CatalogError::Invalid("prefix distances must start at 0 and increase".into()));
                }
                paths.push(RoundTripPath::mirror(OneWayPath::from_parts(nodes, rec.prefix)));
            }
            if paths.windows(2).any(|w| w[1].one_way_length() + LENGTH_EPS < w[0].one_way_length()) {
                return Err(CatalogError::Invalid("paths must be sorted by length".into()));
            }
            entries.push(CatalogEntry {
                origin: r,
                destination: s,
                paths,
            });
        }
        Ok(PathCatalog {
            k: file.k,
            tolerance: file.tolerance,
            node_ids: file.node_ids,
            entries,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    schema: String,
    k: usize,
    tolerance: Option<f64>,
    node_ids: Vec<NodeId>,
    pairs: Vec<PairRecord>,
}

#[derive(Serialize, Deserialize)]
struct PairRecord {
    origin: NodeId,
    destination: NodeId,
    paths: Vec<PathRecord>,
}

#[derive(Serialize, Deserialize)]
struct PathRecord {
    nodes: Vec<NodeId>,
    prefix: Vec<f64>,
}
