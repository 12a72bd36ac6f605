//! Embedded Sioux Falls test network and demand probabilities.
//!
//! The network is the 24-node, 76-link LeBlanc benchmark with its standard
//! link lengths multiplied by ten and read as miles. The per-node
//! probabilities are the published EV-adopter values.
//!
//! Note: the published per-node coverage table for three stations prints
//! 0.5341 for node 15 and 0.0500 for node 24, while the probability table
//! prints 0.5431 and 0.0550. The values shipped here follow the probability
//! table.

use std::sync::Arc;

use thiserror::Error;

use crate::coverage::{CoverageError, Instance};
use crate::netgraph::{build_catalog, Network, NetworkError, NodeId, PathError};
use crate::refuel::VehicleSpec;

pub const SIOUX_FALLS_NET: &str = include_str!("../data/sioux_falls.net");
pub const SIOUX_FALLS_PROBS: &str = include_str!("../data/sioux_falls_probs.csv");

/// Vehicle range of the baseline experiments, in miles.
pub const BASELINE_RANGE: f64 = 100.0;
/// Deviation paths per pair in the baseline experiments.
pub const BASELINE_K: usize = 3;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error("probabilities line {line}: {msg}")]
    Probabilities { line: usize, msg: String },
}

pub fn sioux_falls_network() -> Network {
    Network::parse(SIOUX_FALLS_NET).expect("embedded network is valid")
}

/// Probability per dense node index.
pub fn sioux_falls_probabilities(net: &Network) -> Vec<f64> {
    load_probabilities(SIOUX_FALLS_PROBS, net).expect("embedded probabilities are valid")
}

/// Parses `node_id,probability` rows (a header line is optional) into a
/// vector indexed by dense node index. Every node must be listed once.
pub fn load_probabilities(text: &str, net: &Network) -> Result<Vec<f64>, DatasetError> {
    let mut values: Vec<Option<f64>> = vec![None; net.node_count()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| DatasetError::Probabilities { line: lineno + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((node, prob)) = line.split_once(',') else {
            return Err(err(format!("expected `node_id,probability`, got `{line}`")));
        };
        let (node, prob) = (node.trim(), prob.trim());
        if lineno == 0 && node.parse::<NodeId>().is_err() {
            continue; // header
        }
        let id: NodeId = node.parse().map_err(|_| err(format!("invalid node id `{node}`")))?;
        let p: f64 = prob.parse().map_err(|_| err(format!("invalid probability `{prob}`")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(err(format!("probability {p} outside [0, 1]")));
        }
        let ix = net.index_of(id).ok_or_else(|| err(format!("unknown node {id}")))?;
        if values[ix].replace(p).is_some() {
            return Err(err(format!("node {id} listed twice")));
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(ix, v)| {
            v.ok_or_else(|| DatasetError::Probabilities {
                line: 0,
                msg: format!("node {} has no probability", net.id(ix)),
            })
        })
        .collect()
}

/// Sioux Falls with the published probabilities, unit costs, every node a
/// candidate, `k` deviation paths per pair and the given vehicle. The
/// budget defaults to opening every node.
pub fn sioux_falls_instance(k: usize, vehicle: VehicleSpec) -> Result<Instance, DatasetError> {
    let net = Arc::new(sioux_falls_network());
    let catalog = Arc::new(build_catalog(&net, k, None)?);
    let probs = sioux_falls_probabilities(&net);
    Ok(Instance::new(net, catalog, vehicle)?.with_probabilities(probs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn network_shape() {
        let net = sioux_falls_network();
        assert_eq!(net.node_count(), 24);
        assert_eq!(net.link_count(), 76);
        assert!(!net.is_symmetric());
    }

    #[test]
    fn probabilities_match_table() {
        let net = sioux_falls_network();
        let p = sioux_falls_probabilities(&net);
        assert_eq!(p.len(), 24);
        assert_eq!(p[0], 0.7689);
        assert_eq!(p[3], 0.9899);
        assert_eq!(p[14], 0.5431);
        assert_eq!(p[23], 0.0550);
        let sum: f64 = p.iter().sum();
        assert!((sum - 11.1616).abs() < 1e-9);
    }

    #[test]
    fn probability_parse_errors() {
        let net = Network::parse("nodes=2 links=1 symmetric=1\n1 2 1\n").unwrap();
        assert_eq!(load_probabilities("node_id,probability\n1,0.5\n2,0.25\n", &net).unwrap(), vec![0.5, 0.25]);
        assert_eq!(load_probabilities("2,0.25\n1,0.5\n", &net).unwrap(), vec![0.5, 0.25]);
        assert!(load_probabilities("1,0.5\n", &net).is_err());
        assert!(load_probabilities("1,0.5\n1,0.5\n2,0.1\n", &net).is_err());
        assert!(load_probabilities("1,1.5\n2,0.1\n", &net).is_err());
        assert!(load_probabilities("1,0.5\n3,0.1\n", &net).is_err());
        assert!(load_probabilities("1;0.5\n", &net).is_err());
    }
}
