//! Road network representation, shortest paths and the deviation-path
//! catalog.

mod catalog;
mod network;
mod paths;

use thiserror::Error;

pub use catalog::{build_catalog, CatalogEntry, PathCatalog, CATALOG_SCHEMA};
pub use network::{Link, Network, NodeId};
pub use paths::{k_shortest_paths, shortest_path, OneWayPath, RoundTripPath};

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `nodes=.. links=.. symmetric=..` header")]
    MissingHeader,
    #[error("header declares {declared} links but {found} were listed")]
    LinkCountMismatch { declared: usize, found: usize },
    #[error("network has no nodes")]
    Empty,
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("duplicate link {0} -> {1}")]
    DuplicateLink(NodeId, NodeId),
    #[error("link {from} -> {to} has nonpositive distance {distance}")]
    NonPositiveDistance { from: NodeId, to: NodeId, distance: f64 },
    #[error("link references unknown node {0}")]
    UnknownNode(NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("link {0} -> {1} has no reverse link with the same distance")]
    Asymmetric(NodeId, NodeId),
    #[error("network is disconnected: node {unreachable} cannot be reached from node {from}")]
    Disconnected { unreachable: NodeId, from: NodeId },
}

#[derive(Debug, Error)]
pub enum PathError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("origin and destination are both {0}")]
    SameEndpoints(NodeId),
    #[error("node {1} is unreachable from node {0}")]
    Unreachable(NodeId, NodeId),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("empty path")]
    EmptyPath,
    #[error("no link {0} -> {1}")]
    MissingLink(NodeId, NodeId),
    #[error("path repeats node {0}")]
    RepeatedNode(NodeId),
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("malformed catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported catalog schema `{0}`")]
    Schema(String),
    #[error("invalid catalog: {0}")]
    Invalid(String),
}
