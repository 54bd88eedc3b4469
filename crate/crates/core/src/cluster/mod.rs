//! Resonance clusters: the solution hypergraph, its connected components
//! and their isomorphism classes.

mod export;
mod graph;
mod iso;

pub use export::{classes_json, export_graph, GraphFormat};
pub use graph::{
    build_cluster_graph, components, vertex_roles, ClusterGraph, EdgeKind, Hyperedge, Role,
};
pub use iso::{
    canonical_labeling, certificate, iso_classes, isomorphic_exhaustive, shape_tag, Certificate,
    ClusterClass, EXACT_LIMIT,
};
