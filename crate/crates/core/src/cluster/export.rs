//! DOT, GraphML and JSON renderings of cluster graphs.

use std::fmt::Write;

use serde::Serialize;

use super::graph::{ClusterGraph, EdgeKind, Role};
use super::iso::ClusterClass;
use crate::lattice::WaveVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    GraphMl,
    Json,
}

impl std::str::FromStr for GraphFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(GraphFormat::Dot),
            "graphml" => Ok(GraphFormat::GraphMl),
            "json" => Ok(GraphFormat::Json),
            _ => Err(Error::Usage(format!(
                "unknown graph format '{s}' (dot, graphml or json)"
            ))),
        }
    }
}

pub fn export_graph(g: &ClusterGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Dot => to_dot(g),
        GraphFormat::GraphMl => to_graphml(g),
        GraphFormat::Json => to_json(g),
    }
}

fn label(k: WaveVector) -> String {
    format!("{},{}", k.m, k.n)
}

fn shape(r: Role) -> &'static str {
    match r {
        Role::AngleOnly => "box",
        Role::ScaleOnly => "ellipse",
        Role::Both => "doublecircle",
        Role::Plain => "circle",
    }
}

/// Member pairs of each hyperedge, tagged with whether they share a side.
fn pairs(g: &ClusterGraph) -> Vec<(usize, u32, u32, bool)> {
    let mut out = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let ms: Vec<(u32, usize)> = e
            .lhs
            .iter()
            .map(|&v| (v, 0))
            .chain(e.rhs.iter().map(|&v| (v, 1)))
            .collect();
        for a in 0..ms.len() {
            for b in a + 1..ms.len() {
                if ms[a].0 != ms[b].0 {
                    out.push((i, ms[a].0, ms[b].0, ms[a].1 == ms[b].1));
                }
            }
        }
    }
    out
}

/// Nodes are labelled `m,n` and shaped by role; every hyperedge is drawn as
/// the pairs of its members, solid within a side and dashed across.
fn to_dot(g: &ClusterGraph) -> String {
    let mut s = String::from("graph resonances {\n  node [fontsize=10];\n");
    for (k, r) in g.vertices.iter().zip(&g.roles) {
        let _ = writeln!(
            s,
            "  \"{}\" [shape={}, role=\"{}\"];",
            label(*k),
            shape(*r),
            r.name()
        );
    }
    for (e, a, b, same) in pairs(g) {
        let kind = g.edges[e].kind;
        let style = if same { "solid" } else { "dashed" };
        let _ = writeln!(
            s,
            "  \"{}\" -- \"{}\" [style={style}, solution={e}, kind=\"{}\"];",
            label(g.vertices[a as usize]),
            label(g.vertices[b as usize]),
            kind_name(kind)
        );
    }
    s.push_str("}\n");
    s
}

fn kind_name(k: EdgeKind) -> &'static str {
    match k {
        EdgeKind::Triad => "triad",
        EdgeKind::Scale => "scale",
        EdgeKind::Angle => "angle",
    }
}

fn to_graphml(g: &ClusterGraph) -> String {
    let mut s = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        "  <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n",
        "  <key id=\"m\" for=\"node\" attr.name=\"m\" attr.type=\"int\"/>\n",
        "  <key id=\"n\" for=\"node\" attr.name=\"n\" attr.type=\"int\"/>\n",
        "  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n",
        "  <key id=\"solution\" for=\"edge\" attr.name=\"solution\" attr.type=\"int\"/>\n",
        "  <key id=\"same_side\" for=\"edge\" attr.name=\"same_side\" attr.type=\"boolean\"/>\n",
        "  <graph id=\"resonances\" edgedefault=\"undirected\">\n"
    ));
    for (i, (k, r)) in g.vertices.iter().zip(&g.roles).enumerate() {
        let _ = writeln!(
            s,
            "    <node id=\"v{i}\"><data key=\"role\">{}</data><data key=\"m\">{}</data><data key=\"n\">{}</data></node>",
            r.name(),
            k.m,
            k.n
        );
    }
    for (j, (e, a, b, same)) in pairs(g).into_iter().enumerate() {
        let _ = writeln!(
            s,
            "    <edge id=\"e{j}\" source=\"v{a}\" target=\"v{b}\"><data key=\"kind\">{}</data><data key=\"solution\">{e}</data><data key=\"same_side\">{same}</data></edge>",
            kind_name(g.edges[e].kind)
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

#[derive(Serialize)]
struct VertexJson {
    k: WaveVector,
    role: Role,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    disp: crate::lattice::DispersionId,
    vertices: Vec<VertexJson>,
    hyperedges: &'a [super::graph::Hyperedge],
}

fn to_json(g: &ClusterGraph) -> String {
    let vertices = g
        .vertices
        .iter()
        .zip(&g.roles)
        .map(|(&k, &role)| VertexJson { k, role })
        .collect();
    serde_json::to_string(&GraphJson {
        disp: g.disp,
        vertices,
        hyperedges: &g.edges,
    })
    .expect("graph serializes")
}

/// One JSON object per class: `{class_id, tag, vertices, hyperedges, multiplicity, ...}`.
pub fn classes_json(classes: &[ClusterClass]) -> String {
    serde_json::to_string_pretty(classes).expect("classes serialize")
}
