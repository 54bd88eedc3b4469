use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::{DispersionId, WaveVector};
use crate::solver::{Kind, ResonanceSet, Solutions};
use crate::{Error, Result};

/// Vertex type in a resonance graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    AngleOnly,
    ScaleOnly,
    Both,
    /// Three-wave vertices carry no transport distinction.
    Plain,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::AngleOnly => "angle-only",
            Role::ScaleOnly => "scale-only",
            Role::Both => "both",
            Role::Plain => "plain",
        }
    }

    /// Role of a four-wave vertex from its participation degrees.
    pub fn from_degrees(scale: u64, angle: u64) -> Option<Role> {
        match (scale > 0, angle > 0) {
            (true, true) => Some(Role::Both),
            (true, false) => Some(Role::ScaleOnly),
            (false, true) => Some(Role::AngleOnly),
            (false, false) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Triad,
    Scale,
    Angle,
}

impl EdgeKind {
    pub(crate) fn code(self) -> u32 {
        match self {
            EdgeKind::Triad => 0,
            EdgeKind::Scale => 1,
            EdgeKind::Angle => 2,
        }
    }
}

/// One solution as a hyperedge over vertex indices. For a triad `lhs` holds
/// the summands and `rhs` the sum; for a quartet they are the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hyperedge {
    pub kind: EdgeKind,
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

impl Hyperedge {
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.lhs.iter().chain(self.rhs.iter()).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterGraph {
    pub disp: DispersionId,
    pub vertices: Vec<WaveVector>,
    pub roles: Vec<Role>,
    pub edges: Vec<Hyperedge>,
}

impl ClusterGraph {
    pub fn empty(disp: DispersionId) -> Self {
        ClusterGraph {
            disp,
            vertices: Vec::new(),
            roles: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn position(&self, k: WaveVector) -> Option<u32> {
        self.vertices.iter().position(|&v| v == k).map(|i| i as u32)
    }

    /// Number of hyperedges containing vertex `v`.
    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|e| e.members().any(|x| x == v))
            .count()
    }

    /// The same graph with vertex `i` moved to position `perm[i]`.
    pub fn relabeled(&self, perm: &[u32]) -> ClusterGraph {
        let n = self.vertices.len();
        let mut vertices = vec![WaveVector::new(0, 0); n];
        let mut roles = vec![Role::Plain; n];
        for i in 0..n {
            vertices[perm[i] as usize] = self.vertices[i];
            roles[perm[i] as usize] = self.roles[i];
        }
        let map = |xs: &[u32]| xs.iter().map(|&x| perm[x as usize]).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Hyperedge {
                kind: e.kind,
                lhs: map(&e.lhs),
                rhs: map(&e.rhs),
            })
            .collect();
        ClusterGraph {
            disp: self.disp,
            vertices,
            roles,
            edges,
        }
    }

    /// Subgraph on the given edges, vertices renumbered in their original order.
    fn restrict(&self, edge_ids: &[usize]) -> ClusterGraph {
        let mut keep: Vec<u32> = edge_ids
            .iter()
            .flat_map(|&e| self.edges[e].members())
            .collect();
        keep.sort();
        keep.dedup();
        let index: BTreeMap<u32, u32> = keep
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let map = |xs: &[u32]| xs.iter().map(|x| index[x]).collect();
        ClusterGraph {
            disp: self.disp,
            vertices: keep.iter().map(|&v| self.vertices[v as usize]).collect(),
            roles: keep.iter().map(|&v| self.roles[v as usize]).collect(),
            edges: edge_ids
                .iter()
                .map(|&e| {
                    let e = &self.edges[e];
                    Hyperedge {
                        kind: e.kind,
                        lhs: map(&e.lhs),
                        rhs: map(&e.rhs),
                    }
                })
                .collect(),
        }
    }
}

/// One hyperedge per solution over the union of solution members. Roles
/// come from the kinds of the quartets a vertex belongs to.
pub fn build_cluster_graph(rs: &ResonanceSet) -> Result<ClusterGraph> {
    let raw: Vec<(EdgeKind, Vec<WaveVector>, Vec<WaveVector>)> =
        match &rs.solutions {
            Solutions::CountOnly => return Err(Error::Validation(
                "cluster graphs need an enumerated resonance set; re-run with enumeration enabled"
                    .into(),
            )),
            Solutions::Triads(ts) => ts
                .iter()
                .map(|t| (EdgeKind::Triad, vec![t.k1, t.k2], vec![t.k3]))
                .collect(),
            Solutions::Quartets(qs) => qs
                .iter()
                .map(|q| {
                    let kind = if q.kind == Kind::Scale {
                        EdgeKind::Scale
                    } else {
                        EdgeKind::Angle
                    };
                    (kind, q.side_a.to_vec(), q.side_b.to_vec())
                })
                .collect(),
        };
    let mut vertices: Vec<WaveVector> = raw
        .iter()
        .flat_map(|(_, a, b)| a.iter().chain(b.iter()).copied())
        .collect();
    vertices.sort();
    vertices.dedup();
    let idx = |k: &WaveVector| vertices.binary_search(k).unwrap() as u32;
    let edges: Vec<Hyperedge> = raw
        .iter()
        .map(|(kind, a, b)| Hyperedge {
            kind: *kind,
            lhs: a.iter().map(idx).collect(),
            rhs: b.iter().map(idx).collect(),
        })
        .collect();
    let mut seen = vec![(false, false); vertices.len()];
    for e in &edges {
        for v in e.members() {
            match e.kind {
                EdgeKind::Scale => seen[v as usize].0 = true,
                EdgeKind::Angle => seen[v as usize].1 = true,
                EdgeKind::Triad => {}
            }
        }
    }
    let roles = seen
        .iter()
        .map(|&(s, a)| {
            if rs.disp.order() == 3 {
                Role::Plain
            } else {
                Role::from_degrees(s as u64, a as u64).unwrap()
            }
        })
        .collect();
    Ok(ClusterGraph {
        disp: rs.disp,
        vertices,
        roles,
        edges,
    })
}

/// Role of every vertex.
pub fn vertex_roles(g: &ClusterGraph) -> BTreeMap<WaveVector, Role> {
    g.vertices
        .iter()
        .copied()
        .zip(g.roles.iter().copied())
        .collect()
}

/// Connected components under hyperedge incidence, ordered by their
/// smallest vertex.
pub fn components(g: &ClusterGraph) -> Vec<ClusterGraph> {
    let n = g.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &g.edges {
        let mut it = e.members();
        if let Some(first) = it.next() {
            for v in it {
                let (a, b) = (
                    find(&mut parent, first as usize),
                    find(&mut parent, v as usize),
                );
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        let r = find(&mut parent, e.lhs[0] as usize);
        by_root.entry(r).or_default().push(i);
    }
    // roots are the minimum vertex index of their component, and vertex
    // indices follow lexicographic vector order
    by_root.values().map(|es| g.restrict(es)).collect()
}
