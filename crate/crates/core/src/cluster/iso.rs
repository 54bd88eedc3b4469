//! Canonical certificates of cluster hypergraphs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::graph::{ClusterGraph, EdgeKind, Hyperedge};

/// Clusters up to this many vertices get an exact canonical certificate.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Certificate {
    pub code: String,
    /// Refinement-only certificate: equal codes do not prove isomorphism.
    pub heuristic: bool,
}

type EdgeCode = (u32, Vec<u32>, Vec<u32>);

// Sides sorted; quartet sides ordered, triads keep summands first.
fn edge_code(e: &Hyperedge, label: &[u32]) -> EdgeCode {
    let mut lhs: Vec<u32> = e.lhs.iter().map(|&v| label[v as usize]).collect();
    let mut rhs: Vec<u32> = e.rhs.iter().map(|&v| label[v as usize]).collect();
    lhs.sort();
    rhs.sort();
    if e.kind != EdgeKind::Triad && rhs < lhs {
        std::mem::swap(&mut lhs, &mut rhs);
    }
    (e.kind.code(), lhs, rhs)
}

fn role_codes(g: &ClusterGraph, label: &[u32]) -> Vec<u32> {
    let mut r = vec![0; g.vertex_count()];
    for (v, &l) in label.iter().enumerate() {
        r[l as usize] = g.roles[v] as u32;
    }
    r
}

fn encode(g: &ClusterGraph, label: &[u32]) -> (Vec<u32>, Vec<EdgeCode>) {
    let mut edges: Vec<EdgeCode> = g.edges.iter().map(|e| edge_code(e, label)).collect();
    edges.sort();
    (role_codes(g, label), edges)
}

fn render(g: &ClusterGraph, roles: &[u32], edges: &[EdgeCode], prefix: &str) -> String {
    let letters: String = roles.iter().map(|&r| ROLE_LETTERS[r as usize]).collect();
    let list = |xs: &[u32]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let es: Vec<String> = edges
        .iter()
        .map(|(k, l, r)| {
            let (tag, sep) = match k {
                0 => ('t', '>'),
                1 => ('s', '|'),
                _ => ('a', '|'),
            };
            format!("{tag}({}{sep}{})", list(l), list(r))
        })
        .collect();
    format!("{prefix}n{};{};{}", g.vertex_count(), letters, es.join(";"))
}

const ROLE_LETTERS: [char; 4] = ['A', 'S', 'B', 'P'];

/// Colour refinement: each round colours a vertex by its old colour and the
/// multiset of (edge kind, position, colours of same-side and other-side
/// co-members) over its incidences, until the partition is stable.
/// (edge kind, position, same-side colours, other-side colours)
type Incidence = (u32, u8, Vec<u32>, Vec<u32>);

fn refine(g: &ClusterGraph, colors: &mut [u32]) {
    let n = g.vertex_count();
    let mut classes = distinct(colors);
    loop {
        let mut sigs: Vec<(u32, Vec<Incidence>)> =
            (0..n).map(|v| (colors[v], Vec::new())).collect();
        for e in &g.edges {
            for (pos, (mine, other)) in [(&e.lhs, &e.rhs), (&e.rhs, &e.lhs)].into_iter().enumerate()
            {
                for (i, &v) in mine.iter().enumerate() {
                    let mut same: Vec<u32> = mine
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| colors[x as usize])
                        .collect();
                    let mut opp: Vec<u32> = other.iter().map(|&x| colors[x as usize]).collect();
                    same.sort();
                    opp.sort();
                    let pos = if e.kind == EdgeKind::Triad {
                        pos as u8
                    } else {
                        0
                    };
                    sigs[v as usize].1.push((e.kind.code(), pos, same, opp));
                }
            }
        }
        for s in sigs.iter_mut() {
            s.1.sort();
        }
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        for v in 0..n {
            colors[v] = uniq.binary_search(&sigs[v]).unwrap() as u32;
        }
        let now = distinct(colors);
        if now == classes {
            return;
        }
        classes = now;
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort();
    c.dedup();
    c.len()
}

fn initial_colors(g: &ClusterGraph) -> Vec<u32> {
    g.roles.iter().map(|&r| r as u32).collect()
}

type Code = (Vec<u32>, Vec<EdgeCode>);

fn search(g: &ClusterGraph, mut colors: Vec<u32>, best: &mut Option<(Code, Vec<u32>)>) {
    refine(g, &mut colors);
    let n = colors.len();
    let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    match cells.iter().find(|(_, vs)| vs.len() > 1) {
        None => {
            // colours are now 0..n and serve as labels
            let code = encode(g, &colors);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, colors));
            }
        }
        Some((&cell, vs)) => {
            for &v in vs {
                let mut next = colors.clone();
                for c in next.iter_mut() {
                    if *c > cell {
                        *c += 1;
                    }
                }
                for (u, c) in next.iter_mut().enumerate() {
                    if u != v && colors[u] == cell {
                        *c = cell + 1;
                    }
                }
                debug_assert_eq!(next.len(), n);
                search(g, next, best);
            }
        }
    }
}

/// Canonical vertex labels (label per vertex) and the certificate.
///
/// Up to [`EXACT_LIMIT`] vertices the labels come from
/// individualization-refinement with full branching, so equal certificates
/// mean isomorphic hypergraphs (with roles, edge kinds and side structure).
/// Larger clusters use the stable refinement alone, with vertex order
/// breaking ties, and are flagged heuristic.
pub fn canonical_labeling(g: &ClusterGraph) -> (Vec<u32>, Certificate) {
    if g.vertex_count() <= EXACT_LIMIT {
        let mut best = None;
        search(g, initial_colors(g), &mut best);
        let Some(((roles, edges), labels)) = best else {
            return (
                Vec::new(),
                Certificate {
                    code: render(g, &[], &[], ""),
                    heuristic: false,
                },
            );
        };
        let code = render(g, &roles, &edges, "");
        (
            labels,
            Certificate {
                code,
                heuristic: false,
            },
        )
    } else {
        let mut colors = initial_colors(g);
        refine(g, &mut colors);
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.sort_by_key(|&v| (colors[v], v));
        let mut labels = vec![0u32; order.len()];
        for (l, &v) in order.iter().enumerate() {
            labels[v] = l as u32;
        }
        // the code uses colours, not labels, so it is relabeling-invariant
        let mut edges: Vec<EdgeCode> = g.edges.iter().map(|e| edge_code(e, &colors)).collect();
        edges.sort();
        let mut by_color: Vec<(u32, u32)> = colors
            .iter()
            .zip(&g.roles)
            .map(|(&c, &r)| (c, r as u32))
            .collect();
        by_color.sort();
        let roles: Vec<u32> = by_color.iter().map(|x| x.1).collect();
        (
            labels,
            Certificate {
                code: render(g, &roles, &edges, "h:"),
                heuristic: true,
            },
        )
    }
}

pub fn certificate(g: &ClusterGraph) -> Certificate {
    canonical_labeling(g).1
}

/// Exhaustive isomorphism test: searches for a role- and degree-preserving
/// bijection mapping the hyperedge multiset of `a` onto that of `b`.
pub fn isomorphic_exhaustive(a: &ClusterGraph, b: &ClusterGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let da: Vec<usize> = (0..n as u32).map(|v| a.degree(v)).collect();
    let db: Vec<usize> = (0..n as u32).map(|v| b.degree(v)).collect();
    let ident: Vec<u32> = (0..n as u32).collect();
    let mut target: Vec<EdgeCode> = b.edges.iter().map(|e| edge_code(e, &ident)).collect();
    target.sort();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &ClusterGraph,
        b: &ClusterGraph,
        (da, db): (&[usize], &[usize]),
        map: &mut [u32],
        used: &mut [bool],
        target: &[EdgeCode],
    ) -> bool {
        let n = map.len();
        if i == n {
            let mut got: Vec<EdgeCode> = a.edges.iter().map(|e| edge_code(e, map)).collect();
            got.sort();
            return got == target;
        }
        for j in 0..n {
            if !used[j] && a.roles[i] == b.roles[j] && da[i] == db[j] {
                used[j] = true;
                map[i] = j as u32;
                if go(i + 1, a, b, (da, db), map, used, target) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, a, b, (&da, &db), &mut map, &mut used, &target)
}

/// Names for the classes with established names.
pub fn shape_tag(g: &ClusterGraph) -> Option<&'static str> {
    let triads = g.edges.iter().all(|e| e.kind == EdgeKind::Triad);
    match (triads, g.edge_count(), g.vertex_count()) {
        (true, 1, 3) => Some("triangle"),
        (true, 2, 5) => Some("butterfly"),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterClass {
    pub class_id: usize,
    pub tag: Option<String>,
    pub vertices: usize,
    pub hyperedges: usize,
    pub multiplicity: usize,
    pub certificate: Certificate,
    #[serde(skip)]
    pub representative: ClusterGraph,
}

/// Isomorphism classes with multiplicities, ordered by size then
/// certificate; ids start at 1.
pub fn iso_classes(clusters: &[ClusterGraph]) -> Vec<ClusterClass> {
    let certs: Vec<Certificate> = clusters.par_iter().map(certificate).collect();
    let mut groups: BTreeMap<(usize, usize, Certificate), (usize, usize)> = BTreeMap::new();
    for (i, (c, cert)) in clusters.iter().zip(certs).enumerate() {
        let entry = groups
            .entry((c.vertex_count(), c.edge_count(), cert))
            .or_insert((i, 0));
        entry.1 += 1;
    }
    groups
        .into_iter()
        .enumerate()
        .map(
            |(id, ((vertices, hyperedges, certificate), (first, multiplicity)))| ClusterClass {
                class_id: id + 1,
                tag: shape_tag(&clusters[first]).map(str::to_string),
                vertices,
                hyperedges,
                multiplicity,
                certificate,
                representative: clusters[first].clone(),
            },
        )
        .collect()
}
