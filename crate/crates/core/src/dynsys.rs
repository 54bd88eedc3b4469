//! Symbolic amplitude equations for three-wave clusters.

use std::fmt::Write;

use serde::Serialize;

use crate::cluster::{canonical_labeling, ClusterGraph, EdgeKind};
use crate::lattice::WaveVector;
use crate::{Error, Result};

/// How coupling coefficients are named.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CoefStyle {
    /// One symbol `a_t` per triad, shared by its three terms.
    #[default]
    PerTriad,
    /// A fresh symbol per term, numbered in equation order
    /// (`dA1/dt = a1*A2*A3`, `dA2/dt = a2*A1*A3`, ...).
    PerTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Var {
    pub i: usize,
    pub k: WaveVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coef: String,
    pub factors: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub var: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DynSys {
    pub vars: Vec<Var>,
    pub eqs: Vec<Equation>,
}

impl DynSys {
    pub fn term_count(&self) -> usize {
        self.eqs.iter().map(|e| e.terms.len()).sum()
    }
}

/// `Ȧ_a = α_t A_b A_c` for every triad `t = {a, b, c}` and each of its
/// members. Variables are numbered by the canonical labeling of the
/// cluster, so isomorphic clusters yield the same equations.
pub fn emit_dynsys(cluster: &ClusterGraph, style: CoefStyle) -> Result<DynSys> {
    if cluster.edges.iter().any(|e| e.kind != EdgeKind::Triad) {
        return Err(Error::Unsupported(
            "amplitude equations are only generated for three-wave clusters".into(),
        ));
    }
    if cluster.edges.is_empty() {
        return Ok(DynSys::default());
    }
    let (labels, _) = canonical_labeling(cluster);
    let n = cluster.vertex_count();
    let mut vars: Vec<Var> = (0..n)
        .map(|v| Var {
            i: labels[v] as usize + 1,
            k: cluster.vertices[v],
        })
        .collect();
    vars.sort_by_key(|v| v.i);
    let var = |v: u32| labels[v as usize] as usize + 1;

    // triads in canonical order: (sorted summands, sum)
    let mut triads: Vec<([usize; 2], usize)> = cluster
        .edges
        .iter()
        .map(|e| {
            let mut s = [var(e.lhs[0]), var(e.lhs[1])];
            s.sort();
            (s, var(e.rhs[0]))
        })
        .collect();
    triads.sort();

    let mut eqs: Vec<Equation> = (1..=n)
        .map(|i| Equation {
            var: i,
            terms: Vec::new(),
        })
        .collect();
    for (t, &([a, b], c)) in triads.iter().enumerate() {
        for (target, factors) in [(a, [b, c]), (b, [a, c]), (c, [a, b])] {
            let mut factors = factors;
            factors.sort();
            eqs[target - 1].terms.push(Term {
                coef: format!("a{}", t + 1),
                factors,
            });
        }
    }
    if style == CoefStyle::PerTerm {
        let mut next = 1;
        for e in eqs.iter_mut() {
            for term in e.terms.iter_mut() {
                term.coef = format!("a{next}");
                next += 1;
            }
        }
    }
    Ok(DynSys { vars, eqs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynFormat {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for DynFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(DynFormat::Text),
            "latex" => Ok(DynFormat::Latex),
            "json" => Ok(DynFormat::Json),
            _ => Err(Error::Usage(format!(
                "unknown system format '{s}' (text, latex or json)"
            ))),
        }
    }
}

pub fn render(sys: &DynSys, format: DynFormat) -> String {
    match format {
        DynFormat::Text => {
            let mut s = String::new();
            for e in &sys.eqs {
                let rhs: Vec<String> = e
                    .terms
                    .iter()
                    .map(|t| format!("{}*A{}*A{}", t.coef, t.factors[0], t.factors[1]))
                    .collect();
                let _ = writeln!(s, "dA{}/dt = {}", e.var, rhs.join(" + "));
            }
            s
        }
        DynFormat::Latex => {
            let sub = |i: usize| {
                if i < 10 {
                    i.to_string()
                } else {
                    format!("{{{i}}}")
                }
            };
            let lines: Vec<String> = sys
                .eqs
                .iter()
                .map(|e| {
                    let rhs: Vec<String> = e
                        .terms
                        .iter()
                        .map(|t| {
                            let idx: usize = t.coef[1..].parse().unwrap_or(0);
                            format!(
                                "\\alpha_{} A_{}A_{}",
                                sub(idx),
                                sub(t.factors[0]),
                                sub(t.factors[1])
                            )
                        })
                        .collect();
                    format!("\\dot{{A}}_{} = {}", sub(e.var), rhs.join(" + "))
                })
                .collect();
            if lines.is_empty() {
                String::new()
            } else {
                lines.join(", \\\\\n") + "\n"
            }
        }
        DynFormat::Json => serde_json::to_string(sys).expect("system serializes"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{build_cluster_graph, components};
    use crate::lattice::DispersionId;
    use crate::solver::{ResonanceSet, Triad};
    use crate::SpectralDomain;

    fn v(m: i32, n: i32) -> WaveVector {
        WaveVector::new(m, n)
    }

    fn graph(ts: Vec<Triad>) -> ClusterGraph {
        let rs = ResonanceSet::from_triads(DispersionId::Rossby3, SpectralDomain::full(9), ts);
        components(&build_cluster_graph(&rs).unwrap()).remove(0)
    }

    #[test]
    fn triangle() {
        let g = graph(vec![Triad::new(v(1, 1), v(2, 1), v(3, 2))]);
        let sys = emit_dynsys(&g, CoefStyle::PerTerm).unwrap();
        assert_eq!(
            render(&sys, DynFormat::Text),
            "dA1/dt = a1*A2*A3\ndA2/dt = a2*A1*A3\ndA3/dt = a3*A1*A2\n"
        );
        assert_eq!(
            render(&sys, DynFormat::Latex),
            "\\dot{A}_1 = \\alpha_1 A_2A_3, \\\\\n\\dot{A}_2 = \\alpha_2 A_1A_3, \\\\\n\\dot{A}_3 = \\alpha_3 A_1A_2\n"
        );
        let shared = emit_dynsys(&g, CoefStyle::PerTriad).unwrap();
        assert_eq!(
            render(&shared, DynFormat::Text),
            "dA1/dt = a1*A2*A3\ndA2/dt = a1*A1*A3\ndA3/dt = a1*A1*A2\n"
        );
        let js = render(&shared, DynFormat::Json);
        assert!(js.starts_with(r#"{"vars":[{"i":1,"k":["#));
        assert!(js.contains(r#""eqs":[{"var":1,"terms":[{"coef":"a1","factors":[2,3]}]}"#));
    }

    #[test]
    fn butterfly_shares_one_variable() {
        let g = graph(vec![
            Triad::new(v(1, 1), v(2, 1), v(3, 2)),
            Triad::new(v(3, 2), v(4, 1), v(7, 3)),
        ]);
        let sys = emit_dynsys(&g, CoefStyle::PerTriad).unwrap();
        assert_eq!(sys.eqs.len(), 5);
        assert_eq!(sys.term_count(), 6);
        assert_eq!(sys.eqs.iter().filter(|e| e.terms.len() == 2).count(), 1);
    }

    #[test]
    fn empty_and_four_wave() {
        let g = ClusterGraph::empty(DispersionId::Rossby3);
        let sys = emit_dynsys(&g, CoefStyle::PerTriad).unwrap();
        assert_eq!(render(&sys, DynFormat::Text), "");
        assert_eq!(render(&sys, DynFormat::Latex), "");
        let q = crate::solver::classify_solution([v(-1, -1), v(1, 1)], [v(-1, 1), v(1, -1)], None)
            .unwrap();
        let rs =
            ResonanceSet::from_quartets(DispersionId::Gravity4, SpectralDomain::full(1), vec![q]);
        let g = build_cluster_graph(&rs).unwrap();
        assert!(matches!(
            emit_dynsys(&g, CoefStyle::PerTriad),
            Err(Error::Unsupported(_))
        ));
        assert!("pdf".parse::<DynFormat>().is_err());
    }
}
