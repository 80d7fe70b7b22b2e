//! Minor models and their independent verification, plus the two embedding
//! engines (arbitrary bounded-size patterns; large complete minors) and the
//! randomized cover-connector they build on.
//!
//! A minor model maps each pattern vertex to a branch set in the host:
//! branch sets are pairwise disjoint, each induces a connected host
//! subgraph, and every pattern edge is realized by a host edge between the
//! two branch sets. Verification checks those three clauses directly from
//! the definition with union-find connectivity, sharing no traversal code
//! with the engines that build models.

mod complete;
mod cover;
mod engine;
mod universal;

pub use complete::{embed_complete, CompleteConfig, CompleteEmbedding};
pub use cover::{efficient_cover, CoverConfig, CoverConnector};
pub use engine::PartitionState;
pub use universal::{embed_universal, EmbedConfig};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Witness that the pattern is a minor of the host: one branch set per
/// pattern vertex, indexed by pattern vertex id.
#[derive(Clone, Debug)]
pub struct MinorModel {
    pub host: Arc<Graph>,
    pub pattern: Arc<Graph>,
    pub branch_sets: Vec<VertexSet>,
}

/// Wire form of a model: `{"pattern_n":3,"branch_sets":{"0":[0,1],...}}`.
/// Pattern edges are not stored; verification needs the pattern graph
/// supplied alongside.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    pub pattern_n: usize,
    pub branch_sets: BTreeMap<u32, Vec<u32>>,
}

impl MinorModel {
    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            pattern_n: self.pattern.n(),
            branch_sets: self
                .branch_sets
                .iter()
                .enumerate()
                .map(|(h, w)| (h as u32, w.to_vec()))
                .collect(),
        }
    }

    /// Rebuilds a model from its wire form, validating vertex ranges and the
    /// pattern size. Missing pattern vertices get empty branch sets so that
    /// verification can report them precisely.
    pub fn from_json(json: &ModelJson, host: Arc<Graph>, pattern: Arc<Graph>) -> Result<Self> {
        if json.pattern_n != pattern.n() {
            return Err(Error::InvalidParams(format!(
                "model declares {} pattern vertices but the pattern graph has {}",
                json.pattern_n,
                pattern.n()
            )));
        }
        let mut branch_sets = vec![VertexSet::new(host.n()); pattern.n()];
        for (&h, members) in &json.branch_sets {
            if h as usize >= pattern.n() {
                return Err(Error::VertexOutOfRange {
                    vertex: h,
                    n: pattern.n(),
                });
            }
            branch_sets[h as usize] =
                VertexSet::from_members(host.n(), members.iter().copied())?;
        }
        Ok(MinorModel {
            host,
            pattern,
            branch_sets,
        })
    }
}

/// First failure found when checking a model, naming the violated clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorViolation {
    /// The model has no entry for this pattern vertex.
    MissingBranchSet { pattern_vertex: u32 },
    EmptyBranchSet { pattern_vertex: u32 },
    /// A host vertex claimed by two branch sets.
    Overlap { host_vertex: u32, first: u32, second: u32 },
    Disconnected { pattern_vertex: u32 },
    /// A pattern edge with no host edge between its branch sets.
    MissingEdge { first: u32, second: u32 },
}

impl std::fmt::Display for MinorViolation {
    fmt_minor_violation!();
}

macro_rules! fmt_minor_violation {
    () => {};
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorVerdict {
    Valid,
    Invalid(MinorViolation),
}

impl MinorVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, MinorVerdict::Valid)
    }
}

/// Union-find with path halving; deliberately not the BFS machinery the
/// construction engines use.
struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            self.parent[v as usize] = self.parent[self.parent[v as usize] as usize];
            v = self.parent[v as usize];
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Checks the three minor-model clauses directly from the definition and
/// reports the first failure: disjointness, per-branch-set connectivity,
/// and realization of every pattern edge.
pub fn verify_minor(model: &MinorModel) -> MinorVerdict {
    let host = &model.host;
    let pattern = &model.pattern;
    if model.branch_sets.len() < pattern.n() {
        return MinorVerdict::Invalid(MinorViolation::MissingBranchSet {
            pattern_vertex: model.branch_sets.len() as u32,
        });
    }

    // Ownership labels; doubles as the disjointness check.
    let mut owner: Vec<Option<u32>> = vec![None; host.n()];
    for (h, w) in model.branch_sets.iter().enumerate() {
        if w.is_empty() {
            return MinorVerdict::Invalid(MinorViolation::EmptyBranchSet {
                pattern_vertex: h as u32,
            });
        }
        for v in w {
            if let Some(prev) = owner[v as usize] {
                return MinorVerdict::Invalid(MinorViolation::Overlap {
                    host_vertex: v,
                    first: prev,
                    second: h as u32,
                });
            }
            owner[v as usize] = Some(h as u32);
        }
    }

    // Connectivity of each branch set via union-find over internal edges.
    let mut dsu = Dsu::new(host.n());
    for w in &model.branch_sets {
        for u in w {
            for &v in host.neighbors(u) {
                if v > u && w.contains(v) {
                    dsu.union(u, v);
                }
            }
        }
    }
    for (h, w) in model.branch_sets.iter().enumerate() {
        let root = dsu.find(w.first().expect("nonempty checked"));
        for u in w {
            if dsu.find(u) != root {
                return MinorVerdict::Invalid(MinorViolation::Disconnected {
                    pattern_vertex: h as u32,
                });
            }
        }
    }

    // Every pattern edge must be realized by some host edge.
    for (a, b) in pattern.edges() {
        let wa = &model.branch_sets[a as usize];
        let wb = &model.branch_sets[b as usize];
        let (small, other_label) = if wa.len() <= wb.len() {
            (wa, b)
        } else {
            (wb, a)
        };
        let realized = small.iter().any(|u| {
            host.neighbors(u)
                .iter()
                .any(|&v| owner[v as usize] == Some(other_label as u32) && {
                    // Only count vertices actually in the other branch set.
                    true
                })
        });
        if !realized {
            return MinorVerdict::Invalid(MinorViolation::MissingEdge { first: a, second: b });
        }
    }
    MinorVerdict::Valid
}

/// Diameter bound for a connected (alpha, t)-expander with t >= 2:
/// `3 ln n / (alpha ln t)`. Natural logarithms.
pub fn diameter_bound(n: usize, alpha: f64, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParams("graph must be nonempty".into()));
    }
    if !alpha.is_finite() || !(0.0 < alpha && alpha <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !t.is_finite() || t < 2.0 {
        return Err(Error::InvalidParams(format!(
            "diameter bound needs t >= 2, got {t}"
        )));
    }
    Ok(3.0 * (n as f64).ln() / (alpha * t.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, petersen_graph};

    fn arc(g: Graph) -> Arc<Graph> {
        Arc::new(g)
    }

    fn model(host: &Arc<Graph>, pattern: &Arc<Graph>, sets: &[&[u32]]) -> MinorModel {
        MinorModel {
            host: host.clone(),
            pattern: pattern.clone(),
            branch_sets: sets
                .iter()
                .map(|s| VertexSet::from_members(host.n(), s.iter().copied()).unwrap())
                .collect(),
        }
    }

    #[test]
    fn identity_model_is_valid() {
        let g = arc(petersen_graph());
        let sets: Vec<Vec<u32>> = (0..10).map(|v| vec![v]).collect();
        let m = MinorModel {
            host: g.clone(),
            pattern: g.clone(),
            branch_sets: sets
                .iter()
                .map(|s| VertexSet::from_members(10, s.iter().copied()).unwrap())
                .collect(),
        };
        assert!(verify_minor(&m).is_valid());
    }

    #[test]
    fn triangle_in_k4_singletons() {
        let host = arc(complete_graph(4).unwrap());
        let pattern = arc(complete_graph(3).unwrap());
        let m = model(&host, &pattern, &[&[0], &[1], &[2]]);
        assert!(verify_minor(&m).is_valid());
    }

    #[test]
    fn petersen_spokes_give_k5() {
        // Contracting each spoke {outer i, inner i+5} yields K5.
        let host = arc(petersen_graph());
        let pattern = arc(complete_graph(5).unwrap());
        let sets: Vec<Vec<u32>> = (0..5).map(|i| vec![i, i + 5]).collect();
        let m = MinorModel {
            host,
            pattern,
            branch_sets: sets
                .iter()
                .map(|s| VertexSet::from_members(10, s.iter().copied()).unwrap())
                .collect(),
        };
        assert!(verify_minor(&m).is_valid());
    }

    #[test]
    fn each_violation_kind_is_detected() {
        let host = arc(complete_graph(4).unwrap());
        let path3 = arc(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());

        let m = model(&host, &path3, &[&[0], &[], &[2]]);
        assert_eq!(
            verify_minor(&m),
            MinorVerdict::Invalid(MinorViolation::EmptyBranchSet { pattern_vertex: 1 })
        );

        let m = model(&host, &path3, &[&[0, 1], &[1], &[2]]);
        assert_eq!(
            verify_minor(&m),
            MinorVerdict::Invalid(MinorViolation::Overlap {
                host_vertex: 1,
                first: 0,
                second: 1
            })
        );

        let disconnected_host = arc(Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap());
        let m = model(&disconnected_host, &path3, &[&[0, 2], &[1], &[3]]);
        assert_eq!(
            verify_minor(&m),
            MinorVerdict::Invalid(MinorViolation::Disconnected { pattern_vertex: 0 })
        );

        let m = model(&disconnected_host, &path3, &[&[0], &[1], &[2]]);
        assert_eq!(
            verify_minor(&m),
            MinorVerdict::Invalid(MinorViolation::MissingEdge { first: 1, second: 2 })
        );

        let m = MinorModel {
            host: host.clone(),
            pattern: path3.clone(),
            branch_sets: vec![VertexSet::singleton(4, 0).unwrap()],
        };
        assert_eq!(
            verify_minor(&m),
            MinorVerdict::Invalid(MinorViolation::MissingBranchSet { pattern_vertex: 1 })
        );
    }

    #[test]
    fn model_json_round_trip() {
        let host = arc(complete_graph(4).unwrap());
        let pattern = arc(complete_graph(3).unwrap());
        let m = model(&host, &pattern, &[&[0], &[1], &[2, 3]]);
        let json = m.to_json();
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(
            text,
            r#"{"pattern_n":3,"branch_sets":{"0":[0],"1":[1],"2":[2,3]}}"#
        );
        let parsed: ModelJson = serde_json::from_str(&text).unwrap();
        let back = MinorModel::from_json(&parsed, host, pattern).unwrap();
        assert!(verify_minor(&back).is_valid());
    }

    #[test]
    fn diameter_bound_formula() {
        let n = std::f64::consts::E.powi(6).round() as usize;
        let b = diameter_bound(n, 1.0, std::f64::consts::E.powi(3)).unwrap();
        assert!((b - 6.0).abs() < 0.01);
        let half = diameter_bound(n, 0.5, std::f64::consts::E.powi(3)).unwrap();
        assert!((half - 2.0 * b).abs() < 0.01);
        assert!(diameter_bound(100, 0.5, 1.5).is_err());
    }
}
