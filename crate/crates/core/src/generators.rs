//! Random graph families observed to be small-set expanders, explicit named
//! graphs, and the maximum-degree-3 reduction gadget.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed,
//! driven by the keyed ChaCha8 stream from [`crate::seeds`], so outputs are
//! bit-identical across platforms and runs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeds::rng_from;
use crate::vertex_set::VertexSet;

/// Restarts allowed before regular-graph generation gives up.
const REGULAR_RESTART_BUDGET: u32 = 200;

/// Serializable description of a graph to generate, e.g.
/// `{"family":"d-out","n":2000,"d":4,"seed":7}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GenSpec {
    RandomRegular { n: usize, d: usize, seed: u64 },
    DOut { n: usize, d: usize, seed: u64 },
    Gnp { n: usize, p: f64, seed: u64 },
    Explicit(ExplicitSpec),
}

/// Named deterministic graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExplicitSpec {
    Complete { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    Grid { rows: usize, cols: usize },
    Petersen,
}

/// Builds the graph a [`GenSpec`] describes, validating its parameters.
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    match *spec {
        GenSpec::RandomRegular { n, d, seed } => {
            require_min_n(n)?;
            gen_random_regular(n, d, seed)
        }
        GenSpec::DOut { n, d, seed } => {
            require_min_n(n)?;
            gen_d_out(n, d, seed)
        }
        GenSpec::Gnp { n, p, seed } => {
            require_min_n(n)?;
            gen_gnp(n, p, seed)
        }
        GenSpec::Explicit(ref ex) => generate_explicit(ex),
    }
}

fn require_min_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "random families need n >= 3, got {n}"
        )));
    }
    Ok(())
}

pub fn generate_explicit(spec: &ExplicitSpec) -> Result<Graph> {
    match *spec {
        ExplicitSpec::Complete { n } => complete_graph(n),
        ExplicitSpec::Cycle { n } => cycle_graph(n),
        ExplicitSpec::Path { n } => path_graph(n),
        ExplicitSpec::Grid { rows, cols } => grid_graph(rows, cols),
        ExplicitSpec::Petersen => Ok(petersen_graph()),
    }
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    check_u32(n)?;
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    check_u32(n)?;
    if n < 3 {
        return Err(Error::InvalidParams(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n as u32).map(|i| (i, (i + 1) % n as u32)))
}

pub fn path_graph(n: usize) -> Result<Graph> {
    check_u32(n)?;
    Graph::from_edges(n, (1..n as u32).map(|i| (i - 1, i)))
}

/// Grid with vertex (r, c) at id r*cols + c and 4-neighbor adjacency.
pub fn grid_graph(rows: usize, cols: usize) -> Result<Graph> {
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::TooLarge("grid dimensions overflow".into()))?;
    check_u32(n)?;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParams("grid needs rows, cols >= 1".into()));
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let id = (r * cols + c) as u32;
            if c + 1 < cols {
                edges.push((id, id + 1));
            }
            if r + 1 < rows {
                edges.push((id, id + cols as u32));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// The Petersen graph: outer 5-cycle 0..4, inner 5-cycle 5..9 with stride 2
/// chords, spokes i-(i+5).
pub fn petersen_graph() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, edges).expect("fixed edge list is simple")
}

fn check_u32(n: usize) -> Result<()> {
    if n > u32::MAX as usize {
        return Err(Error::TooLarge(format!("n = {n} exceeds u32 vertex ids")));
    }
    Ok(())
}

/// Random d-regular graph via the configuration model: degree stubs are
/// paired at random, colliding pairs (loops, repeated edges) are thrown back
/// and re-paired, and the whole attempt restarts when the leftover stubs
/// admit no legal pair. Restart probability is negligible for d well below n.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    check_u32(n)?;
    if n * d % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "no {d}-regular graph on {n} vertices: n*d must be even"
        )));
    }
    if d >= n {
        return Err(Error::InvalidParams(format!(
            "regular degree {d} needs at least {} vertices, got {n}",
            d + 1
        )));
    }
    if d == 0 {
        return Graph::from_edges(n, []);
    }
    let mut rng = rng_from(seed);
    for _ in 0..REGULAR_RESTART_BUDGET {
        if let Some(edges) = try_regular_pairing(n, d, &mut rng) {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no simple {d}-regular pairing on {n} vertices after {REGULAR_RESTART_BUDGET} restarts"
    )))
}

fn try_regular_pairing(
    n: usize,
    d: usize,
    rng: &mut impl Rng,
) -> Option<Vec<(u32, u32)>> {
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut edges: HashSet<(u32, u32)> = HashSet::with_capacity(n * d / 2);
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                leftover.push(pair[0]);
                leftover.push(pair[1]);
            }
        }
        if leftover.len() == stubs.len() && !has_legal_pair(&leftover, &edges) {
            return None;
        }
        stubs = leftover;
    }
    Some(edges.into_iter().collect())
}

/// True when some pair of leftover stubs could still become a new edge.
fn has_legal_pair(stubs: &[u32], edges: &HashSet<(u32, u32)>) -> bool {
    let distinct: HashSet<u32> = stubs.iter().copied().collect();
    let distinct: Vec<u32> = distinct.into_iter().collect();
    for (i, &u) in distinct.iter().enumerate() {
        for &v in &distinct[i + 1..] {
            if !edges.contains(&(u.min(v), u.max(v))) {
                return true;
            }
        }
    }
    false
}

/// d-out random graph: every vertex picks d distinct random neighbors, and
/// the union of all picks is symmetrized and deduplicated. Minimum degree is
/// at least d because each vertex keeps its own picks.
pub fn gen_d_out(n: usize, d: usize, seed: u64) -> Result<Graph> {
    check_u32(n)?;
    if d == 0 || d >= n {
        return Err(Error::InvalidParams(format!(
            "d-out needs 1 <= d < n, got d={d}, n={n}"
        )));
    }
    let mut rng = rng_from(seed);
    let mut edges = Vec::with_capacity(n * d);
    for v in 0..n as u32 {
        for other in sample_distinct(n - 1, d, &mut rng) {
            // Index space 0..n-1 skips v itself.
            let w = if other >= v { other + 1 } else { other };
            edges.push((v, w));
        }
    }
    Graph::from_edges_dedup(n, edges)
}

/// Floyd's algorithm: d distinct uniform values from 0..m, O(d) draws.
fn sample_distinct(m: usize, d: usize, rng: &mut impl Rng) -> Vec<u32> {
    debug_assert!(d <= m);
    let mut chosen: HashSet<u32> = HashSet::with_capacity(d);
    for j in (m - d)..m {
        let t = rng.gen_range(0..=j as u32);
        if !chosen.insert(t) {
            chosen.insert(j as u32);
        }
    }
    chosen.into_iter().collect()
}

/// Binomial random graph: each of the n(n-1)/2 pairs is an edge
/// independently with probability p. Skip-sampling draws the gap to the next
/// edge from a geometric law, so the run time is O(n + edges), not O(n^2).
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_u32(n)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must be in [0, 1], got {p}")));
    }
    if p == 0.0 {
        return Graph::from_edges(n, []);
    }
    if p == 1.0 {
        return complete_graph(n);
    }
    let geometric = Geometric::new(p).expect("0 < p < 1");
    let mut rng = rng_from(seed);
    let mut edges = Vec::new();
    // Walk the pairs (u,v), u < v, in lexicographic order; `row_left` counts
    // pairs remaining in row u.
    let mut u = 0u32;
    let mut v = 1u32;
    let total: u64 = n as u64 * (n as u64 - 1) / 2;
    let mut pos: u64 = 0;
    loop {
        let gap = geometric.sample(&mut rng);
        pos = match pos.checked_add(gap) {
            Some(next) => next,
            None => break,
        };
        if pos >= total {
            break;
        }
        let mut advance = gap;
        while advance > 0 {
            let row_left = (n as u32 - 1 - v) as u64;
            if advance <= row_left {
                v += advance as u32;
                advance = 0;
            } else {
                advance -= row_left + 1;
                u += 1;
                v = u + 1;
            }
        }
        edges.push((u, v));
        pos += 1;
        if v + 1 < n as u32 {
            v += 1;
        } else {
            u += 1;
            v = u + 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// Result of rewriting a graph into one with maximum degree 3.
///
/// Vertex v of the input becomes a path of `max(deg(v), 1)` copies; the i-th
/// copy carries v's edge to its i-th smallest neighbor. Contracting each
/// path recovers the input as a minor.
#[derive(Clone, Debug)]
pub struct Degree3Reduction {
    pub graph: Graph,
    /// Input vertex each copy came from, indexed by copy id.
    pub origin: Vec<u32>,
    /// Vertex count of the input graph.
    pub input_n: usize,
}

impl Degree3Reduction {
    /// Branch sets of the canonical path-contraction model: entry v is the
    /// set of copies of input vertex v.
    pub fn branch_sets(&self) -> Vec<VertexSet> {
        let mut sets = vec![VertexSet::new(self.graph.n()); self.input_n];
        for (copy, &v) in self.origin.iter().enumerate() {
            sets[v as usize].insert(copy as u32);
        }
        sets
    }
}

/// Rewrites `h` into a graph of maximum degree 3 that contains `h` as a
/// minor: each vertex is split into a path with one original edge per copy.
/// The output has sum(deg) + #isolated vertices and at most 3 e(h) edges.
pub fn degree3_reduce(h: &Graph) -> Degree3Reduction {
    let n = h.n();
    let mut offset = Vec::with_capacity(n + 1);
    let mut origin = Vec::new();
    let mut total = 0u32;
    for v in 0..n as u32 {
        offset.push(total);
        let copies = h.degree(v).max(1);
        for _ in 0..copies {
            origin.push(v);
        }
        total += copies as u32;
    }
    offset.push(total);

    let mut edges = Vec::new();
    for v in 0..n as u32 {
        let deg = h.degree(v);
        for i in 1..deg {
            edges.push((offset[v as usize] + i as u32 - 1, offset[v as usize] + i as u32));
        }
        // Copy i of v meets copy j of w when each is the other's i-th / j-th
        // smallest neighbor; neighbor lists are sorted, so i is the list index.
        for (i, &w) in h.neighbors(v).iter().enumerate() {
            if w > v {
                let j = h.neighbors(w).binary_search(&v).expect("symmetric adjacency");
                edges.push((offset[v as usize] + i as u32, offset[w as usize] + j as u32));
            }
        }
    }
    let graph = Graph::from_edges(total as usize, edges).expect("reduction is simple");
    debug_assert!(graph.max_degree() <= 3);
    Degree3Reduction {
        graph,
        origin,
        input_n: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_3_regular_graph_on_4_vertices_is_complete() {
        let g = gen_random_regular(4, 3, 7).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.regular_degree(), Some(3));
    }

    #[test]
    fn regular_outputs_have_uniform_degree() {
        for seed in 0..5 {
            let g = gen_random_regular(50, 7, seed).unwrap();
            assert_eq!(g.regular_degree(), Some(7));
            let again = gen_random_regular(50, 7, seed).unwrap();
            assert_eq!(g, again);
        }
    }

    #[test]
    fn regular_rejects_infeasible_parameters() {
        assert!(gen_random_regular(5, 3, 0).is_err());
        assert!(gen_random_regular(4, 4, 0).is_err());
    }

    #[test]
    fn dense_regular_generation_succeeds() {
        let g = gen_random_regular(64, 32, 3).unwrap();
        assert_eq!(g.regular_degree(), Some(32));
    }

    #[test]
    fn d_out_with_full_degree_is_complete() {
        let g = gen_d_out(6, 5, 11).unwrap();
        assert_eq!(g.edge_count(), 15);
    }

    #[test]
    fn d_out_min_degree_at_least_d() {
        for seed in 0..5 {
            let g = gen_d_out(100, 4, seed).unwrap();
            assert!((0..100).all(|v| g.degree(v) >= 4));
            assert_eq!(g, gen_d_out(100, 4, seed).unwrap());
        }
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(gen_gnp(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_gnp(10, 1.0, 1).unwrap().edge_count(), 45);
    }

    #[test]
    fn gnp_is_deterministic_and_plausible() {
        let g = gen_gnp(200, 0.1, 5).unwrap();
        assert_eq!(g, gen_gnp(200, 0.1, 5).unwrap());
        // Mean 1990, sigma ~42; allow 6 sigma.
        let m = g.edge_count() as f64;
        assert!((m - 1990.0).abs() < 260.0, "edge count {m} implausible");
    }

    #[test]
    fn explicit_families_have_expected_shape() {
        assert_eq!(complete_graph(5).unwrap().edge_count(), 10);
        assert_eq!(cycle_graph(6).unwrap().regular_degree(), Some(2));
        assert_eq!(path_graph(4).unwrap().edge_count(), 3);
        let grid = grid_graph(3, 4).unwrap();
        assert_eq!(grid.n(), 12);
        assert_eq!(grid.edge_count(), 2 * 3 * 4 - 3 - 4);
        let p = petersen_graph();
        assert_eq!(p.n(), 10);
        assert_eq!(p.regular_degree(), Some(3));
        // Petersen has girth 5: no triangles through any edge.
        for (u, v) in p.edges() {
            for &w in p.neighbors(u) {
                assert!(w == v || !p.has_edge(w, v));
            }
        }
    }

    #[test]
    fn gen_spec_json_round_trip() {
        let spec = GenSpec::DOut { n: 2000, d: 4, seed: 7 };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"family":"d-out","n":2000,"d":4,"seed":7}"#);
        assert_eq!(serde_json::from_str::<GenSpec>(&json).unwrap(), spec);
        let ex: GenSpec = serde_json::from_str(r#"{"family":"explicit","name":"grid","rows":3,"cols":5}"#).unwrap();
        assert_eq!(generate(&ex).unwrap().n(), 15);
    }

    #[test]
    fn degree3_single_edge_is_fixed_point() {
        let h = Graph::from_edges(2, [(0, 1)]).unwrap();
        let red = degree3_reduce(&h);
        assert_eq!(red.graph.n(), 2);
        assert_eq!(red.graph.edge_count(), 1);
        assert_eq!(red.origin, vec![0, 1]);
    }

    #[test]
    fn degree3_complete_graph_shape() {
        let h = complete_graph(4).unwrap();
        let red = degree3_reduce(&h);
        assert_eq!(red.graph.n(), 12);
        assert!(red.graph.max_degree() <= 3);
        // 6 original edges + 4 paths of 2 edges each.
        assert_eq!(red.graph.edge_count(), 14);
        let sets = red.branch_sets();
        assert_eq!(sets.len(), 4);
        assert!(sets.iter().all(|s| s.len() == 3));
    }

    #[test]
    fn degree3_keeps_isolated_vertices() {
        let h = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let red = degree3_reduce(&h);
        assert_eq!(red.graph.n(), 7);
        assert_eq!(red.origin[6], 3);
        assert_eq!(red.graph.degree(6), 0);
    }

    #[test]
    fn degree3_size_bounds() {
        for (n, edges) in [(6, vec![(0u32, 1u32), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])] {
            let h = Graph::from_edges(n, edges).unwrap();
            let red = degree3_reduce(&h);
            let bound = 3 * h.n().max(h.edge_count());
            assert!(red.graph.n() <= bound);
            assert!(red.graph.edge_count() <= bound);
        }
    }
}
