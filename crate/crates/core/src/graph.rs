//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! The representation is a sorted adjacency list per vertex; graphs are
//! immutable after construction and safe to share across threads. Traversals
//! are deterministic: queues are seeded in ascending id order, neighbor lists
//! are scanned ascending, and path reconstruction breaks ties toward the
//! smaller id, so equal inputs always produce equal outputs.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

/// Distance between vertex sets. `Infinite` is the explicit sentinel for
/// unreachable pairs; no in-band magic number is ever used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn as_finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// Relabeling produced by [`Graph::induced_subgraph`]. Subgraph ids are
/// assigned in ascending order of the host ids they came from.
#[derive(Clone, Debug)]
pub struct IndexMap {
    to_host: Vec<u32>,
}

impl IndexMap {
    pub fn host_id(&self, sub: u32) -> u32 {
        self.to_host[sub as usize]
    }

    pub fn sub_id(&self, host: u32) -> Option<u32> {
        self.to_host.binary_search(&host).ok().map(|i| i as u32)
    }

    pub fn len(&self) -> usize {
        self.to_host.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_host.is_empty()
    }

    /// Maps a subgraph-id set back to host ids.
    pub fn set_to_host(&self, sub: &VertexSet, host_domain: usize) -> VertexSet {
        let mut out = VertexSet::new(host_domain);
        for v in sub {
            out.insert(self.host_id(v));
        }
        out
    }
}

impl Graph {
    fn build(n: usize, edges: Vec<(u32, u32)>) -> Graph {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            adjacency,
            edge_count: edges.len(),
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicate edges
    /// (in either orientation), and out-of-range endpoints.
    pub fn from_edges<I: IntoIterator<Item = (u32, u32)>>(n: usize, edges: I) -> Result<Graph> {
        let mut seen = std::collections::HashSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if (w as usize) >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {} {}",
                    key.0, key.1
                )));
            }
            list.push(key);
        }
        Ok(Graph::build(n, list))
    }

    /// Builds a graph from an edge list, silently dropping loops and
    /// duplicates. Out-of-range endpoints are still rejected.
    pub fn from_edges_dedup<I: IntoIterator<Item = (u32, u32)>>(
        n: usize,
        edges: I,
    ) -> Result<Graph> {
        let mut seen = std::collections::HashSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if (w as usize) >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                list.push(key);
            }
        }
        Ok(Graph::build(n, list))
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree exactly `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    fn check_set(&self, x: &VertexSet) -> Result<()> {
        if x.domain() != self.n() {
            return Err(Error::InvalidParams(format!(
                "vertex set over domain {} used with graph on {} vertices",
                x.domain(),
                self.n()
            )));
        }
        Ok(())
    }

    /// External neighborhood: vertices outside `x` adjacent to `x`.
    pub fn external_neighborhood(&self, x: &VertexSet) -> Result<VertexSet> {
        self.check_set(x)?;
        let mut out = VertexSet::new(self.n());
        for v in x {
            for &w in self.neighbors(v) {
                if !x.contains(w) {
                    out.insert(w);
                }
            }
        }
        Ok(out)
    }

    /// Ball of radius `z` around `u`: all vertices within distance `z`.
    pub fn ball(&self, u: &VertexSet, z: usize) -> Result<VertexSet> {
        self.check_set(u)?;
        if u.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut reached = u.clone();
        let mut frontier = u.clone();
        for _ in 0..z {
            let mut next = VertexSet::new(self.n());
            for v in &frontier {
                for &w in self.neighbors(v) {
                    if !reached.contains(w) {
                        reached.insert(w);
                        next.insert(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(reached)
    }

    /// Multi-source BFS distances from `source`; unreachable entries are None.
    fn bfs_distances(&self, source: &VertexSet) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        let mut queue = std::collections::VecDeque::new();
        for v in source {
            dist[v as usize] = Some(0);
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize].unwrap();
            for &w in self.neighbors(v) {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path distance between two nonempty sets.
    pub fn distance(&self, x: &VertexSet, y: &VertexSet) -> Result<Distance> {
        self.check_set(x)?;
        self.check_set(y)?;
        if x.is_empty() || y.is_empty() {
            return Err(Error::EmptySet);
        }
        let dist = self.bfs_distances(x);
        let best = y.iter().filter_map(|v| dist[v as usize]).min();
        Ok(match best {
            Some(d) => Distance::Finite(d as usize),
            None => Distance::Infinite,
        })
    }

    /// One shortest path from `source` to `target` as a vertex sequence.
    ///
    /// Deterministic: the endpoint is the reachable target vertex with the
    /// smallest distance (ties toward the smaller id), and each backward step
    /// moves to the smallest-id neighbor one level closer to the source.
    pub fn shortest_path(&self, source: &VertexSet, target: &VertexSet) -> Result<Vec<u32>> {
        self.check_set(source)?;
        self.check_set(target)?;
        if source.is_empty() || target.is_empty() {
            return Err(Error::EmptySet);
        }
        let dist = self.bfs_distances(source);
        let mut end = None;
        for v in target {
            if let Some(d) = dist[v as usize] {
                if end.map_or(true, |(bd, _)| d < bd) {
                    end = Some((d, v));
                }
            }
        }
        let Some((d_end, v_end)) = end else {
            return Err(Error::NotConnected);
        };
        let mut path = vec![v_end];
        let mut cur = v_end;
        let mut d = d_end;
        while d > 0 {
            let prev = self
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| dist[w as usize] == Some(d - 1))
                .expect("BFS predecessor exists");
            path.push(prev);
            cur = prev;
            d -= 1;
        }
        path.reverse();
        Ok(path)
    }

    /// Induced subgraph on `x`, with subgraph ids assigned in ascending order
    /// of host id, plus the relabeling map.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<(Graph, IndexMap)> {
        self.check_set(x)?;
        let to_host: Vec<u32> = x.to_vec();
        let map = IndexMap { to_host };
        let mut edges = Vec::new();
        for (sub_u, &host_u) in map.to_host.iter().enumerate() {
            for &host_v in self.neighbors(host_u) {
                if host_v > host_u && x.contains(host_v) {
                    let sub_v = map.sub_id(host_v).unwrap();
                    edges.push((sub_u as u32, sub_v));
                }
            }
        }
        Ok((Graph::build(map.to_host.len(), edges), map))
    }

    /// Connected components, each as a vertex set, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new(self.n());
        let mut components = Vec::new();
        for start in 0..self.n() as u32 {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::new(self.n());
            let mut queue = std::collections::VecDeque::from([start]);
            seen.insert(start);
            comp.insert(start);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if seen.insert(w) {
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// BFS spanning tree from vertex 0, edges in discovery order as
    /// `(parent, child)`. Errors if the graph is disconnected.
    pub fn spanning_tree(&self) -> Result<Vec<(u32, u32)>> {
        if self.n() == 0 {
            return Ok(Vec::new());
        }
        let mut seen = VertexSet::new(self.n());
        let mut queue = std::collections::VecDeque::from([0u32]);
        seen.insert(0);
        let mut tree = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if seen.insert(w) {
                    tree.push((v, w));
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != self.n() {
            return Err(Error::NotConnected);
        }
        Ok(tree)
    }

    /// Ordered adjacent pairs `(x, y)` with `x` in `xs`, `y` in `ys`.
    /// With overlapping sets an edge inside the overlap counts twice,
    /// matching the ordered-pair convention of the mixing bound.
    pub fn ordered_pairs_between(&self, xs: &VertexSet, ys: &VertexSet) -> Result<u64> {
        self.check_set(xs)?;
        self.check_set(ys)?;
        let mut count = 0u64;
        for x in xs {
            count += self
                .neighbors(x)
                .iter()
                .filter(|&&y| ys.contains(y))
                .count() as u64;
        }
        Ok(count)
    }

    /// Reads the plain edge-list format: first line `n m`, then `m` lines
    /// `u v` with 0-indexed endpoints. Loops and duplicates are rejected.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
        let mut tokens = Vec::new();
        for line in reader.lines() {
            let line = line?;
            for tok in line.split_whitespace() {
                tokens.push(tok.to_string());
            }
        }
        if tokens.len() < 2 {
            return Err(Error::Parse("missing header line `n m`".into()));
        }
        let parse = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| Error::Parse(format!("invalid integer `{s}`")))
        };
        let n = parse(&tokens[0])? as usize;
        let m = parse(&tokens[1])? as usize;
        let rest = &tokens[2..];
        if rest.len() != 2 * m {
            return Err(Error::Parse(format!(
                "expected {} edge endpoints, found {}",
                2 * m,
                rest.len()
            )));
        }
        let mut edges = Vec::with_capacity(m);
        for pair in rest.chunks(2) {
            let u = parse(&pair[0])?;
            let v = parse(&pair[1])?;
            if u > u32::MAX as u64 || v > u32::MAX as u64 {
                return Err(Error::Parse(format!("vertex id out of range: {u} {v}")));
            }
            edges.push((u as u32, v as u32));
        }
        Graph::from_edges(n, edges)
    }

    /// Writes the canonical edge-list form: header, then edges sorted by
    /// `(min endpoint, max endpoint)`.
    pub fn write_edge_list<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "{} {}", self.n(), self.edge_count)?;
        for (u, v) in self.edges() {
            writeln!(writer, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("edge list is ascii")
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edge_count)
    }
}
