//! Simple undirected graphs with distance and girth primitives.
//!
//! Vertices are labelled `0..order`. Adjacency is kept as sorted neighbour
//! lists, so neighbour tests are `O(log deg)` and breadth-first searches are
//! `O(n + m)`. The exhaustive generator uses its own fixed-width bitset state
//! and only converts to [`Graph`] on emission.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// A hop count that may be infinite (unreachable targets, acyclic graphs).
///
/// `Finite(_)` orders before `Infinite`, so `min`/`max` behave as expected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(d) => Some(d),
            Length::Infinite => None,
        }
    }

    /// Adds a finite amount; infinity absorbs.
    pub fn plus(self, k: usize) -> Length {
        match self {
            Length::Finite(d) => Length::Finite(d + k),
            Length::Infinite => Length::Infinite,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(d) => write!(f, "{d}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {{{0},{1}}} already present")]
    DuplicateEdge(usize, usize),
}

/// An unordered pair of distinct vertices, stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: usize,
    b: usize,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Result<Edge, GraphError> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Edge { a: u, b: v }),
            std::cmp::Ordering::Greater => Ok(Edge { a: v, b: u }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(u)),
        }
    }

    pub fn lo(self) -> usize {
        self.a
    }

    pub fn hi(self) -> usize {
        self.b
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn contains(self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    pub fn shares_endpoint(self, other: Edge) -> bool {
        self.contains(other.a) || self.contains(other.b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// Either end of a distance query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    Vertex(usize),
    Edge(Edge),
}

impl From<usize> for Site {
    fn from(v: usize) -> Site {
        Site::Vertex(v)
    }
}

impl From<Edge> for Site {
    fn from(e: Edge) -> Site {
        Site::Edge(e)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    nbrs: Vec<Vec<u32>>,
    size: usize,
}

impl Graph {
    /// Edgeless graph on `order` vertices.
    pub fn new(order: usize) -> Graph {
        Graph {
            nbrs: vec![Vec::new(); order],
            size: 0,
        }
    }

    pub fn from_edges<I>(order: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(order);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn cycle(order: usize) -> Graph {
        let mut g = Graph::new(order);
        if order >= 3 {
            for i in 0..order {
                g.add_edge(i, (i + 1) % order).expect("cycle edges are distinct");
            }
        }
        g
    }

    pub fn path(order: usize) -> Graph {
        Graph::from_edges(order, (1..order).map(|i| (i - 1, i))).expect("path edges are distinct")
    }

    pub fn complete(order: usize) -> Graph {
        let mut g = Graph::new(order);
        for v in 0..order {
            for u in 0..v {
                g.add_edge(u, v).expect("distinct pairs");
            }
        }
        g
    }

    pub fn order(&self) -> usize {
        self.nbrs.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.nbrs[v].iter().map(|&u| u as usize)
    }

    pub(crate) fn neighbor_slice(&self, v: usize) -> &[u32] {
        &self.nbrs[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && v < self.order() && self.nbrs[u].binary_search(&(v as u32)).is_ok()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.order() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            })
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let pos = match self.nbrs[u].binary_search(&(v as u32)) {
            Ok(_) => return Err(GraphError::DuplicateEdge(u.min(v), u.max(v))),
            Err(p) => p,
        };
        self.nbrs[u].insert(pos, v as u32);
        let pos = self.nbrs[v]
            .binary_search(&(u as u32))
            .expect_err("adjacency is symmetric");
        self.nbrs[v].insert(pos, u as u32);
        self.size += 1;
        Ok(())
    }

    /// Removes `{u,v}`; returns whether it was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.order() || v >= self.order() {
            return false;
        }
        match self.nbrs[u].binary_search(&(v as u32)) {
            Ok(p) => {
                self.nbrs[u].remove(p);
                let q = self.nbrs[v]
                    .binary_search(&(u as u32))
                    .expect("adjacency is symmetric");
                self.nbrs[v].remove(q);
                self.size -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Appends `k` isolated vertices, returning the label of the first.
    pub fn add_vertices(&mut self, k: usize) -> usize {
        let first = self.order();
        self.nbrs.resize(first + k, Vec::new());
        first
    }

    /// Edges in increasing `(lo, hi)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.nbrs.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| Edge { a: u, b: v as usize })
        })
    }

    pub fn degree_set(&self) -> BTreeSet<usize> {
        self.nbrs.iter().map(Vec::len).collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.nbrs.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.nbrs.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.nbrs.iter().all(|ns| ns.len() == r)
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order(), "permutation length");
        let mut nbrs = vec![Vec::new(); self.order()];
        for (v, ns) in self.nbrs.iter().enumerate() {
            let mut mapped: Vec<u32> = ns.iter().map(|&u| perm[u as usize] as u32).collect();
            mapped.sort_unstable();
            nbrs[perm[v]] = mapped;
        }
        Graph {
            nbrs,
            size: self.size,
        }
    }

    /// Subgraph with vertex `v` deleted; later labels shift down by one.
    pub fn without_vertex(&self, v: usize) -> Graph {
        let map = |u: usize| if u > v { u - 1 } else { u };
        let edges = self
            .edges()
            .filter(|e| !e.contains(v))
            .map(|e| (map(e.lo()), map(e.hi())));
        Graph::from_edges(self.order() - 1, edges).expect("subgraph of a simple graph")
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.order();
        let mut g = self.clone();
        g.add_vertices(other.order());
        for e in other.edges() {
            g.add_edge(e.lo() + off, e.hi() + off).expect("disjoint edges");
        }
        g
    }

    /// Breadth-first hop counts from a set of sources.
    pub fn bfs_from_set(&self, sources: &[usize]) -> Vec<Length> {
        let mut dist = vec![Length::Infinite; self.order()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == Length::Infinite {
                dist[s] = Length::Finite(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let next = dist[v].plus(1);
            for &u in &self.nbrs[v] {
                let u = u as usize;
                if dist[u] == Length::Infinite {
                    dist[u] = next;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, source: usize) -> Vec<Length> {
        self.bfs_from_set(&[source])
    }

    /// All-pairs hop counts; `None` entries are unreachable. Quadratic memory.
    pub fn all_pairs_distances(&self) -> Vec<Vec<Option<u32>>> {
        (0..self.order())
            .map(|v| self.bfs(v).into_iter().map(|d| d.finite().map(|x| x as u32)).collect())
            .collect()
    }

    pub fn diameter(&self) -> Length {
        (0..self.order())
            .flat_map(|v| self.bfs(v))
            .max()
            .unwrap_or(Length::Finite(0))
    }

    /// Length of a shortest cycle, or `Infinite` for forests.
    pub fn girth(&self) -> Length {
        self.girth_below(usize::MAX)
    }

    /// Exact girth when it is below `cutoff`; otherwise some value `>= cutoff`.
    pub fn girth_below(&self, cutoff: usize) -> Length {
        let n = self.order();
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if self.nbrs[s].len() < 2 {
                continue;
            }
            for d in dist.iter_mut() {
                *d = u32::MAX;
            }
            dist[s] = 0;
            parent[s] = u32::MAX;
            queue.clear();
            queue.push_back(s);
            // Any cycle through s closes at depth <= (best-1)/2 on the far side.
            while let Some(v) = queue.pop_front() {
                let dv = dist[v] as usize;
                if 2 * dv + 1 >= best || 2 * dv + 1 >= cutoff.saturating_add(1) {
                    break;
                }
                for &u in &self.nbrs[v] {
                    let u = u as usize;
                    if dist[u] == u32::MAX {
                        dist[u] = (dv + 1) as u32;
                        parent[u] = v as u32;
                        queue.push_back(u);
                    } else if parent[v] != u as u32 {
                        let len = dv + dist[u] as usize + 1;
                        best = best.min(len);
                    }
                }
            }
            if best == 3 {
                break;
            }
        }
        if best == usize::MAX {
            Length::Infinite
        } else {
            Length::Finite(best)
        }
    }

    pub fn distance(&self, a: impl Into<Site>, b: impl Into<Site>) -> Length {
        DistanceOracle::new(self, a.into()).to(b.into())
    }

    /// Whether adding the non-edge `{u,v}` closes a cycle shorter than `g`.
    pub fn would_create_short_cycle(&self, u: usize, v: usize, g: usize) -> bool {
        match bounded_distance(self, u, v, g.saturating_sub(2)) {
            Some(d) => d + 1 < g,
            None => false,
        }
    }
}

/// Hop count from `u` to `v` if it is at most `limit`.
pub(crate) fn bounded_distance(g: &Graph, u: usize, v: usize, limit: usize) -> Option<usize> {
    if u == v {
        return Some(0);
    }
    let mut seen = vec![false; g.order()];
    seen[u] = true;
    let mut frontier = vec![u];
    let mut next = Vec::new();
    for depth in 1..=limit {
        for &x in &frontier {
            for &y in &g.nbrs[x] {
                let y = y as usize;
                if y == v {
                    return Some(depth);
                }
                if !seen[y] {
                    seen[y] = true;
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    None
}

/// Distances from a vertex or an edge to every vertex.
///
/// An edge source is treated as the two-vertex set of its endpoints, which
/// gives exactly `d(x, {a,b}) = min(d(x,a), d(x,b))`.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    source: Site,
    dist: Vec<Length>,
}

impl DistanceOracle {
    pub fn new(g: &Graph, source: Site) -> DistanceOracle {
        let dist = match source {
            Site::Vertex(v) => g.bfs(v),
            Site::Edge(e) => g.bfs_from_set(&[e.lo(), e.hi()]),
        };
        DistanceOracle { source, dist }
    }

    pub fn source(&self) -> Site {
        self.source
    }

    pub fn to_vertex(&self, v: usize) -> Length {
        self.dist[v]
    }

    pub fn to(&self, target: Site) -> Length {
        match target {
            Site::Vertex(v) => self.dist[v],
            Site::Edge(e) => self.dist[e.lo()].min(self.dist[e.hi()]),
        }
    }

    pub fn distances(&self) -> &[Length] {
        &self.dist
    }
}

/// Well-known graphs used throughout the tests and demos.
pub mod named {
    use super::Graph;

    pub fn petersen() -> Graph {
        generalized_petersen(5, 2)
    }

    /// `GP(n, k)`: outer cycle `0..n`, spokes `i -- n+i`, inner edges `n+i -- n+(i+k)`.
    pub fn generalized_petersen(n: usize, k: usize) -> Graph {
        let mut edges = Vec::with_capacity(3 * n);
        for i in 0..n {
            edges.push((i, (i + 1) % n));
            edges.push((i, n + i));
            edges.push((n + i, n + (i + k) % n));
        }
        Graph::from_edges(2 * n, edges).expect("generalized Petersen parameters give a simple graph")
    }

    /// Heawood graph, the incidence graph of the Fano plane (14 vertices, girth 6).
    pub fn heawood() -> Graph {
        lcf(14, &[5, -5])
    }

    /// Möbius–Kantor graph GP(8,3) (16 vertices, girth 6).
    pub fn moebius_kantor() -> Graph {
        generalized_petersen(8, 3)
    }

    /// Desargues graph GP(10,3) (20 vertices, girth 6, diameter 5).
    pub fn desargues() -> Graph {
        generalized_petersen(10, 3)
    }

    /// Hamiltonian cubic graph from LCF notation `[jumps]^(n/len)`.
    pub fn lcf(n: usize, jumps: &[i64]) -> Graph {
        let mut g = Graph::cycle(n);
        for i in 0..n {
            let j = jumps[i % jumps.len()];
            let t = (i as i64 + j).rem_euclid(n as i64) as usize;
            if !g.has_edge(i, t) {
                g.add_edge(i, t).expect("chord endpoints differ");
            }
        }
        g
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    /// Shortest cycle by brute force: for every edge, the shortest path
    /// between its endpoints avoiding it, plus one.
    fn girth_by_edge_removal(g: &Graph) -> Length {
        let mut best = Length::Infinite;
        for e in g.edges().collect::<Vec<_>>() {
            let mut h = g.clone();
            h.remove_edge(e.lo(), e.hi());
            best = best.min(h.bfs(e.lo())[e.hi()].plus(1));
        }
        best
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(Graph::complete(4).girth(), Length::Finite(3));
        assert_eq!(Graph::path(5).girth(), Length::Infinite);
        assert_eq!(Graph::cycle(7).girth(), Length::Finite(7));
        assert_eq!(petersen().girth(), Length::Finite(5));
    }

    #[test]
    fn heawood_girth_matches_bfs_oracle() {
        let h = heawood();
        assert_eq!(h.order(), 14);
        assert!(h.is_regular(3));
        assert_eq!(girth_by_edge_removal(&h), Length::Finite(6));
        assert_eq!(h.girth(), Length::Finite(6));
    }

    #[test]
    fn named_graph_invariants() {
        let mk = moebius_kantor();
        assert!(mk.is_regular(3));
        assert_eq!(mk.girth(), Length::Finite(6));
        let d = desargues();
        assert_eq!(d.order(), 20);
        assert_eq!(d.girth(), Length::Finite(6));
        assert_eq!(d.diameter(), Length::Finite(5));
        assert_eq!(petersen().diameter(), Length::Finite(2));
    }

    #[test]
    fn distances_on_six_cycle() {
        let c6 = Graph::cycle(6);
        assert_eq!(c6.distance(0, 3), Length::Finite(3));
        let e01 = Edge::new(0, 1).unwrap();
        let e34 = Edge::new(3, 4).unwrap();
        // endpoint pairs: d(0,3)=3, d(0,4)=2, d(1,3)=2, d(1,4)=3
        assert_eq!(c6.distance(e01, e34), Length::Finite(2));
        assert_eq!(c6.distance(e34, e01), Length::Finite(2));
        assert_eq!(c6.distance(0, e01), Length::Finite(0));
        assert_eq!(c6.distance(e01, 1), Length::Finite(0));
    }

    #[test]
    fn unreachable_is_infinite() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance(0, 3), Length::Infinite);
        assert_eq!(g.girth(), Length::Infinite);
    }

    #[test]
    fn short_cycle_prediction() {
        let c5 = Graph::cycle(5);
        assert!(c5.would_create_short_cycle(0, 2, 5));
        assert!(!c5.would_create_short_cycle(0, 2, 3));
        let p = petersen();
        for u in 0..10 {
            for v in 0..u {
                if !p.has_edge(u, v) {
                    assert!(p.would_create_short_cycle(u, v, 5));
                }
            }
        }
    }

    #[test]
    fn degree_sets() {
        assert_eq!(petersen().degree_set(), BTreeSet::from([3]));
        assert_eq!(star(4).degree_set(), BTreeSet::from([1, 4]));
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(0, 2).unwrap();
        assert_eq!(g.add_edge(2, 0), Err(GraphError::DuplicateEdge(0, 2)));
        assert!(matches!(g.add_edge(0, 3), Err(GraphError::VertexOutOfRange { .. })));
        assert!(Edge::new(4, 4).is_err());
        assert_eq!(Edge::new(5, 2).unwrap().endpoints(), (2, 5));
    }

    #[test]
    fn without_vertex_relabels() {
        let g = Graph::cycle(5).without_vertex(0);
        assert_eq!(g.order(), 4);
        assert_eq!(g.size(), 3);
        assert_eq!(g.girth(), Length::Infinite);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (2..=max_n).prop_flat_map(|n| {
                proptest::collection::vec(proptest::bool::weighted(0.3), n * (n - 1) / 2).prop_map(move |bits| {
                    let mut g = Graph::new(n);
                    let mut k = 0;
                    for v in 1..n {
                        for u in 0..v {
                            if bits[k] {
                                g.add_edge(u, v).unwrap();
                            }
                            k += 1;
                        }
                    }
                    g
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(10_000))]
            #[test]
            fn girth_after_adding_edge(g in arb_graph(12), a in 0usize..12, b in 0usize..12) {
                let n = g.order();
                let (u, v) = (a % n, b % n);
                if u == v || g.has_edge(u, v) {
                    return Ok(());
                }
                let expected = g.girth().min(g.distance(u, v).plus(1));
                let mut h = g.clone();
                h.add_edge(u, v).unwrap();
                prop_assert_eq!(h.girth(), expected);
                prop_assert_eq!(girth_by_edge_removal(&h), expected);
            }
        }

        proptest! {
            #[test]
            fn distance_is_symmetric(g in arb_graph(10), a in 0usize..10, b in 0usize..10, c in 0usize..10, d in 0usize..10) {
                let n = g.order();
                let (a, b, c, d) = (a % n, b % n, c % n, d % n);
                prop_assert_eq!(g.distance(a, b), g.distance(b, a));
                if let (Ok(e), Ok(f)) = (Edge::new(a, b), Edge::new(c, d)) {
                    prop_assert_eq!(g.distance(e, f), g.distance(f, e));
                    prop_assert_eq!(g.distance(e, c), g.distance(c, e));
                    // min-over-endpoints definition
                    let direct = g.distance(a, f).min(g.distance(b, f));
                    prop_assert_eq!(g.distance(e, f), direct);
                }
            }

            #[test]
            fn handshake_after_edits(ops in proptest::collection::vec((0usize..9, 0usize..9, any::<bool>()), 0..60)) {
                let mut g = Graph::new(9);
                for (u, v, add) in ops {
                    if add { let _ = g.add_edge(u, v); } else { g.remove_edge(u, v); }
                    let total: usize = (0..9).map(|x| g.degree(x)).sum();
                    prop_assert_eq!(total, 2 * g.size());
                    for x in 0..9 {
                        for y in g.neighbors(x) {
                            prop_assert!(g.has_edge(y, x));
                        }
                    }
                }
            }
        }
    }
}
