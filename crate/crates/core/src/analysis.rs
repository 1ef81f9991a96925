//! Statistics over families of `({r,m};g)`-graphs, a generalisation of the
//! Petersen graph, and Hamiltonicity checks.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Length};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph {index}: vertex {vertex} has degree {degree}, expected {r} or {m}")]
    DegreeSet { index: usize, vertex: usize, degree: usize, r: usize, m: usize },
    #[error("order {order} exceeds the limit {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("m = {0} is too small, need at least 3")]
    TooSmall(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyStats {
    pub count: usize,
    /// Smallest distance between two degree-`m` vertices over the family,
    /// infinite when no graph has two of them.
    pub dmin: Length,
    pub vm_min: usize,
    pub vm_max: usize,
    /// Some graph has two adjacent degree-`m` vertices.
    pub adjacent_high: bool,
}

impl FamilyStats {
    pub const HEADER: &'static str = "r\tm\tg\tn\tcount\tdmin\tvmMin\tvmMax";

    pub fn row(&self, r: usize, m: usize, g: usize, n: usize) -> String {
        format!(
            "{r}\t{m}\t{g}\t{n}\t{}\t{}\t{}\t{}",
            self.count, self.dmin, self.vm_min, self.vm_max
        )
    }
}

impl fmt::Display for FamilyStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "count={} dmin={} vm=[{},{}]",
            self.count, self.dmin, self.vm_min, self.vm_max
        )
    }
}

/// Smallest distance between two vertices of degree `m`.
pub fn high_degree_distance(g: &Graph, m: usize) -> Length {
    let high: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) == m).collect();
    let mut best = Length::Infinite;
    for (i, &a) in high.iter().enumerate() {
        let dist = g.bfs(a);
        for &b in &high[i + 1..] {
            best = best.min(dist[b]);
        }
    }
    best
}

pub fn family_stats<'a, I>(graphs: I, r: usize, m: usize) -> Result<FamilyStats, AnalysisError>
where
    I: IntoIterator<Item = &'a Graph>,
{
    let mut stats = FamilyStats {
        count: 0,
        dmin: Length::Infinite,
        vm_min: usize::MAX,
        vm_max: 0,
        adjacent_high: false,
    };
    for (index, g) in graphs.into_iter().enumerate() {
        let mut vm = 0;
        for v in 0..g.order() {
            match g.degree(v) {
                d if d == m => vm += 1,
                d if d == r => {}
                degree => return Err(AnalysisError::DegreeSet { index, vertex: v, degree, r, m }),
            }
        }
        let d = high_degree_distance(g, m);
        stats.count += 1;
        stats.dmin = stats.dmin.min(d);
        stats.adjacent_high |= d == Length::Finite(1);
        stats.vm_min = stats.vm_min.min(vm);
        stats.vm_max = stats.vm_max.max(vm);
    }
    if stats.count == 0 {
        stats.vm_min = 0;
    }
    Ok(stats)
}

/// The graph on `a`, `b_0..b_{m-1}`, `c_0..c_{2m-1}` with `a` joined to
/// every `b_i`, the `c_i` forming a cycle, and `b_i` joined to `c_{2i}` and
/// `c_{2i+3}` (indices mod `2m`). It has order `3m+1` and girth 5, and for
/// `m = 3` it is the Petersen graph.
pub fn petersen_family(m: usize) -> Result<Graph, AnalysisError> {
    if m < 3 {
        return Err(AnalysisError::TooSmall(m));
    }
    let b = |i: usize| 1 + i % m;
    let c = |i: usize| 1 + m + i % (2 * m);
    let mut edges = Vec::new();
    for i in 0..m {
        edges.push((0, b(i)));
        edges.push((b(i), c(2 * i)));
        edges.push((b(i), c(2 * i + 3)));
    }
    for i in 0..2 * m {
        edges.push((c(i), c(i + 1)));
    }
    Ok(Graph::from_edges(3 * m + 1, edges).expect("family edges are distinct"))
}

pub const HAMILTON_LIMIT: usize = 64;

struct Hamilton<'a> {
    g: &'a Graph,
    nbr: Vec<u64>,
    visited: u64,
    all: u64,
}

impl Hamilton<'_> {
    /// Every unvisited vertex still needs two usable neighbours.
    fn viable(&self, end: usize) -> bool {
        let open = !self.visited & self.all;
        let ends = 1u64 | 1 << end;
        let mut x = open;
        while x != 0 {
            let v = x.trailing_zeros() as usize;
            x &= x - 1;
            if (self.nbr[v] & (open | ends)).count_ones() < 2 {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, end: usize, len: usize) -> bool {
        if len == self.g.order() {
            return self.nbr[end] & 1 != 0;
        }
        if !self.viable(end) {
            return false;
        }
        let mut cand = self.nbr[end] & !self.visited;
        // a candidate with a single remaining exit must be taken now
        let open = !self.visited & self.all;
        let mut forced = None;
        let mut x = cand;
        while x != 0 {
            let v = x.trailing_zeros() as usize;
            x &= x - 1;
            if (self.nbr[v] & (open | 1)).count_ones() <= 1 && len + 1 < self.g.order() {
                if forced.is_some() {
                    return false;
                }
                forced = Some(v);
            }
        }
        if let Some(v) = forced {
            cand = 1 << v;
        }
        let mut order: Vec<usize> = Vec::new();
        while cand != 0 {
            order.push(cand.trailing_zeros() as usize);
            cand &= cand - 1;
        }
        order.sort_by_key(|&v| (self.nbr[v] & open).count_ones());
        for v in order {
            self.visited |= 1 << v;
            if self.extend(v, len + 1) {
                return true;
            }
            self.visited &= !(1 << v);
        }
        false
    }
}

/// Whether `g` has a cycle through all its vertices.
pub fn is_hamiltonian(g: &Graph) -> Result<bool, AnalysisError> {
    let n = g.order();
    if n > HAMILTON_LIMIT {
        return Err(AnalysisError::OrderTooLarge { order: n, limit: HAMILTON_LIMIT });
    }
    if n < 3 || (0..n).any(|v| g.degree(v) < 2) {
        return Ok(false);
    }
    let nbr = (0..n).map(|v| g.neighbors(v).fold(0u64, |s, w| s | 1 << w)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut h = Hamilton { g, nbr, visited: 1, all };
    Ok(h.extend(0, 1))
}

/// Not Hamiltonian, but every vertex-deleted subgraph is.
pub fn is_hypohamiltonian(g: &Graph) -> Result<bool, AnalysisError> {
    if is_hamiltonian(g)? {
        return Ok(false);
    }
    for v in 0..g.order() {
        if !is_hamiltonian(&g.without_vertex(v))? {
            return Ok(false);
        }
    }
    Ok(g.order() > 3)
}
