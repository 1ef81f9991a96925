//! Bi-regular graphs built from an `r`-regular seed.
//!
//! * [`constr1`] joins two far-apart vertices, giving degrees `{r, r+1}`.
//! * [`constr2`] deletes `t` edges and joins a new vertex to all `2t`
//!   endpoints, giving degrees `{r, 2t}`.
//! * [`constr3`] deletes `2t` edges, adds an edge `w1 w2` and joins each of
//!   `w1`, `w2` to one endpoint of every deleted edge, giving `{r, 2t+1}`.
//!
//! Deleted edges are chosen pairwise at distance at least `g-2` unless
//! [`ConstructOptions::permissive`] is set. Every output has its girth
//! recomputed and is dropped when it is below `g`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::canon::Dedup;
use crate::codec::{GraphReader, ReadError};
use crate::graph::{Edge, Graph, Length};
use crate::verify::{self, Claim};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    AddEdge { u: usize, v: usize },
    Hub { deleted: Vec<Edge> },
    TwinHubs { deleted: Vec<Edge>, w1: Vec<usize>, w2: Vec<usize> },
}

impl Recipe {
    pub fn construction(&self) -> Construction {
        match self {
            Recipe::AddEdge { .. } => Construction::AddEdge,
            Recipe::Hub { .. } => Construction::Hub,
            Recipe::TwinHubs { .. } => Construction::TwinHubs,
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn edge_list(edges: &[Edge]) -> String {
    edges.iter().map(|e| format!("{}-{}", e.lo(), e.hi())).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::AddEdge { u, v } => write!(f, "c1 add={u}-{v}"),
            Recipe::Hub { deleted } => write!(f, "c2 del={}", edge_list(deleted)),
            Recipe::TwinHubs { deleted, w1, w2 } => write!(
                f,
                "c3 del={} w1={} w2={}",
                edge_list(deleted),
                join(w1, ","),
                join(w2, ",")
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construction {
    AddEdge,
    Hub,
    TwinHubs,
}

impl std::str::FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(Construction::AddEdge),
            "2" => Ok(Construction::Hub),
            "3" => Ok(Construction::TwinHubs),
            _ => Err(format!("unknown construction {s:?}, expected 1, 2 or 3")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionResult {
    pub graph: Graph,
    pub source_index: usize,
    pub recipe: Recipe,
    pub verified_girth: usize,
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("seed is not regular")]
    NotRegular,
    #[error("2t = {two_t} must exceed the seed degree {r}")]
    DegreeTooSmall { two_t: usize, r: usize },
    #[error(transparent)]
    Read(#[from] ReadError),
}

#[derive(Clone, Debug)]
pub struct ConstructOptions {
    /// Skip the edge-distance pre-filter and rely on girth verification.
    pub permissive: bool,
    /// Seeds above this order use greedy edge sets instead of all of them.
    pub exhaustive_limit: usize,
    /// Stop after this many distinct outputs per seed.
    pub max_results: Option<usize>,
    pub time_budget: Option<Duration>,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            permissive: false,
            exhaustive_limit: 64,
            max_results: None,
            time_budget: None,
        }
    }
}

fn seed_degree(g: &Graph) -> Result<usize, ConstructError> {
    let r = g.degree(0);
    if g.order() == 0 || !g.is_regular(r) {
        return Err(ConstructError::NotRegular);
    }
    Ok(r)
}

fn distances(g: &Graph) -> Vec<Vec<u32>> {
    g.all_pairs_distances()
        .into_iter()
        .map(|row| row.into_iter().map(|d| d.unwrap_or(u32::MAX)).collect())
        .collect()
}

fn edge_distance(dist: &[Vec<u32>], a: Edge, b: Edge) -> u32 {
    let (a0, a1) = a.endpoints();
    let (b0, b1) = b.endpoints();
    dist[a0][b0].min(dist[a0][b1]).min(dist[a1][b0]).min(dist[a1][b1])
}

/// Joins every pair of vertices at distance at least `g-1`.
pub fn constr1(seed: &Graph, g: usize) -> Result<Vec<ConstructionResult>, ConstructError> {
    let r = seed_degree(seed)?;
    let dist = distances(seed);
    let mut seen = Dedup::new();
    let mut out = Vec::new();
    let n = seed.order();
    for u in 0..n {
        for v in u + 1..n {
            if (dist[u][v] as usize) < g.saturating_sub(1) {
                continue;
            }
            let mut h = seed.clone();
            h.add_edge(u, v).expect("distance is at least 2");
            let claim = Claim { order: n, r, m: r + 1, min_girth: g, high: Some(2) };
            if let Ok(girth) = verify::check(&h, &claim) {
                if seen.insert(&h) {
                    out.push(ConstructionResult {
                        graph: h,
                        source_index: 0,
                        recipe: Recipe::AddEdge { u, v },
                        verified_girth: girth.finite().unwrap_or(usize::MAX),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Sets of `size` pairwise non-adjacent edges, all at distance at least
/// `min_dist` from each other, passed to `visit` until it returns `false`.
fn edge_sets(
    seed: &Graph,
    dist: &[Vec<u32>],
    size: usize,
    min_dist: u32,
    exhaustive: bool,
    visit: &mut dyn FnMut(&[Edge]) -> bool,
) {
    let edges: Vec<Edge> = seed.edges().collect();
    let ok = |a: Edge, b: Edge| !a.shares_endpoint(b) && edge_distance(dist, a, b) >= min_dist.max(1);
    if exhaustive {
        fn rec(
            edges: &[Edge],
            from: usize,
            chosen: &mut Vec<Edge>,
            size: usize,
            ok: &dyn Fn(Edge, Edge) -> bool,
            visit: &mut dyn FnMut(&[Edge]) -> bool,
        ) -> bool {
            if chosen.len() == size {
                return visit(chosen);
            }
            for i in from..edges.len() {
                if chosen.iter().all(|&c| ok(c, edges[i])) {
                    chosen.push(edges[i]);
                    let go_on = rec(edges, i + 1, chosen, size, ok, visit);
                    chosen.pop();
                    if !go_on {
                        return false;
                    }
                }
            }
            true
        }
        rec(&edges, 0, &mut Vec::new(), size, &ok, visit);
        return;
    }
    // farthest-first from every starting edge
    let mut tried = std::collections::HashSet::new();
    for start in 0..edges.len() {
        let mut chosen = vec![edges[start]];
        while chosen.len() < size {
            let next = edges
                .iter()
                .filter(|&&e| chosen.iter().all(|&c| ok(c, e)))
                .max_by_key(|&&e| {
                    let d = chosen.iter().map(|&c| edge_distance(dist, c, e)).min().unwrap_or(0);
                    (d, std::cmp::Reverse((e.lo(), e.hi())))
                });
            match next {
                Some(&e) => chosen.push(e),
                None => break,
            }
        }
        if chosen.len() == size {
            chosen.sort();
            if tried.insert(chosen.clone()) && !visit(&chosen) {
                return;
            }
        }
    }
}

struct Collector {
    seen: Dedup,
    out: Vec<ConstructionResult>,
    max: Option<usize>,
    deadline: Option<Instant>,
}

impl Collector {
    fn new(opts: &ConstructOptions) -> Collector {
        Collector {
            seen: Dedup::new(),
            out: Vec::new(),
            max: opts.max_results,
            deadline: opts.time_budget.map(|d| Instant::now() + d),
        }
    }

    /// Records `h` if it passes `claim`; returns whether to keep going.
    fn offer(&mut self, h: Graph, claim: &Claim, recipe: impl FnOnce() -> Recipe) -> bool {
        if let Ok(girth) = verify::check(&h, claim) {
            if self.seen.insert(&h) {
                self.out.push(ConstructionResult {
                    graph: h,
                    source_index: 0,
                    recipe: recipe(),
                    verified_girth: girth.finite().unwrap_or(usize::MAX),
                });
            }
        }
        self.max.is_none_or(|m| self.out.len() < m) && self.deadline.is_none_or(|d| Instant::now() < d)
    }
}

fn min_edge_distance(g: usize, opts: &ConstructOptions) -> u32 {
    if opts.permissive {
        1
    } else {
        g.saturating_sub(2) as u32
    }
}

/// Deletes `t` edges and joins a new vertex to their endpoints.
pub fn constr2(seed: &Graph, t: usize, g: usize, opts: &ConstructOptions) -> Result<Vec<ConstructionResult>, ConstructError> {
    let r = seed_degree(seed)?;
    if 2 * t <= r {
        return Err(ConstructError::DegreeTooSmall { two_t: 2 * t, r });
    }
    let dist = distances(seed);
    let n = seed.order();
    let claim = Claim { order: n + 1, r, m: 2 * t, min_girth: g, high: Some(1) };
    let mut col = Collector::new(opts);
    let exhaustive = n <= opts.exhaustive_limit;
    edge_sets(seed, &dist, t, min_edge_distance(g, opts), exhaustive, &mut |del| {
        let mut h = seed.clone();
        let w = h.add_vertices(1);
        for e in del {
            h.remove_edge(e.lo(), e.hi());
            h.add_edge(e.lo(), w).expect("endpoints are distinct");
            h.add_edge(e.hi(), w).expect("endpoints are distinct");
        }
        col.offer(h, &claim, || Recipe::Hub { deleted: del.to_vec() })
    });
    Ok(col.out)
}

/// Deletes `2t` edges and attaches two adjacent new vertices, each to one
/// endpoint of every deleted edge.
pub fn constr3(seed: &Graph, t: usize, g: usize, opts: &ConstructOptions) -> Result<Vec<ConstructionResult>, ConstructError> {
    let r = seed_degree(seed)?;
    if 2 * t < r {
        return Err(ConstructError::DegreeTooSmall { two_t: 2 * t + 1, r });
    }
    let dist = distances(seed);
    let n = seed.order();
    let claim = Claim { order: n + 2, r, m: 2 * t + 1, min_girth: g, high: Some(2) };
    let mut col = Collector::new(opts);
    let exhaustive = n <= opts.exhaustive_limit;
    edge_sets(seed, &dist, 2 * t, min_edge_distance(g, opts), exhaustive, &mut |del| {
        // the first edge's orientation is fixed since w1 and w2 are interchangeable
        for mask in 0..1u64 << (del.len() - 1) {
            let mut h = seed.clone();
            let w1 = h.add_vertices(2);
            let w2 = w1 + 1;
            h.add_edge(w1, w2).expect("new vertices");
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (i, e) in del.iter().enumerate() {
                let (x, y) = if i > 0 && mask >> (i - 1) & 1 == 1 { (e.hi(), e.lo()) } else { (e.lo(), e.hi()) };
                h.remove_edge(x, y);
                h.add_edge(x, w1).expect("new vertex");
                h.add_edge(y, w2).expect("new vertex");
                a.push(x);
                b.push(y);
            }
            let go_on = col.offer(h, &claim, || Recipe::TwinHubs { deleted: del.to_vec(), w1: a, w2: b });
            if !go_on {
                return false;
            }
        }
        true
    });
    Ok(col.out)
}

/// Parameters of a seed scan.
#[derive(Clone, Debug)]
pub struct ScanParams {
    pub construction: Construction,
    /// Number of deleted edges (`t` for construction 2, `2t` halves for 3).
    pub t: usize,
    pub g: usize,
    pub options: ConstructOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResult {
    pub r: usize,
    pub m: usize,
    pub g: usize,
    pub order: usize,
    /// 1-based line of the seed in the input.
    pub seed_line: usize,
    pub recipe: Recipe,
    pub graph: Graph,
}

#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub seeds: usize,
    pub skipped: usize,
    pub best: BTreeMap<(usize, usize, usize), BestResult>,
}

impl ScanReport {
    pub const HEADER: &'static str = "r\tm\tg\torder\tseed_line\trecipe";

    pub fn rows(&self) -> impl Iterator<Item = String> + '_ {
        self.best
            .values()
            .map(|b| format!("{}\t{}\t{}\t{}\t{}\t{}", b.r, b.m, b.g, b.order, b.seed_line, b.recipe))
    }
}

/// Applies one construction to the seed.
pub fn apply(seed: &Graph, p: &ScanParams) -> Result<Vec<ConstructionResult>, ConstructError> {
    match p.construction {
        Construction::AddEdge => constr1(seed, p.g),
        Construction::Hub => constr2(seed, p.t, p.g, &p.options),
        Construction::TwinHubs => constr3(seed, p.t, p.g, &p.options),
    }
}

/// Runs a construction over every seed in a graph6/sparse6 stream and keeps,
/// per `(r,m,g)`, the smallest output whose girth is exactly `g`.
/// Seeds that are not regular or have girth below `g` are skipped.
pub fn scan_seeds<R: BufRead>(input: R, p: &ScanParams) -> Result<ScanReport, ConstructError> {
    let mut report = ScanReport::default();
    let mut line = 0;
    for seed in GraphReader::new(input) {
        let (seed_line, seed) = match seed {
            Ok(s) => {
                line += 1;
                (line, s)
            }
            Err(e) => return Err(e.into()),
        };
        report.seeds += 1;
        if seed.order() == 0 || !seed.is_regular(seed.degree(0)) || seed.girth() < Length::Finite(p.g) {
            report.skipped += 1;
            continue;
        }
        let r = seed.degree(0);
        for mut res in apply(&seed, p)? {
            res.source_index = seed_line - 1;
            if res.verified_girth != p.g {
                continue;
            }
            let m = res.graph.max_degree();
            let order = res.graph.order();
            let better = report.best.get(&(r, m, p.g)).is_none_or(|b| order < b.order);
            if better {
                report.best.insert(
                    (r, m, p.g),
                    BestResult { r, m, g: p.g, order, seed_line, recipe: res.recipe, graph: res.graph },
                );
            }
        }
    }
    Ok(report)
}
