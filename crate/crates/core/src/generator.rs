//! Exhaustive generation of `({r,m};g)`-graphs of a given order.
//!
//! The search starts from the bi-regular Moore tree padded with isolated
//! vertices and adds edges one at a time. At every step it keeps the set of
//! edges that may still be added (`elig`), so that girth, degree caps and the
//! two bound-based rules are enforced incrementally. Edges are always added
//! at a single focus vertex chosen fail-first, and siblings already tried are
//! forbidden in later branches. Graphs isomorphic to one already expanded are
//! skipped.
//!
//! State is kept in `u128` bitsets, which limits the order to 128.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bounds::{self, MPlacement, ProblemSpec, RootKind};
use crate::canon::{Canonizer, Certificate};
use crate::graph::{Graph, Length};

pub const MAX_ORDER: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("order {0} exceeds the generator limit of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("order {n} is below the lower bound {bound}")]
    BelowBound { n: usize, bound: u64 },
    #[error("split residue {res} must be below the modulus {modulus}")]
    BadSplit { res: u64, modulus: u64 },
}

/// Extra pruning predicate, called with the graph after each added edge.
/// Returning `true` discards the branch.
pub type PruneHook = Arc<dyn Fn(&Graph) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct GeneratorOptions {
    pub split_res: u64,
    pub split_mod: u64,
    /// Number of added edges at which branches are dealt out to residues.
    pub split_depth: usize,
    pub dmin_rule: bool,
    pub placement_rule: bool,
    pub isolated_rule: bool,
    pub iso_rejection: bool,
    /// Generate `r`-regular graphs of girth at least `g` instead.
    pub regular: bool,
    pub hook: Option<PruneHook>,
    /// Total number of expanded states remembered for isomorphism
    /// rejection; past it the largest bucket is dropped.
    pub store_cap: usize,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions {
            split_res: 0,
            split_mod: 1,
            split_depth: 1,
            dmin_rule: true,
            placement_rule: true,
            isolated_rule: true,
            iso_rejection: true,
            regular: false,
            hook: None,
            store_cap: 8_000_000,
        }
    }
}

impl GeneratorOptions {
    /// All optional pruning off; only girth and degree caps remain.
    pub fn unpruned() -> Self {
        GeneratorOptions {
            dmin_rule: false,
            placement_rule: false,
            isolated_rule: false,
            ..Default::default()
        }
    }
}

impl fmt::Debug for GeneratorOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorOptions")
            .field("split", &format_args!("{}/{}@{}", self.split_res, self.split_mod, self.split_depth))
            .field("dmin_rule", &self.dmin_rule)
            .field("placement_rule", &self.placement_rule)
            .field("isolated_rule", &self.isolated_rule)
            .field("iso_rejection", &self.iso_rejection)
            .field("regular", &self.regular)
            .field("hook", &self.hook.is_some())
            .finish()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenStats {
    pub nodes: u64,
    pub iso_rejected: u64,
    pub pruned: u64,
    pub emitted: u64,
    pub store_flushes: u64,
}

#[inline]
fn bit(i: usize) -> u128 {
    1u128 << i
}

fn bits(mut s: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

/// The bi-regular Moore tree on labels `0..M` (level by level) followed by
/// `n - M` isolated vertices, with the level of each tree vertex.
///
/// With `regular` the root has degree `r` like every other inner vertex.
pub fn make_bmt(spec: &ProblemSpec, n: usize, regular: bool) -> Result<(Graph, Vec<Option<usize>>), GenError> {
    let (r, m, g) = (spec.r, spec.m, spec.g);
    let root_deg = if regular { r } else { m };
    let bound = if regular {
        bounds::moore_bound(r, g)
    } else {
        bounds::bireg_moore_bound(r, m, g)
    };
    if (n as u64) < bound {
        return Err(GenError::BelowBound { n, bound });
    }
    let d = spec.depth();
    let mut edges = Vec::new();
    let mut level = Vec::new();
    let mut frontier: Vec<usize>;
    match spec.root_kind() {
        RootKind::Vertex => {
            level.push(Some(0));
            frontier = (1..=root_deg).collect();
            for &c in &frontier {
                edges.push((0, c));
                level.push(Some(1));
            }
        }
        RootKind::Edge => {
            level.extend([Some(0), Some(0)]);
            edges.push((0, 1));
            let mut next = 2;
            frontier = Vec::new();
            for (parent, kids) in [(0, root_deg - 1), (1, r - 1)] {
                for _ in 0..kids {
                    edges.push((parent, next));
                    frontier.push(next);
                    level.push(Some(1));
                    next += 1;
                }
            }
        }
    }
    for lv in 2..=d {
        let mut next_frontier = Vec::new();
        let mut next = level.len();
        for &p in &frontier {
            for _ in 0..r - 1 {
                edges.push((p, next));
                next_frontier.push(next);
                level.push(Some(lv));
                next += 1;
            }
        }
        frontier = next_frontier;
    }
    if level.len() > n {
        return Err(GenError::BelowBound { n, bound });
    }
    level.resize(n, None);
    let tree = Graph::from_edges(n, edges).expect("tree edges are distinct");
    Ok((tree, level))
}

/// The mutable search state: partial graph, addable edges and counters.
pub struct SearchState {
    n: usize,
    r: usize,
    m: usize,
    g: usize,
    cap: usize,
    regular: bool,
    spec: ProblemSpec,
    adj: Vec<u128>,
    deg: Vec<usize>,
    elig: Vec<u128>,
    level: Vec<Option<usize>>,
    level_mask: Vec<u128>,
    cnt: Vec<u64>,
    pmax: Vec<u64>,
    threshold: Length,
    dmin_rule: bool,
    placement_rule: bool,
    isolated_rule: bool,
    stack: Vec<u128>,
    edges: usize,
    tree_edges: usize,
    ball_u: Vec<u128>,
    ball_w: Vec<u128>,
}

impl SearchState {
    pub fn new(spec: &ProblemSpec, n: usize, opts: &GeneratorOptions) -> Result<SearchState, GenError> {
        if n > MAX_ORDER {
            return Err(GenError::OrderTooLarge(n));
        }
        let (tree, level) = make_bmt(spec, n, opts.regular)?;
        let d = spec.depth();
        let regular = opts.regular;
        let cap = if regular { spec.r } else { spec.m };
        let mut level_mask = vec![0u128; d];
        for (v, l) in level.iter().enumerate() {
            if let Some(l) = *l {
                if l < d {
                    level_mask[l] |= bit(v);
                }
            }
        }
        let (pmax, threshold) = if regular {
            (vec![u64::MAX; d], Length::Finite(0))
        } else {
            (
                bounds::max_m_placement(spec, n as u64)
                    .map(|p| p.0)
                    .unwrap_or_else(|_| vec![0; d]),
                bounds::min_dist_deg_m(spec, n as u64),
            )
        };
        let mut st = SearchState {
            n,
            r: spec.r,
            m: spec.m,
            g: spec.g,
            cap,
            regular,
            spec: *spec,
            adj: vec![0; n],
            deg: vec![0; n],
            elig: vec![0; n],
            level,
            level_mask,
            cnt: vec![0; d],
            pmax,
            threshold,
            dmin_rule: opts.dmin_rule && !regular,
            placement_rule: opts.placement_rule && !regular,
            isolated_rule: opts.isolated_rule,
            stack: Vec::new(),
            edges: tree.size(),
            tree_edges: tree.size(),
            ball_u: Vec::new(),
            ball_w: Vec::new(),
        };
        for e in tree.edges() {
            let (a, b) = e.endpoints();
            st.adj[a] |= bit(b);
            st.adj[b] |= bit(a);
            st.deg[a] += 1;
            st.deg[b] += 1;
        }
        for v in 0..n {
            if st.is_high(v) {
                if let Some(l) = st.level[v].filter(|&l| l < d) {
                    st.cnt[l] += 1;
                }
            }
        }
        for x in 0..n {
            if st.deg[x] >= cap {
                continue;
            }
            let dist = tree.bfs(x);
            for y in x + 1..n {
                if st.deg[y] < cap && dist[y] >= Length::Finite(spec.g - 1) {
                    st.elig[x] |= bit(y);
                    st.elig[y] |= bit(x);
                }
            }
        }
        if st.placement_rule {
            st.refresh_placement();
        }
        if st.dmin_rule {
            st.refresh_dmin();
        }
        Ok(st)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg[v]
    }

    /// Number of edges added on top of the starting tree.
    pub fn added_edges(&self) -> usize {
        self.edges - self.tree_edges
    }

    pub fn threshold(&self) -> Length {
        self.threshold
    }

    pub fn max_placement(&self) -> MPlacement {
        MPlacement(self.pmax.clone())
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for x in 0..self.n {
            for y in bits(self.adj[x] & !((bit(x) << 1) - 1)) {
                g.add_edge(x, y).expect("bitset adjacency is simple");
            }
        }
        g
    }

    pub fn is_eligible(&self, x: usize, y: usize) -> bool {
        self.elig[x] & bit(y) != 0
    }

    pub fn eligible_count(&self, x: usize) -> usize {
        self.elig[x].count_ones() as usize
    }

    pub fn eligible_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| bits(self.elig[x] & !((bit(x) << 1) - 1)).map(move |y| (x, y)))
            .collect()
    }

    fn is_high(&self, v: usize) -> bool {
        !self.regular && self.deg[v] > self.r
    }

    fn high_mask(&self) -> u128 {
        (0..self.n).filter(|&v| self.is_high(v)).fold(0, |s, v| s | bit(v))
    }

    fn isolated_mask(&self) -> u128 {
        (0..self.n).filter(|&v| self.deg[v] == 0).fold(0, |s, v| s | bit(v))
    }

    /// Every vertex can still reach an allowed degree through eligible edges.
    pub fn enough_valid_edges_left(&self) -> bool {
        (0..self.n).all(|x| {
            let have = self.elig[x].count_ones() as usize;
            let d = self.deg[x];
            if d < self.r {
                have >= self.r - d
            } else if d > self.r {
                have >= self.m - d
            } else {
                true
            }
        })
    }

    /// The vertex with fewest eligible edges among those accepted by `pred`,
    /// lowest label first on ties.
    pub fn select_fail_first_vertex(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        (0..self.n)
            .filter(|&v| pred(self.deg[v]))
            .min_by_key(|&v| (self.elig[v].count_ones(), v))
    }

    /// Candidate partners of `u`, keeping only the lowest isolated one.
    pub fn apply_isolated_points_rule(&self, candidates: u128) -> u128 {
        if !self.isolated_rule {
            return candidates;
        }
        let iso = candidates & self.isolated_mask();
        if iso == 0 {
            candidates
        } else {
            (candidates & !iso) | (iso & iso.wrapping_neg())
        }
    }

    fn forbid(&mut self, x: usize, mask: u128) {
        let removed = self.elig[x] & mask;
        if removed == 0 {
            return;
        }
        self.elig[x] &= !mask;
        for y in bits(removed) {
            self.elig[y] &= !bit(x);
        }
    }

    fn freeze(&mut self, x: usize) {
        self.forbid(x, u128::MAX);
    }

    fn balls(adj: &[u128], s: usize, radius: usize, out: &mut Vec<u128>) {
        out.clear();
        let mut seen = bit(s);
        let mut frontier = bit(s);
        out.push(seen);
        for _ in 0..radius {
            let mut next = 0;
            for x in bits(frontier) {
                next |= adj[x];
            }
            frontier = next & !seen;
            seen |= frontier;
            out.push(seen);
        }
    }

    fn multi_balls(&self, sources: u128, radius: usize) -> Vec<u128> {
        let mut out = Vec::with_capacity(radius + 1);
        let mut seen = sources;
        let mut frontier = sources;
        out.push(seen);
        for _ in 0..radius {
            let mut next = 0;
            for x in bits(frontier) {
                next |= self.adj[x];
            }
            frontier = next & !seen;
            seen |= frontier;
            out.push(seen);
        }
        out
    }

    /// Adds `{u,w}` (which must be eligible) and updates the eligible set.
    /// Returns `false` when a pruning rule shows the new graph has no
    /// completion; the edge must still be undone with [`Self::remove_edge`].
    pub fn add_edge(&mut self, u: usize, w: usize) -> bool {
        debug_assert!(self.is_eligible(u, w));
        let reach = self.g.saturating_sub(3);
        let mut bu = std::mem::take(&mut self.ball_u);
        let mut bw = std::mem::take(&mut self.ball_w);
        Self::balls(&self.adj, u, reach, &mut bu);
        Self::balls(&self.adj, w, reach, &mut bw);
        self.stack.extend_from_slice(&self.elig);
        self.adj[u] |= bit(w);
        self.adj[w] |= bit(u);
        self.deg[u] += 1;
        self.deg[w] += 1;
        self.edges += 1;
        // pairs joined by a path of length < g-1 through the new edge
        for a in 0..=reach {
            let layer = bu[a] & !if a == 0 { 0 } else { bu[a - 1] };
            for x in bits(layer) {
                self.forbid(x, bw[reach - a]);
            }
        }
        self.ball_u = bu;
        self.ball_w = bw;
        let mut raised = false;
        for x in [u, w] {
            if self.deg[x] >= self.cap {
                self.freeze(x);
            }
            if !self.regular && self.deg[x] == self.r + 1 {
                raised = true;
                if let Some(l) = self.level[x].filter(|&l| l < self.cnt.len()) {
                    self.cnt[l] += 1;
                }
            }
        }
        let mut ok = true;
        if raised && self.placement_rule {
            ok &= self.placement_ok();
            if ok {
                self.refresh_placement();
            }
        }
        if ok && self.dmin_rule {
            ok &= self.refresh_dmin();
        }
        ok
    }

    /// Undoes the most recent [`Self::add_edge`], which must have been `{u,w}`.
    pub fn remove_edge(&mut self, u: usize, w: usize) {
        for x in [u, w] {
            if !self.regular && self.deg[x] == self.r + 1 {
                if let Some(l) = self.level[x].filter(|&l| l < self.cnt.len()) {
                    self.cnt[l] -= 1;
                }
            }
            self.deg[x] -= 1;
        }
        self.adj[u] &= !bit(w);
        self.adj[w] &= !bit(u);
        self.edges -= 1;
        let base = self.stack.len() - self.n;
        self.elig.copy_from_slice(&self.stack[base..]);
        self.stack.truncate(base);
    }

    fn placement_order(&self, counts: &[u64]) -> Option<u64> {
        bounds::bmt_order(&self.spec, &MPlacement(counts.to_vec())).ok()
    }

    fn placement_ok(&self) -> bool {
        self.cnt.iter().zip(&self.pmax).all(|(c, p)| c <= p)
            && self.placement_order(&self.cnt).is_some_and(|o| o <= self.n as u64)
    }

    /// Freezes degree-`r` tree vertices on levels that cannot take another
    /// high-degree vertex.
    fn refresh_placement(&mut self) {
        let mut counts = self.cnt.clone();
        for l in 0..counts.len() {
            counts[l] += 1;
            let full = self.cnt[l] >= self.pmax[l]
                || !self.placement_order(&counts).is_some_and(|o| o <= self.n as u64);
            counts[l] -= 1;
            if full {
                for x in bits(self.level_mask[l]) {
                    if self.deg[x] == self.r {
                        self.freeze(x);
                    }
                }
            }
        }
    }

    /// Checks that high-degree vertices are far enough apart and removes
    /// edges that would bring a new one too close.
    fn refresh_dmin(&mut self) -> bool {
        let high = self.high_mask();
        let at_least_r = (0..self.n).filter(|&v| self.deg[v] >= self.r).fold(0u128, |s, v| s | bit(v));
        match self.threshold {
            Length::Infinite => {
                if high.count_ones() >= 2 {
                    return false;
                }
                for x in bits(at_least_r & !high) {
                    self.freeze(x);
                }
                true
            }
            Length::Finite(t) if t >= 2 => {
                let mut ball = Vec::new();
                for a in bits(high) {
                    Self::balls(&self.adj, a, t - 1, &mut ball);
                    if ball[t - 1] & high & !bit(a) != 0 {
                        return false;
                    }
                }
                let hc = self.multi_balls(high, t - 1);
                for x in bits(at_least_r & !high) {
                    if hc[t - 1] & bit(x) != 0 {
                        self.freeze(x);
                    } else {
                        self.forbid(x, hc[t - 2] | at_least_r);
                    }
                }
                for x in bits(high) {
                    self.forbid(x, at_least_r);
                }
                true
            }
            _ => true,
        }
    }

    /// Whether the current graph is a solution (degree set check only).
    fn is_complete(&self) -> bool {
        if self.regular {
            self.deg.iter().all(|&d| d == self.r)
        } else {
            self.deg.iter().all(|&d| d == self.r || d == self.m) && self.deg.contains(&self.r)
        }
    }

    /// Recomputes the eligible set from scratch (for cross-checking the
    /// incremental updates); ignores sibling forbids.
    pub fn recompute_girth_eligibility(&self) -> Vec<u128> {
        let g = self.graph();
        let mut out = vec![0u128; self.n];
        for x in 0..self.n {
            if self.deg[x] >= self.cap {
                continue;
            }
            let dist = g.bfs(x);
            for y in 0..self.n {
                if y != x && self.deg[y] < self.cap && dist[y] >= Length::Finite(self.g - 1) {
                    out[x] |= bit(y);
                }
            }
        }
        out
    }

    /// Whether any enabled pruning rule rejects the current state.
    pub fn check_prune_rules(&self) -> bool {
        if !self.enough_valid_edges_left() {
            return true;
        }
        if self.placement_rule && !self.placement_ok() {
            return true;
        }
        if self.dmin_rule {
            let high = self.high_mask();
            match self.threshold {
                Length::Infinite => return high.count_ones() >= 2,
                Length::Finite(t) if t >= 2 => {
                    let mut ball = Vec::new();
                    for a in bits(high) {
                        Self::balls(&self.adj, a, t - 1, &mut ball);
                        if ball[t - 1] & high & !bit(a) != 0 {
                            return true;
                        }
                    }
                }
                _ => {}
            }
        }
        false
    }
}

fn digest(c: &Certificate) -> u128 {
    use std::hash::{Hash, Hasher};
    let half = |salt: u8| {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        salt.hash(&mut h);
        c.as_bytes().hash(&mut h);
        h.finish() as u128
    };
    half(0) << 64 | half(1)
}

struct Search<'a> {
    st: SearchState,
    opts: &'a GeneratorOptions,
    canon: Canonizer,
    // 128-bit digests of expanded states, bucketed by edge count
    store: Vec<HashSet<u128>>,
    stored: usize,
    emitted: HashSet<Certificate>,
    split_counter: u64,
    stats: GenStats,
    sink: &'a mut dyn FnMut(Graph),
}

impl Search<'_> {
    fn recurse(&mut self, mut u: usize, updated: bool) {
        let r = self.st.r;
        let m = self.st.m;
        let mut cert = None;
        if updated {
            self.stats.nodes += 1;
            if self.opts.iso_rejection {
                let c = self.canon.certificate_bits(&self.st.adj);
                let e = self.st.edges;
                if self.store.len() <= e {
                    self.store.resize_with(e + 1, HashSet::new);
                }
                if !self.store[e].insert(digest(&c)) {
                    self.stats.iso_rejected += 1;
                    return;
                }
                self.stored += 1;
                if self.stored > self.opts.store_cap {
                    let big = (0..self.store.len()).max_by_key(|&i| self.store[i].len()).expect("non-empty store");
                    self.stored -= self.store[big].len();
                    self.store[big] = HashSet::new();
                    self.stats.store_flushes += 1;
                }
                cert = Some(c);
            }
            if !self.split_allows() {
                return;
            }
            if self.st.is_complete() {
                self.emit(cert);
                if self.st.regular {
                    return;
                }
                // look for supergraphs with more degree-m vertices
                let saved = self.st.elig.clone();
                while let Some(v) = (0..self.st.n)
                    .filter(|&v| self.st.deg[v] == r && self.st.elig[v] != 0)
                    .min_by_key(|&v| (self.st.elig[v].count_ones(), v))
                {
                    if !self.st.enough_valid_edges_left() {
                        break;
                    }
                    self.recurse(v, false);
                    self.st.freeze(v);
                }
                self.st.elig = saved;
                return;
            }
            let du = self.st.deg[u];
            let has_low = self.st.deg.iter().any(|&d| d < r);
            if du == r && has_low {
                u = self.st.select_fail_first_vertex(|d| d < r).expect("a low vertex exists");
            } else if du == r || du == m {
                match self.st.select_fail_first_vertex(|d| d > r && d < m) {
                    Some(v) => u = v,
                    None => return,
                }
            }
        }
        if !self.st.enough_valid_edges_left() {
            return;
        }
        let candidates = self.st.apply_isolated_points_rule(self.st.elig[u]);
        let isolated = self.st.isolated_mask();
        for w in bits(candidates) {
            if !self.st.is_eligible(u, w) {
                continue;
            }
            let ok = self.st.add_edge(u, w)
                && self.st.enough_valid_edges_left()
                && !self.opts.hook.as_ref().is_some_and(|h| h(&self.st.graph()));
            if ok {
                self.recurse(u, true);
            } else {
                self.stats.pruned += 1;
            }
            self.st.remove_edge(u, w);
            self.st.forbid(u, bit(w));
            if self.st.isolated_rule && isolated & bit(w) != 0 {
                self.st.forbid(u, isolated);
            }
            if !self.st.enough_valid_edges_left() {
                return;
            }
        }
    }

    /// Residue test for a fresh node, counted only at the split depth.
    fn split_allows(&mut self) -> bool {
        if self.opts.split_mod <= 1 || self.st.added_edges() != self.opts.split_depth {
            return true;
        }
        let k = self.split_counter;
        self.split_counter += 1;
        k % self.opts.split_mod == self.opts.split_res
    }

    fn emit(&mut self, cert: Option<Certificate>) {
        if self.opts.split_mod > 1 && self.st.added_edges() < self.opts.split_depth && self.opts.split_res != 0 {
            return;
        }
        let g = self.st.graph();
        let girth = g.girth();
        let girth_ok = if self.st.regular {
            girth >= Length::Finite(self.st.g)
        } else {
            girth == Length::Finite(self.st.g)
        };
        if !girth_ok {
            return;
        }
        let cert = cert.unwrap_or_else(|| self.canon.certificate_bits(&self.st.adj));
        if self.emitted.insert(cert) {
            self.stats.emitted += 1;
            (self.sink)(g);
        }
    }
}

/// Runs the search, passing each graph to `sink`.
pub fn generate_with(
    spec: &ProblemSpec,
    n: usize,
    opts: &GeneratorOptions,
    sink: &mut dyn FnMut(Graph),
) -> Result<GenStats, GenError> {
    if opts.split_mod == 0 || opts.split_res >= opts.split_mod {
        return Err(GenError::BadSplit {
            res: opts.split_res,
            modulus: opts.split_mod,
        });
    }
    if n > MAX_ORDER {
        return Err(GenError::OrderTooLarge(n));
    }
    let bound = if opts.regular {
        bounds::moore_bound(spec.r, spec.g)
    } else {
        bounds::bireg_moore_bound(spec.r, spec.m, spec.g)
    };
    if (n as u64) < bound {
        return Ok(GenStats::default());
    }
    let st = SearchState::new(spec, n, opts)?;
    let r = spec.r;
    let start = st.select_fail_first_vertex(|d| d < r);
    let mut search = Search {
        st,
        opts,
        canon: Canonizer::new(),
        store: Vec::new(),
        stored: 0,
        emitted: HashSet::new(),
        split_counter: 0,
        stats: GenStats::default(),
        sink,
    };
    match start {
        Some(u) => search.recurse(u, true),
        // the tree alone is already complete (e.g. tiny girth)
        None => search.recurse(0, true),
    }
    Ok(search.stats)
}

/// Collects all graphs into a vector.
pub fn generate(spec: &ProblemSpec, n: usize, opts: &GeneratorOptions) -> Result<Vec<Graph>, GenError> {
    let mut out = Vec::new();
    generate_with(spec, n, opts, &mut |g| out.push(g))?;
    Ok(out)
}

/// Splits the search into `workers` residues run on separate threads and
/// merges them: residues in order, each sorted by certificate, duplicates
/// across residues dropped.
pub fn generate_parallel(
    spec: &ProblemSpec,
    n: usize,
    opts: &GeneratorOptions,
    workers: usize,
) -> Result<(Vec<Graph>, GenStats), GenError> {
    let workers = workers.max(1) as u64;
    let runs: Vec<Result<(Vec<Graph>, GenStats), GenError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|res| {
                let o = GeneratorOptions { split_res: res, split_mod: workers, ..opts.clone() };
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let stats = generate_with(spec, n, &o, &mut |g| out.push(g))?;
                    Ok((out, stats))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut canon = Canonizer::new();
    let mut seen = HashSet::new();
    let mut merged = Vec::new();
    let mut total = GenStats::default();
    for run in runs {
        let (graphs, stats) = run?;
        total.nodes += stats.nodes;
        total.iso_rejected += stats.iso_rejected;
        total.pruned += stats.pruned;
        total.store_flushes += stats.store_flushes;
        let mut keyed: Vec<(Certificate, Graph)> = graphs.into_iter().map(|g| (canon.certificate(&g), g)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        for (c, g) in keyed {
            if seen.insert(c) {
                merged.push(g);
            }
        }
    }
    total.emitted = merged.len() as u64;
    Ok((merged, total))
}

/// `r`-regular graphs of girth at least `g` on `n` vertices.
pub fn generate_regular(r: usize, g: usize, n: usize, opts: &GeneratorOptions) -> Result<Vec<Graph>, GenError> {
    let spec = ProblemSpec { r, m: r + 1, g };
    let opts = GeneratorOptions {
        regular: true,
        ..opts.clone()
    };
    generate(&spec, n, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::certificate;

    fn spec(r: usize, m: usize, g: usize) -> ProblemSpec {
        ProblemSpec::new(r, m, g).unwrap()
    }

    fn count(r: usize, m: usize, g: usize, n: usize) -> usize {
        generate(&spec(r, m, g), n, &GeneratorOptions::default()).unwrap().len()
    }

    fn cert_set(gs: &[Graph]) -> std::collections::BTreeSet<Certificate> {
        gs.iter().map(certificate).collect()
    }

    #[test]
    fn bmt_shape() {
        let (t, level) = make_bmt(&spec(3, 4, 5), 13, false).unwrap();
        assert_eq!(t.order(), 13);
        assert_eq!(t.degree(0), 4);
        assert_eq!(t.girth(), Length::Infinite);
        assert_eq!(level.iter().filter(|l| **l == Some(2)).count(), 8);
        let (t, level) = make_bmt(&spec(3, 4, 7), 35, false).unwrap();
        assert_eq!(t.size(), 28);
        assert_eq!(level.iter().filter(|l| l.is_none()).count(), 6);
        let (t, _) = make_bmt(&spec(3, 4, 6), 17, false).unwrap();
        assert_eq!((t.degree(0), t.degree(1)), (4, 3));
        assert!(make_bmt(&spec(3, 4, 5), 12, false).is_err());
    }

    #[test]
    fn cage_counts() {
        assert_eq!(count(3, 4, 5, 13), 4);
        assert_eq!(count(3, 4, 5, 12), 0);
        assert_eq!(count(3, 4, 6, 18), 2);
        assert_eq!(count(3, 5, 5, 16), 20);
    }

    #[test]
    fn regular_counts() {
        let o = GeneratorOptions::default();
        assert_eq!(generate_regular(3, 5, 10, &o).unwrap().len(), 1);
        assert_eq!(generate_regular(3, 5, 12, &o).unwrap().len(), 2);
        assert_eq!(generate_regular(3, 5, 14, &o).unwrap().len(), 9);
        assert_eq!(generate_regular(3, 6, 14, &o).unwrap().len(), 1);
    }

    #[test]
    fn emitted_graphs_are_valid_and_distinct() {
        let s = spec(3, 4, 6);
        let gs = generate(&s, 18, &GeneratorOptions::default()).unwrap();
        let vm: Vec<usize> = gs.iter().map(|g| (0..18).filter(|&v| g.degree(v) == 4).count()).collect();
        assert_eq!(vm.iter().min(), Some(&2));
        assert_eq!(vm.iter().max(), Some(&4));
        for g in &gs {
            assert_eq!(g.girth(), Length::Finite(6));
            assert_eq!(g.degree_set(), [3, 4].into());
        }
        assert_eq!(cert_set(&gs).len(), gs.len());
    }

    #[test]
    fn rules_do_not_change_output() {
        let cases = [(3, 4, 5, 13), (3, 4, 5, 14), (3, 4, 6, 18), (3, 5, 5, 16), (4, 5, 5, 21)];
        for (r, m, g, n) in cases {
            let s = spec(r, m, g);
            let full = cert_set(&generate(&s, n, &GeneratorOptions::default()).unwrap());
            let variants = [
                GeneratorOptions { dmin_rule: false, ..Default::default() },
                GeneratorOptions { placement_rule: false, ..Default::default() },
                GeneratorOptions { isolated_rule: false, ..Default::default() },
                GeneratorOptions { iso_rejection: false, ..Default::default() },
            ];
            for o in variants {
                assert_eq!(cert_set(&generate(&s, n, &o).unwrap()), full, "{s} n={n} {o:?}");
            }
        }
    }

    #[test]
    fn residues_cover_the_output() {
        let s = spec(3, 5, 5);
        let full = cert_set(&generate(&s, 16, &GeneratorOptions::default()).unwrap());
        let mut union = std::collections::BTreeSet::new();
        for res in 0..4 {
            let o = GeneratorOptions { split_res: res, split_mod: 4, ..Default::default() };
            union.extend(cert_set(&generate(&s, 16, &o).unwrap()));
        }
        assert_eq!(union, full);
    }

    #[test]
    fn parallel_merge_matches_serial() {
        let s = spec(3, 4, 5);
        let serial = cert_set(&generate(&s, 15, &GeneratorOptions::default()).unwrap());
        let (a, stats) = generate_parallel(&s, 15, &GeneratorOptions::default(), 3).unwrap();
        assert_eq!(cert_set(&a), serial);
        assert_eq!((a.len(), stats.emitted), (149, 149));
        let (b, _) = generate_parallel(&s, 15, &GeneratorOptions::default(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deterministic_output_order() {
        let s = spec(3, 4, 5);
        let a = generate(&s, 14, &GeneratorOptions::default()).unwrap();
        let b = generate(&s, 14, &GeneratorOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn incremental_eligibility_matches_recomputation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let opts = GeneratorOptions::unpruned();
        for (r, m, g, n) in [(3, 4, 5, 16), (3, 4, 6, 22), (3, 5, 7, 40)] {
            for _ in 0..20 {
                let mut st = SearchState::new(&spec(r, m, g), n, &opts).unwrap();
                let mut added = Vec::new();
                loop {
                    let edges = st.eligible_edges();
                    if edges.is_empty() {
                        break;
                    }
                    let (u, w) = edges[rng.gen_range(0..edges.len())];
                    st.add_edge(u, w);
                    added.push((u, w));
                    assert_eq!(st.elig, st.recompute_girth_eligibility());
                }
                assert!(st.graph().girth() >= Length::Finite(g));
                for (u, w) in added.into_iter().rev() {
                    st.remove_edge(u, w);
                    assert_eq!(st.elig, st.recompute_girth_eligibility());
                }
            }
        }
    }

    #[test]
    fn helper_operations() {
        let s = spec(3, 4, 5);
        let st = SearchState::new(&s, 16, &GeneratorOptions::default()).unwrap();
        assert!(st.enough_valid_edges_left());
        assert!(!st.check_prune_rules());
        // leaves 5..13 have degree 1; vertex 5 has the fewest options
        let v = st.select_fail_first_vertex(|d| d < 3).unwrap();
        assert!((5..13).contains(&v));
        let all_iso = (13..16).fold(0u128, |a, v| a | bit(v));
        assert_eq!(st.apply_isolated_points_rule(all_iso | bit(7)), bit(13) | bit(7));
        assert_eq!(st.apply_isolated_points_rule(bit(7)), bit(7));
        assert_eq!(st.threshold(), Length::Finite(1));
    }

    #[test]
    fn isolated_rule_is_conservative() {
        let s = spec(3, 4, 5);
        let on = cert_set(&generate(&s, 13, &GeneratorOptions::default()).unwrap());
        let off = cert_set(&generate(&s, 13, &GeneratorOptions { isolated_rule: false, ..Default::default() }).unwrap());
        assert_eq!(on, off);
    }

    #[test]
    fn split_parameters_are_checked() {
        let o = GeneratorOptions { split_res: 3, split_mod: 3, ..Default::default() };
        assert!(matches!(generate(&spec(3, 4, 5), 13, &o), Err(GenError::BadSplit { .. })));
        assert!(matches!(generate(&spec(3, 4, 5), 200, &GeneratorOptions::default()), Err(GenError::OrderTooLarge(200))));
    }
}
