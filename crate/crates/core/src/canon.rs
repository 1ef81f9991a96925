//! Canonical labelling and isomorphism testing.
//!
//! Individualization-refinement: the partition is refined to an equitable
//! one, a vertex of the first smallest non-singleton cell is individualized,
//! and so on until the partition is discrete. Every discrete leaf yields a
//! relabelled graph; the largest leaf (by refinement trace, then adjacency)
//! is canonical. Automorphisms discovered at equal leaves prune siblings in
//! the same orbit.
//!
//! Isolated vertices are set aside and appended after the canonical form of
//! the rest, which keeps partial graphs with many isolated vertices cheap.

use std::collections::{HashSet, VecDeque};

use crate::codec;
use crate::graph::Graph;

/// A complete isomorphism invariant: the graph6 string of the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// The canonical form as a graph6 line.
    pub fn as_graph6(&self) -> &str {
        std::str::from_utf8(&self.0).expect("graph6 is ASCII")
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_graph6())
    }
}

trait Adjacency {
    fn order(&self) -> usize;
    fn degree(&self, v: usize) -> usize;
    fn for_each_neighbor(&self, v: usize, f: impl FnMut(usize));
}

impl Adjacency for Graph {
    fn order(&self) -> usize {
        Graph::order(self)
    }

    fn degree(&self, v: usize) -> usize {
        Graph::degree(self, v)
    }

    fn for_each_neighbor(&self, v: usize, mut f: impl FnMut(usize)) {
        for &u in self.neighbor_slice(v) {
            f(u as usize);
        }
    }
}

struct Bits<'a>(&'a [u128]);

impl Adjacency for Bits<'_> {
    fn order(&self) -> usize {
        self.0.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.0[v].count_ones() as usize
    }

    fn for_each_neighbor(&self, v: usize, mut f: impl FnMut(usize)) {
        let mut s = self.0[v];
        while s != 0 {
            f(s.trailing_zeros() as usize);
            s &= s - 1;
        }
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(29) ^ 0x9e37_79b9_7f4a_7c15
}

struct Leaf {
    lab: Vec<u32>,
    rows: Vec<u64>,
    traces: Vec<u64>,
    path: Vec<u32>,
}

/// Reusable canonical labelling engine. Buffers are kept between calls so
/// repeated use on small graphs does not allocate.
#[derive(Default)]
pub struct Canonizer {
    n: usize,
    words: usize,
    off: Vec<u32>,
    adj: Vec<u32>,
    lab: Vec<u32>,
    pos: Vec<u32>,
    cell: Vec<u32>,
    len: Vec<u32>,
    ncells: usize,
    count: Vec<u32>,
    touched_v: Vec<u32>,
    touched_c: Vec<u32>,
    cmark: Vec<bool>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
    frags: Vec<(u32, u32)>,
    saved: Vec<u32>,
    path: Vec<u32>,
    traces: Vec<u64>,
    rows: Vec<u64>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<u32>>,
    uf: Vec<u32>,
    // non-isolated vertex -> original label
    keep: Vec<u32>,
    index: Vec<u32>,
}

impl Canonizer {
    pub fn new() -> Canonizer {
        Canonizer::default()
    }

    pub fn certificate(&mut self, g: &Graph) -> Certificate {
        self.run(g);
        self.make_certificate(g.order())
    }

    /// `labelling[v]` is the canonical position of vertex `v`.
    pub fn canonical_labelling(&mut self, g: &Graph) -> Vec<usize> {
        self.run(g);
        let total = g.order();
        let mut out = vec![0usize; total];
        let best = self.best.as_ref();
        for i in 0..self.n {
            let v = best.expect("non-empty core has a best leaf").lab[i] as usize;
            out[self.keep[v] as usize] = i;
        }
        let mut next = self.n;
        for v in 0..total {
            if g.degree(v) == 0 {
                out[v] = next;
                next += 1;
            }
        }
        out
    }

    fn make_certificate(&self, total: usize) -> Certificate {
        debug_assert!(self.n <= total);
        let w = self.words;
        let bytes = match &self.best {
            Some(best) => {
                let n = self.n;
                codec::graph6_with(total, |i, j| {
                    j < n && (best.rows[i * w + j / 64] >> (j % 64)) & 1 == 1
                })
            }
            None => codec::graph6_with(total, |_, _| false),
        };
        Certificate(bytes.expect("order fits the size prefix"))
    }

    /// Certificate of a graph on at most 128 vertices given as adjacency bitsets.
    pub fn certificate_bits(&mut self, adj: &[u128]) -> Certificate {
        self.run(&Bits(adj));
        self.make_certificate(adj.len())
    }

    /// Certificate of a vertex-coloured graph: equal exactly when some
    /// isomorphism maps every vertex to one of the same colour.
    pub fn certificate_colored(&mut self, g: &Graph, colors: &[u32]) -> Certificate {
        assert_eq!(colors.len(), g.order(), "one colour per vertex");
        self.run_colored(g, Some(colors));
        let mut cert = self.make_certificate(g.order());
        let mut classes = std::collections::BTreeMap::<u32, (u32, u32)>::new();
        for (v, &c) in colors.iter().enumerate() {
            let e = classes.entry(c).or_default();
            if g.degree(v) > 0 {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        cert.0.push(b'|');
        for (c, (core, iso)) in classes {
            cert.0.extend_from_slice(format!("{c}:{core}:{iso};").as_bytes());
        }
        cert
    }

    fn run(&mut self, g: &impl Adjacency) {
        self.run_colored(g, None);
    }

    fn run_colored(&mut self, g: &impl Adjacency, colors: Option<&[u32]>) {
        self.load(g);
        self.first = None;
        self.best = None;
        self.gens.clear();
        self.path.clear();
        self.traces.clear();
        let n = self.n;
        if n == 0 {
            return;
        }
        for (i, v) in self.lab.iter_mut().enumerate() {
            *v = i as u32;
        }
        self.queue.clear();
        match colors {
            None => {
                self.cell.iter_mut().for_each(|c| *c = 0);
                self.len[0] = n as u32;
                self.ncells = 1;
                self.queue.push_back(0);
                self.in_queue[0] = true;
            }
            Some(colors) => {
                let keep = &self.keep;
                self.lab.sort_by_key(|&v| (colors[keep[v as usize] as usize], v));
                self.ncells = 0;
                let mut start = 0;
                while start < n {
                    let c = colors[self.keep[self.lab[start] as usize] as usize];
                    let mut end = start;
                    while end < n && colors[self.keep[self.lab[end] as usize] as usize] == c {
                        end += 1;
                    }
                    for p in start..end {
                        self.cell[p] = start as u32;
                    }
                    self.len[start] = (end - start) as u32;
                    self.ncells += 1;
                    self.queue.push_back(start as u32);
                    self.in_queue[start] = true;
                    start = end;
                }
            }
        }
        for (i, &v) in self.lab.iter().enumerate() {
            self.pos[v as usize] = i as u32;
        }
        let t = self.refine();
        self.traces.push(t);
        self.visit(0);
    }

    fn load(&mut self, g: &impl Adjacency) {
        let total = g.order();
        self.keep.clear();
        self.index.clear();
        self.index.resize(total, u32::MAX);
        for v in 0..total {
            if g.degree(v) > 0 {
                self.index[v] = self.keep.len() as u32;
                self.keep.push(v as u32);
            }
        }
        let n = self.keep.len();
        self.n = n;
        self.words = n.div_ceil(64).max(1);
        self.off.clear();
        self.adj.clear();
        self.off.push(0);
        for i in 0..n {
            let v = self.keep[i] as usize;
            let index = &self.index;
            let adj = &mut self.adj;
            g.for_each_neighbor(v, |u| adj.push(index[u]));
            self.off.push(self.adj.len() as u32);
        }
        for buf in [&mut self.lab, &mut self.pos, &mut self.cell, &mut self.len, &mut self.count] {
            buf.clear();
            buf.resize(n, 0);
        }
        self.cmark.clear();
        self.cmark.resize(n, false);
        self.in_queue.clear();
        self.in_queue.resize(n, false);
    }

    fn refine(&mut self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        while let Some(ws) = self.queue.pop_front() {
            let ws = ws as usize;
            self.in_queue[ws] = false;
            let wend = ws + self.len[ws] as usize;
            for p in ws..wend {
                let w = self.lab[p] as usize;
                for &x in &self.adj[self.off[w] as usize..self.off[w + 1] as usize] {
                    if self.count[x as usize] == 0 {
                        self.touched_v.push(x);
                    }
                    self.count[x as usize] += 1;
                }
            }
            for &x in &self.touched_v {
                let c = self.cell[self.pos[x as usize] as usize];
                if !self.cmark[c as usize] {
                    self.cmark[c as usize] = true;
                    self.touched_c.push(c);
                }
            }
            self.touched_c.sort_unstable();
            h = mix(h, ws as u64);
            for ti in 0..self.touched_c.len() {
                let c = self.touched_c[ti] as usize;
                self.cmark[c] = false;
                let l = self.len[c] as usize;
                let count = &self.count;
                let cells = &mut self.lab[c..c + l];
                if l > 1 {
                    cells.sort_unstable_by_key(|&v| count[v as usize]);
                }
                self.frags.clear();
                let mut start = c;
                for p in c + 1..=c + l {
                    if p == c + l || count[self.lab[p] as usize] != count[self.lab[start] as usize] {
                        self.frags.push((start as u32, (p - start) as u32));
                        start = p;
                    }
                }
                h = mix(h, ((c as u64) << 32) | count[self.lab[c] as usize] as u64);
                if self.frags.len() == 1 {
                    continue;
                }
                let mut largest = 0;
                for (fi, &(fs, fl)) in self.frags.iter().enumerate() {
                    self.len[fs as usize] = fl;
                    for p in fs..fs + fl {
                        self.cell[p as usize] = fs;
                        self.pos[self.lab[p as usize] as usize] = p;
                    }
                    if fl > self.frags[largest].1 {
                        largest = fi;
                    }
                    let cnt = self.count[self.lab[fs as usize] as usize] as u64;
                    h = mix(h, ((fs as u64) << 40) ^ ((fl as u64) << 20) ^ cnt);
                }
                self.ncells += self.frags.len() - 1;
                let was_queued = self.in_queue[c];
                for (fi, &(fs, _)) in self.frags.iter().enumerate() {
                    if self.in_queue[fs as usize] {
                        continue;
                    }
                    if was_queued || fi != largest {
                        self.in_queue[fs as usize] = true;
                        self.queue.push_back(fs);
                    }
                }
            }
            for &x in &self.touched_v {
                self.count[x as usize] = 0;
            }
            self.touched_v.clear();
            self.touched_c.clear();
        }
        mix(h, self.ncells as u64)
    }

    fn individualize(&mut self, v: usize) -> u64 {
        let p = self.pos[v] as usize;
        let c = self.cell[p] as usize;
        let l = self.len[c] as usize;
        let other = self.lab[c];
        self.lab.swap(c, p);
        self.pos[other as usize] = p as u32;
        self.pos[v] = c as u32;
        self.len[c] = 1;
        self.len[c + 1] = (l - 1) as u32;
        for q in c + 1..c + l {
            self.cell[q] = (c + 1) as u32;
        }
        self.ncells += 1;
        self.in_queue[c] = true;
        self.queue.push_back(c as u32);
        mix(self.refine(), ((c as u64) << 32) | l as u64)
    }

    fn save(&mut self) {
        self.saved.extend_from_slice(&self.lab);
        self.saved.extend_from_slice(&self.cell);
        self.saved.extend_from_slice(&self.len);
        self.saved.push(self.ncells as u32);
    }

    fn restore(&mut self, pop: bool) {
        let n = self.n;
        let base = self.saved.len() - (3 * n + 1);
        let s = &self.saved[base..];
        self.lab.copy_from_slice(&s[..n]);
        self.cell.copy_from_slice(&s[n..2 * n]);
        self.len.copy_from_slice(&s[2 * n..3 * n]);
        self.ncells = s[3 * n] as usize;
        for (i, &v) in self.lab.iter().enumerate() {
            self.pos[v as usize] = i as u32;
        }
        if pop {
            self.saved.truncate(base);
        }
    }

    fn target_cell(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_len = usize::MAX;
        let mut p = 0;
        while p < self.n {
            let l = self.len[p] as usize;
            if l > 1 && l < best_len {
                best = p;
                best_len = l;
                if l == 2 {
                    break;
                }
            }
            p += l;
        }
        best
    }

    /// Returns `Some(level)` to unwind to an ancestor at `level`.
    fn visit(&mut self, depth: usize) -> Option<usize> {
        if let Some(best) = &self.best {
            let k = (depth + 1).min(best.traces.len());
            if self.traces[..=depth] < best.traces[..k] {
                return None;
            }
        }
        if self.ncells == self.n {
            return self.leaf();
        }
        let c = self.target_cell();
        let l = self.len[c] as usize;
        let mut candidates: Vec<u32> = self.lab[c..c + l].to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<u32> = Vec::with_capacity(l);
        self.save();
        for &v in &candidates {
            if !explored.is_empty() && self.on_first_path(depth) && self.same_orbit(depth, v, &explored) {
                continue;
            }
            self.path.push(v);
            let t = self.individualize(v as usize);
            self.traces.push(t);
            let r = self.visit(depth + 1);
            self.traces.pop();
            self.path.pop();
            self.restore(false);
            explored.push(v);
            if let Some(level) = r {
                if level < depth {
                    self.restore(true);
                    return Some(level);
                }
            }
        }
        self.restore(true);
        None
    }

    fn on_first_path(&self, depth: usize) -> bool {
        match &self.first {
            Some(f) => f.path.len() >= depth && f.path[..depth] == self.path[..depth],
            None => false,
        }
    }

    /// Whether `v` shares an orbit with an explored sibling under the
    /// automorphisms found so far that fix the current prefix pointwise.
    fn same_orbit(&mut self, depth: usize, v: u32, explored: &[u32]) -> bool {
        let n = self.n;
        self.uf.clear();
        self.uf.extend(0..n as u32);
        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            while uf[x as usize] != x {
                uf[x as usize] = uf[uf[x as usize] as usize];
                x = uf[x as usize];
            }
            x
        }
        let prefix = &self.path[..depth];
        for gamma in &self.gens {
            if prefix.iter().any(|&p| gamma[p as usize] != p) {
                continue;
            }
            for x in 0..n as u32 {
                let a = find(&mut self.uf, x);
                let b = find(&mut self.uf, gamma[x as usize]);
                if a != b {
                    self.uf[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let rv = find(&mut self.uf, v);
        explored.iter().any(|&u| find(&mut self.uf, u) == rv)
    }

    fn leaf(&mut self) -> Option<usize> {
        let n = self.n;
        let w = self.words;
        self.rows.clear();
        self.rows.resize(n * w, 0);
        for i in 0..n {
            let v = self.lab[i] as usize;
            for &x in &self.adj[self.off[v] as usize..self.off[v + 1] as usize] {
                let j = self.pos[x as usize] as usize;
                self.rows[i * w + j / 64] |= 1 << (j % 64);
            }
        }
        let Some(first) = &self.first else {
            let leaf = Leaf {
                lab: self.lab.clone(),
                rows: self.rows.clone(),
                traces: self.traces.clone(),
                path: self.path.clone(),
            };
            self.best = Some(Leaf {
                lab: leaf.lab.clone(),
                rows: leaf.rows.clone(),
                traces: leaf.traces.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.traces == self.traces && first.rows == self.rows {
            let gamma = automorphism(&first.lab, &self.lab);
            let level = divergence(&first.path, &self.path);
            self.gens.push(gamma);
            return Some(level);
        }
        let best = self.best.as_mut().expect("best is set with first");
        match (&self.traces[..], &self.rows[..]).cmp(&(&best.traces[..], &best.rows[..])) {
            std::cmp::Ordering::Equal => {
                let gamma = automorphism(&best.lab, &self.lab);
                let level = divergence(&best.path, &self.path);
                self.gens.push(gamma);
                Some(level)
            }
            std::cmp::Ordering::Greater => {
                best.lab.clone_from(&self.lab);
                best.rows.clone_from(&self.rows);
                best.traces.clone_from(&self.traces);
                best.path.clone_from(&self.path);
                None
            }
            std::cmp::Ordering::Less => None,
        }
    }
}

/// The permutation taking leaf `from` to leaf `to` position by position.
fn automorphism(from: &[u32], to: &[u32]) -> Vec<u32> {
    let mut gamma = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a as usize] = b;
    }
    gamma
}

fn divergence(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn certificate(g: &Graph) -> Certificate {
    Canonizer::new().certificate(g)
}

/// The canonically relabelled copy of `g`.
pub fn canonical_form(g: &Graph) -> Graph {
    let perm = Canonizer::new().canonical_labelling(g);
    g.permuted(&perm)
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() || g.size() != h.size() {
        return false;
    }
    let mut dg = g.degree_sequence();
    let mut dh = h.degree_sequence();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let mut c = Canonizer::new();
    c.certificate(g) == c.certificate(h)
}

/// Keeps one representative per isomorphism class, in first-seen order.
#[derive(Default)]
pub struct Dedup {
    seen: HashSet<Certificate>,
    canon: Canonizer,
}

impl Dedup {
    pub fn new() -> Dedup {
        Dedup::default()
    }

    /// True if `g` is the first of its class.
    pub fn insert(&mut self, g: &Graph) -> bool {
        let cert = self.canon.certificate(g);
        self.seen.insert(cert)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

pub fn dedup<I>(graphs: I) -> impl Iterator<Item = Graph>
where
    I: IntoIterator<Item = Graph>,
{
    let mut d = Dedup::new();
    graphs.into_iter().filter(move |g| d.insert(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn relabel(g: &Graph, rng: &mut impl Rng) -> Graph {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(rng);
        g.permuted(&perm)
    }

    fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::new(n);
        for j in 1..n {
            for i in 0..j {
                if rng.gen_bool(p) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    /// Factorial-time isomorphism test.
    fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
        fn extend(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let v = map.len();
            if v == g.order() {
                return true;
            }
            for w in 0..h.order() {
                if used[w] || g.degree(v) != h.degree(w) {
                    continue;
                }
                if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w)) {
                    map.push(w);
                    used[w] = true;
                    if extend(g, h, map, used) {
                        return true;
                    }
                    map.pop();
                    used[w] = false;
                }
            }
            false
        }
        g.order() == h.order()
            && g.size() == h.size()
            && extend(g, h, &mut Vec::new(), &mut vec![false; h.order()])
    }

    fn brute_colored(g: &Graph, cg: &[u32], h: &Graph, ch: &[u32]) -> bool {
        fn extend(g: &Graph, cg: &[u32], h: &Graph, ch: &[u32], map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let v = map.len();
            if v == g.order() {
                return true;
            }
            for w in 0..h.order() {
                if used[w] || cg[v] != ch[w] || g.degree(v) != h.degree(w) {
                    continue;
                }
                if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w)) {
                    map.push(w);
                    used[w] = true;
                    if extend(g, cg, h, ch, map, used) {
                        return true;
                    }
                    map.pop();
                    used[w] = false;
                }
            }
            false
        }
        g.order() == h.order() && extend(g, cg, h, ch, &mut Vec::new(), &mut vec![false; h.order()])
    }

    #[test]
    fn colored_certificates_match_brute_force() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let mut canon = Canonizer::new();
        for _ in 0..400 {
            let n = rng.gen_range(1..=7);
            let g = random_graph(&mut rng, n, 0.4);
            let h = if rng.gen_bool(0.5) { relabel(&g, &mut rng) } else { random_graph(&mut rng, n, 0.4) };
            let cg: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let ch: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let same = canon.certificate_colored(&g, &cg) == canon.certificate_colored(&h, &ch);
            assert_eq!(same, brute_colored(&g, &cg, &h, &ch), "{g:?} {cg:?} {h:?} {ch:?}");
        }
        // relabelling with the colours carried along keeps the certificate
        for _ in 0..200 {
            let n = rng.gen_range(2..=12);
            let g = random_graph(&mut rng, n, 0.3);
            let c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut pc = vec![0; n];
            for v in 0..n {
                pc[perm[v]] = c[v];
            }
            assert_eq!(canon.certificate_colored(&g, &c), canon.certificate_colored(&g.permuted(&perm), &pc));
        }
    }

    #[test]
    fn petersen_relabelings_agree() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let p = named::petersen();
        let c = certificate(&p);
        for _ in 0..20 {
            assert_eq!(certificate(&relabel(&p, &mut rng)), c);
        }
        // the pentagonal prism is cubic on 10 vertices with girth 4
        let prism = named::generalized_petersen(5, 1);
        assert!(brute_isomorphic(&p, &p));
        assert!(!brute_isomorphic(&p, &prism));
        assert_ne!(certificate(&prism), c);
        assert!(!are_isomorphic(&p, &prism));
    }

    #[test]
    fn canonical_form_is_a_relabelling() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 12, 0.25);
            let c = canonical_form(&g);
            assert!(brute_isomorphic(&g, &c));
            assert_eq!(crate::codec::encode_graph6(&c).unwrap(), certificate(&g).as_graph6());
        }
    }

    #[test]
    fn symmetric_graphs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for g in [
            named::heawood(),
            named::desargues(),
            named::moebius_kantor(),
            Graph::complete(9),
            Graph::new(7),
            Graph::cycle(30),
            named::star(12),
        ] {
            let c = certificate(&g);
            for _ in 0..5 {
                assert_eq!(certificate(&relabel(&g, &mut rng)), c);
            }
        }
        assert_ne!(certificate(&named::moebius_kantor()), certificate(&named::generalized_petersen(8, 1)));
    }

    #[test]
    fn bitset_input_matches_graph_input() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let mut c = Canonizer::new();
        for _ in 0..30 {
            let g = random_graph(&mut rng, 20, 0.2);
            let bits: Vec<u128> = (0..20)
                .map(|v| g.neighbors(v).fold(0u128, |acc, u| acc | 1 << u))
                .collect();
            assert_eq!(c.certificate_bits(&bits), c.certificate(&g));
        }
    }

    #[test]
    fn isolated_vertices_go_last() {
        let g = Graph::from_edges(5, [(3, 4)]).unwrap();
        let h = Graph::from_edges(5, [(0, 1)]).unwrap();
        assert_eq!(certificate(&g), certificate(&h));
        assert_eq!(certificate(&g).as_graph6(), "D_?");
        assert_ne!(certificate(&g), certificate(&Graph::from_edges(4, [(0, 1)]).unwrap()));
    }

    #[test]
    fn seven_vertex_classes_by_edge_count() {
        // numbers of unlabelled graphs on 7 vertices with e edges
        let known = [1, 1, 2, 5, 10, 21, 41, 65, 97, 131, 148, 148, 131];
        let mut canon = Canonizer::new();
        let mut level: Vec<Graph> = vec![Graph::new(7)];
        for (e, &want) in known.iter().enumerate() {
            assert_eq!(level.len(), want, "{e} edges");
            if e + 1 == known.len() {
                break;
            }
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for g in &level {
                for j in 1..7 {
                    for i in 0..j {
                        if !g.has_edge(i, j) {
                            let mut h = g.clone();
                            h.add_edge(i, j).unwrap();
                            if seen.insert(canon.certificate(&h)) {
                                next.push(h);
                            }
                        }
                    }
                }
            }
            level = next;
        }
    }

    #[test]
    fn agrees_with_permutation_search() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(33);
        let mut corpus = Vec::new();
        for _ in 0..25 {
            let n = rng.gen_range(5..=8);
            let g = random_graph(&mut rng, n, 0.4);
            corpus.push(relabel(&g, &mut rng));
            corpus.push(g);
        }
        let certs: Vec<_> = corpus.iter().map(certificate).collect();
        for i in 0..corpus.len() {
            for j in 0..i {
                assert_eq!(
                    certs[i] == certs[j],
                    brute_isomorphic(&corpus[i], &corpus[j]),
                    "{} vs {}",
                    crate::codec::encode_graph6(&corpus[i]).unwrap(),
                    crate::codec::encode_graph6(&corpus[j]).unwrap()
                );
            }
        }
    }

    #[test]
    fn dedup_keeps_first_of_each_class() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let p = named::petersen();
        let copies: Vec<Graph> = (0..10).map(|_| relabel(&p, &mut rng)).collect();
        let first = copies[0].clone();
        let out: Vec<Graph> = dedup(copies).collect();
        assert_eq!(out, vec![first]);
        assert_eq!(dedup(Vec::<Graph>::new()).count(), 0);
        assert!(!are_isomorphic(&Graph::path(4), &named::star(3)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (1usize..=40, 0.02f64..0.3).prop_flat_map(|(n, p)| {
                proptest::collection::vec(proptest::bool::weighted(p), n * (n - 1) / 2).prop_map(move |bits| {
                    let mut g = Graph::new(n);
                    let mut k = 0;
                    for j in 1..n {
                        for i in 0..j {
                            if bits[k] {
                                g.add_edge(i, j).unwrap();
                            }
                            k += 1;
                        }
                    }
                    g
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn invariant_under_relabelling(g in arb_graph(), seed in any::<u64>()) {
                let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
                let h = relabel(&g, &mut rng);
                prop_assert_eq!(certificate(&g), certificate(&h));
            }
        }
    }
}
