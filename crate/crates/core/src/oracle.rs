//! A plain reference generator for cross-checking [`crate::generator`].
//!
//! It starts from a single vertex of degree `m` joined to `1..=m` and then
//! completes one vertex at a time: the chosen vertex receives all its
//! remaining neighbours at once and is never touched again. Only degree
//! caps and the girth are enforced. Two partial graphs are merged when an
//! isomorphism maps completed vertices onto completed vertices, since they
//! then have the same completions up to isomorphism.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::bounds::ProblemSpec;
use crate::canon::{Canonizer, Certificate};
use crate::generator::{self, GeneratorOptions};
use crate::graph::{Graph, Length};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("order {n} is above the oracle limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("search exceeded {0} states")]
    Budget(u64),
    #[error(transparent)]
    Generator(#[from] generator::GenError),
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub max_order: usize,
    pub max_states: u64,
    pub regular: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_order: 26,
            max_states: 50_000_000,
            regular: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleRun {
    pub spec: ProblemSpec,
    pub n: usize,
    pub certificates: BTreeSet<Certificate>,
    pub graphs: Vec<Graph>,
    pub states: u64,
}

impl OracleRun {
    pub fn count(&self) -> usize {
        self.certificates.len()
    }
}

struct Search<'a> {
    n: usize,
    r: usize,
    m: usize,
    g: usize,
    cap: usize,
    regular: bool,
    adj: Vec<u128>,
    deg: Vec<usize>,
    done: u128,
    canon: Canonizer,
    seen: HashSet<Certificate>,
    out: &'a mut OracleRun,
    budget: u64,
}

fn bit(i: usize) -> u128 {
    1u128 << i
}

impl Search<'_> {
    /// Whether `x` and `y` are at distance at most `limit`.
    fn within(&self, x: usize, y: usize, limit: usize) -> bool {
        let mut seen = bit(x);
        let mut frontier = bit(x);
        for _ in 0..limit {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & !seen;
            if frontier & bit(y) != 0 {
                return true;
            }
            seen |= frontier;
            if frontier == 0 {
                return false;
            }
        }
        false
    }

    fn link(&mut self, x: usize, y: usize) {
        self.adj[x] |= bit(y);
        self.adj[y] |= bit(x);
        self.deg[x] += 1;
        self.deg[y] += 1;
    }

    fn unlink(&mut self, x: usize, y: usize) {
        self.adj[x] &= !bit(y);
        self.adj[y] &= !bit(x);
        self.deg[x] -= 1;
        self.deg[y] -= 1;
    }

    fn graph(&self) -> Graph {
        let mut h = Graph::new(self.n);
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.adj[x] & bit(y) != 0 {
                    h.add_edge(x, y).expect("simple");
                }
            }
        }
        h
    }

    fn targets(&self, v: usize) -> Vec<usize> {
        let d = self.deg[v];
        if self.regular {
            vec![self.r]
        } else if d <= self.r {
            vec![self.r, self.m]
        } else {
            vec![self.m]
        }
    }

    fn finished(&mut self) {
        let all_ok = if self.regular {
            self.deg.iter().all(|&d| d == self.r)
        } else {
            self.deg.iter().all(|&d| d == self.r || d == self.m) && self.deg.contains(&self.r)
        };
        if !all_ok {
            return;
        }
        let h = self.graph();
        let girth = h.girth();
        let ok = if self.regular { girth >= Length::Finite(self.g) } else { girth == Length::Finite(self.g) };
        if ok {
            let c = self.canon.certificate(&h);
            if self.out.certificates.insert(c) {
                self.out.graphs.push(h);
            }
        }
    }

    fn step(&mut self) -> Result<(), OracleError> {
        self.out.states += 1;
        if self.out.states > self.budget {
            return Err(OracleError::Budget(self.budget));
        }
        let open: Vec<usize> = (0..self.n).filter(|&v| self.done & bit(v) == 0).collect();
        let Some(&v) = open.iter().max_by_key(|&&v| (self.deg[v], std::cmp::Reverse(v))) else {
            self.finished();
            return Ok(());
        };
        for target in self.targets(v) {
            if target < self.deg[v] {
                continue;
            }
            let cands: Vec<usize> = open
                .iter()
                .copied()
                .filter(|&x| x != v && self.adj[v] & bit(x) == 0 && self.deg[x] < self.cap)
                .collect();
            self.choose(v, target - self.deg[v], &cands, 0)?;
        }
        Ok(())
    }

    fn choose(&mut self, v: usize, need: usize, cands: &[usize], from: usize) -> Result<(), OracleError> {
        if need == 0 {
            self.done |= bit(v);
            let colors: Vec<u32> = (0..self.n).map(|x| (self.done >> x & 1) as u32).collect();
            let c = self.canon.certificate_colored(&self.graph(), &colors);
            let fresh = self.seen.insert(c);
            let res = if fresh { self.step() } else { Ok(()) };
            self.done &= !bit(v);
            return res;
        }
        for i in from..cands.len() {
            if cands.len() - i < need {
                break;
            }
            let x = cands[i];
            if self.deg[x] >= self.cap || self.within(v, x, self.g.saturating_sub(2)) {
                continue;
            }
            self.link(v, x);
            let res = self.choose(v, need - 1, cands, i + 1);
            self.unlink(v, x);
            res?;
        }
        Ok(())
    }
}

/// All `({r,m};g)`-graphs of order `n` (or `r`-regular graphs of girth at
/// least `g` with `regular`), one per isomorphism class.
pub fn oracle_generate(spec: &ProblemSpec, n: usize, opts: &OracleOptions) -> Result<OracleRun, OracleError> {
    if n > opts.max_order || n > 128 {
        return Err(OracleError::TooLarge { n, limit: opts.max_order.min(128) });
    }
    let mut run = OracleRun {
        spec: *spec,
        n,
        certificates: BTreeSet::new(),
        graphs: Vec::new(),
        states: 0,
    };
    let first = if opts.regular { spec.r } else { spec.m };
    if n <= first {
        return Ok(run);
    }
    let mut s = Search {
        n,
        r: spec.r,
        m: spec.m,
        g: spec.g,
        cap: first,
        regular: opts.regular,
        adj: vec![0; n],
        deg: vec![0; n],
        done: 1,
        canon: Canonizer::new(),
        seen: HashSet::new(),
        out: &mut run,
        budget: opts.max_states,
    };
    for x in 1..=first {
        s.link(0, x);
    }
    s.step()?;
    Ok(run)
}

/// Outcome of comparing the generator with the oracle.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub generator_count: usize,
    pub oracle_count: usize,
    pub only_generator: Vec<Graph>,
    pub only_oracle: Vec<Graph>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.only_generator.is_empty() && self.only_oracle.is_empty()
    }
}

pub fn cross_check(
    spec: &ProblemSpec,
    n: usize,
    gen_opts: &GeneratorOptions,
    opts: &OracleOptions,
) -> Result<CrossCheck, OracleError> {
    let gen_opts = GeneratorOptions { regular: opts.regular, ..gen_opts.clone() };
    let generated = generator::generate(spec, n, &gen_opts)?;
    let run = oracle_generate(spec, n, opts)?;
    let mut canon = Canonizer::new();
    let mut gen_certs = BTreeSet::new();
    let mut only_generator = Vec::new();
    for g in &generated {
        let c = canon.certificate(g);
        if !run.certificates.contains(&c) {
            only_generator.push(g.clone());
        }
        gen_certs.insert(c);
    }
    let only_oracle = run
        .graphs
        .iter()
        .filter(|g| !gen_certs.contains(&canon.certificate(g)))
        .cloned()
        .collect();
    Ok(CrossCheck {
        generator_count: gen_certs.len(),
        oracle_count: run.count(),
        only_generator,
        only_oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn spec(r: usize, m: usize, g: usize) -> ProblemSpec {
        ProblemSpec::new(r, m, g).unwrap()
    }

    #[test]
    fn known_counts() {
        let o = OracleOptions::default();
        assert_eq!(oracle_generate(&spec(3, 4, 5), 13, &o).unwrap().count(), 4);
        assert_eq!(oracle_generate(&spec(3, 4, 5), 12, &o).unwrap().count(), 0);
        assert_eq!(oracle_generate(&spec(3, 4, 6), 18, &o).unwrap().count(), 2);
        assert_eq!(oracle_generate(&spec(3, 5, 5), 16, &o).unwrap().count(), 20);
        let reg = OracleOptions { regular: true, ..o };
        let cubic = ProblemSpec { r: 3, m: 4, g: 5 };
        assert_eq!(oracle_generate(&cubic, 10, &reg).unwrap().count(), 1);
        assert_eq!(oracle_generate(&cubic, 12, &reg).unwrap().count(), 2);
    }

    #[test]
    fn outputs_verify() {
        let run = oracle_generate(&spec(3, 4, 5), 14, &OracleOptions::default()).unwrap();
        assert_eq!(run.count(), 14);
        for g in &run.graphs {
            assert_eq!(g.order(), 14);
            assert_eq!(g.degree_set(), [3, 4].into());
            assert_eq!(g.girth(), Length::Finite(5));
        }
    }

    #[test]
    fn agreement_on_small_rows() {
        for (r, m, g, n) in [(3, 4, 5, 14), (3, 4, 6, 19), (3, 5, 6, 22), (4, 5, 5, 21), (3, 6, 5, 19)] {
            let c = cross_check(&spec(r, m, g), n, &GeneratorOptions::default(), &OracleOptions::default()).unwrap();
            assert!(c.agrees(), "({r},{m},{g}) n={n}: {} vs {}", c.generator_count, c.oracle_count);
        }
    }

    #[test]
    fn broken_rule_is_detected() {
        // rejects graphs with two degree-4 vertices at distance 2
        let hook: generator::PruneHook = Arc::new(|g: &Graph| {
            let high: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) == 4).collect();
            high.iter().any(|&a| high.iter().any(|&b| a < b && g.distance(a, b) == Length::Finite(2)))
        });
        let opts = GeneratorOptions { hook: Some(hook), ..Default::default() };
        let c = cross_check(&spec(3, 4, 5), 13, &opts, &OracleOptions::default()).unwrap();
        assert!(!c.agrees());
        assert!(c.only_generator.is_empty());
        assert!(!c.only_oracle.is_empty());
    }

    #[test]
    fn limits() {
        let o = OracleOptions { max_order: 10, ..Default::default() };
        assert!(matches!(oracle_generate(&spec(3, 4, 5), 13, &o), Err(OracleError::TooLarge { .. })));
        let o = OracleOptions { max_states: 5, ..Default::default() };
        assert!(matches!(oracle_generate(&spec(3, 4, 5), 13, &o), Err(OracleError::Budget(5))));
    }
}
