//! Lower bounds on the order of `({r,m};g)`-graphs.
//!
//! The central object is the bi-regular Moore tree (BMT): the breadth-first
//! tree around a degree-`m` vertex (odd girth) or around an edge with a
//! degree-`m` endpoint (even girth), cut at depth `d = (g-1)/2`. Girth `g`
//! forces the tree's vertices to be distinct, so its order is a lower bound,
//! and it grows with every further degree-`m` vertex placed inside it.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::Length;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("placement {placement} is infeasible: {reason}")]
    InfeasiblePlacement { placement: MPlacement, reason: String },
    #[error("case {case} does not apply to d_min = {dmin} with t = {t}")]
    CaseMismatch { case: DistCase, dmin: usize, t: usize },
    #[error("no feasible m-placement for order {0}")]
    NoFeasiblePlacement(u64),
    #[error("this gluing variant needs an even number of remote vertices, got {0}")]
    OddRemoteCount(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    Vertex,
    Edge,
}

/// The query parameters `r < m` and girth `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub r: usize,
    pub m: usize,
    pub g: usize,
}

impl ProblemSpec {
    pub fn new(r: usize, m: usize, g: usize) -> Result<ProblemSpec, BoundsError> {
        if r < 2 {
            return Err(BoundsError::InvalidSpec(format!("r = {r} must be at least 2")));
        }
        if m <= r {
            return Err(BoundsError::InvalidSpec(format!("m = {m} must exceed r = {r}")));
        }
        if g < 3 {
            return Err(BoundsError::InvalidSpec(format!("g = {g} must be at least 3")));
        }
        Ok(ProblemSpec { r, m, g })
    }

    pub fn t(&self) -> usize {
        self.g / 2
    }

    /// Depth of the bi-regular Moore tree.
    pub fn depth(&self) -> usize {
        (self.g - 1) / 2
    }

    pub fn root_kind(&self) -> RootKind {
        if self.g % 2 == 1 {
            RootKind::Vertex
        } else {
            RootKind::Edge
        }
    }

    /// Allowed values of `counts[0]`.
    pub fn root_counts(&self) -> std::ops::RangeInclusive<u64> {
        match self.root_kind() {
            RootKind::Vertex => 1..=1,
            RootKind::Edge => 1..=2,
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{{},{}}};{})", self.r, self.m, self.g)
    }
}

/// Number of degree-`m` vertices on each BMT level `0..d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPlacement(pub Vec<u64>);

impl MPlacement {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// The placement of the plain bi-regular Moore tree.
    pub fn root_only(spec: &ProblemSpec) -> MPlacement {
        let mut v = vec![0; spec.depth()];
        v[0] = 1;
        MPlacement(v)
    }

    pub fn dominated_by(&self, other: &MPlacement) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

/// `sum_{i=0}^{k} (r-1)^i`; zero when `k < 0`.
pub fn power_sum(r: usize, k: isize) -> u64 {
    let mut total = 0u64;
    let mut term = 1u64;
    for _ in 0..(k + 1).max(0) {
        total = total.saturating_add(term);
        term = term.saturating_mul(r as u64 - 1);
    }
    total
}

fn pow(base: u64, e: usize) -> u64 {
    (0..e).fold(1u64, |acc, _| acc.saturating_mul(base))
}

/// The Moore bound for `r`-regular graphs of girth `g`.
pub fn moore_bound(r: usize, g: usize) -> u64 {
    let t = g / 2;
    if g % 2 == 1 {
        1 + (r as u64).saturating_mul(power_sum(r, t as isize - 1))
    } else {
        2 * power_sum(r, t as isize - 1)
    }
}

/// The bi-regular Moore bound: the order of the BMT with a single degree-`m`
/// vertex at the root.
pub fn bireg_moore_bound(r: usize, m: usize, g: usize) -> u64 {
    let t = g / 2;
    let m = m as u64;
    if g % 2 == 1 {
        1 + m.saturating_mul(power_sum(r, t as isize - 1))
    } else {
        1 + m.saturating_mul(power_sum(r, t as isize - 2)) + pow(r as u64 - 1, t - 1)
    }
}

/// Sizes of levels `0..=d` given `|L_0|`, `|L_1|` and a placement of length `d`.
pub fn level_sizes_from(
    r: usize,
    m: usize,
    l0: u64,
    l1: u64,
    placement: &MPlacement,
) -> Result<Vec<u64>, BoundsError> {
    let d = placement.0.len();
    let mut levels = Vec::with_capacity(d + 1);
    levels.push(l0);
    if d >= 1 {
        levels.push(l1);
    }
    for j in 2..=d {
        let prev = levels[j - 1];
        levels.push(
            ((m - r) as u64)
                .saturating_mul(placement.0[j - 1])
                .saturating_add((r as u64 - 1).saturating_mul(prev)),
        );
    }
    for (i, (&c, &size)) in placement.0.iter().zip(&levels).enumerate() {
        if c > size {
            return Err(BoundsError::InfeasiblePlacement {
                placement: placement.clone(),
                reason: format!("level {i} has {size} vertices but {c} of degree m"),
            });
        }
    }
    Ok(levels)
}

fn root_levels(spec: &ProblemSpec, placement: &MPlacement) -> Result<(u64, u64), BoundsError> {
    let (r, m) = (spec.r as u64, spec.m as u64);
    let c0 = placement.0.first().copied().unwrap_or(0);
    if placement.0.len() != spec.depth() || !spec.root_counts().contains(&c0) {
        return Err(BoundsError::InfeasiblePlacement {
            placement: placement.clone(),
            reason: format!(
                "expected {} levels with {:?} degree-m root vertices",
                spec.depth(),
                spec.root_counts()
            ),
        });
    }
    Ok(match spec.root_kind() {
        RootKind::Vertex => (1, m),
        RootKind::Edge => (2, c0 * (m - 1) + (2 - c0) * (r - 1)),
    })
}

/// Sizes of the BMT levels for `spec` under `placement`.
pub fn bmt_level_sizes(spec: &ProblemSpec, placement: &MPlacement) -> Result<Vec<u64>, BoundsError> {
    let (l0, l1) = root_levels(spec, placement)?;
    level_sizes_from(spec.r, spec.m, l0, l1, placement)
}

/// Order of the BMT, by the closed form.
pub fn bmt_order(spec: &ProblemSpec, placement: &MPlacement) -> Result<u64, BoundsError> {
    bmt_level_sizes(spec, placement)?;
    let (l0, l1) = root_levels(spec, placement)?;
    let d = spec.depth() as isize;
    let r = spec.r;
    let mut order = l0.saturating_add(l1.saturating_mul(power_sum(r, d - 1)));
    for (j, &c) in placement.0.iter().enumerate().skip(1) {
        let add = ((spec.m - r) as u64)
            .saturating_mul(c)
            .saturating_mul(power_sum(r, d - 1 - j as isize));
        order = order.saturating_add(add);
    }
    Ok(order)
}

/// All placements whose BMT fits in `n` vertices, in lexicographic order.
pub fn enumerate_placements(spec: &ProblemSpec, n: u64) -> Vec<MPlacement> {
    let d = spec.depth();
    let mut out = Vec::new();
    let mut cur = vec![0u64; d];
    for c0 in spec.root_counts() {
        cur.iter_mut().for_each(|c| *c = 0);
        cur[0] = c0;
        extend_placements(spec, n, 1, &mut cur, &mut out);
    }
    out
}

fn extend_placements(spec: &ProblemSpec, n: u64, level: usize, cur: &mut Vec<u64>, out: &mut Vec<MPlacement>) {
    let p = MPlacement(cur.clone());
    match bmt_order(spec, &p) {
        Ok(order) if order <= n => {}
        _ => return,
    }
    if level == cur.len() {
        out.push(p);
        return;
    }
    loop {
        extend_placements(spec, n, level + 1, cur, out);
        cur[level] += 1;
        let p = MPlacement(cur.clone());
        match bmt_order(spec, &p) {
            Ok(order) if order <= n => {}
            _ => break,
        }
    }
    cur[level] = 0;
}

/// Component-wise maximum over all feasible placements.
pub fn max_m_placement(spec: &ProblemSpec, n: u64) -> Result<MPlacement, BoundsError> {
    let all = enumerate_placements(spec, n);
    if all.is_empty() {
        return Err(BoundsError::NoFeasiblePlacement(n));
    }
    let mut max = vec![0u64; spec.depth()];
    for p in &all {
        for (m, &c) in max.iter_mut().zip(&p.0) {
            *m = (*m).max(c);
        }
    }
    Ok(MPlacement(max))
}

/// The three regimes of the even-girth distance bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistCase {
    /// Two degree-`m` vertices are adjacent.
    Adjacent,
    /// The closest pair is at distance `2..=t-1`.
    Near,
    /// The closest pair is at distance at least 3.
    Far,
}

impl fmt::Display for DistCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistCase::Adjacent => "i",
            DistCase::Near => "ii",
            DistCase::Far => "iii",
        })
    }
}

/// Lower bound on `n({r,m};2t)` for graphs with at least two degree-`m`
/// vertices whose closest pair is at distance `dmin`.
pub fn dist_lower_bound(r: usize, m: usize, t: usize, dmin: usize, case: DistCase) -> Result<u64, BoundsError> {
    let ok = t >= 4
        && r >= 3
        && m > r
        && match case {
            DistCase::Adjacent => dmin == 1,
            DistCase::Near => (2..t).contains(&dmin),
            DistCase::Far => dmin >= 3,
        };
    if !ok {
        return Err(BoundsError::CaseMismatch { case, dmin, t });
    }
    let (r64, m64) = (r as u64, m as u64);
    let s = power_sum(r, t as isize - 2);
    let top = pow(r64 - 1, t - 1);
    Ok(match case {
        DistCase::Adjacent => 2 + 2 * (m64 - 1) * s,
        DistCase::Near => 1 + m64 * s + (m64 - r64) * power_sum(r, t as isize - 1 - dmin as isize) + top,
        DistCase::Far => {
            let num = (m64 - r64) * (r64 - 2) * pow(r64 - 1, t - 2);
            1 + m64 * s + top + num.div_ceil(r64)
        }
    })
}

/// Lower bound on the order of a graph containing two degree-`m` vertices at
/// distance `dist`, from the BMT rooted at one of them.
///
/// For even girth the root edge is taken along a shortest path, so the
/// partner sits one level closer than its distance; beyond the tree's depth
/// the partner adds nothing.
pub fn pair_distance_bound(spec: &ProblemSpec, dist: usize) -> u64 {
    let d = spec.depth();
    let mut counts = vec![0u64; d];
    counts[0] = 1;
    let level = match spec.root_kind() {
        RootKind::Vertex => Some(dist).filter(|&l| l >= 1 && l < d),
        RootKind::Edge if dist == 1 => {
            counts[0] = 2;
            None
        }
        RootKind::Edge => Some(dist - 1).filter(|&l| l >= 1 && l < d),
    };
    if let Some(l) = level {
        counts[l] = 1;
    }
    bmt_order(spec, &MPlacement(counts)).expect("a single extra vertex always fits")
}

/// The strongest bound known for graphs whose closest degree-`m` pair is at
/// distance `dmin`: the BMT bound, combined with the even-girth bounds when
/// `g >= 8`.
pub fn dmin_bound(spec: &ProblemSpec, dmin: usize) -> u64 {
    let mut best = pair_distance_bound(spec, dmin);
    if spec.g % 2 == 0 && spec.g >= 8 && spec.r >= 3 {
        let t = spec.t();
        for case in [DistCase::Adjacent, DistCase::Near, DistCase::Far] {
            if let Ok(b) = dist_lower_bound(spec.r, spec.m, t, dmin, case) {
                best = best.max(b);
            }
        }
    }
    best
}

/// Smallest distance any two degree-`m` vertices of an order-`n` solution
/// can have. `Infinite` means a solution has exactly one degree-`m` vertex.
pub fn min_dist_deg_m(spec: &ProblemSpec, n: u64) -> Length {
    // past this distance the bound no longer changes
    let horizon = spec.depth() + 2;
    (1..=horizon)
        .find(|&dist| dmin_bound(spec, dist) <= n)
        .map_or(Length::Infinite, Length::Finite)
}

/// Everything the bound machinery says about `spec` at order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub spec: ProblemSpec,
    pub n: u64,
    pub moore: u64,
    pub bireg_moore: u64,
    pub dist_bounds: BTreeMap<usize, u64>,
    pub min_dist_threshold: Length,
    pub max_placement: Option<MPlacement>,
    pub placements: usize,
}

pub fn report(spec: &ProblemSpec, n: u64) -> BoundReport {
    let dist_bounds = (1..=spec.depth() + 1).map(|d| (d, dmin_bound(spec, d))).collect();
    BoundReport {
        spec: *spec,
        n,
        moore: moore_bound(spec.r, spec.g),
        bireg_moore: bireg_moore_bound(spec.r, spec.m, spec.g),
        dist_bounds,
        min_dist_threshold: min_dist_deg_m(spec, n),
        max_placement: max_m_placement(spec, n).ok(),
        placements: enumerate_placements(spec, n).len(),
    }
}

/// The three gluing recipes for regular seeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GlueVariant {
    /// `m = rk`: identify `k` copies at `s` remote vertices.
    Multiple { k: usize },
    /// `m = rk + 1`: one copy with `s/2` edges subdivided outward, `k` copies attached.
    PlusOne { k: usize },
    /// `m = rk + l(r-1)`: `k` copies plus `l` copies with `s/2` remote edges removed.
    WithEdges { k: usize, l: usize },
}

impl GlueVariant {
    pub fn m(&self, r: usize) -> usize {
        match *self {
            GlueVariant::Multiple { k } => r * k,
            GlueVariant::PlusOne { k } => r * k + 1,
            GlueVariant::WithEdges { k, l } => r * k + l * (r - 1),
        }
    }
}

/// Order of the glued graph built from an `r`-regular seed of order `ng`
/// with `s` remote vertices, and the resulting upper degree.
pub fn gluing_upper_bound(r: usize, ng: usize, s: usize, variant: GlueVariant) -> Result<(usize, u64), BoundsError> {
    let (ng64, s64) = (ng as u64, s as u64);
    let order = match variant {
        GlueVariant::Multiple { k } => k as u64 * (ng64 - s64) + s64,
        GlueVariant::PlusOne { k } => {
            if s % 2 == 1 {
                return Err(BoundsError::OddRemoteCount(s));
            }
            k as u64 * (ng64 - s64) + ng64 + s64
        }
        GlueVariant::WithEdges { k, l } => {
            if s % 2 == 1 {
                return Err(BoundsError::OddRemoteCount(s));
            }
            if l == 0 {
                return Err(BoundsError::InvalidSpec("l must be at least 1".into()));
            }
            (ng64 - s64) * (k + l) as u64 + s64
        }
    };
    Ok((variant.m(r), order))
}
