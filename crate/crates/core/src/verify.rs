//! Independent checks applied to every constructed or glued graph.

use thiserror::Error;

use crate::graph::{Graph, Length};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("order is {found}, expected {expected}")]
    Order { expected: usize, found: usize },
    #[error("vertex {vertex} has degree {degree}, expected {r} or {m}")]
    Degree { vertex: usize, degree: usize, r: usize, m: usize },
    #[error("{found} vertices of degree {m}, expected {expected}")]
    HighCount { m: usize, expected: usize, found: usize },
    #[error("girth is {found}, expected at least {min}")]
    Girth { min: usize, found: Length },
}

/// What a graph is claimed to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claim {
    pub order: usize,
    pub r: usize,
    pub m: usize,
    pub min_girth: usize,
    /// Exact number of degree-`m` vertices, when known.
    pub high: Option<usize>,
}

/// Checks `g` against `claim` and returns its girth.
pub fn check(g: &Graph, claim: &Claim) -> Result<Length, VerifyError> {
    if g.order() != claim.order {
        return Err(VerifyError::Order { expected: claim.order, found: g.order() });
    }
    let mut high = 0;
    for v in 0..g.order() {
        let d = g.degree(v);
        if d == claim.m {
            high += 1;
        } else if d != claim.r {
            return Err(VerifyError::Degree { vertex: v, degree: d, r: claim.r, m: claim.m });
        }
    }
    let expected = claim.high.unwrap_or(high);
    if high != expected || high == 0 || high == g.order() {
        return Err(VerifyError::HighCount { m: claim.m, expected, found: high });
    }
    let girth = g.girth();
    if girth < Length::Finite(claim.min_girth) {
        return Err(VerifyError::Girth { min: claim.min_girth, found: girth });
    }
    Ok(girth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn accepts_and_rejects() {
        let mut p = named::petersen();
        assert!(matches!(
            check(&p, &Claim { order: 10, r: 3, m: 4, min_girth: 5, high: None }),
            Err(VerifyError::HighCount { .. })
        ));
        p.add_vertices(1);
        for v in [0, 7] {
            p.add_edge(v, 10).unwrap();
        }
        let claim = Claim { order: 11, r: 3, m: 4, min_girth: 3, high: Some(2) };
        assert!(matches!(check(&p, &claim), Err(VerifyError::Degree { vertex: 10, .. })));
        p.add_edge(3, 10).unwrap();
        p.add_edge(5, 10).unwrap();
        let claim = Claim { high: Some(1), ..claim };
        assert!(matches!(check(&p, &claim), Err(VerifyError::HighCount { found: 5, .. })));
        let claim = Claim { high: None, ..claim };
        assert_eq!(check(&p, &claim), Ok(Length::Finite(3)));
        let claim = Claim { min_girth: 4, ..claim };
        assert!(matches!(check(&p, &claim), Err(VerifyError::Girth { .. })));
    }
}
