//! Independent colouring verification.
//!
//! [`verify`] re-derives the triples by scanning hypotenuses and legs
//! directly instead of using [`crate::triples::enumerate_triples`], so a bug in
//! the generator cannot certify its own output.

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::hypergraph::{Edge, TripleSystem};
use crate::triples::{Triple, UpperBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationReason {
    Monochromatic,
    UncoloredVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub triple: [u32; 3],
    pub reason: ViolationReason,
}

fn classify(vs: [u32; 3], coloring: &Coloring) -> Option<Violation> {
    let colours = vs.map(|v| coloring.get(v));
    let reason = if colours.iter().any(Option::is_none) {
        ViolationReason::UncoloredVertex
    } else if colours[0] == colours[1] && colours[1] == colours[2] {
        ViolationReason::Monochromatic
    } else {
        return None;
    };
    Some(Violation { triple: vs, reason })
}

/// Pythagorean triples with `c <= n`, found by solving for `b` given `(a, c)`.
pub fn scan_triples(bound: UpperBound) -> Vec<[u32; 3]> {
    let n = u64::from(bound.get());
    let mut out = Vec::new();
    for c in 1..=n {
        for a in 1..c {
            let b2 = c * c - a * a;
            let b = b2.isqrt();
            if b * b == b2 && a < b {
                out.push([a as u32, b as u32, c as u32]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every triple with entries `<= bound` that is monochromatic or touches an
/// uncoloured integer. Empty means the colouring is valid.
pub fn verify(bound: UpperBound, coloring: &Coloring) -> Vec<Violation> {
    scan_triples(bound)
        .into_iter()
        .filter_map(|t| classify(t, coloring))
        .collect()
}

pub fn check_triples(triples: &[Triple], coloring: &Coloring) -> Vec<Violation> {
    triples
        .iter()
        .filter_map(|t| classify(t.as_array(), coloring))
        .collect()
}

pub fn check_system(sys: &TripleSystem, coloring: &Coloring) -> Vec<Violation> {
    sys.edges()
        .iter()
        .filter_map(|e| classify(e.vertices(), coloring))
        .collect()
}

/// Whether every edge of `sys` is bichromatic under `coloring`.
pub fn is_bipartite_coloring(sys: &TripleSystem, coloring: &Coloring) -> bool {
    sys.edges().iter().all(|e: &Edge| coloring.is_bichromatic(e))
}
