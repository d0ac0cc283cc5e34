//! Small fixed triple systems used as fixtures and counterexamples.

use crate::hypergraph::{Edge, TripleSystem};
use crate::Vertex;

/// The Fano plane on `{1, ..., 7}`.
pub fn fano() -> TripleSystem {
    TripleSystem::from_arrays(&[
        [1, 2, 3],
        [1, 4, 5],
        [1, 6, 7],
        [2, 4, 6],
        [2, 5, 7],
        [3, 4, 7],
        [3, 5, 6],
    ])
    .expect("fano edges are valid")
}

/// The affine plane AG(2,3), an STS(9), on `{1, ..., 9}`.
///
/// Point `(x, y)` of `Z_3 x Z_3` is labelled `3x + y + 1`; the twelve lines
/// come in four parallel classes.
pub fn affine_plane_3() -> TripleSystem {
    let label = |x: u32, y: u32| 3 * (x % 3) + (y % 3) + 1;
    let mut edges = Vec::new();
    for c in 0..3 {
        // x = c, y = c, and y = x + c, y = 2x + c.
        edges.push([label(c, 0), label(c, 1), label(c, 2)]);
        edges.push([label(0, c), label(1, c), label(2, c)]);
        edges.push([label(0, c), label(1, c + 1), label(2, c + 2)]);
        edges.push([label(0, c), label(1, c + 2), label(2, c + 4)]);
    }
    TripleSystem::from_arrays(&edges).expect("affine plane edges are valid")
}

/// Schur triples `{a, b, a + b}`, `a < b`, with `a + b <= n`.
pub fn schur(n: Vertex) -> TripleSystem {
    TripleSystem::from_edges((1..=n).flat_map(|a| {
        (a + 1..=n.saturating_sub(a)).map(move |b| Edge::new(a, b, a + b).expect("a < b < a + b"))
    }))
}

/// The 3-bicycle ("hexagon") with edges afh, aei, adg, beh, bdi, bfg,
/// letters a..i mapped to 1..9 (no `c`).
pub fn hexagon() -> TripleSystem {
    let (a, b, d, e, f, g, h, i) = (1, 2, 4, 5, 6, 7, 8, 9);
    TripleSystem::from_arrays(&[
        [a, f, h],
        [a, e, i],
        [a, d, g],
        [b, e, h],
        [b, d, i],
        [b, f, g],
    ])
    .expect("hexagon edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_steiner(s: &TripleSystem) -> bool {
        let vs: Vec<_> = s.vertices().iter().copied().collect();
        vs.iter().enumerate().all(|(i, &x)| {
            vs[i + 1..]
                .iter()
                .all(|&y| s.edges_through(x, y).count() == 1)
        })
    }

    #[test]
    fn fixtures_are_what_they_claim() {
        assert!(is_steiner(&fano()));
        assert_eq!(fano().edge_count(), 7);
        let ag = affine_plane_3();
        assert_eq!(ag.edge_count(), 12);
        assert!(is_steiner(&ag));
        assert!(hexagon().is_linear());
        assert_eq!(hexagon().vertex_count(), 8);
        assert!(schur(25).contains_edge(&Edge::new(5, 15, 20).unwrap()));
        assert_eq!(schur(6).edge_count(), 6);
    }
}
