use std::collections::BTreeMap;

use serde::Serialize;

use crate::hypergraph::{Edge, TripleSystem};
use crate::Vertex;

/// Result of a sum-property check; `witness` is a violating ordered edge pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumPropertyReport {
    pub holds: bool,
    pub witness: Option<(Edge, Edge)>,
}

impl SumPropertyReport {
    fn from_witness(witness: Option<(Edge, Edge)>) -> Self {
        SumPropertyReport {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// `(a <= a') && (b < b')` implies `c < c'`, over all ordered edge pairs.
pub fn check_sum_property(sys: &TripleSystem) -> SumPropertyReport {
    let edges = sys.edges();
    let witness = edges.iter().find_map(|e| {
        edges.iter().find_map(|f| {
            let violated = e != f && e.smallest() <= f.smallest() && e.middle() < f.middle() && e.largest() >= f.largest();
            violated.then_some((*e, *f))
        })
    });
    SumPropertyReport::from_witness(witness)
}

/// Pairs sharing their minimum `a`: `b > b'` implies `c > c'`.
pub fn check_upper_sum_property(sys: &TripleSystem) -> SumPropertyReport {
    let witness = pairs_grouped_by(sys, Edge::smallest)
        .find(|(e, f)| e.middle() > f.middle() && e.largest() <= f.largest());
    SumPropertyReport::from_witness(witness)
}

/// Pairs sharing their maximum `c`: `a > a'` implies `b < b'`.
pub fn check_lower_sum_property(sys: &TripleSystem) -> SumPropertyReport {
    let witness = pairs_grouped_by(sys, Edge::largest)
        .find(|(e, f)| e.smallest() > f.smallest() && e.middle() >= f.middle());
    SumPropertyReport::from_witness(witness)
}

fn pairs_grouped_by(
    sys: &TripleSystem,
    key: fn(&Edge) -> Vertex,
) -> impl Iterator<Item = (Edge, Edge)> + '_ {
    let mut groups: BTreeMap<Vertex, Vec<Edge>> = BTreeMap::new();
    for e in sys.edges() {
        groups.entry(key(e)).or_default().push(*e);
    }
    groups.into_values().flat_map(|g| {
        let n = g.len();
        (0..n).flat_map(move |i| {
            let g = g.clone();
            (0..n).filter(move |&j| j != i).map(move |j| (g[i], g[j]))
        })
    })
}

fn link_pairs(sys: &TripleSystem, x: Vertex, keep: impl Fn(Vertex) -> bool) -> Vec<(Vertex, Vertex)> {
    sys.edges_at(x)
        .filter_map(|e| e.others(x))
        .filter(|&(p, q)| keep(p) && keep(q))
        .collect()
}

fn is_matching(pairs: &[(Vertex, Vertex)]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    pairs.iter().all(|&(p, q)| seen.insert(p) && seen.insert(q))
}

/// `(p, q)` strictly inside `(r, s)`.
fn nested_in(inner: (Vertex, Vertex), outer: (Vertex, Vertex)) -> bool {
    outer.0 < inner.0 && inner.1 < outer.1
}

/// Upper sum property restated on links: for each `x`, the link pairs lying
/// entirely above `x` form a non-nesting matching.
pub fn upper_sum_by_links(sys: &TripleSystem) -> bool {
    sys.vertices().iter().all(|&x| {
        let pairs = link_pairs(sys, x, |y| y > x);
        is_matching(&pairs)
            && pairs.iter().enumerate().all(|(i, &p)| {
                pairs[i + 1..]
                    .iter()
                    .all(|&q| !nested_in(p, q) && !nested_in(q, p))
            })
    })
}

/// Lower sum property restated on links: for each `x`, the link pairs lying
/// entirely below `x` form a fully nested matching.
pub fn lower_sum_by_links(sys: &TripleSystem) -> bool {
    sys.vertices().iter().all(|&x| {
        let pairs = link_pairs(sys, x, |y| y < x);
        is_matching(&pairs)
            && pairs.iter().enumerate().all(|(i, &p)| {
                pairs[i + 1..]
                    .iter()
                    .all(|&q| nested_in(p, q) || nested_in(q, p))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs;
    use crate::triples::{enumerate_triples, UpperBound};
    use proptest::prelude::*;

    fn sys(edges: &[[Vertex; 3]]) -> TripleSystem {
        TripleSystem::from_arrays(edges).unwrap()
    }

    fn pyth(n: u32) -> TripleSystem {
        TripleSystem::build(&enumerate_triples(UpperBound::new(n).unwrap()))
    }

    #[test]
    fn sum_property_examples() {
        assert!(check_sum_property(&pyth(2000)).holds);
        assert!(check_sum_property(&designs::schur(50)).holds);
        let bad = sys(&[[1, 2, 6], [1, 3, 5]]);
        let r = check_sum_property(&bad);
        assert!(!r.holds);
        let (e, f) = r.witness.unwrap();
        assert_eq!((e.vertices(), f.vertices()), ([1, 2, 6], [1, 3, 5]));
        assert!(check_sum_property(&TripleSystem::default()).holds);
    }

    #[test]
    fn upper_examples() {
        assert!(check_upper_sum_property(&pyth(1000)).holds);
        let r = check_upper_sum_property(&sys(&[[1, 5, 6], [1, 4, 7]]));
        assert!(!r.holds);
        assert!(!upper_sum_by_links(&sys(&[[1, 5, 6], [1, 4, 7]])));
    }

    #[test]
    fn lower_examples() {
        assert!(check_lower_sum_property(&pyth(1000)).holds);
        assert!(!check_lower_sum_property(&sys(&[[2, 5, 9], [1, 4, 9]])).holds);
        assert!(!lower_sum_by_links(&sys(&[[2, 5, 9], [1, 4, 9]])));
        assert!(check_lower_sum_property(&TripleSystem::default()).holds);
    }

    #[test]
    fn link_forms_agree_on_pyth() {
        let p = pyth(1000);
        assert!(upper_sum_by_links(&p));
        assert!(lower_sum_by_links(&p));
    }

    /// Random linear system on 1..=n built by greedy insertion.
    fn linear_system(n: u32, picks: &[(u32, u32, u32)]) -> TripleSystem {
        let mut used = std::collections::BTreeSet::new();
        let mut edges = Vec::new();
        for &(x, y, z) in picks {
            let (x, y, z) = (x % n + 1, y % n + 1, z % n + 1);
            let Ok(e) = Edge::new(x, y, z) else { continue };
            let [a, b, c] = e.vertices();
            let pairs = [(a, b), (a, c), (b, c)];
            if pairs.iter().any(|p| used.contains(p)) {
                continue;
            }
            used.extend(pairs);
            edges.push(e);
        }
        TripleSystem::from_edges(edges)
    }

    proptest! {
        #[test]
        fn link_restatements_agree(picks in prop::collection::vec((0u32..12, 0u32..12, 0u32..12), 0..14)) {
            let s = linear_system(12, &picks);
            prop_assert!(s.is_linear());
            prop_assert_eq!(check_upper_sum_property(&s).holds, upper_sum_by_links(&s));
            prop_assert_eq!(check_lower_sum_property(&s).holds, lower_sum_by_links(&s));
        }

        #[test]
        fn sum_implies_weaker_forms(mask in prop::collection::vec(any::<bool>(), 36)) {
            // Subsystems of SCHUR keep the sum property.
            let schur = designs::schur(12);
            let edges = schur.edges().iter().zip(mask.iter().cycle()).filter(|(_, &k)| k).map(|(e, _)| *e);
            let s = TripleSystem::from_edges(edges);
            prop_assert!(check_sum_property(&s).holds);
            prop_assert!(check_upper_sum_property(&s).holds);
            prop_assert!(check_lower_sum_property(&s).holds);
        }

        #[test]
        fn witnesses_are_genuine(picks in prop::collection::vec((0u32..9, 0u32..9, 0u32..9), 0..10)) {
            let s = linear_system(9, &picks);
            if let Some((e, f)) = check_sum_property(&s).witness {
                prop_assert!(e.smallest() <= f.smallest() && e.middle() < f.middle() && e.largest() >= f.largest());
            }
            if let Some((e, f)) = check_upper_sum_property(&s).witness {
                prop_assert!(e.smallest() == f.smallest() && e.middle() > f.middle() && e.largest() <= f.largest());
            }
            if let Some((e, f)) = check_lower_sum_property(&s).witness {
                prop_assert!(e.largest() == f.largest() && e.smallest() > f.smallest() && e.middle() >= f.middle());
            }
            if check_sum_property(&s).holds {
                prop_assert!(check_upper_sum_property(&s).holds && check_lower_sum_property(&s).holds);
            }
        }
    }
}
