//! Iterated pendant removal and colouring restoration.
//!
//! A pendant is an edge with at least one vertex of degree 1. Removing it
//! cannot change 2-colourability: once the rest is coloured, a degree-1
//! vertex can always take a colour different from another vertex of its edge.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Edge, TripleSystem};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::Vertex;

/// One removal: the edge and the vertices that had degree 1 at that moment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub edge: Edge,
    pub free: Vec<Vertex>,
}

/// Removal order of pendant edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub removed: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }

    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.removed.iter().map(|s| &s.edge)
    }
}

/// Output of [`TripleSystem::remove_pendants`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: TripleSystem,
    pub trace: ReductionTrace,
}

impl Reduction {
    /// Extends a colouring of the reduced system to the original one.
    pub fn restore(&self, coloring: &Coloring) -> Result<Coloring> {
        if let Some(e) = self
            .reduced
            .edges()
            .iter()
            .find(|e| !coloring.is_bichromatic(e))
        {
            return Err(Error::InvalidColoring(e.vertices()));
        }
        restore_coloring(&self.trace, coloring)
    }
}

pub(super) fn remove_pendants(sys: &TripleSystem) -> Reduction {
    let mut degree: HashMap<Vertex, usize> =
        sys.vertices().iter().map(|&v| (v, sys.degree(v))).collect();
    let mut alive = vec![true; sys.edge_count()];
    let mut trace = ReductionTrace::default();

    // Lexicographic scan per pass, until a pass removes nothing.
    loop {
        let mut changed = false;
        for (i, e) in sys.edges().iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let free: Vec<Vertex> = e
                .vertices()
                .into_iter()
                .filter(|v| degree[v] == 1)
                .collect();
            if free.is_empty() {
                continue;
            }
            alive[i] = false;
            for v in e.vertices() {
                *degree.get_mut(&v).expect("edge vertex has a degree") -= 1;
            }
            trace.removed.push(ReductionStep { edge: *e, free });
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let reduced = TripleSystem::from_edges(
        sys.edges()
            .iter()
            .zip(&alive)
            .filter(|(_, &keep)| keep)
            .map(|(e, _)| *e),
    );
    Reduction { reduced, trace }
}

/// Re-adds trace edges in reverse removal order.
///
/// For each edge, the smallest free vertex takes the colour opposite to the
/// first already-coloured vertex and any other free vertices take `true`.
/// With no coloured vertex, the first free vertex gets `false` and the rest
/// `true`.
pub fn restore_coloring(trace: &ReductionTrace, coloring: &Coloring) -> Result<Coloring> {
    let mut out = coloring.clone();
    for step in trace.removed.iter().rev() {
        let mut free = step.free.clone();
        free.sort_unstable();
        let anchor = step
            .edge
            .vertices()
            .into_iter()
            .filter(|v| !free.contains(v))
            .map(|v| out.get(v).ok_or(Error::UnknownVertex(v)))
            .next()
            .transpose()?;
        let first = match anchor {
            Some(colour) => !colour,
            None => false,
        };
        for (k, &v) in free.iter().enumerate() {
            out.set(v, if k == 0 { first } else { true });
        }
        debug_assert!(out.is_bichromatic(&step.edge));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs;
    use crate::triples::{enumerate_triples, UpperBound};
    use std::collections::BTreeSet;

    fn pyth(n: u32) -> TripleSystem {
        TripleSystem::build(&enumerate_triples(UpperBound::new(n).unwrap()))
    }

    #[test]
    fn small_example_reduces_to_nothing() {
        let r = pyth(10).remove_pendants();
        assert!(r.reduced.is_empty());
        let removed: Vec<_> = r.trace.edges().map(|e| e.vertices()).collect();
        assert_eq!(removed, vec![[3, 4, 5], [6, 8, 10]]);
        assert_eq!(r.trace.removed[0].free, vec![3, 4, 5]);
    }

    #[test]
    fn fano_is_untouched() {
        let f = designs::fano();
        let r = f.remove_pendants();
        assert!(r.trace.is_empty());
        assert_eq!(r.reduced.edges(), f.edges());
    }

    #[test]
    fn chain_needs_several_passes() {
        // 13 only becomes degree 1 after {13,84,85} goes.
        let s = TripleSystem::from_arrays(&[[3, 4, 5], [5, 12, 13], [13, 84, 85]]).unwrap();
        let r = s.remove_pendants();
        assert!(r.reduced.is_empty());
        assert_eq!(r.trace.len(), 3);
    }

    #[test]
    fn idempotent_and_partitions_edges() {
        for n in [100, 300, 500] {
            let s = pyth(n);
            let r = s.remove_pendants();
            assert!(r.reduced.edge_count() < s.edge_count());
            assert!(r.reduced.remove_pendants().trace.is_empty());
            let mut all: Vec<Edge> = r.reduced.edges().to_vec();
            all.extend(r.trace.edges().copied());
            let as_set: BTreeSet<_> = all.iter().copied().collect();
            assert_eq!(as_set.len(), all.len());
            assert_eq!(as_set.into_iter().collect::<Vec<_>>(), s.edges());
            for e in r.reduced.edges() {
                assert!(e.vertices().iter().all(|&v| r.reduced.degree(v) >= 2));
            }
        }
    }

    #[test]
    fn trace_replays_forward() {
        let s = pyth(300);
        let r = s.remove_pendants();
        let mut removed = BTreeSet::new();
        for step in &r.trace.removed {
            let current = s.without_edges(&removed);
            for v in step.edge.vertices() {
                assert_eq!(current.degree(v) == 1, step.free.contains(&v));
            }
            removed.insert(step.edge);
        }
    }

    #[test]
    fn restore_empty_trace_is_identity() {
        let mut c = Coloring::new();
        c.set(3, true);
        assert_eq!(restore_coloring(&ReductionTrace::default(), &c).unwrap(), c);
    }

    #[test]
    fn restore_all_free_edge() {
        let trace = ReductionTrace {
            removed: vec![ReductionStep {
                edge: Edge::new(3, 4, 5).unwrap(),
                free: vec![3, 4, 5],
            }],
        };
        let c = restore_coloring(&trace, &Coloring::new()).unwrap();
        assert_eq!(c.get(3), Some(false));
        assert_eq!(c.get(4), Some(true));
        assert_eq!(c.get(5), Some(true));
    }

    #[test]
    fn restore_rejects_invalid_reduced_colouring() {
        let f = designs::fano();
        let r = f.remove_pendants();
        let all_true = Coloring::from_iter(f.vertices().iter().map(|&v| (v, true)));
        assert!(matches!(r.restore(&all_true), Err(Error::InvalidColoring(_))));
    }
}
