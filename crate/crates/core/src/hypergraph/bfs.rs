//! Breadth-first levels in the triple intersection graph, where two
//! triples are adjacent when they share a vertex.

use std::collections::{HashMap, VecDeque};
use std::io::{self, Write};

use serde::Serialize;

use super::{Edge, TripleSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BfsLevels {
    pub seed: Edge,
    /// `levels[i]` holds the triples at intersection distance `i` from the seed.
    pub levels: Vec<Vec<Edge>>,
    /// Triples in other components.
    pub unreachable: Vec<Edge>,
}

impl BfsLevels {
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn deepest(&self) -> &[Edge] {
        self.levels.last().map_or(&[], Vec::as_slice)
    }

    pub fn histogram(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn level_of(&self, e: &Edge) -> Option<usize> {
        self.levels.iter().position(|l| l.binary_search(e).is_ok())
    }

    /// `level,count` CSV for plotting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "level,count")?;
        for (i, n) in self.histogram().into_iter().enumerate() {
            writeln!(w, "{i},{n}")?;
        }
        Ok(())
    }
}

pub(super) fn bfs_levels(sys: &TripleSystem, seed: &Edge) -> Result<BfsLevels> {
    let Ok(seed_idx) = sys.edges().binary_search(seed) else {
        return Err(Error::UnknownEdge(seed.vertices()));
    };
    let edges = sys.edges();
    let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut level = vec![usize::MAX; edges.len()];
    level[seed_idx] = 0;
    let mut queue = VecDeque::from([seed_idx]);
    let mut levels: Vec<Vec<Edge>> = vec![vec![*seed]];
    while let Some(i) = queue.pop_front() {
        let next = level[i] + 1;
        for v in edges[i].vertices() {
            for e in sys.edges_at(v) {
                let j = index[e];
                if level[j] == usize::MAX {
                    level[j] = next;
                    if levels.len() <= next {
                        levels.push(Vec::new());
                    }
                    levels[next].push(*e);
                    queue.push_back(j);
                }
            }
        }
    }
    for l in &mut levels {
        l.sort_unstable();
    }
    let unreachable = edges
        .iter()
        .zip(&level)
        .filter(|(_, &l)| l == usize::MAX)
        .map(|(e, _)| *e)
        .collect();
    Ok(BfsLevels {
        seed: *seed,
        levels,
        unreachable,
    })
}

/// The lexicographically smallest edge, used as the default BFS seed.
pub fn default_seed(sys: &TripleSystem) -> Option<Edge> {
    sys.edges().first().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::{enumerate_triples, UpperBound};

    fn e(x: u32, y: u32, z: u32) -> Edge {
        Edge::new(x, y, z).unwrap()
    }

    #[test]
    fn single_and_pair() {
        let one = TripleSystem::from_arrays(&[[3, 4, 5]]).unwrap();
        assert_eq!(one.bfs_levels(&e(3, 4, 5)).unwrap().levels, vec![vec![e(3, 4, 5)]]);
        let two = TripleSystem::from_arrays(&[[3, 4, 5], [5, 12, 13]]).unwrap();
        assert_eq!(
            two.bfs_levels(&e(3, 4, 5)).unwrap().levels,
            vec![vec![e(3, 4, 5)], vec![e(5, 12, 13)]]
        );
        assert!(two.bfs_levels(&e(6, 8, 10)).is_err());
    }

    #[test]
    fn unreachable_reported() {
        let s = TripleSystem::from_arrays(&[[3, 4, 5], [6, 8, 10]]).unwrap();
        let b = s.bfs_levels(&e(3, 4, 5)).unwrap();
        assert_eq!(b.unreachable, vec![e(6, 8, 10)]);
    }

    /// Floyd-Warshall over the intersection graph.
    fn all_pairs(edges: &[Edge]) -> Vec<Vec<usize>> {
        let n = edges.len();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for i in 0..n {
            d[i][i] = 0;
            for j in 0..n {
                if i != j && edges[i].shared(&edges[j]) > 0 {
                    d[i][j] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    #[test]
    fn levels_agree_with_floyd_warshall() {
        let s = TripleSystem::build(&enumerate_triples(UpperBound::new(300).unwrap()));
        let reduced = s.remove_pendants().reduced;
        for sys in [&s, &reduced] {
            let seed = default_seed(sys).unwrap();
            let b = sys.bfs_levels(&seed).unwrap();
            let d = all_pairs(sys.edges());
            let si = sys.edges().binary_search(&seed).unwrap();
            for (j, edge) in sys.edges().iter().enumerate() {
                match b.level_of(edge) {
                    Some(l) => assert_eq!(d[si][j], l),
                    None => assert!(d[si][j] > sys.edge_count() && b.unreachable.contains(edge)),
                }
            }
            // Each triple at level i >= 1 meets level i-1 and nothing earlier.
            for i in 1..b.levels.len() {
                for t in &b.levels[i] {
                    assert!(b.levels[i - 1].iter().any(|u| u.shared(t) > 0));
                    for earlier in &b.levels[..i - 1] {
                        assert!(earlier.iter().all(|u| u.shared(t) == 0));
                    }
                }
            }
        }
    }

    #[test]
    fn csv_export() {
        let s = TripleSystem::from_arrays(&[[3, 4, 5], [5, 12, 13]]).unwrap();
        let mut buf = Vec::new();
        s.bfs_levels(&e(3, 4, 5)).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "level,count\n0,1\n1,1\n");
    }
}
