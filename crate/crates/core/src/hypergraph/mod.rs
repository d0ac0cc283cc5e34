//! Triple systems (3-uniform hypergraphs) over positive integers.

mod bfs;
mod reduce;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use bfs::{default_seed, BfsLevels};
pub use reduce::{restore_coloring, Reduction, ReductionStep, ReductionTrace};

use crate::error::{Error, Result};
use crate::triples::Triple;
use crate::Vertex;

/// An unordered triple of distinct vertices, stored ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Vertex; 3]", into = "[Vertex; 3]")]
pub struct Edge([Vertex; 3]);

impl Edge {
    pub fn new(x: Vertex, y: Vertex, z: Vertex) -> Result<Self> {
        let mut v = [x, y, z];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::DegenerateEdge([x, y, z]));
        }
        Ok(Edge(v))
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn smallest(&self) -> Vertex {
        self.0[0]
    }

    pub fn middle(&self) -> Vertex {
        self.0[1]
    }

    pub fn largest(&self) -> Vertex {
        self.0[2]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// The two vertices other than `v`, ascending, if `v` is in the edge.
    pub fn others(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        match self.0.iter().position(|&x| x == v)? {
            0 => Some((self.0[1], self.0[2])),
            1 => Some((self.0[0], self.0[2])),
            _ => Some((self.0[0], self.0[1])),
        }
    }

    /// The vertex completing `{u, v}` to this edge.
    pub fn third(&self, u: Vertex, v: Vertex) -> Option<Vertex> {
        if u == v || !self.contains(u) || !self.contains(v) {
            return None;
        }
        self.0.iter().copied().find(|&x| x != u && x != v)
    }

    pub fn shared(&self, other: &Edge) -> usize {
        self.0.iter().filter(|v| other.contains(**v)).count()
    }
}

impl TryFrom<[Vertex; 3]> for Edge {
    type Error = Error;

    fn try_from([x, y, z]: [Vertex; 3]) -> Result<Self> {
        Edge::new(x, y, z)
    }
}

impl From<Edge> for [Vertex; 3] {
    fn from(e: Edge) -> Self {
        e.0
    }
}

impl From<Triple> for Edge {
    fn from(t: Triple) -> Self {
        Edge(t.as_array())
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, {}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// A vertex set with a set of triples over it, ordered by integer order.
///
/// Immutable once built. Edges are kept sorted lexicographically and
/// deduplicated; vertex incidences are indexed up front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    vertices: BTreeSet<Vertex>,
    edges: Vec<Edge>,
    incidence: HashMap<Vertex, Vec<usize>>,
    linear: bool,
}

impl Default for TripleSystem {
    fn default() -> Self {
        TripleSystem::from_edges(std::iter::empty())
    }
}

impl TripleSystem {
    /// System whose vertices are exactly the members of `triples`.
    pub fn build(triples: &[Triple]) -> Self {
        TripleSystem::from_edges(triples.iter().map(|&t| Edge::from(t)))
    }

    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let vertices = edges.iter().flat_map(|e| e.vertices()).collect();
        TripleSystem::assemble(vertices, edges.into_iter().collect())
    }

    /// Builds from integer triples, rejecting repeated vertices.
    pub fn from_arrays(edges: &[[Vertex; 3]]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|&[x, y, z]| Edge::new(x, y, z))
            .collect::<Result<Vec<_>>>()?;
        Ok(TripleSystem::from_edges(edges))
    }

    /// System with an explicit vertex set, which may include isolated vertices.
    pub fn with_vertices(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        if let Some(e) = edges
            .iter()
            .find(|e| e.vertices().iter().any(|v| !vertices.contains(v)))
        {
            return Err(Error::EdgeOutsideVertexSet(e.vertices()));
        }
        Ok(TripleSystem::assemble(vertices, edges.into_iter().collect()))
    }

    fn assemble(vertices: BTreeSet<Vertex>, edges: Vec<Edge>) -> Self {
        let mut incidence: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            for v in e.vertices() {
                incidence.entry(v).or_default().push(i);
            }
        }
        let linear = compute_linear(&edges);
        TripleSystem {
            vertices,
            edges,
            incidence,
            linear,
        }
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether any two distinct edges share at most one vertex.
    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence.get(&v).map_or(0, Vec::len)
    }

    /// Edges containing `v`, in lexicographic order.
    pub fn edges_at(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.incidence
            .get(&v)
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    /// Edges containing both `u` and `v`.
    pub fn edges_through(&self, u: Vertex, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.edges_at(u).filter(move |e| u != v && e.contains(v))
    }

    pub fn link(&self, v: Vertex) -> Result<LinkGraph> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let pairs = self
            .edges_at(v)
            .map(|e| e.others(v).expect("incident edge contains v"))
            .collect();
        Ok(LinkGraph { center: v, pairs })
    }

    /// Same vertex set, with the given edges removed.
    pub fn without_edges(&self, removed: &BTreeSet<Edge>) -> Self {
        let edges = self
            .edges
            .iter()
            .filter(|e| !removed.contains(e))
            .copied()
            .collect();
        TripleSystem::assemble(self.vertices.clone(), edges)
    }

    /// Edges whose vertices all lie in `keep`; vertex set becomes `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Self {
        let edges = self
            .edges
            .iter()
            .filter(|e| e.vertices().iter().all(|v| keep.contains(v)))
            .copied()
            .collect();
        TripleSystem::assemble(keep.clone(), edges)
    }

    /// Vertices sharing an edge with `v`, ascending.
    pub fn neighbours(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.edges_at(v)
            .flat_map(|e| e.vertices())
            .filter(|&x| x != v)
            .collect()
    }

    /// Distances from `source` in the vertex-edge incidence graph, counted
    /// in edges traversed: two vertices in one triple are at distance 1.
    pub fn distances_from(&self, source: Vertex) -> Result<BTreeMap<Vertex, usize>> {
        if !self.contains_vertex(source) {
            return Err(Error::UnknownVertex(source));
        }
        let mut dist = BTreeMap::from([(source, 0usize)]);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for e in self.edges_at(v) {
                for w in e.vertices() {
                    if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                        slot.insert(d + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(dist)
    }

    /// Incidence-graph distance between two vertices; `None` if disconnected.
    pub fn vertex_distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.distances_from(u)?.get(&v).copied())
    }

    pub fn remove_pendants(&self) -> Reduction {
        reduce::remove_pendants(self)
    }

    pub fn bfs_levels(&self, seed: &Edge) -> Result<BfsLevels> {
        bfs::bfs_levels(self, seed)
    }
}

fn compute_linear(edges: &[Edge]) -> bool {
    // Two edges sharing two vertices would share a pair; look for a repeated pair.
    let mut seen = std::collections::HashSet::new();
    for e in edges {
        let [x, y, z] = e.vertices();
        for pair in [(x, y), (x, z), (y, z)] {
            if !seen.insert(pair) {
                return false;
            }
        }
    }
    true
}

/// The pairs completing `center` to an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub center: Vertex,
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl LinkGraph {
    /// Whether no vertex lies in two pairs.
    pub fn is_matching(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.pairs
            .iter()
            .all(|&(a, b)| seen.insert(a) && seen.insert(b))
    }

    /// The pair containing `v`, if exactly one does.
    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        let mut hits = self.pairs.iter().filter_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        });
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs;
    use crate::triples::{enumerate_triples, UpperBound};

    fn sys(edges: &[[Vertex; 3]]) -> TripleSystem {
        TripleSystem::from_arrays(edges).unwrap()
    }

    #[test]
    fn build_small_example() {
        let s = TripleSystem::build(&enumerate_triples(UpperBound::new(10).unwrap()));
        assert_eq!(s.vertex_count(), 6);
        assert_eq!(s.edge_count(), 2);
        assert!(s.is_linear());
        let empty = TripleSystem::build(&[]);
        assert!(empty.is_empty() && empty.vertices().is_empty());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let s = sys(&[[3, 4, 5], [5, 4, 3]]);
        assert_eq!(s.edge_count(), 1);
        assert!(Edge::new(1, 1, 2).is_err());
    }

    #[test]
    fn linearity_is_checked() {
        assert!(!sys(&[[1, 2, 3], [1, 2, 4]]).is_linear());
        assert!(sys(&[[1, 2, 3], [1, 4, 5]]).is_linear());
    }

    #[test]
    fn pyth_is_linear_by_pairwise_scan() {
        let edges = TripleSystem::build(&enumerate_triples(UpperBound::new(200).unwrap()));
        let es = edges.edges();
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                assert!(es[i].shared(&es[j]) <= 1);
            }
        }
        assert!(edges.is_linear());
        assert!(TripleSystem::build(&enumerate_triples(UpperBound::new(2000).unwrap())).is_linear());
    }

    #[test]
    fn link_examples() {
        let s = sys(&[[3, 4, 5], [5, 12, 13]]);
        assert_eq!(s.link(5).unwrap().pairs, vec![(3, 4), (12, 13)]);
        assert!(matches!(s.link(7), Err(Error::UnknownVertex(7))));

        let isolated = TripleSystem::with_vertices([1, 2, 3, 9], [Edge::new(1, 2, 3).unwrap()]).unwrap();
        assert!(isolated.link(9).unwrap().pairs.is_empty());
    }

    #[test]
    fn fano_links_are_perfect_matchings() {
        let f = designs::fano();
        for &v in f.vertices() {
            let link = f.link(v).unwrap();
            assert_eq!(link.pairs.len(), 3);
            assert!(link.is_matching());
            let covered: BTreeSet<_> = link.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            let others: BTreeSet<_> = f.vertices().iter().copied().filter(|&x| x != v).collect();
            assert_eq!(covered, others);
        }
    }

    #[test]
    fn distances() {
        let one = sys(&[[3, 4, 5]]);
        assert_eq!(one.vertex_distance(3, 5).unwrap(), Some(1));
        assert_eq!(one.vertex_distance(3, 3).unwrap(), Some(0));
        let two = sys(&[[3, 4, 5], [5, 12, 13]]);
        assert_eq!(two.vertex_distance(3, 13).unwrap(), Some(2));
        let apart = sys(&[[3, 4, 5], [6, 8, 10]]);
        assert_eq!(apart.vertex_distance(3, 10).unwrap(), None);
        assert!(apart.vertex_distance(3, 99).is_err());
    }

    #[test]
    fn vertex_set_must_cover_edges() {
        assert!(TripleSystem::with_vertices([1, 2], [Edge::new(1, 2, 3).unwrap()]).is_err());
    }
}
