use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, TripleSystem};
use crate::Vertex;

/// A k-bicycle: antipodes `a`, `b` and a rim of `2k` vertices indexed mod
/// `2k`, with edges `{a, rim[2j], rim[2j+1]}` and `{b, rim[2j-1], rim[2j]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bicycle {
    antipodes: (Vertex, Vertex),
    rim: Vec<Vertex>,
}

impl Bicycle {
    pub fn new(a: Vertex, b: Vertex, rim: Vec<Vertex>) -> Result<Self> {
        if rim.len() < 4 || !rim.len().is_multiple_of(2) {
            return Err(Error::InvalidBicycle(format!(
                "rim must have even length >= 4, got {}",
                rim.len()
            )));
        }
        let distinct: BTreeSet<_> = rim.iter().copied().chain([a, b]).collect();
        if distinct.len() != rim.len() + 2 {
            return Err(Error::InvalidBicycle("vertices are not distinct".into()));
        }
        Ok(Bicycle { antipodes: (a, b), rim })
    }

    pub fn k(&self) -> usize {
        self.rim.len() / 2
    }

    pub fn antipodes(&self) -> (Vertex, Vertex) {
        self.antipodes
    }

    pub fn rim(&self) -> &[Vertex] {
        &self.rim
    }

    pub fn edges(&self) -> Vec<Edge> {
        let (a, b) = self.antipodes;
        let n = self.rim.len();
        let mut out = Vec::with_capacity(n);
        for j in 0..self.k() {
            let even = 2 * j;
            out.push(Edge::new(a, self.rim[even], self.rim[even + 1]).expect("distinct"));
            out.push(Edge::new(b, self.rim[(even + n - 1) % n], self.rim[even]).expect("distinct"));
        }
        out
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.rim.iter().copied().chain([self.antipodes.0, self.antipodes.1]).collect()
    }

    pub fn is_in(&self, sys: &TripleSystem) -> bool {
        self.edges().iter().all(|e| sys.contains_edge(e))
    }

    /// Whether the two largest vertices are exactly the antipodes.
    pub fn antipodes_are_maximal(&self) -> bool {
        let top: Vec<Vertex> = self.vertices().into_iter().rev().take(2).collect();
        let (a, b) = self.antipodes;
        top.contains(&a) && top.contains(&b)
    }

    /// Representative with the smaller antipode first and the rim rotated
    /// or reflected to its lexicographic minimum.
    pub fn canonical(&self) -> Bicycle {
        let (mut a, mut b) = self.antipodes;
        let n = self.rim.len();
        let mut rim = self.rim.clone();
        if a > b {
            // Shifting by one puts b's pairs at even positions.
            std::mem::swap(&mut a, &mut b);
            rim = (0..n).map(|i| self.rim[(i + n - 1) % n]).collect();
        }
        let best = (0..n)
            .step_by(2)
            .flat_map(|s| {
                let rot: Vec<Vertex> = (0..n).map(|i| rim[(i + s) % n]).collect();
                // i -> (s + 1 - i) keeps a-pairs at (2j, 2j+1).
                let refl: Vec<Vertex> = (0..n).map(|i| rim[(s + 1 + n - i) % n]).collect();
                [rot, refl]
            })
            .min()
            .expect("rim is nonempty");
        Bicycle { antipodes: (a, b), rim: best }
    }
}

/// The quadrilateral `abc, ade, bef, cdf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PaschConfig {
    pub points: [Vertex; 6],
}

impl PaschConfig {
    pub fn edges(&self) -> [Edge; 4] {
        let [a, b, c, d, e, f] = self.points;
        [[a, b, c], [a, d, e], [b, e, f], [c, d, f]]
            .map(|[x, y, z]| Edge::new(x, y, z).expect("distinct points"))
    }

    pub fn from_bicycle(bike: &Bicycle) -> Option<Self> {
        if bike.k() != 2 {
            return None;
        }
        let (a, f) = bike.antipodes;
        let r = &bike.rim;
        Some(PaschConfig { points: [a, r[0], r[1], r[2], r[3], f] })
    }
}

/// All bicycles with `2 <= k <= max_k`, in canonical form, sorted.
///
/// A Pasch configuration appears once for each of its three antipode pairs.
pub fn find_bicycles(sys: &TripleSystem, max_k: usize) -> Vec<Bicycle> {
    let mut found = BTreeSet::new();
    if max_k < 2 {
        return Vec::new();
    }
    for &a in sys.vertices() {
        for e in sys.edges_at(a) {
            let (p, q) = e.others(a).expect("incident");
            for (r0, r1) in [(p, q), (q, p)] {
                for f in sys.edges_at(r1).filter(|f| !f.contains(a)) {
                    let (x, y) = f.others(r1).expect("incident");
                    for (b, r2) in [(x, y), (y, x)] {
                        if b <= a || b == r0 || r2 == r0 {
                            continue;
                        }
                        let mut rim = vec![r0, r1, r2];
                        extend_rim(sys, a, b, max_k, &mut rim, &mut found);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

fn extend_rim(
    sys: &TripleSystem,
    a: Vertex,
    b: Vertex,
    max_k: usize,
    rim: &mut Vec<Vertex>,
    found: &mut BTreeSet<Bicycle>,
) {
    let last = *rim.last().expect("rim started");
    let next_antipode = if rim.len() % 2 == 1 { a } else { b };
    if next_antipode == b && rim.len() >= 4 && sys.edges_through(b, last).any(|e| e.contains(rim[0])) {
        let bike = Bicycle::new(a, b, rim.clone()).expect("rim vertices are distinct");
        found.insert(bike.canonical());
    }
    if rim.len() >= 2 * max_k {
        return;
    }
    let candidates: Vec<Vertex> = sys
        .edges_through(next_antipode, last)
        .filter_map(|e| e.third(next_antipode, last))
        .filter(|&v| v != a && v != b && !rim.contains(&v))
        .collect();
    for v in candidates {
        rim.push(v);
        extend_rim(sys, a, b, max_k, rim, found);
        rim.pop();
    }
}

/// Every vertex pair lies in exactly one edge.
pub fn is_steiner(sys: &TripleSystem) -> bool {
    let mut cover: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for e in sys.edges() {
        let [x, y, z] = e.vertices();
        for p in [(x, y), (x, z), (y, z)] {
            *cover.entry(p).or_default() += 1;
        }
    }
    let v = sys.vertex_count();
    cover.len() == v * v.saturating_sub(1) / 2 && cover.values().all(|&n| n == 1)
}

/// A bicycle with antipodes `v` and `w` inside a Steiner triple system.
///
/// With `{v, w, z}` the edge through `v` and `w`, the links of `v` and `w`
/// minus that edge are perfect matchings on the remaining points. Their
/// union splits into even cycles of length at least four; the cycle through
/// the smallest remaining point is returned as the rim.
pub fn find_bicycle_in_sts(sts: &TripleSystem, v: Vertex, w: Vertex) -> Result<Bicycle> {
    if sts.vertex_count() < 7 {
        return Err(Error::NotSteiner(format!(
            "trivial system with {} points",
            sts.vertex_count()
        )));
    }
    if !is_steiner(sts) {
        return Err(Error::NotSteiner("some pair is not covered exactly once".into()));
    }
    for x in [v, w] {
        if !sts.contains_vertex(x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    if v == w {
        return Err(Error::InvalidBicycle("antipodes must differ".into()));
    }
    let z = sts
        .edges_through(v, w)
        .find_map(|e| e.third(v, w))
        .expect("steiner system covers every pair");
    let m1 = sts.link(v)?;
    let m2 = sts.link(w)?;
    let start = *sts
        .vertices()
        .iter()
        .find(|&&x| x != v && x != w && x != z)
        .expect("at least seven points");
    let mut rim = vec![start];
    loop {
        let cur = *rim.last().expect("nonempty");
        let link = if rim.len() % 2 == 1 { &m1 } else { &m2 };
        let next = link.partner(cur).expect("link of a steiner system is a perfect matching");
        if next == start {
            break;
        }
        rim.push(next);
    }
    Bicycle::new(v, w, rim)
}

/// True iff no bicycle has its two largest points as its antipodes.
///
/// This is what the upper and lower sum properties guarantee for every
/// bicycle contained in `sys`.
pub fn check_bicycle_antipode_theorem(sys: &TripleSystem, bicycles: &[Bicycle]) -> bool {
    debug_assert!(bicycles.iter().all(|b| b.is_in(sys)));
    bicycles.iter().all(|b| !b.antipodes_are_maximal())
}
