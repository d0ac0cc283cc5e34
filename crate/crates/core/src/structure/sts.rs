use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, TripleSystem};
use crate::Vertex;

/// A Steiner triple system found inside a larger system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinerSubsystem {
    pub points: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl SteinerSubsystem {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn to_system(&self) -> TripleSystem {
        TripleSystem::with_vertices(self.points.iter().copied(), self.edges.iter().copied())
            .expect("edges lie on the points")
    }
}

fn admissible(order: usize) -> bool {
    order >= 7 && matches!(order % 6, 1 | 3)
}

/// Looks for a Steiner subsystem of order 7 or 9. Larger orders need a
/// deadline, see [`find_sub_sts_within`].
pub fn find_sub_sts(sys: &TripleSystem, order: usize) -> Result<Option<SteinerSubsystem>> {
    if order > 9 {
        return Err(Error::Search(format!(
            "order {order} needs an explicit time budget"
        )));
    }
    find_sub_sts_within(sys, order, None)
}

/// Backtracking search with an optional deadline.
///
/// Every point of an order-`v` subsystem has degree `(v-1)/2` inside it, so
/// the search first prunes to that core. The smallest point `p` of the
/// subsystem then determines it: its other points are covered by exactly
/// `(v-1)/2` link pairs of `p`, each lying above `p`.
pub fn find_sub_sts_within(
    sys: &TripleSystem,
    order: usize,
    deadline: Option<Instant>,
) -> Result<Option<SteinerSubsystem>> {
    if !admissible(order) {
        return Err(Error::Search(format!(
            "no Steiner triple system of order {order} exists beyond the trivial ones"
        )));
    }
    let r = (order - 1) / 2;
    let core = prune_to_core(sys, r);
    for &p in core.vertices() {
        let pairs: Vec<(Vertex, Vertex)> = core
            .edges_at(p)
            .filter(|e| e.smallest() == p)
            .map(|e| e.others(p).expect("incident"))
            .collect();
        if pairs.len() < r {
            continue;
        }
        let mut chosen = Vec::with_capacity(r);
        if let Some(found) = choose_pairs(&core, p, &pairs, 0, r, &mut chosen, deadline)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Repeatedly drops vertices of degree below `r`.
fn prune_to_core(sys: &TripleSystem, r: usize) -> TripleSystem {
    let mut current = sys.clone();
    loop {
        let keep: BTreeSet<Vertex> = current
            .vertices()
            .iter()
            .copied()
            .filter(|&v| current.degree(v) >= r)
            .collect();
        if keep.len() == current.vertex_count() {
            return current;
        }
        current = current.induced(&keep);
    }
}

fn choose_pairs(
    core: &TripleSystem,
    p: Vertex,
    pairs: &[(Vertex, Vertex)],
    from: usize,
    r: usize,
    chosen: &mut Vec<(Vertex, Vertex)>,
    deadline: Option<Instant>,
) -> Result<Option<SteinerSubsystem>> {
    if chosen.len() == r {
        return Ok(complete(core, p, chosen));
    }
    if deadline.is_some_and(|d| Instant::now() >= d) {
        return Err(Error::Search("time budget exhausted".into()));
    }
    for i in from..pairs.len() {
        if pairs.len() - i < r - chosen.len() {
            break;
        }
        let (x, y) = pairs[i];
        if chosen.iter().any(|&(u, w)| [u, w].contains(&x) || [u, w].contains(&y)) {
            continue;
        }
        chosen.push(pairs[i]);
        let found = choose_pairs(core, p, pairs, i + 1, r, chosen, deadline)?;
        chosen.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Given the point set, picks edges covering every pair exactly once.
fn complete(core: &TripleSystem, p: Vertex, chosen: &[(Vertex, Vertex)]) -> Option<SteinerSubsystem> {
    let points: BTreeSet<Vertex> = chosen.iter().flat_map(|&(x, y)| [x, y]).chain([p]).collect();
    let inside = core.induced(&points);
    let mut covering: HashMap<(Vertex, Vertex), Vec<Edge>> = HashMap::new();
    for e in inside.edges() {
        let [x, y, z] = e.vertices();
        for pair in [(x, y), (x, z), (y, z)] {
            covering.entry(pair).or_default().push(*e);
        }
    }
    let pts: Vec<Vertex> = points.iter().copied().collect();
    let mut all_pairs = Vec::new();
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            if !covering.contains_key(&(x, y)) {
                return None;
            }
            all_pairs.push((x, y));
        }
    }
    let mut covered: BTreeMap<(Vertex, Vertex), bool> =
        all_pairs.iter().map(|&pr| (pr, false)).collect();
    let mut picked = Vec::new();
    if exact_cover(&covering, &mut covered, &mut picked) {
        picked.sort_unstable();
        Some(SteinerSubsystem { points: pts, edges: picked })
    } else {
        None
    }
}

fn exact_cover(
    covering: &HashMap<(Vertex, Vertex), Vec<Edge>>,
    covered: &mut BTreeMap<(Vertex, Vertex), bool>,
    picked: &mut Vec<Edge>,
) -> bool {
    let Some(&pair) = covered.iter().find(|(_, &c)| !c).map(|(p, _)| p) else {
        return true;
    };
    for e in &covering[&pair] {
        let [x, y, z] = e.vertices();
        let its = [(x, y), (x, z), (y, z)];
        if its.iter().any(|q| covered[q]) {
            continue;
        }
        for q in its {
            covered.insert(q, true);
        }
        picked.push(*e);
        if exact_cover(covering, covered, picked) {
            return true;
        }
        picked.pop();
        for q in its {
            covered.insert(q, false);
        }
    }
    false
}
