//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pythcolor::{Coloring, Edge, TripleSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All `a < b < c <= n` with `a^2 + b^2 = c^2`, by direct search.
pub fn brute_triples(n: u32) -> Vec<[u32; 3]> {
    let n = u64::from(n);
    let mut out = Vec::new();
    for c in 1..=n {
        for a in 1..c {
            for b in a + 1..c {
                if a * a + b * b == c * c {
                    out.push([a as u32, b as u32, c as u32]);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn brute_system(n: u32) -> TripleSystem {
    TripleSystem::from_arrays(&brute_triples(n)).unwrap()
}

/// Integers appearing in some triple `<= n`.
pub fn brute_scope(n: u32) -> BTreeSet<u32> {
    brute_triples(n).into_iter().flatten().collect()
}

fn monochromatic(e: &[u32; 3], colour: &[Option<bool>]) -> bool {
    let [x, y, z] = e.map(|v| colour[v as usize]);
    matches!((x, y, z), (Some(p), Some(q), Some(r)) if p == q && q == r)
}

/// Complete backtracking search for a proper 2-colouring; returns one if it
/// exists.
pub fn backtrack_coloring(sys: &TripleSystem) -> Option<Coloring> {
    let verts: Vec<u32> = sys.vertices().iter().copied().collect();
    let top = verts.last().copied().unwrap_or(0) as usize;
    let edges: Vec<[u32; 3]> = sys.edges().iter().map(Edge::vertices).collect();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (i, e) in edges.iter().enumerate() {
        for v in e {
            at[*v as usize].push(i);
        }
    }
    let mut colour = vec![None; top + 1];
    fn go(
        i: usize,
        verts: &[u32],
        edges: &[[u32; 3]],
        at: &[Vec<usize>],
        colour: &mut Vec<Option<bool>>,
    ) -> bool {
        let Some(&v) = verts.get(i) else { return true };
        for c in [false, true] {
            colour[v as usize] = Some(c);
            if at[v as usize].iter().all(|&k| !monochromatic(&edges[k], colour))
                && go(i + 1, verts, edges, at, colour)
            {
                return true;
            }
        }
        colour[v as usize] = None;
        false
    }
    go(0, &verts, &edges, &at, &mut colour).then(|| {
        verts
            .iter()
            .map(|&v| (v, colour[v as usize].unwrap()))
            .collect()
    })
}

/// Counts proper colourings by enumerating all `2^v` assignments.
pub fn count_colorings(sys: &TripleSystem) -> u64 {
    let verts: Vec<u32> = sys.vertices().iter().copied().collect();
    assert!(verts.len() <= 24, "truth table too large");
    let idx = |v: u32| verts.binary_search(&v).unwrap();
    let masks: Vec<[usize; 3]> = sys
        .edges()
        .iter()
        .map(|e| e.vertices().map(idx))
        .collect();
    (0u64..1 << verts.len())
        .filter(|bits| {
            masks.iter().all(|m| {
                let c = m.map(|i| bits >> i & 1);
                !(c[0] == c[1] && c[1] == c[2])
            })
        })
        .count() as u64
}

/// Random linear system on `1..=n` by greedy insertion of random triples.
pub fn random_linear_system(rng: &mut ChaCha8Rng, n: u32, tries: usize) -> TripleSystem {
    let mut used = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..tries {
        let (x, y, z) = (rng.gen_range(1..=n), rng.gen_range(1..=n), rng.gen_range(1..=n));
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

/// Random subset of the edges, each kept with probability `p`.
pub fn random_subsystem(rng: &mut ChaCha8Rng, sys: &TripleSystem, p: f64) -> TripleSystem {
    TripleSystem::from_edges(sys.edges().iter().copied().filter(|_| rng.gen_bool(p)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
