//! Choosing the special vertices for cube splitting and gauging how
//! independent they are.
//!
//! Specials are picked far apart in the hypergraph, starting from BFS over
//! the triple intersection graph, or uniformly at random. Independence is
//! scored as the sample variance, across the `2^m` assignments, of the mean
//! solving cost over trials on randomly thinned systems. Low variance means
//! the cubes are of similar difficulty.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::thread;
use std::time::Instant;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::{encode, split};
use crate::error::{Error, Result};
use crate::hypergraph::{default_seed, Edge, TripleSystem};
use crate::solver::{solve, SolveStats, SolverConfig, Verdict};
use crate::triples::UpperBound;
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMethod {
    Bfs,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub specials: Vec<Vertex>,
    pub method: SplitMethod,
    /// BFS seed triple.
    pub seed_edge: Option<Edge>,
    /// Number of BFS levels reached from the seed.
    pub levels: Option<usize>,
    /// RNG seed for random plans.
    pub rng_seed: Option<u64>,
    pub warnings: Vec<String>,
}

impl SplitPlan {
    pub fn m(&self) -> usize {
        self.specials.len()
    }

    /// A plan with hand-picked specials.
    pub fn manual(sys: &TripleSystem, specials: Vec<Vertex>) -> Result<Self> {
        if specials.is_empty() {
            return Err(Error::Plan("at least one special vertex is required".into()));
        }
        if specials.iter().collect::<BTreeSet<_>>().len() != specials.len() {
            return Err(Error::Plan("special vertices must be distinct".into()));
        }
        if let Some(v) = specials.iter().find(|&&v| !sys.contains_vertex(v)) {
            return Err(Error::Plan(format!("vertex {v} is not in the system")));
        }
        Ok(SplitPlan {
            specials,
            method: SplitMethod::Random,
            seed_edge: None,
            levels: None,
            rng_seed: None,
            warnings: Vec::new(),
        })
    }
}

fn check_m(sys: &TripleSystem, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Plan("m must be at least 1".into()));
    }
    if m > sys.vertex_count() {
        return Err(Error::Plan(format!(
            "m = {m} exceeds the {} vertices of the system",
            sys.vertex_count()
        )));
    }
    Ok(())
}

/// Specials spread out from the lexicographically smallest triple.
///
/// The first special comes from the seed triple and the second from a
/// triple in the deepest BFS level, choosing the pair at maximal vertex
/// distance (smallest vertices on ties). Further specials are added greedily,
/// each maximising its minimum distance to those already chosen; vertices in
/// other components count as infinitely far.
pub fn choose_bfs(sys: &TripleSystem, m: usize) -> Result<SplitPlan> {
    check_m(sys, m)?;
    let seed = default_seed(sys).ok_or_else(|| Error::Plan("system has no edges".into()))?;
    let bfs = sys.bfs_levels(&seed)?;
    let mut warnings = Vec::new();

    let far = |dist: &BTreeMap<Vertex, usize>, v: Vertex| dist.get(&v).copied().unwrap_or(usize::MAX);
    let mut specials = Vec::with_capacity(m);
    if m == 1 {
        specials.push(seed.smallest());
    } else {
        let deepest: BTreeSet<Vertex> = bfs.deepest().iter().flat_map(|e| e.vertices()).collect();
        let mut best: Option<(usize, Vertex, Vertex)> = None;
        for u in seed.vertices() {
            let dist = sys.distances_from(u)?;
            for &w in deepest.iter().filter(|&&w| w != u) {
                let d = far(&dist, w);
                // Larger distance first, then lexicographically smaller pair.
                if best.is_none_or(|(bd, bu, bw)| d > bd || (d == bd && (u, w) < (bu, bw))) {
                    best = Some((d, u, w));
                }
            }
        }
        let (d, u, w) = best.expect("seed triple has three vertices");
        if d <= 1 {
            warnings.push(format!("specials {u} and {w} share a triple"));
        }
        specials.extend([u, w]);
    }

    let mut dists: Vec<BTreeMap<Vertex, usize>> = specials
        .iter()
        .map(|&v| sys.distances_from(v))
        .collect::<Result<_>>()?;
    while specials.len() < m {
        let pick = sys
            .vertices()
            .iter()
            .copied()
            .filter(|v| !specials.contains(v))
            .map(|v| (dists.iter().map(|d| far(d, v)).min().unwrap_or(usize::MAX), v))
            // Max distance, smallest vertex on ties.
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .expect("m does not exceed the vertex count");
        if pick.0 <= 1 {
            warnings.push(format!("special {} is adjacent to an earlier special", pick.1));
        }
        specials.push(pick.1);
        dists.push(sys.distances_from(pick.1)?);
    }

    Ok(SplitPlan {
        specials,
        method: SplitMethod::Bfs,
        seed_edge: Some(seed),
        levels: Some(bfs.levels.len()),
        rng_seed: None,
        warnings,
    })
}

/// `m` distinct vertices sampled uniformly, reproducible per seed.
pub fn choose_random(sys: &TripleSystem, m: usize, seed: u64) -> Result<SplitPlan> {
    check_m(sys, m)?;
    let all: Vec<Vertex> = sys.vertices().iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specials = index::sample(&mut rng, all.len(), m)
        .into_iter()
        .map(|i| all[i])
        .collect();
    Ok(SplitPlan {
        specials,
        method: SplitMethod::Random,
        seed_edge: None,
        levels: None,
        rng_seed: Some(seed),
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMetric {
    #[default]
    Decisions,
    Conflicts,
    Propagations,
    /// Seconds; not reproducible.
    WallTime,
}

impl CostMetric {
    fn of(self, stats: &SolveStats) -> f64 {
        match self {
            CostMetric::Decisions => stats.decisions as f64,
            CostMetric::Conflicts => stats.conflicts as f64,
            CostMetric::Propagations => stats.propagations as f64,
            CostMetric::WallTime => stats.elapsed.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceConfig {
    pub trials: usize,
    /// Fraction of triples deleted in each trial, in `[0, 1)`.
    pub removal_fraction: f64,
    pub metric: CostMetric,
    /// Master seed; trial `t` uses stream `t` of it.
    pub seed: u64,
    pub solver: SolverConfig,
    /// Worker threads for the cube solves; 0 means one per core.
    pub threads: usize,
}

impl Default for IndependenceConfig {
    fn default() -> Self {
        IndependenceConfig {
            trials: 10,
            removal_fraction: 0.1,
            metric: CostMetric::Decisions,
            seed: 0,
            solver: SolverConfig::default(),
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSample {
    /// Assignment bits, first special first.
    pub assignment: String,
    pub trial: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub specials: Vec<Vertex>,
    pub metric: CostMetric,
    pub trials: usize,
    pub removal_fraction: f64,
    pub seed: u64,
    /// Mean cost per assignment over the complete trials, in cube order.
    pub means: Vec<f64>,
    /// Sample variance of `means`.
    pub variance: f64,
    /// Trials where some cube came back indeterminate.
    pub incomplete_trials: Vec<usize>,
    pub samples: Vec<CostSample>,
}

impl IndependenceReport {
    /// `assignment,trial,cost` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "assignment,trial,cost")?;
        for s in &self.samples {
            writeln!(w, "{},{},{}", s.assignment, s.trial, s.cost)?;
        }
        Ok(())
    }
}

/// Sample variance with the `n - 1` denominator; zero for fewer than two
/// values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Edges kept in trial `trial`: a fresh uniform sample per trial, the same
/// for every assignment within it.
fn thinned(sys: &TripleSystem, fraction: f64, seed: u64, trial: usize) -> TripleSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let k = (fraction * sys.edge_count() as f64).round() as usize;
    let removed: BTreeSet<Edge> = index::sample(&mut rng, sys.edge_count(), k)
        .into_iter()
        .map(|i| sys.edges()[i])
        .collect();
    sys.without_edges(&removed)
}

pub fn independence_score(
    sys: &TripleSystem,
    plan: &SplitPlan,
    config: &IndependenceConfig,
) -> Result<IndependenceReport> {
    if config.trials == 0 {
        return Err(Error::Plan("at least one trial is required".into()));
    }
    if !(0.0..1.0).contains(&config.removal_fraction) {
        return Err(Error::Plan(format!(
            "removal fraction {} is outside [0, 1)",
            config.removal_fraction
        )));
    }
    let bound = UpperBound::new(sys.vertices().last().copied().unwrap_or(1))?;
    let cubes = 1usize << plan.m();
    let threads = match config.threads {
        0 => thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    };

    let mut per_cube: Vec<Vec<f64>> = vec![Vec::new(); cubes];
    let mut incomplete = Vec::new();
    let mut samples = Vec::new();
    for trial in 0..config.trials {
        let trial_sys = thinned(sys, config.removal_fraction, config.seed, trial);
        let (doc, table) = encode(&trial_sys, bound);
        let docs = split(&doc, &table, &plan.specials)?;
        let costs = solve_all(&docs, config, threads);
        if costs.iter().any(Option::is_none) {
            incomplete.push(trial);
            continue;
        }
        for (i, ((cube, _), cost)) in docs.iter().zip(costs).enumerate() {
            let cost = cost.expect("checked above");
            per_cube[i].push(cost);
            samples.push(CostSample {
                assignment: cube.bits(),
                trial,
                cost,
            });
        }
    }
    if incomplete.len() == config.trials {
        return Err(Error::Plan("every trial had an indeterminate cube".into()));
    }
    let means: Vec<f64> = per_cube
        .iter()
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    Ok(IndependenceReport {
        specials: plan.specials.clone(),
        metric: config.metric,
        trials: config.trials,
        removal_fraction: config.removal_fraction,
        seed: config.seed,
        variance: sample_variance(&means),
        means,
        incomplete_trials: incomplete,
        samples,
    })
}

/// Cost per cube, `None` where the solve was indeterminate. Results are
/// stored by cube index, so the thread count does not affect them.
fn solve_all(
    docs: &[(crate::cnf::Cube, crate::cnf::CnfDocument)],
    config: &IndependenceConfig,
    threads: usize,
) -> Vec<Option<f64>> {
    let mut out = vec![None; docs.len()];
    let chunk = docs.len().div_ceil(threads.max(1));
    thread::scope(|s| {
        for (docs, out) in docs.chunks(chunk).zip(out.chunks_mut(chunk)) {
            s.spawn(move || {
                for ((_, doc), slot) in docs.iter().zip(out) {
                    let start = Instant::now();
                    let r = solve(doc, &config.solver);
                    let mut stats = r.stats;
                    if config.metric == CostMetric::WallTime {
                        stats.elapsed = start.elapsed();
                    }
                    *slot = (r.verdict != Verdict::Indeterminate).then(|| config.metric.of(&stats));
                }
            });
        }
    });
    out
}
