//! Conflict-driven clause learning.
//!
//! Two watched literals with blockers, VSIDS with phase saving, first-UIP
//! learning with local minimisation, geometric restarts and LBD-based
//! deletion of learned clauses.
//!
//! Input is normalised before search: literals are deduplicated, tautologies
//! dropped, clauses sorted, and if the first unit clause is negative every
//! sign is flipped (and flipped back in the model). A formula and its
//! sign-mirror therefore produce the same run.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SolveResult, SolveStats, SolverConfig, Verdict};
use crate::cnf::CnfDocument;

/// Literal code: `2 * var + sign`, sign 1 meaning negated.
type Lit = u32;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + u32::from(dimacs < 0)
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

const UNDEF: u8 = 2;

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    lbd: u32,
}

/// Max-heap of variables by activity; ties go to the smaller index.
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    fn better(act: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty");
        self.pos[top as usize] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = Some(0);
            self.sift_down(0, act);
        }
        Some(top as usize)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::better(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !Self::better(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }
}

struct Solver<'a> {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    value: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    level_stamp: Vec<u64>,
    stamp: u64,
    learnt_count: usize,
    max_learnts: f64,
    rng: ChaCha8Rng,
    config: &'a SolverConfig,
    stop: &'a AtomicBool,
    start: Instant,
    stats: SolveStats,
}

enum Search {
    Sat,
    Unsat,
    Stopped(&'static str),
}

pub(super) fn run(doc: &CnfDocument, config: &SolverConfig, stop: &AtomicBool) -> SolveResult {
    let start = Instant::now();
    let n = doc.var_count() as usize;
    let (clauses, flipped) = normalise(doc);
    let mut s = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        value: vec![UNDEF; n],
        level: vec![0; n],
        reason: vec![None; n],
        trail: Vec::with_capacity(n),
        trail_lim: Vec::new(),
        qhead: 0,
        activity: vec![0.0; n],
        var_inc: 1.0,
        heap: VarHeap::new(n),
        phase: vec![false; n],
        seen: vec![false; n],
        level_stamp: vec![0; n + 1],
        stamp: 0,
        learnt_count: 0,
        max_learnts: (clauses.len() as f64 / 3.0).max(2000.0),
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        config,
        stop,
        start,
        stats: SolveStats::default(),
    };
    let outcome = s.load(clauses).unwrap_or_else(|| s.search());
    s.stats.elapsed = start.elapsed();
    match outcome {
        Search::Unsat => SolveResult {
            verdict: Verdict::Unsat,
            model: None,
            stats: s.stats,
            note: None,
        },
        Search::Stopped(why) => SolveResult::indeterminate(why, s.stats),
        Search::Sat => {
            let model = (0..n)
                .map(|v| {
                    let positive = (s.value[v] == 1) != flipped;
                    let x = v as i32 + 1;
                    if positive { x } else { -x }
                })
                .collect();
            SolveResult {
                verdict: Verdict::Sat,
                model: Some(model),
                stats: s.stats,
                note: None,
            }
        }
    }
}

/// Canonical clause list and whether signs were flipped.
fn normalise(doc: &CnfDocument) -> (Vec<Vec<Lit>>, bool) {
    let mut out: Vec<Vec<Lit>> = Vec::with_capacity(doc.clause_count());
    for c in doc.clauses() {
        let mut lits: Vec<Lit> = c.iter().map(|&l| lit_of(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[1] == neg(w[0])) {
            continue;
        }
        out.push(lits);
    }
    let flipped = out
        .iter()
        .find(|c| c.len() == 1)
        .is_some_and(|c| c[0] & 1 == 1);
    if flipped {
        for c in &mut out {
            for l in c.iter_mut() {
                *l = neg(*l);
            }
            c.sort_unstable();
        }
    }
    out.sort_unstable();
    out.dedup();
    (out, flipped)
}

impl Solver<'_> {
    fn lit_value(&self, l: Lit) -> u8 {
        let v = self.value[var(l)];
        if v == UNDEF {
            UNDEF
        } else {
            v ^ (l as u8 & 1)
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = var(l);
        self.value[v] = u8::from(l & 1 == 0);
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds the input clauses. Returns `Some` if the outcome is already known.
    fn load(&mut self, clauses: Vec<Vec<Lit>>) -> Option<Search> {
        for v in 0..self.value.len() {
            self.heap.insert(v, &self.activity);
        }
        for lits in clauses {
            match lits.len() {
                0 => return Some(Search::Unsat),
                1 => match self.lit_value(lits[0]) {
                    0 => return Some(Search::Unsat),
                    UNDEF => self.enqueue(lits[0], None),
                    _ => {}
                },
                _ => {
                    self.attach(Clause {
                        lits,
                        learnt: false,
                        lbd: 0,
                    });
                }
            }
        }
        if self.propagate().is_some() {
            return Some(Search::Unsat);
        }
        None
    }

    fn attach(&mut self, c: Clause) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[c.lits[0] as usize].push(Watcher {
            cref,
            blocker: c.lits[1],
        });
        self.watches[c.lits[1] as usize].push(Watcher {
            cref,
            blocker: c.lits[0],
        });
        if c.learnt {
            self.learnt_count += 1;
        }
        self.clauses.push(c);
        cref
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                let lits = &mut self.clauses[cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let keep = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.lit_value(first) == 1 {
                    ws[j] = keep;
                    j += 1;
                    continue;
                }
                let lits = &self.clauses[cref].lits;
                let replacement = (2..lits.len()).find(|&k| self.lit_value(lits[k]) != 0);
                if let Some(k) = replacement {
                    let lits = &mut self.clauses[cref].lits;
                    lits.swap(1, k);
                    let new_watch = lits[1];
                    self.watches[new_watch as usize].push(keep);
                    continue;
                }
                ws[j] = keep;
                j += 1;
                if self.lit_value(first) == 0 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    /// First-UIP learning. Returns the learned clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            let n = self.clauses[confl as usize].lits.len();
            for k in start..n {
                let q = self.clauses[confl as usize].lits[k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[var(lit)].expect("implied literal has a reason");
        }
        learnt[0] = neg(p.expect("conflict at level > 0"));

        // Drop literals implied by other literals of the clause.
        let marked: Vec<Lit> = learnt[1..].to_vec();
        let mut kept = 1;
        for k in 1..learnt.len() {
            let q = learnt[k];
            let redundant = self.reason[var(q)].is_some_and(|r| {
                self.clauses[r as usize]
                    .lits
                    .iter()
                    .skip(1)
                    .all(|&x| self.seen[var(x)] || self.level[var(x)] == 0)
            });
            if !redundant {
                learnt[kept] = q;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for q in marked {
            self.seen[var(q)] = false;
        }

        let back = if learnt.len() == 1 {
            0
        } else {
            let best = (1..learnt.len())
                .max_by_key(|&k| (self.level[var(learnt[k])], std::cmp::Reverse(k)))
                .expect("nonempty");
            learnt.swap(1, best);
            self.level[var(learnt[1])]
        };
        (learnt, back)
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut count = 0;
        for &l in lits {
            let lv = self.level[var(l)] as usize;
            if self.level_stamp[lv] != self.stamp {
                self.level_stamp[lv] = self.stamp;
                count += 1;
            }
        }
        count
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for k in (keep..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.value[v] = UNDEF;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        let n = self.value.len();
        if n > 0 && self.rng.gen::<f64>() < self.config.random_decision_freq {
            let v = self.rng.gen_range(0..n);
            if self.value[v] == UNDEF {
                return Some(2 * v as u32 + u32::from(!self.phase[v]));
            }
        }
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.value[v] == UNDEF {
                return Some(2 * v as u32 + u32::from(!self.phase[v]));
            }
        }
        None
    }

    fn out_of_budget(&self) -> Option<&'static str> {
        if self.stop.load(Ordering::Relaxed) {
            return Some("cancelled");
        }
        let b = &self.config.budget;
        if b.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
            return Some("conflict budget exhausted");
        }
        if b.max_decisions.is_some_and(|m| self.stats.decisions >= m) {
            return Some("decision budget exhausted");
        }
        if b.max_time.is_some_and(|t| self.start.elapsed() >= t) {
            return Some("time budget exhausted");
        }
        None
    }

    /// Keeps the better half of learned clauses (glue clauses always stay).
    /// Only called at decision level 0, where no learned clause is a reason
    /// that analysis could still visit.
    fn reduce_db(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let mut learnt: Vec<(u32, usize, usize)> = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.learnt)
            .map(|(i, c)| (c.lbd, c.lits.len(), i))
            .collect();
        learnt.sort_unstable();
        let half = learnt.len() / 2;
        let mut drop = vec![false; self.clauses.len()];
        for &(lbd, _, i) in &learnt[half..] {
            if lbd > 2 {
                drop[i] = true;
            }
        }
        let old = std::mem::take(&mut self.clauses);
        for w in &mut self.watches {
            w.clear();
        }
        for r in &mut self.reason {
            *r = None;
        }
        self.learnt_count = 0;
        for (i, c) in old.into_iter().enumerate() {
            if !drop[i] {
                self.attach(c);
            }
        }
        self.max_learnts *= 1.1;
    }

    fn search(&mut self) -> Search {
        let mut restart_limit = 100.0f64;
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    return Search::Unsat;
                }
                let (learnt, back) = self.analyze(confl);
                self.cancel_until(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let lbd = self.lbd(&learnt);
                    let first = learnt[0];
                    let cref = self.attach(Clause {
                        lits: learnt,
                        learnt: true,
                        lbd,
                    });
                    self.enqueue(first, Some(cref));
                }
                self.stats.learned += 1;
                self.var_inc /= 0.95;
                if let Some(why) = self.out_of_budget() {
                    return Search::Stopped(why);
                }
                let full = self.learnt_count as f64 >= self.max_learnts;
                if since_restart as f64 >= restart_limit || full {
                    if since_restart as f64 >= restart_limit {
                        restart_limit *= 1.5;
                    }
                    since_restart = 0;
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                    if full {
                        self.reduce_db();
                    }
                }
            } else {
                let Some(lit) = self.pick_branch() else {
                    return Search::Sat;
                };
                self.stats.decisions += 1;
                if self.stats.decisions.is_multiple_of(1024) {
                    if let Some(why) = self.out_of_budget() {
                        return Search::Stopped(why);
                    }
                }
                self.trail_lim.push(self.trail.len());
                self.enqueue(lit, None);
            }
        }
    }
}
