//! Running the cubes of a split formula on a bounded worker pool.
//!
//! The first SAT answer wins: every running job is told to stop and no
//! further job is started. The campaign is UNSAT only if every cube is.

mod bridge;

use std::io::{self, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cnf::{CnfDocument, Cube};
use crate::error::{Error, Result};
use crate::solver::{
    solve_external, solve_with_stop, ExternalSolver, SolveResult, SolveStats, SolverConfig,
    Verdict,
};

pub use bridge::{job_queue_bridge, BridgeConfig, Launcher};

/// Something that can decide one cube, honouring the stop flag.
pub trait CubeSolver: Sync {
    fn solve_cube(&self, index: usize, doc: &CnfDocument, stop: &AtomicBool) -> SolveResult;
}

impl<F> CubeSolver for F
where
    F: Fn(usize, &CnfDocument, &AtomicBool) -> SolveResult + Sync,
{
    fn solve_cube(&self, index: usize, doc: &CnfDocument, stop: &AtomicBool) -> SolveResult {
        self(index, doc, stop)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    /// The embedded solver; its budget applies per job.
    Embedded(SolverConfig),
    /// An external binary; its timeout applies per job.
    External(ExternalSolver),
}

impl CubeSolver for SolverChoice {
    fn solve_cube(&self, _index: usize, doc: &CnfDocument, stop: &AtomicBool) -> SolveResult {
        match self {
            SolverChoice::Embedded(cfg) => solve_with_stop(doc, cfg, stop),
            SolverChoice::External(ext) => solve_external(doc, ext, Some(stop))
                .unwrap_or_else(|e| SolveResult::indeterminate(e.to_string(), SolveStats::default())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolConfig {
    pool_size: usize,
    pub solver: SolverChoice,
}

impl PoolConfig {
    pub fn new(pool_size: usize, solver: SolverChoice) -> Result<Self> {
        if pool_size == 0 {
            return Err(Error::Campaign("pool size must be at least 1".into()));
        }
        if let SolverChoice::External(ext) = &solver {
            ext.check()?;
        }
        Ok(PoolConfig { pool_size, solver })
    }

    pub fn embedded(pool_size: usize, config: SolverConfig) -> Result<Self> {
        PoolConfig::new(pool_size, SolverChoice::Embedded(config))
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubeStatus {
    Sat,
    Unsat,
    Indeterminate,
    /// Stopped because another cube was SAT.
    Cancelled,
    /// Never started because another cube was SAT.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeRecord {
    pub index: usize,
    pub assignment: String,
    pub status: CubeStatus,
    pub stats: Option<SolveStats>,
    pub note: Option<String>,
    /// Seconds since the campaign started.
    pub started: Option<f64>,
    pub finished: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Started,
    Finished,
    Cancelled,
    Skipped,
    Crashed,
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    /// Seconds since the campaign started.
    pub t: f64,
    pub cube: usize,
    pub kind: EventKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Sat { cube: usize, model: Vec<i32> },
    Unsat,
    Indeterminate { unresolved: Vec<usize> },
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            Outcome::Sat { .. } => Verdict::Sat,
            Outcome::Unsat => Verdict::Unsat,
            Outcome::Indeterminate { .. } => Verdict::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub outcome: Outcome,
    /// One record per cube, by index.
    pub records: Vec<CubeRecord>,
    /// In the order they happened.
    pub events: Vec<Event>,
    #[serde(with = "secs")]
    pub elapsed: Duration,
}

impl CampaignResult {
    /// The event log as JSON lines.
    pub fn write_log<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.events {
            serde_json::to_writer(&mut w, e)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Whether any job started after the first SAT finish was logged.
    pub fn started_after_sat(&self) -> bool {
        let Some(first_sat) = self
            .events
            .iter()
            .position(|e| e.kind == EventKind::Finished && e.verdict == Some(Verdict::Sat))
        else {
            return false;
        };
        self.events[first_sat..]
            .iter()
            .any(|e| e.kind == EventKind::Started)
    }
}

mod secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Duration::try_from_secs_f64(f64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Shared bookkeeping for both campaign drivers.
struct Ledger {
    start: Instant,
    records: Vec<CubeRecord>,
    events: Vec<Event>,
    winner: Option<(usize, Vec<i32>)>,
}

impl Ledger {
    fn new(cubes: &[(Cube, CnfDocument)]) -> Self {
        Ledger {
            start: Instant::now(),
            records: cubes
                .iter()
                .enumerate()
                .map(|(index, (cube, _))| CubeRecord {
                    index,
                    assignment: cube.bits(),
                    status: CubeStatus::Skipped,
                    stats: None,
                    note: None,
                    started: None,
                    finished: None,
                })
                .collect(),
            events: Vec::new(),
            winner: None,
        }
    }

    fn now(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn log(&mut self, cube: usize, kind: EventKind, verdict: Option<Verdict>) {
        let t = self.now();
        self.events.push(Event { t, cube, kind, verdict });
    }

    fn started(&mut self, i: usize) {
        self.records[i].started = Some(self.now());
        self.log(i, EventKind::Started, None);
    }

    /// Records a finished job. A SAT model is checked against the cube's
    /// formula before it can win. Returns whether this result is the winner.
    fn finished(&mut self, i: usize, doc: &CnfDocument, mut r: SolveResult, stopping: bool) -> bool {
        if r.verdict == Verdict::Sat && !r.model.as_ref().is_some_and(|m| doc.is_satisfied_by(m)) {
            r.verdict = Verdict::Indeterminate;
            r.note = Some("SAT answer without a valid model".into());
        }
        let rec = &mut self.records[i];
        rec.finished = Some(self.start.elapsed().as_secs_f64());
        rec.stats = Some(r.stats);
        rec.note = r.note;
        let cancelled = r.verdict == Verdict::Indeterminate && stopping;
        rec.status = match r.verdict {
            Verdict::Sat => CubeStatus::Sat,
            Verdict::Unsat => CubeStatus::Unsat,
            Verdict::Indeterminate if cancelled => CubeStatus::Cancelled,
            Verdict::Indeterminate => CubeStatus::Indeterminate,
        };
        if cancelled {
            self.log(i, EventKind::Cancelled, None);
        } else {
            self.log(i, EventKind::Finished, Some(r.verdict));
        }
        if r.verdict == Verdict::Sat && self.winner.is_none() {
            self.winner = Some((i, r.model.expect("checked above")));
            return true;
        }
        false
    }

    /// A job that ended without an answer: crashed, timed out or killed.
    fn abandoned(&mut self, i: usize, kind: EventKind, status: CubeStatus, note: String) {
        let rec = &mut self.records[i];
        rec.finished = Some(self.start.elapsed().as_secs_f64());
        rec.status = status;
        rec.note = Some(note);
        self.log(i, kind, None);
    }

    fn finish(mut self) -> CampaignResult {
        for i in 0..self.records.len() {
            if self.records[i].started.is_none() {
                self.log(i, EventKind::Skipped, None);
            }
        }
        let outcome = match self.winner.take() {
            Some((cube, model)) => Outcome::Sat { cube, model },
            None if self.records.iter().all(|r| r.status == CubeStatus::Unsat) => Outcome::Unsat,
            None => Outcome::Indeterminate {
                unresolved: self
                    .records
                    .iter()
                    .filter(|r| r.status != CubeStatus::Unsat)
                    .map(|r| r.index)
                    .collect(),
            },
        };
        CampaignResult {
            outcome,
            records: self.records,
            events: self.events,
            elapsed: self.start.elapsed(),
        }
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "worker panicked".into())
}

/// Runs the cubes with the configured solver.
pub fn run_campaign(cubes: &[(Cube, CnfDocument)], config: &PoolConfig) -> Result<CampaignResult> {
    run_campaign_with(cubes, config.pool_size, &config.solver)
}

/// Runs the cubes with any [`CubeSolver`], at most `pool_size` at a time.
///
/// Cubes are started in index order. A panicking job marks its cube
/// indeterminate and the campaign carries on.
pub fn run_campaign_with(
    cubes: &[(Cube, CnfDocument)],
    pool_size: usize,
    solver: &dyn CubeSolver,
) -> Result<CampaignResult> {
    if cubes.is_empty() {
        return Err(Error::Campaign("no cubes to run".into()));
    }
    if pool_size == 0 {
        return Err(Error::Campaign("pool size must be at least 1".into()));
    }
    struct State {
        next: usize,
        stopped: bool,
        ledger: Ledger,
    }
    let state = Mutex::new(State {
        next: 0,
        stopped: false,
        ledger: Ledger::new(cubes),
    });
    let stop = AtomicBool::new(false);
    let lock = || state.lock().unwrap_or_else(|e| e.into_inner());

    thread::scope(|s| {
        for _ in 0..pool_size.min(cubes.len()) {
            s.spawn(|| loop {
                let i = {
                    let mut st = lock();
                    if st.stopped || st.next >= cubes.len() {
                        break;
                    }
                    let i = st.next;
                    st.next += 1;
                    st.ledger.started(i);
                    i
                };
                let doc = &cubes[i].1;
                let result = catch_unwind(AssertUnwindSafe(|| solver.solve_cube(i, doc, &stop)));
                let mut st = lock();
                match result {
                    Ok(r) => {
                        let stopping = st.stopped;
                        if st.ledger.finished(i, doc, r, stopping) {
                            st.stopped = true;
                            stop.store(true, Ordering::SeqCst);
                        }
                    }
                    Err(p) => st.ledger.abandoned(
                        i,
                        EventKind::Crashed,
                        CubeStatus::Indeterminate,
                        panic_message(p.as_ref()),
                    ),
                }
            });
        }
    });

    let st = state.into_inner().unwrap_or_else(|e| e.into_inner());
    Ok(st.ledger.finish())
}
