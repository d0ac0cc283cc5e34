//! Satisfiability of [`CnfDocument`]s: an embedded CDCL engine and an
//! adapter for external DIMACS solvers.

mod cdcl;
mod external;

use std::fmt;
use std::sync::atomic::AtomicBool;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cnf::CnfDocument;

pub(crate) use external::complete_model;
pub use external::{parse_solver_output, solve_external, ExternalSolver, SolverOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Sat,
    Unsat,
    /// Budget exhausted, cancelled, or the solver gave no usable answer.
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SATISFIABLE",
            Verdict::Unsat => "UNSATISFIABLE",
            Verdict::Indeterminate => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learned: u64,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub verdict: Verdict,
    /// One literal per variable, `v` or `-v`, present iff SAT.
    pub model: Option<Vec<i32>>,
    pub stats: SolveStats,
    /// Why the result is indeterminate, or diagnostics from an external run.
    pub note: Option<String>,
}

impl SolveResult {
    pub(crate) fn indeterminate(note: impl Into<String>, stats: SolveStats) -> Self {
        SolveResult {
            verdict: Verdict::Indeterminate,
            model: None,
            stats,
            note: Some(note.into()),
        }
    }
}

/// Limits after which the embedded solver gives up.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_conflicts: Option<u64>,
    pub max_decisions: Option<u64>,
    #[serde(default, with = "opt_duration_secs")]
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn conflicts(n: u64) -> Self {
        Budget {
            max_conflicts: Some(n),
            ..Budget::default()
        }
    }

    pub fn time(limit: Duration) -> Self {
        Budget {
            max_time: Some(limit),
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub budget: Budget,
    /// Probability that a decision picks a random variable.
    pub random_decision_freq: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            budget: Budget::default(),
            random_decision_freq: 0.01,
        }
    }
}

/// Decides `doc` with the embedded solver.
///
/// Runs are deterministic for a fixed seed. A SAT model is always checked
/// against every clause before it is returned.
pub fn solve(doc: &CnfDocument, config: &SolverConfig) -> SolveResult {
    solve_with_stop(doc, config, &AtomicBool::new(false))
}

/// Like [`solve`], but returns [`Verdict::Indeterminate`] soon after `stop`
/// is set. The flag is polled at every conflict and every 1024 decisions.
pub fn solve_with_stop(doc: &CnfDocument, config: &SolverConfig, stop: &AtomicBool) -> SolveResult {
    let result = cdcl::run(doc, config, stop);
    if let Some(model) = &result.model {
        assert!(
            doc.is_satisfied_by(model),
            "embedded solver produced a model that violates the formula"
        );
    }
    result
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

mod opt_duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&d.as_secs_f64()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Option::<f64>::deserialize(d)?
            .map(|secs| Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom))
            .transpose()
    }
}
