//! Driving an external solver binary.
//!
//! The formula is written to a temporary file passed as the last argument.
//! The solver must print `s SATISFIABLE` or `s UNSATISFIABLE` and, when
//! satisfiable, `v` lines of literals terminated by `0`. Exit codes 0, 10
//! and 20 are accepted.

use std::fs::File;
use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{SolveResult, SolveStats, Verdict};
use crate::cnf::CnfDocument;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalSolver {
    pub path: PathBuf,
    pub args: Vec<String>,
    pub timeout: Duration,
}

impl ExternalSolver {
    pub fn new(path: impl Into<PathBuf>, timeout: Duration) -> Self {
        ExternalSolver {
            path: path.into(),
            args: Vec::new(),
            timeout,
        }
    }

    /// Fails unless the path names an existing file, or a bare command name
    /// left to `PATH` lookup.
    pub fn check(&self) -> Result<()> {
        let bare = self.path.components().count() == 1 && !self.path.is_absolute();
        if !bare && !self.path.is_file() {
            return Err(Error::SolverConfig(format!(
                "solver binary {} does not exist",
                self.path.display()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOutput {
    pub verdict: Verdict,
    pub model: Option<Vec<i32>>,
}

/// Reads `s` and `v` lines; other lines are ignored.
pub fn parse_solver_output(text: &str) -> Result<SolverOutput> {
    let mut verdict = None;
    let mut lits = Vec::new();
    let mut terminated = false;
    for line in text.lines() {
        let line = line.trim_end_matches('\r');
        if let Some(status) = line.strip_prefix("s ") {
            verdict = Some(match status.trim() {
                "SATISFIABLE" => Verdict::Sat,
                "UNSATISFIABLE" => Verdict::Unsat,
                "UNKNOWN" | "INDETERMINATE" => Verdict::Indeterminate,
                other => {
                    return Err(Error::SolverConfig(format!("unknown status line `s {other}`")))
                }
            });
        } else if let Some(values) = line.strip_prefix("v ").or(line.strip_prefix("v\t")) {
            for tok in values.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| Error::SolverConfig(format!("bad literal {tok:?} in model")))?;
                if lit == 0 {
                    terminated = true;
                } else {
                    lits.push(lit);
                }
            }
        }
    }
    let verdict =
        verdict.ok_or_else(|| Error::SolverConfig("solver printed no `s` line".into()))?;
    let model = match verdict {
        Verdict::Sat if !terminated => {
            return Err(Error::SolverConfig("model is not terminated by 0".into()))
        }
        Verdict::Sat => Some(lits),
        _ => None,
    };
    Ok(SolverOutput { verdict, model })
}

/// Runs `solver` on `doc`.
///
/// Configuration problems (missing binary) are errors. Everything that goes
/// wrong at run time (timeout, cancellation, crash, unparseable output, a
/// model that fails re-verification) gives [`Verdict::Indeterminate`] with
/// the diagnostics in `note`.
pub fn solve_external(
    doc: &CnfDocument,
    solver: &ExternalSolver,
    stop: Option<&AtomicBool>,
) -> Result<SolveResult> {
    solver.check()?;
    let start = Instant::now();
    let stats = |start: Instant| SolveStats {
        elapsed: start.elapsed(),
        ..SolveStats::default()
    };
    if solver.timeout.is_zero() {
        return Ok(SolveResult::indeterminate("timeout is zero", stats(start)));
    }

    let dir = tempfile::tempdir().map_err(|e| Error::io(std::env::temp_dir(), e))?;
    let cnf_path = dir.path().join("formula.cnf");
    crate::cnf::write_file(doc, &cnf_path)?;
    let out_path = dir.path().join("stdout");
    let err_path = dir.path().join("stderr");
    let stdout = File::create(&out_path).map_err(|e| Error::io(&out_path, e))?;
    let stderr = File::create(&err_path).map_err(|e| Error::io(&err_path, e))?;

    let mut child = match Command::new(&solver.path)
        .args(&solver.args)
        .arg(&cnf_path)
        .stdin(Stdio::null())
        .stdout(stdout)
        .stderr(stderr)
        .spawn()
    {
        Ok(c) => c,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::SolverConfig(format!(
                "solver binary {} not found",
                solver.path.display()
            )))
        }
        Err(e) => return Err(Error::io(&solver.path, e)),
    };

    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {}
            Err(e) => return Err(Error::io(&solver.path, e)),
        }
        let cancelled = stop.is_some_and(|s| s.load(Ordering::Relaxed));
        if cancelled || start.elapsed() >= solver.timeout {
            let _ = child.kill();
            let _ = child.wait();
            let why = if cancelled { "cancelled" } else { "timed out" };
            return Ok(SolveResult::indeterminate(why, stats(start)));
        }
        thread::sleep(Duration::from_millis(5));
    };

    let read = |p: &std::path::Path| {
        let mut s = String::new();
        File::open(p).and_then(|mut f| f.read_to_string(&mut s)).map(|_| s)
    };
    let text = read(&out_path).map_err(|e| Error::io(&out_path, e))?;
    let diag = read(&err_path).unwrap_or_default();
    let code = status.code();
    if !matches!(code, Some(0 | 10 | 20)) {
        let note = format!("solver exited with {status}; stderr: {}", diag.trim());
        return Ok(SolveResult::indeterminate(note, stats(start)));
    }
    let parsed = match parse_solver_output(&text) {
        Ok(p) => p,
        Err(e) => return Ok(SolveResult::indeterminate(e.to_string(), stats(start))),
    };
    let expected = match code {
        Some(10) => Some(Verdict::Sat),
        Some(20) => Some(Verdict::Unsat),
        _ => None,
    };
    if expected.is_some_and(|v| v != parsed.verdict) {
        let note = format!("exit code {code:?} contradicts `s {}`", parsed.verdict);
        return Ok(SolveResult::indeterminate(note, stats(start)));
    }
    let model = match parsed.model {
        Some(lits) => {
            let Some(full) = complete_model(&lits, doc.var_count()) else {
                return Ok(SolveResult::indeterminate("model has out-of-range literals", stats(start)));
            };
            if !doc.is_satisfied_by(&full) {
                return Ok(SolveResult::indeterminate(
                    "solver model does not satisfy the formula",
                    stats(start),
                ));
            }
            Some(full)
        }
        None => None,
    };
    Ok(SolveResult {
        verdict: parsed.verdict,
        model,
        stats: stats(start),
        note: (!diag.trim().is_empty()).then(|| diag.trim().to_string()),
    })
}

/// One literal per variable; variables the solver left out become false.
pub(crate) fn complete_model(lits: &[i32], vars: u32) -> Option<Vec<i32>> {
    let mut value = vec![false; vars as usize + 1];
    for &l in lits {
        *value.get_mut(l.unsigned_abs() as usize)? = l > 0;
    }
    Some(
        (1..=vars as i32)
            .map(|v| if value[v as usize] { v } else { -v })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_competition_output() {
        let out = parse_solver_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n").unwrap();
        assert_eq!(out.verdict, Verdict::Sat);
        assert_eq!(out.model, Some(vec![1, -2, 3]));
        let out = parse_solver_output("s UNSATISFIABLE\n").unwrap();
        assert_eq!((out.verdict, out.model), (Verdict::Unsat, None));
        assert!(parse_solver_output("garbage\n").is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 1 2\n").is_err());
        assert!(parse_solver_output("s MAYBE\n").is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 1 x 0\n").is_err());
    }

    #[test]
    fn completes_models() {
        assert_eq!(complete_model(&[2], 3), Some(vec![-1, 2, -3]));
        assert_eq!(complete_model(&[4], 3), None);
    }

    #[test]
    fn missing_binary_and_zero_timeout() {
        let doc = CnfDocument::new(vec![], 1, vec![vec![1]]).unwrap();
        let missing = ExternalSolver::new("/nonexistent/solver", Duration::from_secs(1));
        assert!(matches!(
            solve_external(&doc, &missing, None),
            Err(Error::SolverConfig(_))
        ));
        let missing = ExternalSolver::new("no-such-solver-binary-xyz", Duration::from_secs(1));
        assert!(matches!(
            solve_external(&doc, &missing, None),
            Err(Error::SolverConfig(_))
        ));
        let zero = ExternalSolver::new("/bin/sh", Duration::ZERO);
        let r = solve_external(&doc, &zero, None).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
    }

    fn script(dir: &std::path::Path, body: &str) -> PathBuf {
        use std::os::unix::fs::PermissionsExt;
        let p = dir.join("solver.sh");
        std::fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
        std::fs::set_permissions(&p, std::fs::Permissions::from_mode(0o755)).unwrap();
        p
    }

    #[test]
    fn stub_solvers() {
        let dir = tempfile::tempdir().unwrap();
        let doc = CnfDocument::new(vec![], 2, vec![vec![1, 2], vec![-1]]).unwrap();
        let run = |body: &str, secs: u64| {
            let s = ExternalSolver::new(script(dir.path(), body), Duration::from_secs(secs));
            solve_external(&doc, &s, None).unwrap()
        };
        let r = run("echo 's SATISFIABLE'; echo 'v -1 2 0'; exit 10", 10);
        assert_eq!(r.verdict, Verdict::Sat);
        assert_eq!(r.model, Some(vec![-1, 2]));
        // A wrong model is not accepted.
        let r = run("echo 's SATISFIABLE'; echo 'v 1 2 0'; exit 10", 10);
        assert_eq!(r.verdict, Verdict::Indeterminate);
        let r = run("echo 's UNSATISFIABLE'; exit 20", 10);
        assert_eq!(r.verdict, Verdict::Unsat);
        let r = run("echo boom >&2; exit 3", 10);
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert!(r.note.unwrap().contains("boom"));
        let r = run("echo 's SATISFIABLE'; exit 20", 10);
        assert_eq!(r.verdict, Verdict::Indeterminate);
        let start = Instant::now();
        let r = run("sleep 5", 1);
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert!(start.elapsed() < Duration::from_secs(4));
    }
}
