//! A campaign driven through files, in the shape of a batch queue.
//!
//! Each cube gets `cube_<i>.cnf` and a launcher script `cube_<i>.sh` that
//! runs the solver and renames its output to `cube_<i>.out` only when done,
//! so a visible `.out` file is always complete. The driver starts scripts
//! (locally or through a submit command such as `qsub`), polls for output
//! files and applies the same first-SAT termination as the in-process pool.

use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::os::unix::process::CommandExt;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{CampaignResult, CubeStatus, EventKind, Ledger};
use crate::cnf::{write_file, CnfDocument, Cube};
use crate::error::{Error, Result};
use crate::solver::{complete_model, parse_solver_output, SolveResult, SolveStats, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Launcher {
    /// `sh cube_<i>.sh` in its own process group, killed on early stop.
    Local,
    /// The command plus the script path, e.g. `["qsub"]`. Jobs already
    /// submitted are left alone on early stop; pending ones are never sent.
    Submit(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeConfig {
    pub dir: PathBuf,
    pub pool_size: usize,
    /// Solver program and arguments; the cube file is appended.
    pub solver: Vec<String>,
    pub launcher: Launcher,
    pub poll: Duration,
    /// Whole-campaign limit.
    pub timeout: Duration,
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

pub fn cube_path(dir: &Path, i: usize, ext: &str) -> PathBuf {
    dir.join(format!("cube_{i}.{ext}"))
}

fn script_text(dir: &Path, i: usize, solver: &[String]) -> String {
    let p = |ext| quote(&cube_path(dir, i, ext).to_string_lossy());
    let cmd: Vec<String> = solver.iter().map(|s| quote(s)).collect();
    format!(
        "#!/bin/sh\n{} {} > {} 2> {}\nmv {} {}\n",
        cmd.join(" "),
        p("cnf"),
        p("out.tmp"),
        p("err"),
        p("out.tmp"),
        p("out"),
    )
}

struct Job {
    index: usize,
    child: Option<Child>,
}

fn terminate(child: &mut Child) {
    // The script and the solver share the group led by the shell.
    let _ = Command::new("kill")
        .args(["-TERM", "--", &format!("-{}", child.id())])
        .stderr(Stdio::null())
        .status();
    let _ = child.kill();
    let _ = child.wait();
}

fn read_result(path: &Path, var_count: u32) -> SolveResult {
    let fail = |note: String| SolveResult::indeterminate(note, SolveStats::default());
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", path.display())),
    };
    match parse_solver_output(&text) {
        Ok(out) => {
            let model = match out.model {
                Some(lits) => match complete_model(&lits, var_count) {
                    Some(m) => Some(m),
                    None => return fail("model has out-of-range literals".into()),
                },
                None => None,
            };
            SolveResult {
                verdict: out.verdict,
                model,
                stats: SolveStats::default(),
                note: None,
            }
        }
        Err(e) => fail(e.to_string()),
    }
}

/// Runs the cubes through files in `config.dir`.
pub fn job_queue_bridge(
    cubes: &[(Cube, CnfDocument)],
    config: &BridgeConfig,
) -> Result<CampaignResult> {
    if cubes.is_empty() {
        return Err(Error::Campaign("no cubes to run".into()));
    }
    if config.pool_size == 0 {
        return Err(Error::Campaign("pool size must be at least 1".into()));
    }
    if config.solver.is_empty() {
        return Err(Error::Campaign("no solver command".into()));
    }
    let dir = &config.dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, (_, doc)) in cubes.iter().enumerate() {
        write_file(doc, cube_path(dir, i, "cnf"))?;
        let script = cube_path(dir, i, "sh");
        fs::write(&script, script_text(dir, i, &config.solver)).map_err(|e| Error::io(&script, e))?;
        fs::set_permissions(&script, fs::Permissions::from_mode(0o755))
            .map_err(|e| Error::io(&script, e))?;
        for ext in ["out", "out.tmp"] {
            let stale = cube_path(dir, i, ext);
            if stale.exists() {
                fs::remove_file(&stale).map_err(|e| Error::io(&stale, e))?;
            }
        }
    }

    let mut ledger = Ledger::new(cubes);
    let deadline = Instant::now() + config.timeout;
    let mut running: Vec<Job> = Vec::new();
    let mut next = 0;
    let mut stopped = false;

    loop {
        while !stopped && running.len() < config.pool_size && next < cubes.len() {
            let i = next;
            next += 1;
            ledger.started(i);
            let script = cube_path(dir, i, "sh");
            match launch(&config.launcher, &script) {
                Ok(child) => running.push(Job { index: i, child }),
                Err(note) => {
                    ledger.abandoned(i, EventKind::Crashed, CubeStatus::Indeterminate, note)
                }
            }
        }

        let mut k = 0;
        while k < running.len() {
            let i = running[k].index;
            let out = cube_path(dir, i, "out");
            let exited = running[k]
                .child
                .as_mut()
                .is_some_and(|c| matches!(c.try_wait(), Ok(Some(_))));
            if out.exists() {
                let mut job = running.swap_remove(k);
                if let Some(c) = job.child.as_mut() {
                    let _ = c.wait();
                }
                let r = read_result(&out, cubes[i].1.var_count());
                if ledger.finished(i, &cubes[i].1, r, stopped) {
                    stopped = true;
                    for mut other in running.drain(..) {
                        if let Some(c) = other.child.as_mut() {
                            terminate(c);
                        }
                        let r = SolveResult::indeterminate("cancelled", SolveStats::default());
                        ledger.finished(other.index, &cubes[other.index].1, r, true);
                    }
                }
            } else if exited && !out.exists() {
                running.swap_remove(k);
                let note = "launcher exited without producing output".to_string();
                ledger.abandoned(i, EventKind::Crashed, CubeStatus::Indeterminate, note);
            } else {
                k += 1;
            }
        }

        if running.is_empty() && (stopped || next >= cubes.len()) {
            break;
        }
        if Instant::now() >= deadline {
            for mut job in running.drain(..) {
                if let Some(c) = job.child.as_mut() {
                    terminate(c);
                }
                let note = "no output before the campaign timeout".to_string();
                ledger.abandoned(job.index, EventKind::TimedOut, CubeStatus::Indeterminate, note);
            }
            break;
        }
        thread::sleep(config.poll);
    }
    let result = ledger.finish();
    debug_assert!(result.outcome.verdict() != Verdict::Sat || !result.started_after_sat());
    Ok(result)
}

fn launch(launcher: &Launcher, script: &Path) -> std::result::Result<Option<Child>, String> {
    match launcher {
        Launcher::Local => Command::new("sh")
            .arg(script)
            .process_group(0)
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .map(Some)
            .map_err(|e| format!("cannot start {}: {e}", script.display())),
        Launcher::Submit(cmd) => {
            let (prog, args) = cmd.split_first().ok_or("empty submit command")?;
            let status = Command::new(prog)
                .args(args)
                .arg(script)
                .stdin(Stdio::null())
                .status()
                .map_err(|e| format!("cannot run {prog}: {e}"))?;
            if status.success() {
                Ok(None)
            } else {
                Err(format!("{prog} failed with {status}"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{encode, split};
    use crate::designs;
    use crate::hypergraph::TripleSystem;
    use crate::orchestrate::Outcome;
    use crate::triples::{enumerate_triples, UpperBound};

    #[test]
    fn quoting() {
        assert_eq!(quote("a b"), "'a b'");
        assert_eq!(quote("it's"), r"'it'\''s'");
        let text = script_text(Path::new("/tmp/x"), 3, &["/bin/solver".into(), "-q".into()]);
        assert_eq!(
            text,
            "#!/bin/sh\n'/bin/solver' '-q' '/tmp/x/cube_3.cnf' > '/tmp/x/cube_3.out.tmp' 2> '/tmp/x/cube_3.err'\nmv '/tmp/x/cube_3.out.tmp' '/tmp/x/cube_3.out'\n"
        );
    }

    fn stub(dir: &Path, body: &str) -> String {
        let p = dir.join("stub.sh");
        fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
        fs::set_permissions(&p, fs::Permissions::from_mode(0o755)).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn config(dir: &Path, solver: String, pool: usize) -> BridgeConfig {
        BridgeConfig {
            dir: dir.join("jobs"),
            pool_size: pool,
            solver: vec![solver],
            launcher: Launcher::Local,
            poll: Duration::from_millis(10),
            timeout: Duration::from_secs(20),
        }
    }

    #[test]
    fn unsat_stub() {
        let tmp = tempfile::tempdir().unwrap();
        let (doc, table) = encode(&designs::fano(), UpperBound::new(7).unwrap());
        let cubes = split(&doc, &table, &[1, 2]).unwrap();
        let s = stub(tmp.path(), "echo 's UNSATISFIABLE'");
        let r = job_queue_bridge(&cubes, &config(tmp.path(), s, 2)).unwrap();
        assert_eq!(r.outcome, Outcome::Unsat);
        assert!(cube_path(&tmp.path().join("jobs"), 3, "out").exists());
    }

    #[test]
    fn garbage_output_is_indeterminate() {
        let tmp = tempfile::tempdir().unwrap();
        let (doc, table) = encode(&designs::fano(), UpperBound::new(7).unwrap());
        let cubes = split(&doc, &table, &[1]).unwrap();
        let s = stub(tmp.path(), "echo 'hello world'");
        let r = job_queue_bridge(&cubes, &config(tmp.path(), s, 2)).unwrap();
        assert_eq!(r.outcome, Outcome::Indeterminate { unresolved: vec![0, 1] });
    }

    #[test]
    fn sat_stub_stops_the_rest() {
        let tmp = tempfile::tempdir().unwrap();
        let b = UpperBound::new(10).unwrap();
        let (doc, table) = encode(&TripleSystem::build(&enumerate_triples(b)), b);
        let cubes = split(&doc, &table, &[3, 4]).unwrap();
        // Only cube 1 (3 false, 4 true) finishes; 1 2 3 4 5 6 is -,+,+,-,+,+.
        let body = r#"case "$1" in
  *cube_1.cnf) sleep 0.2; echo 's SATISFIABLE'; echo 'v -1 2 3 -4 5 6 0' ;;
  *) sleep 30; echo 's UNSATISFIABLE' ;;
esac"#;
        let s = stub(tmp.path(), body);
        let start = Instant::now();
        let r = job_queue_bridge(&cubes, &config(tmp.path(), s, 2)).unwrap();
        assert!(start.elapsed() < Duration::from_secs(10));
        assert!(matches!(r.outcome, Outcome::Sat { cube: 1, .. }), "{:?}", r.outcome);
        assert_eq!(r.records[0].status, CubeStatus::Cancelled);
        assert_eq!(r.records[2].status, CubeStatus::Skipped);
        assert!(!r.started_after_sat());
    }

    #[test]
    fn silent_queue_times_out() {
        let tmp = tempfile::tempdir().unwrap();
        let (doc, table) = encode(&designs::fano(), UpperBound::new(7).unwrap());
        let cubes = split(&doc, &table, &[1]).unwrap();
        let cfg = BridgeConfig {
            launcher: Launcher::Submit(vec!["true".into()]),
            timeout: Duration::from_millis(200),
            ..config(tmp.path(), "unused".into(), 2)
        };
        let r = job_queue_bridge(&cubes, &cfg).unwrap();
        assert_eq!(r.outcome, Outcome::Indeterminate { unresolved: vec![0, 1] });
        assert!(r.events.iter().any(|e| e.kind == EventKind::TimedOut));
    }
}
