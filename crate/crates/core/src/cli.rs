//! Command-line front end.
//!
//! Exit codes: 0 when the requested fact is established (SAT with a
//! verified colouring, UNSAT, or a passing check), 1 on a violation or an
//! unexpected verdict, 2 when the answer is indeterminate, 3 on usage or
//! configuration errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cnf::{self, encode, CnfDocument, Cube, RemapTable};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::hypergraph::{default_seed, Reduction, TripleSystem};
use crate::orchestrate::{
    job_queue_bridge, run_campaign, BridgeConfig, CampaignResult, Launcher, Outcome, PoolConfig,
    SolverChoice,
};
use crate::render::{default_height, render};
use crate::solver::{solve, solve_external, Budget, ExternalSolver, SolveResult, SolverConfig, Verdict};
use crate::split::{
    choose_bfs, choose_random, independence_score, CostMetric, IndependenceConfig, SplitMethod,
    SplitPlan,
};
use crate::structure;
use crate::triples::{enumerate_primitive, enumerate_triples, load_triples, save_triples, Triple, UpperBound};
use crate::verify::verify;
use crate::Vertex;

/// Environment variable naming the external solver binary.
pub const SOLVER_ENV: &str = "PYTHCOLOR_SOLVER";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pythcolor", version, about = "2-colouring Pythagorean triples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate Pythagorean triples with hypotenuse <= N.
    Gen {
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        primitive: bool,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode 2-colourability as DIMACS CNF.
    Encode {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the vertex-to-variable table as JSON.
        #[arg(long)]
        remap: Option<PathBuf>,
    },
    /// Remove pendant triples repeatedly.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Reduced triple list.
        #[arg(long)]
        out: PathBuf,
        /// Removal trace.
        #[arg(long)]
        trace: PathBuf,
    },
    /// Write the 2^m cube formulas.
    Split {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Solve a DIMACS file; prints `s` and `v` lines.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Split and run the cubes on a worker pool.
    Campaign {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 4)]
        pool: usize,
        /// Run through launcher scripts and output files in this directory.
        #[arg(long)]
        bridge_dir: Option<PathBuf>,
        /// Submit command for the bridge, e.g. `qsub`; local `sh` if omitted.
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        submit: Option<Vec<String>>,
        /// Result JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Event log, one JSON object per line.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Decoded colouring of the solved system.
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// Check a colouring against every triple <= N.
    Verify {
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        coloring: PathBuf,
        /// Violations as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Draw a colouring as a PPM image.
    Render {
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Column height; defaults to ceil(sqrt(N)).
        #[arg(long)]
        height: Option<usize>,
    },
    /// Structural checks.
    Analyze {
        #[command(subcommand)]
        what: Analysis,
    },
    /// gen, reduce, encode, split, campaign, restore, verify and render.
    Pipeline(PipelineArgs),
}

#[derive(Subcommand, Debug)]
enum Analysis {
    /// Sum, upper-sum and lower-sum properties.
    Sum {
        #[command(flatten)]
        input: Input,
    },
    /// Bicycles, and whether any has its two largest points as antipodes.
    Bicycles {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
    /// Search for a Steiner subsystem.
    SubSts {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 7)]
        order: usize,
        /// Seconds; needed for orders above 9.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// BFS levels from the smallest triple.
    Bfs {
        #[command(flatten)]
        input: Input,
        /// `level,count` CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cost variance across the cube assignments.
    Independence {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long, value_enum, default_value_t = MetricArg::Decisions)]
        metric: MetricArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `assignment,trial,cost` CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Upper bound N (inclusive).
    #[arg(long)]
    bound: Option<u32>,
    /// Triple list JSON instead of enumerating.
    #[arg(long)]
    triples: Option<PathBuf>,
    /// Primitive triples only.
    #[arg(long)]
    primitive: bool,
    /// Remove pendant triples first.
    #[arg(long)]
    reduce: bool,
}

#[derive(Args, Debug, Clone)]
struct PlanArgs {
    /// Special vertices, comma separated; overrides --method.
    #[arg(long, value_delimiter = ',')]
    specials: Option<Vec<Vertex>>,
    #[arg(long, value_enum, default_value_t = MethodArg::Bfs)]
    method: MethodArg,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Seed for --method random.
    #[arg(long, default_value_t = 0)]
    plan_seed: u64,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = SolverKind::Embedded)]
    solver: SolverKind,
    /// External solver binary; falls back to $PYTHCOLOR_SOLVER.
    #[arg(long)]
    solver_path: Option<PathBuf>,
    /// Extra arguments for the external solver.
    #[arg(long = "solver-arg", allow_hyphen_values = true)]
    solver_args: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_conflicts: Option<u64>,
    /// Per-job time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    #[arg(long)]
    bound: u32,
    #[arg(long)]
    reduce: bool,
    #[command(flatten)]
    plan: PlanArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 4)]
    pool: usize,
    /// Defaults to `pythcolor-run-<N>`.
    #[arg(long)]
    run_dir: Option<PathBuf>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long, value_enum, default_value_t = Expect::Any)]
    expect: Expect,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Bfs,
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum SolverKind {
    Embedded,
    External,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Expect {
    Sat,
    Unsat,
    Any,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MetricArg {
    Decisions,
    Conflicts,
    Propagations,
    WallTime,
}

impl From<MetricArg> for CostMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Decisions => CostMetric::Decisions,
            MetricArg::Conflicts => CostMetric::Conflicts,
            MetricArg::Propagations => CostMetric::Propagations,
            MetricArg::WallTime => CostMetric::WallTime,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Gen { bound, primitive, out } => {
            let b = UpperBound::new(bound)?;
            let list = if primitive { enumerate_primitive(b) } else { enumerate_triples(b) };
            match out {
                Some(path) => {
                    save_triples(&list, &path)?;
                    eprintln!("{} triples written to {}", list.len(), path.display());
                }
                None => println!("{}", serde_json::to_string(&list)?),
            }
            Ok(EXIT_OK)
        }
        Command::Encode { input, out, remap } => {
            let loaded = input.load()?;
            let (doc, table) = encode(&loaded.system, loaded.bound);
            emit_to(&cnf::emit(&doc), out.as_deref())?;
            if let Some(path) = remap {
                write_json(&path, &table)?;
            }
            Ok(EXIT_OK)
        }
        Command::Reduce { input, out, trace } => {
            let loaded = input.load()?;
            let red = loaded.system.remove_pendants();
            save_triples(&edges_as_triples(&red.reduced)?, &out)?;
            write_json(&trace, &red.trace)?;
            println!(
                "{} of {} triples remain on {} vertices; {} removed",
                red.reduced.edge_count(),
                loaded.system.edge_count(),
                red.reduced.vertex_count(),
                red.trace.len()
            );
            Ok(EXIT_OK)
        }
        Command::Split { input, plan, out_dir } => {
            let loaded = input.load()?;
            let (doc, table) = encode(&loaded.system, loaded.bound);
            let plan = plan.build(&loaded.system)?;
            let cubes = cnf::split(&doc, &table, &plan.specials)?;
            create_dir(&out_dir)?;
            for (i, (_, d)) in cubes.iter().enumerate() {
                cnf::write_file(d, out_dir.join(format!("cube_{i}.cnf")))?;
            }
            write_json(&out_dir.join("plan.json"), &plan)?;
            println!("{} cubes on specials {:?}", cubes.len(), plan.specials);
            Ok(EXIT_OK)
        }
        Command::Solve { file, solver } => {
            let doc = cnf::read_file(&file)?;
            let r = solver.solve(&doc)?;
            print_competition(&r);
            Ok(match r.verdict {
                Verdict::Indeterminate => EXIT_INDETERMINATE,
                _ => EXIT_OK,
            })
        }
        Command::Campaign {
            input,
            plan,
            solver,
            pool,
            bridge_dir,
            submit,
            out,
            log,
            coloring,
        } => {
            let loaded = input.load()?;
            let (doc, table) = encode(&loaded.system, loaded.bound);
            let plan = plan.build(&loaded.system)?;
            let cubes = make_cubes(&doc, &table, &plan)?;
            let result = match bridge_dir {
                Some(dir) => {
                    let launcher = submit.map_or(Launcher::Local, Launcher::Submit);
                    job_queue_bridge(&cubes, &solver.bridge_config(dir, pool, launcher)?)?
                }
                None => run_campaign(&cubes, &solver.pool_config(pool)?)?,
            };
            if let Some(path) = out {
                write_json(&path, &result)?;
            }
            if let Some(path) = log {
                write_log(&path, &result)?;
            }
            summarise(&result);
            if let (Some(path), Outcome::Sat { model, .. }) = (coloring, &result.outcome) {
                let mut c = cnf::decode_model(model, &table)?;
                if let Some(red) = &loaded.reduction {
                    c = red.restore(&c)?;
                }
                c.save(&path)?;
            }
            Ok(match result.outcome {
                Outcome::Indeterminate { .. } => EXIT_INDETERMINATE,
                _ => EXIT_OK,
            })
        }
        Command::Verify { bound, coloring, report } => {
            let b = UpperBound::new(bound)?;
            let c = Coloring::load(&coloring)?;
            let violations = verify(b, &c);
            if let Some(path) = report {
                write_json(&path, &violations)?;
            }
            if violations.is_empty() {
                println!("valid: every triple <= {bound} is bichromatic");
                Ok(EXIT_OK)
            } else {
                println!("{} violations", violations.len());
                for v in violations.iter().take(10) {
                    println!("  {:?} {:?}", v.triple, v.reason);
                }
                Ok(EXIT_VIOLATION)
            }
        }
        Command::Render { bound, coloring, out, height } => {
            let b = UpperBound::new(bound)?;
            let c = Coloring::load(&coloring)?;
            let h = height.unwrap_or_else(|| default_height(b));
            if h == 0 {
                return Err(Error::SolverConfig("column height must be at least 1".into()));
            }
            let img = render(b, &c, h);
            img.save(&out)?;
            println!("{}x{} image written to {}", img.width, img.height, out.display());
            Ok(EXIT_OK)
        }
        Command::Analyze { what } => analyze(what),
        Command::Pipeline(args) => pipeline(args),
    }
}

struct Loaded {
    bound: UpperBound,
    /// The system to work on, reduced if requested.
    system: TripleSystem,
    reduction: Option<Reduction>,
}

impl Input {
    fn load(&self) -> Result<Loaded> {
        let triples = match (&self.triples, self.bound) {
            (Some(path), _) => load_triples(path)?,
            (None, Some(n)) => {
                let b = UpperBound::new(n)?;
                if self.primitive { enumerate_primitive(b) } else { enumerate_triples(b) }
            }
            (None, None) => {
                return Err(Error::SolverConfig("give --bound or --triples".into()));
            }
        };
        let triples: Vec<Triple> = if self.primitive && self.triples.is_some() {
            triples.into_iter().filter(Triple::is_primitive).collect()
        } else {
            triples
        };
        let max_c = triples.iter().map(Triple::c).max().unwrap_or(1);
        let bound = UpperBound::new(self.bound.unwrap_or(max_c))?;
        if let Some(t) = triples.iter().find(|t| t.c() > bound.get()) {
            return Err(Error::TripleFile(format!("{t} exceeds the bound {bound}")));
        }
        let full = TripleSystem::build(&triples);
        let (system, reduction) = if self.reduce {
            let red = full.remove_pendants();
            (red.reduced.clone(), Some(red))
        } else {
            (full, None)
        };
        Ok(Loaded {
            bound,
            system,
            reduction,
        })
    }
}

impl PlanArgs {
    fn build(&self, sys: &TripleSystem) -> Result<SplitPlan> {
        match (&self.specials, self.method) {
            (Some(vs), _) => SplitPlan::manual(sys, vs.clone()),
            (None, MethodArg::Bfs) => choose_bfs(sys, self.m),
            (None, MethodArg::Random) => choose_random(sys, self.m, self.plan_seed),
        }
    }
}

impl SolverArgs {
    fn budget(&self) -> Result<Budget> {
        let max_time = self
            .timeout
            .map(|t| {
                Duration::try_from_secs_f64(t)
                    .map_err(|_| Error::SolverConfig(format!("bad timeout {t}")))
            })
            .transpose()?;
        Ok(Budget {
            max_conflicts: self.max_conflicts,
            max_decisions: None,
            max_time,
        })
    }

    fn embedded(&self) -> Result<SolverConfig> {
        Ok(SolverConfig {
            seed: self.seed,
            budget: self.budget()?,
            ..SolverConfig::default()
        })
    }

    fn external_path(&self) -> Result<PathBuf> {
        self.solver_path
            .clone()
            .or_else(|| std::env::var_os(SOLVER_ENV).map(PathBuf::from))
            .ok_or_else(|| {
                Error::SolverConfig(format!("external solver needs --solver-path or ${SOLVER_ENV}"))
            })
    }

    fn external(&self) -> Result<ExternalSolver> {
        let timeout = self.budget()?.max_time.unwrap_or(Duration::from_secs(365 * 24 * 3600));
        let ext = ExternalSolver {
            path: self.external_path()?,
            args: self.solver_args.clone(),
            timeout,
        };
        ext.check()?;
        Ok(ext)
    }

    fn choice(&self) -> Result<SolverChoice> {
        Ok(match self.solver {
            SolverKind::Embedded => SolverChoice::Embedded(self.embedded()?),
            SolverKind::External => SolverChoice::External(self.external()?),
        })
    }

    fn solve(&self, doc: &CnfDocument) -> Result<SolveResult> {
        match self.solver {
            SolverKind::Embedded => Ok(solve(doc, &self.embedded()?)),
            SolverKind::External => solve_external(doc, &self.external()?, None),
        }
    }

    fn pool_config(&self, pool: usize) -> Result<PoolConfig> {
        PoolConfig::new(pool, self.choice()?)
    }

    /// The bridge runs either the external binary or this program's own
    /// `solve` subcommand.
    fn bridge_config(&self, dir: PathBuf, pool: usize, launcher: Launcher) -> Result<BridgeConfig> {
        let solver = match self.solver {
            SolverKind::External => {
                let mut cmd = vec![self.external_path()?.to_string_lossy().into_owned()];
                cmd.extend(self.solver_args.iter().cloned());
                cmd
            }
            SolverKind::Embedded => {
                let exe = std::env::current_exe().map_err(|e| Error::io("current executable", e))?;
                let mut cmd = vec![exe.to_string_lossy().into_owned(), "solve".into()];
                cmd.extend(["--seed".into(), self.seed.to_string()]);
                if let Some(c) = self.max_conflicts {
                    cmd.extend(["--max-conflicts".into(), c.to_string()]);
                }
                cmd
            }
        };
        let timeout = self.budget()?.max_time.unwrap_or(Duration::from_secs(365 * 24 * 3600));
        Ok(BridgeConfig {
            dir,
            pool_size: pool,
            solver,
            launcher,
            poll: Duration::from_millis(50),
            timeout,
        })
    }
}

/// Cubes for the plan; an empty plan gives the whole formula as one cube.
fn make_cubes(doc: &CnfDocument, table: &RemapTable, plan: &SplitPlan) -> Result<Vec<(Cube, CnfDocument)>> {
    if plan.specials.is_empty() {
        return Ok(vec![(Cube { assignments: Vec::new() }, doc.clone())]);
    }
    cnf::split(doc, table, &plan.specials)
}

fn edges_as_triples(sys: &TripleSystem) -> Result<Vec<Triple>> {
    sys.edges()
        .iter()
        .map(|e| {
            let [a, b, c] = e.vertices();
            Triple::new(a.into(), b.into(), c.into())
        })
        .collect()
}

fn print_competition(r: &SolveResult) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = writeln!(out, "s {}", r.verdict);
    if let Some(model) = &r.model {
        for chunk in model.chunks(16) {
            let line: Vec<String> = chunk.iter().map(i32::to_string).collect();
            let _ = writeln!(out, "v {}", line.join(" "));
        }
        let _ = writeln!(out, "v 0");
    }
    if let Some(note) = &r.note {
        let _ = writeln!(out, "c {note}");
    }
    let s = &r.stats;
    let _ = writeln!(
        out,
        "c decisions {} conflicts {} propagations {} time {:.3}s",
        s.decisions,
        s.conflicts,
        s.propagations,
        s.elapsed.as_secs_f64()
    );
}

fn summarise(r: &CampaignResult) {
    match &r.outcome {
        Outcome::Sat { cube, .. } => println!(
            "SAT: cube {cube} ({}) in {:.3}s",
            r.records[*cube].assignment,
            r.elapsed.as_secs_f64()
        ),
        Outcome::Unsat => println!("UNSAT: all {} cubes refuted in {:.3}s", r.records.len(), r.elapsed.as_secs_f64()),
        Outcome::Indeterminate { unresolved } => {
            println!("INDETERMINATE: unresolved cubes {unresolved:?}")
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn write_log(path: &Path, r: &CampaignResult) -> Result<()> {
    let mut buf = Vec::new();
    r.write_log(&mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

fn emit_to(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(what: Analysis) -> Result<i32> {
    match what {
        Analysis::Sum { input } => {
            let sys = input.load()?.system;
            let sum = structure::check_sum_property(&sys);
            let upper = structure::check_upper_sum_property(&sys);
            let lower = structure::check_lower_sum_property(&sys);
            let holds = sum.holds && upper.holds && lower.holds;
            let report = json!({
                "sum": sum,
                "upper_sum": upper,
                "lower_sum": lower,
                "upper_sum_by_links": structure::upper_sum_by_links(&sys),
                "lower_sum_by_links": structure::lower_sum_by_links(&sys),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if holds { EXIT_OK } else { EXIT_VIOLATION })
        }
        Analysis::Bicycles { input, max_k } => {
            if max_k < 2 {
                return Err(Error::Search("max-k must be at least 2".into()));
            }
            let sys = input.load()?.system;
            let bikes = structure::find_bicycles(&sys, max_k);
            let ok = structure::check_bicycle_antipode_theorem(&sys, &bikes);
            let report = json!({
                "count": bikes.len(),
                "antipodes_never_maximal": ok,
                "bicycles": bikes,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
        }
        Analysis::SubSts { input, order, time_limit } => {
            let sys = input.load()?.system;
            let deadline = time_limit
                .map(|t| {
                    Duration::try_from_secs_f64(t)
                        .map(|d| Instant::now() + d)
                        .map_err(|_| Error::Search(format!("bad time limit {t}")))
                })
                .transpose()?;
            let found = match deadline {
                Some(_) => structure::find_sub_sts_within(&sys, order, deadline),
                None => structure::find_sub_sts(&sys, order),
            };
            match found {
                Ok(None) => {
                    println!("none found");
                    Ok(EXIT_OK)
                }
                Ok(Some(s)) => {
                    println!("{}", serde_json::to_string_pretty(&s)?);
                    Ok(EXIT_VIOLATION)
                }
                Err(Error::Search(msg)) if msg.contains("budget") => {
                    println!("search stopped: {msg}");
                    Ok(EXIT_INDETERMINATE)
                }
                Err(e) => Err(e),
            }
        }
        Analysis::Bfs { input, csv } => {
            let sys = input.load()?.system;
            let seed = default_seed(&sys).ok_or_else(|| Error::Plan("system has no triples".into()))?;
            let levels = sys.bfs_levels(&seed)?;
            if let Some(path) = csv {
                let mut buf = Vec::new();
                levels.write_csv(&mut buf).map_err(|e| Error::io(&path, e))?;
                fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
            }
            let report = json!({
                "seed": seed,
                "histogram": levels.histogram(),
                "deepest": levels.deepest(),
                "unreachable": levels.unreachable.len(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(EXIT_OK)
        }
        Analysis::Independence {
            input,
            plan,
            trials,
            fraction,
            metric,
            seed,
            csv,
        } => {
            let sys = input.load()?.system;
            let plan = plan.build(&sys)?;
            let cfg = IndependenceConfig {
                trials,
                removal_fraction: fraction,
                metric: metric.into(),
                seed,
                ..IndependenceConfig::default()
            };
            let report = independence_score(&sys, &plan, &cfg)?;
            if let Some(path) = csv {
                let mut buf = Vec::new();
                report.write_csv(&mut buf).map_err(|e| Error::io(&path, e))?;
                fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
            }
            let summary = json!({
                "specials": report.specials,
                "metric": report.metric,
                "means": report.means,
                "variance": report.variance,
                "incomplete_trials": report.incomplete_trials,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(EXIT_OK)
        }
    }
}

/// Validated pipeline parameters, recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    pub bound: u32,
    pub reduce: bool,
    pub m: usize,
    pub method: String,
    pub specials: Option<Vec<Vertex>>,
    pub plan_seed: u64,
    pub pool: usize,
    pub solver: String,
    pub solver_path: Option<PathBuf>,
    pub solver_args: Vec<String>,
    pub solver_seed: u64,
    pub max_conflicts: Option<u64>,
    pub timeout: Option<f64>,
    pub run_dir: PathBuf,
    pub height: usize,
    pub expect: String,
}

#[derive(Serialize)]
struct Stage {
    name: &'static str,
    seconds: f64,
}

fn pipeline(args: PipelineArgs) -> Result<i32> {
    let bound = UpperBound::new(args.bound)?;
    if args.pool == 0 {
        return Err(Error::Campaign("pool size must be at least 1".into()));
    }
    let height = args.height.unwrap_or_else(|| default_height(bound));
    if height == 0 {
        return Err(Error::SolverConfig("column height must be at least 1".into()));
    }
    let run_dir = args
        .run_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("pythcolor-run-{}", args.bound)));
    let solver_path = match args.solver.solver {
        SolverKind::External => Some(args.solver.external_path()?),
        SolverKind::Embedded => None,
    };
    let config = PipelineConfig {
        bound: args.bound,
        reduce: args.reduce,
        m: args.plan.specials.as_ref().map_or(args.plan.m, Vec::len),
        method: format!("{:?}", args.plan.method).to_lowercase(),
        specials: args.plan.specials.clone(),
        plan_seed: args.plan.plan_seed,
        pool: args.pool,
        solver: format!("{:?}", args.solver.solver).to_lowercase(),
        solver_path,
        solver_args: args.solver.solver_args.clone(),
        solver_seed: args.solver.seed,
        max_conflicts: args.solver.max_conflicts,
        timeout: args.solver.timeout,
        run_dir: run_dir.clone(),
        height,
        expect: format!("{:?}", args.expect).to_lowercase(),
    };
    let pool_config = args.solver.pool_config(args.pool)?;
    create_dir(&run_dir)?;

    let mut stages = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, stages: &mut Vec<Stage>| {
        stages.push(Stage { name, seconds: clock.elapsed().as_secs_f64() });
        clock = Instant::now();
    };

    let triples = enumerate_triples(bound);
    save_triples(&triples, run_dir.join("triples.json"))?;
    let full = TripleSystem::build(&triples);
    lap("gen", &mut stages);

    let reduction = args.reduce.then(|| full.remove_pendants());
    let system = match &reduction {
        Some(red) => {
            save_triples(&edges_as_triples(&red.reduced)?, run_dir.join("reduced.json"))?;
            write_json(&run_dir.join("trace.json"), &red.trace)?;
            red.reduced.clone()
        }
        None => full.clone(),
    };
    lap("reduce", &mut stages);

    let (doc, table) = encode(&system, bound);
    cnf::write_file(&doc, run_dir.join("formula.cnf"))?;
    write_json(&run_dir.join("remap.json"), &table)?;
    lap("encode", &mut stages);

    let (verdict, coloring, campaign_summary) = if system.is_empty() {
        // Nothing left to solve; restoration colours everything.
        (Verdict::Sat, Some(Coloring::new()), json!({"note": "system is empty"}))
    } else {
        let plan = if config.m == 0 {
            SplitPlan {
                specials: Vec::new(),
                method: SplitMethod::Bfs,
                seed_edge: None,
                levels: None,
                rng_seed: None,
                warnings: vec!["m = 0: the whole formula is one cube".into()],
            }
        } else {
            args.plan.build(&system)?
        };
        write_json(&run_dir.join("plan.json"), &plan)?;
        let cubes = make_cubes(&doc, &table, &plan)?;
        let cube_dir = run_dir.join("cubes");
        create_dir(&cube_dir)?;
        for (i, (_, d)) in cubes.iter().enumerate() {
            cnf::write_file(d, cube_dir.join(format!("cube_{i}.cnf")))?;
        }
        lap("split", &mut stages);

        let result = run_campaign(&cubes, &pool_config)?;
        write_json(&run_dir.join("campaign.json"), &result)?;
        write_log(&run_dir.join("campaign.log.jsonl"), &result)?;
        summarise(&result);
        lap("campaign", &mut stages);
        let summary = json!({
            "outcome": result.outcome.verdict(),
            "cubes": result.records.len(),
            "seconds": result.elapsed.as_secs_f64(),
        });
        match &result.outcome {
            Outcome::Sat { model, .. } => (Verdict::Sat, Some(cnf::decode_model(model, &table)?), summary),
            Outcome::Unsat => (Verdict::Unsat, None, summary),
            Outcome::Indeterminate { .. } => (Verdict::Indeterminate, None, summary),
        }
    };

    let mut violations = None;
    if let Some(c) = coloring {
        let restored = match &reduction {
            Some(red) => red.restore(&c)?,
            None => c,
        };
        lap("restore", &mut stages);
        restored.save(run_dir.join("coloring.json"))?;
        let v = verify(bound, &restored);
        write_json(&run_dir.join("violations.json"), &v)?;
        lap("verify", &mut stages);
        render(bound, &restored, height).save(run_dir.join("coloring.ppm"))?;
        lap("render", &mut stages);
        println!(
            "{} violations among {} triples <= {}",
            v.len(),
            triples.len(),
            args.bound
        );
        violations = Some(v.len());
    }

    let code = match (verdict, violations) {
        (Verdict::Indeterminate, _) => EXIT_INDETERMINATE,
        (Verdict::Sat, Some(n)) if n > 0 => EXIT_VIOLATION,
        (Verdict::Sat, _) if args.expect == Expect::Unsat => EXIT_VIOLATION,
        (Verdict::Unsat, _) if args.expect == Expect::Sat => EXIT_VIOLATION,
        _ => EXIT_OK,
    };
    let manifest = json!({
        "tool": "pythcolor",
        "version": env!("CARGO_PKG_VERSION"),
        "argv": std::env::args().collect::<Vec<_>>(),
        "config": config,
        "triples": triples.len(),
        "solved_system": {"vertices": system.vertex_count(), "edges": system.edge_count()},
        "campaign": campaign_summary,
        "verdict": verdict,
        "violations": violations,
        "exit_code": code,
        "stages": stages,
    });
    write_json(&run_dir.join("manifest.json"), &manifest)?;
    println!("run directory: {}", run_dir.display());
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("pythcolor".to_string())
            .chain(s.split_whitespace().map(String::from))
            .collect()
    }

    #[test]
    fn usage_errors_exit_3() {
        assert_eq!(run(argv("")), EXIT_USAGE);
        assert_eq!(run(argv("gen")), EXIT_USAGE);
        assert_eq!(run(argv("frobnicate")), EXIT_USAGE);
        assert_eq!(run(argv("gen --bound 0")), EXIT_USAGE);
        assert_eq!(run(argv("--help")), EXIT_OK);
    }

    #[test]
    fn gen_encode_golden() {
        let dir = tempfile::tempdir().unwrap();
        let t = dir.path().join("t.json");
        let c = dir.path().join("f.cnf");
        assert_eq!(run(argv(&format!("gen --bound 10 --out {}", t.display()))), EXIT_OK);
        assert_eq!(fs::read_to_string(&t).unwrap(), "[[3,4,5],[6,8,10]]");
        assert_eq!(
            run(argv(&format!("encode --triples {} --out {}", t.display(), c.display()))),
            EXIT_OK
        );
        assert_eq!(
            fs::read_to_string(&c).unwrap(),
            "c 10\np cnf 6 4\n1 2 3 0\n-1 -2 -3 0\n4 5 6 0\n-4 -5 -6 0\n"
        );
    }

    #[test]
    fn sub_sts_and_sum() {
        assert_eq!(run(argv("analyze sub-sts --bound 200 --order 7")), EXIT_OK);
        assert_eq!(run(argv("analyze sum --bound 300")), EXIT_OK);
        assert_eq!(run(argv("analyze sub-sts --bound 200 --order 8")), EXIT_USAGE);
    }

    #[test]
    fn external_without_path_is_config_error() {
        if std::env::var_os(SOLVER_ENV).is_some() {
            return;
        }
        let dir = tempfile::tempdir().unwrap();
        let cmd = format!(
            "pipeline --bound 100 --solver external --run-dir {}",
            dir.path().join("r").display()
        );
        assert_eq!(run(argv(&cmd)), EXIT_USAGE);
    }
}
