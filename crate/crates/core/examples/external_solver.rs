//! Solves a formula with an external binary named by PYTHCOLOR_SOLVER.
//!
//! PYTHCOLOR_SOLVER=/path/to/kissat cargo run --example external_solver

use pythcolor::cnf::encode;
use pythcolor::solver::{solve_external, ExternalSolver};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let Some(path) = std::env::var_os("PYTHCOLOR_SOLVER") else {
        eprintln!("set PYTHCOLOR_SOLVER to a SAT solver binary");
        return Ok(());
    };
    let bound = UpperBound::new(5000)?;
    let sys = TripleSystem::build(&enumerate_triples(bound)).remove_pendants().reduced;
    let (doc, _) = encode(&sys, bound);
    let solver = ExternalSolver::new(path, std::time::Duration::from_secs(3600));
    solver.check()?;
    let r = solve_external(&doc, &solver, None)?;
    println!("{} in {:?}", r.verdict, r.stats.elapsed);
    Ok(())
}
