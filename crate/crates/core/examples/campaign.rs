//! Runs 16 cubes on a pool of four workers and prints the event log.

use pythcolor::cnf::{decode_model, encode, split};
use pythcolor::orchestrate::{run_campaign, Outcome, PoolConfig};
use pythcolor::solver::SolverConfig;
use pythcolor::split::choose_bfs;
use pythcolor::triples::enumerate_triples;
use pythcolor::verify::verify;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let bound = UpperBound::new(4000)?;
    let red = TripleSystem::build(&enumerate_triples(bound)).remove_pendants();
    let (doc, table) = encode(&red.reduced, bound);
    let plan = choose_bfs(&red.reduced, 4)?;
    let cubes = split(&doc, &table, &plan.specials)?;
    let result = run_campaign(&cubes, &PoolConfig::embedded(4, SolverConfig::default())?)?;
    result.write_log(std::io::stdout()).expect("stdout");
    if let Outcome::Sat { cube, model } = &result.outcome {
        let coloring = red.restore(&decode_model(model, &table)?)?;
        println!("cube {cube} is SAT; {} violations", verify(bound, &coloring).len());
    }
    Ok(())
}
