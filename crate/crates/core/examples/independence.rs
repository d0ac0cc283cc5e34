//! Cost variance across cube assignments for BFS and random plans.

use pythcolor::split::{choose_bfs, choose_random, independence_score, IndependenceConfig};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let sys = TripleSystem::build(&enumerate_triples(UpperBound::new(3000)?)).remove_pendants().reduced;
    let cfg = IndependenceConfig::default();
    for m in 1..=3 {
        let bfs = independence_score(&sys, &choose_bfs(&sys, m)?, &cfg)?;
        let rnd = independence_score(&sys, &choose_random(&sys, m, 1)?, &cfg)?;
        println!("m={m}: bfs variance {:.1}, random variance {:.1}", bfs.variance, rnd.variance);
    }
    Ok(())
}
