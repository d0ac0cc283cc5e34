//! Chooses special vertices by BFS and at random, and writes the cubes.

use pythcolor::cnf::{emit, encode, split};
use pythcolor::split::{choose_bfs, choose_random};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let bound = UpperBound::new(10)?;
    let (doc, table) = encode(&TripleSystem::build(&enumerate_triples(bound)), bound);
    for (cube, d) in split(&doc, &table, &[3, 4])? {
        println!("cube {} ({}):\n{}", cube.index(), cube.bits(), emit(&d));
    }

    let bound = UpperBound::new(3000)?;
    let sys = TripleSystem::build(&enumerate_triples(bound)).remove_pendants().reduced;
    let bfs = choose_bfs(&sys, 4)?;
    let random = choose_random(&sys, 4, 7)?;
    println!("bfs specials {:?} from seed {:?}", bfs.specials, bfs.seed_edge);
    println!("random specials {:?}", random.specials);
    Ok(())
}
