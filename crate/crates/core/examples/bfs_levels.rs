//! Breadth-first levels of the reduced system from its smallest triple.

use pythcolor::hypergraph::default_seed;
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let sys = TripleSystem::build(&enumerate_triples(UpperBound::new(3000)?)).remove_pendants().reduced;
    let seed = default_seed(&sys).expect("non-empty");
    let levels = sys.bfs_levels(&seed)?;
    println!("seed {:?}", seed.vertices());
    levels.write_csv(std::io::stdout()).expect("stdout");
    println!("{} triples unreachable", levels.unreachable.len());
    Ok(())
}
