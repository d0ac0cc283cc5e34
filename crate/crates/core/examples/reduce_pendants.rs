//! Iterated pendant removal, then restoring a colouring of the kernel.

use pythcolor::cnf::{decode_model, encode};
use pythcolor::solver::{solve, SolverConfig};
use pythcolor::triples::enumerate_triples;
use pythcolor::verify::check_system;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    for n in [100, 1000, 5000] {
        let bound = UpperBound::new(n)?;
        let sys = TripleSystem::build(&enumerate_triples(bound));
        let red = sys.remove_pendants();
        println!(
            "N={n}: {} triples on {} vertices -> {} triples on {} vertices",
            sys.edge_count(),
            sys.vertex_count(),
            red.reduced.edge_count(),
            red.reduced.vertex_count()
        );
        let (doc, table) = encode(&red.reduced, bound);
        if let Some(model) = solve(&doc, &SolverConfig::default()).model {
            let full = red.restore(&decode_model(&model, &table)?)?;
            println!("  restored colouring, {} violations", check_system(&sys, &full).len());
        }
    }
    Ok(())
}
