//! The embedded CDCL solver on PYTH and on the Fano plane.

use pythcolor::cnf::encode;
use pythcolor::designs;
use pythcolor::solver::{solve, SolverConfig};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let cfg = SolverConfig::default();
    for n in [1000, 3000, 5000] {
        let bound = UpperBound::new(n)?;
        let sys = TripleSystem::build(&enumerate_triples(bound)).remove_pendants().reduced;
        let (doc, _) = encode(&sys, bound);
        let r = solve(&doc, &cfg);
        println!(
            "N={n}: {} vars {} clauses -> {} ({} decisions, {} conflicts, {:?})",
            doc.var_count(),
            doc.clause_count(),
            r.verdict,
            r.stats.decisions,
            r.stats.conflicts,
            r.stats.elapsed
        );
    }
    let (doc, _) = encode(&designs::fano(), UpperBound::new(7)?);
    println!("Fano: {}", solve(&doc, &cfg).verdict);
    Ok(())
}
