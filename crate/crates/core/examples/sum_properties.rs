//! Sum, upper-sum and lower-sum properties on PYTH and on a Schur system.

use pythcolor::designs;
use pythcolor::structure::{check_lower_sum_property, check_sum_property, check_upper_sum_property};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let systems = [
        ("PYTH(2000)", TripleSystem::build(&enumerate_triples(UpperBound::new(2000)?))),
        ("SCHUR(40)", designs::schur(40)),
        ("Fano", designs::fano()),
    ];
    for (name, sys) in &systems {
        println!(
            "{name}: sum {} upper {} lower {}",
            check_sum_property(sys).holds,
            check_upper_sum_property(sys).holds,
            check_lower_sum_property(sys).holds
        );
    }
    Ok(())
}
