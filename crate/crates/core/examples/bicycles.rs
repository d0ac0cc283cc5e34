//! Bicycles in a Schur system and in PYTH, and bicycles through any two
//! points of a Steiner triple system.

use pythcolor::designs;
use pythcolor::structure::{check_bicycle_antipode_theorem, find_bicycle_in_sts, find_bicycles};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    for b in find_bicycles(&designs::schur(20), 2) {
        println!("SCHUR(20): antipodes {:?} rim {:?}", b.antipodes(), b.rim());
    }
    let pyth = TripleSystem::build(&enumerate_triples(UpperBound::new(2000)?));
    let bikes = find_bicycles(&pyth, 3);
    println!(
        "PYTH(2000): {} bicycles with k <= 3; antipodes never the two largest: {}",
        bikes.len(),
        check_bicycle_antipode_theorem(&pyth, &bikes)
    );
    let b = find_bicycle_in_sts(&designs::fano(), 1, 2)?;
    println!("Fano: {}-bicycle with antipodes {:?}, rim {:?}", b.k(), b.antipodes(), b.rim());
    Ok(())
}
