//! Searches for Fano planes and STS(9) inside PYTH.

use pythcolor::designs;
use pythcolor::structure::find_sub_sts;
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let pyth = TripleSystem::build(&enumerate_triples(UpperBound::new(400)?));
    for order in [7, 9] {
        match find_sub_sts(&pyth, order)? {
            Some(s) => println!("order {order}: found on {:?}", s.points),
            None => println!("order {order}: none found"),
        }
    }
    let ag = designs::affine_plane_3();
    println!("AG(2,3) contains STS(9): {}", find_sub_sts(&ag, 9)?.is_some());
    Ok(())
}
