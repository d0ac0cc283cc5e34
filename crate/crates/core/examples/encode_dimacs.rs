//! Encodes the triples up to 10 and parses the result back.

use pythcolor::cnf::{emit, encode, parse};
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let bound = UpperBound::new(10)?;
    let (doc, table) = encode(&TripleSystem::build(&enumerate_triples(bound)), bound);
    let text = emit(&doc);
    print!("{text}");
    for (vertex, var) in table.iter() {
        println!("c x{var} = {vertex}");
    }
    assert_eq!(parse(&text)?, doc);
    Ok(())
}
