//! Lists Pythagorean triples up to a bound and counts the primitive ones.
//!
//! cargo run --example enumerate_triples -- 100

use pythcolor::triples::{enumerate_primitive, enumerate_triples};
use pythcolor::UpperBound;

fn main() -> pythcolor::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let bound = UpperBound::new(n)?;
    let all = enumerate_triples(bound);
    for t in all.iter().take(10) {
        println!("{t}");
    }
    println!("{} triples <= {n}, {} primitive", all.len(), enumerate_primitive(bound).len());
    Ok(())
}
