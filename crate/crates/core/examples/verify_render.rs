//! Colours [1, N] by solving, verifies it independently and writes a PPM.
//!
//! cargo run --example verify_render -- 2000 coloring.ppm

use pythcolor::cnf::{decode_model, encode};
use pythcolor::render::{default_height, render};
use pythcolor::solver::{solve, SolverConfig};
use pythcolor::triples::enumerate_triples;
use pythcolor::verify::verify;
use pythcolor::{Coloring, TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let out = args.next().unwrap_or_else(|| "coloring.ppm".into());
    let bound = UpperBound::new(n)?;
    let red = TripleSystem::build(&enumerate_triples(bound)).remove_pendants();
    let (doc, table) = encode(&red.reduced, bound);
    let model = solve(&doc, &SolverConfig::default()).model.expect("satisfiable");
    let coloring = red.restore(&decode_model(&model, &table)?)?;
    println!("{} violations", verify(bound, &coloring).len());

    let all_true: Coloring = (1..=n).map(|k| (k, true)).collect();
    println!("all-true colouring: {} violations", verify(bound, &all_true).len());

    let img = render(bound, &coloring, default_height(bound));
    img.save(&out)?;
    println!("{}x{} written to {out}", img.width, img.height);
    Ok(())
}
