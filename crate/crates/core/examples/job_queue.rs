//! Runs cubes through launcher scripts, as on a batch cluster. Each job is
//! this crate's own `pythcolor solve`, so build the binary first.
//!
//! cargo build --release && cargo run --example job_queue

use std::time::Duration;

use pythcolor::cnf::{encode, split};
use pythcolor::orchestrate::{job_queue_bridge, BridgeConfig, Launcher};
use pythcolor::split::choose_bfs;
use pythcolor::triples::enumerate_triples;
use pythcolor::{TripleSystem, UpperBound};

fn main() -> pythcolor::Result<()> {
    let exe = std::env::var("PYTHCOLOR_BIN").unwrap_or_else(|_| "target/release/pythcolor".into());
    if !std::path::Path::new(&exe).exists() {
        eprintln!("{exe} not found; build it or set PYTHCOLOR_BIN");
        return Ok(());
    }
    let bound = UpperBound::new(2000)?;
    let sys = TripleSystem::build(&enumerate_triples(bound)).remove_pendants().reduced;
    let (doc, table) = encode(&sys, bound);
    let cubes = split(&doc, &table, &choose_bfs(&sys, 3)?.specials)?;
    let dir = tempfile::tempdir().map_err(|e| pythcolor::Error::Campaign(e.to_string()))?;
    let cfg = BridgeConfig {
        dir: dir.path().to_path_buf(),
        pool_size: 2,
        solver: vec![exe, "solve".into()],
        launcher: Launcher::Local,
        poll: Duration::from_millis(20),
        timeout: Duration::from_secs(60),
    };
    let result = job_queue_bridge(&cubes, &cfg)?;
    for r in &result.records {
        println!("cube {} ({}): {:?}", r.index, r.assignment, r.status);
    }
    Ok(())
}
