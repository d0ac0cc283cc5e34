//! The whole chain through the command-line entry point, into a run
//! directory.
//!
//! cargo run --release --example pipeline -- 3000

fn main() {
    let n = std::env::args().nth(1).unwrap_or_else(|| "3000".into());
    let dir = format!("pythcolor-run-{n}");
    let code = pythcolor::cli::run([
        "pythcolor", "pipeline", "--bound", &n, "--reduce", "--m", "3", "--pool", "4", "--run-dir", &dir,
    ]);
    std::process::exit(code);
}
