//! Runs the acceptance checks, or only the ids given on the command line.
//!
//!     cargo run --release --example acceptance -- 9 10 11

use shelf_guess::checks::{run_all, run_check};

fn main() {
    let ids: Vec<u8> = std::env::args().skip(1).map(|s| s.parse().expect("check ids are integers")).collect();
    let outcomes = if ids.is_empty() { run_all() } else { ids.iter().filter_map(|&id| run_check(id)).collect() };
    for o in &outcomes {
        println!("{}", o.line());
    }
    if outcomes.iter().any(|o| !o.passed) {
        std::process::exit(1);
    }
}
