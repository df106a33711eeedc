//! Seeded simulation of many games, compared with the exact law.
//!
//!     cargo run --release --example monte_carlo -- 50 1/2 1000000 42

use shelf_guess::montecarlo::{simulate, SimConfig};
use shelf_guess::Bias;

fn main() -> shelf_guess::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map_or(50, |s| s.parse().expect("n must be an integer"));
    let bias = args.get(1).map_or(Ok(Bias::half()), |s| Bias::parse(s))?;
    let reps = args.get(2).map_or(200_000, |s| s.parse().expect("reps must be an integer"));
    let seed = args.get(3).map_or(42, |s| s.parse().expect("seed must be an integer"));

    let run = simulate(&SimConfig::new(n, bias, reps, seed))?;
    let s = &run.summary;
    println!("n = {n}, p = {}, {reps} games, seed {seed}", s.config.bias);
    println!("E X = {:.4} +- {:.4}   Var X = {:.4}", s.mean_x, s.std_error_x(), s.var_x);
    println!("E L = {:.4} +- {:.4}   Var L = {:.4}", s.mean_l, s.std_error_l(), s.var_l);
    println!("E C = {:.4} +- {:.4}   Var C = {:.4}", s.mean_c, s.std_error_c(), s.var_c);
    println!("Cov(L, C) = {:.4}", s.cov_lc);
    if let Some(tv) = s.tv_to_exact {
        println!("TV to exact law = {tv:.5}");
    }
    println!("sup |F - Phi| (standardized, empirical) = {:.5}", s.ks_normal);
    println!("{:.0} games/s ({:.2}s, build {})", run.throughput.games_per_second, run.throughput.elapsed_secs, run.build);
    Ok(())
}
