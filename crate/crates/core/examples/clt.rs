//! Distance between the standardized law of X_n and the normal CDF,
//! computed from the exact float-backend law.

use shelf_guess::montecarlo::clt_distance;
use shelf_guess::Bias;

fn main() -> shelf_guess::Result<()> {
    for bias in [Bias::half(), Bias::ratio(3, 4)?] {
        println!("p = {bias}");
        for n in [64, 256, 1024, 4096, 16384] {
            let d = clt_distance(n, &bias)?;
            println!("  n = {n:>5}: sup |F_n - Phi| = {d:.5}   sqrt(n) * d = {:.3}", d * (n as f64).sqrt());
        }
    }
    Ok(())
}
