//! P{X_n = n} and the law of n - X_n for p = 1 - lambda / n^alpha.

use shelf_guess::montecarlo::phase_transition_sweep;

fn main() -> shelf_guess::Result<()> {
    let lambda = 2.0;
    let rows = phase_transition_sweep(lambda, &[0.5, 1.0, 1.5], &[100, 1000, 5000, 100_000], 5000)?;
    println!("{:>5} {:>7} {:>12} {:>10} {:>7} {:>9} {:>9} {:>10}", "alpha", "n", "p", "P{X=n}", "limit", "E(n-X)", "Var", "TV Po");
    for r in rows {
        let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.5}"));
        println!(
            "{:>5} {:>7} {:>12.8} {:>10.6} {:>7.4} {:>9} {:>9} {:>10}",
            r.alpha,
            r.n,
            r.p,
            r.identity_prob,
            r.identity_limit,
            show(r.deficit_mean),
            show(r.deficit_variance),
            show(r.tv_poisson)
        );
    }
    Ok(())
}
