//! Moments of pure-luck (L) and certified (C) correct guesses at p = 1/2,
//! next to the exact formulas they satisfy.

use num_rational::BigRational;
use shelf_guess::exact::joint_pmf_table;
use shelf_guess::scalar::render_rational;
use shelf_guess::Bias;

fn main() -> shelf_guess::Result<()> {
    let n_max: usize = std::env::args().nth(1).map_or(12, |s| s.parse().expect("n must be an integer"));
    println!("{:>3} {:>6} {:>6} {:>9} {:>8} {:>8} {:>6}", "n", "E L", "E C", "Var L", "Var C", "Cov", "Var X");
    for law in joint_pmf_table::<BigRational>(n_max, &Bias::half())? {
        let m = law.moments();
        println!(
            "{:>3} {:>6} {:>6} {:>9} {:>8} {:>8} {:>6}",
            law.n(),
            render_rational(&m.mean_l),
            render_rational(&m.mean_c),
            render_rational(&m.var_l),
            render_rational(&m.var_c),
            render_rational(&m.cov),
            render_rational(&m.total.variance),
        );
    }
    println!("for n >= 3: Var L = (5n-4)/16, Var C = (n-2)/4, Cov = (3-2n)/8, Var X = n/16");
    Ok(())
}
