//! Exact law of the number of correct guesses, with its moments and the
//! closed-form moments when they apply.
//!
//!     cargo run --example exact_law -- 16 1/2

use num_rational::BigRational;
use shelf_guess::exact::{closed_form_moments, xn_pmf};
use shelf_guess::scalar::render_rational;
use shelf_guess::Bias;

fn main() -> shelf_guess::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(10, |s| s.parse().expect("n must be an integer"));
    let bias = args.next().map_or(Ok(Bias::half()), |s| Bias::parse(&s))?;

    let law = xn_pmf::<BigRational>(n, &bias)?;
    println!("P{{X_{n} = k}} at p = {bias}");
    for (k, x) in law.entries() {
        println!("{k:>4}  {:<28} {:.6}", render_rational(x), shelf_guess::Scalar::as_f64(x));
    }
    println!("mean     {}", render_rational(&law.mean()));
    println!("variance {}", render_rational(&law.variance()));
    match closed_form_moments::<BigRational>(n, &bias) {
        Ok(m) => println!("closed form: mean {}, variance {}", render_rational(&m.mean), render_rational(&m.variance)),
        Err(e) => println!("closed form not applicable: {e}"),
    }
    Ok(())
}
