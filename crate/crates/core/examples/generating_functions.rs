//! Expands the closed-form generating functions and compares each
//! coefficient with the DP law.

use num_rational::BigRational;
use shelf_guess::exact::gf::{gf_series_joint, gf_series_joint_biased, gf_series_total};
use shelf_guess::exact::{joint_pmf, xn_pmf};
use shelf_guess::scalar::render_rational;
use shelf_guess::Bias;

type Q = BigRational;

fn main() -> shelf_guess::Result<()> {
    let n_max = 30;
    for bias in [Bias::half(), Bias::ratio(3, 4)?, Bias::ratio(9, 10)?] {
        let series = gf_series_total::<Q>(n_max, &bias)?;
        let agree = (1..=n_max).all(|n| {
            let mut dp = xn_pmf::<Q>(n, &bias).unwrap().probs().to_vec();
            while dp.last().is_some_and(num_traits::Zero::is_zero) {
                dp.pop();
            }
            series.coeff(n).univariate() == dp
        });
        println!("S(z,v) at p = {bias}: matches DP for n <= {n_max}: {agree}");
    }

    let coeffs: Vec<String> = gf_series_total::<Q>(3, &Bias::half())?.coeff(3).univariate().iter().map(render_rational).collect();
    println!("[z^3] S(z,v) at p = 1/2, coefficients of v^0..v^3: {}", coeffs.join(", "));

    let joint = gf_series_joint::<Q>(n_max)?;
    let biased = gf_series_joint_biased::<Q>(n_max, &Bias::ratio(3, 4)?)?;
    let mut ok = true;
    for n in 1..=n_max {
        for (series, bias) in [(&joint, Bias::half()), (&biased, Bias::ratio(3, 4)?)] {
            let law = joint_pmf::<Q>(n, &bias)?;
            ok &= law.entries().all(|((l, c), x)| &series.coeff(n).coeff(l, c) == x)
                && series.value_at_one(n) == law.total();
        }
    }
    println!("S(z,v,w) at p = 1/2 and p = 3/4: matches joint DP for n <= {n_max}: {ok}");
    Ok(())
}
