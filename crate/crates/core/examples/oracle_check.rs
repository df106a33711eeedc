//! Compares the DP laws with brute-force enumeration of every placement
//! sequence.
//!
//!     cargo run --release --example oracle_check -- 12 3/10

use num_rational::BigRational;
use shelf_guess::exact::{joint_pmf, xn_pmf};
use shelf_guess::oracle::{conditional_next_card, enumerate_all};
use shelf_guess::scalar::render_rational;
use shelf_guess::{position_matrix, Bias};

fn main() -> shelf_guess::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(10, |s| s.parse().expect("n must be an integer"));
    let bias = args.next().map_or(Ok(Bias::half()), |s| Bias::parse(&s))?;

    let r = enumerate_all(n, &bias)?;
    println!("enumerated {} placement sequences, total mass {}", r.sequences, render_rational(&r.total_mass()));
    let laws = r.total_law() == xn_pmf::<BigRational>(n, &bias)? && r.joint_matches(&joint_pmf(n, &bias)?);
    let matrix = r.position_matrix == position_matrix::<BigRational>(n, &bias)?;
    println!("{}: DP == enumeration", if laws && matrix { "PASS" } else { "FAIL" });

    let law = conditional_next_card(n, &bias, &[])?;
    let shown: Vec<String> = law.iter().map(|(l, x)| format!("{l}: {}", render_rational(x))).collect();
    println!("law of the first card: {}", shown.join(", "));
    Ok(())
}
