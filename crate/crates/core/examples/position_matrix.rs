//! Prints the position matrix and first-card law of a shelf shuffle.
//!
//!     cargo run --example position_matrix -- 6 3/10

use num_rational::BigRational;
use shelf_guess::{first_card_law, position_matrix, Bias};

fn main() -> shelf_guess::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(5, |s| s.parse().expect("n must be an integer"));
    let bias = match args.next() {
        Some(s) => Bias::parse(&s)?,
        None => Bias::half(),
    };

    let m = position_matrix::<BigRational>(n, &bias)?;
    println!("P{{card i at position j}}, n = {n}, p = {bias}");
    for (i, row) in m.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{:>10}", shelf_guess::scalar::render_rational(x))).collect();
        println!("{:>3} |{}", i + 1, cells.join(""));
    }
    println!("doubly stochastic: {}", m.is_doubly_stochastic());
    println!("mirror symmetric:  {}", m.is_mirror_symmetric());

    let first = first_card_law::<BigRational>(n, &bias)?;
    let rendered: Vec<String> = first.probs().iter().map(shelf_guess::scalar::render_rational).collect();
    println!("first card: ({})", rendered.join(", "));
    Ok(())
}
