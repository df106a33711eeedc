//! The threshold nu below which a biased (p < 1/2) guesser bets on the
//! largest label, and the binomial law of the score in that regime.

use num_rational::BigRational;
use shelf_guess::exact::regime::binomial_regime_pmf;
use shelf_guess::exact::xn_pmf;
use shelf_guess::oracle::four_card_tie_bias;
use shelf_guess::strategy::{nu_threshold, Strategy};
use shelf_guess::Bias;

fn main() -> shelf_guess::Result<()> {
    for (a, b) in [(1, 10), (1, 5), (3, 10), (2, 5), (9, 20)] {
        let bias = Bias::ratio(a, b)?;
        let t = nu_threshold(&bias)?;
        let strategy = Strategy::optimal(&bias)?;
        let guesses: Vec<usize> = (1..=10).map(|m| strategy.first_guess_index(m)).collect();
        println!("p = {bias:>5}: nu = {:>2}; first guess for m = 1..10: {guesses:?}", t.nu);
        let same = (1..=t.nu).all(|n| binomial_regime_pmf::<BigRational>(n, &bias).unwrap() == xn_pmf(n, &bias).unwrap());
        println!("           X_n = 1 + Bin(n-1, 1-p) for n <= nu: {same}");
    }
    let p = four_card_tie_bias();
    println!("four-card tie: p* = {p:.12}, p* - (1-p*)^3 = {:.1e}", p - (1.0 - p).powi(3));
    Ok(())
}
