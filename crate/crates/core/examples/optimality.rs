//! Checks that the strategy maximises the chance of the next card after
//! every reachable history.

use shelf_guess::oracle::{four_card_tie_bias, verify_strategy_optimality};
use shelf_guess::Bias;

fn main() -> shelf_guess::Result<()> {
    for bias in [Bias::ratio(3, 10)?, Bias::half(), Bias::ratio(3, 4)?] {
        for n in [4, 7, 9] {
            let r = verify_strategy_optimality(n, &bias)?;
            println!(
                "p = {:>5}, n = {n}: {} prefixes, E(X) = {} ({}), root argmax {:?}",
                r.p,
                r.prefixes_checked,
                r.expected_score,
                if r.passed { "pass" } else { "FAIL" },
                r.root_argmax
            );
        }
    }
    let r = verify_strategy_optimality(4, &Bias::from_f64(four_card_tie_bias())?)?;
    for line in r.lines() {
        println!("  {line}");
    }
    Ok(())
}
