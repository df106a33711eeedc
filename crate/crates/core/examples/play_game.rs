//! Plays the optimal strategy against a deck and prints the trace.
//!
//! Without arguments this replays the 20-card game in which the guesser
//! scores 17: three lucky guesses and fourteen certified ones. Pass a seed
//! to play a freshly shuffled deck instead:
//!
//!     cargo run --example play_game -- 7 52 3/4

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shelf_guess::{play_game, shelf_shuffle, Bias, Classification, ShuffledDeck};

fn main() -> shelf_guess::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (deck, bias) = if let Some(seed) = args.first() {
        let seed: u64 = seed.parse().expect("seed must be an integer");
        let n = args.get(1).map_or(20, |s| s.parse().expect("n must be an integer"));
        let bias = args.get(2).map_or(Ok(Bias::half()), |s| Bias::parse(s))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (shelf_shuffle(n, &bias, &mut rng)?, bias)
    } else {
        let order = vec![1, 2, 5, 10, 11, 19, 20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3];
        (ShuffledDeck::from_order(order)?, Bias::half())
    };

    let record = play_game(&deck, &bias)?;
    println!("{:>4} {:>6} {:>6}  result", "step", "guess", "shown");
    for (k, ((g, s), c)) in record.guesses.iter().zip(&record.shown).zip(&record.classifications).enumerate() {
        let mark = match c {
            Classification::LuckCorrect => "lucky",
            Classification::CertifiedCorrect => "certified",
            Classification::Incorrect => "",
        };
        println!("{:>4} {:>6} {:>6}  {mark}", k + 1, g, s);
    }
    let t = record.totals;
    println!("X = {}, L = {}, C = {}", t.x, t.l, t.c);
    Ok(())
}
