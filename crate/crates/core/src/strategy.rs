//! The optimal full-feedback guessing strategy and complete games.
//!
//! The guesser knows the shuffle model. Before any label `>= n-1` has been
//! revealed, the unresolved part of the deck is a fresh shuffle of the
//! labels above the last revealed card (the "reduced instance"), and the
//! best guess is either its smallest or its largest label depending on
//! `p` and the instance size. Once `n-1` or `n` shows up, the rest of the
//! deck is a known decreasing run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Bias;
use crate::shuffle::{check_deck_size, ShuffledDeck};

/// Largest instance size at which the biased guesser prefers the largest
/// label: `nu = floor(ln p / ln(1-p)) + 1` for `p < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuThreshold {
    pub nu: usize,
    /// `(1-p)^(nu-1) == p` exactly, so both labels are optimal at size `nu`.
    pub tie: bool,
}

/// Exponents above this are settled in floating point only.
const EXACT_NU_LIMIT: usize = 20_000;

/// Computes `nu` for `0 < p < 1/2`.
///
/// `nu` is the least `k` with `(1-p)^k < p`. The float estimate is
/// confirmed (and corrected) with exact rational powers whenever it is
/// small enough to do so.
pub fn nu_threshold(bias: &Bias) -> Result<NuThreshold> {
    if bias.at_least_half() {
        return Err(Error::Domain(format!("nu is only defined for p < 1/2, got p = {bias}")));
    }
    let pf = bias.to_f64();
    let ratio = pf.ln() / (-pf).ln_1p();
    let estimate = ratio.floor() as usize + 1;
    if estimate > EXACT_NU_LIMIT {
        return Ok(NuThreshold { nu: estimate, tie: false });
    }
    let p = bias.value();
    let q = bias.complement();
    let below = |k: usize| num_traits::pow(q.clone(), k) < *p;
    let mut nu = estimate.max(1);
    while nu > 1 && below(nu - 1) {
        nu -= 1;
    }
    while !below(nu) {
        nu += 1;
    }
    let tie = num_traits::pow(q, nu - 1) == *p;
    Ok(NuThreshold { nu, tie })
}

/// Which label to guess when both are optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    #[default]
    Smallest,
    Largest,
}

/// The label of a reduced instance that the strategy guesses first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstGuess {
    Smallest,
    Largest,
}

/// Optimal strategy for a given bias, precomputed once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strategy {
    threshold: Option<NuThreshold>,
    tie_break: TieBreak,
    /// `p == 1`: the deck is certainly the identity.
    deterministic: bool,
}

impl Strategy {
    pub fn optimal(bias: &Bias) -> Result<Self> {
        Self::with_tie_break(bias, TieBreak::default())
    }

    pub fn with_tie_break(bias: &Bias, tie_break: TieBreak) -> Result<Self> {
        let threshold = if bias.at_least_half() { None } else { Some(nu_threshold(bias)?) };
        Ok(Strategy { threshold, tie_break, deterministic: bias.is_one() })
    }

    pub fn threshold(&self) -> Option<NuThreshold> {
        self.threshold
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// First guess in a reduced instance of `m` cards.
    pub fn first_guess(&self, m: usize) -> FirstGuess {
        match self.threshold {
            Some(t) if m >= 2 => {
                let largest = m < t.nu || (m == t.nu && !(t.tie && self.tie_break == TieBreak::Smallest));
                if largest {
                    FirstGuess::Largest
                } else {
                    FirstGuess::Smallest
                }
            }
            _ => FirstGuess::Smallest,
        }
    }

    /// Position (1-based, within a reduced instance of size `m`) of the
    /// label the strategy guesses first.
    pub fn first_guess_index(&self, m: usize) -> usize {
        match self.first_guess(m) {
            FirstGuess::Smallest => 1,
            FirstGuess::Largest => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    LuckCorrect,
    CertifiedCorrect,
    Incorrect,
}

impl Classification {
    pub fn is_correct(self) -> bool {
        self != Classification::Incorrect
    }
}

/// What the guesser knows after some cards have been revealed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuesserState {
    n: usize,
    strategy: Strategy,
    seen: Vec<bool>,
    remaining: usize,
    last_shown: Option<usize>,
    descending: bool,
    /// Labels `1..=offset` are resolved; the live instance is `offset+1..=n`.
    offset: usize,
    /// Largest label not yet revealed.
    high: usize,
}

impl GuesserState {
    pub fn new(n: usize, strategy: Strategy) -> Result<Self> {
        check_deck_size(n)?;
        Ok(GuesserState {
            n,
            strategy,
            seen: vec![false; n + 1],
            remaining: n,
            last_shown: None,
            descending: false,
            offset: 0,
            high: n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn last_shown(&self) -> Option<usize> {
        self.last_shown
    }

    pub fn is_descending(&self) -> bool {
        self.descending
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn is_unseen(&self, label: usize) -> bool {
        (1..=self.n).contains(&label) && !self.seen[label]
    }

    pub fn unseen(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(|&l| !self.seen[l])
    }

    /// Size of the live reduced instance.
    pub fn instance_size(&self) -> usize {
        self.n - self.offset
    }

    /// Whether the next card is determined by what has been revealed.
    pub fn next_is_certain(&self) -> bool {
        self.descending || self.remaining == 1 || self.strategy.deterministic
    }

    pub fn next_guess(&self) -> Result<usize> {
        if self.remaining == 0 {
            return Err(Error::State("no cards left to guess".into()));
        }
        if self.descending {
            return Ok(self.high);
        }
        Ok(match self.strategy.first_guess(self.instance_size()) {
            FirstGuess::Smallest => self.offset + 1,
            FirstGuess::Largest => self.n,
        })
    }

    /// Records the revealed card and classifies `guess`.
    pub fn observe(&mut self, shown: usize, guess: usize) -> Result<Classification> {
        if !self.is_unseen(shown) {
            return Err(Error::State(format!("label {shown} is not among the unseen cards")));
        }
        if !self.descending && shown <= self.offset {
            return Err(Error::State(format!(
                "label {shown} cannot appear before label {} in a shelf-shuffled deck",
                self.offset
            )));
        }
        let certain = self.next_is_certain();
        self.seen[shown] = true;
        self.remaining -= 1;
        self.last_shown = Some(shown);
        if shown + 1 >= self.n {
            self.descending = true;
        } else if !self.descending {
            self.offset = shown;
        }
        while self.high > 0 && self.seen[self.high] {
            self.high -= 1;
        }
        Ok(if guess != shown {
            Classification::Incorrect
        } else if certain {
            Classification::CertifiedCorrect
        } else {
            Classification::LuckCorrect
        })
    }
}

/// Correct guesses split into pure luck and certified.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Totals {
    pub x: usize,
    pub l: usize,
    pub c: usize,
}

impl Totals {
    pub fn record(&mut self, class: Classification) {
        match class {
            Classification::LuckCorrect => {
                self.x += 1;
                self.l += 1;
            }
            Classification::CertifiedCorrect => {
                self.x += 1;
                self.c += 1;
            }
            Classification::Incorrect => {}
        }
    }
}

/// Full trace of one game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub deck: ShuffledDeck,
    pub guesses: Vec<usize>,
    pub shown: Vec<usize>,
    pub classifications: Vec<Classification>,
    pub totals: Totals,
}

/// Plays the optimal strategy against `deck`.
pub fn play_game(deck: &ShuffledDeck, bias: &Bias) -> Result<GameRecord> {
    play_game_with(deck, Strategy::optimal(bias)?)
}

pub fn play_game_with(deck: &ShuffledDeck, strategy: Strategy) -> Result<GameRecord> {
    let n = deck.len();
    let mut state = GuesserState::new(n, strategy)?;
    let mut record = GameRecord {
        deck: deck.clone(),
        guesses: Vec::with_capacity(n),
        shown: Vec::with_capacity(n),
        classifications: Vec::with_capacity(n),
        totals: Totals::default(),
    };
    for &card in deck.order() {
        let guess = state.next_guess()?;
        let class = state.observe(card, guess)?;
        record.guesses.push(guess);
        record.shown.push(card);
        record.classifications.push(class);
        record.totals.record(class);
    }
    Ok(record)
}

/// Totals only, without building a trace.
///
/// Mirrors [`GuesserState`] but exploits the deck structure: until the
/// descending run starts each revealed card resets the instance, and after
/// it every guess is certified.
pub fn play_totals(order: &[usize], strategy: &Strategy) -> Totals {
    let n = order.len();
    let mut totals = Totals::default();
    let mut offset = 0;
    for (pos, &card) in order.iter().enumerate() {
        let guess = match strategy.first_guess(n - offset) {
            FirstGuess::Smallest => offset + 1,
            FirstGuess::Largest => n,
        };
        let last = card + 1 >= n || pos + 1 == n;
        if guess == card {
            totals.x += 1;
            if strategy.deterministic || pos + 1 == n {
                totals.c += 1;
            } else {
                totals.l += 1;
            }
        }
        if last {
            // This card ends the increasing prefix; the rest of the deck is
            // the known descending run.
            let rest = n - pos - 1;
            totals.x += rest;
            totals.c += rest;
            return totals;
        }
        offset = card;
    }
    totals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::{deck_from_placements, PlacementSequence};

    fn deck(order: &[usize]) -> ShuffledDeck {
        ShuffledDeck::from_order(order.to_vec()).unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu_threshold(&Bias::ratio(1, 5).unwrap()).unwrap(), NuThreshold { nu: 8, tie: false });
        assert_eq!(nu_threshold(&Bias::ratio(3, 10).unwrap()).unwrap(), NuThreshold { nu: 4, tie: false });
        assert!(nu_threshold(&Bias::half()).is_err());
        assert!(nu_threshold(&Bias::ratio(3, 4).unwrap()).is_err());
    }

    #[test]
    fn nu_matches_brute_force_comparisons() {
        for denom in [7i64, 10, 13, 100, 1000] {
            for numer in 1..denom {
                if 2 * numer >= denom {
                    break;
                }
                let bias = Bias::ratio(numer, denom).unwrap();
                let t = nu_threshold(&bias).unwrap();
                let q = bias.complement();
                // (1-p)^(m-1) >= p  exactly when  m <= nu; the left side is
                // monotone in m, so the boundary is enough.
                for m in [1, t.nu.saturating_sub(1).max(1), t.nu, t.nu + 1] {
                    let ge = num_traits::pow(q.clone(), m - 1) >= *bias.value();
                    assert_eq!(ge, m <= t.nu, "p={numer}/{denom} m={m}");
                }
            }
        }
    }

    #[test]
    fn twenty_card_example_game() {
        let order = [1, 2, 5, 10, 11, 19, 20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3];
        let record = play_game(&deck(&order), &Bias::half()).unwrap();
        assert_eq!(&record.guesses[..6], &[1, 2, 3, 6, 11, 12]);
        assert_eq!(&record.guesses[6..], &[20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3]);
        assert_eq!(record.totals, Totals { x: 17, l: 3, c: 14 });
    }

    #[test]
    fn small_hand_played_games() {
        let half = Bias::half();
        let r = play_game(&deck(&[2, 3, 1]), &half).unwrap();
        assert_eq!(r.guesses, vec![1, 3, 1]);
        assert_eq!(
            r.classifications,
            vec![Classification::Incorrect, Classification::CertifiedCorrect, Classification::CertifiedCorrect]
        );
        assert_eq!(r.totals, Totals { x: 2, l: 0, c: 2 });
        assert_eq!(play_game(&deck(&[1, 2]), &half).unwrap().totals, Totals { x: 2, l: 1, c: 1 });
        assert_eq!(play_game(&deck(&[1, 2, 3, 4]), &half).unwrap().totals, Totals { x: 4, l: 3, c: 1 });
        assert_eq!(play_game(&deck(&[4, 3, 2, 1]), &half).unwrap().totals, Totals { x: 3, l: 0, c: 3 });
    }

    #[test]
    fn biased_first_guess() {
        let state = GuesserState::new(4, Strategy::optimal(&Bias::ratio(3, 10).unwrap()).unwrap()).unwrap();
        assert_eq!(state.next_guess().unwrap(), 4);
        let state = GuesserState::new(4, Strategy::optimal(&Bias::half()).unwrap()).unwrap();
        assert_eq!(state.next_guess().unwrap(), 1);
        // nu = 4 at p = 3/10: an instance of 5 cards guesses its smallest label
        let state = GuesserState::new(5, Strategy::optimal(&Bias::ratio(3, 10).unwrap()).unwrap()).unwrap();
        assert_eq!(state.next_guess().unwrap(), 1);
    }

    #[test]
    fn two_cards_descending_after_two() {
        let mut state = GuesserState::new(2, Strategy::optimal(&Bias::half()).unwrap()).unwrap();
        assert_eq!(state.observe(2, 1).unwrap(), Classification::Incorrect);
        assert!(state.is_descending());
        assert_eq!(state.next_guess().unwrap(), 1);
        assert_eq!(state.observe(1, 1).unwrap(), Classification::CertifiedCorrect);
        assert!(state.next_guess().is_err());
    }

    #[test]
    fn observe_rejects_seen_and_impossible_labels() {
        let mut state = GuesserState::new(5, Strategy::optimal(&Bias::half()).unwrap()).unwrap();
        state.observe(2, 1).unwrap();
        assert!(state.observe(2, 2).is_err());
        assert!(state.observe(9, 2).is_err());
        // 1 must come after the descending run starts
        assert!(state.observe(1, 3).is_err());
    }

    #[test]
    fn identity_deck_scores_n() {
        for n in 1..=15 {
            for p in [Bias::half(), Bias::ratio(3, 4).unwrap(), Bias::ratio(1, 1).unwrap()] {
                assert_eq!(play_game(&ShuffledDeck::identity(n), &p).unwrap().totals.x, n);
            }
        }
    }

    #[test]
    fn deterministic_shuffle_certifies_everything() {
        let r = play_game(&ShuffledDeck::identity(5), &Bias::ratio(1, 1).unwrap()).unwrap();
        assert_eq!(r.totals, Totals { x: 5, l: 0, c: 5 });
    }

    #[test]
    fn fast_totals_match_traced_games() {
        for p in [Bias::half(), Bias::ratio(3, 10).unwrap(), Bias::ratio(1, 5).unwrap(), Bias::ratio(9, 10).unwrap()] {
            let strategy = Strategy::optimal(&p).unwrap();
            for n in 1..=11 {
                for idx in 0..1u64 << (n - 1) {
                    let d = deck_from_placements(n, &PlacementSequence::from_index(n, idx)).unwrap();
                    let record = play_game_with(&d, strategy).unwrap();
                    assert_eq!(play_totals(d.order(), &strategy), record.totals, "deck {:?}", d.order());
                }
            }
        }
    }

    #[test]
    fn descending_mode_never_misses() {
        for n in 1..=12 {
            for idx in 0..1u64 << (n - 1) {
                let d = deck_from_placements(n, &PlacementSequence::from_index(n, idx)).unwrap();
                let mut state = GuesserState::new(n, Strategy::optimal(&Bias::half()).unwrap()).unwrap();
                for &card in d.order() {
                    let before = state.is_descending();
                    let guess = state.next_guess().unwrap();
                    let class = state.observe(card, guess).unwrap();
                    if before {
                        assert_eq!(class, Classification::CertifiedCorrect);
                    }
                    assert!(!before || state.is_descending());
                }
            }
        }
    }
}
