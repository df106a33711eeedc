//! Ground truth by brute force.
//!
//! Every one of the `2^(n-1)` placement sequences is built into a deck and
//! played with the strategy; exact weights `p^tops (1-p)^bottoms` are
//! attached at the end, so the only shared machinery with the DP is the
//! strategy itself.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{JointPmf, Pmf};
use crate::scalar::{render_rational, Bias, Scalar};
use crate::shuffle::{check_deck_size, deck_from_placements, PlacementSequence, PositionMatrix, ShuffledDeck};
use crate::strategy::{play_game_with, GuesserState, Strategy, TieBreak};

/// Default upper bound on `n` for exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// Largest `n` accepted by [`verify_strategy_optimality`].
pub const OPTIMALITY_CAP: usize = 9;

/// Exact laws obtained by enumerating every placement sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult {
    pub n: usize,
    pub bias: Bias,
    /// `P{L = l, C = c}`.
    pub joint: BTreeMap<(usize, usize), BigRational>,
    pub position_matrix: PositionMatrix<BigRational>,
    pub first_card: Vec<BigRational>,
    pub sequences: u64,
}

impl EnumerationResult {
    /// `P{X = k}`, as a dense law.
    pub fn total_law(&self) -> Pmf<BigRational> {
        let mut probs = vec![BigRational::zero(); self.n + 1];
        for (&(l, c), x) in &self.joint {
            probs[l + c] += x;
        }
        Pmf::from_probs(self.n, self.bias.clone(), probs)
    }

    pub fn total_mass(&self) -> BigRational {
        self.joint.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// Whether the enumerated joint law equals `law` entry for entry.
    pub fn joint_matches(&self, law: &JointPmf<BigRational>) -> bool {
        let ours: BTreeMap<_, _> = self.joint.iter().filter(|(_, x)| !x.is_zero()).collect();
        let theirs: BTreeMap<_, _> = law.entries().collect();
        ours.len() == theirs.len() && ours.iter().all(|(k, x)| theirs.get(k) == Some(x))
    }
}

/// Integer tallies for one weight class (number of top placements).
#[derive(Clone, Default)]
struct Tally {
    outcomes: BTreeMap<(usize, usize), u64>,
    positions: Vec<u64>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally { outcomes: BTreeMap::new(), positions: vec![0; n * n] }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.outcomes {
            *self.outcomes.entry(k).or_default() += v;
        }
        for (a, b) in self.positions.iter_mut().zip(other.positions) {
            *a += b;
        }
        self
    }
}

fn class_weights(n: usize, bias: &Bias) -> Vec<BigRational> {
    let p = bias.value().clone();
    let q = bias.complement();
    (0..n).map(|tops| p.powi(tops) * q.powi(n - 1 - tops)).collect()
}

/// Enumerates all placement sequences of an `n`-card deck (`n <= 20`).
pub fn enumerate_all(n: usize, bias: &Bias) -> Result<EnumerationResult> {
    enumerate_with(n, bias, ENUMERATION_CAP, TieBreak::default())
}

/// [`enumerate_all`] with an explicit cap and tie-breaking rule.
pub fn enumerate_with(n: usize, bias: &Bias, cap: usize, tie_break: TieBreak) -> Result<EnumerationResult> {
    check_deck_size(n)?;
    if n > cap {
        return Err(Error::Resource { n, cap });
    }
    let strategy = Strategy::with_tie_break(bias, tie_break)?;
    let count = 1u64 << (n - 1);
    // Contiguous index ranges, reduced left to right.
    let chunk = 1u64 << 10;
    let chunks: Vec<(u64, u64)> = (0..count).step_by(chunk as usize).map(|lo| (lo, (lo + chunk).min(count))).collect();
    let tallies: Vec<Vec<Tally>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut local = vec![Tally::new(n); n];
            for idx in lo..hi {
                let seq = PlacementSequence::from_index(n, idx);
                let deck = deck_from_placements(n, &seq).expect("length matches");
                let record = play_game_with(&deck, strategy).expect("valid deck");
                let t = &mut local[seq.top_count()];
                *t.outcomes.entry((record.totals.l, record.totals.c)).or_default() += 1;
                for (pos, &label) in deck.order().iter().enumerate() {
                    t.positions[(label - 1) * n + pos] += 1;
                }
            }
            local
        })
        .collect();
    let by_class = tallies.into_iter().fold(vec![Tally::new(n); n], |acc, part| {
        acc.into_iter().zip(part).map(|(a, b)| a.merge(b)).collect()
    });

    let weights = class_weights(n, bias);
    let mut joint: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    let mut matrix = vec![vec![BigRational::zero(); n]; n];
    for (tally, w) in by_class.iter().zip(&weights) {
        for (&key, &cnt) in &tally.outcomes {
            *joint.entry(key).or_insert_with(BigRational::zero) += w * BigRational::from_count(cnt as usize);
        }
        for (cell, &cnt) in tally.positions.iter().enumerate() {
            if cnt > 0 {
                matrix[cell / n][cell % n] += w * BigRational::from_count(cnt as usize);
            }
        }
    }
    let first_card = matrix.iter().map(|row| row[0].clone()).collect();
    Ok(EnumerationResult {
        n,
        bias: bias.clone(),
        joint,
        position_matrix: PositionMatrix::from_rows(matrix),
        first_card,
        sequences: count,
    })
}

/// Posterior law of the next card, as `(label, probability)` over the
/// unseen labels with positive probability.
pub type NextCardLaw = Vec<(usize, BigRational)>;

/// Law of the next revealed card given the cards revealed so far, computed
/// by enumeration and by the closed form; the two must agree.
pub fn conditional_next_card(n: usize, bias: &Bias, prefix: &[usize]) -> Result<NextCardLaw> {
    let enumerated = conditional_by_enumeration(n, bias, prefix)?;
    let closed = conditional_closed_form(n, bias, prefix)?;
    if enumerated != closed {
        return Err(Error::State(format!(
            "closed-form posterior {closed:?} disagrees with enumeration {enumerated:?} after {prefix:?}"
        )));
    }
    Ok(closed)
}

/// Posterior by filtering all decks on the revealed prefix.
pub fn conditional_by_enumeration(n: usize, bias: &Bias, prefix: &[usize]) -> Result<NextCardLaw> {
    check_deck_size(n)?;
    if n > ENUMERATION_CAP {
        return Err(Error::Resource { n, cap: ENUMERATION_CAP });
    }
    if prefix.len() >= n {
        return Err(Error::State("all cards have been revealed".into()));
    }
    let weights = class_weights(n, bias);
    let mut mass: BTreeMap<usize, BigRational> = BTreeMap::new();
    for idx in 0..1u64 << (n - 1) {
        let seq = PlacementSequence::from_index(n, idx);
        let deck = deck_from_placements(n, &seq)?;
        if deck.order().starts_with(prefix) {
            let w = &weights[seq.top_count()];
            if !w.is_zero() {
                *mass.entry(deck.order()[prefix.len()]).or_insert_with(BigRational::zero) += w;
            }
        }
    }
    let total = mass.values().fold(BigRational::zero(), |a, b| a + b);
    if total.is_zero() {
        return Err(Error::InconsistentPrefix(prefix.to_vec()));
    }
    Ok(mass.into_iter().map(|(label, m)| (label, m / &total)).collect())
}

/// Posterior in closed form.
///
/// Before `n-1` or `n` has shown up, the unresolved cards above the last
/// revealed label `s` form a fresh shuffle of `m = n - s` cards, so the
/// next card is `s + c` with probability `p (1-p)^(c-1)` (`c < m`) or `n`
/// with probability `(1-p)^(m-1)`. Afterwards the rest of the deck is the
/// unseen labels in decreasing order.
pub fn conditional_closed_form(n: usize, bias: &Bias, prefix: &[usize]) -> Result<NextCardLaw> {
    check_deck_size(n)?;
    if prefix.len() >= n {
        return Err(Error::State("all cards have been revealed".into()));
    }
    let inconsistent = || Error::InconsistentPrefix(prefix.to_vec());
    // A consistent prefix is an increasing run (ending at the latest in n)
    // followed by the largest unseen labels in decreasing order.
    let mut seen = vec![false; n + 1];
    let mut last = 0;
    let mut descending = false;
    for &label in prefix {
        if label == 0 || label > n || seen[label] {
            return Err(inconsistent());
        }
        if descending {
            let expected = (1..=n).rev().find(|&l| !seen[l]).expect("cards remain");
            if label != expected {
                return Err(inconsistent());
            }
        } else if label <= last {
            return Err(inconsistent());
        }
        seen[label] = true;
        last = label;
        if label + 1 >= n {
            descending = true;
        }
    }
    let p = bias.value().clone();
    let q = bias.complement();
    let law: NextCardLaw = if descending {
        let next = (1..=n).rev().find(|&l| !seen[l]).expect("cards remain");
        vec![(next, BigRational::one())]
    } else {
        let m = n - last;
        let mut law = Vec::with_capacity(m);
        let mut q_pow = BigRational::one();
        for c in 1..m {
            law.push((last + c, &p * &q_pow));
            q_pow *= &q;
        }
        law.push((n, q_pow));
        law.retain(|(_, x)| !x.is_zero());
        law
    };
    // Under p = 1 only the identity deck has mass.
    if bias.is_one() && !prefix.iter().enumerate().all(|(k, &l)| l == k + 1) {
        return Err(inconsistent());
    }
    Ok(law)
}

/// Outcome of [`verify_strategy_optimality`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub n: usize,
    pub p: String,
    pub prefixes_checked: usize,
    pub passed: bool,
    /// Prefixes where the strategy's guess was not a maximiser.
    pub failures: Vec<Vec<usize>>,
    /// Prefixes where the closed-form posterior differed from enumeration.
    pub posterior_mismatches: Vec<Vec<usize>>,
    /// Expected score of the strategy, summed step by step.
    pub expected_score: String,
    /// Sum over steps of the maximal next-card probability.
    pub stepwise_maximum: String,
    /// `E(X_n)` from the enumerated law.
    pub enumerated_mean: String,
    pub expected_score_f64: f64,
    /// Labels attaining the exact maximum before any card is shown.
    pub root_argmax: Vec<usize>,
    /// Labels within `1e-9` of the maximum before any card is shown.
    pub root_near_argmax: Vec<usize>,
}

impl OptimalityReport {
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("n = {}, p = {}", self.n, self.p),
            format!("prefixes checked: {}", self.prefixes_checked),
            format!("strategy guess is a maximiser at every prefix: {}", self.failures.is_empty()),
            format!("closed-form posterior matches enumeration: {}", self.posterior_mismatches.is_empty()),
            format!("expected score: {} (~{:.6})", self.expected_score, self.expected_score_f64),
            format!("sum of stepwise maxima: {}", self.stepwise_maximum),
            format!("enumerated E(X): {}", self.enumerated_mean),
            format!("root argmax: {:?}, near-ties: {:?}", self.root_argmax, self.root_near_argmax),
            format!("{}", if self.passed { "PASS" } else { "FAIL" }),
        ]
    }
}

/// Checks that the strategy maximises the next-card probability after
/// every reachable prefix.
///
/// Feedback reveals each card whatever the guess, so the information
/// available at each step does not depend on earlier guesses and maximising
/// step by step maximises the expected total. The report confirms this by
/// comparing the strategy's expected score with the sum of stepwise maxima
/// and with the enumerated mean of `X_n`.
pub fn verify_strategy_optimality(n: usize, bias: &Bias) -> Result<OptimalityReport> {
    check_deck_size(n)?;
    if n > OPTIMALITY_CAP {
        return Err(Error::Resource { n, cap: OPTIMALITY_CAP });
    }
    let strategy = Strategy::optimal(bias)?;
    let weights = class_weights(n, bias);
    // Reachable prefixes with their probabilities.
    let mut prefixes: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
    let mut decks: Vec<ShuffledDeck> = Vec::new();
    for idx in 0..1u64 << (n - 1) {
        let seq = PlacementSequence::from_index(n, idx);
        let w = &weights[seq.top_count()];
        if w.is_zero() {
            continue;
        }
        let deck = deck_from_placements(n, &seq)?;
        for len in 0..n {
            *prefixes.entry(deck.order()[..len].to_vec()).or_insert_with(BigRational::zero) += w;
        }
        decks.push(deck);
    }

    let mut expected = BigRational::zero();
    let mut stepwise = BigRational::zero();
    let mut failures = Vec::new();
    let mut mismatches = Vec::new();
    let (mut root_argmax, mut root_near) = (Vec::new(), Vec::new());
    for (prefix, weight) in &prefixes {
        let law = conditional_by_enumeration(n, bias, prefix)?;
        if conditional_closed_form(n, bias, prefix)? != law {
            mismatches.push(prefix.clone());
        }
        let mut state = GuesserState::new(n, strategy)?;
        for &card in prefix {
            let guess = state.next_guess()?;
            state.observe(card, guess)?;
        }
        let guess = state.next_guess()?;
        let best = law.iter().map(|(_, x)| x).max().cloned().unwrap_or_else(BigRational::zero);
        let hit = law.iter().find(|(l, _)| *l == guess).map(|(_, x)| x.clone()).unwrap_or_else(BigRational::zero);
        if hit != best {
            failures.push(prefix.clone());
        }
        expected += weight * &hit;
        stepwise += weight * &best;
        if prefix.is_empty() {
            root_argmax = law.iter().filter(|(_, x)| *x == best).map(|(l, _)| *l).collect();
            let best_f = best.as_f64();
            root_near = law.iter().filter(|(_, x)| (best_f - x.as_f64()).abs() <= 1e-9).map(|(l, _)| *l).collect();
        }
    }
    let enumerated = enumerate_all(n, bias)?.total_law().mean();
    let passed = failures.is_empty() && mismatches.is_empty() && expected == stepwise && expected == enumerated;
    Ok(OptimalityReport {
        n,
        p: bias.to_string(),
        prefixes_checked: prefixes.len(),
        passed,
        failures,
        posterior_mismatches: mismatches,
        expected_score: render_rational(&expected),
        stepwise_maximum: render_rational(&stepwise),
        enumerated_mean: render_rational(&enumerated),
        expected_score_f64: expected.as_f64(),
        root_argmax,
        root_near_argmax: root_near,
    })
}

/// The real root of `p = (1-p)^3`, where guessing 1 and guessing 4 tie at
/// the start of a 4-card game. Bisection to full double precision.
pub fn four_card_tie_bias() -> f64 {
    let f = |p: f64| p - (1.0 - p).powi(3);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
