//! The single-shelf shuffle.
//!
//! Cards are taken from the bottom of an ordered deck (card `n` first) and
//! placed on top of a growing pile with probability `p`, otherwise on its
//! bottom. Position 1 is the top of the finished pile, which is also the
//! first card drawn in the guessing game.

use std::collections::VecDeque;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Bias, Scalar};

pub(crate) fn check_deck_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidDeckSize(n))
    } else {
        Ok(())
    }
}

/// Top/bottom decisions for cards `n-1, n-2, ..., 1`, in that order.
///
/// Card `n` starts the pile and has no decision of its own.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlacementSequence(Vec<bool>);

impl PlacementSequence {
    pub fn new(flips: Vec<bool>) -> Self {
        PlacementSequence(flips)
    }

    /// The `index`-th sequence for a deck of `n` cards in the enumeration
    /// order used by the oracle: bit `k` of `index` is the flip of card
    /// `n-1-k`, set meaning "top".
    pub fn from_index(n: usize, index: u64) -> Self {
        let len = n.saturating_sub(1);
        PlacementSequence((0..len).map(|k| index >> k & 1 == 1).collect())
    }

    pub fn flips(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top_count(&self) -> usize {
        self.0.iter().filter(|&&t| t).count()
    }

    /// Flip assigned to card `label` (`1 <= label < n`).
    pub fn flip_of(&self, n: usize, label: usize) -> bool {
        self.0[n - 1 - label]
    }
}

/// A shuffled deck: `order[j-1]` is the label at position `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShuffledDeck(Vec<usize>);

impl ShuffledDeck {
    /// Accepts `order` only if it is an outcome of some shelf shuffle:
    /// increasing labels, then `n`, then decreasing labels.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        check_deck_size(n)?;
        let mut seen = vec![false; n + 1];
        for &label in &order {
            if label == 0 || label > n || seen[label] {
                return Err(Error::Domain(format!("{order:?} is not a permutation of 1..={n}")));
            }
            seen[label] = true;
        }
        let peak = order.iter().position(|&l| l == n).unwrap_or(0);
        let rising = order[..=peak].windows(2).all(|w| w[0] < w[1]);
        let falling = order[peak..].windows(2).all(|w| w[0] > w[1]);
        if !(rising && falling) {
            return Err(Error::Domain(format!(
                "{order:?} cannot be produced by a single shelf shuffle"
            )));
        }
        Ok(ShuffledDeck(order))
    }

    pub fn identity(n: usize) -> Self {
        ShuffledDeck((1..=n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Label at 1-based position `j`.
    pub fn label_at(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &l)| l == k + 1)
    }

    /// Recovers the placement sequence; the inverse of [`deck_from_placements`].
    pub fn placements(&self) -> PlacementSequence {
        let n = self.len();
        let peak = self.0.iter().position(|&l| l == n).expect("deck contains n");
        let mut flips = vec![false; n - 1];
        for &label in &self.0[..peak] {
            flips[n - 1 - label] = true;
        }
        PlacementSequence(flips)
    }
}

/// Builds the pile from a placement sequence.
pub fn deck_from_placements(n: usize, seq: &PlacementSequence) -> Result<ShuffledDeck> {
    check_deck_size(n)?;
    if seq.len() != n - 1 {
        return Err(Error::LengthMismatch { expected: n - 1, found: seq.len() });
    }
    let mut pile = VecDeque::with_capacity(n);
    pile.push_back(n);
    for (label, &top) in (1..n).rev().zip(seq.flips()) {
        if top {
            pile.push_front(label);
        } else {
            pile.push_back(label);
        }
    }
    Ok(ShuffledDeck(pile.into()))
}

/// Draws a shuffled deck: `n - 1` independent flips, each "top" with
/// probability `p`.
pub fn shelf_shuffle<R: Rng + ?Sized>(n: usize, bias: &Bias, rng: &mut R) -> Result<ShuffledDeck> {
    check_deck_size(n)?;
    let p = bias.to_f64();
    let flips = (1..n).map(|_| rng.random_bool(p)).collect();
    deck_from_placements(n, &PlacementSequence(flips))
}

/// Same law as [`shelf_shuffle`], writing into a reusable buffer without
/// simulating the pile. Used by the simulation hot loop.
pub(crate) fn shelf_shuffle_into<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R, out: &mut Vec<usize>) {
    out.clear();
    out.resize(n, 0);
    // Top-placed labels appear in increasing order from position 1;
    // bottom-placed labels fill the deck upwards from the last position.
    let (mut head, mut tail) = (0, n);
    for label in (1..n).rev() {
        if rng.random_bool(p) {
            out[head] = label;
            head += 1;
        } else {
            tail -= 1;
            out[tail] = label;
        }
    }
    // Top labels were written largest-first.
    out[..head].reverse();
    out[head] = n;
    // Bottom labels were written largest-last from the end; they must read
    // decreasing after n.
    out[head + 1..].reverse();
}

/// `m[i][j] = P{card i lands at position j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionMatrix<T> {
    n: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> PositionMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        PositionMatrix { n: rows.len(), rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry for card `i` at position `j`, both 1-based.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.rows.iter().map(|r| r.iter().cloned().fold(T::zero(), |a, b| a + b)).collect()
    }

    pub fn column_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).fold(T::zero(), |a, b| a + b))
            .collect()
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        let one = T::one();
        self.row_sums().iter().chain(self.column_sums().iter()).all(|s| *s == one)
    }

    /// `m[i][n-j+1] == m[i][j]` everywhere.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.rows.iter().all(|r| r.iter().eq(r.iter().rev()))
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows.iter().map(|r| r[j - 1].clone()).collect()
    }
}

/// Pascal's triangle up to row `n` in the scalar type.
pub(crate) fn pascal<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![T::one(); r + 1];
        for k in 1..r {
            row[k] = rows[r - 1][k - 1].clone() + rows[r - 1][k].clone();
        }
        rows.push(row);
    }
    rows
}

fn binom<T: Scalar>(table: &[Vec<T>], n: isize, k: isize) -> Option<T> {
    if n < 0 || k < 0 || k > n {
        None
    } else {
        Some(table[n as usize][k as usize].clone())
    }
}

/// Exact position matrix of the (biased) single-shelf shuffle.
///
/// For `i < n`, card `i` either goes on top with `j - 1` of the `i - 1`
/// smaller cards above it, or to the bottom with `n - j` of them below it;
/// card `n` sits below exactly the top-placed cards.
pub fn position_matrix<T: Scalar>(n: usize, bias: &Bias) -> Result<PositionMatrix<T>> {
    check_deck_size(n)?;
    let p: T = bias.get();
    let q: T = T::from_rational(&bias.complement());
    let table = pascal::<T>(n);
    let p_pow: Vec<T> = (0..=n).map(|k| p.powi(k)).collect();
    let q_pow: Vec<T> = (0..=n).map(|k| q.powi(k)).collect();
    let (ni, mut rows) = (n as isize, Vec::with_capacity(n));
    for i in 1..=ni {
        let mut row = Vec::with_capacity(n);
        for j in 1..=ni {
            let mut m = T::zero();
            if i == ni {
                if let Some(c) = binom(&table, ni - 1, j - 1) {
                    m = c * p_pow[(j - 1) as usize].clone() * q_pow[(ni - j) as usize].clone();
                }
            } else {
                if let Some(c) = binom(&table, i - 1, j - 1) {
                    m = m + c * p_pow[j as usize].clone() * q_pow[(i - j) as usize].clone();
                }
                if let Some(c) = binom(&table, i - 1, ni - j) {
                    let p_exp = i - 1 - (ni - j);
                    m = m + c * p_pow[p_exp as usize].clone() * q_pow[(ni - j + 1) as usize].clone();
                }
            }
            row.push(m);
        }
        rows.push(row);
    }
    Ok(PositionMatrix { n, rows })
}

/// Law of the label on top of the shuffled deck.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstCardLaw<T> {
    probs: Vec<T>,
}

impl<T: Scalar> FirstCardLaw<T> {
    /// Probability that the top card is `label` (1-based).
    pub fn prob(&self, label: usize) -> &T {
        &self.probs[label - 1]
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }
}

/// `P{top = i} = p (1-p)^(i-1)` for `i < n`, and `(1-p)^(n-1)` for `i = n`.
pub fn first_card_law<T: Scalar>(n: usize, bias: &Bias) -> Result<FirstCardLaw<T>> {
    check_deck_size(n)?;
    Ok(FirstCardLaw { probs: first_card_probs(n, &bias.get(), &T::from_rational(&bias.complement())) })
}

pub(crate) fn first_card_probs<T: Scalar>(n: usize, p: &T, q: &T) -> Vec<T> {
    let mut probs = Vec::with_capacity(n);
    let mut q_pow = T::one();
    for _ in 1..n {
        probs.push(p.clone() * q_pow.clone());
        q_pow = q_pow * q.clone();
    }
    probs.push(q_pow);
    probs
}

/// Convenience alias for the exact backend.
pub type ExactPositionMatrix = PositionMatrix<BigRational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn deck(n: usize, flips: &[bool]) -> Vec<usize> {
        deck_from_placements(n, &PlacementSequence::new(flips.to_vec())).unwrap().order().to_vec()
    }

    #[test]
    fn hand_simulated_piles() {
        assert_eq!(deck(1, &[]), vec![1]);
        assert_eq!(deck(3, &[true, true]), vec![1, 2, 3]);
        assert_eq!(deck(3, &[true, false]), vec![2, 3, 1]);
        assert_eq!(deck(4, &[true, false, true]), vec![1, 3, 4, 2]);
        assert_eq!(deck(2, &[true]), vec![1, 2]);
        assert_eq!(deck(2, &[false]), vec![2, 1]);
        assert_eq!(deck(5, &[true; 4]), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let err = deck_from_placements(3, &PlacementSequence::new(vec![true])).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { expected: 2, found: 1 });
        assert!(deck_from_placements(0, &PlacementSequence::new(vec![])).is_err());
    }

    #[test]
    fn placements_invert_the_pile() {
        for n in 1..=9 {
            for idx in 0..1u64 << (n - 1) {
                let seq = PlacementSequence::from_index(n, idx);
                let d = deck_from_placements(n, &seq).unwrap();
                assert_eq!(d.placements(), seq);
                assert!(ShuffledDeck::from_order(d.order().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn from_order_rejects_non_shelf_orders() {
        assert!(ShuffledDeck::from_order(vec![2, 1, 3]).is_err());
        assert!(ShuffledDeck::from_order(vec![1, 1, 3]).is_err());
        assert!(ShuffledDeck::from_order(vec![]).is_err());
        assert!(ShuffledDeck::from_order(vec![1, 3, 4, 2]).is_ok());
    }

    #[test]
    fn fast_shuffle_matches_pile_simulation() {
        // Same rng consumption order as shelf_shuffle: one flip per card n-1..1.
        for n in 1..=12 {
            let mut a = ChaCha8Rng::seed_from_u64(n as u64);
            let mut b = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..50 {
                let slow = shelf_shuffle(n, &Bias::ratio(3, 10).unwrap(), &mut a).unwrap();
                let mut fast = Vec::new();
                shelf_shuffle_into(n, 0.3, &mut b, &mut fast);
                assert_eq!(slow.order(), &fast[..]);
            }
        }
    }

    #[test]
    fn seeded_shuffle_is_reproducible() {
        let bias = Bias::half();
        let a = shelf_shuffle(30, &bias, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = shelf_shuffle(30, &bias, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let one = shelf_shuffle(1, &bias, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(one.order(), &[1]);
        let certain = shelf_shuffle(7, &Bias::ratio(1, 1).unwrap(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(certain.is_identity());
    }

    #[test]
    fn symmetric_row_of_card_two() {
        let m = position_matrix::<BigRational>(3, &Bias::half()).unwrap();
        assert_eq!(m.rows()[1], vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn symmetric_closed_form() {
        // (C(i-1, j-1) + C(i-1, n-j)) / 2^i
        let n = 9;
        let m = position_matrix::<BigRational>(n, &Bias::half()).unwrap();
        let table = pascal::<BigRational>(n);
        for i in 1..=n as isize {
            for j in 1..=n as isize {
                let c = binom(&table, i - 1, j - 1).unwrap_or_else(BigRational::zero)
                    + binom(&table, i - 1, n as isize - j).unwrap_or_else(BigRational::zero);
                let expected = c / num_traits::pow(rat(2, 1), i as usize);
                assert_eq!(m.get(i as usize, j as usize), &expected, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn mirror_symmetry_only_at_half() {
        assert!(position_matrix::<BigRational>(7, &Bias::half()).unwrap().is_mirror_symmetric());
        let m = position_matrix::<BigRational>(2, &Bias::ratio(3, 10).unwrap()).unwrap();
        assert!(!m.is_mirror_symmetric());
        assert_eq!(m.get(1, 1), &rat(3, 10));
        assert_eq!(m.get(1, 2), &rat(7, 10));
    }

    #[test]
    fn zero_pattern() {
        for n in 1..=10usize {
            for p in [rat(1, 2), rat(3, 10)] {
                let m = position_matrix::<BigRational>(n, &Bias::new(p).unwrap()).unwrap();
                for i in 1..=n {
                    for j in 1..=n {
                        let zero = i < j && j + i <= n;
                        assert_eq!(m.get(i, j).is_zero(), zero, "n={n} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn first_card_examples() {
        let law = first_card_law::<BigRational>(3, &Bias::half()).unwrap();
        assert_eq!(law.probs(), &[rat(1, 2), rat(1, 4), rat(1, 4)]);
        let law = first_card_law::<BigRational>(4, &Bias::ratio(3, 10).unwrap()).unwrap();
        assert_eq!(law.probs(), &[rat(3, 10), rat(21, 100), rat(147, 1000), rat(343, 1000)]);
        let total = law.probs().iter().cloned().fold(BigRational::zero(), |a, b| a + b);
        assert!(total.is_one());
        let law = first_card_law::<BigRational>(1, &Bias::ratio(1, 3).unwrap()).unwrap();
        assert_eq!(law.probs(), &[rat(1, 1)]);
    }

    #[test]
    fn first_card_law_is_first_column() {
        for n in 1..=12 {
            for p in [rat(1, 2), rat(3, 10), rat(9, 10), rat(1, 1)] {
                let bias = Bias::new(p).unwrap();
                let m = position_matrix::<BigRational>(n, &bias).unwrap();
                let law = first_card_law::<BigRational>(n, &bias).unwrap();
                assert_eq!(m.column(1), law.probs());
            }
        }
    }

    #[test]
    fn float_backend_agrees() {
        let bias = Bias::ratio(3, 4).unwrap();
        let exact = position_matrix::<BigRational>(20, &bias).unwrap();
        let float = position_matrix::<f64>(20, &bias).unwrap();
        for (re, rf) in exact.rows().iter().zip(float.rows()) {
            for (e, f) in re.iter().zip(rf) {
                assert!((e.as_f64() - f).abs() < 1e-14);
            }
        }
    }
}
