//! Laws of `X_n` and `(L_n, C_n)` by dynamic programming over instance
//! size.
//!
//! If the first revealed card of an `m`-card instance is its `J`-th
//! smallest label, the `J - 1` labels below it are certified later and the
//! labels above it form an independent `(m - J)`-card instance:
//!
//! ```text
//! X_m = X*_{m-J} + (J - 1) + [J = first guess]
//! ```
//!
//! With `P{J = i} = p q^(i-1)` (`i < m`) and `q^(m-1)` (`i = m`), the sum
//! over `i < m` obeys `B_m = p s_{m-1} + q v B_{m-1}` for the generating
//! polynomials `s_m`, which makes the table quadratic in `n` rather than
//! cubic.

use crate::error::Result;
use crate::scalar::{Bias, Scalar};
use crate::shuffle::check_deck_size;
use crate::strategy::{FirstGuess, Strategy};

/// `table[m][k] = P{X_m = k}` for `m = 0..=n_max`.
pub fn total_law_table<T: Scalar>(n_max: usize, bias: &Bias, strategy: &Strategy) -> Vec<Vec<T>> {
    let p: T = bias.get();
    let q = T::one() - p.clone();
    let mut table: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    table.push(vec![T::one()]);
    if n_max == 0 {
        return table;
    }
    table.push(vec![T::zero(), T::one()]);

    // B_m as a polynomial in v, degree <= m - 1.
    let mut b: Vec<T> = vec![T::zero()];
    let mut q_pow = T::one(); // q^(m-1)
    for m in 2..=n_max {
        q_pow = q_pow * q.clone();
        let prev = &table[m - 1];
        let mut next_b = vec![T::zero(); m];
        for (k, c) in prev.iter().enumerate() {
            next_b[k] = p.clone() * c.clone();
        }
        for (k, c) in b.iter().enumerate() {
            next_b[k + 1] = next_b[k + 1].clone() + q.clone() * c.clone();
        }
        b = next_b;

        let mut s = vec![T::zero(); m + 1];
        for (k, c) in b.iter().enumerate() {
            s[k] = c.clone();
        }
        match strategy.first_guess(m) {
            FirstGuess::Smallest => {
                // the J = 1 term gains a factor v
                for (k, c) in prev.iter().enumerate() {
                    let moved = p.clone() * c.clone();
                    s[k] = s[k].clone() - moved.clone();
                    s[k + 1] = s[k + 1].clone() + moved;
                }
                s[m - 1] = s[m - 1].clone() + q_pow.clone();
            }
            FirstGuess::Largest => {
                s[m] = s[m].clone() + q_pow.clone();
            }
        }
        table.push(s);
    }
    table
}

/// `table[m][l][c] = P{L_m = l, C_m = c}` for `m = 0..=n_max`.
///
/// Each slice `table[m]` is `(m+1) x (m+1)`.
pub fn joint_law_table<T: Scalar>(n_max: usize, bias: &Bias, strategy: &Strategy) -> Vec<Vec<Vec<T>>> {
    let p: T = bias.get();
    let q = T::one() - p.clone();
    let square = |m: usize| vec![vec![T::zero(); m + 1]; m + 1];
    let mut table: Vec<Vec<Vec<T>>> = Vec::with_capacity(n_max + 1);
    table.push(vec![vec![T::one()]]);
    if n_max == 0 {
        return table;
    }
    let mut one = square(1);
    one[0][1] = T::one();
    table.push(one);

    // The first guess of an instance is pure luck unless p = 1.
    let luck = !strategy.is_deterministic();
    let mut b: Vec<Vec<T>> = square(0);
    b[0][0] = T::zero();
    let mut q_pow = T::one();
    for m in 2..=n_max {
        q_pow = q_pow * q.clone();
        let prev = &table[m - 1];
        let mut next_b = square(m - 1);
        for (l, row) in prev.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if l + c < m {
                    next_b[l][c] = p.clone() * x.clone();
                }
            }
        }
        for (l, row) in b.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                next_b[l][c + 1] = next_b[l][c + 1].clone() + q.clone() * x.clone();
            }
        }
        b = next_b;

        let mut s = square(m);
        for (l, row) in b.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                s[l][c] = x.clone();
            }
        }
        match strategy.first_guess(m) {
            FirstGuess::Smallest => {
                for (l, row) in prev.iter().enumerate() {
                    for (c, x) in row.iter().enumerate() {
                        if l + c > m - 1 {
                            continue;
                        }
                        let moved = p.clone() * x.clone();
                        s[l][c] = s[l][c].clone() - moved.clone();
                        let (tl, tc) = if luck { (l + 1, c) } else { (l, c + 1) };
                        s[tl][tc] = s[tl][tc].clone() + moved;
                    }
                }
                s[0][m - 1] = s[0][m - 1].clone() + q_pow.clone();
            }
            FirstGuess::Largest => {
                s[1][m - 1] = s[1][m - 1].clone() + q_pow.clone();
            }
        }
        table.push(s);
    }
    table
}

pub(crate) fn checked_strategy(n: usize, bias: &Bias) -> Result<Strategy> {
    check_deck_size(n)?;
    Strategy::optimal(bias)
}
