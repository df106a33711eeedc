//! Special regimes: the binomial law for small biased decks and the
//! behaviour of `P{X_n = n}` as `p -> 1`.

use serde::{Deserialize, Serialize};

use super::Pmf;
use crate::error::{Error, Result};
use crate::scalar::{Bias, Scalar};
use crate::shuffle::{check_deck_size, pascal};
use crate::strategy::nu_threshold;

/// Law of `1 + Bin(n-1, 1-p)`, which is the law of `X_n` whenever
/// `p < 1/2` and `n <= nu`: the guesser always bets on the largest label
/// of the live instance and scores on every bottom placement.
pub fn binomial_regime_pmf<T: Scalar>(n: usize, bias: &Bias) -> Result<Pmf<T>> {
    check_deck_size(n)?;
    let nu = nu_threshold(bias)?.nu;
    if n > nu {
        return Err(Error::Domain(format!("binomial regime needs n <= nu = {nu}, got n = {n}")));
    }
    Ok(shifted_binomial(n, bias))
}

/// `1 + Bin(n-1, 1-p)` without the regime check.
pub fn shifted_binomial<T: Scalar>(n: usize, bias: &Bias) -> Pmf<T> {
    let p: T = bias.get();
    let q = T::one() - p.clone();
    let row = &pascal::<T>(n - 1)[n - 1];
    let mut probs = vec![T::zero(); n + 1];
    for (k, c) in row.iter().enumerate() {
        probs[k + 1] = c.clone() * q.powi(k) * p.powi(n - 1 - k);
    }
    Pmf::from_probs(n, bias.clone(), probs)
}

/// `p^(n-1)`, the probability of the identity deck. For `p >= 1/2` this is
/// `P{X_n = n}`: only the identity deck is guessed perfectly.
pub fn identity_prob<T: Scalar>(n: usize, bias: &Bias) -> Result<T> {
    check_deck_size(n)?;
    Ok(bias.get::<T>().powi(n - 1))
}

/// `p = 1 - lambda / n^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseTransitionParams {
    pub lambda: f64,
    pub alpha: f64,
    pub n: usize,
}

impl PhaseTransitionParams {
    pub fn new(lambda: f64, alpha: f64, n: usize) -> Result<Self> {
        check_deck_size(n)?;
        if !(lambda > 0.0 && alpha > 0.0) {
            return Err(Error::Domain(format!("need lambda, alpha > 0, got {lambda}, {alpha}")));
        }
        let scale = (n as f64).powf(alpha);
        if lambda >= scale {
            return Err(Error::Domain(format!("lambda = {lambda} must be below n^alpha = {scale}")));
        }
        Ok(PhaseTransitionParams { lambda, alpha, n })
    }

    pub fn p(&self) -> f64 {
        1.0 - self.lambda / (self.n as f64).powf(self.alpha)
    }

    /// The bias as an exact rational (the binary value of `p`).
    pub fn bias(&self) -> Result<Bias> {
        Bias::from_f64(self.p())
    }

    /// `p^(n-1)`, evaluated as `exp((n-1) ln(1 - lambda/n^alpha))`.
    pub fn identity_prob(&self) -> f64 {
        let x = self.lambda / (self.n as f64).powf(self.alpha);
        ((self.n - 1) as f64 * (-x).ln_1p()).exp()
    }

    /// `lim P{X_n = n}` as `n -> infinity` with `lambda`, `alpha` fixed:
    /// 1 for `alpha > 1`, `e^-lambda` for `alpha = 1`, 0 for `alpha < 1`.
    pub fn identity_limit(&self) -> f64 {
        if self.alpha > 1.0 {
            1.0
        } else if self.alpha == 1.0 {
            (-self.lambda).exp()
        } else {
            0.0
        }
    }
}
