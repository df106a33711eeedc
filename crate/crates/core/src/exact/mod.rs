//! Exact laws and moments of the number of correct guesses.

mod dp;
pub mod gf;
pub mod regime;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Bias, Scalar};
use crate::strategy::{Strategy, TieBreak};

pub use dp::{joint_law_table, total_law_table};

/// Law of `X_n`: `probs[k] = P{X_n = k}` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    n: usize,
    bias: Bias,
    probs: Vec<T>,
}

impl<T: Scalar> Pmf<T> {
    pub fn from_probs(n: usize, bias: Bias, mut probs: Vec<T>) -> Self {
        probs.resize(n + 1, T::zero());
        Pmf { n, bias, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn prob(&self, k: usize) -> T {
        self.probs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficients of the probability generating polynomial.
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Nonzero entries in increasing `k`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &T)> {
        self.probs.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }

    pub fn total(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn mean(&self) -> T {
        self.raw_moment(1)
    }

    pub fn variance(&self) -> T {
        let mean = self.mean();
        self.raw_moment(2) - mean.clone() * mean
    }

    pub fn moments(&self) -> MomentSummary<T> {
        MomentSummary { mean: self.mean(), variance: self.variance() }
    }

    fn raw_moment(&self, power: usize) -> T {
        self.probs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (k, x)| acc + T::from_count(k).powi(power) * x.clone())
    }

    /// `P{X_n <= k}` for `k = 0..=n`.
    pub fn cdf(&self) -> Vec<T> {
        let mut acc = T::zero();
        self.probs
            .iter()
            .map(|x| {
                acc = acc.clone() + x.clone();
                acc.clone()
            })
            .collect()
    }

    pub fn to_f64(&self) -> Pmf<f64> {
        Pmf { n: self.n, bias: self.bias.clone(), probs: self.probs.iter().map(Scalar::as_f64).collect() }
    }
}

/// Total variation distance between two laws on the integers, given as
/// dense probability vectors starting at 0.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|k| (get(a, k) - get(b, k)).abs()).sum::<f64>()
}

/// Law of `(L_n, C_n)`: `probs[l][c] = P{L_n = l, C_n = c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T> {
    n: usize,
    bias: Bias,
    probs: Vec<Vec<T>>,
}

impl<T: Scalar> JointPmf<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn prob(&self, l: usize, c: usize) -> T {
        self.probs.get(l).and_then(|r| r.get(c)).cloned().unwrap_or_else(T::zero)
    }

    /// Dense `(n+1) x (n+1)` table indexed `[l][c]`.
    pub fn probs(&self) -> &[Vec<T>] {
        &self.probs
    }

    /// Nonzero entries ordered by `(l, c)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        self.probs
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.iter().enumerate().map(move |(c, x)| ((l, c), x)))
            .filter(|(_, x)| !x.is_zero())
    }

    pub fn total(&self) -> T {
        self.entries().fold(T::zero(), |a, (_, x)| a + x.clone())
    }

    /// Law of `X_n = L_n + C_n`.
    pub fn total_law(&self) -> Pmf<T> {
        let mut probs = vec![T::zero(); self.n + 1];
        for ((l, c), x) in self.entries() {
            probs[l + c] = probs[l + c].clone() + x.clone();
        }
        Pmf { n: self.n, bias: self.bias.clone(), probs }
    }

    pub fn moments(&self) -> JointMoments<T> {
        let e = |f: &dyn Fn(usize, usize) -> usize| {
            self.entries().fold(T::zero(), |acc, ((l, c), x)| acc + T::from_count(f(l, c)) * x.clone())
        };
        let mean_l = e(&|l, _| l);
        let mean_c = e(&|_, c| c);
        let var_l = e(&|l, _| l * l) - mean_l.clone() * mean_l.clone();
        let var_c = e(&|_, c| c * c) - mean_c.clone() * mean_c.clone();
        let cov = e(&|l, c| l * c) - mean_l.clone() * mean_c.clone();
        let mean = mean_l.clone() + mean_c.clone();
        let two = T::from_count(2);
        let variance = var_l.clone() + var_c.clone() + two * cov.clone();
        JointMoments { total: MomentSummary { mean, variance }, mean_l, mean_c, var_l, var_c, cov }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary<T> {
    pub mean: T,
    pub variance: T,
}

/// Moments of the pair `(L_n, C_n)`; `total` describes `X_n = L_n + C_n`
/// and is assembled as `Var(L) + Var(C) + 2 Cov(L, C)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointMoments<T> {
    pub total: MomentSummary<T>,
    pub mean_l: T,
    pub mean_c: T,
    pub var_l: T,
    pub var_c: T,
    pub cov: T,
}

/// Exact law of `X_n` under the optimal strategy.
pub fn xn_pmf<T: Scalar>(n: usize, bias: &Bias) -> Result<Pmf<T>> {
    Ok(xn_pmf_table(n, bias)?.pop().expect("table is non-empty"))
}

/// Laws of `X_1, ..., X_n` from one pass of the recursion.
pub fn xn_pmf_table<T: Scalar>(n: usize, bias: &Bias) -> Result<Vec<Pmf<T>>> {
    xn_pmf_table_with(n, bias, TieBreak::default())
}

pub fn xn_pmf_table_with<T: Scalar>(n: usize, bias: &Bias, tie_break: TieBreak) -> Result<Vec<Pmf<T>>> {
    dp::checked_strategy(n, bias)?;
    let strategy = Strategy::with_tie_break(bias, tie_break)?;
    let table = total_law_table::<T>(n, bias, &strategy);
    Ok(table
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, probs)| Pmf { n: m, bias: bias.clone(), probs })
        .collect())
}

/// Exact joint law of pure-luck and certified correct guesses.
pub fn joint_pmf<T: Scalar>(n: usize, bias: &Bias) -> Result<JointPmf<T>> {
    Ok(joint_pmf_table(n, bias)?.pop().expect("table is non-empty"))
}

pub fn joint_pmf_table<T: Scalar>(n: usize, bias: &Bias) -> Result<Vec<JointPmf<T>>> {
    joint_pmf_table_with(n, bias, TieBreak::default())
}

pub fn joint_pmf_table_with<T: Scalar>(
    n: usize,
    bias: &Bias,
    tie_break: TieBreak,
) -> Result<Vec<JointPmf<T>>> {
    dp::checked_strategy(n, bias)?;
    let strategy = Strategy::with_tie_break(bias, tie_break)?;
    let table = joint_law_table::<T>(n, bias, &strategy);
    Ok(table
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, probs)| JointPmf { n: m, bias: bias.clone(), probs })
        .collect())
}

/// `E(X_n) = (1 - p + p^2) n + 3p - 1 - 2p^2`, valid for `n >= 2` and
/// `1/2 <= p < 1`.
pub fn closed_form_mean<T: Scalar>(n: usize, bias: &Bias) -> Result<T> {
    check_closed_form(n, 2, bias)?;
    let p: T = bias.get();
    let one = T::one();
    let (two, three) = (T::from_count(2), T::from_count(3));
    let p2 = p.clone() * p.clone();
    Ok((one.clone() - p.clone() + p2.clone()) * T::from_count(n) + three * p - one - two * p2)
}

/// `Var(X_n) = (1-p) p (3p^2 - 3p + 1) n + p (1-p) (10p - 8p^2 - 3)`,
/// valid for `n >= 3` and `1/2 <= p < 1`.
pub fn closed_form_variance<T: Scalar>(n: usize, bias: &Bias) -> Result<T> {
    check_closed_form(n, 3, bias)?;
    let p: T = bias.get();
    let q = T::one() - p.clone();
    let p2 = p.clone() * p.clone();
    let c = |k: usize| T::from_count(k);
    let slope = q.clone() * p.clone() * (c(3) * p2.clone() - c(3) * p.clone() + T::one());
    let intercept = p.clone() * q * (c(10) * p - c(8) * p2 - c(3));
    Ok(slope * c(n) + intercept)
}

pub fn closed_form_moments<T: Scalar>(n: usize, bias: &Bias) -> Result<MomentSummary<T>> {
    Ok(MomentSummary { mean: closed_form_mean(n, bias)?, variance: closed_form_variance(n, bias)? })
}

fn check_closed_form(n: usize, min_n: usize, bias: &Bias) -> Result<()> {
    if n < min_n {
        return Err(Error::Domain(format!("closed form needs n >= {min_n}, got {n}")));
    }
    if !bias.at_least_half() {
        return Err(Error::Domain(format!(
            "closed-form moments need p >= 1/2 (got {bias}); use the exact law instead"
        )));
    }
    Ok(())
}

/// Exact-backend aliases.
pub type ExactPmf = Pmf<BigRational>;
pub type ExactJointPmf = JointPmf<BigRational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type Q = BigRational;

    #[test]
    fn xn_examples() {
        let half = Bias::half();
        let law = xn_pmf::<Q>(2, &half).unwrap();
        assert_eq!(law.entries().map(|(k, x)| (k, x.clone())).collect::<Vec<_>>(), vec![(1, rat(1, 2)), (2, rat(1, 2))]);
        assert_eq!(law.variance(), rat(1, 4));
        let law = xn_pmf::<Q>(3, &half).unwrap();
        assert_eq!(law.probs(), &[rat(0, 1), rat(0, 1), rat(3, 4), rat(1, 4)]);
        assert_eq!(xn_pmf::<Q>(4, &half).unwrap().probs()[2..], [rat(1, 8), rat(3, 4), rat(1, 8)]);
        assert_eq!(xn_pmf::<Q>(1, &half).unwrap().variance(), rat(0, 1));
        assert!(xn_pmf::<Q>(0, &half).is_err());
    }

    #[test]
    fn deterministic_shuffle() {
        let one = Bias::ratio(1, 1).unwrap();
        let law = xn_pmf::<Q>(2, &one).unwrap();
        assert_eq!(law.entries().map(|(k, x)| (k, x.clone())).collect::<Vec<_>>(), vec![(2, rat(1, 1))]);
        let joint = joint_pmf::<Q>(5, &one).unwrap();
        assert_eq!(joint.prob(0, 5), rat(1, 1));
    }

    #[test]
    fn joint_examples() {
        let half = Bias::half();
        let j = joint_pmf::<Q>(2, &half).unwrap();
        assert_eq!(j.prob(1, 1), rat(1, 2));
        assert_eq!(j.prob(0, 1), rat(1, 2));
        let j = joint_pmf::<Q>(3, &half).unwrap();
        let entries: Vec<_> = j.entries().map(|(k, x)| (k, x.clone())).collect();
        assert_eq!(entries, vec![((0, 2), rat(1, 2)), ((1, 1), rat(1, 4)), ((2, 1), rat(1, 4))]);
        let one = joint_pmf::<Q>(1, &half).unwrap();
        assert_eq!(one.prob(0, 1), rat(1, 1));
    }

    #[test]
    fn symmetric_means_and_variances() {
        let table = xn_pmf_table::<Q>(60, &Bias::half()).unwrap();
        for law in &table[1..] {
            let n = law.n() as i64;
            assert_eq!(law.total(), rat(1, 1));
            assert_eq!(law.mean(), rat(3 * n, 4));
            if n >= 3 {
                assert_eq!(law.variance(), rat(n, 16));
            }
        }
    }

    #[test]
    fn refined_moments_small_n() {
        for law in joint_pmf_table::<Q>(30, &Bias::half()).unwrap().iter().skip(2) {
            let n = law.n() as i64;
            let m = law.moments();
            assert_eq!(m.mean_l, rat(n, 4));
            assert_eq!(m.mean_c, rat(n, 2));
            assert_eq!(m.var_l, rat(5 * n - 4, 16));
            assert_eq!(m.var_c, rat(n - 2, 4));
            assert_eq!(m.cov, rat(3 - 2 * n, 8));
            assert_eq!(m.total.variance, rat(n, 16));
        }
    }

    #[test]
    fn joint_marginal_is_total_law() {
        for bias in [Bias::half(), Bias::ratio(3, 10).unwrap(), Bias::ratio(1, 5).unwrap(), Bias::ratio(3, 4).unwrap()] {
            let totals = xn_pmf_table::<Q>(30, &bias).unwrap();
            let joints = joint_pmf_table::<Q>(30, &bias).unwrap();
            for (t, j) in totals.iter().zip(&joints) {
                assert_eq!(&j.total_law(), t);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let half = Bias::half();
        let m = closed_form_moments::<Q>(16, &half).unwrap();
        assert_eq!(m, MomentSummary { mean: rat(12, 1), variance: rat(1, 1) });
        let p = rat(3, 5);
        let m = closed_form_moments::<Q>(3, &Bias::new(p.clone()).unwrap()).unwrap();
        let p2 = p.clone() * p.clone();
        assert_eq!(m.mean, rat(2, 1) + p2.clone());
        assert_eq!(m.variance, p2.clone() * (rat(1, 1) - p2));
        assert_eq!(closed_form_mean::<Q>(2, &Bias::ratio(3, 4).unwrap()).unwrap(), rat(7, 4));
        assert!(closed_form_mean::<Q>(5, &Bias::ratio(3, 10).unwrap()).is_err());
        assert!(closed_form_variance::<Q>(2, &half).is_err());
    }

    #[test]
    fn tv_distance() {
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert_eq!(total_variation(&[1.0], &[0.0, 1.0]), 1.0);
    }
}
