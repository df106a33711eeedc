//! Power-series expansion of the closed-form generating functions
//! `S(z, v) = sum_n E(v^X_n) z^n` and `S(z, v, w) = sum_n E(v^L_n w^C_n) z^n`.
//!
//! Every generating function here is `N(z) / D(z)` with coefficients that
//! are polynomials in the marks `v`, `w` and a constant `D_0`, so the
//! coefficients follow from `D_0 q_n = N_n - sum_{k>=1} D_k q_{n-k}`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Bias, Scalar};

/// Dense polynomial in two marks, `coeffs[i][j]` multiplying `v^i w^j`.
/// Univariate polynomials use `j = 0` only.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2<T> {
    coeffs: Vec<Vec<T>>,
}

impl<T: Scalar> Poly2<T> {
    pub fn zero() -> Self {
        Poly2 { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: T, i: usize, j: usize) -> Self {
        let mut coeffs = vec![vec![T::zero(); j + 1]; i + 1];
        coeffs[i][j] = c;
        Poly2 { coeffs }.trimmed()
    }

    /// `v`
    pub fn v() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    /// `w`
    pub fn w() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    pub fn from_univariate(coeffs: &[T]) -> Self {
        Poly2 { coeffs: coeffs.iter().map(|c| vec![c.clone()]).collect() }.trimmed()
    }

    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.coeffs.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    /// Constant term, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<T> {
        let nonconst = self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, r)| r.iter().enumerate().any(|(j, c)| (i, j) != (0, 0) && !c.is_zero()));
        (!nonconst).then(|| self.coeff(0, 0))
    }

    /// Coefficients in `v` with `w` set to 1 (or of the univariate case).
    pub fn univariate(&self) -> Vec<T> {
        let mut out: Vec<T> =
            self.coeffs.iter().map(|r| r.iter().cloned().fold(T::zero(), |a, b| a + b)).collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Dense coefficient table, `[i][j]` for `v^i w^j`.
    pub fn coeffs(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    pub fn eval(&self, v: &T, w: &T) -> T {
        let mut acc = T::zero();
        let mut vp = T::one();
        for row in &self.coeffs {
            let mut wp = T::one();
            for c in row {
                acc = acc + c.clone() * vp.clone() * wp.clone();
                wp = wp * w.clone();
            }
            vp = vp * v.clone();
        }
        acc
    }

    pub fn scale(&self, k: &T) -> Self {
        Poly2 { coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c.clone() * k.clone()).collect()).collect() }
    }

    fn trimmed(mut self) -> Self {
        for row in &mut self.coeffs {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        while self.coeffs.last().is_some_and(|r| r.is_empty()) {
            self.coeffs.pop();
        }
        self
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let rows = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..rows)
            .map(|i| {
                let cols = self.coeffs.get(i).map_or(0, Vec::len).max(other.coeffs.get(i).map_or(0, Vec::len));
                (0..cols).map(|j| f(self.coeff(i, j), other.coeff(i, j))).collect()
            })
            .collect();
        Poly2 { coeffs }.trimmed()
    }
}

impl<T: Scalar> Add for &Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, rhs: Self) -> Poly2<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, rhs: Self) -> Poly2<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        self.scale(&(T::zero() - T::one()))
    }
}

impl<T: Scalar> Mul for &Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, rhs: Self) -> Poly2<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly2::zero();
        }
        let rows = self.coeffs.len() + rhs.coeffs.len() - 1;
        let cols = self.coeffs.iter().map(Vec::len).max().unwrap_or(0)
            + rhs.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![vec![T::zero(); cols.saturating_sub(1).max(1)]; rows];
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, a) in r1.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (i2, r2) in rhs.coeffs.iter().enumerate() {
                    for (j2, b) in r2.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let cell = &mut out[i1 + i2][j1 + j2];
                        *cell = cell.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Poly2 { coeffs: out }.trimmed()
    }
}

/// Coefficients `q_1, ..., q_{n_max}` of a generating function in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion<T> {
    /// `coeffs[n]` is `[z^n]`; index 0 is the constant term.
    coeffs: Vec<Poly2<T>>,
}

impl<T: Scalar> SeriesExpansion<T> {
    /// `[z^n]` of the series.
    pub fn coeff(&self, n: usize) -> &Poly2<T> {
        &self.coeffs[n]
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `q_n(1)` or `q_n(1, 1)`.
    pub fn value_at_one(&self, n: usize) -> T {
        self.coeffs[n].eval(&T::one(), &T::one())
    }
}

/// Expands `numerator(z) / denominator(z)` up to `z^n_max`; both are given
/// as coefficient lists in `z`, and `denominator[0]` must be a nonzero
/// constant.
pub fn expand_rational<T: Scalar>(
    numerator: &[Poly2<T>],
    denominator: &[Poly2<T>],
    n_max: usize,
) -> Result<SeriesExpansion<T>> {
    let d0 = denominator
        .first()
        .and_then(Poly2::as_constant)
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Domain("denominator must have a nonzero constant term in z".into()))?;
    let inv = T::one() / d0;
    let mut coeffs: Vec<Poly2<T>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = numerator.get(n).cloned().unwrap_or_else(Poly2::zero);
        for (k, d) in denominator.iter().enumerate().skip(1).take(n) {
            acc = &acc - &(d * &coeffs[n - k]);
        }
        coeffs.push(acc.scale(&inv));
    }
    Ok(SeriesExpansion { coeffs })
}

fn c<T: Scalar>(x: T) -> Poly2<T> {
    Poly2::constant(x)
}

fn k<T: Scalar>(n: i64) -> T {
    let t = T::from_count(n.unsigned_abs() as usize);
    if n < 0 {
        T::zero() - t
    } else {
        t
    }
}

fn check_ascending_regime(bias: &Bias) -> Result<()> {
    if bias.at_least_half() {
        Ok(())
    } else {
        Err(Error::Domain(format!("closed-form generating function needs p >= 1/2, got {bias}")))
    }
}

/// `S(z, v)` expanded to `z^n_max`.
///
/// At `p = 1/2` this is `2zv(2 + (1-v)z) / (4 - 4vz + (v^2 - v)z^2)`, and
/// otherwise `zv(1 + (v-1)(p-1)z) / (1 - zv - p v (v-1)(p-1) z^2)`.
pub fn gf_series_total<T: Scalar>(n_max: usize, bias: &Bias) -> Result<SeriesExpansion<T>> {
    check_ascending_regime(bias)?;
    let v = Poly2::<T>::v();
    let one = c(T::one());
    if bias.is_half() {
        // 2zv(2 + (1-v)z)  =  4v z + 2v(1-v) z^2
        let num = vec![Poly2::zero(), v.scale(&k(4)), &(&v - &(&v * &v)) * &c(k(2))];
        let v2_minus_v = &(&v * &v) - &v;
        let den = vec![c(k(4)), v.scale(&k(-4)), v2_minus_v];
        return expand_rational(&num, &den, n_max);
    }
    let p: T = bias.get();
    let pm1 = c(p.clone() - T::one());
    let vm1 = &v - &one;
    // zv(1 + (v-1)(p-1)z)
    let num = vec![Poly2::zero(), v.clone(), &(&v * &vm1) * &pm1];
    // 1 - zv - p v (v-1)(p-1) z^2
    let den = vec![one.clone(), -&v, -&(&(&v.scale(&p) * &vm1) * &pm1)];
    expand_rational(&num, &den, n_max)
}

/// `S(z, v, w)` at `p = 1/2`: `2zw(2 + (1-w)z) / (4 + w(v-1)z^2 - 2z(v+w))`,
/// with `v` marking pure-luck and `w` certified guesses.
pub fn gf_series_joint<T: Scalar>(n_max: usize) -> Result<SeriesExpansion<T>> {
    let (v, w) = (Poly2::<T>::v(), Poly2::<T>::w());
    let one = c(T::one());
    let num = vec![Poly2::zero(), w.scale(&k(4)), (&w - &(&w * &w)).scale(&k(2))];
    let den = vec![c(k(4)), (&v + &w).scale(&k(-2)), &w * &(&v - &one)];
    expand_rational(&num, &den, n_max)
}

/// Biased refinement of [`gf_series_joint`], for `1/2 <= p <= 1`:
///
/// ```text
/// S(z, v, w; p) = zw (1 + (1-p)(1-w) z) / (1 - (pv + (1-p)w) z + p(1-p) w (v-1) z^2)
/// ```
///
/// Obtained from the same first-card decomposition as the joint law; it
/// reduces to [`gf_series_joint`] at `p = 1/2` and to [`gf_series_total`]
/// on `v = w`.
pub fn gf_series_joint_biased<T: Scalar>(n_max: usize, bias: &Bias) -> Result<SeriesExpansion<T>> {
    check_ascending_regime(bias)?;
    let (v, w) = (Poly2::<T>::v(), Poly2::<T>::w());
    let one = c(T::one());
    let p: T = bias.get();
    let q = T::one() - p.clone();
    let num = vec![Poly2::zero(), w.clone(), (&w * &(&one - &w)).scale(&q)];
    let linear = -&(&v.scale(&p) + &w.scale(&q));
    let quadratic = (&w * &(&v - &one)).scale(&(p * q));
    let den = vec![one, linear, quadratic];
    expand_rational(&num, &den, n_max)
}

/// `T(z, v) = zv / (1 - z(p + (1-p)v))`: the generating function of
/// `1 + Bin(n-1, 1-p)`, which is the law of `X_n` for `n <= nu`.
pub fn gf_series_binomial<T: Scalar>(n_max: usize, bias: &Bias) -> Result<SeriesExpansion<T>> {
    let v = Poly2::<T>::v();
    let p: T = bias.get();
    let q = T::one() - p.clone();
    let num = vec![Poly2::zero(), v.clone()];
    let den = vec![c(T::one()), -&(&c(p) + &v.scale(&q))];
    expand_rational(&num, &den, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn first_coefficients() {
        let s = gf_series_total::<Q>(5, &Bias::half()).unwrap();
        assert!(s.coeff(0).is_zero());
        assert_eq!(s.coeff(1).univariate(), vec![rat(0, 1), rat(1, 1)]);
        assert_eq!(s.coeff(2).univariate(), vec![rat(0, 1), rat(1, 2), rat(1, 2)]);
        for n in 1..=5 {
            assert_eq!(s.value_at_one(n), rat(1, 1));
        }
    }

    #[test]
    fn asymmetric_form_at_half_matches_symmetric_form() {
        let sym = gf_series_total::<Q>(20, &Bias::half()).unwrap();
        // Perturb the bias path: the asymmetric branch evaluated at exactly 1/2.
        let p = Bias::half();
        let v = Poly2::<Q>::v();
        let pm1 = c(p.get::<Q>() - rat(1, 1));
        let vm1 = &v - &c(rat(1, 1));
        let num = vec![Poly2::zero(), v.clone(), &(&v * &vm1) * &pm1];
        let den = vec![c(rat(1, 1)), -&v, -&(&(&v.scale(&p.get()) * &vm1) * &pm1)];
        let asym = expand_rational(&num, &den, 20).unwrap();
        assert_eq!(sym, asym);
    }

    #[test]
    fn joint_first_coefficients() {
        let s = gf_series_joint::<Q>(4).unwrap();
        assert_eq!(s.coeff(1), &Poly2::w());
        let expected = &Poly2::w().scale(&rat(1, 2)) + &(&Poly2::v() * &Poly2::w()).scale(&rat(1, 2));
        assert_eq!(s.coeff(2), &expected);
        for n in 1..=4 {
            assert_eq!(s.value_at_one(n), rat(1, 1));
        }
    }

    #[test]
    fn biased_joint_reduces_to_symmetric() {
        let a = gf_series_joint::<Q>(15).unwrap();
        let b = gf_series_joint_biased::<Q>(15, &Bias::half()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_small_bias_and_bad_denominator() {
        assert!(gf_series_total::<Q>(3, &Bias::ratio(3, 10).unwrap()).is_err());
        let err = expand_rational::<Q>(&[Poly2::v()], &[Poly2::v()], 3);
        assert!(err.is_err());
    }

    #[test]
    fn poly_arithmetic() {
        let v = Poly2::<Q>::v();
        let w = Poly2::<Q>::w();
        let sq = &(&v + &w) * &(&v + &w);
        assert_eq!(sq.coeff(1, 1), rat(2, 1));
        assert_eq!(sq.coeff(2, 0), rat(1, 1));
        assert_eq!(sq.eval(&rat(1, 1), &rat(2, 1)), rat(9, 1));
        assert!((&sq - &sq).is_zero());
    }
}
