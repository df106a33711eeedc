//! Seeded simulation and distributional diagnostics.
//!
//! Replication `i` of a run with seed `s` draws its deck from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`
//! (`set_stream(i)`), so every replication has its own reproducible
//! substream regardless of how replications are spread over threads.
//! Tallies are integers and are merged in block order, which makes the
//! summary bit-identical for a fixed configuration.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Discrete, Normal, Poisson};

use crate::error::{Error, Result};
use crate::exact::{total_variation, xn_pmf, Pmf};
use crate::exact::regime::PhaseTransitionParams;
use crate::scalar::Bias;
use crate::shuffle::{check_deck_size, shelf_shuffle_into};
use crate::strategy::{play_totals, Strategy};

/// Reference laws are computed by the float DP up to this size.
pub const REFERENCE_DP_CAP: usize = 20_000;

const BLOCK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub bias: Bias,
    pub replications: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl SimConfig {
    pub fn new(n: usize, bias: Bias, replications: u64, seed: u64) -> Self {
        SimConfig { n, bias, replications, seed, workers: 0 }
    }

    pub fn from_phase(params: &PhaseTransitionParams, replications: u64, seed: u64) -> Result<Self> {
        Ok(Self::new(params.n, params.bias()?, replications, seed))
    }

    fn validate(&self) -> Result<()> {
        check_deck_size(self.n)?;
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        Ok(())
    }
}

/// The random stream of one replication.
pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

#[derive(Debug, Clone, Default)]
struct Tally {
    counts: Vec<u64>,
    sum_l: u128,
    sum_c: u128,
    sum_ll: u128,
    sum_cc: u128,
    sum_lc: u128,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally { counts: vec![0; n + 1], ..Default::default() }
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.sum_l += other.sum_l;
        self.sum_c += other.sum_c;
        self.sum_ll += other.sum_ll;
        self.sum_cc += other.sum_cc;
        self.sum_lc += other.sum_lc;
    }
}

/// Deterministic part of a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub config: SimConfig,
    pub mean_x: f64,
    pub var_x: f64,
    pub mean_l: f64,
    pub var_l: f64,
    pub mean_c: f64,
    pub var_c: f64,
    pub cov_lc: f64,
    /// `counts[k]` games with `X = k`.
    pub counts: Vec<u64>,
    pub empirical_pmf: Vec<f64>,
    /// TV distance to the exact law of `X_n`, when it was computed.
    pub tv_to_exact: Option<f64>,
    /// Sup-distance between the empirical CDF of the standardized `X_n`
    /// and the standard normal CDF. Informational only.
    pub ks_normal: f64,
}

impl SimSummary {
    pub fn std_error_l(&self) -> f64 {
        (self.var_l / self.config.replications as f64).sqrt()
    }

    pub fn std_error_c(&self) -> f64 {
        (self.var_c / self.config.replications as f64).sqrt()
    }

    pub fn std_error_x(&self) -> f64 {
        (self.var_x / self.config.replications as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub elapsed_secs: f64,
    pub games_per_second: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRun {
    pub summary: SimSummary,
    pub throughput: Throughput,
    pub build: String,
}

/// Version plus git revision, when one was available at build time.
pub fn build_id() -> String {
    format!("{}+{}", env!("CARGO_PKG_VERSION"), option_env!("SHELF_GUESS_GIT_REV").unwrap_or("unknown"))
}

fn simulate_block(n: usize, p: f64, strategy: &Strategy, seed: u64, lo: u64, hi: u64) -> Tally {
    let mut tally = Tally::new(n);
    let mut deck = Vec::with_capacity(n);
    for i in lo..hi {
        let mut rng = replication_rng(seed, i);
        shelf_shuffle_into(n, p, &mut rng, &mut deck);
        let t = play_totals(&deck, strategy);
        tally.counts[t.x] += 1;
        let (l, c) = (t.l as u128, t.c as u128);
        tally.sum_l += l;
        tally.sum_c += c;
        tally.sum_ll += l * l;
        tally.sum_cc += c * c;
        tally.sum_lc += l * c;
    }
    tally
}

/// Plays `replications` independent games and summarises them.
pub fn simulate(config: &SimConfig) -> Result<SimRun> {
    config.validate()?;
    let n = config.n;
    let strategy = Strategy::optimal(&config.bias)?;
    let p = config.bias.to_f64();
    let blocks: Vec<(u64, u64)> = (0..config.replications)
        .step_by(BLOCK as usize)
        .map(|lo| (lo, (lo + BLOCK).min(config.replications)))
        .collect();

    let start = Instant::now();
    let run = || -> Vec<Tally> {
        blocks.par_iter().map(|&(lo, hi)| simulate_block(n, p, &strategy, config.seed, lo, hi)).collect()
    };
    let parts = if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(run)
    } else {
        run()
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut tally = Tally::new(n);
    for part in &parts {
        tally.merge(part);
    }

    let reference = if n <= REFERENCE_DP_CAP { Some(xn_pmf::<f64>(n, &config.bias)?) } else { None };
    let summary = summarise(config.clone(), &tally, reference.as_ref());
    Ok(SimRun {
        summary,
        throughput: Throughput { elapsed_secs: elapsed, games_per_second: config.replications as f64 / elapsed.max(1e-9) },
        build: build_id(),
    })
}

fn summarise(config: SimConfig, t: &Tally, reference: Option<&Pmf<f64>>) -> SimSummary {
    let reps = config.replications as f64;
    let sample_var = |sum: f64, sum_sq: f64| {
        if config.replications < 2 {
            0.0
        } else {
            (sum_sq - sum * sum / reps) / (reps - 1.0)
        }
    };
    let (sum_x, sum_xx) = t.counts.iter().enumerate().fold((0.0, 0.0), |(s, ss), (k, &c)| {
        let (k, c) = (k as f64, c as f64);
        (s + k * c, ss + k * k * c)
    });
    let (sum_l, sum_c) = (t.sum_l as f64, t.sum_c as f64);
    let cov_lc = if config.replications < 2 { 0.0 } else { (t.sum_lc as f64 - sum_l * sum_c / reps) / (reps - 1.0) };
    let empirical_pmf: Vec<f64> = t.counts.iter().map(|&c| c as f64 / reps).collect();

    let (mu, sigma) = match reference {
        Some(law) => (law.mean(), law.variance().sqrt()),
        None => (sum_x / reps, sample_var(sum_x, sum_xx).sqrt()),
    };
    let ks_normal = if sigma > 0.0 { normal_sup_distance(&empirical_pmf, mu, sigma) } else { 0.0 };
    SimSummary {
        mean_x: sum_x / reps,
        var_x: sample_var(sum_x, sum_xx),
        mean_l: sum_l / reps,
        var_l: sample_var(sum_l, t.sum_ll as f64),
        mean_c: sum_c / reps,
        var_c: sample_var(sum_c, t.sum_cc as f64),
        cov_lc,
        counts: t.counts.clone(),
        tv_to_exact: reference.map(|law| total_variation(&empirical_pmf, law.probs())),
        empirical_pmf,
        ks_normal,
        config,
    }
}

/// Standard normal CDF.
pub fn phi(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// `sup_x |P{(X - mu)/sigma <= x} - Phi(x)|` for an integer-valued law
/// given by `probs[k] = P{X = k}`. The supremum of a step function against
/// a continuous CDF is attained at an atom, from the left or the right.
pub fn normal_sup_distance(probs: &[f64], mu: f64, sigma: f64) -> f64 {
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (k, &x) in probs.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let f = phi((k as f64 - mu) / sigma);
        let above = below + x;
        worst = worst.max((below - f).abs()).max((above - f).abs());
        below = above;
    }
    worst
}

/// Sup-distance between the standardized exact law of `X_n` and the
/// normal CDF, using the float DP and the law's own mean and variance.
pub fn clt_distance(n: usize, bias: &Bias) -> Result<f64> {
    let law = xn_pmf::<f64>(n, bias)?;
    Ok(normal_sup_distance(law.probs(), law.mean(), law.variance().sqrt()))
}

/// Law of `Z_n = n - X_n` from the float DP.
pub fn deficit_law(n: usize, bias: &Bias) -> Result<Vec<f64>> {
    let law = xn_pmf::<f64>(n, bias)?;
    Ok(law.probs().iter().rev().copied().collect())
}

/// TV distance between a law on `0..` and Poisson(`lambda`), counting the
/// Poisson mass beyond the law's support.
pub fn tv_to_poisson(probs: &[f64], lambda: f64) -> Result<f64> {
    let pois = Poisson::new(lambda).map_err(|e| Error::Domain(e.to_string()))?;
    let reference: Vec<f64> = (0..probs.len()).map(|k| pois.pmf(k as u64)).collect();
    let tail = (1.0 - reference.iter().sum::<f64>()).max(0.0);
    Ok(total_variation(probs, &reference) + 0.5 * tail)
}

/// One row of a phase-transition sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub lambda: f64,
    pub alpha: f64,
    pub n: usize,
    pub p: f64,
    /// `P{X_n = n} = p^(n-1)`.
    pub identity_prob: f64,
    /// Limit of `P{X_n = n}` for the row's `alpha`.
    pub identity_limit: f64,
    pub deficit_mean: Option<f64>,
    pub deficit_variance: Option<f64>,
    /// TV distance of `n - X_n` to Poisson(`lambda`).
    pub tv_poisson: Option<f64>,
}

/// Evaluates `p = 1 - lambda/n^alpha` over a grid. The full law of
/// `n - X_n` is computed when `n <= dp_cap`.
pub fn phase_transition_sweep(lambda: f64, alphas: &[f64], ns: &[usize], dp_cap: usize) -> Result<Vec<PhaseRow>> {
    let mut rows = Vec::with_capacity(alphas.len() * ns.len());
    for &alpha in alphas {
        for &n in ns {
            let params = PhaseTransitionParams::new(lambda, alpha, n)?;
            let mut row = PhaseRow {
                lambda,
                alpha,
                n,
                p: params.p(),
                identity_prob: params.identity_prob(),
                identity_limit: params.identity_limit(),
                deficit_mean: None,
                deficit_variance: None,
                tv_poisson: None,
            };
            if n <= dp_cap {
                let z = deficit_law(n, &params.bias()?)?;
                let mean: f64 = z.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
                let second: f64 = z.iter().enumerate().map(|(k, x)| (k * k) as f64 * x).sum();
                row.deficit_mean = Some(mean);
                row.deficit_variance = Some(second - mean * mean);
                row.tv_poisson = Some(tv_to_poisson(&z, lambda)?);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}
