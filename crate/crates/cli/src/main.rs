//! `shelf-guess`: exact laws, simulations and checks for the shelf-shuffle
//! guessing game, plus the HTTP game server.

use std::net::SocketAddr;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use shelf_guess::checks::{catalogue, run_check};
use shelf_guess::document::{pmf_map, JointDocument, MatrixDocument, Prob};
use shelf_guess::exact::gf::{gf_series_joint, gf_series_joint_biased, gf_series_total};
use shelf_guess::exact::{closed_form_moments, joint_pmf, joint_pmf_table, xn_pmf, xn_pmf_table};
use shelf_guess::montecarlo::{clt_distance, phase_transition_sweep, simulate, SimConfig};
use shelf_guess::oracle::{enumerate_all, verify_strategy_optimality};
use shelf_guess::{first_card_law, play_game, position_matrix, shelf_shuffle, Backend, Bias, Scalar, ShuffledDeck};

mod output;

use output::{print_json, Format, Table};

#[derive(Parser)]
#[command(name = "shelf-guess", version, about = "Exact laws, simulations and a game server for guessing shelf-shuffled cards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Law of the number of correct guesses X_n
    Pmf(LawArgs),
    /// Joint law of (L_n, C_n): pure-luck and certified correct guesses
    Joint(LawArgs),
    /// Mean and variance of X_n, with the closed forms where they apply
    Moments {
        #[command(flatten)]
        law: LawArgs,
        /// Also report the moments of L_n and C_n (cubic cost)
        #[arg(long)]
        refined: bool,
    },
    /// P{card i lands at position j}
    PositionMatrix(LawArgs),
    /// Law of the top card
    FirstCard(LawArgs),
    /// Auto-play the optimal strategy against a seeded (or given) deck
    Play {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_p)]
        p: PArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated deck, top card first; overrides --n and --seed
        #[arg(long, value_delimiter = ',')]
        deck: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Monte Carlo estimate of the laws of X_n, L_n and C_n
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_p)]
        p: PArg,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads (0 = all cores); results do not depend on it
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Kolmogorov distance between the standardized X_n and the normal law
    Clt {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_p)]
        p: PArg,
    },
    /// Compare the DP laws with brute-force enumeration
    OracleCheck {
        #[arg(long)]
        n: Option<usize>,
        /// Check every n from 1 to this value
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value = "1/2", value_parser = parse_p)]
        p: PArg,
    },
    /// Compare generating-function coefficients with the DP laws
    GfCheck {
        #[arg(long, default_value_t = 40)]
        nmax: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_p)]
        p: PArg,
    },
    /// P{X_n = n} and the law of n - X_n along p = 1 - lambda / n^alpha
    PhaseSweep {
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 1.5])]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [100, 1000, 5000])]
        n: Vec<usize>,
        /// Largest n for which the deficit law is computed by DP
        #[arg(long, default_value_t = 5000)]
        dp_cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Verify that the strategy maximises the next-card probability everywhere
    OptimalityCheck {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_p)]
        p: PArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Discrepancies with the reference analysis, with live evidence
    Errata {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run acceptance checks by id (all when none given)
    #[command(alias = "acceptance")]
    Check {
        ids: Vec<u8>,
        /// List the checks without running them
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Serve the HTTP game API
    Serve {
        #[arg(long, env = "SHELF_GUESS_BIND", default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Session lifetime in seconds
        #[arg(long, env = "SHELF_GUESS_SESSION_TTL", default_value_t = 3600)]
        ttl_secs: u64,
        /// Origin allowed by CORS (any when unset)
        #[arg(long, env = "SHELF_GUESS_CORS_ORIGIN")]
        cors_origin: Option<String>,
    },
}

#[derive(Args)]
struct LawArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "1/2", value_parser = parse_p)]
    p: PArg,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

/// A bias together with the text it was given as.
#[derive(Clone, Debug)]
struct PArg {
    bias: Bias,
    text: String,
}

fn parse_p(s: &str) -> Result<PArg, String> {
    let bias = Bias::parse(s).map_err(|e| e.to_string())?;
    Ok(PArg { bias, text: s.trim().to_string() })
}

impl LawArgs {
    /// Rational input stays exact; a decimal stays exact only when it is
    /// a binary float exactly, otherwise the float backend is used.
    fn backend(&self) -> Backend {
        match self.backend {
            Some(BackendArg::Exact) => Backend::Exact,
            Some(BackendArg::Float) => Backend::Float,
            None => {
                let decimal = !self.p.text.contains('/');
                let binary_exact = self
                    .p
                    .text
                    .parse::<f64>()
                    .ok()
                    .and_then(BigRational::from_float)
                    .is_some_and(|r| &r == self.p.bias.value());
                if decimal && !binary_exact {
                    eprintln!("note: p = {} is not a binary float; using the float backend (--backend exact overrides)", self.p.text);
                    Backend::Float
                } else {
                    Backend::Exact
                }
            }
        }
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.n == 0 {
            bail!("--n must be at least 1");
        }
        Ok(())
    }
}

fn prob_cells<T: Scalar>(x: &T) -> Vec<String> {
    vec![x.render(), format!("{:.10}", x.as_f64())]
}

fn pmf_cmd<T: Scalar>(a: &LawArgs) -> anyhow::Result<()> {
    let law = xn_pmf::<T>(a.n, &a.p.bias)?;
    if a.format == Format::Json {
        return print_json(&pmf_map(&law));
    }
    let mut t = Table::new(["k", "prob", "approx"]);
    for (k, x) in law.entries() {
        t.push([vec![k.to_string()], prob_cells(x)].concat());
    }
    t.print(a.format)
}

fn joint_cmd<T: Scalar>(a: &LawArgs) -> anyhow::Result<()> {
    let law = joint_pmf::<T>(a.n, &a.p.bias)?;
    if a.format == Format::Json {
        return print_json(&JointDocument::from_joint(&law));
    }
    let mut t = Table::new(["l", "c", "prob", "approx"]);
    for ((l, c), x) in law.entries() {
        t.push([vec![l.to_string(), c.to_string()], prob_cells(x)].concat());
    }
    t.print(a.format)
}

fn moments_cmd<T: Scalar>(a: &LawArgs, refined: bool) -> anyhow::Result<()> {
    let bias = &a.p.bias;
    let mut rows: Vec<(&str, T)> = Vec::new();
    if refined {
        let m = joint_pmf::<T>(a.n, bias)?.moments();
        rows.extend([
            ("mean", m.total.mean),
            ("variance", m.total.variance),
            ("mean_l", m.mean_l),
            ("mean_c", m.mean_c),
            ("var_l", m.var_l),
            ("var_c", m.var_c),
            ("cov_lc", m.cov),
        ]);
    } else {
        let m = xn_pmf::<T>(a.n, bias)?.moments();
        rows.extend([("mean", m.mean), ("variance", m.variance)]);
    }
    if let Ok(closed) = closed_form_moments::<T>(a.n, bias) {
        rows.extend([("closed_form_mean", closed.mean), ("closed_form_variance", closed.variance)]);
    }
    if a.format == Format::Json {
        let mut doc = serde_json::Map::new();
        doc.insert("n".into(), json!(a.n));
        doc.insert("p".into(), json!(bias));
        doc.insert("backend".into(), json!(T::BACKEND));
        for (name, x) in &rows {
            doc.insert((*name).into(), serde_json::to_value(Prob::of(x))?);
        }
        return print_json(&doc);
    }
    let mut t = Table::new(["quantity", "value", "approx"]);
    for (name, x) in &rows {
        t.push([vec![name.to_string()], prob_cells(x)].concat());
    }
    t.print(a.format)
}

fn matrix_cmd<T: Scalar>(a: &LawArgs) -> anyhow::Result<()> {
    let m = position_matrix::<T>(a.n, &a.p.bias)?;
    if a.format == Format::Json {
        return print_json(&MatrixDocument::from_matrix(&m, &a.p.bias));
    }
    let mut t = Table::new(std::iter::once("card".to_string()).chain((1..=a.n).map(|j| format!("pos{j}"))));
    for (i, row) in m.rows().iter().enumerate() {
        t.push(std::iter::once((i + 1).to_string()).chain(row.iter().map(Scalar::render)).collect());
    }
    t.print(a.format)
}

fn first_card_cmd<T: Scalar>(a: &LawArgs) -> anyhow::Result<()> {
    let law = first_card_law::<T>(a.n, &a.p.bias)?;
    if a.format == Format::Json {
        let map: serde_json::Map<_, _> = law
            .probs()
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| Ok(((i + 1).to_string(), serde_json::to_value(Prob::of(x))?)))
            .collect::<anyhow::Result<_>>()?;
        return print_json(&map);
    }
    let mut t = Table::new(["label", "prob", "approx"]);
    for (i, x) in law.probs().iter().enumerate() {
        t.push([vec![(i + 1).to_string()], prob_cells(x)].concat());
    }
    t.print(a.format)
}

macro_rules! with_backend {
    ($args:expr, $f:ident $(, $extra:expr)*) => {{
        let a = $args;
        a.validate()?;
        match a.backend() {
            Backend::Exact => $f::<BigRational>(a $(, $extra)*),
            Backend::Float => $f::<f64>(a $(, $extra)*),
        }
    }};
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs a subcommand; `Ok(false)` means a check ran and failed.
fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Pmf(a) => with_backend!(&a, pmf_cmd)?,
        Command::Joint(a) => with_backend!(&a, joint_cmd)?,
        Command::Moments { law, refined } => with_backend!(&law, moments_cmd, refined)?,
        Command::PositionMatrix(a) => with_backend!(&a, matrix_cmd)?,
        Command::FirstCard(a) => with_backend!(&a, first_card_cmd)?,
        Command::Play { n, p, seed, deck, format } => {
            let deck = match deck {
                Some(order) => ShuffledDeck::from_order(order)?,
                None => shelf_shuffle(n, &p.bias, &mut ChaCha8Rng::seed_from_u64(seed))?,
            };
            let record = play_game(&deck, &p.bias)?;
            if format == Format::Json {
                print_json(&record)?;
            } else {
                let mut t = Table::new(["step", "guess", "shown", "result"]);
                for (k, ((g, s), c)) in record.guesses.iter().zip(&record.shown).zip(&record.classifications).enumerate() {
                    t.push(vec![(k + 1).to_string(), g.to_string(), s.to_string(), serde_json::to_value(c)?.as_str().unwrap_or_default().to_string()]);
                }
                t.print(format)?;
                let totals = record.totals;
                if format == Format::Table {
                    println!("X = {}, L = {}, C = {}", totals.x, totals.l, totals.c);
                }
            }
        }
        Command::Simulate { n, p, reps, seed, workers, format } => {
            let mut config = SimConfig::new(n, p.bias, reps, seed);
            config.workers = workers;
            let run = simulate(&config)?;
            let s = &run.summary;
            eprintln!(
                "{} games in {:.2}s ({:.0} games/s, build {})",
                reps, run.throughput.elapsed_secs, run.throughput.games_per_second, run.build
            );
            if format == Format::Json {
                print_json(&run)?;
            } else {
                let mut t = Table::new(["quantity", "estimate", "std_error"]);
                let se = |x: f64| format!("{x:.6}");
                t.push(vec!["mean_x".into(), se(s.mean_x), se(s.std_error_x())]);
                t.push(vec!["mean_l".into(), se(s.mean_l), se(s.std_error_l())]);
                t.push(vec!["mean_c".into(), se(s.mean_c), se(s.std_error_c())]);
                t.push(vec!["var_x".into(), se(s.var_x), String::new()]);
                t.push(vec!["var_l".into(), se(s.var_l), String::new()]);
                t.push(vec!["var_c".into(), se(s.var_c), String::new()]);
                t.push(vec!["cov_lc".into(), se(s.cov_lc), String::new()]);
                if let Some(tv) = s.tv_to_exact {
                    t.push(vec!["tv_to_exact".into(), se(tv), String::new()]);
                }
                t.push(vec!["ks_normal".into(), se(s.ks_normal), String::new()]);
                t.print(format)?;
            }
        }
        Command::Clt { n, p } => {
            let d = clt_distance(n, &p.bias)?;
            println!("n = {n}, p = {}: sup |F_n - Phi| = {d:.6}", p.bias);
        }
        Command::OracleCheck { n, nmax, p } => {
            let ns: Vec<usize> = match (n, nmax) {
                (_, Some(m)) => (1..=m).collect(),
                (Some(n), None) => vec![n],
                (None, None) => bail!("give --n or --nmax"),
            };
            let mut all = true;
            for n in ns {
                let r = enumerate_all(n, &p.bias)?;
                let ok = r.total_law() == xn_pmf::<BigRational>(n, &p.bias)?
                    && r.joint_matches(&joint_pmf(n, &p.bias)?)
                    && r.position_matrix == position_matrix::<BigRational>(n, &p.bias)?;
                eprintln!("n = {n}: {} sequences, {}", r.sequences, if ok { "agree" } else { "DISAGREE" });
                all &= ok;
            }
            println!("{}: DP == enumeration", pass_fail(all));
            return Ok(all);
        }
        Command::GfCheck { nmax, p } => {
            let bias = &p.bias;
            let series = gf_series_total::<BigRational>(nmax, bias)?;
            let table = xn_pmf_table::<BigRational>(nmax, bias)?;
            let trimmed = |mut v: Vec<BigRational>| {
                while v.last().is_some_and(|x| x == &BigRational::from_count(0)) {
                    v.pop();
                }
                v
            };
            let mut ok = (1..=nmax).all(|n| trimmed(series.coeff(n).univariate()) == trimmed(table[n - 1].probs().to_vec()));
            eprintln!("S(z,v): {}", pass_fail(ok));
            if bias.at_least_half() && !bias.is_one() {
                let joint = if bias.is_half() {
                    gf_series_joint::<BigRational>(nmax)?
                } else {
                    gf_series_joint_biased::<BigRational>(nmax, bias)?
                };
                let laws = joint_pmf_table::<BigRational>(nmax, bias)?;
                let joint_ok = laws.iter().all(|law| law.entries().all(|((l, c), x)| &joint.coeff(law.n()).coeff(l, c) == x));
                eprintln!("S(z,v,w): {}", pass_fail(joint_ok));
                ok &= joint_ok;
            }
            println!("{}: generating functions == DP for n <= {nmax}", pass_fail(ok));
            return Ok(ok);
        }
        Command::PhaseSweep { lambda, alpha, n, dp_cap, format } => {
            let rows = phase_transition_sweep(lambda, &alpha, &n, dp_cap)?;
            if format == Format::Json {
                print_json(&rows)?;
            } else {
                let mut t = Table::new(["lambda", "alpha", "n", "p", "identity_prob", "identity_limit", "deficit_mean", "deficit_variance", "tv_poisson"]);
                let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6}"));
                for r in rows {
                    t.push(vec![
                        r.lambda.to_string(),
                        r.alpha.to_string(),
                        r.n.to_string(),
                        format!("{:.8}", r.p),
                        format!("{:.6}", r.identity_prob),
                        format!("{:.6}", r.identity_limit),
                        opt(r.deficit_mean),
                        opt(r.deficit_variance),
                        opt(r.tv_poisson),
                    ]);
                }
                t.print(format)?;
            }
        }
        Command::OptimalityCheck { n, p, format } => {
            let report = verify_strategy_optimality(n, &p.bias)?;
            if format == Format::Json {
                print_json(&report)?;
            } else {
                for line in report.lines() {
                    println!("{line}");
                }
            }
            return Ok(report.passed);
        }
        Command::Errata { format } => {
            let errata = shelf_guess::errata::errata()?;
            match format {
                Format::Json => print_json(&errata)?,
                Format::Csv => {
                    let mut t = Table::new(["id", "topic", "stated", "adopted", "evidence", "confirmed"]);
                    for e in &errata {
                        t.push(vec![
                            e.id.into(),
                            e.topic.into(),
                            e.reference_statement.into(),
                            e.adopted.into(),
                            e.evidence.clone(),
                            e.confirmed.to_string(),
                        ]);
                    }
                    t.print(format)?;
                }
                Format::Table => {
                    for e in &errata {
                        println!("{}\n", e.lines().join("\n"));
                    }
                }
            }
            return Ok(errata.iter().all(|e| e.confirmed));
        }
        Command::Check { ids, list, format } => {
            if list {
                for (id, title) in catalogue() {
                    println!("{id:>2}  {title}");
                }
                return Ok(true);
            }
            let ids = if ids.is_empty() { catalogue().into_iter().map(|c| c.0).collect() } else { ids };
            let mut outcomes = Vec::new();
            for id in ids {
                let outcome = run_check(id).with_context(|| format!("no check with id {id}"))?;
                if format == Format::Table {
                    println!("{}", outcome.line());
                }
                outcomes.push(outcome);
            }
            if format == Format::Json {
                print_json(&outcomes)?;
            }
            return Ok(outcomes.iter().all(|o| o.passed));
        }
        Command::Serve { bind, ttl_secs, cors_origin } => {
            let config = shelf_guess_server::ServerConfig { session_ttl: Duration::from_secs(ttl_secs), cors_origin };
            tokio::runtime::Runtime::new()?.block_on(shelf_guess_server::serve(bind, config))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
