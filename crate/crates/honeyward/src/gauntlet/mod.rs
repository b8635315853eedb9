//! Attack simulations over sweetword sets: attacker capability levels,
//! top-guess success measurement, and flatness scoring.
//!
//! A simulation shuffles each account's sweetwords with an RNG stream
//! derived from the account's own content, asks the attacker to rank
//! them, and counts how often the real password lands inside the guess
//! budget. Content-derived streams make the result independent of
//! account order and of how work is split across threads.

pub mod rank;

pub use rank::{attacker_rank, builtin_dictionary};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::decoygen::{derive_seed, generate, CorpusModel, GeneratorConfig, PiiRecord, Strategy};
use crate::error::{Error, Result};
use crate::num::Real;
use crate::policyguard::Policy;

/// Attacker capability tiers, from dictionary-only to statistical
/// filtering with corpus and personal data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    A1,
    A2,
    A3,
    A4,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::A1, Level::A2, Level::A3, Level::A4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Level::A1 => "A1",
            Level::A2 => "A2",
            Level::A3 => "A3",
            Level::A4 => "A4",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Level::A1),
            "A2" => Ok(Level::A2),
            "A3" => Ok(Level::A3),
            "A4" => Ok(Level::A4),
            other => Err(Error::Config(format!(
                "unknown attacker level '{other}' (expected A1..A4)"
            ))),
        }
    }
}

/// An attacker: a level plus the resources that level is allowed.
/// Construction enforces the resource rules, so a built model is always
/// internally consistent.
#[derive(Debug, Clone)]
pub struct AttackerModel {
    level: Level,
    corpus: Option<Arc<CorpusModel>>,
    pii_access: bool,
    guess_budget: usize,
}

impl AttackerModel {
    pub fn new(
        level: Level,
        corpus: Option<Arc<CorpusModel>>,
        pii_access: bool,
        guess_budget: usize,
    ) -> Result<Self> {
        match level {
            Level::A1 | Level::A2 if corpus.is_some() => {
                return Err(Error::Config(format!(
                    "{level} holds no corpus reference"
                )));
            }
            Level::A3 | Level::A4 if corpus.is_none() => {
                return Err(Error::Config(format!("{level} requires a trained corpus")));
            }
            _ => {}
        }
        if pii_access && level != Level::A4 {
            return Err(Error::Config(format!(
                "personal-data access is an A4 capability, not {level}"
            )));
        }
        if guess_budget == 0 {
            return Err(Error::Config("guess budget must be at least 1".into()));
        }
        Ok(AttackerModel {
            level,
            corpus,
            pii_access,
            guess_budget,
        })
    }

    pub fn a1() -> Self {
        Self::new(Level::A1, None, false, 1).expect("valid by construction")
    }

    pub fn a2() -> Self {
        Self::new(Level::A2, None, false, 1).expect("valid by construction")
    }

    pub fn a3(corpus: Arc<CorpusModel>) -> Self {
        Self::new(Level::A3, Some(corpus), false, 1).expect("valid by construction")
    }

    pub fn a4(corpus: Arc<CorpusModel>, pii_access: bool) -> Self {
        Self::new(Level::A4, Some(corpus), pii_access, 1).expect("valid by construction")
    }

    pub fn with_guess_budget(mut self, guess_budget: usize) -> Result<Self> {
        if guess_budget == 0 {
            return Err(Error::Config("guess budget must be at least 1".into()));
        }
        self.guess_budget = guess_budget;
        Ok(self)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn corpus(&self) -> Option<&CorpusModel> {
        self.corpus.as_deref()
    }

    pub fn corpus_arc(&self) -> Option<&Arc<CorpusModel>> {
        self.corpus.as_ref()
    }

    pub fn pii_access(&self) -> bool {
        self.pii_access
    }

    pub fn guess_budget(&self) -> usize {
        self.guess_budget
    }
}

/// One simulated account: the real password, its decoys, and optional
/// personal details the strongest attacker may exploit.
#[derive(Debug, Clone)]
pub struct SimAccount {
    pub real: String,
    pub decoys: Vec<String>,
    pub pii: Option<PiiRecord>,
}

impl SimAccount {
    pub fn new(real: &str, decoys: Vec<String>) -> Self {
        SimAccount {
            real: real.to_string(),
            decoys,
            pii: None,
        }
    }

    /// Sweetword count including the real password.
    pub fn k(&self) -> usize {
        self.decoys.len() + 1
    }

    fn validate(&self) -> Result<()> {
        if self.real.is_empty() {
            return Err(Error::Config("account real password is empty".into()));
        }
        if self.decoys.is_empty() {
            return Err(Error::Config("account has no decoys".into()));
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        seen.insert(&self.real);
        for d in &self.decoys {
            if !seen.insert(d) {
                return Err(Error::Config(format!(
                    "account sweetwords are not distinct ('{d}')"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one simulation: top-guess success rate and its flatness.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessReport {
    pub level: String,
    pub accounts: usize,
    pub k: usize,
    /// Fraction of accounts where the real password fell inside the
    /// attacker's guess budget.
    pub p_top1: f64,
    /// 95% binomial confidence half-width around `p_top1`.
    pub ci95: f64,
    pub epsilon: f64,
}

/// Normalized indistinguishability: 1 when the attacker does no better
/// than guessing uniformly among k sweetwords (p = 1/k), 0 when the
/// attacker always finds the real password (p = 1), clamped between.
pub fn flatness_score<F: Real>(p: F, k: usize) -> Result<F> {
    if k < 2 {
        return Err(Error::Config(format!("flatness needs k >= 2, got {k}")));
    }
    let zero = F::zero();
    let one = F::one();
    if !(p >= zero && p <= one) {
        return Err(Error::Config(format!(
            "success probability must lie in [0, 1], got {p}"
        )));
    }
    let inv_k = one / F::from_usize(k).expect("k fits in the scalar type");
    let eps = one - (p - inv_k) / (one - inv_k);
    Ok(eps.max(zero).min(one))
}

/// Baseline blind guesser: keeps the presented order. The simulation
/// shuffles every set uniformly before ranking, so taking the first
/// presented sweetword is exactly a uniform random guess.
pub fn uniform_rank(sweetwords: &[String]) -> Vec<usize> {
    (0..sweetwords.len()).collect()
}

/// Run `model` against every account. `seed` drives only the
/// presentation shuffles; ranking itself is deterministic.
pub fn simulate(
    accounts: &[SimAccount],
    model: &AttackerModel,
    seed: u64,
) -> Result<FlatnessReport> {
    simulate_with(
        accounts,
        model.level().as_str(),
        model.guess_budget(),
        seed,
        |sweetwords, pii| attacker_rank(model, sweetwords, pii),
    )
}

/// Simulation core with a pluggable ranker, used by `simulate` and by
/// baselines like `uniform_rank`. The ranker must return a permutation
/// of `0..k`, most-likely-real first.
pub fn simulate_with<R>(
    accounts: &[SimAccount],
    level: &str,
    guess_budget: usize,
    seed: u64,
    rank: R,
) -> Result<FlatnessReport>
where
    R: Fn(&[String], Option<&PiiRecord>) -> Vec<usize> + Sync,
{
    if accounts.is_empty() {
        return Err(Error::Config("simulation needs at least one account".into()));
    }
    if guess_budget == 0 {
        return Err(Error::Config("guess budget must be at least 1".into()));
    }
    let k = accounts[0].k();
    for account in accounts {
        account.validate()?;
        if account.k() != k {
            return Err(Error::Config(format!(
                "ragged sweetword sets: expected k={k}, account '{}' has k={}",
                account.real,
                account.k()
            )));
        }
    }

    let hits: u64 = accounts
        .par_iter()
        .map(|account| -> Result<u64> {
            let mut sweetwords: Vec<String> = Vec::with_capacity(k);
            sweetwords.push(account.real.clone());
            sweetwords.extend(account.decoys.iter().cloned());
            let mut parts: Vec<&str> = Vec::with_capacity(k + 1);
            parts.push("shuffle");
            parts.push(&account.real);
            for d in &account.decoys {
                parts.push(d);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &parts));
            sweetwords.shuffle(&mut rng);
            let true_index = sweetwords
                .iter()
                .position(|w| *w == account.real)
                .expect("real password is in the set");
            let order = rank(&sweetwords, account.pii.as_ref());
            let position = order.iter().position(|&i| i == true_index).ok_or_else(|| {
                Error::Config(format!(
                    "ranker output is not a permutation: index {true_index} missing"
                ))
            })?;
            Ok(u64::from(position < guess_budget))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    let n = accounts.len() as f64;
    let p = hits as f64 / n;
    let ci95 = 1.96 * (p * (1.0 - p) / n).sqrt();
    Ok(FlatnessReport {
        level: level.to_string(),
        accounts: accounts.len(),
        k,
        p_top1: p,
        ci95,
        epsilon: flatness_score(p, k)?,
    })
}

/// Produce one simulated account per real password: decoys from the
/// given strategy, generation streams derived from each password's own
/// content so the list can be built in any order or in parallel.
pub fn build_accounts(
    reals: &[String],
    strategy: Strategy,
    k: usize,
    seed: u64,
    model: Option<&CorpusModel>,
    policy: &Policy,
) -> Result<Vec<SimAccount>> {
    if reals.is_empty() {
        return Err(Error::Config("need at least one real password".into()));
    }
    reals
        .par_iter()
        .map(|real| {
            let child = derive_seed(seed, &["decoys", strategy.as_str(), real]);
            let mut cfg = GeneratorConfig::new(strategy, k, child);
            cfg.policy = policy.clone();
            let decoys = generate(real, &cfg, model, None)?;
            Ok(SimAccount::new(real, decoys))
        })
        .collect()
}

/// Weighted draws of real passwords from a trained corpus model.
pub fn sample_reals(model: &CorpusModel, n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &["reals"]));
    (0..n)
        .map(|_| model.sample_weighted_password(&mut rng).to_string())
        .collect()
}

/// Cross every generation strategy with every attacker level and report
/// one CSV row each. Accounts are built once per strategy and reused
/// across levels. Same inputs give byte-identical output.
pub fn sweep(
    reals: &[String],
    strategies: &[Strategy],
    levels: &[Level],
    k: usize,
    seed: u64,
    corpus: Arc<CorpusModel>,
    policy: &Policy,
) -> Result<String> {
    let strategies: BTreeMap<&'static str, Strategy> = strategies
        .iter()
        .map(|s| (s.as_str(), *s))
        .collect();
    let levels: BTreeSet<Level> = levels.iter().copied().collect();
    if strategies.is_empty() || levels.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one strategy and one level".into(),
        ));
    }

    let mut rows = Vec::new();
    for (name, strategy) in &strategies {
        let accounts = build_accounts(reals, *strategy, k, seed, Some(&corpus), policy)?;
        for level in &levels {
            let attacker = match level {
                Level::A1 => AttackerModel::a1(),
                Level::A2 => AttackerModel::a2(),
                Level::A3 => AttackerModel::a3(Arc::clone(&corpus)),
                Level::A4 => AttackerModel::a4(Arc::clone(&corpus), false),
            };
            let report = simulate(&accounts, &attacker, seed)?;
            rows.push(format!(
                "{},{},{},{},{:.6},{:.6},{:.6}",
                name,
                level.as_str(),
                report.accounts,
                report.k,
                report.p_top1,
                report.ci95,
                report.epsilon
            ));
        }
    }
    rows.sort();
    Ok(format!(
        "generator,level,accounts,k,p_top1,ci95,epsilon\n{}\n",
        rows.join("\n")
    ))
}
