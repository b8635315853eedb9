//! Decoy password generation and sweetword assembly.
//!
//! Four strategies produce k-1 decoys for a real password: `typo` edits
//! the real password itself, `random` builds policy-shaped strings,
//! `corpus` samples real corpus passwords by frequency, and `hybrid`
//! fills corpus templates with character-model walks, optionally mixing in
//! personal tokens, then keeps the most corpus-popular candidate of each
//! batch. Every decoy must pass the configured policy, differ from the
//! real password by at least `d_min` edits, and be unique within the set.

pub mod edit;
pub mod keyboard;
pub mod model;

pub use edit::levenshtein;
pub use keyboard::Layout;
pub use model::{train_model, CorpusModel};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::policyguard::{check_password, Policy};
use keyboard::adjacent;
use model::SegClass;

/// How decoys are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Typo,
    Random,
    Corpus,
    Hybrid,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Typo => "typo",
            Strategy::Random => "random",
            Strategy::Corpus => "corpus",
            Strategy::Hybrid => "hybrid",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "typo" => Ok(Strategy::Typo),
            "random" => Ok(Strategy::Random),
            "corpus" => Ok(Strategy::Corpus),
            "hybrid" => Ok(Strategy::Hybrid),
            other => Err(Error::Config(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Synthetic personal details used by the hybrid strategy and for typo
/// keyboard selection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PiiRecord {
    pub username: Option<String>,
    pub birth_year: Option<u16>,
    pub name_tokens: Vec<String>,
    pub keyboard_layout: Layout,
}

impl PiiRecord {
    pub fn validate(&self) -> Result<()> {
        let lowercase_word =
            |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_lowercase());
        if let Some(u) = &self.username {
            if !lowercase_word(u) {
                return Err(Error::Config(format!(
                    "username token must be non-empty lowercase, got '{u}'"
                )));
            }
        }
        for t in &self.name_tokens {
            if !lowercase_word(t) {
                return Err(Error::Config(format!(
                    "name token must be non-empty lowercase, got '{t}'"
                )));
            }
        }
        Ok(())
    }

    fn tokens(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.name_tokens.iter().map(String::as_str).collect();
        if let Some(u) = &self.username {
            out.push(u);
        }
        out
    }
}

/// Generation parameters. `seed` makes generation a pure function of its
/// arguments.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub strategy: Strategy,
    pub k: usize,
    pub d_min: usize,
    pub seed: u64,
    pub policy: Policy,
    /// Candidate draws allowed before giving up.
    pub retry_bound: usize,
    /// Hybrid candidates scored per emitted decoy.
    pub hybrid_batch: usize,
    /// Chance a hybrid candidate gets a personal token spliced in.
    pub pii_prob: f64,
}

impl GeneratorConfig {
    pub fn new(strategy: Strategy, k: usize, seed: u64) -> Self {
        GeneratorConfig {
            strategy,
            k,
            d_min: 2,
            seed,
            policy: Policy::default(),
            retry_bound: 10_000,
            hybrid_batch: 16,
            pii_prob: 0.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config(format!("k must be >= 2, got {}", self.k)));
        }
        if self.d_min < 1 {
            return Err(Error::Config("d_min must be >= 1".into()));
        }
        if self.strategy == Strategy::Typo && self.d_min > 2 {
            return Err(Error::Config(format!(
                "typo strategy keeps decoys within edit distance 2, so d_min must be <= 2, got {}",
                self.d_min
            )));
        }
        if self.hybrid_batch < 1 {
            return Err(Error::Config("hybrid_batch must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.pii_prob) {
            return Err(Error::Config("pii_prob must be in [0, 1]".into()));
        }
        self.policy.validate()
    }
}

const RANDOM_SYMBOLS: &str = "!#$%&*+-=?@_";
const RANDOM_LOWER: &str = "abcdefghijklmnopqrstuvwxyz";
const RANDOM_UPPER: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
const RANDOM_DIGITS: &str = "0123456789";

fn pick(rng: &mut impl Rng, set: &str) -> char {
    let chars: Vec<char> = set.chars().collect();
    chars[rng.gen_range(0..chars.len())]
}

fn propose_random(real: &str, policy: &Policy, rng: &mut impl Rng) -> String {
    let target_len = (policy.minlen as usize).max(real.chars().count());
    let mut out: Vec<char> = Vec::with_capacity(target_len);
    for (set, need) in [
        (RANDOM_DIGITS, policy.dcredit),
        (RANDOM_UPPER, policy.ucredit),
        (RANDOM_LOWER, policy.lcredit),
        (RANDOM_SYMBOLS, policy.ocredit),
    ] {
        for _ in 0..need {
            out.push(pick(rng, set));
        }
    }
    // top up class variety until minclass is reachable
    let mut class_sets: Vec<&str> = vec![RANDOM_LOWER, RANDOM_DIGITS, RANDOM_UPPER, RANDOM_SYMBOLS];
    class_sets.retain(|set| {
        let class = crate::policyguard::CharClass::of(set.chars().next().expect("non-empty"));
        !out.iter()
            .any(|c| crate::policyguard::CharClass::of(*c) == class)
    });
    let mut classes_present = 4 - class_sets.len();
    for set in class_sets {
        if classes_present >= policy.minclass as usize {
            break;
        }
        out.push(pick(rng, set));
        classes_present += 1;
    }
    let all: String = [RANDOM_LOWER, RANDOM_UPPER, RANDOM_DIGITS, RANDOM_SYMBOLS].concat();
    while out.len() < target_len {
        out.push(pick(rng, &all));
    }
    out.shuffle(rng);
    out.into_iter().collect()
}

#[derive(Clone, Copy)]
enum TypoOp {
    AdjacentSub,
    CaseToggle,
    DigitShift,
    Transpose,
}

fn apply_typo_op(chars: &mut Vec<char>, op: TypoOp, layout: Layout, rng: &mut impl Rng) -> bool {
    match op {
        TypoOp::AdjacentSub => {
            let positions: Vec<usize> = (0..chars.len())
                .filter(|&i| adjacent(layout, chars[i].to_ascii_lowercase()).is_some())
                .collect();
            let Some(&i) = positions.as_slice().choose(rng) else {
                return false;
            };
            let c = chars[i];
            let neighbors = adjacent(layout, c.to_ascii_lowercase()).expect("filtered above");
            let n = pick(rng, neighbors);
            chars[i] = if c.is_ascii_uppercase() {
                n.to_ascii_uppercase()
            } else {
                n
            };
            true
        }
        TypoOp::CaseToggle => {
            let positions: Vec<usize> = (0..chars.len())
                .filter(|&i| chars[i].is_ascii_alphabetic())
                .collect();
            let Some(&i) = positions.as_slice().choose(rng) else {
                return false;
            };
            chars[i] = if chars[i].is_ascii_uppercase() {
                chars[i].to_ascii_lowercase()
            } else {
                chars[i].to_ascii_uppercase()
            };
            true
        }
        TypoOp::DigitShift => {
            let Some(last) = chars.last().copied().filter(char::is_ascii_digit) else {
                return false;
            };
            let d = last.to_digit(10).expect("checked digit");
            let shifted = if rng.gen() { (d + 1) % 10 } else { (d + 9) % 10 };
            *chars.last_mut().expect("non-empty") =
                char::from_digit(shifted, 10).expect("single digit");
            true
        }
        TypoOp::Transpose => {
            let positions: Vec<usize> = (0..chars.len().saturating_sub(1))
                .filter(|&i| chars[i] != chars[i + 1])
                .collect();
            let Some(&i) = positions.as_slice().choose(rng) else {
                return false;
            };
            chars.swap(i, i + 1);
            true
        }
    }
}

fn propose_typo(real: &str, d_min: usize, layout: Layout, rng: &mut impl Rng) -> String {
    let ops = rng.gen_range(d_min..=2);
    let mut chars: Vec<char> = real.chars().collect();
    let all_ops = [
        TypoOp::AdjacentSub,
        TypoOp::CaseToggle,
        TypoOp::DigitShift,
        TypoOp::Transpose,
    ];
    for _ in 0..ops {
        let mut order = all_ops;
        order.shuffle(rng);
        for op in order {
            if apply_typo_op(&mut chars, op, layout, rng) {
                break;
            }
        }
    }
    chars.into_iter().collect()
}

fn inject_pii(
    candidate: &str,
    pii: &PiiRecord,
    rng: &mut impl Rng,
) -> Option<String> {
    let chars: Vec<char> = candidate.chars().collect();
    // runs of (class, start, len)
    let mut runs: Vec<(SegClass, usize, usize)> = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        let class = SegClass::of(c);
        match runs.last_mut() {
            Some((prev, _, len)) if *prev == class => *len += 1,
            _ => runs.push((class, i, 1)),
        }
    }
    enum Inject<'a> {
        Token(&'a str, usize),
        Year(usize),
    }
    let mut options: Vec<Inject> = Vec::new();
    for token in pii.tokens() {
        let tlen = token.chars().count();
        for &(class, start, len) in &runs {
            if class == SegClass::Letter && len >= tlen {
                options.push(Inject::Token(token, start));
            }
        }
    }
    if let Some(year) = pii.birth_year {
        if (1000..=9999).contains(&year) {
            for &(class, start, len) in &runs {
                if class == SegClass::Digit && len == 4 {
                    options.push(Inject::Year(start));
                }
            }
        }
    }
    if options.is_empty() {
        return None;
    }
    let choice = &options[rng.gen_range(0..options.len())];
    let mut out = chars;
    match choice {
        Inject::Token(token, start) => {
            for (off, tc) in token.chars().enumerate() {
                let i = start + off;
                out[i] = if out[i].is_ascii_uppercase() {
                    tc.to_ascii_uppercase()
                } else {
                    tc
                };
            }
        }
        Inject::Year(start) => {
            let digits = pii.birth_year.expect("year option implies year").to_string();
            for (off, dc) in digits.chars().enumerate() {
                out[start + off] = dc;
            }
        }
    }
    Some(out.into_iter().collect())
}

fn propose_hybrid(
    model: &CorpusModel,
    pii: Option<&PiiRecord>,
    cfg: &GeneratorConfig,
    rng: &mut impl Rng,
) -> String {
    let mut best: Option<(u64, String)> = None;
    for _ in 0..cfg.hybrid_batch {
        let template = model.sample_template(rng).to_string();
        let mut cand = model
            .fill_template(&template, rng)
            .expect("model templates parse");
        if let Some(pii) = pii {
            if rng.gen::<f64>() < cfg.pii_prob {
                if let Some(injected) = inject_pii(&cand, pii, rng) {
                    cand = injected;
                }
            }
        }
        let score = model.frequency_of(&cand);
        match &best {
            Some((bs, _)) if *bs >= score => {}
            _ => best = Some((score, cand)),
        }
    }
    best.expect("hybrid_batch >= 1").1
}

#[derive(Default)]
struct RejectCounts {
    equals_real: usize,
    too_close: usize,
    typo_too_far: usize,
    duplicate: usize,
    policy: BTreeMap<&'static str, usize>,
}

impl RejectCounts {
    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.equals_real > 0 {
            parts.push(format!("{} equal to the real password", self.equals_real));
        }
        if self.too_close > 0 {
            parts.push(format!("{} within d_min of the real password", self.too_close));
        }
        if self.typo_too_far > 0 {
            parts.push(format!("{} beyond edit distance 2", self.typo_too_far));
        }
        if self.duplicate > 0 {
            parts.push(format!("{} duplicates", self.duplicate));
        }
        for (code, n) in &self.policy {
            parts.push(format!("{n} failed policy {code}"));
        }
        if parts.is_empty() {
            parts.push("no candidates produced".into());
        }
        parts.join(", ")
    }
}

/// Produce k-1 decoys for `real` under `cfg`. Pure in (real, cfg, model,
/// pii): the same inputs give the same decoys.
pub fn generate(
    real: &str,
    cfg: &GeneratorConfig,
    model: Option<&CorpusModel>,
    pii: Option<&PiiRecord>,
) -> Result<Vec<String>> {
    cfg.validate()?;
    if real.is_empty() {
        return Err(Error::Generation("real password must be non-empty".into()));
    }
    if matches!(cfg.strategy, Strategy::Corpus | Strategy::Hybrid) && model.is_none() {
        return Err(Error::Config(format!(
            "strategy '{}' requires a trained corpus model",
            cfg.strategy.as_str()
        )));
    }
    if let Some(p) = pii {
        p.validate()?;
    }
    let layout = pii.map(|p| p.keyboard_layout).unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let need = cfg.k - 1;
    let mut decoys: Vec<String> = Vec::with_capacity(need);
    let mut rejects = RejectCounts::default();
    for _ in 0..cfg.retry_bound {
        if decoys.len() == need {
            break;
        }
        let candidate = match cfg.strategy {
            Strategy::Typo => propose_typo(real, cfg.d_min, layout, &mut rng),
            Strategy::Random => propose_random(real, &cfg.policy, &mut rng),
            Strategy::Corpus => model
                .expect("checked above")
                .sample_weighted_password(&mut rng)
                .to_string(),
            Strategy::Hybrid => propose_hybrid(model.expect("checked above"), pii, cfg, &mut rng),
        };
        if candidate == real {
            rejects.equals_real += 1;
            continue;
        }
        let dist = levenshtein(&candidate, real);
        if dist < cfg.d_min {
            rejects.too_close += 1;
            continue;
        }
        if cfg.strategy == Strategy::Typo && dist > 2 {
            rejects.typo_too_far += 1;
            continue;
        }
        let violations = check_password(&cfg.policy, &candidate);
        if let Some(v) = violations.first() {
            *rejects.policy.entry(v.code()).or_insert(0) += 1;
            continue;
        }
        if decoys.iter().any(|d| d == &candidate) {
            rejects.duplicate += 1;
            continue;
        }
        decoys.push(candidate);
    }
    if decoys.len() < need {
        return Err(Error::Generation(format!(
            "produced {}/{} decoys after {} attempts: {}",
            decoys.len(),
            need,
            cfg.retry_bound,
            rejects.describe()
        )));
    }
    Ok(decoys)
}

/// Shuffle the real password into the decoys with a seeded uniform
/// permutation. Returns the sweetword list and the real password's index.
pub fn assemble_sweetwords(
    real: &str,
    decoys: &[String],
    seed: u64,
) -> Result<(Vec<String>, usize)> {
    if real.is_empty() {
        return Err(Error::Generation("real password must be non-empty".into()));
    }
    if decoys.is_empty() {
        return Err(Error::Generation("need at least one decoy".into()));
    }
    let mut all: Vec<String> = decoys.to_vec();
    all.push(real.to_string());
    let distinct: std::collections::BTreeSet<&String> = all.iter().collect();
    if distinct.len() != all.len() {
        return Err(Error::Generation("sweetwords must be distinct".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all.shuffle(&mut rng);
    let true_index = all
        .iter()
        .position(|w| w == real)
        .expect("real was inserted");
    Ok((all, true_index))
}

/// Derive a child RNG seed from a master seed and identifying parts.
/// The same inputs always give the same stream, so work split across
/// threads or reordered batches still draws identical randomness.
pub fn derive_seed(master: u64, parts: &[&str]) -> u64 {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    for part in parts {
        hasher.update([0x1f]);
        hasher.update(part.as_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Bundled 5,000-line demonstration corpus (popularity encoded by line
/// repetition). Big enough to train the character model, small enough
/// to keep simulations fast.
pub fn bundled_corpus() -> impl Iterator<Item = &'static str> {
    include_str!("../../data/toy_corpus.txt")
        .lines()
        .filter(|line| !line.is_empty())
}
