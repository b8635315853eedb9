//! Per-level ranking heuristics: given a sweetword set, order the
//! indices from most to least likely real.
//!
//! Every ranking is a pure function of the model and the word list.
//! Ties break by the secondary score, then lexicographically, then by
//! index, so a rank is reproducible across runs and platforms.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::decoygen::{CorpusModel, PiiRecord};
use crate::policyguard::CharClass;

use super::{AttackerModel, Level};

static DICTIONARY_TEXT: &str = include_str!("../../data/a1_dictionary.txt");

/// The basic attacker's wordlist, mapped word -> rank (0 = most common).
pub fn builtin_dictionary() -> &'static BTreeMap<&'static str, usize> {
    static INDEX: OnceLock<BTreeMap<&'static str, usize>> = OnceLock::new();
    INDEX.get_or_init(|| {
        DICTIONARY_TEXT
            .lines()
            .filter(|line| !line.is_empty())
            .enumerate()
            .map(|(i, word)| (word, i))
            .collect()
    })
}

/// Dictionary membership, better ranks scoring higher. Words outside the
/// list all score zero and fall back to lexicographic order.
fn a1_score(word: &str) -> f64 {
    let dict = builtin_dictionary();
    match dict.get(word) {
        Some(&pos) => (dict.len() - pos) as f64,
        None => 0.0,
    }
}

/// Fixed plausibility table for the corpus-less attacker: a length
/// z-score around typical password length, a prior over how many
/// character classes real passwords mix, and a penalty for long
/// same-character runs.
const CLASS_MIX_PRIOR: [f64; 4] = [0.38, 0.42, 0.16, 0.04];
const TYPICAL_LEN: f64 = 8.5;
const LEN_SPREAD: f64 = 2.5;
const REPEAT_PENALTY: f64 = 0.75;

fn a2_score(word: &str) -> f64 {
    let mut seen = [false; 4];
    let mut longest_run = 0usize;
    let mut run = 0usize;
    let mut prev = None;
    let mut len = 0usize;
    for c in word.chars() {
        len += 1;
        let slot = match CharClass::of(c) {
            CharClass::Lower => 0,
            CharClass::Upper => 1,
            CharClass::Digit => 2,
            CharClass::Other => 3,
        };
        seen[slot] = true;
        if prev == Some(c) {
            run += 1;
        } else {
            run = 1;
            prev = Some(c);
        }
        longest_run = longest_run.max(run);
    }
    let classes = seen.iter().filter(|&&s| s).count().max(1);
    let z = (len as f64 - TYPICAL_LEN) / LEN_SPREAD;
    -0.5 * z * z + CLASS_MIX_PRIOR[classes - 1].ln()
        - REPEAT_PENALTY * longest_run.saturating_sub(2) as f64
}

/// Weights for the statistical attacker's combined score.
const FREQ_WEIGHT: f64 = 1.0;
const PII_WEIGHT: f64 = 2.0;

/// Count personal tokens embedded in the word (case-insensitive).
fn pii_overlap(word: &str, pii: &PiiRecord) -> f64 {
    let lower = word.to_lowercase();
    let mut hits = 0.0;
    for token in pii
        .name_tokens
        .iter()
        .chain(pii.username.iter())
    {
        if token.len() >= 3 && lower.contains(token.as_str()) {
            hits += 1.0;
        }
    }
    if let Some(year) = pii.birth_year {
        if lower.contains(&year.to_string()) {
            hits += 1.0;
        }
    }
    hits
}

/// Character-model log-likelihood plus log corpus count plus personal
/// overlap.
fn a4_score(word: &str, corpus: &CorpusModel, pii: Option<&PiiRecord>) -> f64 {
    let mut score =
        corpus.loglik(word) + FREQ_WEIGHT * (1.0 + corpus.frequency_of(word) as f64).ln();
    if let Some(pii) = pii {
        score += PII_WEIGHT * pii_overlap(word, pii);
    }
    score
}

/// Order sweetword indices most-likely-real first under the attacker's
/// capability level. Deterministic in all inputs; never consults an RNG.
pub fn attacker_rank(
    model: &AttackerModel,
    sweetwords: &[String],
    pii: Option<&PiiRecord>,
) -> Vec<usize> {
    let keys: Vec<(f64, f64)> = sweetwords
        .iter()
        .map(|w| match model.level() {
            Level::A1 => (a1_score(w), 0.0),
            Level::A2 => (a2_score(w), 0.0),
            Level::A3 => {
                let corpus = model.corpus().expect("A3 holds a corpus");
                (corpus.frequency_of(w) as f64, a2_score(w))
            }
            Level::A4 => {
                let corpus = model.corpus().expect("A4 holds a corpus");
                let pii = pii.filter(|_| model.pii_access());
                (a4_score(w, corpus, pii), 0.0)
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..sweetwords.len()).collect();
    order.sort_by(|&a, &b| {
        keys[b]
            .0
            .total_cmp(&keys[a].0)
            .then(keys[b].1.total_cmp(&keys[a].1))
            .then(sweetwords[a].cmp(&sweetwords[b]))
            .then(a.cmp(&b))
    });
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoygen::train_model;
    use std::sync::Arc;

    fn words(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dictionary_is_ordered_by_popularity() {
        let dict = builtin_dictionary();
        assert_eq!(dict.len(), 100);
        assert_eq!(dict["123456"], 0);
        assert!(dict["password"] < dict["dragon"]);
    }

    #[test]
    fn a1_puts_dictionary_words_first_then_lexicographic() {
        let model = AttackerModel::a1();
        let sw = words(&["zq9kvl2m", "password", "bq7pw4zt", "123456"]);
        let order = attacker_rank(&model, &sw, None);
        // both dictionary words lead, most common first
        assert_eq!(&order[..2], &[3, 1]);
        // non-members follow in lexicographic order
        assert_eq!(&order[2..], &[2, 0]);
    }

    #[test]
    fn a1_without_dictionary_hits_is_fully_lexicographic() {
        let model = AttackerModel::a1();
        let sw = words(&["ccc92jdk", "aaa92jdk", "bbb92jdk"]);
        assert_eq!(attacker_rank(&model, &sw, None), vec![1, 2, 0]);
    }

    #[test]
    fn a2_prefers_typical_shape() {
        // typical length and class mix beats a long single-class string
        assert!(a2_score("marisol99") > a2_score("zzzzkkkkwwwwqqqq"));
        // long same-character runs cost
        assert!(a2_score("abcdefg12") > a2_score("aaabbb123"));
    }

    #[test]
    fn a3_ranks_corpus_hit_first() {
        let corpus = Arc::new(
            train_model(["password1", "password1", "summer2024"], 3).unwrap(),
        );
        let model = AttackerModel::a3(corpus);
        let sw = words(&["Xq9#vL2m", "password1", "Tg7@pW4z"]);
        let order = attacker_rank(&model, &sw, None);
        assert_eq!(order[0], 1);
    }

    #[test]
    fn a4_pii_access_boosts_overlapping_words() {
        let corpus = Arc::new(
            train_model(["dhvesta21", "dhvesta22", "kzmarto77"], 3).unwrap(),
        );
        let pii = PiiRecord {
            username: None,
            birth_year: Some(1987),
            name_tokens: vec!["marisol".to_string()],
            ..PiiRecord::default()
        };
        let sw = words(&["marisol19", "qwkzzu107", "ttkzzu207"]);
        let with = AttackerModel::a4(Arc::new(train_model(["x1y2z3w4"], 3).unwrap()), true);
        let order = attacker_rank(&with, &sw, Some(&pii));
        assert_eq!(order[0], 0, "token overlap should lead");

        // without the access flag the personal record is ignored
        let without = AttackerModel::a4(Arc::clone(with.corpus_arc().unwrap()), false);
        let blind = attacker_rank(&without, &sw, Some(&pii));
        let informed = attacker_rank(&without, &sw, None);
        assert_eq!(blind, informed);
        let _ = corpus;
    }

    #[test]
    fn ranks_are_permutations() {
        let corpus = Arc::new(train_model(["abcd1234"], 3).unwrap());
        let sw = words(&["one4five", "two4five", "six4five", "ten4five"]);
        for model in [
            AttackerModel::a1(),
            AttackerModel::a2(),
            AttackerModel::a3(Arc::clone(&corpus)),
            AttackerModel::a4(corpus, false),
        ] {
            let mut order = attacker_rank(&model, &sw, None);
            order.sort_unstable();
            assert_eq!(order, vec![0, 1, 2, 3]);
        }
    }
}
