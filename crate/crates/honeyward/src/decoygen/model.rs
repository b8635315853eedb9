//! Corpus statistics: password frequencies, structure templates, and an
//! order-n character model.
//!
//! Templates describe class runs, e.g. `L6D2` = six letters then two
//! digits. The character model counts order-n transitions (default n=3,
//! i.e. two chars of context) with start/end markers, and fills template
//! segments by class-restricted weighted walks. Serialization is a single
//! JSON document with sorted keys, so equal corpora give equal bytes.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Default transition order: two chars of context predict the next.
pub const DEFAULT_ORDER: usize = 3;

/// Additive smoothing applied to walk and likelihood weights.
pub const SMOOTHING_ALPHA: f64 = 0.5;

/// Vocabulary size for likelihood smoothing: printable ASCII plus the end
/// marker.
const VOCAB: f64 = 96.0;

const STX: char = '\u{2}';
const ETX: char = '\u{3}';

const LETTERS: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
const DIGITS: &str = "0123456789";
const SYMBOLS: &str = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

/// Character class of a template segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegClass {
    Letter,
    Digit,
    Symbol,
}

impl SegClass {
    pub fn of(c: char) -> SegClass {
        if c.is_ascii_alphabetic() {
            SegClass::Letter
        } else if c.is_ascii_digit() {
            SegClass::Digit
        } else {
            SegClass::Symbol
        }
    }

    fn tag(&self) -> char {
        match self {
            SegClass::Letter => 'L',
            SegClass::Digit => 'D',
            SegClass::Symbol => 'S',
        }
    }

    fn charset(&self) -> &'static str {
        match self {
            SegClass::Letter => LETTERS,
            SegClass::Digit => DIGITS,
            SegClass::Symbol => SYMBOLS,
        }
    }

    fn contains(&self, c: char) -> bool {
        SegClass::of(c) == *self
    }
}

/// Class-run template of a password, e.g. `Summer2024!` -> `L6D4S1`.
pub fn extract_template(pw: &str) -> String {
    let mut out = String::new();
    let mut cur: Option<(SegClass, usize)> = None;
    for c in pw.chars() {
        let class = SegClass::of(c);
        match cur {
            Some((prev, n)) if prev == class => cur = Some((prev, n + 1)),
            Some((prev, n)) => {
                out.push(prev.tag());
                out.push_str(&n.to_string());
                cur = Some((class, 1));
            }
            None => cur = Some((class, 1)),
        }
    }
    if let Some((class, n)) = cur {
        out.push(class.tag());
        out.push_str(&n.to_string());
    }
    out
}

/// Parse `L6D2` into segments.
pub fn parse_template(template: &str) -> Result<Vec<(SegClass, usize)>> {
    let mut segments = Vec::new();
    let mut chars = template.chars().peekable();
    while let Some(tag) = chars.next() {
        let class = match tag {
            'L' => SegClass::Letter,
            'D' => SegClass::Digit,
            'S' => SegClass::Symbol,
            other => {
                return Err(Error::Generation(format!(
                    "bad template '{template}': unknown class '{other}'"
                )))
            }
        };
        let mut digits = String::new();
        while let Some(c) = chars.peek().filter(|c| c.is_ascii_digit()) {
            digits.push(*c);
            chars.next();
        }
        let len: usize = digits
            .parse()
            .map_err(|_| Error::Generation(format!("bad template '{template}': missing length")))?;
        if len == 0 {
            return Err(Error::Generation(format!(
                "bad template '{template}': zero-length segment"
            )));
        }
        segments.push((class, len));
    }
    if segments.is_empty() {
        return Err(Error::Generation("empty template".into()));
    }
    Ok(segments)
}

/// Trained corpus statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusModel {
    pub order: usize,
    pub total: u64,
    pub frequency: BTreeMap<String, u64>,
    pub templates: BTreeMap<String, f64>,
    markov: BTreeMap<String, BTreeMap<char, u64>>,
}

/// Count frequencies, templates, and transitions over `corpus`.
pub fn train_model<I>(corpus: I, order: usize) -> Result<CorpusModel>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    if order < 2 {
        return Err(Error::Train(format!("order must be >= 2, got {order}")));
    }
    let mut frequency: BTreeMap<String, u64> = BTreeMap::new();
    let mut template_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut markov: BTreeMap<String, BTreeMap<char, u64>> = BTreeMap::new();
    let mut total = 0u64;
    let ctx_len = order - 1;
    for item in corpus {
        let pw = item.as_ref();
        if pw.is_empty() {
            continue;
        }
        total += 1;
        *frequency.entry(pw.to_string()).or_insert(0) += 1;
        *template_counts.entry(extract_template(pw)).or_insert(0) += 1;
        let padded: Vec<char> = std::iter::repeat(STX)
            .take(ctx_len)
            .chain(pw.chars())
            .chain(std::iter::once(ETX))
            .collect();
        for window in padded.windows(ctx_len + 1) {
            let context: String = window[..ctx_len].iter().collect();
            let next = window[ctx_len];
            *markov.entry(context).or_default().entry(next).or_insert(0) += 1;
        }
    }
    if total == 0 {
        return Err(Error::Train("corpus is empty".into()));
    }
    let templates = template_counts
        .into_iter()
        .map(|(t, n)| (t, n as f64 / total as f64))
        .collect();
    let model = CorpusModel {
        order,
        total,
        frequency,
        templates,
        markov,
    };
    model.validate()?;
    Ok(model)
}

impl CorpusModel {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Train(format!(
                "order must be >= 2, got {}",
                self.order
            )));
        }
        if self.total == 0 || self.frequency.is_empty() {
            return Err(Error::Train("model has no passwords".into()));
        }
        let sum: f64 = self.templates.values().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Train(format!(
                "template probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }

    /// Occurrence count of an exact password.
    pub fn frequency_of(&self, pw: &str) -> u64 {
        self.frequency.get(pw).copied().unwrap_or(0)
    }

    /// Sample a corpus password weighted by its count.
    pub fn sample_weighted_password(&self, rng: &mut impl Rng) -> &str {
        let mut pick = rng.gen_range(0..self.total);
        for (pw, count) in &self.frequency {
            if pick < *count {
                return pw;
            }
            pick -= count;
        }
        unreachable!("counts sum to total")
    }

    /// Sample a structure template weighted by probability.
    pub fn sample_template(&self, rng: &mut impl Rng) -> &str {
        let mut pick: f64 = rng.gen();
        let mut last = None;
        for (t, p) in &self.templates {
            if pick < *p {
                return t;
            }
            pick -= p;
            last = Some(t.as_str());
        }
        // float round-off: fall back to the final template
        last.expect("validated model has templates")
    }

    fn context_of(&self, generated: &[char]) -> String {
        let ctx_len = self.order - 1;
        let mut ctx: Vec<char> = Vec::with_capacity(ctx_len);
        let have = generated.len().min(ctx_len);
        for _ in 0..ctx_len - have {
            ctx.push(STX);
        }
        ctx.extend_from_slice(&generated[generated.len() - have..]);
        ctx.into_iter().collect()
    }

    fn walk_char(&self, generated: &[char], class: SegClass, rng: &mut impl Rng) -> char {
        let context = self.context_of(generated);
        let row = self.markov.get(&context);
        let charset: Vec<char> = class.charset().chars().collect();
        let weights: Vec<f64> = charset
            .iter()
            .map(|c| {
                let count = row.and_then(|r| r.get(c)).copied().unwrap_or(0);
                count as f64 + SMOOTHING_ALPHA
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let mut pick = rng.gen::<f64>() * total;
        for (c, w) in charset.iter().zip(&weights) {
            if pick < *w {
                return *c;
            }
            pick -= w;
        }
        *charset.last().expect("charsets are non-empty")
    }

    /// Fill a template with a class-restricted weighted walk.
    pub fn fill_template(&self, template: &str, rng: &mut impl Rng) -> Result<String> {
        let segments = parse_template(template)?;
        let mut generated: Vec<char> = Vec::new();
        for (class, len) in segments {
            for _ in 0..len {
                let c = self.walk_char(&generated, class, rng);
                debug_assert!(class.contains(c));
                generated.push(c);
            }
        }
        Ok(generated.into_iter().collect())
    }

    /// Sample a template and fill it.
    pub fn generate_candidate(&self, rng: &mut impl Rng) -> String {
        let template = self.sample_template(rng).to_string();
        self.fill_template(&template, rng)
            .expect("templates extracted from training parse")
    }

    /// Smoothed log-likelihood of a password under the character model.
    pub fn loglik(&self, pw: &str) -> f64 {
        let ctx_len = self.order - 1;
        let padded: Vec<char> = std::iter::repeat(STX)
            .take(ctx_len)
            .chain(pw.chars())
            .chain(std::iter::once(ETX))
            .collect();
        let mut ll = 0.0;
        for window in padded.windows(ctx_len + 1) {
            let context: String = window[..ctx_len].iter().collect();
            let next = window[ctx_len];
            let row = self.markov.get(&context);
            let count = row.and_then(|r| r.get(&next)).copied().unwrap_or(0);
            let row_total: u64 = row.map(|r| r.values().sum()).unwrap_or(0);
            let p = (count as f64 + SMOOTHING_ALPHA) / (row_total as f64 + SMOOTHING_ALPHA * VOCAB);
            ll += p.ln();
        }
        ll
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: CorpusModel =
            serde_json::from_str(text).map_err(|e| Error::Train(format!("bad model JSON: {e}")))?;
        model.validate()?;
        Ok(model)
    }
}
