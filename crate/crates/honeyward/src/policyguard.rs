//! Password-policy checks for single passwords and whole sweetword sets.
//!
//! The policy is a small pwquality-style rule set: length, class mix,
//! repeat runs, an exact-match dictionary check, and absolute per-class
//! minimum counts. The set-level check exists because a policy that rejects
//! some decoys but not the real password makes the decoys distinguishable;
//! that outcome is reported, not silently tolerated.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Character classes counted by the policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CharClass {
    Digit,
    Upper,
    Lower,
    Other,
}

impl CharClass {
    pub fn of(c: char) -> CharClass {
        if c.is_ascii_digit() {
            CharClass::Digit
        } else if c.is_ascii_uppercase() {
            CharClass::Upper
        } else if c.is_ascii_lowercase() {
            CharClass::Lower
        } else {
            CharClass::Other
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CharClass::Digit => "digit",
            CharClass::Upper => "upper",
            CharClass::Lower => "lower",
            CharClass::Other => "other",
        }
    }
}

/// One failed rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MinLen { need: u32, have: u32 },
    MinClass { need: u32, have: u32 },
    MaxRepeat { allowed: u32, run: u32 },
    Dict,
    ClassMin { class: CharClass, need: u32, have: u32 },
}

impl Violation {
    /// Machine-readable rule code.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::MinLen { .. } => "MINLEN",
            Violation::MinClass { .. } => "MINCLASS",
            Violation::MaxRepeat { .. } => "MAXREPEAT",
            Violation::Dict => "DICT",
            Violation::ClassMin { .. } => "CLASSMIN",
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MinLen { need, have } => write!(f, "MINLEN: {have} chars, need {need}"),
            Violation::MinClass { need, have } => {
                write!(f, "MINCLASS: {have} classes, need {need}")
            }
            Violation::MaxRepeat { allowed, run } => {
                write!(f, "MAXREPEAT: run of {run}, allowed {allowed}")
            }
            Violation::Dict => write!(f, "DICT: wordlist match"),
            Violation::ClassMin { class, need, have } => {
                write!(f, "CLASSMIN: {} {} chars, need {need}", have, class.name())
            }
        }
    }
}

/// pwquality-style rule set. The credit fields are absolute minimum counts
/// per class, not libpwquality credits.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    pub minlen: u32,
    pub minclass: u32,
    pub maxrepeat: u32,
    pub dictcheck: bool,
    pub dictpath: Option<PathBuf>,
    pub dcredit: u32,
    pub ucredit: u32,
    pub lcredit: u32,
    pub ocredit: u32,
    wordlist: BTreeSet<String>,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            minlen: 8,
            minclass: 1,
            maxrepeat: 4,
            dictcheck: false,
            dictpath: None,
            dcredit: 0,
            ucredit: 0,
            lcredit: 0,
            ocredit: 0,
            wordlist: BTreeSet::new(),
        }
    }
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        if self.minlen < 1 {
            return Err(Error::Config("minlen must be >= 1".into()));
        }
        if self.minclass > 4 {
            return Err(Error::Config(format!(
                "minclass must be <= 4, got {}",
                self.minclass
            )));
        }
        if self.maxrepeat < 1 {
            return Err(Error::Config("maxrepeat must be >= 1".into()));
        }
        Ok(())
    }

    /// Replace the dictionary wordlist (stored lowercased).
    pub fn set_wordlist(&mut self, words: impl IntoIterator<Item = String>) {
        self.wordlist = words.into_iter().map(|w| w.to_lowercase()).collect();
    }

    pub fn wordlist_len(&self) -> usize {
        self.wordlist.len()
    }

    /// Load the wordlist from `dictpath`, resolved against `base` when
    /// relative. One word per line; blank lines and `#` comments skipped.
    pub fn load_wordlist(&mut self, base: &Path) -> Result<()> {
        let rel = match &self.dictpath {
            Some(p) => p.clone(),
            None => {
                return Err(Error::Config(
                    "dictcheck=1 requires dictpath to be set".into(),
                ))
            }
        };
        let path = if rel.is_absolute() {
            rel
        } else {
            base.join(rel)
        };
        let text = std::fs::read_to_string(&path)?;
        self.set_wordlist(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string),
        );
        Ok(())
    }
}

fn parse_uint(key: &str, value: &str) -> Result<u32> {
    value
        .trim()
        .parse::<u32>()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got '{value}'")))
}

/// Parse `key=value` lines with `#` comments. Unknown keys are errors, not
/// ignored: a silently dropped rule is exactly the misconfiguration the
/// set-level check is meant to catch.
pub fn parse_policy(text: &str) -> Result<Policy> {
    let mut policy = Policy::default();
    for raw in text.lines() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{line}'")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "minlen" => policy.minlen = parse_uint(key, value)?,
            "minclass" => policy.minclass = parse_uint(key, value)?,
            "maxrepeat" => policy.maxrepeat = parse_uint(key, value)?,
            "dictcheck" => {
                policy.dictcheck = match parse_uint(key, value)? {
                    0 => false,
                    1 => true,
                    n => {
                        return Err(Error::Config(format!("dictcheck: expected 0 or 1, got {n}")))
                    }
                }
            }
            "dictpath" => policy.dictpath = Some(PathBuf::from(value)),
            "dcredit" => policy.dcredit = parse_uint(key, value)?,
            "ucredit" => policy.ucredit = parse_uint(key, value)?,
            "lcredit" => policy.lcredit = parse_uint(key, value)?,
            "ocredit" => policy.ocredit = parse_uint(key, value)?,
            other => return Err(Error::Config(format!("unknown policy key '{other}'"))),
        }
    }
    policy.validate()?;
    Ok(policy)
}

/// Canonical text form; `parse_policy(render_policy(p))` reproduces `p`.
pub fn render_policy(policy: &Policy) -> String {
    let mut out = format!(
        "minlen={}\nminclass={}\nmaxrepeat={}\ndictcheck={}\n",
        policy.minlen,
        policy.minclass,
        policy.maxrepeat,
        u8::from(policy.dictcheck),
    );
    if let Some(p) = &policy.dictpath {
        out.push_str(&format!("dictpath={}\n", p.display()));
    }
    out.push_str(&format!(
        "dcredit={}\nucredit={}\nlcredit={}\nocredit={}\n",
        policy.dcredit, policy.ucredit, policy.lcredit, policy.ocredit
    ));
    out
}

/// Parse a policy file and load its wordlist if dictcheck is on. Relative
/// dictpath resolves against the policy file's directory.
pub fn load_policy(path: impl AsRef<Path>) -> Result<Policy> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut policy = parse_policy(&text)?;
    if policy.dictcheck {
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        policy.load_wordlist(base)?;
    }
    Ok(policy)
}

fn longest_run(pw: &str) -> u32 {
    let mut best = 0u32;
    let mut run = 0u32;
    let mut prev: Option<char> = None;
    for c in pw.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            run = 1;
            prev = Some(c);
        }
        best = best.max(run);
    }
    best
}

/// Check one password; empty result means it passes.
pub fn check_password(policy: &Policy, pw: &str) -> Vec<Violation> {
    let mut violations = Vec::new();
    let len = pw.chars().count() as u32;
    if len < policy.minlen {
        violations.push(Violation::MinLen {
            need: policy.minlen,
            have: len,
        });
    }
    let mut counts = [0u32; 4];
    for c in pw.chars() {
        counts[CharClass::of(c) as usize] += 1;
    }
    let classes = counts.iter().filter(|&&n| n > 0).count() as u32;
    if classes < policy.minclass {
        violations.push(Violation::MinClass {
            need: policy.minclass,
            have: classes,
        });
    }
    let run = longest_run(pw);
    if run > policy.maxrepeat {
        violations.push(Violation::MaxRepeat {
            allowed: policy.maxrepeat,
            run,
        });
    }
    if policy.dictcheck && policy.wordlist.contains(&pw.to_lowercase()) {
        violations.push(Violation::Dict);
    }
    for (class, need) in [
        (CharClass::Digit, policy.dcredit),
        (CharClass::Upper, policy.ucredit),
        (CharClass::Lower, policy.lcredit),
        (CharClass::Other, policy.ocredit),
    ] {
        let have = counts[class as usize];
        if have < need {
            violations.push(Violation::ClassMin { class, need, have });
        }
    }
    violations
}

/// Overall verdict for a sweetword set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetStatus {
    /// Every member passes.
    Ok,
    /// Some pass and some fail: the failures are tell-tale decoys (or a
    /// rejected real password), so the set leaks.
    Distinguishable,
    /// Nothing passes.
    AllRejected,
}

/// Per-index verdicts plus the set-level status.
#[derive(Debug, Clone, PartialEq)]
pub struct SetReport {
    pub verdicts: Vec<Vec<Violation>>,
    pub status: SetStatus,
}

impl SetReport {
    /// Indices that failed at least one rule.
    pub fn offending_indices(&self) -> Vec<usize> {
        self.verdicts
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Check every member of a sweetword set against the policy.
pub fn check_sweetword_set(policy: &Policy, sweetwords: &[String]) -> Result<SetReport> {
    if sweetwords.is_empty() {
        return Err(Error::parse(0, "sweetword set is empty"));
    }
    let verdicts: Vec<Vec<Violation>> = sweetwords
        .iter()
        .map(|w| check_password(policy, w))
        .collect();
    let passing = verdicts.iter().filter(|v| v.is_empty()).count();
    let status = if passing == verdicts.len() {
        SetStatus::Ok
    } else if passing == 0 {
        SetStatus::AllRejected
    } else {
        SetStatus::Distinguishable
    };
    Ok(SetReport { verdicts, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn codes(violations: &[Violation]) -> Vec<&'static str> {
        violations.iter().map(Violation::code).collect()
    }

    #[test]
    fn parse_overrides_and_defaults() {
        let p = parse_policy("minlen=10\nminclass=3\n").unwrap();
        assert_eq!(p.minlen, 10);
        assert_eq!(p.minclass, 3);
        assert_eq!(p.maxrepeat, 4);
        assert!(!p.dictcheck);
    }

    #[test]
    fn parse_empty_is_defaults() {
        let p = parse_policy("").unwrap();
        assert_eq!(p, Policy::default());
        assert_eq!(p.minlen, 8);
        assert_eq!(p.minclass, 1);
        assert_eq!(p.maxrepeat, 4);
    }

    #[test]
    fn parse_rejects_unknown_key() {
        let err = parse_policy("minlen=8\nbogus_param=1\n").unwrap_err();
        assert!(err.to_string().contains("bogus_param"), "{err}");
    }

    #[test]
    fn parse_rejects_non_integer() {
        assert!(parse_policy("minlen=eight\n").unwrap_err()
            .to_string()
            .contains("minlen"));
        assert!(parse_policy("minclass=5\n").is_err());
        assert!(parse_policy("minlen=0\n").is_err());
        assert!(parse_policy("dictcheck=2\n").is_err());
    }

    #[test]
    fn parse_handles_comments_and_blanks() {
        let p = parse_policy("# a comment\n\nminlen=9 # trailing\n").unwrap();
        assert_eq!(p.minlen, 9);
    }

    #[test]
    fn render_parse_round_trip() {
        let mut p = Policy::default();
        p.minlen = 12;
        p.minclass = 2;
        p.dictcheck = true;
        p.dictpath = Some(PathBuf::from("words.txt"));
        p.ocredit = 1;
        let rendered = render_policy(&p);
        let parsed = parse_policy(&rendered).unwrap();
        assert_eq!(parsed, p);
        // canonical form is a fixed point
        assert_eq!(render_policy(&parsed), rendered);
    }

    #[test]
    fn minlen_violation() {
        let p = Policy::default();
        assert_eq!(codes(&check_password(&p, "abc12")), ["MINLEN"]);
        assert!(check_password(&p, "abc12345").is_empty());
    }

    #[test]
    fn maxrepeat_violation() {
        let mut p = Policy::default();
        p.maxrepeat = 2;
        assert_eq!(codes(&check_password(&p, "aaab1234")), ["MAXREPEAT"]);
        assert!(check_password(&p, "aab12334").is_empty());
    }

    #[test]
    fn minclass_violation() {
        let mut p = Policy::default();
        p.minclass = 3;
        assert_eq!(codes(&check_password(&p, "abcdefgh")), ["MINCLASS"]);
        assert!(check_password(&p, "Abcdefg1").is_empty());
    }

    #[test]
    fn dict_violation_exact_lowercase() {
        let mut p = Policy::default();
        p.dictcheck = true;
        p.set_wordlist(["password".to_string()]);
        assert_eq!(codes(&check_password(&p, "password")), ["DICT"]);
        assert_eq!(codes(&check_password(&p, "PASSWORD")), ["DICT"]);
        assert!(check_password(&p, "password1").is_empty());
    }

    #[test]
    fn class_minimum_violation() {
        let mut p = Policy::default();
        p.dcredit = 2;
        p.ucredit = 1;
        let v = check_password(&p, "abcdefg1");
        assert_eq!(codes(&v), ["CLASSMIN", "CLASSMIN"]);
        assert!(check_password(&p, "Abcdef12").is_empty());
    }

    #[test]
    fn set_ok_when_all_pass() {
        let p = Policy::default();
        let words: Vec<String> = ["sunflower7", "riverbank3", "maplecrest9"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let report = check_sweetword_set(&p, &words).unwrap();
        assert_eq!(report.status, SetStatus::Ok);
        assert!(report.offending_indices().is_empty());
    }

    #[test]
    fn set_distinguishable_names_offender() {
        let p = Policy::default();
        let words: Vec<String> = ["sunflower7", "riverbank3", "shrt1", "maplecrest9"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let report = check_sweetword_set(&p, &words).unwrap();
        assert_eq!(report.status, SetStatus::Distinguishable);
        assert_eq!(report.offending_indices(), [2]);
    }

    #[test]
    fn set_all_rejected() {
        let p = Policy::default();
        let words: Vec<String> = ["a1", "b2", "c3"].iter().map(|s| s.to_string()).collect();
        let report = check_sweetword_set(&p, &words).unwrap();
        assert_eq!(report.status, SetStatus::AllRejected);
    }

    #[test]
    fn set_empty_is_parse_error() {
        let err = check_sweetword_set(&Policy::default(), &[]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 0, .. }), "{err}");
    }

    #[test]
    fn load_policy_resolves_relative_dictpath() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("words.txt"), "# banned\npassword\nletmein\n").unwrap();
        std::fs::write(
            dir.path().join("policy.conf"),
            "minlen=6\ndictcheck=1\ndictpath=words.txt\n",
        )
        .unwrap();
        let p = load_policy(dir.path().join("policy.conf")).unwrap();
        assert_eq!(p.wordlist_len(), 2);
        assert_eq!(codes(&check_password(&p, "letmein")), ["DICT"]);
    }

    fn arb_policy() -> impl Strategy<Value = Policy> {
        (1u32..16, 0u32..5, 1u32..6, 0u32..3, 0u32..3).prop_map(
            |(minlen, minclass, maxrepeat, dcredit, ucredit)| {
                let mut p = Policy::default();
                p.minlen = minlen;
                p.minclass = minclass;
                p.maxrepeat = maxrepeat;
                p.dcredit = dcredit;
                p.ucredit = ucredit;
                p
            },
        )
    }

    proptest! {
        #[test]
        fn set_ok_iff_every_member_passes(
            policy in arb_policy(),
            words in proptest::collection::vec("[a-zA-Z0-9!@ ]{1,12}", 1..8),
        ) {
            let report = check_sweetword_set(&policy, &words).unwrap();
            let all_pass = words.iter().all(|w| check_password(&policy, w).is_empty());
            prop_assert_eq!(report.status == SetStatus::Ok, all_pass);
        }

        #[test]
        fn render_parse_identity(policy in arb_policy()) {
            let parsed = parse_policy(&render_policy(&policy)).unwrap();
            prop_assert_eq!(parsed, policy);
        }
    }
}
