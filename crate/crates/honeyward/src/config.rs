//! INI-style application configuration: one file carrying the password
//! policy, the responder weights, and extra KDF profiles.
//!
//! Three section kinds are recognized: `[policy]` (pwquality keys),
//! `[responder]`, and `[kdf.<id>]`. Missing sections fall back to the
//! built-in defaults; unknown sections and keys are rejected rather
//! than ignored so a typo cannot silently weaken a deployment.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use crate::credstore::kdf::{KdfAlgo, KdfProfile, KdfRegistry};
use crate::error::{Error, Result};
use crate::policyguard::{parse_policy, Policy};
use crate::responder::ResponderConfig;

/// Everything a serving command needs from `--config`.
#[derive(Debug, Clone)]
pub struct AppConfig {
    pub policy: Policy,
    pub responder: ResponderConfig,
    pub registry: KdfRegistry,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            policy: Policy::default(),
            responder: ResponderConfig::default(),
            registry: KdfRegistry::builtin(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(section: &str, key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| {
        Error::Config(format!(
            "[{section}] {key}: cannot parse '{value}'"
        ))
    })
}

fn apply_responder(config: &mut ResponderConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "w_ip" => config.w_ip = parse_num("responder", key, value)?,
        "w_geo" => config.w_geo = parse_num("responder", key, value)?,
        "w_device" => config.w_device = parse_num("responder", key, value)?,
        "w_history" => config.w_history = parse_num("responder", key, value)?,
        "honey_bonus" => config.honey_bonus = parse_num("responder", key, value)?,
        "t_silent" => config.t_silent = parse_num("responder", key, value)?,
        "t_stepup" => config.t_stepup = parse_num("responder", key, value)?,
        "t_restrict" => config.t_restrict = parse_num("responder", key, value)?,
        "window_hours" => {
            let hours: f64 = parse_num("responder", key, value)?;
            if !hours.is_finite() || hours <= 0.0 {
                return Err(Error::Config(format!(
                    "[responder] window_hours must be positive, got {value}"
                )));
            }
            config.window = Duration::from_secs_f64(hours * 3600.0);
        }
        "lockout_secs" => {
            let secs: u64 = parse_num("responder", key, value)?;
            config.lockout = Duration::from_secs(secs);
        }
        other => {
            return Err(Error::Config(format!(
                "[responder] unknown key '{other}'"
            )))
        }
    }
    Ok(())
}

fn build_profile(id: &str, entries: &[(usize, String, String)]) -> Result<KdfProfile> {
    let mut algo = None;
    let mut memory_kib = 0u64;
    let mut time_cost = None;
    let mut parallelism = 1u32;
    let mut bench_rate = None;
    let section = format!("kdf.{id}");
    for (_, key, value) in entries {
        match key.as_str() {
            "algo" => algo = Some(KdfAlgo::from_id(value.trim())?),
            "memory_kib" => memory_kib = parse_num(&section, key, value)?,
            "time" => time_cost = Some(parse_num(&section, key, value)?),
            "parallelism" => parallelism = parse_num(&section, key, value)?,
            "bench_rate" => bench_rate = Some(parse_num(&section, key, value)?),
            other => {
                return Err(Error::Config(format!(
                    "[{section}] unknown key '{other}'"
                )))
            }
        }
    }
    let algo =
        algo.ok_or_else(|| Error::Config(format!("[{section}] missing required key 'algo'")))?;
    let time_cost =
        time_cost.ok_or_else(|| Error::Config(format!("[{section}] missing required key 'time'")))?;
    let bench_rate = bench_rate
        .ok_or_else(|| Error::Config(format!("[{section}] missing required key 'bench_rate'")))?;
    Ok(KdfProfile {
        id: id.to_string(),
        algo,
        memory_cost: memory_kib * 1024,
        time_cost,
        parallelism,
        bench_rate,
    })
}

/// Parse configuration text. Unknown sections or keys fail; sections may
/// appear at most once.
pub fn parse_config(text: &str) -> Result<AppConfig> {
    let mut sections: BTreeMap<String, Vec<(usize, String, String)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(Error::parse(line_no, format!("unterminated section '{raw}'")));
            };
            let name = name.trim();
            let known = name == "policy"
                || name == "responder"
                || name
                    .strip_prefix("kdf.")
                    .is_some_and(|id| !id.trim().is_empty());
            if !known {
                return Err(Error::parse(line_no, format!("unknown section '[{name}]'")));
            }
            if sections.contains_key(name) {
                return Err(Error::parse(line_no, format!("duplicate section '[{name}]'")));
            }
            sections.insert(name.to_string(), Vec::new());
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(line_no, format!("expected 'key = value', got '{raw}'")));
        };
        let Some(section) = &current else {
            return Err(Error::parse(
                line_no,
                format!("'{raw}' appears before any [section] header"),
            ));
        };
        sections
            .get_mut(section)
            .expect("current section exists")
            .push((line_no, key.trim().to_string(), value.trim().to_string()));
    }

    let mut config = AppConfig::default();
    for (name, entries) in &sections {
        if name == "policy" {
            let body: String = entries
                .iter()
                .map(|(_, k, v)| format!("{k} = {v}\n"))
                .collect();
            config.policy = parse_policy(&body)?;
        } else if name == "responder" {
            for (_, key, value) in entries {
                apply_responder(&mut config.responder, key, value)?;
            }
            config.responder.validate()?;
        } else if let Some(id) = name.strip_prefix("kdf.") {
            config.registry.insert(build_profile(id.trim(), entries)?)?;
        }
    }
    Ok(config)
}

/// Read and parse a configuration file. A relative policy dictpath is
/// resolved against the file's directory.
pub fn load_config(path: impl AsRef<Path>) -> Result<AppConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut config = parse_config(&text)?;
    if config.policy.dictcheck {
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.policy.load_wordlist(base)?;
    }
    Ok(config)
}
