//! KDF profiles and password hashing.
//!
//! A profile names an algorithm plus its cost parameters and carries a
//! benchmark guess rate for crack-time estimates. The registry ships the
//! usual production algorithms and a fast `test-kdf` (single-iteration
//! keyed hash) so desk-scale tests do not pay memory-hard costs.

use hmac::{Hmac, Mac};
use serde::{Deserialize, Serialize};
use sha2::Sha256;
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Hashing algorithm behind a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KdfAlgo {
    #[serde(rename = "argon2id")]
    Argon2id,
    #[serde(rename = "bcrypt")]
    Bcrypt,
    #[serde(rename = "scrypt")]
    Scrypt,
    #[serde(rename = "pbkdf2-sha256")]
    Pbkdf2Sha256,
    #[serde(rename = "test-kdf")]
    TestKdf,
}

impl KdfAlgo {
    pub fn from_id(id: &str) -> Result<Self> {
        Ok(match id {
            "argon2id" => KdfAlgo::Argon2id,
            "bcrypt" => KdfAlgo::Bcrypt,
            "scrypt" => KdfAlgo::Scrypt,
            "pbkdf2-sha256" => KdfAlgo::Pbkdf2Sha256,
            "test-kdf" => KdfAlgo::TestKdf,
            other => return Err(Error::Config(format!("unknown KDF algorithm '{other}'"))),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            KdfAlgo::Argon2id => "argon2id",
            KdfAlgo::Bcrypt => "bcrypt",
            KdfAlgo::Scrypt => "scrypt",
            KdfAlgo::Pbkdf2Sha256 => "pbkdf2-sha256",
            KdfAlgo::TestKdf => "test-kdf",
        }
    }
}

/// A named hashing configuration.
///
/// `memory_cost` is in bytes. `time_cost` is algorithm-specific: passes for
/// argon2id, log2 work factor for bcrypt, log2(N) for scrypt, iterations
/// for pbkdf2. `bench_rate` is guesses per second on reference hardware.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdfProfile {
    pub id: String,
    pub algo: KdfAlgo,
    pub memory_cost: u64,
    pub time_cost: u32,
    pub parallelism: u32,
    pub bench_rate: f64,
}

impl KdfProfile {
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Config("KDF profile id must be non-empty".into()));
        }
        if !(self.bench_rate > 0.0) {
            return Err(Error::Config(format!(
                "profile '{}': bench_rate must be > 0",
                self.id
            )));
        }
        if self.time_cost < 1 {
            return Err(Error::Config(format!(
                "profile '{}': time_cost must be >= 1",
                self.id
            )));
        }
        if self.parallelism < 1 {
            return Err(Error::Config(format!(
                "profile '{}': parallelism must be >= 1",
                self.id
            )));
        }
        Ok(())
    }
}

/// Profiles keyed by id.
#[derive(Debug, Clone)]
pub struct KdfRegistry {
    profiles: BTreeMap<String, KdfProfile>,
}

impl KdfRegistry {
    pub fn empty() -> Self {
        KdfRegistry {
            profiles: BTreeMap::new(),
        }
    }

    /// Built-in profiles: argon2id (m=512MB, t=3, p=1), bcrypt (cost=12),
    /// scrypt (N=2^15, r=8, p=1), pbkdf2-sha256 (600k iterations), and the
    /// test-only test-kdf.
    pub fn builtin() -> Self {
        let mut reg = KdfRegistry::empty();
        for p in [
            KdfProfile {
                id: "argon2id".into(),
                algo: KdfAlgo::Argon2id,
                memory_cost: 512 * 1024 * 1024,
                time_cost: 3,
                parallelism: 1,
                bench_rate: 60.0,
            },
            KdfProfile {
                id: "bcrypt".into(),
                algo: KdfAlgo::Bcrypt,
                memory_cost: 4 * 1024,
                time_cost: 12,
                parallelism: 1,
                bench_rate: 200_000.0,
            },
            KdfProfile {
                id: "scrypt".into(),
                algo: KdfAlgo::Scrypt,
                // 128 * r * N bytes with N=2^15, r=8
                memory_cost: 128 * 8 * (1 << 15),
                time_cost: 15,
                parallelism: 1,
                bench_rate: 4_500.0,
            },
            KdfProfile {
                id: "pbkdf2-sha256".into(),
                algo: KdfAlgo::Pbkdf2Sha256,
                memory_cost: 0,
                time_cost: 600_000,
                parallelism: 1,
                bench_rate: 3_600.0,
            },
            KdfProfile {
                id: "test-kdf".into(),
                algo: KdfAlgo::TestKdf,
                memory_cost: 0,
                time_cost: 1,
                parallelism: 1,
                bench_rate: 1e9,
            },
        ] {
            reg.insert(p).expect("builtin profiles are valid");
        }
        reg
    }

    pub fn insert(&mut self, profile: KdfProfile) -> Result<()> {
        profile.validate()?;
        self.profiles.insert(profile.id.clone(), profile);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&KdfProfile> {
        self.profiles
            .get(id)
            .ok_or_else(|| Error::Config(format!("unknown KDF profile '{id}'")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &KdfProfile> {
        self.profiles.values()
    }

    /// The three production profiles benchmarked in the crack-time tables,
    /// in presentation order.
    pub fn benchmark_rows(&self) -> Vec<&KdfProfile> {
        ["argon2id", "bcrypt", "scrypt"]
            .iter()
            .map(|id| self.get(id).expect("builtin profile present"))
            .collect()
    }
}

impl Default for KdfRegistry {
    fn default() -> Self {
        KdfRegistry::builtin()
    }
}

/// Hash `password` under `profile` with `salt`.
///
/// Digest lengths are algorithm-fixed: 32 bytes for argon2id, scrypt,
/// pbkdf2-sha256 and test-kdf; 24 bytes for bcrypt (its raw primitive
/// output). bcrypt uses the first 16 salt bytes, the others use the whole
/// salt.
pub fn kdf_hash(password: &str, profile: &KdfProfile, salt: &[u8]) -> Result<Vec<u8>> {
    if password.is_empty() {
        return Err(Error::Config("password must be non-empty".into()));
    }
    if salt.len() < 8 {
        return Err(Error::Config(format!(
            "salt must be at least 8 bytes, got {}",
            salt.len()
        )));
    }
    match profile.algo {
        KdfAlgo::Argon2id => {
            let m_kib = (profile.memory_cost / 1024)
                .try_into()
                .map_err(|_| Error::Config(format!("profile '{}': memory_cost too large", profile.id)))?;
            let params =
                argon2::Params::new(m_kib, profile.time_cost, profile.parallelism, Some(32))
                    .map_err(|e| Error::Config(format!("profile '{}': {e}", profile.id)))?;
            let a = argon2::Argon2::new(
                argon2::Algorithm::Argon2id,
                argon2::Version::V0x13,
                params,
            );
            let mut out = vec![0u8; 32];
            a.hash_password_into(password.as_bytes(), salt, &mut out)
                .map_err(|e| Error::Config(format!("argon2id failure: {e}")))?;
            Ok(out)
        }
        KdfAlgo::Bcrypt => {
            if !(4..=31).contains(&profile.time_cost) {
                return Err(Error::Config(format!(
                    "profile '{}': bcrypt cost must be in 4..=31",
                    profile.id
                )));
            }
            if password.len() > 72 {
                return Err(Error::Config("bcrypt passwords are limited to 72 bytes".into()));
            }
            let mut s = [0u8; 16];
            s.copy_from_slice(&salt[..16]);
            // the $2b$ scheme hashes password + NUL, capped at 72 bytes
            let mut buf = password.as_bytes().to_vec();
            buf.push(0);
            buf.truncate(72);
            Ok(bcrypt::bcrypt(profile.time_cost, s, &buf).to_vec())
        }
        KdfAlgo::Scrypt => {
            let log_n: u8 = profile
                .time_cost
                .try_into()
                .map_err(|_| Error::Config(format!("profile '{}': log_n out of range", profile.id)))?;
            let n: u64 = 1u64
                .checked_shl(log_n as u32)
                .ok_or_else(|| Error::Config(format!("profile '{}': log_n out of range", profile.id)))?;
            let r = profile.memory_cost / (128 * n);
            if r < 1 {
                return Err(Error::Config(format!(
                    "profile '{}': memory_cost {} too small for N=2^{log_n}",
                    profile.id, profile.memory_cost
                )));
            }
            let params = scrypt::Params::new(log_n, r as u32, profile.parallelism, 32)
                .map_err(|e| Error::Config(format!("profile '{}': {e}", profile.id)))?;
            let mut out = vec![0u8; 32];
            scrypt::scrypt(password.as_bytes(), salt, &params, &mut out)
                .map_err(|e| Error::Config(format!("scrypt failure: {e}")))?;
            Ok(out)
        }
        KdfAlgo::Pbkdf2Sha256 => {
            let mut out = vec![0u8; 32];
            pbkdf2::pbkdf2_hmac::<Sha256>(
                password.as_bytes(),
                salt,
                profile.time_cost,
                &mut out,
            );
            Ok(out)
        }
        KdfAlgo::TestKdf => {
            let mut mac = Hmac::<Sha256>::new_from_slice(salt)
                .map_err(|e| Error::Config(format!("test-kdf failure: {e}")))?;
            mac.update(password.as_bytes());
            Ok(mac.finalize().into_bytes().to_vec())
        }
    }
}
