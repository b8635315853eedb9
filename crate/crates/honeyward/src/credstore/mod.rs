//! Sweetword sets and their on-disk store.
//!
//! Each account stores one salt and k digests, one per sweetword, in
//! enrollment order. Nothing in the record says which index is real; that
//! mapping lives only in the honeychecker. The store serializes as JSON
//! lines sorted by uid so saves are diffable and reproducible.

pub mod kdf;

pub use kdf::{kdf_hash, KdfAlgo, KdfProfile, KdfRegistry};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Salt length generated at enrollment.
pub const SALT_LEN: usize = 16;

/// Account identifiers: 1..=64 chars from [A-Za-z0-9_.-].
pub fn is_valid_uid(uid: &str) -> bool {
    !uid.is_empty()
        && uid.len() <= 64
        && uid
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-')
}

/// One account's hashed sweetwords.
#[derive(Debug, Clone, PartialEq)]
pub struct SweetwordSet {
    pub uid: String,
    pub salt: Vec<u8>,
    pub kdf: String,
    pub digests: Vec<Vec<u8>>,
}

impl SweetwordSet {
    pub fn k(&self) -> usize {
        self.digests.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !is_valid_uid(&self.uid) {
            return Err(Error::Enroll(format!("invalid uid '{}'", self.uid)));
        }
        if self.salt.len() < 16 {
            return Err(Error::Enroll(format!(
                "uid '{}': salt must be at least 16 bytes",
                self.uid
            )));
        }
        if self.kdf.is_empty() {
            return Err(Error::Enroll(format!("uid '{}': empty kdf id", self.uid)));
        }
        if self.k() < 2 {
            return Err(Error::Enroll(format!(
                "uid '{}': need at least 2 sweetwords, got {}",
                self.uid,
                self.k()
            )));
        }
        let distinct: BTreeSet<&Vec<u8>> = self.digests.iter().collect();
        if distinct.len() != self.digests.len() {
            return Err(Error::Enroll(format!(
                "uid '{}': digests must be distinct",
                self.uid
            )));
        }
        Ok(())
    }
}

/// Wire form of one record. Field set is exactly {uid, salt, kdf, digests};
/// no index or real-password marker exists at this layer.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordWire {
    uid: String,
    salt: String,
    kdf: String,
    digests: Vec<String>,
}

impl RecordWire {
    fn from_set(set: &SweetwordSet) -> Self {
        RecordWire {
            uid: set.uid.clone(),
            salt: hex::encode(&set.salt),
            kdf: set.kdf.clone(),
            digests: set.digests.iter().map(hex::encode).collect(),
        }
    }

    fn into_set(self, line: usize) -> Result<SweetwordSet> {
        let salt = hex::decode(&self.salt)
            .map_err(|e| Error::parse(line, format!("bad salt hex: {e}")))?;
        let mut digests = Vec::with_capacity(self.digests.len());
        for d in &self.digests {
            digests.push(
                hex::decode(d).map_err(|e| Error::parse(line, format!("bad digest hex: {e}")))?,
            );
        }
        let set = SweetwordSet {
            uid: self.uid,
            salt,
            kdf: self.kdf,
            digests,
        };
        set.validate()
            .map_err(|e| Error::parse(line, e.to_string()))?;
        Ok(set)
    }
}

/// All enrolled accounts, keyed by uid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CredentialStore {
    records: BTreeMap<String, SweetwordSet>,
}

impl CredentialStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, uid: &str) -> Option<&SweetwordSet> {
        self.records.get(uid)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SweetwordSet> {
        self.records.values()
    }

    /// Hash `sweetwords` in order and add the account. `true_index` is
    /// checked against `real_password` and then discarded; the caller is
    /// responsible for registering it with the honeychecker.
    pub fn enroll(
        &mut self,
        uid: &str,
        real_password: &str,
        sweetwords: &[String],
        true_index: usize,
        profile: &KdfProfile,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        if !is_valid_uid(uid) {
            return Err(Error::Enroll(format!("invalid uid '{uid}'")));
        }
        if self.records.contains_key(uid) {
            return Err(Error::Enroll(format!("uid '{uid}' already enrolled")));
        }
        if sweetwords.len() < 2 {
            return Err(Error::Enroll(format!(
                "uid '{uid}': need at least 2 sweetwords, got {}",
                sweetwords.len()
            )));
        }
        let distinct: BTreeSet<&String> = sweetwords.iter().collect();
        if distinct.len() != sweetwords.len() {
            return Err(Error::Generation(format!(
                "uid '{uid}': sweetwords must be distinct"
            )));
        }
        match sweetwords.get(true_index) {
            Some(w) if w == real_password => {}
            _ => {
                return Err(Error::Enroll(format!(
                    "uid '{uid}': sweetwords[{true_index}] is not the real password"
                )))
            }
        }
        let mut salt = vec![0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let mut digests = Vec::with_capacity(sweetwords.len());
        for w in sweetwords {
            digests.push(kdf_hash(w, profile, &salt)?);
        }
        let set = SweetwordSet {
            uid: uid.to_string(),
            salt,
            kdf: profile.id.clone(),
            digests,
        };
        set.validate()?;
        self.records.insert(uid.to_string(), set);
        Ok(())
    }

    /// Insert an already-hashed set (used by load and by tests).
    pub fn insert_set(&mut self, set: SweetwordSet) -> Result<()> {
        set.validate()?;
        if self.records.contains_key(&set.uid) {
            return Err(Error::Enroll(format!("uid '{}' already enrolled", set.uid)));
        }
        self.records.insert(set.uid.clone(), set);
        Ok(())
    }

    /// Parse a store from JSON-lines text. `source` names the input in
    /// errors only.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut store = CredentialStore::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let wire: RecordWire = serde_json::from_str(&line)
                .map_err(|e| Error::parse(lineno, format!("bad record: {e}")))?;
            let set = wire.into_set(lineno)?;
            if store.records.contains_key(&set.uid) {
                return Err(Error::parse(lineno, format!("duplicate uid '{}'", set.uid)));
            }
            store.records.insert(set.uid.clone(), set);
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(f))
    }

    /// Serialize as JSON lines, sorted by uid.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for set in self.records.values() {
            let wire = RecordWire::from_set(set);
            out.push_str(&serde_json::to_string(&wire).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_jsonl().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn test_profile() -> KdfProfile {
        KdfRegistry::builtin().get("test-kdf").unwrap().clone()
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn words(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn enroll_stores_k_digests_in_order() {
        let mut store = CredentialStore::new();
        let sw = words(&["alpha1234", "bravo1234", "carol1234"]);
        store
            .enroll("alice", "bravo1234", &sw, 1, &test_profile(), &mut rng(1))
            .unwrap();
        let set = store.get("alice").unwrap();
        assert_eq!(set.k(), 3);
        let expect = kdf_hash("bravo1234", &test_profile(), &set.salt).unwrap();
        assert_eq!(set.digests[1], expect);
    }

    #[test]
    fn enroll_rejects_wrong_true_index() {
        let mut store = CredentialStore::new();
        let sw = words(&["alpha1234", "bravo1234", "carol1234", "delta1234"]);
        let err = store
            .enroll("alice", "bravo1234", &sw, 3, &test_profile(), &mut rng(1))
            .unwrap_err();
        assert!(matches!(err, Error::Enroll(_)), "{err}");
    }

    #[test]
    fn enroll_rejects_duplicate_uid() {
        let mut store = CredentialStore::new();
        let sw = words(&["alpha1234", "bravo1234"]);
        store
            .enroll("alice", "alpha1234", &sw, 0, &test_profile(), &mut rng(1))
            .unwrap();
        let err = store
            .enroll("alice", "alpha1234", &sw, 0, &test_profile(), &mut rng(2))
            .unwrap_err();
        assert!(matches!(err, Error::Enroll(_)), "{err}");
    }

    #[test]
    fn enroll_rejects_duplicate_sweetwords() {
        let mut store = CredentialStore::new();
        let sw = words(&["alpha1234", "alpha1234", "bravo1234"]);
        let err = store
            .enroll("alice", "alpha1234", &sw, 0, &test_profile(), &mut rng(1))
            .unwrap_err();
        assert!(matches!(err, Error::Generation(_)), "{err}");
    }

    #[test]
    fn serialized_record_has_no_index_field() {
        let mut store = CredentialStore::new();
        let sw = words(&["alpha1234", "bravo1234", "carol1234"]);
        store
            .enroll("alice", "carol1234", &sw, 2, &test_profile(), &mut rng(1))
            .unwrap();
        let text = store.to_jsonl();
        let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|s| s.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["digests", "kdf", "salt", "uid"]);
        for needle in ["index", "real", "true"] {
            assert!(!text.contains(needle), "leaked '{needle}': {text}");
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let mut store = CredentialStore::new();
        for (i, uid) in ["carol", "alice", "bob"].iter().enumerate() {
            let sw = words(&[
                &format!("word{i}a-long"),
                &format!("word{i}b-long"),
                &format!("word{i}c-long"),
            ]);
            store
                .enroll(uid, &sw[0], &sw, 0, &test_profile(), &mut rng(i as u64))
                .unwrap();
        }
        store.save(&path).unwrap();
        let loaded = CredentialStore::load(&path).unwrap();
        assert_eq!(store, loaded);
        // canonical file round-trips byte-identically
        let text = std::fs::read_to_string(&path).unwrap();
        loaded.save(&path).unwrap();
        assert_eq!(text, std::fs::read_to_string(&path).unwrap());
        // sorted by uid
        let uids: Vec<String> = text
            .lines()
            .map(|l| {
                serde_json::from_str::<serde_json::Value>(l)
                    .unwrap()
                    .get("uid")
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(uids, ["alice", "bob", "carol"]);
    }

    #[test]
    fn empty_file_is_empty_store() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        std::fs::write(&path, "").unwrap();
        let store = CredentialStore::load(&path).unwrap();
        assert!(store.is_empty());
    }

    #[test]
    fn duplicate_uid_line_is_parse_error() {
        let line = r#"{"uid":"alice","salt":"000102030405060708090a0b0c0d0e0f","kdf":"test-kdf","digests":["00ff","11ee"]}"#;
        let text = format!("{line}\n{line}\n");
        let err = CredentialStore::from_reader(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let good = r#"{"uid":"alice","salt":"000102030405060708090a0b0c0d0e0f","kdf":"test-kdf","digests":["00ff","11ee"]}"#;
        let text = format!("{good}\nnot json\n");
        let err = CredentialStore::from_reader(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let bad = r#"{"uid":"alice","salt":"000102030405060708090a0b0c0d0e0f","kdf":"test-kdf","digests":["00ff","11ee"],"true_index":1}"#;
        assert!(CredentialStore::from_reader(bad.as_bytes()).is_err());
    }

    #[test]
    fn uid_validation() {
        assert!(is_valid_uid("alice"));
        assert!(is_valid_uid("a.b-c_9"));
        assert!(!is_valid_uid(""));
        assert!(!is_valid_uid("has space"));
        assert!(!is_valid_uid(&"x".repeat(65)));
        assert!(is_valid_uid(&"x".repeat(64)));
    }

    #[test]
    fn set_invariants_enforced() {
        let mut set = SweetwordSet {
            uid: "alice".into(),
            salt: vec![0u8; 16],
            kdf: "test-kdf".into(),
            digests: vec![vec![1], vec![2]],
        };
        set.validate().unwrap();
        set.digests = vec![vec![1]];
        assert!(set.validate().is_err());
        set.digests = vec![vec![1], vec![1]];
        assert!(set.validate().is_err());
        set.digests = vec![vec![1], vec![2]];
        set.salt = vec![0u8; 8];
        assert!(set.validate().is_err());
    }
}
