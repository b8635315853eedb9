//! The honeychecker: an isolated map from uid to the true sweetword index.
//!
//! The map lives in memory only and is deliberately not serializable; a
//! restart forgets everything and accounts are re-registered at the next
//! enrollment. The checker never sees passwords or digests, only uids and
//! integer indices.

pub mod client;
pub mod protocol;
pub mod server;

pub use client::{CheckerApi, InProcessChecker, TcpCheckerClient};
pub use protocol::{ErrCode, Request, Response};
pub use server::{serve, CheckerHandle};

use std::collections::BTreeMap;

/// Answer to an index check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckVerdict {
    Real,
    Honey,
}

/// uid -> (k, true_index). No Serialize on purpose: this state must never
/// reach durable storage.
#[derive(Debug, Default)]
pub struct CheckerIndex {
    entries: BTreeMap<String, (usize, usize)>,
}

impl CheckerIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Create or replace an entry (last write wins).
    pub fn set(&mut self, uid: &str, k: usize, index: usize) -> Result<(), ErrCode> {
        if k < 1 || index >= k {
            return Err(ErrCode::Range);
        }
        self.entries.insert(uid.to_string(), (k, index));
        Ok(())
    }

    pub fn check(&self, uid: &str, index: usize) -> Result<CheckVerdict, ErrCode> {
        let (k, true_index) = self.entries.get(uid).ok_or(ErrCode::Unknown)?;
        if index >= *k {
            return Err(ErrCode::Range);
        }
        Ok(if index == *true_index {
            CheckVerdict::Real
        } else {
            CheckVerdict::Honey
        })
    }

    /// Idempotent removal.
    pub fn remove(&mut self, uid: &str) {
        self.entries.remove(uid);
    }

    /// Run one command against the map.
    pub fn apply(&mut self, request: &Request) -> Response {
        match request {
            Request::Set { uid, k, index } => match self.set(uid, *k, *index) {
                Ok(()) => Response::Ok,
                Err(code) => Response::Err(code),
            },
            Request::Check { uid, index } => match self.check(uid, *index) {
                Ok(CheckVerdict::Real) => Response::Real,
                Ok(CheckVerdict::Honey) => Response::Honey,
                Err(code) => Response::Err(code),
            },
            Request::Remove { uid } => {
                self.remove(uid);
                Response::Ok
            }
            Request::Ping => Response::Pong,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_then_check() {
        let mut idx = CheckerIndex::new();
        idx.set("alice", 20, 3).unwrap();
        assert_eq!(idx.check("alice", 3), Ok(CheckVerdict::Real));
        assert_eq!(idx.check("alice", 2), Ok(CheckVerdict::Honey));
    }

    #[test]
    fn set_rejects_out_of_range_index() {
        let mut idx = CheckerIndex::new();
        assert_eq!(idx.set("alice", 20, 20), Err(ErrCode::Range));
        assert_eq!(idx.set("alice", 0, 0), Err(ErrCode::Range));
        assert!(idx.is_empty());
    }

    #[test]
    fn last_write_wins() {
        let mut idx = CheckerIndex::new();
        idx.set("alice", 20, 3).unwrap();
        idx.set("alice", 20, 9).unwrap();
        assert_eq!(idx.check("alice", 9), Ok(CheckVerdict::Real));
        assert_eq!(idx.check("alice", 3), Ok(CheckVerdict::Honey));
    }

    #[test]
    fn unknown_uid_and_range() {
        let mut idx = CheckerIndex::new();
        assert_eq!(idx.check("bob", 0), Err(ErrCode::Unknown));
        idx.set("alice", 4, 1).unwrap();
        assert_eq!(idx.check("alice", 4), Err(ErrCode::Range));
    }

    #[test]
    fn remove_is_idempotent_and_reenrollable() {
        let mut idx = CheckerIndex::new();
        idx.set("alice", 20, 3).unwrap();
        idx.remove("alice");
        assert_eq!(idx.check("alice", 3), Err(ErrCode::Unknown));
        idx.remove("alice");
        idx.set("alice", 20, 5).unwrap();
        assert_eq!(idx.check("alice", 5), Ok(CheckVerdict::Real));
    }

    #[test]
    fn exactly_one_real_per_account() {
        let mut idx = CheckerIndex::new();
        let k = 20;
        idx.set("alice", k, 7).unwrap();
        let reals: Vec<usize> = (0..k)
            .filter(|&i| idx.check("alice", i) == Ok(CheckVerdict::Real))
            .collect();
        assert_eq!(reals, [7]);
        let honeys = (0..k)
            .filter(|&i| idx.check("alice", i) == Ok(CheckVerdict::Honey))
            .count();
        assert_eq!(honeys, k - 1);
    }

    #[test]
    fn apply_maps_requests_to_responses() {
        let mut idx = CheckerIndex::new();
        assert_eq!(
            idx.apply(&Request::parse("SET alice 20 7").unwrap()),
            Response::Ok
        );
        assert_eq!(
            idx.apply(&Request::parse("CHECK alice 7").unwrap()),
            Response::Real
        );
        assert_eq!(
            idx.apply(&Request::parse("CHECK alice 6").unwrap()),
            Response::Honey
        );
        assert_eq!(
            idx.apply(&Request::parse("CHECK bob 0").unwrap()),
            Response::Err(ErrCode::Unknown)
        );
        assert_eq!(
            idx.apply(&Request::parse("REMOVE alice").unwrap()),
            Response::Ok
        );
        assert_eq!(idx.apply(&Request::Ping), Response::Pong);
    }
}
