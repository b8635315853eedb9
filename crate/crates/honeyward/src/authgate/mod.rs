//! Login middleware over a sweetword store and a remote honeychecker.
//!
//! A login costs exactly one KDF evaluation. The resulting digest is
//! compared against all k stored digests with constant-time equality and
//! no short-circuit, so a submitted decoy takes the same comparison work
//! as the real password. Only when some digest matches is the checker
//! asked which index is real; a miss never touches the checker, and the
//! checker never sees password material either way.

pub mod alert;
pub mod http;

pub use alert::{AlertEvent, AlertSink};

use std::str::FromStr;
use std::sync::Arc;
use std::time::{Instant, SystemTime};

use crate::credstore::kdf::{kdf_hash, KdfRegistry};
use crate::credstore::{CredentialStore, SweetwordSet};
use crate::error::Error;
use crate::honeychecker::client::CheckerApi;
use crate::honeychecker::CheckVerdict;
use crate::responder::{Responder, ResponseAction, RiskContext};

/// One authentication attempt as received from a client.
#[derive(Debug, Clone)]
pub struct LoginRequest {
    pub uid: String,
    pub password: String,
    pub context: RiskContext,
}

impl LoginRequest {
    pub fn new(uid: &str, password: &str) -> Self {
        LoginRequest {
            uid: uid.to_string(),
            password: password.to_string(),
            context: RiskContext::default(),
        }
    }

    pub fn with_context(mut self, context: RiskContext) -> Self {
        self.context = context;
        self
    }
}

/// What the gate concluded about an attempt.
///
/// `HoneyDetected` exists only inside the trust boundary: callers that
/// relay results to the network must collapse it into the action's
/// normal success or denial shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Success,
    Failure,
    HoneyDetected(usize),
}

/// Gate result. `action` is what the responder chose; for `Failure` no
/// responder runs and the field stays at `Allow`, which callers must
/// ignore (a failed login never issues anything).
#[derive(Debug, Clone, Copy)]
pub struct AuthOutcome {
    pub verdict: Verdict,
    pub action: ResponseAction,
    pub latency_ns: u64,
}

/// Behavior when the honeychecker cannot answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FailMode {
    /// Deny every login that would need a checker verdict.
    #[default]
    FailClosed,
    /// Treat a digest match as the real password while the checker is
    /// down. Keeps users logging in during an outage at the cost of
    /// letting a submitted decoy through undetected.
    FailOpenRealOnly,
}

impl FailMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailMode::FailClosed => "fail-closed",
            FailMode::FailOpenRealOnly => "fail-open-real-only",
        }
    }
}

impl FromStr for FailMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fail-closed" => Ok(FailMode::FailClosed),
            "fail-open-real-only" => Ok(FailMode::FailOpenRealOnly),
            other => Err(Error::Config(format!(
                "unknown fail mode '{other}' (expected fail-closed or fail-open-real-only)"
            ))),
        }
    }
}

fn ct_eq(a: &[u8], b: &[u8]) -> bool {
    let mut diff = a.len() ^ b.len();
    for i in 0..a.len().min(b.len()) {
        diff |= (a[i] ^ b[i]) as usize;
    }
    diff == 0
}

/// Compare a digest against every stored digest. Returns the first
/// matching index (sets hold distinct sweetwords, so at most one) and
/// the number of comparisons performed, which is always k: the scan
/// never stops early.
pub fn match_index(set: &SweetwordSet, digest: &[u8]) -> (Option<usize>, usize) {
    let mut found = None;
    let mut comparisons = 0;
    for (i, stored) in set.digests.iter().enumerate() {
        comparisons += 1;
        if ct_eq(stored, digest) && found.is_none() {
            found = Some(i);
        }
    }
    (found, comparisons)
}

/// The login front end: store + KDF registry + checker + responder.
pub struct AuthGate {
    store: CredentialStore,
    registry: KdfRegistry,
    checker: Arc<dyn CheckerApi>,
    responder: Responder,
    alerts: AlertSink,
    fail_mode: FailMode,
}

impl AuthGate {
    pub fn new(
        store: CredentialStore,
        registry: KdfRegistry,
        checker: Arc<dyn CheckerApi>,
        responder: Responder,
        alerts: AlertSink,
        fail_mode: FailMode,
    ) -> Self {
        AuthGate {
            store,
            registry,
            checker,
            responder,
            alerts,
            fail_mode,
        }
    }

    pub fn store(&self) -> &CredentialStore {
        &self.store
    }

    pub fn alerts(&self) -> &AlertSink {
        &self.alerts
    }

    pub fn fail_mode(&self) -> FailMode {
        self.fail_mode
    }

    pub fn login(&self, request: &LoginRequest) -> AuthOutcome {
        self.login_at(request, SystemTime::now())
    }

    /// Like `login` but with an injected clock for the responder's
    /// escalation window.
    pub fn login_at(&self, request: &LoginRequest, now: SystemTime) -> AuthOutcome {
        let start = Instant::now();
        let failure = |start: Instant| AuthOutcome {
            verdict: Verdict::Failure,
            action: ResponseAction::Allow,
            latency_ns: start.elapsed().as_nanos() as u64,
        };

        let Some(set) = self.store.get(&request.uid) else {
            return failure(start);
        };
        let Ok(profile) = self.registry.get(&set.kdf) else {
            // store references a KDF this deployment does not know;
            // refuse rather than guess
            return failure(start);
        };
        let Ok(digest) = kdf_hash(&request.password, profile, &set.salt) else {
            return failure(start);
        };
        let (hit, _) = match_index(set, &digest);
        let Some(index) = hit else {
            // no digest matched: the checker is never consulted on a miss
            return failure(start);
        };

        match self.checker.check(&request.uid, index) {
            Ok(CheckVerdict::Real) => {
                let (_risk, action) = self
                    .responder
                    .respond(&request.uid, &request.context, false, now);
                AuthOutcome {
                    verdict: Verdict::Success,
                    action,
                    latency_ns: start.elapsed().as_nanos() as u64,
                }
            }
            Ok(CheckVerdict::Honey) => {
                let (risk, action) = self
                    .responder
                    .respond(&request.uid, &request.context, true, now);
                self.alerts
                    .emit(&AlertEvent::new(&request.uid, index, risk, &action, now));
                AuthOutcome {
                    verdict: Verdict::HoneyDetected(index),
                    action,
                    latency_ns: start.elapsed().as_nanos() as u64,
                }
            }
            Err(_) => match self.fail_mode {
                FailMode::FailClosed => failure(start),
                FailMode::FailOpenRealOnly => AuthOutcome {
                    verdict: Verdict::Success,
                    action: ResponseAction::Allow,
                    latency_ns: start.elapsed().as_nanos() as u64,
                },
            },
        }
    }
}
