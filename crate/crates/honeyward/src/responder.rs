//! Risk scoring and graduated responses to honeyword hits.
//!
//! A risk score is a clamped weighted sum of context signals plus a bonus
//! when the event is a honeyword match. The score picks a response tier;
//! prior honeyword events inside a sliding window escalate the tier, never
//! the other way. Non-honeyword logins always pass through: anomaly
//! handling for ordinary traffic is someone else's job.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::{Duration, SystemTime};

/// Context signals for one login attempt, each in [0, 1] (1 = worst).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RiskContext {
    pub ip_reputation: f64,
    pub geo_anomaly: f64,
    pub device_mismatch: bool,
    pub history_anomaly: f64,
}

impl RiskContext {
    /// Build a context with scalars clamped into [0, 1].
    pub fn new(ip_reputation: f64, geo_anomaly: f64, device_mismatch: bool, history_anomaly: f64) -> Self {
        let clamp = |v: f64| v.clamp(0.0, 1.0);
        RiskContext {
            ip_reputation: clamp(ip_reputation),
            geo_anomaly: clamp(geo_anomaly),
            device_mismatch,
            history_anomaly: clamp(history_anomaly),
        }
    }
}

/// Graduated response, ordered from least to most severe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ResponseAction {
    Allow,
    SilentLog,
    StepUpAuth,
    RestrictedToken,
    Lockout(Duration),
}

impl ResponseAction {
    pub fn name(&self) -> &'static str {
        match self {
            ResponseAction::Allow => "allow",
            ResponseAction::SilentLog => "silent_log",
            ResponseAction::StepUpAuth => "step_up_auth",
            ResponseAction::RestrictedToken => "restricted_token",
            ResponseAction::Lockout(_) => "lockout",
        }
    }
}

/// Weights, thresholds, and the escalation window.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponderConfig {
    pub w_ip: f64,
    pub w_geo: f64,
    pub w_device: f64,
    pub w_history: f64,
    pub honey_bonus: f64,
    pub t_silent: f64,
    pub t_stepup: f64,
    pub t_restrict: f64,
    pub window: Duration,
    pub lockout: Duration,
}

impl Default for ResponderConfig {
    fn default() -> Self {
        ResponderConfig {
            w_ip: 0.25,
            w_geo: 0.25,
            w_device: 0.25,
            w_history: 0.25,
            honey_bonus: 0.4,
            t_silent: 0.3,
            t_stepup: 0.6,
            t_restrict: 0.85,
            window: Duration::from_secs(24 * 3600),
            lockout: Duration::from_secs(15 * 60),
        }
    }
}

impl ResponderConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        for (name, w) in [
            ("w_ip", self.w_ip),
            ("w_geo", self.w_geo),
            ("w_device", self.w_device),
            ("w_history", self.w_history),
            ("honey_bonus", self.honey_bonus),
        ] {
            if !(w >= 0.0) {
                return Err(crate::error::Error::Config(format!(
                    "{name} must be >= 0, got {w}"
                )));
            }
        }
        if !(0.0 < self.t_silent && self.t_silent < self.t_stepup && self.t_stepup < self.t_restrict && self.t_restrict <= 1.0)
        {
            return Err(crate::error::Error::Config(format!(
                "thresholds must satisfy 0 < t_silent < t_stepup < t_restrict <= 1, got {} / {} / {}",
                self.t_silent, self.t_stepup, self.t_restrict
            )));
        }
        Ok(())
    }
}

/// Weighted signal sum plus honey bonus, clamped to [0, 1]. Monotone
/// non-decreasing in every signal.
pub fn score_risk(config: &ResponderConfig, ctx: &RiskContext, honey_event: bool) -> f64 {
    let ctx = RiskContext::new(
        ctx.ip_reputation,
        ctx.geo_anomaly,
        ctx.device_mismatch,
        ctx.history_anomaly,
    );
    let raw = config.w_ip * ctx.ip_reputation
        + config.w_geo * ctx.geo_anomaly
        + config.w_device * f64::from(ctx.device_mismatch)
        + config.w_history * ctx.history_anomaly
        + config.honey_bonus * f64::from(honey_event);
    raw.clamp(0.0, 1.0)
}

/// Threshold table. Only honeyword events act; everything else is Allow.
pub fn decide_action(config: &ResponderConfig, risk: f64, honey_event: bool) -> ResponseAction {
    if !honey_event {
        return ResponseAction::Allow;
    }
    if risk < config.t_silent {
        ResponseAction::SilentLog
    } else if risk < config.t_stepup {
        ResponseAction::StepUpAuth
    } else if risk < config.t_restrict {
        ResponseAction::RestrictedToken
    } else {
        ResponseAction::Lockout(config.lockout)
    }
}

fn raise_one(action: ResponseAction, lockout: Duration) -> ResponseAction {
    match action {
        ResponseAction::Allow => ResponseAction::SilentLog,
        ResponseAction::SilentLog => ResponseAction::StepUpAuth,
        ResponseAction::StepUpAuth => ResponseAction::RestrictedToken,
        ResponseAction::RestrictedToken => ResponseAction::Lockout(lockout),
        ResponseAction::Lockout(d) => ResponseAction::Lockout(d),
    }
}

/// Raise `base` one level per prior honeyword event inside the window,
/// capped at Lockout. Never de-escalates.
pub fn escalate(
    config: &ResponderConfig,
    base: ResponseAction,
    prior_events: &[SystemTime],
    now: SystemTime,
) -> ResponseAction {
    let recent = prior_events
        .iter()
        .filter(|t| match now.duration_since(**t) {
            Ok(age) => age <= config.window,
            Err(_) => true, // clock skew: count rather than drop
        })
        .count();
    let mut action = base;
    for _ in 0..recent {
        action = raise_one(action, config.lockout);
    }
    action
}

/// Stateful wrapper: tracks per-uid honeyword history and applies the
/// score / decide / escalate pipeline.
pub struct Responder {
    config: ResponderConfig,
    history: Mutex<BTreeMap<String, Vec<SystemTime>>>,
}

impl Responder {
    pub fn new(config: ResponderConfig) -> crate::error::Result<Self> {
        config.validate()?;
        Ok(Responder {
            config,
            history: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn config(&self) -> &ResponderConfig {
        &self.config
    }

    /// Score and decide for one attempt at time `now`. Honeyword events are
    /// recorded after deciding, so the current event never escalates itself.
    pub fn respond(
        &self,
        uid: &str,
        ctx: &RiskContext,
        honey_event: bool,
        now: SystemTime,
    ) -> (f64, ResponseAction) {
        let risk = score_risk(&self.config, ctx, honey_event);
        let base = decide_action(&self.config, risk, honey_event);
        let mut history = self.history.lock().expect("responder history lock");
        let events = history.entry(uid.to_string()).or_default();
        let action = escalate(&self.config, base, events, now);
        if honey_event {
            events.retain(|t| match now.duration_since(*t) {
                Ok(age) => age <= self.config.window,
                Err(_) => true,
            });
            events.push(now);
        }
        (risk, action)
    }
}
