//! Honeyword alert log: JSON lines, one per detection.
//!
//! Events land in an in-memory buffer that a single writer thread drains
//! on a short poll interval. Emitting costs the login path one buffer
//! push, never a thread wakeup or a disk write; waking the writer from
//! `emit` would spend a futex call on exactly the logins that trip
//! alerts, and that skew is measurable next to a cheap KDF. The writer
//! preserves arrival order; a failed write is reported on stderr and
//! counted, never surfaced to the login that produced the event.

use serde::Serialize;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::thread::JoinHandle;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use crate::error::Result;
use crate::responder::ResponseAction;

/// Longest time a queued event may sit before the writer picks it up.
const POLL_INTERVAL: Duration = Duration::from_millis(20);

/// One detection event as it lands in the log.
#[derive(Debug, Clone, Serialize)]
pub struct AlertEvent {
    pub ts: u64,
    pub uid: String,
    pub index: usize,
    pub risk: f64,
    pub action: String,
}

impl AlertEvent {
    pub fn new(uid: &str, index: usize, risk: f64, action: &ResponseAction, at: SystemTime) -> Self {
        AlertEvent {
            ts: at
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            uid: uid.to_string(),
            index,
            risk,
            action: action.name().to_string(),
        }
    }
}

#[derive(Default)]
struct SinkState {
    queue: Vec<AlertEvent>,
    /// Events ever queued.
    emitted: u64,
    /// Events the writer has pushed through, failures included.
    written: u64,
    closed: bool,
}

struct SinkShared {
    state: Mutex<SinkState>,
    wake_writer: Condvar,
    wake_flushers: Condvar,
}

/// Asynchronous alert appender.
pub struct AlertSink {
    shared: Arc<SinkShared>,
    write_errors: Arc<AtomicUsize>,
    writer_thread: Option<JoinHandle<()>>,
}

impl AlertSink {
    pub fn new(mut writer: Box<dyn Write + Send>) -> Self {
        let shared = Arc::new(SinkShared {
            state: Mutex::new(SinkState::default()),
            wake_writer: Condvar::new(),
            wake_flushers: Condvar::new(),
        });
        let write_errors = Arc::new(AtomicUsize::new(0));
        let errors = Arc::clone(&write_errors);
        let inner = Arc::clone(&shared);
        let writer_thread = std::thread::spawn(move || loop {
            let batch = {
                let mut state = inner.state.lock().expect("alert sink lock");
                while state.queue.is_empty() {
                    if state.closed {
                        return;
                    }
                    state = inner
                        .wake_writer
                        .wait_timeout(state, POLL_INTERVAL)
                        .expect("alert sink lock")
                        .0;
                }
                std::mem::take(&mut state.queue)
            };
            for event in &batch {
                let line = serde_json::to_string(event).expect("alert event serializes");
                let outcome = writer
                    .write_all(line.as_bytes())
                    .and_then(|()| writer.write_all(b"\n"));
                if let Err(e) = outcome {
                    errors.fetch_add(1, Ordering::Relaxed);
                    eprintln!("alert log write failed: {e}");
                }
            }
            if let Err(e) = writer.flush() {
                errors.fetch_add(1, Ordering::Relaxed);
                eprintln!("alert log flush failed: {e}");
            }
            let mut state = inner.state.lock().expect("alert sink lock");
            state.written += batch.len() as u64;
            inner.wake_flushers.notify_all();
        });
        AlertSink {
            shared,
            write_errors,
            writer_thread: Some(writer_thread),
        }
    }

    pub fn to_file(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        Ok(Self::new(Box::new(file)))
    }

    /// Discards events; for tests and disabled alerting.
    pub fn sink_to_null() -> Self {
        Self::new(Box::new(std::io::sink()))
    }

    pub fn emit(&self, event: &AlertEvent) {
        let mut state = self.shared.state.lock().expect("alert sink lock");
        state.queue.push(event.clone());
        state.emitted += 1;
        // deliberately no notify, and no serialization here: the writer
        // polls and renders the line itself
    }

    /// Block until every previously emitted event has been written.
    pub fn flush(&self) {
        let mut state = self.shared.state.lock().expect("alert sink lock");
        let target = state.emitted;
        while state.written < target {
            // nudge the writer each round in case a notify raced a drain
            self.shared.wake_writer.notify_one();
            state = self
                .shared
                .wake_flushers
                .wait_timeout(state, POLL_INTERVAL)
                .expect("alert sink lock")
                .0;
        }
    }

    /// Number of events lost to write failures so far.
    pub fn write_errors(&self) -> usize {
        self.write_errors.load(Ordering::Relaxed)
    }
}

impl Drop for AlertSink {
    fn drop(&mut self) {
        // the writer drains whatever is queued, then exits
        self.shared
            .state
            .lock()
            .expect("alert sink lock")
            .closed = true;
        self.shared.wake_writer.notify_all();
        if let Some(t) = self.writer_thread.take() {
            let _ = t.join();
        }
    }
}
