//! Minimal HTTP/1.1 front for the auth gate: `POST /login`.
//!
//! The JSON reply never distinguishes a detected honeyword from the
//! chosen action's normal form. A detection under silent logging
//! answers byte for byte like a success; a detection under lockout
//! answers byte for byte like a wrong password.

use serde::Deserialize;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use super::{AuthGate, LoginRequest, Verdict};
use crate::error::{Error, Result};
use crate::responder::{ResponseAction, RiskContext};

const MAX_HEADER_LINE: u64 = 1024;
const MAX_BODY: usize = 64 * 1024;
const IO_TIMEOUT: Duration = Duration::from_secs(5);

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ContextWire {
    #[serde(default)]
    ip_reputation: f64,
    #[serde(default)]
    geo_anomaly: f64,
    #[serde(default)]
    device_mismatch: bool,
    #[serde(default)]
    history_anomaly: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoginWire {
    uid: String,
    password: String,
    #[serde(default)]
    context: ContextWire,
}

/// Collapse an outcome into what the network is allowed to see.
fn token_scope(verdict: Verdict, action: ResponseAction) -> Option<&'static str> {
    match (verdict, action) {
        (Verdict::Failure, _) => None,
        (Verdict::Success, _) => Some("full"),
        (Verdict::HoneyDetected(_), ResponseAction::Allow | ResponseAction::SilentLog) => {
            Some("full")
        }
        (Verdict::HoneyDetected(_), ResponseAction::RestrictedToken) => Some("restricted"),
        (Verdict::HoneyDetected(_), ResponseAction::StepUpAuth | ResponseAction::Lockout(_)) => {
            None
        }
    }
}

fn login_body(scope: Option<&str>) -> String {
    let status = if scope.is_some() { "ok" } else { "denied" };
    serde_json::json!({ "status": status, "token_scope": scope }).to_string()
}

/// Running HTTP listener; shuts down on drop.
pub struct HttpHandle {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    accept_thread: Option<JoinHandle<()>>,
}

impl HttpHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn shutdown(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // poke the listener so the accept call returns
        let _ = TcpStream::connect(self.addr);
        if let Some(t) = self.accept_thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for HttpHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

/// Bind `addr` and serve logins against `gate` until the handle drops.
pub fn serve_http(addr: &str, gate: Arc<AuthGate>) -> Result<HttpHandle> {
    let listener = TcpListener::bind(addr)?;
    let addr = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let stop_flag = Arc::clone(&stop);
    let accept_thread = std::thread::spawn(move || {
        for stream in listener.incoming() {
            if stop_flag.load(Ordering::SeqCst) {
                break;
            }
            let Ok(stream) = stream else { continue };
            let gate = Arc::clone(&gate);
            std::thread::spawn(move || {
                let _ = handle_connection(stream, &gate);
            });
        }
    });
    Ok(HttpHandle {
        addr,
        stop,
        accept_thread: Some(accept_thread),
    })
}

fn handle_connection(stream: TcpStream, gate: &AuthGate) -> std::io::Result<()> {
    stream.set_read_timeout(Some(IO_TIMEOUT))?;
    stream.set_write_timeout(Some(IO_TIMEOUT))?;
    let mut reader = BufReader::new(stream.try_clone()?).take(MAX_HEADER_LINE);
    let mut out = stream;

    let request_line = match read_crlf_line(&mut reader)? {
        Some(line) => line,
        None => return Ok(()),
    };
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or("");
    let path = parts.next().unwrap_or("");

    let mut content_length: Option<usize> = None;
    loop {
        let Some(line) = read_crlf_line(&mut reader)? else {
            return write_http(&mut out, "400 Bad Request", r#"{"error":"truncated request"}"#);
        };
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().ok();
            }
        }
    }

    if path != "/login" {
        return write_http(&mut out, "404 Not Found", r#"{"error":"unknown path"}"#);
    }
    if method != "POST" {
        return write_http(&mut out, "405 Method Not Allowed", r#"{"error":"POST only"}"#);
    }
    let Some(len) = content_length else {
        return write_http(&mut out, "411 Length Required", r#"{"error":"missing content-length"}"#);
    };
    if len > MAX_BODY {
        return write_http(&mut out, "413 Payload Too Large", r#"{"error":"body too large"}"#);
    }

    reader.set_limit(len as u64);
    let mut body = Vec::with_capacity(len);
    reader.read_to_end(&mut body)?;
    if body.len() != len {
        return write_http(&mut out, "400 Bad Request", r#"{"error":"short body"}"#);
    }

    let wire: LoginWire = match serde_json::from_slice(&body) {
        Ok(w) => w,
        Err(_) => {
            return write_http(&mut out, "400 Bad Request", r#"{"error":"malformed login body"}"#)
        }
    };
    let ctx = RiskContext::new(
        wire.context.ip_reputation,
        wire.context.geo_anomaly,
        wire.context.device_mismatch,
        wire.context.history_anomaly,
    );
    let request = LoginRequest::new(&wire.uid, &wire.password).with_context(ctx);
    let outcome = gate.login(&request);
    let body = login_body(token_scope(outcome.verdict, outcome.action));
    write_http(&mut out, "200 OK", &body)
}

/// One header line without the trailing CRLF; None on EOF.
fn read_crlf_line<R: BufRead>(reader: &mut std::io::Take<R>) -> std::io::Result<Option<String>> {
    reader.set_limit(MAX_HEADER_LINE);
    let mut raw = Vec::new();
    let n = reader.read_until(b'\n', &mut raw)?;
    if n == 0 {
        return Ok(None);
    }
    while matches!(raw.last(), Some(b'\n') | Some(b'\r')) {
        raw.pop();
    }
    match String::from_utf8(raw) {
        Ok(s) => Ok(Some(s)),
        Err(_) => Ok(None),
    }
}

fn write_http(stream: &mut TcpStream, status: &str, body: &str) -> std::io::Result<()> {
    let head = format!(
        "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes())?;
    stream.write_all(body.as_bytes())?;
    stream.flush()
}

/// One-shot JSON POST, used by the CLI and tests. Returns the status
/// code and response body.
pub fn http_post(addr: &str, path: &str, body: &str) -> Result<(u16, String)> {
    let target = addr
        .to_socket_addrs()
        .map_err(|e| Error::Config(format!("cannot resolve '{addr}': {e}")))?
        .next()
        .ok_or_else(|| Error::Config(format!("'{addr}' resolves to no address")))?;
    let mut stream = TcpStream::connect_timeout(&target, IO_TIMEOUT)
        .map_err(|e| Error::Protocol(format!("connect to {addr} failed: {e}")))?;
    stream.set_read_timeout(Some(IO_TIMEOUT))?;
    stream.set_write_timeout(Some(IO_TIMEOUT))?;
    let head = format!(
        "POST {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes())?;
    stream.write_all(body.as_bytes())?;
    stream.flush()?;

    let mut reader = BufReader::new(stream);
    let mut status_line = String::new();
    reader.read_line(&mut status_line)?;
    let code: u16 = status_line
        .split_whitespace()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Protocol(format!("bad status line '{}'", status_line.trim())))?;
    let mut content_length: Option<usize> = None;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 {
            return Err(Error::Protocol("response truncated in headers".into()));
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().ok();
            }
        }
    }
    let mut body = Vec::new();
    match content_length {
        Some(len) => {
            body.resize(len, 0);
            reader.read_exact(&mut body)?;
        }
        None => {
            reader.read_to_end(&mut body)?;
        }
    }
    String::from_utf8(body)
        .map(|text| (code, text))
        .map_err(|_| Error::Protocol("response body is not UTF-8".into()))
}
