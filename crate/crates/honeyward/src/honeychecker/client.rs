//! Checker clients: a TCP client for a served checker and an in-process
//! variant for tests and single-binary setups.

use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpStream, ToSocketAddrs};
use std::sync::Mutex;
use std::time::Duration;

use super::protocol::{Request, Response};
use super::{CheckVerdict, CheckerIndex};
use crate::error::{Error, Result};

/// Checker operations as seen by the auth middleware.
pub trait CheckerApi: Send + Sync {
    fn set(&self, uid: &str, k: usize, index: usize) -> Result<()>;
    fn check(&self, uid: &str, index: usize) -> Result<CheckVerdict>;
    fn remove(&self, uid: &str) -> Result<()>;
    fn ping(&self) -> Result<()>;
}

/// Connect-per-command TCP client.
pub struct TcpCheckerClient {
    addr: String,
    timeout: Duration,
}

impl TcpCheckerClient {
    pub fn new(addr: impl Into<String>) -> Self {
        TcpCheckerClient {
            addr: addr.into(),
            timeout: Duration::from_secs(5),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn resolve(&self) -> Result<SocketAddr> {
        self.addr
            .to_socket_addrs()
            .map_err(|e| Error::CheckerUnavailable(format!("{}: {e}", self.addr)))?
            .next()
            .ok_or_else(|| {
                Error::CheckerUnavailable(format!("{}: no addresses resolved", self.addr))
            })
    }

    fn round_trip(&self, request: &Request) -> Result<Response> {
        let addr = self.resolve()?;
        let unavailable = |e: std::io::Error| {
            Error::CheckerUnavailable(format!("{}: {e}", self.addr))
        };
        let stream = TcpStream::connect_timeout(&addr, self.timeout).map_err(unavailable)?;
        stream.set_read_timeout(Some(self.timeout)).map_err(unavailable)?;
        stream.set_write_timeout(Some(self.timeout)).map_err(unavailable)?;
        let mut writer = stream.try_clone().map_err(unavailable)?;
        writer
            .write_all(request.to_wire().as_bytes())
            .map_err(unavailable)?;
        let mut reader = BufReader::new(stream);
        let mut line = String::new();
        let n = reader.read_line(&mut line).map_err(unavailable)?;
        if n == 0 {
            return Err(Error::CheckerUnavailable(format!(
                "{}: connection closed before reply",
                self.addr
            )));
        }
        Response::parse(&line)
            .map_err(|_| Error::Protocol(format!("unparseable checker reply {line:?}")))
    }
}

fn expect_ok(response: Response, op: &str) -> Result<()> {
    match response {
        Response::Ok => Ok(()),
        Response::Err(code) => Err(Error::Protocol(format!("{op}: ERR {}", code.as_str()))),
        other => Err(Error::Protocol(format!("{op}: unexpected reply {other:?}"))),
    }
}

impl CheckerApi for TcpCheckerClient {
    fn set(&self, uid: &str, k: usize, index: usize) -> Result<()> {
        let response = self.round_trip(&Request::Set {
            uid: uid.to_string(),
            k,
            index,
        })?;
        expect_ok(response, "SET")
    }

    fn check(&self, uid: &str, index: usize) -> Result<CheckVerdict> {
        let response = self.round_trip(&Request::Check {
            uid: uid.to_string(),
            index,
        })?;
        match response {
            Response::Real => Ok(CheckVerdict::Real),
            Response::Honey => Ok(CheckVerdict::Honey),
            Response::Err(code) => Err(Error::Protocol(format!("CHECK: ERR {}", code.as_str()))),
            other => Err(Error::Protocol(format!("CHECK: unexpected reply {other:?}"))),
        }
    }

    fn remove(&self, uid: &str) -> Result<()> {
        let response = self.round_trip(&Request::Remove {
            uid: uid.to_string(),
        })?;
        expect_ok(response, "REMOVE")
    }

    fn ping(&self) -> Result<()> {
        match self.round_trip(&Request::Ping)? {
            Response::Pong => Ok(()),
            other => Err(Error::Protocol(format!("PING: unexpected reply {other:?}"))),
        }
    }
}

/// Checker living inside the calling process. Same semantics, no wire.
#[derive(Default)]
pub struct InProcessChecker {
    index: Mutex<CheckerIndex>,
}

impl InProcessChecker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.lock().expect("checker lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl CheckerApi for InProcessChecker {
    fn set(&self, uid: &str, k: usize, index: usize) -> Result<()> {
        self.index
            .lock()
            .expect("checker lock")
            .set(uid, k, index)
            .map_err(|code| Error::Protocol(format!("SET: ERR {}", code.as_str())))
    }

    fn check(&self, uid: &str, index: usize) -> Result<CheckVerdict> {
        self.index
            .lock()
            .expect("checker lock")
            .check(uid, index)
            .map_err(|code| Error::Protocol(format!("CHECK: ERR {}", code.as_str())))
    }

    fn remove(&self, uid: &str) -> Result<()> {
        self.index.lock().expect("checker lock").remove(uid);
        Ok(())
    }

    fn ping(&self) -> Result<()> {
        Ok(())
    }
}
