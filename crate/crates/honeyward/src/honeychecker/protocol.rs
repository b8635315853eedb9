//! Line protocol for the checker channel.
//!
//! Requests: `SET <uid> <k> <index>`, `CHECK <uid> <index>`,
//! `REMOVE <uid>`, `PING`. Responses are newline-terminated and padded to
//! at least 8 bytes so REAL and HONEY are length-identical on the wire.
//! The grammar admits only uids and integers; password material cannot be
//! expressed in it.

use crate::credstore::is_valid_uid;

/// Fixed response width in bytes, newline included.
pub const RESPONSE_WIDTH: usize = 8;

/// Maximum accepted request line length in bytes, newline included.
pub const MAX_LINE: usize = 256;

/// Checker commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Request {
    Set { uid: String, k: usize, index: usize },
    Check { uid: String, index: usize },
    Remove { uid: String },
    Ping,
}

/// Error codes carried by `ERR <CODE>` responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrCode {
    Range,
    Unknown,
    Syntax,
}

impl ErrCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrCode::Range => "RANGE",
            ErrCode::Unknown => "UNKNOWN",
            ErrCode::Syntax => "SYNTAX",
        }
    }
}

/// Checker replies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    Ok,
    Real,
    Honey,
    Pong,
    Err(ErrCode),
}

impl Request {
    /// Parse one request line (trailing newline optional). Any grammar
    /// violation is a syntax error; no partial parses.
    pub fn parse(line: &str) -> Result<Request, ErrCode> {
        let line = line.strip_suffix('\n').unwrap_or(line);
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut parts = line.split(' ').filter(|p| !p.is_empty());
        let verb = parts.next().ok_or(ErrCode::Syntax)?;
        let req = match verb {
            "SET" => {
                let uid = parse_uid(parts.next())?;
                let k = parse_int(parts.next())?;
                let index = parse_int(parts.next())?;
                Request::Set { uid, k, index }
            }
            "CHECK" => {
                let uid = parse_uid(parts.next())?;
                let index = parse_int(parts.next())?;
                Request::Check { uid, index }
            }
            "REMOVE" => Request::Remove {
                uid: parse_uid(parts.next())?,
            },
            "PING" => Request::Ping,
            _ => return Err(ErrCode::Syntax),
        };
        if parts.next().is_some() {
            return Err(ErrCode::Syntax);
        }
        Ok(req)
    }

    pub fn to_wire(&self) -> String {
        match self {
            Request::Set { uid, k, index } => format!("SET {uid} {k} {index}\n"),
            Request::Check { uid, index } => format!("CHECK {uid} {index}\n"),
            Request::Remove { uid } => format!("REMOVE {uid}\n"),
            Request::Ping => "PING\n".to_string(),
        }
    }
}

fn parse_uid(part: Option<&str>) -> Result<String, ErrCode> {
    match part {
        Some(uid) if is_valid_uid(uid) => Ok(uid.to_string()),
        _ => Err(ErrCode::Syntax),
    }
}

fn parse_int(part: Option<&str>) -> Result<usize, ErrCode> {
    part.and_then(|p| p.parse::<usize>().ok())
        .ok_or(ErrCode::Syntax)
}

impl Response {
    fn text(&self) -> String {
        match self {
            Response::Ok => "OK".to_string(),
            Response::Real => "REAL".to_string(),
            Response::Honey => "HONEY".to_string(),
            Response::Pong => "PONG".to_string(),
            Response::Err(code) => format!("ERR {}", code.as_str()),
        }
    }

    /// Wire form: text space-padded to `RESPONSE_WIDTH` bytes including the
    /// newline. `ERR UNKNOWN` exceeds the minimum width and is sent whole;
    /// the padding guarantee matters for the REAL/HONEY pair.
    pub fn to_wire(&self) -> String {
        format!("{:<width$}\n", self.text(), width = RESPONSE_WIDTH - 1)
    }

    /// Parse a response line (padding and newline tolerated).
    pub fn parse(line: &str) -> Result<Response, ErrCode> {
        let text = line.trim_end_matches(['\n', '\r', ' ']);
        Ok(match text {
            "OK" => Response::Ok,
            "REAL" => Response::Real,
            "HONEY" => Response::Honey,
            "PONG" => Response::Pong,
            "ERR RANGE" => Response::Err(ErrCode::Range),
            "ERR UNKNOWN" => Response::Err(ErrCode::Unknown),
            "ERR SYNTAX" => Response::Err(ErrCode::Syntax),
            _ => return Err(ErrCode::Syntax),
        })
    }
}
