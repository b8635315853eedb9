//! TCP server for the checker protocol: thread per connection, shared
//! in-memory index, fixed-width responses.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use super::protocol::{ErrCode, Request, Response, MAX_LINE};
use super::CheckerIndex;
use crate::error::Result;

/// Running checker server. Dropping the handle shuts the listener down;
/// the index contents die with the process, never with the disk.
pub struct CheckerHandle {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    accept_thread: Option<JoinHandle<()>>,
}

impl CheckerHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn shutdown(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // unblock accept with a throwaway connection
        let _ = TcpStream::connect(self.addr);
        if let Some(t) = self.accept_thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for CheckerHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

/// Bind `addr` (e.g. `127.0.0.1:0`) and serve until the handle shuts down.
pub fn serve(addr: &str) -> Result<CheckerHandle> {
    let listener = TcpListener::bind(addr)?;
    let addr = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let index = Arc::new(Mutex::new(CheckerIndex::new()));
    let accept_stop = Arc::clone(&stop);
    let accept_thread = std::thread::spawn(move || {
        for stream in listener.incoming() {
            if accept_stop.load(Ordering::SeqCst) {
                break;
            }
            let Ok(stream) = stream else { continue };
            let index = Arc::clone(&index);
            std::thread::spawn(move || {
                let _ = handle_connection(stream, index);
            });
        }
    });
    Ok(CheckerHandle {
        addr,
        stop,
        accept_thread: Some(accept_thread),
    })
}

fn handle_connection(stream: TcpStream, index: Arc<Mutex<CheckerIndex>>) -> std::io::Result<()> {
    let mut writer = stream.try_clone()?;
    let mut reader = BufReader::new(stream).take(MAX_LINE as u64);
    let mut buf = Vec::with_capacity(MAX_LINE);
    loop {
        reader.set_limit(MAX_LINE as u64);
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf)?;
        if n == 0 {
            return Ok(());
        }
        if buf.last() != Some(&b'\n') {
            // line hit the cap without a newline: refuse and cut the
            // connection rather than resynchronizing mid-garbage
            writer.write_all(Response::Err(ErrCode::Syntax).to_wire().as_bytes())?;
            return Ok(());
        }
        let response = match std::str::from_utf8(&buf) {
            Ok(line) => match Request::parse(line) {
                Ok(request) => index.lock().expect("checker index lock").apply(&request),
                Err(code) => Response::Err(code),
            },
            Err(_) => Response::Err(ErrCode::Syntax),
        };
        writer.write_all(response.to_wire().as_bytes())?;
        writer.flush()?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn send_script(addr: SocketAddr, lines: &[&str]) -> Vec<String> {
        let stream = TcpStream::connect(addr).unwrap();
        let mut writer = stream.try_clone().unwrap();
        let mut reader = BufReader::new(stream);
        let mut out = Vec::new();
        for line in lines {
            writer.write_all(line.as_bytes()).unwrap();
            writer.write_all(b"\n").unwrap();
            let mut resp = String::new();
            reader.read_line(&mut resp).unwrap();
            out.push(resp);
        }
        out
    }

    #[test]
    fn serves_the_protocol() {
        let handle = serve("127.0.0.1:0").unwrap();
        let got = send_script(
            handle.addr(),
            &[
                "PING",
                "SET alice 20 7",
                "CHECK alice 7",
                "CHECK alice 3",
                "CHECK bob 0",
                "SET alice 20 20",
                "REMOVE alice",
                "CHECK alice 7",
                "junk here",
            ],
        );
        assert_eq!(
            got,
            vec![
                "PONG   \n",
                "OK     \n",
                "REAL   \n",
                "HONEY  \n",
                "ERR UNKNOWN\n",
                "ERR RANGE\n",
                "OK     \n",
                "ERR UNKNOWN\n",
                "ERR SYNTAX\n",
            ]
        );
    }

    #[test]
    fn state_is_shared_across_connections() {
        let handle = serve("127.0.0.1:0").unwrap();
        send_script(handle.addr(), &["SET carol 4 2"]);
        let got = send_script(handle.addr(), &["CHECK carol 2", "CHECK carol 1"]);
        assert_eq!(got, vec!["REAL   \n", "HONEY  \n"]);
    }

    #[test]
    fn concurrent_clients() {
        let handle = serve("127.0.0.1:0").unwrap();
        send_script(handle.addr(), &["SET dave 10 5"]);
        let addr = handle.addr();
        let threads: Vec<_> = (0..8)
            .map(|i| {
                std::thread::spawn(move || {
                    let got = send_script(addr, &[&format!("CHECK dave {}", i % 10)]);
                    (i % 10 == 5, got[0].clone())
                })
            })
            .collect();
        for t in threads {
            let (is_real, resp) = t.join().unwrap();
            if is_real {
                assert_eq!(resp, "REAL   \n");
            } else {
                assert_eq!(resp, "HONEY  \n");
            }
        }
    }

    #[test]
    fn oversized_line_is_rejected() {
        let handle = serve("127.0.0.1:0").unwrap();
        let stream = TcpStream::connect(handle.addr()).unwrap();
        let mut writer = stream.try_clone().unwrap();
        let mut reader = BufReader::new(stream);
        let long = "CHECK ".to_string() + &"a".repeat(400);
        writer.write_all(long.as_bytes()).unwrap();
        writer.write_all(b"\n").unwrap();
        let mut resp = String::new();
        reader.read_line(&mut resp).unwrap();
        assert_eq!(resp, "ERR SYNTAX\n");
    }

    #[test]
    fn shutdown_stops_accepting() {
        let mut handle = serve("127.0.0.1:0").unwrap();
        let addr = handle.addr();
        handle.shutdown();
        // connect may succeed at the TCP level briefly, but the protocol
        // must be gone: either connect fails or reads return EOF
        if let Ok(stream) = TcpStream::connect(addr) {
            let mut writer = stream.try_clone().unwrap();
            let _ = writer.write_all(b"PING\n");
            let mut reader = BufReader::new(stream);
            let mut resp = String::new();
            let n = reader.read_line(&mut resp).unwrap_or(0);
            assert_eq!(n, 0, "got response after shutdown: {resp:?}");
        }
    }
}
