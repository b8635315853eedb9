//! Capture every byte that crosses the honeychecker channel during
//! enrollment and logins, and prove none of it is password material.
//! A recording TCP proxy sits between the gate's client and a real
//! checker server.

use std::io::{Read, Write};
use std::net::{Shutdown, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use honeyward::authgate::alert::AlertSink;
use honeyward::authgate::{AuthGate, FailMode, LoginRequest, Verdict};
use honeyward::credstore::{CredentialStore, KdfRegistry};
use honeyward::honeychecker::{serve, CheckerApi, TcpCheckerClient};
use honeyward::responder::{Responder, ResponderConfig};

struct Proxy {
    addr: String,
    captured: Arc<Mutex<Vec<u8>>>,
    stop: Arc<AtomicBool>,
    thread: Option<thread::JoinHandle<()>>,
}

impl Proxy {
    fn start(upstream: String) -> Proxy {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let captured = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));
        let thread = thread::spawn({
            let captured = Arc::clone(&captured);
            let stop = Arc::clone(&stop);
            move || {
                for conn in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(client) = conn else { break };
                    let server = TcpStream::connect(&upstream).unwrap();
                    let up = thread::spawn({
                        let captured = Arc::clone(&captured);
                        let client = client.try_clone().unwrap();
                        let server = server.try_clone().unwrap();
                        move || pump(client, server, captured)
                    });
                    let down = thread::spawn({
                        let captured = Arc::clone(&captured);
                        move || pump(server, client, captured)
                    });
                    up.join().unwrap();
                    down.join().unwrap();
                }
            }
        });
        Proxy {
            addr,
            captured,
            stop,
            thread: Some(thread),
        }
    }

    fn finish(mut self) -> Vec<u8> {
        self.stop.store(true, Ordering::SeqCst);
        // unblock the accept loop
        let _ = TcpStream::connect(&self.addr);
        self.thread.take().unwrap().join().unwrap();
        let bytes = self.captured.lock().unwrap().clone();
        bytes
    }
}

fn pump(mut from: TcpStream, mut to: TcpStream, captured: Arc<Mutex<Vec<u8>>>) {
    let mut buf = [0u8; 1024];
    loop {
        match from.read(&mut buf) {
            Ok(0) | Err(_) => break,
            Ok(n) => {
                captured.lock().unwrap().extend_from_slice(&buf[..n]);
                if to.write_all(&buf[..n]).is_err() {
                    break;
                }
            }
        }
    }
    let _ = to.shutdown(Shutdown::Write);
}

fn contains(haystack: &[u8], needle: &[u8]) -> bool {
    haystack.windows(needle.len()).any(|w| w == needle)
}

#[test]
fn checker_channel_carries_no_password_material() {
    let mut checker = serve("127.0.0.1:0").unwrap();
    let proxy = Proxy::start(checker.addr().to_string());
    let client = TcpCheckerClient::new(proxy.addr.clone());

    let real = "gold-marmot-secret-19".to_string();
    let sweetwords = vec![
        "teal-heron-decoy-28".to_string(),
        real.clone(),
        "plum-ibis-decoy-37".to_string(),
    ];
    let registry = KdfRegistry::builtin();
    let profile = registry.get("test-kdf").unwrap().clone();
    let mut store = CredentialStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    store
        .enroll("alice", &real, &sweetwords, 1, &profile, &mut rng)
        .unwrap();
    let record = store.get("alice").unwrap();
    let salt_hex = hex::encode(&record.salt);
    let digest_hexes: Vec<String> = record.digests.iter().map(hex::encode).collect();

    client.set("alice", sweetwords.len(), 1).unwrap();

    let gate = AuthGate::new(
        store,
        registry,
        Arc::new(client),
        Responder::new(ResponderConfig::default()).unwrap(),
        AlertSink::sink_to_null(),
        FailMode::FailClosed,
    );

    let miss = "wrong-entirely-55";
    assert!(matches!(
        gate.login(&LoginRequest::new("alice", &real)).verdict,
        Verdict::Success
    ));
    assert!(matches!(
        gate.login(&LoginRequest::new("alice", &sweetwords[0])).verdict,
        Verdict::HoneyDetected(0)
    ));
    assert!(matches!(
        gate.login(&LoginRequest::new("alice", miss)).verdict,
        Verdict::Failure
    ));
    assert!(matches!(
        gate.login(&LoginRequest::new("nobody", &real)).verdict,
        Verdict::Failure
    ));

    let wire = proxy.finish();
    checker.shutdown();

    // the conversation really went through the proxy
    assert!(contains(&wire, b"SET alice 3 1\n"), "SET not captured");
    assert!(contains(&wire, b"CHECK alice 1\n"), "real CHECK not captured");
    assert!(contains(&wire, b"CHECK alice 0\n"), "honey CHECK not captured");
    assert!(contains(&wire, b"REAL"), "REAL response not captured");
    assert!(contains(&wire, b"HONEY"), "HONEY response not captured");

    // and nothing secret rode along: no sweetword, no near-miss password,
    // no salt, no digest, in either direction
    for word in sweetwords.iter().map(String::as_str).chain([miss]) {
        assert!(
            !contains(&wire, word.as_bytes()),
            "password material '{word}' crossed the checker channel"
        );
    }
    assert!(!contains(&wire, salt_hex.as_bytes()), "salt crossed the channel");
    for digest in &digest_hexes {
        assert!(
            !contains(&wire, digest.as_bytes()),
            "digest crossed the channel"
        );
    }
}
