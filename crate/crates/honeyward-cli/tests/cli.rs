//! End-to-end tests of the `honeyward` binary: exit codes, output
//! contracts, determinism, and the checker/auth service pair.

use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Child, Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_honeyward"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Kills the child on scope exit so a failing assertion never leaks a
/// listening process.
struct ChildGuard(Child);

impl Drop for ChildGuard {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

/// Spawn a serve-* subcommand and wait for its "listening on" line.
fn spawn_service(args: &[&str], envs: &[(&str, &str)]) -> (ChildGuard, String) {
    let mut cmd = bin();
    cmd.args(args)
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit());
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let mut child = cmd.spawn().expect("service spawns");
    let stdout = child.stdout.take().expect("stdout piped");
    let mut line = String::new();
    BufReader::new(stdout)
        .read_line(&mut line)
        .expect("service announces itself");
    let addr = line
        .trim()
        .strip_prefix("listening on ")
        .unwrap_or_else(|| panic!("unexpected announcement: {line:?}"))
        .to_string();
    (ChildGuard(child), addr)
}

#[test]
fn help_exits_zero_and_usage_errors_exit_one() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("gen"));

    let out = run(&["gen", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    // runtime failures exit 2
    let out = run(&["enroll", "--store", "/nonexistent/dir/s.jsonl", "--reals", "/nonexistent/reals.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).starts_with("error:"));
}

#[test]
fn crackcalc_prints_reference_numbers() {
    let out = run(&["crackcalc", "--length", "8", "--alphabet", "62", "--rate", "200000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("34.6"), "expected 34.6 yrs in: {text}");
    assert!(text.contains("entropy_bits=47.6336"), "{text}");
    assert!(text.contains("keyspace=218340105584896"), "{text}");

    let out = run(&["crackcalc", "--rate", "200000", "--budget", "5000000000"]);
    assert!(stdout_of(&out).contains("practical=6.94 h"), "{}", stdout_of(&out));

    let out = run(&["crackcalc", "--tables"]);
    let text = stdout_of(&out);
    assert!(text.contains("Exhaustive crack times"), "{text}");
    assert!(text.contains("Practical crack times"), "{text}");
    assert!(text.contains("argon2id"), "{text}");

    // neither --rate nor --tables is a usage error
    let out = run(&["crackcalc"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_is_gated_and_contract_holds() {
    let out = run(&["gen", "--real", "password1", "--strategy", "typo", "--k", "4", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).is_empty(), "no plaintext without the gate");
    assert!(stderr_of(&out).contains("--i-understand-plaintext"));

    let args = [
        "gen", "--real", "password1", "--strategy", "typo", "--k", "4", "--seed", "1",
        "--i-understand-plaintext",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let words: Vec<String> = stdout_of(&out).lines().map(str::to_string).collect();
    assert_eq!(words.len(), 4);
    assert_eq!(words.iter().filter(|w| *w == "password1").count(), 1);
    let err = stderr_of(&out);
    let index: usize = err
        .trim()
        .strip_prefix("true_index=")
        .expect("true_index on stderr")
        .parse()
        .unwrap();
    assert_eq!(words[index], "password1");

    // same seed, same bytes
    let again = run(&args);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn enroll_writes_sorted_deterministic_store() {
    let dir = tempfile::tempdir().unwrap();
    let reals = dir.path().join("reals.txt");
    std::fs::write(&reals, "zoe:ninefold-arbor-3\nabe:quiet-meadow-77\nmia:copper-lane-12\n").unwrap();
    let store_a = dir.path().join("a.jsonl");
    let store_b = dir.path().join("b.jsonl");

    let base = |store: &Path| {
        let out = bin()
            .args(["enroll", "--reals"])
            .arg(&reals)
            .args(["--store"])
            .arg(store)
            .args(["--strategy", "random", "--k", "5", "--seed", "31"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        out
    };
    let out = base(&store_a);
    assert_eq!(
        stdout_of(&out).lines().count(),
        3,
        "one line per enrolled account"
    );
    base(&store_b);

    let a = std::fs::read(&store_a).unwrap();
    let b = std::fs::read(&store_b).unwrap();
    assert_eq!(a, b, "same seed must give identical store bytes");

    let uids: Vec<String> = String::from_utf8(a)
        .unwrap()
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["uid"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(uids, ["abe", "mia", "zoe"], "records sorted by uid");

    // double enrollment of the same uid is a runtime error
    let out = bin()
        .args(["enroll", "--reals"])
        .arg(&reals)
        .args(["--store"])
        .arg(&store_a)
        .args(["--strategy", "random", "--k", "5", "--seed", "31"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("already enrolled"));

    // bare password lines need a uid here
    let bare = dir.path().join("bare.txt");
    std::fs::write(&bare, "no-uid-password-9\n").unwrap();
    let out = bin()
        .args(["enroll", "--reals"])
        .arg(&bare)
        .args(["--store"])
        .arg(dir.path().join("c.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("uid:password"));
}

#[test]
fn validate_policy_reports_weak_members() {
    let dir = tempfile::tempdir().unwrap();
    let policy = dir.path().join("policy.conf");
    std::fs::write(&policy, "minlen = 8\n").unwrap();
    let reals = dir.path().join("reals.txt");
    std::fs::write(&reals, "alice:brook-heron-41\n").unwrap();
    let store = dir.path().join("store.jsonl");
    let out = bin()
        .args(["enroll", "--reals"])
        .arg(&reals)
        .args(["--store"])
        .arg(&store)
        .args(["--strategy", "random", "--k", "4", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let clean = dir.path().join("clean.jsonl");
    std::fs::write(
        &clean,
        "{\"uid\":\"alice\",\"sweetwords\":[\"brook-heron-41\",\"longenough1\",\"alsolong22\",\"stilllong33\"]}\n",
    )
    .unwrap();
    let out = bin()
        .args(["validate-policy", "--policy"])
        .arg(&policy)
        .args(["--store"])
        .arg(&store)
        .args(["--plaintexts"])
        .arg(&clean)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("alice: OK"));
    assert!(stdout_of(&out).contains("result: OK"));

    let weak = dir.path().join("weak.jsonl");
    std::fs::write(
        &weak,
        "{\"uid\":\"alice\",\"sweetwords\":[\"brook-heron-41\",\"short1\",\"alsolong22\",\"stilllong33\"]}\n",
    )
    .unwrap();
    let out = bin()
        .args(["validate-policy", "--policy"])
        .arg(&policy)
        .args(["--store"])
        .arg(&store)
        .args(["--plaintexts"])
        .arg(&weak)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = stdout_of(&out);
    assert!(text.contains("alice: DISTINGUISHABLE offenders=1:MINLEN"), "{text}");
    assert!(text.contains("result: DISTINGUISHABLE"), "{text}");
}

#[test]
fn simulate_stdout_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let reals = dir.path().join("reals.txt");
    std::fs::write(&reals, "fern-hollow-8\nlate-ember-31\nglass-finch-72\n").unwrap();
    let run_once = || {
        let out = bin()
            .args(["simulate", "--store-plaintexts"])
            .arg(&reals)
            .args(["--generator", "random", "--level", "A2", "--k", "4", "--seed", "7"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let first = run_once();
    let second = run_once();
    assert_eq!(first, second, "same seed must give identical stdout");
    let text = String::from_utf8(first).unwrap();
    assert!(
        text.starts_with("generator,level,accounts,k,p_top1,ci95,epsilon\n"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 2, "header plus one row");
}

#[test]
fn sweep_emits_well_formed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let reals = dir.path().join("reals.txt");
    std::fs::write(&reals, "fern-hollow-8\nlate-ember-31\n").unwrap();
    let csv_path = dir.path().join("sweep.csv");
    let out = bin()
        .args(["sweep", "--store-plaintexts"])
        .arg(&reals)
        .args(["--generators", "random,corpus", "--levels", "A1,A3", "--k", "4", "--seed", "9", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), text, "stdout mirrors --out");
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("generator,level,accounts,k,p_top1,ci95,epsilon")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4, "2 generators x 2 levels");
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 7, "row {row}");
        let p: f64 = fields[4].parse().unwrap();
        let eps: f64 = fields[6].parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
        assert!((0.0..=1.0).contains(&eps));
    }
}

#[test]
fn serve_checker_bind_precedence() {
    // HC_BIND alone moves the service off the default port
    let (_guard, addr) = spawn_service(&["serve-checker"], &[("HC_BIND", "127.0.0.1:0")]);
    let port: u16 = addr.rsplit(':').next().unwrap().parse().unwrap();
    assert_ne!(port, 7700, "HC_BIND should override the default");

    // an unusable HC_BIND is ignored when --bind is passed
    let (_guard2, addr2) = spawn_service(
        &["serve-checker", "--bind", "127.0.0.1:0"],
        &[("HC_BIND", "0.0.0.256:1")],
    );
    assert!(addr2.starts_with("127.0.0.1:"), "flag must beat HC_BIND");
}

#[test]
fn auth_service_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (_checker, checker_addr) = spawn_service(&["serve-checker", "--bind", "127.0.0.1:0"], &[]);

    let reals = dir.path().join("reals.txt");
    std::fs::write(&reals, "alice:brook-heron-41\nbob:copper-lane-12\n").unwrap();
    let store = dir.path().join("store.jsonl");
    let policy = dir.path().join("policy.conf");
    std::fs::write(&policy, "minlen = 8\n").unwrap();
    let alerts = dir.path().join("alerts.jsonl");

    let out = bin()
        .args(["enroll", "--reals"])
        .arg(&reals)
        .args(["--store"])
        .arg(&store)
        .args(["--strategy", "random", "--k", "4", "--seed", "13", "--checker", &checker_addr])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let auth_args: Vec<String> = vec![
        "serve-auth".into(),
        "--store".into(),
        store.display().to_string(),
        "--checker".into(),
        checker_addr.clone(),
        "--policy".into(),
        policy.display().to_string(),
        "--alerts".into(),
        alerts.display().to_string(),
        "--bind".into(),
        "127.0.0.1:0".into(),
    ];
    let auth_refs: Vec<&str> = auth_args.iter().map(String::as_str).collect();
    let (_auth, auth_addr) = spawn_service(&auth_refs, &[]);

    let login = |uid: &str, password: &str| {
        let out = run(&["login", "--addr", &auth_addr, "--uid", uid, "--password", password]);
        (out.status.code(), stdout_of(&out))
    };

    let (code, body) = login("alice", "brook-heron-41");
    assert_eq!(code, Some(0), "{body}");
    assert_eq!(body.trim(), "{\"status\":\"ok\",\"token_scope\":\"full\"}");

    // recover one of alice's decoys: gen with the enroll seed derivation
    let out = run(&[
        "gen", "--real", "brook-heron-41", "--strategy", "random", "--k", "4", "--seed", "13",
        "--i-understand-plaintext",
    ]);
    let decoy = stdout_of(&out)
        .lines()
        .find(|w| *w != "brook-heron-41")
        .unwrap()
        .to_string();

    let (wrong_code, wrong_body) = login("alice", "not-her-password-1");
    let (honey_code, honey_body) = login("alice", &decoy);
    assert_eq!(wrong_code, Some(2));
    assert_eq!(honey_code, Some(2));
    assert_eq!(
        honey_body, wrong_body,
        "honey denial must be indistinguishable from a wrong-password denial"
    );

    // the alert landed on disk, naming the account but never the password
    let mut alert_text = String::new();
    for _ in 0..50 {
        alert_text = std::fs::read_to_string(&alerts).unwrap_or_default();
        if !alert_text.is_empty() {
            break;
        }
        std::thread::sleep(std::time::Duration::from_millis(20));
    }
    assert!(alert_text.contains("\"uid\":\"alice\""), "{alert_text}");
    assert!(!alert_text.contains(&decoy), "alert must not carry the password");
}
