//! Command-line front end for the honeyward toolkit.
//!
//! One subcommand per workflow step: `gen` inspects decoy generation,
//! `enroll` builds a credential store, `serve-checker`/`serve-auth` run
//! the two services, `login` is a test client, `simulate`/`sweep` drive
//! attacker evaluations, and `crackcalc` prints crack-time arithmetic.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error. Machine-readable
//! output goes to stdout, diagnostics to stderr. The only environment
//! variable consulted anywhere is HC_BIND (serve-checker bind address);
//! the worker pool is sized explicitly so thread count never depends on
//! the environment.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use honeyward::authgate::alert::AlertSink;
use honeyward::authgate::http::{http_post, serve_http};
use honeyward::authgate::{AuthGate, FailMode};
use honeyward::config::{load_config, AppConfig};
use honeyward::crackcalc::{entropy_bits, exhaustive_time, keyspace, render_tables};
use honeyward::credstore::CredentialStore;
use honeyward::decoygen::model::{train_model, CorpusModel, DEFAULT_ORDER};
use honeyward::decoygen::{
    assemble_sweetwords, bundled_corpus, derive_seed, generate, GeneratorConfig, Layout,
    PiiRecord, Strategy,
};
use honeyward::gauntlet::{sweep, Level};
use honeyward::honeychecker::{serve, CheckerApi, TcpCheckerClient};
use honeyward::policyguard::{check_sweetword_set, load_policy, Policy, SetStatus};
use honeyward::responder::Responder;
use honeyward::{Error, Result};

#[derive(Parser)]
#[command(
    name = "honeyward",
    version,
    about = "Honeyword-augmented authentication toolkit",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// INI config file with [policy], [responder], and [kdf.<id>] sections.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one sweetword set and print it (plaintext; gated).
    Gen(GenArgs),
    /// Enroll accounts into a credential store file.
    Enroll(EnrollArgs),
    /// Check a policy file, a store, and optionally plaintext sets.
    ValidatePolicy(ValidatePolicyArgs),
    /// Run the honeychecker TCP service.
    ServeChecker(ServeCheckerArgs),
    /// Run the HTTP login service.
    ServeAuth(ServeAuthArgs),
    /// Send one login to a running auth service (test client).
    Login(LoginArgs),
    /// Evaluate one generator against one attacker level.
    Simulate(SimulateArgs),
    /// Cross generators with attacker levels and emit a CSV.
    Sweep(SweepArgs),
    /// Entropy, keyspace, and crack-time arithmetic.
    Crackcalc(CrackcalcArgs),
}

#[derive(Args)]
struct GenArgs {
    /// The real password the decoys will surround.
    #[arg(long)]
    real: String,

    /// Decoy strategy: typo, random, corpus, or hybrid.
    #[arg(long, default_value = "random")]
    strategy: Strategy,

    /// Sweetword set size (decoys plus the real password).
    #[arg(long, default_value_t = 4)]
    k: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Minimum edit distance between any decoy and the real password.
    #[arg(long)]
    d_min: Option<usize>,

    /// Training corpus for corpus/hybrid (default: bundled toy corpus).
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,

    /// Policy file overriding the config's [policy] section.
    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,

    /// Synthetic username token for hybrid personalization.
    #[arg(long, value_name = "TOKEN")]
    pii_username: Option<String>,

    /// Synthetic birth year for hybrid personalization.
    #[arg(long, value_name = "YEAR")]
    pii_birth_year: Option<u16>,

    /// Synthetic name tokens, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "TOKENS")]
    pii_name_tokens: Vec<String>,

    /// Keyboard layout tag: qwerty or azerty.
    #[arg(long, default_value = "qwerty")]
    pii_layout: Layout,

    /// Acknowledge that plaintext sweetwords will be printed.
    #[arg(long)]
    i_understand_plaintext: bool,
}

#[derive(Args)]
struct EnrollArgs {
    /// Store file to create or extend.
    #[arg(long, value_name = "FILE")]
    store: PathBuf,

    /// Enroll a single account (requires --real).
    #[arg(long, requires = "real", conflicts_with = "reals")]
    uid: Option<String>,

    /// Real password for --uid.
    #[arg(long, requires = "uid")]
    real: Option<String>,

    /// Batch file of `uid:password` lines.
    #[arg(long, value_name = "FILE", required_unless_present = "uid")]
    reals: Option<PathBuf>,

    #[arg(long, default_value = "random")]
    strategy: Strategy,

    #[arg(long, default_value_t = 4)]
    k: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// KDF profile id from the registry.
    #[arg(long, default_value = "test-kdf")]
    kdf: String,

    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,

    /// Register each account's true index with a running honeychecker.
    #[arg(long, value_name = "ADDR")]
    checker: Option<String>,
}

#[derive(Args)]
struct ValidatePolicyArgs {
    #[arg(long, value_name = "FILE")]
    policy: PathBuf,

    /// Credential store to structurally validate.
    #[arg(long, value_name = "FILE")]
    store: PathBuf,

    /// JSONL of {"uid":..,"sweetwords":[..]} kept by a test harness.
    #[arg(long, value_name = "FILE")]
    plaintexts: Option<PathBuf>,
}

#[derive(Args)]
struct ServeCheckerArgs {
    /// Bind address; the flag beats the HC_BIND environment variable.
    #[arg(long, env = "HC_BIND", default_value = "127.0.0.1:7700", value_name = "ADDR")]
    bind: String,
}

#[derive(Args)]
struct ServeAuthArgs {
    #[arg(long, value_name = "FILE")]
    store: PathBuf,

    /// Honeychecker address.
    #[arg(long, value_name = "ADDR")]
    checker: String,

    #[arg(long, value_name = "FILE")]
    policy: PathBuf,

    /// Alert log file (JSON lines, append).
    #[arg(long, value_name = "FILE")]
    alerts: PathBuf,

    #[arg(long, default_value = "127.0.0.1:7701", value_name = "ADDR")]
    bind: String,

    /// Behavior when the honeychecker is unreachable.
    #[arg(long, default_value = "fail-closed")]
    fail_mode: FailMode,
}

#[derive(Args)]
struct LoginArgs {
    /// Auth service address (host:port).
    #[arg(long, value_name = "ADDR")]
    addr: String,

    #[arg(long)]
    uid: String,

    #[arg(long)]
    password: String,

    #[arg(long, default_value_t = 0.0)]
    ip_reputation: f64,

    #[arg(long, default_value_t = 0.0)]
    geo_anomaly: f64,

    #[arg(long)]
    device_mismatch: bool,

    #[arg(long, default_value_t = 0.0)]
    history_anomaly: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Plaintext store: `uid:password` or bare password lines.
    #[arg(long, value_name = "FILE")]
    store_plaintexts: PathBuf,

    #[arg(long)]
    generator: Strategy,

    /// Attacker level A1..A4.
    #[arg(long)]
    level: Level,

    #[arg(long)]
    k: usize,

    #[arg(long)]
    seed: u64,

    /// Also write the CSV here (stdout always carries it).
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Plaintext store: `uid:password` or bare password lines.
    #[arg(long, value_name = "FILE")]
    store_plaintexts: PathBuf,

    /// Comma-separated strategies.
    #[arg(long, value_delimiter = ',', default_value = "typo,random,corpus,hybrid")]
    generators: Vec<Strategy>,

    /// Comma-separated attacker levels.
    #[arg(long, value_delimiter = ',', default_value = "A1,A2,A3,A4")]
    levels: Vec<Level>,

    #[arg(long)]
    k: usize,

    #[arg(long)]
    seed: u64,

    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,
}

#[derive(Args)]
struct CrackcalcArgs {
    /// Password length L.
    #[arg(long, default_value_t = 8)]
    length: u32,

    /// Alphabet size N.
    #[arg(long, default_value_t = 62)]
    alphabet: u32,

    /// Guess rate in guesses/s.
    #[arg(long, required_unless_present = "tables")]
    rate: Option<f64>,

    /// Reduced guess budget; adds a practical-time line.
    #[arg(long)]
    budget: Option<f64>,

    /// Print the per-algorithm benchmark tables instead.
    #[arg(long)]
    tables: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    // Size the pool explicitly so neither RAYON_NUM_THREADS nor any other
    // environment state influences execution.
    let threads = cli.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }

    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let app = match &cli.config {
        Some(path) => load_config(path)?,
        None => AppConfig::default(),
    };
    match cli.command {
        Command::Gen(args) => cmd_gen(&app, args),
        Command::Enroll(args) => cmd_enroll(&app, args),
        Command::ValidatePolicy(args) => cmd_validate_policy(&app, args),
        Command::ServeChecker(args) => cmd_serve_checker(args),
        Command::ServeAuth(args) => cmd_serve_auth(&app, args),
        Command::Login(args) => cmd_login(args),
        Command::Simulate(args) => cmd_simulate(&app, args),
        Command::Sweep(args) => cmd_sweep(&app, args),
        Command::Crackcalc(args) => cmd_crackcalc(&app, args),
    }
}

/// Policy from `--policy FILE` when given, else the config's [policy].
fn policy_for(app: &AppConfig, flag: &Option<PathBuf>) -> Result<Policy> {
    match flag {
        Some(path) => load_policy(path),
        None => Ok(app.policy.clone()),
    }
}

/// Train a corpus model from a file, or from the bundled toy corpus.
fn train_from(path: Option<&Path>) -> Result<CorpusModel> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            train_model(
                text.lines()
                    .map(|l| l.trim_end_matches('\r'))
                    .filter(|l| !l.is_empty()),
                DEFAULT_ORDER,
            )
        }
        None => train_model(bundled_corpus(), DEFAULT_ORDER),
    }
}

/// Parse `uid:password` or bare password lines. Blank lines are skipped;
/// there is no comment syntax because passwords may start with anything.
fn read_plaintexts(path: &Path, require_uid: bool) -> Result<Vec<(Option<String>, String)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        match line.split_once(':') {
            Some((uid, password)) => out.push((Some(uid.to_string()), password.to_string())),
            None if require_uid => {
                return Err(Error::parse(i + 1, "expected 'uid:password'"));
            }
            None => out.push((None, line.to_string())),
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!(
            "no passwords in {}",
            path.display()
        )));
    }
    Ok(out)
}

fn build_pii(args: &GenArgs) -> Result<Option<PiiRecord>> {
    if args.pii_username.is_none()
        && args.pii_birth_year.is_none()
        && args.pii_name_tokens.is_empty()
    {
        return Ok(None);
    }
    let pii = PiiRecord {
        username: args.pii_username.clone(),
        birth_year: args.pii_birth_year,
        name_tokens: args.pii_name_tokens.clone(),
        keyboard_layout: args.pii_layout,
    };
    pii.validate()?;
    Ok(Some(pii))
}

fn needs_model(strategy: Strategy) -> bool {
    matches!(strategy, Strategy::Corpus | Strategy::Hybrid)
}

fn cmd_gen(app: &AppConfig, args: GenArgs) -> Result<ExitCode> {
    if !args.i_understand_plaintext {
        eprintln!(
            "gen prints plaintext sweetwords; pass --i-understand-plaintext to confirm"
        );
        return Ok(ExitCode::from(1));
    }
    let policy = policy_for(app, &args.policy)?;
    let model = match needs_model(args.strategy) {
        true => Some(train_from(args.corpus.as_deref())?),
        false => None,
    };
    let pii = build_pii(&args)?;

    let mut cfg = GeneratorConfig::new(
        args.strategy,
        args.k,
        derive_seed(args.seed, &["decoys", args.strategy.as_str(), &args.real]),
    );
    cfg.policy = policy;
    if let Some(d) = args.d_min {
        cfg.d_min = d;
    }
    let decoys = generate(&args.real, &cfg, model.as_ref(), pii.as_ref())?;
    let (sweetwords, true_index) = assemble_sweetwords(
        &args.real,
        &decoys,
        derive_seed(args.seed, &["assemble", &args.real]),
    )?;
    let mut stdout = std::io::stdout().lock();
    for word in &sweetwords {
        writeln!(stdout, "{word}")?;
    }
    eprintln!("true_index={true_index}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_enroll(app: &AppConfig, args: EnrollArgs) -> Result<ExitCode> {
    let policy = policy_for(app, &args.policy)?;
    let pairs: Vec<(String, String)> = match (&args.uid, &args.real, &args.reals) {
        (Some(uid), Some(real), None) => vec![(uid.clone(), real.clone())],
        (None, None, Some(path)) => read_plaintexts(path, true)?
            .into_iter()
            .map(|(uid, pw)| (uid.expect("uid required"), pw))
            .collect(),
        _ => return Err(Error::Config("pass either --uid/--real or --reals".into())),
    };
    let model = match needs_model(args.strategy) {
        true => Some(train_from(args.corpus.as_deref())?),
        false => None,
    };

    // Decoy generation is the expensive part; do it in parallel with
    // content-derived seeds so the output is identical at any thread count.
    use rayon::prelude::*;
    let prepared: Vec<(String, Vec<String>, usize, String)> = pairs
        .par_iter()
        .map(|(uid, real)| {
            let mut cfg = GeneratorConfig::new(
                args.strategy,
                args.k,
                derive_seed(args.seed, &["decoys", args.strategy.as_str(), real]),
            );
            cfg.policy = policy.clone();
            let decoys = generate(real, &cfg, model.as_ref(), None)?;
            let (sweetwords, true_index) = assemble_sweetwords(
                real,
                &decoys,
                derive_seed(args.seed, &["assemble", uid, real]),
            )?;
            Ok((uid.clone(), sweetwords, true_index, real.clone()))
        })
        .collect::<Result<_>>()?;

    let mut store = match args.store.exists() {
        true => CredentialStore::load(&args.store)?,
        false => CredentialStore::new(),
    };
    let profile = app.registry.get(&args.kdf)?.clone();
    let mut stdout = std::io::stdout().lock();
    for (uid, sweetwords, true_index, real) in &prepared {
        let mut salt_rng = ChaCha8Rng::seed_from_u64(derive_seed(args.seed, &["salt", uid]));
        store.enroll(uid, real, sweetwords, *true_index, &profile, &mut salt_rng)?;
        writeln!(stdout, "enrolled {uid} k={} kdf={}", sweetwords.len(), profile.id)?;
    }
    store.save(&args.store)?;

    if let Some(addr) = &args.checker {
        let client = TcpCheckerClient::new(addr.clone());
        for (uid, sweetwords, true_index, _) in &prepared {
            client.set(uid, sweetwords.len(), *true_index)?;
        }
        eprintln!("registered {} account(s) with checker at {addr}", prepared.len());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlainSet {
    uid: String,
    sweetwords: Vec<String>,
}

fn cmd_validate_policy(app: &AppConfig, args: ValidatePolicyArgs) -> Result<ExitCode> {
    let policy = load_policy(&args.policy)?;
    let store = CredentialStore::load(&args.store)?;
    for set in store.iter() {
        app.registry.get(&set.kdf).map_err(|_| {
            Error::Config(format!(
                "store record '{}' names unknown kdf '{}'",
                set.uid, set.kdf
            ))
        })?;
    }
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "policy: ok ({})", args.policy.display())?;
    writeln!(stdout, "store: ok ({} accounts)", store.len())?;

    let mut clean = true;
    if let Some(path) = &args.plaintexts {
        let text = fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let set: PlainSet = serde_json::from_str(line)
                .map_err(|e| Error::parse(i + 1, format!("bad plaintext record: {e}")))?;
            if let Some(record) = store.get(&set.uid) {
                if record.digests.len() != set.sweetwords.len() {
                    writeln!(
                        stdout,
                        "{}: MISMATCH store has k={}, plaintexts have k={}",
                        set.uid,
                        record.digests.len(),
                        set.sweetwords.len()
                    )?;
                    clean = false;
                    continue;
                }
            }
            let report = check_sweetword_set(&policy, &set.sweetwords)?;
            match report.status {
                SetStatus::Ok => writeln!(stdout, "{}: OK", set.uid)?,
                status => {
                    let label = match status {
                        SetStatus::Distinguishable => "DISTINGUISHABLE",
                        SetStatus::AllRejected => "ALL_REJECTED",
                        SetStatus::Ok => unreachable!(),
                    };
                    let offenders: Vec<String> = report
                        .offending_indices()
                        .into_iter()
                        .map(|i| {
                            let codes: Vec<&str> =
                                report.verdicts[i].iter().map(|v| v.code()).collect();
                            format!("{i}:{}", codes.join("+"))
                        })
                        .collect();
                    writeln!(stdout, "{}: {label} offenders={}", set.uid, offenders.join(","))?;
                    clean = false;
                }
            }
        }
    }
    writeln!(stdout, "result: {}", if clean { "OK" } else { "DISTINGUISHABLE" })?;
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_serve_checker(args: ServeCheckerArgs) -> Result<ExitCode> {
    let handle = serve(&args.bind)?;
    println!("listening on {}", handle.addr());
    std::io::stdout().flush()?;
    loop {
        std::thread::park();
    }
}

fn cmd_serve_auth(app: &AppConfig, args: ServeAuthArgs) -> Result<ExitCode> {
    // The policy file is part of the deployment contract: it must at least
    // parse, even though login itself never consults it.
    load_policy(&args.policy)?;
    let store = CredentialStore::load(&args.store)?;
    for set in store.iter() {
        app.registry.get(&set.kdf).map_err(|_| {
            Error::Config(format!(
                "store record '{}' names unknown kdf '{}'",
                set.uid, set.kdf
            ))
        })?;
    }
    let checker = TcpCheckerClient::new(args.checker.clone());
    checker.ping()?;
    let alerts = AlertSink::to_file(&args.alerts)?;
    let responder = Responder::new(app.responder.clone())?;
    let gate = AuthGate::new(
        store,
        app.registry.clone(),
        Arc::new(checker),
        responder,
        alerts,
        args.fail_mode,
    );
    let handle = serve_http(&args.bind, Arc::new(gate))?;
    println!("listening on {}", handle.addr());
    std::io::stdout().flush()?;
    loop {
        std::thread::park();
    }
}

fn cmd_login(args: LoginArgs) -> Result<ExitCode> {
    let body = serde_json::json!({
        "uid": args.uid,
        "password": args.password,
        "context": {
            "ip_reputation": args.ip_reputation,
            "geo_anomaly": args.geo_anomaly,
            "device_mismatch": args.device_mismatch,
            "history_anomaly": args.history_anomaly,
        },
    });
    let (status, response) = http_post(&args.addr, "/login", &body.to_string())?;
    println!("{response}");
    if status != 200 {
        return Err(Error::Protocol(format!("auth service returned HTTP {status}")));
    }
    let parsed: serde_json::Value = serde_json::from_str(&response)
        .map_err(|e| Error::Protocol(format!("bad response body: {e}")))?;
    Ok(match parsed.get("status").and_then(|s| s.as_str()) {
        Some("ok") => ExitCode::SUCCESS,
        _ => ExitCode::from(2),
    })
}

fn run_sweep(
    app: &AppConfig,
    plaintexts: &Path,
    generators: &[Strategy],
    levels: &[Level],
    k: usize,
    seed: u64,
    corpus: Option<&Path>,
    policy_flag: &Option<PathBuf>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let policy = policy_for(app, policy_flag)?;
    let reals: Vec<String> = read_plaintexts(plaintexts, false)?
        .into_iter()
        .map(|(_, pw)| pw)
        .collect();
    let model = Arc::new(train_from(corpus)?);
    let csv = sweep(&reals, generators, levels, k, seed, model, &policy)?;
    print!("{csv}");
    std::io::stdout().flush()?;
    if let Some(path) = out {
        fs::write(path, &csv)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(app: &AppConfig, args: SimulateArgs) -> Result<ExitCode> {
    run_sweep(
        app,
        &args.store_plaintexts,
        &[args.generator],
        &[args.level],
        args.k,
        args.seed,
        args.corpus.as_deref(),
        &args.policy,
        args.out.as_deref(),
    )
}

fn cmd_sweep(app: &AppConfig, args: SweepArgs) -> Result<ExitCode> {
    run_sweep(
        app,
        &args.store_plaintexts,
        &args.generators,
        &args.levels,
        args.k,
        args.seed,
        args.corpus.as_deref(),
        &args.policy,
        args.out.as_deref(),
    )
}

fn cmd_crackcalc(app: &AppConfig, args: CrackcalcArgs) -> Result<ExitCode> {
    if args.tables {
        print!("{}", render_tables(&app.registry.benchmark_rows()));
        return Ok(ExitCode::SUCCESS);
    }
    let h: f64 = entropy_bits(args.length, args.alphabet)?;
    let space = keyspace(args.length, args.alphabet)?;
    let rate = args.rate.expect("clap enforces rate without --tables");
    let exhaustive = exhaustive_time::<f64>(args.length, args.alphabet, rate)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "keyspace={space}")?;
    writeln!(stdout, "entropy_bits={h:.4}")?;
    writeln!(stdout, "exhaustive={exhaustive}")?;
    if let Some(budget) = args.budget {
        let practical = honeyward::crackcalc::budget_time::<f64>(budget, rate)?;
        writeln!(stdout, "practical={practical}")?;
    }
    Ok(ExitCode::SUCCESS)
}
