//! Entropy and crack-time arithmetic.
//!
//! A password of length `L` over an alphabet of size `N` has entropy
//! `H = L * log2(N)` bits and an exact keyspace of `N^L` candidates.
//! Exhaustive crack time divides the keyspace by a hash rate; practical
//! crack time divides a reduced guess budget by the same rate.
//!
//! Keyspace arithmetic is exact (big integer); durations are generic over
//! [`Real`] (f32/f64). One year is 31,557,600 s (Julian year), so table
//! tolerances are meaningful.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::credstore::KdfProfile;
use crate::error::{Error, Result};
use crate::num::Real;

/// Seconds per Julian year.
pub const SECONDS_PER_YEAR: f64 = 31_557_600.0;
/// Seconds per day.
pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Search space description: either a full `N^L` keyspace or an explicit
/// guess budget.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchSpec {
    /// Exhaustive search over passwords of `length` chars from an
    /// `alphabet`-symbol set.
    Keyspace { length: u32, alphabet: u32 },
    /// A fixed number of guesses.
    Budget(f64),
}

impl SearchSpec {
    /// Total guesses this search covers, as a float.
    pub fn guesses(&self) -> Result<f64> {
        match *self {
            SearchSpec::Keyspace { length, alphabet } => {
                Ok(biguint_to_f64(&keyspace(length, alphabet)?))
            }
            SearchSpec::Budget(b) => {
                if b < 0.0 {
                    return Err(Error::Config(format!("budget must be >= 0, got {b}")));
                }
                Ok(b)
            }
        }
    }
}

/// Password entropy in bits: `H = L * log2(N)`.
pub fn entropy_bits<F: Real>(length: u32, alphabet: u32) -> Result<F> {
    if length < 1 {
        return Err(Error::Config("length must be >= 1".into()));
    }
    if alphabet < 2 {
        return Err(Error::Config(format!(
            "alphabet size must be >= 2, got {alphabet}"
        )));
    }
    let l = F::from_u32(length).expect("length fits scalar");
    let n = F::from_u32(alphabet).expect("alphabet fits scalar");
    Ok(l * n.log2())
}

/// Exact keyspace `N^L`.
pub fn keyspace(length: u32, alphabet: u32) -> Result<BigUint> {
    if length < 1 {
        return Err(Error::Config("length must be >= 1".into()));
    }
    if alphabet < 2 {
        return Err(Error::Config(format!(
            "alphabet size must be >= 2, got {alphabet}"
        )));
    }
    Ok(BigUint::from(alphabet).pow(length))
}

fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// A crack-time duration in seconds, with unit conversions and a
/// human-readable rendering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrackDuration<F: Real> {
    pub seconds: F,
}

impl<F: Real> CrackDuration<F> {
    pub fn from_seconds(seconds: F) -> Self {
        CrackDuration { seconds }
    }

    pub fn years(&self) -> F {
        self.seconds / F::from_f64_const(SECONDS_PER_YEAR)
    }

    pub fn days(&self) -> F {
        self.seconds / F::from_f64_const(SECONDS_PER_DAY)
    }

    /// Render with a unit chosen by magnitude and 3 significant digits,
    /// e.g. `34.6 yrs`, `12.9 d`, `25.0 min`.
    pub fn humanize(&self) -> String {
        let secs = self.seconds.to_f64().unwrap_or(f64::NAN);
        if !secs.is_finite() {
            return "inf".to_string();
        }
        let (value, unit) = if secs >= SECONDS_PER_YEAR {
            (secs / SECONDS_PER_YEAR, "yrs")
        } else if secs >= SECONDS_PER_DAY {
            (secs / SECONDS_PER_DAY, "d")
        } else if secs >= 3600.0 {
            (secs / 3600.0, "h")
        } else if secs >= 60.0 {
            (secs / 60.0, "min")
        } else {
            (secs, "s")
        };
        format!("{} {unit}", format_sig3(value))
    }
}

impl<F: Real> std::fmt::Display for CrackDuration<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.humanize())
    }
}

/// Time to exhaust the full `N^L` keyspace at `rate` guesses per second.
pub fn exhaustive_time<F: Real>(length: u32, alphabet: u32, rate: F) -> Result<CrackDuration<F>> {
    let space = keyspace(length, alphabet)?;
    let guesses = F::from_f64(biguint_to_f64(&space)).expect("keyspace as scalar");
    budget_time(guesses, rate)
}

/// Time to spend `budget` guesses at `rate` guesses per second.
pub fn budget_time<F: Real>(budget: F, rate: F) -> Result<CrackDuration<F>> {
    if !(rate > F::zero()) {
        return Err(Error::Config("rate must be > 0 guesses/s".into()));
    }
    if budget < F::zero() {
        return Err(Error::Config("budget must be >= 0 guesses".into()));
    }
    Ok(CrackDuration::from_seconds(budget / rate))
}

/// Format a number to 3 significant digits with thousands separators,
/// e.g. `115,000`, `34.6`, `0.289`.
pub fn format_sig3(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs();
    if mag >= 1e15 {
        return format!("{x:.2e}");
    }
    let mut exp = mag.log10().floor() as i32;
    let scale = 10f64.powi(exp - 2);
    let mut rounded = (x / scale).round() * scale;
    // rounding can push into the next decade (999.6 -> 1000)
    if rounded.abs() >= 10f64.powi(exp + 1) {
        exp += 1;
        rounded = (x / 10f64.powi(exp - 2)).round() * 10f64.powi(exp - 2);
    }
    let decimals = (2 - exp).max(0) as usize;
    let body = format!("{rounded:.decimals$}");
    insert_thousands_separators(&body)
}

fn insert_thousands_separators(s: &str) -> String {
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => ("-", r),
        None => ("", s),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (rest, None),
    };
    let mut grouped = String::new();
    let digits: Vec<char> = int_part.chars().collect();
    for (i, c) in digits.iter().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            grouped.push(',');
        }
        grouped.push(*c);
    }
    match frac_part {
        Some(f) => format!("{sign}{grouped}.{f}"),
        None => format!("{sign}{grouped}"),
    }
}

fn format_rate(rate: f64) -> String {
    if rate.fract() == 0.0 && rate.abs() < 1e15 {
        insert_thousands_separators(&format!("{rate:.0}"))
    } else {
        format!("{rate}")
    }
}

/// Render the exhaustive and budget crack-time tables for the given KDF
/// profiles, using each profile's benchmark rate.
///
/// The exhaustive table covers the 8-char alphanumeric space (N=62); the
/// practical table uses a reduced budget of 5e9 guesses.
pub fn render_tables(profiles: &[&KdfProfile]) -> String {
    const LENGTH: u32 = 8;
    const ALPHABET: u32 = 62;
    const BUDGET: f64 = 5e9;

    let h: f64 = entropy_bits(LENGTH, ALPHABET).expect("fixed table parameters");
    let mut out = String::new();
    out.push_str(&format!(
        "Exhaustive crack times ({LENGTH}-char, N={ALPHABET}, H = {h:.2} bits)\n"
    ));
    out.push_str(&format!(
        "{:<16}{:<20}{}\n",
        "algorithm", "rate (guesses/s)", "exhaustive time"
    ));
    for p in profiles {
        let t = exhaustive_time::<f64>(LENGTH, ALPHABET, p.bench_rate).expect("valid profile");
        out.push_str(&format!(
            "{:<16}{:<20}~{}\n",
            p.id,
            format_rate(p.bench_rate),
            t.humanize()
        ));
    }
    out.push('\n');
    out.push_str(&format!(
        "Practical crack times (budget {} guesses)\n",
        format_rate(BUDGET)
    ));
    out.push_str(&format!(
        "{:<16}{:<20}{}\n",
        "algorithm", "rate (guesses/s)", "time"
    ));
    for p in profiles {
        let t = budget_time::<f64>(BUDGET, p.bench_rate).expect("valid profile");
        out.push_str(&format!(
            "{:<16}{:<20}~{}\n",
            p.id,
            format_rate(p.bench_rate),
            t.humanize()
        ));
    }
    out
}
