//! Deterministic test corpora.
//!
//! Specs are written `name:arg,arg,...`, for example `fibonacci:20`,
//! `random:4096,26,7` or `mutated_repeat:500,40,0.01,3`.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq)]
pub enum CorpusSpec {
    Fibonacci(u32),
    ThueMorse(u32),
    Unary(usize),
    Random { n: usize, sigma: u32, seed: u64 },
    MutatedRepeat {
        unit_len: usize,
        copies: usize,
        rate: f64,
        seed: u64,
        sigma: u32,
    },
    File(PathBuf),
}

/// Symbol `i` as a printable byte: letters for small alphabets.
fn letter(i: u32, sigma: u32) -> u8 {
    if sigma <= 26 {
        b'a' + i as u8
    } else {
        i as u8
    }
}

fn check_sigma(sigma: u32) -> Result<()> {
    if !(1..=256).contains(&sigma) {
        return Err(Error::invalid(format!("alphabet size {sigma} outside [1, 256]")));
    }
    Ok(())
}

/// Fibonacci word: `F_1 = b`, `F_2 = a`, `F_k = F_{k-1} F_{k-2}`.
pub fn fibonacci(k: u32) -> Vec<u8> {
    if k <= 1 {
        return b"b".to_vec();
    }
    let (mut prev, mut cur) = (b"b".to_vec(), b"a".to_vec());
    for _ in 2..k {
        let mut next = cur.clone();
        next.extend_from_slice(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Prefix of length `2^k` of the Thue–Morse sequence.
pub fn thue_morse(k: u32) -> Vec<u8> {
    (0..1u64 << k)
        .map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
        .collect()
}

pub fn unary(n: usize) -> Vec<u8> {
    vec![b'a'; n]
}

pub fn random(n: usize, sigma: u32, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| letter(rng.random_range(0..sigma), sigma)).collect()
}

/// `copies` copies of a random unit, each character substituted with
/// probability `rate`.
pub fn mutated_repeat(unit_len: usize, copies: usize, rate: f64, seed: u64, sigma: u32) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit: Vec<u32> = (0..unit_len).map(|_| rng.random_range(0..sigma)).collect();
    let mut out = Vec::with_capacity(unit_len * copies);
    for _ in 0..copies {
        for &c in &unit {
            let c = if rng.random_bool(rate) {
                rng.random_range(0..sigma)
            } else {
                c
            };
            out.push(letter(c, sigma));
        }
    }
    out
}

impl CorpusSpec {
    pub fn generate(&self) -> Result<Vec<u8>> {
        Ok(match self {
            CorpusSpec::Fibonacci(k) => fibonacci(*k),
            CorpusSpec::ThueMorse(k) => thue_morse(*k),
            CorpusSpec::Unary(n) => unary(*n),
            CorpusSpec::Random { n, sigma, seed } => {
                check_sigma(*sigma)?;
                random(*n, *sigma, *seed)
            }
            CorpusSpec::MutatedRepeat {
                unit_len,
                copies,
                rate,
                seed,
                sigma,
            } => {
                check_sigma(*sigma)?;
                if !(0.0..=1.0).contains(rate) {
                    return Err(Error::invalid(format!("mutation rate {rate} outside [0, 1]")));
                }
                mutated_repeat(*unit_len, *copies, *rate, *seed, *sigma)
            }
            CorpusSpec::File(p) => std::fs::read(p)?,
        })
    }
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad {what} `{s}`")))
}

impl FromStr for CorpusSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        if name == "file" {
            return Ok(CorpusSpec::File(PathBuf::from(args)));
        }
        let a: Vec<&str> = if args.is_empty() { Vec::new() } else { args.split(',').collect() };
        let arity = |lo: usize, hi: usize| {
            if a.len() < lo || a.len() > hi {
                Err(Error::invalid(format!("`{name}` takes {lo}..={hi} arguments, got {}", a.len())))
            } else {
                Ok(())
            }
        };
        Ok(match name {
            "fibonacci" | "fib" => {
                arity(1, 1)?;
                CorpusSpec::Fibonacci(num(a[0], "index")?)
            }
            "thue_morse" | "tm" => {
                arity(1, 1)?;
                CorpusSpec::ThueMorse(num(a[0], "exponent")?)
            }
            "unary" => {
                arity(1, 1)?;
                CorpusSpec::Unary(num(a[0], "length")?)
            }
            "random" => {
                arity(2, 3)?;
                CorpusSpec::Random {
                    n: num(a[0], "length")?,
                    sigma: num(a[1], "alphabet size")?,
                    seed: a.get(2).map_or(Ok(0), |s| num(s, "seed"))?,
                }
            }
            "mutated_repeat" | "mutated" => {
                arity(4, 5)?;
                CorpusSpec::MutatedRepeat {
                    unit_len: num(a[0], "unit length")?,
                    copies: num(a[1], "copy count")?,
                    rate: num(a[2], "mutation rate")?,
                    seed: num(a[3], "seed")?,
                    sigma: a.get(4).map_or(Ok(4), |s| num(s, "alphabet size"))?,
                }
            }
            other => return Err(Error::invalid(format!("unknown generator `{other}`"))),
        })
    }
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusSpec::Fibonacci(k) => write!(f, "fibonacci:{k}"),
            CorpusSpec::ThueMorse(k) => write!(f, "thue_morse:{k}"),
            CorpusSpec::Unary(n) => write!(f, "unary:{n}"),
            CorpusSpec::Random { n, sigma, seed } => write!(f, "random:{n},{sigma},{seed}"),
            CorpusSpec::MutatedRepeat {
                unit_len,
                copies,
                rate,
                seed,
                sigma,
            } => write!(f, "mutated_repeat:{unit_len},{copies},{rate},{seed},{sigma}"),
            CorpusSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_lengths() {
        assert_eq!(fibonacci(1), b"b");
        assert_eq!(fibonacci(2), b"a");
        assert_eq!(fibonacci(3), b"ab");
        assert_eq!(fibonacci(5), b"abaab");
        assert_eq!(fibonacci(6), b"abaababa");
        assert_eq!(fibonacci(25).len(), 75025);
    }

    #[test]
    fn thue_morse_prefix() {
        assert_eq!(thue_morse(3), b"abbabaab");
        assert_eq!(thue_morse(12).len(), 4096);
    }

    #[test]
    fn deterministic_generators() {
        assert_eq!(random(100, 26, 1), random(100, 26, 1));
        assert_ne!(random(100, 26, 1), random(100, 26, 2));
        assert!(random(4096, 26, 3).iter().all(|b| b.is_ascii_lowercase()));
        let m = mutated_repeat(50, 10, 0.0, 9, 4);
        assert_eq!(&m[..50], &m[50..100]);
        assert_eq!(mutated_repeat(50, 10, 0.1, 9, 4), mutated_repeat(50, 10, 0.1, 9, 4));
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "fibonacci:20",
            "thue_morse:12",
            "unary:16",
            "random:4096,26,7",
            "mutated_repeat:500,40,0.01,3,4",
            "file:/tmp/x",
        ] {
            let spec: CorpusSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(
            "random:10,2".parse::<CorpusSpec>().unwrap(),
            CorpusSpec::Random { n: 10, sigma: 2, seed: 0 }
        );
        assert!("random:10".parse::<CorpusSpec>().is_err());
        assert!("nope:1".parse::<CorpusSpec>().is_err());
        assert!("random:10,300".parse::<CorpusSpec>().unwrap().generate().is_err());
    }
}
