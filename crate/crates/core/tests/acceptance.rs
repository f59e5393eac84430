//! Acceptance suite: every criterion over the full corpus matrix, one
//! PASS/FAIL line each. Exits non-zero when any criterion fails.

use deltaidx::compressor::{compress_with_profile, CompressorConfig, LevelTrace};
use deltaidx::corpus::{self, CorpusSpec};
use deltaidx::extract::{extract_substring, Fingerprint};
use deltaidx::index::{Index, IndexConfig};
use deltaidx::levels::{kappa, Threshold};
use deltaidx::measures::{delta_bound_term, fact_sum_check, substring_complexity};
use deltaidx::rlslp::{check_runlength_periods, Rlslp};
use deltaidx::verify::{sample_patterns, verify_patterns, VerifyConfig, VerifyReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::time::Instant;

const PATTERNS_PER_CORPUS: usize = 300;
const MAX_M: usize = 256;
const SPARSITY_INTERVALS: usize = 100;
const RANGES_PER_BUILD: usize = 10_000;
const FULL_EXPANSION_MAX_N: usize = 1 << 12;

fn matrix() -> Vec<CorpusSpec> {
    let mut specs = Vec::new();
    for k in [8, 12, 16, 20, 24] {
        specs.push(CorpusSpec::Fibonacci(k));
    }
    for k in [4, 8, 10, 12, 14, 16] {
        specs.push(CorpusSpec::ThueMorse(k));
    }
    for n in [1, 100, 4096, 1 << 16] {
        specs.push(CorpusSpec::Unary(n));
    }
    for (i, n) in [64, 1000, 4096, 1 << 16].into_iter().enumerate() {
        for sigma in [2, 4, 26] {
            specs.push(CorpusSpec::Random { n, sigma, seed: 11 + i as u64 });
        }
    }
    for (unit_len, copies, rate) in [(64, 60, 0.01), (300, 13, 0.02), (1000, 65, 0.002)] {
        for sigma in [2, 4, 26] {
            specs.push(CorpusSpec::MutatedRepeat {
                unit_len,
                copies,
                rate,
                seed: 5 + sigma as u64,
                sigma,
            });
        }
    }
    specs
}

#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
    checked: u64,
}

impl Criterion {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

struct CorpusResult {
    name: String,
    n: usize,
    report: VerifyReport,
    level_ok: bool,
    level_detail: String,
    sparsity_bad: Vec<String>,
    sparsity_checked: u64,
    period_violations: usize,
    fact: (f64, f64, bool),
    g: u64,
    g_bound: f64,
    expansion_bad: Vec<String>,
    expansion_checked: u64,
    range_bad: Vec<String>,
    deterministic: bool,
    round_trip: bool,
}

fn cfg() -> IndexConfig {
    IndexConfig::default()
}

fn trace_of(text: &[u32], sigma: u32) -> (Rlslp, LevelTrace) {
    let profile = substring_complexity(text);
    let cc = CompressorConfig {
        retain_levels: true,
        ..cfg().compressor()
    };
    let c = compress_with_profile(text, sigma, &profile, &cc).expect("compress");
    (c.grammar, c.trace)
}

fn count_in(bk: &[u64], lo: u64, hi: u64) -> u64 {
    (bk.partition_point(|&b| b <= hi) - bk.partition_point(|&b| b < lo)) as u64
}

fn run_corpus(spec: &CorpusSpec, seed: u64) -> CorpusResult {
    let bytes = spec.generate().expect("generate corpus");
    let idx = Index::build_bytes(&bytes, &cfg()).expect("build");
    let text = idx.text();
    let n = text.len();
    let sigma = idx.header().sigma;
    let g = idx.grammar();

    let vcfg = VerifyConfig {
        patterns: PATTERNS_PER_CORPUS,
        max_m: MAX_M,
        seed,
    };
    let report = verify_patterns(&idx, &text, &sample_patterns(&text, sigma, &vcfg));

    let h = idx.header();
    let mut level_detail = String::new();
    let mut level_ok = true;
    for (k, &size) in h.level_sizes.iter().enumerate() {
        let t = Threshold::for_level(k + 1);
        if size > 0 && t.cmp_scaled(size as u128 - 1, 4 * n as u128) != Ordering::Less {
            level_ok = false;
            level_detail = format!("|S_{k}| = {size} against n = {n}");
        }
    }
    let total: u64 = h.level_sizes.iter().sum();
    let total_bound = 40 * n as u64 + kappa(n as u64) as u64;
    if total > total_bound {
        level_ok = false;
        level_detail = format!("total {total} > {total_bound}");
    }

    let (tg, trace) = trace_of(&text, sigma);
    assert!(tg == *g, "{spec}: retained-level build diverged from the index build");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut sparsity_bad = Vec::new();
    let mut sparsity_checked = 0;
    let mut expansion_bad = Vec::new();
    let mut expansion_checked = 0;
    let fps = idx.fingerprints();
    let whole = fps.hasher().hash(&text);
    for k in 0..=trace.last_level() {
        let level = trace.level(k).expect("retained level");
        expansion_checked += 1;
        let fp = level
            .iter()
            .fold(Fingerprint::EMPTY, |acc, &a| acc.concat(fps.of_symbol(a)));
        let mut ok = fp == whole;
        if n <= FULL_EXPANSION_MAX_N {
            let mut full = Vec::with_capacity(n);
            for &a in level {
                full.extend(g.expand(a).expect("expand"));
            }
            ok &= full == text;
        }
        if !ok {
            expansion_bad.push(format!("{spec} level {k}"));
        }
        if n <= FULL_EXPANSION_MAX_N {
            let bk = trace.phrase_boundaries(g, k).expect("boundaries");
            let t = Threshold::for_level(k + 1);
            for i in 0..SPARSITY_INTERVALS {
                let (lo, hi) = if i % 2 == 0 {
                    let a = rng.random_range(0..=n as u64);
                    let b = rng.random_range(0..=n as u64);
                    (a.min(b), a.max(b))
                } else {
                    let lo = rng.random_range(0..=n as u64);
                    (lo, (lo + rng.random_range(0..64)).min(n as u64))
                };
                let len = hi - lo + 1;
                let c = count_in(&bk, lo, hi);
                // c < 2 + (4|I| - 4)/ℓ  <=>  (c - 2) ℓ < 4|I| - 4
                let ok = c < 2 || t.cmp_scaled((c - 2) as u128, (4 * len - 4) as u128) == Ordering::Less;
                sparsity_checked += 1;
                if !ok {
                    sparsity_bad.push(format!("{spec} level {k} I=[{lo},{hi}] count {c}"));
                }
            }
        }
    }

    let profile = substring_complexity(&text);
    let fact = fact_sum_check(&profile);
    let g_bound = delta_bound_term(
        (n as f64).max(2.0),
        (profile.sigma_used as f64).max(2.0),
        profile.delta.as_f64(),
    );

    let mut range_bad = Vec::new();
    let hasher = fps.hasher();
    for i in 0..RANGES_PER_BUILD {
        let (a, b) = if i % 2 == 0 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            (a.min(b), a.max(b) + 1)
        } else {
            let a = rng.random_range(0..n);
            (a, (a + rng.random_range(1..=MAX_M)).min(n))
        };
        let got = extract_substring(g, a as u64 + 1, b as u64);
        let fp = fps.substring(g, a as u64 + 1, b as u64);
        let want = &text[a..b];
        let ok = got.as_deref().ok() == Some(want) && fp.ok() == Some(hasher.hash(want));
        if !ok && range_bad.len() < 4 {
            range_bad.push(format!("{spec} [{a},{b})"));
        }
    }

    let bundle = idx.to_bytes();
    let again = Index::build_bytes(&bytes, &cfg()).expect("rebuild").to_bytes();
    let loaded = Index::from_bytes(&bundle).expect("load");
    let round_trip = loaded == idx && loaded.to_bytes() == bundle;

    CorpusResult {
        name: spec.to_string(),
        n,
        report,
        level_ok,
        level_detail,
        sparsity_bad,
        sparsity_checked,
        period_violations: check_runlength_periods(g).len(),
        fact: (fact.lhs.as_f64(), fact.rhs, fact.holds()),
        g: h.grammar_size,
        g_bound,
        expansion_bad,
        expansion_checked,
        range_bad,
        deterministic: again == bundle,
        round_trip,
    }
}

/// Grammar sizes for Fibonacci words `F_15..=F_30`.
fn fibonacci_growth() -> Vec<(u32, usize, usize)> {
    (15..=30u32)
        .into_par_iter()
        .map(|k| {
            let bytes = corpus::fibonacci(k);
            let text: Vec<u32> = bytes.iter().map(|&b| (b - b'a') as u32).collect();
            let profile = substring_complexity(&text);
            let c = compress_with_profile(&text, 2, &profile, &cfg().compressor()).expect("compress");
            (k, text.len(), c.grammar.size())
        })
        .collect()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn line(id: usize, name: &str, c: &Criterion, summary: String) -> bool {
    let ok = c.failures.is_empty();
    println!(
        "[{}] {id:>2} {name}: {summary}",
        if ok { "PASS" } else { "FAIL" }
    );
    for f in c.failures.iter().filter(|f| !f.is_empty()) {
        println!("        {f}");
    }
    ok
}

fn main() {
    let t0 = Instant::now();
    let specs = matrix();
    let results: Vec<CorpusResult> = specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_corpus(s, 1000 + i as u64))
        .collect();
    let fib = fibonacci_growth();

    let mut c: Vec<Criterion> = (0..14).map(|_| Criterion::default()).collect();
    let mut pairs = 0;
    let mut max_cut = 0;
    let mut max_ratio: f64 = 0.0;
    let mut dups = 0;
    for r in &results {
        let v = &r.report;
        pairs += v.patterns;
        max_cut = max_cut.max(v.max_cut_set);
        dups += v.duplicates;
        c[1].check(v.locate_mismatches == 0, || {
            format!("{}: {} mismatches, e.g. {:?}", r.name, v.locate_mismatches, v.failures.first())
        });
        c[2].check(v.count_mismatches == 0, || format!("{}: {} mismatches", r.name, v.count_mismatches));
        c[3].check(v.cut_mismatches == 0, || format!("{}: {} mismatches", r.name, v.cut_mismatches));
        c[4].check(r.level_ok, || format!("{}: {}", r.name, r.level_detail));
        c[5].checked += r.sparsity_checked;
        c[5].failures.extend(r.sparsity_bad.iter().take(4).cloned());
        c[6].check(r.period_violations == 0, || format!("{}: {} violations", r.name, r.period_violations));
        c[7].check(r.fact.2, || format!("{}: lhs {} > rhs {}", r.name, r.fact.0, r.fact.1));
        let ratio = r.g as f64 / r.g_bound;
        max_ratio = max_ratio.max(ratio);
        c[8].check(ratio <= 64.0, || format!("{}: g = {} vs bound {:.2}", r.name, r.g, r.g_bound));
        c[9].check(v.cut_ceiling_violations == 0, || {
            format!("{}: {} patterns over the ceiling", r.name, v.cut_ceiling_violations)
        });
        c[10].checked += r.expansion_checked;
        c[10].failures.extend(r.expansion_bad.iter().cloned());
        c[11].check(r.range_bad.is_empty(), || r.range_bad.join(", "));
        c[12].check(v.duplicates == 0, || format!("{}: {} duplicates", r.name, v.duplicates));
        c[13].check(r.deterministic, || format!("{}: rebuild is not byte-identical", r.name));
        c[13].check(r.round_trip, || format!("{}: load(save(x)) != x", r.name));
    }

    let g15 = fib.first().unwrap().2 as f64;
    let g30 = fib.last().unwrap().2 as f64;
    let pts: Vec<(f64, f64)> = fib.iter().map(|&(_, n, g)| ((n as f64).log2(), g as f64)).collect();
    let fib_slope = slope(&pts);
    c[8].check(g30 / g15 <= 4.0, || format!("g(F_30)/g(F_15) = {g30}/{g15}"));
    c[8].check(fib_slope > 0.0 && fib_slope.is_finite(), || format!("slope {fib_slope}"));

    let max_n = results.iter().map(|r| r.n).max().unwrap_or(0);
    let mut all = true;
    all &= line(1, "locate equals naive scan", &c[1], format!(
        "{pairs} pairs over {} corpora (n <= {max_n}, m <= {MAX_M})", results.len()));
    all &= line(2, "count equals |locate|", &c[2], format!("{pairs} pairs"));
    all &= line(3, "mcut equals exhaustive cuts", &c[3], format!("{pairs} pairs"));
    all &= line(4, "level sizes", &c[4], format!("{} builds", results.len()));
    all &= line(5, "interval sparsity", &c[5], format!("{} intervals", c[5].checked));
    all &= line(6, "run periods", &c[6], format!("{} grammars", results.len()));
    all &= line(7, "fact inequality", &c[7], format!("{} strings", results.len()));
    all &= line(8, "grammar size tracking", &c[8], format!(
        "max g/bound {max_ratio:.2}; F_15..F_30 g {g15}..{g30}, slope {fib_slope:.2}"));
    all &= line(9, "cut-set size", &c[9], format!("max |cuts| {max_cut}"));
    all &= line(10, "level expansion identity", &c[10], format!("{} levels", c[10].checked));
    all &= line(11, "fingerprint and extraction", &c[11], format!(
        "{} ranges", RANGES_PER_BUILD * results.len()));
    all &= line(12, "zero duplicates", &c[12], format!("{dups} duplicates"));
    all &= line(13, "determinism and round trip", &c[13], format!("{} bundles", results.len()));
    println!("elapsed: {:.1}s", t0.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
