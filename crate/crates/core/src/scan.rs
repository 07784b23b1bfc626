//! Coefficient heights of unitary cyclotomic polynomials at scale.
//!
//! `Φ*_n` is built in one machine-integer buffer by binomial passes. Since
//! the polynomial is palindromic for `n > 1`, only the low half is kept:
//! working modulo `x^{⌊φ*(n)/2⌋+1}` halves both memory and time.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cyclo::{self, pass_order, run_passes, DEFAULT_MEMORY_BUDGET};
use crate::error::{Error, Result};
use crate::numth::{self, fact};

/// Bytes per coefficient of the machine-integer buffer.
const BUFFER_BYTES_PER_COEFF: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightRecord {
    pub n: u64,
    pub height: BigInt,
    pub degree: u64,
    pub elapsed: Duration,
}

fn unitary_factors(n: u64) -> Vec<(u64, i64)> {
    fact(n)
        .unitary_divisors()
        .into_iter()
        .map(|d| (d, numth::unitary_mobius(n / d).unwrap()))
        .collect()
}

fn require_budget(degree: u64, budget: u64) -> Result<()> {
    let required = (degree + 1).saturating_mul(BUFFER_BYTES_PER_COEFF);
    if required > budget {
        return Err(Error::Resource { required, budget });
    }
    Ok(())
}

/// `h(Φ*_n)` from the low half of the coefficients.
pub fn height_unitary(n: u64, memory_budget: u64) -> Result<HeightRecord> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    let start = Instant::now();
    let degree = numth::unitary_totient(n)?;
    require_budget(degree, memory_budget)?;
    let height = if n == 1 {
        BigInt::from(1)
    } else {
        let len = degree as usize / 2 + 1;
        run_passes(len, &pass_order(&unitary_factors(n)))?.height()
    };
    Ok(HeightRecord {
        n,
        height,
        degree,
        elapsed: start.elapsed(),
    })
}

/// `h(Φ*_n)` from a buffer holding every coefficient.
pub fn height_unitary_full(n: u64, memory_budget: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    let degree = numth::unitary_totient(n)?;
    require_budget(degree, memory_budget)?;
    Ok(run_passes(degree as usize + 1, &pass_order(&unitary_factors(n)))?.height())
}

/// All `n < limit` whose prime factors lie in `primes`, each exponent at least
/// `min_exp`.
pub fn smooth_numbers(primes: &[u64], limit: u64, min_exp: u32) -> Vec<u64> {
    let mut out = Vec::new();
    fn walk(primes: &[u64], limit: u64, min_exp: u32, acc: u64, out: &mut Vec<u64>) {
        let Some((&p, rest)) = primes.split_first() else {
            if acc < limit {
                out.push(acc);
            }
            return;
        };
        let mut v = match p.checked_pow(min_exp).and_then(|q| acc.checked_mul(q)) {
            Some(v) => v,
            None => return,
        };
        while v < limit {
            walk(rest, limit, min_exp, v, out);
            v = match v.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    walk(primes, limit, min_exp, 1, &mut out);
    out.sort_unstable();
    out
}

/// Heights of `Φ*_n` over `n <= bound` with squarefree kernel `k`.
pub fn b_k_sample(k: u64, bound: u64) -> Result<BTreeSet<BigInt>> {
    let f = numth::factorize(k)?;
    if !f.is_squarefree() {
        return Err(Error::domain(format!("{k} is not squarefree")));
    }
    let primes: Vec<u64> = f.pairs().iter().map(|&(p, _)| p).collect();
    smooth_numbers(&primes, bound.saturating_add(1), 1)
        .into_par_iter()
        .map(|n| Ok(height_unitary(n, DEFAULT_MEMORY_BUDGET)?.height))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyOptions {
    pub primes: Vec<u64>,
    /// Exclusive upper bound on `n`.
    pub limit: u64,
    /// Every listed prime must divide `n`.
    pub require_all: bool,
    /// Worker threads; 0 picks the machine default.
    pub threads: usize,
    pub memory_budget: u64,
    /// Line file of `n<TAB>height` records, read on start and appended to.
    pub progress: Option<PathBuf>,
}

impl SurveyOptions {
    pub fn new(primes: Vec<u64>, limit: u64, require_all: bool) -> Self {
        SurveyOptions {
            primes,
            limit,
            require_all,
            threads: 0,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            progress: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Survey {
    pub max_height: BigInt,
    /// Smallest `n` attaining the maximum.
    pub argmax_n: u64,
    pub count: usize,
    pub limit: u64,
    pub table: BTreeMap<u64, BigInt>,
}

fn read_progress(path: &PathBuf) -> Result<BTreeMap<u64, BigInt>> {
    let mut table = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(table),
        Err(e) => return Err(Error::domain(format!("cannot read {}: {e}", path.display()))),
    };
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
        // A torn final line from an interrupted run is simply recomputed.
        let Some((n, h)) = line.split_once('\t') else { continue };
        if let (Ok(n), Ok(h)) = (n.trim().parse::<u64>(), h.trim().parse::<BigInt>()) {
            table.insert(n, h);
        }
    }
    Ok(table)
}

/// Opens for appending, terminating a torn last line first.
fn open_progress(path: &PathBuf) -> Result<File> {
    let fail = |e: std::io::Error| Error::domain(format!("cannot write {}: {e}", path.display()));
    let torn = std::fs::read(path).map(|b| b.last().is_some_and(|&c| c != b'\n')).unwrap_or(false);
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(fail)?;
    if torn {
        writeln!(f).map_err(fail)?;
    }
    Ok(f)
}

/// Maximum height over the `primes`-smooth `n < limit`.
pub fn max_height_smooth(opts: &SurveyOptions) -> Result<Survey> {
    let mut primes = opts.primes.clone();
    primes.sort_unstable();
    if primes.is_empty() || primes.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("primes must be a nonempty list of distinct primes"));
    }
    if let Some(&p) = primes.iter().find(|&&p| !numth::is_prime(p)) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let candidates = smooth_numbers(&primes, opts.limit, opts.require_all as u32);
    let mut table = match &opts.progress {
        Some(path) => read_progress(path)?,
        None => BTreeMap::new(),
    };
    table.retain(|n, _| candidates.binary_search(n).is_ok());
    let todo: Vec<u64> = candidates.iter().copied().filter(|n| !table.contains_key(n)).collect();

    let sink = match &opts.progress {
        Some(path) => Some(Mutex::new(open_progress(path)?)),
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    // Largest first so the long jobs do not trail at the end.
    let mut order = todo;
    order.reverse();
    let computed: Vec<(u64, BigInt)> = pool.install(|| {
        order
            .par_iter()
            .map(|&n| {
                let h = height_unitary(n, opts.memory_budget)?.height;
                if let Some(sink) = &sink {
                    let mut f = sink.lock().unwrap_or_else(|e| e.into_inner());
                    writeln!(f, "{n}\t{h}").map_err(|e| Error::domain(format!("progress write failed: {e}")))?;
                }
                Ok((n, h))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    table.extend(computed);

    let mut max_height = BigInt::from(0);
    let mut argmax_n = 0;
    for (&n, h) in &table {
        if *h > max_height {
            max_height = h.clone();
            argmax_n = n;
        }
    }
    Ok(Survey {
        max_height,
        argmax_n,
        count: table.len(),
        limit: opts.limit,
        table,
    })
}

/// First `(n, j)` in lexicographic order with `a*_n(j) = value`, scanning
/// `n <= n_bound` and `0 <= j <= min(φ*(n), j_bound)`.
pub fn witness_search(value: &BigInt, n_bound: u64, j_bound: Option<u64>) -> Result<Option<(u64, u64)>> {
    for n in 1..=n_bound {
        let p = cyclo::unitary_cyclotomic(n)?;
        let top = p.coeffs().len() as u64 - 1;
        let top = j_bound.map_or(top, |b| top.min(b));
        if let Some(j) = (0..=top).find(|&j| p.coeffs()[j as usize] == *value) {
            return Ok(Some((n, j)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: u64) -> BigInt {
        height_unitary(n, DEFAULT_MEMORY_BUDGET).unwrap().height
    }

    #[test]
    fn small_heights() {
        assert_eq!(h(12), BigInt::from(1));
        assert_eq!(h(60), BigInt::from(2));
        assert_eq!(h(1), BigInt::from(1));
        for q in [2, 4, 9, 25, 49, 1024, 3125] {
            assert_eq!(h(q), BigInt::from(1));
        }
        let r = height_unitary(60, DEFAULT_MEMORY_BUDGET).unwrap();
        assert_eq!(r.degree, 24);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(height_unitary(1 << 40, 1 << 20), Err(Error::Resource { .. })));
    }

    #[test]
    fn half_buffer_matches_full_and_cyclo_up_to_5000() {
        (1..=5000u64).into_par_iter().for_each(|n| {
            let half = h(n);
            assert_eq!(half, height_unitary_full(n, DEFAULT_MEMORY_BUDGET).unwrap(), "n = {n}");
            assert_eq!(half, cyclo::unitary_cyclotomic(n).unwrap().height(), "n = {n}");
        });
    }

    #[test]
    fn smooth_enumeration() {
        assert_eq!(smooth_numbers(&[2, 3, 5], 100, 1), vec![30, 60, 90]);
        assert_eq!(smooth_numbers(&[2, 3], 13, 0), vec![1, 2, 3, 4, 6, 8, 9, 12]);
    }

    #[test]
    fn two_prime_kernels_have_height_one() {
        for k in 1..=100u64 {
            let f = fact(k);
            if f.is_squarefree() && f.omega() <= 2 {
                assert_eq!(b_k_sample(k, 10_000).unwrap(), BTreeSet::from([BigInt::from(1)]), "k = {k}");
            }
        }
        assert!(b_k_sample(30, 100_000).unwrap().iter().any(|v| *v > BigInt::from(1)));
        assert!(b_k_sample(12, 100).is_err());
    }

    #[test]
    fn small_surveys() {
        let s = max_height_smooth(&SurveyOptions::new(vec![2, 3, 5], 100, true)).unwrap();
        assert_eq!((s.max_height, s.argmax_n, s.count), (BigInt::from(2), 60, 3));
        let s = max_height_smooth(&SurveyOptions::new(vec![3, 2], 1_000_000, true)).unwrap();
        assert_eq!(s.max_height, BigInt::from(1));
        assert!(max_height_smooth(&SurveyOptions::new(vec![2, 2], 100, true)).is_err());
        assert!(max_height_smooth(&SurveyOptions::new(vec![2, 4], 100, true)).is_err());
    }

    #[test]
    fn survey_is_independent_of_worker_count() {
        let run = |threads| {
            let mut o = SurveyOptions::new(vec![2, 3, 5], 1_000_000, true);
            o.threads = threads;
            max_height_smooth(&o).unwrap()
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(8));
    }

    #[test]
    fn survey_resumes_from_progress_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("progress.tsv");
        let mut o = SurveyOptions::new(vec![2, 3, 5], 20_000, true);
        o.progress = Some(path.clone());
        let first = max_height_smooth(&o).unwrap();
        let lines = std::fs::read_to_string(&path).unwrap();
        assert_eq!(lines.lines().count(), first.count);
        // Keep half the records plus a torn line, as after an interruption.
        let kept: Vec<&str> = lines.lines().take(first.count / 2).collect();
        std::fs::write(&path, format!("{}\n12", kept.join("\n"))).unwrap();
        let second = max_height_smooth(&o).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn witnesses() {
        let find = |v: i64| witness_search(&BigInt::from(v), 200, None).unwrap();
        assert_eq!(find(1), Some((1, 1)));
        assert_eq!(find(-1), Some((1, 0)));
        assert_eq!(find(0), Some((12, 2)));
        assert_eq!(find(-2), Some((60, 5)));
        assert_eq!(find(2), Some((84, 12)));
        assert_eq!(witness_search(&BigInt::from(5), 50, None).unwrap(), None);
        // -2 never appears among the first five coefficients for n <= 200
        assert_eq!(witness_search(&BigInt::from(-2), 200, Some(4)).unwrap(), None);
        assert_eq!(witness_search(&BigInt::from(-2), 200, Some(5)).unwrap(), Some((60, 5)));
    }
}
