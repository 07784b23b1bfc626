//! Batteries of invariant checks, grouped into named suites.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{self, Algorithm, Kind};
use crate::error::{Error, Result};
use crate::kron::{self, Method, Rho, Tier};
use crate::numth::{self, fact, ArithFn};
use crate::rama::{self, DftMethod, DftValue};
use crate::scan::{self, SurveyOptions};

/// Failures listed per suite before the rest are only counted.
const MAX_LISTED: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Identities,
    Trig,
    Dft,
    Series,
    Kron,
    Heights,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Identities,
        Suite::Trig,
        Suite::Dft,
        Suite::Series,
        Suite::Kron,
        Suite::Heights,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Trig => "trig",
            Suite::Dft => "dft",
            Suite::Series => "series",
            Suite::Kron => "kron",
            Suite::Heights => "heights",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub n_max: u64,
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Accumulates outcomes of individual checks.
struct Tally {
    checks: u64,
    failed: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failed += 1;
        if self.failures.len() < MAX_LISTED {
            self.failures.push(what);
        }
    }

    /// `Ok` counts as a pass; a verification error as a failure; anything else aborts.
    fn outcome(&mut self, r: Result<()>) -> Result<()> {
        self.checks += 1;
        match r {
            Ok(()) => Ok(()),
            Err(Error::Verification { check, witness }) => {
                self.fail(format!("{check}: {witness}"));
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED {
                self.failures.push(f);
            }
        }
    }

    fn into_report(self, suite: Suite, n_max: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.name(),
            n_max,
            checks: self.checks,
            failed: self.failed,
            failures: self.failures,
        }
    }
}

/// Runs `per_n` over `lo..=hi` in parallel and merges the tallies in order.
fn over_range(lo: u64, hi: u64, per_n: impl Fn(u64, &mut Tally) -> Result<()> + Sync) -> Result<Tally> {
    let parts: Vec<Tally> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let mut t = Tally::new();
            per_n(n, &mut t)?;
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut all = Tally::new();
    for t in parts {
        all.merge(t);
    }
    Ok(all)
}

pub fn run_suite(suite: Suite, n_max: u64) -> Result<SuiteReport> {
    if n_max < 2 {
        return Err(Error::domain("--nmax must be at least 2"));
    }
    let tally = match suite {
        Suite::Identities => identities(n_max)?,
        Suite::Trig => trig(n_max)?,
        Suite::Dft => dft(n_max)?,
        Suite::Series => series(n_max)?,
        Suite::Kron => kron_suite(n_max)?,
        Suite::Heights => heights(n_max)?,
    };
    Ok(tally.into_report(suite, n_max))
}

pub fn run_suites(suites: &[Suite], n_max: u64) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, n_max)).collect()
}

fn identities(n_max: u64) -> Result<Tally> {
    let mut t = Tally::new();
    match cyclo::identity_suite(n_max) {
        Ok(r) => {
            t.checks += r.checks.values().sum::<u64>();
        }
        Err(e @ Error::Verification { .. }) => t.outcome(Err(e))?,
        Err(e) => return Err(e),
    }
    let more = over_range(1, n_max, |n, t| {
        let reference = cyclo::unitary_cyclotomic_with(n, Algorithm::MobiusProduct)?;
        for alg in &Algorithm::ALL[1..] {
            let other = cyclo::unitary_cyclotomic_with(n, *alg)?;
            t.check(other == reference, || format!("n = {n}: {alg:?} disagrees with the binomial product"));
        }
        let (phi, phi_star) = numth::totients(n)?;
        t.check(reference.degree() == Some(phi_star as usize), || format!("n = {n}: degree of Phi*_n"));
        let classical = cyclo::cyclotomic(n)?;
        t.check(classical.degree() == Some(phi as usize), || format!("n = {n}: degree of Phi_n"));
        for (poly, kind) in [(&reference, Kind::Unitary), (&classical, Kind::Classical)] {
            let at1 = poly.eval_int(&BigInt::from(1));
            let atm1 = poly.eval_int(&BigInt::from(-1));
            t.check(at1 == cyclo::value_at_one(n, kind)?.into(), || format!("n = {n}: {kind:?} value at 1"));
            t.check(atm1 == cyclo::value_at_minus_one(n, kind)?.into(), || {
                format!("n = {n}: {kind:?} value at -1")
            });
        }
        let k_max = 50.min(n_max);
        for k in 1..=k_max {
            t.outcome(rama::check_divisor_sum_indicator(n, k))?;
            t.outcome(rama::check_kernel_sums(n, k))?;
            if n <= 200 {
                let exact = rama::unitary_ramanujan(n, k)? as f64;
                let numeric = rama::ramanujan_numeric(n, k, true)?;
                t.check((exact - numeric).abs() < 1e-6, || format!("c*_{n}({k}) vs root-of-unity sum"));
            }
        }
        Ok(())
    })?;
    t.merge(more);
    Ok(t)
}

fn trig(n_max: u64) -> Result<Tally> {
    over_range(2, n_max, |n, t| {
        let r = rama::trig_products(n)?;
        t.check(r.sin.passed, || format!("n = {n}: sine product {} vs {}", r.sin.lhs, r.sin.rhs));
        t.check(r.cos.passed, || format!("n = {n}: cosine product {} vs {}", r.cos.lhs, r.cos.rhs));
        let s = rama::s_star(n)?;
        let closed = n as u128 * numth::unitary_totient(n)? as u128 / 2;
        t.check(s == closed, || format!("n = {n}: sum of unitary-coprime residues {s} vs {closed}"));
        Ok(())
    })
}

/// Integer-valued arithmetic functions drawn from a fixed seed.
pub fn random_int_functions(count: usize, max_arg: u64, seed: u64) -> Vec<ArithFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let table = (0..=max_arg)
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-20i64..=20))))
                .collect();
            ArithFn::from_table(table)
        })
        .collect()
}

fn dft(n_max: u64) -> Result<Tally> {
    let fs = random_int_functions(20, n_max, 0x5eed);
    over_range(1, n_max, |n, t| {
        for m in 1..=n_max {
            for (i, f) in fs.iter().enumerate() {
                let a = rama::dft(f, m, n, DftMethod::ExactConv)?;
                let b = rama::dft(f, m, n, DftMethod::ExactRamanujan)?;
                t.check(a == b, || format!("f#{i}, m = {m}, n = {n}: convolution and Ramanujan forms differ"));
                if m <= 100 && n <= 100 {
                    let s = rama::dft_sine_part(f, m, n)?;
                    t.check(s.abs() < 1e-9, || format!("f#{i}, m = {m}, n = {n}: sine part {s}"));
                }
                if i == 0 && m <= 30 && n <= 100 {
                    let z = rama::dft(f, m, n, DftMethod::Numeric)?.to_complex();
                    let DftValue::Exact(q) = a else { unreachable!() };
                    let v = q.to_f64().unwrap_or(f64::NAN);
                    t.check((z.re - v).abs() <= 1e-6 * (1.0 + v.abs()) && z.im.abs() <= 1e-6, || {
                        format!("m = {m}, n = {n}: numeric transform {z} vs {v}")
                    });
                }
            }
        }
        Ok(())
    })
}

fn series(n_max: u64) -> Result<Tally> {
    over_range(2, n_max, |n, t| {
        let p = cyclo::unitary_cyclotomic(n)?;
        if n <= 100 {
            for x in [0.5, -0.5] {
                let s = rama::exp_series(n, x, 64)?;
                let exact = p.eval_f64(x);
                t.check((s.value - exact).abs() < 1e-8, || format!("n = {n}, x = {x}: series {} vs {exact}", s.value));
            }
            let s = rama::exp_series(n, 0.9, 400)?;
            let exact = p.eval_f64(0.9);
            t.check((s.value - exact).abs() <= s.error_bound + 1e-9, || {
                format!("n = {n}, x = 0.9: series {} vs {exact}", s.value)
            });
        }
        for m in [1, 2, 3, 4] {
            let a = rama::schramm_unitary_log(n, 2.0, m)?;
            let b = rama::schramm_target_log(n, 2.0, m)?;
            t.check((a - b).abs() <= 1e-6 * (1.0 + b.abs()), || format!("n = {n}, m = {m}: cosine-power product"));
        }
        Ok(())
    })
}

fn kron_suite(n_max: u64) -> Result<Tally> {
    let mut t = over_range(2, n_max, |n, t| {
        let f = cyclo::unitary_cyclotomic(n)?;
        let c = kron::classify(&f)?;
        t.check(c.tier == Tier::UnitaryCyclotomic && c.n == Some(n), || {
            format!("n = {n}: classified as {:?} {:?}", c.tier, c.n)
        });
        let peel = kron::kronecker_expansion(&f, Method::Peel)?;
        let mobius = kron::kronecker_expansion(&f, Method::Mobius)?;
        t.check(peel == mobius, || format!("n = {n}: peel and Mobius expansions differ"));
        Ok(())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut seen = BTreeSet::new();
    while seen.len() < 100 {
        let rho = random_rho(&mut rng, 10_000);
        if !seen.insert(rho.clone()) {
            continue;
        }
        let q = kron::q_poly(&rho)?;
        let back = kron::recover_rho(&q)?;
        t.check(back.as_ref() == Some(&rho), || format!("rho = {:?}: recovered {back:?}", rho.entries()));
        let parts = kron::d_rho(&rho)
            .into_iter()
            .map(cyclo::cyclotomic)
            .collect::<Result<Vec<_>>>()?;
        t.check(crate::IntPoly::product(&parts) == q, || {
            format!("rho = {:?}: cyclotomic product differs", rho.entries())
        });
    }
    let q56 = kron::q_poly(&Rho::new(vec![5, 6])?)?;
    t.check(kron::classify(&q56)?.tier == Tier::InclusionExclusion, || "Q_{5,6} tier".into());
    Ok(t)
}

/// Pairwise coprime entries with product at most `n0_max`.
pub fn random_rho(rng: &mut ChaCha8Rng, n0_max: u64) -> Rho {
    loop {
        let k = rng.gen_range(1..=4);
        let mut v: Vec<u64> = Vec::new();
        let mut prod = 1u64;
        for _ in 0..k {
            let r = rng.gen_range(2..=64u64);
            if v.iter().all(|&x| num_integer::gcd(x, r) == 1) && prod * r <= n0_max {
                v.push(r);
                prod *= r;
            }
        }
        if let Ok(r) = Rho::new(v) {
            return r;
        }
    }
}

fn heights(n_max: u64) -> Result<Tally> {
    let mut t = over_range(1, n_max, |n, t| {
        let budget = cyclo::DEFAULT_MEMORY_BUDGET;
        let half = scan::height_unitary(n, budget)?.height;
        let full = scan::height_unitary_full(n, budget)?;
        let direct = cyclo::unitary_cyclotomic(n)?.height();
        t.check(half == full && full == direct, || format!("n = {n}: heights {half}, {full}, {direct}"));
        Ok(())
    })?;
    for k in 1..=100u64 {
        let f = fact(k);
        if f.is_squarefree() && f.omega() <= 2 {
            let b = scan::b_k_sample(k, 100 * n_max)?;
            t.check(b == BTreeSet::from([BigInt::from(1)]), || format!("kernel {k}: heights {b:?}"));
        }
    }
    let s = scan::max_height_smooth(&SurveyOptions::new(vec![2, 3, 5], 100, true))?;
    t.check(s.max_height == BigInt::from(2) && s.argmax_n == 60, || {
        format!("smooth survey below 100: max {} at {}", s.max_height, s.argmax_n)
    });
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_small_size() {
        for suite in Suite::ALL {
            let r = run_suite(suite, 40).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(Suite::from_name(suite.name()), Some(suite));
        }
        assert_eq!(Suite::from_name("everything"), None);
        assert!(run_suite(Suite::Trig, 1).is_err());
    }

    #[test]
    fn failures_are_capped() {
        let mut t = Tally::new();
        for i in 0..25 {
            t.check(false, || format!("#{i}"));
        }
        assert_eq!((t.failed, t.failures.len()), (25, MAX_LISTED));
    }
}
