//! Classical and unitary cyclotomic polynomials.
//!
//! The unitary polynomial is
//! `Φ*_n(x) = ∏_{d ‖ n} (x^d - 1)^{μ*(n/d)}`, whose roots are the
//! `e^{2πij/n}` with `(j, n)_* = 1`. Four independent constructions are
//! provided so they can check one another.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numth::{self, fact};
use crate::poly::{BinomialMode, CoeffBuffer, IntPoly, Sign, Truncation};

/// Bytes assumed per stored coefficient when sizing a computation.
pub const BYTES_PER_COEFF: u64 = 48;

/// Default memory budget, 2 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Polynomials up to this degree are kept in the cache.
const CACHE_MAX_DEGREE: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    /// Binomial passes over the unitary divisors.
    #[default]
    MobiusProduct,
    /// Product of `Φ_d` over `d | n` with the same prime support as `n`.
    CycloFactors,
    /// `∏_{d | n/κ(n)} Φ_{κ(n)}(x^d)`.
    KernelReduction,
    /// Starts from `x - 1` and adjoins one prime power at a time through
    /// `f(x^{p^a}) / f(x)`.
    QuotientTower,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::MobiusProduct,
        Algorithm::CycloFactors,
        Algorithm::KernelReduction,
        Algorithm::QuotientTower,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Classical,
    Unitary,
}

/// Compact store of computed polynomials, shared across threads.
#[derive(Default)]
pub struct CycloCache {
    classical: RwLock<HashMap<u64, Arc<[i64]>>>,
    unitary: RwLock<HashMap<u64, Arc<[i64]>>>,
}

impl CycloCache {
    fn map(&self, kind: Kind) -> &RwLock<HashMap<u64, Arc<[i64]>>> {
        match kind {
            Kind::Classical => &self.classical,
            Kind::Unitary => &self.unitary,
        }
    }

    fn get(&self, kind: Kind, n: u64) -> Option<IntPoly> {
        let map = self.map(kind).read().unwrap_or_else(|e| e.into_inner());
        map.get(&n).map(|c| IntPoly::from_i64(c))
    }

    fn insert(&self, kind: Kind, n: u64, p: &IntPoly) {
        if p.degree().unwrap_or(0) as u64 > CACHE_MAX_DEGREE {
            return;
        }
        if let Some(v) = p.to_i64_vec() {
            let mut map = self.map(kind).write().unwrap_or_else(|e| e.into_inner());
            map.insert(n, v.into());
        }
    }

    pub fn len(&self) -> usize {
        self.classical.read().map(|m| m.len()).unwrap_or(0) + self.unitary.read().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.classical.write().unwrap_or_else(|e| e.into_inner()).clear();
        self.unitary.write().unwrap_or_else(|e| e.into_inner()).clear();
    }
}

pub fn cache() -> &'static CycloCache {
    static CACHE: OnceLock<CycloCache> = OnceLock::new();
    CACHE.get_or_init(CycloCache::default)
}

pub fn clear_cache() {
    cache().clear();
}

pub(crate) fn check_budget(len: u64, budget: u64) -> Result<()> {
    let required = len.saturating_mul(BYTES_PER_COEFF);
    if required > budget {
        return Err(Error::Resource { required, budget });
    }
    Ok(())
}

/// Unit steps `(d, mode)` realising `∏ (x^d - 1)^{e_d}`.
///
/// Multiplications go in increasing `d`; each division is taken as soon as
/// every cyclotomic factor `Φ_k`, `k | d`, is present in the running product.
/// Every prefix is then a genuine product of cyclotomic polynomials, which
/// keeps intermediate coefficients small.
pub(crate) fn pass_order(factors: &[(u64, i64)]) -> Vec<(u64, BinomialMode)> {
    let mut ups: Vec<u64> = Vec::new();
    let mut downs: Vec<u64> = Vec::new();
    for &(d, e) in factors {
        let list = if e >= 0 { &mut ups } else { &mut downs };
        list.extend(std::iter::repeat(d).take(e.unsigned_abs() as usize));
    }
    ups.sort_unstable();
    downs.sort_unstable();
    let divs: HashMap<u64, Vec<u64>> = ups
        .iter()
        .chain(&downs)
        .map(|&d| (d, fact(d).divisors()))
        .collect();
    let mut count: HashMap<u64, i64> = HashMap::new();
    let mut plan = Vec::with_capacity(ups.len() + downs.len());
    let mut pending = downs;
    let take_ready = |count: &mut HashMap<u64, i64>, plan: &mut Vec<(u64, BinomialMode)>, pending: &mut Vec<u64>| {
        let mut i = 0;
        while i < pending.len() {
            let d = pending[i];
            if divs[&d].iter().all(|k| count.get(k).copied().unwrap_or(0) >= 1) {
                for k in &divs[&d] {
                    *count.get_mut(k).unwrap() -= 1;
                }
                plan.push((d, BinomialMode::Divide));
                pending.remove(i);
                i = 0;
            } else {
                i += 1;
            }
        }
    };
    for d in ups {
        for k in &divs[&d] {
            *count.entry(*k).or_insert(0) += 1;
        }
        plan.push((d, BinomialMode::Multiply));
        take_ready(&mut count, &mut plan, &mut pending);
    }
    // Whatever is left does not divide: the series buffer still gets it right.
    plan.extend(pending.into_iter().map(|d| (d, BinomialMode::Divide)));
    plan
}

/// Runs a pass plan on a series buffer of length `len`. Factors of degree at
/// least `len` are `-1` modulo `x^len`.
pub(crate) fn run_passes(len: usize, plan: &[(u64, BinomialMode)]) -> Result<CoeffBuffer> {
    let mut buf = CoeffBuffer::one(len, Truncation::Series);
    for &(d, mode) in plan {
        if d >= len as u64 {
            buf.negate();
        } else {
            buf.apply(d as usize, Sign::Minus, mode)?;
        }
    }
    Ok(buf)
}

fn series_product(degree: u64, factors: &[(u64, i64)]) -> Result<IntPoly> {
    check_budget(degree + 1, DEFAULT_MEMORY_BUDGET)?;
    let buf = run_passes(degree as usize + 1, &pass_order(factors))?;
    Ok(buf.to_poly())
}

fn require_positive(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    numth::factorize(n).map(|_| ())
}

/// `Φ_n(x) = ∏_{d | n} (x^{n/d} - 1)^{μ(d)}`.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    require_positive(n)?;
    if let Some(p) = cache().get(Kind::Classical, n) {
        return Ok(p);
    }
    let f = fact(n);
    let factors: Vec<(u64, i64)> = fact(f.kernel())
        .divisors()
        .into_iter()
        .map(|d| (n / d, numth::mobius(d).unwrap()))
        .collect();
    let (phi, _) = numth::totients(n)?;
    let p = series_product(phi, &factors)?;
    cache().insert(Kind::Classical, n, &p);
    Ok(p)
}

/// `Φ_n` by dividing `x^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_by_division(n: u64) -> Result<IntPoly> {
    require_positive(n)?;
    let mut q = &IntPoly::monomial(BigInt::from(1), n as usize) - &IntPoly::one();
    for d in fact(n).divisors() {
        if d < n {
            q = q.exact_div(&cyclotomic(d)?)?;
        }
    }
    Ok(q)
}

/// `Φ*_n` with the default algorithm, cached.
pub fn unitary_cyclotomic(n: u64) -> Result<IntPoly> {
    require_positive(n)?;
    if let Some(p) = cache().get(Kind::Unitary, n) {
        return Ok(p);
    }
    let p = unitary_cyclotomic_with(n, Algorithm::MobiusProduct)?;
    cache().insert(Kind::Unitary, n, &p);
    Ok(p)
}

pub fn unitary_cyclotomic_with(n: u64, algorithm: Algorithm) -> Result<IntPoly> {
    require_positive(n)?;
    let f = fact(n);
    match algorithm {
        Algorithm::MobiusProduct => {
            let factors: Vec<(u64, i64)> = f
                .unitary_divisors()
                .into_iter()
                .map(|d| (d, numth::unitary_mobius(n / d).unwrap()))
                .collect();
            series_product(numth::unitary_totient(n)?, &factors)
        }
        Algorithm::CycloFactors => {
            let parts = numth::kernel_divisors(n)?
                .into_iter()
                .map(cyclotomic)
                .collect::<Result<Vec<_>>>()?;
            Ok(IntPoly::product(&parts))
        }
        Algorithm::KernelReduction => {
            let k = f.kernel();
            let base = cyclotomic(k)?;
            let parts: Vec<IntPoly> = fact(n / k)
                .divisors()
                .into_iter()
                .map(|d| base.compose_power(d as usize))
                .collect();
            Ok(IntPoly::product(&parts))
        }
        Algorithm::QuotientTower => {
            let mut g = IntPoly::from_i64(&[-1, 1]);
            for q in f.prime_powers() {
                g = g.compose_power(q as usize).exact_div(&g)?;
            }
            Ok(g)
        }
    }
}

/// The indices `d` with `Φ*_n = ∏ Φ_d`: divisors of `n` sharing its prime support.
pub fn unitary_factor_indices(n: u64) -> Result<Vec<u64>> {
    numth::kernel_divisors(n)
}

/// Coefficient of `x^j` in `Φ*_n`.
pub fn unitary_coeff(n: u64, j: u64) -> Result<BigInt> {
    require_positive(n)?;
    if j > numth::unitary_totient(n)? {
        return Ok(BigInt::from(0));
    }
    Ok(unitary_cyclotomic(n)?.coeff(j as usize))
}

/// `Φ_n(1)` or `Φ*_n(1)` in closed form.
pub fn value_at_one(n: u64, kind: Kind) -> Result<i64> {
    require_positive(n)?;
    if n == 1 {
        return Ok(0);
    }
    Ok(match (fact(n).prime_power(), kind) {
        (Some((p, _)), Kind::Classical) => p as i64,
        (Some(_), Kind::Unitary) => n as i64,
        (None, _) => 1,
    })
}

/// `Φ_n(-1)` or `Φ*_n(-1)` in closed form.
pub fn value_at_minus_one(n: u64, kind: Kind) -> Result<i64> {
    require_positive(n)?;
    if n == 1 {
        return Ok(-2);
    }
    let f = fact(n);
    let pairs = f.pairs();
    Ok(match kind {
        Kind::Classical => {
            if n == 2 {
                0
            } else if n % 4 == 2 && fact(n / 2).prime_power().is_some() {
                fact(n / 2).pairs()[0].0 as i64
            } else if pairs.len() == 1 && pairs[0].0 == 2 {
                // n = 2^a, a >= 2
                2
            } else {
                1
            }
        }
        Kind::Unitary => match pairs {
            [(2, _)] => 0,
            [(2, _), (p, b)] => (*p as i64).pow(*b),
            _ => 1,
        },
    })
}

/// Instances checked per identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub n_max: u64,
    pub checks: BTreeMap<String, u64>,
}

impl IdentityReport {
    fn add(mut self, other: IdentityReport) -> Self {
        for (k, v) in other.checks {
            *self.checks.entry(k).or_insert(0) += v;
        }
        self
    }

    fn tick(&mut self, name: &str) {
        *self.checks.entry(name.to_string()).or_insert(0) += 1;
    }
}

pub const ID_UNITARY_PRODUCT: &str = "x^n-1 = prod over unitary divisors";
pub const ID_SELF_RECIPROCAL: &str = "self-reciprocal";
pub const ID_DOUBLING: &str = "Phi*_2n(x) = Phi*_n(-x) for odd n";
pub const ID_PRIME_POWER_QUOTIENT: &str = "Phi*_(p^k m)(x) = Phi*_m(x^(p^k)) / Phi*_m(x)";
pub const ID_POWER_REDUCTION: &str = "Phi*_(p^k m)(x) = prod_j Phi*_(pm)(x^(p^j))";

/// Checks the structural identities of `Φ*_n` for every `n <= n_max`.
/// The first counterexample aborts the run.
pub fn identity_suite(n_max: u64) -> Result<IdentityReport> {
    if n_max < 2 {
        return Err(Error::domain("identity suite needs n_max >= 2"));
    }
    let mut report = (1..=n_max)
        .into_par_iter()
        .map(identities_at)
        .try_reduce(IdentityReport::default, |a, b| Ok(a.add(b)))?;
    report.n_max = n_max;
    Ok(report)
}

fn fail(check: &str, n: u64, detail: impl std::fmt::Display) -> Error {
    Error::verification(check, format!("n = {n}: {detail}"))
}

fn identities_at(n: u64) -> Result<IdentityReport> {
    let mut r = IdentityReport::default();
    let phi = unitary_cyclotomic(n)?;
    let f = fact(n);

    let parts = f
        .unitary_divisors()
        .into_iter()
        .map(unitary_cyclotomic)
        .collect::<Result<Vec<_>>>()?;
    let xn1 = &IntPoly::monomial(BigInt::from(1), n as usize) - &IntPoly::one();
    if IntPoly::product(&parts) != xn1 {
        return Err(fail(ID_UNITARY_PRODUCT, n, "product differs from x^n - 1"));
    }
    r.tick(ID_UNITARY_PRODUCT);

    if n > 1 {
        if !phi.is_self_reciprocal() {
            return Err(fail(ID_SELF_RECIPROCAL, n, &phi));
        }
        r.tick(ID_SELF_RECIPROCAL);
    }

    if n > 1 && n % 2 == 1 {
        if unitary_cyclotomic(2 * n)? != phi.negate_x() {
            return Err(fail(ID_DOUBLING, n, "Phi*_2n(x) != Phi*_n(-x)"));
        }
        r.tick(ID_DOUBLING);
    }

    for &(p, k) in f.pairs() {
        if k > 4 {
            continue;
        }
        let pk = p.pow(k);
        let m = n / pk;
        let base = unitary_cyclotomic(m)?;
        if base.compose_power(pk as usize) != &phi * &base {
            return Err(fail(ID_PRIME_POWER_QUOTIENT, n, format!("p = {p}, k = {k}")));
        }
        r.tick(ID_PRIME_POWER_QUOTIENT);
        if k >= 2 {
            let pm = unitary_cyclotomic(p * m)?;
            let tower: Vec<IntPoly> = (0..k).map(|j| pm.compose_power(p.pow(j) as usize)).collect();
            if IntPoly::product(&tower) != phi {
                return Err(fail(ID_POWER_REDUCTION, n, format!("p = {p}, k = {k}")));
            }
            r.tick(ID_POWER_REDUCTION);
        }
    }
    Ok(r)
}
