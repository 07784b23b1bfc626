//! Inclusion-exclusion polynomials and Kronecker polynomials.
//!
//! A Kronecker polynomial is monic with every root on or inside the unit
//! circle, equivalently `x^s` times a product of cyclotomic polynomials. Each
//! one has a unique expansion `x^s ∏_{d ∈ D} (x^d - 1)^{e_d}`; for an
//! inclusion-exclusion polynomial `Q_ρ` the set `D` determines `ρ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::cyclo::{self, check_budget, DEFAULT_MEMORY_BUDGET};
use crate::error::{Error, Result};
use crate::numth::{self, fact, small_primes, TRIAL_LIMIT};
use crate::poly::{BinomialMode, CoeffBuffer, IntPoly, SeriesView, Sign, Truncation};

/// Pairwise coprime integers `r_1 < r_2 < ...`, each greater than 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Rho {
    entries: Vec<u64>,
}

impl Rho {
    /// Sorts and validates. The empty set is allowed; its polynomial is `x - 1`.
    pub fn new(mut entries: Vec<u64>) -> Result<Self> {
        entries.sort_unstable();
        if let Some(&r) = entries.iter().find(|&&r| r < 2) {
            return Err(Error::domain(format!("entries must exceed 1, got {r}")));
        }
        for (i, &a) in entries.iter().enumerate() {
            for &b in &entries[i + 1..] {
                if a.gcd(&b) != 1 {
                    return Err(Error::domain(format!("{a} and {b} are not coprime")));
                }
            }
        }
        let mut n0: u64 = 1;
        for &r in &entries {
            n0 = n0
                .checked_mul(r)
                .filter(|&v| v <= numth::MAX_N)
                .ok_or_else(|| Error::domain("product of entries is too large"))?;
        }
        Ok(Rho { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn product(&self) -> u64 {
        self.entries.iter().product()
    }

    /// `∏ (r_i - 1)`.
    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|r| r - 1).product()
    }
}

/// Binomial factors of `Q_ρ`: `(n_0 / ∏_{i ∈ S} r_i, (-1)^{|S|})` over subsets `S`.
fn q_factors(rho: &Rho) -> Vec<(u64, i64)> {
    let r = rho.entries();
    let n0 = rho.product();
    (0u32..1 << r.len())
        .map(|mask| {
            let sub: u64 = (0..r.len()).filter(|i| mask >> i & 1 == 1).map(|i| r[i]).product();
            (n0 / sub, if mask.count_ones() % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// The inclusion-exclusion polynomial `Q_ρ`.
pub fn q_poly(rho: &Rho) -> Result<IntPoly> {
    let deg = rho.degree();
    check_budget(deg + 1, DEFAULT_MEMORY_BUDGET)?;
    let plan = cyclo::pass_order(&q_factors(rho));
    Ok(cyclo::run_passes(deg as usize + 1, &plan)?.to_poly())
}

/// `{d | n_0 : gcd(d, r_i) > 1 for every i}`, ascending.
pub fn d_rho(rho: &Rho) -> Vec<u64> {
    fact(rho.product())
        .divisors()
        .into_iter()
        .filter(|d| rho.entries().iter().all(|r| d.gcd(r) > 1))
        .collect()
}

/// `f = x^s ∏ Φ_m^{a_m}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KroneckerFactorization {
    pub s: usize,
    pub factors: BTreeMap<u64, u32>,
}

/// `f = x^s ∏ (x^d - 1)^{e_d}` with every `e_d` nonzero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KroneckerExpansion {
    pub s: usize,
    pub terms: BTreeMap<u64, i64>,
}

impl KroneckerExpansion {
    /// Cyclotomic multiplicities implied by the expansion, using
    /// `x^d - 1 = ∏_{m | d} Φ_m`.
    pub fn factorization(&self) -> Result<KroneckerFactorization> {
        let mut acc: BTreeMap<u64, i64> = BTreeMap::new();
        for (&d, &e) in &self.terms {
            for m in fact(d).divisors() {
                *acc.entry(m).or_insert(0) += e;
            }
        }
        let mut factors = BTreeMap::new();
        for (m, a) in acc {
            if a < 0 {
                return Err(Error::Internal(format!("negative multiplicity for cyclotomic {m}")));
            }
            if a > 0 {
                factors.insert(m, a as u32);
            }
        }
        Ok(KroneckerFactorization { s: self.s, factors })
    }

    /// Rebuilds the polynomial by binomial passes.
    pub fn to_poly(&self) -> Result<IntPoly> {
        let deg: i64 = self.terms.iter().map(|(&d, &e)| d as i64 * e).sum();
        if deg < 0 {
            return Err(Error::domain("expansion has negative degree"));
        }
        let factors: Vec<(u64, i64)> = self.terms.iter().map(|(&d, &e)| (d, e)).collect();
        check_budget(deg as u64 + 1, DEFAULT_MEMORY_BUDGET)?;
        let g = cyclo::run_passes(deg as usize + 1, &cyclo::pass_order(&factors))?.to_poly();
        Ok(g.shift(self.s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Strip the lowest series term one binomial at a time.
    #[default]
    Peel,
    /// Möbius inversion of the cyclotomic factorization.
    Mobius,
}

/// Every `m` with `φ(m) <= max_phi`, ascending.
pub fn indices_with_totient_at_most(max_phi: u64) -> Result<Vec<u64>> {
    if max_phi >= TRIAL_LIMIT {
        return Err(Error::domain("degree too large for cyclotomic recognition"));
    }
    let primes: Vec<u64> = small_primes()
        .iter()
        .map(|&p| p as u64)
        .take_while(|&p| p - 1 <= max_phi)
        .collect();
    let mut out = vec![1];
    let mut stack: Vec<(u64, u64, usize)> = vec![(1, 1, 0)];
    while let Some((m, phi, start)) = stack.pop() {
        for (i, &p) in primes.iter().enumerate().skip(start) {
            if phi * (p - 1) > max_phi {
                break;
            }
            let (mut pm, mut pphi) = (m * p, phi * (p - 1));
            while pphi <= max_phi {
                out.push(pm);
                stack.push((pm, pphi, i + 1));
                pm *= p;
                pphi *= p;
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn nonzero(f: &IntPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::domain("the zero polynomial has no factorization"));
    }
    Ok(())
}

fn not_kronecker(why: &str) -> Error {
    Error::NotKronecker(why.into())
}

/// Splits `f` into `x^s` and cyclotomic factors, or reports that it is not
/// Kronecker. Each candidate `Φ_m` is screened by evaluating at `e^{2πi/m}`
/// and confirmed by exact division.
pub fn cyclotomic_factorization(f: &IntPoly) -> Result<KroneckerFactorization> {
    nonzero(f)?;
    if !f.is_monic() {
        return Err(not_kronecker("not monic"));
    }
    let s = f.order_at_zero().unwrap_or(0);
    let mut g = f.unshift(s);
    let mut factors = BTreeMap::new();
    let deg = g.degree().unwrap_or(0) as u64;
    for m in indices_with_totient_at_most(deg)? {
        let phi_m = numth::totient(m)?;
        loop {
            let rest = g.degree().unwrap_or(0) as u64;
            if phi_m > rest || !may_vanish_at_root_of_unity(&g, m) {
                break;
            }
            match g.exact_div(&cyclo::cyclotomic(m)?) {
                Ok(q) => {
                    g = q;
                    *factors.entry(m).or_insert(0) += 1;
                }
                Err(Error::Divisibility { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        if g.is_constant() {
            break;
        }
    }
    if !g.is_constant() {
        return Err(not_kronecker("has a root off the unit circle or not at a root of unity"));
    }
    Ok(KroneckerFactorization { s, factors })
}

/// Numeric screen; `false` only when `g(e^{2πi/m})` is clearly nonzero.
fn may_vanish_at_root_of_unity(g: &IntPoly, m: u64) -> bool {
    let mass: f64 = g.coeffs().iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum();
    if !mass.is_finite() {
        return true;
    }
    let z = Complex64::from_polar(1.0, std::f64::consts::TAU / m as f64);
    let deg = g.coeffs().len() as f64;
    let tol = (1e-9f64).max(64.0 * deg * f64::EPSILON) * mass;
    g.eval_complex(z).norm() <= tol
}

pub fn kronecker_expansion(f: &IntPoly, method: Method) -> Result<KroneckerExpansion> {
    nonzero(f)?;
    match method {
        Method::Mobius => {
            let fac = cyclotomic_factorization(f)?;
            let mut terms: BTreeMap<u64, i64> = BTreeMap::new();
            for (&m, &a) in &fac.factors {
                for d in fact(m).divisors() {
                    *terms.entry(d).or_insert(0) += a as i64 * numth::mobius(m / d)?;
                }
            }
            terms.retain(|_, e| *e != 0);
            Ok(KroneckerExpansion { s: fac.s, terms })
        }
        Method::Peel => peel(f),
    }
}

fn peel(f: &IntPoly) -> Result<KroneckerExpansion> {
    if !f.is_monic() {
        return Err(not_kronecker("not monic"));
    }
    let s = f.order_at_zero().unwrap_or(0);
    let g = f.unshift(s);
    let deg = g.degree().unwrap_or(0);
    let c0 = g.coeff(0);
    if !(c0.is_one() || (-&c0).is_one()) {
        return Err(not_kronecker("constant term after removing x^s is not ±1"));
    }
    // Away from its (x - 1) part a Kronecker polynomial is self-reciprocal.
    let reversed = IntPoly::from_coeffs(g.coeffs().iter().rev().cloned().collect());
    if reversed != g && reversed != -g.clone() {
        return Err(not_kronecker("neither self-reciprocal nor anti-reciprocal"));
    }
    // The largest index of a cyclotomic factor bounds every d in the expansion.
    let order = *indices_with_totient_at_most(deg as u64)?.last().unwrap() as usize;
    let mut h = SeriesView::from_poly(&g, order);
    let mut terms = BTreeMap::new();
    let mut from = 1;
    while let Some((d, c)) = h.first_nonconstant_term(from) {
        // h = c0 (1 - c0 c x^d + ...), and (1 - x^d)^e = 1 - e x^d + ...
        let e = -(c * h.coeff(0));
        let e = e
            .to_i64()
            .filter(|e| e.unsigned_abs() <= deg as u64)
            .ok_or_else(|| not_kronecker("exponent exceeds the degree"))?;
        h.mul_binomial_pow(d, Sign::Minus, -e)?;
        terms.insert(d as u64, e);
        from = d + 1;
    }
    let expansion = KroneckerExpansion { s, terms };
    if !reconstructs(&g, &expansion)? {
        return Err(not_kronecker("expansion does not reproduce the polynomial"));
    }
    Ok(expansion)
}

/// Checks `g ∏_{e_d < 0} (x^d - 1)^{-e_d} = ∏_{e_d > 0} (x^d - 1)^{e_d}` exactly.
fn reconstructs(g: &IntPoly, ex: &KroneckerExpansion) -> Result<bool> {
    let extra: u64 = ex
        .terms
        .iter()
        .filter(|(_, &e)| e < 0)
        .map(|(&d, &e)| d * e.unsigned_abs())
        .sum();
    let len = g.coeffs().len() as u64 + extra;
    check_budget(len, DEFAULT_MEMORY_BUDGET)?;
    let mut buf = CoeffBuffer::from_poly(g, len as usize, Truncation::Exact)?;
    for (&d, &e) in ex.terms.iter().filter(|(_, &e)| e < 0) {
        for _ in 0..e.unsigned_abs() {
            buf.apply(d as usize, Sign::Minus, BinomialMode::Multiply)?;
        }
    }
    for (&d, &e) in ex.terms.iter().filter(|(_, &e)| e > 0) {
        for _ in 0..e {
            match buf.apply(d as usize, Sign::Minus, BinomialMode::Divide) {
                Ok(()) => {}
                Err(Error::Divisibility { .. }) => return Ok(false),
                Err(err) => return Err(err),
            }
        }
    }
    Ok(buf.to_poly() == IntPoly::one())
}

/// The `ρ` with `Q_ρ = f`, if there is one.
///
/// Walks the expansion set upward, skipping 1, and keeps each element coprime
/// to those already kept; the candidate is accepted only if it rebuilds `f`.
pub fn recover_rho(f: &IntPoly) -> Result<Option<Rho>> {
    nonzero(f)?;
    let ex = match kronecker_expansion(f, Method::Peel) {
        Ok(ex) => ex,
        Err(Error::NotKronecker(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if ex.s != 0 {
        return Ok(None);
    }
    Ok(rho_from_expansion(f, &ex))
}

fn rho_from_expansion(f: &IntPoly, ex: &KroneckerExpansion) -> Option<Rho> {
    let mut chosen: Vec<u64> = Vec::new();
    for &d in ex.terms.keys().filter(|&&d| d > 1) {
        if chosen.iter().all(|r| r.gcd(&d) == 1) {
            chosen.push(d);
        }
    }
    let rho = Rho::new(chosen).ok()?;
    if rho.degree() as usize + 1 != f.coeffs().len() {
        return None;
    }
    // Compare expansions first; it is cheap and equivalent to comparing polynomials.
    let expected: BTreeMap<u64, i64> = q_factors(&rho).into_iter().collect();
    if expected != ex.terms {
        return None;
    }
    (q_poly(&rho).ok()? == *f).then_some(rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    UnitaryCyclotomic,
    InclusionExclusion,
    Kronecker,
    NotKronecker,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::UnitaryCyclotomic => "unitary_cyclotomic",
            Tier::InclusionExclusion => "inclusion_exclusion",
            Tier::Kronecker => "kronecker",
            Tier::NotKronecker => "not_kronecker",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tier: Tier,
    pub n: Option<u64>,
    pub rho: Option<Rho>,
    pub cyclotomic_factors: Option<BTreeMap<u64, u32>>,
    pub expansion: Option<KroneckerExpansion>,
}

impl Classification {
    fn bare(tier: Tier) -> Self {
        Classification {
            tier,
            n: None,
            rho: None,
            cyclotomic_factors: None,
            expansion: None,
        }
    }
}

/// Places `f` in the chain unitary cyclotomic ⊂ inclusion-exclusion ⊂ Kronecker.
pub fn classify(f: &IntPoly) -> Result<Classification> {
    if f.is_constant() {
        let c = f.coeff(0);
        return Ok(if c.is_one() {
            Classification {
                cyclotomic_factors: Some(BTreeMap::new()),
                expansion: Some(KroneckerExpansion::default()),
                ..Classification::bare(Tier::Kronecker)
            }
        } else if c == BigInt::from(-1) {
            Classification {
                cyclotomic_factors: Some(BTreeMap::new()),
                ..Classification::bare(Tier::Kronecker)
            }
        } else {
            Classification::bare(Tier::NotKronecker)
        });
    }
    let ex = match kronecker_expansion(f, Method::Peel) {
        Ok(ex) => ex,
        Err(Error::NotKronecker(_)) => return Ok(Classification::bare(Tier::NotKronecker)),
        Err(e) => return Err(e),
    };
    let factors = ex.factorization()?.factors;
    let rho = if ex.s == 0 { rho_from_expansion(f, &ex) } else { None };
    let mut out = Classification {
        cyclotomic_factors: Some(factors),
        expansion: Some(ex),
        ..Classification::bare(Tier::Kronecker)
    };
    if let Some(rho) = rho {
        let prime_powers = rho.entries().iter().all(|&r| fact(r).prime_power().is_some());
        if prime_powers {
            // Coprime prime powers have distinct bases.
            out.tier = Tier::UnitaryCyclotomic;
            out.n = Some(rho.product());
        } else {
            out.tier = Tier::InclusionExclusion;
        }
        out.rho = Some(rho);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{cyclotomic, unitary_cyclotomic};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rho(v: &[u64]) -> Rho {
        Rho::new(v.to_vec()).unwrap()
    }

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn terms(v: &[(u64, i64)]) -> BTreeMap<u64, i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn rho_validation() {
        assert_eq!(rho(&[4, 3]).entries(), &[3, 4]);
        assert!(Rho::new(vec![4, 6]).is_err());
        assert!(Rho::new(vec![1, 3]).is_err());
        assert!(Rho::new(vec![1 << 40, (1 << 30) + 1]).is_err());
    }

    #[test]
    fn q_poly_examples() {
        assert_eq!(q_poly(&rho(&[2, 3])).unwrap(), poly(&[1, -1, 1]));
        assert_eq!(q_poly(&rho(&[4, 3])).unwrap(), unitary_cyclotomic(12).unwrap());
        assert_eq!(q_poly(&rho(&[])).unwrap(), poly(&[-1, 1]));
        let q56 = q_poly(&rho(&[5, 6])).unwrap();
        assert_eq!(q56.degree(), Some(20));
        for n in 1..=2000 {
            if numth::unitary_totient(n).unwrap() == 20 {
                assert_ne!(unitary_cyclotomic(n).unwrap(), q56);
            }
        }
    }

    #[test]
    fn d_rho_examples() {
        assert_eq!(d_rho(&rho(&[4, 3])), vec![6, 12]);
        assert_eq!(d_rho(&rho(&[2, 3])), vec![6]);
        assert_eq!(d_rho(&rho(&[2, 3, 5])), vec![30]);
        for r in [vec![5, 6], vec![4, 9, 5], vec![7, 8, 15]] {
            let r = rho(&r);
            let parts: Vec<IntPoly> = d_rho(&r).into_iter().map(|d| cyclotomic(d).unwrap()).collect();
            assert_eq!(IntPoly::product(&parts), q_poly(&r).unwrap());
        }
    }

    #[test]
    fn factorization_examples() {
        let f = cyclotomic_factorization(&unitary_cyclotomic(12).unwrap()).unwrap();
        assert_eq!(f.s, 0);
        assert_eq!(f.factors, [(6, 1), (12, 1)].into_iter().collect());
        assert!(matches!(cyclotomic_factorization(&poly(&[-2, 0, 1])), Err(Error::NotKronecker(_))));
        let g = poly(&[0, 0, 0, 1, -2, 1]);
        let f = cyclotomic_factorization(&g).unwrap();
        assert_eq!((f.s, f.factors), (3, [(1, 2)].into_iter().collect()));
        assert!(matches!(cyclotomic_factorization(&poly(&[1, 1, 2])), Err(Error::NotKronecker(_))));
        assert!(matches!(cyclotomic_factorization(&poly(&[1, 3, 1])), Err(Error::NotKronecker(_))));
    }

    #[test]
    fn expansion_examples() {
        for method in [Method::Peel, Method::Mobius] {
            let e6 = kronecker_expansion(&cyclotomic(6).unwrap(), method).unwrap();
            assert_eq!(e6.terms, terms(&[(6, 1), (1, 1), (2, -1), (3, -1)]));
            let e12 = kronecker_expansion(&unitary_cyclotomic(12).unwrap(), method).unwrap();
            assert_eq!(e12.terms, terms(&[(12, 1), (1, 1), (4, -1), (3, -1)]));
            let x9 = kronecker_expansion(&poly(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 1]), method).unwrap();
            assert_eq!(x9.terms, terms(&[(9, 1)]));
            let shifted = kronecker_expansion(&poly(&[0, 0, 0, 1, -2, 1]), method).unwrap();
            assert_eq!((shifted.s, shifted.terms), (3, terms(&[(1, 2)])));
            assert!(kronecker_expansion(&poly(&[1, 3, 1]), method).is_err());
        }
    }

    #[test]
    fn recover_rho_examples() {
        assert_eq!(recover_rho(&cyclotomic(6).unwrap()).unwrap(), Some(rho(&[2, 3])));
        assert_eq!(recover_rho(&unitary_cyclotomic(12).unwrap()).unwrap(), Some(rho(&[3, 4])));
        // Φ_12 = (x^12 - 1)(x^2 - 1) / ((x^4 - 1)(x^6 - 1)) is not of the form Q_ρ
        assert_eq!(recover_rho(&cyclotomic(12).unwrap()).unwrap(), None);
        assert_eq!(recover_rho(&poly(&[-1, 1])).unwrap(), Some(rho(&[])));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&q_poly(&rho(&[4, 3])).unwrap()).unwrap();
        assert_eq!((c.tier, c.n), (Tier::UnitaryCyclotomic, Some(12)));
        let c = classify(&q_poly(&rho(&[5, 6])).unwrap()).unwrap();
        assert_eq!((c.tier, c.rho), (Tier::InclusionExclusion, Some(rho(&[5, 6]))));
        let sq = &poly(&[1, -2, 1]) * &cyclotomic(6).unwrap();
        let c = classify(&sq).unwrap();
        assert_eq!(c.tier, Tier::Kronecker);
        assert_eq!(c.cyclotomic_factors.unwrap(), [(1, 2), (6, 1)].into_iter().collect());
        assert_eq!(classify(&cyclotomic(12).unwrap()).unwrap().tier, Tier::Kronecker);
        assert_eq!(classify(&poly(&[-2, 0, 1])).unwrap().tier, Tier::NotKronecker);
        assert_eq!(classify(&poly(&[1])).unwrap().tier, Tier::Kronecker);
        let minus = classify(&poly(&[-1])).unwrap();
        assert_eq!((minus.tier, minus.expansion), (Tier::Kronecker, None));
        assert_eq!(classify(&IntPoly::zero()).unwrap().tier, Tier::NotKronecker);
        assert_eq!(classify(&poly(&[5])).unwrap().tier, Tier::NotKronecker);
        let one = classify(&poly(&[-1, 1])).unwrap();
        assert_eq!((one.tier, one.n), (Tier::UnitaryCyclotomic, Some(1)));
    }

    #[test]
    fn classification_json_shape() {
        let c = classify(&unitary_cyclotomic(12).unwrap()).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["tier"], "unitary_cyclotomic");
        assert_eq!(v["n"], 12);
        assert_eq!(v["rho"], serde_json::json!([3, 4]));
        assert_eq!(v["cyclotomic_factors"], serde_json::json!({"6": 1, "12": 1}));
        assert_eq!(v["expansion"]["terms"], serde_json::json!({"1": 1, "3": -1, "4": -1, "12": 1}));
    }

    #[test]
    fn totient_index_enumeration() {
        let fast = indices_with_totient_at_most(60).unwrap();
        let slow: Vec<u64> = (1..=400).filter(|&m| numth::totient(m).unwrap() <= 60).collect();
        assert_eq!(fast, slow);
    }

    fn random_rho(rng: &mut ChaCha8Rng) -> Rho {
        loop {
            let k = rng.gen_range(1..=4);
            let mut v: Vec<u64> = Vec::new();
            let mut prod = 1u64;
            for _ in 0..k {
                let r = rng.gen_range(2..=60u64);
                if v.iter().all(|x| x.gcd(&r) == 1) && prod * r <= 100_000 {
                    v.push(r);
                    prod *= r;
                }
            }
            if let Ok(r) = Rho::new(v) {
                return r;
            }
        }
    }

    #[test]
    fn rho_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let r = random_rho(&mut rng);
            let q = q_poly(&r).unwrap();
            assert_eq!(recover_rho(&q).unwrap(), Some(r.clone()), "rho = {:?}", r);
            let c = classify(&q).unwrap();
            assert!(c.cyclotomic_factors.unwrap().values().all(|&a| a == 1));
        }
    }

    #[test]
    fn unitary_bijection_up_to_1000() {
        use rayon::prelude::*;
        (2..1000u64).into_par_iter().for_each(|n| {
            let c = classify(&unitary_cyclotomic(n).unwrap()).unwrap();
            assert_eq!((c.tier, c.n), (Tier::UnitaryCyclotomic, Some(n)), "n = {n}");
            let expect: Vec<u64> = fact(n).prime_powers().into_iter().collect::<Vec<_>>();
            let mut expect = expect;
            expect.sort_unstable();
            assert_eq!(c.rho.unwrap().entries(), expect.as_slice());
        });
    }

    #[test]
    fn peel_and_mobius_agree() {
        use rayon::prelude::*;
        (1..=500u64).into_par_iter().for_each(|n| {
            let f = unitary_cyclotomic(n).unwrap();
            assert_eq!(
                kronecker_expansion(&f, Method::Peel).unwrap(),
                kronecker_expansion(&f, Method::Mobius).unwrap(),
                "n = {n}"
            );
        });
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let mut factors = vec![IntPoly::monomial(BigInt::one(), rng.gen_range(0..3))];
            for _ in 0..rng.gen_range(1..5) {
                factors.push(cyclotomic(rng.gen_range(1..60)).unwrap());
            }
            let f = IntPoly::product(&factors);
            let peel = kronecker_expansion(&f, Method::Peel).unwrap();
            assert_eq!(peel, kronecker_expansion(&f, Method::Mobius).unwrap(), "{f}");
            assert_eq!(peel.to_poly().unwrap(), f);
        }
    }
}
