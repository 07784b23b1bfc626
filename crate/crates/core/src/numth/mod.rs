//! Integer and unitary-divisor arithmetic.
//!
//! A divisor `d` of `n` is *unitary* (written `d || n`) when `gcd(d, n/d) = 1`.
//! Everything here is driven by the prime-power factorization of `n`, which
//! is memoized process-wide.

mod arith_fn;
mod primes;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

pub use arith_fn::{convolve, kernel_inverse, kernel_transform, ArithFn, ArithValue, ConvolutionKind, LogValue};
pub use primes::is_prime;
pub(crate) use primes::{small_primes, TRIAL_LIMIT};

use crate::error::{Error, Result};

/// Largest argument accepted by [`factorize`].
pub const MAX_N: u64 = (1 << 63) - 1;

/// Canonical prime-power factorization: primes strictly ascending, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, validating the invariants.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain("primes must be strictly increasing"));
            }
        }
        for &(p, a) in &pairs {
            if a == 0 || !is_prime(p) {
                return Err(Error::domain(format!("invalid prime power {p}^{a}")));
            }
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Reconstructs `n`.
    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, a)| p.pow(a)).product()
    }

    /// The prime powers `p^a` with `p^a || n`, ascending by prime.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.pairs.iter().map(|&(p, a)| p.pow(a)).collect()
    }

    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    pub fn kernel(&self) -> u64 {
        self.pairs.iter().map(|&(p, _)| p).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, a)| a == 1)
    }

    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.pairs.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    pub fn unitary_divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for q in self.prime_powers() {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] * q);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, a) in &self.pairs {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn cache() -> &'static RwLock<HashMap<u64, Factorization>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Factorization>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Drops every memoized factorization.
pub fn clear_factorization_cache() {
    cache().write().unwrap_or_else(|e| e.into_inner()).clear();
}

/// Prime-power factorization of `1 <= n <= 2^63 - 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("factorize: n must be positive"));
    }
    if n > MAX_N {
        return Err(Error::domain(format!("factorize: n = {n} exceeds 2^63 - 1")));
    }
    if let Some(f) = cache().read().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Ok(f.clone());
    }
    let f = factorize_uncached(n);
    cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(n, f.clone());
    Ok(f)
}

fn factorize_uncached(mut n: u64) -> Factorization {
    let mut pairs = Vec::new();
    for &p in primes::small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            pairs.push((p, a));
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        primes::split_large(n, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match pairs.last_mut() {
                Some((q, a)) if *q == p => *a += 1,
                _ => pairs.push((p, 1)),
            }
        }
    }
    Factorization { pairs }
}

/// Factorization for internal callers whose argument is known to be positive.
pub(crate) fn fact(n: u64) -> Factorization {
    factorize(n).expect("positive argument")
}

pub fn unitary_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.unitary_divisors())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

/// Squarefree kernel: the product of the distinct primes dividing `n`.
pub fn kernel(n: u64) -> Result<u64> {
    Ok(factorize(n)?.kernel())
}

pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

/// Divisors `d` of `n` with the same squarefree kernel as `n`, ascending.
pub fn kernel_divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let k = f.kernel();
    Ok(fact(n / k).divisors().into_iter().map(|e| e * k).collect())
}

/// Unitary gcd `(j, n)_*`: the largest divisor of `j` that is a unitary divisor of `n`.
pub fn unitary_gcd(j: u64, n: u64) -> Result<u64> {
    if j == 0 {
        return Err(Error::domain("unitary_gcd: j must be positive"));
    }
    Ok(factorize(n)?
        .prime_powers()
        .into_iter()
        .filter(|q| j % q == 0)
        .product())
}

pub fn mobius(n: u64) -> Result<i64> {
    let f = factorize(n)?;
    Ok(if f.is_squarefree() { sign(f.omega()) } else { 0 })
}

/// `μ*(n) = (-1)^ω(n)`.
pub fn unitary_mobius(n: u64) -> Result<i64> {
    Ok(sign(factorize(n)?.omega()))
}

fn sign(omega: u32) -> i64 {
    if omega % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn totient(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .pairs()
        .iter()
        .map(|&(p, a)| p.pow(a - 1) * (p - 1))
        .product())
}

/// `φ*(n)`, multiplicative with `φ*(p^a) = p^a - 1`.
pub fn unitary_totient(n: u64) -> Result<u64> {
    Ok(factorize(n)?.prime_powers().iter().map(|q| q - 1).product())
}

/// `(φ(n), φ*(n))`.
pub fn totients(n: u64) -> Result<(u64, u64)> {
    Ok((totient(n)?, unitary_totient(n)?))
}

/// `σ*(n)`, the sum of the unitary divisors; multiplicative with `σ*(p^a) = p^a + 1`.
pub fn unitary_sigma(n: u64) -> Result<u128> {
    Ok(factorize(n)?
        .prime_powers()
        .iter()
        .map(|&q| q as u128 + 1)
        .product())
}

fn rational_pow(base: u64, exp: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    if exp >= 0 {
        Pow::pow(b, exp as u64)
    } else {
        Pow::pow(b.recip(), exp.unsigned_abs())
    }
}

/// Jordan functions `(J_s(n), J*_s(n))` where `J_s = μ * id_s` and `J*_s = μ* × id_s`.
pub fn jordan(s: i64, n: u64) -> Result<(BigRational, BigRational)> {
    let f = factorize(n)?;
    let one = BigRational::one();
    let mut classical = one.clone();
    let mut unitary = one.clone();
    for &(p, a) in f.pairs() {
        // J_s(p^a) = p^{as} - p^{(a-1)s};  J*_s(p^a) = p^{as} - 1
        let top = rational_pow(p, s * a as i64);
        classical *= &top - rational_pow(p, s * (a as i64 - 1));
        unitary *= top - &one;
    }
    Ok((classical, unitary))
}

/// `(Λ(n), Λ*(n))` as exact multiples of `log p`.
pub fn mangoldt(n: u64) -> Result<(LogValue, LogValue)> {
    let f = factorize(n)?;
    Ok(match f.prime_power() {
        Some((p, a)) => (LogValue::log_prime(p, 1), LogValue::log_prime(p, a as i64)),
        None => (LogValue::zero(), LogValue::zero()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn brute_unitary_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0 && d.gcd(&(n / d)) == 1).collect()
    }

    fn brute_unitary_gcd(j: u64, n: u64) -> u64 {
        brute_unitary_divisors(n)
            .into_iter()
            .filter(|d| j % d == 0)
            .max()
            .unwrap()
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().pairs().is_empty());
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(40).unwrap().pairs(), &[(2, 3), (5, 1)]);
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
        assert!(factorize(MAX_N + 1).is_err());
    }

    #[test]
    fn factorize_reconstructs_large_values() {
        for n in [
            MAX_N,
            600_851_475_143,
            1_000_000_007 * 1_000_000_009,
            (1u64 << 62) + 1,
            999_983 * 999_983 * 999_983,
        ] {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n);
            assert!(f.pairs().iter().all(|&(p, _)| is_prime(p)));
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn factorize_matches_trial_division_to_20k() {
        for n in 1..20_000u64 {
            let mut m = n;
            let mut expect = Vec::new();
            let mut p = 2;
            while m > 1 {
                let mut a = 0;
                while m % p == 0 {
                    m /= p;
                    a += 1;
                }
                if a > 0 {
                    expect.push((p, a));
                }
                p += 1;
            }
            assert_eq!(factorize(n).unwrap().pairs(), expect.as_slice());
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(unitary_divisors(12).unwrap(), vec![1, 3, 4, 12]);
        assert_eq!(unitary_divisors(8).unwrap(), vec![1, 8]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        for n in 1..=600 {
            let u = unitary_divisors(n).unwrap();
            assert_eq!(u, brute_unitary_divisors(n));
            assert_eq!(u.len(), 1 << omega(n).unwrap());
        }
    }

    #[test]
    fn kernel_and_omega() {
        assert_eq!(kernel(12).unwrap(), 6);
        assert_eq!((kernel(7).unwrap(), omega(7).unwrap()), (7, 1));
        assert_eq!((kernel(1).unwrap(), omega(1).unwrap()), (1, 0));
        assert_eq!(kernel_divisors(12).unwrap(), vec![6, 12]);
        assert_eq!(kernel_divisors(40).unwrap(), vec![10, 20, 40]);
    }

    #[test]
    fn unitary_gcd_matches_brute_force() {
        assert_eq!(unitary_gcd(2, 4).unwrap(), 1);
        assert_eq!(unitary_gcd(6, 12).unwrap(), 3);
        for n in 1..=120 {
            assert_eq!(unitary_gcd(n, n).unwrap(), n);
            for j in 1..=2 * n {
                assert_eq!(unitary_gcd(j, n).unwrap(), brute_unitary_gcd(j, n), "({j},{n})");
            }
        }
    }

    #[test]
    fn mobius_examples() {
        assert_eq!((mobius(12).unwrap(), unitary_mobius(12).unwrap()), (0, 1));
        assert_eq!((mobius(6).unwrap(), unitary_mobius(6).unwrap()), (1, 1));
        assert_eq!((mobius(1).unwrap(), unitary_mobius(1).unwrap()), (1, 1));
        for q in [2u64, 4, 8, 9, 27, 25, 49, 1024] {
            assert_eq!(unitary_mobius(q).unwrap(), -1);
        }
    }

    #[test]
    fn totient_and_sigma() {
        assert_eq!(totients(12).unwrap(), (4, 6));
        assert_eq!(unitary_sigma(12).unwrap(), 20);
        for q in [2u64, 4, 8, 9, 27, 125] {
            assert_eq!(unitary_totient(q).unwrap(), q - 1);
            assert_eq!(unitary_sigma(q).unwrap(), q as u128 + 1);
        }
        for n in 1..=1000u64 {
            let sum: u128 = brute_unitary_divisors(n).iter().map(|&d| d as u128).sum();
            assert_eq!(unitary_sigma(n).unwrap(), sum);
            let count = (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(totient(n).unwrap(), count);
        }
    }

    #[test]
    fn jordan_examples() {
        let r = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(jordan(2, 12).unwrap().1, r(120));
        assert_eq!(jordan(1, 12).unwrap(), (r(4), r(6)));
        for s in -3..=3 {
            assert_eq!(jordan(s, 1).unwrap(), (r(1), r(1)));
        }
        // J*_{-1}(4) = 4^{-1} - 1
        assert_eq!(
            jordan(-1, 4).unwrap().1,
            BigRational::new((-3).into(), 4.into())
        );
    }

    #[test]
    fn mangoldt_examples() {
        let (l, ls) = mangoldt(8).unwrap();
        assert_eq!(ls, LogValue::log_prime(2, 3));
        assert_eq!(l, LogValue::log_prime(2, 1));
        assert!(mangoldt(12).unwrap().1.is_zero());
        assert!(mangoldt(1).unwrap().1.is_zero());
        let sum = unitary_divisors(12)
            .unwrap()
            .into_iter()
            .fold(LogValue::zero(), |acc, d| acc + mangoldt(d).unwrap().1);
        assert_eq!(sum, LogValue::log_of(12).unwrap());
        assert!((sum.to_f64() - 12f64.ln()).abs() < 1e-12);
    }
}
