//! Ramanujan sums, their unitary analogue, and the identities built on them.
//!
//! Exact values never touch roots of unity; the floating sums over
//! `e^{2πijk/n}` are kept only as independent checks.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclo::{self, Kind};
use crate::error::{Error, Result};
use crate::numth::{self, fact, kernel_inverse, kernel_transform, ArithFn, ConvolutionKind};

fn positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(format!("{what} must be positive")));
    }
    Ok(())
}

/// `c_n(k) = Σ_{d | gcd(n, k)} d μ(n/d)`.
pub fn ramanujan(n: u64, k: u64) -> Result<i128> {
    positive(n, "n")?;
    positive(k, "k")?;
    let g = n.gcd(&k);
    fact(g)
        .divisors()
        .into_iter()
        .map(|d| Ok(d as i128 * numth::mobius(n / d)? as i128))
        .sum()
}

/// `c*_n(k) = Σ_{d ‖ (k, n)_*} d μ*(n/d)`.
pub fn unitary_ramanujan(n: u64, k: u64) -> Result<i128> {
    positive(n, "n")?;
    positive(k, "k")?;
    let g = numth::unitary_gcd(k, n)?;
    fact(g)
        .unitary_divisors()
        .into_iter()
        .map(|d| Ok(d as i128 * numth::unitary_mobius(n / d)? as i128))
        .sum()
}

/// `Σ cos(2π jk/n)` over `j ≤ n` with `gcd(j, n) = 1`, or `(j, n)_* = 1` when `unitary`.
pub fn ramanujan_numeric(n: u64, k: u64, unitary: bool) -> Result<f64> {
    positive(n, "n")?;
    let mut s = 0.0;
    for j in 1..=n {
        let coprime = if unitary { numth::unitary_gcd(j, n)? == 1 } else { j.gcd(&n) == 1 };
        if coprime {
            s += angle_cos(j, k, n);
        }
    }
    Ok(s)
}

/// `cos(2π jk/n)` with the product reduced mod `n` first.
fn angle_cos(j: u64, k: u64, n: u64) -> f64 {
    let r = ((j as u128 * k as u128) % n as u128) as f64;
    (TAU * r / n as f64).cos()
}

fn angle_sin(j: u64, k: u64, n: u64) -> f64 {
    let r = ((j as u128 * k as u128) % n as u128) as f64;
    (TAU * r / n as f64).sin()
}

/// `Σ_{d ‖ n} c*_d(k)` must equal `n` when `n | k` and 0 otherwise.
pub fn check_divisor_sum_indicator(n: u64, k: u64) -> Result<()> {
    positive(n, "n")?;
    let sum: i128 = fact(n)
        .unitary_divisors()
        .into_iter()
        .map(|d| unitary_ramanujan(d, k))
        .sum::<Result<i128>>()?;
    let expect = if k % n == 0 { n as i128 } else { 0 };
    if sum != expect {
        return Err(Error::verification(
            "sum of c*_d(k) over unitary divisors",
            format!("n = {n}, k = {k}: got {sum}, expected {expect}"),
        ));
    }
    Ok(())
}

/// `c*_n(k)` is the sum of `c_d(k)` over divisors `d` of `n` with the same
/// prime support, and conversely with weights `μ(n/d)`.
pub fn check_kernel_sums(n: u64, k: u64) -> Result<()> {
    positive(n, "n")?;
    positive(k, "k")?;
    let classical = ArithFn::<i128>::new(true, move |d| ramanujan(d, k).expect("positive"));
    let unitary = ArithFn::<i128>::new(true, move |d| unitary_ramanujan(d, k).expect("positive"));
    let forward = kernel_transform(&classical).eval(n);
    let backward = kernel_inverse(&unitary).eval(n);
    if forward != unitary.eval(n) {
        return Err(Error::verification(
            "c*_n(k) as a kernel-divisor sum of c_d(k)",
            format!("n = {n}, k = {k}: {forward} vs {}", unitary.eval(n)),
        ));
    }
    if backward != classical.eval(n) {
        return Err(Error::verification(
            "c_n(k) recovered from c*_d(k)",
            format!("n = {n}, k = {k}: {backward} vs {}", classical.eval(n)),
        ));
    }
    Ok(())
}

/// Sum of the `j <= n` with `(j, n)_* = 1`, by enumeration.
pub fn s_star(n: u64) -> Result<u128> {
    if n < 2 {
        return Err(Error::domain("the sum is defined for n >= 2"));
    }
    let mut s = 0u128;
    for j in 1..=n {
        if numth::unitary_gcd(j, n)? == 1 {
            s += j as u128;
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DftMethod {
    /// `Σ_{d ‖ (m, n)_*} d (μ* × f)(n/d)`.
    ExactConv,
    /// `Σ_{d ‖ n} f(d) c*_{n/d}(m)`.
    ExactRamanujan,
    /// `Σ_k f((k, n)_*) e^{2πikm/n}` in floating point.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DftValue {
    Exact(BigRational),
    Numeric(Complex64),
}

impl DftValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            DftValue::Exact(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            DftValue::Numeric(z) => *z,
        }
    }
}

/// Discrete Fourier transform of `k ↦ f((k, n)_*)` at frequency `m`.
pub fn dft(f: &ArithFn, m: u64, n: u64, method: DftMethod) -> Result<DftValue> {
    positive(m, "m")?;
    positive(n, "n")?;
    Ok(match method {
        DftMethod::ExactConv => {
            let g = numth::unitary_gcd(m, n)?;
            let mu_f = |e: u64| numth::convolve(ConvolutionKind::Unitary, &ArithFn::unitary_mobius(), f, e);
            let mut acc = BigRational::zero();
            for d in fact(g).unitary_divisors() {
                acc += BigRational::from_integer(d.into()) * mu_f(n / d)?;
            }
            DftValue::Exact(acc)
        }
        DftMethod::ExactRamanujan => {
            let mut acc = BigRational::zero();
            for d in fact(n).unitary_divisors() {
                let c = unitary_ramanujan(n / d, m)?;
                acc += f.eval(d) * BigRational::from_integer(c.into());
            }
            DftValue::Exact(acc)
        }
        DftMethod::Numeric => {
            let mut z = Complex64::zero();
            for k in 1..=n {
                let v = f.eval(numth::unitary_gcd(k, n)?).to_f64().unwrap_or(f64::NAN);
                z += Complex64::new(angle_cos(k, m, n), angle_sin(k, m, n)) * v;
            }
            DftValue::Numeric(z)
        }
    })
}

/// `Σ_k f((k, n)_*) sin(2π km/n)`, which vanishes for real `f`.
pub fn dft_sine_part(f: &ArithFn, m: u64, n: u64) -> Result<f64> {
    positive(n, "n")?;
    let mut s = 0.0;
    for k in 1..=n {
        s += f.eval(numth::unitary_gcd(k, n)?).to_f64().unwrap_or(f64::NAN) * angle_sin(k, m, n);
    }
    Ok(s)
}

/// Both sides of a product identity, as signed logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigProducts {
    pub n: u64,
    pub sin: ProductCheck,
    pub cos: ProductCheck,
}

/// A real number as `sign · e^{log}`; zero has sign 0.
#[derive(Debug, Clone, Copy)]
struct SignedLog {
    sign: i8,
    log: f64,
}

impl SignedLog {
    fn zero() -> Self {
        SignedLog { sign: 0, log: f64::NEG_INFINITY }
    }

    fn from_i64(v: i64) -> Self {
        if v == 0 {
            return Self::zero();
        }
        SignedLog {
            sign: v.signum() as i8,
            log: (v.unsigned_abs() as f64).ln(),
        }
    }

    fn value(self) -> f64 {
        self.sign as f64 * self.log.exp()
    }

    /// Relative agreement within `rel`, or absolute within `abs` when either side is 0.
    fn agrees(self, other: SignedLog, rel: f64, abs: f64) -> bool {
        if self.sign == 0 || other.sign == 0 {
            return (self.value() - other.value()).abs() <= abs;
        }
        self.sign == other.sign && (self.log - other.log).abs() <= rel
    }
}

/// Compares `∏ sin(πj/n)` and `∏ cos(πj/n)` over `(j, n)_* = 1` with
/// `Φ*_n(1) / 2^{φ*(n)}` and `Φ*_n(-1) / (-4)^{φ*(n)/2}`.
pub fn trig_products(n: u64) -> Result<TrigProducts> {
    if n < 2 {
        return Err(Error::domain("trigonometric products need n >= 2"));
    }
    let mut sin = SignedLog { sign: 1, log: 0.0 };
    let mut cos = SignedLog { sign: 1, log: 0.0 };
    for j in 1..=n {
        if numth::unitary_gcd(j, n)? != 1 {
            continue;
        }
        let t = PI * j as f64 / n as f64;
        let s = t.sin();
        sin.log += s.abs().ln();
        if s < 0.0 {
            sin.sign = -sin.sign;
        }
        if 2 * j == n {
            cos = SignedLog::zero();
        } else if cos.sign != 0 {
            let c = t.cos();
            cos.log += c.abs().ln();
            if c < 0.0 {
                cos.sign = -cos.sign;
            }
        }
    }
    let phi = numth::unitary_totient(n)?;
    let mut sin_rhs = SignedLog::from_i64(cyclo::value_at_one(n, Kind::Unitary)?);
    sin_rhs.log -= phi as f64 * LN_2;
    let mut cos_rhs = SignedLog::from_i64(cyclo::value_at_minus_one(n, Kind::Unitary)?);
    if cos_rhs.sign != 0 {
        // φ*(n) is even whenever n has an odd prime factor
        cos_rhs.log -= phi as f64 * LN_2;
        if (phi / 2) % 2 == 1 {
            cos_rhs.sign = -cos_rhs.sign;
        }
    }
    let (rel, abs) = (1e-9, 1e-12);
    Ok(TrigProducts {
        n,
        sin: ProductCheck {
            lhs: sin.value(),
            rhs: sin_rhs.value(),
            passed: sin.agrees(sin_rhs, rel, abs),
        },
        cos: ProductCheck {
            lhs: cos.value(),
            rhs: cos_rhs.value(),
            passed: cos.agrees(cos_rhs, rel, abs),
        },
    })
}

fn check_base(x: f64) -> Result<()> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::domain("x must be a real number greater than 1"));
    }
    Ok(())
}

/// `ln ∏_{j=1}^{n} (x^{(j,n)_*} - 1)^{cos(2π jm/n)}`.
pub fn schramm_unitary_log(n: u64, x: f64, m: u64) -> Result<f64> {
    positive(n, "n")?;
    positive(m, "m")?;
    check_base(x)?;
    let lx = x.ln();
    let mut total = 0.0;
    for j in 1..=n {
        let g = numth::unitary_gcd(j, n)? as f64;
        // ln(x^g - 1) without overflowing x^g
        let term = g * lx + (-(-g * lx).exp()).ln_1p();
        total += angle_cos(j, m, n) * term;
    }
    Ok(total)
}

pub fn schramm_unitary(n: u64, x: f64, m: u64) -> Result<f64> {
    Ok(schramm_unitary_log(n, x, m)?.exp())
}

/// `ln ∏_{d ‖ (m, n)_*} Φ*_{n/d}(x)^d`, evaluated from the polynomials.
pub fn schramm_target_log(n: u64, x: f64, m: u64) -> Result<f64> {
    positive(n, "n")?;
    positive(m, "m")?;
    check_base(x)?;
    let g = numth::unitary_gcd(m, n)?;
    let mut total = 0.0;
    for d in fact(g).unitary_divisors() {
        let p = cyclo::unitary_cyclotomic(n / d)?;
        total += d as f64 * log_eval(&p, x);
    }
    Ok(total)
}

/// `ln p(x)` for `x > 1`, written as `deg · ln x + ln Σ a_i x^{i - deg}` so
/// large degrees do not overflow.
fn log_eval(p: &crate::poly::IntPoly, x: f64) -> f64 {
    let deg = p.degree().unwrap_or(0) as f64;
    let inv = 1.0 / x;
    let mut s = 0.0;
    for c in p.coeffs().iter() {
        s = s * inv + c.to_f64().unwrap_or(f64::NAN);
    }
    deg * x.ln() + s.ln()
}

/// Truncated `exp(-Σ_{k<=K} c*_n(k) x^k / k)` and a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Bound on the omitted part of the exponent.
    pub exponent_tail: f64,
    /// Resulting bound on `|value - Φ*_n(x)|`.
    pub error_bound: f64,
}

pub fn exp_series(n: u64, x: f64, terms: u64) -> Result<SeriesValue> {
    if n < 2 {
        return Err(Error::domain("the series needs n > 1"));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::domain("the series needs |x| < 1"));
    }
    if terms == 0 {
        return Err(Error::domain("at least one term is required"));
    }
    let mut s = 0.0;
    let mut xk = 1.0;
    for k in 1..=terms {
        xk *= x;
        s += unitary_ramanujan(n, k)? as f64 * xk / k as f64;
    }
    let value = (-s).exp();
    // |c*_n(k)| <= σ*(n)
    let sigma = numth::unitary_sigma(n)? as f64;
    let a = x.abs();
    let k1 = (terms + 1) as f64;
    let exponent_tail = sigma * a.powf(k1) / (k1 * (1.0 - a));
    let error_bound = value * exponent_tail.exp_m1() + 1e-14 * value.abs().max(1.0);
    Ok(SeriesValue {
        value,
        exponent_tail,
        error_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaPartial {
    /// `-Σ_{k<=K} c*_n(k)/k`.
    pub raw: f64,
    /// Mean of the first `K` partial sums.
    pub cesaro: f64,
}

/// Partial sums of `-Σ c*_n(k)/k`, which tends to `Λ*(n)` slowly.
pub fn lambda_series_partial(n: u64, terms: u64) -> Result<LambdaPartial> {
    if n < 2 {
        return Err(Error::domain("the series needs n > 1"));
    }
    if terms == 0 {
        return Err(Error::domain("at least one term is required"));
    }
    let (mut partial, mut running) = (0.0, 0.0);
    for k in 1..=terms {
        partial -= unitary_ramanujan(n, k)? as f64 / k as f64;
        running += partial;
    }
    Ok(LambdaPartial {
        raw: partial,
        cesaro: running / terms as f64,
    })
}
