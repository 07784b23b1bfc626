use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{mobius, unitary_mobius};
use crate::error::Result;

/// Values an arithmetic function may take: anything forming an additive group.
pub trait ArithValue: Clone + Zero + Neg<Output = Self> + PartialEq + Send + Sync + 'static {}

impl<T> ArithValue for T where T: Clone + Zero + Neg<Output = T> + PartialEq + Send + Sync + 'static {}

/// A total map from positive integers to values of type `V`.
pub struct ArithFn<V = BigRational> {
    eval: Arc<dyn Fn(u64) -> V + Send + Sync>,
    multiplicative: bool,
}

impl<V> Clone for ArithFn<V> {
    fn clone(&self) -> Self {
        ArithFn {
            eval: Arc::clone(&self.eval),
            multiplicative: self.multiplicative,
        }
    }
}

impl<V> fmt::Debug for ArithFn<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArithFn")
            .field("multiplicative", &self.multiplicative)
            .finish_non_exhaustive()
    }
}

impl<V: ArithValue> ArithFn<V> {
    pub fn new(multiplicative: bool, eval: impl Fn(u64) -> V + Send + Sync + 'static) -> Self {
        ArithFn {
            eval: Arc::new(eval),
            multiplicative,
        }
    }

    /// Evaluates at `n >= 1`.
    pub fn eval(&self, n: u64) -> V {
        assert!(n >= 1, "arithmetic functions are defined on positive integers");
        (self.eval)(n)
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    /// Checks `f(mn) = f(m) f(n)` over coprime pairs with `mn <= limit`.
    /// Only meaningful for values with a multiplication.
    pub fn spot_check_multiplicative(&self, limit: u64) -> Option<(u64, u64)>
    where
        V: std::ops::Mul<Output = V>,
    {
        for m in 2..=limit {
            for n in 2..=limit / m {
                if num_integer::gcd(m, n) == 1 && self.eval(m * n) != self.eval(m) * self.eval(n) {
                    return Some((m, n));
                }
            }
        }
        None
    }
}

impl ArithFn<BigRational> {
    /// Builds a function from integer values.
    pub fn from_int(multiplicative: bool, eval: impl Fn(u64) -> i64 + Send + Sync + 'static) -> Self {
        ArithFn::new(multiplicative, move |n| BigRational::from_integer(eval(n).into()))
    }

    /// `ε`: 1 at 1, 0 elsewhere.
    pub fn epsilon() -> Self {
        ArithFn::from_int(true, |n| (n == 1) as i64)
    }

    /// The constant function `1`.
    pub fn one() -> Self {
        ArithFn::from_int(true, |_| 1)
    }

    /// `id_s(n) = n^s`.
    pub fn id_pow(s: i64) -> Self {
        ArithFn::new(true, move |n| {
            let b = BigRational::from_integer(BigInt::from(n));
            if s >= 0 {
                num_traits::Pow::pow(b, s as u64)
            } else {
                num_traits::Pow::pow(b.recip(), s.unsigned_abs())
            }
        })
    }

    pub fn mobius() -> Self {
        ArithFn::from_int(true, |n| mobius(n).expect("positive"))
    }

    pub fn unitary_mobius() -> Self {
        ArithFn::from_int(true, |n| unitary_mobius(n).expect("positive"))
    }

    /// A function given by a table of values at `1..=table.len()`, zero beyond it.
    pub fn from_table(table: Vec<BigRational>) -> Self {
        ArithFn::new(false, move |n| {
            table.get(n as usize - 1).cloned().unwrap_or_else(BigRational::zero)
        })
    }

    /// The convolution `f ⊙ g` as a lazily evaluated function.
    pub fn convolution(kind: ConvolutionKind, f: &Self, g: &Self) -> Self {
        let (f, g) = (f.clone(), g.clone());
        let multiplicative = f.multiplicative && g.multiplicative;
        ArithFn::new(multiplicative, move |n| convolve(kind, &f, &g, n).expect("positive"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvolutionKind {
    /// Sum over all divisors `d | n`.
    Dirichlet,
    /// Sum over unitary divisors `d || n`.
    Unitary,
    /// Sum over divisors `d | n` with `κ(d) = κ(n)`. Neither commutative nor associative.
    Kernel,
}

/// `(f ⊙ g)(n) = Σ f(d) g(n/d)` over the divisors selected by `kind`.
pub fn convolve(
    kind: ConvolutionKind,
    f: &ArithFn<BigRational>,
    g: &ArithFn<BigRational>,
    n: u64,
) -> Result<BigRational> {
    let fac = super::factorize(n)?;
    let ds = match kind {
        ConvolutionKind::Dirichlet => fac.divisors(),
        ConvolutionKind::Unitary => fac.unitary_divisors(),
        ConvolutionKind::Kernel => super::kernel_divisors(n)?,
    };
    Ok(ds
        .into_iter()
        .fold(BigRational::zero(), |acc, d| acc + f.eval(d) * g.eval(n / d)))
}

/// `g*(n) = Σ_{d | n, κ(d) = κ(n)} g(d)`. Preserves multiplicativity.
pub fn kernel_transform<V: ArithValue>(g: &ArithFn<V>) -> ArithFn<V> {
    let g = g.clone();
    let multiplicative = g.multiplicative;
    ArithFn::new(multiplicative, move |n| {
        super::kernel_divisors(n)
            .expect("positive")
            .into_iter()
            .fold(V::zero(), |acc, d| acc + g.eval(d))
    })
}

/// Inverse of [`kernel_transform`]: `g(n) = Σ_{d | n, κ(d) = κ(n)} g*(d) μ(n/d)`.
pub fn kernel_inverse<V: ArithValue>(g_star: &ArithFn<V>) -> ArithFn<V> {
    let g_star = g_star.clone();
    let multiplicative = g_star.multiplicative;
    ArithFn::new(multiplicative, move |n| {
        let mut acc = V::zero();
        for d in super::kernel_divisors(n).expect("positive") {
            match mobius(n / d).expect("positive") {
                1 => acc = acc + g_star.eval(d),
                -1 => acc = acc + -g_star.eval(d),
                _ => {}
            }
        }
        acc
    })
}

/// An exact integer combination `Σ c_p log p` over primes `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LogValue {
    terms: BTreeMap<u64, i64>,
}

impl LogValue {
    /// `multiplier · log p`.
    pub fn log_prime(p: u64, multiplier: i64) -> Self {
        let mut terms = BTreeMap::new();
        if multiplier != 0 {
            terms.insert(p, multiplier);
        }
        LogValue { terms }
    }

    /// `log n` expanded over the prime factorization of `n`.
    pub fn log_of(n: u64) -> Result<Self> {
        let f = super::factorize(n)?;
        Ok(LogValue {
            terms: f.pairs().iter().map(|&(p, a)| (p, a as i64)).collect(),
        })
    }

    /// `(multiplier, prime)` pairs, ascending by prime.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.terms.iter().map(|(&p, &c)| (c, p))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(&p, &c)| c as f64 * (p as f64).ln()).sum()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, p)) in self.terms().enumerate() {
            match (i, c) {
                (0, 1) => write!(f, "log {p}")?,
                (0, c) => write!(f, "{c}*log {p}")?,
                (_, 1) => write!(f, " + log {p}")?,
                (_, -1) => write!(f, " - log {p}")?,
                (_, c) if c < 0 => write!(f, " - {}*log {p}", -c)?,
                (_, c) => write!(f, " + {c}*log {p}")?,
            }
        }
        Ok(())
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(mut self, rhs: LogValue) -> LogValue {
        for (p, c) in rhs.terms {
            let e = self.terms.entry(p).or_insert(0);
            *e += c;
            if *e == 0 {
                self.terms.remove(&p);
            }
        }
        self
    }
}

impl Neg for LogValue {
    type Output = LogValue;

    fn neg(mut self) -> LogValue {
        self.terms.values_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Zero for LogValue {
    fn zero() -> Self {
        LogValue::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
