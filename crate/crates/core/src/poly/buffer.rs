//! Fixed-length coefficient buffers updated in place by binomial factors.
//!
//! Multiplying or dividing by `x^d ± 1` touches each coefficient once, which
//! is what makes products of the form `∏ (x^d - 1)^{e_d}` cheap. A buffer
//! starts on 64-bit machine integers; the first overflow promotes the whole
//! buffer to big integers and the interrupted pass resumes where it stopped.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Constant term of the binomial `x^d ± 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinomialMode {
    Multiply,
    Divide,
}

/// How a buffer relates to the polynomial it holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// Power series modulo `x^len`; every pass is valid, nothing is checked.
    Series,
    /// The buffer holds an entire polynomial of degree `< len`. Products must
    /// fit and quotients must be exact.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffBuffer {
    storage: Storage,
    truncation: Truncation,
}

impl CoeffBuffer {
    pub fn zeros(len: usize, truncation: Truncation) -> Self {
        CoeffBuffer {
            storage: Storage::Small(vec![0; len]),
            truncation,
        }
    }

    /// The constant 1 in a buffer of length `len >= 1`.
    pub fn one(len: usize, truncation: Truncation) -> Self {
        let mut b = CoeffBuffer::zeros(len, truncation);
        if let Storage::Small(v) = &mut b.storage {
            v[0] = 1;
        }
        b
    }

    /// Loads `p` into a buffer of length `len`. In exact mode `p` must fit.
    pub fn from_poly(p: &IntPoly, len: usize, truncation: Truncation) -> Result<Self> {
        if truncation == Truncation::Exact && p.coeffs().len() > len {
            return Err(Error::Capacity {
                len,
                needed: p.coeffs().len() - 1,
            });
        }
        let take = p.coeffs().iter().take(len);
        let storage = match take.clone().map(ToPrimitive::to_i64).collect::<Option<Vec<i64>>>() {
            Some(mut v) => {
                v.resize(len, 0);
                Storage::Small(v)
            }
            None => {
                let mut v: Vec<BigInt> = take.cloned().collect();
                v.resize(len, BigInt::zero());
                Storage::Big(v)
            }
        };
        Ok(CoeffBuffer { storage, truncation })
    }

    pub fn from_i64(coeffs: Vec<i64>, truncation: Truncation) -> Self {
        CoeffBuffer {
            storage: Storage::Small(coeffs),
            truncation,
        }
    }

    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Small(v) => v.len(),
            Storage::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Whether the buffer has been promoted to big integers.
    pub fn is_promoted(&self) -> bool {
        matches!(self.storage, Storage::Big(_))
    }

    /// Machine-integer view, unless promoted.
    pub fn as_i64(&self) -> Option<&[i64]> {
        match &self.storage {
            Storage::Small(v) => Some(v),
            Storage::Big(_) => None,
        }
    }

    pub fn get(&self, i: usize) -> BigInt {
        match &self.storage {
            Storage::Small(v) => BigInt::from(v[i]),
            Storage::Big(v) => v[i].clone(),
        }
    }

    fn is_zero_at(&self, i: usize) -> bool {
        match &self.storage {
            Storage::Small(v) => v[i] == 0,
            Storage::Big(v) => v[i].is_zero(),
        }
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::from_coeffs(match &self.storage {
            Storage::Small(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
            Storage::Big(v) => v.clone(),
        })
    }

    /// Maximum absolute coefficient.
    pub fn height(&self) -> BigInt {
        match &self.storage {
            Storage::Small(v) => BigInt::from(v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)),
            Storage::Big(v) => v.iter().map(|c| c.abs()).max().unwrap_or_default(),
        }
    }

    /// Multiplies every coefficient by -1.
    pub fn negate(&mut self) {
        match &mut self.storage {
            Storage::Small(v) => {
                if v.contains(&i64::MIN) {
                    self.promote();
                    self.negate();
                } else {
                    v.iter_mut().for_each(|c| *c = -*c);
                }
            }
            Storage::Big(v) => v.iter_mut().for_each(|c| *c = -&*c),
        }
    }

    fn promote(&mut self) {
        if let Storage::Small(v) = &self.storage {
            self.storage = Storage::Big(v.iter().map(|&c| BigInt::from(c)).collect());
        }
    }

    /// Shorthand for [`mul_div_binomial_inplace`].
    pub fn apply(&mut self, d: usize, sign: Sign, mode: BinomialMode) -> Result<()> {
        mul_div_binomial_inplace(self, d, sign, mode)
    }

    fn multiply_pass(&mut self, d: usize, sign: Sign) {
        let len = self.len();
        // Descending, so c[i - d] still holds its old value when c[i] is rewritten.
        let resume = match &mut self.storage {
            Storage::Small(c) => small_multiply(c, d, sign),
            Storage::Big(_) => Some(len),
        };
        if let Some(start) = resume {
            self.promote();
            let Storage::Big(c) = &mut self.storage else { unreachable!() };
            for i in (0..start).rev() {
                let mut v = if sign == Sign::Minus { -&c[i] } else { c[i].clone() };
                if i >= d {
                    v += &c[i - d];
                }
                c[i] = v;
            }
        }
    }

    fn divide_pass(&mut self, d: usize, sign: Sign) {
        let len = self.len();
        let resume = match &mut self.storage {
            Storage::Small(c) => small_divide(c, d, sign),
            Storage::Big(_) => Some(0),
        };
        if let Some(start) = resume {
            self.promote();
            let Storage::Big(c) = &mut self.storage else { unreachable!() };
            for i in start..len {
                // q_i = s (c_i - q_{i-d})
                let mut v = c[i].clone();
                if i >= d {
                    v -= &c[i - d];
                }
                c[i] = if sign == Sign::Minus { -v } else { v };
            }
        }
    }
}

/// Returns the index at which overflow stopped the pass (that index untouched).
fn small_multiply(c: &mut [i64], d: usize, sign: Sign) -> Option<usize> {
    let len = c.len();
    for i in (0..len).rev() {
        let own = match sign {
            Sign::Plus => Some(c[i]),
            Sign::Minus => c[i].checked_neg(),
        };
        let v = if i >= d {
            own.and_then(|o| o.checked_add(c[i - d]))
        } else {
            own
        };
        match v {
            Some(v) => c[i] = v,
            None => return Some(i + 1),
        }
    }
    None
}

fn small_divide(c: &mut [i64], d: usize, sign: Sign) -> Option<usize> {
    for i in 0..c.len() {
        let diff = if i >= d { c[i].checked_sub(c[i - d]) } else { Some(c[i]) };
        let v = match sign {
            Sign::Plus => diff,
            Sign::Minus => diff.and_then(i64::checked_neg),
        };
        match v {
            Some(v) => c[i] = v,
            None => return Some(i),
        }
    }
    None
}

/// Multiplies or divides `buf` in place by `x^d + sign` in a single pass.
///
/// For `x^d - 1` the multiply step is `c'_i = c_{i-d} - c_i`; division runs
/// the inverse recurrence from the constant term upward. Series buffers are
/// read modulo `x^len`. Exact buffers reject products that do not fit and
/// quotients that are not exact, leaving the buffer unchanged on error.
pub fn mul_div_binomial_inplace(
    buf: &mut CoeffBuffer,
    d: usize,
    sign: Sign,
    mode: BinomialMode,
) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("binomial degree must be positive"));
    }
    let len = buf.len();
    match mode {
        BinomialMode::Multiply => {
            if buf.truncation == Truncation::Exact {
                if let Some(top) = (len.saturating_sub(d)..len).rev().find(|&i| !buf.is_zero_at(i)) {
                    return Err(Error::Capacity { len, needed: top + d });
                }
            }
            buf.multiply_pass(d, sign);
        }
        BinomialMode::Divide => {
            buf.divide_pass(d, sign);
            if buf.truncation == Truncation::Exact
                && (len.saturating_sub(d)..len).any(|i| !buf.is_zero_at(i))
            {
                // Undo, then let long division report the remainder.
                buf.multiply_pass(d, sign);
                let err = buf
                    .to_poly()
                    .exact_div(&IntPoly::binomial(d, sign))
                    .err()
                    .unwrap_or(Error::Internal("binomial division check disagrees with long division".into()));
                return Err(err);
            }
        }
    }
    Ok(())
}

/// A power series truncated at a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesView {
    buf: CoeffBuffer,
}

impl SeriesView {
    /// `1 + O(x^{order+1})`.
    pub fn one(order: usize) -> Self {
        SeriesView {
            buf: CoeffBuffer::one(order + 1, Truncation::Series),
        }
    }

    pub fn from_poly(p: &IntPoly, order: usize) -> Self {
        SeriesView {
            buf: CoeffBuffer::from_poly(p, order + 1, Truncation::Series).expect("series never overflow capacity"),
        }
    }

    pub fn order(&self) -> usize {
        self.buf.len() - 1
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.buf.get(i)
    }

    /// Multiplies by `(x^d + sign)^e` for any integer `e`.
    pub fn mul_binomial_pow(&mut self, d: usize, sign: Sign, e: i64) -> Result<()> {
        let mode = if e >= 0 {
            BinomialMode::Multiply
        } else {
            BinomialMode::Divide
        };
        for _ in 0..e.unsigned_abs() {
            mul_div_binomial_inplace(&mut self.buf, d, sign, mode)?;
        }
        Ok(())
    }

    /// Lowest-degree nonzero term beyond the constant, as `(degree, coefficient)`.
    pub fn first_nonconstant_term(&self, from: usize) -> Option<(usize, BigInt)> {
        (from.max(1)..self.buf.len())
            .find(|&i| !self.buf.is_zero_at(i))
            .map(|i| (i, self.buf.get(i)))
    }

    pub fn is_one(&self) -> bool {
        self.buf.get(0).is_one() && self.first_nonconstant_term(1).is_none()
    }

    /// Truncated product.
    pub fn mul(&self, other: &SeriesView) -> SeriesView {
        let order = self.order().min(other.order());
        let full = &self.buf.to_poly() * &other.buf.to_poly();
        SeriesView::from_poly(&full, order)
    }

    /// Multiplicative inverse; requires constant term ±1.
    pub fn inverse(&self) -> Result<SeriesView> {
        let c0 = self.buf.get(0);
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(Error::domain("series inverse needs constant term ±1"));
        }
        let len = self.buf.len();
        let a: Vec<BigInt> = (0..len).map(|i| self.buf.get(i)).collect();
        let mut inv = vec![BigInt::zero(); len];
        inv[0] = c0.clone();
        for k in 1..len {
            let mut s = BigInt::zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    s += &a[j] * &inv[k - j];
                }
            }
            // c0 = ±1 is its own inverse
            inv[k] = -(s * &c0);
        }
        Ok(SeriesView::from_poly(&IntPoly::from_coeffs(inv), len - 1))
    }

    pub fn to_poly(&self) -> IntPoly {
        self.buf.to_poly()
    }
}
