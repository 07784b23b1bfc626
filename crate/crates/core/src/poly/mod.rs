//! Dense univariate polynomials over the integers.
//!
//! [`IntPoly`] stores arbitrary-precision coefficients in ascending order and
//! is always kept canonical (no trailing zero coefficients). Products and
//! exact quotients run on 128-bit machine integers whenever a coefficient
//! bound proves that no intermediate value can overflow, and fall back to
//! big integers otherwise.

mod buffer;
mod mul;
mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use buffer::{mul_div_binomial_inplace, BinomialMode, CoeffBuffer, SeriesView, Sign, Truncation};
pub use parse::{format, parse, Style};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `c · x^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        IntPoly { coeffs }
    }

    /// `x^d + 1` or `x^d - 1`.
    pub fn binomial(d: usize, sign: Sign) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] += 1;
        coeffs[0] += sign.value();
        IntPoly::from_coeffs(coeffs)
    }

    /// Ascending coefficients; trailing zeros are stripped.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^j`; zero beyond the degree.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Multiplicity of `x` as a factor; `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Coefficients as machine integers, if they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `f(x^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1, "compose_power needs k >= 1");
        let Some(deg) = self.degree() else {
            return IntPoly::zero();
        };
        let mut coeffs = vec![BigInt::zero(); deg * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly { coeffs }
    }

    /// `f(-x)`.
    pub fn negate_x(&self) -> Self {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `x^s · f`.
    pub fn shift(&self, s: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// `f / x^s`, dropping the low coefficients (which must be zero for exactness).
    pub fn unshift(&self, s: usize) -> Self {
        IntPoly::from_coeffs(self.coeffs.iter().skip(s).cloned().collect())
    }

    /// Maximum absolute coefficient; zero for the zero polynomial.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Whether the coefficient sequence is a palindrome, i.e. `f(x) = x^deg f(1/x)`.
    pub fn is_self_reciprocal(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Exact integer evaluation by Horner's rule.
    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Quotient `q` with `self = divisor · q`, or a divisibility error.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.div_rem_exact_lead(divisor)?;
        match r.degree() {
            None => Ok(q),
            Some(remainder_degree) => Err(Error::Divisibility { remainder_degree }),
        }
    }

    /// Whether `self` divides `other` in `Z[x]`.
    pub fn divides(&self, other: &IntPoly) -> bool {
        !self.is_zero() && other.exact_div(self).is_ok()
    }

    /// Long division that requires every step's leading coefficient to be
    /// divisible by the divisor's; returns `(q, r)` with `deg r < deg divisor`.
    fn div_rem_exact_lead(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let Some(db) = divisor.degree() else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let Some(da) = self.degree() else {
            return Ok((IntPoly::zero(), IntPoly::zero()));
        };
        if da < db {
            return Ok((IntPoly::zero(), self.clone()));
        }
        if let (Some(a), Some(b)) = (self.to_i64_vec(), divisor.to_i64_vec()) {
            if let Some(res) = mul::div_rem_i128(&a, &b) {
                return res;
            }
        }
        let lead = divisor.leading_coeff().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        let support: Vec<(usize, &BigInt)> = divisor
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for i in (0..=da - db).rev() {
            let top = &rem[i + db];
            if top.is_zero() {
                continue;
            }
            let (qi, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::Divisibility {
                    remainder_degree: i + db,
                });
            }
            for &(j, c) in &support {
                rem[i + j] -= &qi * c;
            }
            q[i] = qi;
        }
        rem.truncate(db);
        Ok((IntPoly::from_coeffs(q), IntPoly::from_coeffs(rem)))
    }

    /// Product of many polynomials, multiplied smallest-first.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a IntPoly>) -> IntPoly {
        let mut fs: Vec<&IntPoly> = factors.into_iter().collect();
        fs.sort_by_key(|f| f.coeffs.len());
        let mut acc = IntPoly::one();
        for f in fs {
            acc = &acc * f;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::one(), |acc, _| &acc * self)
    }

    /// `{"degree": D, "coeffs_ascending": [...]}`.
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            degree: self.degree(),
            coeffs_ascending: self.coeffs.iter().map(big_to_json).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyJson {
    pub degree: Option<usize>,
    pub coeffs_ascending: Vec<serde_json::Number>,
}

/// A big integer as an exact JSON number.
pub fn big_to_json(c: &BigInt) -> serde_json::Number {
    c.to_string().parse().expect("integers are valid JSON numbers")
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", format(self, Style::Expr))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self, Style::Expr))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(mul::multiply(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&p(&[1, -1, 1]) * &p(&[1, 0, -1, 0, 1]), p(&[1, -1, 0, 1, 0, -1, 1]));
        assert!((&p(&[3, 4]) * &IntPoly::zero()).is_zero());
        assert_eq!(&p(&[1, 2, 3]) - &p(&[1, 2, 3]), IntPoly::zero());
        assert_eq!(p(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p(&[-1, 0, 0, 0, 0, 0, 1]).exact_div(&p(&[-1, 0, 1])).unwrap(), p(&[1, 0, 1, 0, 1]));
        let num = &IntPoly::binomial(12, Sign::Minus) * &IntPoly::binomial(1, Sign::Minus);
        let den = &IntPoly::binomial(4, Sign::Minus) * &IntPoly::binomial(3, Sign::Minus);
        assert_eq!(num.exact_div(&den).unwrap(), p(&[1, -1, 0, 1, 0, -1, 1]));
        assert!(matches!(
            p(&[1, 0, 1]).exact_div(&p(&[1, 1])),
            Err(Error::Divisibility { remainder_degree: 0 })
        ));
        assert!(!p(&[1, 1]).divides(&p(&[1, 0, 1])));
        assert!(p(&[1, 1]).divides(&p(&[-1, 0, 1])));
        // non-monic divisor
        assert_eq!(p(&[2, 4, 6, 8]).exact_div(&p(&[2])).unwrap(), p(&[1, 2, 3, 4]));
        assert!(p(&[1, 1]).exact_div(&p(&[0, 2])).is_err());
        assert!(p(&[1]).exact_div(&IntPoly::zero()).is_err());
    }

    #[test]
    fn evaluation() {
        let phi4 = p(&[1, 1, 1, 1]);
        assert_eq!(phi4.eval_int(&1.into()), 4.into());
        assert_eq!(p(&[7, 3, 2]).eval_int(&0.into()), 7.into());
        let z = p(&[1, 0, 1]).eval_complex(Complex64::new(0.0, 1.0));
        assert!(z.norm() < 1e-12);
        assert_eq!(p(&[1, 0, 1]).eval_f64(2.0), 5.0);
    }

    #[test]
    fn height_and_reciprocity() {
        assert_eq!(p(&[1, -1, 0, 1, 0, -1, 1]).height(), 1.into());
        assert_eq!(IntPoly::zero().height(), 0.into());
        assert!(p(&[1, -1, 1]).is_self_reciprocal());
        assert!(!p(&[1, 2]).is_self_reciprocal());
    }

    #[test]
    fn transforms() {
        assert_eq!(p(&[1, 1]).compose_power(3), p(&[1, 0, 0, 1]));
        assert_eq!(p(&[1, 1, 1]).negate_x(), p(&[1, -1, 1]));
        assert_eq!(p(&[1, 2]).shift(2), p(&[0, 0, 1, 2]));
        assert_eq!(p(&[0, 0, 1, 2]).order_at_zero(), Some(2));
    }

    #[test]
    fn big_coefficients_take_the_slow_path() {
        let big = BigInt::from(i64::MAX) * BigInt::from(1000);
        let a = IntPoly::from_coeffs(vec![big.clone(), BigInt::from(1), big.clone()]);
        let b = p(&[3, -1, 4, 1]);
        let prod = &a * &b;
        assert_eq!(prod.coeff(0), &big * 3);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&p(&[1, -1, 1]).to_json()).unwrap();
        assert_eq!(j, r#"{"degree":2,"coeffs_ascending":[1,-1,1]}"#);
        let j = serde_json::to_string(&IntPoly::zero().to_json()).unwrap();
        assert_eq!(j, r#"{"degree":null,"coeffs_ascending":[]}"#);
    }

    fn arb_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-1_000_000i64..=1_000_000, 0..=65).prop_map(|v| IntPoly::from_i64(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a.clone());
            }
        }
    }
}
