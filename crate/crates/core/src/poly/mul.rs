//! Coefficient-slice multiplication and division kernels.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Below this length the schoolbook product wins.
const KARATSUBA_THRESHOLD: usize = 32;

trait Ring: Clone + Zero {
    fn mul_add(&mut self, a: &Self, b: &Self);
    fn add_from(&mut self, o: &Self);
    fn sub_from(&mut self, o: &Self);
}

impl Ring for i128 {
    #[inline]
    fn mul_add(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    #[inline]
    fn add_from(&mut self, o: &Self) {
        *self += o;
    }
    #[inline]
    fn sub_from(&mut self, o: &Self) {
        *self -= o;
    }
}

impl Ring for BigInt {
    fn mul_add(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_from(&mut self, o: &Self) {
        *self += o;
    }
    fn sub_from(&mut self, o: &Self) {
        *self -= o;
    }
}

/// Product of two nonempty ascending coefficient slices.
pub(super) fn multiply(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if let (Some(sa), Some(sb)) = (to_i128(a), to_i128(b)) {
        if fits_i128(&sa, &sb) {
            return product(&sa, &sb).into_iter().map(BigInt::from).collect();
        }
    }
    product(a, b)
}

fn to_i128(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|c| c.to_i64().map(i128::from)).collect()
}

/// Whether every intermediate of the Karatsuba recursion stays below 2^126.
fn fits_i128(a: &[i128], b: &[i128]) -> bool {
    let h = |v: &[i128]| v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0) as f64;
    let len = a.len().max(b.len()) as f64;
    let levels = (len / KARATSUBA_THRESHOLD as f64).log2().max(0.0).ceil() + 1.0;
    let bound = h(a) * h(b) * a.len().min(b.len()) as f64;
    bound.log2() + 2.0 * levels + 2.0 < 126.0 || bound == 0.0
}

fn product<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let nnz = |v: &[T]| v.iter().filter(|c| !c.is_zero()).count();
    let (na, nb) = (nnz(long), nnz(short));
    // Sparse operands (x^d - 1, f(x^k), ...) are cheapest term by term.
    if na.min(nb) <= 16 || nb * 8 <= short.len() || na * 8 <= long.len() {
        return schoolbook(long, short);
    }
    karatsuba(long, short)
}

fn schoolbook<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    // Outer loop over the sparser operand's nonzero terms.
    let (outer, inner) = if a.iter().filter(|c| !c.is_zero()).count() * b.len()
        <= b.iter().filter(|c| !c.is_zero()).count() * a.len()
    {
        (a, b)
    } else {
        (b, a)
    };
    for (i, x) in outer.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out[i..].iter_mut().zip(inner) {
            o.mul_add(x, y);
        }
    }
    out
}

fn karatsuba<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    if a.len() >= 2 * b.len() {
        for (k, chunk) in a.chunks(b.len()).enumerate() {
            let part = karatsuba(chunk, b);
            for (o, v) in out[k * b.len()..].iter_mut().zip(&part) {
                o.add_from(v);
            }
        }
        return out;
    }
    // Here b.len() > a.len() / 2 >= m, so both high halves are nonempty.
    let m = a.len() / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let mut z1 = karatsuba(&add_slices(a0, a1), &add_slices(b0, b1));
    for (z, v) in z1.iter_mut().zip(&z0) {
        z.sub_from(v);
    }
    for (z, v) in z1.iter_mut().zip(&z2) {
        z.sub_from(v);
    }
    for (o, v) in out.iter_mut().zip(&z0) {
        o.add_from(v);
    }
    for (o, v) in out[m..].iter_mut().zip(&z1) {
        o.add_from(v);
    }
    for (o, v) in out[2 * m..].iter_mut().zip(&z2) {
        o.add_from(v);
    }
    out
}

fn add_slices<T: Ring>(x: &[T], y: &[T]) -> Vec<T> {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut out = long.to_vec();
    for (o, v) in out.iter_mut().zip(short) {
        o.add_from(v);
    }
    out
}

/// Long division on machine integers. `None` means an intermediate overflowed
/// and the caller must redo the work with big integers.
pub(super) fn div_rem_i128(a: &[i64], b: &[i64]) -> Option<Result<(IntPoly, IntPoly)>> {
    let db = b.len() - 1;
    let da = a.len() - 1;
    let lead = b[db] as i128;
    let support: Vec<(usize, i128)> = b
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c as i128))
        .collect();
    let mut rem: Vec<i128> = a.iter().map(|&c| c as i128).collect();
    let mut q = vec![0i128; da - db + 1];
    for i in (0..=da - db).rev() {
        let top = rem[i + db];
        if top == 0 {
            continue;
        }
        if top % lead != 0 {
            return Some(Err(Error::Divisibility {
                remainder_degree: i + db,
            }));
        }
        let qi = top / lead;
        for &(j, c) in &support {
            let t = qi.checked_mul(c)?;
            rem[i + j] = rem[i + j].checked_sub(t)?;
        }
        q[i] = qi;
    }
    rem.truncate(db);
    let big = |v: Vec<i128>| IntPoly::from_coeffs(v.into_iter().map(BigInt::from).collect());
    Some(Ok((big(q), big(rem))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn karatsuba_matches_naive_on_assorted_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(la, lb) in &[(1, 1), (31, 33), (64, 64), (100, 37), (257, 256), (1000, 40), (513, 700)] {
            let a: Vec<i128> = (0..la).map(|_| rng.gen_range(-1000..=1000)).collect();
            let b: Vec<i128> = (0..lb).map(|_| rng.gen_range(-1000..=1000)).collect();
            assert_eq!(karatsuba(&a, &b), naive(&a, &b), "{la}x{lb}");
            assert_eq!(product(&a, &b), naive(&a, &b));
        }
    }

    #[test]
    fn big_integer_karatsuba() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let scale = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
        let a: Vec<BigInt> = (0..90).map(|_| &scale * rng.gen_range(-9i64..=9)).collect();
        let b: Vec<BigInt> = (0..70).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
        let small_a: Vec<i128> = (0..90).map(|i| (&a[i] / &scale).to_i128().unwrap()).collect();
        let small_b: Vec<i128> = b.iter().map(|c| c.to_i128().unwrap()).collect();
        let expect: Vec<BigInt> = naive(&small_a, &small_b)
            .into_iter()
            .map(|c| BigInt::from(c) * &scale)
            .collect();
        assert_eq!(multiply(&a, &b), expect);
    }
}
