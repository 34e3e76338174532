//! Wigner 3-j and 6-j symbols by the Racah single-sum formulas, evaluated in
//! exact rational arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HalfInt;
use crate::error::AngularError;
use crate::scalar::Real;

/// An exact number of the form `s * sqrt(r)` with `s` in {-1, 0, +1} and
/// rational `r >= 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational { sign: 0, radicand: BigRational::zero() }
    }

    /// `sign * sqrt(radicand)`; the sign is dropped when the radicand is zero.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if radicand.is_zero() || sign == 0 {
            Self::zero()
        } else {
            SignedSqrtRational { sign: sign.signum(), radicand }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The exact square of the value.
    pub fn square(&self) -> &BigRational {
        &self.radicand
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = self.radicand.to_f64().unwrap_or_else(|| ratio_to_f64_fallback(&self.radicand));
        f64::from(self.sign) * r.sqrt()
    }

    pub fn to_real<T: Real>(&self) -> T {
        T::lit(self.to_f64())
    }
}

impl std::ops::Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        SignedSqrtRational::new(self.sign * rhs.sign, &self.radicand * &rhs.radicand)
    }
}

impl fmt::Debug for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            -1 => "-",
            0 => return write!(f, "0"),
            _ => "",
        };
        write!(f, "{s}sqrt({})", self.radicand)
    }
}

fn ratio_to_f64_fallback(r: &BigRational) -> f64 {
    // Scale both parts down by the same power of two; only reached for
    // arguments far beyond anything used here.
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = (bits - 900).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

fn factorial(n: i32) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n as i64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn phase(exponent: i32) -> i8 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `|a - b| <= c <= a + b` with `a + b + c` integral, all in doubled units.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c >= (a - b).abs() && c <= a + b
}

/// Triangle coefficient `(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!`.
fn delta(a: HalfInt, b: HalfInt, c: HalfInt) -> BigRational {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    let num = factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2);
    let den = factorial((a + b + c) / 2 + 1);
    BigRational::new(num, den)
}

fn check_magnitude(j: HalfInt) -> Result<(), AngularError> {
    if j.twice() < 0 {
        Err(AngularError::NegativeMagnitude(j))
    } else {
        Ok(())
    }
}

/// A 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThreeJ {
    pub j: [HalfInt; 3],
    pub m: [HalfInt; 3],
}

impl ThreeJ {
    pub fn new(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> Self {
        ThreeJ { j: [j1, j2, j3], m: [m1, m2, m3] }
    }

    /// Column permutation; `perm` lists the source column for each slot.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        ThreeJ {
            j: [self.j[perm[0]], self.j[perm[1]], self.j[perm[2]]],
            m: [self.m[perm[0]], self.m[perm[1]], self.m[perm[2]]],
        }
    }

    pub fn with_negated_m(&self) -> Self {
        ThreeJ { j: self.j, m: [-self.m[0], -self.m[1], -self.m[2]] }
    }

    pub fn exact(&self) -> Result<SignedSqrtRational, AngularError> {
        let [j1, j2, j3] = self.j;
        let [m1, m2, m3] = self.m;
        for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
            check_magnitude(j)?;
            if !j.same_parity(m) {
                return Err(AngularError::ParityMismatch { j, m });
            }
        }
        if (m1 + m2 + m3).twice() != 0 || !triangle(j1, j2, j3) {
            return Ok(SignedSqrtRational::zero());
        }
        if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
            return Ok(SignedSqrtRational::zero());
        }

        // Everything below is in integer units.
        let i = |x: HalfInt| {
            debug_assert!(x.is_integer());
            x.twice() / 2
        };
        let k_min = 0.max(i(j2 - j3 - m1)).max(i(j1 - j3 + m2));
        let k_max = i(j1 + j2 - j3).min(i(j1 - m1)).min(i(j2 + m2));

        let mut sum = BigRational::zero();
        for k in k_min..=k_max {
            let den = factorial(k)
                * factorial(i(j3 - j2 + m1) + k)
                * factorial(i(j3 - j1 - m2) + k)
                * factorial(i(j1 + j2 - j3) - k)
                * factorial(i(j1 - m1) - k)
                * factorial(i(j2 + m2) - k);
            let term = BigRational::new(BigInt::one(), den);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        if sum.is_zero() {
            return Ok(SignedSqrtRational::zero());
        }

        let prod = factorial(i(j1 + m1))
            * factorial(i(j1 - m1))
            * factorial(i(j2 + m2))
            * factorial(i(j2 - m2))
            * factorial(i(j3 + m3))
            * factorial(i(j3 - m3));
        let sign = phase(i(j1 - j2 - m3)) * if sum.is_negative() { -1 } else { 1 };
        let radicand = delta(j1, j2, j3) * BigRational::from_integer(prod) * &sum * &sum;
        Ok(SignedSqrtRational::new(sign, radicand))
    }

    pub fn value<T: Real>(&self) -> Result<T, AngularError> {
        Ok(self.exact()?.to_real())
    }
}

/// A 6-j symbol `{a b c; d e f}` (upper row `a b c`, lower row `d e f`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SixJ {
    pub upper: [HalfInt; 3],
    pub lower: [HalfInt; 3],
}

impl SixJ {
    pub fn new(a: HalfInt, b: HalfInt, c: HalfInt, d: HalfInt, e: HalfInt, f: HalfInt) -> Self {
        SixJ { upper: [a, b, c], lower: [d, e, f] }
    }

    pub fn permuted_columns(&self, perm: [usize; 3]) -> Self {
        SixJ {
            upper: [self.upper[perm[0]], self.upper[perm[1]], self.upper[perm[2]]],
            lower: [self.lower[perm[0]], self.lower[perm[1]], self.lower[perm[2]]],
        }
    }

    /// Swaps upper and lower entries in the two columns other than `keep`.
    pub fn flipped_except(&self, keep: usize) -> Self {
        let mut out = *self;
        for col in (0..3).filter(|&c| c != keep) {
            std::mem::swap(&mut out.upper[col], &mut out.lower[col]);
        }
        out
    }

    pub fn exact(&self) -> Result<SignedSqrtRational, AngularError> {
        let [a, b, c] = self.upper;
        let [d, e, f] = self.lower;
        for x in [a, b, c, d, e, f] {
            check_magnitude(x)?;
        }
        let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
        if !triads.iter().all(|&(x, y, z)| triangle(x, y, z)) {
            return Ok(SignedSqrtRational::zero());
        }

        let t2 = |x: HalfInt, y: HalfInt, z: HalfInt| (x + y + z).twice() / 2;
        let alpha = triads.map(|(x, y, z)| t2(x, y, z));
        let beta = [(a + b + d + e).twice() / 2, (a + c + d + f).twice() / 2, (b + c + e + f).twice() / 2];
        let t_min = *alpha.iter().max().unwrap();
        let t_max = *beta.iter().min().unwrap();

        let mut sum = BigRational::zero();
        for t in t_min..=t_max {
            let mut den = BigInt::one();
            for al in alpha {
                den *= factorial(t - al);
            }
            for be in beta {
                den *= factorial(be - t);
            }
            let term = BigRational::new(factorial(t + 1), den);
            if t % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        if sum.is_zero() {
            return Ok(SignedSqrtRational::zero());
        }

        let tri = triads.iter().fold(BigRational::one(), |acc, &(x, y, z)| acc * delta(x, y, z));
        let sign = match sum.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            _ => 1,
        };
        Ok(SignedSqrtRational::new(sign, tri * &sum * &sum))
    }

    pub fn value<T: Real>(&self) -> Result<T, AngularError> {
        Ok(self.exact()?.to_real())
    }
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner3j<T: Real>(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<T, AngularError> {
    ThreeJ::new(j1, j2, j3, m1, m2, m3).value()
}

/// Wigner 6-j symbol `{a b c; d e f}`.
pub fn wigner6j<T: Real>(
    a: HalfInt,
    b: HalfInt,
    c: HalfInt,
    d: HalfInt,
    e: HalfInt,
    f: HalfInt,
) -> Result<T, AngularError> {
    SixJ::new(a, b, c, d, e, f).value()
}
