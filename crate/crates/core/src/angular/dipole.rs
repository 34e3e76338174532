//! Electric-dipole matrix elements `<n'L'S'J'm'| r_q |nLSJm>` for a single
//! valence electron (S = 1/2), with the radial integral set to one.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::wigner::{SignedSqrtRational, SixJ, ThreeJ};
use super::HalfInt;
use crate::error::AngularError;
use crate::scalar::Real;

const SPIN: HalfInt = HalfInt::HALF;

/// A fine-structure level `L_J` of a one-electron atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FineLevel {
    pub l: u32,
    pub j: HalfInt,
}

impl FineLevel {
    pub fn new(l: u32, j: HalfInt) -> Result<Self, AngularError> {
        let l2 = 2 * l as i32;
        let ok = j.twice() > 0 && (j.twice() == l2 + 1 || j.twice() == l2 - 1);
        if ok {
            Ok(FineLevel { l, j })
        } else {
            Err(AngularError::InvalidFineStructureJ(j))
        }
    }

    /// The other member of the fine-structure doublet, if it exists.
    pub fn partner(&self) -> Option<FineLevel> {
        let l2 = 2 * self.l as i32;
        let other = if self.j.twice() == l2 + 1 { l2 - 1 } else { l2 + 1 };
        (other > 0).then(|| FineLevel { l: self.l, j: HalfInt::from_twice(other) })
    }
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<(), AngularError> {
    if !j.same_parity(m) {
        return Err(AngularError::ParityMismatch { j, m });
    }
    if m.abs() > j {
        return Err(AngularError::ProjectionOutOfRange { j, m });
    }
    Ok(())
}

fn check_q(q: i32) -> Result<(), AngularError> {
    if (-1..=1).contains(&q) {
        Ok(())
    } else {
        Err(AngularError::InvalidSphericalIndex(q))
    }
}

fn parity_sign(twice_exponent: i32) -> i8 {
    debug_assert!(twice_exponent % 2 == 0);
    if (twice_exponent / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn sqrt_int(n: i64) -> SignedSqrtRational {
    SignedSqrtRational::new(1, BigRational::from_integer(BigInt::from(n)))
}

/// Full Wigner-Eckart evaluation for an `L -> L+1` step, with the 6-j symbol
/// computed generically and `<n'L'||r||nL> = (-1)^L' sqrt(L')`.
pub fn dipole_element_ls_exact(
    upper: FineLevel,
    m_upper: HalfInt,
    lower: FineLevel,
    m_lower: HalfInt,
    q: i32,
) -> Result<SignedSqrtRational, AngularError> {
    if upper.l != lower.l + 1 {
        return Err(AngularError::NotDipolePair { l: lower.l, j: lower.j, l2: upper.l, j2: upper.j });
    }
    check_q(q)?;
    check_projection(upper.j, m_upper)?;
    check_projection(lower.j, m_lower)?;

    let (jp, j) = (upper.j, lower.j);
    let lp = HalfInt::from_int(upper.l as i32);
    let l = HalfInt::from_int(lower.l as i32);
    let three = ThreeJ::new(jp, HalfInt::ONE, j, -m_upper, HalfInt::from_int(q), m_lower).exact()?;
    if three.is_zero() {
        return Ok(SignedSqrtRational::zero());
    }
    let six = SixJ::new(lp, jp, SPIN, j, l, HalfInt::ONE).exact()?;
    // (-1)^(J'-m') (-1)^(L'+S+J+1) (-1)^L'
    let twice_exp = (jp - m_upper).twice() + (lp + SPIN + j + HalfInt::ONE).twice() + lp.twice();
    let phase = SignedSqrtRational::new(parity_sign(twice_exp), BigRational::from_integer(1.into()));
    let dims = sqrt_int(((j.twice() + 1) * (jp.twice() + 1)) as i64 * upper.l as i64);
    Ok(&(&(&phase * &three) * &six) * &dims)
}

/// `<a, m_a| r_q |b, m_b>` for any dipole-connected pair, using
/// `r_q^dagger = (-1)^q r_{-q}` when `a` lies below `b`.
pub fn dipole_element<T: Real>(
    a: FineLevel,
    m_a: HalfInt,
    b: FineLevel,
    m_b: HalfInt,
    q: i32,
) -> Result<T, AngularError> {
    if a.l == b.l + 1 {
        Ok(dipole_element_ls_exact(a, m_a, b, m_b, q)?.to_real())
    } else if b.l == a.l + 1 {
        let v: T = dipole_element_ls_exact(b, m_b, a, m_a, -q)?.to_real();
        Ok(if q % 2 == 0 { v } else { -v })
    } else {
        Err(AngularError::NotDipolePair { l: a.l, j: a.j, l2: b.l, j2: b.j })
    }
}

/// Levels `(r1, r2)` of the Rydberg pair labelled by lower `J` and branch `p`.
///
/// `p = +1`: `J' = J + 1 = L + 3/2`; `p = 0`: `J' = J = L + 1/2`;
/// `p = -1`: `J' = J + 1 = L + 1/2` (so `J = L - 1/2`).
pub fn branch_levels(j: HalfInt, p: i32) -> Result<(FineLevel, FineLevel), AngularError> {
    if !(-1..=1).contains(&p) {
        return Err(AngularError::InvalidBranch(p));
    }
    if j.is_integer() || j.twice() < 1 {
        return Err(AngularError::InvalidFineStructureJ(j));
    }
    let l = if p >= 0 { (j.twice() - 1) / 2 } else { (j.twice() + 1) / 2 } as u32;
    let jp = j + HalfInt::from_int(p.abs());
    Ok((FineLevel::new(l, j)?, FineLevel::new(l + 1, jp)?))
}

/// Square of the closed-form `sqrt((2J+1)(2J'+1)(L+1)) * {6j}` product for
/// branch `p`, together with its Condon-Shortley sign.
fn branch_product(j: HalfInt, p: i32) -> (i8, BigRational) {
    let t = j.twice() as i64;
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match p {
        // sqrt(2J+3) sqrt((2J+1) / (2(2J+2)))
        1 => (-1, r((t + 3) * (t + 1), 2 * (t + 2))),
        -1 => (1, r((t + 3) * (t + 1), 2 * (t + 2))),
        // (1/sqrt(J)) sqrt((2J+1) / (2(2J+2)))
        _ => (1, r(t + 1, t * (t + 2))),
    }
}

/// Angular factor of `<r2, m_J'| r_q |r1, m_J>` for the pair labelled `(J, p)`,
/// radial integral set to one.
///
/// Uses the per-branch closed forms of the `sqrt(...) * {6j}` product. For
/// `p = +1` that product is negative under Condon-Shortley phases; the sign
/// is kept so the result equals the generic Wigner-Eckart evaluation.
pub fn dipole_angular_factor<T: Real>(
    j: HalfInt,
    p: i32,
    m_j: HalfInt,
    m_j_prime: HalfInt,
    q: i32,
) -> Result<T, AngularError> {
    let (_, upper) = branch_levels(j, p)?;
    check_q(q)?;
    check_projection(j, m_j)?;
    check_projection(upper.j, m_j_prime)?;
    if m_j_prime != m_j + HalfInt::from_int(q) {
        return Ok(T::zero());
    }
    let jp = upper.j;
    let three = ThreeJ::new(jp, HalfInt::ONE, j, -m_j_prime, HalfInt::from_int(q), m_j).exact()?;
    let (sign, sq) = branch_product(j, p);
    let twice_exp = (jp + j - m_j_prime - HalfInt::HALF).twice();
    let factor = SignedSqrtRational::new(sign * parity_sign(twice_exp), sq);
    Ok((&three * &factor).to_real())
}
