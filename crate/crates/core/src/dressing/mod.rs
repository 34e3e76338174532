//! RF-dressed Rydberg manifolds: the angular coupling matrix, its spectrum
//! as a function of the phase angle, and the analytic envelope formulas.
//!
//! Basis bookkeeping: rows `0..2J+1` are `r1` states with `m = J, J-1, ..., -J`,
//! rows `2J+1..dim` are `r2` states with `m' = J', ..., -J'`. This is the
//! ordering implied by the raw index arithmetic of the coupling-matrix
//! formula, whose entries reference `m = J + 1 - j` and `m' = 3J + |p| + 2 - i`
//! for 1-based `i, j`.

mod envelopes;
mod matrix;
mod spectrum;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angular::{branch_levels, FineLevel, HalfInt};
use crate::error::{AngularError, DressingError};

pub use envelopes::{envelopes_approx, envelopes_exact, numeric_envelopes, EnvelopeKind, EnvelopePair};
pub use matrix::{coupling_matrix, oracle_matrix, CouplingMatrix, CouplingTemplate, OracleMatrix, OracleTemplate};
pub use spectrum::{
    closed_form_eigenvalues_half, count_distinct, dressed_states, eigen_spectrum, eigen_spectrum_of, spectrogram,
    DistinctEigenvalue, DressedStates, EigenSpectrum, DEFAULT_DEGENERACY_TOL,
};

/// Resonantly coupled Rydberg pair labelled by the lower `J` and the branch
/// `p`, with `J' = J + |p|`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawClass", into = "RawClass")]
pub struct TransitionClass {
    j: HalfInt,
    p: i32,
}

#[derive(Serialize, Deserialize)]
struct RawClass {
    #[serde(rename = "J2")]
    j2: i32,
    p: i32,
}

impl TryFrom<RawClass> for TransitionClass {
    type Error = AngularError;
    fn try_from(raw: RawClass) -> Result<Self, Self::Error> {
        TransitionClass::from_twice(raw.j2, raw.p)
    }
}

impl From<TransitionClass> for RawClass {
    fn from(c: TransitionClass) -> Self {
        RawClass { j2: c.j.twice(), p: c.p }
    }
}

/// Which Rydberg manifold a basis state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    R1,
    R2,
}

/// One row of the coupling matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub manifold: Manifold,
    pub m: HalfInt,
}

impl TransitionClass {
    pub const HALF_ZERO: TransitionClass = TransitionClass { j: HalfInt::HALF, p: 0 };
    pub const HALF_PLUS: TransitionClass = TransitionClass { j: HalfInt::HALF, p: 1 };
    pub const THREE_HALF_ZERO: TransitionClass = TransitionClass { j: HalfInt::THREE_HALVES, p: 0 };
    pub const THREE_HALF_PLUS: TransitionClass = TransitionClass { j: HalfInt::THREE_HALVES, p: 1 };

    /// The four classes with experimental spectrograms, in hierarchy order.
    pub const EXPERIMENTAL: [TransitionClass; 4] =
        [Self::HALF_ZERO, Self::HALF_PLUS, Self::THREE_HALF_ZERO, Self::THREE_HALF_PLUS];

    pub fn new(j: HalfInt, p: i32) -> Result<Self, AngularError> {
        branch_levels(j, p)?;
        Ok(TransitionClass { j, p })
    }

    pub fn from_twice(j2: i32, p: i32) -> Result<Self, AngularError> {
        Self::new(HalfInt::from_twice(j2), p)
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn p(&self) -> i32 {
        self.p
    }

    pub fn j_prime(&self) -> HalfInt {
        self.j + HalfInt::from_int(self.p.abs())
    }

    pub fn dim_r1(&self) -> usize {
        self.j.multiplicity()
    }

    pub fn dim_r2(&self) -> usize {
        self.j_prime().multiplicity()
    }

    pub fn dim(&self) -> usize {
        self.dim_r1() + self.dim_r2()
    }

    /// Number of eigenvalues pinned at zero for every SOP (rank deficit of
    /// the off-diagonal block).
    pub fn structural_zeros(&self) -> usize {
        self.dim_r2() - self.dim_r1()
    }

    /// Fine-structure levels `(r1, r2)`.
    pub fn levels(&self) -> (FineLevel, FineLevel) {
        branch_levels(self.j, self.p).expect("validated at construction")
    }

    pub fn basis(&self) -> Vec<BasisState> {
        let r1 = self.j.projections().rev().map(|m| BasisState { manifold: Manifold::R1, m });
        let r2 = self.j_prime().projections().rev().map(|m| BasisState { manifold: Manifold::R2, m });
        r1.chain(r2).collect()
    }

    /// Row index of `(manifold, m)`, if present.
    pub fn index_of(&self, manifold: Manifold, m: HalfInt) -> Option<usize> {
        let (j, offset) = match manifold {
            Manifold::R1 => (self.j, 0),
            Manifold::R2 => (self.j_prime(), self.dim_r1()),
        };
        if !j.same_parity(m) || m.abs() > j {
            return None;
        }
        Some(offset + ((j - m).twice() / 2) as usize)
    }

    /// True for the classes with closed-form inversion formulas.
    pub fn is_invertible(&self) -> bool {
        *self == Self::HALF_ZERO || (self.j == HalfInt::THREE_HALVES && self.p != 0)
    }
}

impl fmt::Debug for TransitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TransitionClass({self})")
    }
}

impl fmt::Display for TransitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.p {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        write!(f, "{}^{}", self.j, sign)
    }
}

pub(crate) fn check_phi<T: crate::scalar::Real>(phi: T) -> Result<(), DressingError> {
    let slack = T::lit(1e-12);
    if !phi.is_finite() || phi < -slack || phi > T::two_pi() + slack {
        return Err(DressingError::PhiOutOfRange(phi.as_f64()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let dims: Vec<usize> = TransitionClass::EXPERIMENTAL.iter().map(|c| c.dim()).collect();
        assert_eq!(dims, vec![4, 6, 8, 10]);
        assert_eq!(TransitionClass::THREE_HALF_PLUS.j_prime(), HalfInt::from_twice(5));
        assert_eq!(TransitionClass::from_twice(3, -1).unwrap().dim(), 10);
    }

    #[test]
    fn invalid_classes() {
        assert!(TransitionClass::from_twice(0, 0).is_err());
        assert!(TransitionClass::from_twice(2, 0).is_err());
        assert!(TransitionClass::from_twice(1, 2).is_err());
        assert!(TransitionClass::from_twice(-1, 0).is_err());
    }

    #[test]
    fn basis_order_and_lookup() {
        let c = TransitionClass::HALF_PLUS;
        let b = c.basis();
        assert_eq!(b.len(), 6);
        assert_eq!(b[0], BasisState { manifold: Manifold::R1, m: HalfInt::HALF });
        assert_eq!(b[2], BasisState { manifold: Manifold::R2, m: HalfInt::THREE_HALVES });
        for (k, s) in b.iter().enumerate() {
            assert_eq!(c.index_of(s.manifold, s.m), Some(k));
        }
        assert_eq!(c.index_of(Manifold::R1, HalfInt::THREE_HALVES), None);
    }

    #[test]
    fn serde_uses_doubled_j() {
        let s = serde_json::to_string(&TransitionClass::THREE_HALF_PLUS).unwrap();
        assert_eq!(s, r#"{"J2":3,"p":1}"#);
        let c: TransitionClass = serde_json::from_str(r#"{"J2":1,"p":0}"#).unwrap();
        assert_eq!(c, TransitionClass::HALF_ZERO);
        assert!(serde_json::from_str::<TransitionClass>(r#"{"J2":0,"p":0}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(TransitionClass::THREE_HALF_PLUS.to_string(), "3/2^+");
        assert_eq!(TransitionClass::HALF_ZERO.to_string(), "1/2^0");
    }
}
