use nalgebra::DMatrix;
use num_complex::Complex;

use super::{check_phi, BasisState, TransitionClass};
use crate::angular::{dipole_angular_factor, HalfInt, ThreeJ};
use crate::error::DressingError;
use crate::scalar::Real;
use crate::sop::RfSop;

/// The two SOP-independent pieces of the coupling matrix, one per helicity,
/// with the class prefactor folded in.
///
/// `M(phi) = (cos(phi/2) + sin(phi/2)) B_+ + (cos(phi/2) - sin(phi/2)) B_-`.
#[derive(Clone, Debug)]
pub struct CouplingTemplate<T: Real> {
    cls: TransitionClass,
    b_plus: DMatrix<T>,
    b_minus: DMatrix<T>,
}

impl<T: Real> CouplingTemplate<T> {
    pub fn new(cls: TransitionClass) -> Result<Self, DressingError> {
        let n = cls.dim();
        let j = cls.j();
        let jp = cls.j_prime();
        let abs_p = cls.p().abs();
        // sqrt((2J+1)/(4(J+1))) * sqrt((2J+3)^|p| / J^(1-|p|)), with t = 2J
        let t = T::lit(j.twice() as f64);
        let two = T::lit(2.0);
        let mut pref = ((t + T::one()) / (two * (t + two))).sqrt();
        pref *= if abs_p == 1 { (t + T::lit(3.0)).sqrt() } else { (two / t).sqrt() };

        let three_j = |m1: i32, q: i32, m3_twice: i32| -> Result<T, DressingError> {
            Ok(ThreeJ::new(
                j,
                HalfInt::ONE,
                jp,
                HalfInt::from_twice(m1),
                HalfInt::from_int(q),
                HalfInt::from_twice(m3_twice),
            )
            .value::<T>()?)
        };
        // 1-based index arithmetic, in doubled units:
        //   2(J + 1 - j) = t + 2 - 2j,   2(-3J - |p| - 2 + i) = -3t - 2|p| - 4 + 2i
        let m_r1 = |idx: i32| j.twice() + 2 - 2 * idx;
        let m_r2 = |idx: i32| -3 * j.twice() - 2 * abs_p - 4 + 2 * idx;

        let mut b_plus = DMatrix::zeros(n, n);
        let mut b_minus = DMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let (i, jj) = (r as i32 + 1, c as i32 + 1);
                for (q, target) in [(1, &mut b_plus), (-1, &mut b_minus)] {
                    let v = three_j(m_r1(jj), q, m_r2(i))? + three_j(m_r1(i), q, m_r2(jj))?;
                    target[(r, c)] = pref * v;
                }
            }
        }
        Ok(CouplingTemplate { cls, b_plus, b_minus })
    }

    pub fn class(&self) -> TransitionClass {
        self.cls
    }

    /// Entries at phase angle `phi`.
    pub fn entries(&self, phi: T) -> DMatrix<T> {
        let half = phi / T::lit(2.0);
        let (s, c) = (half.sin(), half.cos());
        &self.b_plus * (c + s) + &self.b_minus * (c - s)
    }

    pub fn at(&self, phi: T) -> Result<CouplingMatrix<T>, DressingError> {
        check_phi(phi)?;
        Ok(CouplingMatrix { cls: self.cls, phi, entries: self.entries(phi), basis: self.cls.basis() })
    }
}

/// Real symmetric angular coupling matrix at one phase angle.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix<T: Real> {
    pub cls: TransitionClass,
    pub phi: T,
    pub entries: DMatrix<T>,
    pub basis: Vec<BasisState>,
}

/// Angular coupling matrix of class `cls` at phase angle `phi` in `[0, 2pi]`.
pub fn coupling_matrix<T: Real>(cls: TransitionClass, phi: T) -> Result<CouplingMatrix<T>, DressingError> {
    CouplingTemplate::new(cls)?.at(phi)
}

/// Dipole matrix elements `<r2 m'| r_q |r1 m>` per helicity, built from
/// the Wigner-Eckart route with unit radial integral.
#[derive(Clone, Debug)]
pub struct OracleTemplate<T: Real> {
    cls: TransitionClass,
    d_plus: DMatrix<T>,
    d_minus: DMatrix<T>,
}

impl<T: Real> OracleTemplate<T> {
    pub fn new(cls: TransitionClass) -> Result<Self, DressingError> {
        let n = cls.dim();
        let basis = cls.basis();
        let mut d_plus = DMatrix::zeros(n, n);
        let mut d_minus = DMatrix::zeros(n, n);
        for (c, lower) in basis.iter().enumerate().take(cls.dim_r1()) {
            for (r, upper) in basis.iter().enumerate().skip(cls.dim_r1()) {
                d_plus[(r, c)] = dipole_angular_factor(cls.j(), cls.p(), lower.m, upper.m, 1)?;
                d_minus[(r, c)] = dipole_angular_factor(cls.j(), cls.p(), lower.m, upper.m, -1)?;
            }
        }
        Ok(OracleTemplate { cls, d_plus, d_minus })
    }

    /// Hermitian coupling `sum_q a_q <r2| r_q |r1>` plus its adjoint.
    pub fn entries(&self, sop: &RfSop<T>) -> DMatrix<Complex<T>> {
        let (ap, am) = (sop.amp_plus(), sop.amp_minus());
        let n = self.cls.dim();
        let mut h = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
        for r in 0..n {
            for c in 0..n {
                let v = ap * self.d_plus[(r, c)] + am * self.d_minus[(r, c)];
                if v.re != T::zero() || v.im != T::zero() {
                    h[(r, c)] += v;
                    h[(c, r)] += v.conj();
                }
            }
        }
        h
    }

    pub fn at(&self, sop: &RfSop<T>) -> OracleMatrix<T> {
        OracleMatrix { cls: self.cls, sop: *sop, entries: self.entries(sop), basis: self.cls.basis() }
    }
}

/// Complex Hermitian coupling built from dipole matrix elements and the
/// complex spherical amplitudes of an arbitrary SOP.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleMatrix<T: Real> {
    pub cls: TransitionClass,
    pub sop: RfSop<T>,
    pub entries: DMatrix<Complex<T>>,
    pub basis: Vec<BasisState>,
}

impl<T: Real> OracleMatrix<T> {
    /// Sorted real eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<T>, DressingError> {
        let dim = self.cls.dim();
        let eig = self
            .entries
            .clone()
            .try_symmetric_eigen(T::default_epsilon(), 10_000)
            .ok_or(DressingError::EigenFailure { dim })?;
        let mut v: Vec<T> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(v)
    }
}

/// Independent construction of the coupling from dipole matrix elements.
pub fn oracle_matrix<T: Real>(cls: TransitionClass, sop: &RfSop<T>) -> Result<OracleMatrix<T>, DressingError> {
    Ok(OracleTemplate::new(cls)?.at(sop))
}
