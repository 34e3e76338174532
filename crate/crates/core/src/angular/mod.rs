//! Exact angular-momentum algebra: half-integers, Wigner 3-j and 6-j symbols,
//! and one-electron dipole angular factors.
//!
//! Phases follow the Condon-Shortley convention throughout.

mod dipole;
mod halfint;
mod wigner;

pub use dipole::{branch_levels, dipole_angular_factor, dipole_element, dipole_element_ls_exact, FineLevel};
pub use halfint::HalfInt;
pub use wigner::{triangle, wigner3j, wigner6j, SignedSqrtRational, SixJ, ThreeJ};
