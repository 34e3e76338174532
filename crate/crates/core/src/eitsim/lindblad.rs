//! Stationary states of Lindblad generators whose jump operators are all of
//! the form `sqrt(rate) |to><from|`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::SimError;
use crate::scalar::Real;

type C<T> = Complex<T>;

/// Jump operator `sqrt(rate) |to><from|`; `from == to` is pure dephasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump<T> {
    pub from: usize,
    pub to: usize,
    pub rate: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyStateOptions<T> {
    /// Smallest admissible `min |U_ii| / max |U_ii|` of the LU factor.
    pub pivot_tol: T,
    /// Largest admissible max-abs entry of `L(rho)`.
    pub residual_tol: T,
}

impl<T: Real> Default for SteadyStateOptions<T> {
    fn default() -> Self {
        SteadyStateOptions { pivot_tol: T::lit(1e-12), residual_tol: T::lit(1e-9) }
    }
}

#[derive(Clone, Debug)]
pub struct SteadyState<T: Real> {
    pub rho: DMatrix<C<T>>,
    /// Max-abs entry of `L(rho)`.
    pub residual: T,
    pub pivot_ratio: T,
}

impl<T: Real> SteadyState<T> {
    pub fn trace(&self) -> T {
        (0..self.rho.nrows()).map(|k| self.rho[(k, k)].re).fold(T::zero(), |a, b| a + b)
    }

    pub fn min_eigenvalue(&self) -> T {
        let eig = self.rho.clone().symmetric_eigen();
        eig.eigenvalues.iter().copied().fold(T::max_value().expect("bounded"), |a, b| a.min(b))
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> T {
        (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm_sqr().sqrt()).fold(T::zero(), |a, b| a.max(b))
    }
}

/// `L(rho) = -i [H, rho] + sum_j (L_j rho L_j^+ - {L_j^+ L_j, rho} / 2)`.
pub fn lindblad_apply<T: Real>(h: &DMatrix<C<T>>, jumps: &[Jump<T>], rho: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let i = C::new(T::zero(), T::one());
    let mut out = (h * rho - rho * h) * (-i);
    let loss = loss_rates(h.nrows(), jumps);
    let half = T::lit(0.5);
    for r in 0..rho.nrows() {
        for c in 0..rho.ncols() {
            out[(r, c)] -= rho[(r, c)] * ((loss[r] + loss[c]) * half);
        }
    }
    for j in jumps {
        out[(j.to, j.to)] += rho[(j.from, j.from)] * j.rate;
    }
    out
}

fn loss_rates<T: Real>(n: usize, jumps: &[Jump<T>]) -> Vec<T> {
    let mut loss = vec![T::zero(); n];
    for j in jumps {
        loss[j.from] += j.rate;
    }
    loss
}

/// Real coordinates of a Hermitian matrix: diagonal first, then
/// `(Re, Im)` of each strictly upper entry in row-major order.
struct RealLayout {
    n: usize,
    pair: Vec<usize>,
}

impl RealLayout {
    fn new(n: usize) -> Self {
        let mut pair = vec![usize::MAX; n * n];
        let mut next = n;
        for k in 0..n {
            for l in k + 1..n {
                pair[k * n + l] = next;
                next += 2;
            }
        }
        RealLayout { n, pair }
    }

    fn size(&self) -> usize {
        self.n * self.n
    }

    fn to_real<T: Real>(&self, m: &DMatrix<C<T>>, out: &mut [T]) {
        let n = self.n;
        for k in 0..n {
            out[k] = m[(k, k)].re;
            for l in k + 1..n {
                let p = self.pair[k * n + l];
                out[p] = m[(k, l)].re;
                out[p + 1] = m[(k, l)].im;
            }
        }
    }

    fn to_matrix<T: Real>(&self, x: &DVector<T>) -> DMatrix<C<T>> {
        let n = self.n;
        DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C::new(x[r], T::zero())
            } else {
                let (k, l) = if r < c { (r, c) } else { (c, r) };
                let p = self.pair[k * n + l];
                let z = C::new(x[p], x[p + 1]);
                if r < c {
                    z
                } else {
                    z.conj()
                }
            }
        })
    }
}

/// Unique stationary state with unit trace.
///
/// The generator is assembled in the real Hermitian coordinates, the
/// population equation of state 0 is replaced by the trace condition, and
/// the system is solved by LU.
pub fn steady_state<T: Real>(
    h: &DMatrix<C<T>>,
    jumps: &[Jump<T>],
    opts: &SteadyStateOptions<T>,
) -> Result<SteadyState<T>, SimError> {
    let n = h.nrows();
    if h.ncols() != n || n == 0 {
        return Err(SimError::DimensionMismatch(format!("Hamiltonian is {}x{}", h.nrows(), h.ncols())));
    }
    for j in jumps {
        if j.from >= n || j.to >= n {
            return Err(SimError::DimensionMismatch(format!("jump {} -> {} outside a {n}-state space", j.from, j.to)));
        }
        if !(j.rate >= T::zero()) || !j.rate.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "jump rate {} is not a finite non-negative number",
                j.rate
            )));
        }
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SimError::InvalidParameter("Hamiltonian has non-finite entries".into()));
    }

    let layout = RealLayout::new(n);
    let big = layout.size();
    let loss = loss_rates(n, jumps);
    let zero = C::new(T::zero(), T::zero());
    let i = C::new(T::zero(), T::one());
    let half = T::lit(0.5);
    let mut gen = DMatrix::<T>::zeros(big, big);
    let mut work = DMatrix::from_element(n, n, zero);
    let mut column = vec![T::zero(); big];

    let mut add_column = |col: usize, entries: &[(usize, usize, C<T>)], gen: &mut DMatrix<T>| {
        work.fill(zero);
        for &(r, c, v) in entries {
            // -i (H B - B H)
            for k in 0..n {
                work[(k, c)] -= i * h[(k, r)] * v;
                work[(r, k)] += i * v * h[(c, k)];
            }
            work[(r, c)] -= v * ((loss[r] + loss[c]) * half);
            if r == c {
                for j in jumps.iter().filter(|j| j.from == r) {
                    work[(j.to, j.to)] += v * j.rate;
                }
            }
        }
        layout.to_real(&work, &mut column);
        gen.column_mut(col).copy_from_slice(&column);
    };

    let one = C::new(T::one(), T::zero());
    for k in 0..n {
        add_column(k, &[(k, k, one)], &mut gen);
    }
    for k in 0..n {
        for l in k + 1..n {
            let p = layout.pair[k * n + l];
            add_column(p, &[(k, l, one), (l, k, one)], &mut gen);
            add_column(p + 1, &[(k, l, i), (l, k, -i)], &mut gen);
        }
    }

    for c in 0..big {
        gen[(0, c)] = if c < n { T::one() } else { T::zero() };
    }
    let mut rhs = DVector::<T>::zeros(big);
    rhs[0] = T::one();

    let lu = gen.lu();
    let (mut lo, mut hi) = (T::max_value().expect("bounded"), T::zero());
    let u = lu.u();
    for k in 0..big {
        let d = u[(k, k)].abs();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let pivot_ratio = if hi > T::zero() { lo / hi } else { T::zero() };
    if !(pivot_ratio > opts.pivot_tol) {
        return Err(SimError::NonUniqueSteadyState { pivot_ratio: pivot_ratio.as_f64() });
    }
    let x = lu.solve(&rhs).ok_or(SimError::NonUniqueSteadyState { pivot_ratio: pivot_ratio.as_f64() })?;
    let rho = layout.to_matrix(&x);
    let residual = lindblad_apply(h, jumps, &rho).iter().map(|z| z.norm_sqr().sqrt()).fold(T::zero(), |a, b| a.max(b));
    if !(residual <= opts.residual_tol) {
        return Err(SimError::Residual(residual.as_f64()));
    }
    Ok(SteadyState { rho, residual, pivot_ratio })
}
