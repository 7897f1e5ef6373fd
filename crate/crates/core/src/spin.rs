//! Collective spin algebra of two bosonic modes in the Dicke basis.
//!
//! Basis vector `k` (for `k = 0..=N`) holds `N - k` bosons in mode 0 and `k`
//! bosons in mode 1, so `Jz |k> = (N/2 - k) |k>`. The mode-0 condensate is the
//! first basis vector.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::operator::{CMatrix, CVector, HermitianOperator, C64};

/// Tolerance on the Euclidean norm of a [`DickeState`].
pub const NORM_TOL: f64 = 1e-12;

/// Window outside `[0, 1]` tolerated for the degree of fragmentation before it
/// is treated as numerical corruption.
pub const FRAGMENTATION_SLACK: f64 = 1e-9;

/// `Jx, Jy, Jz, J0` for `N` bosons, with `Jx²` and `Jy²` cached for reuse by
/// the Hamiltonian builders.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    n_particles: usize,
    jx: HermitianOperator,
    jy: HermitianOperator,
    jz: HermitianOperator,
    j0: HermitianOperator,
    jx2: HermitianOperator,
    jy2: HermitianOperator,
}

impl SpinOperators {
    pub fn new(n_particles: usize) -> Result<Self> {
        build_spin_operators(n_particles)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// `N + 1`.
    pub fn dimension(&self) -> usize {
        self.n_particles + 1
    }

    /// Total spin `j = N/2`.
    pub fn spin(&self) -> f64 {
        self.n_particles as f64 / 2.0
    }

    pub fn jx(&self) -> &HermitianOperator {
        &self.jx
    }

    pub fn jy(&self) -> &HermitianOperator {
        &self.jy
    }

    pub fn jz(&self) -> &HermitianOperator {
        &self.jz
    }

    pub fn j0(&self) -> &HermitianOperator {
        &self.j0
    }

    pub fn jx_squared(&self) -> &HermitianOperator {
        &self.jx2
    }

    pub fn jy_squared(&self) -> &HermitianOperator {
        &self.jy2
    }

    /// `m = N/2 - k` for basis index `k`.
    pub fn magnetic_number(&self, k: usize) -> f64 {
        self.spin() - k as f64
    }

    pub(crate) fn check_state(&self, state: &DickeState) -> Result<()> {
        if state.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: state.dimension(),
            });
        }
        Ok(())
    }
}

/// Matrix element `<j, m+1| J+ |j, m>` at basis index `k`, i.e. `sqrt(k (N - k + 1))`.
fn raising_element(n: usize, k: usize) -> f64 {
    ((k * (n - k + 1)) as f64).sqrt()
}

pub fn build_spin_operators(n_particles: usize) -> Result<SpinOperators> {
    if n_particles == 0 {
        return Err(Error::InvalidInput("at least one particle is required".into()));
    }
    let n = n_particles;
    let dim = n + 1;
    let j = n as f64 / 2.0;

    let mut raising = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        raising[(k - 1, k)] = C64::new(raising_element(n, k), 0.0);
    }
    let lowering = raising.adjoint();
    let jx = HermitianOperator::symmetrized((&raising + &lowering).scale(0.5));
    let jy = HermitianOperator::symmetrized((&raising - &lowering) * C64::new(0.0, -0.5));
    let m: Vec<f64> = (0..dim).map(|k| j - k as f64).collect();
    let jz = HermitianOperator::from_real_diagonal(&m);
    let j0 = HermitianOperator::from_real_diagonal(&vec![j; dim]);
    let jx2 = jx.square();
    let jy2 = jy.square();
    Ok(SpinOperators { n_particles: n, jx, jy, jz, j0, jx2, jy2 })
}

/// Normalized pure state of `N` bosons in two modes, in Dicke-basis amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeState {
    amplitudes: CVector,
}

impl DickeState {
    /// Wraps amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidInput("a two-mode state needs at least 2 amplitudes".into()));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidInput(format!("cannot normalize a vector of norm {norm}")));
        }
        Self::new(amplitudes.unscale(norm))
    }

    /// Dicke basis vector `|k>`.
    pub fn basis(n_particles: usize, k: usize) -> Result<Self> {
        if n_particles == 0 || k > n_particles {
            return Err(Error::InvalidInput(format!(
                "basis index {k} out of range for N = {n_particles}"
            )));
        }
        let mut v = CVector::zeros(n_particles + 1);
        v[k] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_particles(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: other.dimension() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<self|other>|`, equal to 1 iff the states agree up to a global phase.
    pub fn fidelity_amplitude(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Applies a unitary; the result is renormalized after checking that the
    /// norm drifted by less than `1e-10`.
    pub fn transformed(&self, unitary: &CMatrix) -> Result<Self> {
        if unitary.nrows() != self.dimension() || unitary.ncols() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: unitary.nrows() });
        }
        let out = unitary * &self.amplitudes;
        let norm = out.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!("transformation is not unitary: norm became {norm}")));
        }
        Ok(Self { amplitudes: out.unscale(norm) })
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

/// Dicke amplitudes of `[cos(θ/2) a0† + e^{iφ} sin(θ/2) a1†]^N |0,0> / sqrt(N!)`.
fn coherent_amplitudes(n: usize, theta: f64, phi: f64) -> CVector {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let lnf = ln_factorials(n);
    CVector::from_iterator(
        n + 1,
        (0..=n).map(|k| {
            let ln_binom = lnf[n] - lnf[k] - lnf[n - k];
            let magnitude = if c > 0.0 && s > 0.0 {
                (0.5 * ln_binom + (n - k) as f64 * c.ln() + k as f64 * s.ln()).exp()
            } else {
                // 0^0 = 1 picks out the single surviving basis vector.
                (0.5 * ln_binom).exp() * c.powi((n - k) as i32) * s.powi(k as i32)
            };
            C64::from_polar(magnitude, phi * k as f64)
        }),
    )
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidInput(format!("theta = {theta} outside [0, pi]")));
    }
    Ok(())
}

/// Spin coherent state `|θ, φ>` with polar angle `θ ∈ [0, π]` and azimuth `φ ∈ [0, 2π)`.
pub fn spin_coherent_state(n_particles: usize, theta: f64, phi: f64) -> Result<DickeState> {
    if n_particles == 0 {
        return Err(Error::InvalidInput("at least one particle is required".into()));
    }
    check_theta(theta)?;
    if !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::InvalidInput(format!("phi = {phi} outside [0, 2pi)")));
    }
    DickeState::normalized(coherent_amplitudes(n_particles, theta, phi))
}

/// Superposition `|θ, π/2> + i |θ, 3π/2>` of two coherent states, normalized
/// exactly. The two branches overlap by `cos(θ)^N`, so the bare `1/sqrt(2)`
/// prefactor is only asymptotically correct.
pub fn fragmented_ground_state(n_particles: usize, theta: f64) -> Result<DickeState> {
    let upper = spin_coherent_state(n_particles, theta, PI / 2.0)?;
    let lower = spin_coherent_state(n_particles, theta, 3.0 * PI / 2.0)?;
    let sum = upper.amplitudes() + lower.amplitudes() * C64::new(0.0, 1.0);
    DickeState::normalized(sum)
}

/// First moments `(<Jx>, <Jy>, <Jz>)` evaluated directly from the amplitudes.
pub fn spin_moments(state: &DickeState) -> (f64, f64, f64) {
    let n = state.n_particles();
    let c = state.amplitudes();
    let half = n as f64 / 2.0;
    let jz: f64 = c.iter().enumerate().map(|(k, a)| a.norm_sqr() * (half - k as f64)).sum();
    // <J+> = <a0† a1>
    let raising: C64 = (1..=n).map(|k| c[k - 1].conj() * c[k] * raising_element(n, k)).sum();
    (raising.re, raising.im, jz)
}

/// Eigenvalues `(λ0 ≥ λ1)` of the 2x2 single-particle density matrix.
pub fn single_particle_occupations(state: &DickeState) -> (f64, f64) {
    let n = state.n_particles() as f64;
    let (jx, jy, jz) = spin_moments(state);
    let rho00 = n / 2.0 + jz;
    let rho11 = n / 2.0 - jz;
    let coherence = C64::new(jx, jy);
    let mean = 0.5 * (rho00 + rho11);
    let split = (0.25 * (rho00 - rho11).powi(2) + coherence.norm_sqr()).sqrt();
    (mean + split, mean - split)
}

/// `F = 1 - |λ0 - λ1| / N`; `0` for a condensate, `1` for full fragmentation.
pub fn degree_of_fragmentation(state: &DickeState) -> Result<f64> {
    let n = state.n_particles() as f64;
    let (l0, l1) = single_particle_occupations(state);
    let f = 1.0 - (l0 - l1).abs() / n;
    if !f.is_finite() || !(-FRAGMENTATION_SLACK..=1.0 + FRAGMENTATION_SLACK).contains(&f) {
        return Err(Error::Numerical(format!("degree of fragmentation {f} outside [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

fn check_dims(op: &HermitianOperator, state: &DickeState) -> Result<()> {
    if op.dimension() != state.dimension() {
        return Err(Error::DimensionMismatch { expected: op.dimension(), found: state.dimension() });
    }
    Ok(())
}

fn imaginary_tolerance(op: &HermitianOperator) -> f64 {
    let scale = op.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max) * op.dimension() as f64;
    1e-10 * scale.max(1.0)
}

/// `<ψ|A|ψ>`.
pub fn expectation(op: &HermitianOperator, state: &DickeState) -> Result<f64> {
    check_dims(op, state)?;
    let value = state.amplitudes().dotc(&(op.matrix() * state.amplitudes()));
    if value.im.abs() > imaginary_tolerance(op) {
        return Err(Error::Numerical(format!(
            "expectation value has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `<A²> - <A>²`, evaluated as `|| (A - <A>) ψ ||²` so it is never negative.
pub fn variance(op: &HermitianOperator, state: &DickeState) -> Result<f64> {
    let mean = expectation(op, state)?;
    let psi = state.amplitudes();
    let shifted = op.matrix() * psi - psi * C64::new(mean, 0.0);
    Ok(shifted.norm_squared())
}

/// Real amplitudes convenience constructor, mostly for tests and examples.
pub fn state_from_real(amplitudes: &[f64]) -> Result<DickeState> {
    DickeState::normalized(DVector::from_iterator(
        amplitudes.len(),
        amplitudes.iter().map(|&x| C64::new(x, 0.0)),
    ))
}
