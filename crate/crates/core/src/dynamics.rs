//! Spectral evolution, the dynamical generator `𝓗 = i U† ∂λ U`, and the
//! pure-state and channel quantum Fisher information.

use nalgebra::{DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hamiltonians::total_hamiltonian;
use crate::modes::SystemParams;
use crate::operator::{CMatrix, HermitianOperator, C64};
use crate::spin::{variance, DickeState, SpinOperators};

/// Energy gaps below `DEGENERACY_RTOL · max|E|` are treated as exact
/// degeneracies in the generator.
pub const DEGENERACY_RTOL: f64 = 1e-9;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns). Each eigenvector is phase-fixed so that its largest-modulus
/// component is real and positive.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dimension() - 1]
    }

    /// `V diag(f(E)) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, mut column) in scaled.column_iter_mut().enumerate() {
            column *= f(self.eigenvalues[k]);
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_function(|e| C64::new(e, 0.0))
    }

    /// `e^{-iHt}`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.apply_function(|e| C64::from_polar(1.0, -e * t))
    }

    /// Normalized eigenvector `k` (ascending order).
    pub fn eigenstate(&self, k: usize) -> Result<DickeState> {
        DickeState::normalized(self.eigenvectors.column(k).into_owned())
    }
}

pub fn decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let dim = h.dimension();
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 1000 * dim.max(10))
        .ok_or_else(|| Error::Numerical(format!("eigensolver did not converge ({dim}x{dim})")))?;
    if eig.eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::Numerical("eigensolver produced non-finite eigenvalues".into()));
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        let column = eig.eigenvectors.column(src);
        let (pivot, _) = column
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
        let phase = column[pivot].conj() / column[pivot].norm();
        eigenvectors.set_column(dst, &(column * phase));
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// `e^{-iHt} |ψ>`.
pub fn evolve(h: &HermitianOperator, t: f64, state: &DickeState) -> Result<DickeState> {
    if h.dimension() != state.dimension() {
        return Err(Error::DimensionMismatch { expected: h.dimension(), found: state.dimension() });
    }
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!("t = {t} is not finite")));
    }
    state.transformed(&decompose(h)?.propagator(t))
}

/// Max minus min eigenvalue.
pub fn seminorm(op: &HermitianOperator) -> Result<f64> {
    let spectrum = decompose(op)?;
    Ok(spectrum.max_eigenvalue() - spectrum.min_eigenvalue())
}

/// The dynamical generator with its spectrum and the channel QFI.
#[derive(Clone, Debug)]
pub struct GeneratorResult {
    pub generator: HermitianOperator,
    /// `λmax(𝓗) - λmin(𝓗)`.
    pub seminorm: f64,
    /// Channel QFI, `seminorm²`.
    pub cqfi: f64,
    spectrum: SpectralDecomposition,
}

impl GeneratorResult {
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Equal superposition of the extremal eigenvectors of `𝓗`, which
    /// saturates the channel QFI.
    pub fn optimal_state(&self) -> Result<DickeState> {
        let v = self.spectrum.eigenvectors();
        let last = self.spectrum.dimension() - 1;
        DickeState::normalized(v.column(0) + v.column(last))
    }
}

/// `(e^{iωt} - 1) / (iω)`, written as `t e^{iωt/2} sin(ωt/2)/(ωt/2)` so that it
/// stays accurate as `ω → 0`.
fn phase_integral(omega: f64, t: f64) -> C64 {
    let x = 0.5 * omega * t;
    let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
    C64::from_polar(t * sinc, x)
}

/// `∫₀ᵗ e^{iHs} (∂λH) e^{-iHs} ds` for a Hamiltonian `h` with λ-derivative
/// `derivative`, evaluated in the eigenbasis of `h`.
pub fn generator_from_hamiltonian(
    h: &HermitianOperator,
    derivative: &HermitianOperator,
    t: f64,
) -> Result<GeneratorResult> {
    if h.dimension() != derivative.dimension() {
        return Err(Error::DimensionMismatch { expected: h.dimension(), found: derivative.dimension() });
    }
    let spectrum = decompose(h)?;
    let energies = spectrum.eigenvalues();
    let v = spectrum.eigenvectors();
    let scale = energies.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let tol = DEGENERACY_RTOL * scale;

    let mut in_eigenbasis = v.adjoint() * derivative.matrix() * v;
    for l in 0..spectrum.dimension() {
        for k in 0..spectrum.dimension() {
            let omega = energies[k] - energies[l];
            let factor = if omega.abs() <= tol { C64::new(t, 0.0) } else { phase_integral(omega, t) };
            in_eigenbasis[(k, l)] *= factor;
        }
    }
    let generator = HermitianOperator::symmetrized(v * in_eigenbasis * v.adjoint());
    let gen_spectrum = decompose(&generator)?;
    let seminorm = gen_spectrum.max_eigenvalue() - gen_spectrum.min_eigenvalue();
    Ok(GeneratorResult { generator, seminorm, cqfi: seminorm * seminorm, spectrum: gen_spectrum })
}

/// Generator for `H(λ) = H_sys + λ Jx` at the parameters `p`.
pub fn dynamical_generator(p: &SystemParams, ops: &SpinOperators) -> Result<GeneratorResult> {
    p.validate()?;
    let h = total_hamiltonian(p, ops)?;
    generator_from_hamiltonian(&h, ops.jx(), p.t)
}

/// `4 (<𝓗²> - <𝓗>²)` on the initial state.
pub fn qfi_pure_state(gen: &GeneratorResult, state: &DickeState) -> Result<f64> {
    Ok(4.0 * variance(&gen.generator, state)?)
}

/// Heisenberg limit `t² ||Jx||²_SN = N² t²`.
pub fn cqfi_upper_bound(n_particles: usize, t: f64) -> f64 {
    let n = n_particles as f64;
    n * n * t * t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::max_abs_diff;
    use crate::spin::{build_spin_operators, expectation, spin_coherent_state};
    use std::f64::consts::PI;

    #[test]
    fn decompose_sorts_eigenvalues() {
        let h = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let d = decompose(&h).unwrap();
        assert_eq!(d.eigenvalues().as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn jx_spectrum_for_two_particles() {
        let ops = build_spin_operators(2).unwrap();
        let d = decompose(ops.jx()).unwrap();
        for (e, expected) in d.eigenvalues().iter().zip([-1.0, 0.0, 1.0]) {
            assert!((e - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_fixing_makes_pivot_real_positive() {
        let ops = build_spin_operators(6).unwrap();
        let h = &ops.jx().scaled(0.3) + &ops.jy().scaled(1.1);
        let d = decompose(&h).unwrap();
        for column in d.eigenvectors().column_iter() {
            let pivot = column.iter().fold(C64::new(0.0, 0.0), |b, z| if z.norm() > b.norm() { *z } else { b });
            assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
        }
        assert!(max_abs_diff(&d.reconstruct(), h.matrix()) < 1e-12);
    }

    #[test]
    fn evolve_identity_at_zero_time() {
        let ops = build_spin_operators(5).unwrap();
        let s = spin_coherent_state(5, 0.8, 0.3).unwrap();
        let out = evolve(ops.jx(), 0.0, &s).unwrap();
        assert!(max_abs_diff(&CMatrix::from_column_slice(6, 1, out.amplitudes().as_slice()),
            &CMatrix::from_column_slice(6, 1, s.amplitudes().as_slice())) < 1e-14);
    }

    #[test]
    fn full_jz_turn_is_identity_for_even_n() {
        let ops = build_spin_operators(8).unwrap();
        let s = spin_coherent_state(8, 1.2, 0.4).unwrap();
        let out = evolve(ops.jz(), 2.0 * PI, &s).unwrap();
        assert!((out.fidelity_amplitude(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rabi_rotation_of_coherent_state() {
        let n = 30;
        let ops = build_spin_operators(n).unwrap();
        let s = spin_coherent_state(n, 0.0, 0.0).unwrap();
        let lambda = 0.7;
        let h = acceleration(lambda, &ops);
        for t in [0.3, 1.0, 2.9] {
            let out = evolve(&h, t, &s).unwrap();
            let jz = expectation(ops.jz(), &out).unwrap();
            assert!((jz - n as f64 / 2.0 * (lambda * t).cos()).abs() < 1e-8);
        }
    }

    fn acceleration(lambda: f64, ops: &SpinOperators) -> HermitianOperator {
        crate::hamiltonians::acceleration_hamiltonian(lambda, ops)
    }

    #[test]
    fn ideal_protocol_generator() {
        let n = 10;
        let ops = build_spin_operators(n).unwrap();
        let p = SystemParams::harmonic(n, 0.0, 1.0, 1.7).unwrap().with_delta_eps(0.0);
        let gen = dynamical_generator(&p, &ops).unwrap();
        assert!(gen.generator.max_abs_diff(&ops.jx().scaled(1.7)) < 1e-12);
        assert!((gen.cqfi / cqfi_upper_bound(n, 1.7) - 1.0).abs() < 1e-12);
        assert_eq!(cqfi_upper_bound(50, 1.0), 2500.0);
        assert_eq!(cqfi_upper_bound(1, 2.0), 4.0);
    }

    #[test]
    fn qfi_of_eigenvector_and_optimal_state() {
        let ops = build_spin_operators(12).unwrap();
        let p = SystemParams::harmonic(12, 40.0, 1.0, 1.0).unwrap().with_delta_eps(5.0);
        let gen = dynamical_generator(&p, &ops).unwrap();
        let eigen = gen.spectrum().eigenstate(4).unwrap();
        assert!(qfi_pure_state(&gen, &eigen).unwrap() < 1e-8);
        let best = qfi_pure_state(&gen, &gen.optimal_state().unwrap()).unwrap();
        assert!((best / gen.cqfi - 1.0).abs() < 1e-8);
    }

    #[test]
    fn phase_integral_limits() {
        let z = phase_integral(1e-12, 2.0);
        assert!((z - C64::new(2.0, 0.0)).norm() < 1e-11);
        let omega: f64 = 0.9;
        let t: f64 = 3.0;
        let direct = (C64::from_polar(1.0, omega * t) - 1.0) / C64::new(0.0, omega);
        assert!((phase_integral(omega, t) - direct).norm() < 1e-14);
        assert_eq!(phase_integral(3.0, 0.0), C64::new(0.0, 0.0));
    }

    #[test]
    fn generator_rejects_invalid_params() {
        let ops = build_spin_operators(4).unwrap();
        let mut p = SystemParams::harmonic(4, 1.0, 1.0, 1.0).unwrap();
        p.xi = 0.5;
        assert!(dynamical_generator(&p, &ops).is_err());
        let ops5 = build_spin_operators(5).unwrap();
        assert!(dynamical_generator(&SystemParams::harmonic(4, 1.0, 1.0, 1.0).unwrap(), &ops5).is_err());
    }
}
