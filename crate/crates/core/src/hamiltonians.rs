//! Hamiltonians of the single-well model, the acceleration perturbation, and
//! the double-well comparator.

use crate::error::{Error, Result};
use crate::modes::{renormalized_q, SystemParams};
use crate::operator::HermitianOperator;
use crate::spin::SpinOperators;

/// Parameters of `δε Jz + Ω Jx + u Jz²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleWellParams {
    pub delta_eps: f64,
    /// Tunneling rate.
    pub omega: f64,
    /// On-site interaction.
    pub u: f64,
}

fn check_ops(p: &SystemParams, ops: &SpinOperators) -> Result<()> {
    if ops.n_particles() != p.n_particles {
        return Err(Error::DimensionMismatch {
            expected: p.n_particles + 1,
            found: ops.dimension(),
        });
    }
    Ok(())
}

/// Nonlinear part `Jx² + ξ Jy²`.
fn nonlinear_term(xi: f64, ops: &SpinOperators) -> HermitianOperator {
    ops.jx_squared() + &ops.jy_squared().scaled(xi)
}

/// `-δε Jz + g [ (N-1)/(2N) ΔA Jz + (η/N)(Jx² + ξ Jy²) ]`.
pub fn single_well_hamiltonian(p: &SystemParams, ops: &SpinOperators) -> Result<HermitianOperator> {
    check_ops(p, ops)?;
    let n = p.n_particles as f64;
    let single = ops.jz().scaled(-p.delta_eps);
    let renorm = ops.jz().scaled((n - 1.0) / (2.0 * n) * p.delta_a);
    let nonlinear = nonlinear_term(p.xi, ops).scaled(p.eta / n);
    Ok(&single + &(&renorm + &nonlinear).scaled(p.g))
}

/// The same Hamiltonian written as `q Jz + (η g / N)(Jx² + ξ Jy²)`.
pub fn single_well_hamiltonian_renormalized(
    p: &SystemParams,
    ops: &SpinOperators,
) -> Result<HermitianOperator> {
    check_ops(p, ops)?;
    let n = p.n_particles as f64;
    let linear = ops.jz().scaled(renormalized_q(p));
    Ok(&linear + &nonlinear_term(p.xi, ops).scaled(p.eta * p.g / n))
}

/// `λ Jx`.
pub fn acceleration_hamiltonian(lambda_acc: f64, ops: &SpinOperators) -> HermitianOperator {
    ops.jx().scaled(lambda_acc)
}

pub fn double_well_hamiltonian(dw: &DoubleWellParams, ops: &SpinOperators) -> HermitianOperator {
    let jz2 = ops.jz().square();
    &(&ops.jz().scaled(dw.delta_eps) + &ops.jx().scaled(dw.omega)) + &jz2.scaled(dw.u)
}

/// Phase-accumulation Hamiltonian `H_sys + λ Jx`; its λ-derivative is `Jx`.
pub fn total_hamiltonian(p: &SystemParams, ops: &SpinOperators) -> Result<HermitianOperator> {
    let sys = single_well_hamiltonian(p, ops)?;
    Ok(&sys + &acceleration_hamiltonian(p.lambda_acc, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{hermiticity_defect, max_abs_diff, CMatrix};
    use crate::spin::build_spin_operators;

    fn harmonic(n: usize, g: f64, delta_eps: f64, lambda: f64) -> SystemParams {
        SystemParams::harmonic(n, g, lambda, 1.0).unwrap().with_delta_eps(delta_eps)
    }

    #[test]
    fn noninteracting_is_diagonal() {
        let ops = build_spin_operators(6).unwrap();
        let h = single_well_hamiltonian(&harmonic(6, 0.0, 2.5, 0.0), &ops).unwrap();
        assert_eq!(h.max_abs_diff(&ops.jz().scaled(-2.5)), 0.0);
    }

    #[test]
    fn both_forms_agree_at_q_near_zero() {
        let ops = build_spin_operators(50).unwrap();
        let p = harmonic(50, 80.0, 10.0, 0.0);
        assert!((p.q() + 0.2).abs() < 1e-12);
        let a = single_well_hamiltonian(&p, &ops).unwrap();
        let b = single_well_hamiltonian_renormalized(&p, &ops).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn isotropic_nonlinearity_commutes_with_jz() {
        let n = 8;
        let ops = build_spin_operators(n).unwrap();
        let p = SystemParams {
            n_particles: n,
            g: n as f64,
            delta_eps: 1.7,
            delta_a: 0.0,
            eta: -1.0,
            xi: 1.0,
            lambda_acc: 0.0,
            t: 1.0,
        };
        let h = single_well_hamiltonian(&p, &ops).unwrap();
        let j = ops.spin();
        let casimir = HermitianOperator::identity(n + 1).scaled(j * (j + 1.0));
        let expected = &ops.jz().scaled(-1.7) - &(&casimir - &ops.jz().square());
        assert!(h.max_abs_diff(&expected) < 1e-12);
        let c = h.commutator(ops.jz());
        assert!(max_abs_diff(&c, &CMatrix::zeros(n + 1, n + 1)) < 1e-10);
    }

    #[test]
    fn acceleration_examples() {
        let ops = build_spin_operators(2).unwrap();
        assert_eq!(acceleration_hamiltonian(0.0, &ops).max_abs_diff(&HermitianOperator::zeros(3)), 0.0);
        assert_eq!(acceleration_hamiltonian(1.0, &ops).max_abs_diff(ops.jx()), 0.0);
        let lambda = 2.0 * 1.0 * std::f64::consts::FRAC_1_SQRT_2;
        let h = acceleration_hamiltonian(lambda, &ops);
        assert!(h.max_abs_diff(&ops.jx().scaled(2f64.sqrt())) < 1e-12);
    }

    #[test]
    fn double_well_examples() {
        let ops = build_spin_operators(5).unwrap();
        let plain = double_well_hamiltonian(&DoubleWellParams { delta_eps: 0.3, omega: 0.0, u: 0.0 }, &ops);
        assert_eq!(plain.max_abs_diff(&ops.jz().scaled(0.3)), 0.0);
        let tunnel = double_well_hamiltonian(&DoubleWellParams { delta_eps: 0.0, omega: 1.2, u: 0.0 }, &ops);
        assert!(tunnel.max_abs_diff(&acceleration_hamiltonian(1.2, &ops)) < 1e-15);

        let dw = DoubleWellParams { delta_eps: 0.3, omega: 0.8, u: 2.0 };
        let h = double_well_hamiltonian(&dw, &ops);
        let lhs = h.commutator(ops.jz());
        let rhs = ops.jx().commutator(ops.jz()) * nalgebra::Complex::new(0.8, 0.0);
        assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
        let interaction = ops.jz().square().scaled(2.0);
        assert!(max_abs_diff(&interaction.commutator(ops.jz()), &CMatrix::zeros(6, 6)) < 1e-10);
    }

    #[test]
    fn total_hamiltonian_examples() {
        let ops = build_spin_operators(4).unwrap();
        let p = harmonic(4, 0.0, 3.0, 0.7);
        let h = total_hamiltonian(&p, &ops).unwrap();
        let expected = &ops.jx().scaled(0.7) - &ops.jz().scaled(3.0);
        assert!(h.max_abs_diff(&expected) < 1e-15);

        let h0 = total_hamiltonian(&p.with_lambda(0.0), &ops).unwrap();
        assert_eq!(h0.max_abs_diff(&ops.jz().scaled(-3.0)), 0.0);

        let pg = harmonic(4, 35.0, 3.0, 0.7);
        for step in [1e-3, 0.5, 2.0] {
            let plus = total_hamiltonian(&pg.with_lambda(0.7 + step), &ops).unwrap();
            let minus = total_hamiltonian(&pg.with_lambda(0.7 - step), &ops).unwrap();
            let derivative = (&plus - &minus).scaled(0.5 / step);
            assert!(derivative.max_abs_diff(ops.jx()) < 1e-9);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let ops = build_spin_operators(4).unwrap();
        assert!(single_well_hamiltonian(&harmonic(5, 1.0, 1.0, 1.0), &ops).is_err());
    }

    #[test]
    fn hamiltonians_are_hermitian() {
        let ops = build_spin_operators(20).unwrap();
        let h = total_hamiltonian(&harmonic(20, 150.0, 10.0, 1.0), &ops).unwrap();
        assert_eq!(hermiticity_defect(h.matrix()), 0.0);
    }
}
