//! Independent cross-checks of the spectral generator: central differences of
//! the matrix exponential and the closed-form noninteracting channel QFI.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wellqfi::{
    cqfi_noninteracting, dynamical_generator, total_hamiltonian, CMatrix, SpinOperators, SystemParams, C64,
};

/// `e^{-iHt}` by Padé scaling and squaring, independent of the eigensolver.
fn propagator_expm(p: &SystemParams, ops: &SpinOperators) -> CMatrix {
    let h = total_hamiltonian(p, ops).unwrap();
    (h.matrix() * C64::new(0.0, -p.t)).exp()
}

/// `i U†(λ) (U(λ+h) - U(λ-h)) / 2h`.
fn finite_difference_generator(p: &SystemParams, ops: &SpinOperators, step: f64) -> CMatrix {
    let u = propagator_expm(p, ops);
    let plus = propagator_expm(&p.with_lambda(p.lambda_acc + step), ops);
    let minus = propagator_expm(&p.with_lambda(p.lambda_acc - step), ops);
    u.adjoint() * (plus - minus) * C64::new(0.0, 1.0 / (2.0 * step))
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn spectral_generator_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 12;
    let ops = SpinOperators::new(n).unwrap();
    for _ in 0..15 {
        let p = SystemParams::harmonic(n, rng.random_range(0.0..120.0), rng.random_range(0.0..4.0), rng.random_range(0.1..1.5))
            .unwrap()
            .with_delta_eps(rng.random_range(0.0..15.0));
        let spectral = dynamical_generator(&p, &ops).unwrap();
        let fd = finite_difference_generator(&p, &ops, 1e-6);
        let diff = max_abs(&(spectral.generator.matrix() - fd));
        assert!(diff < 1e-5, "max elementwise deviation {diff:e} at {p:?}");
    }
}

#[test]
fn noninteracting_generator_matches_closed_form() {
    let ops = SpinOperators::new(10).unwrap();
    for lambda in [0.1, 0.7, 2.0, 5.0] {
        for delta_eps in [0.1, 1.0, 4.5, 20.0] {
            for t in [0.1, 1.0, 3.7, 10.0] {
                let p = SystemParams::harmonic(10, 0.0, lambda, t).unwrap().with_delta_eps(delta_eps);
                let numeric = dynamical_generator(&p, &ops).unwrap().cqfi;
                let analytic = cqfi_noninteracting(10, lambda, delta_eps, t);
                assert!((numeric / analytic - 1.0).abs() < 1e-8, "{lambda} {delta_eps} {t}: {numeric} vs {analytic}");
            }
        }
    }
}

#[test]
fn zero_acceleration_limit_matches_tiny_lambda_generator() {
    let ops = SpinOperators::new(16).unwrap();
    let (delta_eps, t) = (3.0, 1.3);
    let p = SystemParams::harmonic(16, 0.0, 1e-8, t).unwrap().with_delta_eps(delta_eps);
    let numeric = dynamical_generator(&p, &ops).unwrap().cqfi;
    let limit = 256.0 * 4.0 / (delta_eps * delta_eps) * (t * delta_eps / 2.0).sin().powi(2);
    assert!((numeric / limit - 1.0).abs() < 1e-8);
    assert!((cqfi_noninteracting(16, 0.0, delta_eps, t) - limit).abs() < 1e-12);
}

#[test]
fn noninteracting_time_dependence_is_quadratic_plus_oscillation() {
    // Fit cqfi(t) / N² = a t² + b sin²(r t / 2) with r = sqrt(λ² + δε²) known.
    let (n, lambda, delta_eps) = (20usize, 1.0, 2.5f64);
    let ops = SpinOperators::new(n).unwrap();
    let r = (lambda * lambda + delta_eps * delta_eps).sqrt();
    let times: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
    let values: Vec<f64> = times
        .iter()
        .map(|&t| {
            let p = SystemParams::harmonic(n, 0.0, lambda, t).unwrap().with_delta_eps(delta_eps);
            dynamical_generator(&p, &ops).unwrap().cqfi / (n * n) as f64
        })
        .collect();
    let design = DMatrix::from_fn(times.len(), 2, |i, j| {
        let t = times[i];
        if j == 0 { t * t } else { (0.5 * r * t).sin().powi(2) }
    });
    let rhs = DVector::from_vec(values.clone());
    let coef = design.clone().svd(true, true).solve(&rhs, 1e-14).unwrap();
    let residual = (&design * &coef - rhs).amax();
    assert!(residual < 1e-8, "residual {residual:e}");
    assert!((coef[0] - lambda * lambda / (r * r)).abs() < 1e-9);
    assert!((coef[1] - (2.0 * delta_eps / (r * r)).powi(2)).abs() < 1e-9);
}

#[test]
fn analytic_cqfi_decreases_near_degeneracy() {
    for t in [0.5, 1.0, 2.0] {
        for lambda in [0.5, 1.0, 2.0] {
            assert!(cqfi_noninteracting(50, lambda, 0.01, t) > cqfi_noninteracting(50, lambda, 0.1, t));
        }
    }
}

#[test]
fn analytic_cqfi_is_not_monotone_in_level_spacing() {
    let grid: Vec<f64> = (0..=2000).map(|i| 0.01 * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&de| cqfi_noninteracting(50, 1.0, de, 1.0)).collect();
    let witness = values.windows(2).position(|w| w[1] > w[0]);
    let i = witness.expect("cqfi(δε) should increase somewhere");
    assert!(values[i] < values[i + 1]);
    assert!(grid[i] > 0.0);
}
