//! Closed-form channel QFI without interactions and the ideal-interferometer
//! baseline.

use crate::error::Result;
use crate::spin::{variance, DickeState, SpinOperators};

/// Channel QFI of `λ Jx - δε Jz` after time `t`:
///
/// `N² [ t² λ²/(λ²+δε²) + (2δε/(λ²+δε²))² sin²(t sqrt(λ²+δε²)/2) ]`.
///
/// Returns the continuous limit `N² t²` at `λ = δε = 0`.
pub fn cqfi_noninteracting(n_particles: usize, lambda_acc: f64, delta_eps: f64, t: f64) -> f64 {
    let n2 = (n_particles as f64).powi(2);
    let r2 = lambda_acc * lambda_acc + delta_eps * delta_eps;
    if r2 == 0.0 {
        return n2 * t * t;
    }
    let r = r2.sqrt();
    let oscillating = (2.0 * delta_eps / r2).powi(2) * (0.5 * t * r).sin().powi(2);
    n2 * (t * t * lambda_acc * lambda_acc / r2 + oscillating)
}

/// QFI `4 t² Var(Jx)` under the pure phase-shift dynamics `λ Jx`.
pub fn ideal_qfi(state: &DickeState, t: f64, ops: &SpinOperators) -> Result<f64> {
    ops.check_state(state)?;
    Ok(4.0 * t * t * variance(ops.jx(), state)?)
}
