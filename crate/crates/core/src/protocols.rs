//! Ground-state protocol: prepare a fragmented or coherent state, split it with
//! `e^{-i(π/2)Jz}`, accumulate phase under the interacting Hamiltonian, and
//! report the QFI. The final splitter and measurement do not change the QFI
//! and are not modelled.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::analytic::ideal_qfi;
use crate::dynamics::{dynamical_generator, qfi_pure_state, GeneratorResult};
use crate::error::{Error, Result};
use crate::modes::{validity_gamma, SystemParams};
use crate::operator::{CMatrix, CVector, C64};
use crate::spin::{
    degree_of_fragmentation, fragmented_ground_state, spin_coherent_state, DickeState, SpinOperators,
};

/// Default fragmentation angle, `F ≈ 0.12`.
pub const DEFAULT_THETA: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StateKind {
    #[default]
    Fragmented,
    /// All bosons in mode 0; the fragmentation angle is ignored.
    Coherent,
}

/// Sign of the splitter exponent. `Minus` is `e^{-i(π/2)Jz}`; `Plus` is the
/// rotation produced by free evolution under `-δε Jz` for a time `π/(2δε)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SplitterSign {
    #[default]
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolSpec {
    pub params: SystemParams,
    pub theta: f64,
    pub state_kind: StateKind,
    pub splitter: SplitterSign,
}

impl ProtocolSpec {
    pub fn fragmented(params: SystemParams, theta: f64) -> Self {
        Self { params, theta, state_kind: StateKind::Fragmented, splitter: SplitterSign::Minus }
    }

    pub fn coherent(params: SystemParams) -> Self {
        Self { params, theta: 0.0, state_kind: StateKind::Coherent, splitter: SplitterSign::Minus }
    }

    /// Fragmentation angle actually used.
    pub fn effective_theta(&self) -> f64 {
        match self.state_kind {
            StateKind::Fragmented => self.theta,
            StateKind::Coherent => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(0.0..=PI).contains(&self.effective_theta()) {
            return Err(Error::InvalidInput(format!("theta = {} outside [0, pi]", self.theta)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolResult {
    pub qfi: f64,
    /// `4 t² Var(Jx)` on the same split state.
    pub ideal_qfi_baseline: f64,
    /// Channel QFI of the dynamics, an upper bound on `qfi`.
    pub cqfi_reference: f64,
    pub fragmentation: f64,
}

/// Diagonal unitary `e^{∓i(π/2)Jz}`.
pub fn beam_splitter(ops: &SpinOperators, sign: SplitterSign) -> CMatrix {
    let s = match sign {
        SplitterSign::Minus => -1.0,
        SplitterSign::Plus => 1.0,
    };
    let phases = CVector::from_iterator(
        ops.dimension(),
        (0..ops.dimension()).map(|k| C64::from_polar(1.0, s * FRAC_PI_2 * ops.magnetic_number(k))),
    );
    CMatrix::from_diagonal(&phases)
}

/// State before the splitter.
pub fn prepare_state(spec: &ProtocolSpec) -> Result<DickeState> {
    let n = spec.params.n_particles;
    match spec.state_kind {
        StateKind::Fragmented => fragmented_ground_state(n, spec.theta),
        StateKind::Coherent => spin_coherent_state(n, 0.0, 0.0),
    }
}

pub fn run_protocol(spec: &ProtocolSpec, ops: &SpinOperators) -> Result<ProtocolResult> {
    spec.validate()?;
    let gen = dynamical_generator(&spec.params, ops)?;
    run_protocol_with_generator(spec, ops, &gen)
}

/// As [`run_protocol`], reusing an already computed generator for
/// `spec.params`.
pub fn run_protocol_with_generator(
    spec: &ProtocolSpec,
    ops: &SpinOperators,
    gen: &GeneratorResult,
) -> Result<ProtocolResult> {
    spec.validate()?;
    let validity = validity_gamma(spec.params.g_1d(), spec.params.n_particles)?;
    if !validity.two_mode_ok {
        log::warn!(
            "gamma = {:.3} at g = {}: outside the expected two-mode regime",
            validity.gamma,
            spec.params.g
        );
    }
    let prepared = prepare_state(spec)?;
    ops.check_state(&prepared)?;
    let fragmentation = degree_of_fragmentation(&prepared)?;
    let split = prepared.transformed(&beam_splitter(ops, spec.splitter))?;
    Ok(ProtocolResult {
        qfi: qfi_pure_state(gen, &split)?,
        ideal_qfi_baseline: ideal_qfi(&split, spec.params.t, ops)?,
        cqfi_reference: gen.cqfi,
        fragmentation,
    })
}
