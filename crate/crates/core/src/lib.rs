//! Quantum-enhanced estimation of an external acceleration with two-mode
//! scalar bosons in a single trap.
//!
//! The crate builds the interacting two-mode Hamiltonian in the Dicke basis,
//! evaluates the dynamical generator `𝓗 = i U† ∂λ U` of `U = e^{-it(H_sys + λJx)}`,
//! and from it the channel QFI (`||𝓗||²_SN`) and the QFI of specific initial
//! states.
//!
//! ```
//! use wellqfi::{dynamical_generator, SpinOperators, SystemParams};
//!
//! let ops = SpinOperators::new(50).unwrap();
//! let params = SystemParams::harmonic(50, 80.0, 1.0, 1.0).unwrap().with_delta_eps(10.0);
//! let gen = dynamical_generator(&params, &ops).unwrap();
//! assert!(gen.cqfi > 0.9 * 2500.0);
//! ```

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod modes;
pub mod operator;
pub mod protocols;
pub mod quadrature;
pub mod spin;

pub use analytic::{cqfi_noninteracting, ideal_qfi};
pub use dynamics::{
    cqfi_upper_bound, decompose, dynamical_generator, evolve, generator_from_hamiltonian,
    qfi_pure_state, seminorm, GeneratorResult, SpectralDecomposition,
};
pub use error::{Error, Result};
pub use hamiltonians::{
    acceleration_hamiltonian, double_well_hamiltonian, single_well_hamiltonian,
    single_well_hamiltonian_renormalized, total_hamiltonian, DoubleWellParams,
};
pub use modes::{
    derive_params, harmonic_mode_integrals, renormalized_q, validity_gamma, ModeIntegrals,
    SystemParams, Validity,
};
pub use operator::{CMatrix, CVector, HermitianOperator, C64};
pub use protocols::{
    beam_splitter, run_protocol, run_protocol_with_generator, ProtocolResult, ProtocolSpec,
    SplitterSign, StateKind,
};
pub use spin::{
    build_spin_operators, degree_of_fragmentation, expectation, fragmented_ground_state,
    spin_coherent_state, variance, DickeState, SpinOperators,
};
