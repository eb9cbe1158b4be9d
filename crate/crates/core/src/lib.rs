//! Entropic uncertainty, concurrence and entanglement-witness dynamics of a
//! two-qubit Werner state dephased by Ornstein-Uhlenbeck noise.

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod measures;
pub mod noise;
pub mod sweep;
pub mod tensor;

pub use error::{Error, Result};
pub use evolution::{
    averaged_state, dephased_werner, evolve_deterministic, mc_averaged_state, mc_averaged_states, separability_time,
    unitary, werner_state, EvolvedState, McAveragedState, Provenance, WernerParams,
};
pub use measures::{
    concurrence_wootters, concurrence_xstate, entanglement_witness, uncertainty_sides, MeasureRecord, MeasurementPair,
    UncertaintySides,
};
pub use noise::{
    dephasing_factor, ou_autocorrelation, ou_beta, sample_ou_trajectory, AveragingMode, NoiseConfig, NoiseParams,
    OuTrajectory,
};
pub use sweep::{emit_csv, run_mc_validation, run_sweep, Preset, SweepConfig, SweepResult, SweepRow};
pub use tensor::{kron, partial_trace, ComplexMatrix, DensityMatrix4, Dim, Subsystem};
