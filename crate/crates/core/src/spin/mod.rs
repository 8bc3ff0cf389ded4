//! Two-spin NMR emulator: deviation density matrices driven by pulse programs.

mod density;
mod experiment;
mod system;

pub use density::{
    apply_delay, apply_gradient_crush, apply_rf, delay_unitary, dephasing_factor, rf_unitary,
    DeviationMatrix,
};
pub use experiment::{
    experiment_tvd, ideal_populations, interpret, preparation_sequence, prepare_pseudo_pure,
    read_populations, read_populations_with_tolerance, run_experiment, sequence_unitary,
    walk_sequence, walk_time, PopulationReadout, BARE_ECHO_WALK_SEQUENCE, MAX_WALK_INDEX,
    NOISY_READOUT_TOLERANCE, PREPARATION_SEQUENCE, STRICT_READOUT_TOLERANCE, WALK_SEQUENCE,
};
pub use system::{NoiseModel, SpinSystem};
