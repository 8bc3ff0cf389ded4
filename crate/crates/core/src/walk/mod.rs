//! Continuous-time classical and quantum walks on graphs.

mod evolve;
mod graph;
mod measures;
mod pauli;
mod state;

pub use evolve::{
    classical_closed_form_cycle4, classical_evolve, evolution_operator, quantum_closed_form_cycle4,
    quantum_evolve, Spectrum,
};
pub use graph::{GeneratorMatrix, WalkGraph};
pub use measures::{
    entanglement_entropy, observables_at, reduced_density_first, reduced_density_second,
    total_variation_distance, tvd_to_uniform, von_neumann_entropy, WalkObservables,
};
pub use pauli::{
    cycle4_unitary_factors, encode_node, factored_unitary_cycle4, pauli_hamiltonian_cycle4,
    pauli_product, PauliLabel,
};
pub use state::{ProbabilityDistribution, StateVector, UnitaryMatrix};

/// Born-rule node probabilities of a walk state.
pub fn measurement_probabilities<T: crate::Real>(
    psi: &StateVector<T>,
) -> crate::Result<ProbabilityDistribution<T>> {
    psi.probabilities()
}
