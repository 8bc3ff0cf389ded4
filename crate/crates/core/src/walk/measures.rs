use nalgebra::{Complex, DMatrix, SymmetricEigen};

use super::evolve::quantum_evolve;
use super::graph::GeneratorMatrix;
use super::state::{ProbabilityDistribution, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Half the L1 distance between two distributions.
pub fn total_variation_distance<T: Real>(
    p: &ProbabilityDistribution<T>,
    q: &ProbabilityDistribution<T>,
) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::InvalidArgument(format!(
            "distributions have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    let l1 = p
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), |acc, x| acc + x);
    Ok(T::lit(0.5) * l1)
}

/// Distance from the uniform distribution over the same nodes.
pub fn tvd_to_uniform<T: Real>(p: &ProbabilityDistribution<T>) -> T {
    let uniform = ProbabilityDistribution::uniform(p.len()).expect("nonempty distribution");
    total_variation_distance(p, &uniform).expect("equal lengths")
}

fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// Reduced density matrix of the first `split` qubits.
pub fn reduced_density_first<T: Real>(
    psi: &StateVector<T>,
    split: usize,
) -> Result<DMatrix<Complex<T>>> {
    let m = bipartite_amplitudes(psi, split)?;
    Ok(&m * m.adjoint())
}

/// Reduced density matrix of the last `total − split` qubits.
pub fn reduced_density_second<T: Real>(
    psi: &StateVector<T>,
    split: usize,
) -> Result<DMatrix<Complex<T>>> {
    let m = bipartite_amplitudes(psi, split)?;
    Ok(m.transpose() * m.conjugate())
}

/// Amplitudes reshaped to a `2^split × 2^(total−split)` matrix, first
/// subsystem on rows.
fn bipartite_amplitudes<T: Real>(
    psi: &StateVector<T>,
    split: usize,
) -> Result<DMatrix<Complex<T>>> {
    let dim = psi.dim();
    let total = qubit_count(dim).ok_or(Error::UnsupportedDimension(dim))?;
    if split == 0 || split >= total {
        return Err(Error::InvalidArgument(format!(
            "split {split} must lie strictly between 0 and {total} qubits"
        )));
    }
    let rows = 1usize << split;
    let cols = dim / rows;
    Ok(DMatrix::from_fn(rows, cols, |a, b| psi[a * cols + b]))
}

/// Von Neumann entropy in bits of a Hermitian density matrix, with `0 log 0 = 0`.
pub fn von_neumann_entropy<T: Real>(rho: &DMatrix<Complex<T>>) -> T {
    let eig = SymmetricEigen::new(rho.clone());
    let cutoff = T::default_epsilon();
    eig.eigenvalues
        .iter()
        .filter(|&&l| l > cutoff)
        .map(|&l| -l * l.log2())
        .fold(T::zero(), |a, b| a + b)
        .max(T::zero())
}

/// Entanglement entropy (bits) between the first `split` qubits and the rest.
pub fn entanglement_entropy<T: Real>(psi: &StateVector<T>, split: usize) -> Result<T> {
    Ok(von_neumann_entropy(&reduced_density_first(psi, split)?))
}

/// Mixing and entanglement of a walk state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkObservables<T> {
    pub time: T,
    pub tvd_to_uniform: T,
    /// Half/half qubit split; `None` unless the dimension is a power of two
    /// with at least two qubits.
    pub entanglement: Option<T>,
}

impl<T: Real> WalkObservables<T> {
    pub fn measure(time: T, psi: &StateVector<T>) -> Result<Self> {
        let tvd = tvd_to_uniform(&psi.probabilities()?);
        let entanglement = match qubit_count(psi.dim()) {
            Some(q) if q >= 2 => Some(entanglement_entropy(psi, q / 2)?),
            _ => None,
        };
        Ok(Self {
            time,
            tvd_to_uniform: tvd,
            entanglement,
        })
    }
}

/// Observables of the 4-cycle quantum walk started at node 0.
pub fn observables_at<T: Real>(gamma: T, t: T) -> Result<WalkObservables<T>> {
    let h = GeneratorMatrix::cycle(4, gamma)?;
    let psi = quantum_evolve(&h, &StateVector::basis(4, 0)?, t)?;
    WalkObservables::measure(t, &psi)
}
