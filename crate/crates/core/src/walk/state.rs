use std::ops::Index;

use nalgebra::{Complex, ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Real};

/// Probability mass over the nodes of a walk.
///
/// Validated on construction: entries are non-negative (values down to
/// `-1e-12` are clamped to zero) and sum to one within `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution<T> {
    probs: Vec<T>,
}

impl<T: Real> ProbabilityDistribution<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        let clamp = T::tolerance(1e-12);
        let mut probs = probs;
        for (k, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution(format!("entry {k} is {p}")));
            }
            if *p < -clamp {
                return Err(Error::InvalidDistribution(format!(
                    "entry {k} = {p} is negative"
                )));
            }
            if *p <= T::zero() {
                // also normalises -0.0
                *p = T::zero();
            }
        }
        let total: T = probs.iter().copied().fold(T::zero(), |a, b| a + b);
        if (total - T::one()).abs() > T::tolerance(1e-9) {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    /// All mass on `node`.
    pub fn point(len: usize, node: usize) -> Result<Self> {
        if node >= len {
            return Err(Error::InvalidArgument(format!(
                "node {node} outside 0..{len}"
            )));
        }
        let mut probs = vec![T::zero(); len];
        probs[node] = T::one();
        Ok(Self { probs })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        let p = T::one() / T::from_usize(len).unwrap();
        Ok(Self {
            probs: vec![p; len],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.probs
    }

    pub fn to_vector(&self) -> DVector<T> {
        DVector::from_column_slice(&self.probs)
    }

    pub fn into_vec(self) -> Vec<T> {
        self.probs
    }
}

impl<T> Index<usize> for ProbabilityDistribution<T> {
    type Output = T;

    fn index(&self, k: usize) -> &T {
        &self.probs[k]
    }
}

/// Normalised vector of complex amplitudes over the walk basis `|k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amps: DVector<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Fails unless the squared magnitudes sum to one within `1e-10`.
    pub fn new(amps: DVector<Complex<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty state".into()));
        }
        let norm_sq = amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        if !norm_sq.is_finite() || (norm_sq - T::one()).abs() > T::tolerance(1e-10) {
            return Err(Error::InvalidState(format!("squared norm is {norm_sq}")));
        }
        Ok(Self { amps })
    }

    pub fn from_amplitudes(amps: &[Complex<T>]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    /// Basis ket `|node⟩`.
    pub fn basis(dim: usize, node: usize) -> Result<Self> {
        if node >= dim {
            return Err(Error::InvalidArgument(format!(
                "node {node} outside 0..{dim}"
            )));
        }
        let mut amps = DVector::from_element(dim, czero());
        amps[node] = cone();
        Ok(Self { amps })
    }

    /// Skips validation; for results of unitary maps applied to valid states.
    pub(crate) fn from_unitary_image(amps: DVector<Complex<T>>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amps
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_distance(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).modulus())
            .fold(T::zero(), |m, x| m.max(x))
    }

    /// Euclidean norm of `self − other`.
    pub fn distance(&self, other: &Self) -> T {
        (&self.amps - &other.amps).norm()
    }

    /// Born-rule probabilities `|⟨k|ψ⟩|²`.
    pub fn probabilities(&self) -> Result<ProbabilityDistribution<T>> {
        ProbabilityDistribution::new(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

impl<T: Real> Index<usize> for StateVector<T> {
    type Output = Complex<T>;

    fn index(&self, k: usize) -> &Complex<T> {
        &self.amps[k]
    }
}

/// Square complex matrix with `U U† = I` within `1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
}

impl<T: Real> UnitaryMatrix<T> {
    pub fn new(entries: DMatrix<Complex<T>>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "unitary must be square and nonempty".into(),
            ));
        }
        let dev = unitarity_defect(&entries);
        if !(dev <= T::tolerance(1e-10)) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary: max |UU† − I| = {dev}"
            )));
        }
        Ok(Self { entries })
    }

    pub(crate) fn new_unchecked(entries: DMatrix<Complex<T>>) -> Self {
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        Ok(StateVector::from_unitary_image(
            &self.entries * psi.amplitudes(),
        ))
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if first.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: first.dim(),
            });
        }
        Ok(Self {
            entries: &self.entries * &first.entries,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn unitarity_defect(&self) -> T {
        unitarity_defect(&self.entries)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_distance(&self, other: &Self) -> T {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.modulus())
            .fold(T::zero(), |m, x| m.max(x))
    }

    /// `|tr(U† V)| / d`, equal to one iff the two agree up to a global phase.
    pub fn phase_invariant_fidelity(&self, other: &Self) -> T {
        let d = T::from_usize(self.dim()).unwrap();
        (self.entries.adjoint() * &other.entries).trace().modulus() / d
    }
}

fn unitarity_defect<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let n = m.nrows();
    let prod = m * m.adjoint();
    let eye = DMatrix::<Complex<T>>::identity(n, n);
    (prod - eye)
        .iter()
        .map(|z| z.modulus())
        .fold(T::zero(), |a, b| a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn tiny_negative_entries_are_clamped() {
        let d = ProbabilityDistribution::<f64>::new(vec![1.0, -1e-13, -0.0, 0.0]).unwrap();
        assert_eq!(d.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        assert!(d[2].is_sign_positive());
        assert!(ProbabilityDistribution::new(vec![1.0 + 1e-6, -1e-6]).is_err());
    }

    #[test]
    fn distribution_sum_is_checked() {
        assert!(ProbabilityDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityDistribution::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(ProbabilityDistribution::<f64>::new(vec![]).is_err());
        assert!(ProbabilityDistribution::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn basis_and_uniform_probabilities() {
        let p = StateVector::<f64>::basis(4, 0)
            .unwrap()
            .probabilities()
            .unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0, 0.0]);

        let half = cplx(0.5, 0.0);
        let psi = StateVector::from_amplitudes(&[half; 4]).unwrap();
        assert_eq!(psi.probabilities().unwrap().as_slice(), &[0.25; 4]);
    }

    #[test]
    fn unnormalised_state_rejected() {
        assert!(StateVector::from_amplitudes(&[cplx(1.0, 0.0), cplx(1e-3, 0.0)]).is_err());
        assert!(StateVector::<f64>::basis(2, 2).is_err());
    }

    #[test]
    fn unitary_validation_and_fidelity() {
        let i = cplx(0.0, 1.0);
        let phase = DMatrix::from_diagonal_element(2, 2, i);
        let u = UnitaryMatrix::new(phase).unwrap();
        let id = UnitaryMatrix::identity(2);
        assert!((u.phase_invariant_fidelity(&id) - 1.0).abs() < 1e-15);
        assert!(u.max_distance(&id) > 1.0);

        let not_unitary = DMatrix::from_element(2, 2, cplx(1.0, 0.0));
        assert!(UnitaryMatrix::new(not_unitary).is_err());
    }
}
