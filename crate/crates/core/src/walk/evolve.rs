//! Exact propagation of classical and quantum walks.
//!
//! `H` is real symmetric, so both `exp(−Ht)` and `exp(−iHt)` are evaluated
//! from one eigendecomposition `H = V Λ Vᵀ`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::graph::GeneratorMatrix;
use super::state::{ProbabilityDistribution, StateVector, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, Real};

/// Eigendecomposition of a generator, reusable across time points.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    eigenvalues: DVector<T>,
    eigenvectors: DMatrix<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(h: &GeneratorMatrix<T>) -> Self {
        let eig = SymmetricEigen::new(h.matrix().clone());
        Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.eigenvalues
    }

    /// `exp(−Ht)`.
    pub fn heat_kernel(&self, t: T) -> Result<DMatrix<T>> {
        check_time(t)?;
        if t == T::zero() {
            return Ok(DMatrix::identity(self.dim(), self.dim()));
        }
        let v = &self.eigenvectors;
        let decay = DMatrix::from_diagonal(&self.eigenvalues.map(|l| (-l * t).exp()));
        Ok(v * decay * v.transpose())
    }

    /// `exp(−iHt)`.
    pub fn unitary(&self, t: T) -> Result<UnitaryMatrix<T>> {
        check_time(t)?;
        if t == T::zero() {
            return Ok(UnitaryMatrix::identity(self.dim()));
        }
        let v = self.eigenvectors.map(|x| cplx(x, T::zero()));
        let phases = DMatrix::from_diagonal(&self.eigenvalues.map(|l| cis(-l * t)));
        Ok(UnitaryMatrix::new_unchecked(&v * phases * v.transpose()))
    }

    pub fn classical(
        &self,
        p0: &ProbabilityDistribution<T>,
        t: T,
    ) -> Result<ProbabilityDistribution<T>> {
        check_dim(self.dim(), p0.len())?;
        if t == T::zero() {
            check_time(t)?;
            return Ok(p0.clone());
        }
        let p = self.heat_kernel(t)? * p0.to_vector();
        ProbabilityDistribution::new(p.iter().copied().collect())
    }

    pub fn quantum(&self, psi0: &StateVector<T>, t: T) -> Result<StateVector<T>> {
        check_dim(self.dim(), psi0.dim())?;
        check_time(t)?;
        if t == T::zero() {
            return Ok(psi0.clone());
        }
        // Vᵀψ, rotate phases, back with V; avoids forming the dense unitary.
        let v = self.eigenvectors.map(|x| cplx(x, T::zero()));
        let mut coeffs = v.transpose() * psi0.amplitudes();
        for (c, &l) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= cis(-l * t);
        }
        Ok(StateVector::from_unitary_image(v * coeffs))
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "time must be finite and non-negative, got {t}"
        )))
    }
}

fn check_rate<T: Real>(gamma: T) -> Result<()> {
    if gamma > T::zero() && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "jump rate must be positive, got {gamma}"
        )))
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// `exp(−Ht)·p0`.
pub fn classical_evolve<T: Real>(
    h: &GeneratorMatrix<T>,
    p0: &ProbabilityDistribution<T>,
    t: T,
) -> Result<ProbabilityDistribution<T>> {
    check_time(t)?;
    check_dim(h.dim(), p0.len())?;
    Spectrum::new(h).classical(p0, t)
}

/// `exp(−iHt)·ψ0`.
pub fn quantum_evolve<T: Real>(
    h: &GeneratorMatrix<T>,
    psi0: &StateVector<T>,
    t: T,
) -> Result<StateVector<T>> {
    check_time(t)?;
    check_dim(h.dim(), psi0.dim())?;
    Spectrum::new(h).quantum(psi0, t)
}

/// Dense `exp(−iHt)`.
pub fn evolution_operator<T: Real>(h: &GeneratorMatrix<T>, t: T) -> Result<UnitaryMatrix<T>> {
    Spectrum::new(h).unitary(t)
}

/// Analytic classical distribution on the 4-cycle, started at node 0.
pub fn classical_closed_form_cycle4<T: Real>(gamma: T, t: T) -> Result<ProbabilityDistribution<T>> {
    check_rate(gamma)?;
    check_time(t)?;
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    let slow = (-T::lit(2.0) * gamma * t).exp();
    let fast = (-T::lit(4.0) * gamma * t).exp();
    let p0 = quarter + half * slow + quarter * fast;
    let p1 = quarter - quarter * fast;
    let p2 = quarter - half * slow + quarter * fast;
    ProbabilityDistribution::new(vec![p0, p1, p2, p1])
}

/// Analytic quantum state on the 4-cycle started at `|0⟩`, global phase included:
/// `e^{−2iγt}[cos²γt|0⟩ − sin²γt|2⟩ + (i/2) sin 2γt (|1⟩ + |3⟩)]`.
pub fn quantum_closed_form_cycle4<T: Real>(gamma: T, t: T) -> Result<StateVector<T>> {
    check_rate(gamma)?;
    check_time(t)?;
    let gt = gamma * t;
    let phase = cis(-T::lit(2.0) * gt);
    let (s, c) = gt.sin_cos();
    let side = cplx(T::zero(), T::lit(0.5) * (T::lit(2.0) * gt).sin());
    let amps = [
        phase * cplx(c * c, T::zero()),
        phase * side,
        phase * cplx(-s * s, T::zero()),
        phase * side,
    ];
    Ok(StateVector::from_unitary_image(DVector::from_column_slice(
        &amps,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cycle4() -> GeneratorMatrix<f64> {
        GeneratorMatrix::cycle(4, 1.0).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let h = GeneratorMatrix::cycle(5, 0.7).unwrap();
        let p0 = ProbabilityDistribution::new(vec![0.1, 0.2, 0.3, 0.4, 0.0]).unwrap();
        let p = classical_evolve(&h, &p0, 0.0).unwrap();
        for k in 0..5 {
            assert_abs_diff_eq!(p[k], p0[k], epsilon = 1e-14);
        }
        let psi0 = StateVector::basis(5, 3).unwrap();
        let psi = quantum_evolve(&h, &psi0, 0.0).unwrap();
        assert!(psi.max_distance(&psi0) < 1e-14);
    }

    #[test]
    fn classical_cycle4_at_unit_time() {
        // RK4 of the master equation (dt = 1e-4), see tests/oracles.rs.
        let want = [0.32224655, 0.24542109, 0.18691127, 0.24542109];
        let p0 = ProbabilityDistribution::point(4, 0).unwrap();
        let p = classical_evolve(&cycle4(), &p0, 1.0).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(p[k], want[k], epsilon = 1e-6);
        }
        let closed = classical_closed_form_cycle4(1.0, 1.0).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(p[k], closed[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn classical_cycle4_mixes() {
        let p0 = ProbabilityDistribution::point(4, 0).unwrap();
        let p = classical_evolve(&cycle4(), &p0, 20.0).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(p[k], 0.25, epsilon = 1e-9);
        }
        let far = classical_closed_form_cycle4(1.0, 60.0).unwrap();
        assert_eq!(far.as_slice(), &[0.25; 4]);
    }

    #[test]
    fn closed_forms_at_zero() {
        assert_eq!(
            classical_closed_form_cycle4(1.0, 0.0).unwrap().as_slice(),
            &[1.0, 0.0, 0.0, 0.0]
        );
        let psi = quantum_closed_form_cycle4(1.0, 0.0).unwrap();
        assert!(psi.max_distance(&StateVector::basis(4, 0).unwrap()) < 1e-15);
    }

    #[test]
    fn negative_time_rejected() {
        let p0 = ProbabilityDistribution::point(4, 0).unwrap();
        assert!(matches!(
            classical_evolve(&cycle4(), &p0, -1.0),
            Err(Error::InvalidArgument(_))
        ));
        let psi0 = StateVector::basis(4, 0).unwrap();
        assert!(matches!(
            quantum_evolve(&cycle4(), &psi0, -0.5),
            Err(Error::InvalidArgument(_))
        ));
        assert!(classical_closed_form_cycle4(0.0, 1.0).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p0 = ProbabilityDistribution::point(3, 0).unwrap();
        assert!(matches!(
            classical_evolve(&cycle4(), &p0, 1.0),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 3
            })
        ));
    }

    #[test]
    fn quantum_period_and_localisation() {
        let gamma = 1.3;
        let h = GeneratorMatrix::cycle(4, gamma).unwrap();
        let psi0 = StateVector::basis(4, 0).unwrap();
        let back = quantum_evolve(&h, &psi0, std::f64::consts::PI / gamma).unwrap();
        assert!(back.distance(&psi0) < 1e-10);
        let half = quantum_evolve(&h, &psi0, std::f64::consts::FRAC_PI_2 / gamma).unwrap();
        assert_abs_diff_eq!(half[2].norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn quantum_closed_form_probabilities() {
        let uniform = quantum_closed_form_cycle4(1.0, std::f64::consts::FRAC_PI_4).unwrap();
        for p in uniform.probabilities().unwrap().as_slice() {
            assert_abs_diff_eq!(*p, 0.25, epsilon = 1e-12);
        }
        let p = quantum_closed_form_cycle4(1.0, std::f64::consts::PI / 6.0)
            .unwrap()
            .probabilities()
            .unwrap();
        let want = [9.0 / 16.0, 3.0 / 16.0, 1.0 / 16.0, 3.0 / 16.0];
        for k in 0..4 {
            assert_abs_diff_eq!(p[k], want[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn dense_unitary_matches_state_evolution() {
        let h = GeneratorMatrix::cycle(6, 0.4).unwrap();
        let psi0 = StateVector::basis(6, 2).unwrap();
        let u = evolution_operator(&h, 2.5).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        let a = u.apply(&psi0).unwrap();
        let b = quantum_evolve(&h, &psi0, 2.5).unwrap();
        assert!(a.max_distance(&b) < 1e-12);
    }

    #[test]
    fn single_precision_path() {
        let h = GeneratorMatrix::<f32>::cycle(4, 1.0).unwrap();
        let psi0 = StateVector::basis(4, 0).unwrap();
        let psi = quantum_evolve(&h, &psi0, std::f32::consts::FRAC_PI_4).unwrap();
        for p in psi.probabilities().unwrap().as_slice() {
            assert!((p - 0.25).abs() < 1e-5);
        }
    }
}
