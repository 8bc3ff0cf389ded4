use nalgebra::{Complex, ComplexField, Matrix2, Matrix4};

use super::system::{NoiseModel, SpinSystem};
use crate::dsl::{Axis, Spins};
use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, czero, Real};
use crate::walk::PauliLabel;

/// Traceless part of a two-spin density matrix, in the product basis
/// `|00⟩, |01⟩, |10⟩, |11⟩` with spin 1 most significant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationMatrix<T: Real> {
    entries: Matrix4<Complex<T>>,
}

impl<T: Real> DeviationMatrix<T> {
    /// Fails unless the matrix is Hermitian and traceless within `1e-12`
    /// (relative to its largest entry).
    pub fn new(entries: Matrix4<Complex<T>>) -> Result<Self> {
        let scale = entries
            .iter()
            .map(|z| z.modulus())
            .fold(T::one(), |a, b| a.max(b));
        let tol = T::tolerance(1e-12) * scale;
        let herm = (entries - entries.adjoint())
            .iter()
            .map(|z| z.modulus())
            .fold(T::zero(), |a, b| a.max(b));
        if !(herm <= tol) {
            return Err(Error::InvalidState(format!(
                "deviation matrix is not Hermitian ({herm})"
            )));
        }
        let tr = entries.trace().modulus();
        if !(tr <= tol) {
            return Err(Error::InvalidState(format!(
                "deviation matrix has trace {tr}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn from_diagonal(d: [T; 4]) -> Result<Self> {
        let mut m = Matrix4::from_element(czero());
        for k in 0..4 {
            m[(k, k)] = cplx(d[k], T::zero());
        }
        Self::new(m)
    }

    /// `4 I_z¹ + I_z²` with `I_z = σ_z/2`.
    pub fn thermal() -> Self {
        let (a, b) = (T::lit(2.5), T::lit(1.5));
        Self::from_diagonal([a, b, -b, -a]).expect("traceless")
    }

    pub fn matrix(&self) -> &Matrix4<Complex<T>> {
        &self.entries
    }

    pub fn diagonal(&self) -> [T; 4] {
        [0, 1, 2, 3].map(|k| self.entries[(k, k)].re)
    }

    /// Largest off-diagonal modulus.
    pub fn max_coherence(&self) -> T {
        let mut m = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m = m.max(self.entries[(i, j)].modulus());
                }
            }
        }
        m
    }

    pub fn max_distance(&self, other: &Self) -> T {
        (self.entries - other.entries)
            .iter()
            .map(|z| z.modulus())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> [T; 4] {
        let eig = self.entries.symmetric_eigenvalues();
        let mut v = [eig[0], eig[1], eig[2], eig[3]];
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        v
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Matrix4<Complex<T>>) -> Self {
        let m = u * self.entries * u.adjoint();
        // re-symmetrise to stop rounding drift accumulating over long sequences
        let half = cplx(T::lit(0.5), T::zero());
        Self {
            entries: (m + m.adjoint()) * half,
        }
    }
}

fn rotation<T: Real>(axis: Axis, angle: T) -> Matrix2<Complex<T>> {
    let label = match axis {
        Axis::X => PauliLabel::X,
        Axis::Y => PauliLabel::Y,
        Axis::Z => PauliLabel::Z,
    };
    let (s, c) = (angle * T::lit(0.5)).sin_cos();
    Matrix2::identity() * cplx(c, T::zero()) + label.matrix::<T>() * cplx(T::zero(), -s)
}

/// `⊗` of `exp(−i·angle/2·σ_axis)` on the addressed spins, identity elsewhere.
pub fn rf_unitary<T: Real>(spins: Spins, axis: Axis, angle: T) -> Matrix4<Complex<T>> {
    let r = rotation(axis, angle);
    let id = Matrix2::identity();
    let first = if spins.includes_first() { r } else { id };
    let second = if spins.includes_second() { r } else { id };
    first.kronecker(&second)
}

/// Free evolution under `(πJ/2) σz⊗σz + π ν₁ σz⊗I + π ν₂ I⊗σz`; diagonal.
pub fn delay_unitary<T: Real>(duration: T, system: &SpinSystem<T>) -> Matrix4<Complex<T>> {
    let energies = free_energies(system);
    let mut u = Matrix4::from_element(czero());
    for k in 0..4 {
        u[(k, k)] = cis(-energies[k] * duration);
    }
    u
}

fn z_eigen<T: Real>(bit: usize) -> T {
    if bit == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn free_energies<T: Real>(system: &SpinSystem<T>) -> [T; 4] {
    let pi = T::pi();
    [0usize, 1, 2, 3].map(|k| {
        let z1 = z_eigen::<T>(k >> 1);
        let z2 = z_eigen::<T>(k & 1);
        pi * system.j_coupling * T::lit(0.5) * z1 * z2
            + pi * system.offset_1 * z1
            + pi * system.offset_2 * z2
    })
}

pub fn apply_rf<T: Real>(
    rho: &DeviationMatrix<T>,
    spins: Spins,
    axis: Axis,
    angle: T,
) -> DeviationMatrix<T> {
    rho.conjugate_by(&rf_unitary(spins, axis, angle))
}

/// Free evolution for `duration` seconds, then dephasing when `noise` is on.
///
/// Both maps act elementwise on `ρ`, so they commute and the order is exact.
pub fn apply_delay<T: Real>(
    rho: &DeviationMatrix<T>,
    duration: T,
    system: &SpinSystem<T>,
    noise: NoiseModel,
) -> Result<DeviationMatrix<T>> {
    if !(duration >= T::zero() && duration.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delay must be finite and non-negative, got {duration}"
        )));
    }
    let e = free_energies(system);
    let mut m = rho.entries;
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let mut z = m[(i, j)] * cis(-(e[i] - e[j]) * duration);
            if noise.enabled {
                z *= dephasing_factor(i, j, duration, system);
            }
            m[(i, j)] = z;
        }
    }
    Ok(DeviationMatrix { entries: m })
}

/// Decay multiplier of coherence `(i, j)` after `duration` seconds.
pub fn dephasing_factor<T: Real>(i: usize, j: usize, duration: T, system: &SpinSystem<T>) -> T {
    let mut rate = T::zero();
    if (i ^ j) & 0b10 != 0 {
        rate += T::one() / system.t2_spin1;
    }
    if (i ^ j) & 0b01 != 0 {
        rate += T::one() / system.t2_spin2;
    }
    (-rate * duration).exp()
}

/// Pulsed field gradient: keeps the diagonal, removes every coherence.
pub fn apply_gradient_crush<T: Real>(rho: &DeviationMatrix<T>) -> DeviationMatrix<T> {
    let mut m = Matrix4::from_element(czero());
    for k in 0..4 {
        m[(k, k)] = rho.entries[(k, k)];
    }
    DeviationMatrix { entries: m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_close(a: &DeviationMatrix<f64>, b: &DeviationMatrix<f64>, tol: f64) {
        let d = a.max_distance(b);
        assert!(d < tol, "distance {d}\n{:?}\n{:?}", a.matrix(), b.matrix());
    }

    /// `coeff · σ_first ⊗ σ_second`.
    fn product_op(first: PauliLabel, second: PauliLabel, coeff: f64) -> DeviationMatrix<f64> {
        let m = first.matrix::<f64>().kronecker(&second.matrix::<f64>()) * cplx(coeff, 0.0);
        DeviationMatrix::new(m).unwrap()
    }

    #[test]
    fn thermal_state_is_diagonal_and_traceless() {
        let rho = DeviationMatrix::<f64>::thermal();
        assert_eq!(rho.diagonal(), [2.5, 1.5, -1.5, -2.5]);
        assert_eq!(rho.max_coherence(), 0.0);
        assert_eq!(rho.matrix().trace().modulus(), 0.0);
        // 2σz⊗I + ½I⊗σz
        let by_hand = DeviationMatrix::new(
            PauliLabel::Z
                .matrix::<f64>()
                .kronecker(&Matrix2::identity())
                * cplx(2.0, 0.0)
                + Matrix2::identity().kronecker(&PauliLabel::Z.matrix::<f64>()) * cplx(0.5, 0.0),
        )
        .unwrap();
        assert_eq!(rho, by_hand);
    }

    #[test]
    fn validation_rejects_non_hermitian_or_traced() {
        assert!(DeviationMatrix::<f64>::from_diagonal([1.0, 0.0, 0.0, 0.0]).is_err());
        let mut m = Matrix4::from_element(cplx(0.0, 0.0));
        m[(0, 1)] = cplx(1.0, 0.0);
        assert!(DeviationMatrix::new(m).is_err());
    }

    #[test]
    fn zero_angle_is_identity() {
        let rho = DeviationMatrix::thermal();
        assert_eq!(apply_rf(&rho, Spins::First, Axis::X, 0.0), rho);
    }

    #[test]
    fn pi_pulse_on_both_spins_swaps_populations() {
        let rho = DeviationMatrix::from_diagonal([1.5, -0.5, -0.5, -0.5]).unwrap();
        let out = apply_rf(&rho, Spins::Both, Axis::X, PI);
        assert_close(
            &out,
            &DeviationMatrix::from_diagonal([-0.5, -0.5, -0.5, 1.5]).unwrap(),
            1e-14,
        );
    }

    #[test]
    fn full_turn_restores_state() {
        let rho = apply_rf(&DeviationMatrix::thermal(), Spins::First, Axis::Y, 0.7);
        let mut out = rho;
        for _ in 0..4 {
            out = apply_rf(&out, Spins::Second, Axis::X, FRAC_PI_2);
        }
        assert_close(&out, &rho, 1e-12);
    }

    #[test]
    fn zero_delay_is_identity() {
        let rho = apply_rf(&DeviationMatrix::thermal(), Spins::Both, Axis::X, 1.0);
        let out = apply_delay(&rho, 0.0, &SpinSystem::default(), NoiseModel::dephasing()).unwrap();
        assert_close(&out, &rho, 1e-15);
        assert!(apply_delay(&rho, -1.0, &SpinSystem::default(), NoiseModel::off()).is_err());
    }

    #[test]
    fn coupling_delay_converts_in_phase_to_anti_phase() {
        // I_y¹ evolves under 2πJ I_z¹I_z² for 1/(2J): phase πJτ = π/2.
        let sys = SpinSystem::default();
        let iy1 = product_op(PauliLabel::Y, PauliLabel::Identity, 0.5);
        let out = apply_delay(&iy1, sys.tau(), &sys, NoiseModel::off()).unwrap();
        let anti = product_op(PauliLabel::X, PauliLabel::Z, 0.5);
        let overlap = (out.matrix().adjoint() * anti.matrix()).trace().re / 2.0;
        assert_abs_diff_eq!(overlap.abs(), 0.5, epsilon = 1e-12);
        // nothing left in phase
        let residual = (out.matrix().adjoint() * iy1.matrix()).trace().modulus();
        assert!(residual < 1e-12);
    }

    #[test]
    fn dephasing_scales_coherences() {
        let sys = SpinSystem::default();
        let rho = apply_rf(&DeviationMatrix::thermal(), Spins::Both, Axis::X, 0.9);
        let t = 0.05;
        let clean = apply_delay(&rho, t, &sys, NoiseModel::off()).unwrap();
        let noisy = apply_delay(&rho, t, &sys, NoiseModel::dephasing()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let b1 = ((i ^ j) >> 1 & 1) as f64;
                let b2 = ((i ^ j) & 1) as f64;
                let want = clean.matrix()[(i, j)] * (-t * b1 / 0.4 - t * b2 / 0.3).exp();
                assert!((noisy.matrix()[(i, j)] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn crush_projects_onto_diagonal() {
        let rho = apply_rf(&DeviationMatrix::thermal(), Spins::First, Axis::X, PI / 3.0);
        let crushed = apply_gradient_crush(&rho);
        let want = DeviationMatrix::from_diagonal([1.5, 0.5, -0.5, -1.5]).unwrap();
        assert_close(&crushed, &want, 1e-14);
        assert_eq!(apply_gradient_crush(&crushed), crushed);
        let diag = DeviationMatrix::<f64>::thermal();
        assert_eq!(apply_gradient_crush(&diag), diag);
    }
}
