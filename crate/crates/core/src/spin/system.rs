use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical constants of the heteronuclear two-spin sample.
///
/// Spin 1 is the proton, spin 2 the carbon. Offsets are chemical-shift
/// frequencies in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSystem<T> {
    pub j_coupling: T,
    pub offset_1: T,
    pub offset_2: T,
    pub t2_spin1: T,
    pub t2_spin2: T,
}

impl<T: Real> Default for SpinSystem<T> {
    fn default() -> Self {
        Self {
            j_coupling: T::lit(215.0),
            offset_1: T::zero(),
            offset_2: T::zero(),
            t2_spin1: T::lit(0.4),
            t2_spin2: T::lit(0.3),
        }
    }
}

impl<T: Real> SpinSystem<T> {
    pub fn new(j_coupling: T, t2_spin1: T, t2_spin2: T) -> Result<Self> {
        Self {
            j_coupling,
            t2_spin1,
            t2_spin2,
            ..Self::default()
        }
        .validated()
    }

    pub fn with_offsets(self, offset_1: T, offset_2: T) -> Result<Self> {
        Self {
            offset_1,
            offset_2,
            ..self
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !positive(self.j_coupling) {
            return Err(Error::InvalidArgument(format!(
                "J must be positive, got {}",
                self.j_coupling
            )));
        }
        if !positive(self.t2_spin1) || !positive(self.t2_spin2) {
            return Err(Error::InvalidArgument(format!(
                "T2 times must be positive, got {} and {}",
                self.t2_spin1, self.t2_spin2
            )));
        }
        if !self.offset_1.is_finite() || !self.offset_2.is_finite() {
            return Err(Error::InvalidArgument("offsets must be finite".into()));
        }
        Ok(self)
    }

    /// Walk jump rate realised by the coupling, `γ = πJ`.
    pub fn gamma(&self) -> T {
        T::pi() * self.j_coupling
    }

    /// `1/(2J)`.
    pub fn tau(&self) -> T {
        T::one() / (T::lit(2.0) * self.j_coupling)
    }
}

/// Transverse relaxation during free evolution.
///
/// When enabled, coherence `(i, j)` decays at `Σ_s [bit_s(i) ≠ bit_s(j)] / T2_s`.
/// RF pulses and gradients are instantaneous and noiseless.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NoiseModel {
    pub enabled: bool,
}

impl NoiseModel {
    pub fn off() -> Self {
        Self { enabled: false }
    }

    pub fn dephasing() -> Self {
        Self { enabled: true }
    }
}
