use nalgebra::{DMatrix, Matrix4};

use super::density::{
    apply_delay, apply_gradient_crush, apply_rf, delay_unitary, rf_unitary, DeviationMatrix,
};
use super::system::{NoiseModel, SpinSystem};
use crate::dsl::{
    evaluate, parse, AngleExpr, Bindings, ConcreteEvent, ConcreteSequence, PulseSequence, Symbol,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::walk::{
    quantum_closed_form_cycle4, tvd_to_uniform, ProbabilityDistribution, UnitaryMatrix,
};

/// Turns the thermal state into the effective pure state `|00⟩`.
pub const PREPARATION_SEQUENCE: &str = "Rx1(pi/3) - Gz - Rx1(pi/4) - tau - Ry1(-pi/4) - Gz";

/// Realises `exp(−iHt)` of the 4-cycle walk at `γt = nπ/12`, `γ = πJ`, up to
/// a global phase.
///
/// The coupling block is a spin echo between `Ry12(±pi/2)` frame changes,
/// turning `σz⊗σz` evolution into `σx⊗σx`. `Rz1(pi)` and `Rz2(pi)` flip the
/// sign of that generator and cancel the `σz⊗σz` left by the refocusing pulse.
pub const WALK_SEQUENCE: &str = "Rx2(-n*pi/6) - Rz1(pi) - Ry12(pi/2) - d(n/(12*J)) - Rx12(pi) \
                                 - d(n/(12*J)) - Ry12(-pi/2) - Rz2(pi)";

/// The echo without z-frame corrections and with `θ = +nπ/6`. Gives the same
/// populations from `|00⟩` but its unitary is the complex conjugate of the
/// walk propagator times `σz⊗σz`.
pub const BARE_ECHO_WALK_SEQUENCE: &str =
    "Rx2(n*pi/6) - Ry12(pi/2) - d(n/(12*J)) - Rx12(pi) - d(n/(12*J)) - Ry12(-pi/2)";

/// Largest experiment index; `n = 12` is one full walk period.
pub const MAX_WALK_INDEX: i64 = 12;

pub fn preparation_sequence() -> PulseSequence {
    parse(PREPARATION_SEQUENCE)
        .expect("valid built-in sequence")
        .with_name("pseudo-pure preparation")
}

fn check_index(n: i64) -> Result<()> {
    if (0..=MAX_WALK_INDEX).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "walk index {n} outside 0..={MAX_WALK_INDEX}"
        )))
    }
}

/// Walk sequence for experiment `n`, with `n` substituted and `J` left free.
pub fn walk_sequence(n: i64) -> Result<PulseSequence> {
    check_index(n)?;
    let template = parse(WALK_SEQUENCE).expect("valid built-in sequence");
    Ok(template
        .substitute(Symbol::N, &AngleExpr::number(n as f64))
        .with_name(format!("walk n={n}")))
}

/// Walk time `t` with `γt = nπ/12` for the coupling-derived rate `γ = πJ`.
pub fn walk_time<T: Real>(n: i64, system: &SpinSystem<T>) -> T {
    T::from_i64(n).unwrap() / (T::lit(12.0) * system.j_coupling)
}

/// Ordered product of the event unitaries, noise off.
pub fn sequence_unitary<T: Real>(
    seq: &ConcreteSequence<T>,
    system: &SpinSystem<T>,
) -> Result<UnitaryMatrix<T>> {
    let mut u = Matrix4::identity();
    for (i, event) in seq.events.iter().enumerate() {
        let step = match *event {
            ConcreteEvent::Rf { axis, spins, angle } => rf_unitary(spins, axis, angle),
            ConcreteEvent::Delay { seconds } => delay_unitary(seconds, system),
            ConcreteEvent::GradientCrush => return Err(Error::NonUnitarySequence(i)),
        };
        u = step * u;
    }
    UnitaryMatrix::new(DMatrix::from_iterator(4, 4, u.iter().copied()))
}

/// Runs `seq` on `rho`; dephasing acts during delays only.
pub fn interpret<T: Real>(
    rho: &DeviationMatrix<T>,
    seq: &ConcreteSequence<T>,
    system: &SpinSystem<T>,
    noise: NoiseModel,
) -> Result<DeviationMatrix<T>> {
    let mut rho = *rho;
    for event in &seq.events {
        rho = match *event {
            ConcreteEvent::Rf { axis, spins, angle } => apply_rf(&rho, spins, axis, angle),
            ConcreteEvent::Delay { seconds } => apply_delay(&rho, seconds, system, noise)?,
            ConcreteEvent::GradientCrush => apply_gradient_crush(&rho),
        };
    }
    Ok(rho)
}

pub fn prepare_pseudo_pure<T: Real>(
    system: &SpinSystem<T>,
    noise: NoiseModel,
) -> Result<DeviationMatrix<T>> {
    let seq = evaluate(
        &preparation_sequence(),
        &Bindings::new().with_j(system.j_coupling),
    )?;
    interpret(&DeviationMatrix::thermal(), &seq, system, noise)
}

/// Node populations read from a diagonal deviation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationReadout<T> {
    pub populations: ProbabilityDistribution<T>,
    pub raw_diagonal: [T; 4],
}

/// Most negative population tolerated by [`read_populations`].
pub const STRICT_READOUT_TOLERANCE: f64 = 1e-6;

/// Most negative population tolerated when dephasing is on. Relaxation during
/// the preparation delay leaves the pseudo-pure state slightly outside the
/// image of the affine embedding (about `-1.5e-3` at the default T2 values).
pub const NOISY_READOUT_TOLERANCE: f64 = 0.05;

/// Inverts the pseudo-pure embedding `d = 2p − 1/2` on the diagonal and
/// renormalises. Populations below `-1e-6` are an error.
pub fn read_populations<T: Real>(rho: &DeviationMatrix<T>) -> Result<PopulationReadout<T>> {
    read_populations_with_tolerance(rho, T::lit(STRICT_READOUT_TOLERANCE))
}

/// [`read_populations`] with an explicit bound on how negative a population
/// may be before it is clamped to zero.
pub fn read_populations_with_tolerance<T: Real>(
    rho: &DeviationMatrix<T>,
    tolerance: T,
) -> Result<PopulationReadout<T>> {
    let coherence = rho.max_coherence();
    if coherence > T::lit(1e-9) {
        log::warn!("reading populations of a state with coherences up to {coherence}; crush first");
    }
    let raw = rho.diagonal();
    let half = T::lit(0.5);
    let mut p = raw.map(|d| (d + half) * half);
    if let Some(k) = p.iter().position(|&x| x < -tolerance) {
        return Err(Error::CorruptedState(format!("population {k} is {}", p[k])));
    }
    for x in &mut p {
        *x = x.max(T::zero());
    }
    let total = p.iter().fold(T::zero(), |a, &b| a + b);
    if !(total > T::zero()) {
        return Err(Error::CorruptedState("populations sum to zero".into()));
    }
    let populations = ProbabilityDistribution::new(p.iter().map(|&x| x / total).collect())?;
    Ok(PopulationReadout {
        populations,
        raw_diagonal: raw,
    })
}

/// Thermal state → pseudo-pure `|00⟩` → walk sequence `n` → crush → readout.
pub fn run_experiment<T: Real>(
    n: i64,
    system: &SpinSystem<T>,
    noise: NoiseModel,
) -> Result<PopulationReadout<T>> {
    check_index(n)?;
    let rho = prepare_pseudo_pure(system, noise)?;
    let walk = evaluate(
        &walk_sequence(n)?,
        &Bindings::new().with_j(system.j_coupling),
    )?;
    let rho = apply_gradient_crush(&interpret(&rho, &walk, system, noise)?);
    if noise.enabled {
        read_populations_with_tolerance(&rho, T::lit(NOISY_READOUT_TOLERANCE))
    } else {
        read_populations(&rho)
    }
}

/// Distance of the measured populations from uniform.
pub fn experiment_tvd<T: Real>(readout: &PopulationReadout<T>) -> T {
    tvd_to_uniform(&readout.populations)
}

/// Noiseless walk populations at `γt = nπ/12`.
pub fn ideal_populations<T: Real>(n: i64) -> Result<ProbabilityDistribution<T>> {
    check_index(n)?;
    let gt = T::pi() * T::from_i64(n).unwrap() / T::lit(12.0);
    quantum_closed_form_cycle4(T::one(), gt)?.probabilities()
}
