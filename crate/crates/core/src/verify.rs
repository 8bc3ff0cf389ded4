//! Self-check suite: the reference results every build must reproduce.
//!
//! Each [`Criterion`] bundles a few numeric [`Check`]s. Criteria 1–10 use fixed
//! internal parameters and grids; [`noise_contraction`] runs against a caller
//! supplied spin system so configuration changes can be exercised.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use nalgebra::{Complex, ComplexField, DMatrix};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::dsl::{
    evaluate, parse, render, AngleExpr, Axis, BinaryOp, Bindings, ConcreteEvent, PulseEvent,
    PulseSequence, Spins, Symbol,
};
use crate::error::Result;
use crate::oracle::{dense_unitary, rk4_master_equation};
use crate::spin::{
    apply_delay, apply_gradient_crush, apply_rf, ideal_populations, preparation_sequence,
    prepare_pseudo_pure, run_experiment, sequence_unitary, walk_sequence, walk_time,
    DeviationMatrix, NoiseModel, SpinSystem, BARE_ECHO_WALK_SEQUENCE, MAX_WALK_INDEX,
    PREPARATION_SEQUENCE,
};
use crate::walk::{
    classical_closed_form_cycle4, classical_evolve, cycle4_unitary_factors,
    factored_unitary_cycle4, observables_at, pauli_hamiltonian_cycle4, quantum_closed_form_cycle4,
    quantum_evolve, total_variation_distance, tvd_to_uniform, GeneratorMatrix,
    ProbabilityDistribution, StateVector,
};

/// One measured quantity compared against a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= limit`.
    pub fn at_most(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            limit,
            passed: measured <= limit,
        }
    }

    /// Passes when `measured < limit`.
    pub fn below(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            limit,
            passed: measured < limit,
        }
    }

    /// Passes when `measured > limit`.
    pub fn above(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            limit,
            passed: measured > limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Set when the criterion could not be evaluated at all.
    pub error: Option<String>,
}

impl Criterion {
    fn evaluate(id: u8, name: &'static str, body: impl FnOnce() -> Result<Vec<Check>>) -> Self {
        match body() {
            Ok(checks) => Self {
                id,
                name,
                checks,
                error: None,
            },
            Err(e) => Self {
                id,
                name,
                checks: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// The first failing check, or the first check if all pass.
    pub fn headline(&self) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| !c.passed)
            .or_else(|| self.checks.first())
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} [{:>2}] {}", self.id, self.name)?;
        if let Some(e) = &self.error {
            return write!(f, ": error: {e}");
        }
        match self.headline() {
            Some(c) => write!(
                f,
                ": {} = {:.3e} (limit {:.3e})",
                c.label, c.measured, c.limit
            ),
            None => f.write_str(": no checks ran"),
        }
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(move |k| {
        if k + 1 == points {
            hi
        } else {
            lo + step * k as f64
        }
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn max_entry(m: &DMatrix<Complex<f64>>) -> f64 {
    m.iter().map(|z| z.modulus()).fold(0.0, f64::max)
}

/// Slope of the least-squares line through `(x, y)`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn periodicity() -> Criterion {
    Criterion::evaluate(1, "periodicity", || {
        let mut state_dev = 0.0f64;
        let mut prob_dev = 0.0f64;
        for gamma in [1.0, 0.7, PI * 215.0] {
            let h = GeneratorMatrix::cycle(4, gamma)?;
            let psi0 = StateVector::basis(4, 0)?;
            state_dev = state_dev.max(quantum_evolve(&h, &psi0, PI / gamma)?.distance(&psi0));
            for gt in grid(0.0, PI, 100) {
                let a = quantum_evolve(&h, &psi0, gt / gamma)?.probabilities()?;
                let b = quantum_evolve(&h, &psi0, (gt + PI) / gamma)?.probabilities()?;
                prob_dev = prob_dev.max(max_abs_diff(a.as_slice(), b.as_slice()));
            }
        }
        Ok(vec![
            Check::below("|psi(pi/g) - psi(0)|", state_dev, 1e-10),
            Check::below("max |P(gt) - P(gt + pi)|", prob_dev, 1e-10),
        ])
    })
}

pub fn uniform_mixing() -> Criterion {
    Criterion::evaluate(2, "exact uniform mixing", || {
        let h = GeneratorMatrix::cycle(4, 1.0)?;
        let psi0 = StateVector::basis(4, 0)?;
        let mut dev = 0.0f64;
        for n in [1.0, 3.0, 5.0, 7.0] {
            let p = quantum_evolve(&h, &psi0, n * FRAC_PI_4)?.probabilities()?;
            dev = dev.max(
                p.as_slice()
                    .iter()
                    .map(|x| (x - 0.25).abs())
                    .fold(0.0, f64::max),
            );
        }
        Ok(vec![Check::below("max |P_k(n pi/4) - 1/4|", dev, 1e-10)])
    })
}

pub fn localization() -> Criterion {
    Criterion::evaluate(3, "localization at node 2", || {
        let h = GeneratorMatrix::cycle(4, 1.0)?;
        let p = quantum_evolve(&h, &StateVector::basis(4, 0)?, FRAC_PI_2)?.probabilities()?;
        Ok(vec![Check::below("1 - P_2(pi/2)", 1.0 - p[2], 1e-10)])
    })
}

pub fn oracle_agreement() -> Criterion {
    Criterion::evaluate(4, "closed forms vs numeric oracles", || {
        let gamma = 1.0;
        let h = GeneratorMatrix::cycle(4, gamma)?;
        let start = ProbabilityDistribution::point(4, 0)?;
        let psi0 = StateVector::basis(4, 0)?;

        let mut rk4 = start.to_vector();
        let mut last = 0.0;
        let (mut closed_dev, mut eig_dev, mut quantum_dev) = (0.0f64, 0.0f64, 0.0f64);
        for t in grid(0.0, PI / gamma, 100) {
            rk4 = rk4_master_equation(h.matrix(), &rk4, t - last, 1e-4 / gamma)?;
            last = t;
            let closed = classical_closed_form_cycle4(gamma, t)?;
            let eig = classical_evolve(&h, &start, t)?;
            closed_dev = closed_dev.max(max_abs_diff(closed.as_slice(), rk4.as_slice()));
            eig_dev = eig_dev.max(max_abs_diff(eig.as_slice(), rk4.as_slice()));

            let dense = dense_unitary(h.matrix(), t)? * psi0.amplitudes();
            let closed = quantum_closed_form_cycle4(gamma, t)?;
            quantum_dev = quantum_dev.max(
                (dense - closed.amplitudes())
                    .iter()
                    .map(|z| z.modulus())
                    .fold(0.0, f64::max),
            );
        }
        Ok(vec![
            Check::below("max |classical closed form - RK4|", closed_dev, 1e-6),
            Check::below("max |eigen classical - RK4|", eig_dev, 1e-6),
            Check::below("max |quantum closed form - dense exp|", quantum_dev, 1e-10),
        ])
    })
}

pub fn encoding_identities() -> Criterion {
    Criterion::evaluate(5, "two-qubit encoding identities", || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        let mut pauli_dev = 0.0f64;
        let mut factor_dev = 0.0f64;
        let mut commutator = 0.0f64;
        for k in 0..50 {
            let gamma: f64 = if k == 0 {
                1.0
            } else {
                rng.random_range(0.05..5.0)
            };
            let t: f64 = rng.random_range(0.0..2.0 * PI / gamma);
            let pauli = pauli_hamiltonian_cycle4(gamma)?;
            let cycle = GeneratorMatrix::cycle(4, gamma)?;
            pauli_dev = pauli_dev.max((pauli.matrix() - cycle.matrix()).abs().max());

            let dense = dense_unitary(cycle.matrix(), t)?;
            factor_dev = factor_dev.max(max_entry(
                &(factored_unitary_cycle4(gamma, t)?.matrix() - dense),
            ));

            let (xx, ix) = cycle4_unitary_factors(gamma, t)?;
            let (a, b) = (xx.matrix(), ix.matrix());
            commutator = commutator.max(max_entry(&(a * b - b * a)));
        }
        Ok(vec![
            Check::at_most("max |Pauli form - cycle generator|", pauli_dev, 0.0),
            Check::below("max |factored U - exp(-iHt)|", factor_dev, 1e-12),
            Check::below("max |[U_xx, U_ix]|", commutator, 1e-14),
        ])
    })
}

pub fn tvd_endpoints() -> Criterion {
    Criterion::evaluate(6, "total variation endpoints", || {
        let h = GeneratorMatrix::cycle(4, 1.0)?;
        let p0 = ProbabilityDistribution::point(4, 0)?;
        let psi0 = StateVector::basis(4, 0)?;
        let dc0 = tvd_to_uniform(&classical_evolve(&h, &p0, 0.0)?);
        let dq0 = tvd_to_uniform(&quantum_evolve(&h, &psi0, 0.0)?.probabilities()?);
        let dq_mix = tvd_to_uniform(&quantum_evolve(&h, &psi0, FRAC_PI_4)?.probabilities()?);

        let mut prev = f64::INFINITY;
        let mut worst_step = f64::NEG_INFINITY;
        let mut formula_dev = 0.0f64;
        for t in grid(0.0, 3.0, 100) {
            let d = tvd_to_uniform(&classical_evolve(&h, &p0, t)?);
            worst_step = worst_step.max(d - prev);
            prev = d;
            let want = 0.5 * (-2.0 * t).exp() + 0.25 * (-4.0 * t).exp();
            formula_dev = formula_dev.max((d - want).abs());
        }
        Ok(vec![
            Check::at_most("|D_C(0) - 3/4|", (dc0 - 0.75).abs(), 0.0),
            Check::at_most("|D_Q(0) - 3/4|", (dq0 - 0.75).abs(), 0.0),
            Check::below("largest step D_C(t_k+1) - D_C(t_k)", worst_step, 0.0),
            Check::below("D_Q(pi/4)", dq_mix, 1e-10),
            Check::below("max |D_C - closed form|", formula_dev, 1e-10),
        ])
    })
}

/// `(S, Δ)` on the reference curve at walk phase `gt ∈ [0, π/4]`.
pub fn entanglement_theory(gt: f64) -> (f64, f64) {
    let (c2, s2) = (gt.cos().powi(2), gt.sin().powi(2));
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    let c = (2.0 * gt).cos();
    (h(c2) + h(s2), 0.5 * c + 0.25 * c * c)
}

pub fn entanglement_correlation() -> Criterion {
    Criterion::evaluate(7, "entanglement vs mixing", || {
        let start = observables_at(1.0, 0.0)?;
        let mid = observables_at(1.0, FRAC_PI_4)?;
        let s_start = start.entanglement.unwrap_or(f64::NAN);
        let s_mid = mid.entanglement.unwrap_or(f64::NAN);

        let mut curve_dev = 0.0f64;
        let mut mismatches = 0usize;
        for gt in grid(0.0, FRAC_PI_4, 50) {
            let o = observables_at(1.0, gt)?;
            let s = o.entanglement.unwrap_or(f64::NAN);
            let (s_th, d_th) = entanglement_theory(gt);
            curve_dev = curve_dev
                .max((s - s_th).abs())
                .max((o.tvd_to_uniform - d_th).abs());
            if (o.tvd_to_uniform < 1e-9) != (s > 1.0 - 1e-9) {
                mismatches += 1;
            }
        }
        Ok(vec![
            Check::at_most("|S(0)|", s_start.abs(), 1e-12),
            Check::at_most("|S(pi/4) - 1|", (s_mid - 1.0).abs(), 1e-12),
            Check::below("max |(S, D) - theory|", curve_dev, 1e-9),
            Check::at_most("points where D~0 and S~1 disagree", mismatches as f64, 0.0),
        ])
    })
}

pub fn pulse_compilation() -> Criterion {
    Criterion::evaluate(8, "pulse compilation", || {
        let system = SpinSystem::default();
        let prepared = prepare_pseudo_pure(&system, NoiseModel::off())?;
        let target = DeviationMatrix::from_diagonal([1.5, -0.5, -0.5, -0.5])?;
        let bindings = Bindings::new().with_j(system.j_coupling);

        let mut infidelity = 0.0f64;
        let mut population_dev = 0.0f64;
        for n in 0..=MAX_WALK_INDEX {
            let compiled = sequence_unitary(&evaluate(&walk_sequence(n)?, &bindings)?, &system)?;
            let reference = factored_unitary_cycle4(system.gamma(), walk_time(n, &system))?;
            infidelity = infidelity.max(1.0 - compiled.phase_invariant_fidelity(&reference));

            let measured = run_experiment(n, &system, NoiseModel::off())?.populations;
            population_dev = population_dev.max(max_abs_diff(
                measured.as_slice(),
                ideal_populations(n)?.as_slice(),
            ));
        }
        Ok(vec![
            Check::at_most(
                "|prepared - diag(1.5, -.5, -.5, -.5)|",
                prepared.max_distance(&target),
                1e-12,
            ),
            Check::at_most("max 1 - fidelity", infidelity, 1e-10),
            Check::at_most("max |populations - ideal|", population_dev, 1e-10),
        ])
    })
}

/// Total variation distance between noisy and ideal populations for each
/// experiment index `0..=12`.
pub fn noisy_error_profile(system: &SpinSystem<f64>) -> Result<Vec<f64>> {
    (0..=MAX_WALK_INDEX)
        .map(|n| {
            let noisy = run_experiment(n, system, NoiseModel::dephasing())?.populations;
            total_variation_distance(&noisy, &ideal_populations(n)?)
        })
        .collect()
}

pub fn noise_trend() -> Criterion {
    Criterion::evaluate(9, "dephasing error trend", || {
        let errors = noisy_error_profile(&SpinSystem::default())?;
        let x: Vec<f64> = (1..=MAX_WALK_INDEX).map(|n| n as f64).collect();
        let slope = least_squares_slope(&x, &errors[1..]);
        let worst = errors.iter().copied().fold(0.0, f64::max);
        Ok(vec![
            Check::above("least-squares slope over n = 1..12", slope, 0.0),
            Check::below("max noisy-vs-ideal TVD", worst, 0.15),
        ])
    })
}

fn random_expr(rng: &mut StdRng, depth: u32) -> AngleExpr {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..5) {
            0 => AngleExpr::symbol(Symbol::Pi),
            1 => AngleExpr::symbol(Symbol::N),
            2 => AngleExpr::symbol(Symbol::J),
            3 => AngleExpr::number(rng.random_range(0..1000) as f64 / 8.0),
            _ => AngleExpr::number(rng.random_range(0.0..1e3)),
        };
    }
    if rng.random_bool(0.2) {
        return AngleExpr::neg(random_expr(rng, depth - 1));
    }
    let op = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div][rng.random_range(0..4)];
    AngleExpr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
}

/// Random sequence of up to eight events with expressions of depth ≤ 4.
pub fn random_sequence(rng: &mut StdRng) -> PulseSequence {
    let events = (0..rng.random_range(0..8))
        .map(|_| match rng.random_range(0..6) {
            0 => PulseEvent::GradientCrush,
            1 => PulseEvent::Tau,
            2 => PulseEvent::Delay(random_expr(rng, 4)),
            _ => {
                let axis = [Axis::X, Axis::Y, Axis::Z][rng.random_range(0..3)];
                let spins = [Spins::First, Spins::Second, Spins::Both][rng.random_range(0..3)];
                PulseEvent::rf(axis, spins, random_expr(rng, 4))
            }
        })
        .collect();
    let seq = PulseSequence::new(events);
    if rng.random_bool(0.2) {
        seq.with_name(format!("case {}", rng.random_range(0..100)))
    } else {
        seq
    }
}

/// Hand-built ASTs of the two reference sequences.
pub fn reference_asts() -> (PulseSequence, PulseSequence) {
    use AngleExpr as E;
    let pi = || E::symbol(Symbol::Pi);
    let n = || E::symbol(Symbol::N);
    let div = |a, b| E::binary(BinaryOp::Div, a, b);
    let mul = |a, b| E::binary(BinaryOp::Mul, a, b);
    let half_echo = || PulseEvent::Delay(div(n(), mul(E::number(12.0), E::symbol(Symbol::J))));

    let preparation = PulseSequence::new(vec![
        PulseEvent::rf(Axis::X, Spins::First, div(pi(), E::number(3.0))),
        PulseEvent::GradientCrush,
        PulseEvent::rf(Axis::X, Spins::First, div(pi(), E::number(4.0))),
        PulseEvent::Tau,
        PulseEvent::rf(Axis::Y, Spins::First, div(E::neg(pi()), E::number(4.0))),
        PulseEvent::GradientCrush,
    ]);
    let walk = PulseSequence::new(vec![
        PulseEvent::rf(Axis::X, Spins::Second, div(mul(n(), pi()), E::number(6.0))),
        PulseEvent::rf(Axis::Y, Spins::Both, div(pi(), E::number(2.0))),
        half_echo(),
        PulseEvent::rf(Axis::X, Spins::Both, pi()),
        half_echo(),
        PulseEvent::rf(Axis::Y, Spins::Both, div(E::neg(pi()), E::number(2.0))),
    ]);
    (preparation, walk)
}

/// Malformed programs with the byte offset each must be rejected at.
pub const MALFORMED_CASES: &[(&str, usize)] = &[
    ("Rq1(pi)", 1),
    ("Gz - Rx3(pi)", 7),
    ("Rx1((pi/2)", 3),
    ("Rx1(pi))", 7),
    ("Rx1(theta)", 4),
    ("Gx", 0),
    ("Rx1(pi) ; Gz", 8),
    ("Gz Gz", 3),
    ("Gz -", 4),
    ("- Gz", 0),
    ("Rx1()", 4),
    ("Rx1(pi/)", 7),
    ("d(", 2),
    ("Rx1 pi", 4),
];

pub fn parser_contract() -> Criterion {
    Criterion::evaluate(10, "pulse-program parser", || {
        let (preparation, walk) = reference_asts();
        let mut ast_mismatches = 0usize;
        if parse(PREPARATION_SEQUENCE).ok().as_ref() != Some(&preparation) {
            ast_mismatches += 1;
        }
        if parse(BARE_ECHO_WALK_SEQUENCE).ok().as_ref() != Some(&walk) {
            ast_mismatches += 1;
        }

        let mut rng = StdRng::seed_from_u64(0x5eed_0010);
        let round_trip_failures = (0..1000)
            .filter(|_| {
                let seq = random_sequence(&mut rng);
                parse(&render(&seq)).ok().as_ref() != Some(&seq)
            })
            .count();

        let position_failures = MALFORMED_CASES
            .iter()
            .filter(|(text, offset)| match parse(text) {
                Ok(_) => true,
                Err(e) => e.offset != *offset || e.offset > text.len(),
            })
            .count();

        Ok(vec![
            Check::at_most(
                "reference sequences with wrong AST",
                ast_mismatches as f64,
                0.0,
            ),
            Check::at_most(
                "round-trip failures out of 1000",
                round_trip_failures as f64,
                0.0,
            ),
            Check::at_most(
                "malformed inputs accepted or misplaced",
                position_failures as f64,
                0.0,
            ),
        ])
    })
}

/// During every delay of the preparation and walk sequences, no coherence
/// grows and no population moves.
pub fn noise_contraction(system: &SpinSystem<f64>, noise: NoiseModel) -> Criterion {
    Criterion::evaluate(11, "noise contraction", || {
        let bindings = Bindings::new().with_j(system.j_coupling);
        let prep = evaluate(&preparation_sequence(), &bindings)?;
        let mut growth = f64::NEG_INFINITY;
        let mut population_shift = 0.0f64;
        for n in 0..=MAX_WALK_INDEX {
            let walk = evaluate(&walk_sequence(n)?, &bindings)?;
            let mut rho = DeviationMatrix::thermal();
            for event in prep.events.iter().chain(&walk.events) {
                rho = match *event {
                    ConcreteEvent::Rf { axis, spins, angle } => apply_rf(&rho, spins, axis, angle),
                    ConcreteEvent::GradientCrush => apply_gradient_crush(&rho),
                    ConcreteEvent::Delay { seconds } => {
                        let after = apply_delay(&rho, seconds, system, noise)?;
                        for i in 0..4 {
                            for j in 0..4 {
                                let change = after.matrix()[(i, j)].modulus()
                                    - rho.matrix()[(i, j)].modulus();
                                if i == j {
                                    population_shift = population_shift.max(change.abs());
                                } else {
                                    growth = growth.max(change);
                                }
                            }
                        }
                        after
                    }
                };
            }
        }
        Ok(vec![
            Check::at_most("max coherence growth during a delay", growth, 1e-12),
            Check::at_most(
                "max population change during a delay",
                population_shift,
                1e-12,
            ),
        ])
    })
}

/// Criteria 1–10.
pub fn acceptance() -> Vec<Criterion> {
    vec![
        periodicity(),
        uniform_mixing(),
        localization(),
        oracle_agreement(),
        encoding_identities(),
        tvd_endpoints(),
        entanglement_correlation(),
        pulse_compilation(),
        noise_trend(),
        parser_contract(),
    ]
}

/// [`acceptance`] followed by [`noise_contraction`] for `system`.
pub fn run_all(system: &SpinSystem<f64>, noise: NoiseModel) -> Vec<Criterion> {
    let mut all = acceptance();
    all.push(noise_contraction(system, noise));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        assert!((least_squares_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_hits_both_ends() {
        let g: Vec<f64> = grid(0.0, PI, 100).collect();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[99], PI);
    }

    #[test]
    fn theory_curve_endpoints() {
        assert_eq!(entanglement_theory(0.0), (0.0, 0.75));
        let (s, d) = entanglement_theory(FRAC_PI_4);
        assert!((s - 1.0).abs() < 1e-15 && d.abs() < 1e-15);
    }

    #[test]
    fn corrected_walk_sequence_parses() {
        assert!(parse(crate::spin::WALK_SEQUENCE).is_ok());
    }
}
