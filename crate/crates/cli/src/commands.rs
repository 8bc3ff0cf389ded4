use std::f64::consts::{FRAC_PI_4, PI};

use anyhow::Context;
use ctqw_core::spin::{experiment_tvd, ideal_populations, run_experiment, MAX_WALK_INDEX};
use ctqw_core::verify::{self, Criterion};
use ctqw_core::walk::{
    observables_at, tvd_to_uniform, GeneratorMatrix, ProbabilityDistribution, Spectrum, StateVector,
};
use ctqw_core::PopulationReadout;
use serde::Serialize;

use crate::config::{RunConfig, UsageError};
use crate::table::CsvTable;

/// `points` evenly spaced values from `lo` to `hi`, both included.
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

fn node_header(n: usize) -> Vec<String> {
    std::iter::once("t".to_owned())
        .chain((0..n).map(|k| format!("P{k}")))
        .collect()
}

fn require_cycle4(cfg: &RunConfig) -> Result<(), UsageError> {
    if cfg.n_nodes == 4 {
        Ok(())
    } else {
        Err(UsageError(format!(
            "this command models the 4-cycle; n_nodes is {}",
            cfg.n_nodes
        )))
    }
}

/// `classical.csv` over `γt ∈ [0, 3]` and `quantum.csv` over `γt ∈ [0, π]`.
pub fn walk(cfg: &RunConfig) -> anyhow::Result<Vec<(&'static str, CsvTable)>> {
    let n = cfg.n_nodes;
    let h = GeneratorMatrix::cycle(n, cfg.gamma)?;
    let spectrum = Spectrum::new(&h);
    let p0 = ProbabilityDistribution::point(n, 0)?;
    let psi0 = StateVector::basis(n, 0)?;

    let mut classical = CsvTable::new(&node_header(n));
    for gt in grid(0.0, 3.0, cfg.grid_points) {
        let t = gt / cfg.gamma;
        let p = spectrum.classical(&p0, t)?;
        classical.push(std::iter::once(t).chain(p.into_vec()).collect())?;
    }

    let mut quantum = CsvTable::new(&node_header(n));
    for gt in grid(0.0, PI, cfg.grid_points) {
        let t = gt / cfg.gamma;
        let p = spectrum.quantum(&psi0, t)?.probabilities()?;
        quantum.push(std::iter::once(t).chain(p.into_vec()).collect())?;
    }
    Ok(vec![("classical.csv", classical), ("quantum.csv", quantum)])
}

fn readouts(
    cfg: &RunConfig,
    ns: impl IntoIterator<Item = i64>,
) -> anyhow::Result<Vec<(i64, PopulationReadout)>> {
    let system = cfg.spin_system();
    ns.into_iter()
        .map(|n| {
            let r = run_experiment(n, &system, cfg.noise_model())
                .with_context(|| format!("experiment n={n}"))?;
            Ok((n, r))
        })
        .collect()
}

fn walk_phase(n: i64) -> f64 {
    n as f64 * PI / 12.0
}

fn entropy_at(gt: f64) -> anyhow::Result<f64> {
    Ok(observables_at(1.0, gt)?
        .entanglement
        .expect("4-cycle has two qubits"))
}

/// `fig3.csv`: distance to uniform for both walks over one quantum period, then
/// one simulated experiment row per `n = 0..12` flagged `expt = 1`.
///
/// `fig4.csv`: the `(S, Δ)` curve over `γt ∈ [0, π/4]`, then experiment rows
/// for `n = 1..12` placed at the theoretical entropy.
pub fn figures(cfg: &RunConfig) -> anyhow::Result<Vec<(&'static str, CsvTable)>> {
    require_cycle4(cfg)?;
    let h = GeneratorMatrix::cycle(4, cfg.gamma)?;
    let spectrum = Spectrum::new(&h);
    let p0 = ProbabilityDistribution::point(4, 0)?;
    let psi0 = StateVector::basis(4, 0)?;
    let classical_tvd =
        |t: f64| -> anyhow::Result<f64> { Ok(tvd_to_uniform(&spectrum.classical(&p0, t)?)) };
    let quantum_tvd = |t: f64| -> anyhow::Result<f64> {
        Ok(tvd_to_uniform(
            &spectrum.quantum(&psi0, t)?.probabilities()?,
        ))
    };

    let mut fig3 = CsvTable::new(&["t", "tvd_classical", "tvd_quantum", "expt"]);
    for gt in grid(0.0, PI, cfg.grid_points) {
        let t = gt / cfg.gamma;
        fig3.push(vec![t, classical_tvd(t)?, quantum_tvd(t)?, 0.0])?;
    }
    for (n, r) in readouts(cfg, 0..=MAX_WALK_INDEX)? {
        let t = walk_phase(n) / cfg.gamma;
        fig3.push(vec![t, classical_tvd(t)?, experiment_tvd(&r), 1.0])?;
    }

    let mut fig4 = CsvTable::new(&["S", "tvd_quantum_theory", "tvd_quantum", "expt"]);
    for gt in grid(0.0, FRAC_PI_4, cfg.grid_points) {
        let o = observables_at(1.0, gt)?;
        let s = o.entanglement.expect("4-cycle has two qubits");
        fig4.push(vec![s, o.tvd_to_uniform, o.tvd_to_uniform, 0.0])?;
    }
    for (n, r) in readouts(cfg, 1..=MAX_WALK_INDEX)? {
        let ideal = tvd_to_uniform(&ideal_populations(n)?);
        fig4.push(vec![
            entropy_at(walk_phase(n))?,
            ideal,
            experiment_tvd(&r),
            1.0,
        ])?;
    }
    Ok(vec![("fig3.csv", fig3), ("fig4.csv", fig4)])
}

pub fn check_indices(ns: &[i64]) -> Result<(), UsageError> {
    if ns.is_empty() {
        return Err(UsageError("--n needs at least one value".into()));
    }
    match ns.iter().find(|n| !(0..=MAX_WALK_INDEX).contains(*n)) {
        Some(n) => Err(UsageError(format!(
            "experiment index {n} outside 0..={MAX_WALK_INDEX}"
        ))),
        None => Ok(()),
    }
}

/// One emulated experiment per index.
pub fn nmr(cfg: &RunConfig, ns: &[i64]) -> anyhow::Result<CsvTable> {
    check_indices(ns)?;
    let mut table = CsvTable::new(&[
        "n",
        "gamma_t",
        "P0",
        "P1",
        "P2",
        "P3",
        "tvd",
        "tvd_ideal",
        "S_theory",
    ]);
    for (n, r) in readouts(cfg, ns.iter().copied())? {
        let gt = walk_phase(n);
        let mut row = vec![n as f64, gt];
        row.extend_from_slice(r.populations.as_slice());
        row.push(experiment_tvd(&r));
        row.push(tvd_to_uniform(&ideal_populations(n)?));
        row.push(entropy_at(gt)?);
        table.push(row)?;
    }
    Ok(table)
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub label: String,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub criterion: String,
    pub passed: bool,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub error: Option<String>,
    pub checks: Vec<CheckReport>,
}

impl From<&Criterion> for CriterionReport {
    fn from(c: &Criterion) -> Self {
        let headline = c.headline();
        Self {
            id: c.id,
            criterion: c.name.to_owned(),
            passed: c.passed(),
            measured: headline.map(|h| h.measured),
            tolerance: headline.map(|h| h.limit),
            error: c.error.clone(),
            checks: c
                .checks
                .iter()
                .map(|k| CheckReport {
                    label: k.label.clone(),
                    measured: k.measured,
                    limit: k.limit,
                    passed: k.passed,
                })
                .collect(),
        }
    }
}

/// Runs the suite; the last criterion uses the configured spin system.
pub fn verify(cfg: &RunConfig) -> Vec<Criterion> {
    verify::run_all(&cfg.spin_system(), cfg.noise_model())
}
