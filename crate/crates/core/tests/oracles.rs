//! Walk results checked against the independent solvers in `ctqw_core::oracle`.

use std::f64::consts::{FRAC_PI_4, PI};

use approx::assert_abs_diff_eq;
use ctqw_core::oracle::{dense_unitary, rk4_master_equation};
use ctqw_core::walk::{
    classical_closed_form_cycle4, classical_evolve, entanglement_entropy,
    quantum_closed_form_cycle4, quantum_evolve, reduced_density_first, reduced_density_second,
    von_neumann_entropy, GeneratorMatrix, ProbabilityDistribution, StateVector, WalkGraph,
};
use nalgebra::DVector;

fn start() -> DVector<f64> {
    DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0])
}

#[test]
fn rk4_frozen_values_at_unit_time() {
    let h = GeneratorMatrix::cycle(4, 1.0).unwrap();
    let p = rk4_master_equation(h.matrix(), &start(), 1.0, 1e-4).unwrap();
    let frozen = [0.32224655, 0.24542109, 0.18691127, 0.24542109];
    for k in 0..4 {
        assert_abs_diff_eq!(p[k], frozen[k], epsilon = 1e-8);
    }
    let closed = classical_closed_form_cycle4(1.0, 1.0).unwrap();
    for k in 0..4 {
        assert_abs_diff_eq!(closed[k], p[k], epsilon = 1e-10);
    }
}

#[test]
fn rk4_matches_eigen_path_on_other_graphs() {
    let graphs = [
        WalkGraph::complete(4, 0.5).unwrap(),
        WalkGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], 1.3).unwrap(),
        WalkGraph::cycle(7, 2.0).unwrap(),
    ];
    for g in &graphs {
        let h = GeneratorMatrix::from_graph(g);
        let n = g.num_nodes();
        let p0 = ProbabilityDistribution::point(n, 0).unwrap();
        for t in [0.1, 0.9, 2.5] {
            let eig = classical_evolve(&h, &p0, t).unwrap();
            let rk4 =
                rk4_master_equation(h.matrix(), &p0.to_vector(), t, 1e-4 / g.jump_rate()).unwrap();
            for k in 0..n {
                assert_abs_diff_eq!(eig[k], rk4[k], epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn classical_walk_relaxes_to_uniform() {
    let h = GeneratorMatrix::cycle(4, 1.0).unwrap();
    let p = classical_evolve(&h, &ProbabilityDistribution::point(4, 0).unwrap(), 20.0).unwrap();
    for k in 0..4 {
        assert_abs_diff_eq!(p[k], 0.25, epsilon = 1e-9);
    }
}

#[test]
fn dense_exponential_matches_closed_form_state() {
    let h = GeneratorMatrix::cycle(4, 0.8).unwrap();
    let psi0 = StateVector::basis(4, 0).unwrap();
    for t in [0.0, 0.3, 1.0, PI / 1.6, 3.7] {
        let dense = dense_unitary(h.matrix(), t).unwrap() * psi0.amplitudes();
        let closed = quantum_closed_form_cycle4(0.8, t).unwrap();
        let eig = quantum_evolve(&h, &psi0, t).unwrap();
        for k in 0..4 {
            assert!((dense[k] - closed[k]).norm() < 1e-12);
            assert!((eig[k] - closed[k]).norm() < 1e-10);
        }
    }
}

#[test]
fn probabilities_at_sixth_and_third_of_pi() {
    let p = quantum_closed_form_cycle4(1.0, PI / 6.0)
        .unwrap()
        .probabilities()
        .unwrap();
    for (got, want) in p
        .as_slice()
        .iter()
        .zip([9.0 / 16.0, 3.0 / 16.0, 1.0 / 16.0, 3.0 / 16.0])
    {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
    let p = quantum_closed_form_cycle4(1.0, PI / 3.0)
        .unwrap()
        .probabilities()
        .unwrap();
    for (got, want) in p
        .as_slice()
        .iter()
        .zip([1.0 / 16.0, 3.0 / 16.0, 9.0 / 16.0, 3.0 / 16.0])
    {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
}

#[test]
fn semigroup_property() {
    let h = GeneratorMatrix::cycle(4, 1.0).unwrap();
    let p0 = ProbabilityDistribution::point(4, 0).unwrap();
    let psi0 = StateVector::basis(4, 0).unwrap();
    for (t1, t2) in [(0.2, 0.5), (1.1, 0.05), (2.0, 3.0)] {
        let split = classical_evolve(&h, &classical_evolve(&h, &p0, t1).unwrap(), t2).unwrap();
        let joint = classical_evolve(&h, &p0, t1 + t2).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(split[k], joint[k], epsilon = 1e-9);
        }
        let split = quantum_evolve(&h, &quantum_evolve(&h, &psi0, t1).unwrap(), t2).unwrap();
        let joint = quantum_evolve(&h, &psi0, t1 + t2).unwrap();
        assert!(split.max_distance(&joint) < 1e-9);
    }
}

#[test]
fn conservation_and_mirror_symmetry_over_four_periods() {
    for gamma in [1.0, 2.5] {
        let h = GeneratorMatrix::cycle(4, gamma).unwrap();
        let p0 = ProbabilityDistribution::point(4, 0).unwrap();
        let psi0 = StateVector::basis(4, 0).unwrap();
        for k in 0..100 {
            let t = 4.0 * PI / gamma * k as f64 / 99.0;
            let p = classical_evolve(&h, &p0, t).unwrap();
            assert_abs_diff_eq!(p.as_slice().iter().sum::<f64>(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(p[1], p[3], epsilon = 1e-12);

            let psi = quantum_evolve(&h, &psi0, t).unwrap();
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-10);
            let q = psi.probabilities().unwrap();
            assert_abs_diff_eq!(q[1], q[3], epsilon = 1e-12);
        }
    }
}

#[test]
fn even_multiples_of_quarter_period_are_localized() {
    let h = GeneratorMatrix::cycle(4, 1.0).unwrap();
    let psi0 = StateVector::basis(4, 0).unwrap();
    for m in [2.0, 4.0, 6.0] {
        let p = quantum_evolve(&h, &psi0, m * FRAC_PI_4)
            .unwrap()
            .probabilities()
            .unwrap();
        let peak = p.as_slice().iter().copied().fold(0.0, f64::max);
        assert_abs_diff_eq!(peak, 1.0, epsilon = 1e-10);
    }
}

#[test]
fn entropy_is_bounded_and_symmetric_across_the_cut() {
    for k in 0..60 {
        let t = k as f64 * 0.07;
        let psi = quantum_closed_form_cycle4(1.0, t).unwrap();
        let s = entanglement_entropy(&psi, 1).unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&s), "S = {s}");
        let other = von_neumann_entropy(&reduced_density_second(&psi, 1).unwrap());
        assert_abs_diff_eq!(s, other, epsilon = 1e-10);
        let first = von_neumann_entropy(&reduced_density_first(&psi, 1).unwrap());
        assert_abs_diff_eq!(s, first, epsilon = 0.0);
    }
}
