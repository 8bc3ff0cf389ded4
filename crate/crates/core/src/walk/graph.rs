use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Undirected simple graph with a uniform jump rate on every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkGraph<T> {
    adjacency: DMatrix<u8>,
    jump_rate: T,
}

impl<T: Real> WalkGraph<T> {
    /// Builds a graph from a 0/1 adjacency matrix.
    ///
    /// The matrix must be square, symmetric, have a zero diagonal and at
    /// least two nodes.
    pub fn new(adjacency: DMatrix<u8>, jump_rate: T) -> Result<Self> {
        let n = adjacency.nrows();
        if adjacency.ncols() != n {
            return Err(Error::InvalidGraph(format!(
                "adjacency is {}x{}, not square",
                n,
                adjacency.ncols()
            )));
        }
        if n < 2 {
            return Err(Error::InvalidGraph(format!("{n} nodes; need at least 2")));
        }
        check_rate(jump_rate)?;
        for i in 0..n {
            if adjacency[(i, i)] != 0 {
                return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
            }
            for j in 0..n {
                let a = adjacency[(i, j)];
                if a > 1 {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency entry ({i},{j}) = {a} is not 0 or 1"
                    )));
                }
                if a != adjacency[(j, i)] {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            adjacency,
            jump_rate,
        })
    }

    pub fn from_edges(num_nodes: usize, edges: &[(usize, usize)], jump_rate: T) -> Result<Self> {
        let mut adjacency = DMatrix::zeros(num_nodes, num_nodes);
        for &(a, b) in edges {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) references a node outside 0..{num_nodes}"
                )));
            }
            adjacency[(a, b)] = 1;
            adjacency[(b, a)] = 1;
        }
        Self::new(adjacency, jump_rate)
    }

    /// Ring of `n` nodes where node `k` touches `(k ± 1) mod n`.
    pub fn cycle(n: usize, jump_rate: T) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "a cycle needs at least 3 nodes, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n)).collect();
        Self::from_edges(n, &edges, jump_rate)
    }

    pub fn complete(n: usize, jump_rate: T) -> Result<Self> {
        let adjacency = DMatrix::from_fn(n, n, |i, j| u8::from(i != j));
        Self::new(adjacency, jump_rate)
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<u8> {
        &self.adjacency
    }

    pub fn jump_rate(&self) -> T {
        self.jump_rate
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency.row(node).iter().map(|&a| a as usize).sum()
    }
}

fn check_rate<T: Real>(rate: T) -> Result<()> {
    if rate > T::zero() && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "jump rate must be positive and finite, got {rate}"
        )))
    }
}

/// Real symmetric generator `H = γ(D − A)` of a walk.
///
/// Drives the classical master equation `dP/dt = −H P` and serves as the
/// Hamiltonian of the quantum walk.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix<T: Real> {
    entries: DMatrix<T>,
}

impl<T: Real> GeneratorMatrix<T> {
    pub fn from_graph(graph: &WalkGraph<T>) -> Self {
        let n = graph.num_nodes();
        let rate = graph.jump_rate();
        let entries = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                rate * T::from_usize(graph.degree(i)).unwrap()
            } else if graph.adjacency()[(i, j)] == 1 {
                -rate
            } else {
                T::zero()
            }
        });
        Self { entries }
    }

    /// Generator of the `n`-node cycle; `n ≥ 3`.
    pub fn cycle(n: usize, gamma: T) -> Result<Self> {
        Ok(Self::from_graph(&WalkGraph::cycle(n, gamma)?))
    }

    /// Wraps a matrix that already satisfies the generator invariants:
    /// symmetric, zero row sums, non-positive off-diagonal entries.
    pub fn from_matrix(entries: DMatrix<T>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n || n == 0 {
            return Err(Error::InvalidArgument(
                "generator must be square and nonempty".into(),
            ));
        }
        let tol = T::tolerance(1e-12);
        let scale = entries.amax().max(T::one());
        for i in 0..n {
            let row_sum = entries.row(i).sum();
            if row_sum.abs() > tol * scale {
                return Err(Error::InvalidArgument(format!("row {i} sums to {row_sum}")));
            }
            for j in 0..n {
                if (entries[(i, j)] - entries[(j, i)]).abs() > tol * scale {
                    return Err(Error::InvalidArgument(format!(
                        "not symmetric at ({i},{j})"
                    )));
                }
                if i != j && entries[(i, j)] > T::zero() {
                    return Err(Error::InvalidArgument(format!(
                        "positive off-diagonal entry at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.entries
    }
}
