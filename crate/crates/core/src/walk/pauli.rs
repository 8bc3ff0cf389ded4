//! Two-qubit encoding of the 4-cycle walk.
//!
//! Node `k` is stored big-endian on qubits `q1 q2` (`q1` most significant),
//! so node 2 is `|10⟩`.

use nalgebra::{Complex, DMatrix, Matrix2};

use super::graph::GeneratorMatrix;
use super::state::UnitaryMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cis, cone, cplx, czero, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLabel {
    Identity,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub fn matrix<T: Real>(self) -> Matrix2<Complex<T>> {
        let (o, l, i) = (czero::<T>(), cone::<T>(), cplx(T::zero(), T::one()));
        match self {
            PauliLabel::Identity => Matrix2::new(l, o, o, l),
            PauliLabel::X => Matrix2::new(o, l, l, o),
            PauliLabel::Y => Matrix2::new(o, -i, i, o),
            PauliLabel::Z => Matrix2::new(l, o, o, -l),
        }
    }

    /// Real part of the matrix; exact for I, X and Z.
    fn real_matrix<T: Real>(self) -> Matrix2<T> {
        self.matrix::<T>().map(|z| z.re)
    }
}

/// `first ⊗ second` with `first` acting on the most significant qubit.
pub fn pauli_product<T: Real>(first: PauliLabel, second: PauliLabel) -> DMatrix<Complex<T>> {
    let m = first.matrix::<T>().kronecker(&second.matrix::<T>());
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

fn real_pauli_product<T: Real>(first: PauliLabel, second: PauliLabel) -> DMatrix<T> {
    let m = first
        .real_matrix::<T>()
        .kronecker(&second.real_matrix::<T>());
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

/// `2γ I⊗I − γ(I⊗σx + σx⊗σx)`.
pub fn pauli_hamiltonian_cycle4<T: Real>(gamma: T) -> Result<GeneratorMatrix<T>> {
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "jump rate must be positive, got {gamma}"
        )));
    }
    use PauliLabel::{Identity as I, X};
    let h = real_pauli_product::<T>(I, I) * (T::lit(2.0) * gamma)
        - (real_pauli_product::<T>(I, X) + real_pauli_product::<T>(X, X)) * gamma;
    GeneratorMatrix::from_matrix(h)
}

/// `exp(iφ P)` for an involutory Pauli product `P`: `cos φ I + i sin φ P`.
fn pauli_exponential<T: Real>(
    phi: T,
    first: PauliLabel,
    second: PauliLabel,
) -> DMatrix<Complex<T>> {
    let p = pauli_product::<T>(first, second);
    let (s, c) = phi.sin_cos();
    DMatrix::identity(4, 4) * cplx(c, T::zero()) + p * cplx(T::zero(), s)
}

/// The two commuting factors `exp[iγt σx⊗σx]` and `exp[iγt I⊗σx]`.
pub fn cycle4_unitary_factors<T: Real>(
    gamma: T,
    t: T,
) -> Result<(UnitaryMatrix<T>, UnitaryMatrix<T>)> {
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "jump rate must be positive, got {gamma}"
        )));
    }
    if !(t >= T::zero() && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "time must be non-negative, got {t}"
        )));
    }
    use PauliLabel::{Identity as I, X};
    let phi = gamma * t;
    Ok((
        UnitaryMatrix::new_unchecked(pauli_exponential(phi, X, X)),
        UnitaryMatrix::new_unchecked(pauli_exponential(phi, I, X)),
    ))
}

/// `e^{−2iγt} exp[iγt σx⊗σx] exp[iγt I⊗σx]`, which equals `exp(−iHt)` for the
/// 4-cycle generator.
pub fn factored_unitary_cycle4<T: Real>(gamma: T, t: T) -> Result<UnitaryMatrix<T>> {
    let (xx, ix) = cycle4_unitary_factors(gamma, t)?;
    let phase = cis(-T::lit(2.0) * gamma * t);
    Ok(UnitaryMatrix::new_unchecked(
        xx.matrix() * ix.matrix() * phase,
    ))
}

/// Big-endian bit string of `node` over `width` qubits.
pub fn encode_node(node: usize, width: usize) -> Result<String> {
    if width == 0 || width >= usize::BITS as usize || node >= (1usize << width) {
        return Err(Error::InvalidArgument(format!(
            "node {node} does not fit in {width} qubits"
        )));
    }
    Ok(format!("{node:0width$b}"))
}
