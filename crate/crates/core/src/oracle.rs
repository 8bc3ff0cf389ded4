//! Reference solvers that share no code with the eigendecomposition path.
//!
//! Used by the verification suite to cross-check [`crate::walk`]; slow and
//! only as accurate as their step size, so not meant for production sweeps.

use nalgebra::{Complex, ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};

fn check_args<T: Real>(h: &DMatrix<T>, len: usize, t: T) -> Result<()> {
    if !h.is_square() || h.nrows() != len {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            actual: len,
        });
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// Classic fourth-order Runge–Kutta for `dp/dt = −H p` on `[0, t]`, with
/// equal steps no longer than `max_step`.
pub fn rk4_master_equation<T: Real>(
    h: &DMatrix<T>,
    p0: &DVector<T>,
    t: T,
    max_step: T,
) -> Result<DVector<T>> {
    check_args(h, p0.len(), t)?;
    if !(max_step > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {max_step}"
        )));
    }
    let steps = (t / max_step).ceil().to_usize().unwrap_or(0).max(1);
    let dt = t / T::from_usize(steps).unwrap();
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let f = |p: &DVector<T>| -(h * p);

    let mut p = p0.clone();
    for _ in 0..steps {
        let k1 = f(&p);
        let k2 = f(&(&p + &k1 * (dt * half)));
        let k3 = f(&(&p + &k2 * (dt * half)));
        let k4 = f(&(&p + &k3 * dt));
        p += (k1 + k2 * T::lit(2.0) + k3 * T::lit(2.0) + k4) * (dt * sixth);
    }
    Ok(p)
}

/// `exp(−i H t)` by Taylor series with scaling and squaring.
pub fn dense_unitary<T: Real>(h: &DMatrix<T>, t: T) -> Result<DMatrix<Complex<T>>> {
    check_args(h, h.nrows(), t)?;
    let n = h.nrows();
    let a: DMatrix<Complex<T>> = h.map(|x| cplx(T::zero(), -x * t));

    let norm = a
        .iter()
        .map(|z| z.modulus())
        .fold(T::zero(), |m, x| m.max(x))
        * T::from_usize(n).unwrap();
    let mut squarings = 0u32;
    let mut scale = T::one();
    while norm * scale > T::lit(0.25) {
        scale *= T::lit(0.5);
        squarings += 1;
    }
    let a = a * cplx(scale, T::zero());

    let mut sum = DMatrix::<Complex<T>>::identity(n, n);
    let mut term = sum.clone();
    for k in 1..=30 {
        term = &term * &a * cplx(T::one() / T::from_i32(k).unwrap(), T::zero());
        sum += &term;
        if term
            .iter()
            .all(|z| z.modulus() < T::default_epsilon() * T::lit(1e-3))
        {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cycle4() -> DMatrix<f64> {
        DMatrix::from_row_slice(
            4,
            4,
            &[
                2.0, -1.0, 0.0, -1.0, //
                -1.0, 2.0, -1.0, 0.0, //
                0.0, -1.0, 2.0, -1.0, //
                -1.0, 0.0, -1.0, 2.0,
            ],
        )
    }

    #[test]
    fn rk4_two_state_decay() {
        // dp/dt = −H p with H = [[1, −1], [−1, 1]] relaxes the imbalance as e^{−2t}.
        let h = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let p = rk4_master_equation(&h, &DVector::from_vec(vec![1.0, 0.0]), 0.7, 1e-3).unwrap();
        assert_abs_diff_eq!(p[0], 0.5 + 0.5 * (-1.4f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(p[0] + p[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn dense_unitary_period() {
        let u = dense_unitary(&cycle4(), std::f64::consts::PI).unwrap();
        let dev = (u - DMatrix::identity(4, 4))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn rejects_bad_arguments() {
        let p0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        assert!(rk4_master_equation(&cycle4(), &p0, -1.0, 1e-3).is_err());
        assert!(rk4_master_equation(&cycle4(), &p0, 1.0, 0.0).is_err());
        assert!(dense_unitary(&cycle4(), f64::NAN).is_err());
    }
}
