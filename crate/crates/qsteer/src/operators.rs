//! Generalized Pauli operators on adjacent level pairs and their
//! closed-form exponentials.
//!
//! For an N-level system and k in [0, N-2]:
//!
//! ```text
//! x_{N,k} = |k><k+1| + |k+1><k|
//! y_{N,k} = i(|k+1><k| - |k><k+1|)
//! z_{N,k} = I_N - 2|k+1><k+1|
//! I_{N,k} = |k><k| + |k+1><k+1|
//! ```
//!
//! For N = 2 these reduce to the standard Pauli matrices. Because each
//! control Hamiltonian is constant in direction, the propagator of a
//! single pulse is `exp(-i dF H)` where dF is the accumulated pulse area;
//! `expm_z` and `expm_y` evaluate that exponential in closed form, and
//! `expm_oracle` provides an independent general-purpose check.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Array2<Complex64>;

/// Which of the four adjacent-pair operators to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    X,
    Y,
    Z,
    Isub,
}

fn check_index(dim: usize, index: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("dim must be >= 2, got {dim}")));
    }
    if index > dim - 2 {
        return Err(Error::InvalidInput(format!(
            "operator index {index} out of range for dim {dim} (max {})",
            dim - 2
        )));
    }
    Ok(())
}

/// Dense matrix of the requested operator. Always Hermitian.
pub fn build(kind: OperatorKind, dim: usize, index: usize) -> Result<CMatrix> {
    check_index(dim, index)?;
    let mut m = Array2::zeros((dim, dim));
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let k = index;
    match kind {
        OperatorKind::X => {
            m[[k, k + 1]] = one;
            m[[k + 1, k]] = one;
        }
        OperatorKind::Y => {
            m[[k + 1, k]] = i;
            m[[k, k + 1]] = -i;
        }
        OperatorKind::Z => {
            for j in 0..dim {
                m[[j, j]] = one;
            }
            m[[k + 1, k + 1]] = -one;
        }
        OperatorKind::Isub => {
            m[[k, k]] = one;
            m[[k + 1, k + 1]] = one;
        }
    }
    Ok(m)
}

/// Closed form of `exp(-i dF z_{N,k})`:
/// `e^{-i dF} { I_N + (e^{i 2 dF} - 1) |k+1><k+1| }`.
pub fn expm_z(delta_f: f64, dim: usize, index: usize) -> Result<CMatrix> {
    check_index(dim, index)?;
    let mut m = Array2::zeros((dim, dim));
    let down = Complex64::from_polar(1.0, -delta_f);
    let up = Complex64::from_polar(1.0, delta_f);
    for j in 0..dim {
        m[[j, j]] = down;
    }
    m[[index + 1, index + 1]] = up;
    Ok(m)
}

/// Closed form of `exp(-i dF y_{N,k})`:
/// `I_{N,k} cos(dF) - i y_{N,k} sin(dF) + (I_N - I_{N,k})`.
///
/// Acts as the identity outside the {k, k+1} subspace.
pub fn expm_y(delta_f: f64, dim: usize, index: usize) -> Result<CMatrix> {
    check_index(dim, index)?;
    let mut m = Array2::zeros((dim, dim));
    let one = Complex64::new(1.0, 0.0);
    for j in 0..dim {
        m[[j, j]] = one;
    }
    let (c, s) = (delta_f.cos(), delta_f.sin());
    let k = index;
    m[[k, k]] = Complex64::new(c, 0.0);
    m[[k + 1, k + 1]] = Complex64::new(c, 0.0);
    m[[k, k + 1]] = Complex64::new(-s, 0.0);
    m[[k + 1, k]] = Complex64::new(s, 0.0);
    Ok(m)
}

/// General-purpose matrix exponential by scaling-and-squaring with a
/// truncated Taylor series (terms added until their norm drops below
/// 1e-16). Independent of the closed forms above.
pub fn expm_oracle(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm_oracle requires a square matrix");

    // scale so the 1-norm is <= 1/2
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| m[[i, j]].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0);
    let a = m.mapv(|x| x * scale);

    let mut result = Array2::eye(n);
    let mut term: CMatrix = Array2::eye(n);
    for k in 1..200 {
        term = term.dot(&a) / Complex64::new(k as f64, 0.0);
        result += &term;
        let tnorm: f64 = term.iter().map(|x| x.norm()).sum();
        if tnorm < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Max entrywise absolute difference of two matrices.
pub fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max entrywise deviation of `U^dagger U` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let udag = u.t().mapv(|x| x.conj());
    let prod = udag.dot(u);
    let eye: CMatrix = Array2::eye(n);
    max_entry_diff(&prod, &eye)
}
