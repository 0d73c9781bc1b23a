//! Elementwise square root and the two distances built on it.
//!
//! The square root here is taken entry by entry in the reference basis,
//! `<i|sqrt(a)|j> = sqrt(<i|a|j>)`, not the operator square root. The branch
//! is fixed so the result stays Hermitian: real nonnegative roots on the
//! diagonal, principal roots on the upper triangle, conjugate mirror below.
//! With that choice `s_ij * s_ji = |rho_ij|` for every pair, which is what
//! turns `tr[(sqrt(rho) - sqrt(rho_d))^2]` into the l1 coherence.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};

/// Imaginary residue tolerated in quantities that must be real.
pub const IMAG_TOL: f64 = 1e-10;

/// Diagonal entries below this are treated as rounding noise and clamped.
const NEG_DIAG_TOL: f64 = 1e-9;

/// How off-diagonal roots are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtBranch {
    /// Principal root above the diagonal, conjugate mirror below.
    #[default]
    HermitianConsistent,
    /// Principal root on every entry independently. Breaks `s_ij s_ji =
    /// |rho_ij|` on negative-real off-diagonals; kept as a fault fixture.
    NaivePrincipal,
}

/// Entrywise square root of a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtMatrix {
    entries: DMatrix<Complex64>,
    basis: String,
}

impl SqrtMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// `tr(S^2)`, the purity of the square-root matrix.
    pub fn trace_of_square(&self) -> Complex64 {
        trace_of_product(&self.entries, &self.entries)
    }
}

/// Hermitian-consistent elementwise root.
pub fn hermitian_elementwise_sqrt(rho: &DensityMatrix) -> Result<SqrtMatrix> {
    elementwise_sqrt(rho, SqrtBranch::HermitianConsistent)
}

/// Elementwise root with an explicit branch rule.
pub fn elementwise_sqrt(rho: &DensityMatrix, branch: SqrtBranch) -> Result<SqrtMatrix> {
    let n = rho.dim();
    let m = rho.matrix();
    let mut s = DMatrix::zeros(n, n);
    for j in 0..n {
        let d = m[(j, j)].re;
        if d < -NEG_DIAG_TOL {
            return Err(Error::InvalidState(format!(
                "negative population {d:e} at index {j}"
            )));
        }
        s[(j, j)] = Complex64::new(d.max(0.0).sqrt(), 0.0);
    }
    match branch {
        SqrtBranch::HermitianConsistent => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let root = m[(i, j)].sqrt();
                    s[(i, j)] = root;
                    s[(j, i)] = root.conj();
                }
            }
        }
        SqrtBranch::NaivePrincipal => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s[(i, j)] = m[(i, j)].sqrt();
                    }
                }
            }
        }
    }
    Ok(SqrtMatrix {
        entries: s,
        basis: rho.basis().to_owned(),
    })
}

/// `tr(A B) = sum_jk A_jk B_kj`.
pub fn trace_of_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            acc += a[(j, k)] * b[(k, j)];
        }
    }
    acc
}

/// Converts a trace that must be real, erroring on a large imaginary part.
pub(crate) fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue(z.im.abs()));
    }
    Ok(z.re)
}

fn check_compatible(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.basis() != b.basis() {
        return Err(Error::BasisMismatch(a.basis().into(), b.basis().into()));
    }
    Ok(())
}

/// `tr[(A - B)^2]` for Hermitian-or-not square matrices, as a complex number.
pub(crate) fn trace_sq_of_difference(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let d = a - b;
    trace_of_product(&d, &d)
}

/// Squared Hellinger-like distance `tr[(sqrt(a) - sqrt(b))^2]`.
pub fn hellinger_distance_sq(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    hellinger_distance_sq_with(a, b, SqrtBranch::HermitianConsistent)
}

pub fn hellinger_distance_sq_with(
    a: &DensityMatrix,
    b: &DensityMatrix,
    branch: SqrtBranch,
) -> Result<f64> {
    check_compatible(a, b)?;
    let sa = elementwise_sqrt(a, branch)?;
    let sb = elementwise_sqrt(b, branch)?;
    let v = real_part(trace_sq_of_difference(&sa.entries, &sb.entries))?;
    Ok(v.max(0.0))
}

/// Squared Hilbert-Schmidt distance `tr[(a - b)^2]`.
pub fn hilbert_schmidt_distance_sq(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_compatible(a, b)?;
    let v = real_part(trace_sq_of_difference(a.matrix(), b.matrix()))?;
    Ok(v.max(0.0))
}
