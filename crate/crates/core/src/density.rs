//! Density matrices and pure states over a fixed, ordered reference basis.
//!
//! A [`DensityMatrix`] is only ever constructed through validation (or from a
//! normalized [`PureState`]), so every quantifier downstream may assume the
//! Hermitian, unit-trace and positive-semidefinite invariants.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Basis label used when none is given explicitly.
pub const DEFAULT_BASIS: &str = "computational";

/// Numerical tolerances shared by validation and the quantifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm_tol: f64,
    pub trace_tol: f64,
    pub norm_tol: f64,
    pub psd_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            trace_tol: 1e-10,
            norm_tol: 1e-10,
            psd_tol: 1e-9,
        }
    }
}

/// Record of every invariant a candidate density matrix violates.
///
/// Each field is `Some(magnitude)` when the corresponding invariant fails.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub hermiticity: Option<f64>,
    /// `|tr rho - 1|`, including any imaginary part of the trace.
    pub trace: Option<f64>,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: Option<f64>,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        self.hermiticity.is_none() && self.trace.is_none() && self.min_eigenvalue.is_none()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(h) = self.hermiticity {
            parts.push(format!("not Hermitian (max asymmetry {h:e})"));
        }
        if let Some(t) = self.trace {
            parts.push(format!("trace deviates from 1 by {t:e}"));
        }
        if let Some(e) = self.min_eigenvalue {
            parts.push(format!("not positive semidefinite (min eigenvalue {e:e})"));
        }
        if parts.is_empty() {
            write!(f, "no violations")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Checks the three density-matrix invariants without constructing anything.
///
/// Returns a structural error for non-square input; invariant violations are
/// reported in the returned [`Diagnostics`].
pub fn diagnose(entries: &DMatrix<Complex64>, tol: &Tolerances) -> Result<Diagnostics> {
    let (rows, cols) = entries.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let n = rows;
    let mut diag = Diagnostics::default();

    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            asym = asym.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
        }
    }
    if asym > tol.herm_tol || !asym.is_finite() {
        diag.hermiticity = Some(asym);
    }

    let trace: Complex64 = (0..n).map(|i| entries[(i, i)]).sum();
    let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
    if trace_dev > tol.trace_tol || !trace_dev.is_finite() {
        diag.trace = Some(trace_dev);
    }

    // Eigenvalues of the Hermitian part; asymmetry is reported separately.
    let herm = (entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
    let min_eig = herm
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -tol.psd_tol || !min_eig.is_finite() {
        diag.min_eigenvalue = Some(min_eig);
    }
    Ok(diag)
}

/// Hermitian, unit-trace, positive-semidefinite matrix over a labelled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    basis: String,
}

impl DensityMatrix {
    /// Validates `entries` and wraps them. Tiny negative eigenvalues within
    /// `psd_tol` are accepted as-is; the matrix is never projected.
    pub fn new(
        entries: DMatrix<Complex64>,
        basis: impl Into<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let diag = diagnose(&entries, tol)?;
        if !diag.is_clean() {
            return Err(Error::InvalidDensity(diag));
        }
        Ok(Self {
            entries,
            basis: basis.into(),
        })
    }

    /// Validates with default tolerances in the default basis.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        Self::new(entries, DEFAULT_BASIS, &Tolerances::default())
    }

    /// Builds from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::from_matrix(m)
    }

    /// `|psi><psi|` for a normalized pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self {
            entries: v * v.adjoint(),
            basis: psi.basis().to_owned(),
        }
    }

    /// Diagonal density matrix from a probability vector.
    pub fn from_probabilities(p: &[f64], basis: impl Into<String>, tol: &Tolerances) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("empty probability vector".into()));
        }
        let v: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(
            DMatrix::from_diagonal(&DVector::from_vec(v)),
            basis,
            tol,
        )
    }

    /// Wraps entries already known to be valid.
    pub(crate) fn from_valid(entries: DMatrix<Complex64>, basis: impl Into<String>) -> Self {
        Self {
            entries,
            basis: basis.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Populations `rho_jj` (real parts).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// `sum_{j != k} |rho_jk|`.
    pub fn off_diagonal_l1(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    s += self.entries[(j, k)].norm();
                }
            }
        }
        s
    }

    /// `sum_{j != k} |rho_jk|^2`.
    pub fn off_diagonal_l2_sq(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    s += self.entries[(j, k)].norm_sqr();
                }
            }
        }
        s
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_l1() <= tol
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Conjugation `U rho U^dagger`; `u` must be unitary.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(u.nrows(), self.dim()));
        }
        let m = u * &self.entries * u.adjoint();
        Self::new(m, self.basis.clone(), &Tolerances::default())
    }
}

/// Returns the diagonal part `rho_d` of `rho` in its own basis.
pub fn diagonal_part(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rho.entries[(i, i)].re, 0.0);
    }
    DensityMatrix::from_valid(m, rho.basis.clone())
}

/// `I/N`, the maximally mixed state.
pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
    maximally_mixed_in(n, DEFAULT_BASIS)
}

pub fn maximally_mixed_in(n: usize, basis: impl Into<String>) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let m = DMatrix::from_diagonal_element(n, n, Complex64::new(1.0 / n as f64, 0.0));
    Ok(DensityMatrix::from_valid(m, basis))
}

/// Normalized amplitude vector, possibly a truncation of an
/// infinite-dimensional state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
    basis: String,
    tail_mass: f64,
}

impl PureState {
    /// Validates `sum |c_j|^2 = 1` within `norm_tol`. Never renormalizes.
    pub fn new(amplitudes: Vec<Complex64>, basis: impl Into<String>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > tol.norm_tol {
            return Err(Error::InvalidState(format!(
                "amplitudes not normalized: sum |c|^2 = {norm:.17}"
            )));
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
            basis: basis.into(),
            tail_mass: (1.0 - norm).max(0.0),
        })
    }

    pub fn from_real(amplitudes: &[f64], basis: impl Into<String>) -> Result<Self> {
        let v = amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(v, basis, &Tolerances::default())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, j: usize) -> Complex64 {
        self.amplitudes.get(j).copied().unwrap_or_default()
    }

    /// Probability mass missing from the retained amplitudes.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Multiplies by a global phase so the first nonzero amplitude is real
    /// and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        if let Some(first) = self.amplitudes.iter().find(|c| c.norm() > 1e-300).copied() {
            let phase = first.conj() / first.norm();
            self.amplitudes.iter_mut().for_each(|c| *c *= phase);
        }
        self
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_is_valid() {
        let m = maximally_mixed(2).unwrap();
        assert!(diagnose(m.matrix(), &Tolerances::default()).unwrap().is_clean());
        assert_eq!(maximally_mixed(1).unwrap().get(0, 0), Complex64::new(1.0, 0.0));
        let big = maximally_mixed(64).unwrap();
        let tr: f64 = big.diagonal().iter().sum();
        assert!((tr - 1.0).abs() < 1e-14);
        assert!(maximally_mixed(0).is_err());
    }

    #[test]
    fn pure_basis_state_is_valid() {
        let rho = DensityMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn psd_violation_is_reported_with_eigenvalue() {
        // eigenvalues 0.5 +- sqrt(0.01 + 0.36)
        let err = DensityMatrix::from_real_rows(&[&[0.6, 0.6], &[0.6, 0.4]]).unwrap_err();
        let Error::InvalidDensity(d) = err else {
            panic!("expected diagnostics, got {err:?}");
        };
        let expected = 0.5 - 0.37f64.sqrt();
        assert!((d.min_eigenvalue.unwrap() - expected).abs() < 1e-12);
        assert!(d.hermiticity.is_none());
        assert!(d.trace.is_none());
    }

    #[test]
    fn every_violation_is_named() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.9, 0.0),
                Complex64::new(0.0, 0.3),
                Complex64::new(0.0, 0.3),
                Complex64::new(-0.2, 0.0),
            ],
        );
        let d = diagnose(&m, &Tolerances::default()).unwrap();
        assert!(d.hermiticity.is_some());
        assert!(d.trace.is_some());
        assert!(d.min_eigenvalue.is_some());
        let text = d.to_string();
        assert!(text.contains("Hermitian") && text.contains("trace") && text.contains("semidefinite"));
    }

    #[test]
    fn non_square_is_structural() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(
            diagnose(&m, &Tolerances::default()),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalue_is_kept_not_projected() {
        let eps = 1e-11;
        let rho = DensityMatrix::from_real_rows(&[&[1.0 + eps, 0.0], &[0.0, -eps]]).unwrap();
        assert_eq!(rho.get(1, 1).re, -eps);
    }

    #[test]
    fn diagonal_part_is_idempotent() {
        let rho = DensityMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let d = diagonal_part(&rho);
        assert_eq!(d, maximally_mixed(2).unwrap());
        assert_eq!(diagonal_part(&d), d);
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        assert!(PureState::from_real(&[1.0, 1.0], "x").is_err());
        let s = PureState::from_real(&[0.6, 0.8], "x").unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_phase_makes_first_amplitude_positive() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureState::new(
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -h), Complex64::new(h, 0.0)],
            "x",
            &Tolerances::default(),
        )
        .unwrap()
        .with_canonical_phase();
        assert!((s.amplitude(1) - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(2) - Complex64::new(0.0, h)).norm() < 1e-15);
    }
}
