//! Truncated single-mode ladder operators and their exponentials.
//!
//! Dense matrices are available for small cutoffs. State construction uses
//! [`apply_exponential`], which applies `exp(G)` to a vector through the
//! banded generator without forming a matrix, so cutoffs in the thousands
//! stay cheap.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Anti-Hermitian generator built from `a` and `a^dagger` in a truncated
/// Fock space. The truncation keeps it anti-Hermitian, so its exponential is
/// exactly unitary on the truncated space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FockGenerator {
    /// `alpha a^dagger - conj(alpha) a`, the displacement generator.
    Displacement(Complex64),
    /// `(conj(zeta) a^2 - zeta a^dagger^2) / 2`, the squeeze generator.
    Squeeze(Complex64),
}

impl FockGenerator {
    /// `out = G v`.
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        let d = v.len();
        match *self {
            FockGenerator::Displacement(alpha) => {
                let ac = alpha.conj();
                for n in 0..d {
                    let mut acc = ZERO;
                    if n >= 1 {
                        acc += alpha * (n as f64).sqrt() * v[n - 1];
                    }
                    if n + 1 < d {
                        acc -= ac * ((n + 1) as f64).sqrt() * v[n + 1];
                    }
                    out[n] = acc;
                }
            }
            FockGenerator::Squeeze(zeta) => {
                let zc = zeta.conj();
                for n in 0..d {
                    let mut acc = ZERO;
                    if n + 2 < d {
                        acc += zc * (((n + 1) * (n + 2)) as f64).sqrt() * v[n + 2];
                    }
                    if n >= 2 {
                        acc -= zeta * ((n * (n - 1)) as f64).sqrt() * v[n - 2];
                    }
                    out[n] = acc * 0.5;
                }
            }
        }
    }

    /// Upper bound on the induced 1-norm in dimension `d`.
    fn norm_bound(&self, d: usize) -> f64 {
        let d = d as f64;
        match *self {
            FockGenerator::Displacement(a) => 2.0 * a.norm() * d.sqrt(),
            FockGenerator::Squeeze(z) => z.norm() * (d + 1.0),
        }
    }
}

/// `exp(G) v` by scaled Taylor series: the exponent is split into `s` equal
/// steps with `||G||/s <= 1/2`, each summed until terms drop below 1e-17 of
/// the running vector.
pub fn apply_exponential(generator: FockGenerator, v: &[Complex64]) -> Vec<Complex64> {
    let d = v.len();
    let steps = (2.0 * generator.norm_bound(d)).ceil().max(1.0) as usize;
    let inv_steps = 1.0 / steps as f64;
    let mut cur = v.to_vec();
    let mut term = vec![ZERO; d];
    let mut next = vec![ZERO; d];
    for _ in 0..steps {
        term.copy_from_slice(&cur);
        let mut acc = cur.clone();
        let scale: f64 = acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        for k in 1..60 {
            generator.apply(&term, &mut next);
            let f = inv_steps / k as f64;
            let mut tn = 0.0;
            for (t, x) in term.iter_mut().zip(next.iter()) {
                *t = x * f;
                tn += t.norm_sqr();
            }
            for (a, t) in acc.iter_mut().zip(term.iter()) {
                *a += t;
            }
            if tn.sqrt() < 1e-17 * scale {
                break;
            }
        }
        cur = acc;
    }
    cur
}

/// Dense truncated operators for cutoff `dim`.
#[derive(Debug, Clone)]
pub struct FockOperators {
    dim: usize,
    annihilation: DMatrix<Complex64>,
}

impl FockOperators {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("Fock cutoff must be at least 2".into()));
        }
        let mut a = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self {
            dim,
            annihilation: a,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `a` with `<n-1|a|n> = sqrt(n)`.
    pub fn annihilation(&self) -> &DMatrix<Complex64> {
        &self.annihilation
    }

    pub fn creation(&self) -> DMatrix<Complex64> {
        self.annihilation.adjoint()
    }

    /// `D(alpha) = exp(alpha a^dagger - conj(alpha) a)`.
    pub fn displacement(&self, alpha: Complex64) -> DMatrix<Complex64> {
        let a = &self.annihilation;
        let g = self.creation() * alpha - a * alpha.conj();
        g.exp()
    }

    /// `S(r) = exp(r (a^2 - a^dagger^2) / 2)` for real `r`.
    pub fn squeeze(&self, r: f64) -> DMatrix<Complex64> {
        self.squeeze_complex(Complex64::new(r, 0.0))
    }

    /// `S(zeta) = exp((conj(zeta) a^2 - zeta a^dagger^2) / 2)`.
    pub fn squeeze_complex(&self, zeta: Complex64) -> DMatrix<Complex64> {
        let a = &self.annihilation;
        let a2 = a * a;
        let ad2 = a2.adjoint();
        let g = (a2 * zeta.conj() - ad2 * zeta) * Complex64::new(0.5, 0.0);
        g.exp()
    }

    /// Largest `|(U^dagger U - I)_jk|` over the first `dim - margin` columns.
    pub fn unitarity_defect(&self, u: &DMatrix<Complex64>, margin: usize) -> f64 {
        let keep = self.dim.saturating_sub(margin);
        let uu = u.adjoint() * u;
        let mut worst: f64 = 0.0;
        for j in 0..keep {
            for k in 0..keep {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((uu[(j, k)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Number state `|n>` as a vector.
    pub fn number_state(&self, n: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim);
        if n < self.dim {
            v[n] = Complex64::new(1.0, 0.0);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_annihilation() {
        let ops = FockOperators::new(2).unwrap();
        let a = ops.annihilation();
        assert_eq!(a[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(a[(0, 0)], ZERO);
        assert_eq!(a[(1, 0)], ZERO);
        assert_eq!(a[(1, 1)], ZERO);
        assert!(FockOperators::new(1).is_err());
    }

    #[test]
    fn zero_displacement_is_identity() {
        let ops = FockOperators::new(6).unwrap();
        let d = ops.displacement(ZERO);
        assert!((d - DMatrix::<Complex64>::identity(6, 6)).norm() < 1e-15);
    }

    #[test]
    fn displacement_columns_orthonormal_in_retained_block() {
        let ops = FockOperators::new(40).unwrap();
        let d = ops.displacement(Complex64::new(1.2, -0.4));
        assert!(ops.unitarity_defect(&d, 4) < 1e-8);
        let s = ops.squeeze(0.4);
        assert!(ops.unitarity_defect(&s, 4) < 1e-8);
    }

    #[test]
    fn vector_action_matches_dense_exponential() {
        let ops = FockOperators::new(30).unwrap();
        let alpha = Complex64::new(0.9, 0.3);
        let dense = ops.displacement(alpha) * ops.number_state(2);
        let v: Vec<Complex64> = ops.number_state(2).iter().copied().collect();
        let banded = apply_exponential(FockGenerator::Displacement(alpha), &v);
        for (x, y) in dense.iter().zip(banded.iter()) {
            assert!((x - y).norm() < 1e-12);
        }

        let zeta = Complex64::new(0.5, 0.0);
        let dense = ops.squeeze(0.5) * ops.number_state(0);
        let v: Vec<Complex64> = ops.number_state(0).iter().copied().collect();
        let banded = apply_exponential(FockGenerator::Squeeze(zeta), &v);
        for (x, y) in dense.iter().zip(banded.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn exponential_action_preserves_norm() {
        let mut v = vec![ZERO; 200];
        v[3] = Complex64::new(1.0, 0.0);
        let out = apply_exponential(FockGenerator::Displacement(Complex64::new(3.0, 1.0)), &v);
        let norm: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
