//! The overcomplete family of finite-dimensional phase states
//! `|phi> = N^(-1/2) sum_{j=1..N} e^{i j phi} |j>` used as a reference
//! basis. Its natural incoherent state is not diagonal, and the Pythagorean
//! cross term no longer vanishes.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::distance::{hermitian_elementwise_sqrt, trace_of_product, IMAG_TOL};
use crate::error::{Error, Result};

/// Prefactor `K` in `sqrt(rho_d) = K integral dphi sqrt(<phi|rho|phi>) |phi><phi|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootNormalization {
    /// `K = N / 2 pi`, the measure that resolves the identity. With it
    /// `rho = I/N` maps to `sqrt(rho_d) = I/sqrt(N)`.
    #[default]
    Consistent,
    /// `K = sqrt(N / 2 pi)`. Then `sqrt(rho_d)^2 != rho_d` even for `I/N`.
    Printed,
}

impl RootNormalization {
    fn prefactor(self, n: usize) -> f64 {
        let ratio = n as f64 / (2.0 * PI);
        match self {
            RootNormalization::Consistent => ratio,
            RootNormalization::Printed => ratio.sqrt(),
        }
    }
}

fn default_stability_tol() -> f64 {
    1e-8
}

fn default_max_nodes() -> usize {
    1 << 20
}

/// Quadrature over `phi in [0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseBasisConfig {
    /// Starting node count `M`; defaults to `8 N`, must be at least `4 N`.
    #[serde(default)]
    pub nodes: Option<usize>,
    #[serde(default)]
    pub root_normalization: RootNormalization,
    /// Nodes are doubled until the violation moves by less than this.
    #[serde(default = "default_stability_tol")]
    pub stability_tol: f64,
    #[serde(default = "default_max_nodes")]
    pub max_nodes: usize,
}

impl Default for PhaseBasisConfig {
    fn default() -> Self {
        Self {
            nodes: None,
            root_normalization: RootNormalization::default(),
            stability_tol: default_stability_tol(),
            max_nodes: default_max_nodes(),
        }
    }
}

impl PhaseBasisConfig {
    fn start_nodes(&self, n: usize) -> Result<usize> {
        let m = self.nodes.unwrap_or(8 * n);
        if m < 4 * n {
            return Err(Error::InvalidParameter(format!(
                "{m} quadrature nodes cannot resolve dimension {n}; need at least {}",
                4 * n
            )));
        }
        Ok(m)
    }
}

/// `<phi'|phi> = (1/N) sum_{j=1..N} e^{i j (phi - phi')}`.
pub fn phase_overlap(phi: f64, phi_prime: f64, n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let d = phi - phi_prime;
    let sum: Complex64 = (1..=n).map(|j| Complex64::from_polar(1.0, j as f64 * d)).sum();
    sum / n as f64
}

fn node(k: usize, m: usize) -> f64 {
    2.0 * PI * k as f64 / m as f64
}

/// `<phi_k|rho|phi_k>` at the `m` uniform nodes, clamped at zero.
pub fn phase_weights(rho: &DensityMatrix, m: usize) -> Vec<f64> {
    let n = rho.dim();
    let r = rho.matrix();
    (0..m)
        .map(|k| {
            let phi = node(k, m);
            // (1/N) sum_{a,b} e^{-i a phi} rho_ab e^{i b phi}; only b - a matters.
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    acc += r[(a, b)] * Complex64::from_polar(1.0, (b as f64 - a as f64) * phi);
                }
            }
            (acc.re / n as f64).max(0.0)
        })
        .collect()
}

/// `scale * sum_k f_k |phi_k><phi_k|`, whose `(j, l)` entry is
/// `(scale / N) sum_k f_k e^{i (j - l) phi_k}`.
fn projector_sum(f: &[f64], n: usize, scale: f64) -> DMatrix<Complex64> {
    let m = f.len();
    // Only the difference d = j - l enters: precompute each Fourier sum once.
    let mut by_diff = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for (idx, slot) in by_diff.iter_mut().enumerate() {
        let d = idx as f64 - (n as f64 - 1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &fk) in f.iter().enumerate() {
            acc += Complex64::from_polar(fk, d * node(k, m));
        }
        *slot = acc * (scale / n as f64);
    }
    DMatrix::from_fn(n, n, |j, l| by_diff[j + n - 1 - l])
}

/// The phase-basis incoherent state with its off-diagonal mass.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRhoD {
    pub matrix: DMatrix<Complex64>,
    /// `sum_{j != k} |(rho_d)_jk|` in the number basis.
    pub off_diagonal_mass: f64,
    pub nodes: usize,
}

/// `rho_d = (N / 2 pi) integral dphi <phi|rho|phi> |phi><phi|` on `M` nodes.
/// The integrand is a trigonometric polynomial of degree below `2N`, so the
/// uniform rule is exact here.
pub fn phase_rho_d(rho: &DensityMatrix, cfg: &PhaseBasisConfig) -> Result<PhaseRhoD> {
    let n = rho.dim();
    let m = cfg.start_nodes(n)?;
    let w = phase_weights(rho, m);
    let matrix = projector_sum(&w, n, n as f64 / m as f64);
    let mut off = 0.0;
    for j in 0..n {
        for l in 0..n {
            if j != l {
                off += matrix[(j, l)].norm();
            }
        }
    }
    Ok(PhaseRhoD {
        matrix,
        off_diagonal_mass: off,
        nodes: m,
    })
}

/// `K (2 pi / M) sum_k sqrt(w_k) |phi_k><phi_k|`.
pub fn phase_sqrt_rho_d(rho: &DensityMatrix, m: usize, norm: RootNormalization) -> DMatrix<Complex64> {
    let n = rho.dim();
    let roots: Vec<f64> = phase_weights(rho, m).into_iter().map(f64::sqrt).collect();
    projector_sum(&roots, n, norm.prefactor(n) * 2.0 * PI / m as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// `|tr[(sqrt(rho) - sqrt(rho_d)) (sqrt(rho_d) - I/sqrt(N))]|`.
    pub violation: f64,
    /// The cross term before taking the absolute value.
    pub cross_term: f64,
    /// Continuous-sense coherence `tr[(sqrt(rho) - sqrt(rho_d))^2]`.
    pub coherence: f64,
    /// `tr[(sqrt(rho_d) - I/sqrt(N))^2]`.
    pub certainty: f64,
    /// `tr[(sqrt(rho) - I/sqrt(N))^2] - coherence - certainty`, twice the cross term.
    pub pythagoras_residual: f64,
    pub off_diagonal_mass: f64,
    /// Frobenius norm of `sqrt(rho_d)^2 - rho_d`.
    pub root_square_defect: f64,
    pub nodes: usize,
    /// Change in the violation over the last node doubling.
    pub quadrature_change: f64,
    pub root_normalization: RootNormalization,
}

struct Terms {
    cross: f64,
    coherence: f64,
    certainty: f64,
    hypotenuse: f64,
    sqrt_rho_d: DMatrix<Complex64>,
}

fn real(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(Error::Quadrature(format!("{what} has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

fn terms(rho: &DensityMatrix, sqrt_rho: &DMatrix<Complex64>, m: usize, norm: RootNormalization) -> Result<Terms> {
    let n = rho.dim();
    let sd = phase_sqrt_rho_d(rho, m, norm);
    let id = DMatrix::<Complex64>::identity(n, n) * Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let a = sqrt_rho - &sd;
    let b = &sd - &id;
    let c = sqrt_rho - &id;
    Ok(Terms {
        cross: real(trace_of_product(&a, &b), "cross term")?,
        coherence: real(trace_of_product(&a, &a), "coherence")?,
        certainty: real(trace_of_product(&b, &b), "certainty")?,
        hypotenuse: real(trace_of_product(&c, &c), "nonclassicality")?,
        sqrt_rho_d: sd,
    })
}

/// Evaluates the phase-basis Pythagorean cross term, doubling the node count
/// until it is stable to `cfg.stability_tol`.
pub fn orthogonality_violation(rho: &DensityMatrix, cfg: &PhaseBasisConfig) -> Result<ViolationReport> {
    let n = rho.dim();
    let mut m = cfg.start_nodes(n)?;
    let sqrt_rho = hermitian_elementwise_sqrt(rho)?.matrix().clone();
    let mut prev = terms(rho, &sqrt_rho, m, cfg.root_normalization)?;
    loop {
        if 2 * m > cfg.max_nodes {
            return Err(Error::Quadrature(format!(
                "violation not stable to {:e} within {} nodes",
                cfg.stability_tol, cfg.max_nodes
            )));
        }
        m *= 2;
        let cur = terms(rho, &sqrt_rho, m, cfg.root_normalization)?;
        let change = (cur.cross.abs() - prev.cross.abs()).abs();
        if change <= cfg.stability_tol {
            let rd = phase_rho_d(rho, &PhaseBasisConfig { nodes: Some(m), ..*cfg })?;
            let defect = (&cur.sqrt_rho_d * &cur.sqrt_rho_d - &rd.matrix).norm();
            return Ok(ViolationReport {
                violation: cur.cross.abs(),
                cross_term: cur.cross,
                coherence: cur.coherence,
                certainty: cur.certainty,
                pythagoras_residual: cur.hypotenuse - cur.coherence - cur.certainty,
                off_diagonal_mass: rd.off_diagonal_mass,
                root_square_defect: defect,
                nodes: m,
                quadrature_change: change,
                root_normalization: cfg.root_normalization,
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::maximally_mixed;
    use crate::states::qubit_from_bloch;

    #[test]
    fn overlap_examples() {
        assert!((phase_overlap(0.7, 0.7, 5) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(phase_overlap(PI, 0.0, 2).norm() < 1e-15);
        for k in 0..50 {
            assert!(phase_overlap(0.13 * k as f64, -0.4, 7).norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn rho_d_matches_diagonal_averages() {
        let rho = qubit_from_bloch([0.3, 0.2, 0.4]).unwrap();
        let rd = phase_rho_d(&rho, &PhaseBasisConfig::default()).unwrap();
        // (rho_d)_{jl} = (1/N) sum_a rho_{a, a + l - j}
        let expect_01 = rho.get(0, 1) / 2.0;
        assert!((rd.matrix[(0, 1)] - expect_01).norm() < 1e-15);
        assert!((rd.matrix[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let tr: Complex64 = rd.matrix.diagonal().iter().sum();
        assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-15);
        assert!(rd.off_diagonal_mass > 0.1);
    }

    #[test]
    fn maximally_mixed_is_a_fixed_point() {
        let rho = maximally_mixed(3).unwrap();
        let rd = phase_rho_d(&rho, &PhaseBasisConfig::default()).unwrap();
        assert!((&rd.matrix - rho.matrix()).norm() < 1e-14);
        let v = orthogonality_violation(&rho, &PhaseBasisConfig::default()).unwrap();
        assert!(v.violation < 1e-14);
        assert!(v.coherence.abs() < 1e-14);
    }

    #[test]
    fn printed_normalization_breaks_root_square() {
        let rho = maximally_mixed(2).unwrap();
        let cfg = PhaseBasisConfig {
            root_normalization: RootNormalization::Printed,
            ..PhaseBasisConfig::default()
        };
        let v = orthogonality_violation(&rho, &cfg).unwrap();
        assert!(v.root_square_defect > 0.1);
        assert!(v.violation > 0.1);
    }

    #[test]
    fn generic_qubit_violates_orthogonality() {
        let rho = qubit_from_bloch([0.5, 0.0, 0.0]).unwrap();
        let v = orthogonality_violation(&rho, &PhaseBasisConfig::default()).unwrap();
        assert!((v.violation - 0.0740).abs() < 5e-4, "{}", v.violation);
        assert!(v.quadrature_change <= 1e-8);
        assert!((v.pythagoras_residual - 2.0 * v.cross_term).abs() < 1e-12);
    }

    #[test]
    fn too_few_nodes_rejected() {
        let rho = maximally_mixed(4).unwrap();
        let cfg = PhaseBasisConfig {
            nodes: Some(8),
            ..PhaseBasisConfig::default()
        };
        assert!(phase_rho_d(&rho, &cfg).is_err());
    }
}
