//! Infinite-dimensional reference: the thermal-like state `rho_T` and the
//! `xi -> 1` limit in which certainty saturates at 2.
//!
//! `rho_T` is never materialized at extreme `xi`. Against a diagonal
//! reference the only coupling term is `tr(sqrt(rho_d) sqrt(rho_T)) =
//! sqrt(1 - xi) sum_n xi^(n/2) sqrt(p_n)`, which is summed over the support
//! of the state.

use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, PureState, Tolerances};
use crate::distance::hermitian_elementwise_sqrt;
use crate::error::{Error, Result};
use crate::quantifiers::{sqrt_population_sum, QuantifierReport, Reference};
use crate::states::{TruncatedState, FOCK_BASIS};

/// Geometric weights `(1 - xi) xi^n` on `n < dim`, renormalized over the window.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalReference {
    xi: f64,
    weights: Vec<f64>,
    /// Probability `xi^dim` cut off by the window before renormalization.
    renormalization_mass: f64,
}

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::InvalidParameter(format!("xi must lie in [0, 1), got {xi}")));
    }
    Ok(())
}

impl ThermalReference {
    pub fn new(xi: f64, dim: usize) -> Result<Self> {
        check_xi(xi)?;
        if dim == 0 {
            return Err(Error::InvalidParameter("thermal window needs dim >= 1".into()));
        }
        let mut weights = Vec::with_capacity(dim);
        let mut w = 1.0 - xi;
        for _ in 0..dim {
            weights.push(w);
            w *= xi;
        }
        let kept: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= kept;
        }
        Ok(Self {
            xi,
            weights,
            renormalization_mass: 1.0 - kept,
        })
    }

    /// Window long enough that the geometric tail `xi^dim` is below `tol`,
    /// i.e. `dim = ceil(ln tol / ln xi)`.
    pub fn with_tail(xi: f64, tol: f64, max_dim: usize) -> Result<Self> {
        check_xi(xi)?;
        let dim = if xi == 0.0 {
            1
        } else {
            (tol.ln() / xi.ln()).ceil().max(1.0) as usize
        };
        if dim > max_dim {
            return Err(Error::Truncation(format!(
                "thermal reference at xi={xi} needs {dim} levels (max {max_dim})"
            )));
        }
        Self::new(xi, dim)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn renormalization_mass(&self) -> f64 {
        self.renormalization_mass
    }

    pub fn mean(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(n, w)| n as f64 * w)
            .sum()
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_probabilities(&self.weights, FOCK_BASIS, &Tolerances::default())
    }
}

/// `rho_T` on `dim` levels as a diagonal density matrix.
pub fn thermal_reference(xi: f64, dim: usize) -> Result<DensityMatrix> {
    ThermalReference::new(xi, dim)?.to_density()
}

/// Windows compared by [`convergence_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub start: usize,
    pub max_dim: usize,
    /// Relative growth of `sum sqrt(p_n)` per doubling below which the sum
    /// counts as converged.
    pub rel_tol: f64,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            start: 16,
            max_dim: 1 << 22,
            rel_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Convergence {
    Converged { dim: usize, sqrt_sum: f64 },
    Diverging { dim: usize, sqrt_sum: f64, last_growth: f64 },
}

impl Convergence {
    pub fn is_converged(&self) -> bool {
        matches!(self, Convergence::Converged { .. })
    }

    pub fn sqrt_sum(&self) -> f64 {
        match *self {
            Convergence::Converged { sqrt_sum, .. } | Convergence::Diverging { sqrt_sum, .. } => sqrt_sum,
        }
    }
}

/// Classifies `sum sqrt(p_n)` by its growth over doubling windows. `family`
/// returns the populations at a given cutoff; a vector shorter than the
/// request means the support ended and the sum is exact.
pub fn convergence_check_with<F>(policy: &WindowPolicy, family: F) -> Result<Convergence>
where
    F: Fn(usize) -> Result<Vec<f64>>,
{
    let mut dim = policy.start.max(1).min(policy.max_dim.max(1));
    let mut prev: Option<f64> = None;
    let mut last_growth = f64::INFINITY;
    loop {
        let p = family(dim)?;
        let sum = sqrt_population_sum(&p);
        if p.len() < dim {
            return Ok(Convergence::Converged { dim: p.len(), sqrt_sum: sum });
        }
        if let Some(prev) = prev {
            last_growth = if prev > 0.0 { (sum - prev) / prev } else { f64::INFINITY };
            if last_growth.abs() < policy.rel_tol {
                return Ok(Convergence::Converged { dim, sqrt_sum: sum });
            }
        }
        if dim >= policy.max_dim {
            return Ok(Convergence::Diverging {
                dim,
                sqrt_sum: sum,
                last_growth,
            });
        }
        prev = Some(sum);
        dim = (dim * 2).min(policy.max_dim);
    }
}

/// [`convergence_check_with`] over prefixes of a fixed population vector.
/// A vector that ends before the sum settles is reported as diverging.
pub fn convergence_check(p: &[f64], policy: &WindowPolicy) -> Result<Convergence> {
    if p.iter().any(|x| !x.is_finite() || *x < -1e-12) {
        return Err(Error::InvalidParameter("populations must be finite and nonnegative".into()));
    }
    if p.len() <= policy.start {
        return Ok(Convergence::Converged {
            dim: p.len(),
            sqrt_sum: sqrt_population_sum(p),
        });
    }
    let capped = WindowPolicy {
        max_dim: policy.max_dim.min(p.len()).max(1),
        ..*policy
    };
    convergence_check_with(&capped, |d| Ok(p[..d.min(p.len())].to_vec()))
}

/// `S_H(xi) = 2 - 2 sqrt(1 - xi) sum_n xi^(n/2) sqrt(p_n)` against the
/// untruncated `rho_T`.
pub fn certainty_at(p: &[f64], xi: f64) -> Result<f64> {
    check_xi(xi)?;
    Ok((2.0 - 2.0 * cross_term(p, xi)).max(0.0))
}

/// `tr(sqrt(rho_d) sqrt(rho_T)) = sqrt(1 - xi) sum_n xi^(n/2) sqrt(p_n)`.
pub fn cross_term(p: &[f64], xi: f64) -> f64 {
    let q = xi.sqrt();
    let mut w = 1.0;
    let mut acc = 0.0;
    for &pn in p {
        if pn > 0.0 {
            acc += w * pn.sqrt();
        }
        w *= q;
        if w == 0.0 {
            break;
        }
    }
    (1.0 - xi).sqrt() * acc
}

/// `xi = 1 - 10^-k` for `k = 1..=6`.
pub fn default_xi_grid() -> Vec<f64> {
    (1..=6).map(|k| 1.0 - 10f64.powi(-k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub xi: f64,
    pub s_h: f64,
    pub nc_h: f64,
    /// `2 sqrt(1 - xi) sum xi^(n/2) sqrt(p_n)`, the distance from the limit.
    pub deviation_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertaintySweep {
    pub c_h: f64,
    pub points: Vec<LimitPoint>,
    pub s_h_limit: f64,
    pub nc_h_limit: f64,
    /// Change in the extrapolated value when the smallest-`xi` point is dropped.
    pub extrapolation_error: f64,
    pub convergence: Convergence,
}

/// Polynomial extrapolation of `(x_i, y_i)` to `x = 0`.
fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            p[i] = (x[i] * p[i + 1] - x[j] * p[i]) / (x[i] - x[j]);
        }
    }
    p[0]
}

/// Sweeps `S_H(xi)` for populations `p` and a known coherence, then
/// extrapolates to `xi = 1` in the variable `u = sqrt(1 - xi)`. The
/// convergence verdict on `sum sqrt(p_n)` is reported, not enforced: a
/// truncated vector may be too short for the doubling test even when its
/// family converges.
pub fn certainty_limit_sweep_populations(p: &[f64], c_h: f64, xi_grid: &[f64]) -> Result<CertaintySweep> {
    if xi_grid.is_empty() {
        return Err(Error::InvalidParameter("empty xi grid".into()));
    }
    let convergence = convergence_check(p, &WindowPolicy::default())?;
    let mut grid = xi_grid.to_vec();
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    let mut points = Vec::with_capacity(grid.len());
    for &xi in &grid {
        let s_h = certainty_at(p, xi)?;
        points.push(LimitPoint {
            xi,
            s_h,
            nc_h: c_h + s_h,
            deviation_bound: 2.0 * cross_term(p, xi),
        });
    }
    let u: Vec<f64> = grid.iter().map(|xi| (1.0 - xi).sqrt()).collect();
    let s: Vec<f64> = points.iter().map(|pt| pt.s_h).collect();
    let limit = neville_at_zero(&u, &s);
    let extrapolation_error = if u.len() > 1 {
        (limit - neville_at_zero(&u[1..], &s[1..])).abs()
    } else {
        points[0].deviation_bound
    };
    Ok(CertaintySweep {
        c_h,
        points,
        s_h_limit: limit,
        nc_h_limit: c_h + limit,
        extrapolation_error,
        convergence,
    })
}

pub fn certainty_limit_sweep(rho: &DensityMatrix, xi_grid: &[f64]) -> Result<CertaintySweep> {
    certainty_limit_sweep_populations(&rho.diagonal(), rho.off_diagonal_l1(), xi_grid)
}

/// Pythagoras terms against a windowed `rho_T`; the shorter of the two is
/// zero-padded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfinitePythagoras {
    pub hypotenuse_h: f64,
    pub coherence_h: f64,
    pub certainty_h: f64,
    pub cross_h: f64,
    pub residual_h: f64,
    pub hypotenuse_hs: f64,
    pub coherence_hs: f64,
    pub certainty_hs: f64,
    pub cross_hs: f64,
    pub residual_hs: f64,
}

fn pythagoras_terms(
    diag_sqrt: &[f64],
    sqrt_trace_sq: f64,
    off_l1: f64,
    diag_p: &[f64],
    trace_sq: f64,
    off_l2: f64,
    q: &[f64],
) -> InfinitePythagoras {
    let dim = diag_p.len().max(q.len());
    let at = |v: &[f64], n: usize| v.get(n).copied().unwrap_or(0.0);

    // Hellinger: sqrt(rho) vs diag(sqrt q).
    let (mut mixed_h, mut q_sum, mut cert_h) = (0.0, 0.0, 0.0);
    let (mut mixed_hs, mut q_sq, mut cert_hs) = (0.0, 0.0, 0.0);
    for n in 0..dim {
        let (s, t) = (at(diag_sqrt, n), at(q, n).sqrt());
        let (p, w) = (at(diag_p, n), at(q, n));
        mixed_h += s * t;
        q_sum += w;
        cert_h += (s - t) * (s - t);
        mixed_hs += p * w;
        q_sq += w * w;
        cert_hs += (p - w) * (p - w);
    }
    let hyp_h = sqrt_trace_sq - 2.0 * mixed_h + q_sum;
    let hyp_hs = trace_sq - 2.0 * mixed_hs + q_sq;
    // The legs share no diagonal entries, so the cross terms vanish; they
    // are reported as computed (zero) so callers can see the orthogonality.
    InfinitePythagoras {
        hypotenuse_h: hyp_h,
        coherence_h: off_l1,
        certainty_h: cert_h,
        cross_h: 0.0,
        residual_h: (hyp_h - off_l1 - cert_h).abs(),
        hypotenuse_hs: hyp_hs,
        coherence_hs: off_l2,
        certainty_hs: cert_hs,
        cross_hs: 0.0,
        residual_hs: (hyp_hs - off_l2 - cert_hs).abs(),
    }
}

/// Residuals of `d(rho, rho_T) = d(rho, rho_d) + d(rho_d, rho_T)` for both
/// distance families, using the elementwise square root of `rho`.
pub fn infinite_pythagoras_residual(rho: &DensityMatrix, reference: &ThermalReference) -> Result<InfinitePythagoras> {
    let sq = hermitian_elementwise_sqrt(rho)?;
    let m = sq.matrix();
    let n = rho.dim();
    let mut sqrt_trace_sq = 0.0;
    for j in 0..n {
        for k in 0..n {
            sqrt_trace_sq += (m[(j, k)] * m[(k, j)]).re;
        }
    }
    let diag_sqrt: Vec<f64> = (0..n).map(|j| m[(j, j)].re).collect();
    let p = rho.diagonal();
    let trace_sq = rho.purity();
    Ok(pythagoras_terms(
        &diag_sqrt,
        sqrt_trace_sq,
        rho.off_diagonal_l1(),
        &p,
        trace_sq,
        rho.off_diagonal_l2_sq(),
        reference.weights(),
    ))
}

/// Same as [`infinite_pythagoras_residual`] for a pure state, in O(dim).
pub fn infinite_pythagoras_residual_pure(psi: &PureState, reference: &ThermalReference) -> InfinitePythagoras {
    let p = psi.probabilities();
    let a = sqrt_population_sum(&p);
    let norm: f64 = p.iter().sum();
    let sum_p2: f64 = p.iter().map(|x| x * x).sum();
    let diag_sqrt: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    pythagoras_terms(
        &diag_sqrt,
        a * a,
        (a * a - norm).max(0.0),
        &p,
        norm * norm,
        (norm * norm - sum_p2).max(0.0),
        reference.weights(),
    )
}

/// `NC_H = C_H + 2`, the limit of nonclassicality against `rho_T` as
/// `xi -> 1`. Requires `sum sqrt(p_n)` to converge.
pub fn nonclassicality_infinite(rho: &DensityMatrix) -> Result<f64> {
    let p = rho.diagonal();
    require_convergence(&p)?;
    Ok(rho.off_diagonal_l1() + 2.0)
}

pub fn nonclassicality_infinite_pure(psi: &PureState) -> Result<f64> {
    let p = psi.probabilities();
    require_convergence(&p)?;
    let a = sqrt_population_sum(&p);
    let norm: f64 = p.iter().sum();
    Ok((a * a - norm).max(0.0) + 2.0)
}

fn require_convergence(p: &[f64]) -> Result<()> {
    let policy = WindowPolicy::default();
    if !convergence_check(p, &policy)?.is_converged() {
        return Err(Error::InvalidState(
            "sum sqrt(p_n) does not settle; the infinite-dimensional limit is undefined".into(),
        ));
    }
    Ok(())
}

/// `2 sqrt(2 pi var) - 1`, the coherence of a pure state whose populations
/// follow a broad Gaussian of variance `var`.
pub fn gaussian_coherence_estimate(number_variance: f64) -> Result<f64> {
    if !(number_variance > 0.0 && number_variance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "number variance must be positive, got {number_variance}"
        )));
    }
    Ok(2.0 * (2.0 * std::f64::consts::PI * number_variance).sqrt() - 1.0)
}

/// Mean and variance of `n` under populations `p`.
pub fn number_statistics(p: &[f64]) -> (f64, f64) {
    let total: f64 = p.iter().sum();
    let mean: f64 = p.iter().enumerate().map(|(n, x)| n as f64 * x).sum::<f64>() / total;
    let var = p
        .iter()
        .enumerate()
        .map(|(n, x)| (n as f64 - mean).powi(2) * x)
        .sum::<f64>()
        / total;
    (mean, var)
}

/// Report for a truncated Fock-space state against `rho_T` as `xi -> 1`.
///
/// Coherence uses the amplitudes directly. Certainty is the extrapolated
/// limit of the sweep over [`default_xi_grid`]; the Hilbert-Schmidt legs use
/// their limits `tr(rho_d^2)` and `tr(rho^2)`, since `tr(rho_T^2) -> 0`.
/// The Pythagoras residuals are those at the largest grid point.
pub fn fock_report(t: &TruncatedState) -> Result<QuantifierReport> {
    let psi = &t.state;
    let p = psi.probabilities();
    let a = sqrt_population_sum(&p);
    let norm: f64 = p.iter().sum();
    let sum_p2: f64 = p.iter().map(|x| x * x).sum();
    let c_h = (a * a - norm).max(0.0);
    let grid = default_xi_grid();
    let sweep = certainty_limit_sweep_populations(&p, c_h, &grid)?;
    let xi_max = *grid.last().expect("grid is not empty");

    // At xi_max, against the untruncated reference (sum of its weights = 1).
    let cross = cross_term(&p, xi_max);
    let hyp_h = a * a - 2.0 * cross + 1.0;
    let cert_h = norm - 2.0 * cross + 1.0;
    let q_dot_p: f64 = {
        let mut w = 1.0 - xi_max;
        let mut acc = 0.0;
        for &pn in &p {
            acc += w * pn;
            w *= xi_max;
        }
        acc
    };
    let q_sq = (1.0 - xi_max) / (1.0 + xi_max);
    let hyp_hs = norm * norm - 2.0 * q_dot_p + q_sq;
    let c_hs = (norm * norm - sum_p2).max(0.0);
    let cert_hs = sum_p2 - 2.0 * q_dot_p + q_sq;

    let s_h = sweep.s_h_limit;
    Ok(QuantifierReport {
        dim: psi.dim(),
        reference: Reference::ThermalLimit { xi_max },
        c_h,
        s_h,
        nc_h: c_h + s_h,
        c_hs,
        s_hs: sum_p2,
        nc_hs: c_hs + sum_p2,
        pythagoras_residual_h: (hyp_h - c_h - cert_h).abs(),
        pythagoras_residual_hs: (hyp_hs - c_hs - cert_hs).abs(),
        x_sum: a,
        renyi_half: 2.0 * a.ln(),
        truncation: Some(t.diagnostics),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{sg_phase_state, TruncationConfig};
    use num_complex::Complex64;

    #[test]
    fn thermal_examples() {
        let vac = ThermalReference::new(0.0, 5).unwrap();
        assert_eq!(vac.weights()[0], 1.0);
        assert!(vac.weights()[1..].iter().all(|&w| w == 0.0));

        let half = ThermalReference::with_tail(0.5, 1e-14, 1000).unwrap();
        for (n, w) in half.weights().iter().take(10).enumerate() {
            assert!((w - 0.5f64.powi(n as i32 + 1)).abs() < 1e-13);
        }
        assert!((half.mean() - 1.0).abs() < 1e-11);
        let total: f64 = half.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(half.weights().windows(2).all(|w| w[1] <= w[0]));
        assert!(ThermalReference::new(1.0, 3).is_err());
    }

    #[test]
    fn convergence_examples() {
        let policy = WindowPolicy::default();
        let sg = sg_phase_state(Complex64::new(0.5, 0.0), &TruncationConfig::default()).unwrap();
        assert!(convergence_check(&sg.state.probabilities(), &policy).unwrap().is_converged());

        let geo: Vec<f64> = (0..2000).map(|n| 0.5 * 0.5f64.powi(n)).collect();
        assert!(convergence_check(&geo, &policy).unwrap().is_converged());

        let harmonic = convergence_check_with(
            &WindowPolicy { max_dim: 1 << 16, ..policy },
            |d| {
                let z: f64 = std::f64::consts::PI.powi(2) / 6.0;
                Ok((0..d).map(|n| 1.0 / ((n + 1) as f64).powi(2) / z).collect())
            },
        )
        .unwrap();
        assert!(!harmonic.is_converged());
    }

    #[test]
    fn certainty_examples() {
        let mut p = vec![0.0; 6];
        p[5] = 1.0;
        let expected = 2.0 - 2.0 * 0.1f64.sqrt() * 0.9f64.powf(2.5);
        assert!((certainty_at(&p, 0.9).unwrap() - expected).abs() < 1e-14);
        assert_eq!(certainty_at(&[1.0], 0.0).unwrap(), 0.0);
        let s = certainty_at(&[0.3, 0.7], 0.999_999).unwrap();
        assert!(s <= 2.0 && s > 2.0 - 2.0 * 1e-3 * (0.3f64.sqrt() + 0.7f64.sqrt()));
    }

    #[test]
    fn sweep_extrapolates_to_two() {
        let mut p = vec![0.0; 4];
        p[3] = 1.0;
        let sweep = certainty_limit_sweep_populations(&p, 0.0, &default_xi_grid()).unwrap();
        assert!((sweep.nc_h_limit - 2.0).abs() < 1e-6);
        assert!(sweep.points.windows(2).all(|w| w[1].s_h >= w[0].s_h));
    }

    #[test]
    fn limits_of_documented_states() {
        let vac = PureState::from_real(&[1.0], FOCK_BASIS).unwrap();
        assert_eq!(nonclassicality_infinite_pure(&vac).unwrap(), 2.0);
        let sg = sg_phase_state(Complex64::new(0.5, 0.0), &TruncationConfig::default()).unwrap();
        assert!((nonclassicality_infinite_pure(&sg.state).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_estimate_examples() {
        let v = gaussian_coherence_estimate(1.0 / (2.0 * std::f64::consts::PI)).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        assert!((gaussian_coherence_estimate(100.0).unwrap() - 49.132_565).abs() < 1e-5);
        assert!(gaussian_coherence_estimate(0.0).is_err());
    }

    #[test]
    fn windowed_pythagoras_for_sg_state() {
        let sg = sg_phase_state(Complex64::new(0.5, 0.0), &TruncationConfig::default()).unwrap();
        let reference = ThermalReference::with_tail(0.99, 1e-10, 1 << 16).unwrap();
        let r = infinite_pythagoras_residual_pure(&sg.state, &reference);
        assert!(r.residual_h < 1e-10 && r.residual_hs < 1e-12);
        let dense = infinite_pythagoras_residual(&sg.state.to_density(), &reference).unwrap();
        assert!(dense.residual_h < 1e-10 && dense.residual_hs < 1e-12);
        assert!((dense.coherence_h - r.coherence_h).abs() < 1e-10);
    }
}
