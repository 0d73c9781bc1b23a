//! Coherence, certainty and nonclassicality in the Hellinger-like and
//! Hilbert-Schmidt distances, plus the identities that tie them together.
//!
//! Every quantifier has a distance form and an entrywise form. An
//! [`Evaluator`] in checked mode computes both and fails loudly when they
//! disagree; fast mode computes only the cheaper one. The free functions use
//! [`Evaluator::default`], which checks in debug builds.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{diagonal_part, maximally_mixed_in, DensityMatrix, PureState};
use crate::distance::{
    elementwise_sqrt, hellinger_distance_sq_with, hilbert_schmidt_distance_sq, real_part,
    trace_of_product, SqrtBranch,
};
use crate::error::{Error, Result};

/// Agreement required between two routes to the same quantity, scaled by
/// `max(1, |value|)`.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// Off-diagonal mass above which a reference state is not incoherent.
pub const DIAGONAL_TOL: f64 = 1e-12;

/// Tolerance on probability vectors passed to the scalar formulas.
const PROB_TOL: f64 = 1e-10;

fn agree(what: &'static str, lhs: f64, rhs: f64) -> Result<()> {
    let diff = (lhs - rhs).abs();
    if diff > CONSISTENCY_TOL * lhs.abs().max(rhs.abs()).max(1.0) || !diff.is_finite() {
        return Err(Error::Consistency {
            what,
            lhs,
            rhs,
            diff,
        });
    }
    Ok(())
}

/// Controls cross-checking and the square-root branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluator {
    pub checked: bool,
    pub branch: SqrtBranch,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self {
            checked: cfg!(debug_assertions),
            branch: SqrtBranch::HermitianConsistent,
        }
    }
}

/// The three squared distances of the right-triangle decomposition plus the
/// cross term that must vanish for it to hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pythagoras {
    /// `d^2(rho, ref)`.
    pub hypotenuse: f64,
    /// `d^2(rho, rho_d)`.
    pub coherence_leg: f64,
    /// `d^2(rho_d, ref)`.
    pub certainty_leg: f64,
    /// `tr[(A - A_d)(A_d - A_ref)]` with `A` the relevant root or the matrix itself.
    pub cross_term: f64,
    pub residual: f64,
}

/// Hilbert-Schmidt family for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsQuantifiers {
    pub c_hs: f64,
    pub s_hs: f64,
    pub nc_hs: f64,
    pub residual: f64,
}

/// Closed-form qubit values from a Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitClosedForms {
    pub c_h: f64,
    pub s_h: f64,
    pub nc_h: f64,
    pub c_h_max_over_bases: f64,
}

impl Evaluator {
    pub fn checked() -> Self {
        Self {
            checked: true,
            ..Self::default()
        }
    }

    pub fn fast() -> Self {
        Self {
            checked: false,
            ..Self::default()
        }
    }

    pub fn with_branch(mut self, branch: SqrtBranch) -> Self {
        self.branch = branch;
        self
    }

    /// `C_H = sum_{j != k} |rho_jk|`, cross-checked against
    /// `tr[(sqrt(rho) - sqrt(rho_d))^2]`.
    pub fn coherence_h(&self, rho: &DensityMatrix) -> Result<f64> {
        let l1 = rho.off_diagonal_l1();
        if self.checked {
            let dist = hellinger_distance_sq_with(rho, &diagonal_part(rho), self.branch)?;
            agree("coherence (distance vs l1 form)", dist, l1)?;
        }
        Ok(l1)
    }

    /// `S_H = 2(1 - sum_j sqrt(rho_jj) / sqrt(N))`, cross-checked against
    /// `tr[(sqrt(rho_d) - I/sqrt(N))^2]`.
    pub fn certainty_h(&self, rho: &DensityMatrix) -> Result<f64> {
        let n = rho.dim() as f64;
        let x = sqrt_population_sum(&rho.diagonal());
        let closed = 2.0 * (1.0 - x / n.sqrt());
        if self.checked {
            let mixed = maximally_mixed_in(rho.dim(), rho.basis())?;
            let dist = hellinger_distance_sq_with(&diagonal_part(rho), &mixed, self.branch)?;
            agree("certainty (distance vs closed form)", dist, closed)?;
        }
        Ok(closed.max(0.0))
    }

    /// `NC_H = tr[(sqrt(rho) - I/sqrt(N))^2]`; in checked mode must equal
    /// `C_H + S_H`.
    pub fn nonclassicality_h(&self, rho: &DensityMatrix) -> Result<f64> {
        let mixed = maximally_mixed_in(rho.dim(), rho.basis())?;
        let nc = hellinger_distance_sq_with(rho, &mixed, self.branch)?;
        if self.checked {
            let c = rho.off_diagonal_l1();
            let s = self.certainty_h(rho)?;
            agree("nonclassicality vs coherence + certainty", nc, c + s)?;
        }
        Ok(nc)
    }

    /// Pythagorean decomposition with respect to any incoherent reference.
    pub fn pythagoras(&self, rho: &DensityMatrix, reference: &DensityMatrix) -> Result<Pythagoras> {
        let off = reference.off_diagonal_l1();
        if off > DIAGONAL_TOL {
            return Err(Error::NonDiagonalReference(off));
        }
        let rho_d = diagonal_part(rho);
        let hyp = hellinger_distance_sq_with(rho, reference, self.branch)?;
        let leg_c = hellinger_distance_sq_with(rho, &rho_d, self.branch)?;
        let leg_s = hellinger_distance_sq_with(&rho_d, reference, self.branch)?;

        let s = elementwise_sqrt(rho, self.branch)?;
        let sd = elementwise_sqrt(&rho_d, self.branch)?;
        let sr = elementwise_sqrt(reference, self.branch)?;
        let cross = trace_of_product(
            &(s.matrix() - sd.matrix()),
            &(sd.matrix() - sr.matrix()),
        );
        Ok(Pythagoras {
            hypotenuse: hyp,
            coherence_leg: leg_c,
            certainty_leg: leg_s,
            cross_term: real_part(cross)?,
            residual: (hyp - leg_c - leg_s).abs(),
        })
    }

    /// Hilbert-Schmidt coherence, certainty and nonclassicality against `I/N`.
    pub fn hs_quantifiers(&self, rho: &DensityMatrix) -> Result<HsQuantifiers> {
        let n = rho.dim();
        let rho_d = diagonal_part(rho);
        let mixed = maximally_mixed_in(n, rho.basis())?;
        let c_hs = rho.off_diagonal_l2_sq();
        if self.checked {
            let dist = hilbert_schmidt_distance_sq(rho, &rho_d)?;
            agree("HS coherence (distance vs entrywise)", dist, c_hs)?;
        }
        let s_hs = hilbert_schmidt_distance_sq(&rho_d, &mixed)?;
        let nc_hs = hilbert_schmidt_distance_sq(rho, &mixed)?;
        Ok(HsQuantifiers {
            c_hs,
            s_hs,
            nc_hs,
            residual: (nc_hs - c_hs - s_hs).abs(),
        })
    }

    /// Hilbert-Schmidt decomposition against an arbitrary incoherent reference.
    pub fn hs_pythagoras(&self, rho: &DensityMatrix, reference: &DensityMatrix) -> Result<Pythagoras> {
        let off = reference.off_diagonal_l1();
        if off > DIAGONAL_TOL {
            return Err(Error::NonDiagonalReference(off));
        }
        let rho_d = diagonal_part(rho);
        let hyp = hilbert_schmidt_distance_sq(rho, reference)?;
        let leg_c = hilbert_schmidt_distance_sq(rho, &rho_d)?;
        let leg_s = hilbert_schmidt_distance_sq(&rho_d, reference)?;
        let cross = trace_of_product(
            &(rho.matrix() - rho_d.matrix()),
            &(rho_d.matrix() - reference.matrix()),
        );
        Ok(Pythagoras {
            hypotenuse: hyp,
            coherence_leg: leg_c,
            certainty_leg: leg_s,
            cross_term: real_part(cross)?,
            residual: (hyp - leg_c - leg_s).abs(),
        })
    }

    /// `tr[(sqrt(rho))^2]`, equal to `C_H + 1`.
    pub fn sqrt_purity(&self, rho: &DensityMatrix) -> Result<f64> {
        let s = elementwise_sqrt(rho, self.branch)?;
        let v = real_part(s.trace_of_square())?;
        if self.checked {
            agree("sqrt purity vs C_H + 1", v, rho.off_diagonal_l1() + 1.0)?;
        }
        Ok(v)
    }

    /// `1 - S_H/2 - sqrt((C_H + 1)/N)`; nonnegative, zero for pure states.
    pub fn duality_gap(&self, rho: &DensityMatrix) -> Result<f64> {
        let n = rho.dim() as f64;
        let c = self.coherence_h(rho)?;
        let s = self.certainty_h(rho)?;
        Ok(1.0 - s / 2.0 - ((c + 1.0) / n).sqrt())
    }
}

/// `sum_j sqrt(p_j)` with zero (or rounding-negative) entries contributing 0.
pub fn sqrt_population_sum(p: &[f64]) -> f64 {
    p.iter().map(|&x| x.max(0.0).sqrt()).sum()
}

fn check_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("empty probability vector".into()));
    }
    if let Some(bad) = p.iter().find(|&&x| x < -PROB_TOL || !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("negative probability {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidParameter(format!(
            "probabilities sum to {total:.17}, not 1"
        )));
    }
    Ok(())
}

/// `(sum_j sqrt(p_j))^2 - 1`, the coherence of any pure state with
/// populations `p`.
pub fn coherence_pure(p: &[f64]) -> Result<f64> {
    check_probabilities(p)?;
    let x = sqrt_population_sum(p);
    Ok(x * x - 1.0)
}

/// Renyi entropy of order 1/2: `2 ln(sum_k sqrt(p_k))`.
pub fn renyi_half(p: &[f64]) -> Result<f64> {
    check_probabilities(p)?;
    Ok(2.0 * sqrt_population_sum(p).ln())
}

pub fn coherence_h(rho: &DensityMatrix) -> Result<f64> {
    Evaluator::default().coherence_h(rho)
}

pub fn certainty_h(rho: &DensityMatrix) -> Result<f64> {
    Evaluator::default().certainty_h(rho)
}

pub fn nonclassicality_h(rho: &DensityMatrix) -> Result<f64> {
    Evaluator::default().nonclassicality_h(rho)
}

pub fn sqrt_purity(rho: &DensityMatrix) -> Result<f64> {
    Evaluator::default().sqrt_purity(rho)
}

pub fn duality_gap(rho: &DensityMatrix) -> Result<f64> {
    Evaluator::default().duality_gap(rho)
}

pub fn hs_quantifiers(rho: &DensityMatrix) -> Result<HsQuantifiers> {
    Evaluator::default().hs_quantifiers(rho)
}

/// `|d^2(rho, ref) - d^2(rho, rho_d) - d^2(rho_d, ref)|` for a diagonal `ref`.
pub fn pythagoras_residual_h(rho: &DensityMatrix, reference: &DensityMatrix) -> Result<f64> {
    Ok(Evaluator::default().pythagoras(rho, reference)?.residual)
}

/// Qubit values straight from the Bloch vector, in the sigma_z eigenbasis.
pub fn qubit_closed_forms(s: [f64; 3]) -> Result<QubitClosedForms> {
    let len = bloch_length(s)?;
    let c_h = (s[0] * s[0] + s[1] * s[1]).sqrt();
    let sz = s[2].clamp(-1.0, 1.0);
    let s_h = 2.0 - (1.0 + sz).sqrt() - (1.0 - sz).sqrt();
    Ok(QubitClosedForms {
        c_h,
        s_h,
        nc_h: c_h + s_h,
        c_h_max_over_bases: len,
    })
}

pub(crate) fn bloch_length(s: [f64; 3]) -> Result<f64> {
    let len = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    if !len.is_finite() || len > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Bloch vector length {len} exceeds 1"
        )));
    }
    Ok(len)
}

/// Unitary whose rows are the eigenvectors of `n . sigma` for the direction
/// `n = (sin t cos p, sin t sin p, cos t)`, so `U rho U^dagger` expresses
/// `rho` in that measurement basis.
pub fn qubit_basis_rotation(theta: f64, phi: f64) -> DMatrix<Complex64> {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = Complex64::from_polar(1.0, phi);
    // <+n| and <-n| as rows
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            e.conj() * s,
            -e * s,
            Complex64::new(c, 0.0),
        ],
    )
}

/// Result of scanning measurement bases for the largest qubit coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisOptimum {
    pub max_c_h: f64,
    pub theta: f64,
    pub phi: f64,
    /// Bloch component along the optimal basis axis.
    pub rotated_s_z: f64,
    /// Best value found on the grid alone.
    pub grid_max_c_h: f64,
}

/// Scans a `n_phi x n_theta` grid of basis directions (plus the analytic
/// optimum, a direction perpendicular to `s`) and returns the largest `C_H`
/// of the rotated state.
pub fn qubit_basis_optimum(s: [f64; 3], n_phi: usize, n_theta: usize) -> Result<BasisOptimum> {
    use std::f64::consts::PI;
    bloch_length(s)?;
    let rho = crate::states::qubit_from_bloch(s)?;
    let eval = Evaluator::fast();
    let c_at = |theta: f64, phi: f64| -> Result<f64> {
        eval.coherence_h(&rho.conjugate_by(&qubit_basis_rotation(theta, phi))?)
    };

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for ip in 0..n_phi {
        let phi = 2.0 * PI * ip as f64 / n_phi as f64;
        for it in 0..=n_theta {
            let theta = PI * it as f64 / n_theta as f64;
            let c = c_at(theta, phi)?;
            if c > best.0 {
                best = (c, theta, phi);
            }
        }
    }
    let grid_max = best.0;

    // Any unit vector perpendicular to s.
    let len = bloch_length(s)?;
    let perp = if len < 1e-15 {
        [1.0, 0.0, 0.0]
    } else {
        let u = [s[0] / len, s[1] / len, s[2] / len];
        let a = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let cr = [
            u[1] * a[2] - u[2] * a[1],
            u[2] * a[0] - u[0] * a[2],
            u[0] * a[1] - u[1] * a[0],
        ];
        let l = (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]).sqrt();
        [cr[0] / l, cr[1] / l, cr[2] / l]
    };
    let theta_a = perp[2].clamp(-1.0, 1.0).acos();
    let phi_a = perp[1].atan2(perp[0]);
    let c_a = c_at(theta_a, phi_a)?;
    if c_a > best.0 {
        best = (c_a, theta_a, phi_a);
    }
    let (max_c, theta, phi) = best;
    let dir = [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ];
    Ok(BasisOptimum {
        max_c_h: max_c,
        theta,
        phi,
        rotated_s_z: s[0] * dir[0] + s[1] * dir[1] + s[2] * dir[2],
        grid_max_c_h: grid_max,
    })
}

/// Which incoherent state plays the classical reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reference {
    /// `I/N` in a finite space.
    MaximallyMixed { dim: usize },
    /// Thermal-like reference extrapolated to infinite temperature.
    ThermalLimit { xi_max: f64 },
}

/// Truncation bookkeeping attached to reports for Fock-space states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationDiagnostics {
    pub dim: usize,
    pub tail_mass: f64,
    /// `sum |c_n|` over the guard band, a proxy for the neglected
    /// amplitude tail that drives the coherence error.
    pub guard_amplitude: f64,
}

/// All quantifiers for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantifierReport {
    pub dim: usize,
    pub reference: Reference,
    pub c_h: f64,
    pub s_h: f64,
    pub nc_h: f64,
    pub c_hs: f64,
    pub s_hs: f64,
    pub nc_hs: f64,
    pub pythagoras_residual_h: f64,
    pub pythagoras_residual_hs: f64,
    pub x_sum: f64,
    pub renyi_half: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationDiagnostics>,
}

impl QuantifierReport {
    /// Full report against `I/N` via the matrix routes.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        Self::from_density_with(rho, &Evaluator::default())
    }

    pub fn from_density_with(rho: &DensityMatrix, eval: &Evaluator) -> Result<Self> {
        let n = rho.dim();
        let c_h = eval.coherence_h(rho)?;
        let s_h = eval.certainty_h(rho)?;
        let nc_h = eval.nonclassicality_h(rho)?;
        let mixed = maximally_mixed_in(n, rho.basis())?;
        let pyth = eval.pythagoras(rho, &mixed)?;
        let hs = eval.hs_quantifiers(rho)?;
        let p = rho.diagonal();
        let x = sqrt_population_sum(&p);
        Ok(Self {
            dim: n,
            reference: Reference::MaximallyMixed { dim: n },
            c_h,
            s_h,
            nc_h,
            c_hs: hs.c_hs,
            s_hs: hs.s_hs,
            nc_hs: hs.nc_hs,
            pythagoras_residual_h: pyth.residual,
            pythagoras_residual_hs: hs.residual,
            x_sum: x,
            renyi_half: 2.0 * x.ln(),
            truncation: None,
        })
    }

    /// Report against `I/N` for a pure state using amplitude sums only,
    /// `|rho_jk| = |c_j||c_k|`. Linear in the dimension.
    pub fn from_pure(psi: &PureState) -> Self {
        let n = psi.dim() as f64;
        let p = psi.probabilities();
        let a: f64 = p.iter().map(|x| x.sqrt()).sum();
        let norm: f64 = p.iter().sum();
        let sum_p2: f64 = p.iter().map(|x| x * x).sum();

        let c_h = (a * a - norm).max(0.0);
        let s_h = (2.0 * (1.0 - a / n.sqrt())).max(0.0);
        // tr(sqrt(rho)^2) - 2 tr(sqrt(rho))/sqrt(N) + 1
        let nc_h = (a * a - 2.0 * a / n.sqrt() + 1.0).max(0.0);

        let c_hs = (norm * norm - sum_p2).max(0.0);
        let s_hs: f64 = p.iter().map(|x| (x - 1.0 / n).powi(2)).sum();
        let nc_hs = (norm * norm - 2.0 * norm / n + 1.0 / n).max(0.0);
        Self {
            dim: psi.dim(),
            reference: Reference::MaximallyMixed { dim: psi.dim() },
            c_h,
            s_h,
            nc_h,
            c_hs,
            s_hs,
            nc_hs,
            pythagoras_residual_h: (nc_h - c_h - s_h).abs(),
            pythagoras_residual_hs: (nc_hs - c_hs - s_hs).abs(),
            x_sum: a,
            renyi_half: 2.0 * a.ln(),
            truncation: None,
        }
    }

    /// Checks the additivity and range invariants; returns a reason on failure.
    pub fn check(&self) -> std::result::Result<(), String> {
        let values = [
            self.c_h,
            self.s_h,
            self.nc_h,
            self.c_hs,
            self.s_hs,
            self.nc_hs,
            self.pythagoras_residual_h,
            self.pythagoras_residual_hs,
            self.x_sum,
            self.renyi_half,
        ];
        if values.iter().any(|v| !v.is_finite()) {
            return Err("non-finite value".into());
        }
        let tol = |v: f64| CONSISTENCY_TOL * v.abs().max(1.0);
        if (self.nc_h - self.c_h - self.s_h).abs() > tol(self.nc_h) {
            return Err(format!(
                "nc_h != c_h + s_h (diff {:e})",
                self.nc_h - self.c_h - self.s_h
            ));
        }
        if (self.nc_hs - self.c_hs - self.s_hs).abs() > tol(self.nc_hs) {
            return Err(format!(
                "nc_hs != c_hs + s_hs (diff {:e})",
                self.nc_hs - self.c_hs - self.s_hs
            ));
        }
        if [self.c_h, self.s_h, self.nc_h, self.c_hs, self.s_hs, self.nc_hs]
            .iter()
            .any(|&v| v < 0.0)
        {
            return Err("negative quantifier".into());
        }
        if let Reference::MaximallyMixed { dim } = self.reference {
            let n = dim as f64;
            let slack = 1e-10;
            if self.c_h > n - 1.0 + slack || self.nc_h > n - 1.0 + slack {
                return Err(format!("Hellinger coherence/nonclassicality above N-1 = {}", n - 1.0));
            }
            if self.s_h > 2.0 * (1.0 - 1.0 / n.sqrt()) + slack {
                return Err("certainty above 2(1 - 1/sqrt(N))".into());
            }
            if self.c_hs > 1.0 - 1.0 / n + slack || self.nc_hs > 1.0 - 1.0 / n + slack {
                return Err("Hilbert-Schmidt quantifier above 1 - 1/N".into());
            }
        }
        Ok(())
    }
}
