//! Infinite-dimensional state families realized on a truncated Fock basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{PureState, Tolerances};
use crate::error::{Error, Result};
use crate::quantifiers::TruncationDiagnostics;

use super::closed_form::{displaced_number_amplitudes, squeezed_coherent_amplitudes};
use super::fock::{apply_exponential, FockGenerator};
use super::{FOCK_BASIS, TWIN_BASIS};

fn default_tail_tol() -> f64 {
    1e-10
}

fn default_true() -> bool {
    true
}

fn default_max_dim() -> usize {
    4096
}

/// Fock cutoff policy.
///
/// A construction is accepted when the probability outside the retained
/// levels, plus the mass sitting in the top 10% guard band, is at most
/// `tail_mass_tol`. With `auto_grow` the cutoff also doubles (up to
/// `max_dim`) until the guard-band amplitude sum is small enough that the
/// coherence, which depends on `sum |c_n|`, is resolved to the same tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default = "default_tail_tol")]
    pub tail_mass_tol: f64,
    #[serde(default = "default_true")]
    pub auto_grow: bool,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            dim: None,
            tail_mass_tol: default_tail_tol(),
            auto_grow: true,
            max_dim: default_max_dim(),
        }
    }
}

impl TruncationConfig {
    pub fn with_dim(dim: usize) -> Self {
        Self {
            dim: Some(dim),
            auto_grow: false,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tail_mass_tol > 0.0 && self.tail_mass_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail_mass_tol must lie in (0, 1), got {}",
                self.tail_mass_tol
            )));
        }
        if self.max_dim < 2 {
            return Err(Error::InvalidParameter("max_dim must be at least 2".into()));
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            norm_tol: self.tail_mass_tol.max(Tolerances::default().norm_tol),
            ..Tolerances::default()
        }
    }

    /// Starting cutoff `ceil(mean + 8 sqrt(var + 1) + 20)` unless fixed.
    fn initial_dim(&self, mean: f64, variance: f64) -> usize {
        self.dim
            .unwrap_or_else(|| (mean + 8.0 * (variance + 1.0).sqrt() + 20.0).ceil() as usize)
            .clamp(2, self.max_dim)
    }
}

/// How a Fock-space family is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Truncated generator exponentials applied to a number state.
    #[default]
    Operator,
    /// Closed-form amplitude formulas.
    ClosedForm,
}

/// A truncated pure state with its cutoff bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    pub state: PureState,
    pub diagnostics: TruncationDiagnostics,
    pub construction: Construction,
}

fn guard_band(dim: usize) -> usize {
    dim.div_ceil(10).max(1)
}

fn grow<F>(cfg: &TruncationConfig, start: usize, construction: Construction, build: F) -> Result<TruncatedState>
where
    F: Fn(usize) -> Vec<Complex64>,
{
    cfg.validate()?;
    let tol = cfg.tail_mass_tol;
    let mut dim = start.clamp(2, cfg.max_dim);
    loop {
        let amps = build(dim);
        let guard = guard_band(dim);
        let (mut guard_mass, mut guard_amp) = (0.0, 0.0);
        for c in &amps[dim - guard..] {
            guard_mass += c.norm_sqr();
            guard_amp += c.norm();
        }
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let total_amp: f64 = amps.iter().map(|c| c.norm()).sum();
        let tail_mass = guard_mass + (1.0 - norm).max(0.0);
        let mass_ok = tail_mass <= tol && (1.0 - norm).abs() <= tol;
        let amp_ok = 2.0 * total_amp * guard_amp <= tol;
        let at_ceiling = dim >= cfg.max_dim;

        if mass_ok && (amp_ok || !cfg.auto_grow || at_ceiling) {
            let state = PureState::new(amps, FOCK_BASIS, &cfg.tolerances())?.with_canonical_phase();
            return Ok(TruncatedState {
                state,
                diagnostics: TruncationDiagnostics {
                    dim,
                    tail_mass,
                    guard_amplitude: guard_amp,
                },
                construction,
            });
        }
        if !cfg.auto_grow || at_ceiling {
            return Err(Error::Truncation(format!(
                "tail mass {tail_mass:e} exceeds {tol:e} at cutoff {dim}"
            )));
        }
        dim = (dim * 2).min(cfg.max_dim);
    }
}

fn check_xi(xi: Complex64) -> Result<f64> {
    let r = xi.norm();
    if r.is_nan() || r >= 1.0 {
        return Err(Error::InvalidParameter(format!("|xi| must be < 1, got {r}")));
    }
    Ok(r)
}

/// Smallest cutoff for geometric amplitudes `sqrt(1-|xi|^2) xi^n` that meets
/// both the mass and the amplitude-sum tolerance.
fn geometric_cutoff(r: f64, cfg: &TruncationConfig) -> Result<usize> {
    cfg.validate()?;
    let tol = cfg.tail_mass_tol;
    if r == 0.0 {
        return Ok(cfg.dim.unwrap_or(1).max(1));
    }
    let norm_amp = (1.0 - r * r).sqrt();
    let total_amp = norm_amp / (1.0 - r);
    let mass_ok = |d: usize| r.powi(2 * d as i32) <= tol;
    let amp_ok = |d: usize| 2.0 * total_amp * norm_amp * r.powi(d as i32) / (1.0 - r) <= tol;
    if let (Some(d), false) = (cfg.dim, cfg.auto_grow) {
        if !mass_ok(d) {
            return Err(Error::Truncation(format!(
                "geometric tail mass {:e} exceeds {tol:e} at cutoff {d}",
                r.powi(2 * d as i32)
            )));
        }
        return Ok(d);
    }
    let mut d = cfg.dim.unwrap_or(1).max(1);
    while !(mass_ok(d) && amp_ok(d)) {
        if d >= cfg.max_dim {
            if mass_ok(d) {
                return Ok(d);
            }
            return Err(Error::Truncation(format!(
                "|xi| = {r} needs more than {} levels",
                cfg.max_dim
            )));
        }
        d += 1;
    }
    Ok(d)
}

fn geometric_state(xi: Complex64, cfg: &TruncationConfig, basis: &str) -> Result<TruncatedState> {
    let r = check_xi(xi)?;
    let dim = geometric_cutoff(r, cfg)?;
    let norm_amp = (1.0 - r * r).sqrt();
    let mut amps = Vec::with_capacity(dim);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 0..dim {
        amps.push(pow * norm_amp);
        pow *= xi;
    }
    let tail_mass = r.powi(2 * dim as i32);
    let tail_amp = if r > 0.0 { norm_amp * r.powi(dim as i32) / (1.0 - r) } else { 0.0 };
    let state = PureState::new(amps, basis, &cfg.tolerances())?;
    Ok(TruncatedState {
        state,
        diagnostics: TruncationDiagnostics {
            dim,
            tail_mass,
            guard_amplitude: tail_amp,
        },
        construction: Construction::ClosedForm,
    })
}

/// Normalizable Susskind-Glogower phase state `sqrt(1-|xi|^2) sum xi^n |n>`.
pub fn sg_phase_state(xi: Complex64, cfg: &TruncationConfig) -> Result<TruncatedState> {
    geometric_state(xi, cfg, FOCK_BASIS)
}

/// Two-mode squeezed vacuum as a pure state on the twin ladder `|n, n>`.
pub fn tmsv_state(xi: Complex64, cfg: &TruncationConfig) -> Result<TruncatedState> {
    geometric_state(xi, cfg, TWIN_BASIS)
}

/// Twin-ladder populations `(1-|xi|^2) |xi|^(2n)` of the two-mode squeezed
/// vacuum.
pub fn tmsv_distribution(xi: Complex64, cfg: &TruncationConfig) -> Result<(Vec<f64>, TruncationDiagnostics)> {
    let t = tmsv_state(xi, cfg)?;
    Ok((t.state.probabilities(), t.diagnostics))
}

/// Mean and variance of the photon number of `D(R) S(-r) |0>`.
pub fn squeezed_coherent_number_stats(displacement: f64, squeeze: f64) -> (f64, f64) {
    let (sh, ch) = (squeeze.sinh(), squeeze.cosh());
    let r2 = displacement * displacement;
    (
        r2 + sh * sh,
        r2 * (2.0 * squeeze).exp() + 2.0 * sh * sh * ch * ch,
    )
}

/// Splits a mean photon number between squeezing and displacement:
/// `sinh^2 r = f nbar`, `R^2 = (1 - f) nbar`. Returns `(R, r)`.
pub fn energy_split(nbar: f64, fraction: f64) -> Result<(f64, f64)> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("mean photon number {nbar}")));
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "squeeze fraction {fraction} outside [0, 1]"
        )));
    }
    Ok((
        ((1.0 - fraction) * nbar).sqrt(),
        (fraction * nbar).sqrt().asinh(),
    ))
}

/// Squeezed coherent state with displacement `R` and squeeze `r`, built by
/// the operator route.
pub fn squeezed_coherent_state(displacement: f64, squeeze: f64, cfg: &TruncationConfig) -> Result<TruncatedState> {
    squeezed_coherent_state_with(displacement, squeeze, cfg, Construction::Operator)
}

/// `D(R) S(-r) |0>`: the squeeze acts on the quadrature orthogonal to the
/// displacement, so for `r > 0` the number variance grows as `R^2 e^{2r}`.
pub fn squeezed_coherent_state_with(
    displacement: f64,
    squeeze: f64,
    cfg: &TruncationConfig,
    construction: Construction,
) -> Result<TruncatedState> {
    if !displacement.is_finite() || !squeeze.is_finite() {
        return Err(Error::InvalidParameter("displacement and squeeze must be finite".into()));
    }
    let (mean, var) = squeezed_coherent_number_stats(displacement, squeeze);
    let start = cfg.initial_dim(mean, var);
    match construction {
        Construction::Operator => grow(cfg, start, construction, |dim| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[0] = Complex64::new(1.0, 0.0);
            let v = apply_exponential(FockGenerator::Squeeze(Complex64::new(-squeeze, 0.0)), &v);
            apply_exponential(FockGenerator::Displacement(Complex64::new(displacement, 0.0)), &v)
        }),
        Construction::ClosedForm => grow(cfg, start, construction, |dim| {
            squeezed_coherent_amplitudes(displacement, -squeeze, dim)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect()
        }),
    }
}

/// Displaced number state `D(alpha) |n0>` by the operator route.
pub fn displaced_number_state(alpha: Complex64, n0: usize, cfg: &TruncationConfig) -> Result<TruncatedState> {
    displaced_number_state_with(alpha, n0, cfg, Construction::Operator)
}

pub fn displaced_number_state_with(
    alpha: Complex64,
    n0: usize,
    cfg: &TruncationConfig,
    construction: Construction,
) -> Result<TruncatedState> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    let x = alpha.norm_sqr();
    let mean = x + n0 as f64;
    let var = x * (2.0 * n0 as f64 + 1.0);
    let start = cfg.initial_dim(mean, var).max(n0 + 2);
    if start > cfg.max_dim {
        return Err(Error::Truncation(format!(
            "n0 = {n0} does not fit below max_dim {}",
            cfg.max_dim
        )));
    }
    match construction {
        Construction::Operator => grow(cfg, start, construction, |dim| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[n0] = Complex64::new(1.0, 0.0);
            apply_exponential(FockGenerator::Displacement(alpha), &v)
        }),
        Construction::ClosedForm => grow(cfg, start, construction, |dim| {
            displaced_number_amplitudes(alpha, n0, dim)
        }),
    }
}
