//! Property suites run by `coherence-lab verify`.
//!
//! Each property keeps a pass counter and the worst observed deviation.
//! Samples are seeded per index and reductions are order-independent, so a
//! report is byte-identical for the same seed and trial count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{diagonal_part, maximally_mixed, DensityMatrix, PureState, DEFAULT_BASIS};
use crate::distance::{hellinger_distance_sq_with, SqrtBranch};
use crate::error::{Error, Result};
use crate::infinite::{
    certainty_limit_sweep_populations, default_xi_grid, fock_report, infinite_pythagoras_residual,
    infinite_pythagoras_residual_pure, ThermalReference,
};
use crate::oracle::{beam_splitter_oracle, canonical_sign, relabel_second_mode};
use crate::quantifiers::{qubit_closed_forms, Evaluator, QuantifierReport};
use crate::random::{random_pure, rng_for, suite_sample, SampleKind};
use crate::states::{
    beam_splitter_coefficients, displaced_number_state_with, finite_phase_state, qubit_from_bloch,
    sg_phase_state, squeezed_coherent_state_with, tmsv_state, Construction, TruncatedState,
    TruncationConfig,
};

/// Dimensions used by the random suites.
pub const DIMENSIONS: [usize; 5] = [2, 3, 4, 8, 16];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Pythagoras,
    Bounds,
    Oracles,
    Infinite,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Pythagoras => "pythagoras",
            Suite::Bounds => "bounds",
            Suite::Oracles => "oracles",
            Suite::Infinite => "infinite",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All, Suite::Pythagoras, Suite::Bounds, Suite::Oracles, Suite::Infinite]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Random samples per dimension.
    pub trials: usize,
    pub branch: SqrtBranch,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            seed: 0,
            trials: 1000,
            branch: SqrtBranch::HermitianConsistent,
        }
    }
}

/// Pass counter for one property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub suite: String,
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// Largest deviation seen; infinite when a sample failed to evaluate.
    pub worst: f64,
    pub tolerance: f64,
    /// First evaluation error, if any sample could not be evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PropertyResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total && self.error.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
struct Tally {
    passed: usize,
    total: usize,
    worst: f64,
}

impl Tally {
    const EMPTY: Tally = Tally {
        passed: 0,
        total: 0,
        worst: 0.0,
    };

    fn one(deviation: f64, tol: f64) -> Self {
        let ok = deviation.is_finite() && deviation <= tol;
        Tally {
            passed: ok as usize,
            total: 1,
            worst: if deviation.is_finite() { deviation } else { f64::INFINITY },
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            passed: self.passed + o.passed,
            total: self.total + o.total,
            worst: self.worst.max(o.worst),
        }
    }
}

struct Collector {
    suite: &'static str,
    results: Vec<PropertyResult>,
}

impl Collector {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            results: Vec::new(),
        }
    }

    /// Records a property from per-sample deviations (or evaluation errors).
    fn push(&mut self, name: &str, tol: f64, samples: Vec<Result<f64>>) {
        let mut error = None;
        let mut t = Tally::EMPTY;
        for s in samples {
            match s {
                Ok(d) => t = t.merge(Tally::one(d, tol)),
                Err(e) => {
                    t = t.merge(Tally {
                        passed: 0,
                        total: 1,
                        worst: f64::INFINITY,
                    });
                    error.get_or_insert(e.to_string());
                }
            }
        }
        self.results.push(PropertyResult {
            suite: self.suite.into(),
            name: name.into(),
            passed: t.passed,
            total: t.total,
            worst: t.worst,
            tolerance: tol,
            error,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub branch: String,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(PropertyResult::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.ok())
    }

    pub fn get(&self, suite: &str, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.suite == suite && r.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify seed={} trials={} branch={}",
            self.seed, self.trials, self.branch
        )?;
        for r in &self.results {
            write!(
                f,
                "[{}] {}: {}/{} {} (worst {:.3e}, tol {:.0e})",
                r.suite,
                r.name,
                r.passed,
                r.total,
                if r.ok() { "PASS" } else { "FAIL" },
                r.worst,
                r.tolerance
            )?;
            if let Some(e) = &r.error {
                write!(f, " error: {e}")?;
            }
            writeln!(f)?;
        }
        let ok = self.results.iter().filter(|r| r.ok()).count();
        write!(f, "summary: {ok}/{} properties passed", self.results.len())
    }
}

pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut results = Vec::new();
    let want = |s: Suite| cfg.suite == Suite::All || cfg.suite == s;
    if want(Suite::Pythagoras) {
        results.extend(pythagoras_suite(cfg));
    }
    if want(Suite::Bounds) {
        results.extend(bounds_suite(cfg));
    }
    if want(Suite::Oracles) {
        results.extend(oracles_suite());
    }
    if want(Suite::Infinite) {
        results.extend(infinite_suite(cfg));
    }
    VerifyReport {
        seed: cfg.seed,
        trials: cfg.trials,
        branch: match cfg.branch {
            SqrtBranch::HermitianConsistent => "hermitian_consistent".into(),
            SqrtBranch::NaivePrincipal => "naive_principal".into(),
        },
        results,
    }
}

/// All `(dim, index)` pairs of the random suite.
fn sample_ids(trials: usize) -> Vec<(usize, usize)> {
    DIMENSIONS
        .iter()
        .flat_map(|&n| (0..trials).map(move |i| (n, i)))
        .collect()
}

fn map_samples<T, F>(cfg: &VerifyConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, SampleKind, &DensityMatrix) -> T + Sync,
{
    sample_ids(cfg.trials)
        .into_par_iter()
        .map(|(n, i)| {
            let (kind, rho) = suite_sample(cfg.seed, n, i).expect("suite samples are valid");
            f(i, kind, &rho)
        })
        .collect()
}

fn random_diagonal_reference(cfg: &VerifyConfig, n: usize, i: usize) -> Result<DensityMatrix> {
    let mut rng = rng_for(cfg.seed ^ 0x5eed, n, i);
    crate::random::random_diagonal(&mut rng, n)
}

fn pythagoras_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let eval = Evaluator::fast().with_branch(cfg.branch);
    let rows: Vec<[Result<f64>; 5]> = map_samples(cfg, |i, _, rho| {
        let n = rho.dim();
        let mixed = maximally_mixed(n);
        let h_mixed = mixed
            .as_ref()
            .map_err(clone_err)
            .and_then(|m| eval.pythagoras(rho, m))
            .map(|p| p.residual);
        let cross = mixed
            .as_ref()
            .map_err(clone_err)
            .and_then(|m| eval.pythagoras(rho, m))
            .map(|p| p.cross_term.abs());
        let h_diag = random_diagonal_reference(cfg, n, i)
            .and_then(|r| eval.pythagoras(rho, &r))
            .map(|p| p.residual);
        let hs = eval.hs_quantifiers(rho).map(|h| h.residual);
        let l1 = hellinger_distance_sq_with(rho, &diagonal_part(rho), cfg.branch)
            .map(|d| (d - rho.off_diagonal_l1()).abs());
        [h_mixed, h_diag, cross, hs, l1]
    });
    let mut c = Collector::new("pythagoras");
    let names = [
        ("hellinger_residual_vs_maximally_mixed", 1e-10),
        ("hellinger_residual_vs_random_diagonal", 1e-10),
        ("hellinger_cross_term", 1e-10),
        ("hilbert_schmidt_residual", 1e-10),
        ("coherence_distance_matches_l1", 1e-10),
    ];
    let mut cols: Vec<Vec<Result<f64>>> = (0..names.len()).map(|_| Vec::new()).collect();
    for row in rows {
        for (k, v) in row.into_iter().enumerate() {
            cols[k].push(v);
        }
    }
    for ((name, tol), col) in names.into_iter().zip(cols) {
        c.push(name, tol, col);
    }
    c.results
}

fn clone_err(e: &Error) -> Error {
    Error::InvalidState(e.to_string())
}

fn bounds_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let eval = Evaluator::fast();
    let rows: Vec<(SampleKind, Result<(QuantifierReport, f64)>)> = map_samples(cfg, |_, kind, rho| {
        let r = QuantifierReport::from_density_with(rho, &eval)
            .and_then(|rep| Ok((rep, eval.duality_gap(rho)?)));
        (kind, r)
    });
    let mut c = Collector::new("bounds");
    let over = |f: &dyn Fn(&QuantifierReport) -> f64| -> Vec<Result<f64>> {
        rows.iter()
            .map(|(_, r)| match r {
                Ok((rep, _)) => Ok(f(rep).max(0.0)),
                Err(e) => Err(clone_err(e)),
            })
            .collect()
    };
    let nf = |r: &QuantifierReport| r.dim as f64;
    c.push("c_h_at_most_n_minus_1", 1e-10, over(&|r| r.c_h - (nf(r) - 1.0)));
    c.push("nc_h_at_most_n_minus_1", 1e-10, over(&|r| r.nc_h - (nf(r) - 1.0)));
    c.push(
        "s_h_at_most_2_minus_2_over_sqrt_n",
        1e-10,
        over(&|r| r.s_h - 2.0 * (1.0 - 1.0 / nf(r).sqrt())),
    );
    c.push(
        "hs_at_most_1_minus_1_over_n",
        1e-10,
        over(&|r| r.c_hs.max(r.s_hs).max(r.nc_hs) - (1.0 - 1.0 / nf(r))),
    );
    c.push(
        "duality_gap_nonnegative",
        1e-10,
        rows.iter()
            .map(|(_, r)| match r {
                Ok((_, gap)) => Ok((-gap).max(0.0)),
                Err(e) => Err(clone_err(e)),
            })
            .collect(),
    );
    c.push(
        "duality_gap_zero_on_pure",
        1e-10,
        rows.iter()
            .filter(|(k, _)| *k == SampleKind::Pure)
            .map(|(_, r)| match r {
                Ok((_, gap)) => Ok(gap.abs()),
                Err(e) => Err(clone_err(e)),
            })
            .collect(),
    );

    // Constructive maxima.
    let mut phase = Vec::new();
    let mut basis = Vec::new();
    let mut hs = Vec::new();
    for &n in &DIMENSIONS {
        let nf = n as f64;
        let r = finite_phase_state(n, &[]).and_then(|p| QuantifierReport::from_density(&p.to_density()));
        phase.push(r.as_ref().map(|r| (r.c_h - (nf - 1.0)).abs()).map_err(clone_err));
        hs.push(r.map(|r| (r.c_hs - (1.0 - 1.0 / nf)).abs()));
        let mut e0 = vec![0.0; n];
        e0[0] = 1.0;
        let r = PureState::from_real(&e0, DEFAULT_BASIS).and_then(|p| QuantifierReport::from_density(&p.to_density()));
        basis.push(r.as_ref().map(|r| (r.s_h - 2.0 * (1.0 - 1.0 / nf.sqrt())).abs()).map_err(clone_err));
        hs.push(r.map(|r| (r.nc_hs - (1.0 - 1.0 / nf)).abs()));
    }
    c.push("phase_state_attains_c_h_max", 1e-12, phase);
    c.push("basis_state_attains_s_h_max", 1e-12, basis);
    c.push("hs_maximum_attained", 1e-12, hs);
    c.results
}

fn entrywise(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().max(b.len());
    let z = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(z) - b.get(i).copied().unwrap_or(z)).norm())
        .fold(0.0, f64::max)
}

fn route_gap(op: Result<TruncatedState>, cf: Result<TruncatedState>) -> Result<f64> {
    let (op, cf) = (op?, cf?);
    let a: Vec<Complex64> = op.state.amplitudes().iter().copied().collect();
    let b: Vec<Complex64> = cf.state.amplitudes().iter().copied().collect();
    Ok(entrywise(&a, &b))
}

fn oracles_suite() -> Vec<PropertyResult> {
    let mut c = Collector::new("oracles");

    let pairs: Vec<(u32, u32)> = (0..=60u32).flat_map(|t| (0..=t).map(move |m| (t - m, m))).collect();
    let bs: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(n, m)| {
            let mut a = beam_splitter_coefficients(n, m)?;
            canonical_sign(&mut a);
            let b = relabel_second_mode(&beam_splitter_oracle(n, m)?);
            Ok(a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        })
        .collect();
    c.push("beam_splitter_matches_expansion", 1e-10, bs);

    let qubit: Vec<Result<f64>> = bloch_grid()
        .into_par_iter()
        .map(|s| {
            let cf = qubit_closed_forms(s)?;
            let r = QuantifierReport::from_density(&qubit_from_bloch(s)?)?;
            Ok((r.c_h - cf.c_h).abs().max((r.s_h - cf.s_h).abs()).max((r.nc_h - cf.nc_h).abs()))
        })
        .collect();
    c.push("qubit_closed_forms", 1e-12, qubit);

    let trunc = TruncationConfig::default();
    let sg: Vec<Result<f64>> = (1..=9)
        .map(|k| {
            let x = k as f64 / 10.0;
            let t = sg_phase_state(Complex64::new(x, 0.0), &trunc)?;
            Ok((QuantifierReport::from_pure(&t.state).c_h - 2.0 * x / (1.0 - x)).abs())
        })
        .collect();
    c.push("sg_coherence_closed_form", 10.0 * trunc.tail_mass_tol, sg);

    let tm: Vec<Result<f64>> = [0.2, 0.5, 0.8]
        .iter()
        .map(|&x| {
            let xi = Complex64::from_polar(x, 0.7);
            let a = QuantifierReport::from_pure(&tmsv_state(xi, &trunc)?.state).c_h;
            let b = QuantifierReport::from_pure(&sg_phase_state(xi, &trunc)?.state).c_h;
            Ok((a - b).abs())
        })
        .collect();
    c.push("tmsv_coherence_equals_sg", 1e-12, tm);

    let sc_points: Vec<(f64, f64)> = [0.0, 1.5, 3.0, 6.0]
        .iter()
        .flat_map(|&big_r| [0.0, 0.5, 1.0, 1.5].into_iter().map(move |r| (big_r, r)))
        .collect();
    let sc: Vec<Result<f64>> = sc_points
        .par_iter()
        .map(|&(big_r, r)| {
            let cf = squeezed_coherent_state_with(big_r, r, &trunc, Construction::ClosedForm)?;
            let fixed = TruncationConfig::with_dim(cf.state.dim());
            route_gap(
                squeezed_coherent_state_with(big_r, r, &fixed, Construction::Operator),
                Ok(cf),
            )
        })
        .collect();
    c.push("squeezed_coherent_operator_vs_closed_form", 1e-8, sc);

    let dn_points: Vec<(f64, usize)> = [0.5, 2.0, 4.0, 6.0]
        .iter()
        .flat_map(|&a| [0usize, 1, 3].into_iter().map(move |n0| (a, n0)))
        .collect();
    let dn: Vec<Result<f64>> = dn_points
        .par_iter()
        .map(|&(a, n0)| {
            let alpha = Complex64::from_polar(a, 0.4);
            let cf = displaced_number_state_with(alpha, n0, &trunc, Construction::ClosedForm)?;
            let fixed = TruncationConfig::with_dim(cf.state.dim());
            route_gap(
                displaced_number_state_with(alpha, n0, &fixed, Construction::Operator),
                Ok(cf),
            )
        })
        .collect();
    c.push("displaced_number_operator_vs_closed_form", 1e-8, dn);
    c.results
}

/// 1000 Bloch vectors: 10 radii x 10 polar x 10 azimuthal angles.
pub fn bloch_grid() -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(1000);
    for i in 1..=10 {
        let len = i as f64 / 10.0;
        for j in 0..10 {
            let theta = std::f64::consts::PI * j as f64 / 9.0;
            for k in 0..10 {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 10.0;
                out.push([
                    len * theta.sin() * phi.cos(),
                    len * theta.sin() * phi.sin(),
                    len * theta.cos(),
                ]);
            }
        }
    }
    out
}

fn number_state(n0: usize) -> Result<PureState> {
    let mut v = vec![0.0; n0 + 1];
    v[n0] = 1.0;
    PureState::from_real(&v, crate::states::FOCK_BASIS)
}

fn infinite_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let mut c = Collector::new("infinite");
    let grid = default_xi_grid();
    let trunc = TruncationConfig::default();

    let number: Vec<Result<f64>> = [0usize, 1, 2, 5, 10]
        .iter()
        .map(|&n0| {
            let p = number_state(n0)?.probabilities();
            let sweep = certainty_limit_sweep_populations(&p, 0.0, &grid)?;
            Ok((sweep.nc_h_limit - 2.0).abs())
        })
        .collect();
    c.push("number_state_nc_limit_is_2", 1e-4, number);

    let sg: Vec<Result<f64>> = [0.25, 0.5, 0.75]
        .iter()
        .map(|&x| {
            let t = sg_phase_state(Complex64::new(x, 0.0), &trunc)?;
            let p = t.state.probabilities();
            let c_h = QuantifierReport::from_pure(&t.state).c_h;
            let sweep = certainty_limit_sweep_populations(&p, c_h, &grid)?;
            Ok((sweep.nc_h_limit - (2.0 * x / (1.0 - x) + 2.0)).abs())
        })
        .collect();
    c.push("sg_nc_limit_is_c_h_plus_2", 1e-3, sg);

    let mono: Vec<Result<f64>> = [0usize, 3]
        .iter()
        .map(|&n0| number_state(n0).map(|s| s.probabilities()))
        .chain([0.5, 0.9].iter().map(|&x| {
            sg_phase_state(Complex64::new(x, 0.0), &trunc).map(|t| t.state.probabilities())
        }))
        .map(|p| {
            let p = p?;
            // Away from the limit S_H(xi) need not be monotone: for |n0>,
            // n0 >= 1, it dips below S_H(0) = 2 first.
            let fine: Vec<f64> = (0..200).map(|k| 0.9 + k as f64 * 0.0005).collect();
            let sweep = certainty_limit_sweep_populations(&p, 0.0, &fine)?;
            Ok(sweep
                .points
                .windows(2)
                .map(|w| (w[0].s_h - w[1].s_h).max(0.0))
                .fold(0.0, f64::max))
        })
        .collect();
    c.push("certainty_monotone_near_limit", 1e-14, mono);

    let reference = ThermalReference::with_tail(0.99, trunc.tail_mass_tol, 1 << 16);
    let mut window_h = Vec::new();
    let mut window_hs = Vec::new();
    match &reference {
        Ok(reference) => {
            let sg = sg_phase_state(Complex64::new(0.5, 0.0), &trunc);
            if let Ok(sg) = &sg {
                let r = infinite_pythagoras_residual_pure(&sg.state, reference);
                window_h.push(Ok(r.residual_h));
                window_hs.push(Ok(r.residual_hs));
            }
            for i in 0..cfg.trials.min(50) {
                let mut rng = rng_for(cfg.seed, 20, i);
                let r = random_pure(&mut rng, 20)
                    .map(|psi| psi.to_density())
                    .and_then(|rho| infinite_pythagoras_residual(&rho, reference));
                window_h.push(r.as_ref().map(|r| r.residual_h).map_err(clone_err));
                window_hs.push(r.map(|r| r.residual_hs));
            }
        }
        Err(e) => {
            window_h.push(Err(clone_err(e)));
            window_hs.push(Err(clone_err(e)));
        }
    }
    c.push("windowed_pythagoras_hellinger", 1e-10, window_h);
    c.push("windowed_pythagoras_hilbert_schmidt", 1e-12, window_hs);

    let stab: Vec<Result<f64>> = [(2.0, 0.3), (4.0, 0.0), (1.0, 0.8)]
        .iter()
        .map(|&(big_r, r)| {
            let a = squeezed_coherent_state_with(big_r, r, &trunc, Construction::ClosedForm)?;
            let fixed = TruncationConfig::with_dim(2 * a.state.dim());
            let b = squeezed_coherent_state_with(big_r, r, &fixed, Construction::ClosedForm)?;
            let (ra, rb) = (fock_report(&a)?, fock_report(&b)?);
            Ok((ra.c_h - rb.c_h)
                .abs()
                .max((ra.s_h - rb.s_h).abs())
                .max((ra.c_hs - rb.c_hs).abs()))
        })
        .collect();
    c.push("truncation_doubling_stable", 10.0 * trunc.tail_mass_tol, stab);

    c.results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_default_run_passes_and_is_deterministic() {
        let cfg = VerifyConfig {
            trials: 20,
            ..VerifyConfig::default()
        };
        let a = run(&cfg);
        assert!(a.all_passed(), "{a}");
        assert_eq!(a.to_string(), run(&cfg).to_string());
    }

    #[test]
    fn naive_branch_fails_pythagoras_suite() {
        let cfg = VerifyConfig {
            suite: Suite::Pythagoras,
            trials: 20,
            branch: SqrtBranch::NaivePrincipal,
            ..VerifyConfig::default()
        };
        let r = run(&cfg);
        assert!(!r.all_passed());
        assert!(!r.get("pythagoras", "coherence_distance_matches_l1").unwrap().ok());
    }
}
