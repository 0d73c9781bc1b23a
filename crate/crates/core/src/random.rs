//! Seeded random density matrices.
//!
//! Every sample is drawn from its own ChaCha stream keyed by
//! `(seed, dim, index)`, so suites can run in any order or in parallel and
//! still produce identical states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, PureState, Tolerances, DEFAULT_BASIS};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// `G G^dagger / tr` with complex Gaussian `G`.
    Ginibre,
    /// Real Gaussian `G`; off-diagonals are real and often negative.
    RealGinibre,
    /// Rank-one projector on a complex Gaussian vector.
    Pure,
    /// Diagonal with flat-Dirichlet populations.
    Diagonal,
    /// `G G^dagger / tr` with `G` of shape `N x 2`.
    LowRank,
}

impl SampleKind {
    pub const ALL: [SampleKind; 5] = [
        SampleKind::Ginibre,
        SampleKind::RealGinibre,
        SampleKind::Pure,
        SampleKind::Diagonal,
        SampleKind::LowRank,
    ];
}

pub fn rng_for(seed: u64, dim: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 40) ^ index as u64);
    rng
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn real_normal<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), 0.0)
}

fn from_factor(g: DMatrix<Complex64>) -> Result<DensityMatrix> {
    let mut m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m /= Complex64::new(tr, 0.0);
    // Exact Hermitian symmetry; rounding in the product can break it at 1e-17.
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(h, DEFAULT_BASIS, &Tolerances::default())
}

pub fn ginibre<R: Rng>(rng: &mut R, n: usize) -> Result<DensityMatrix> {
    from_factor(DMatrix::from_fn(n, n, |_, _| complex_normal(rng)))
}

pub fn real_ginibre<R: Rng>(rng: &mut R, n: usize) -> Result<DensityMatrix> {
    from_factor(DMatrix::from_fn(n, n, |_, _| real_normal(rng)))
}

pub fn low_rank<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Result<DensityMatrix> {
    from_factor(DMatrix::from_fn(n, rank.max(1), |_, _| complex_normal(rng)))
}

pub fn random_pure<R: Rng>(rng: &mut R, n: usize) -> Result<PureState> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(
        v.into_iter().map(|z| z / norm).collect(),
        DEFAULT_BASIS,
        &Tolerances::default(),
    )
}

pub fn random_populations<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

pub fn random_diagonal<R: Rng>(rng: &mut R, n: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_probabilities(&random_populations(rng, n), DEFAULT_BASIS, &Tolerances::default())
}

pub fn sample<R: Rng>(rng: &mut R, kind: SampleKind, n: usize) -> Result<DensityMatrix> {
    match kind {
        SampleKind::Ginibre => ginibre(rng, n),
        SampleKind::RealGinibre => real_ginibre(rng, n),
        SampleKind::Pure => Ok(random_pure(rng, n)?.to_density()),
        SampleKind::Diagonal => random_diagonal(rng, n),
        SampleKind::LowRank => low_rank(rng, n, 2),
    }
}

/// Sample `index` of the mixed suite for dimension `n`: kinds cycle through
/// [`SampleKind::ALL`].
pub fn suite_sample(seed: u64, n: usize, index: usize) -> Result<(SampleKind, DensityMatrix)> {
    let kind = SampleKind::ALL[index % SampleKind::ALL.len()];
    let mut rng = rng_for(seed, n, index);
    Ok((kind, sample(&mut rng, kind, n)?))
}
