//! Example state families over finite and truncated Fock bases.
//!
//! Each family that can be built two ways exposes both: the operator route
//! (truncated generator exponentials acting on a Fock vector) and a
//! closed-form amplitude formula. Tests and the `verify` suite hold them
//! against each other.

mod beam_splitter;
mod closed_form;
mod families;
mod fock;
mod spec;

pub use beam_splitter::{beam_splitter_coefficients, rotated_number_state};
pub use closed_form::{
    displaced_number_amplitudes, poisson_amplitudes, squeezed_coherent_amplitudes,
};
pub use families::{
    displaced_number_state, displaced_number_state_with, energy_split, sg_phase_state,
    squeezed_coherent_number_stats, squeezed_coherent_state, squeezed_coherent_state_with,
    tmsv_distribution, tmsv_state, Construction, TruncatedState, TruncationConfig,
};
pub use fock::{apply_exponential, FockGenerator, FockOperators};
pub use spec::{BuiltState, ComplexParam, StateSpec, StateVariant};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::{DensityMatrix, PureState, Tolerances};
use crate::error::{Error, Result};
use crate::quantifiers::bloch_length;

/// Basis label for the sigma_z eigenbasis of a qubit.
pub const QUBIT_BASIS: &str = "sigma_z";
/// Basis label for single-mode photon-number states.
pub const FOCK_BASIS: &str = "fock";
/// Basis label for the twin-photon ladder `|n, n>`.
pub const TWIN_BASIS: &str = "twin_fock";
/// Basis label for beam-splitter output number states `|j>_1 |NT - j>_2`.
pub const SPLIT_BASIS: &str = "output_number";

/// `rho = (1 + s . sigma) / 2` in the sigma_z eigenbasis.
pub fn qubit_from_bloch(s: [f64; 3]) -> Result<DensityMatrix> {
    bloch_length(s)?;
    let half = 0.5;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(half * (1.0 + s[2]), 0.0),
            Complex64::new(half * s[0], -half * s[1]),
            Complex64::new(half * s[0], half * s[1]),
            Complex64::new(half * (1.0 - s[2]), 0.0),
        ],
    );
    DensityMatrix::new(m, QUBIT_BASIS, &Tolerances::default())
}

/// `(1/sqrt(N)) sum_j exp(i phi_j) |j>`. Missing phases default to zero.
pub fn finite_phase_state(n: usize, phases: &[f64]) -> Result<PureState> {
    if n == 0 {
        return Err(Error::InvalidParameter("phase state needs N >= 1".into()));
    }
    if phases.len() > n {
        return Err(Error::InvalidParameter(format!(
            "{} phases given for dimension {n}",
            phases.len()
        )));
    }
    let amp = 1.0 / (n as f64).sqrt();
    let v = (0..n)
        .map(|j| Complex64::from_polar(amp, phases.get(j).copied().unwrap_or(0.0)))
        .collect();
    PureState::new(v, crate::density::DEFAULT_BASIS, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantifiers::coherence_h;

    #[test]
    fn bloch_examples() {
        let mixed = qubit_from_bloch([0.0; 3]).unwrap();
        assert_eq!(mixed.diagonal(), vec![0.5, 0.5]);
        let up = qubit_from_bloch([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(up.diagonal(), vec![1.0, 0.0]);
        let plus = qubit_from_bloch([1.0, 0.0, 0.0]).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(plus.get(i, j), Complex64::new(0.5, 0.0));
        }
        assert!(qubit_from_bloch([0.8, 0.8, 0.0]).is_err());
    }

    #[test]
    fn phase_state_examples() {
        let one = finite_phase_state(1, &[]).unwrap();
        assert_eq!(one.amplitude(0), Complex64::new(1.0, 0.0));
        let four = finite_phase_state(4, &[]).unwrap();
        assert!(four.amplitudes().iter().all(|c| (c.re - 0.5).abs() < 1e-15));
        let c0 = coherence_h(&four.to_density()).unwrap();
        let twisted = finite_phase_state(4, &[0.3, -1.2, 2.0, 3.1]).unwrap();
        let c1 = coherence_h(&twisted.to_density()).unwrap();
        assert!((c0 - 3.0).abs() < 1e-12);
        assert!((c1 - 3.0).abs() < 1e-12);
        assert!(finite_phase_state(0, &[]).is_err());
    }
}
