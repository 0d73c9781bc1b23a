//! Two-mode number states after a 50/50 beam splitter.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use statrs::function::factorial::ln_factorial;

use crate::density::{PureState, Tolerances};
use crate::error::{Error, Result};

use super::SPLIT_BASIS;

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Amplitudes `c_j`, `j = 0..=n+m`, of `|n>|m>` on the output states
/// `|j>_1 |n+m-j>_2`.
///
/// The alternating k-sum is evaluated exactly: with `n! m!` pulled inside,
/// each term becomes `(-1)^k C(n,k) C(m,j-k)`, an integer, and terms whose
/// factorial arguments would be negative are skipped. Only the prefactor
/// `sqrt(j! (n+m-j)! / (2^(n+m) n! m!))` is taken in log-factorial form.
/// Floating-point summation of the raw terms cancels catastrophically near
/// `n = m` (terms ~1e7 summing to ~0.1 at `n + m = 60`).
pub fn beam_splitter_coefficients(n: u32, m: u32) -> Result<Vec<f64>> {
    let (n, m) = (n as u64, m as u64);
    let total = n + m;
    if total > 20_000 {
        return Err(Error::InvalidParameter(format!(
            "total photon number {total} too large"
        )));
    }
    let ln_pref_nm = -0.5 * (ln_factorial(n) + ln_factorial(m)) - 0.5 * total as f64 * std::f64::consts::LN_2;
    let mut out = Vec::with_capacity(total as usize + 1);
    for j in 0..=total {
        let k_lo = j.saturating_sub(m);
        let k_hi = j.min(n);
        let mut sum = BigInt::zero();
        for k in k_lo..=k_hi {
            let term = binomial(n, k) * binomial(m, j - k);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        if sum.is_zero() {
            out.push(0.0);
            continue;
        }
        let magnitude = sum.abs().to_f64().unwrap_or(f64::INFINITY);
        if !magnitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beam-splitter sum overflows f64 at n={n}, m={m}"
            )));
        }
        let ln_c = magnitude.ln() + ln_pref_nm + 0.5 * (ln_factorial(j) + ln_factorial(total - j));
        let sign = if sum.is_negative() { -1.0 } else { 1.0 };
        out.push(sign * ln_c.exp());
    }
    Ok(out)
}

/// `|n>|m>` after the beam splitter, as a pure state of dimension `n+m+1`.
pub fn rotated_number_state(n: u32, m: u32) -> Result<PureState> {
    let c = beam_splitter_coefficients(n, m)?;
    let v = c.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok(PureState::new(v, SPLIT_BASIS, &Tolerances::default())?.with_canonical_phase())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantifiers::{coherence_h, coherence_pure};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn single_photon_splits_evenly() {
        let c = beam_splitter_coefficients(1, 0).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c[0].abs() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c[1].abs() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel() {
        let c = beam_splitter_coefficients(1, 1).unwrap();
        assert!((c[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(c[1], 0.0);
        assert!((c[2] + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn normalized_up_to_sixty_photons() {
        for total in 0..=60u32 {
            for m in 0..=total {
                let c = beam_splitter_coefficients(total - m, m).unwrap();
                let norm: f64 = c.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12, "n+m={total}, m={m}: {norm}");
            }
        }
    }

    #[test]
    fn coherence_examples() {
        let one = rotated_number_state(1, 0).unwrap();
        assert!((coherence_h(&one.to_density()).unwrap() - 1.0).abs() < 1e-14);
        let hom = rotated_number_state(1, 1).unwrap();
        assert!((coherence_pure(&hom.probabilities()).unwrap() - 1.0).abs() < 1e-14);
        let vac = rotated_number_state(0, 0).unwrap();
        assert_eq!(vac.dim(), 1);
        assert_eq!(coherence_pure(&vac.probabilities()).unwrap(), 0.0);
    }

    #[test]
    fn twin_states_have_no_odd_amplitudes() {
        let c = beam_splitter_coefficients(5, 5).unwrap();
        for (j, x) in c.iter().enumerate() {
            if j % 2 == 1 {
                assert_eq!(*x, 0.0);
            }
        }
    }
}
