//! Closed-form Fock amplitudes used to cross-check the operator route.

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial;

const RESCALE: f64 = 1e150;

/// Amplitudes `<n| D(R) S(zeta) |0>`, `n < dim`, for real displacement `R`
/// and real squeeze `zeta`, with `S(zeta) = exp(zeta (a^2 - a^dagger^2)/2)`.
///
/// Uses the Hermite generating form rewritten as a three-term recurrence for
/// `h_n = H_n(x) (t/2)^(n/2) / sqrt(n!)`:
/// `h_{n+1} = a h_n / sqrt(n+1) - t sqrt(n/(n+1)) h_{n-1}`, with
/// `t = tanh(zeta)` and `a = R e^zeta / cosh(zeta)`, times the prefactor
/// `exp(-R^2 (1 + t) / 2) / sqrt(cosh(zeta))`. Negative `zeta` squeezes the
/// quadrature orthogonal to the displacement. Magnitudes are carried with a
/// running log scale so large displacements neither overflow nor underflow.
pub fn squeezed_coherent_amplitudes(displacement: f64, zeta: f64, dim: usize) -> Vec<f64> {
    let t = zeta.tanh();
    let a = displacement * zeta.exp() / zeta.cosh();
    let ln_pref = -0.5 * displacement * displacement * (1.0 + t) - 0.5 * zeta.cosh().ln();

    let mut out = Vec::with_capacity(dim);
    let mut log_scale = 0.0;
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    for n in 0..dim {
        out.push(cur * (ln_pref + log_scale).exp());
        let nf = n as f64;
        let next = a * cur / (nf + 1.0).sqrt() - t * (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE || prev.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    out
}

/// Square roots of the Poisson weights with mean `R^2`, i.e. the coherent
/// state amplitudes for real `R >= 0`.
pub fn poisson_amplitudes(displacement: f64, dim: usize) -> Vec<f64> {
    let mean = displacement * displacement;
    (0..dim)
        .map(|n| {
            if mean == 0.0 {
                return if n == 0 { 1.0 } else { 0.0 };
            }
            let ln_p = -mean + n as f64 * mean.ln() - ln_factorial(n as u64);
            (0.5 * ln_p).exp()
        })
        .collect()
}

/// Generalized Laguerre `L_k^(a)(x)` by the upward recurrence in `k`.
fn laguerre(k: u64, a: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut l0, mut l1) = (1.0, 1.0 + a - x);
    for i in 1..k {
        let i = i as f64;
        let l2 = ((2.0 * i + 1.0 + a - x) * l1 - (i + a) * l0) / (i + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Matrix elements `<m| D(alpha) |n0>`, `m < dim`, from the associated
/// Laguerre form
/// `sqrt(n0!/m!) alpha^(m-n0) e^(-|alpha|^2/2) L_n0^(m-n0)(|alpha|^2)` for
/// `m >= n0`, and the mirrored expression with `(-conj(alpha))^(n0-m)` below.
pub fn displaced_number_amplitudes(alpha: Complex64, n0: usize, dim: usize) -> Vec<Complex64> {
    let x = alpha.norm_sqr();
    let r = alpha.norm();
    (0..dim)
        .map(|m| {
            if r == 0.0 {
                return if m == n0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            let (lo, hi) = (m.min(n0), m.max(n0));
            let diff = (hi - lo) as f64;
            let lag = laguerre(lo as u64, diff, x);
            if lag == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let ln_mag = 0.5 * (ln_factorial(lo as u64) - ln_factorial(hi as u64))
                + diff * r.ln()
                - 0.5 * x
                + lag.abs().ln();
            let mag = ln_mag.exp() * lag.signum();
            let unit = alpha / r;
            let phase = if m >= n0 {
                unit.powu((m - n0) as u32)
            } else {
                (-unit.conj()).powu((n0 - m) as u32)
            };
            phase * mag
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsqueezed_reduces_to_poisson() {
        let a = squeezed_coherent_amplitudes(2.0, 0.0, 60);
        let b = poisson_amplitudes(2.0, 60);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn squeezed_vacuum_even_only() {
        let a = squeezed_coherent_amplitudes(0.0, 0.7, 80);
        for (n, x) in a.iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(*x, 0.0);
            }
        }
        // <2|S(r)|0> = -tanh(r) sqrt(2)/2 / sqrt(cosh r)
        let r: f64 = 0.7;
        let expected = -r.tanh() * 2f64.sqrt() / 2.0 / r.cosh().sqrt();
        assert!((a[2] - expected).abs() < 1e-14);
    }

    #[test]
    fn large_displacement_stays_finite_and_normalized() {
        let a = squeezed_coherent_amplitudes(20.0, -0.5, 4000);
        let norm: f64 = a.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-10, "{norm}");
    }

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre(0, 3.0, 1.7), 1.0);
        assert!((laguerre(1, 2.0, 0.5) - 2.5).abs() < 1e-15);
        // L_2^(a)(x) = ((x^2 - 2(a+2)x + (a+1)(a+2)) / 2
        let (a, x) = (1.5, 0.8);
        let expected = (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)) / 2.0;
        assert!((laguerre(2, a, x) - expected).abs() < 1e-14);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let alpha = Complex64::new(1.3, 0.0);
        let a = displaced_number_amplitudes(alpha, 0, 40);
        let b = poisson_amplitudes(1.3, 40);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x.re - y).abs() < 1e-14 && x.im.abs() < 1e-15);
        }
    }
}
