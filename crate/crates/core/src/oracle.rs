//! Independent reference computations used by tests and the `verify` suite.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Coefficients of `x^j y^(n+m-j)` in `(x + y)^n (x - y)^m`, by repeated
/// polynomial multiplication.
pub fn expansion_coefficients(n: u32, m: u32) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    // Each factor maps coefficient index j (power of x) to j and j + 1.
    let mut mul = |sign_y: i32| {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            if sign_y > 0 {
                next[j] += c;
            } else {
                next[j] -= c;
            }
        }
        poly = next;
    };
    for _ in 0..n {
        mul(1);
    }
    for _ in 0..m {
        mul(-1);
    }
    poly
}

/// Amplitudes on `|j>_1 |n+m-j>_2` of
/// `(a1^dag + a2^dag)^n (a1^dag - a2^dag)^m |0,0> / sqrt(2^(n+m) n! m!)`,
/// with every factorial exact.
pub fn beam_splitter_oracle(n: u32, m: u32) -> Result<Vec<f64>> {
    let total = (n + m) as u64;
    if total > 100 {
        return Err(Error::InvalidParameter(format!(
            "oracle limited to n + m <= 100, got {total}"
        )));
    }
    let coeffs = expansion_coefficients(n, m);
    let den = (BigInt::one() << total as usize) * factorial(n as u64) * factorial(m as u64);
    let den = den.to_f64().expect("bounded by the size check");
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if c.is_zero() {
                return 0.0;
            }
            let num = c * c * factorial(j as u64) * factorial(total - j as u64);
            let mag = (num.to_f64().expect("bounded by the size check") / den).sqrt();
            if c.sign() == num_bigint::Sign::Minus {
                -mag
            } else {
                mag
            }
        })
        .collect())
}

/// Applies `a2 -> -a2`, i.e. multiplies the `|j, NT-j>` amplitude by
/// `(-1)^(NT-j)`, then makes the first nonzero entry positive.
pub fn relabel_second_mode(v: &[f64]) -> Vec<f64> {
    let total = v.len().saturating_sub(1);
    let mut out: Vec<f64> = v
        .iter()
        .enumerate()
        .map(|(j, &x)| if (total - j) % 2 == 1 { -x } else { x })
        .collect();
    canonical_sign(&mut out);
    out
}

pub fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
