//! Special functions and Gauss rules used by the radial and angular parts.

mod quadrature;

pub use quadrature::{make_quadrature, QuadratureKind, QuadratureRule};

use core::f64::consts::PI;
#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use crate::{DiracError, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_4e-6,
];

fn lanczos_series(z: f64) -> f64 {
    // z = x - 1
    let mut sum = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    sum
}

/// Γ(x) for `0 < x ≤ 171`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || x > 171.6 {
        return Err(DiracError::Domain {
            func: "gamma",
            value: x,
        });
    }
    if x < 0.5 {
        // reflection keeps the series in its accurate range
        return Ok(PI / ((PI * x).sin() * gamma_fn(1.0 - x)?));
    }
    if x == x.floor() && x <= 30.0 {
        return Ok(factorial(x as u32 - 1));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = 0.5 * (z + 0.5);
    // t^(z+1/2) split in two so the power does not overflow before e^-t damps it
    let p = t.powf(half);
    Ok((2.0 * PI).sqrt() * (p * (-t).exp()) * p * lanczos_series(z))
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(DiracError::Domain {
            func: "ln_gamma",
            value: x,
        });
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_series(z).ln())
}

/// n! as a float; exact for n ≤ 22.
pub fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Associated Legendre function P_l^{|m|}(x) without the Condon–Shortley
/// phase. Returns 0 when `|m| > l`.
pub fn assoc_legendre(l: u32, m: i32, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(DiracError::Domain {
            func: "assoc_legendre",
            value: x,
        });
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    Ok(legendre_cs(l, m.unsigned_abs(), x, s))
}

/// P_l^m evaluated from `c = cos ϑ`, `s = sin ϑ` without the phase. The sign
/// of `s` is kept, so the result is analytic in ϑ through the poles.
pub(crate) fn legendre_cs(l: u32, m: u32, c: f64, s: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = c * (2 * m + 1) as f64 * pmm;
    for k in (m + 1)..l {
        let next = ((2 * k + 1) as f64 * c * cur - (k + m) as f64 * prev) / (k - m + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial L_n^α(x) from the three-term recurrence.
pub fn gen_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    debug_assert!(alpha > -1.0);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// L_{n-1}^α with the convention L_{-1}^α ≡ 0.
pub(crate) fn gen_laguerre_below(n: usize, alpha: f64, x: f64) -> f64 {
    match n.checked_sub(1) {
        Some(k) => gen_laguerre(k, alpha, x),
        None => 0.0,
    }
}
