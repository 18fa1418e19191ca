//! Closed-form radial problem: spectrum, series coefficients, Laguerre forms
//! and normalization.
//!
//! Positions are `r̃ = r / (r_B/Z)`. With `ℳ = √((n_r+γ)² + (Zα)²)` the
//! Laguerre argument is `x = 2r̃/ℳ` and the series variable is
//! `ξ = r̃/(Zα)`, so that `x = 2ϰξ` with damping `ϰ = Zα/ℳ`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use crate::angular::HalfInt;
use crate::specfun::{gen_laguerre, gen_laguerre_below, ln_gamma};
use crate::{DiracError, Result, FINE_STRUCTURE};

/// Nuclear charge and coupling constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConfig {
    pub z: f64,
    pub alpha: f64,
}

impl PhysicalConfig {
    pub fn new(z: f64, alpha: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(DiracError::InvalidConfig("Z must be positive"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(DiracError::InvalidConfig("alpha must be positive"));
        }
        Ok(PhysicalConfig { z, alpha })
    }

    pub fn hydrogen_like(z: f64) -> Result<Self> {
        Self::new(z, FINE_STRUCTURE)
    }

    pub fn zalpha(&self) -> f64 {
        self.z * self.alpha
    }
}

/// The sign σ separating the two eigenbispinors of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sigma {
    Plus,
    Minus,
}

impl Sigma {
    pub fn sign(self) -> f64 {
        match self {
            Sigma::Plus => 1.0,
            Sigma::Minus => -1.0,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Sigma::Plus),
            -1 => Ok(Sigma::Minus),
            _ => Err(DiracError::InvalidQuantumNumbers("sigma must be +1 or -1")),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Sigma::Plus { "+" } else { "-" })
    }
}

/// `(n_r, κ_j, m_j, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n_r: u32,
    pub kappa: u32,
    pub m_j: HalfInt,
    pub sigma: Sigma,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, kappa: u32, m_j: HalfInt, sigma: Sigma) -> Result<Self> {
        if kappa == 0 {
            return Err(DiracError::InvalidQuantumNumbers("kappa must be at least 1"));
        }
        if m_j.twice().unsigned_abs() > 2 * kappa - 1 {
            return Err(DiracError::InvalidQuantumNumbers("|m_j| exceeds j"));
        }
        if n_r == 0 && sigma == Sigma::Minus {
            return Err(DiracError::InvalidQuantumNumbers("n_r = 0 admits only sigma = +"));
        }
        Ok(QuantumNumbers {
            n_r,
            kappa,
            m_j,
            sigma,
        })
    }

    /// Builds from the principal number `n = n_r + κ`.
    pub fn from_principal(n: u32, kappa: u32, two_mj: i32, sigma: Sigma) -> Result<Self> {
        if kappa > n {
            return Err(DiracError::InvalidQuantumNumbers("kappa must not exceed n"));
        }
        Self::new(n - kappa, kappa, HalfInt::from_twice(two_mj)?, sigma)
    }

    pub fn principal(&self) -> u32 {
        self.n_r + self.kappa
    }

    /// `j = κ − 1/2`.
    pub fn j(&self) -> f64 {
        self.kappa as f64 - 0.5
    }
}

/// `κ − γ_j`, computed without cancellation.
fn kappa_minus_gamma(kappa: u32, zalpha: f64, g: f64) -> f64 {
    zalpha * zalpha / (kappa as f64 + g)
}

/// `γ_j = √(κ² − (Zα)²)`.
pub fn gamma_j(kappa: u32, zalpha: f64) -> Result<f64> {
    let k = kappa as f64;
    if !(zalpha >= 0.0) || zalpha >= k {
        return Err(DiracError::NoBoundState { kappa, zalpha });
    }
    Ok(((k - zalpha) * (k + zalpha)).sqrt())
}

/// Energy `ε`, damping `ϰ` and `ℳ` of one level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energy {
    pub epsilon: f64,
    pub varkappa: f64,
    pub big_n: f64,
}

impl Energy {
    /// `1 − ε`, without cancellation.
    pub fn binding(&self) -> f64 {
        self.varkappa * self.varkappa / (1.0 + self.epsilon)
    }
}

pub fn energy(n_r: u32, kappa: u32, zalpha: f64) -> Result<Energy> {
    let g = gamma_j(kappa, zalpha)?;
    let a = n_r as f64 + g;
    let big_n = a.hypot(zalpha);
    Ok(Energy {
        epsilon: a / big_n,
        varkappa: zalpha / big_n,
        big_n,
    })
}

/// `(Δ_j, ε)` from the principal-number form of the spectrum.
pub fn fine_structure(n: u32, kappa: u32, zalpha: f64) -> Result<(f64, f64)> {
    if kappa == 0 || kappa > n {
        return Err(DiracError::InvalidQuantumNumbers("need 1 <= kappa <= n"));
    }
    let g = gamma_j(kappa, zalpha)?;
    let delta = zalpha * zalpha / (kappa as f64 + g);
    let a = n as f64 - delta;
    Ok((delta, a / a.hypot(zalpha)))
}

/// Power-series coefficients in `ξ` for the two independent pairs
/// `(u⁺, v⁻)` and `(u⁻, v⁺)`, seeded with `b₀ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients {
    pub b_plus: Vec<f64>,
    pub d_minus: Vec<f64>,
    pub b_minus: Vec<f64>,
    pub d_plus: Vec<f64>,
}

/// Coefficients from the closed recurrences valid at the quantized energy.
pub fn coeffs_by_recurrence(n_r: u32, kappa: u32, zalpha: f64) -> Result<SeriesCoefficients> {
    let g = gamma_j(kappa, zalpha)?;
    let big_n = energy(n_r, kappa, zalpha)?.big_n;
    let k = kappa as f64;
    let nr = n_r as f64;
    let len = n_r as usize + 1;
    let kmg = kappa_minus_gamma(kappa, zalpha, g);
    // κ + sγ
    let k_sg = |s: f64| if s > 0.0 { k + g } else { kmg };

    let mut b_plus = vec![0.0; len];
    let mut d_minus = vec![0.0; len];
    b_plus[0] = 1.0;
    d_minus[0] = -(kmg / (k + g)).sqrt();

    let mut b_minus = vec![0.0; len];
    let mut d_plus = vec![0.0; len];
    if n_r > 0 {
        b_minus[0] = 1.0;
        d_plus[0] = -((k + g) / kmg).sqrt();
    }

    if n_r >= 1 {
        for (s, b, d) in [(1.0, &mut b_plus, &mut d_minus), (-1.0, &mut b_minus, &mut d_plus)] {
            // first step
            b[1] = -s * (big_n + 1.0 - nr + s * k) * (big_n + nr - s * k)
                / ((1.0 + 2.0 * g) * k_sg(s) * big_n)
                * zalpha
                * b[0];
            d[1] = -(big_n + nr - 1.0 + s * k) * (big_n + nr - s * k)
                / ((1.0 + 2.0 * g) * (big_n + nr + g) * big_n)
                * zalpha
                * d[0];
            for n in 1..n_r as usize {
                let nf = n as f64;
                b[n + 1] = 2.0 * (nf + big_n + 1.0 - nr + s * k) * (nf - nr)
                    / ((nf + 1.0) * (nf + 1.0 + 2.0 * g) * (nf + big_n - nr + s * k) * big_n)
                    * zalpha
                    * b[n];
                d[n + 1] = 2.0 * (nf + 1.0 - big_n - nr - s * k) * (nf - nr)
                    / ((nf + 1.0) * (nf + 1.0 + 2.0 * g) * (nf - big_n - nr - s * k) * big_n)
                    * zalpha
                    * d[n];
            }
        }
    }
    Ok(SeriesCoefficients {
        b_plus,
        d_minus,
        b_minus,
        d_plus,
    })
}

/// Solves the order-by-order linear system of the radial equations directly,
/// for one pair (`upper = true` gives `(b⁺, d⁻)`), returning `count`
/// coefficients. Independent of the closed recurrences; used to cross-check
/// them and their termination.
pub fn coeffs_by_linear_solve(
    n_r: u32,
    kappa: u32,
    zalpha: f64,
    upper: bool,
    count: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = gamma_j(kappa, zalpha)?;
    let e = energy(n_r, kappa, zalpha)?;
    let (eps, vk) = (e.epsilon, e.varkappa);
    let one_minus = e.binding();
    let k = kappa as f64;
    let s = if upper { 1.0 } else { -1.0 };
    let mut b = vec![0.0; count];
    let mut d = vec![0.0; count];
    if count == 0 {
        return Ok((b, d));
    }
    b[0] = 1.0;
    // γ − sκ
    let g_sk = if upper { -kappa_minus_gamma(kappa, zalpha, g) } else { g + k };
    d[0] = s * g_sk / zalpha;
    for n in 0..count - 1 {
        let m = n as f64 + 1.0 + g;
        // [m − sκ, −sZα; sZα, m + sκ] (b, d) = rhs, determinant (n+1)(n+1+2γ)
        let r1 = vk * b[n] + s * (1.0 + eps) * d[n];
        let r2 = s * one_minus * b[n] + vk * d[n];
        let det = (n as f64 + 1.0) * (n as f64 + 1.0 + 2.0 * g);
        b[n + 1] = ((m + s * k) * r1 + s * zalpha * r2) / det;
        d[n + 1] = ((m - s * k) * r2 - s * zalpha * r1) / det;
    }
    Ok((b, d))
}

/// Values of `(P̃⁺, Q̃⁻, P̃⁻, Q̃⁺)` at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaguerrePolys {
    pub p_plus: f64,
    pub q_minus: f64,
    pub p_minus: f64,
    pub q_plus: f64,
}

pub fn polynomials_laguerre(n_r: u32, kappa: u32, zalpha: f64, x: f64) -> Result<LaguerrePolys> {
    let g = gamma_j(kappa, zalpha)?;
    let big_n = energy(n_r, kappa, zalpha)?.big_n;
    Ok(laguerre_forms(n_r, kappa as f64, g, big_n, x))
}

fn laguerre_forms(n_r: u32, k: f64, g: f64, big_n: f64, x: f64) -> LaguerrePolys {
    let n = n_r as usize;
    let a = 2.0 * g;
    let ln = gen_laguerre(n, a, x);
    let lm = gen_laguerre_below(n, a, x);
    let nr = n_r as f64;
    let t = (nr + a) / (big_n + k);
    let (p_minus, q_minus_pair) = if n_r == 0 {
        (0.0, 0.0)
    } else {
        let u = (nr * (nr + a)).sqrt() / (big_n + k);
        let v = ((nr + a) / nr).sqrt();
        (u * ln - v * lm, u * ln + v * lm)
    };
    LaguerrePolys {
        p_plus: ln - t * lm,
        q_minus: ln + t * lm,
        p_minus,
        q_plus: q_minus_pair,
    }
}

/// `C_{n_r,j}`.
pub fn normalization_constant(n_r: u32, kappa: u32, zalpha: f64) -> Result<f64> {
    let g = gamma_j(kappa, zalpha)?;
    let e = energy(n_r, kappa, zalpha)?;
    let nr = n_r as f64;
    let ln_c2 = ((1.0 + e.epsilon) * (e.big_n + kappa as f64) / (4.0 * e.big_n)).ln()
        + ln_gamma(nr + 1.0)?
        - ln_gamma(nr + 1.0 + 2.0 * g)?;
    Ok((0.5 * ln_c2).exp())
}

/// Radial amplitudes multiplying `χ₊` and `χ₋` in the upper and lower
/// spinors, before the β coefficients are applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialAmplitudes {
    pub f_plus: f64,
    pub g_minus: f64,
    pub f_minus: f64,
    pub g_plus: f64,
}

/// Everything radial about one `(n_r, κ, Zα)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSolution {
    pub n_r: u32,
    pub kappa: u32,
    pub zalpha: f64,
    pub gamma_j: f64,
    pub energy: Energy,
    pub coeffs: SeriesCoefficients,
    pub c_norm: f64,
}

impl RadialSolution {
    pub fn new(n_r: u32, kappa: u32, zalpha: f64) -> Result<Self> {
        Ok(RadialSolution {
            n_r,
            kappa,
            zalpha,
            gamma_j: gamma_j(kappa, zalpha)?,
            energy: energy(n_r, kappa, zalpha)?,
            coeffs: coeffs_by_recurrence(n_r, kappa, zalpha)?,
            c_norm: normalization_constant(n_r, kappa, zalpha)?,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.energy.epsilon
    }

    pub fn big_n(&self) -> f64 {
        self.energy.big_n
    }

    /// `√((1−ε)/(1+ε))`.
    pub fn small_factor(&self) -> f64 {
        self.energy.varkappa / (1.0 + self.energy.epsilon)
    }

    /// `x = 2r̃/ℳ`.
    pub fn x_of(&self, r: f64) -> f64 {
        2.0 * r / self.energy.big_n
    }

    pub fn polynomials(&self, x: f64) -> LaguerrePolys {
        laguerre_forms(self.n_r, self.kappa as f64, self.gamma_j, self.energy.big_n, x)
    }

    /// Recurrence-built polynomials `(P⁺, Q⁻, P⁻, Q⁺)` evaluated at `x`,
    /// i.e. at `ξ = x/(2ϰ)`.
    pub fn series_polynomials(&self, x: f64) -> [f64; 4] {
        // the coefficient of ξⁿ times (2ϰ)⁻ⁿ stays O(1) even for tiny Zα
        let scale = 1.0 / (2.0 * self.energy.varkappa);
        let eval = |c: &[f64]| {
            let mut acc = 0.0;
            let mut pow = 1.0;
            for &cn in c {
                acc += cn * pow;
                pow *= x * scale;
            }
            acc
        };
        [
            eval(&self.coeffs.b_plus),
            eval(&self.coeffs.d_minus),
            eval(&self.coeffs.b_minus),
            eval(&self.coeffs.d_plus),
        ]
    }

    /// `(2/ℳ)^{3/2} C e^{−x/2} x^{γ−1}` for `r > 0`.
    pub fn prefactor(&self, r: f64) -> f64 {
        let x = self.x_of(r);
        let n = self.energy.big_n;
        (2.0 / n).powf(1.5) * self.c_norm * (-0.5 * x + (self.gamma_j - 1.0) * x.ln()).exp()
    }

    /// Radial amplitudes at `r ≥ 0`. At the origin they are singular when
    /// `γ < 1`.
    pub fn radial_functions(&self, r: f64) -> Result<RadialAmplitudes> {
        if !(r >= 0.0) {
            return Err(DiracError::Domain {
                func: "radial_functions",
                value: r,
            });
        }
        if r == 0.0 && self.gamma_j < 1.0 {
            return Err(DiracError::SingularOrigin {
                gamma: self.gamma_j,
            });
        }
        Ok(self.amplitudes(r))
    }

    /// As [`radial_functions`](Self::radial_functions) without the origin
    /// check.
    pub fn amplitudes(&self, r: f64) -> RadialAmplitudes {
        let x = self.x_of(r);
        let pref = if r == 0.0 {
            if self.gamma_j > 1.0 {
                0.0
            } else {
                (2.0 / self.energy.big_n).powf(1.5) * self.c_norm
            }
        } else {
            self.prefactor(r)
        };
        let p = self.polynomials(x);
        let fac = self.small_factor();
        RadialAmplitudes {
            f_plus: pref * p.p_plus,
            g_minus: -fac * pref * p.q_minus,
            f_minus: pref * p.p_minus,
            g_plus: fac * pref * p.q_plus,
        }
    }
}
