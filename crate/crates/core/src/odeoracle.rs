//! Shooting solver for the first-order radial system in `ξ = r/λ_C`,
//! independent of the series recurrences and the Laguerre forms.
//!
//! With `f = e^{−ϰξ}u`, `g = e^{−ϰξ}v` and `s = ±1` for the branches
//! `(u⁺, v⁻)` and `(u⁻, v⁺)`:
//!
//! ```text
//! u' = (sκ/ξ + ϰ) u + s(1 + ε + Zα/ξ) v
//! v' = (−sκ/ξ + ϰ) v + s(1 − ε − Zα/ξ) u
//! ```
//!
//! The outward solution starts from the two-term `ξ^γ` series; the inward
//! one starts on the decaying asymptote at `ξ_max`. Their normalized
//! Wronskian at `x = 2ϰξ = ℳ + 1` is the shooting functional.

use alloc::vec::Vec;

#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use crate::radial::{gamma_j, RadialSolution};
use crate::{DiracError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `(u⁺, v⁻)`, paired with `(f₊, g₋)`.
    PlusMinus,
    /// `(u⁻, v⁺)`, paired with `(f₋, g₊)`; has no `n_r = 0` state.
    MinusPlus,
}

impl Branch {
    fn s(self) -> f64 {
        match self {
            Branch::PlusMinus => 1.0,
            Branch::MinusPlus => -1.0,
        }
    }
}

/// Integration and search settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootingConfig {
    pub xi_min: f64,
    /// `ξ_max = xi_max_decay / ϰ`.
    pub xi_max_decay: f64,
    /// Step budget of one integration leg.
    pub max_steps: usize,
    /// Search window in ε; `None` scans upward from the deepest level.
    pub eps_bracket: Option<(f64, f64)>,
    /// Mesh spacing in `ℳ`.
    pub mesh_step: f64,
    pub tol_energy: f64,
    pub rtol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            xi_min: 1e-6,
            xi_max_decay: 60.0,
            max_steps: 200_000,
            eps_bracket: None,
            mesh_step: 0.05,
            tol_energy: 1e-12,
            rtol: 1e-10,
        }
    }
}

impl ShootingConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.xi_min > 0.0
            && self.xi_min < 1e-2
            && self.xi_max_decay > 10.0
            && self.mesh_step > 0.0
            && self.tol_energy >= 1e-12
            && self.rtol > 0.0
            && self.max_steps > 0;
        let bracket_ok = match self.eps_bracket {
            Some((lo, hi)) => 0.0 < lo && lo < hi && hi < 1.0,
            None => true,
        };
        if ok && bracket_ok {
            Ok(())
        } else {
            Err(DiracError::InvalidConfig("inconsistent shooting configuration"))
        }
    }
}

/// Outcome of one shot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shot {
    /// Normalized Wronskian in `[−1, 1]`; changes sign at eigenvalues.
    pub functional: f64,
    /// `ln ‖(u, v)‖` of the outward solution at the matching point.
    pub log_amplitude: f64,
}

struct System {
    s: f64,
    kappa: f64,
    zalpha: f64,
    eps: f64,
    varkappa: f64,
    gamma: f64,
}

impl System {
    fn new(kappa: u32, zalpha: f64, eps: f64, branch: Branch) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(DiracError::Domain {
                func: "integrate_radial",
                value: eps,
            });
        }
        let gamma = gamma_j(kappa, zalpha)?;
        if zalpha == 0.0 {
            return Err(DiracError::NoBoundState { kappa, zalpha });
        }
        Ok(System {
            s: branch.s(),
            kappa: kappa as f64,
            zalpha,
            eps,
            varkappa: (1.0 - eps * eps).sqrt(),
            gamma,
        })
    }

    fn rhs(&self, xi: f64, y: [f64; 2]) -> [f64; 2] {
        let (s, k, za) = (self.s, self.kappa, self.zalpha);
        [
            (s * k / xi + self.varkappa) * y[0] + s * (1.0 + self.eps + za / xi) * y[1],
            (-s * k / xi + self.varkappa) * y[1] + s * (1.0 - self.eps - za / xi) * y[0],
        ]
    }

    /// `(u, v) / ξ^γ` at `ξ` from the two leading series terms, `b₀ = 1`.
    fn seed(&self, xi: f64) -> [f64; 2] {
        let (s, k, za, g) = (self.s, self.kappa, self.zalpha, self.gamma);
        // γ − sκ without cancellation
        let g_minus_sk = if s > 0.0 { -za * za / (k + g) } else { -(g + k) };
        let g_plus_sk = if s > 0.0 { g + k } else { -za * za / (k + g) };
        let d0 = s * g_minus_sk / za;
        let rhs1 = self.varkappa + s * (1.0 + self.eps) * d0;
        let rhs2 = self.varkappa * d0 + s * (1.0 - self.eps);
        let (a11, a12, a21, a22) = (1.0 + g_minus_sk, -s * za, s * za, 1.0 + g_plus_sk);
        let det = a11 * a22 - a12 * a21;
        let b1 = (rhs1 * a22 - a12 * rhs2) / det;
        let d1 = (a11 * rhs2 - a21 * rhs1) / det;
        [1.0 + b1 * xi, d0 + d1 * xi]
    }

    fn asymptote(&self) -> [f64; 2] {
        [1.0 + self.eps, -self.s * self.varkappa]
    }

    fn xi_match(&self) -> f64 {
        let big_n = self.zalpha / self.varkappa;
        (big_n + 1.0) / (2.0 * self.varkappa)
    }
}

/// `(u, v) · e^{log}` bookkeeping for one integration leg.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    y: [f64; 2],
    log: f64,
}

impl Scaled {
    fn renormalize(&mut self) {
        let m = self.y[0].abs().max(self.y[1].abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            self.log += m.ln();
            self.y = self.y.map(|v| v / m);
        }
    }

    fn norm(&self) -> f64 {
        self.y[0].hypot(self.y[1])
    }
}

const DP_C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dormand–Prince 5(4) from `x0` through each of `stops` (monotone, in the
/// direction of travel), recording the state at every stop.
fn dopri<F: Fn(f64, [f64; 2]) -> [f64; 2]>(
    f: &F,
    x0: f64,
    y0: Scaled,
    stops: &[f64],
    rtol: f64,
    max_steps: usize,
) -> Result<Vec<Scaled>> {
    let mut out = Vec::with_capacity(stops.len());
    let mut x = x0;
    let mut st = y0;
    let Some(&last) = stops.last() else {
        return Ok(out);
    };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    let mut h = dir * (1e-3 * x0.abs()).max(1e-12);
    let mut k1 = f(x, st.y);
    let mut steps = 0;
    for &stop in stops {
        while dir * (stop - x) > 0.0 {
            steps += 1;
            if steps > max_steps {
                return Err(DiracError::InvalidConfig("shooting step budget exhausted"));
            }
            let hit = dir * (x + h - stop) >= 0.0;
            let hs = if hit { stop - x } else { h };
            let mut k = [[0.0; 2]; 7];
            k[0] = k1;
            for i in 0..6 {
                let mut yi = st.y;
                for (j, kj) in k.iter().enumerate().take(i + 1) {
                    yi[0] += hs * DP_A[i][j] * kj[0];
                    yi[1] += hs * DP_A[i][j] * kj[1];
                }
                if i == 5 {
                    k[6] = f(x + hs, yi);
                    let mut err = [0.0; 2];
                    for (j, kj) in k.iter().enumerate() {
                        err[0] += hs * DP_E[j] * kj[0];
                        err[1] += hs * DP_E[j] * kj[1];
                    }
                    let scale = rtol * st.norm().max(yi[0].hypot(yi[1])).max(1e-300);
                    let e = err[0].hypot(err[1]) / scale;
                    if e <= 1.0 {
                        x = if hit { stop } else { x + hs };
                        st.y = yi;
                        k1 = k[6];
                        let m = st.y[0].abs().max(st.y[1].abs());
                        if m > 1e100 || (m < 1e-100 && m > 0.0) {
                            st.renormalize();
                            k1 = f(x, st.y);
                        }
                    }
                    let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
                    if !(e <= 1.0 && hit) {
                        h = hs * fac;
                    }
                } else {
                    k[i + 1] = f(x + DP_C[i] * hs, yi);
                }
            }
        }
        out.push(st);
    }
    Ok(out)
}

fn outward(sys: &System, cfg: &ShootingConfig, stops: &[f64]) -> Result<Vec<Scaled>> {
    let x0 = cfg.xi_min;
    let seed = sys.seed(x0);
    let start = Scaled {
        y: seed,
        log: sys.gamma * x0.ln(),
    };
    dopri(&|x, y| sys.rhs(x, y), x0, start, stops, cfg.rtol, cfg.max_steps)
}

fn inward(sys: &System, cfg: &ShootingConfig, stops: &[f64]) -> Result<Vec<Scaled>> {
    let x0 = cfg.xi_max_decay / sys.varkappa;
    let start = Scaled {
        y: sys.asymptote(),
        log: 0.0,
    };
    dopri(&|x, y| sys.rhs(x, y), x0, start, stops, cfg.rtol, cfg.max_steps)
}

/// One shot at energy `eps`.
pub fn integrate_radial(kappa: u32, zalpha: f64, eps: f64, branch: Branch, cfg: &ShootingConfig) -> Result<Shot> {
    cfg.validate()?;
    let sys = System::new(kappa, zalpha, eps, branch)?;
    let xm = sys.xi_match();
    let o = outward(&sys, cfg, &[xm])?[0];
    let i = inward(&sys, cfg, &[xm])?[0];
    let w = (o.y[0] * i.y[1] - o.y[1] * i.y[0]) / (o.norm() * i.norm());
    Ok(Shot {
        functional: w,
        log_amplitude: o.log + o.norm().ln(),
    })
}

fn eps_of_n(zalpha: f64, big_n: f64) -> f64 {
    let k = zalpha / big_n;
    (1.0 - k * k).sqrt()
}

fn n_of_eps(zalpha: f64, eps: f64) -> f64 {
    zalpha / (1.0 - eps * eps).sqrt()
}

/// The lowest `count` eigenvalues of `branch`, by a mesh in `ℳ` and
/// bisection.
pub fn find_spectrum_branch(
    kappa: u32,
    zalpha: f64,
    count: usize,
    branch: Branch,
    cfg: &ShootingConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    gamma_j(kappa, zalpha)?;
    let k = kappa as f64;
    let (lo, hi) = match cfg.eps_bracket {
        Some((a, b)) => (n_of_eps(zalpha, a).max(zalpha * 1.000001), n_of_eps(zalpha, b)),
        None => ((k - 0.5).max(0.5 * (k + zalpha)), k + count as f64 + 0.7),
    };
    let f = |n: f64| integrate_radial(kappa, zalpha, eps_of_n(zalpha, n), branch, cfg).map(|s| s.functional);
    let steps = ((hi - lo) / cfg.mesh_step).ceil().max(1.0) as usize;
    let mut found = Vec::new();
    let (mut a, mut fa) = (lo, f(lo)?);
    for i in 1..=steps {
        if found.len() == count {
            break;
        }
        let b = lo + (hi - lo) * i as f64 / steps as f64;
        let fb = f(b)?;
        if fa == 0.0 {
            found.push(eps_of_n(zalpha, a));
        } else if fa * fb < 0.0 {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            while (eps_of_n(zalpha, x1) - eps_of_n(zalpha, x0)).abs() > cfg.tol_energy && x1 - x0 > 4.0 * f64::EPSILON * x1 {
                let m = 0.5 * (x0 + x1);
                let fm = f(m)?;
                if fm == 0.0 {
                    x0 = m;
                    x1 = m;
                    break;
                }
                if f0 * fm < 0.0 {
                    x1 = m;
                } else {
                    x0 = m;
                    f0 = fm;
                }
            }
            found.push(eps_of_n(zalpha, 0.5 * (x0 + x1)));
        }
        a = b;
        fa = fb;
    }
    if found.len() < count {
        return Err(DiracError::MissedBracket {
            found: found.len(),
            wanted: count,
        });
    }
    Ok(found)
}

/// `ε` for `n_r = 0..=n_r_max` on the `(u⁺, v⁻)` branch.
pub fn find_spectrum(kappa: u32, zalpha: f64, n_r_max: u32, cfg: &ShootingConfig) -> Result<Vec<f64>> {
    find_spectrum_branch(kappa, zalpha, n_r_max as usize + 1, Branch::PlusMinus, cfg)
}

/// `(f, g) = e^{−ϰξ}(u, v)` sampled at increasing `ξ`, scaled to a common
/// but arbitrary normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub xi: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

/// Matched outward/inward solution at energy `eps`.
pub fn radial_profile(
    kappa: u32,
    zalpha: f64,
    eps: f64,
    branch: Branch,
    xi: &[f64],
    cfg: &ShootingConfig,
) -> Result<Profile> {
    cfg.validate()?;
    let sys = System::new(kappa, zalpha, eps, branch)?;
    let xm = sys.xi_match();
    if xi.windows(2).any(|w| w[1] <= w[0]) || xi.first().map_or(false, |&x| x <= cfg.xi_min) {
        return Err(DiracError::InvalidConfig("profile points must increase and exceed xi_min"));
    }
    let split = xi.partition_point(|&x| x < xm);
    let mut out_stops: Vec<f64> = xi[..split].to_vec();
    out_stops.push(xm);
    let mut in_stops: Vec<f64> = xi[split..].iter().rev().cloned().collect();
    in_stops.push(xm);
    let o = outward(&sys, cfg, &out_stops)?;
    let i = inward(&sys, cfg, &in_stops)?;
    let (om, im) = (o[o.len() - 1], i[i.len() - 1]);
    // least-squares factor taking the inward leg onto the outward one
    let c = (om.y[0] * im.y[0] + om.y[1] * im.y[1]) / (im.norm() * im.norm());
    let damp = |x: f64| -sys.varkappa * x;
    let mut f = Vec::with_capacity(xi.len());
    let mut g = Vec::with_capacity(xi.len());
    for (k, st) in o[..split].iter().enumerate() {
        let e = (st.log - om.log + damp(xi[k])).exp();
        f.push(st.y[0] * e);
        g.push(st.y[1] * e);
    }
    let inner: Vec<_> = i[..i.len() - 1].iter().rev().collect();
    for (k, st) in inner.into_iter().enumerate() {
        let x = xi[split + k];
        let e = (st.log - im.log + damp(x)).exp() * c;
        f.push(st.y[0] * e);
        g.push(st.y[1] * e);
    }
    Ok(Profile { xi: xi.to_vec(), f, g })
}

/// Sign changes of `f` (interior zeros of the upper function).
pub fn count_nodes(p: &Profile) -> usize {
    let mut last = 0.0;
    let mut n = 0;
    for &v in &p.f {
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                n += 1;
            }
            last = v;
        }
    }
    n
}

/// Relative L² distance between the normalized shooting profile and the
/// closed form, `F = f/ξ` against `(f₊, g₋)` or `(f₋, g₊)` at `r = Zα ξ`.
/// Trapezoid in ξ with weight `ξ²`; the overall sign is aligned first.
pub fn shape_error(p: &Profile, radial: &RadialSolution, branch: Branch) -> f64 {
    let za = radial.zalpha;
    let n = p.xi.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let xi = p.xi[k];
        let amp = radial.amplitudes(za * xi);
        let (cf, cg) = match branch {
            Branch::PlusMinus => (amp.f_plus, amp.g_minus),
            Branch::MinusPlus => (amp.f_minus, amp.g_plus),
        };
        a.push([p.f[k] / xi, p.g[k] / xi]);
        b.push([cf, cg]);
    }
    let w: Vec<f64> = (0..n)
        .map(|k| {
            let lo = if k > 0 { p.xi[k - 1] } else { p.xi[k] };
            let hi = if k + 1 < n { p.xi[k + 1] } else { p.xi[k] };
            0.5 * (hi - lo) * p.xi[k] * p.xi[k]
        })
        .collect();
    let dot = |x: &[[f64; 2]], y: &[[f64; 2]]| -> f64 {
        x.iter()
            .zip(y)
            .zip(&w)
            .map(|((u, v), w)| w * (u[0] * v[0] + u[1] * v[1]))
            .sum()
    };
    let (na, nb, ab) = (dot(&a, &a).sqrt(), dot(&b, &b).sqrt(), dot(&a, &b));
    let sign = if ab < 0.0 { -1.0 } else { 1.0 };
    let mut d = 0.0;
    for k in 0..n {
        for c in 0..2 {
            let e = sign * a[k][c] / na - b[k][c] / nb;
            d += w[k] * e * e;
        }
    }
    d.sqrt()
}
