//! Probability density `w = Ψ†Ψ` and spin orientation `Ψ†ΣΨ / w`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use crate::angular::HalfInt;
use crate::bispinor::{BispinorField, BispinorSample, DiracState, FieldMeta, Grid, SpinParams};
use crate::radial::{PhysicalConfig, QuantumNumbers, Sigma};
use crate::{DiracError, Result};

/// Below this density the spin direction is reported as undefined.
pub const UNDEFINED_DENSITY: f64 = 1e-300;

/// Exact bispinor or upper (Pauli) spinor only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Exact,
    Pauli,
}

/// Spin at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spin {
    /// `Ψ†ΣΨ / Ψ†Ψ`, Cartesian. Its length is 1 in the Pauli mode and
    /// slightly below 1 when the lower spinor contributes.
    pub polarization: [f64; 3],
    /// Unit orientation, `None` where the density vanishes.
    pub s: Option<[f64; 3]>,
}

impl Spin {
    /// `(s_r, s_ϑ, s_φ)`.
    pub fn spherical(&self, theta: f64, phi: f64) -> Option<[f64; 3]> {
        self.s.map(|v| to_spherical(v, theta, phi))
    }

    /// `(s_ρ, s_φ, s_z)`.
    pub fn cylindrical(&self, phi: f64) -> Option<[f64; 3]> {
        self.s.map(|v| to_cylindrical(v, phi))
    }
}

pub fn to_spherical(v: [f64; 3], theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let rho = v[0] * cp + v[1] * sp;
    [rho * st + v[2] * ct, rho * ct - v[2] * st, -v[0] * sp + v[1] * cp]
}

pub fn to_cylindrical(v: [f64; 3], phi: f64) -> [f64; 3] {
    let (sp, cp) = phi.sin_cos();
    [v[0] * cp + v[1] * sp, -v[0] * sp + v[1] * cp, v[2]]
}

fn pauli_terms(a: num_complex::Complex64, b: num_complex::Complex64) -> (f64, [f64; 3]) {
    let ab = a.conj() * b;
    (
        a.norm_sqr() + b.norm_sqr(),
        [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()],
    )
}

/// `(w, spin)` of one sample.
pub fn observe_sample(x: &BispinorSample, mode: Mode) -> (f64, Spin) {
    let (mut w, mut p) = pauli_terms(x.c[0], x.c[1]);
    if mode == Mode::Exact {
        let (wl, pl) = pauli_terms(x.c[2], x.c[3]);
        w += wl;
        for k in 0..3 {
            p[k] += pl[k];
        }
    }
    if w < UNDEFINED_DENSITY {
        return (w, Spin { polarization: [0.0; 3], s: None });
    }
    let pol = p.map(|v| v / w);
    let len = pol.iter().map(|v| v * v).sum::<f64>().sqrt();
    let s = if len > 0.0 { Some(pol.map(|v| v / len)) } else { None };
    (w, Spin { polarization: pol, s })
}

/// `(w, spin)` of `state` at a point.
pub fn observe_at(state: &DiracState, point: (f64, f64, f64), mode: Mode) -> Result<(f64, Spin)> {
    Ok(observe_sample(&state.assemble_at(point.0, point.1, point.2)?, mode))
}

/// Density and spin on the nodes of a [`BispinorField`].
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableField {
    pub grid: Grid,
    pub w: Vec<f64>,
    pub spin: Vec<Spin>,
    pub mode: Mode,
    pub meta: FieldMeta,
}

impl ObservableField {
    pub fn from_field(field: &BispinorField, mode: Mode) -> Self {
        let (w, spin) = field.samples.iter().map(|x| observe_sample(x, mode)).unzip();
        ObservableField {
            grid: field.grid.clone(),
            w,
            spin,
            mode,
            meta: field.meta,
        }
    }

    /// `∫ w d³r`.
    pub fn integral(&self) -> f64 {
        self.grid.nodes().zip(&self.w).map(|((.., wt), w)| wt * w).sum()
    }

    /// `‖w(ϑ) − w(π − ϑ)‖ / ‖w‖` in L². Legendre nodes are symmetric, so the
    /// mirror of node `k` is node `n − 1 − k`.
    pub fn mirror_asymmetry(&self) -> f64 {
        let (nt, np) = (self.grid.theta.len(), self.grid.phi.len());
        let (mut num, mut den) = (0.0, 0.0);
        for ir in 0..self.grid.r.len() {
            for it in 0..nt {
                let wt = self.grid.weight(ir, it);
                for ip in 0..np {
                    let a = self.w[self.grid.index(ir, it, ip)];
                    let b = self.w[self.grid.index(ir, nt - 1 - it, ip)];
                    num += wt * (a - b) * (a - b);
                    den += wt * a * a;
                }
            }
        }
        (num / den).sqrt()
    }

    /// Largest `|‖s‖ − 1|` over nodes with `w > floor`.
    pub fn unit_spin_defect(&self, floor: f64) -> f64 {
        self.w
            .iter()
            .zip(&self.spin)
            .filter(|(w, _)| **w > floor)
            .map(|(_, sp)| match sp.s {
                Some(v) => (v.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs(),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

/// Densities of a field.
pub fn density(field: &BispinorField) -> Vec<f64> {
    field.samples.iter().map(|x| observe_sample(x, Mode::Exact).0).collect()
}

/// Spin orientation of a field.
pub fn spin_field(field: &BispinorField) -> Vec<Spin> {
    field.samples.iter().map(|x| observe_sample(x, Mode::Exact).1).collect()
}

/// `‖w_a − w_b‖ / ‖w_a‖` in L² over a shared grid.
pub fn l2_distance(a: &ObservableField, b: &ObservableField) -> Result<f64> {
    if a.grid != b.grid {
        return Err(DiracError::GridMismatch);
    }
    let (mut num, mut den) = (0.0, 0.0);
    for ((.., wt), (x, y)) in a.grid.nodes().zip(a.w.iter().zip(&b.w)) {
        num += wt * (x - y) * (x - y);
        den += wt * x * x;
    }
    Ok((num / den).sqrt())
}

/// `ρ_n(r) = (2/n)³ e^{−r_n} r_n^{2(n−1)} / (2n)!` with `r_n = 2r/n`.
pub fn rho_n(n: u32, r: f64) -> f64 {
    let nf = n as f64;
    let rn = 2.0 * r / nf;
    (2.0 / nf).powi(3) * (-rn).exp() * rn.powi(2 * (n as i32 - 1)) / crate::specfun::factorial(2 * n)
}

/// Closed-form nonrelativistic states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReferenceTag {
    /// `n = 1`.
    Ground,
    /// `n = 2, j = 1/2, σ = +`, Darwin.
    TwoSDarwin,
    /// `n = 2, j = 1/2, σ = −`, Darwin.
    TwoPDarwin,
    /// `n = 2, j = 3/2`.
    TwoThreeHalves,
}

impl ReferenceTag {
    pub const ALL: [ReferenceTag; 4] = [
        ReferenceTag::Ground,
        ReferenceTag::TwoSDarwin,
        ReferenceTag::TwoPDarwin,
        ReferenceTag::TwoThreeHalves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceTag::Ground => "1s",
            ReferenceTag::TwoSDarwin => "2s_darwin",
            ReferenceTag::TwoPDarwin => "2p_darwin",
            ReferenceTag::TwoThreeHalves => "2_3/2_mj",
        }
    }

    /// Allowed `2m_j` values.
    pub fn two_mj_values(self) -> &'static [i32] {
        match self {
            ReferenceTag::TwoThreeHalves => &[-3, -1, 1, 3],
            _ => &[-1, 1],
        }
    }

    /// The state this tag describes, with Darwin spin parameters.
    pub fn quantum_numbers(self, two_mj: i32) -> Result<QuantumNumbers> {
        let (n_r, kappa, sigma) = match self {
            ReferenceTag::Ground => (0, 1, Sigma::Plus),
            ReferenceTag::TwoSDarwin => (1, 1, Sigma::Plus),
            ReferenceTag::TwoPDarwin => (1, 1, Sigma::Minus),
            ReferenceTag::TwoThreeHalves => (0, 2, Sigma::Plus),
        };
        QuantumNumbers::new(n_r, kappa, HalfInt::from_twice(two_mj)?, sigma)
    }
}

impl fmt::Display for ReferenceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReferenceTag {
    type Err = DiracError;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or(DiracError::UnknownReference)
    }
}

/// Closed-form `(w, s)` at `(r, ϑ, φ)`, `r` in units of `r_B/Z`, `s` Cartesian.
pub fn reference_state(tag: ReferenceTag, two_mj: i32, point: (f64, f64, f64)) -> Result<(f64, [f64; 3])> {
    if !tag.two_mj_values().contains(&two_mj) {
        return Err(DiracError::InvalidQuantumNumbers("m_j not available for this reference state"));
    }
    let (r, theta, phi) = point;
    let sign = two_mj.signum() as f64;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let ez = [0.0, 0.0, 1.0];
    let along = |rho: f64, z: f64| [rho * cp, rho * sp, z];
    let (w, s) = match (tag, two_mj.abs()) {
        (ReferenceTag::Ground, _) => (rho_n(1, r) / (4.0 * PI), ez),
        (ReferenceTag::TwoThreeHalves, 3) => (3.0 / (8.0 * PI) * rho_n(2, r) * st * st, ez),
        (ReferenceTag::TwoThreeHalves, _) => {
            let d = 1.0 + 3.0 * ct * ct;
            let s = along(-2.0 * (2.0 * theta).sin() / d, (5.0 * ct * ct - 1.0) / d);
            (rho_n(2, r) * d / (8.0 * PI), s)
        }
        (ReferenceTag::TwoSDarwin, _) => {
            let h = 1.0 - r / 2.0;
            ((-r).exp() * h * h / (8.0 * PI), ez)
        }
        (ReferenceTag::TwoPDarwin, _) => {
            // cos ϑ e_r + sin ϑ e_ϑ
            ((-r).exp() * r * r / (96.0 * PI), along((2.0 * theta).sin(), (2.0 * theta).cos()))
        }
    };
    Ok((w, s.map(|v| v * sign)))
}

/// `Σ_{m_j = 1/2}^{j} w_{n, j = n − 1/2, m_j}` at a point.
pub fn hartree_shell_sum(n: u32, cfg: PhysicalConfig, point: (f64, f64, f64), mode: Mode) -> Result<f64> {
    if n == 0 {
        return Err(DiracError::InvalidQuantumNumbers("n must be >= 1"));
    }
    let mut acc = 0.0;
    for twice in (1..=(2 * n as i32 - 1)).step_by(2) {
        let qn = QuantumNumbers::new(0, n, HalfInt::from_twice(twice)?, Sigma::Plus)?;
        acc += observe_at(&DiracState::new(qn, SpinParams::default(), cfg)?, point, mode)?.0;
    }
    Ok(acc)
}

/// Every valid `(n_r, κ, m_j, σ)` with `n_r + κ = n`.
pub fn enumerate_level(n: u32) -> Vec<QuantumNumbers> {
    let mut out = Vec::new();
    for kappa in (1..=n).rev() {
        let n_r = n - kappa;
        let sigmas: &[Sigma] = if n_r == 0 { &[Sigma::Plus] } else { &[Sigma::Plus, Sigma::Minus] };
        for twice in (-(2 * kappa as i32 - 1)..=(2 * kappa as i32 - 1)).step_by(2) {
            for &sigma in sigmas {
                if let Ok(qn) = QuantumNumbers::new(n_r, kappa, HalfInt::from_twice(twice).expect("odd"), sigma) {
                    out.push(qn);
                }
            }
        }
    }
    out
}

/// Number of states with principal number `n`.
pub fn degeneracy_count(n: u32) -> usize {
    enumerate_level(n).len()
}
