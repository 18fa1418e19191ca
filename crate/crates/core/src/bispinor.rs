//! General eigenbispinors `Ψ_{n_r, j, m_j, σ}` and their sampled fields.
//!
//! Every state is `β₁ Ψ₊^D + β₂ Ψ₋^D`, where `Ψ±^D` are the Darwin
//! solutions and `(β₁, β₂)` come from the spin parameters `(θ, φ)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use crate::angular::{HalfInt, Parity, ReducedSpinor, SpinorLabel, SpinorSample};
use crate::radial::{PhysicalConfig, QuantumNumbers, RadialSolution, Sigma};
use crate::specfun::{make_quadrature, QuadratureKind};
use crate::{DiracError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Free spin parameters `(θ, φ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpinParams {
    pub theta: f64,
    pub phi: f64,
}

impl SpinParams {
    pub fn new(theta: f64, phi: f64) -> Self {
        SpinParams { theta, phi }
    }

    /// Parameters of the `−m_j` state with the same density and opposite
    /// spin: `β → β*`, i.e. `φ → −φ`.
    pub fn mj_partner(self) -> Self {
        SpinParams::new(self.theta, -self.phi)
    }
}

/// `(β₁, β₂)` for the given σ. Always of unit norm.
pub fn beta_coeffs(sigma: Sigma, sp: SpinParams) -> (Complex64, Complex64) {
    let (s, c) = sp.theta.sin_cos();
    let e = Complex64::from_polar(1.0, sp.phi);
    match sigma {
        Sigma::Plus => (e * c, e.conj() * s),
        Sigma::Minus => (-e * s, e.conj() * c),
    }
}

/// The three named members of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialCase {
    Darwin,
    JohnsonLippman,
    Bel,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 3] = [SpecialCase::Darwin, SpecialCase::JohnsonLippman, SpecialCase::Bel];

    pub fn params(self) -> SpinParams {
        special_case(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecialCase::Darwin => "darwin",
            SpecialCase::JohnsonLippman => "jl",
            SpecialCase::Bel => "bel",
        }
    }
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpecialCase {
    type Err = DiracError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "darwin" | "d" => Ok(SpecialCase::Darwin),
            "jl" | "johnson-lippman" => Ok(SpecialCase::JohnsonLippman),
            "bel" => Ok(SpecialCase::Bel),
            _ => Err(DiracError::UnknownCase(String::from(s))),
        }
    }
}

/// Spin parameters of a named case. σ enters only through [`beta_coeffs`].
pub fn special_case(kind: SpecialCase) -> SpinParams {
    match kind {
        SpecialCase::Darwin => SpinParams::new(0.0, 0.0),
        SpecialCase::JohnsonLippman => SpinParams::new(FRAC_PI_4, -FRAC_PI_4),
        SpecialCase::Bel => SpinParams::new(FRAC_PI_4, 0.0),
    }
}

/// Four components at one point: upper spinor `(c[0], c[1])`, lower `(c[2], c[3])`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BispinorSample {
    pub c: [Complex64; 4],
}

impl BispinorSample {
    pub fn new(c: [Complex64; 4]) -> Self {
        BispinorSample { c }
    }

    pub fn upper(&self) -> SpinorSample {
        SpinorSample::new(self.c[0], self.c[1])
    }

    pub fn lower(&self) -> SpinorSample {
        SpinorSample::new(self.c[2], self.c[3])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self† other`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.c.iter().zip(&other.c).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Restores the azimuthal factors of a reduced sample.
    pub fn from_reduced(red: [Complex64; 4], m_j: HalfInt, phi: f64) -> Self {
        let e1 = Complex64::from_polar(1.0, m_j.m1() as f64 * phi);
        let e2 = Complex64::from_polar(1.0, m_j.m2() as f64 * phi);
        BispinorSample::new([red[0] * e1, red[1] * e2, red[2] * e1, red[3] * e2])
    }
}

/// A bispinor-valued function with definite `m_j`, given through its reduced
/// components: `Ψ = (a₁e^{im₁φ}, a₂e^{im₂φ}, a₃e^{im₁φ}, a₄e^{im₂φ})`.
/// Implementations must accept `r > 0` and ϑ slightly outside `[0, π]`.
pub trait BispinorFn {
    fn m_j(&self) -> HalfInt;
    fn reduced(&self, r: f64, theta: f64) -> [Complex64; 4];

    fn sample(&self, r: f64, theta: f64, phi: f64) -> BispinorSample {
        BispinorSample::from_reduced(self.reduced(r, theta), self.m_j(), phi)
    }
}

impl<T: BispinorFn + ?Sized> BispinorFn for &T {
    fn m_j(&self) -> HalfInt {
        (**self).m_j()
    }
    fn reduced(&self, r: f64, theta: f64) -> [Complex64; 4] {
        (**self).reduced(r, theta)
    }
}

/// One eigenbispinor, ready to evaluate anywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracState {
    pub qn: QuantumNumbers,
    pub sp: SpinParams,
    pub cfg: PhysicalConfig,
    pub radial: RadialSolution,
    beta: (Complex64, Complex64),
    chi_plus: SpinorLabel,
    chi_minus: SpinorLabel,
}

impl DiracState {
    /// For `n_r = 0` the spin parameters are ignored and `β = (1, 0)`.
    pub fn new(qn: QuantumNumbers, sp: SpinParams, cfg: PhysicalConfig) -> Result<Self> {
        if qn.n_r == 0 && qn.sigma == Sigma::Minus {
            return Err(DiracError::InvalidQuantumNumbers("n_r = 0 admits only sigma = +"));
        }
        let beta = if qn.n_r == 0 {
            (Complex64::new(1.0, 0.0), ZERO)
        } else {
            beta_coeffs(qn.sigma, sp)
        };
        Self::with_beta(qn, sp, cfg, beta)
    }

    pub fn special(qn: QuantumNumbers, kind: SpecialCase, cfg: PhysicalConfig) -> Result<Self> {
        Self::new(qn, special_case(kind), cfg)
    }

    /// Uses the given `(β₁, β₂)` as is, normalized or not.
    pub fn with_beta(
        qn: QuantumNumbers,
        sp: SpinParams,
        cfg: PhysicalConfig,
        beta: (Complex64, Complex64),
    ) -> Result<Self> {
        let radial = RadialSolution::new(qn.n_r, qn.kappa, cfg.zalpha())?;
        let chi_plus = SpinorLabel::new(qn.kappa - 1, qn.m_j, Parity::Plus)?;
        let chi_minus = SpinorLabel::new(qn.kappa, qn.m_j, Parity::Minus)?;
        Ok(DiracState {
            qn,
            sp,
            cfg,
            radial,
            beta,
            chi_plus,
            chi_minus,
        })
    }

    pub fn beta(&self) -> (Complex64, Complex64) {
        self.beta
    }

    /// Same state with `β` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.beta = (self.beta.0 * factor, self.beta.1 * factor);
        out
    }

    /// The Darwin solution `Ψ±^D` with the same `(n_r, κ, m_j)`.
    pub fn darwin(&self, sigma: Sigma) -> Result<Self> {
        let qn = QuantumNumbers { sigma, ..self.qn };
        let beta = match sigma {
            Sigma::Plus => (Complex64::new(1.0, 0.0), ZERO),
            Sigma::Minus => (ZERO, Complex64::new(1.0, 0.0)),
        };
        if self.qn.n_r == 0 && sigma == Sigma::Minus {
            return Err(DiracError::InvalidQuantumNumbers("n_r = 0 admits only sigma = +"));
        }
        Self::with_beta(qn, SpinParams::default(), self.cfg, beta)
    }

    pub fn epsilon(&self) -> f64 {
        self.radial.epsilon()
    }

    /// Full sample at (r, ϑ, φ). Fails at the origin when `γ < 1`.
    pub fn assemble_at(&self, r: f64, theta: f64, phi: f64) -> Result<BispinorSample> {
        self.radial.radial_functions(r)?;
        Ok(self.sample(r, theta, phi))
    }

    /// Upper spinor only, as used in the nonrelativistic reading.
    pub fn pauli_at(&self, r: f64, theta: f64, phi: f64) -> Result<SpinorSample> {
        Ok(self.assemble_at(r, theta, phi)?.upper())
    }

    fn combine(&self, a: crate::radial::RadialAmplitudes, xp: [Complex64; 2], xm: [Complex64; 2]) -> [Complex64; 4] {
        let (b1, b2) = self.beta;
        let u1 = b1 * a.f_plus;
        let u2 = b2 * a.f_minus;
        let l1 = b2 * a.g_plus;
        let l2 = b1 * a.g_minus;
        [
            u1 * xp[0] + u2 * xm[0],
            u1 * xp[1] + u2 * xm[1],
            l1 * xp[0] + l2 * xm[0],
            l1 * xp[1] + l2 * xm[1],
        ]
    }
}

impl BispinorFn for DiracState {
    fn m_j(&self) -> HalfInt {
        self.qn.m_j
    }

    fn reduced(&self, r: f64, theta: f64) -> [Complex64; 4] {
        let a = self.radial.amplitudes(r);
        self.combine(a, self.chi_plus.reduced(theta), self.chi_minus.reduced(theta))
    }
}

/// `Ψ` at a point.
pub fn assemble(
    qn: QuantumNumbers,
    sp: SpinParams,
    cfg: PhysicalConfig,
    point: (f64, f64, f64),
) -> Result<BispinorSample> {
    DiracState::new(qn, sp, cfg)?.assemble_at(point.0, point.1, point.2)
}

/// Pauli spinor `β₁R⁺χ₊ + β₂R⁻χ₋`.
pub fn pauli_limit(
    qn: QuantumNumbers,
    sp: SpinParams,
    cfg: PhysicalConfig,
    point: (f64, f64, f64),
) -> Result<SpinorSample> {
    DiracState::new(qn, sp, cfg)?.pauli_at(point.0, point.1, point.2)
}

/// Node counts of the tensor grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_r: 64,
            n_theta: 32,
            n_phi: 32,
        }
    }
}

/// Generalized Gauss–Laguerre in `x = 2r̃/ℳ` (weight exponent `2γ`),
/// Gauss–Legendre in `cos ϑ`, uniform in φ. Radial weights include `r²` and
/// undo the Laguerre weight, so `Σ W_r W_ϑ W_φ F` approximates `∫ F d³r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub spec: GridSpec,
    pub r: Vec<f64>,
    pub r_weights: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_weights: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_weight: f64,
}

impl Grid {
    pub fn for_radial(radial: &RadialSolution, spec: GridSpec) -> Result<Self> {
        if spec.n_r == 0 || spec.n_theta == 0 || spec.n_phi == 0 {
            return Err(DiracError::InvalidConfig("grid needs at least one node per axis"));
        }
        let alpha = 2.0 * radial.gamma_j;
        let lag = make_quadrature(QuadratureKind::GaussLaguerre { alpha }, spec.n_r)?;
        let half_n = 0.5 * radial.big_n();
        let r = lag.nodes.iter().map(|x| half_n * x).collect();
        let r_weights = lag
            .nodes
            .iter()
            .zip(&lag.weights)
            .map(|(&x, &w)| w * half_n.powi(3) * ((2.0 - alpha) * x.ln() + x).exp())
            .collect();
        let leg = make_quadrature(QuadratureKind::GaussLegendre, spec.n_theta)?;
        let theta = leg.nodes.iter().map(|c| c.acos()).collect();
        let phi = (0..spec.n_phi).map(|k| 2.0 * PI * k as f64 / spec.n_phi as f64).collect();
        Ok(Grid {
            spec,
            r,
            r_weights,
            theta,
            theta_weights: leg.weights,
            phi,
            phi_weight: 2.0 * PI / spec.n_phi as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.theta.len() * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index, φ fastest.
    pub fn index(&self, ir: usize, it: usize, ip: usize) -> usize {
        (ir * self.theta.len() + it) * self.phi.len() + ip
    }

    pub fn weight(&self, ir: usize, it: usize) -> f64 {
        self.r_weights[ir] * self.theta_weights[it] * self.phi_weight
    }

    /// `(r, ϑ, φ, weight)` for every node in flat order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.r.iter().enumerate().flat_map(move |(ir, &r)| {
            self.theta.iter().enumerate().flat_map(move |(it, &t)| {
                let w = self.weight(ir, it);
                self.phi.iter().map(move |&p| (r, t, p, w))
            })
        })
    }
}

/// Identifying data written alongside a field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldMeta {
    pub qn: QuantumNumbers,
    pub sp: SpinParams,
    pub cfg: PhysicalConfig,
}

/// `Ψ` sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct BispinorField {
    pub grid: Grid,
    pub samples: Vec<BispinorSample>,
    pub meta: FieldMeta,
    pub epsilon: f64,
}

impl BispinorField {
    /// Samples `state` on its own default-shaped grid.
    pub fn build(state: &DiracState, spec: GridSpec) -> Result<Self> {
        let grid = Grid::for_radial(&state.radial, spec)?;
        Ok(Self::on_grid(state, grid))
    }

    /// Separable evaluation: radial amplitudes per r, spinors per ϑ, phases
    /// per φ.
    pub fn on_grid(state: &DiracState, grid: Grid) -> Self {
        let amps: Vec<_> = grid.r.iter().map(|&r| state.radial.amplitudes(r)).collect();
        let chis: Vec<_> = grid
            .theta
            .iter()
            .map(|&t| (state.chi_plus.reduced(t), state.chi_minus.reduced(t)))
            .collect();
        let m_j = state.qn.m_j;
        let phases: Vec<_> = grid
            .phi
            .iter()
            .map(|&p| {
                (
                    Complex64::from_polar(1.0, m_j.m1() as f64 * p),
                    Complex64::from_polar(1.0, m_j.m2() as f64 * p),
                )
            })
            .collect();
        let mut samples = Vec::with_capacity(grid.len());
        for a in &amps {
            for (xp, xm) in &chis {
                let red = state.combine(*a, *xp, *xm);
                for (e1, e2) in &phases {
                    samples.push(BispinorSample::new([red[0] * e1, red[1] * e2, red[2] * e1, red[3] * e2]));
                }
            }
        }
        BispinorField {
            grid,
            samples,
            meta: FieldMeta {
                qn: state.qn,
                sp: state.sp,
                cfg: state.cfg,
            },
            epsilon: state.epsilon(),
        }
    }

    pub fn norm(&self) -> f64 {
        inner_product(self, self).map(|z| z.re).unwrap_or(f64::NAN)
    }
}

/// `Σ W Ψ_a† Ψ_b`.
pub fn inner_product(a: &BispinorField, b: &BispinorField) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(DiracError::GridMismatch);
    }
    let mut acc = ZERO;
    for ((_, _, _, w), (sa, sb)) in a.grid.nodes().zip(a.samples.iter().zip(&b.samples)) {
        acc += sa.dot(sb) * w;
    }
    Ok(acc)
}
