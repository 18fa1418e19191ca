//! H, J_z, J², and the three invariants acting on bispinor functions.
//!
//! Units: ħ = m = c = 1, lengths in `r_B/Z`. Then `V = −(Zα)²/r` and
//! `σ·p = Zα (p_r − iΛ/r) σ_r` with `p_r = −i(∂_r + 1/r)`.
//!
//! Derivatives are eighth-order central differences on a local lattice
//! `(r₀ + i h_r, ϑ₀ + k h_ϑ)` around the evaluation point. Composite operators
//! are applied level by level on that lattice, which is the same arithmetic as
//! nesting stencils, with every intermediate value computed once. The lattice
//! may cross a pole; the reduced components are analytic in ϑ there.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angular::{lambda_reduced, sigma_r_reduced, HalfInt, Parity, ReducedSpinor, SpinorLabel};
use crate::bispinor::{BispinorFn, BispinorSample, DiracState, SpecialCase};
use crate::fd::{CENTRAL8, CENTRAL8_HALF};
use crate::radial::{RadialSolution, Sigma};
use crate::specfun::{make_quadrature, QuadratureKind};
use crate::{DiracError, Result};

type C4 = [Complex64; 4];

const ZERO4: C4 = [Complex64::new(0.0, 0.0); 4];
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default lattice step: `h_ϑ = step`, `h_r = step · min(r, 1)`.
pub const DEFAULT_FD_STEP: f64 = 0.05;

/// Residual norms skip `r` outside this band.
pub const R_GUARD: (f64, f64) = (0.05, 40.0);

/// Residual norms skip ϑ within this distance of a pole.
pub const THETA_GUARD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    H,
    Jz,
    Jsq,
    ID,
    IJL,
    IBEL,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::H,
        OperatorKind::Jz,
        OperatorKind::Jsq,
        OperatorKind::ID,
        OperatorKind::IJL,
        OperatorKind::IBEL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::H => "H",
            OperatorKind::Jz => "Jz",
            OperatorKind::Jsq => "J2",
            OperatorKind::ID => "I_D",
            OperatorKind::IJL => "I_JL",
            OperatorKind::IBEL => "I_BEL",
        }
    }

    /// Nesting depth of r- and ϑ-derivatives.
    fn depth(self) -> (usize, usize) {
        match self {
            OperatorKind::H => (1, 1),
            OperatorKind::Jz => (0, 0),
            OperatorKind::Jsq => (0, 2),
            OperatorKind::ID => (0, 1),
            OperatorKind::IJL => (1, 2),
            OperatorKind::IBEL => (1, 3),
        }
    }
}

/// An operator with its coupling and lattice step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorHandle {
    pub kind: OperatorKind,
    pub fd_step: f64,
    pub zalpha: f64,
}

impl OperatorHandle {
    pub fn new(kind: OperatorKind, zalpha: f64) -> Self {
        OperatorHandle {
            kind,
            fd_step: DEFAULT_FD_STEP,
            zalpha,
        }
    }

    pub fn with_step(mut self, fd_step: f64) -> Result<Self> {
        if !(fd_step > 0.0 && fd_step < 0.5) {
            return Err(DiracError::InvalidConfig("fd_step must lie in (0, 0.5)"));
        }
        self.fd_step = fd_step;
        Ok(self)
    }
}

/// Values of a reduced bispinor on a local lattice, r-major.
#[derive(Clone, Debug)]
struct Patch {
    r: Vec<f64>,
    theta: Vec<f64>,
    hr: f64,
    ht: f64,
    v: Vec<C4>,
}

impl Patch {
    fn sample<F: BispinorFn + ?Sized>(f: &F, r: Vec<f64>, theta: Vec<f64>, hr: f64, ht: f64) -> Self {
        let mut v = Vec::with_capacity(r.len() * theta.len());
        for &ri in &r {
            for &tk in &theta {
                v.push(f.reduced(ri, tk));
            }
        }
        Patch { r, theta, hr, ht, v }
    }

    fn nr(&self) -> usize {
        self.r.len()
    }

    fn nt(&self) -> usize {
        self.theta.len()
    }

    fn at(&self, i: usize, k: usize) -> &C4 {
        &self.v[i * self.nt() + k]
    }

    fn center(&self) -> C4 {
        *self.at(self.nr() / 2, self.nt() / 2)
    }

    /// Centered sub-patch of the given size.
    fn fit(&self, nr: usize, nt: usize) -> Patch {
        let (di, dk) = ((self.nr() - nr) / 2, (self.nt() - nt) / 2);
        let mut v = Vec::with_capacity(nr * nt);
        for i in di..di + nr {
            v.extend_from_slice(&self.v[i * self.nt() + dk..i * self.nt() + dk + nt]);
        }
        Patch {
            r: self.r[di..di + nr].to_vec(),
            theta: self.theta[dk..dk + nt].to_vec(),
            hr: self.hr,
            ht: self.ht,
            v,
        }
    }

    fn map(&self, mut g: impl FnMut(f64, f64, &C4) -> C4) -> Patch {
        let mut v = Vec::with_capacity(self.v.len());
        for (i, &r) in self.r.iter().enumerate() {
            for (k, &t) in self.theta.iter().enumerate() {
                v.push(g(r, t, self.at(i, k)));
            }
        }
        Patch { v, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Patch {
        Patch {
            r: self.r.clone(),
            theta: self.theta.clone(),
            hr: self.hr,
            ht: self.ht,
            v: Vec::new(),
        }
    }

    /// `a·self + b·other` on the common centered extent.
    fn combine(&self, a: Complex64, other: &Patch, b: Complex64) -> Patch {
        let (nr, nt) = (self.nr().min(other.nr()), self.nt().min(other.nt()));
        let x = self.fit(nr, nt);
        let y = other.fit(nr, nt);
        let v = x
            .v
            .iter()
            .zip(&y.v)
            .map(|(p, q)| core::array::from_fn(|c| p[c] * a + q[c] * b))
            .collect();
        Patch { v, ..x }
    }

    fn d_theta(&self) -> Patch {
        let w = CENTRAL8_HALF;
        let out = self.fit(self.nr(), self.nt() - 2 * w);
        let mut v = Vec::with_capacity(out.nr() * out.nt());
        for i in 0..self.nr() {
            for k in w..self.nt() - w {
                let mut acc = ZERO4;
                for (s, c) in CENTRAL8.iter().enumerate() {
                    let (p, m) = (self.at(i, k + s + 1), self.at(i, k - s - 1));
                    for q in 0..4 {
                        acc[q] += (p[q] - m[q]) * *c;
                    }
                }
                v.push(acc.map(|z| z / self.ht));
            }
        }
        Patch { v, ..out }
    }

    fn d_r(&self) -> Patch {
        let w = CENTRAL8_HALF;
        let out = self.fit(self.nr() - 2 * w, self.nt());
        let mut v = Vec::with_capacity(out.nr() * out.nt());
        for i in w..self.nr() - w {
            for k in 0..self.nt() {
                let mut acc = ZERO4;
                for (s, c) in CENTRAL8.iter().enumerate() {
                    let (p, m) = (self.at(i + s + 1, k), self.at(i - s - 1, k));
                    for q in 0..4 {
                        acc[q] += (p[q] - m[q]) * *c;
                    }
                }
                v.push(acc.map(|z| z / self.hr));
            }
        }
        Patch { v, ..out }
    }
}

fn sigma_r_blocks(p: &Patch) -> Patch {
    p.map(|_, t, v| {
        let u = sigma_r_reduced([v[0], v[1]], t);
        let d = sigma_r_reduced([v[2], v[3]], t);
        [u[0], u[1], d[0], d[1]]
    })
}

/// `diag(s₀Λ, s₁Λ)`.
fn lambda_blocks(p: &Patch, m_j: HalfInt, signs: [f64; 2]) -> Patch {
    let d = p.d_theta();
    let val = p.fit(d.nr(), d.nt());
    let mut v = Vec::with_capacity(d.v.len());
    for (k, (x, dx)) in val.v.iter().zip(&d.v).enumerate() {
        let t = d.theta[k % d.nt()];
        let u = lambda_reduced(m_j, [x[0], x[1]], [dx[0], dx[1]], t);
        let l = lambda_reduced(m_j, [x[2], x[3]], [dx[2], dx[3]], t);
        v.push([u[0] * signs[0], u[1] * signs[0], l[0] * signs[1], l[1] * signs[1]]);
    }
    Patch { v, ..d }
}

fn swap_blocks(p: &Patch) -> Patch {
    p.map(|_, _, v| [v[2], v[3], v[0], v[1]])
}

fn rho3(p: &Patch) -> Patch {
    p.map(|_, _, v| [v[0], v[1], -v[2], -v[3]])
}

fn hamiltonian(p: &Patch, m_j: HalfInt, za: f64) -> Patch {
    let q = sigma_r_blocks(p);
    let dq = q.d_r();
    let lq = lambda_blocks(&q, m_j, [1.0, 1.0]);
    let (nr, nt) = (dq.nr(), lq.nt());
    let (f, q, dq, lq) = (p.fit(nr, nt), q.fit(nr, nt), dq.fit(nr, nt), lq.fit(nr, nt));
    let mut v = Vec::with_capacity(nr * nt);
    for (idx, fv) in f.v.iter().enumerate() {
        let r = f.r[idx / nt];
        let s: C4 = core::array::from_fn(|c| -I * za * (dq.v[idx][c] + (q.v[idx][c] + lq.v[idx][c]) / r));
        let pot = -za * za / r;
        v.push([
            fv[0] * (pot + 1.0) + s[2],
            fv[1] * (pot + 1.0) + s[3],
            s[0] + fv[2] * (pot - 1.0),
            s[1] + fv[3] * (pot - 1.0),
        ]);
    }
    Patch { v, ..f }
}

fn johnson_lippman(p: &Patch, m_j: HalfInt, za: f64) -> Patch {
    let h = hamiltonian(p, m_j, za);
    let g = swap_blocks(&h.combine(Complex64::new(1.0, 0.0), &rho3(p), Complex64::new(-1.0, 0.0)));
    let k = lambda_blocks(&g, m_j, [1.0, -1.0]);
    sigma_r_blocks(p).combine(Complex64::new(za, 0.0), &k, -I)
}

fn bel(p: &Patch, m_j: HalfInt, za: f64) -> Patch {
    let a = lambda_blocks(&johnson_lippman(p, m_j, za), m_j, [1.0, -1.0]);
    let b = johnson_lippman(&lambda_blocks(p, m_j, [1.0, -1.0]), m_j, za);
    let half_over_i = Complex64::new(0.0, -0.5);
    a.combine(half_over_i, &b, -half_over_i)
}

fn apply_patch(op: &OperatorHandle, p: &Patch, m_j: HalfInt) -> Patch {
    match op.kind {
        OperatorKind::H => hamiltonian(p, m_j, op.zalpha),
        OperatorKind::Jz => {
            let (a, b) = (m_j.m1() as f64 + 0.5, m_j.m2() as f64 - 0.5);
            p.map(|_, _, v| [v[0] * a, v[1] * b, v[2] * a, v[3] * b])
        }
        OperatorKind::Jsq => {
            let l2 = lambda_blocks(&lambda_blocks(p, m_j, [1.0, 1.0]), m_j, [1.0, 1.0]);
            l2.combine(Complex64::new(1.0, 0.0), p, Complex64::new(-0.25, 0.0))
        }
        OperatorKind::ID => lambda_blocks(p, m_j, [1.0, -1.0]),
        OperatorKind::IJL => johnson_lippman(p, m_j, op.zalpha),
        OperatorKind::IBEL => bel(p, m_j, op.zalpha),
    }
}

/// Lattice around `(r, ϑ)` deep enough for `ops`, avoiding lattice points
/// on the polar axis.
fn lattice(ops: &[OperatorHandle], r: f64, theta: f64) -> Result<(Vec<f64>, Vec<f64>, f64, f64)> {
    if !(r > 0.0) || !r.is_finite() || theta.sin().abs() < crate::angular::POLE_EPS {
        return Err(DiracError::SingularPoint { r, theta });
    }
    let step = ops.first().map_or(DEFAULT_FD_STEP, |o| o.fd_step);
    let (lr, lt) = ops.iter().fold((0, 0), |(a, b), o| {
        let (x, y) = o.kind.depth();
        (a + x, b + y)
    });
    let (nr, nt) = (lr * CENTRAL8_HALF, lt * CENTRAL8_HALF);
    let mut hr = step * r.min(1.0);
    if nr as f64 * hr > 0.75 * r {
        hr = 0.75 * r / nr as f64;
    }
    let mut ht = step;
    for attempt in 0..16 {
        let clear = (1..=nt).all(|k| {
            let (a, b) = (theta + k as f64 * ht, theta - k as f64 * ht);
            a.sin().abs() > 1e-4 && b.sin().abs() > 1e-4
        });
        if clear {
            break;
        }
        ht = step * (1.0 + 0.013 * (attempt + 1) as f64);
    }
    let rs = (-(nr as isize)..=nr as isize).map(|i| r + i as f64 * hr).collect();
    let ts = (-(nt as isize)..=nt as isize).map(|k| theta + k as f64 * ht).collect();
    Ok((rs, ts, hr, ht))
}

/// `(ops[0] ops[1] … ops[n−1]) f` at `(r, ϑ)` in reduced form, with `f` there.
fn product_reduced<F: BispinorFn + ?Sized>(ops: &[OperatorHandle], f: &F, r: f64, theta: f64) -> Result<(C4, C4)> {
    let (rs, ts, hr, ht) = lattice(ops, r, theta)?;
    let p = Patch::sample(f, rs, ts, hr, ht);
    let m_j = f.m_j();
    let mut out = p.clone();
    for op in ops.iter().rev() {
        out = apply_patch(op, &out, m_j);
    }
    Ok((out.center(), p.center()))
}

/// `Â f` at `point = (r, ϑ, φ)`.
pub fn apply<F: BispinorFn + ?Sized>(op: &OperatorHandle, f: &F, point: (f64, f64, f64)) -> Result<BispinorSample> {
    apply_product(core::slice::from_ref(op), f, point)
}

/// `Â₁ Â₂ ⋯ f`, rightmost first. The lattice step of `ops[0]` is used throughout.
pub fn apply_product<F: BispinorFn + ?Sized>(
    ops: &[OperatorHandle],
    f: &F,
    point: (f64, f64, f64),
) -> Result<BispinorSample> {
    let (v, _) = product_reduced(ops, f, point.0, point.1)?;
    Ok(BispinorSample::from_reduced(v, f.m_j(), point.2))
}

pub fn apply_jl<F: BispinorFn + ?Sized>(zalpha: f64, f: &F, point: (f64, f64, f64)) -> Result<BispinorSample> {
    apply(&OperatorHandle::new(OperatorKind::IJL, zalpha), f, point)
}

pub fn apply_bel<F: BispinorFn + ?Sized>(zalpha: f64, f: &F, point: (f64, f64, f64)) -> Result<BispinorSample> {
    apply(&OperatorHandle::new(OperatorKind::IBEL, zalpha), f, point)
}

/// Nodes `(r, ϑ)` with weights for `∫ ⋯ d³r` of m_j-definite products; the φ
/// integral contributes 2π.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    pub r: Vec<f64>,
    pub r_weights: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_weights: Vec<f64>,
}

impl SampleGrid {
    /// Gauss–Legendre in `r ∈ [r_lo, r_hi]` and in `cos ϑ`.
    pub fn shell(r_lo: f64, r_hi: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        if !(r_lo >= 0.0 && r_hi > r_lo) {
            return Err(DiracError::InvalidConfig("shell needs 0 <= r_lo < r_hi"));
        }
        let leg = make_quadrature(QuadratureKind::GaussLegendre, n_r)?;
        let (mid, half) = (0.5 * (r_hi + r_lo), 0.5 * (r_hi - r_lo));
        let r: Vec<f64> = leg.nodes.iter().map(|x| mid + half * x).collect();
        let r_weights = leg.weights.iter().zip(&r).map(|(w, r)| w * half * r * r).collect();
        let (theta, theta_weights) = theta_rule(n_theta)?;
        Ok(SampleGrid {
            r,
            r_weights,
            theta,
            theta_weights,
        })
    }

    /// Laguerre nodes of the state's radial grid.
    pub fn for_radial(radial: &RadialSolution, n_r: usize, n_theta: usize) -> Result<Self> {
        let g = crate::bispinor::Grid::for_radial(
            radial,
            crate::bispinor::GridSpec {
                n_r,
                n_theta: 1,
                n_phi: 1,
            },
        )?;
        let (theta, theta_weights) = theta_rule(n_theta)?;
        Ok(SampleGrid {
            r: g.r,
            r_weights: g.r_weights,
            theta,
            theta_weights,
        })
    }

    /// Drops nodes outside [`R_GUARD`] and the polar caps of [`THETA_GUARD`].
    pub fn guarded(mut self) -> Self {
        let keep: Vec<bool> = self.r.iter().map(|&r| r >= R_GUARD.0 && r <= R_GUARD.1).collect();
        let mut it = keep.iter();
        self.r.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        self.r_weights.retain(|_| *it.next().unwrap());
        let keep: Vec<bool> = self
            .theta
            .iter()
            .map(|&t| t >= THETA_GUARD && t <= PI - THETA_GUARD)
            .collect();
        let mut it = keep.iter();
        self.theta.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        self.theta_weights.retain(|_| *it.next().unwrap());
        self
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.r.iter().zip(&self.r_weights).flat_map(move |(&r, &wr)| {
            self.theta
                .iter()
                .zip(&self.theta_weights)
                .map(move |(&t, &wt)| (r, t, 2.0 * PI * wr * wt))
        })
    }
}

fn theta_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let leg = make_quadrature(QuadratureKind::GaussLegendre, n)?;
    Ok((leg.nodes.iter().map(|c| c.acos()).collect(), leg.weights))
}

fn dot4(a: &C4, b: &C4) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm4(a: &C4) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `‖(Â − a)f‖ / ‖f‖` over the nodes of `grid`.
pub fn eigen_residual<F: BispinorFn + ?Sized>(op: &OperatorHandle, f: &F, expected: f64, grid: &SampleGrid) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (r, t, w) in grid.nodes() {
        let (af, fv) = product_reduced(core::slice::from_ref(op), f, r, t)?;
        let d: C4 = core::array::from_fn(|c| af[c] - fv[c] * expected);
        num += w * norm4(&d);
        den += w * norm4(&fv);
    }
    Ok((num / den).sqrt())
}

/// `‖(ÂB̂ + s B̂Â)f‖ / (‖Âf‖ + ‖B̂f‖ + ‖f‖)`.
fn pair_norm<F: BispinorFn + ?Sized>(
    a: &OperatorHandle,
    b: &OperatorHandle,
    sign: f64,
    f: &F,
    grid: &SampleGrid,
) -> Result<f64> {
    let (mut num, mut na, mut nb, mut nf) = (0.0, 0.0, 0.0, 0.0);
    for (r, t, w) in grid.nodes() {
        let (ab, fv) = product_reduced(&[*a, *b], f, r, t)?;
        let (ba, _) = product_reduced(&[*b, *a], f, r, t)?;
        let (av, _) = product_reduced(core::slice::from_ref(a), f, r, t)?;
        let (bv, _) = product_reduced(core::slice::from_ref(b), f, r, t)?;
        let s: C4 = core::array::from_fn(|c| ab[c] + ba[c] * sign);
        num += w * norm4(&s);
        na += w * norm4(&av);
        nb += w * norm4(&bv);
        nf += w * norm4(&fv);
    }
    Ok(num.sqrt() / (na.sqrt() + nb.sqrt() + nf.sqrt()))
}

/// Normalized `‖{Â, B̂} f‖`.
pub fn anticommutator_norm<F: BispinorFn + ?Sized>(
    a: &OperatorHandle,
    b: &OperatorHandle,
    f: &F,
    grid: &SampleGrid,
) -> Result<f64> {
    pair_norm(a, b, 1.0, f, grid)
}

/// Normalized `‖[Â, B̂] f‖`.
pub fn commutator_norm<F: BispinorFn + ?Sized>(
    a: &OperatorHandle,
    b: &OperatorHandle,
    f: &F,
    grid: &SampleGrid,
) -> Result<f64> {
    pair_norm(a, b, -1.0, f, grid)
}

/// `⟨g | Â₁Â₂⋯ f⟩` on the grid.
pub fn matrix_element<F, G>(ops: &[OperatorHandle], g: &G, f: &F, grid: &SampleGrid) -> Result<Complex64>
where
    F: BispinorFn + ?Sized,
    G: BispinorFn + ?Sized,
{
    if f.m_j() != g.m_j() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, t, w) in grid.nodes() {
        let (af, _) = product_reduced(ops, f, r, t)?;
        acc += dot4(&g.reduced(r, t), &af) * w;
    }
    Ok(acc)
}

/// `⟨f|g⟩` on the grid.
pub fn overlap<F, G>(g: &G, f: &F, grid: &SampleGrid) -> Complex64
where
    F: BispinorFn + ?Sized,
    G: BispinorFn + ?Sized,
{
    if f.m_j() != g.m_j() {
        return Complex64::new(0.0, 0.0);
    }
    grid.nodes()
        .map(|(r, t, w)| dot4(&g.reduced(r, t), &f.reduced(r, t)) * w)
        .sum()
}

/// `√(1 − κ²(1 − ε²)/(Zα)²) = √(n_r(n_r + 2γ))/ℳ`.
pub fn a_factor(radial: &RadialSolution) -> f64 {
    let n = radial.n_r as f64;
    (n * (n + 2.0 * radial.gamma_j)).sqrt() / radial.big_n()
}

/// Closed-form eigenvalue of `kind` on `state`; `None` when `state` is not
/// an eigenstate of that invariant. In the Darwin basis `I_D = κσ_z` and
/// `I_JL = Zα a σ_y`, so `I_BEL = [I_D, I_JL]/2i = −κ Zα a σ_x` and the
/// BEL eigenvalue of the `(π/4, 0)` state is `−σκZα a`.
pub fn expected_eigenvalue(kind: OperatorKind, state: &DiracState, case: Option<SpecialCase>) -> Option<f64> {
    let kappa = state.qn.kappa as f64;
    let za = state.cfg.zalpha();
    let a = a_factor(&state.radial);
    let s = state.qn.sigma.sign();
    let zero_nr = state.qn.n_r == 0;
    match kind {
        OperatorKind::H => Some(state.epsilon()),
        OperatorKind::Jz => Some(state.qn.m_j.value()),
        OperatorKind::Jsq => Some(state.qn.j() * (state.qn.j() + 1.0)),
        OperatorKind::ID => match case {
            Some(SpecialCase::Darwin) => Some(s * kappa),
            _ if zero_nr => Some(kappa),
            _ => None,
        },
        OperatorKind::IJL => match case {
            _ if zero_nr => Some(0.0),
            Some(SpecialCase::JohnsonLippman) => Some(s * za * a),
            _ => None,
        },
        OperatorKind::IBEL => match case {
            _ if zero_nr => Some(0.0),
            Some(SpecialCase::Bel) => Some(-s * kappa * za * a),
            _ => None,
        },
    }
}

/// Coefficients `(c_D, c_JL, c_BEL)` of the generalized invariant whose
/// σ = ± eigenstates are the states with spin parameters `sp`, eigenvalue
/// `±1`. Only meaningful for `n_r ≥ 1`, where `a > 0`.
pub fn generalized_coefficients(sp: crate::bispinor::SpinParams, radial: &RadialSolution) -> [f64; 3] {
    let kappa = radial.kappa as f64;
    let a = a_factor(radial);
    let (s2, c2) = (2.0 * sp.theta).sin_cos();
    let (sp2, cp2) = (2.0 * sp.phi).sin_cos();
    [c2 / kappa, -s2 * sp2 / a, -s2 * cp2 / (kappa * a)]
}

/// Generalized invariant `c_D I_D + (c_JL/Zα) I_JL + (c_BEL/Zα) I_BEL`
/// squared, as `⟨f|Î_gen²|f⟩ / ⟨f|f⟩`.
pub fn generalized_square<F: BispinorFn + ?Sized>(
    coeffs: [f64; 3],
    zalpha: f64,
    f: &F,
    grid: &SampleGrid,
) -> Result<f64> {
    let kinds = [OperatorKind::ID, OperatorKind::IJL, OperatorKind::IBEL];
    let scale = [coeffs[0], coeffs[1] / zalpha, coeffs[2] / zalpha];
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ki) in kinds.iter().enumerate() {
        for (j, kj) in kinds.iter().enumerate() {
            if scale[i] == 0.0 || scale[j] == 0.0 {
                continue;
            }
            let ops = [OperatorHandle::new(*ki, zalpha), OperatorHandle::new(*kj, zalpha)];
            acc += matrix_element(&ops, f, f, grid)? * (scale[i] * scale[j]);
        }
    }
    Ok(acc.re / overlap(f, f, grid).re)
}

/// Smooth random bispinor with definite `m_j`: spherical spinors up to
/// `l_max` with polynomial-times-Gaussian radial profiles centred at r = 3.
#[derive(Clone, Debug)]
pub struct RandomField {
    m_j: HalfInt,
    terms: Vec<(SpinorLabel, [Complex64; 3], [Complex64; 3])>,
}

impl RandomField {
    pub fn new(seed: u64, m_j: HalfInt, l_max: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for l in 0..=l_max {
            for parity in [Parity::Plus, Parity::Minus] {
                if let Ok(label) = SpinorLabel::new(l, m_j, parity) {
                    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let up = [c(), c() * 0.3, c() * 0.05];
                    let down = [c(), c() * 0.3, c() * 0.05];
                    terms.push((label, up, down));
                }
            }
        }
        RandomField { m_j, terms }
    }

    fn radial(c: &[Complex64; 3], r: f64) -> Complex64 {
        let env = (-((r - 3.0) / 0.8).powi(2)).exp();
        (c[0] + c[1] * r + c[2] * r * r) * env
    }
}

impl BispinorFn for RandomField {
    fn m_j(&self) -> HalfInt {
        self.m_j
    }

    fn reduced(&self, r: f64, theta: f64) -> C4 {
        let mut out = ZERO4;
        for (label, up, down) in &self.terms {
            let chi = label.reduced(theta);
            let (a, b) = (Self::radial(up, r), Self::radial(down, r));
            out[0] += a * chi[0];
            out[1] += a * chi[1];
            out[2] += b * chi[0];
            out[3] += b * chi[1];
        }
        out
    }
}

/// Darwin-basis matrix `⟨Ψ_s^D| Â |Ψ_t^D⟩` for `s, t ∈ {+, −}`.
pub fn darwin_matrix(op: &OperatorHandle, state: &DiracState, grid: &SampleGrid) -> Result<[[Complex64; 2]; 2]> {
    let p = state.darwin(Sigma::Plus)?;
    let basis = if state.qn.n_r == 0 {
        vec![p]
    } else {
        vec![p, state.darwin(Sigma::Minus)?]
    };
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (s, bs) in basis.iter().enumerate() {
        for (t, bt) in basis.iter().enumerate() {
            m[s][t] = matrix_element(core::slice::from_ref(op), bs, bt, grid)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bispinor::SpinParams;
    use crate::radial::{PhysicalConfig, QuantumNumbers};

    fn state(n_r: u32, kappa: u32, two_mj: i32, sigma: Sigma, case: SpecialCase, za: f64) -> DiracState {
        let qn = QuantumNumbers::new(n_r, kappa, HalfInt::from_twice(two_mj).unwrap(), sigma).unwrap();
        DiracState::special(qn, case, PhysicalConfig::new(1.0, za).unwrap()).unwrap()
    }

    fn grid_for(st: &DiracState) -> SampleGrid {
        SampleGrid::for_radial(&st.radial, 24, 10).unwrap().guarded()
    }

    #[test]
    fn hamiltonian_ground_state() {
        let st = state(0, 1, 1, Sigma::Plus, SpecialCase::Darwin, 0.3);
        let op = OperatorHandle::new(OperatorKind::H, 0.3);
        let res = eigen_residual(&op, &st, st.epsilon(), &grid_for(&st)).unwrap();
        assert!(res < 1e-6, "{res}");
        let wrong = eigen_residual(&op, &st, st.epsilon() + 0.01, &grid_for(&st)).unwrap();
        assert!((wrong - 0.01).abs() < 1e-6);
    }

    #[test]
    fn dirac_invariant_on_darwin() {
        for sigma in [Sigma::Plus, Sigma::Minus] {
            let st = state(1, 2, -3, sigma, SpecialCase::Darwin, 0.5);
            let op = OperatorHandle::new(OperatorKind::ID, 0.5);
            let res = eigen_residual(&op, &st, sigma.sign() * 2.0, &grid_for(&st)).unwrap();
            assert!(res < 1e-6, "{res}");
        }
    }

    #[test]
    fn jz_is_exact() {
        let st = state(1, 2, 3, Sigma::Minus, SpecialCase::Bel, 0.2);
        let op = OperatorHandle::new(OperatorKind::Jz, 0.2);
        assert!(eigen_residual(&op, &st, 1.5, &grid_for(&st)).unwrap() < 1e-14);
    }

    #[test]
    fn jsq_on_general_state() {
        let qn = QuantumNumbers::new(2, 2, HalfInt::from_twice(1).unwrap(), Sigma::Plus).unwrap();
        let st = DiracState::new(qn, SpinParams::new(0.3, 1.2), PhysicalConfig::new(1.0, 0.4).unwrap()).unwrap();
        let op = OperatorHandle::new(OperatorKind::Jsq, 0.4);
        assert!(eigen_residual(&op, &st, 3.75, &grid_for(&st)).unwrap() < 1e-6);
    }

    #[test]
    fn invariants_vanish_at_n_r_zero() {
        let st = state(0, 2, 1, Sigma::Plus, SpecialCase::Darwin, 0.6);
        let g = grid_for(&st);
        for kind in [OperatorKind::IJL, OperatorKind::IBEL] {
            let op = OperatorHandle::new(kind, 0.6);
            assert!(eigen_residual(&op, &st, 0.0, &g).unwrap() < 1e-6);
        }
    }

    #[test]
    fn jl_maps_darwin_plus_to_minus() {
        let st = state(1, 1, 1, Sigma::Plus, SpecialCase::Darwin, 0.4);
        let g = grid_for(&st);
        let op = OperatorHandle::new(OperatorKind::IJL, 0.4);
        let m = darwin_matrix(&op, &st, &g).unwrap();
        let a = a_factor(&st.radial);
        assert!(m[0][0].norm() < 1e-6 && m[1][1].norm() < 1e-6);
        // the guard band trims a little weight from the overlap
        assert!((m[1][0].norm() - 0.4 * a).abs() < 1e-3, "{:?} {}", m, 0.4 * a);
    }

    #[test]
    fn special_case_eigenvalues() {
        let za = 0.4;
        for (case, kind) in [
            (SpecialCase::Darwin, OperatorKind::ID),
            (SpecialCase::JohnsonLippman, OperatorKind::IJL),
            (SpecialCase::Bel, OperatorKind::IBEL),
        ] {
            for sigma in [Sigma::Plus, Sigma::Minus] {
                let st = state(1, 2, 1, sigma, case, za);
                let want = expected_eigenvalue(kind, &st, Some(case)).unwrap();
                let res = eigen_residual(&OperatorHandle::new(kind, za), &st, want, &grid_for(&st)).unwrap();
                assert!(res < 1e-8, "{case} {sigma} {res}");
            }
        }
    }

    #[test]
    fn generalized_invariant_eigenstates() {
        let za = 0.3;
        let cfg = PhysicalConfig::new(1.0, za).unwrap();
        let sp = SpinParams::new(0.4, 1.1);
        for sigma in [Sigma::Plus, Sigma::Minus] {
            let qn = QuantumNumbers::new(1, 1, HalfInt::from_twice(-1).unwrap(), sigma).unwrap();
            let st = DiracState::new(qn, sp, cfg).unwrap();
            let c = generalized_coefficients(sp, &st.radial);
            let g = grid_for(&st);
            let ops = [
                OperatorHandle::new(OperatorKind::ID, za),
                OperatorHandle::new(OperatorKind::IJL, za),
                OperatorHandle::new(OperatorKind::IBEL, za),
            ];
            let scale = [c[0], c[1] / za, c[2] / za];
            let (mut num, mut den) = (0.0, 0.0);
            for (r, t, w) in g.nodes() {
                let mut acc = [Complex64::new(0.0, 0.0); 4];
                let mut fv = acc;
                for (op, k) in ops.iter().zip(scale) {
                    let (v, f) = product_reduced(core::slice::from_ref(op), &st, r, t).unwrap();
                    fv = f;
                    for q in 0..4 {
                        acc[q] += v[q] * k;
                    }
                }
                let d: C4 = core::array::from_fn(|q| acc[q] - fv[q] * sigma.sign());
                num += w * norm4(&d);
                den += w * norm4(&fv);
            }
            assert!((num / den).sqrt() < 1e-8);
            let sq = generalized_square(c, za, &st, &g).unwrap();
            assert!((sq - 1.0).abs() < 1e-8, "{sq}");
        }
    }

    #[test]
    fn lattice_rejects_singular_points() {
        let op = [OperatorHandle::new(OperatorKind::H, 0.1)];
        assert!(matches!(lattice(&op, 0.0, 1.0), Err(DiracError::SingularPoint { .. })));
        assert!(matches!(lattice(&op, 1.0, 0.0), Err(DiracError::SingularPoint { .. })));
        let (rs, ..) = lattice(&op, 0.06, 1.0).unwrap();
        assert!(rs[0] > 0.0);
    }

    #[test]
    fn anticommutators_on_random_field() {
        let f = RandomField::new(7, HalfInt::from_twice(-1).unwrap(), 3);
        let g = SampleGrid::shell(1.5, 4.5, 6, 5).unwrap();
        let za = 0.3;
        let d = OperatorHandle::new(OperatorKind::ID, za);
        let jl = OperatorHandle::new(OperatorKind::IJL, za);
        let h = OperatorHandle::new(OperatorKind::H, za);
        assert!(anticommutator_norm(&d, &jl, &f, &g).unwrap() < 1e-5);
        assert!(commutator_norm(&jl, &h, &f, &g).unwrap() < 1e-5);
        assert!(commutator_norm(&d, &jl, &f, &g).unwrap() > 1e-2);
    }

    #[test]
    fn hermitian_operators() {
        let m = HalfInt::from_twice(3).unwrap();
        let (f, g) = (RandomField::new(1, m, 3), RandomField::new(2, m, 3));
        let grid = SampleGrid::shell(0.0, 7.0, 40, 12).unwrap();
        for kind in [OperatorKind::H, OperatorKind::Jz, OperatorKind::ID] {
            let op = [OperatorHandle::new(kind, 0.2)];
            let a = matrix_element(&op, &g, &f, &grid).unwrap();
            let b = matrix_element(&op, &f, &g, &grid).unwrap().conj();
            assert!((a - b).norm() < 1e-7 * a.norm().max(1.0), "{kind:?} {a} {b}");
        }
    }
}
