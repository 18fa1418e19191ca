//! Spherical spinors χ_{l,m_j,±}, the operator Λ = σ·L + 1 and the matrix σ_r.
//!
//! A spinor with total projection `m_j` has components `f₁(ϑ) e^{i m₁ φ}` and
//! `f₂(ϑ) e^{i m₂ φ}` with `m₁ = m_j − 1/2`, `m₂ = m_j + 1/2`. Most of the
//! work here is done on the reduced pair `(f₁, f₂)`, with φ handled exactly.

use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use crate::fd;
use crate::specfun::{legendre_cs, QuadratureRule};
use crate::{DiracError, Result};

/// Clamp distance from the poles when Λ is applied numerically.
pub const POLE_EPS: f64 = 1e-6;

/// A half-odd-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(DiracError::InvalidQuantumNumbers("half-integer needs an odd numerator"));
        }
        Ok(HalfInt { twice })
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `m₁ = m_j − 1/2`.
    pub fn m1(self) -> i32 {
        (self.twice - 1) / 2
    }

    /// `m₂ = m_j + 1/2`.
    pub fn m2(self) -> i32 {
        (self.twice + 1) / 2
    }

    pub fn neg(self) -> Self {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

/// Two spinor components at one direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorSample {
    pub up: Complex64,
    pub down: Complex64,
}

impl SpinorSample {
    pub fn new(up: Complex64, down: Complex64) -> Self {
        SpinorSample { up, down }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SpinorSample::new(c * self.up, c * self.down)
    }

    pub fn dist(&self, other: &Self) -> f64 {
        ((self.up - other.up).norm_sqr() + (self.down - other.down).norm_sqr()).sqrt()
    }

    fn from_reduced(f: [Complex64; 2], m1: i32, phi: f64) -> Self {
        let e1 = Complex64::from_polar(1.0, m1 as f64 * phi);
        let e2 = Complex64::from_polar(1.0, (m1 + 1) as f64 * phi);
        SpinorSample::new(f[0] * e1, f[1] * e2)
    }
}

/// Identifies χ_{l,m_j,±}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinorLabel {
    l: u32,
    m_j: HalfInt,
    parity: Parity,
}

impl SpinorLabel {
    pub fn new(l: u32, m_j: HalfInt, parity: Parity) -> Result<Self> {
        let bound = match parity {
            Parity::Plus => 2 * l as i32 + 1,
            Parity::Minus => {
                if l == 0 {
                    return Err(DiracError::InvalidLabel("parity − needs l ≥ 1"));
                }
                2 * l as i32 - 1
            }
        };
        if m_j.twice().abs() > bound {
            return Err(DiracError::InvalidLabel("|m_j| exceeds j for this l"));
        }
        Ok(SpinorLabel { l, m_j, parity })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m_j(&self) -> HalfInt {
        self.m_j
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Eigenvalue of Λ: `l + 1` for parity +, `−l` for parity −.
    pub fn lambda(&self) -> f64 {
        match self.parity {
            Parity::Plus => self.l as f64 + 1.0,
            Parity::Minus => -(self.l as f64),
        }
    }

    /// All labels with `l ≤ l_max`, in a fixed order.
    pub fn enumerate(l_max: u32) -> alloc::vec::Vec<SpinorLabel> {
        let mut out = alloc::vec::Vec::new();
        for l in 0..=l_max {
            for parity in [Parity::Plus, Parity::Minus] {
                for twice in (-(2 * l as i32 + 1)..=(2 * l as i32 + 1)).step_by(2) {
                    if let Ok(label) = SpinorLabel::new(l, HalfInt { twice }, parity) {
                        out.push(label);
                    }
                }
            }
        }
        out
    }

    /// Real component weights in front of the signed Legendre functions.
    fn weights(&self) -> [f64; 2] {
        let l = self.l as i32;
        let (m1, m2) = (self.m_j.m1(), self.m_j.m2());
        let (a, b) = match self.parity {
            Parity::Plus => ((l + 1 + m1) as f64, (l + 1 - m2) as f64),
            Parity::Minus => ((l - m1) as f64, (l + m2) as f64),
        };
        let sign1 = if self.parity == Parity::Minus { -1.0 } else { 1.0 };
        let w = |c: f64, m: i32| {
            if m.unsigned_abs() > self.l {
                0.0
            } else {
                (c * factorial_ratio(self.l, m.unsigned_abs()) / (4.0 * PI)).sqrt()
            }
        };
        [sign1 * w(a, m1), w(b, m2)]
    }

    fn phase(&self) -> Complex64 {
        match self.l % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for SpinorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.parity == Parity::Plus { '+' } else { '-' };
        write!(f, "chi[l={}, m_j={}, {}]", self.l, self.m_j, p)
    }
}

/// `(l − m)! / (l + m)!` for `0 ≤ m ≤ l`.
fn factorial_ratio(l: u32, m: u32) -> f64 {
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Legendre function in the sign convention of the printed spinors:
/// an extra `(−1)^m` for positive `m`, none for `m ≤ 0`.
fn legendre_signed(l: u32, m: i32, c: f64, s: f64) -> f64 {
    let q = legendre_cs(l, m.unsigned_abs(), c, s);
    if m > 0 && m % 2 == 1 {
        -q
    } else {
        q
    }
}

/// A two-component function of ϑ carrying `e^{i m₁ φ}`, `e^{i m₂ φ}`.
pub trait ReducedSpinor {
    fn m_j(&self) -> HalfInt;
    /// `(f₁(ϑ), f₂(ϑ))`; must accept ϑ slightly outside `[0, π]`.
    fn reduced(&self, theta: f64) -> [Complex64; 2];
}

impl ReducedSpinor for SpinorLabel {
    fn m_j(&self) -> HalfInt {
        self.m_j
    }

    fn reduced(&self, theta: f64) -> [Complex64; 2] {
        let (s, c) = theta.sin_cos();
        let w = self.weights();
        let ph = self.phase();
        [
            ph * (w[0] * legendre_signed(self.l, self.m_j.m1(), c, s)),
            ph * (w[1] * legendre_signed(self.l, self.m_j.m2(), c, s)),
        ]
    }
}

/// χ_{l,m_j,±}(ϑ, φ), exact at the poles.
pub fn spherical_spinor(label: SpinorLabel, theta: f64, phi: f64) -> Result<SpinorSample> {
    if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
        return Err(DiracError::Domain {
            func: "spherical_spinor",
            value: theta,
        });
    }
    Ok(SpinorSample::from_reduced(
        label.reduced(theta),
        label.m_j.m1(),
        phi,
    ))
}

/// σ_r acting on a reduced pair.
pub fn sigma_r_reduced(f: [Complex64; 2], theta: f64) -> [Complex64; 2] {
    let (s, c) = theta.sin_cos();
    [f[0] * c + f[1] * s, f[0] * s - f[1] * c]
}

/// σ_r applied to a spinor sampled at (ϑ, φ).
pub fn apply_sigma_r(sample: SpinorSample, theta: f64, phi: f64) -> SpinorSample {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    SpinorSample::new(
        sample.up * c + e.conj() * s * sample.down,
        e * s * sample.up - sample.down * c,
    )
}

/// Λ acting on a reduced pair, given values and ϑ-derivatives.
pub fn lambda_reduced(
    m_j: HalfInt,
    f: [Complex64; 2],
    df: [Complex64; 2],
    theta: f64,
) -> [Complex64; 2] {
    let (m1, m2) = (m_j.m1() as f64, m_j.m2() as f64);
    let cot = theta.cos() / theta.sin();
    [
        f[0] * (m1 + 1.0) - df[1] - f[1] * (m2 * cot),
        df[0] - f[0] * (m1 * cot) + f[1] * (1.0 - m2),
    ]
}

/// Λf at (ϑ, φ) with a five-point ϑ-derivative of step `h`. ϑ is clamped
/// to `[POLE_EPS, π − POLE_EPS]`.
pub fn apply_lambda<F: ReducedSpinor + ?Sized>(f: &F, theta: f64, phi: f64, h: f64) -> SpinorSample {
    let theta = theta.clamp(POLE_EPS, PI - POLE_EPS);
    let val = f.reduced(theta);
    let der = fd::d1(|t| f.reduced(t), theta, h);
    SpinorSample::from_reduced(lambda_reduced(f.m_j(), val, der, theta), f.m_j().m1(), phi)
}

/// ⟨a|b⟩ over the sphere: Gauss–Legendre in cos ϑ, trapezoid with `n_phi`
/// points in φ.
pub fn angular_inner_product(
    a: SpinorLabel,
    b: SpinorLabel,
    rule: &QuadratureRule,
    n_phi: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let dphi = 2.0 * PI / n_phi as f64;
    for (&c, &w) in rule.nodes.iter().zip(&rule.weights) {
        let theta = c.acos();
        let fa = a.reduced(theta);
        let fb = b.reduced(theta);
        for k in 0..n_phi {
            let phi = k as f64 * dphi;
            let sa = SpinorSample::from_reduced(fa, a.m_j.m1(), phi);
            let sb = SpinorSample::from_reduced(fb, b.m_j.m1(), phi);
            acc += (sa.up.conj() * sb.up + sa.down.conj() * sb.down) * (w * dphi);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{make_quadrature, QuadratureKind};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn label(l: u32, twice: i32, parity: Parity) -> SpinorLabel {
        SpinorLabel::new(l, HalfInt::from_twice(twice).unwrap(), parity).unwrap()
    }

    #[test]
    fn half_int_rules() {
        assert!(HalfInt::from_twice(2).is_err());
        let h = HalfInt::from_twice(-3).unwrap();
        assert_eq!((h.m1(), h.m2()), (-2, -1));
        assert_eq!(h.value(), -1.5);
    }

    #[test]
    fn label_rules() {
        let mj = HalfInt::from_twice(1).unwrap();
        assert!(SpinorLabel::new(0, mj, Parity::Minus).is_err());
        assert!(SpinorLabel::new(1, HalfInt::from_twice(3).unwrap(), Parity::Minus).is_err());
        assert!(SpinorLabel::new(1, HalfInt::from_twice(3).unwrap(), Parity::Plus).is_ok());
        // (2l+2) labels of each parity with room for them
        assert_eq!(SpinorLabel::enumerate(0).len(), 2);
        assert_eq!(SpinorLabel::enumerate(1).len(), 2 + 4 + 2);
    }

    #[test]
    fn ground_spinor() {
        let s = spherical_spinor(label(0, 1, Parity::Plus), 1.1, 2.3).unwrap();
        assert!((s.up - c(1.0 / (4.0 * PI).sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(s.down, c(0.0, 0.0));
    }

    #[test]
    fn printed_l1_spinors() {
        let (t, p) = (0.83, -1.4);
        let (st, ct) = t.sin_cos();
        let e = Complex64::from_polar(1.0, p);
        let i = c(0.0, 1.0);
        let cases = [
            (label(1, 3, Parity::Plus), -i * (3.0 / (8.0 * PI)).sqrt() * e * st, c(0.0, 0.0)),
            (label(1, -3, Parity::Plus), c(0.0, 0.0), i * (3.0 / (8.0 * PI)).sqrt() * e.conj() * st),
            (label(1, 1, Parity::Plus), i / (8.0 * PI).sqrt() * 2.0 * ct, -i / (8.0 * PI).sqrt() * e * st),
            (label(1, -1, Parity::Plus), i / (8.0 * PI).sqrt() * e.conj() * st, i / (8.0 * PI).sqrt() * 2.0 * ct),
            (label(1, 1, Parity::Minus), -i / (4.0 * PI).sqrt() * ct, -i / (4.0 * PI).sqrt() * e * st),
            (label(1, -1, Parity::Minus), -i / (4.0 * PI).sqrt() * e.conj() * st, i / (4.0 * PI).sqrt() * ct),
        ];
        for (lab, up, down) in cases {
            let s = spherical_spinor(lab, t, p).unwrap();
            assert!((s.up - up).norm() < 1e-15 && (s.down - down).norm() < 1e-15, "{lab}");
        }
    }

    #[test]
    fn exact_at_poles() {
        let s = spherical_spinor(label(1, 3, Parity::Plus), 0.0, 0.5).unwrap();
        assert_eq!(s.up.norm(), 0.0);
        assert!(spherical_spinor(label(1, 3, Parity::Plus), -0.1, 0.5).is_err());
    }

    #[test]
    fn sigma_r_ladder() {
        let i = c(0.0, 1.0);
        let grid: alloc::vec::Vec<(f64, f64)> = (0..=12)
            .flat_map(|a| (0..7).map(move |b| (PI * a as f64 / 12.0, 0.9 * b as f64 - 2.0)))
            .collect();
        for l in 0..=5u32 {
            for twice in (-(2 * l as i32 + 1)..=(2 * l as i32 + 1)).step_by(2) {
                let plus = label(l, twice, Parity::Plus);
                let up = label(l + 1, twice, Parity::Minus);
                for &(t, p) in &grid {
                    let lhs = apply_sigma_r(spherical_spinor(plus, t, p).unwrap(), t, p);
                    let rhs = spherical_spinor(up, t, p).unwrap().scale(i);
                    assert!(lhs.dist(&rhs) <= 1e-12, "{plus} at {t},{p}");
                    let back = apply_sigma_r(spherical_spinor(up, t, p).unwrap(), t, p);
                    let want = spherical_spinor(plus, t, p).unwrap().scale(-i);
                    assert!(back.dist(&want) <= 1e-12, "{up} at {t},{p}");
                }
            }
        }
    }

    #[test]
    fn sigma_r_printed_examples() {
        let i = c(0.0, 1.0);
        let (t, p) = (0.4, 0.9);
        let a = apply_sigma_r(spherical_spinor(label(0, 1, Parity::Plus), t, p).unwrap(), t, p);
        let b = spherical_spinor(label(1, 1, Parity::Minus), t, p).unwrap().scale(i);
        assert!(a.dist(&b) < 1e-15);
        let a = apply_sigma_r(spherical_spinor(label(1, 1, Parity::Minus), t, p).unwrap(), t, p);
        let b = spherical_spinor(label(0, 1, Parity::Plus), t, p).unwrap().scale(-i);
        assert!(a.dist(&b) < 1e-15);
    }

    #[test]
    fn lambda_eigenrelation() {
        for kappa in 1..=6u32 {
            for twice in (-(2 * kappa as i32 - 1)..=(2 * kappa as i32 - 1)).step_by(2) {
                let plus = label(kappa - 1, twice, Parity::Plus);
                let minus = label(kappa, twice, Parity::Minus);
                for (lab, lam) in [(plus, kappa as f64), (minus, -(kappa as f64))] {
                    assert_eq!(lab.lambda(), lam);
                    let mut num = 0.0;
                    let mut den = 0.0;
                    for a in 1..40 {
                        let t = PI * a as f64 / 40.0;
                        let p = 0.37 * a as f64;
                        let got = apply_lambda(&lab, t, p, fd::DEFAULT_ANGLE_STEP);
                        let want = spherical_spinor(lab, t, p).unwrap();
                        num += got.dist(&want.scale(c(lam, 0.0))).powi(2);
                        den += want.norm_sqr();
                    }
                    assert!((num / den).sqrt() <= 1e-6, "{lab}: {}", (num / den).sqrt());
                }
            }
        }
    }

    #[test]
    fn lambda_on_constant_spinor() {
        let lab = label(0, 1, Parity::Plus);
        let got = apply_lambda(&lab, 1.0, 0.2, fd::DEFAULT_ANGLE_STEP);
        let want = spherical_spinor(lab, 1.0, 0.2).unwrap();
        assert!(got.dist(&want) < 1e-12);
    }

    #[test]
    fn coefficient_ratio() {
        // with standard Ferrers functions (Condon–Shortley phase and
        // P^{-m} = (-1)^m (l-m)!/(l+m)! P^m) the two components are
        // A P^{m1}, B P^{m2} with A = (λ + m1) B
        let ferrers = |l: u32, m: i32, t: f64| {
            let q = legendre_cs(l, m.unsigned_abs(), t.cos(), t.sin());
            if m >= 0 {
                if m % 2 == 1 { -q } else { q }
            } else {
                factorial_ratio(l, m.unsigned_abs()) * q
            }
        };
        let t = 0.913;
        for l in 1..=5u32 {
            for lab in SpinorLabel::enumerate(l).into_iter().filter(|x| x.l() == l) {
                let (m1, m2) = (lab.m_j().m1(), lab.m_j().m2());
                if m1.unsigned_abs() > l || m2.unsigned_abs() > l {
                    continue;
                }
                let f = lab.reduced(t);
                let a = f[0] / ferrers(l, m1, t);
                let b = f[1] / ferrers(l, m2, t);
                let want = (lab.lambda() + m1 as f64) * b;
                assert!((a - want).norm() < 1e-12 * a.norm().max(1.0), "{lab}");
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        let labels = SpinorLabel::enumerate(5);
        let rule = make_quadrature(QuadratureKind::GaussLegendre, 12).unwrap();
        for a in &labels {
            for b in &labels {
                let g = angular_inner_product(*a, *b, &rule, 16);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - c(want, 0.0)).norm() <= 1e-10, "{a} {b}: {g}");
            }
        }
    }

    #[test]
    fn printed_orthonormality_examples() {
        let rule = make_quadrature(QuadratureKind::GaussLegendre, 8).unwrap();
        let one = angular_inner_product(label(1, 1, Parity::Plus), label(1, 1, Parity::Plus), &rule, 8);
        assert!((one - c(1.0, 0.0)).norm() < 1e-13);
        let zero = angular_inner_product(label(1, 1, Parity::Plus), label(2, 1, Parity::Minus), &rule, 8);
        assert!(zero.norm() < 1e-13);
        let zero = angular_inner_product(label(0, 1, Parity::Plus), label(0, -1, Parity::Plus), &rule, 8);
        assert!(zero.norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn sigma_r_is_involution(t in 0.0f64..PI, p in -PI..PI, a in -2.0f64..2.0, b in -2.0f64..2.0, d in -2.0f64..2.0) {
            let s = SpinorSample::new(c(a, b), c(d, a * b));
            let twice = apply_sigma_r(apply_sigma_r(s, t, p), t, p);
            prop_assert!(twice.dist(&s) < 1e-14);
        }

        #[test]
        fn sigma_r_anticommutes_with_lambda(l in 0u32..5, k in 0usize..40, t in 0.1f64..3.0) {
            // {σ_r, Λ} = 0 on spinors: Λ σ_r χ = −σ_r Λ χ
            let labels: alloc::vec::Vec<_> = SpinorLabel::enumerate(l);
            let lab = labels[k % labels.len()];
            struct Rotated(SpinorLabel);
            impl ReducedSpinor for Rotated {
                fn m_j(&self) -> HalfInt { self.0.m_j() }
                fn reduced(&self, theta: f64) -> [Complex64; 2] {
                    sigma_r_reduced(self.0.reduced(theta), theta)
                }
            }
            let lhs = apply_lambda(&Rotated(lab), t, 0.3, fd::DEFAULT_ANGLE_STEP);
            let rhs = apply_sigma_r(apply_lambda(&lab, t, 0.3, fd::DEFAULT_ANGLE_STEP), t, 0.3);
            prop_assert!((lhs.up + rhs.up).norm() + (lhs.down + rhs.down).norm() < 1e-8 * (1.0 + lab.lambda().abs()));
        }
    }
}
