use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // resolved inherently when std is linked
use num_traits::Float;

use super::gamma_fn;
use crate::{DiracError, Result};

/// Weight function of a Gauss rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadratureKind {
    /// Unit weight on `[-1, 1]`.
    GaussLegendre,
    /// Weight `x^alpha e^{-x}` on `[0, ∞)`.
    GaussLaguerre { alpha: f64 },
}

impl QuadratureKind {
    /// Recurrence coefficients of the monic orthogonal family:
    /// diagonal `a_k` and off-diagonal `b_k` (defined for k ≥ 1).
    fn diag(&self, k: usize) -> f64 {
        match *self {
            QuadratureKind::GaussLegendre => 0.0,
            QuadratureKind::GaussLaguerre { alpha } => 2.0 * k as f64 + 1.0 + alpha,
        }
    }

    fn offdiag(&self, k: usize) -> f64 {
        let k = k as f64;
        match *self {
            QuadratureKind::GaussLegendre => k / (4.0 * k * k - 1.0).sqrt(),
            QuadratureKind::GaussLaguerre { alpha } => (k * (k + alpha)).sqrt(),
        }
    }

    fn total_mass(&self) -> Result<f64> {
        match *self {
            QuadratureKind::GaussLegendre => Ok(2.0),
            QuadratureKind::GaussLaguerre { alpha } => gamma_fn(alpha + 1.0),
        }
    }
}

/// Nodes and positive weights of an N-point Gauss rule.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ w_i f(x_i). The weight function is implied by `kind`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Builds an `order`-point Gauss rule by diagonalizing the Jacobi matrix,
/// then polishes each node with Newton steps and takes the weight from the
/// Christoffel function, which keeps tiny tail weights accurate.
pub fn make_quadrature(kind: QuadratureKind, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(DiracError::UnsupportedQuadrature("order must be at least 1"));
    }
    if let QuadratureKind::GaussLaguerre { alpha } = kind {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(DiracError::UnsupportedQuadrature("Laguerre weight needs alpha > -1"));
        }
    }
    let mu0 = kind.total_mass()?;

    let mut d: Vec<f64> = (0..order).map(|k| kind.diag(k)).collect();
    let mut e: Vec<f64> = (0..order)
        .map(|k| if k + 1 < order { kind.offdiag(k + 1) } else { 0.0 })
        .collect();
    let mut z = vec![0.0; order];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;

    let mut nodes = d;
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut weights = Vec::with_capacity(order);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_eval(&kind, order, *x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, _, sumsq) = orthonormal_eval(&kind, order, *x);
        weights.push(mu0 / sumsq);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        kind,
    })
}

/// Orthonormal p̂_n(x), its derivative, and Σ_{k<n} p̂_k(x)², with p̂_0 = 1.
fn orthonormal_eval(kind: &QuadratureKind, n: usize, x: f64) -> (f64, f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut dp_prev, mut dp) = (0.0, 0.0);
    let mut sumsq = 0.0;
    for k in 0..n {
        sumsq += p * p;
        let b_next = kind.offdiag(k + 1);
        let b_k = if k == 0 { 0.0 } else { kind.offdiag(k) };
        let a_k = kind.diag(k);
        let p_next = ((x - a_k) * p - b_k * p_prev) / b_next;
        let dp_next = (p + (x - a_k) * dp - b_k * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp, sumsq)
}

/// Implicit QL on a symmetric tridiagonal matrix (diagonal `d`, off-diagonal
/// `e[i]` between rows i and i+1). Eigenvalues overwrite `d`; `z` carries the
/// first row of the eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(DiracError::UnsupportedQuadrature("Jacobi eigenproblem did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::factorial;
    use proptest::prelude::*;

    #[test]
    fn legendre_two_point_x_squared() {
        let rule = make_quadrature(QuadratureKind::GaussLegendre, 2).unwrap();
        assert!((rule.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-15);
        assert!((rule.nodes[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn laguerre_one_point() {
        let rule = make_quadrature(QuadratureKind::GaussLaguerre { alpha: 0.0 }, 1).unwrap();
        assert_eq!(rule.nodes, vec![1.0]);
        assert_eq!(rule.weights, vec![1.0]);
    }

    #[test]
    fn legendre_twenty_point_x20() {
        let rule = make_quadrature(QuadratureKind::GaussLegendre, 20).unwrap();
        assert!((rule.integrate(|x| x.powi(20)) - 2.0 / 21.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(make_quadrature(QuadratureKind::GaussLegendre, 0).is_err());
        assert!(make_quadrature(QuadratureKind::GaussLaguerre { alpha: -1.0 }, 4).is_err());
        assert!(make_quadrature(QuadratureKind::GaussLaguerre { alpha: f64::NAN }, 4).is_err());
    }

    #[test]
    fn legendre_monomials_exact() {
        for n in [1usize, 3, 8, 17, 32, 64] {
            let rule = make_quadrature(QuadratureKind::GaussLegendre, n).unwrap();
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            for k in 0..2 * n {
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k + 1) as f64 };
                let got = rule.integrate(|x| x.powi(k as i32));
                assert!((got - want).abs() < 1e-13, "n={n} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn laguerre_monomials_exact() {
        // ∫ x^k x^α e^-x dx = Γ(k+α+1); high moments are checked with a
        // scaled monomial so the comparison stays meaningful
        for &alpha in &[0.0, 0.5, 1.7320508, 1.999, 4.0] {
            for n in [1usize, 2, 5, 12, 24] {
                let rule = make_quadrature(QuadratureKind::GaussLaguerre { alpha }, n).unwrap();
                assert!(rule.weights.iter().all(|&w| w > 0.0));
                for k in 0..2 * n {
                    let want = gamma_fn(k as f64 + alpha + 1.0).unwrap();
                    let got = rule.integrate(|x| x.powi(k as i32));
                    assert!(((got - want) / want).abs() < 1e-11, "a={alpha} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn laguerre_sixty_four_integrates_laguerre_products() {
        // orthogonality of L_n^α under the weight, n up to 63
        let alpha = 1.9;
        let rule = make_quadrature(QuadratureKind::GaussLaguerre { alpha }, 64).unwrap();
        for (n, m) in [(0usize, 0usize), (10, 10), (30, 30), (30, 33), (5, 40), (63, 0)] {
            let got = rule.integrate(|x| {
                crate::specfun::gen_laguerre(n, alpha, x) * crate::specfun::gen_laguerre(m, alpha, x)
            });
            let want = if n == m {
                gamma_fn(n as f64 + alpha + 1.0).unwrap() / factorial(n as u32)
            } else {
                0.0
            };
            let scale = (gamma_fn(n as f64 + alpha + 1.0).unwrap() / factorial(n as u32))
                .max(gamma_fn(m as f64 + alpha + 1.0).unwrap() / factorial(m as u32));
            assert!((got - want).abs() < 1e-10 * scale, "n={n} m={m}: {got} vs {want}");
        }
    }

    proptest! {
        #[test]
        fn weights_sum_to_mass(n in 1usize..80, alpha in -0.9f64..6.0) {
            let rule = make_quadrature(QuadratureKind::GaussLaguerre { alpha }, n).unwrap();
            let mass = gamma_fn(alpha + 1.0).unwrap();
            prop_assert!((rule.weights.iter().sum::<f64>() - mass).abs() < 1e-12 * mass);
            prop_assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
            let leg = make_quadrature(QuadratureKind::GaussLegendre, n).unwrap();
            prop_assert!((leg.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for (x, xr) in leg.nodes.iter().zip(leg.nodes.iter().rev()) {
                prop_assert!((x + xr).abs() < 1e-14);
            }
        }
    }
}
