//! Five-point central differences.

use num_complex::Complex64;

/// Step used for ϑ derivatives of single spinors.
pub const DEFAULT_ANGLE_STEP: f64 = 1e-4;

/// First derivative of a vector-valued function, error O(h⁴).
pub fn d1<const N: usize, F>(mut f: F, x: f64, h: f64) -> [Complex64; N]
where
    F: FnMut(f64) -> [Complex64; N],
{
    let m2 = f(x - 2.0 * h);
    let m1 = f(x - h);
    let p1 = f(x + h);
    let p2 = f(x + 2.0 * h);
    let inv = 1.0 / (12.0 * h);
    core::array::from_fn(|k| (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) * inv)
}

/// Weights `c_k` of the eighth-order central first derivative,
/// `f'(x) ≈ Σ_k c_k (f(x+kh) − f(x−kh)) / h` for `k = 1..=4`.
pub const CENTRAL8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Half-width of the [`CENTRAL8`] stencil.
pub const CENTRAL8_HALF: usize = 4;

/// Nine-point first derivative, error O(h⁸).
pub fn d1_wide<const N: usize, F>(mut f: F, x: f64, h: f64) -> [Complex64; N]
where
    F: FnMut(f64) -> [Complex64; N],
{
    let mut acc = [Complex64::new(0.0, 0.0); N];
    for (k, c) in CENTRAL8.iter().enumerate() {
        let d = (k + 1) as f64 * h;
        let p = f(x + d);
        let m = f(x - d);
        for i in 0..N {
            acc[i] += (p[i] - m[i]) * *c;
        }
    }
    acc.map(|z| z / h)
}

/// Scalar version of [`d1`].
pub fn d1_real<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics() {
        let f = |x: f64| 3.0 * x.powi(4) - x.powi(3) + 2.0 * x - 5.0;
        let df = |x: f64| 12.0 * x.powi(3) - 3.0 * x * x + 2.0;
        for &x in &[-1.3, 0.0, 0.7, 2.5] {
            assert!((d1_real(f, x, 0.1) - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn complex_components_independent() {
        let d = d1(
            |x| [Complex64::new(x.sin(), x.cos()), Complex64::new(x * x, 0.0)],
            0.4,
            1e-3,
        );
        assert!((d[0] - Complex64::new(0.4f64.cos(), -0.4f64.sin())).norm() < 1e-11);
        assert!((d[1] - Complex64::new(0.8, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn wide_stencil_exact_on_octics() {
        let f = |x: f64| [Complex64::new(x.powi(8) - 2.0 * x.powi(5), x.powi(7))];
        let x = 0.6f64;
        let d = d1_wide(f, x, 0.1);
        let want = Complex64::new(8.0 * x.powi(7) - 10.0 * x.powi(4), 7.0 * x.powi(6));
        assert!((d[0] - want).norm() < 1e-11);
        let sum: f64 = CENTRAL8.iter().enumerate().map(|(k, c)| c * (k + 1) as f64).sum();
        assert!((2.0 * sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |h: f64| (d1_real(f64::exp, 1.0, h) - 1.0f64.exp()).abs();
        let ratio = err(0.1) / err(0.05);
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }
}
