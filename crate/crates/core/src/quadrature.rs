//! Deterministic area-uniform averaging over a disk.
//!
//! With `u = (r/R)²` the uniform measure on the disk becomes `du dφ / 2π` on
//! `[0,1] × [0,2π)`. `u` is integrated with Gauss–Legendre and `φ` with the
//! periodic trapezoid rule (nodes at `2πk/n`, the first on the +x axis).

use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Product rule with `radial` Gauss–Legendre nodes in `u` and `angular`
/// equally spaced nodes in angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiskQuadrature {
    pub radial: u32,
    pub angular: u32,
}

impl Default for DiskQuadrature {
    fn default() -> Self {
        DiskQuadrature {
            radial: 64,
            angular: 16,
        }
    }
}

impl DiskQuadrature {
    pub const fn new(radial: u32, angular: u32) -> Self {
        DiskQuadrature { radial, angular }
    }

    /// The one-node rule: `u = 1/2`, `φ = 0`.
    pub const fn single() -> Self {
        DiskQuadrature::new(1, 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial == 0 {
            return Err(Error::invalid(
                "radial",
                "quadrature needs at least one node",
            ));
        }
        if self.angular == 0 {
            return Err(Error::invalid(
                "angular",
                "quadrature needs at least one node",
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> u64 {
        u64::from(self.radial) * u64::from(self.angular)
    }

    /// Mean of `f(dx, dy)` over the disk of `radius` centered at the origin.
    pub fn mean<F>(&self, radius: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        self.validate()?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(
                "cell_radius_m",
                "must be positive and finite",
            ));
        }
        let n_ang = f64::from(self.angular);
        let mut total = 0.0;
        for i in 0..self.radial {
            let (x, w) = gauss_legendre_node(self.radial, i);
            let u = 0.5 * (x + 1.0);
            let r = radius * libm::sqrt(u);
            let mut ring = 0.0;
            for k in 0..self.angular {
                let phi = 2.0 * PI * f64::from(k) / n_ang;
                ring += f(r * libm::cos(phi), r * libm::sin(phi))?;
            }
            total += 0.5 * w * ring / n_ang;
        }
        Ok(total)
    }
}

/// Node `i` (ascending) and weight of the `n`-point Gauss–Legendre rule on
/// `[-1, 1]`.
pub fn gauss_legendre_node(n: u32, i: u32) -> (f64, f64) {
    debug_assert!(i < n);
    let nf = f64::from(n);
    // Roots come out descending from the cosine guess; flip to ascending.
    let k = n - 1 - i;
    let mut x = libm::cos(PI * (f64::from(k) + 0.75) / (nf + 0.5));
    let mut dp = 1.0;
    for _ in 0..100 {
        let (p, d) = legendre(n, x);
        dp = d;
        let dx = p / d;
        x -= dx;
        if dx.abs() < 1e-16 {
            break;
        }
    }
    let (_, d) = legendre(n, x);
    if d.is_finite() {
        dp = d;
    }
    (x, 2.0 / ((1.0 - x * x) * dp * dp))
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: u32, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = f64::from(j);
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = f64::from(n);
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 200] {
            let s: f64 = (0..n).map(|i| gauss_legendre_node(n, i).1).sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn known_nodes() {
        assert_eq!(gauss_legendre_node(1, 0), (0.0, 2.0));
        let (x0, w0) = gauss_legendre_node(2, 0);
        assert!((x0 + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w0 - 1.0).abs() < 1e-14);
        let (x, w) = gauss_legendre_node(3, 2);
        assert!((x - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((w - 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn nodes_ascending() {
        let n = 64;
        let xs: Vec<f64> = (0..n).map(|i| gauss_legendre_node(n, i).0).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exact_for_polynomials() {
        // ∫_{-1}^{1} x^{2k} dx = 2/(2k+1), exact up to degree 2n-1.
        let n = 8;
        for k in 0..8 {
            let s: f64 = (0..n)
                .map(|i| {
                    let (x, w) = gauss_legendre_node(n, i);
                    w * x.powi(2 * k)
                })
                .sum();
            assert!((s - 2.0 / f64::from(2 * k as u32 + 1)).abs() < 1e-13);
        }
    }

    #[test]
    fn disk_mean_of_constant_and_r_squared() {
        let q = DiskQuadrature::default();
        let c = q.mean(3.0, |_, _| Ok(0.25)).unwrap();
        assert!((c - 0.25).abs() < 1e-12);
        // mean of r² over a disk of radius R is R²/2
        let m = q.mean(3.0, |x, y| Ok(x * x + y * y)).unwrap();
        assert!((m - 4.5).abs() < 1e-12);
        // mean of x over the disk vanishes
        let mx = q.mean(3.0, |x, _| Ok(x)).unwrap();
        assert!(mx.abs() < 1e-12);
    }

    #[test]
    fn single_node_rule() {
        let q = DiskQuadrature::single();
        let v = q.mean(2.0, |x, y| Ok(x + 10.0 * y)).unwrap();
        assert!((v - 2.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_rule() {
        assert!(DiskQuadrature::new(0, 4).mean(1.0, |_, _| Ok(1.0)).is_err());
        assert!(DiskQuadrature::new(4, 0).mean(1.0, |_, _| Ok(1.0)).is_err());
        assert!(DiskQuadrature::default().mean(0.0, |_, _| Ok(1.0)).is_err());
    }
}
