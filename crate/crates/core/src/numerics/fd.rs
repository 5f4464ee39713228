//! Fourth-order finite-difference stencils on uniform grids.
//!
//! Interior nodes use central stencils; the two nodes nearest each boundary
//! use one-sided stencils of the same order. All diagnostic functionals share
//! these stencils so that discretization errors cancel in ratios.

/// First derivative, 4th order, one-sided at the boundary.
pub fn deriv1(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    assert!(n >= 5, "deriv1 needs at least 5 nodes");
    assert_eq!(out.len(), n);
    let c = 1.0 / (12.0 * h);
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    out[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    out[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
}

/// Second derivative, 4th order, one-sided at the boundary.
pub fn deriv2(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    assert!(n >= 6, "deriv2 needs at least 6 nodes");
    assert_eq!(out.len(), n);
    let c = 1.0 / (12.0 * h * h);
    out[0] = c * (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]);
    out[1] = c * (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]);
    for i in 2..n - 2 {
        out[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
    }
    out[n - 2] = c * (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] - 6.0 * f[n - 5] + f[n - 6]);
    out[n - 1] = c * (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] + 61.0 * f[n - 5] - 10.0 * f[n - 6]);
}

/// First derivative on a periodic grid (node n wraps to node 0), 4th order.
pub fn deriv1_periodic(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    assert!(n >= 5);
    assert_eq!(out.len(), n);
    let c = 1.0 / (12.0 * h);
    for i in 0..n {
        let im2 = (i + n - 2) % n;
        let im1 = (i + n - 1) % n;
        let ip1 = (i + 1) % n;
        let ip2 = (i + 2) % n;
        out[i] = c * (f[im2] - 8.0 * f[im1] + 8.0 * f[ip1] - f[ip2]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(g: impl Fn(f64) -> f64, x0: f64, h: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| g(x0 + i as f64 * h)).collect()
    }

    #[test]
    fn deriv1_exact_on_quartic() {
        let g = |x: f64| 1.0 + x - 2.0 * x.powi(2) + 0.5 * x.powi(3) + 0.25 * x.powi(4);
        let dg = |x: f64| 1.0 - 4.0 * x + 1.5 * x.powi(2) + x.powi(3);
        let (x0, h, n) = (-1.0, 0.1, 21);
        let f = sample(g, x0, h, n);
        let mut out = vec![0.0; n];
        deriv1(&f, h, &mut out);
        for i in 0..n {
            let x = x0 + i as f64 * h;
            assert!((out[i] - dg(x)).abs() < 1e-11, "node {i}: {} vs {}", out[i], dg(x));
        }
    }

    #[test]
    fn deriv2_exact_on_quartic() {
        let g = |x: f64| 2.0 - x + x.powi(2) - 0.3 * x.powi(3) + 0.7 * x.powi(4);
        let d2g = |x: f64| 2.0 - 1.8 * x + 8.4 * x.powi(2);
        let (x0, h, n) = (0.0, 0.05, 25);
        let f = sample(g, x0, h, n);
        let mut out = vec![0.0; n];
        deriv2(&f, h, &mut out);
        for i in 0..n {
            let x = x0 + i as f64 * h;
            assert!((out[i] - d2g(x)).abs() < 1e-9, "node {i}: {} vs {}", out[i], d2g(x));
        }
    }

    #[test]
    fn deriv1_fourth_order_on_sine() {
        let errs: Vec<f64> = [0.02, 0.01]
            .iter()
            .map(|&h| {
                let n = (1.0 / h) as usize + 1;
                let f = sample(|x| x.sin(), 0.0, h, n);
                let mut out = vec![0.0; n];
                deriv1(&f, h, &mut out);
                (0..n)
                    .map(|i| (out[i] - (i as f64 * h).cos()).abs())
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 3.7, "observed order {order}");
    }

    #[test]
    fn periodic_matches_interior() {
        let n = 64;
        let h = 1.0 / n as f64;
        let f: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 * h).sin())
            .collect();
        let mut out = vec![0.0; n];
        deriv1_periodic(&f, h, &mut out);
        for i in 0..n {
            let x = i as f64 * h;
            let exact = 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos();
            assert!((out[i] - exact).abs() < 2e-4);
        }
    }
}
