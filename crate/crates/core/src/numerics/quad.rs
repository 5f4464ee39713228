//! Composite quadrature on uniform grids.

/// Composite trapezoid rule over samples spaced by `h`.
pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let mut s = 0.5 * (f[0] + f[n - 1]);
    for v in &f[1..n - 1] {
        s += v;
    }
    s * h
}

/// Composite Simpson rule; requires an odd number of samples.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    assert!(n >= 3 && n % 2 == 1, "simpson needs an odd sample count >= 3");
    let mut s = f[0] + f[n - 1];
    for i in 1..n - 1 {
        s += if i % 2 == 1 { 4.0 * f[i] } else { 2.0 * f[i] };
    }
    s * h / 3.0
}

/// Trapezoid rule on possibly non-uniform nodes.
pub fn trapezoid_nonuniform(x: &[f64], f: &[f64]) -> f64 {
    assert_eq!(x.len(), f.len());
    let mut s = 0.0;
    for i in 1..x.len() {
        s += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubic() {
        let n = 11;
        let h = 1.0 / (n - 1) as f64;
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                x.powi(3) - 2.0 * x + 1.0
            })
            .collect();
        // integral over [0,1] of x^3 - 2x + 1 = 1/4 - 1 + 1 = 1/4
        assert!((simpson(&f, h) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_second_order() {
        let exact = 1.0 - (1.0f64).cos();
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            (trapezoid(&f, h) - exact).abs()
        };
        assert!(err(101) / err(201) > 3.5);
    }
}
