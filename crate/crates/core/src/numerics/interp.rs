//! Cubic Hermite interpolation with stored slopes.
//!
//! Profiles and curve maps are tabulated together with exact tangents from
//! the ODE right-hand side, so Hermite interpolation gives O(h^4) values and
//! O(h^3) derivatives without refitting splines.

/// Hermite evaluation on one interval. `t` in [0,1], `h` the interval width.
#[inline]
pub fn hermite_value(y0: f64, m0: f64, y1: f64, m1: f64, h: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1
}

/// Derivative of the Hermite interpolant with respect to x.
#[inline]
pub fn hermite_deriv(y0: f64, m0: f64, y1: f64, m1: f64, h: f64, t: f64) -> f64 {
    let t2 = t * t;
    ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * m1)
        / h
}

/// Multi-component Hermite table on strictly increasing, possibly non-uniform
/// nodes. Values and slopes are stored row-major: node k occupies
/// `[k*ncomp, (k+1)*ncomp)`.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    pub xs: Vec<f64>,
    pub ncomp: usize,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl HermiteTable {
    pub fn new(xs: Vec<f64>, ncomp: usize, values: Vec<f64>, slopes: Vec<f64>) -> Self {
        assert!(xs.len() >= 2);
        assert_eq!(values.len(), xs.len() * ncomp);
        assert_eq!(slopes.len(), xs.len() * ncomp);
        debug_assert!(xs.windows(2).all(|w| w[1] > w[0]), "nodes must increase");
        Self { xs, ncomp, values, slopes }
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn interval(&self, x: f64) -> usize {
        // rightmost k with xs[k] <= x, clamped to a valid interval
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(k) => k.min(self.xs.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        for c in 0..self.ncomp {
            out[c] = hermite_value(
                self.values[k * self.ncomp + c],
                self.slopes[k * self.ncomp + c],
                self.values[(k + 1) * self.ncomp + c],
                self.slopes[(k + 1) * self.ncomp + c],
                h,
                t,
            );
        }
    }

    pub fn eval_deriv_into(&self, x: f64, out: &mut [f64]) {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        for c in 0..self.ncomp {
            out[c] = hermite_deriv(
                self.values[k * self.ncomp + c],
                self.slopes[k * self.ncomp + c],
                self.values[(k + 1) * self.ncomp + c],
                self.slopes[(k + 1) * self.ncomp + c],
                h,
                t,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let n = 200;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = xs.iter().map(|&x| (2.0 * x).sin()).collect();
        let slopes: Vec<f64> = xs.iter().map(|&x| 2.0 * (2.0 * x).cos()).collect();
        let tab = HermiteTable::new(xs, 1, values, slopes);
        let mut out = [0.0];
        for i in 0..500 {
            let x = 0.001 + i as f64 * 0.0039;
            tab.eval_into(x, &mut out);
            assert!((out[0] - (2.0 * x).sin()).abs() < 1e-9);
            tab.eval_deriv_into(x, &mut out);
            assert!((out[0] - 2.0 * (2.0 * x).cos()).abs() < 1e-6);
        }
    }
}
