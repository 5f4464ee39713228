//! Least-squares fits used by the decay and interaction diagnostics.

/// Result of an ordinary least-squares line fit.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fit y = slope * x + intercept, reporting the coefficient of determination.
pub fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(x.len() >= 2);
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - slope * xi - intercept;
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LineFit { slope, intercept, r2 }
}

/// Fit of v(t) = A exp(-rate * t) through a log-linear regression.
///
/// Only strictly positive samples participate; the caller gets the number
/// of usable points back so degenerate fits can be rejected.
#[derive(Debug, Clone, Copy)]
pub struct ExpDecayFit {
    pub rate: f64,
    pub amplitude: f64,
    pub r2: f64,
    pub used: usize,
}

pub fn exp_decay_fit(t: &[f64], v: &[f64]) -> ExpDecayFit {
    let mut ts = Vec::new();
    let mut ls = Vec::new();
    for (&ti, &vi) in t.iter().zip(v) {
        if vi > 0.0 && vi.is_finite() {
            ts.push(ti);
            ls.push(vi.ln());
        }
    }
    if ts.len() < 2 {
        return ExpDecayFit { rate: f64::NAN, amplitude: f64::NAN, r2: 0.0, used: ts.len() };
    }
    let lf = line_fit(&ts, &ls);
    ExpDecayFit { rate: -lf.slope, amplitude: lf.intercept.exp(), r2: lf.r2, used: ts.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exponential() {
        let t: Vec<f64> = (0..20).map(|i| i as f64 * 5.0).collect();
        let v: Vec<f64> = t.iter().map(|&ti| 3.0 * (-0.17 * ti).exp()).collect();
        let fit = exp_decay_fit(&t, &v);
        assert!((fit.rate - 0.17).abs() < 1e-12);
        assert!((fit.amplitude - 3.0).abs() < 1e-10);
        assert!(fit.r2 > 0.999999);
    }
}
