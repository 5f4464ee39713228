//! Explicit ODE integrators: adaptive Dormand-Prince 5(4) for profile and
//! curve construction, fixed-step RK4 for order checks.

use crate::error::{CoreError, Result};
use nalgebra::DVector;

#[derive(Debug, Clone, Copy)]
pub struct Dp45Opts {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dp45Opts {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, h_init: 1e-4, h_max: 1e3, max_steps: 2_000_000 }
    }
}

/// One accepted node of an adaptive integration, with the RHS value at the node.
#[derive(Debug, Clone)]
pub struct OdeNode {
    pub t: f64,
    pub y: DVector<f64>,
    pub dy: DVector<f64>,
}

pub enum StepCtrl {
    Continue,
    Stop,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

struct Dp45<'a, F: Fn(&DVector<f64>) -> DVector<f64>> {
    f: &'a F,
    opts: Dp45Opts,
}

impl<'a, F: Fn(&DVector<f64>) -> DVector<f64>> Dp45<'a, F> {
    /// Attempt a step of size h. Returns (y_new, dy_new, scaled error norm).
    fn try_step(&self, y: &DVector<f64>, k1: &DVector<f64>, h: f64) -> (DVector<f64>, DVector<f64>, f64) {
        let f = self.f;
        let k2 = f(&(y + h * A21 * k1));
        let k3 = f(&(y + h * (A31 * k1 + A32 * &k2)));
        let k4 = f(&(y + h * (A41 * k1 + A42 * &k2 + A43 * &k3)));
        let k5 = f(&(y + h * (A51 * k1 + A52 * &k2 + A53 * &k3 + A54 * &k4)));
        let k6 = f(&(y + h * (A61 * k1 + A62 * &k2 + A63 * &k3 + A64 * &k4 + A65 * &k5)));
        let y_new = y + h * (B1 * k1 + B3 * &k3 + B4 * &k4 + B5 * &k5 + B6 * &k6);
        let k7 = f(&y_new);
        let err_vec = h * (E1 * k1 + E3 * &k3 + E4 * &k4 + E5 * &k5 + E6 * &k6 + E7 * &k7);
        // scale against the state norm rather than per component, so small
        // components passing through zero do not stall the step size
        let sc = self.opts.atol + self.opts.rtol * y.amax().max(y_new.amax());
        let mut acc = 0.0;
        for i in 0..y.len() {
            let r = err_vec[i] / sc;
            acc += r * r;
        }
        let err = (acc / y.len() as f64).sqrt();
        (y_new, k7, err)
    }
}

/// Integrate forward from (t0, y0), calling `ctrl` after every accepted step.
/// All accepted nodes (including the start) are returned.
pub fn integrate_adaptive<F>(
    f: F,
    y0: DVector<f64>,
    t0: f64,
    opts: Dp45Opts,
    mut ctrl: impl FnMut(&OdeNode) -> StepCtrl,
) -> Result<Vec<OdeNode>>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let stepper = Dp45 { f: &f, opts };
    let mut nodes = Vec::new();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(&y);
    nodes.push(OdeNode { t, y: y.clone(), dy: k1.clone() });
    if let StepCtrl::Stop = ctrl(&nodes[0]) {
        return Ok(nodes);
    }
    let mut h = opts.h_init.min(opts.h_max);
    for _ in 0..opts.max_steps {
        let (y_new, k7, err) = stepper.try_step(&y, &k1, h);
        if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
            t += h;
            y = y_new;
            k1 = k7;
            nodes.push(OdeNode { t, y: y.clone(), dy: k1.clone() });
            if let StepCtrl::Stop = ctrl(nodes.last().unwrap()) {
                return Ok(nodes);
            }
        } else if !y_new.iter().all(|v| v.is_finite()) {
            h *= 0.25;
            if h < 1e-300 {
                return Err(CoreError::OdeFailure("step size underflow on non-finite state".into()));
            }
            continue;
        }
        let fac = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h = (h * fac.clamp(0.2, 5.0)).min(opts.h_max);
        if h < 1e-300 {
            return Err(CoreError::OdeFailure("step size underflow".into()));
        }
    }
    Err(CoreError::OdeFailure(format!("no stop condition within {} steps", opts.max_steps)))
}

/// Integrate from (t0, y0) and record the solution exactly at each of the
/// strictly increasing `targets` (which must all be >= t0).
pub fn integrate_to_nodes<F>(
    f: F,
    y0: DVector<f64>,
    t0: f64,
    targets: &[f64],
    opts: Dp45Opts,
) -> Result<Vec<OdeNode>>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let stepper = Dp45 { f: &f, opts };
    let mut out = Vec::with_capacity(targets.len());
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(&y);
    let mut h = opts.h_init.min(opts.h_max);
    let mut steps = 0usize;
    for &target in targets {
        assert!(target >= t0 - 1e-14, "targets must lie ahead of t0");
        if (target - t).abs() <= 1e-14 * (1.0 + target.abs()) {
            out.push(OdeNode { t: target, y: y.clone(), dy: k1.clone() });
            continue;
        }
        loop {
            steps += 1;
            if steps > opts.max_steps {
                return Err(CoreError::OdeFailure("max step count exceeded".into()));
            }
            let mut h_try = h.min(target - t);
            let hit = h_try >= target - t - 1e-14 * (1.0 + target.abs());
            if hit {
                h_try = target - t;
            }
            let (y_new, k7, err) = stepper.try_step(&y, &k1, h_try);
            if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                t += h_try;
                y = y_new;
                k1 = k7;
                let fac = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
                h = (h * fac.clamp(0.2, 5.0)).min(opts.h_max);
                if hit {
                    t = target;
                    out.push(OdeNode { t, y: y.clone(), dy: k1.clone() });
                    break;
                }
            } else {
                let fac = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 0.25 };
                h = h_try * fac.clamp(0.1, 1.0);
                if h < 1e-300 {
                    return Err(CoreError::OdeFailure("step size underflow".into()));
                }
            }
        }
    }
    Ok(out)
}

/// Classical fixed-step RK4 over [t0, t1] with `nsteps` steps.
pub fn rk4_fixed<F>(f: F, y0: DVector<f64>, t0: f64, t1: f64, nsteps: usize) -> DVector<f64>
where
    F: Fn(f64, &DVector<f64>) -> DVector<f64>,
{
    let h = (t1 - t0) / nsteps as f64;
    let mut y = y0;
    let mut t = t0;
    for _ in 0..nsteps {
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &(&y + 0.5 * h * &k1));
        let k3 = f(t + 0.5 * h, &(&y + 0.5 * h * &k2));
        let k4 = f(t + h, &(&y + h * &k3));
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_matches_exponential() {
        let f = |y: &DVector<f64>| -2.0 * y;
        let y0 = DVector::from_vec(vec![1.0]);
        let nodes = integrate_adaptive(f, y0, 0.0, Dp45Opts::default(), |n| {
            if n.t >= 3.0 {
                StepCtrl::Stop
            } else {
                StepCtrl::Continue
            }
        })
        .unwrap();
        let last = nodes.last().unwrap();
        assert!((last.y[0] - (-2.0 * last.t).exp()).abs() < 1e-10);
    }

    #[test]
    fn node_targets_are_exact() {
        let f = |y: &DVector<f64>| DVector::from_vec(vec![y[1], -y[0]]);
        let y0 = DVector::from_vec(vec![0.0, 1.0]);
        let targets: Vec<f64> = (1..=10).map(|i| i as f64 * 0.7).collect();
        let nodes = integrate_to_nodes(f, y0, 0.0, &targets, Dp45Opts::default()).unwrap();
        for n in &nodes {
            assert!((n.y[0] - n.t.sin()).abs() < 1e-10, "t={} err={}", n.t, (n.y[0] - n.t.sin()).abs());
        }
    }

    #[test]
    fn rk4_is_fourth_order() {
        let f = |_t: f64, y: &DVector<f64>| DVector::from_vec(vec![y[0] * (1.0 - y[0])]);
        let exact = {
            let y0 = 0.1f64;
            let t = 2.0f64;
            y0 * t.exp() / (1.0 - y0 + y0 * t.exp())
        };
        let err = |n: usize| {
            (rk4_fixed(f, DVector::from_vec(vec![0.1]), 0.0, 2.0, n)[0] - exact).abs()
        };
        let order = (err(50) / err(100)).log2();
        assert!(order > 3.8, "observed order {order}");
    }
}
