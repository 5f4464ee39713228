//! Smooth approximate planar n-rarefaction: the exact smooth Burgers solution
//! with tanh data drives the characteristic value, which the integral-curve
//! map lifts to states. The wave solves the inviscid system exactly and its
//! derivative norms decay with the rates the diagnostics check.

use crate::error::{CoreError, Result};
use crate::hugoniot::RarefactionCurve;
use crate::model::SystemModel;
use crate::numerics::{fit, quad};
use crate::shock_profile::{UniformGrid1, WaveKind, WaveProfile};
use nalgebra::DVector;

/// Exact smooth solution of Burgers' equation with initial data
/// (w_+ + w_m)/2 + (w_+ - w_m)/2 tanh(x).
#[derive(Debug, Clone, Copy)]
pub struct BurgersFan {
    pub w_minus: f64,
    pub w_plus: f64,
}

impl BurgersFan {
    pub fn new(w_minus: f64, w_plus: f64) -> Result<Self> {
        if w_plus < w_minus {
            return Err(CoreError::InvalidConfig(format!(
                "fan needs w_minus <= w_plus, got {w_minus} > {w_plus}"
            )));
        }
        Ok(Self { w_minus, w_plus })
    }

    #[inline]
    fn initial(&self, xi: f64) -> f64 {
        0.5 * (self.w_plus + self.w_minus) + 0.5 * (self.w_plus - self.w_minus) * xi.tanh()
    }

    #[inline]
    fn initial_slope(&self, xi: f64) -> f64 {
        let c = xi.cosh();
        0.5 * (self.w_plus - self.w_minus) / (c * c)
    }

    /// Solve the characteristic equation xi + w0(xi) t = x for the unique
    /// crossing (monotone data, t >= 0) and return w0(xi).
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        self.eval_with_slope(t, x).0
    }

    /// (w, dw/dx) at (t, x).
    pub fn eval_with_slope(&self, t: f64, x: f64) -> (f64, f64) {
        assert!(t >= 0.0, "fan evaluation needs t >= 0");
        if self.w_plus - self.w_minus < 1e-14 {
            return (self.w_minus, 0.0);
        }
        let mut lo = x - self.w_plus * t - 1.0;
        let mut hi = x - self.w_minus * t + 1.0;
        let mut xi = (x - 0.5 * (self.w_plus + self.w_minus) * t).clamp(lo, hi);
        let tol = 1e-12 * (1.0 + x.abs());
        for _ in 0..200 {
            let g = xi + self.initial(xi) * t - x;
            if g.abs() <= tol {
                break;
            }
            if g > 0.0 {
                hi = xi;
            } else {
                lo = xi;
            }
            let dg = 1.0 + self.initial_slope(xi) * t;
            let newton = xi - g / dg;
            xi = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        let s = self.initial_slope(xi);
        (self.initial(xi), s / (1.0 + s * t))
    }
}

/// Characteristic solve at (t, x); thin wrapper kept for call-site symmetry
/// with the other wave constructors.
pub fn burgers_eval(fan: &BurgersFan, t: f64, x: f64) -> f64 {
    fan.eval(t, x)
}

/// The smooth approximate planar n-rarefaction: fan in the characteristic
/// value, integral-curve map in state space, evaluated at w(1 + t, x1).
#[derive(Debug, Clone)]
pub struct RarefactionWave {
    pub fan: BurgersFan,
    pub curve: RarefactionCurve,
}

impl RarefactionWave {
    pub fn new(curve: RarefactionCurve) -> Result<Self> {
        let fan = BurgersFan::new(curve.lambda_middle, curve.lambda_plus)?;
        Ok(Self { fan, curve })
    }

    pub fn strength(&self) -> f64 {
        self.curve.strength
    }

    pub fn u_middle(&self) -> &DVector<f64> {
        &self.curve.u_middle
    }

    pub fn u_plus(&self) -> &DVector<f64> {
        &self.curve.u_plus
    }

    pub fn eval_into(&self, t: f64, x1: f64, out: &mut [f64]) {
        let s = self.fan.eval(1.0 + t, x1);
        self.curve
            .state_at_lambda(s, out)
            .expect("fan output stays inside the curve's characteristic range");
    }

    pub fn deriv_x_into(&self, t: f64, x1: f64, out: &mut [f64]) {
        let (s, wx) = self.fan.eval_with_slope(1.0 + t, x1);
        self.curve
            .dstate_dlambda(s, out)
            .expect("fan output stays inside the curve's characteristic range");
        for v in out.iter_mut() {
            *v *= wx;
        }
    }

    /// Layer coordinate k = -(R - U_m) . l_n / delta_R.
    pub fn k(&self, t: f64, x1: f64) -> f64 {
        let n = self.curve.u_middle.len();
        let mut buf = [0.0; 4];
        self.eval_into(t, x1, &mut buf[..n]);
        let mut k = 0.0;
        for c in 0..n {
            k += -(buf[c] - self.curve.u_middle[c]) * self.curve.l_n[c] / self.curve.strength;
        }
        k.clamp(0.0, 1.0)
    }

    pub fn dk_dx(&self, t: f64, x1: f64) -> f64 {
        let n = self.curve.u_middle.len();
        let mut buf = [0.0; 4];
        self.deriv_x_into(t, x1, &mut buf[..n]);
        let mut dk = 0.0;
        for c in 0..n {
            dk += -buf[c] * self.curve.l_n[c] / self.curve.strength;
        }
        dk
    }
}

/// Sample the rarefaction at a fixed time onto a grid, as a WaveProfile
/// snapshot (speed 0, time label carried).
pub fn build_rarefaction(wave: &RarefactionWave, t: f64, grid: UniformGrid1) -> Result<WaveProfile> {
    let n = wave.curve.u_middle.len();
    let mut states = vec![0.0; grid.len * n];
    let mut dstates = vec![0.0; grid.len * n];
    let mut k = vec![0.0; grid.len];
    let mut buf = vec![0.0; n];
    for j in 0..grid.len {
        let x = grid.x(j);
        wave.eval_into(t, x, &mut buf);
        states[j * n..(j + 1) * n].copy_from_slice(&buf);
        wave.deriv_x_into(t, x, &mut buf);
        dstates[j * n..(j + 1) * n].copy_from_slice(&buf);
        k[j] = wave.k(t, x);
    }
    let l_over_delta = -&wave.curve.l_n / wave.curve.strength;
    Ok(WaveProfile {
        kind: WaveKind::RarefactionSnapshot,
        family: n,
        u_left: wave.curve.u_middle.clone(),
        u_right: wave.curve.u_plus.clone(),
        speed: 0.0,
        strength: wave.curve.strength,
        snapshot_time: Some(t),
        grid,
        states,
        dstates,
        k,
        l_over_delta,
        // the smoothed fan tails decay like exp(-2 |x - lambda (1+t)|)
        tail_rate_left: 2.0,
        tail_rate_right: 2.0,
    })
}

/// Natural spatial window for decay studies at time t: the fan support
/// padded by 30 units on each side.
pub fn decay_window(wave: &RarefactionWave, t: f64) -> (f64, f64) {
    (
        wave.fan.w_minus * (1.0 + t) - 30.0,
        wave.fan.w_plus * (1.0 + t) + 30.0,
    )
}

#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub p: f64,
    pub slope: f64,
    pub r2: f64,
}

/// Decay report: fitted log ||dR/dx||_{L^p} vs log(1+t) slopes, the
/// saturation time of the min{delta, ...} envelope, and the fitted
/// tail-exponential constants.
#[derive(Debug, Clone)]
pub struct RarefactionDecayReport {
    pub slopes: Vec<SlopeFit>,
    pub saturation_time: f64,
    pub tail_constant_left: f64,
    pub tail_constant_right: f64,
}

/// ||dR/dx(t)||_{L^p} (p = infinity for p <= 0) on the padded window.
pub fn deriv_norm(wave: &RarefactionWave, t: f64, p: f64, dx: f64) -> f64 {
    let (lo, hi) = decay_window(wave, t);
    let len = ((hi - lo) / dx).ceil() as usize + 1;
    let n = wave.curve.u_middle.len();
    let mut buf = vec![0.0; n];
    if p <= 0.0 {
        let mut worst = 0.0f64;
        for j in 0..len {
            wave.deriv_x_into(t, lo + j as f64 * dx, &mut buf);
            let mag = buf.iter().map(|v| v * v).sum::<f64>().sqrt();
            worst = worst.max(mag);
        }
        worst
    } else {
        let mut vals = Vec::with_capacity(len);
        for j in 0..len {
            wave.deriv_x_into(t, lo + j as f64 * dx, &mut buf);
            let mag = buf.iter().map(|v| v * v).sum::<f64>().sqrt();
            vals.push(mag.powf(p));
        }
        quad::trapezoid(&vals, dx).powf(1.0 / p)
    }
}

pub fn verify_rarefaction_decay(
    wave: &RarefactionWave,
    times: &[f64],
    ps: &[f64],
    dx: f64,
) -> Result<RarefactionDecayReport> {
    if times.len() < 3 {
        return Err(CoreError::InvalidConfig("need at least 3 times for decay fits".into()));
    }
    let mut slopes = Vec::new();
    for &p in ps {
        let logs_t: Vec<f64> = times.iter().map(|&t| (1.0 + t).ln()).collect();
        let mut logs_n = Vec::new();
        for &t in times {
            let v = deriv_norm(wave, t, p, dx);
            if v <= 0.0 {
                return Err(CoreError::InvalidConfig(
                    "window too narrow: derivative norm vanished".into(),
                ));
            }
            logs_n.push(v.ln());
        }
        let lf = fit::line_fit(&logs_t, &logs_n);
        slopes.push(SlopeFit { p, slope: lf.slope, r2: lf.r2 });
    }

    // boundary-derivative magnitude sentinel: if the fan has reached the
    // window edge the norms are garbage
    let n = wave.curve.u_middle.len();
    let mut buf = vec![0.0; n];
    for &t in times {
        let (lo, hi) = decay_window(wave, t);
        for x in [lo, hi] {
            wave.deriv_x_into(t, x, &mut buf);
            let mag = buf.iter().map(|v| v * v).sum::<f64>().sqrt();
            if mag > 1e-8 * wave.strength() {
                return Err(CoreError::InvalidConfig(format!(
                    "decay window too narrow at t = {t}: boundary derivative {mag:.3e}"
                )));
            }
        }
    }

    // tail-exponential constants of the far-field bounds at the final time
    let t = *times.last().unwrap();
    let (mut c_left, mut c_right) = (0.0f64, 0.0f64);
    let lam_m = wave.fan.w_minus;
    let lam_p = wave.fan.w_plus;
    let delta = wave.strength();
    let mut state = vec![0.0; n];
    for j in 0..200 {
        let off = j as f64 * 0.1;
        let xl = lam_m * t - off;
        wave.eval_into(t, xl, &mut state);
        let dev = (0..n)
            .map(|c| (state[c] - wave.curve.u_middle[c]).powi(2))
            .sum::<f64>()
            .sqrt();
        c_left = c_left.max(dev * (2.0 * (xl - lam_m * t).abs()).exp() / delta);
        let xr = lam_p * t + off;
        wave.eval_into(t, xr, &mut state);
        let dev = (0..n)
            .map(|c| (state[c] - wave.curve.u_plus[c]).powi(2))
            .sum::<f64>()
            .sqrt();
        c_right = c_right.max(dev * (2.0 * (xr - lam_p * t).abs()).exp() / delta);
    }

    Ok(RarefactionDecayReport {
        slopes,
        saturation_time: 1.0 / delta - 1.0,
        tail_constant_left: c_left,
        tail_constant_right: c_right,
    })
}

/// Quadrature of integral_0^T ||dR/dx||_{L^4}^4 dt on a stretched time grid.
pub fn l4_time_integral(wave: &RarefactionWave, t_max: f64, dx: f64) -> f64 {
    let mut ts = vec![0.0];
    let mut t = 0.05;
    while t < t_max {
        ts.push(t);
        t *= 1.3;
    }
    ts.push(t_max);
    let vals: Vec<f64> = ts.iter().map(|&t| deriv_norm(wave, t, 4.0, dx).powi(4)).collect();
    quad::trapezoid_nonuniform(&ts, &vals)
}

/// Discrete residual of dR/dt + d f(R)/dx at one spacetime point, central
/// differences of steps (dt, dx); the wave solves the inviscid system so the
/// residual refines to zero at second order.
pub fn inviscid_residual<M: SystemModel + ?Sized>(
    model: &M,
    wave: &RarefactionWave,
    t: f64,
    x: f64,
    dt: f64,
    dx: f64,
) -> f64 {
    let n = model.n();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut fa = vec![0.0; n];
    let mut fb = vec![0.0; n];
    wave.eval_into(t + dt, x, &mut a);
    wave.eval_into(t - dt, x, &mut b);
    let mut worst = 0.0f64;
    let mut sa = vec![0.0; n];
    let mut sb = vec![0.0; n];
    wave.eval_into(t, x + dx, &mut sa);
    wave.eval_into(t, x - dx, &mut sb);
    model.flux(0, &sa, &mut fa);
    model.flux(0, &sb, &mut fb);
    for c in 0..n {
        let r = (a[c] - b[c]) / (2.0 * dt) + (fa[c] - fb[c]) / (2.0 * dx);
        worst = worst.max(r.abs());
    }
    worst
}
