//! Constant-coefficient symmetric linear system, used for manufactured
//! solutions and for exercising degenerate cases (zero relative flux, zero
//! genuine nonlinearity).

use super::SystemModel;
use crate::error::{CoreError, Result};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct LinearModel {
    a: [f64; 4],
    b: [f64; 4],
    speed: f64,
    diff: f64,
}

/// f(U) = A U with A symmetric (so eta = |U|^2/2 is a compatible entropy),
/// viscosity a constant SPD matrix.
pub fn make_linear_model(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> Result<LinearModel> {
    if (a[0][1] - a[1][0]).abs() > 1e-14 {
        return Err(CoreError::InvalidConfig("linear flux matrix must be symmetric".into()));
    }
    let bm = nalgebra::Matrix2::new(b[0][0], b[0][1], b[1][0], b[1][1]);
    if (0.5 * (bm + bm.transpose())).cholesky().is_none() {
        return Err(CoreError::NotPositiveDefinite("linear viscosity matrix".into()));
    }
    let am = nalgebra::Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1]);
    let speed = am.symmetric_eigenvalues().iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let diff = bm.norm();
    Ok(LinearModel {
        a: [a[0][0], a[0][1], a[1][0], a[1][1]],
        b: [b[0][0], b[0][1], b[1][0], b[1][1]],
        speed,
        diff,
    })
}

impl SystemModel for LinearModel {
    fn n(&self) -> usize {
        2
    }
    fn d(&self) -> usize {
        1
    }
    fn name(&self) -> &'static str {
        "linear"
    }
    fn is_admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite())
    }
    fn flux(&self, _axis: usize, u: &[f64], out: &mut [f64]) {
        out[0] = self.a[0] * u[0] + self.a[1] * u[1];
        out[1] = self.a[2] * u[0] + self.a[3] * u[1];
    }
    fn flux_jacobian(&self, _axis: usize, _u: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.a);
    }
    fn viscosity(&self, _axis: usize, _u: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.b);
    }
    fn entropy(&self, u: &[f64]) -> f64 {
        0.5 * (u[0] * u[0] + u[1] * u[1])
    }
    fn entropy_gradient(&self, u: &[f64], out: &mut [f64]) {
        out.copy_from_slice(u);
    }
    fn entropy_hessian(&self, _u: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
    }
    fn entropy_flux(&self, _axis: usize, u: &[f64]) -> f64 {
        // q = U . A U / 2
        0.5 * (u[0] * (self.a[0] * u[0] + self.a[1] * u[1]) + u[1] * (self.a[2] * u[0] + self.a[3] * u[1]))
    }
    fn wave_speed_bound(&self, _axis: usize, _u: &[f64]) -> f64 {
        self.speed
    }
    fn diffusion_bound(&self, _u: &[f64]) -> f64 {
        self.diff
    }
    fn sample_admissible(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]
    }
}
