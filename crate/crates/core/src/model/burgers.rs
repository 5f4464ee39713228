//! Scalar viscous Burgers: the n = 1 sanity instance where every structural
//! condition holds in closed form.

use super::SystemModel;
use rand::Rng;

#[derive(Debug, Clone, Copy, Default)]
pub struct BurgersModel;

pub fn make_burgers_model() -> BurgersModel {
    BurgersModel
}

impl SystemModel for BurgersModel {
    fn n(&self) -> usize {
        1
    }
    fn d(&self) -> usize {
        1
    }
    fn name(&self) -> &'static str {
        "burgers"
    }
    fn is_admissible(&self, u: &[f64]) -> bool {
        u[0].is_finite()
    }
    fn flux(&self, _axis: usize, u: &[f64], out: &mut [f64]) {
        out[0] = 0.5 * u[0] * u[0];
    }
    fn flux_jacobian(&self, _axis: usize, u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
    }
    fn viscosity(&self, _axis: usize, _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn entropy(&self, u: &[f64]) -> f64 {
        0.5 * u[0] * u[0]
    }
    fn entropy_gradient(&self, u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
    }
    fn entropy_hessian(&self, _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn entropy_flux(&self, _axis: usize, u: &[f64]) -> f64 {
        u[0] * u[0] * u[0] / 3.0
    }
    fn wave_speed_bound(&self, _axis: usize, u: &[f64]) -> f64 {
        u[0].abs()
    }
    fn diffusion_bound(&self, _u: &[f64]) -> f64 {
        1.0
    }
    fn sample_admissible(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        vec![rng.gen_range(-2.0..2.0)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_gradient_is_identity() {
        let m = make_burgers_model();
        let mut g = [0.0];
        for u in [-1.5, 0.0, 0.3, 2.0] {
            m.entropy_gradient(&[u], &mut g);
            assert_eq!(g[0], u);
        }
    }

    #[test]
    fn viscosity_is_unit_and_positive() {
        let m = make_burgers_model();
        let mut b = [0.0];
        m.viscosity(0, &[0.7], &mut b);
        assert_eq!(b[0], 1.0);
    }
}
