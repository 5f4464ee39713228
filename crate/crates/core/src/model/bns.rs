//! Barotropic Brenner-Navier-Stokes in entropy form.
//!
//! Conserved variables U = (rho, rho u). The mass equation carries the
//! Brenner mass diffusion, so the viscosity matrix has the rank-structured
//! form [[1, u^T], [u, u (x) u + nu I]] in every direction, with determinant
//! nu^d.

use super::SystemModel;
use crate::error::{CoreError, Result};
use nalgebra::DMatrix;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct BnsParameters {
    /// Viscosity coefficient, > 0.
    pub nu: f64,
    /// Adiabatic exponent, > 1.
    pub gamma_ad: f64,
    /// Spatial dimension (1 or 2 for simulation use).
    pub d: usize,
    /// Vacuum guard: the phase space is {rho > rho_min}.
    pub rho_min: f64,
}

impl Default for BnsParameters {
    fn default() -> Self {
        Self { nu: 0.1, gamma_ad: 2.0, d: 1, rho_min: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BnsModel {
    nu: f64,
    gamma: f64,
    d: usize,
    rho_min: f64,
}

pub fn make_bns_model(p: BnsParameters) -> Result<BnsModel> {
    if !(p.nu > 0.0) {
        return Err(CoreError::InvalidConfig(format!("nu must be positive, got {}", p.nu)));
    }
    if !(p.gamma_ad > 1.0) {
        return Err(CoreError::InvalidConfig(format!("gamma_ad must exceed 1, got {}", p.gamma_ad)));
    }
    if p.d == 0 || p.d > 2 {
        return Err(CoreError::InvalidConfig(format!("simulation dimension must be 1 or 2, got {}", p.d)));
    }
    if !(p.rho_min > 0.0) {
        return Err(CoreError::InvalidConfig("rho_min must be positive".into()));
    }
    Ok(BnsModel { nu: p.nu, gamma: p.gamma_ad, d: p.d, rho_min: p.rho_min })
}

/// The Appendix viscosity matrix for a velocity vector of any dimension,
/// [[1, u^T], [u, u (x) u + nu I]].
pub fn bns_viscosity_matrix(u_vel: &[f64], nu: f64) -> DMatrix<f64> {
    let d = u_vel.len();
    let n = d + 1;
    let mut b = DMatrix::zeros(n, n);
    b[(0, 0)] = 1.0;
    for i in 0..d {
        b[(0, 1 + i)] = u_vel[i];
        b[(1 + i, 0)] = u_vel[i];
        for j in 0..d {
            b[(1 + i, 1 + j)] = u_vel[i] * u_vel[j] + if i == j { nu } else { 0.0 };
        }
    }
    b
}

impl BnsModel {
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn gamma_ad(&self) -> f64 {
        self.gamma
    }
    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }

    #[inline]
    fn pressure(&self, rho: f64) -> f64 {
        rho.powf(self.gamma)
    }
    /// Q(rho) = rho^gamma / (gamma - 1)
    #[inline]
    fn q(&self, rho: f64) -> f64 {
        rho.powf(self.gamma) / (self.gamma - 1.0)
    }
    #[inline]
    fn q_prime(&self, rho: f64) -> f64 {
        self.gamma * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
    }
    #[inline]
    fn q_second(&self, rho: f64) -> f64 {
        self.gamma * rho.powf(self.gamma - 2.0)
    }
    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        (self.gamma * rho.powf(self.gamma - 1.0)).sqrt()
    }

    /// Conserved state from primitive (rho, velocity).
    pub fn state(&self, rho: f64, vel: &[f64]) -> Vec<f64> {
        assert_eq!(vel.len(), self.d);
        let mut u = vec![rho];
        u.extend(vel.iter().map(|v| rho * v));
        u
    }

    /// n-Riemann invariant u_1 - 2 c / (gamma - 1), constant across the
    /// n-rarefaction of isentropic gas dynamics (transverse velocity is the
    /// other invariant in 2-D).
    pub fn riemann_invariant_n(&self, u: &[f64]) -> f64 {
        let rho = u[0];
        u[1] / rho - 2.0 * self.sound_speed(rho) / (self.gamma - 1.0)
    }
}

impl SystemModel for BnsModel {
    fn n(&self) -> usize {
        self.d + 1
    }
    fn d(&self) -> usize {
        self.d
    }
    fn name(&self) -> &'static str {
        "bns"
    }

    fn is_admissible(&self, u: &[f64]) -> bool {
        u[0] > self.rho_min && u.iter().all(|v| v.is_finite())
    }

    fn flux(&self, axis: usize, u: &[f64], out: &mut [f64]) {
        let d = self.d;
        debug_assert!(axis < d);
        let rho = u[0];
        let ma = u[1 + axis];
        out[0] = ma;
        for i in 0..d {
            out[1 + i] = ma * u[1 + i] / rho;
        }
        out[1 + axis] += self.pressure(rho);
    }

    fn flux_jacobian(&self, axis: usize, u: &[f64], out: &mut [f64]) {
        let d = self.d;
        let n = d + 1;
        let rho = u[0];
        let ma = u[1 + axis];
        let c2 = self.gamma * rho.powf(self.gamma - 1.0);
        for v in out.iter_mut() {
            *v = 0.0;
        }
        out[1 + axis] = 1.0; // row 0
        for i in 0..d {
            let mi = u[1 + i];
            let row = 1 + i;
            out[row * n] = -ma * mi / (rho * rho) + if i == axis { c2 } else { 0.0 };
            for j in 0..d {
                let col = 1 + j;
                let mut v = 0.0;
                if j == axis {
                    v += mi / rho;
                }
                if j == i {
                    v += ma / rho;
                }
                out[row * n + col] = v;
            }
        }
    }

    fn viscosity(&self, _axis: usize, u: &[f64], out: &mut [f64]) {
        let d = self.d;
        let n = d + 1;
        let rho = u[0];
        out[0] = 1.0;
        for i in 0..d {
            let ui = u[1 + i] / rho;
            out[1 + i] = ui;
            out[(1 + i) * n] = ui;
            for j in 0..d {
                let uj = u[1 + j] / rho;
                out[(1 + i) * n + (1 + j)] = ui * uj + if i == j { self.nu } else { 0.0 };
            }
        }
    }

    fn entropy(&self, u: &[f64]) -> f64 {
        let rho = u[0];
        let m2: f64 = u[1..].iter().map(|m| m * m).sum();
        m2 / (2.0 * rho) + self.q(rho)
    }

    fn entropy_gradient(&self, u: &[f64], out: &mut [f64]) {
        let rho = u[0];
        let m2: f64 = u[1..].iter().map(|m| m * m).sum();
        out[0] = -m2 / (2.0 * rho * rho) + self.q_prime(rho);
        for i in 0..self.d {
            out[1 + i] = u[1 + i] / rho;
        }
    }

    fn entropy_hessian(&self, u: &[f64], out: &mut [f64]) {
        let d = self.d;
        let n = d + 1;
        let rho = u[0];
        let m2: f64 = u[1..].iter().map(|m| m * m).sum();
        out[0] = m2 / (rho * rho * rho) + self.q_second(rho);
        for i in 0..d {
            let v = -u[1 + i] / (rho * rho);
            out[1 + i] = v;
            out[(1 + i) * n] = v;
            for j in 0..d {
                out[(1 + i) * n + (1 + j)] = if i == j { 1.0 / rho } else { 0.0 };
            }
        }
    }

    fn entropy_flux(&self, axis: usize, u: &[f64]) -> f64 {
        let rho = u[0];
        let ua = u[1 + axis] / rho;
        ua * (self.entropy(u) + self.pressure(rho))
    }

    fn wave_speed_bound(&self, axis: usize, u: &[f64]) -> f64 {
        let rho = u[0];
        (u[1 + axis] / rho).abs() + self.sound_speed(rho)
    }

    fn diffusion_bound(&self, u: &[f64]) -> f64 {
        let n = self.n();
        let mut b = [0.0; 16];
        let mut h = [0.0; 16];
        self.viscosity(0, u, &mut b[..n * n]);
        self.entropy_hessian(u, &mut h[..n * n]);
        crate::linalg::product_inf_norm(&b[..n * n], &h[..n * n], n)
    }

    fn sample_admissible(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        let rho = rng.gen_range(0.4..2.5);
        let vel: Vec<f64> = (0..self.d).map(|_| rng.gen_range(-0.8..0.8)).collect();
        self.state(rho, &vel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn appendix_matrix_at_rest_is_diagonal() {
        let b = bns_viscosity_matrix(&[0.0, 0.0, 0.0], 0.7);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j {
                    if i == 0 {
                        1.0
                    } else {
                        0.7
                    }
                } else {
                    0.0
                };
                assert_relative_eq!(b[(i, j)], want);
            }
        }
        assert_relative_eq!(b.determinant(), 0.7f64.powi(3), max_relative = 1e-12);
    }

    #[test]
    fn determinant_is_nu_pow_d() {
        // moving states, d = 1, 2, 3
        let b1 = bns_viscosity_matrix(&[0.3], 0.1);
        assert_relative_eq!(b1.determinant(), 0.1, max_relative = 1e-12);
        let b2 = bns_viscosity_matrix(&[0.3, -0.2], 0.1);
        assert_relative_eq!(b2.determinant(), 0.01, max_relative = 1e-10);
        let b3 = bns_viscosity_matrix(&[0.3, -0.2, 0.5], 0.1);
        assert_relative_eq!(b3.determinant(), 1e-3, max_relative = 1e-9);
    }

    #[test]
    fn model_matrix_matches_closed_form() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in [1usize, 2] {
            let m = make_bns_model(BnsParameters { d, ..Default::default() }).unwrap();
            let n = d + 1;
            for _ in 0..100 {
                let u = m.sample_admissible(&mut rng);
                let vel: Vec<f64> = (0..d).map(|i| u[1 + i] / u[0]).collect();
                let want = bns_viscosity_matrix(&vel, m.nu());
                let mut got = vec![0.0; n * n];
                m.viscosity(0, &u, &mut got);
                for i in 0..n {
                    for j in 0..n {
                        assert_relative_eq!(got[i * n + j], want[(i, j)], epsilon = 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_bns_model(BnsParameters { nu: 0.0, ..Default::default() }).is_err());
        assert!(make_bns_model(BnsParameters { gamma_ad: 1.0, ..Default::default() }).is_err());
        assert!(make_bns_model(BnsParameters { d: 3, ..Default::default() }).is_err());
    }

    #[test]
    fn vacuum_states_are_inadmissible() {
        let m = make_bns_model(BnsParameters::default()).unwrap();
        assert!(!m.is_admissible(&[0.0, 0.1]));
        assert!(!m.is_admissible(&[-1.0, 0.0]));
        assert!(m.is_admissible(&[1.0, 0.3]));
    }
}
