//! Viscous system instances: the generic evaluator interface plus the
//! Brenner-Navier-Stokes, scalar Burgers, and constant-coefficient linear
//! models.
//!
//! A model owns the tuple (n, d, f, g_j, B_j, eta, q_j) together with the
//! admissible phase space. All evaluators are pure functions of the state and
//! safe to call concurrently. Hot paths use slice-based signatures; the
//! allocating nalgebra wrappers are for construction-time algorithms.

mod bns;
mod burgers;
mod linear;
pub mod validate;

pub use bns::{bns_viscosity_matrix, make_bns_model, BnsModel, BnsParameters};
pub use burgers::{make_burgers_model, BurgersModel};
pub use linear::{make_linear_model, LinearModel};

use nalgebra::{DMatrix, DVector};

/// Evaluators defining one viscous system instance.
///
/// `axis` indexes the spatial direction: 0 is the wave-normal direction x1
/// (flux f), axis >= 1 the periodic transverse directions (fluxes g_j).
pub trait SystemModel: Send + Sync {
    fn n(&self) -> usize;
    fn d(&self) -> usize;
    fn name(&self) -> &'static str;

    /// Membership in the open convex phase space.
    fn is_admissible(&self, u: &[f64]) -> bool;

    fn flux(&self, axis: usize, u: &[f64], out: &mut [f64]);
    /// Analytic Jacobian of the flux in direction `axis`, row-major n x n.
    fn flux_jacobian(&self, axis: usize, u: &[f64], out: &mut [f64]);
    /// Viscosity matrix B_axis, row-major n x n.
    fn viscosity(&self, axis: usize, u: &[f64], out: &mut [f64]);
    fn entropy(&self, u: &[f64]) -> f64;
    fn entropy_gradient(&self, u: &[f64], out: &mut [f64]);
    fn entropy_hessian(&self, u: &[f64], out: &mut [f64]);
    fn entropy_flux(&self, axis: usize, u: &[f64]) -> f64;

    /// Upper bound on |characteristic speeds| in direction `axis` at `u`.
    fn wave_speed_bound(&self, axis: usize, u: &[f64]) -> f64;
    /// Upper bound on the spectral radius of B_j(u) eta''(u) over all j.
    fn diffusion_bound(&self, u: &[f64]) -> f64;

    /// Draw a state from a representative bounded region of the phase space.
    fn sample_admissible(&self, rng: &mut dyn rand::RngCore) -> Vec<f64>;

    // Allocating conveniences for construction-time code.

    fn flux_vec(&self, axis: usize, u: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n());
        self.flux(axis, u.as_slice(), out.as_mut_slice());
        out
    }

    fn flux_jacobian_mat(&self, axis: usize, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let mut buf = vec![0.0; n * n];
        self.flux_jacobian(axis, u.as_slice(), &mut buf);
        DMatrix::from_row_slice(n, n, &buf)
    }

    fn viscosity_mat(&self, axis: usize, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let mut buf = vec![0.0; n * n];
        self.viscosity(axis, u.as_slice(), &mut buf);
        DMatrix::from_row_slice(n, n, &buf)
    }

    fn entropy_hessian_mat(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let mut buf = vec![0.0; n * n];
        self.entropy_hessian(u.as_slice(), &mut buf);
        DMatrix::from_row_slice(n, n, &buf)
    }

    fn entropy_gradient_vec(&self, u: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n());
        self.entropy_gradient(u.as_slice(), out.as_mut_slice());
        out
    }
}

/// Config-selectable model, dispatching to the concrete instances.
#[derive(Debug, Clone)]
pub enum AnyModel {
    Burgers(BurgersModel),
    Bns(BnsModel),
    Linear(LinearModel),
}

macro_rules! dispatch {
    ($self:ident, $m:ident, $body:expr) => {
        match $self {
            AnyModel::Burgers($m) => $body,
            AnyModel::Bns($m) => $body,
            AnyModel::Linear($m) => $body,
        }
    };
}

impl SystemModel for AnyModel {
    fn n(&self) -> usize {
        dispatch!(self, m, m.n())
    }
    fn d(&self) -> usize {
        dispatch!(self, m, m.d())
    }
    fn name(&self) -> &'static str {
        dispatch!(self, m, m.name())
    }
    fn is_admissible(&self, u: &[f64]) -> bool {
        dispatch!(self, m, m.is_admissible(u))
    }
    fn flux(&self, axis: usize, u: &[f64], out: &mut [f64]) {
        dispatch!(self, m, m.flux(axis, u, out))
    }
    fn flux_jacobian(&self, axis: usize, u: &[f64], out: &mut [f64]) {
        dispatch!(self, m, m.flux_jacobian(axis, u, out))
    }
    fn viscosity(&self, axis: usize, u: &[f64], out: &mut [f64]) {
        dispatch!(self, m, m.viscosity(axis, u, out))
    }
    fn entropy(&self, u: &[f64]) -> f64 {
        dispatch!(self, m, m.entropy(u))
    }
    fn entropy_gradient(&self, u: &[f64], out: &mut [f64]) {
        dispatch!(self, m, m.entropy_gradient(u, out))
    }
    fn entropy_hessian(&self, u: &[f64], out: &mut [f64]) {
        dispatch!(self, m, m.entropy_hessian(u, out))
    }
    fn entropy_flux(&self, axis: usize, u: &[f64]) -> f64 {
        dispatch!(self, m, m.entropy_flux(axis, u))
    }
    fn wave_speed_bound(&self, axis: usize, u: &[f64]) -> f64 {
        dispatch!(self, m, m.wave_speed_bound(axis, u))
    }
    fn diffusion_bound(&self, u: &[f64]) -> f64 {
        dispatch!(self, m, m.diffusion_bound(u))
    }
    fn sample_admissible(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        dispatch!(self, m, m.sample_admissible(rng))
    }
}
