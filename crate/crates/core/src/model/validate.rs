//! Structure validation: entropy-flux compatibility by finite differences and
//! sampled positive-definiteness checks.
//!
//! These checks deliberately differentiate the model's own scalar evaluators
//! numerically instead of trusting the analytic Jacobians, so they probe the
//! mutual consistency of (f, g_j, eta, q_j) as stated data.

use super::SystemModel;
use crate::error::{CoreError, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Max over directions j and components i of
/// | d_i q_j - sum_l d_l eta d_i (flux_j)_l |, central differences of step h.
pub fn check_entropy_compatibility<M: SystemModel + ?Sized>(model: &M, u: &[f64], h: f64) -> Result<f64> {
    let n = model.n();
    if !model.is_admissible(u) {
        return Err(CoreError::InadmissibleState(format!("{u:?}")));
    }
    // every probe state must stay inside the phase space
    let mut probe = u.to_vec();
    for i in 0..n {
        for s in [-1.0, 1.0] {
            probe.copy_from_slice(u);
            probe[i] += s * h;
            if !model.is_admissible(&probe) {
                return Err(CoreError::InadmissibleState(format!(
                    "finite-difference probe leaves phase space at component {i}"
                )));
            }
        }
    }

    let mut deta = vec![0.0; n];
    let mut up = u.to_vec();
    let mut um = u.to_vec();
    for l in 0..n {
        up.copy_from_slice(u);
        um.copy_from_slice(u);
        up[l] += h;
        um[l] -= h;
        deta[l] = (model.entropy(&up) - model.entropy(&um)) / (2.0 * h);
    }

    let mut worst = 0.0f64;
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for axis in 0..model.d() {
        for i in 0..n {
            up.copy_from_slice(u);
            um.copy_from_slice(u);
            up[i] += h;
            um[i] -= h;
            let dq = (model.entropy_flux(axis, &up) - model.entropy_flux(axis, &um)) / (2.0 * h);
            model.flux(axis, &up, &mut fp);
            model.flux(axis, &um, &mut fm);
            let mut rhs = 0.0;
            for l in 0..n {
                rhs += deta[l] * (fp[l] - fm[l]) / (2.0 * h);
            }
            worst = worst.max((dq - rhs).abs());
        }
    }
    Ok(worst)
}

/// Summary of sampled structural checks.
#[derive(Debug, Clone, Copy)]
pub struct StructureReport {
    pub states: usize,
    pub max_compat_residual: f64,
    pub min_viscosity_quadratic: f64,
    pub min_hessian_eigenvalue: f64,
}

/// Sample `states` admissible states; verify B_j positive definite (Cholesky
/// plus random unit directions), eta'' symmetric positive definite, and the
/// entropy-flux compatibility residual.
pub fn check_structure<M: SystemModel + ?Sized>(
    model: &M,
    states: usize,
    fd_step: f64,
    seed: u64,
) -> Result<StructureReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.n();
    let mut max_res = 0.0f64;
    let mut min_quad = f64::INFINITY;
    let mut min_eig = f64::INFINITY;
    let mut b = vec![0.0; n * n];
    for _ in 0..states {
        let u = model.sample_admissible(&mut rng);
        max_res = max_res.max(check_entropy_compatibility(model, &u, fd_step)?);

        for axis in 0..model.d() {
            model.viscosity(axis, &u, &mut b);
            let bm = DMatrix::from_row_slice(n, n, &b);
            if !crate::linalg::is_positive_definite(&bm) {
                return Err(CoreError::NotPositiveDefinite(format!(
                    "B_{axis} at sampled state {u:?}"
                )));
            }
            for _ in 0..100 {
                let mut v = vec![0.0f64; n];
                let mut norm = 0.0;
                while norm < 1e-3 {
                    for vi in v.iter_mut() {
                        *vi = rng.gen_range(-1.0..1.0);
                    }
                    norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                }
                let mut q = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        q += v[i] * b[i * n + j] * v[j] / (norm * norm);
                    }
                }
                if q <= 0.0 {
                    return Err(CoreError::NotPositiveDefinite(format!(
                        "B_{axis} quadratic form {q:.3e} at {u:?}"
                    )));
                }
                min_quad = min_quad.min(q);
            }
        }

        let uvec = nalgebra::DVector::from_column_slice(&u);
        let hess = model.entropy_hessian_mat(&uvec);
        let asym = (&hess - hess.transpose()).norm();
        if asym > 1e-12 * (1.0 + hess.norm()) {
            return Err(CoreError::NonHyperbolic(format!("entropy Hessian asymmetric by {asym:.3e}")));
        }
        let eigs = hess.symmetric_eigenvalues();
        let lo = eigs.iter().fold(f64::INFINITY, |m, &e| m.min(e));
        if lo <= 0.0 {
            return Err(CoreError::NotPositiveDefinite(format!(
                "entropy Hessian eigenvalue {lo:.3e} at {u:?}"
            )));
        }
        min_eig = min_eig.min(lo);
    }
    Ok(StructureReport {
        states,
        max_compat_residual: max_res,
        min_viscosity_quadratic: min_quad,
        min_hessian_eigenvalue: min_eig,
    })
}
