//! Characteristic structure at a reference state: ordered eigenvalues,
//! eigenvector pairs normalized through the entropy Hessian, and
//! genuine-nonlinearity coefficients.
//!
//! Because eta'' f' is symmetric for entropy-compatible fluxes, the
//! eigenproblem is solved as the symmetric-definite pencil
//! (eta'' f') v = lambda (eta'') v, which yields real eigenvalues and the
//! normalization (eta'' r_i) . r_j = delta_ij natively. The computed pairs
//! are verified against f' directly, so a model with an incompatible entropy
//! is reported as non-hyperbolic instead of silently mis-diagonalized.

use crate::error::{CoreError, Result};
use crate::linalg::symmetric_pencil_eigen;
use crate::model::SystemModel;
use nalgebra::{DMatrix, DVector};

/// Tolerance ladder: eigenvalue gaps and eigenpair residuals below this are
/// treated as degenerate; genuine-nonlinearity coefficients below it are
/// flagged.
pub const HYPERBOLICITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EigenFrame {
    pub base: DVector<f64>,
    /// Strictly increasing eigenvalues of f'(base).
    pub lambda: Vec<f64>,
    /// Right eigenvectors, scaled so (eta'' r_i) . r_i = 1 and oriented so
    /// that c_f^(i) < 0 where genuine nonlinearity holds.
    pub right: Vec<DVector<f64>>,
    /// Left eigenvectors l_i = eta''(base) r_i; r_i . l_i = 1.
    pub left: Vec<DVector<f64>>,
    /// c_f^(i) = lambda_i'(base) . r_i.
    pub c_f: Vec<f64>,
    /// Per-family genuine-nonlinearity flag (|c_f| above tolerance).
    pub gn_ok: Vec<bool>,
}

impl EigenFrame {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// 1-based family accessors matching the paper's indexing.
    pub fn lambda_of(&self, family: usize) -> f64 {
        self.lambda[family - 1]
    }
    pub fn r(&self, family: usize) -> &DVector<f64> {
        &self.right[family - 1]
    }
    pub fn l(&self, family: usize) -> &DVector<f64> {
        &self.left[family - 1]
    }
    pub fn c_f_of(&self, family: usize) -> f64 {
        self.c_f[family - 1]
    }
}

/// Eigenvalues of f'(u) in ascending order (pencil route, no orientation).
pub fn eigenvalues_at<M: SystemModel + ?Sized>(model: &M, u: &DVector<f64>) -> Result<Vec<f64>> {
    let (lams, _) = raw_pairs(model, u)?;
    Ok(lams)
}

/// lambda_i at a state, 1-based family index.
pub fn lambda_at<M: SystemModel + ?Sized>(model: &M, u: &DVector<f64>, family: usize) -> Result<f64> {
    Ok(eigenvalues_at(model, u)?[family - 1])
}

fn raw_pairs<M: SystemModel + ?Sized>(model: &M, u: &DVector<f64>) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    if !model.is_admissible(u.as_slice()) {
        return Err(CoreError::InadmissibleState(format!("{:?}", u.as_slice())));
    }
    let h = model.entropy_hessian_mat(u);
    let j = model.flux_jacobian_mat(0, u);
    let k = &h * &j;
    let k_sym = 0.5 * (&k + k.transpose());
    let asym = (&k - k.transpose()).norm();
    if asym > 1e-7 * (1.0 + k.norm()) {
        return Err(CoreError::NonHyperbolic(format!(
            "eta'' f' asymmetric by {asym:.3e}; entropy not compatible with flux"
        )));
    }
    let (lams, vecs) = symmetric_pencil_eigen(&k_sym, &h)?;
    // verify against f' directly
    for (lam, v) in lams.iter().zip(&vecs) {
        let res = (&j * v - *lam * v).norm() / v.norm();
        if res > HYPERBOLICITY_TOL * (1.0 + lam.abs()) {
            return Err(CoreError::NonHyperbolic(format!(
                "eigenpair residual {res:.3e} for lambda = {lam:.6}"
            )));
        }
    }
    Ok((lams, vecs))
}

/// Build the oriented frame at `base`.
pub fn eigen_frame<M: SystemModel + ?Sized>(model: &M, base: &DVector<f64>) -> Result<EigenFrame> {
    let n = model.n();
    let (lams, mut vecs) = raw_pairs(model, base)?;
    let scale = 1.0 + lams.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    for w in lams.windows(2) {
        if w[1] - w[0] <= HYPERBOLICITY_TOL * scale {
            return Err(CoreError::NonHyperbolic(format!(
                "eigenvalue gap {:.3e} below tolerance (repeated eigenvalue)",
                w[1] - w[0]
            )));
        }
    }
    let hess = model.entropy_hessian_mat(base);
    let mut c_fs = Vec::with_capacity(n);
    let mut gn = Vec::with_capacity(n);
    for i in 0..n {
        let cf = directional_lambda_derivative(model, base, &vecs[i], i + 1)?;
        if cf.abs() < HYPERBOLICITY_TOL {
            gn.push(false);
            c_fs.push(cf);
            // canonical orientation: largest-magnitude component positive
            let mut k_max = 0;
            for k in 1..n {
                if vecs[i][k].abs() > vecs[i][k_max].abs() {
                    k_max = k;
                }
            }
            if vecs[i][k_max] < 0.0 {
                vecs[i] = -&vecs[i];
            }
        } else {
            gn.push(true);
            if cf > 0.0 {
                vecs[i] = -&vecs[i];
                c_fs.push(-cf);
            } else {
                c_fs.push(cf);
            }
        }
    }
    let left: Vec<DVector<f64>> = vecs.iter().map(|r| &hess * r).collect();
    Ok(EigenFrame { base: base.clone(), lambda: lams, right: vecs, left, c_f: c_fs, gn_ok: gn })
}

/// Directional derivative of lambda_family along `dir` at `base`, 4th-order
/// central differences with step adapted to the state magnitude.
fn directional_lambda_derivative<M: SystemModel + ?Sized>(
    model: &M,
    base: &DVector<f64>,
    dir: &DVector<f64>,
    family: usize,
) -> Result<f64> {
    let h = 1e-3 * (1.0 + base.amax()) / (1.0 + dir.amax());
    lambda_slope_with_step(model, base, dir, family, h)
}

fn lambda_slope_with_step<M: SystemModel + ?Sized>(
    model: &M,
    base: &DVector<f64>,
    dir: &DVector<f64>,
    family: usize,
    h: f64,
) -> Result<f64> {
    let lam = |s: f64| -> Result<f64> {
        let u = base + s * dir;
        lambda_at(model, &u, family)
    };
    Ok((lam(-2.0 * h)? - 8.0 * lam(-h)? + 8.0 * lam(h)? - lam(2.0 * h)?) / (12.0 * h))
}

/// c_f^(i) as the directional derivative of lambda_i along r_i (the frame's
/// oriented eigenvector).
pub fn genuine_nonlinearity_coeff<M: SystemModel + ?Sized>(
    model: &M,
    frame: &EigenFrame,
    family: usize,
) -> Result<f64> {
    directional_lambda_derivative(model, &frame.base, frame.r(family), family)
}

/// Same FD derivative at half the default step, for step-stability checks.
pub fn genuine_nonlinearity_coeff_halved<M: SystemModel + ?Sized>(
    model: &M,
    frame: &EigenFrame,
    family: usize,
) -> Result<f64> {
    let dir = frame.r(family);
    let h = 0.5e-3 * (1.0 + frame.base.amax()) / (1.0 + dir.amax());
    lambda_slope_with_step(model, &frame.base, dir, family, h)
}

/// The bilinear-form route: (f''(base) : r (x) r) . l via a 5-point second
/// directional difference of the flux.
pub fn gn_coeff_hessian_route<M: SystemModel + ?Sized>(
    model: &M,
    frame: &EigenFrame,
    family: usize,
) -> Result<f64> {
    let base = &frame.base;
    let r = frame.r(family);
    let l = frame.l(family);
    let h = 1e-3 * (1.0 + base.amax()) / (1.0 + r.amax());
    let f = |s: f64| -> DVector<f64> { model.flux_vec(0, &(base + s * r)) };
    let second = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
    Ok(second.dot(l))
}

/// Symmetry consequence eta''(base) r_i . r_j for i != j (should vanish).
pub fn hessian_orthogonality_residual<M: SystemModel + ?Sized>(model: &M, frame: &EigenFrame) -> f64 {
    let hess: DMatrix<f64> = model.entropy_hessian_mat(&frame.base);
    let n = frame.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        let hri = &hess * &frame.right[i];
        for j in 0..n {
            if i != j {
                worst = worst.max(hri.dot(&frame.right[j]).abs());
            }
        }
    }
    worst
}
