//! Shock-curve and rarefaction-curve end states near a reference state:
//! Rankine-Hugoniot continuation and integral-curve tracing for the extremal
//! families.

use crate::eigen::{eigen_frame, lambda_at, EigenFrame};
use crate::error::{CoreError, Result};
use crate::model::SystemModel;
use crate::numerics::interp::{hermite_deriv, hermite_value, HermiteTable};
use crate::ode::{integrate_adaptive, Dp45Opts, StepCtrl};
use nalgebra::{DMatrix, DVector};

/// Default per-family strength cap; configurable per call site.
pub const DEFAULT_DELTA0: f64 = 0.1;

/// An admissible Lax shock: end states, speed, family, and strength
/// delta = (U_R - U_L) . l_i.
#[derive(Debug, Clone)]
pub struct ShockConnection {
    pub family: usize,
    pub u_left: DVector<f64>,
    pub u_right: DVector<f64>,
    pub sigma: f64,
    pub strength: f64,
}

/// Infinity norm of -sigma (U_R - U_L) + f(U_R) - f(U_L).
pub fn rh_residual<M: SystemModel + ?Sized>(model: &M, conn: &ShockConnection) -> f64 {
    let fl = model.flux_vec(0, &conn.u_left);
    let fr = model.flux_vec(0, &conn.u_right);
    let mut worst = 0.0f64;
    for i in 0..model.n() {
        let r = -conn.sigma * (conn.u_right[i] - conn.u_left[i]) + fr[i] - fl[i];
        worst = worst.max(r.abs());
    }
    worst
}

/// Newton continuation along the i-shock curve from the frame's base state.
///
/// The strength parameterization is (U_R - U_L) . l_i = strength; with the
/// c_f < 0 orientation this lands on the Lax-admissible side. The predictor
/// is the curve tangent U_L + strength r_i with speed
/// lambda_i + c_f strength / 2.
pub fn shock_curve_point<M: SystemModel + ?Sized>(
    model: &M,
    frame: &EigenFrame,
    family: usize,
    strength: f64,
    delta0: f64,
) -> Result<ShockConnection> {
    let n = model.n();
    if !(strength > 0.0 && strength <= delta0) {
        return Err(CoreError::InvalidConfig(format!(
            "shock strength {strength} outside (0, {delta0}]"
        )));
    }
    if !frame.gn_ok[family - 1] {
        return Err(CoreError::GenuineNonlinearity { family, c_f_abs: frame.c_f_of(family).abs() });
    }
    let u_left = frame.base.clone();
    let l = frame.l(family);
    let r = frame.r(family);
    let f_left = model.flux_vec(0, &u_left);
    let scale = 1.0 + f_left.amax() + strength;

    let mut u_r = &u_left + strength * r;
    let mut sigma = frame.lambda_of(family) + 0.5 * frame.c_f_of(family) * strength;
    let mut converged = false;
    for _ in 0..60 {
        if !model.is_admissible(u_r.as_slice()) {
            return Err(CoreError::NewtonFailure(
                "shock-curve iterate left the phase space (strength too large?)".into(),
            ));
        }
        let f_r = model.flux_vec(0, &u_r);
        let mut g = DVector::zeros(n + 1);
        for i in 0..n {
            g[i] = f_r[i] - f_left[i] - sigma * (u_r[i] - u_left[i]);
        }
        g[n] = (&u_r - &u_left).dot(l) - strength;
        let res = g.amax();
        if res <= 1e-13 * scale {
            converged = true;
            break;
        }
        let jac = model.flux_jacobian_mat(0, &u_r);
        let mut big = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                big[(i, j)] = jac[(i, j)] - if i == j { sigma } else { 0.0 };
            }
            big[(i, n)] = -(u_r[i] - u_left[i]);
            big[(n, i)] = l[i];
        }
        let delta = big
            .lu()
            .solve(&(-g))
            .ok_or_else(|| CoreError::NewtonFailure("singular shock-curve Jacobian".into()))?;
        for i in 0..n {
            u_r[i] += delta[i];
        }
        sigma += delta[n];
        if (&u_r - &u_left).norm() > 10.0 * strength + 1.0 {
            return Err(CoreError::NewtonFailure(format!(
                "shock-curve Newton diverged at strength {strength}"
            )));
        }
    }
    if !converged {
        return Err(CoreError::NewtonFailure(format!(
            "shock-curve Newton did not converge at strength {strength}"
        )));
    }

    let lam_r = lambda_at(model, &u_r, family)?;
    let lam_l = frame.lambda_of(family);
    if !(lam_r < sigma && sigma < lam_l) {
        return Err(CoreError::LaxViolation(format!(
            "family {family}: lambda(U_R) = {lam_r:.8}, sigma = {sigma:.8}, lambda(U_L) = {lam_l:.8}"
        )));
    }
    Ok(ShockConnection { family, u_left, u_right: u_r, sigma, strength })
}

/// The n-integral curve from U_m, tabulated against lambda_n for later
/// rarefaction sampling.
#[derive(Debug, Clone)]
pub struct RarefactionCurve {
    pub u_middle: DVector<f64>,
    pub u_plus: DVector<f64>,
    /// delta_R = -(U_+ - U_m) . l_n.
    pub strength: f64,
    pub lambda_middle: f64,
    pub lambda_plus: f64,
    /// Left eigenvector of the extremal family at U_m.
    pub l_n: DVector<f64>,
    /// Max accumulated motion along l_j, j != n (integral-curve consistency).
    pub orthogonality_drift: f64,
    table: HermiteTable,
}

impl RarefactionCurve {
    pub fn lambda_span(&self) -> f64 {
        self.lambda_plus - self.lambda_middle
    }

    /// State at a characteristic value, with a small out-of-range tolerance.
    pub fn state_at_lambda(&self, lam: f64, out: &mut [f64]) -> Result<()> {
        let tol = 1e-9 * (1.0 + self.lambda_span());
        if lam < self.lambda_middle - tol || lam > self.lambda_plus + tol {
            return Err(CoreError::OutOfRange(format!(
                "lambda {lam} outside [{}, {}]",
                self.lambda_middle, self.lambda_plus
            )));
        }
        self.table.eval_into(lam.clamp(self.lambda_middle, self.lambda_plus), out);
        Ok(())
    }

    pub fn dstate_dlambda(&self, lam: f64, out: &mut [f64]) -> Result<()> {
        let tol = 1e-9 * (1.0 + self.lambda_span());
        if lam < self.lambda_middle - tol || lam > self.lambda_plus + tol {
            return Err(CoreError::OutOfRange(format!("lambda {lam} outside curve range")));
        }
        self.table.eval_deriv_into(lam.clamp(self.lambda_middle, self.lambda_plus), out);
        Ok(())
    }
}

/// Trace the extremal integral curve from U_m until
/// -(U - U_m) . l_n = strength, so that lambda_n increases along the way.
pub fn rarefaction_curve_point<M: SystemModel + ?Sized>(
    model: &M,
    u_middle: &DVector<f64>,
    strength: f64,
    delta0: f64,
) -> Result<RarefactionCurve> {
    let n = model.n();
    if !(strength > 0.0 && strength <= delta0) {
        return Err(CoreError::InvalidConfig(format!(
            "rarefaction strength {strength} outside (0, {delta0}]"
        )));
    }
    let frame = eigen_frame(model, u_middle)?;
    if !frame.gn_ok[n - 1] {
        return Err(CoreError::GenuineNonlinearity { family: n, c_f_abs: frame.c_f_of(n).abs() });
    }
    let r_ref = frame.r(n).clone();
    let l_ref = frame.l(n).clone();

    // Motion along -r_n(U): with c_f < 0 this increases lambda_n. The local
    // eigenvector sign is fixed by alignment with the reference direction.
    let rhs = |u: &DVector<f64>| -> DVector<f64> {
        let fr = eigen_frame(model, u).expect("integral curve left the hyperbolic region");
        let mut v = fr.r(n).clone();
        if v.dot(&r_ref) < 0.0 {
            v = -v;
        }
        -v
    };

    let opts = Dp45Opts {
        rtol: 1e-12,
        atol: 1e-13,
        h_init: strength.min(1e-3),
        h_max: strength / 64.0,
        max_steps: 100_000,
    };
    let target = strength;
    let um = u_middle.clone();
    let nodes = integrate_adaptive(rhs, u_middle.clone(), 0.0, opts, |node| {
        let g = -(&node.y - &um).dot(&l_ref);
        if g >= target || node.t > 4.0 * target {
            StepCtrl::Stop
        } else {
            StepCtrl::Continue
        }
    })?;

    let g_of = |y: &DVector<f64>| -(y - u_middle).dot(&l_ref);
    let last = nodes.last().unwrap();
    if g_of(&last.y) < target {
        return Err(CoreError::OdeFailure(format!(
            "integral curve reached only {:.3e} of requested strength {strength}",
            g_of(&last.y)
        )));
    }

    // refine the crossing on the final Hermite segment
    let (u_plus, _) = {
        let a = &nodes[nodes.len() - 2];
        let b = &nodes[nodes.len() - 1];
        let h = b.t - a.t;
        let g0 = g_of(&a.y);
        let g1 = g_of(&b.y);
        let dg0 = -a.dy.dot(&l_ref);
        let dg1 = -b.dy.dot(&l_ref);
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let gm = hermite_value(g0, dg0, g1, dg1, h, mid);
            if gm < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let tstar = 0.5 * (lo + hi);
        let mut y = DVector::zeros(n);
        for c in 0..n {
            y[c] = hermite_value(a.y[c], a.dy[c], b.y[c], b.dy[c], h, tstar);
        }
        let dy = rhs(&y);
        (y, dy)
    };

    // node list ending exactly at u_plus
    let mut path: Vec<DVector<f64>> = nodes[..nodes.len() - 1].iter().map(|nd| nd.y.clone()).collect();
    path.push(u_plus.clone());

    // characteristic values along the path must strictly increase
    let mut lambdas = Vec::with_capacity(path.len());
    for y in &path {
        lambdas.push(lambda_at(model, y, n)?);
    }
    for w in lambdas.windows(2) {
        if w[1] <= w[0] {
            return Err(CoreError::GenuineNonlinearity {
                family: n,
                c_f_abs: (w[1] - w[0]).abs(),
            });
        }
    }

    // orthogonality of the motion to the complementary left eigenvectors,
    // accumulated with midpoint frames
    let mut drift = vec![0.0f64; n];
    for w in path.windows(2) {
        let mid = 0.5 * (&w[0] + &w[1]);
        let fr_mid = eigen_frame(model, &mid)?;
        let step = &w[1] - &w[0];
        for j in 0..n - 1 {
            drift[j] += step.dot(fr_mid.l(j + 1));
        }
    }
    let ortho = drift[..n.saturating_sub(1)].iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if n > 1 && ortho > 1e-8 {
        return Err(CoreError::OdeFailure(format!(
            "integral-curve invariant drift {ortho:.3e} exceeds 1e-8"
        )));
    }

    // lambda-parameterized Hermite table with exact tangents dU/dlambda
    let mut values = Vec::with_capacity(path.len() * n);
    let mut slopes = Vec::with_capacity(path.len() * n);
    for y in &path {
        let dy = rhs(y);
        let eps = 1e-6 * (1.0 + y.amax()) / (1.0 + dy.amax());
        let lam_p = lambda_at(model, &(y + eps * &dy), n)?;
        let lam_m = lambda_at(model, &(y - eps * &dy), n)?;
        let dlam_ds = (lam_p - lam_m) / (2.0 * eps);
        for c in 0..n {
            values.push(y[c]);
            slopes.push(dy[c] / dlam_ds);
        }
    }
    let table = HermiteTable::new(lambdas.clone(), n, values, slopes);

    Ok(RarefactionCurve {
        u_middle: u_middle.clone(),
        u_plus,
        strength,
        lambda_middle: lambdas[0],
        lambda_plus: *lambdas.last().unwrap(),
        l_n: l_ref,
        orthogonality_drift: ortho,
        table,
    })
}

/// Hermite refinement helper shared with profile recentring.
pub(crate) fn hermite_scalar_root(
    g0: f64,
    dg0: f64,
    g1: f64,
    dg1: f64,
    h: f64,
    target: f64,
) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    let increasing = g1 > g0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let gm = hermite_value(g0, dg0, g1, dg1, h, mid);
        if (gm < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    // one Newton polish
    let gm = hermite_value(g0, dg0, g1, dg1, h, t);
    let dm = hermite_deriv(g0, dg0, g1, dg1, h, t) * h;
    if dm.abs() > 0.0 {
        (t - (gm - target) / dm).clamp(0.0, 1.0)
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_bns_model, make_burgers_model, BnsParameters};
    use approx::assert_relative_eq;

    #[test]
    fn burgers_shock_curve_is_exact() {
        let m = make_burgers_model();
        let u_l = DVector::from_vec(vec![1.0]);
        let fr = eigen_frame(&m, &u_l).unwrap();
        for s in [0.01, 0.05, 0.1] {
            let conn = shock_curve_point(&m, &fr, 1, s, DEFAULT_DELTA0).unwrap();
            assert_relative_eq!(conn.u_right[0], 1.0 - s, epsilon = 1e-12);
            assert_relative_eq!(conn.sigma, 1.0 - 0.5 * s, epsilon = 1e-12);
            assert!(rh_residual(&m, &conn) <= 1e-12);
        }
    }

    #[test]
    fn tiny_strength_degenerates_to_base_state() {
        let m = make_burgers_model();
        let u_l = DVector::from_vec(vec![1.0]);
        let fr = eigen_frame(&m, &u_l).unwrap();
        let conn = shock_curve_point(&m, &fr, 1, 1e-8, DEFAULT_DELTA0).unwrap();
        assert!((conn.u_right[0] - 1.0).abs() < 2e-8);
        assert!((conn.sigma - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bns_connection_passes_rh_and_lax() {
        let m = make_bns_model(BnsParameters { nu: 0.1, gamma_ad: 2.0, d: 1, rho_min: 1e-8 }).unwrap();
        let u_l = DVector::from_vec(vec![1.0, 0.0]);
        let fr = eigen_frame(&m, &u_l).unwrap();
        for family in [1usize, 2] {
            for s in [0.01, 0.05, 0.1] {
                let conn = shock_curve_point(&m, &fr, family, s, DEFAULT_DELTA0).unwrap();
                assert!(
                    rh_residual(&m, &conn) <= 1e-12 * (1.0 + m.flux_vec(0, &conn.u_left).amax()),
                    "family {family} strength {s}"
                );
                let lam_r = lambda_at(&m, &conn.u_right, family).unwrap();
                assert!(lam_r < conn.sigma && conn.sigma < fr.lambda_of(family));
                assert_relative_eq!((&conn.u_right - &conn.u_left).dot(fr.l(family)), s, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn shock_curve_tangency_and_speed_slope() {
        let m = make_bns_model(BnsParameters { nu: 0.1, gamma_ad: 2.0, d: 1, rho_min: 1e-8 }).unwrap();
        let u_l = DVector::from_vec(vec![1.0, 0.0]);
        let fr = eigen_frame(&m, &u_l).unwrap();
        for family in [1usize, 2] {
            let mut errs = Vec::new();
            for s in [1e-2, 1e-3, 1e-4] {
                let conn = shock_curve_point(&m, &fr, family, s, DEFAULT_DELTA0).unwrap();
                let dir = (&conn.u_right - &conn.u_left) / s;
                errs.push((&dir - fr.r(family)).norm());
            }
            // first-order tangency: error shrinks proportionally to s
            assert!(errs[1] / errs[0] < 0.3, "family {family}: {errs:?}");
            assert!(errs[2] / errs[1] < 0.3, "family {family}: {errs:?}");

            let s = 1e-3;
            let conn = shock_curve_point(&m, &fr, family, s, DEFAULT_DELTA0).unwrap();
            let predicted = 0.5 * fr.c_f_of(family) * s;
            let actual = conn.sigma - fr.lambda_of(family);
            assert!(
                (actual - predicted).abs() <= 0.1 * predicted.abs(),
                "family {family}: sigma slope {actual:.3e} vs {predicted:.3e}"
            );
        }
    }

    #[test]
    fn burgers_rarefaction_curve_is_identity_shift() {
        let m = make_burgers_model();
        let u_m = DVector::from_vec(vec![0.2]);
        for s in [0.05, 0.1, 0.4] {
            let curve = rarefaction_curve_point(&m, &u_m, s, 0.5).unwrap();
            assert_relative_eq!(curve.u_plus[0], 0.2 + s, epsilon = 1e-9);
            assert_relative_eq!(curve.lambda_span(), s, epsilon = 1e-9);
            assert!(curve.lambda_plus > curve.lambda_middle);
        }
    }

    #[test]
    fn bns_rarefaction_preserves_riemann_invariant() {
        let m = make_bns_model(BnsParameters { nu: 0.1, gamma_ad: 2.0, d: 1, rho_min: 1e-8 }).unwrap();
        let u_m = DVector::from_vec(vec![1.0, 0.0]);
        let curve = rarefaction_curve_point(&m, &u_m, 0.05, DEFAULT_DELTA0).unwrap();
        let z0 = m.riemann_invariant_n(u_m.as_slice());
        let z1 = m.riemann_invariant_n(curve.u_plus.as_slice());
        assert!((z1 - z0).abs() <= 1e-8, "invariant drift {:.3e}", (z1 - z0).abs());
        assert!(curve.orthogonality_drift <= 1e-8);
        assert!(lambda_at(&m, &curve.u_plus, 2).unwrap() > lambda_at(&m, &u_m, 2).unwrap());
    }

    #[test]
    fn rarefaction_table_matches_endpoints() {
        let m = make_bns_model(BnsParameters { nu: 0.1, gamma_ad: 2.0, d: 1, rho_min: 1e-8 }).unwrap();
        let u_m = DVector::from_vec(vec![1.0, 0.0]);
        let curve = rarefaction_curve_point(&m, &u_m, 0.05, DEFAULT_DELTA0).unwrap();
        let mut out = [0.0; 2];
        curve.state_at_lambda(curve.lambda_middle, &mut out).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-10 && out[1].abs() < 1e-10);
        curve.state_at_lambda(curve.lambda_plus, &mut out).unwrap();
        assert!((out[0] - curve.u_plus[0]).abs() < 1e-10);
        assert!(curve.state_at_lambda(curve.lambda_plus + 0.1, &mut out).is_err());
    }

    #[test]
    fn rejects_out_of_range_strengths() {
        let m = make_burgers_model();
        let u_l = DVector::from_vec(vec![1.0]);
        let fr = eigen_frame(&m, &u_l).unwrap();
        assert!(shock_curve_point(&m, &fr, 1, 0.0, DEFAULT_DELTA0).is_err());
        assert!(shock_curve_point(&m, &fr, 1, 0.2, DEFAULT_DELTA0).is_err());
        assert!(rarefaction_curve_point(&m, &u_l, -0.1, DEFAULT_DELTA0).is_err());
    }
}
