//! The connection form on the space of horizontal paths.
//!
//! A tangent vector to the space of `Abar`-horizontal paths is a lifted
//! tangent field along a lifted path (base components `v`, vertical
//! component `w`). The path-space connection combines the endpoint value of
//! a second connection `A` with a two-form transgression along the path:
//!
//! ```text
//! omega(vtilde) = A(vtilde(1)) + tau( Z(vtilde) ),
//! Z(vtilde)     = integral_0^1 alpha(a(t)^{-1}) B(path'(t), v(t)) dt,
//! ```
//!
//! where `a(t)` are the transport frames of the lifted path and `B` takes
//! values in the algebra of the second group of the crossed module. The
//! endpoint term expands in the trivialization as
//! `Ad(a(1)^{-1})(A - Abar)(v(1)) + w(1)`.
//!
//! The module provides evaluation of `omega`, construction of
//! `omega`-horizontal lifts, transgressed products of two two-forms, and a
//! four-term evaluation of the curvature of `omega` on two-parameter path
//! variations (the exterior-derivative term by central differences in the
//! variation parameters, everything else by exact tables).

use crate::cross::CrossedModule;
use crate::error::MathError;
use crate::fields::{ConnectionField, TwoFormField};
use crate::lie::{fro_dist, AlgebraElement, CMatrix, GroupElement};
use crate::path::{PathFamily, SampledPath, TangentField, VectorFieldFamily};
use crate::quad;
use crate::transport::{
    lift_tangent_field, section_initial_w, transport_frames, LiftedPath, LiftedTangentField,
};

/// Transgression `Z` of the two-form along a lifted path: Simpson integral
/// of `alpha(frame^{-1}) B(path', v)`, valued in the algebra of the second
/// group.
pub fn chen_integral(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lifted: &LiftedPath,
    v: &TangentField,
) -> Result<AlgebraElement, MathError> {
    let n = lifted.n();
    if v.len() != n + 1 {
        return Err(MathError::GridMismatch {
            reason: format!(
                "tangent field has {} values, path has {} nodes",
                v.len(),
                n + 1
            ),
        });
    }
    let mut table = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let raw = b2.contract(lifted.path().point(k), lifted.path().velocity(k), v.value(k))?;
        let twisted = cm.alpha_alg(&lifted.frame_group(k).inverse(), &raw)?;
        table.push(twisted.matrix().clone());
    }
    let total = quad::simpson_total(&table, lifted.path().h())?;
    Ok(AlgebraElement::from_matrix(cm.h_tag().clone(), total))
}

/// Simpson table of the `tau`-image of the transgression integrand,
/// `Ad(frame^{-1}) tau(B)(path', v)`, in the algebra of the first group.
/// Returns the cumulative table; the last entry is `tau(Z)` under the
/// crossed-module equivariance `tau(alpha(g) x) = Ad(g) tau(x)`.
fn tau_transgression_table(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lifted: &LiftedPath,
    v: &TangentField,
) -> Result<Vec<CMatrix>, MathError> {
    let n = lifted.n();
    if v.len() != n + 1 {
        return Err(MathError::GridMismatch {
            reason: format!(
                "tangent field has {} values, path has {} nodes",
                v.len(),
                n + 1
            ),
        });
    }
    let mut table = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let raw = b2.contract(lifted.path().point(k), lifted.path().velocity(k), v.value(k))?;
        let tau_raw = cm.tau_alg(&raw)?;
        let twisted = lifted.frame_group(k).inverse().ad(&tau_raw)?;
        table.push(twisted.matrix().clone());
    }
    Ok(table)
}

/// Endpoint value of the `A`-connection on a lifted tangent field:
/// `Ad(frame(1)^{-1})(A - Abar)(v(1)) + w(1)`.
pub fn endpoint_connection_value(
    a: &ConnectionField,
    abar: &ConnectionField,
    lifted: &LiftedPath,
    field: &LiftedTangentField,
) -> Result<AlgebraElement, MathError> {
    let n = lifted.n();
    let p1 = lifted.path().point(n);
    let v1 = field.base().value(n);
    let diff = a.contract(p1, v1)?.sub(&abar.contract(p1, v1)?)?;
    let twisted = lifted.end_frame().inverse().ad(&diff)?;
    twisted.add(field.w(n))
}

/// The path-space connection evaluated on a lifted tangent field.
pub fn omega_eval(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    lifted: &LiftedPath,
    field: &LiftedTangentField,
) -> Result<AlgebraElement, MathError> {
    let endpoint = endpoint_connection_value(a, abar, lifted, field)?;
    let z = chen_integral(cm, b2, lifted, field.base())?;
    endpoint.add(&cm.tau_alg(&z)?)
}

/// The pullback of the path-space connection through the horizontal-lift
/// section, assembled directly from base data:
///
/// ```text
/// Abar(v(0)) + Ad(a(1)^{-1})(A - Abar)(v(1))
///   + integral Ad(a^{-1}) F(path', v) dt   (trapezoid)
///   + tau( integral alpha(a^{-1}) B(path', v) dt )   (Simpson)
/// ```
///
/// This equals [`omega_eval`] on the tangent field produced by
/// [`lift_tangent_field`] with the section initial value; the first three
/// terms are exactly that field's `w(1)` plus the endpoint difference.
pub fn omega_local_eval(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    lifted: &LiftedPath,
    v: &TangentField,
) -> Result<AlgebraElement, MathError> {
    let w0 = section_initial_w(abar, lifted, v)?;
    let field = lift_tangent_field(abar, lifted, v, w0)?;
    omega_eval(cm, a, abar, b2, lifted, &field)
}

/// The `omega`-horizontal lift of a base tangent field: the unique lifted
/// tangent field over `v` with `omega(vtilde) = 0`. Its endpoint vertical
/// value is forced to
///
/// ```text
/// w(1) = Ad(a(1)^{-1})(Abar - A)(v(1)) - integral Ad(a^{-1}) tau(B)(path', v) dt
/// ```
///
/// and interior values follow by integrating the tangency ODE backwards from
/// the endpoint (cumulative Simpson tails of the curvature integrand).
pub fn omega_horizontal_lift(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    lifted: &LiftedPath,
    v: &TangentField,
) -> Result<LiftedTangentField, MathError> {
    let n = lifted.n();
    let h = lifted.path().h();
    let tau_table = tau_transgression_table(cm, b2, lifted, v)?;
    let x = quad::simpson_total(&tau_table, h)?;
    let p1 = lifted.path().point(n);
    let v1 = v.value(n);
    let diff = abar.contract(p1, v1)?.sub(&a.contract(p1, v1)?)?;
    let w_end = lifted
        .end_frame()
        .inverse()
        .ad(&diff)?
        .sub(&AlgebraElement::from_matrix(cm.g_tag().clone(), x))?;

    // Curvature integrand table and its cumulative Simpson prefixes.
    let mut f_table = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let f = abar.curvature(lifted.path().point(k))?;
        let jac = lifted.path().velocity(k).x * v.value(k).y
            - lifted.path().velocity(k).y * v.value(k).x;
        let twisted = lifted.frame_group(k).inverse().ad(&f.scale(jac))?;
        f_table.push(twisted.matrix().clone());
    }
    let prefixes = quad::cumulative_simpson(&f_table, h)?;
    let total = prefixes[n].clone();
    let mut w = Vec::with_capacity(n + 1);
    for prefix in prefixes.iter() {
        let tail = &total - prefix;
        let wk = w_end.matrix() - &tail;
        w.push(AlgebraElement::from_matrix(cm.g_tag().clone(), wk));
    }
    LiftedTangentField::from_parts(v.clone(), w)
}

/// Residual between the backward (endpoint-anchored) assembly used by
/// [`omega_horizontal_lift`] and the equivalent forward assembly
/// `w(t) = w(0) + prefix(t)`: a pure bookkeeping identity whose violation
/// can only be roundoff.
pub fn horizontal_lift_form_residual(
    abar: &ConnectionField,
    lifted: &LiftedPath,
    field: &LiftedTangentField,
) -> Result<f64, MathError> {
    let n = lifted.n();
    let h = lifted.path().h();
    let mut f_table = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let f = abar.curvature(lifted.path().point(k))?;
        let jac = lifted.path().velocity(k).x * field.base().value(k).y
            - lifted.path().velocity(k).y * field.base().value(k).x;
        let twisted = lifted.frame_group(k).inverse().ad(&f.scale(jac))?;
        f_table.push(twisted.matrix().clone());
    }
    let prefixes = quad::cumulative_simpson(&f_table, h)?;
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let forward = field.w(0).matrix() + &prefixes[k];
        worst = worst.max(fro_dist(field.w(k).matrix(), &forward));
    }
    Ok(worst)
}

/// Transgressed product of two two-forms: the full-square double integral
///
/// ```text
/// integral integral [ Ad(a(u)^{-1}) tau(B1)(path', x)(u),
///                     Ad(a(v)^{-1}) tau(B2)(path', y)(v) ] du dv
/// ```
///
/// computed with tensor-product Simpson weights. By bilinearity of the
/// bracket this collapses to the bracket of the two single integrals, which
/// the tests use as an independent oracle.
pub fn chen_product_two_forms(
    cm: &CrossedModule,
    b_first: &TwoFormField,
    b_second: &TwoFormField,
    lifted: &LiftedPath,
    x: &TangentField,
    y: &TangentField,
) -> Result<AlgebraElement, MathError> {
    let h = lifted.path().h();
    let p_table = tau_transgression_table(cm, b_first, lifted, x)?;
    let q_table = tau_transgression_table(cm, b_second, lifted, y)?;
    let weights = quad::simpson_weights(p_table.len(), h)?;
    let dim = cm.g_tag().dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (i, wi) in weights.iter().enumerate() {
        for (j, wj) in weights.iter().enumerate() {
            let comm = &p_table[i] * &q_table[j] - &q_table[j] * &p_table[i];
            acc += comm * nalgebra::Complex::new(wi * wj, 0.0);
        }
    }
    Ok(AlgebraElement::from_matrix(cm.g_tag().clone(), acc))
}

/// A two-parameter family of paths `t -> base(t) + p dir1(t) + q dir2(t)`,
/// the standard probe for evaluating the curvature of the path-space
/// connection on the commuting coordinate fields `X = dir1`, `Y = dir2`.
#[derive(Debug, Clone)]
pub struct PathVariation2 {
    pub base: PathFamily,
    pub dir1: VectorFieldFamily,
    pub dir2: VectorFieldFamily,
}

impl PathVariation2 {
    /// The member path at parameters `(p, q)`, sampled at resolution `n`.
    pub fn path_at(&self, p: f64, q: f64, n: usize) -> Result<SampledPath, MathError> {
        self.base.validate()?;
        if n < 2 || n % 2 != 0 {
            return Err(MathError::GridMismatch {
                reason: format!("variation resolution must be even and >= 2, got {n}"),
            });
        }
        let eval = |t: f64| {
            let (b, bv) = self.base.eval(t);
            let (d1, d1v) = self.dir1.eval(t);
            let (d2, d2v) = self.dir2.eval(t);
            (b + p * d1 + q * d2, bv + p * d1v + q * d2v)
        };
        let mut points = Vec::with_capacity(n + 1);
        let mut velocities = Vec::with_capacity(n + 1);
        let mut mid_points = Vec::with_capacity(n);
        let mut mid_velocities = Vec::with_capacity(n);
        for k in 0..=n {
            let (pt, vel) = eval(k as f64 / n as f64);
            points.push(pt);
            velocities.push(vel);
            if k < n {
                let (pt, vel) = eval((k as f64 + 0.5) / n as f64);
                mid_points.push(pt);
                mid_velocities.push(vel);
            }
        }
        SampledPath::from_tables(points, velocities, mid_points, mid_velocities)
    }

    /// First coordinate field, sampled at the nodes (independent of `(p,q)`).
    pub fn x_field(&self, n: usize) -> TangentField {
        TangentField::from_family(&self.dir1, n)
    }

    /// Second coordinate field, sampled at the nodes.
    pub fn y_field(&self, n: usize) -> TangentField {
        TangentField::from_family(&self.dir2, n)
    }
}

/// The four contributions to the curvature of the path-space connection on
/// the coordinate fields of a [`PathVariation2`], plus their sum.
#[derive(Debug, Clone)]
pub struct OmegaCurvature {
    /// Endpoint curvature term `Ad(a(1)^{-1}) F_A(X(1), Y(1))`.
    pub endpoint_curvature: AlgebraElement,
    /// Exterior derivative of the transgression (central differences in the
    /// variation parameters).
    pub transgression_derivative: AlgebraElement,
    /// Mixed brackets `[A(X~), tau Z(Y~)] - [A(Y~), tau Z(X~)]`.
    pub mixed_bracket: AlgebraElement,
    /// Transgression-transgression bracket `[tau Z(X~), tau Z(Y~)]`.
    pub transgression_bracket: AlgebraElement,
    /// Sum of all four terms.
    pub total: AlgebraElement,
}

/// Evaluates the curvature of the path-space connection on the commuting
/// coordinate fields of the variation at `(p, q) = (0, 0)`.
///
/// The exterior-derivative term differentiates the transgression along the
/// variation with central differences of step `fd_step` (the default used by
/// the tests and the task runner is `1e-4`).
pub fn omega_curvature_eval(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    variation: &PathVariation2,
    n: usize,
    fd_step: f64,
) -> Result<OmegaCurvature, MathError> {
    if !(fd_step.is_finite() && fd_step > 0.0) {
        return Err(MathError::VariationTooCoarse {
            reason: format!("finite-difference step must be positive, got {fd_step}"),
        });
    }
    let x = variation.x_field(n);
    let y = variation.y_field(n);
    let identity = GroupElement::identity(abar.tag().clone());

    let base_path = variation.path_at(0.0, 0.0, n)?;
    let lifted = transport_frames(abar, &base_path, &identity)?;

    // Endpoint curvature term.
    let nn = lifted.n();
    let f_end = a.curvature(lifted.path().point(nn))?;
    let jac_end = x.value(nn).x * y.value(nn).y - x.value(nn).y * y.value(nn).x;
    let endpoint_curvature = lifted.end_frame().inverse().ad(&f_end.scale(jac_end))?;

    // Transgression values on neighbouring members of the family; the
    // coordinate fields are constant across the family, so only the path
    // (and its transport frames) moves.
    let transgress = |p: f64, q: f64, dir: &TangentField| -> Result<AlgebraElement, MathError> {
        let path = variation.path_at(p, q, n)?;
        let member = transport_frames(abar, &path, &identity)?;
        let table = tau_transgression_table(cm, b2, &member, dir)?;
        let total = quad::simpson_total(&table, path.h())?;
        Ok(AlgebraElement::from_matrix(cm.g_tag().clone(), total))
    };
    let dp = transgress(fd_step, 0.0, &y)?
        .sub(&transgress(-fd_step, 0.0, &y)?)?
        .scale(0.5 / fd_step);
    let dq = transgress(0.0, fd_step, &x)?
        .sub(&transgress(0.0, -fd_step, &x)?)?
        .scale(0.5 / fd_step);
    let transgression_derivative = dp.sub(&dq)?;

    // Endpoint connection values and transgressions of the two coordinate
    // fields on the base member.
    let wx0 = section_initial_w(abar, &lifted, &x)?;
    let wy0 = section_initial_w(abar, &lifted, &y)?;
    let x_lift = lift_tangent_field(abar, &lifted, &x, wx0)?;
    let y_lift = lift_tangent_field(abar, &lifted, &y, wy0)?;
    let a_x = endpoint_connection_value(a, abar, &lifted, &x_lift)?;
    let a_y = endpoint_connection_value(a, abar, &lifted, &y_lift)?;
    let z_x = AlgebraElement::from_matrix(
        cm.g_tag().clone(),
        quad::simpson_total(&tau_transgression_table(cm, b2, &lifted, &x)?, lifted.path().h())?,
    );
    let z_y = AlgebraElement::from_matrix(
        cm.g_tag().clone(),
        quad::simpson_total(&tau_transgression_table(cm, b2, &lifted, &y)?, lifted.path().h())?,
    );
    let mixed_bracket = a_x.bracket(&z_y)?.sub(&a_y.bracket(&z_x)?)?;
    let transgression_bracket = z_x.bracket(&z_y)?;

    let total = endpoint_curvature
        .add(&transgression_derivative)?
        .add(&mixed_bracket)?
        .add(&transgression_bracket)?;
    Ok(OmegaCurvature {
        endpoint_curvature,
        transgression_derivative,
        mixed_bracket,
        transgression_bracket,
        total,
    })
}
