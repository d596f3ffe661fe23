//! Theorem-level consistency checks on surface transport: the composition
//! identity tying the transport correction to edge transport, bi-holonomy
//! and the surface-ordered element; the endpoint-evaluation transport
//! identity; and reparametrization invariance with its guard conditions.
//!
//! Each check compares two independently computed routes and reports the
//! worst residual rather than asserting; tolerances live with the callers.

use crate::cross::CrossedModule;
use crate::error::MathError;
use crate::fields::{fake_curvature, ConnectionField, TwoFormField};
use crate::lie::{fro_dist, CMatrix, GroupElement};
use crate::path::catmull_rom;
use crate::surface::transport::{
    biholonomy_loop, omega_transport_local, surface_holonomy, LiftedSurface,
};
use crate::surface::{reparametrize_surface, Reparametrization, SurfaceGrid};
use crate::transport::{transport_frames, transport_frames_rk4};
use nalgebra::{Complex, Vector2};

/// Residuals of the composition identity `c(s) = a_0(s) g(1,s) tau(h_0(s))`
/// with each ingredient computed by its own route.
#[derive(Debug, Clone)]
pub struct CompositionReport {
    /// Worst residual over integer levels.
    pub residual: f64,
    /// Residual at each integer level.
    pub per_level: Vec<f64>,
}

/// Checks the surface-ordering composition identity: the transport
/// correction from its ODE against the left-edge transport times the
/// loop-composed bi-holonomy times `tau` of the surface-ordered element.
pub fn verify_tgb(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    grid: &SurfaceGrid,
) -> Result<CompositionReport, MathError> {
    let lift = LiftedSurface::new(a, abar, grid)?;
    let c = omega_transport_local(cm, a, abar, b2, &lift)?;
    let h0 = surface_holonomy(cm, b2, &lift)?;
    let mut per_level = Vec::with_capacity(lift.n_s() + 1);
    for k in 0..=lift.n_s() {
        let g = biholonomy_loop(a, abar, grid, lift.n_t(), k)?;
        let target = lift
            .left_edge(2 * k)
            .mul(&g)?
            .mul(&cm.tau_group(&h0[k])?)?;
        per_level.push(fro_dist(c[k].matrix(), target.matrix()));
    }
    let residual = per_level.iter().cloned().fold(0.0, f64::max);
    Ok(CompositionReport {
        residual,
        per_level,
    })
}

/// Residuals of transporting the lifted bottom row by the endpoint-evaluated
/// connection against the row lifts corrected by the bi-holonomy.
#[derive(Debug, Clone)]
pub struct EndpointTransportReport {
    pub residual: f64,
    pub per_level: Vec<f64>,
}

/// Transports the lifted bottom row by the endpoint-evaluation pullback of
/// the `a`-connection — a fourth-order integration up the right edge
/// followed by backward row transports — and compares, node by node, with
/// the row lifts right-translated by the closed-form bi-holonomy.
pub fn ev1_transport_check(
    a: &ConnectionField,
    abar: &ConnectionField,
    grid: &SurfaceGrid,
) -> Result<EndpointTransportReport, MathError> {
    let lift = LiftedSurface::new(a, abar, grid)?;
    let n_t = lift.n_t();
    let n_s = lift.n_s();
    // Independent route: integrate the right-edge transport at single
    // resolution with the fourth-order stepper, seeded with the bottom
    // row's endpoint frame.
    let column = grid.column_path(1.0, n_s)?;
    let endpoint = transport_frames_rk4(a, &column, &lift.row(0).end_frame())?;
    let mut per_level = Vec::with_capacity(n_s + 1);
    for k in 0..=n_s {
        let row = lift.row_at_level(k);
        let back = row.frame(n_t).adjoint() * endpoint.frame(k);
        let tail = lift.left_edge(2 * k).matrix() * lift.biholonomy_closed_form(2 * k).matrix();
        let mut worst: f64 = 0.0;
        for i in 0..=n_t {
            let transported = row.frame(i) * &back;
            let corrected = row.frame(i) * &tail;
            worst = worst.max(fro_dist(&transported, &corrected));
        }
        per_level.push(worst);
    }
    let residual = per_level.iter().cloned().fold(0.0, f64::max);
    Ok(EndpointTransportReport {
        residual,
        per_level,
    })
}

/// Outcome of the reparametrization-invariance comparison.
#[derive(Debug, Clone)]
pub struct ReparamReport {
    /// Worst of the frame and base-point residuals.
    pub residual: f64,
    /// Sup distance between the endpoint base paths on the refined grid.
    pub base_residual: f64,
    /// Sup Frobenius distance between the endpoint frame paths.
    pub frame_residual: f64,
    /// Largest fake-curvature norm over the surface's own sample points.
    pub fake_curvature_sup: f64,
    /// Largest pointwise difference between the two connections.
    pub connection_gap: f64,
}

/// Largest fake-curvature norm and connection gap over the surface's grid
/// nodes; the hypothesis guard for reparametrization invariance.
pub fn reparam_condition_residuals(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    grid: &SurfaceGrid,
) -> Result<(f64, f64), MathError> {
    let mut fake: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for j in 0..=grid.n_s() {
        for i in 0..=grid.n_t() {
            let p = grid.node(i, j).point;
            fake = fake.max(fake_curvature(cm, abar, b2, &p)?.norm());
            let av = a.eval(&p)?;
            let bv = abar.eval(&p)?;
            for mu in 0..2 {
                gap = gap.max(av[mu].sub(&bv[mu])?.norm());
            }
        }
    }
    Ok((fake, gap))
}

/// Verifies that transporting the lifted bottom row along the
/// reparametrized family lands on the reparametrized top-row lift of the
/// original surface.
///
/// The transported object is assembled on the composed surface: its top
/// row's identity-seeded lift, right-translated by the transport correction
/// `c(1)` from the correction ODE run on the composed surface. The
/// reference object is the original surface's top-row lift (frames times
/// the left-edge transport `a_0(1)`) composed with the map's top-edge
/// restriction. Both endpoint paths are compared — base points and frames —
/// on a four-fold refined parameter grid via cubic interpolation of the
/// node data.
///
/// Fails with [`MathError::ConditionViolated`] when the fake curvature or
/// the gap between the two connections exceeds `1e-8` on the surface's
/// sample points, the hypotheses under which the invariance holds.
pub fn verify_reparam(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    grid: &SurfaceGrid,
    map: &Reparametrization,
) -> Result<ReparamReport, MathError> {
    let (fake, gap) = reparam_condition_residuals(cm, a, abar, b2, grid)?;
    if fake > 1e-8 {
        return Err(MathError::ConditionViolated {
            reason: format!(
                "fake curvature reaches {fake:.3e} on the surface (limit 1e-8)"
            ),
        });
    }
    if gap > 1e-8 {
        return Err(MathError::ConditionViolated {
            reason: format!(
                "the two connections differ by {gap:.3e} on the surface (limit 1e-8)"
            ),
        });
    }
    verify_reparam_unchecked(cm, a, abar, b2, grid, map)
}

/// The reparametrization comparison without the hypothesis guard; used for
/// negative controls where the guard is violated deliberately.
pub fn verify_reparam_unchecked(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    grid: &SurfaceGrid,
    map: &Reparametrization,
) -> Result<ReparamReport, MathError> {
    let (fake, gap) = reparam_condition_residuals(cm, a, abar, b2, grid)?;
    let n_t = grid.n_t();
    let n_s = grid.n_s();
    let warped = reparametrize_surface(grid, map)?;

    // Transported object, assembled on the composed surface.
    let lift_w = LiftedSurface::new(a, abar, &warped)?;
    let c_w = omega_transport_local(cm, a, abar, b2, &lift_w)?;
    let c_end = c_w.last().unwrap().matrix().clone();
    let top_w = lift_w.row(lift_w.half_levels());
    let lhs_frames: Vec<CMatrix> = (0..=n_t).map(|i| top_w.frame(i) * &c_end).collect();

    // Reference object on the original surface.
    let seed = GroupElement::identity(abar.tag().clone());
    let top_o = transport_frames(abar, &grid.row_path(1.0, n_t)?, &seed)?;
    let left_o = transport_frames(a, &grid.column_path(0.0, 2 * n_s)?, &seed)?;
    let a0_end = left_o.frame(2 * n_s);
    let rhs_frames: Vec<CMatrix> = (0..=n_t).map(|i| top_o.frame(i) * a0_end).collect();

    // Compare on the refined common parameter grid.
    let lhs_interp = MatrixPathInterpolator::new(&lhs_frames);
    let rhs_interp = MatrixPathInterpolator::new(&rhs_frames);
    let refined = 4 * n_t;
    let s_top = map.psi(1.0);
    let mut base_residual: f64 = 0.0;
    let mut frame_residual: f64 = 0.0;
    for l in 0..=refined {
        let u = l as f64 / refined as f64;
        let lhs_base = warped.eval(u, 1.0).point;
        let lhs_frame = lhs_interp.eval(u);
        let v = map.phi(u, 1.0);
        let rhs_base = grid.eval(v, s_top).point;
        let rhs_frame = rhs_interp.eval(v);
        base_residual = base_residual.max((lhs_base - rhs_base).norm());
        frame_residual = frame_residual.max(fro_dist(&lhs_frame, &rhs_frame));
    }
    Ok(ReparamReport {
        residual: base_residual.max(frame_residual),
        base_residual,
        frame_residual,
        fake_curvature_sup: fake,
        connection_gap: gap,
    })
}

/// Differences between transporting over the full surface and over its
/// left half only: a demonstration that path-space transport is not a
/// local functional of the endpoint data. Reported, not asserted.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    /// Distance between the final transport corrections.
    pub c_gap: f64,
    /// Distance between the final surface-ordered elements.
    pub h_gap: f64,
}

/// Runs the transverse transports over the surface restricted to the first
/// half of the row parameter and over the full surface, reporting how far
/// the results drift apart.
pub fn truncated_surface_comparison(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    grid: &SurfaceGrid,
) -> Result<TruncationReport, MathError> {
    let half_grid = grid.restrict_t(0.0, 0.5)?;
    let full = LiftedSurface::new(a, abar, grid)?;
    let half = LiftedSurface::new(a, abar, &half_grid)?;
    let c_full = omega_transport_local(cm, a, abar, b2, &full)?;
    let c_half = omega_transport_local(cm, a, abar, b2, &half)?;
    let h_full = surface_holonomy(cm, b2, &full)?;
    let h_half = surface_holonomy(cm, b2, &half)?;
    Ok(TruncationReport {
        c_gap: fro_dist(
            c_full.last().unwrap().matrix(),
            c_half.last().unwrap().matrix(),
        ),
        h_gap: fro_dist(
            h_full.last().unwrap().matrix(),
            h_half.last().unwrap().matrix(),
        ),
    })
}

/// Cubic interpolation of a matrix-valued table over the uniform unit
/// grid, entry by entry on (re, im) pairs.
struct MatrixPathInterpolator {
    nrows: usize,
    ncols: usize,
    entries: Vec<Vec<Vector2<f64>>>,
}

impl MatrixPathInterpolator {
    fn new(frames: &[CMatrix]) -> Self {
        let (nrows, ncols) = frames[0].shape();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                entries.push(
                    frames
                        .iter()
                        .map(|f| Vector2::new(f[(r, c)].re, f[(r, c)].im))
                        .collect(),
                );
            }
        }
        MatrixPathInterpolator {
            nrows,
            ncols,
            entries,
        }
    }

    fn eval(&self, u: f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                let (p, _) = catmull_rom(&self.entries[r * self.ncols + c], u);
                out[(r, c)] = Complex::new(p.x, p.y);
            }
        }
        out
    }
}
