//! Transport machinery over a surface: row lifts, edge transports,
//! bi-holonomy, and the three transverse ODEs (surface-ordered `H`
//! element, path-space transport correction, and the two-form line
//! transport).
//!
//! A [`LiftedSurface`] samples the family at half-level resolution in `s`
//! (`2 n_s + 1` rows) so that the transverse ODEs can take midpoint steps
//! of size `1/n_s` while reading stored data at the half levels. The edge
//! transports run on the same doubled grid, which keeps every prefix of
//! the left and right edge products aligned with the rows: the closed-form
//! bi-holonomy assembled from stored frames then agrees with an explicit
//! four-leg loop composition to roundoff, making that comparison a pure
//! convention-and-assembly check.
//!
//! Transverse ODEs are stepped with the midpoint-exponential rule,
//! `y_{k+1} = exp(-h K(s_{k+1/2})) y_k`, where the coefficient `K` is a
//! `t`-integral (Simpson) evaluated on the stored half-level row.

use crate::cross::CrossedModule;
use crate::error::MathError;
use crate::fields::{ConnectionField, TwoFormField};
use crate::lie::{AlgebraElement, CMatrix, GroupElement, GroupTag};
use crate::omega::{chen_integral, omega_local_eval};
use crate::path::TangentField;
use crate::quad;
use crate::surface::SurfaceGrid;
use crate::transport::{transport_frames, LiftedPath};

/// Row lifts and edge transports of a surface, stored at half-level
/// resolution in the family direction.
#[derive(Debug, Clone)]
pub struct LiftedSurface {
    tag: GroupTag,
    grid: SurfaceGrid,
    n_t: usize,
    n_s: usize,
    /// Identity-seeded horizontal lift of the row at `s = j/(2 n_s)`.
    rows: Vec<LiftedPath>,
    /// Transverse velocities `d Gamma / d s` at the row nodes, per half level.
    transverse: Vec<TangentField>,
    /// Left edge transport by the second connection, on the doubled grid.
    left_edge: LiftedPath,
    /// Right edge transport by the second connection, on the doubled grid.
    right_edge: LiftedPath,
}

impl LiftedSurface {
    /// Lifts every half-level row along `abar` and both vertical edges
    /// along `a`.
    pub fn new(
        a: &ConnectionField,
        abar: &ConnectionField,
        grid: &SurfaceGrid,
    ) -> Result<Self, MathError> {
        if a.tag() != abar.tag() {
            return Err(MathError::TagMismatch {
                expected: abar.tag().to_string(),
                found: a.tag().to_string(),
            });
        }
        let tag = abar.tag().clone();
        let n_t = grid.n_t();
        let n_s = grid.n_s();
        let half = 2 * n_s;
        let seed = GroupElement::identity(tag.clone());
        let mut rows = Vec::with_capacity(half + 1);
        let mut transverse = Vec::with_capacity(half + 1);
        for j in 0..=half {
            let s = j as f64 / half as f64;
            let path = grid.row_path(s, n_t)?;
            rows.push(transport_frames(abar, &path, &seed)?);
            let values: Vec<_> = (0..=n_t)
                .map(|i| grid.eval(i as f64 / n_t as f64, s).d_s)
                .collect();
            transverse.push(TangentField::from_values(values));
        }
        let left_edge = transport_frames(a, &grid.column_path(0.0, half)?, &seed)?;
        let right_edge = transport_frames(a, &grid.column_path(1.0, half)?, &seed)?;
        Ok(LiftedSurface {
            tag,
            grid: grid.clone(),
            n_t,
            n_s,
            rows,
            transverse,
            left_edge,
            right_edge,
        })
    }

    pub fn tag(&self) -> &GroupTag {
        &self.tag
    }

    pub fn grid(&self) -> &SurfaceGrid {
        &self.grid
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    /// Number of half levels (`2 n_s`); row and edge indices run `0..=`this.
    pub fn half_levels(&self) -> usize {
        2 * self.n_s
    }

    /// The identity-seeded row lift at half level `j`.
    pub fn row(&self, j: usize) -> &LiftedPath {
        &self.rows[j]
    }

    /// The row lift at integer level `k` (half level `2k`).
    pub fn row_at_level(&self, k: usize) -> &LiftedPath {
        &self.rows[2 * k]
    }

    /// Transverse velocity field along the row at half level `j`.
    pub fn transverse_velocities(&self, j: usize) -> &TangentField {
        &self.transverse[j]
    }

    /// Left-edge transport `a_0` at half level `j`.
    pub fn left_edge(&self, j: usize) -> GroupElement {
        self.left_edge.frame_group(j)
    }

    /// Right-edge transport `a_1` at half level `j`.
    pub fn right_edge(&self, j: usize) -> GroupElement {
        self.right_edge.frame_group(j)
    }

    pub fn left_edge_path(&self) -> &LiftedPath {
        &self.left_edge
    }

    pub fn right_edge_path(&self) -> &LiftedPath {
        &self.right_edge
    }

    /// Frame of the surface lift at row node `i`, half level `j`:
    /// `abar-row-frame(t_i) * a_0(s_j)`.
    pub fn surface_frame(&self, i: usize, j: usize) -> CMatrix {
        self.rows[j].frame(i) * self.left_edge.frame(j)
    }

    /// Bi-holonomy at the right edge, assembled from stored frames:
    /// `a_0(s)^(-1) abar_s(1)^(-1) a_1(s) abar_0(1)` at half level `j`.
    pub fn biholonomy_closed_form(&self, j: usize) -> GroupElement {
        let m = self.left_edge.frame(j).adjoint()
            * self.rows[j].frame(self.n_t).adjoint()
            * self.right_edge.frame(j)
            * self.rows[0].frame(self.n_t);
        GroupElement::from_matrix(self.tag.clone(), m)
    }

    /// Worst deviation of any stored frame from the group manifold.
    pub fn group_drift(&self) -> f64 {
        let rows = self
            .rows
            .iter()
            .map(LiftedPath::group_drift)
            .fold(0.0, f64::max);
        rows.max(self.left_edge.group_drift())
            .max(self.right_edge.group_drift())
    }
}

/// Bi-holonomy by explicit loop composition: transport along the bottom
/// row to `t`, up the column at `t`, back along the row at `s`, and down
/// the left edge, read off as the right-translation at the base corner.
/// Row legs use resolution `n_t`, column legs the doubled `2 n_s`.
pub fn biholonomy_loop(
    a: &ConnectionField,
    abar: &ConnectionField,
    grid: &SurfaceGrid,
    t_idx: usize,
    s_idx: usize,
) -> Result<GroupElement, MathError> {
    let n_t = grid.n_t();
    let n_s = grid.n_s();
    if t_idx > n_t || s_idx > n_s {
        return Err(MathError::GridMismatch {
            reason: format!(
                "loop corner ({t_idx}, {s_idx}) outside grid ({n_t}, {n_s})"
            ),
        });
    }
    let tag = abar.tag().clone();
    let seed = GroupElement::identity(tag.clone());
    let t = t_idx as f64 / n_t as f64;
    let s = s_idx as f64 / n_s as f64;
    let bottom = transport_frames(abar, &grid.row_path(0.0, n_t)?, &seed)?;
    let column = transport_frames(a, &grid.column_path(t, 2 * n_s)?, &seed)?;
    let back = transport_frames(abar, &grid.row_path(s, n_t)?, &seed)?;
    let down = transport_frames(a, &grid.column_path(0.0, 2 * n_s)?, &seed)?;
    let m = down.frame(2 * s_idx).adjoint()
        * back.frame(t_idx).adjoint()
        * column.frame(2 * s_idx)
        * bottom.frame(t_idx);
    Ok(GroupElement::from_matrix(tag, m))
}

/// Surface-ordered transport in `H`: solves
///
/// ```text
/// h'(s) h(s)^(-1) = -integral_0^1 alpha((abar_s(t) a_0(s) g(1,s))^(-1))
///                                 B(dGamma/dt, dGamma/ds) dt
/// ```
///
/// with `h(0) = e`, returning the value at every integer level.
pub fn surface_holonomy(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lift: &LiftedSurface,
) -> Result<Vec<GroupElement>, MathError> {
    let seed = GroupElement::identity(cm.h_tag().clone());
    surface_holonomy_segment(cm, b2, lift, 0, lift.n_s(), &seed)
}

/// The same flow restricted to integer levels `from..=to`, started from
/// `seed`; composing two stages reproduces the full run exactly.
pub fn surface_holonomy_segment(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lift: &LiftedSurface,
    from: usize,
    to: usize,
    seed: &GroupElement,
) -> Result<Vec<GroupElement>, MathError> {
    check_surface_tags(cm, b2, lift)?;
    if seed.tag() != cm.h_tag() {
        return Err(MathError::TagMismatch {
            expected: cm.h_tag().to_string(),
            found: seed.tag().to_string(),
        });
    }
    if from > to || to > lift.n_s() {
        return Err(MathError::GridMismatch {
            reason: format!("invalid level range {from}..={to} for n_s = {}", lift.n_s()),
        });
    }
    let ds = 1.0 / lift.n_s() as f64;
    let mut out = Vec::with_capacity(to - from + 1);
    out.push(seed.clone());
    for k in from..to {
        let j = 2 * k + 1;
        let coeff = ordered_area_coefficient(cm, b2, lift, j)?;
        let step = coeff.scale(-ds).exp();
        out.push(step.mul(out.last().unwrap())?);
    }
    Ok(out)
}

/// The `t`-integral driving [`surface_holonomy`] at half level `j`.
fn ordered_area_coefficient(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lift: &LiftedSurface,
    j: usize,
) -> Result<AlgebraElement, MathError> {
    let row = lift.row(j);
    let vel = lift.transverse_velocities(j);
    let n_t = lift.n_t();
    let tail = lift.left_edge.frame(j) * lift.biholonomy_closed_form(j).matrix();
    let mut values = Vec::with_capacity(n_t + 1);
    for i in 0..=n_t {
        let u = GroupElement::from_matrix(lift.tag().clone(), row.frame(i) * &tail);
        let b = b2.contract(row.path().point(i), row.path().velocity(i), vel.value(i))?;
        values.push(cm.alpha_alg(&u.inverse(), &b)?.matrix().clone());
    }
    let total = quad::simpson_total(&values, row.path().h())?;
    Ok(AlgebraElement::from_matrix(cm.h_tag().clone(), total))
}

/// Path-space transport correction: solves `c'(s) = -W(s) c(s)`, `c(0) = e`,
/// where `W(s)` is the path-space connection evaluated on the variation of
/// the identity-seeded row lifts. Returned at every integer level.
pub fn omega_transport_local(
    cm: &CrossedModule,
    a: &ConnectionField,
    abar: &ConnectionField,
    b2: &TwoFormField,
    lift: &LiftedSurface,
) -> Result<Vec<GroupElement>, MathError> {
    check_surface_tags(cm, b2, lift)?;
    let ds = 1.0 / lift.n_s() as f64;
    let mut out = Vec::with_capacity(lift.n_s() + 1);
    out.push(GroupElement::identity(lift.tag().clone()));
    for k in 0..lift.n_s() {
        let j = 2 * k + 1;
        let w = omega_local_eval(
            cm,
            a,
            abar,
            b2,
            lift.row(j),
            lift.transverse_velocities(j),
        )?;
        let step = w.scale(-ds).exp();
        out.push(step.mul(out.last().unwrap())?);
    }
    Ok(out)
}

/// Transport by the `H`-valued form associated with the row lifts: solves
/// `b'(s) = -K(s) b(s)` with `K(s)` the line integral of
/// `alpha(abar-frame^(-1)) B(dGamma/dt, dGamma/ds)` along the row.
pub fn theta_transport(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lift: &LiftedSurface,
) -> Result<Vec<GroupElement>, MathError> {
    check_surface_tags(cm, b2, lift)?;
    let ds = 1.0 / lift.n_s() as f64;
    let mut out = Vec::with_capacity(lift.n_s() + 1);
    out.push(GroupElement::identity(cm.h_tag().clone()));
    for k in 0..lift.n_s() {
        let j = 2 * k + 1;
        let coeff = chen_integral(cm, b2, lift.row(j), lift.transverse_velocities(j))?;
        let step = coeff.scale(-ds).exp();
        out.push(step.mul(out.last().unwrap())?);
    }
    Ok(out)
}

fn check_surface_tags(
    cm: &CrossedModule,
    b2: &TwoFormField,
    lift: &LiftedSurface,
) -> Result<(), MathError> {
    if cm.g_tag() != lift.tag() {
        return Err(MathError::TagMismatch {
            expected: cm.g_tag().to_string(),
            found: lift.tag().to_string(),
        });
    }
    if b2.tag() != cm.h_tag() {
        return Err(MathError::TagMismatch {
            expected: cm.h_tag().to_string(),
            found: b2.tag().to_string(),
        });
    }
    Ok(())
}
