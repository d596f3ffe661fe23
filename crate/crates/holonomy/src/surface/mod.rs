//! Parametrized surfaces on the plane, viewed as paths of paths.
//!
//! A surface is a smooth map `(t, s) -> Gamma(t, s)` from the unit square
//! into the plane; for fixed `s` the map `t -> Gamma(t, s)` is one member
//! path ("row") of the family. [`SurfaceGrid`] pairs an analytic family
//! with an even sampling resolution in each direction and hands out rows,
//! columns, and pointwise jets (value plus both partials) to the transport
//! machinery in [`transport`](crate::surface::transport).
//!
//! [`Reparametrization`] is the polynomial family
//!
//! ```text
//! phi(t, s) = t + a s(1-s) t(1-t),      psi(s) = s + b s(1-s)
//! ```
//!
//! with `|a|, |b| < 1`. Every member fixes the four corners, maps each
//! boundary edge into itself, and has strictly positive `d phi / d t` and
//! `d psi / d s`; the restrictions to the bottom and top edges are the
//! identity. [`reparametrize_surface`] composes a grid with such a map,
//! propagating partials by the chain rule.

pub mod transport;
pub mod verify;

pub use transport::{
    biholonomy_loop, omega_transport_local, surface_holonomy, surface_holonomy_segment,
    theta_transport, LiftedSurface,
};
pub use verify::{
    ev1_transport_check, reparam_condition_residuals, truncated_surface_comparison,
    verify_reparam, verify_reparam_unchecked, verify_tgb, CompositionReport,
    EndpointTransportReport, ReparamReport, TruncationReport,
};

use crate::error::MathError;
use crate::fields::{BasePoint, BaseVector};
use crate::path::{catmull_rom, PathFamily, SampledPath};

/// Value and first partials of a surface at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePoint {
    pub point: BasePoint,
    pub d_t: BaseVector,
    pub d_s: BaseVector,
}

/// Analytic surface families with closed-form partials.
#[derive(Debug, Clone)]
pub enum SurfaceFamily {
    /// `Gamma(t, s) = (t, s)`.
    IdentitySquare,
    /// The identity square warped by transverse sine bumps:
    /// `(t + a s(1-s) sin(pi t), s + a t(1-t) sin(pi s))`. Injective for
    /// `|a| <= 1/2`.
    Warp { amplitude: f64 },
    /// Linear interpolation between two member paths:
    /// `(1-s) bottom(t) + s top(t)`. With `bottom = top` this is a constant
    /// path of paths.
    Ruled { bottom: PathFamily, top: PathFamily },
    /// Separable bicubic interpolation of a rectangular array of points;
    /// `rows[j]` holds the knots of the row at `s = j/(rows.len()-1)`.
    Points { rows: Vec<Vec<BasePoint>> },
}

impl SurfaceFamily {
    pub fn eval(&self, t: f64, s: f64) -> SurfacePoint {
        match self {
            SurfaceFamily::IdentitySquare => SurfacePoint {
                point: BasePoint::new(t, s),
                d_t: BaseVector::new(1.0, 0.0),
                d_s: BaseVector::new(0.0, 1.0),
            },
            SurfaceFamily::Warp { amplitude: a } => {
                let pi = std::f64::consts::PI;
                let (st, ct) = ((pi * t).sin(), (pi * t).cos());
                let (ss, cs) = ((pi * s).sin(), (pi * s).cos());
                SurfacePoint {
                    point: BasePoint::new(
                        t + a * s * (1.0 - s) * st,
                        s + a * t * (1.0 - t) * ss,
                    ),
                    d_t: BaseVector::new(
                        1.0 + a * s * (1.0 - s) * pi * ct,
                        a * (1.0 - 2.0 * t) * ss,
                    ),
                    d_s: BaseVector::new(
                        a * (1.0 - 2.0 * s) * st,
                        1.0 + a * t * (1.0 - t) * pi * cs,
                    ),
                }
            }
            SurfaceFamily::Ruled { bottom, top } => {
                let (pb, vb) = bottom.eval(t);
                let (pt, vt) = top.eval(t);
                SurfacePoint {
                    point: (1.0 - s) * pb + s * pt,
                    d_t: (1.0 - s) * vb + s * vt,
                    d_s: pt - pb,
                }
            }
            SurfaceFamily::Points { rows } => {
                // Interpolate each row in t, then the value column and the
                // t-derivative column in s.
                let mut values = Vec::with_capacity(rows.len());
                let mut t_derivs = Vec::with_capacity(rows.len());
                for row in rows {
                    let (p, v) = catmull_rom(row, t);
                    values.push(p);
                    t_derivs.push(BasePoint::new(v.x, v.y));
                }
                let (point, d_s) = catmull_rom(&values, s);
                let (d_t, _) = catmull_rom(&t_derivs, s);
                SurfacePoint {
                    point,
                    d_t: BaseVector::new(d_t.x, d_t.y),
                    d_s,
                }
            }
        }
    }

    pub fn validate(&self) -> Result<(), MathError> {
        let fail = |reason: &str| {
            Err(MathError::GridMismatch {
                reason: reason.into(),
            })
        };
        match self {
            SurfaceFamily::IdentitySquare => Ok(()),
            SurfaceFamily::Warp { amplitude } => {
                if !amplitude.is_finite() || amplitude.abs() > 0.5 {
                    fail("warp amplitude must be finite with |amplitude| <= 0.5")
                } else {
                    Ok(())
                }
            }
            SurfaceFamily::Ruled { bottom, top } => {
                bottom.validate()?;
                top.validate()
            }
            SurfaceFamily::Points { rows } => {
                if rows.len() < 2 {
                    return fail("point surface needs at least two rows");
                }
                let width = rows[0].len();
                if width < 2 {
                    return fail("point surface rows need at least two knots");
                }
                for row in rows {
                    if row.len() != width {
                        return fail("point surface rows must have equal lengths");
                    }
                    if row.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
                        return fail("point surface has non-finite knots");
                    }
                }
                Ok(())
            }
        }
    }
}

/// The polynomial square reparametrization `(t, s) -> (phi(t, s), psi(s))`.
#[derive(Debug, Clone)]
pub struct Reparametrization {
    a: f64,
    b: f64,
    mode: String,
}

impl Reparametrization {
    /// `mode` labels which hypothesis a scenario claims for the map and must
    /// be `"i"` or `"ii"`; the map itself is the same polynomial family.
    pub fn new(a: f64, b: f64, mode: &str) -> Result<Self, MathError> {
        if mode != "i" && mode != "ii" {
            return Err(MathError::GridMismatch {
                reason: format!("reparametrization mode must be \"i\" or \"ii\", got {mode:?}"),
            });
        }
        if !a.is_finite() || !b.is_finite() || a.abs() >= 1.0 || b.abs() >= 1.0 {
            return Err(MathError::NotDiffeo {
                reason: format!(
                    "reparametrization parameters must satisfy |a| < 1 and |b| < 1, got a={a}, b={b}"
                ),
            });
        }
        Ok(Reparametrization {
            a,
            b,
            mode: mode.to_string(),
        })
    }

    pub fn identity() -> Self {
        Reparametrization {
            a: 0.0,
            b: 0.0,
            mode: "i".into(),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn mode(&self) -> &str {
        &self.mode
    }

    pub fn phi(&self, t: f64, s: f64) -> f64 {
        t + self.a * s * (1.0 - s) * t * (1.0 - t)
    }

    pub fn dphi_dt(&self, t: f64, s: f64) -> f64 {
        1.0 + self.a * s * (1.0 - s) * (1.0 - 2.0 * t)
    }

    pub fn dphi_ds(&self, t: f64, s: f64) -> f64 {
        self.a * (1.0 - 2.0 * s) * t * (1.0 - t)
    }

    pub fn psi(&self, s: f64) -> f64 {
        s + self.b * s * (1.0 - s)
    }

    pub fn dpsi_ds(&self, s: f64) -> f64 {
        1.0 + self.b * (1.0 - 2.0 * s)
    }

    /// Monotonicity check on a sample grid: `d phi / d t > 0` and
    /// `d psi / d s > 0` everywhere. For the polynomial family the
    /// constructor bounds already imply this; the check guards the
    /// invariant directly.
    pub fn validate_on_grid(&self, samples: usize) -> Result<(), MathError> {
        let m = samples.max(2);
        for j in 0..=m {
            let s = j as f64 / m as f64;
            if self.dpsi_ds(s) <= 0.0 {
                return Err(MathError::NotDiffeo {
                    reason: format!("psi'({s}) = {} is not positive", self.dpsi_ds(s)),
                });
            }
            for i in 0..=m {
                let t = i as f64 / m as f64;
                if self.dphi_dt(t, s) <= 0.0 {
                    return Err(MathError::NotDiffeo {
                        reason: format!(
                            "d phi/d t at (t, s) = ({t}, {s}) is {}, not positive",
                            self.dphi_dt(t, s)
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum SurfaceSource {
    Family(SurfaceFamily),
    Reparametrized {
        inner: Box<SurfaceGrid>,
        map: Reparametrization,
    },
    /// Restriction of `inner` to `t` in `[t0, t1]`, rescaled back to the
    /// unit square in the row parameter.
    TimeWindow {
        inner: Box<SurfaceGrid>,
        t0: f64,
        t1: f64,
    },
}

/// A surface with a chosen sampling resolution: `n_t` row intervals and
/// `n_s` family intervals, both even.
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    n_t: usize,
    n_s: usize,
    source: SurfaceSource,
}

impl SurfaceGrid {
    pub fn new(family: SurfaceFamily, n_t: usize, n_s: usize) -> Result<Self, MathError> {
        family.validate()?;
        check_resolution(n_t, n_s)?;
        let grid = SurfaceGrid {
            n_t,
            n_s,
            source: SurfaceSource::Family(family),
        };
        if let SurfaceSource::Family(SurfaceFamily::Points { .. }) = &grid.source {
            let dev = grid.partials_fd_deviation();
            if dev > 1e-4 {
                return Err(MathError::GridMismatch {
                    reason: format!(
                        "point-surface partials deviate from central differences by {dev:.3e} (tolerance 1e-4)"
                    ),
                });
            }
        }
        Ok(grid)
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn t_value(&self, i: usize) -> f64 {
        i as f64 / self.n_t as f64
    }

    pub fn s_value(&self, j: usize) -> f64 {
        j as f64 / self.n_s as f64
    }

    pub fn eval(&self, t: f64, s: f64) -> SurfacePoint {
        match &self.source {
            SurfaceSource::Family(family) => family.eval(t, s),
            SurfaceSource::Reparametrized { inner, map } => {
                let jet = inner.eval(map.phi(t, s), map.psi(s));
                SurfacePoint {
                    point: jet.point,
                    d_t: jet.d_t * map.dphi_dt(t, s),
                    d_s: jet.d_t * map.dphi_ds(t, s) + jet.d_s * map.dpsi_ds(s),
                }
            }
            SurfaceSource::TimeWindow { inner, t0, t1 } => {
                let width = t1 - t0;
                let jet = inner.eval(t0 + width * t, s);
                SurfacePoint {
                    point: jet.point,
                    d_t: jet.d_t * width,
                    d_s: jet.d_s,
                }
            }
        }
    }

    /// Jet at the grid node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> SurfacePoint {
        self.eval(self.t_value(i), self.s_value(j))
    }

    /// The member path at height `s`, sampled at resolution `n` with row
    /// velocities.
    pub fn row_path(&self, s: f64, n: usize) -> Result<SampledPath, MathError> {
        let mut points = Vec::with_capacity(n + 1);
        let mut velocities = Vec::with_capacity(n + 1);
        let mut mid_points = Vec::with_capacity(n);
        let mut mid_velocities = Vec::with_capacity(n);
        for k in 0..=n {
            let jet = self.eval(k as f64 / n as f64, s);
            points.push(jet.point);
            velocities.push(jet.d_t);
            if k < n {
                let jm = self.eval((k as f64 + 0.5) / n as f64, s);
                mid_points.push(jm.point);
                mid_velocities.push(jm.d_t);
            }
        }
        SampledPath::from_tables(points, velocities, mid_points, mid_velocities)
    }

    /// The transverse path `s -> Gamma(t, s)` at fixed `t`, sampled at
    /// resolution `n` with family velocities.
    pub fn column_path(&self, t: f64, n: usize) -> Result<SampledPath, MathError> {
        let mut points = Vec::with_capacity(n + 1);
        let mut velocities = Vec::with_capacity(n + 1);
        let mut mid_points = Vec::with_capacity(n);
        let mut mid_velocities = Vec::with_capacity(n);
        for k in 0..=n {
            let jet = self.eval(t, k as f64 / n as f64);
            points.push(jet.point);
            velocities.push(jet.d_s);
            if k < n {
                let jm = self.eval(t, (k as f64 + 0.5) / n as f64);
                mid_points.push(jm.point);
                mid_velocities.push(jm.d_s);
            }
        }
        SampledPath::from_tables(points, velocities, mid_points, mid_velocities)
    }

    /// Restricts to `t` in `[t0, t1]`, keeping resolutions. The result's
    /// rows traverse only the selected portion of each member path.
    pub fn restrict_t(&self, t0: f64, t1: f64) -> Result<SurfaceGrid, MathError> {
        if !(0.0..1.0).contains(&t0) || !(t0..=1.0).contains(&t1) || t0 >= t1 {
            return Err(MathError::GridMismatch {
                reason: format!("invalid row window [{t0}, {t1}]"),
            });
        }
        Ok(SurfaceGrid {
            n_t: self.n_t,
            n_s: self.n_s,
            source: SurfaceSource::TimeWindow {
                inner: Box::new(self.clone()),
                t0,
                t1,
            },
        })
    }

    /// Largest deviation between stored partials and small-step central
    /// differences of the evaluated map, probed at cell midpoints; a
    /// validation diagnostic. Midpoints keep the probes away from the knots
    /// of piecewise interpolants, where second derivatives may jump.
    pub fn partials_fd_deviation(&self) -> f64 {
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for j in 0..self.n_s {
            for i in 0..self.n_t {
                let t = (i as f64 + 0.5) / self.n_t as f64;
                let s = (j as f64 + 0.5) / self.n_s as f64;
                let jet = self.eval(t, s);
                let fd_t = (self.eval(t + h, s).point - self.eval(t - h, s).point) / (2.0 * h);
                let fd_s = (self.eval(t, s + h).point - self.eval(t, s - h).point) / (2.0 * h);
                worst = worst.max((fd_t - jet.d_t).norm());
                worst = worst.max((fd_s - jet.d_s).norm());
            }
        }
        worst
    }
}

fn check_resolution(n_t: usize, n_s: usize) -> Result<(), MathError> {
    if n_t < 2 || n_t % 2 != 0 || n_s < 2 || n_s % 2 != 0 {
        return Err(MathError::GridMismatch {
            reason: format!("surface resolutions must be even and >= 2, got ({n_t}, {n_s})"),
        });
    }
    Ok(())
}

/// Composes a surface with a reparametrization of the unit square; the
/// result evaluates `Gamma(phi(t, s), psi(s))` with chain-rule partials.
pub fn reparametrize_surface(
    grid: &SurfaceGrid,
    map: &Reparametrization,
) -> Result<SurfaceGrid, MathError> {
    map.validate_on_grid(32)?;
    Ok(SurfaceGrid {
        n_t: grid.n_t,
        n_s: grid.n_s,
        source: SurfaceSource::Reparametrized {
            inner: Box::new(grid.clone()),
            map: map.clone(),
        },
    })
}
