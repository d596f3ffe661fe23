//! Parametrized paths in the plane and tangent fields along them.
//!
//! Paths are maps `[0,1] -> R^2` described analytically by a [`PathFamily`]
//! and consumed as a [`SampledPath`]: positions and velocities on a uniform
//! node grid plus the interval midpoints. Transport steppers only ever read
//! the sampled tables, so every integrator in the crate sees exactly the
//! same data for a given family and resolution.
//!
//! The node count is always even so that Simpson tables can be formed on the
//! same grid as the ODE steppers.

use nalgebra::Vector2;

use crate::error::MathError;
use crate::fields::{BasePoint, BaseVector};

/// Analytic path families. All are smooth on `[0,1]`; `Points` interpolates
/// its samples with a C^1 Catmull-Rom spline on a uniform parameter grid.
#[derive(Debug, Clone)]
pub enum PathFamily {
    /// Straight line from `from` to `to`.
    Segment { from: BasePoint, to: BasePoint },
    /// Circular arc `center + radius (cos, sin)(angle(t))` with the angle
    /// interpolating linearly between the two endpoints (radians).
    Arc {
        center: BasePoint,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    /// Cubic Bezier curve with four control points.
    CubicBezier { control: [BasePoint; 4] },
    /// Catmull-Rom interpolation through the given samples, which are read
    /// as equally spaced in the parameter.
    Points { points: Vec<BasePoint> },
}

impl PathFamily {
    /// Position and velocity at parameter `t` in `[0,1]`.
    pub fn eval(&self, t: f64) -> (BasePoint, BaseVector) {
        match self {
            PathFamily::Segment { from, to } => (from + t * (to - from), to - from),
            PathFamily::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let sweep = end_angle - start_angle;
                let ang = start_angle + t * sweep;
                let pos = center + *radius * Vector2::new(ang.cos(), ang.sin());
                let vel = *radius * sweep * Vector2::new(-ang.sin(), ang.cos());
                (pos, vel)
            }
            PathFamily::CubicBezier { control } => {
                let [p0, p1, p2, p3] = control;
                let u = 1.0 - t;
                let pos = u * u * u * p0
                    + 3.0 * u * u * t * p1
                    + 3.0 * u * t * t * p2
                    + t * t * t * p3;
                let vel = 3.0 * u * u * (p1 - p0)
                    + 6.0 * u * t * (p2 - p1)
                    + 3.0 * t * t * (p3 - p2);
                (pos, vel)
            }
            PathFamily::Points { points } => catmull_rom(points, t),
        }
    }

    /// Validates the family's own data (not the sampling resolution).
    pub fn validate(&self) -> Result<(), MathError> {
        let finite = |p: &BasePoint| p.x.is_finite() && p.y.is_finite();
        let ok = match self {
            PathFamily::Segment { from, to } => finite(from) && finite(to),
            PathFamily::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                finite(center) && radius.is_finite() && start_angle.is_finite()
                    && end_angle.is_finite()
            }
            PathFamily::CubicBezier { control } => control.iter().all(finite),
            PathFamily::Points { points } => points.len() >= 2 && points.iter().all(finite),
        };
        if ok {
            Ok(())
        } else {
            Err(MathError::GridMismatch {
                reason: "path family has non-finite or insufficient data".into(),
            })
        }
    }
}

/// C^1 Catmull-Rom evaluation on a uniform parameter grid with one-sided
/// end tangents. Returns position and d/dt.
pub(crate) fn catmull_rom(points: &[BasePoint], t: f64) -> (BasePoint, BaseVector) {
    let m = points.len() - 1;
    debug_assert!(m >= 1);
    let u = (t.clamp(0.0, 1.0)) * m as f64;
    let i = (u.floor() as usize).min(m - 1);
    let s = u - i as f64;
    let p0 = points[i];
    let p1 = points[i + 1];
    let tan = |j: usize| -> BaseVector {
        if j == 0 {
            points[1] - points[0]
        } else if j == m {
            points[m] - points[m - 1]
        } else {
            0.5 * (points[j + 1] - points[j - 1])
        }
    };
    let m0 = tan(i);
    let m1 = tan(i + 1);
    let (s2, s3) = (s * s, s * s * s);
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let pos = h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
    let d00 = 6.0 * s2 - 6.0 * s;
    let d10 = 3.0 * s2 - 4.0 * s + 1.0;
    let d01 = -6.0 * s2 + 6.0 * s;
    let d11 = 3.0 * s2 - 2.0 * s;
    // Chain rule: d/dt = m * d/ds on segment i.
    let vel = (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) * m as f64;
    (pos, vel)
}

/// A path sampled on the uniform grid `t_k = k/n` together with interval
/// midpoints; `n` is even.
#[derive(Debug, Clone)]
pub struct SampledPath {
    n: usize,
    points: Vec<BasePoint>,
    velocities: Vec<BaseVector>,
    mid_points: Vec<BasePoint>,
    mid_velocities: Vec<BaseVector>,
}

impl SampledPath {
    /// Samples an analytic family at resolution `n` (even, at least 2).
    pub fn from_family(family: &PathFamily, n: usize) -> Result<Self, MathError> {
        family.validate()?;
        if n < 2 || n % 2 != 0 {
            return Err(MathError::GridMismatch {
                reason: format!("path resolution must be even and >= 2, got {n}"),
            });
        }
        let mut points = Vec::with_capacity(n + 1);
        let mut velocities = Vec::with_capacity(n + 1);
        let mut mid_points = Vec::with_capacity(n);
        let mut mid_velocities = Vec::with_capacity(n);
        for k in 0..=n {
            let (p, v) = family.eval(k as f64 / n as f64);
            points.push(p);
            velocities.push(v);
            if k < n {
                let (pm, vm) = family.eval((k as f64 + 0.5) / n as f64);
                mid_points.push(pm);
                mid_velocities.push(vm);
            }
        }
        Ok(SampledPath {
            n,
            points,
            velocities,
            mid_points,
            mid_velocities,
        })
    }

    /// Builds a path from explicit tables. Lengths must be `n+1` nodes and
    /// `n` midpoints with `n` even.
    pub fn from_tables(
        points: Vec<BasePoint>,
        velocities: Vec<BaseVector>,
        mid_points: Vec<BasePoint>,
        mid_velocities: Vec<BaseVector>,
    ) -> Result<Self, MathError> {
        let n = points.len().saturating_sub(1);
        if n < 2 || n % 2 != 0 || velocities.len() != n + 1 || mid_points.len() != n
            || mid_velocities.len() != n
        {
            return Err(MathError::GridMismatch {
                reason: "inconsistent path table lengths".into(),
            });
        }
        Ok(SampledPath {
            n,
            points,
            velocities,
            mid_points,
            mid_velocities,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `1/n`.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn point(&self, k: usize) -> &BasePoint {
        &self.points[k]
    }

    pub fn velocity(&self, k: usize) -> &BaseVector {
        &self.velocities[k]
    }

    pub fn mid_point(&self, k: usize) -> &BasePoint {
        &self.mid_points[k]
    }

    pub fn mid_velocity(&self, k: usize) -> &BaseVector {
        &self.mid_velocities[k]
    }

    pub fn start(&self) -> &BasePoint {
        &self.points[0]
    }

    pub fn end(&self) -> &BasePoint {
        &self.points[self.n]
    }

    /// The same track traversed backwards: `t -> path(1 - t)`.
    pub fn reversed(&self) -> SampledPath {
        SampledPath {
            n: self.n,
            points: self.points.iter().rev().cloned().collect(),
            velocities: self.velocities.iter().rev().map(|v| -v).collect(),
            mid_points: self.mid_points.iter().rev().cloned().collect(),
            mid_velocities: self.mid_velocities.iter().rev().map(|v| -v).collect(),
        }
    }

    /// Concatenation reparametrized to `[0,1]`: `self` on the first
    /// `n_1/(n_1+n_2)` of the parameter, `other` on the rest. Velocities are
    /// rescaled accordingly; the junction node takes the average of the two
    /// one-sided velocities.
    pub fn concatenate(&self, other: &SampledPath, tol: f64) -> Result<SampledPath, MathError> {
        let gap = (self.end() - other.start()).norm();
        if gap > tol {
            return Err(MathError::GridMismatch {
                reason: format!("concatenation endpoints differ by {gap:.3e}"),
            });
        }
        let n = self.n + other.n;
        let s1 = n as f64 / self.n as f64;
        let s2 = n as f64 / other.n as f64;
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        let mut velocities: Vec<BaseVector> =
            self.velocities.iter().map(|v| v * s1).collect();
        let junction = 0.5 * (self.velocities[self.n] * s1 + other.velocities[0] * s2);
        velocities[self.n] = junction;
        velocities.extend(other.velocities[1..].iter().map(|v| v * s2));
        let mut mid_points = self.mid_points.clone();
        mid_points.extend_from_slice(&other.mid_points);
        let mut mid_velocities: Vec<BaseVector> =
            self.mid_velocities.iter().map(|v| v * s1).collect();
        mid_velocities.extend(other.mid_velocities.iter().map(|v| v * s2));
        SampledPath::from_tables(points, velocities, mid_points, mid_velocities)
    }
}

/// Analytic tangent-vector fields along a path, polynomial in the path
/// parameter: `v(t) = c0 + c1 t + c2 t^2 + c3 t^3`.
#[derive(Debug, Clone)]
pub struct VectorFieldFamily {
    pub c: [BaseVector; 4],
}

impl VectorFieldFamily {
    pub fn constant(v: BaseVector) -> Self {
        VectorFieldFamily {
            c: [v, BaseVector::zeros(), BaseVector::zeros(), BaseVector::zeros()],
        }
    }

    pub fn cubic(c0: BaseVector, c1: BaseVector, c2: BaseVector, c3: BaseVector) -> Self {
        VectorFieldFamily { c: [c0, c1, c2, c3] }
    }

    /// Value and parameter derivative at `t`.
    pub fn eval(&self, t: f64) -> (BaseVector, BaseVector) {
        let [c0, c1, c2, c3] = self.c;
        let value = c0 + t * c1 + t * t * c2 + t * t * t * c3;
        let deriv = c1 + 2.0 * t * c2 + 3.0 * t * t * c3;
        (value, deriv)
    }
}

/// A tangent field sampled at the path nodes.
#[derive(Debug, Clone)]
pub struct TangentField {
    values: Vec<BaseVector>,
}

impl TangentField {
    pub fn from_family(family: &VectorFieldFamily, n: usize) -> TangentField {
        TangentField {
            values: (0..=n)
                .map(|k| family.eval(k as f64 / n as f64).0)
                .collect(),
        }
    }

    pub fn from_values(values: Vec<BaseVector>) -> TangentField {
        TangentField { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize) -> &BaseVector {
        &self.values[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_path_segment_and_arc_sampling() {
        let seg = PathFamily::Segment {
            from: BasePoint::new(0.0, 0.0),
            to: BasePoint::new(2.0, 1.0),
        };
        let p = SampledPath::from_family(&seg, 4).unwrap();
        assert_eq!(p.n(), 4);
        assert!((p.point(2) - BasePoint::new(1.0, 0.5)).norm() < 1e-15);
        assert!((p.mid_point(0) - BasePoint::new(0.25, 0.125)).norm() < 1e-15);
        assert!((p.velocity(3) - BaseVector::new(2.0, 1.0)).norm() < 1e-15);

        let arc = PathFamily::Arc {
            center: BasePoint::new(0.0, 0.0),
            radius: 2.0,
            start_angle: 0.0,
            end_angle: std::f64::consts::PI,
        };
        let a = SampledPath::from_family(&arc, 8).unwrap();
        // Halfway around: top of the circle, velocity pointing in -x.
        assert!((a.point(4) - BasePoint::new(0.0, 2.0)).norm() < 1e-12);
        let v = a.velocity(4);
        assert!((v - BaseVector::new(-2.0 * std::f64::consts::PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn test_path_bezier_velocity_matches_finite_difference() {
        let fam = PathFamily::CubicBezier {
            control: [
                BasePoint::new(0.0, 0.0),
                BasePoint::new(0.4, 1.0),
                BasePoint::new(0.9, -0.3),
                BasePoint::new(1.0, 0.5),
            ],
        };
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let (_, v) = fam.eval(t);
            let h = 1e-6;
            let tp = (t + h).min(1.0 + 1e-3);
            let tm = t - h;
            let fd = (fam.eval(tp).0 - fam.eval(tm).0) / (tp - tm);
            assert!((v - fd).norm() < 1e-6, "t = {t}");
        }
    }

    #[test]
    fn test_path_points_family_interpolates_and_is_c1() {
        let pts = vec![
            BasePoint::new(0.0, 0.0),
            BasePoint::new(0.3, 0.4),
            BasePoint::new(0.6, 0.1),
            BasePoint::new(1.0, 0.0),
        ];
        let fam = PathFamily::Points { points: pts.clone() };
        for (j, p) in pts.iter().enumerate() {
            let t = j as f64 / 3.0;
            assert!((fam.eval(t).0 - p).norm() < 1e-12, "knot {j}");
        }
        // Velocity is continuous across the interior knots.
        for knot in [1.0 / 3.0, 2.0 / 3.0] {
            let before = fam.eval(knot - 1e-9).1;
            let after = fam.eval(knot + 1e-9).1;
            assert!((before - after).norm() < 1e-6);
        }
    }

    #[test]
    fn test_path_rejects_odd_or_tiny_resolution() {
        let seg = PathFamily::Segment {
            from: BasePoint::new(0.0, 0.0),
            to: BasePoint::new(1.0, 0.0),
        };
        assert!(SampledPath::from_family(&seg, 5).is_err());
        assert!(SampledPath::from_family(&seg, 0).is_err());
        assert!(SampledPath::from_family(&seg, 2).is_ok());
    }

    #[test]
    fn test_path_reversal_is_involutive_and_flips_velocity() {
        let arc = PathFamily::Arc {
            center: BasePoint::new(0.5, 0.0),
            radius: 1.0,
            start_angle: 0.3,
            end_angle: 2.0,
        };
        let p = SampledPath::from_family(&arc, 6).unwrap();
        let r = p.reversed();
        assert!((r.point(0) - p.point(6)).norm() < 1e-15);
        assert!((r.velocity(2) + p.velocity(4)).norm() < 1e-15);
        assert!((r.mid_point(0) - p.mid_point(5)).norm() < 1e-15);
        let rr = r.reversed();
        for k in 0..=6 {
            assert!((rr.point(k) - p.point(k)).norm() < 1e-15);
            assert!((rr.velocity(k) - p.velocity(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn test_path_concatenation_rescales_velocities() {
        let s1 = PathFamily::Segment {
            from: BasePoint::new(0.0, 0.0),
            to: BasePoint::new(1.0, 0.0),
        };
        let s2 = PathFamily::Segment {
            from: BasePoint::new(1.0, 0.0),
            to: BasePoint::new(1.0, 2.0),
        };
        let p1 = SampledPath::from_family(&s1, 4).unwrap();
        let p2 = SampledPath::from_family(&s2, 4).unwrap();
        let cat = p1.concatenate(&p2, 1e-12).unwrap();
        assert_eq!(cat.n(), 8);
        // First half moves at twice the segment speed.
        assert!((cat.mid_velocity(0) - BaseVector::new(2.0, 0.0)).norm() < 1e-15);
        assert!((cat.mid_velocity(7) - BaseVector::new(0.0, 4.0)).norm() < 1e-15);
        assert!((cat.point(4) - BasePoint::new(1.0, 0.0)).norm() < 1e-15);
        // Mismatched endpoints are rejected.
        let far = SampledPath::from_family(
            &PathFamily::Segment {
                from: BasePoint::new(3.0, 0.0),
                to: BasePoint::new(4.0, 0.0),
            },
            4,
        )
        .unwrap();
        assert!(p1.concatenate(&far, 1e-9).is_err());
    }

    #[test]
    fn test_path_tangent_field_polynomial_evaluation() {
        let vf = VectorFieldFamily::cubic(
            BaseVector::new(1.0, 0.0),
            BaseVector::new(0.0, 2.0),
            BaseVector::new(-1.0, 0.0),
            BaseVector::new(0.0, 1.0),
        );
        let (v, dv) = vf.eval(0.5);
        assert!((v - BaseVector::new(1.0 - 0.25, 1.0 + 0.125)).norm() < 1e-15);
        assert!((dv - BaseVector::new(-1.0, 2.0 + 0.75)).norm() < 1e-15);
        let tf = TangentField::from_family(&vf, 4);
        assert_eq!(tf.len(), 5);
        assert!((tf.value(2) - v).norm() < 1e-15);
    }
}
