//! Lie-algebra-valued fields on the plane.
//!
//! The base manifold throughout the crate is `R^2` with coordinates
//! `(x1, x2)`. A [`ConnectionField`] is a one-form `A = A_1 dx1 + A_2 dx2`
//! whose components take values in a fixed matrix Lie algebra; a
//! [`TwoFormField`] is `B = B_12 dx1 ^ dx2` with values in the algebra of the
//! second group of a crossed module.
//!
//! Every shipped family stores its components in a quadratic monomial basis
//! `{1, x1, x2, x1^2, x1 x2, x2^2}`, so evaluation and the coordinate
//! partial derivatives are exact (no numerical differentiation on the hot
//! path; finite differences appear only as cross-checks in tests). The one
//! exception is the curvature-cancelling two-form, which evaluates another
//! field's curvature on demand.

use nalgebra::Vector2;

use crate::cross::CrossedModule;
use crate::error::MathError;
use crate::lie::{AlgebraElement, GroupElement, GroupTag};

/// A point of the base plane.
pub type BasePoint = Vector2<f64>;
/// A tangent vector to the base plane.
pub type BaseVector = Vector2<f64>;

const MONOMIALS: usize = 6;

fn monomials(p: &BasePoint) -> [f64; MONOMIALS] {
    let (x, y) = (p.x, p.y);
    [1.0, x, y, x * x, x * y, y * y]
}

/// d(monomial)/dx1 evaluated at `p`.
fn monomials_d1(p: &BasePoint) -> [f64; MONOMIALS] {
    let (x, y) = (p.x, p.y);
    [0.0, 1.0, 0.0, 2.0 * x, y, 0.0]
}

/// d(monomial)/dx2 evaluated at `p`.
fn monomials_d2(p: &BasePoint) -> [f64; MONOMIALS] {
    let (x, y) = (p.x, p.y);
    [0.0, 0.0, 1.0, 0.0, x, 2.0 * y]
}

fn combine(
    tag: &GroupTag,
    coeffs: &[AlgebraElement; MONOMIALS],
    weights: &[f64; MONOMIALS],
) -> AlgebraElement {
    let mut acc = AlgebraElement::zero(tag.clone());
    for (c, w) in coeffs.iter().zip(weights) {
        if *w != 0.0 {
            acc = acc.add(&c.scale(*w)).expect("uniform tags");
        }
    }
    acc
}

fn check_finite(
    value: &AlgebraElement,
    p: &BasePoint,
    what: &str,
) -> Result<(), MathError> {
    if value.matrix().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(MathError::FieldEvaluation {
            x: p.x,
            y: p.y,
            reason: format!("{what} produced a non-finite entry"),
        })
    }
}

fn zero_row(tag: &GroupTag) -> [AlgebraElement; MONOMIALS] {
    std::array::from_fn(|_| AlgebraElement::zero(tag.clone()))
}

/// Lie-algebra-valued connection one-form on the plane with components that
/// are (at most) quadratic polynomials in the coordinates.
#[derive(Debug, Clone)]
pub struct ConnectionField {
    tag: GroupTag,
    family: String,
    /// `coeffs[mu][m]` multiplies monomial `m` in component `A_{mu+1}`.
    coeffs: [[AlgebraElement; MONOMIALS]; 2],
}

impl ConnectionField {
    /// The zero connection.
    pub fn zero(tag: GroupTag) -> Self {
        let coeffs = [zero_row(&tag), zero_row(&tag)];
        ConnectionField {
            tag,
            family: "zero".into(),
            coeffs,
        }
    }

    /// Constant components `A_1 = c1`, `A_2 = c2`.
    pub fn constant(c1: AlgebraElement, c2: AlgebraElement) -> Result<Self, MathError> {
        let tag = c1.tag().clone();
        if c2.tag() != &tag {
            return Err(MathError::TagMismatch {
                expected: tag.to_string(),
                found: c2.tag().to_string(),
            });
        }
        let mut coeffs = [zero_row(&tag), zero_row(&tag)];
        coeffs[0][0] = c1;
        coeffs[1][0] = c2;
        Ok(ConnectionField {
            tag,
            family: "constant".into(),
            coeffs,
        })
    }

    /// Affine components `A_mu = c[mu] + sum_nu d[mu][nu] x_nu`.
    pub fn affine(
        c: [AlgebraElement; 2],
        d: [[AlgebraElement; 2]; 2],
    ) -> Result<Self, MathError> {
        let tag = c[0].tag().clone();
        for elt in c.iter().chain(d.iter().flatten()) {
            if elt.tag() != &tag {
                return Err(MathError::TagMismatch {
                    expected: tag.to_string(),
                    found: elt.tag().to_string(),
                });
            }
        }
        let mut coeffs = [zero_row(&tag), zero_row(&tag)];
        let [c1, c2] = c;
        let [[d11, d12], [d21, d22]] = d;
        coeffs[0][0] = c1;
        coeffs[0][1] = d11;
        coeffs[0][2] = d12;
        coeffs[1][0] = c2;
        coeffs[1][1] = d21;
        coeffs[1][2] = d22;
        Ok(ConnectionField {
            tag,
            family: "affine".into(),
            coeffs,
        })
    }

    /// Magnetic-gauge field: component `A_axis` equals `b * x_other *
    /// direction` and the other component vanishes. With `axis = 2` this is
    /// `A = (0, b x1 K)`, whose curvature is the constant `b K`.
    pub fn landau(b: f64, axis: usize, direction: AlgebraElement) -> Result<Self, MathError> {
        if axis != 1 && axis != 2 {
            return Err(MathError::FieldEvaluation {
                x: 0.0,
                y: 0.0,
                reason: format!("landau axis must be 1 or 2, got {axis}"),
            });
        }
        let tag = direction.tag().clone();
        let mut coeffs = [zero_row(&tag), zero_row(&tag)];
        // monomial index 1 is x1, index 2 is x2
        let monomial = if axis == 2 { 1 } else { 2 };
        coeffs[axis - 1][monomial] = direction.scale(b);
        Ok(ConnectionField {
            tag,
            family: "landau".into(),
            coeffs,
        })
    }

    /// Fully general quadratic components: `coeffs[mu][m]` multiplies the
    /// monomial `{1, x1, x2, x1^2, x1 x2, x2^2}[m]` in `A_{mu+1}`.
    pub fn poly2(coeffs: [[AlgebraElement; MONOMIALS]; 2]) -> Result<Self, MathError> {
        let tag = coeffs[0][0].tag().clone();
        for elt in coeffs.iter().flatten() {
            if elt.tag() != &tag {
                return Err(MathError::TagMismatch {
                    expected: tag.to_string(),
                    found: elt.tag().to_string(),
                });
            }
        }
        Ok(ConnectionField {
            tag,
            family: "poly2".into(),
            coeffs,
        })
    }

    /// Quadratic-polynomial connection with all twelve coefficients drawn
    /// uniformly from the algebra ball of radius `scale`.
    pub fn random_poly2<R: rand::Rng>(
        tag: &GroupTag,
        rng: &mut R,
        scale: f64,
    ) -> Result<Self, MathError> {
        let coeffs: [[AlgebraElement; MONOMIALS]; 2] = std::array::from_fn(|_| {
            std::array::from_fn(|_| crate::lie::random_algebra(tag, rng, scale))
        });
        Self::poly2(coeffs)
    }

    pub fn tag(&self) -> &GroupTag {
        &self.tag
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    /// Components `[A_1, A_2]` at `p`.
    pub fn eval(&self, p: &BasePoint) -> Result<[AlgebraElement; 2], MathError> {
        let m = monomials(p);
        let a1 = combine(&self.tag, &self.coeffs[0], &m);
        let a2 = combine(&self.tag, &self.coeffs[1], &m);
        check_finite(&a1, p, "connection component A_1")?;
        check_finite(&a2, p, "connection component A_2")?;
        Ok([a1, a2])
    }

    /// Contraction `A_p(v) = A_1(p) v_1 + A_2(p) v_2`.
    pub fn contract(&self, p: &BasePoint, v: &BaseVector) -> Result<AlgebraElement, MathError> {
        let [a1, a2] = self.eval(p)?;
        a1.scale(v.x).add(&a2.scale(v.y))
    }

    /// Exact coordinate partials: `out[mu][nu] = d A_{mu+1} / d x_{nu+1}`.
    pub fn partials(&self, p: &BasePoint) -> Result<[[AlgebraElement; 2]; 2], MathError> {
        let d1 = monomials_d1(p);
        let d2 = monomials_d2(p);
        let out = [
            [
                combine(&self.tag, &self.coeffs[0], &d1),
                combine(&self.tag, &self.coeffs[0], &d2),
            ],
            [
                combine(&self.tag, &self.coeffs[1], &d1),
                combine(&self.tag, &self.coeffs[1], &d2),
            ],
        ];
        for row in &out {
            for entry in row {
                check_finite(entry, p, "connection partial derivative")?;
            }
        }
        Ok(out)
    }

    /// Curvature component `F_12 = d1 A_2 - d2 A_1 + [A_1, A_2]`.
    pub fn curvature(&self, p: &BasePoint) -> Result<AlgebraElement, MathError> {
        let [a1, a2] = self.eval(p)?;
        let d = self.partials(p)?;
        d[1][0].sub(&d[0][1])?.add(&a1.bracket(&a2)?)
    }

    /// Conjugates every coefficient by a fixed group element: the gauge
    /// transform of `A` under a constant gauge change (no derivative term).
    pub fn gauge_conjugate(&self, g: &GroupElement) -> Result<ConnectionField, MathError> {
        if g.tag() != &self.tag {
            return Err(MathError::TagMismatch {
                expected: self.tag.to_string(),
                found: g.tag().to_string(),
            });
        }
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for entry in row.iter_mut() {
                *entry = g.ad(entry)?;
            }
        }
        Ok(out)
    }
}

/// Algebra-valued two-form `B = B_12 dx1 ^ dx2` on the plane.
#[derive(Debug, Clone)]
pub struct TwoFormField {
    tag: GroupTag,
    family: String,
    kind: TwoFormKind,
}

#[derive(Debug, Clone)]
enum TwoFormKind {
    Poly {
        coeffs: [AlgebraElement; MONOMIALS],
    },
    /// `B_12 = -dtau^{-1}(F_12(abar))`, built by [`make_flatting_two_form`].
    Flatting {
        cm: Box<CrossedModule>,
        abar: Box<ConnectionField>,
    },
    /// `base` plus a constant component offset.
    Offset {
        base: Box<TwoFormField>,
        delta: AlgebraElement,
    },
}

impl TwoFormField {
    pub fn zero(tag: GroupTag) -> Self {
        let coeffs = zero_row(&tag);
        TwoFormField {
            tag,
            family: "zero".into(),
            kind: TwoFormKind::Poly { coeffs },
        }
    }

    /// Constant component `B_12 = c`.
    pub fn constant(c: AlgebraElement) -> Self {
        let tag = c.tag().clone();
        let mut coeffs = zero_row(&tag);
        coeffs[0] = c;
        TwoFormField {
            tag,
            family: "constant".into(),
            kind: TwoFormKind::Poly { coeffs },
        }
    }

    /// Quadratic component in the monomial basis `{1, x1, x2, x1^2, x1 x2,
    /// x2^2}`.
    pub fn poly2(coeffs: [AlgebraElement; MONOMIALS]) -> Result<Self, MathError> {
        let tag = coeffs[0].tag().clone();
        for elt in &coeffs {
            if elt.tag() != &tag {
                return Err(MathError::TagMismatch {
                    expected: tag.to_string(),
                    found: elt.tag().to_string(),
                });
            }
        }
        Ok(TwoFormField {
            tag,
            family: "poly2".into(),
            kind: TwoFormKind::Poly { coeffs },
        })
    }

    /// Quadratic-polynomial two-form with all six coefficients drawn uniformly
    /// from the algebra ball of radius `scale`.
    pub fn random_poly2<R: rand::Rng>(
        tag: &GroupTag,
        rng: &mut R,
        scale: f64,
    ) -> Result<Self, MathError> {
        let coeffs: [AlgebraElement; MONOMIALS] =
            std::array::from_fn(|_| crate::lie::random_algebra(tag, rng, scale));
        Self::poly2(coeffs)
    }

    /// Adds a constant offset to the component; used as a controlled way of
    /// breaking an exact identity in negative-control tests. Works for any
    /// kind, including the curvature-cancelling form.
    pub fn perturbed(&self, delta: &AlgebraElement) -> Result<Self, MathError> {
        if delta.tag() != &self.tag {
            return Err(MathError::TagMismatch {
                expected: self.tag.to_string(),
                found: delta.tag().to_string(),
            });
        }
        Ok(TwoFormField {
            tag: self.tag.clone(),
            family: format!("{}+offset", self.family),
            kind: TwoFormKind::Offset {
                base: Box::new(self.clone()),
                delta: delta.clone(),
            },
        })
    }

    /// The field with every value pushed through the action of a constant
    /// group element: `B -> alpha(g)(B)`. Together with
    /// [`ConnectionField::gauge_conjugate`] on both connections this is the
    /// constant gauge transformation of a full field triple.
    pub fn gauge_conjugate(
        &self,
        cm: &CrossedModule,
        g: &GroupElement,
    ) -> Result<Self, MathError> {
        if cm.h_tag() != &self.tag {
            return Err(MathError::TagMismatch {
                expected: self.tag.to_string(),
                found: cm.h_tag().to_string(),
            });
        }
        let kind = match &self.kind {
            TwoFormKind::Poly { coeffs } => {
                let mut out = coeffs.clone();
                for c in out.iter_mut() {
                    *c = cm.alpha_alg(g, c)?;
                }
                TwoFormKind::Poly { coeffs: out }
            }
            // alpha(g) applied to -dtau^{-1}(F) equals -dtau^{-1}(Ad(g) F)
            // because tau intertwines alpha with conjugation, so conjugating
            // the underlying connection conjugates the whole form.
            TwoFormKind::Flatting { cm: inner, abar } => TwoFormKind::Flatting {
                cm: inner.clone(),
                abar: Box::new(abar.gauge_conjugate(g)?),
            },
            TwoFormKind::Offset { base, delta } => TwoFormKind::Offset {
                base: Box::new(base.gauge_conjugate(cm, g)?),
                delta: cm.alpha_alg(g, delta)?,
            },
        };
        Ok(TwoFormField {
            tag: self.tag.clone(),
            family: self.family.clone(),
            kind,
        })
    }

    pub fn tag(&self) -> &GroupTag {
        &self.tag
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    /// The single component `B_12` at `p`.
    pub fn eval(&self, p: &BasePoint) -> Result<AlgebraElement, MathError> {
        let value = match &self.kind {
            TwoFormKind::Poly { coeffs } => combine(&self.tag, coeffs, &monomials(p)),
            TwoFormKind::Flatting { cm, abar } => {
                let f = abar.curvature(p)?;
                cm.tau_alg_inverse(&f)?.scale(-1.0)
            }
            TwoFormKind::Offset { base, delta } => base.eval(p)?.add(delta)?,
        };
        check_finite(&value, p, "two-form component B_12")?;
        Ok(value)
    }

    /// Contraction `B_p(u, v) = B_12(p) (u_1 v_2 - u_2 v_1)`.
    pub fn contract(
        &self,
        p: &BasePoint,
        u: &BaseVector,
        v: &BaseVector,
    ) -> Result<AlgebraElement, MathError> {
        let jac = u.x * v.y - u.y * v.x;
        Ok(self.eval(p)?.scale(jac))
    }
}

/// The two-form `B = -dtau^{-1}(F(abar))`, which makes the pair `(abar, B)`
/// satisfy `F(abar) + tau(B) = 0` identically. Requires the derivative of
/// `tau` to be invertible.
pub fn make_flatting_two_form(
    cm: &CrossedModule,
    abar: &ConnectionField,
) -> Result<TwoFormField, MathError> {
    if !cm.tau_alg_invertible() {
        return Err(MathError::TauNotInvertible {
            module: cm.name().to_string(),
        });
    }
    if abar.tag() != cm.g_tag() {
        return Err(MathError::TagMismatch {
            expected: cm.g_tag().to_string(),
            found: abar.tag().to_string(),
        });
    }
    Ok(TwoFormField {
        tag: cm.h_tag().clone(),
        family: "flatting".into(),
        kind: TwoFormKind::Flatting {
            cm: Box::new(cm.clone()),
            abar: Box::new(abar.clone()),
        },
    })
}

/// The combination `F_12(abar) + tau(B_12)` at `p`; its vanishing is the
/// standing assumption behind the surface-ordering theorems.
pub fn fake_curvature(
    cm: &CrossedModule,
    abar: &ConnectionField,
    b2: &TwoFormField,
    p: &BasePoint,
) -> Result<AlgebraElement, MathError> {
    let f = abar.curvature(p)?;
    f.add(&cm.tau_alg(&b2.eval(p)?)?)
}

/// Largest norm of the fake curvature over a coarse probe grid on the unit
/// square; used to guard theorems that assume it vanishes.
pub fn fake_curvature_sup(
    cm: &CrossedModule,
    abar: &ConnectionField,
    b2: &TwoFormField,
    probes_per_side: usize,
) -> Result<f64, MathError> {
    let mut worst: f64 = 0.0;
    for i in 0..=probes_per_side {
        for j in 0..=probes_per_side {
            let p = BasePoint::new(
                i as f64 / probes_per_side as f64,
                j as f64 / probes_per_side as f64,
            );
            worst = worst.max(fake_curvature(cm, abar, b2, &p)?.norm());
        }
    }
    Ok(worst)
}
