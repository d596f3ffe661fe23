//! Matrix Lie groups and their algebras.
//!
//! All group elements are square complex matrices of dimension at most four.
//! Each element carries a [`GroupTag`] naming the family it belongs to, and
//! every family ships a closed-form exponential and principal logarithm:
//!
//! * `U1` — unit complex scalars,
//! * `SO2` — planar rotations (real entries),
//! * `SU2` — special unitary 2x2, handled through the Pauli decomposition,
//! * `SO3` — rotations of R^3, handled through the Rodrigues formula,
//! * `Torus(k)` — diagonal unitary matrices, one phase per entry,
//! * `Product` — block-diagonal direct products of the above.
//!
//! The logarithm is restricted to the ball `|g - I| < 1.9` in operator norm;
//! outside that radius the principal branch is ambiguous for these families
//! and [`MathError::LogDomain`] is returned.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::MathError;

/// Complex matrix storage used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Identifies which matrix group family an element belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupTag {
    /// Unit complex numbers as 1x1 matrices.
    U1,
    /// Rotations of the plane, 2x2 real orthogonal with determinant one.
    SO2,
    /// Special unitary 2x2 matrices.
    SU2,
    /// Rotations of R^3, 3x3 real orthogonal with determinant one.
    SO3,
    /// Diagonal k-torus: `diag(exp(i t_1), ..., exp(i t_k))`.
    Torus(usize),
    /// Block-diagonal direct product of the listed factors.
    Product(Vec<GroupTag>),
}

impl GroupTag {
    /// Matrix dimension of elements in this family.
    pub fn dim(&self) -> usize {
        match self {
            GroupTag::U1 => 1,
            GroupTag::SO2 | GroupTag::SU2 => 2,
            GroupTag::SO3 => 3,
            GroupTag::Torus(k) => *k,
            GroupTag::Product(parts) => parts.iter().map(|p| p.dim()).sum(),
        }
    }

    /// Dimension of the Lie algebra (number of canonical basis elements).
    pub fn algebra_dim(&self) -> usize {
        match self {
            GroupTag::U1 => 1,
            GroupTag::SO2 => 1,
            GroupTag::SU2 => 3,
            GroupTag::SO3 => 3,
            GroupTag::Torus(k) => *k,
            GroupTag::Product(parts) => parts.iter().map(|p| p.algebra_dim()).sum(),
        }
    }
}

impl std::fmt::Display for GroupTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupTag::U1 => write!(f, "U1"),
            GroupTag::SO2 => write!(f, "SO2"),
            GroupTag::SU2 => write!(f, "SU2"),
            GroupTag::SO3 => write!(f, "SO3"),
            GroupTag::Torus(k) => write!(f, "Torus({k})"),
            GroupTag::Product(parts) => {
                write!(f, "Product(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "x")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses the textual form produced by [`GroupTag`]'s `Display`
/// implementation. Product tags may not nest.
pub fn parse_group_tag(s: &str) -> Result<GroupTag, MathError> {
    let bad = || MathError::TagMismatch {
        expected: "a known group tag".into(),
        found: s.to_string(),
    };
    match s {
        "U1" => Ok(GroupTag::U1),
        "SO2" => Ok(GroupTag::SO2),
        "SU2" => Ok(GroupTag::SU2),
        "SO3" => Ok(GroupTag::SO3),
        _ => {
            if let Some(inner) = s.strip_prefix("Torus(").and_then(|r| r.strip_suffix(')')) {
                let k: usize = inner.parse().map_err(|_| bad())?;
                if k == 0 || k > 4 {
                    return Err(bad());
                }
                Ok(GroupTag::Torus(k))
            } else if let Some(inner) =
                s.strip_prefix("Product(").and_then(|r| r.strip_suffix(')'))
            {
                let parts: Result<Vec<GroupTag>, MathError> = inner
                    .split('x')
                    .map(|p| match parse_group_tag(p) {
                        Ok(GroupTag::Product(_)) => Err(bad()),
                        other => other,
                    })
                    .collect();
                Ok(GroupTag::Product(parts?))
            } else {
                Err(bad())
            }
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance between two matrices of equal shape.
pub fn fro_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    fro_norm(&(a - b))
}

/// Operator (spectral) norm via power iteration on `m^H m`.
///
/// Deterministic: uses a fixed start vector. Accurate to well below the
/// tolerances used by the domain guards in this crate.
pub fn op_norm(m: &CMatrix) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    // Start vector with distinct entries so no eigenvector is missed.
    let mut v: Vec<Complex64> = (0..n).map(|i| c(1.0 + 0.01 * i as f64, 0.0)).collect();
    let mut v = CMatrix::from_vec(n, 1, v.drain(..).collect());
    let mut lambda = 0.0;
    for _ in 0..120 {
        let w = &gram * &v;
        let norm = fro_norm(&w);
        if norm < 1e-300 {
            return 0.0;
        }
        v = w / c(norm, 0.0);
        lambda = norm;
    }
    lambda.sqrt()
}

fn identity_matrix(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// The three Pauli matrices.
pub fn pauli(k: usize) -> CMatrix {
    match k {
        1 => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        2 => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        3 => CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        _ => panic!("pauli index must be 1, 2 or 3"),
    }
}

/// Antisymmetric 3x3 matrix `hat(w)` with `hat(w) y = w x y` (cross product).
pub fn so3_hat(w: [f64; 3]) -> CMatrix {
    CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0., 0.),
            c(-w[2], 0.),
            c(w[1], 0.),
            c(w[2], 0.),
            c(0., 0.),
            c(-w[0], 0.),
            c(-w[1], 0.),
            c(w[0], 0.),
            c(0., 0.),
        ],
    )
}

/// Extracts `w` from an so(3) matrix, inverse of [`so3_hat`].
pub fn so3_unhat(m: &CMatrix) -> [f64; 3] {
    [m[(2, 1)].re, m[(0, 2)].re, m[(1, 0)].re]
}

/// An element of a matrix Lie group, tagged with its family.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    tag: GroupTag,
    m: CMatrix,
}

/// An element of the Lie algebra of a tagged family.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    tag: GroupTag,
    m: CMatrix,
}

impl GroupElement {
    /// Identity element of the family.
    pub fn identity(tag: GroupTag) -> Self {
        let n = tag.dim();
        GroupElement {
            tag,
            m: identity_matrix(n),
        }
    }

    /// Wraps a raw matrix without checking membership. Callers are expected
    /// to uphold the group constraints; [`Self::group_residual`] measures drift.
    pub fn from_matrix(tag: GroupTag, m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), tag.dim());
        debug_assert_eq!(m.ncols(), tag.dim());
        GroupElement { tag, m }
    }

    /// Wraps a matrix after verifying membership to the given tolerance.
    pub fn checked(tag: GroupTag, m: CMatrix, tol: f64) -> Result<Self, MathError> {
        let g = GroupElement::from_matrix(tag, m);
        let r = g.group_residual();
        if !r.is_finite() {
            return Err(MathError::NonFinite {
                context: "group membership check".into(),
            });
        }
        if r > tol {
            return Err(MathError::TagMismatch {
                expected: format!("{} member (residual <= {tol:.1e})", g.tag),
                found: format!("matrix with residual {r:.3e}"),
            });
        }
        Ok(g)
    }

    pub fn tag(&self) -> &GroupTag {
        &self.tag
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// Group product `self * other`.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, MathError> {
        check_tags(&self.tag, &other.tag)?;
        Ok(GroupElement {
            tag: self.tag.clone(),
            m: &self.m * &other.m,
        })
    }

    /// Group inverse. All shipped families are unitary, so this is the
    /// conjugate transpose.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            tag: self.tag.clone(),
            m: self.m.adjoint(),
        }
    }

    /// Adjoint action on the algebra: `g X g^{-1}`.
    pub fn ad(&self, x: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        check_tags(&self.tag, &x.tag)?;
        Ok(AlgebraElement {
            tag: x.tag.clone(),
            m: &self.m * &x.m * self.m.adjoint(),
        })
    }

    /// Residual of the family's defining relations; zero for exact members.
    pub fn group_residual(&self) -> f64 {
        group_residual_matrix(&self.tag, &self.m)
    }

    /// Principal logarithm. Fails with [`MathError::LogDomain`] outside the
    /// injectivity ball `|g - I| < 1.9` (operator norm).
    pub fn log(&self) -> Result<AlgebraElement, MathError> {
        let n = self.tag.dim();
        let dist = op_norm(&(&self.m - identity_matrix(n)));
        if !dist.is_finite() {
            return Err(MathError::NonFinite {
                context: "logarithm domain check".into(),
            });
        }
        if dist >= 1.9 {
            return Err(MathError::LogDomain { norm: dist });
        }
        Ok(AlgebraElement {
            tag: self.tag.clone(),
            m: log_matrix(&self.tag, &self.m),
        })
    }
}

impl AlgebraElement {
    /// Zero element of the algebra.
    pub fn zero(tag: GroupTag) -> Self {
        let n = tag.dim();
        AlgebraElement {
            tag,
            m: CMatrix::zeros(n, n),
        }
    }

    /// Wraps a raw matrix without checking membership.
    pub fn from_matrix(tag: GroupTag, m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), tag.dim());
        debug_assert_eq!(m.ncols(), tag.dim());
        AlgebraElement { tag, m }
    }

    /// Builds the element with the given coefficients in the canonical basis.
    pub fn from_coefficients(tag: GroupTag, coeffs: &[f64]) -> Result<Self, MathError> {
        let basis = algebra_basis(&tag);
        if coeffs.len() != basis.len() {
            return Err(MathError::GridMismatch {
                reason: format!(
                    "{} algebra needs {} coefficients, got {}",
                    tag,
                    basis.len(),
                    coeffs.len()
                ),
            });
        }
        let n = tag.dim();
        let mut m = CMatrix::zeros(n, n);
        for (a, b) in coeffs.iter().zip(basis.iter()) {
            m += &b.m * c(*a, 0.0);
        }
        Ok(AlgebraElement { tag, m })
    }

    pub fn tag(&self) -> &GroupTag {
        &self.tag
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        check_tags(&self.tag, &other.tag)?;
        Ok(AlgebraElement {
            tag: self.tag.clone(),
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        check_tags(&self.tag, &other.tag)?;
        Ok(AlgebraElement {
            tag: self.tag.clone(),
            m: &self.m - &other.m,
        })
    }

    pub fn scale(&self, a: f64) -> AlgebraElement {
        AlgebraElement {
            tag: self.tag.clone(),
            m: &self.m * c(a, 0.0),
        }
    }

    /// Matrix commutator `[X, Y] = XY - YX`.
    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        check_tags(&self.tag, &other.tag)?;
        Ok(AlgebraElement {
            tag: self.tag.clone(),
            m: &self.m * &other.m - &other.m * &self.m,
        })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        fro_norm(&self.m)
    }

    /// Residual of algebra membership (anti-hermiticity, tracelessness,
    /// reality as required per family); zero for exact members.
    pub fn algebra_residual(&self) -> f64 {
        algebra_residual_matrix(&self.tag, &self.m)
    }

    /// Exponential map, closed form per family.
    pub fn exp(&self) -> GroupElement {
        GroupElement {
            tag: self.tag.clone(),
            m: exp_matrix(&self.tag, &self.m),
        }
    }
}

fn check_tags(a: &GroupTag, b: &GroupTag) -> Result<(), MathError> {
    if a != b {
        return Err(MathError::TagMismatch {
            expected: a.to_string(),
            found: b.to_string(),
        });
    }
    Ok(())
}

/// Canonical basis of the Lie algebra for a family.
///
/// `U1`: `[i]`; `SO2`: the rotation generator; `SU2`: `-i sigma_k / 2`;
/// `SO3`: the hat embedding of the standard basis of R^3; `Torus(k)`:
/// `diag(i e_j)`; products: block embeddings of the factor bases.
pub fn algebra_basis(tag: &GroupTag) -> Vec<AlgebraElement> {
    match tag {
        GroupTag::U1 => vec![AlgebraElement {
            tag: tag.clone(),
            m: CMatrix::from_row_slice(1, 1, &[c(0., 1.)]),
        }],
        GroupTag::SO2 => vec![AlgebraElement {
            tag: tag.clone(),
            m: CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]),
        }],
        GroupTag::SU2 => (1..=3)
            .map(|k| AlgebraElement {
                tag: tag.clone(),
                m: pauli(k) * c(0.0, -0.5),
            })
            .collect(),
        GroupTag::SO3 => vec![
            AlgebraElement {
                tag: tag.clone(),
                m: so3_hat([1., 0., 0.]),
            },
            AlgebraElement {
                tag: tag.clone(),
                m: so3_hat([0., 1., 0.]),
            },
            AlgebraElement {
                tag: tag.clone(),
                m: so3_hat([0., 0., 1.]),
            },
        ],
        GroupTag::Torus(k) => (0..*k)
            .map(|j| {
                let mut m = CMatrix::zeros(*k, *k);
                m[(j, j)] = c(0., 1.);
                AlgebraElement {
                    tag: tag.clone(),
                    m,
                }
            })
            .collect(),
        GroupTag::Product(parts) => {
            let n = tag.dim();
            let mut out = Vec::new();
            let mut offset = 0;
            for p in parts {
                for b in algebra_basis(p) {
                    let mut m = CMatrix::zeros(n, n);
                    let d = p.dim();
                    m.view_mut((offset, offset), (d, d)).copy_from(&b.m);
                    out.push(AlgebraElement {
                        tag: tag.clone(),
                        m,
                    });
                }
                offset += p.dim();
            }
            out
        }
    }
}

/// Draws an algebra element with canonical-basis coefficients uniform in
/// `[-scale, scale]`.
pub fn random_algebra<R: rand::Rng>(tag: &GroupTag, rng: &mut R, scale: f64) -> AlgebraElement {
    let basis = algebra_basis(tag);
    let n = tag.dim();
    let mut m = CMatrix::zeros(n, n);
    for b in &basis {
        let a: f64 = rng.gen_range(-scale..=scale);
        m += &b.m * c(a, 0.0);
    }
    AlgebraElement {
        tag: tag.clone(),
        m,
    }
}

/// Draws a group element as the exponential of a random algebra element.
pub fn random_group<R: rand::Rng>(tag: &GroupTag, rng: &mut R, scale: f64) -> GroupElement {
    random_algebra(tag, rng, scale).exp()
}

pub(crate) fn exp_matrix(tag: &GroupTag, x: &CMatrix) -> CMatrix {
    match tag {
        GroupTag::U1 => CMatrix::from_row_slice(1, 1, &[x[(0, 0)].exp()]),
        GroupTag::SO2 => {
            let t = x[(1, 0)].re;
            CMatrix::from_row_slice(
                2,
                2,
                &[c(t.cos(), 0.), c(-t.sin(), 0.), c(t.sin(), 0.), c(t.cos(), 0.)],
            )
        }
        GroupTag::SU2 => {
            // X = i (a . sigma) with a real; exp X = cos|a| I + i sin|a|/|a| (a . sigma).
            let a1 = (x[(0, 1)] + x[(1, 0)]).im / 2.0;
            let a2 = (x[(0, 1)] - x[(1, 0)]).re / 2.0;
            let a3 = (x[(0, 0)] - x[(1, 1)]).im / 2.0;
            let r = (a1 * a1 + a2 * a2 + a3 * a3).sqrt();
            let (cos_r, sinc_r) = if r < 1e-8 {
                (1.0 - r * r / 2.0, 1.0 - r * r / 6.0)
            } else {
                (r.cos(), r.sin() / r)
            };
            let vec_part = pauli(1) * c(a1, 0.) + pauli(2) * c(a2, 0.) + pauli(3) * c(a3, 0.);
            identity_matrix(2) * c(cos_r, 0.) + vec_part * c(0., sinc_r)
        }
        GroupTag::SO3 => {
            // Rodrigues: exp(hat w) = I + sinc(t) hat(w) + (1-cos t)/t^2 hat(w)^2.
            let w = so3_unhat(x);
            let t = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            let (s, k) = if t < 1e-8 {
                (1.0 - t * t / 6.0, 0.5 - t * t / 24.0)
            } else {
                (t.sin() / t, (1.0 - t.cos()) / (t * t))
            };
            identity_matrix(3) + x * c(s, 0.) + x * x * c(k, 0.)
        }
        GroupTag::Torus(k) => {
            let mut m = CMatrix::zeros(*k, *k);
            for j in 0..*k {
                m[(j, j)] = x[(j, j)].exp();
            }
            m
        }
        GroupTag::Product(parts) => {
            let n = tag.dim();
            let mut m = CMatrix::zeros(n, n);
            let mut offset = 0;
            for p in parts {
                let d = p.dim();
                let block = x.view((offset, offset), (d, d)).clone_owned();
                m.view_mut((offset, offset), (d, d))
                    .copy_from(&exp_matrix(p, &block));
                offset += d;
            }
            m
        }
    }
}

pub(crate) fn log_matrix(tag: &GroupTag, g: &CMatrix) -> CMatrix {
    match tag {
        GroupTag::U1 => {
            let z = g[(0, 0)];
            CMatrix::from_row_slice(1, 1, &[c(z.norm().ln(), z.arg())])
        }
        GroupTag::SO2 => {
            let t = g[(1, 0)].re.atan2(g[(0, 0)].re);
            CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(-t, 0.), c(t, 0.), c(0., 0.)])
        }
        GroupTag::SU2 => {
            // g = w I + i (v . sigma); log g = i (theta / |v|) (v . sigma),
            // theta = atan2(|v|, w).
            let w = (g[(0, 0)] + g[(1, 1)]).re / 2.0;
            let v1 = (g[(0, 1)] + g[(1, 0)]).im / 2.0;
            let v2 = (g[(0, 1)] - g[(1, 0)]).re / 2.0;
            let v3 = (g[(0, 0)] - g[(1, 1)]).im / 2.0;
            let r = (v1 * v1 + v2 * v2 + v3 * v3).sqrt();
            let factor = if r < 1e-12 {
                1.0 / w
            } else {
                r.atan2(w) / r
            };
            (pauli(1) * c(v1, 0.) + pauli(2) * c(v2, 0.) + pauli(3) * c(v3, 0.)) * c(0., factor)
        }
        GroupTag::SO3 => {
            let tr = (g[(0, 0)] + g[(1, 1)] + g[(2, 2)]).re;
            let cos_t = ((tr - 1.0) / 2.0).clamp(-1.0, 1.0);
            let t = cos_t.acos();
            let v = [
                g[(2, 1)].re - g[(1, 2)].re,
                g[(0, 2)].re - g[(2, 0)].re,
                g[(1, 0)].re - g[(0, 1)].re,
            ];
            // |v| = 2 sin t; w = t/(2 sin t) v, with the small-angle series.
            let factor = if t < 1e-8 {
                0.5 * (1.0 + t * t / 6.0)
            } else {
                t / (2.0 * t.sin())
            };
            so3_hat([v[0] * factor, v[1] * factor, v[2] * factor])
        }
        GroupTag::Torus(k) => {
            let mut m = CMatrix::zeros(*k, *k);
            for j in 0..*k {
                let z = g[(j, j)];
                m[(j, j)] = c(z.norm().ln(), z.arg());
            }
            m
        }
        GroupTag::Product(parts) => {
            let n = tag.dim();
            let mut m = CMatrix::zeros(n, n);
            let mut offset = 0;
            for p in parts {
                let d = p.dim();
                let block = g.view((offset, offset), (d, d)).clone_owned();
                m.view_mut((offset, offset), (d, d))
                    .copy_from(&log_matrix(p, &block));
                offset += d;
            }
            m
        }
    }
}

fn imag_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
}

pub(crate) fn group_residual_matrix(tag: &GroupTag, g: &CMatrix) -> f64 {
    match tag {
        GroupTag::U1 => (g[(0, 0)].norm() - 1.0).abs(),
        GroupTag::SO2 | GroupTag::SO3 => {
            let n = tag.dim();
            let ortho = fro_dist(&(g.transpose() * g), &identity_matrix(n));
            let det = g.determinant();
            imag_norm(g) + ortho + (det - c(1., 0.)).norm()
        }
        GroupTag::SU2 => {
            let unit = fro_dist(&(g.adjoint() * g), &identity_matrix(2));
            let det = g.determinant();
            unit + (det - c(1., 0.)).norm()
        }
        GroupTag::Torus(k) => {
            let mut off = 0.0;
            let mut diag = 0.0;
            for i in 0..*k {
                for j in 0..*k {
                    if i != j {
                        off += g[(i, j)].norm_sqr();
                    }
                }
                diag += (g[(i, i)].norm() - 1.0).powi(2);
            }
            off.sqrt() + diag.sqrt()
        }
        GroupTag::Product(parts) => {
            let mut total = 0.0;
            let mut offset = 0;
            let n = tag.dim();
            // off-block mass
            let mut off = 0.0;
            let mut spans = Vec::new();
            for p in parts {
                spans.push((offset, p.dim()));
                offset += p.dim();
            }
            for i in 0..n {
                for j in 0..n {
                    let same_block = spans
                        .iter()
                        .any(|(o, d)| i >= *o && i < o + d && j >= *o && j < o + d);
                    if !same_block {
                        off += g[(i, j)].norm_sqr();
                    }
                }
            }
            total += off.sqrt();
            for (p, (o, d)) in parts.iter().zip(spans.iter()) {
                let block = g.view((*o, *o), (*d, *d)).clone_owned();
                total += group_residual_matrix(p, &block);
            }
            total
        }
    }
}

fn algebra_residual_matrix(tag: &GroupTag, x: &CMatrix) -> f64 {
    match tag {
        GroupTag::U1 => x[(0, 0)].re.abs(),
        GroupTag::SO2 | GroupTag::SO3 => {
            imag_norm(x) + fro_norm(&(x.transpose() + x))
        }
        GroupTag::SU2 => {
            let anti = fro_norm(&(x.adjoint() + x));
            let tr = (x[(0, 0)] + x[(1, 1)]).norm();
            anti + tr
        }
        GroupTag::Torus(k) => {
            let mut off = 0.0;
            let mut re = 0.0;
            for i in 0..*k {
                for j in 0..*k {
                    if i != j {
                        off += x[(i, j)].norm_sqr();
                    }
                }
                re += x[(i, i)].re * x[(i, i)].re;
            }
            off.sqrt() + re.sqrt()
        }
        GroupTag::Product(parts) => {
            let mut total = 0.0;
            let mut offset = 0;
            for p in parts {
                let d = p.dim();
                let block = x.view((offset, offset), (d, d)).clone_owned();
                total += algebra_residual_matrix(p, &block);
                offset += d;
            }
            total
        }
    }
}
