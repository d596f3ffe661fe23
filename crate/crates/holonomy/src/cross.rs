//! Crossed modules of matrix Lie groups.
//!
//! A crossed module `(G, H, tau, alpha)` consists of two Lie groups, a
//! homomorphism `tau: H -> G`, and a smooth action `alpha` of `G` on `H` by
//! automorphisms, subject to the two Peiffer identities
//!
//! ```text
//!   tau(alpha(g) h)   = g tau(h) g^{-1}
//!   alpha(tau(h)) h'  = h h' h^{-1}
//! ```
//!
//! The shipped families cover the three standard shapes used throughout the
//! crate — `tau = id` with conjugation, an abelian `H` acted on by a
//! representation of `G`, and a trivial action — plus the double cover
//! `SU(2) -> SO(3)`, whose kernel `{+I, -I}` is what makes equivalence-up-to-tau
//! and central twists interesting downstream.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::MathError;
use crate::lie::{
    algebra_basis, fro_dist, pauli, random_group, so3_hat, so3_unhat, AlgebraElement, CMatrix,
    GroupElement, GroupTag,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Strategy for the homomorphism `tau: H -> G`.
#[derive(Debug, Clone, PartialEq)]
pub enum TauMap {
    /// `G = H`, `tau = id`.
    Identity,
    /// `tau(h) = e` for every `h` (requires `H` abelian).
    Trivial,
    /// The double cover `SU(2) -> SO(3)` given by the adjoint representation.
    Su2ToSo3Cover,
}

/// Strategy for the action `alpha: G x H -> H`.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaAction {
    /// `alpha(g) h = g h g^{-1}` (requires `G = H`).
    Conjugation,
    /// `alpha(g) h = h`.
    Trivial,
    /// `G = SO(3)` rotates the phase vector of a diagonal 3-torus.
    RotateTorus,
    /// `G = SO(3)` acts on `H = SU(2)` by conjugating with either lift of `g`.
    CoverConjugation,
}

/// A crossed module of matrix groups.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedModule {
    name: String,
    g_tag: GroupTag,
    h_tag: GroupTag,
    tau: TauMap,
    alpha: AlphaAction,
}

/// Maximum residuals of the two Peiffer identities over a random sample.
#[derive(Debug, Clone, Copy)]
pub struct PeifferResiduals {
    /// `max |tau(alpha(g)h) - g tau(h) g^{-1}|`.
    pub equivariance: f64,
    /// `max |alpha(tau(h))h' - h h' h^{-1}|`.
    pub peiffer: f64,
}

impl CrossedModule {
    /// Assembles a crossed module from parts. No identity check is performed
    /// here; use [`crossed_module_check`] to measure the Peiffer residuals.
    pub fn from_parts(
        name: &str,
        g_tag: GroupTag,
        h_tag: GroupTag,
        tau: TauMap,
        alpha: AlphaAction,
    ) -> Self {
        CrossedModule {
            name: name.to_string(),
            g_tag,
            h_tag,
            tau,
            alpha,
        }
    }

    /// Looks up a shipped family by identifier.
    pub fn by_name(name: &str) -> Option<CrossedModule> {
        let cm = match name {
            "u1-abelian" => CrossedModule::from_parts(
                name,
                GroupTag::U1,
                GroupTag::U1,
                TauMap::Identity,
                AlphaAction::Trivial,
            ),
            "su2-conj" => CrossedModule::from_parts(
                name,
                GroupTag::SU2,
                GroupTag::SU2,
                TauMap::Identity,
                AlphaAction::Conjugation,
            ),
            "so3-conj" => CrossedModule::from_parts(
                name,
                GroupTag::SO3,
                GroupTag::SO3,
                TauMap::Identity,
                AlphaAction::Conjugation,
            ),
            "so3-on-r3" => CrossedModule::from_parts(
                name,
                GroupTag::SO3,
                GroupTag::Torus(3),
                TauMap::Trivial,
                AlphaAction::RotateTorus,
            ),
            "su2-so3-cover" => CrossedModule::from_parts(
                name,
                GroupTag::SO3,
                GroupTag::SU2,
                TauMap::Su2ToSo3Cover,
                AlphaAction::CoverConjugation,
            ),
            "su2-u1-trivial" => CrossedModule::from_parts(
                name,
                GroupTag::SU2,
                GroupTag::U1,
                TauMap::Trivial,
                AlphaAction::Trivial,
            ),
            _ => return None,
        };
        Some(cm)
    }

    /// Identifiers of every shipped family.
    pub fn shipped_names() -> &'static [&'static str] {
        &[
            "u1-abelian",
            "su2-conj",
            "so3-conj",
            "so3-on-r3",
            "su2-so3-cover",
            "su2-u1-trivial",
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g_tag(&self) -> &GroupTag {
        &self.g_tag
    }

    pub fn h_tag(&self) -> &GroupTag {
        &self.h_tag
    }

    /// Whether `tau` admits a two-sided inverse (needed to solve `tau(B) = -F`).
    pub fn tau_invertible(&self) -> bool {
        self.tau == TauMap::Identity
    }

    /// Whether the derivative of `tau` at the identity is a Lie-algebra
    /// isomorphism. True for `tau = id` and for the double cover, whose
    /// derivative is bijective even though the cover itself is 2:1.
    pub fn tau_alg_invertible(&self) -> bool {
        matches!(self.tau, TauMap::Identity | TauMap::Su2ToSo3Cover)
    }

    /// Inverse of the derivative of `tau`, `LG -> LH`, where it exists.
    pub fn tau_alg_inverse(&self, x: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        self.expect_g(x.tag())?;
        match &self.tau {
            TauMap::Identity => Ok(AlgebraElement::from_matrix(
                self.h_tag.clone(),
                x.matrix().clone(),
            )),
            TauMap::Su2ToSo3Cover => Ok(so3_alg_to_su2(x)),
            TauMap::Trivial => Err(MathError::TauNotInvertible {
                module: self.name.clone(),
            }),
        }
    }

    /// `tau(h)` at group level.
    pub fn tau_group(&self, h: &GroupElement) -> Result<GroupElement, MathError> {
        self.expect_h(h.tag())?;
        Ok(match &self.tau {
            TauMap::Identity => GroupElement::from_matrix(self.g_tag.clone(), h.matrix().clone()),
            TauMap::Trivial => GroupElement::identity(self.g_tag.clone()),
            TauMap::Su2ToSo3Cover => su2_to_so3(h),
        })
    }

    /// Derivative of `tau` at the identity, `LH -> LG`.
    pub fn tau_alg(&self, x: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        self.expect_h(x.tag())?;
        Ok(match &self.tau {
            TauMap::Identity => AlgebraElement::from_matrix(self.g_tag.clone(), x.matrix().clone()),
            TauMap::Trivial => AlgebraElement::zero(self.g_tag.clone()),
            TauMap::Su2ToSo3Cover => su2_alg_to_so3(x),
        })
    }

    /// `alpha(g) h` at group level.
    pub fn alpha_group(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, MathError> {
        self.expect_g(g.tag())?;
        self.expect_h(h.tag())?;
        Ok(match &self.alpha {
            AlphaAction::Conjugation => GroupElement::from_matrix(
                self.h_tag.clone(),
                g.matrix() * h.matrix() * g.matrix().adjoint(),
            ),
            AlphaAction::Trivial => h.clone(),
            AlphaAction::RotateTorus => rotate_torus_group(g, h),
            AlphaAction::CoverConjugation => {
                let lift = so3_to_su2_plus_trace(g);
                GroupElement::from_matrix(
                    self.h_tag.clone(),
                    lift.matrix() * h.matrix() * lift.matrix().adjoint(),
                )
            }
        })
    }

    /// `alpha(g)` acting on the algebra of `H` (derivative in the `H` slot).
    pub fn alpha_alg(&self, g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement, MathError> {
        self.expect_g(g.tag())?;
        self.expect_h(x.tag())?;
        Ok(match &self.alpha {
            AlphaAction::Conjugation => AlgebraElement::from_matrix(
                self.h_tag.clone(),
                g.matrix() * x.matrix() * g.matrix().adjoint(),
            ),
            AlphaAction::Trivial => x.clone(),
            AlphaAction::RotateTorus => rotate_torus_alg(g, x),
            AlphaAction::CoverConjugation => {
                let lift = so3_to_su2_plus_trace(g);
                AlgebraElement::from_matrix(
                    self.h_tag.clone(),
                    lift.matrix() * x.matrix() * lift.matrix().adjoint(),
                )
            }
        })
    }

    /// A right inverse of `tau` where one exists: the identity map for
    /// `tau = id`, and the positive-trace lift for the double cover.
    pub fn tau_section(&self, g: &GroupElement) -> Result<GroupElement, MathError> {
        self.expect_g(g.tag())?;
        match &self.tau {
            TauMap::Identity => Ok(GroupElement::from_matrix(
                self.h_tag.clone(),
                g.matrix().clone(),
            )),
            TauMap::Su2ToSo3Cover => Ok(so3_to_su2_plus_trace(g)),
            TauMap::Trivial => Err(MathError::TauNotInvertible {
                module: self.name.clone(),
            }),
        }
    }

    /// Verifies that `z` commutes with the whole of `G` by checking the
    /// canonical generators; returns the worst commutator residual.
    pub fn centrality_residual(&self, z: &GroupElement) -> Result<f64, MathError> {
        self.expect_g(z.tag())?;
        let mut worst: f64 = 0.0;
        for b in algebra_basis(&self.g_tag) {
            let g = b.exp();
            let lhs = z.matrix() * g.matrix();
            let rhs = g.matrix() * z.matrix();
            worst = worst.max(fro_dist(&lhs, &rhs));
        }
        Ok(worst)
    }

    fn expect_g(&self, tag: &GroupTag) -> Result<(), MathError> {
        if *tag != self.g_tag {
            return Err(MathError::TagMismatch {
                expected: self.g_tag.to_string(),
                found: tag.to_string(),
            });
        }
        Ok(())
    }

    fn expect_h(&self, tag: &GroupTag) -> Result<(), MathError> {
        if *tag != self.h_tag {
            return Err(MathError::TagMismatch {
                expected: self.h_tag.to_string(),
                found: tag.to_string(),
            });
        }
        Ok(())
    }
}

/// The covering homomorphism `SU(2) -> SO(3)` via `R_{jk} = tr(sigma_j u sigma_k u^H) / 2`.
fn su2_to_so3(u: &GroupElement) -> GroupElement {
    let m = u.matrix();
    let mut r = CMatrix::zeros(3, 3);
    for j in 0..3 {
        for k in 0..3 {
            let prod = pauli(j + 1) * m * pauli(k + 1) * m.adjoint();
            let tr = prod[(0, 0)] + prod[(1, 1)];
            r[(j, k)] = c(tr.re / 2.0, 0.0);
        }
    }
    GroupElement::from_matrix(GroupTag::SO3, r)
}

/// Derivative of the covering map: `su(2) -> so(3)`.
///
/// Writing `X = -(i/2)(w . sigma)` with `w` real, the image is `hat(w)`.
fn su2_alg_to_so3(x: &AlgebraElement) -> AlgebraElement {
    let m = x.matrix();
    let mut w = [0.0; 3];
    for k in 0..3 {
        let prod = pauli(k + 1) * m;
        let tr = prod[(0, 0)] + prod[(1, 1)];
        // tr(sigma_k X) = -i w_k  =>  w_k = i tr(sigma_k X)
        w[k] = -tr.im;
    }
    AlgebraElement::from_matrix(GroupTag::SO3, so3_hat(w))
}

/// Inverse of the cover derivative: `hat(w) -> -(i/2)(w . sigma)`.
fn so3_alg_to_su2(x: &AlgebraElement) -> AlgebraElement {
    let w = so3_unhat(x.matrix());
    let mut m = CMatrix::zeros(2, 2);
    for k in 0..3 {
        m += pauli(k + 1) * c(0.0, -0.5 * w[k]);
    }
    AlgebraElement::from_matrix(GroupTag::SU2, m)
}

/// Positive-trace lift `SO(3) -> SU(2)` (Shepperd's branch selection keeps the
/// extraction stable for every rotation angle).
fn so3_to_su2_plus_trace(g: &GroupElement) -> GroupElement {
    let r = g.matrix();
    let e = |i: usize, j: usize| r[(i, j)].re;
    let tr = e(0, 0) + e(1, 1) + e(2, 2);
    // Quaternion (w, x, y, z) with w >= 0.
    let (w, x, y, z) = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        (
            s / 4.0,
            (e(2, 1) - e(1, 2)) / s,
            (e(0, 2) - e(2, 0)) / s,
            (e(1, 0) - e(0, 1)) / s,
        )
    } else if e(0, 0) > e(1, 1) && e(0, 0) > e(2, 2) {
        let s = (1.0 + e(0, 0) - e(1, 1) - e(2, 2)).sqrt() * 2.0;
        (
            (e(2, 1) - e(1, 2)) / s,
            s / 4.0,
            (e(0, 1) + e(1, 0)) / s,
            (e(0, 2) + e(2, 0)) / s,
        )
    } else if e(1, 1) > e(2, 2) {
        let s = (1.0 + e(1, 1) - e(0, 0) - e(2, 2)).sqrt() * 2.0;
        (
            (e(0, 2) - e(2, 0)) / s,
            (e(0, 1) + e(1, 0)) / s,
            s / 4.0,
            (e(1, 2) + e(2, 1)) / s,
        )
    } else {
        let s = (1.0 + e(2, 2) - e(0, 0) - e(1, 1)).sqrt() * 2.0;
        (
            (e(1, 0) - e(0, 1)) / s,
            (e(0, 2) + e(2, 0)) / s,
            (e(1, 2) + e(2, 1)) / s,
            s / 4.0,
        )
    };
    // Normalise the sign so that the real part (the trace of the lift) is >= 0.
    let sign = if w < 0.0 { -1.0 } else { 1.0 };
    let (w, x, y, z) = (w * sign, x * sign, y * sign, z * sign);
    // u = w I - i (x sigma_1 + y sigma_2 + z sigma_3) reproduces R under the
    // adjoint map with the sign conventions of `su2_to_so3`.
    let m = CMatrix::identity(2, 2) * c(w, 0.0)
        + (pauli(1) * c(x, 0.0) + pauli(2) * c(y, 0.0) + pauli(3) * c(z, 0.0)) * c(0.0, -1.0);
    GroupElement::from_matrix(GroupTag::SU2, m)
}

fn torus_angles(h: &GroupElement) -> [f64; 3] {
    let m = h.matrix();
    [m[(0, 0)].arg(), m[(1, 1)].arg(), m[(2, 2)].arg()]
}

fn rotate_torus_group(g: &GroupElement, h: &GroupElement) -> GroupElement {
    let th = torus_angles(h);
    let r = g.matrix();
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += r[(i, j)].re * th[j];
        }
    }
    let mut m = CMatrix::zeros(3, 3);
    for i in 0..3 {
        m[(i, i)] = c(0.0, out[i]).exp();
    }
    GroupElement::from_matrix(GroupTag::Torus(3), m)
}

fn rotate_torus_alg(g: &GroupElement, x: &AlgebraElement) -> AlgebraElement {
    let xm = x.matrix();
    let th = [xm[(0, 0)].im, xm[(1, 1)].im, xm[(2, 2)].im];
    let r = g.matrix();
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += r[(i, j)].re * th[j];
        }
    }
    let mut m = CMatrix::zeros(3, 3);
    for i in 0..3 {
        m[(i, i)] = c(0.0, out[i]);
    }
    AlgebraElement::from_matrix(GroupTag::Torus(3), m)
}

/// Samples `n` random triples `(g, h, h')` and returns the worst residuals of
/// the two Peiffer identities. Deterministic for a fixed seed.
pub fn crossed_module_check(
    cm: &CrossedModule,
    samples: usize,
    seed: u64,
) -> Result<PeifferResiduals, MathError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    for _ in 0..samples {
        let g = random_group(cm.g_tag(), &mut rng, 0.9);
        let h = random_group(cm.h_tag(), &mut rng, 0.9);
        let hp = random_group(cm.h_tag(), &mut rng, 0.9);

        // tau(alpha(g) h) = g tau(h) g^{-1}
        let lhs1 = cm.tau_group(&cm.alpha_group(&g, &h)?)?;
        let rhs1 = g.mul(&cm.tau_group(&h)?)?.mul(&g.inverse())?;
        r1 = r1.max(fro_dist(lhs1.matrix(), rhs1.matrix()));

        // alpha(tau(h)) h' = h h' h^{-1}
        let lhs2 = cm.alpha_group(&cm.tau_group(&h)?, &hp)?;
        let rhs2 = h.mul(&hp)?.mul(&h.inverse())?;
        r2 = r2.max(fro_dist(lhs2.matrix(), rhs2.matrix()));
    }
    Ok(PeifferResiduals {
        equivariance: r1,
        peiffer: r2,
    })
}

/// Infinitesimal compatibility between the group- and algebra-level maps:
/// compares `log(tau(exp(t X))) / t` with `dtau(X)` and the analogous
/// expression for `alpha`, over a random sample. Returns the worst residual.
pub fn derivative_consistency_check(
    cm: &CrossedModule,
    samples: usize,
    seed: u64,
) -> Result<f64, MathError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = crate::lie::random_algebra(cm.h_tag(), &mut rng, 0.8);
        let g = random_group(cm.g_tag(), &mut rng, 0.8);

        let fd_tau = cm.tau_group(&x.scale(t).exp())?.log()?.scale(1.0 / t);
        worst = worst.max(fd_tau.sub(&cm.tau_alg(&x)?)?.norm());

        let fd_alpha = cm
            .alpha_group(&g, &x.scale(t).exp())?
            .log()?
            .scale(1.0 / t);
        worst = worst.max(fd_alpha.sub(&cm.alpha_alg(&g, &x)?)?.norm());
    }
    Ok(worst)
}
