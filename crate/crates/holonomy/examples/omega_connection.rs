//! The connection one-form on path space, built from a pair of base
//! connections and a two-form: evaluation on lifted tangent fields, the
//! two properties that make it a connection (reproducing vertical
//! generators and equivariance under frame translation), and the
//! horizontal lift it induces.
//!
//! Run with `cargo run --example omega_connection`.

use anyhow::Result;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holonomy::cross::CrossedModule;
use holonomy::fields::{BasePoint, BaseVector, ConnectionField, TwoFormField};
use holonomy::lie::{fro_dist, fro_norm, random_algebra, random_group, GroupElement, GroupTag};
use holonomy::omega::{omega_eval, omega_horizontal_lift};
use holonomy::path::{PathFamily, SampledPath, TangentField, VectorFieldFamily};
use holonomy::transport::{
    lift_tangent_field, section_initial_w, transport_frames, LiftedTangentField,
};

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x03E6A);
    let cm = CrossedModule::by_name("su2-conj").expect("shipped module");
    let abar = ConnectionField::random_poly2(&GroupTag::SU2, &mut rng, 0.5)?;
    let a = ConnectionField::random_poly2(&GroupTag::SU2, &mut rng, 0.5)?;
    let b2 = TwoFormField::random_poly2(&GroupTag::SU2, &mut rng, 0.5)?;

    let family = PathFamily::Arc {
        center: BasePoint::new(0.2, 0.1),
        radius: 0.7,
        start_angle: 0.0,
        end_angle: 2.2,
    };
    let n = 80;
    let path = SampledPath::from_family(&family, n)?;
    let lifted = transport_frames(&abar, &path, &GroupElement::identity(GroupTag::SU2))?;

    println!("the path-space connection on an arc, random SU(2) data");
    println!("======================================================");

    // 1. A vertical tangent vector is an algebra element xi acting by right
    //    translation; the connection must return exactly xi.
    let xi = random_algebra(&GroupTag::SU2, &mut rng, 0.8);
    let vertical = LiftedTangentField::from_parts(
        TangentField::from_values(vec![BaseVector::zeros(); n + 1]),
        vec![xi.clone(); n + 1],
    )?;
    let value = omega_eval(&cm, &a, &abar, &b2, &lifted, &vertical)?;
    println!(
        "vertical generator reproduced        : |omega(xi^v) - xi| = {:.3e}",
        fro_dist(value.matrix(), xi.matrix())
    );

    // 2. Right-translating the whole lift by a constant group element g
    //    conjugates the value: omega(R_g X) = Ad(g^-1) omega(X).
    let g = random_group(&GroupTag::SU2, &mut rng, 0.9);
    let translated = transport_frames(&abar, &path, &g)?;
    let v = TangentField::from_family(
        &VectorFieldFamily::cubic(
            BaseVector::new(0.3, -0.2),
            BaseVector::new(-0.1, 0.4),
            BaseVector::new(0.2, 0.1),
            BaseVector::new(-0.3, 0.2),
        ),
        n,
    );
    let w0 = section_initial_w(&abar, &lifted, &v)?;
    let field = lift_tangent_field(&abar, &lifted, &v, w0)?;
    let plain = omega_eval(&cm, &a, &abar, &b2, &lifted, &field)?;
    let g_inv = g.inverse();
    let moved_w: Result<Vec<_>, _> = (0..=n).map(|k| g_inv.ad(field.w(k))).collect();
    let moved_field = LiftedTangentField::from_parts(v.clone(), moved_w?)?;
    let moved = omega_eval(&cm, &a, &abar, &b2, &translated, &moved_field)?;
    let expect = g_inv.ad(&plain)?;
    println!(
        "equivariance under frame translation : |omega(R_g X) - Ad(g^-1) omega(X)| = {:.3e}",
        fro_dist(moved.matrix(), expect.matrix())
    );

    // 3. The induced horizontal lift of a base field is the unique lift the
    //    connection annihilates.
    let horizontal = omega_horizontal_lift(&cm, &a, &abar, &b2, &lifted, &v)?;
    let at_horizontal = omega_eval(&cm, &a, &abar, &b2, &lifted, &horizontal)?;
    println!(
        "horizontal lift annihilated          : |omega(X^h)| = {:.3e}",
        fro_norm(at_horizontal.matrix())
    );
    println!();
    println!(
        "for comparison, the section lift is generally not horizontal: \
         |omega(X^sec)| = {:.3}",
        fro_norm(plain.matrix())
    );
    Ok(())
}
