//! Iterated integrals along a lifted path: the transgression of a two-form
//! (the building block of the path-space connection) and the antisymmetric
//! double integral of two transgression integrands.
//!
//! Run with `cargo run --example chen_integrals`.

use anyhow::Result;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holonomy::cross::CrossedModule;
use holonomy::fields::{BasePoint, BaseVector, ConnectionField, TwoFormField};
use holonomy::lie::{algebra_basis, fro_norm, GroupElement, GroupTag};
use holonomy::omega::{chen_integral, chen_product_two_forms};
use holonomy::path::{PathFamily, SampledPath, TangentField, VectorFieldFamily};
use holonomy::transport::transport_frames;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4E2);
    let cm = CrossedModule::by_name("su2-conj").expect("shipped module");
    let abar = ConnectionField::random_poly2(&GroupTag::SU2, &mut rng, 0.4)?;
    let b2 = TwoFormField::random_poly2(&GroupTag::SU2, &mut rng, 0.5)?;

    let family = PathFamily::CubicBezier {
        control: [
            BasePoint::new(0.0, 0.1),
            BasePoint::new(0.3, 0.5),
            BasePoint::new(0.7, -0.1),
            BasePoint::new(1.0, 0.3),
        ],
    };
    let x = VectorFieldFamily::cubic(
        BaseVector::new(0.3, 0.1),
        BaseVector::new(0.0, 0.5),
        BaseVector::new(-0.2, 0.0),
        BaseVector::new(0.1, 0.0),
    );
    let y = VectorFieldFamily::cubic(
        BaseVector::new(-0.1, 0.4),
        BaseVector::new(0.6, 0.0),
        BaseVector::new(0.0, -0.3),
        BaseVector::new(0.0, 0.2),
    );

    println!("transgression of a two-form along a lifted path");
    println!("===============================================");
    println!("Z(X) = Simpson integral of alpha(frame^-1) B(path', X); the");
    println!("frames come from the second-order transport stepper, so the");
    println!("value settles at second order (differences shrink fourfold):");
    println!();
    let mut values = Vec::new();
    for n in [20usize, 40, 80, 160] {
        let path = SampledPath::from_family(&family, n)?;
        let lifted = transport_frames(&abar, &path, &GroupElement::identity(GroupTag::SU2))?;
        let z = chen_integral(&cm, &b2, &lifted, &TangentField::from_family(&x, n))?;
        println!("  N = {n:>4}: |Z| = {:.12}", z.norm());
        values.push(z);
    }
    let tail = values
        .windows(2)
        .map(|w| w[1].sub(&w[0]).unwrap().norm())
        .collect::<Vec<_>>();
    println!(
        "  successive differences {:.2e}, {:.2e}, {:.2e} -> the value has settled",
        tail[0], tail[1], tail[2]
    );

    println!();
    println!("double integral of two integrands (ordered in both ways)");
    println!("--------------------------------------------------------");
    let n = 120;
    let path = SampledPath::from_family(&family, n)?;
    let lifted = transport_frames(&abar, &path, &GroupElement::identity(GroupTag::SU2))?;
    let xf = TangentField::from_family(&x, n);
    let yf = TangentField::from_family(&y, n);
    let xy = chen_product_two_forms(&cm, &b2, &b2, &lifted, &xf, &yf)?;
    let yx = chen_product_two_forms(&cm, &b2, &b2, &lifted, &yf, &xf)?;
    println!("  |P(X, Y)|            = {:.6e}", xy.norm());
    println!(
        "  |P(X, Y) + P(Y, X)|  = {:.6e}   (antisymmetric by construction)",
        xy.add(&yx)?.norm()
    );

    // Cross-check on data simple enough to integrate by hand: along the
    // straight path (t, 0) with zero base connection, take B_first = t E0
    // and B_second = E1, both probed by the constant field (0, 1). The
    // integrand tables are p(t) = t E0 and q(u) = E1, so the double sum
    // factorizes:
    //
    //   P = (integral of t dt) (integral of du) [E0, E1] = 1/2 [E0, E1],
    //
    // and Simpson is exact on linear integrands, leaving only roundoff.
    let zero = ConnectionField::zero(GroupTag::SU2);
    let e = algebra_basis(&GroupTag::SU2);
    let b_linear = TwoFormField::poly2([
        e[0].scale(0.0),
        e[0].scale(1.0),
        e[0].scale(0.0),
        e[0].scale(0.0),
        e[0].scale(0.0),
        e[0].scale(0.0),
    ])?;
    let b_const = TwoFormField::constant(e[1].clone());
    let segment = SampledPath::from_family(
        &PathFamily::Segment {
            from: BasePoint::new(0.0, 0.0),
            to: BasePoint::new(1.0, 0.0),
        },
        n,
    )?;
    let flat = transport_frames(&zero, &segment, &GroupElement::identity(GroupTag::SU2))?;
    let ones = TangentField::from_values(vec![BaseVector::new(0.0, 1.0); n + 1]);
    let product = chen_product_two_forms(&cm, &b_linear, &b_const, &flat, &ones, &ones)?;
    let expected = e[0].bracket(&e[1])?.scale(0.5);
    println!(
        "  hand-integrable case vs 1/2 [E0,E1]  = {:.3e}   (quadrature exact on linear data)",
        fro_norm(&(product.matrix() - expected.matrix()))
    );
    Ok(())
}
