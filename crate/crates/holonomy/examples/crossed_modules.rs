//! Tour of the shipped crossed modules `(G, H, tau, alpha)`: what each pair
//! of groups is, which structure maps are invertible, and how well the
//! defining identities hold on random samples.
//!
//! Run with `cargo run --example crossed_modules`.

use anyhow::Result;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holonomy::cross::{crossed_module_check, CrossedModule};
use holonomy::lie::{fro_dist, random_group};

fn main() -> Result<()> {
    println!("shipped crossed modules");
    println!("=======================");
    for name in CrossedModule::shipped_names() {
        let cm = CrossedModule::by_name(name).expect("shipped module");
        let report = crossed_module_check(&cm, 500, 0x5EED)?;
        println!(
            "{:16}  G = {:24} H = {:24} tau invertible: {:5}  \
             equivariance {:.2e}  peiffer {:.2e}",
            name,
            cm.g_tag().to_string(),
            cm.h_tag().to_string(),
            cm.tau_invertible(),
            report.equivariance,
            report.peiffer,
        );
    }

    // The two defining identities, spelled out once on concrete samples of
    // the double cover SU(2) -> SO(3).
    println!();
    println!("the identities on one sample of the double cover");
    println!("------------------------------------------------");
    let cm = CrossedModule::by_name("su2-so3-cover").expect("shipped module");
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let g = random_group(cm.g_tag(), &mut rng, 0.8);
    let h = random_group(cm.h_tag(), &mut rng, 0.8);
    let k = random_group(cm.h_tag(), &mut rng, 0.8);

    // Equivariance: tau(alpha_g(h)) = g tau(h) g^{-1}.
    let lhs = cm.tau_group(&cm.alpha_group(&g, &h)?)?;
    let rhs = g.mul(&cm.tau_group(&h)?)?.mul(&g.inverse())?;
    println!(
        "tau(alpha_g(h)) vs g tau(h) g^-1      : {:.3e}",
        fro_dist(lhs.matrix(), rhs.matrix())
    );

    // Peiffer: alpha_{tau(h)}(k) = h k h^{-1}.
    let lhs = cm.alpha_group(&cm.tau_group(&h)?, &k)?;
    let rhs = h.mul(&k)?.mul(&h.inverse())?;
    println!(
        "alpha_tau(h)(k) vs h k h^-1           : {:.3e}",
        fro_dist(lhs.matrix(), rhs.matrix())
    );

    // The kernel of the covering map is the centre {+I, -I} of SU(2): both
    // elements are sent to the identity rotation.
    let minus = holonomy::lie::GroupElement::from_matrix(
        cm.h_tag().clone(),
        -nalgebra::DMatrix::identity(2, 2),
    );
    let image = cm.tau_group(&minus)?;
    println!(
        "tau(-I) vs identity rotation          : {:.3e}   (the kernel of the cover)",
        fro_dist(
            image.matrix(),
            holonomy::lie::GroupElement::identity(cm.g_tag().clone()).matrix()
        )
    );
    Ok(())
}
