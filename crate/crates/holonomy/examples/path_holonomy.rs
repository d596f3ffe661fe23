//! Parallel transport along base paths: the midpoint-exponential stepper
//! against the fourth-order one, drift off the group manifold, and the
//! holonomy of a closed loop.
//!
//! Run with `cargo run --example path_holonomy`.

use anyhow::Result;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holonomy::fields::{BasePoint, ConnectionField};
use holonomy::lie::{fro_dist, GroupElement, GroupTag};
use holonomy::path::{PathFamily, SampledPath};
use holonomy::transport::{path_holonomy, transport_frames, transport_frames_rk4};

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9A7B);
    let connection = ConnectionField::random_poly2(&GroupTag::SU2, &mut rng, 0.4)?;
    let family = PathFamily::CubicBezier {
        control: [
            BasePoint::new(0.0, 0.0),
            BasePoint::new(0.4, 0.6),
            BasePoint::new(0.8, -0.3),
            BasePoint::new(1.0, 0.5),
        ],
    };

    println!("transport of an SU(2) connection along a cubic Bezier path");
    println!("===========================================================");
    println!("{:>6}  {:>14}  {:>12}  {:>12}", "N", "|mid - rk4|", "mid drift", "rk4 drift");
    let mut gaps = Vec::new();
    for n in [40usize, 80, 160, 320] {
        let path = SampledPath::from_family(&family, n)?;
        let seed = GroupElement::identity(GroupTag::SU2);
        let mid = transport_frames(&connection, &path, &seed)?;
        let rk4 = transport_frames_rk4(&connection, &path, &seed)?;
        let gap = fro_dist(mid.end_frame().matrix(), rk4.end_frame().matrix());
        println!(
            "{:>6}  {:>14.3e}  {:>12.3e}  {:>12.3e}",
            n,
            gap,
            mid.group_drift(),
            rk4.group_drift()
        );
        gaps.push(gap);
    }
    println!(
        "the two steppers close on each other at order {:.2} \
         (the midpoint rule's second order dominates)",
        (gaps[0] / gaps[2]).log2() / 2.0
    );

    // A closed loop: the holonomy is a nontrivial group element whose
    // distance from the identity measures the enclosed curvature.
    let circle = PathFamily::Arc {
        center: BasePoint::new(0.5, 0.2),
        radius: 0.4,
        start_angle: 0.0,
        end_angle: std::f64::consts::TAU,
    };
    let loop_path = SampledPath::from_family(&circle, 400)?;
    let holonomy = path_holonomy(&connection, &loop_path)?;
    let identity = GroupElement::identity(GroupTag::SU2);
    println!();
    println!("holonomy of a full circle of radius 0.4:");
    println!(
        "  distance from the identity {:.6}   (curvature flux through the disk)",
        fro_dist(holonomy.matrix(), identity.matrix())
    );
    println!(
        "  residual off the group     {:.3e}",
        holonomy.group_residual()
    );
    Ok(())
}
