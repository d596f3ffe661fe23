//! Randomized properties: algebraic laws that must hold for every sample,
//! not just the frozen fixtures in the unit tests.

use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holonomy::cross::{crossed_module_check, CrossedModule};
use holonomy::lie::{
    fro_dist, fro_norm, random_group, AlgebraElement, GroupElement, GroupTag,
};
use holonomy::plaquette::{
    compose_h, compose_v, identity_h, identity_v, inverse_h, inverse_v, random_plaquette,
    Plaquette,
};
use holonomy::scenario::{load_scenario, Environment, Report, TaskRecord};

fn tags() -> impl Strategy<Value = GroupTag> {
    prop_oneof![
        Just(GroupTag::U1),
        Just(GroupTag::SO2),
        Just(GroupTag::SU2),
        Just(GroupTag::SO3),
        Just(GroupTag::Torus(3)),
        Just(GroupTag::Product(vec![GroupTag::U1, GroupTag::SU2])),
    ]
}

/// Up to three algebra elements of a shared family, with coefficients small
/// enough that every exponential stays inside the logarithm's domain.
fn algebra_triple() -> impl Strategy<Value = (AlgebraElement, AlgebraElement, AlgebraElement)> {
    tags().prop_flat_map(|tag| {
        let dim = tag.algebra_dim();
        let coeffs = || proptest::collection::vec(-0.6..0.6f64, dim);
        (coeffs(), coeffs(), coeffs()).prop_map(move |(a, b, c)| {
            (
                AlgebraElement::from_coefficients(tag.clone(), &a).expect("dim matches"),
                AlgebraElement::from_coefficients(tag.clone(), &b).expect("dim matches"),
                AlgebraElement::from_coefficients(tag.clone(), &c).expect("dim matches"),
            )
        })
    })
}

fn module_and_seed() -> impl Strategy<Value = (CrossedModule, u64)> {
    (0..CrossedModule::shipped_names().len(), any::<u64>()).prop_map(|(idx, seed)| {
        let name = CrossedModule::shipped_names()[idx];
        (CrossedModule::by_name(name).expect("shipped"), seed)
    })
}

proptest! {
    #[test]
    fn exp_then_log_round_trips((x, _, _) in algebra_triple()) {
        let back = x.exp().log().expect("inside the log domain");
        prop_assert!(fro_dist(back.matrix(), x.matrix()) < 1e-9);
    }

    #[test]
    fn products_inverses_and_logs_stay_in_the_family((x, y, _) in algebra_triple()) {
        let g = x.exp();
        let h = y.exp();
        let product = g.mul(&h).unwrap();
        prop_assert!(product.group_residual() < 1e-12);
        prop_assert!(product.log().unwrap().algebra_residual() < 1e-10);
        let unit = g.inverse().mul(&g).unwrap();
        let identity = GroupElement::identity(g.tag().clone());
        prop_assert!(fro_dist(unit.matrix(), identity.matrix()) < 1e-13);
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi((x, y, z) in algebra_triple()) {
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        prop_assert!(fro_norm(&(xy.matrix() + yx.matrix())) < 1e-13);

        let jacobi = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(jacobi.norm() < 1e-12);
    }

    #[test]
    fn adjoint_action_is_conjugation_after_exp((x, y, _) in algebra_triple()) {
        let g = y.exp();
        let direct = g.ad(&x).unwrap().exp();
        let conjugated = g.mul(&x.exp()).unwrap().mul(&g.inverse()).unwrap();
        prop_assert!(fro_dist(direct.matrix(), conjugated.matrix()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structure_identities_hold_for_any_seed((cm, seed) in module_and_seed()) {
        let report = crossed_module_check(&cm, 60, seed).unwrap();
        prop_assert!(report.equivariance < 1e-9, "equivariance {:e}", report.equivariance);
        prop_assert!(report.peiffer < 1e-9, "peiffer {:e}", report.peiffer);
    }

    #[test]
    fn tau_is_an_equivariant_homomorphism((cm, seed) in module_and_seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = random_group(cm.h_tag(), &mut rng, 0.8);
        let h2 = random_group(cm.h_tag(), &mut rng, 0.8);
        let g = random_group(cm.g_tag(), &mut rng, 0.8);

        let joined = cm.tau_group(&h1.mul(&h2).unwrap()).unwrap();
        let split = cm.tau_group(&h1).unwrap().mul(&cm.tau_group(&h2).unwrap()).unwrap();
        prop_assert!(fro_dist(joined.matrix(), split.matrix()) < 1e-12);

        let acted = cm.tau_group(&cm.alpha_group(&g, &h1).unwrap()).unwrap();
        let conjugated = g
            .mul(&cm.tau_group(&h1).unwrap()).unwrap()
            .mul(&g.inverse()).unwrap();
        prop_assert!(fro_dist(acted.matrix(), conjugated.matrix()) < 1e-12);
    }

    #[test]
    fn peiffer_identity_holds((cm, seed) in module_and_seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_group(cm.h_tag(), &mut rng, 0.8);
        let k = random_group(cm.h_tag(), &mut rng, 0.8);
        let acted = cm.alpha_group(&cm.tau_group(&h).unwrap(), &k).unwrap();
        let conjugated = h.mul(&k).unwrap().mul(&h.inverse()).unwrap();
        prop_assert!(fro_dist(acted.matrix(), conjugated.matrix()) < 1e-12);
    }

    #[test]
    fn square_identities_and_inverses_hold_for_any_seed((cm, seed) in module_and_seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_plaquette(&cm, &mut rng, 0.9).unwrap();

        let below = identity_v(&cm, &p.a).unwrap();
        let above = identity_v(&cm, &p.c).unwrap();
        prop_assert!(gap(&compose_v(&cm, &below, &p).unwrap(), &p) < 1e-12);
        prop_assert!(gap(&compose_v(&cm, &p, &above).unwrap(), &p) < 1e-12);
        let inv_v = inverse_v(&cm, &p).unwrap();
        prop_assert!(gap(&compose_v(&cm, &p, &inv_v).unwrap(), &below) < 1e-12);

        let left = identity_h(&cm, &p.d).unwrap();
        let right = identity_h(&cm, &p.b).unwrap();
        prop_assert!(gap(&compose_h(&cm, &left, &p).unwrap(), &p) < 1e-12);
        prop_assert!(gap(&compose_h(&cm, &p, &right).unwrap(), &p) < 1e-12);
        let inv_h = inverse_h(&cm, &p).unwrap();
        prop_assert!(gap(&compose_h(&cm, &p, &inv_h).unwrap(), &left) < 1e-12);
    }
}

fn gap(p: &Plaquette, q: &Plaquette) -> f64 {
    fro_dist(p.a.matrix(), q.a.matrix())
        .max(fro_dist(p.b.matrix(), q.b.matrix()))
        .max(fro_dist(p.c.matrix(), q.c.matrix()))
        .max(fro_dist(p.d.matrix(), q.d.matrix()))
        .max(fro_dist(p.h.matrix(), q.h.matrix()))
}

fn record_strategy() -> impl Strategy<Value = TaskRecord> {
    (
        "[a-z-]{1,12}",
        prop::num::f64::POSITIVE | prop::num::f64::ZERO,
        1e-12..1.0f64,
        any::<bool>(),
        0.0..1e4f64,
        prop::option::of("[ -~]{0,40}"),
    )
        .prop_filter("finite residual", |(_, residual, ..)| residual.is_finite())
        .prop_map(|(task, residual, tolerance, pass, wall_time_ms, error)| TaskRecord {
            task,
            residual,
            tolerance,
            pass,
            wall_time_ms,
            error,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reports_round_trip_through_json_exactly(
        scenario in "[a-z0-9-]{1,20}",
        records in proptest::collection::vec(record_strategy(), 0..6),
    ) {
        let report = Report {
            scenario,
            tasks: records,
            environment: Environment {
                version: "test".into(),
                numeric_precision: "IEEE-754 binary64".into(),
            },
        };
        let text = report.to_json();
        let back = Report::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn non_finite_residuals_survive_as_infinity(sign in any::<bool>()) {
        let report = Report {
            scenario: "edge".into(),
            tasks: vec![TaskRecord {
                task: "stokes".into(),
                residual: if sign { f64::INFINITY } else { f64::NAN },
                tolerance: 1e-6,
                pass: false,
                wall_time_ms: 1.0,
                error: Some("did not converge".into()),
            }],
            environment: Environment {
                version: "test".into(),
                numeric_precision: "IEEE-754 binary64".into(),
            },
        };
        let back = Report::from_json(&report.to_json()).unwrap();
        prop_assert!(back.tasks[0].residual.is_infinite());
        prop_assert!(!back.tasks[0].pass);
    }

    #[test]
    fn scenario_loader_never_panics_on_junk(text in "[ -~\n]{0,400}") {
        let _ = load_scenario(&text);
    }

    #[test]
    fn scenario_loader_accepts_any_even_resolution_and_seed(
        n in (5..60usize).prop_map(|k| 2 * k),
        // TOML integers are signed 64-bit, which caps the seeds a scenario
        // file can carry; the CLI flag still accepts the full u64 range.
        seed in 0..=i64::MAX as u64,
    ) {
        let text = format!(
            r#"
name = "generated"
crossed_module = "su2-conj"
seed = {seed}
tasks = ["check-cm"]

[numerics]
N_t = {n}
N_s = {n}
"#
        );
        let scenario = load_scenario(&text).unwrap();
        prop_assert_eq!(scenario.resolution(), (n, n));
    }

    #[test]
    fn scenario_loader_rejects_any_odd_resolution(n in (5..60usize).prop_map(|k| 2 * k + 1)) {
        let text = format!(
            r#"
name = "generated"
crossed_module = "su2-conj"
seed = 1
tasks = ["check-cm"]

[numerics]
N_t = {n}
N_s = {n}
"#
        );
        prop_assert!(load_scenario(&text).is_err());
    }
}
