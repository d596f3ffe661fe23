//! The scenario layer end to end: load a TOML scenario file, run its
//! declared tasks, serialize the JSON report, and produce a convergence
//! table across grid resolutions.
//!
//! Run with `cargo run --example scenario_reports`.

use anyhow::Result;

use holonomy::scenario::{load_scenario, Report};

fn main() -> Result<()> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/abelian-square.toml"
    );
    let text = std::fs::read_to_string(path)?;
    let scenario = load_scenario(&text)?;

    println!("loaded scenario `{}`", scenario.name());
    println!(
        "  module {:14} resolution {:?}  declared tasks {:?}",
        scenario.crossed_module().name(),
        scenario.resolution(),
        scenario.tasks().iter().map(|t| t.name()).collect::<Vec<_>>()
    );

    println!();
    println!("running the declared tasks");
    println!("==========================");
    let report = scenario.run();
    for record in &report.tasks {
        println!(
            "  {:<12} {}  residual {:.3e} against tolerance {:.1e}",
            record.task,
            if record.pass { "PASS" } else { "FAIL" },
            record.residual,
            record.tolerance
        );
    }

    println!();
    println!("the JSON report round-trips exactly");
    println!("===================================");
    let json = report.to_json();
    let back = Report::from_json(&json)?;
    assert_eq!(back.to_json(), json);
    for line in json.lines().take(14) {
        println!("  {line}");
    }
    println!("  ...");

    println!();
    println!("convergence ladder (task `stokes` only)");
    println!("=======================================");
    let mut restricted = load_scenario(&text)?;
    restricted.restrict_to("stokes")?;
    let table = restricted.run_convergence(&[20, 40, 80])?;
    print!("{}", table.to_csv());
    let slope = table.rows.last().and_then(|r| r.slope).expect("fitted slope");
    println!();
    println!("fitted order {slope:.3}: the residual is quadrature error, not model error");
    Ok(())
}
