//! Scenario execution: the checks named in a scenario file, machine-readable
//! reports, and convergence tables across grid resolutions.
//!
//! A scenario file declares a crossed module, the fields, the geometry, and a
//! list of tasks; [`run_scenario`] executes the tasks in declaration order
//! and returns a [`Report`] with one record per task. Every record carries a
//! single worst-case residual and passes exactly when that residual is below
//! the task's tolerance. Runs are deterministic: the same document and seed
//! produce the same residuals bit for bit (wall-clock times excepted).

mod config;

pub use config::{load_scenario, Scenario, TaskKind};

use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cross::crossed_module_check;
use crate::error::{ConfigError, MathError};
use crate::fields::{BaseVector, ConnectionField, TwoFormField};
use crate::lie::{fro_dist, GroupElement};
use crate::path::{SampledPath, TangentField};
use crate::plaquette::{
    compose_h, compose_v, identity_h, identity_v, interchange_check, inverse_h, inverse_v,
    quasi_flat_closure_check, random_plaquette, random_quasi_flat_pair, random_window,
    ComposeDirection, Plaquette,
};
use crate::quad::fit_convergence_order;
use crate::surface::{
    biholonomy_loop, ev1_transport_check, verify_reparam, verify_tgb, LiftedSurface, SurfaceGrid,
};
use crate::transport::{
    curvature_integral_residual, lift_tangent_field, section_initial_w, transport_frames,
    transport_frames_rk4,
};

/// JSON has no literal for non-finite numbers, so the residual of a task
/// that failed to produce one is serialized as `null` and read back as
/// infinity. Finite values round-trip exactly.
mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Result of one task: worst-case residual against the pass threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    /// Task identifier as written in the scenario file.
    pub task: String,
    /// Worst-case residual over everything the task examined; infinite when
    /// the task errored out.
    #[serde(with = "finite_or_null")]
    pub residual: f64,
    /// Pass threshold the residual was compared against.
    pub tolerance: f64,
    /// `residual < tolerance` (and the residual is finite).
    pub pass: bool,
    /// Wall-clock time of the task in milliseconds.
    pub wall_time_ms: f64,
    /// Failure message when the task could not produce a residual.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Build metadata attached to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Crate version that produced the report.
    pub version: String,
    /// Floating-point model of the run.
    pub numeric_precision: String,
}

impl Environment {
    /// The environment of the current build.
    pub fn current() -> Environment {
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            numeric_precision: "IEEE-754 binary64".to_string(),
        }
    }
}

/// Outcome of a scenario run: one record per task, in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Scenario name from the file.
    pub scenario: String,
    /// Per-task outcomes, in the order the tasks were declared.
    pub tasks: Vec<TaskRecord>,
    /// Build metadata.
    pub environment: Environment,
}

impl Report {
    /// True when every task passed (vacuously true for an empty task list).
    pub fn all_passed(&self) -> bool {
        self.tasks.iter().all(|t| t.pass)
    }

    /// Pretty-printed JSON with a trailing newline. Floating-point values
    /// survive a round trip through [`Report::from_json`] exactly.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    /// Parses a report produced by [`Report::to_json`].
    pub fn from_json(text: &str) -> Result<Report, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::ConfigParse(e.to_string()))
    }
}

/// One row of a convergence table: the residual of `task` at resolution
/// `n_t = n_s = n`. The fitted order appears on the rows of the final
/// resolution only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub task: String,
    pub residual: f64,
    /// Log-log slope of residual against `1/n`, fitted over all resolutions;
    /// present on the last row of each task when at least two residuals sit
    /// above roundoff.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
}

/// Residuals across a ladder of grid resolutions with fitted orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub scenario: String,
    /// Rows grouped by resolution (outer) and task (inner), both in
    /// declaration order.
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// CSV rendering with header `N,task,residual,slope`; the slope column
    /// is empty except on the final row of each task.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,task,residual,slope\n");
        for row in &self.rows {
            let slope = row
                .slope
                .map(|s| format!("{s:.3}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:e},{}\n",
                row.n, row.task, row.residual, slope
            ));
        }
        out
    }
}

/// Parses, validates, and runs a scenario document.
pub fn run_scenario(text: &str) -> Result<Report, ConfigError> {
    Ok(load_scenario(text)?.run())
}

/// Parses a scenario document and reruns its tasks at each resolution in
/// `n_values` (overriding both grid resolutions), returning the residual
/// table with fitted orders.
pub fn run_convergence(text: &str, n_values: &[usize]) -> Result<ConvergenceTable, ConfigError> {
    load_scenario(text)?.run_convergence(n_values)
}

// Seed offsets keeping the independent random draws of one run decoupled.
const SEED_ABAR: u64 = 0x41_62_61_72;
const SEED_A: u64 = 0x41;
const SEED_B: u64 = 0x42;
const SEED_PLAQUETTE: u64 = 0x70_6C_61_71;

impl Scenario {
    /// Runs every declared task in declaration order.
    pub fn run(&self) -> Report {
        let tasks = self.tasks.iter().map(|&kind| self.run_one(kind)).collect();
        Report {
            scenario: self.name.clone(),
            tasks,
            environment: Environment::current(),
        }
    }

    /// Reruns the declared tasks at each resolution in `n_values`, overriding
    /// both grid resolutions, and fits a log-log convergence order per task.
    pub fn run_convergence(&self, n_values: &[usize]) -> Result<ConvergenceTable, ConfigError> {
        for &n in n_values {
            config::checked_resolution(n as u64, "convergence resolution")?;
        }
        let mut residuals: Vec<Vec<f64>> = vec![Vec::new(); self.tasks.len()];
        let mut rows = Vec::new();
        for &n in n_values {
            for (t, &kind) in self.tasks.iter().enumerate() {
                let residual = self
                    .task_residual(kind, n, n)
                    .unwrap_or(f64::INFINITY);
                residuals[t].push(residual);
                rows.push(ConvergenceRow {
                    n,
                    task: kind.name().to_string(),
                    residual,
                    slope: None,
                });
            }
        }
        if let Some(&last) = n_values.last() {
            for (t, &kind) in self.tasks.iter().enumerate() {
                let slope = fit_convergence_order(n_values, &residuals[t], 1e-14);
                if let Some(row) = rows
                    .iter_mut()
                    .rev()
                    .find(|r| r.n == last && r.task == kind.name())
                {
                    row.slope = slope;
                }
            }
        }
        Ok(ConvergenceTable {
            scenario: self.name.clone(),
            rows,
        })
    }

    fn run_one(&self, kind: TaskKind) -> TaskRecord {
        let tolerance = self.tolerance_for(kind);
        let start = Instant::now();
        let outcome = self.task_residual(kind, self.n_t, self.n_s);
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(residual) => TaskRecord {
                task: kind.name().to_string(),
                residual,
                tolerance,
                pass: residual.is_finite() && residual < tolerance,
                wall_time_ms,
                error: None,
            },
            Err(err) => TaskRecord {
                task: kind.name().to_string(),
                residual: f64::INFINITY,
                tolerance,
                pass: false,
                wall_time_ms,
                error: Some(err.to_string()),
            },
        }
    }

    /// The worst-case residual of one task at the given resolutions.
    pub fn task_residual(
        &self,
        kind: TaskKind,
        n_t: usize,
        n_s: usize,
    ) -> Result<f64, MathError> {
        match kind {
            TaskKind::CheckCm => self.residual_check_cm(),
            TaskKind::TransportPath => self.residual_transport_path(n_t),
            TaskKind::TransportSurface => self.residual_transport_surface(n_t, n_s),
            TaskKind::Biholonomy => self.residual_biholonomy(n_t, n_s),
            TaskKind::Stokes => self.residual_stokes(n_t, n_s),
            TaskKind::Tgb => self.residual_tgb(n_t, n_s),
            TaskKind::Ptev1a => self.residual_ptev1a(n_t, n_s),
            TaskKind::Reparam => self.residual_reparam(n_t, n_s),
            TaskKind::Plaquette => self.residual_plaquette(),
        }
    }

    /// Builds the three fields of the scenario. The random families draw from
    /// fixed offsets of the scenario seed, so fields are identical across
    /// resolutions within one run.
    pub fn build_fields(
        &self,
    ) -> Result<(ConnectionField, ConnectionField, TwoFormField), MathError> {
        let abar = self.abar.build(self.cm.g_tag(), self.seed ^ SEED_ABAR)?;
        let a = self.a.build(self.cm.g_tag(), self.seed ^ SEED_A)?;
        let b2 = self.b2.build(&self.cm, &abar, self.seed ^ SEED_B)?;
        Ok((abar, a, b2))
    }

    /// Builds the scenario surface at the given resolutions.
    pub fn build_grid(&self, n_t: usize, n_s: usize) -> Result<SurfaceGrid, MathError> {
        let family = self.surface.as_ref().ok_or_else(|| MathError::GridMismatch {
            reason: "scenario has no [geometry.surface] table".to_string(),
        })?;
        SurfaceGrid::new(family.clone(), n_t, n_s)
    }

    /// The path a path task runs on: the explicit `[geometry.path]` if
    /// present, otherwise the lower boundary of the surface.
    fn sampled_path(&self, n: usize) -> Result<SampledPath, MathError> {
        if let Some(family) = &self.path {
            return SampledPath::from_family(family, n);
        }
        self.build_grid(n, self.n_s.min(n))?.row_path(0.0, n)
    }

    fn residual_check_cm(&self) -> Result<f64, MathError> {
        let r = crossed_module_check(&self.cm, 1000, self.seed)?;
        Ok(r.equivariance.max(r.peiffer))
    }

    fn residual_transport_path(&self, n_t: usize) -> Result<f64, MathError> {
        let (abar, _, _) = self.build_fields()?;
        let path = self.sampled_path(n_t)?;
        let seed = GroupElement::identity(abar.tag().clone());
        let midpoint = transport_frames(&abar, &path, &seed)?;
        let rk4 = transport_frames_rk4(&abar, &path, &seed)?;
        Ok(midpoint.group_drift().max(rk4.group_drift()))
    }

    fn residual_transport_surface(&self, n_t: usize, n_s: usize) -> Result<f64, MathError> {
        let (abar, a, _) = self.build_fields()?;
        let grid = self.build_grid(n_t, n_s)?;
        Ok(LiftedSurface::new(&a, &abar, &grid)?.group_drift())
    }

    fn residual_biholonomy(&self, n_t: usize, n_s: usize) -> Result<f64, MathError> {
        let (abar, a, _) = self.build_fields()?;
        let grid = self.build_grid(n_t, n_s)?;
        let lift = LiftedSurface::new(&a, &abar, &grid)?;
        let mut worst: f64 = 0.0;
        for k in 0..=n_s {
            let closed = lift.biholonomy_closed_form(2 * k);
            let looped = biholonomy_loop(&a, &abar, &grid, n_t, k)?;
            worst = worst.max(fro_dist(closed.matrix(), looped.matrix()));
        }
        Ok(worst)
    }

    fn residual_stokes(&self, n_t: usize, n_s: usize) -> Result<f64, MathError> {
        let (abar, _, _) = self.build_fields()?;
        let grid = self.build_grid(n_t, n_s)?;
        let path = grid.row_path(0.0, n_t)?;
        let seed = GroupElement::identity(abar.tag().clone());
        let lifted = transport_frames(&abar, &path, &seed)?;
        let velocities: Vec<BaseVector> = (0..=n_t)
            .map(|k| grid.eval(k as f64 / n_t as f64, 0.0).d_s)
            .collect();
        let v = TangentField::from_values(velocities);
        let w0 = section_initial_w(&abar, &lifted, &v)?;
        let field = lift_tangent_field(&abar, &lifted, &v, w0)?;
        let mut worst: f64 = 0.0;
        for k in 0..=n_t {
            worst = worst.max(curvature_integral_residual(&abar, &lifted, &field, k)?);
        }
        Ok(worst)
    }

    fn residual_tgb(&self, n_t: usize, n_s: usize) -> Result<f64, MathError> {
        let (abar, a, b2) = self.build_fields()?;
        let grid = self.build_grid(n_t, n_s)?;
        Ok(verify_tgb(&self.cm, &a, &abar, &b2, &grid)?.residual)
    }

    fn residual_ptev1a(&self, n_t: usize, n_s: usize) -> Result<f64, MathError> {
        let (abar, a, _) = self.build_fields()?;
        let grid = self.build_grid(n_t, n_s)?;
        Ok(ev1_transport_check(&a, &abar, &grid)?.residual)
    }

    fn residual_reparam(&self, n_t: usize, n_s: usize) -> Result<f64, MathError> {
        let map = self.reparam.as_ref().ok_or_else(|| MathError::GridMismatch {
            reason: "scenario has no [reparametrization] table".to_string(),
        })?;
        let (abar, a, b2) = self.build_fields()?;
        let grid = self.build_grid(n_t, n_s)?;
        Ok(verify_reparam(&self.cm, &a, &abar, &b2, &grid, map)?.residual)
    }

    fn residual_plaquette(&self) -> Result<f64, MathError> {
        let cm = &self.cm;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ SEED_PLAQUETTE);
        let scale = 0.9;
        let mut worst: f64 = 0.0;

        for _ in 0..60 {
            for direction in [ComposeDirection::Vertical, ComposeDirection::Horizontal] {
                let (p, q) =
                    random_quasi_flat_pair(cm, &mut rng, scale, direction, None, None)?;
                worst = worst.max(quasi_flat_closure_check(cm, &p, &q, direction)?);
                match direction {
                    ComposeDirection::Vertical => {
                        let below = identity_v(cm, &p.a)?;
                        let above = identity_v(cm, &p.c)?;
                        worst = worst.max(plaquette_dist(&compose_v(cm, &below, &p)?, &p));
                        worst = worst.max(plaquette_dist(&compose_v(cm, &p, &above)?, &p));
                        let inv = inverse_v(cm, &p)?;
                        worst = worst
                            .max(plaquette_dist(&compose_v(cm, &p, &inv)?, &below));
                        let r = random_plaquette(cm, &mut rng, scale)?;
                        let r = Plaquette::new(cm, q.c.clone(), r.b, r.c, r.d, r.h, None)?;
                        let grouped_low = compose_v(cm, &compose_v(cm, &p, &q)?, &r)?;
                        let grouped_high = compose_v(cm, &p, &compose_v(cm, &q, &r)?)?;
                        worst = worst.max(plaquette_dist(&grouped_low, &grouped_high));
                    }
                    ComposeDirection::Horizontal => {
                        let left = identity_h(cm, &p.d)?;
                        let right = identity_h(cm, &p.b)?;
                        worst = worst.max(plaquette_dist(&compose_h(cm, &left, &p)?, &p));
                        worst = worst.max(plaquette_dist(&compose_h(cm, &p, &right)?, &p));
                        let inv = inverse_h(cm, &p)?;
                        worst = worst.max(plaquette_dist(&compose_h(cm, &p, &inv)?, &left));
                        let r = random_plaquette(cm, &mut rng, scale)?;
                        let r = Plaquette::new(cm, r.a, r.b, r.c, q.b.clone(), r.h, None)?;
                        let grouped_left = compose_h(cm, &compose_h(cm, &p, &q)?, &r)?;
                        let grouped_right = compose_h(cm, &p, &compose_h(cm, &q, &r)?)?;
                        worst = worst.max(plaquette_dist(&grouped_left, &grouped_right));
                    }
                }
            }
        }

        // Interchange needs windows of quasi-flat squares with many shared
        // edges, which only the section-based generator can produce.
        if cm.tau_alg_invertible() {
            for _ in 0..40 {
                let [bl, br, tl, tr] = random_window(cm, &mut rng, scale, true)?;
                let report = interchange_check(cm, &bl, &br, &tl, &tr)?;
                worst = worst.max(report.boundary_residual).max(report.tau_residual);
            }
        }
        Ok(worst)
    }
}

/// Worst entrywise-matrix distance over the four edges and the decoration.
fn plaquette_dist(p: &Plaquette, q: &Plaquette) -> f64 {
    fro_dist(p.a.matrix(), q.a.matrix())
        .max(fro_dist(p.b.matrix(), q.b.matrix()))
        .max(fro_dist(p.c.matrix(), q.c.matrix()))
        .max(fro_dist(p.d.matrix(), q.d.matrix()))
        .max(fro_dist(p.h.matrix(), q.h.matrix()))
}
