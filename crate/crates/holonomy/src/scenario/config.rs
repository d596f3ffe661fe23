//! Scenario files: schema, validation, and construction of the fields,
//! geometry, and numerics a run needs.
//!
//! A scenario is a TOML document naming a crossed module, the connection and
//! two-form fields, a surface (and optionally a path and a reparametrization),
//! grid resolutions with per-task tolerances, and the list of tasks to run.
//! [`load_scenario`] validates the whole document before any task executes:
//! syntax problems surface as [`ConfigError::ConfigParse`], unrecognised task
//! names as [`ConfigError::UnknownTask`], and unrecognised module, field,
//! path, or surface families as [`ConfigError::UnknownFamily`].

use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toml::value::{Table, Value};

use crate::cross::CrossedModule;
use crate::error::{ConfigError, MathError};
use crate::fields::{make_flatting_two_form, BasePoint, ConnectionField, TwoFormField};
use crate::lie::{AlgebraElement, GroupTag};
use crate::path::PathFamily;
use crate::surface::{Reparametrization, SurfaceFamily, SurfaceGrid};

/// Identifier of one check a scenario can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    /// Crossed-module structure identities on random samples.
    CheckCm,
    /// Base-path parallel transport stays on the structure group.
    TransportPath,
    /// The full surface lift stays on the structure groups.
    TransportSurface,
    /// Closed-form bi-holonomy against the explicit four-sided loop.
    Biholonomy,
    /// Tangency of the lifted variation field against the curvature integral.
    Stokes,
    /// Path-space transport against edge transport times the surface class.
    Tgb,
    /// Endpoint evaluation of path-space transport against base transport.
    Ptev1a,
    /// Invariance of the surface class under reparametrization.
    Reparam,
    /// Double-category laws and quasi-flat closure on random squares.
    Plaquette,
}

impl TaskKind {
    /// Every task, in the canonical order used for documentation.
    pub const ALL: [TaskKind; 9] = [
        TaskKind::CheckCm,
        TaskKind::TransportPath,
        TaskKind::TransportSurface,
        TaskKind::Biholonomy,
        TaskKind::Stokes,
        TaskKind::Tgb,
        TaskKind::Ptev1a,
        TaskKind::Reparam,
        TaskKind::Plaquette,
    ];

    /// The identifier used in scenario files and reports.
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::CheckCm => "check-cm",
            TaskKind::TransportPath => "transport-path",
            TaskKind::TransportSurface => "transport-surface",
            TaskKind::Biholonomy => "biholonomy",
            TaskKind::Stokes => "stokes",
            TaskKind::Tgb => "tgb",
            TaskKind::Ptev1a => "ptev1a",
            TaskKind::Reparam => "reparam",
            TaskKind::Plaquette => "plaquette",
        }
    }

    /// Parses a task identifier.
    pub fn parse(name: &str) -> Option<TaskKind> {
        TaskKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Pass threshold used when the scenario does not override it. Exact
    /// algebraic identities get roundoff-scale thresholds; quadrature-backed
    /// checks get thresholds calibrated to second-order methods at the
    /// default resolution of 200.
    pub fn default_tolerance(self) -> f64 {
        match self {
            TaskKind::CheckCm => 1e-9,
            TaskKind::TransportPath => 1e-9,
            TaskKind::TransportSurface => 1e-9,
            TaskKind::Biholonomy => 1e-8,
            TaskKind::Stokes => 1e-6,
            TaskKind::Tgb => 1e-5,
            TaskKind::Ptev1a => 1e-5,
            TaskKind::Reparam => 1e-5,
            TaskKind::Plaquette => 1e-9,
        }
    }

    fn needs_surface(self) -> bool {
        matches!(
            self,
            TaskKind::TransportSurface
                | TaskKind::Biholonomy
                | TaskKind::Stokes
                | TaskKind::Tgb
                | TaskKind::Ptev1a
                | TaskKind::Reparam
        )
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Validated recipe for a connection field; randomness is deferred so the
/// same scenario builds identical fields at every grid resolution.
#[derive(Debug, Clone)]
pub(crate) enum ConnectionSpec {
    Zero,
    Constant {
        c1: AlgebraElement,
        c2: AlgebraElement,
    },
    Affine {
        c: [AlgebraElement; 2],
        d: [[AlgebraElement; 2]; 2],
    },
    Landau {
        b: f64,
        axis: usize,
        direction: AlgebraElement,
    },
    Poly2 {
        coeffs: Box<[[AlgebraElement; 6]; 2]>,
    },
    RandomPoly2 {
        scale: f64,
    },
}

impl ConnectionSpec {
    pub(crate) fn build(&self, tag: &GroupTag, seed: u64) -> Result<ConnectionField, MathError> {
        match self {
            ConnectionSpec::Zero => Ok(ConnectionField::zero(tag.clone())),
            ConnectionSpec::Constant { c1, c2 } => {
                ConnectionField::constant(c1.clone(), c2.clone())
            }
            ConnectionSpec::Affine { c, d } => ConnectionField::affine(c.clone(), d.clone()),
            ConnectionSpec::Landau { b, axis, direction } => {
                ConnectionField::landau(*b, *axis, direction.clone())
            }
            ConnectionSpec::Poly2 { coeffs } => ConnectionField::poly2((**coeffs).clone()),
            ConnectionSpec::RandomPoly2 { scale } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                ConnectionField::random_poly2(tag, &mut rng, *scale)
            }
        }
    }
}

/// Validated recipe for a two-form field.
#[derive(Debug, Clone)]
pub(crate) enum TwoFormSpec {
    Zero,
    Constant { value: AlgebraElement },
    Poly2 { coeffs: Box<[AlgebraElement; 6]> },
    RandomPoly2 { scale: f64 },
    /// The two-form cancelling the fake curvature of the base connection.
    Flatting,
}

impl TwoFormSpec {
    pub(crate) fn build(
        &self,
        cm: &CrossedModule,
        abar: &ConnectionField,
        seed: u64,
    ) -> Result<TwoFormField, MathError> {
        match self {
            TwoFormSpec::Zero => Ok(TwoFormField::zero(cm.h_tag().clone())),
            TwoFormSpec::Constant { value } => Ok(TwoFormField::constant(value.clone())),
            TwoFormSpec::Poly2 { coeffs } => TwoFormField::poly2((**coeffs).clone()),
            TwoFormSpec::RandomPoly2 { scale } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                TwoFormField::random_poly2(cm.h_tag(), &mut rng, *scale)
            }
            TwoFormSpec::Flatting => make_flatting_two_form(cm, abar),
        }
    }
}

/// A parsed and validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub(crate) name: String,
    pub(crate) cm: CrossedModule,
    pub(crate) seed: u64,
    pub(crate) tasks: Vec<TaskKind>,
    pub(crate) abar: ConnectionSpec,
    pub(crate) a: ConnectionSpec,
    pub(crate) b2: TwoFormSpec,
    pub(crate) surface: Option<SurfaceFamily>,
    pub(crate) path: Option<PathFamily>,
    pub(crate) reparam: Option<Reparametrization>,
    pub(crate) n_t: usize,
    pub(crate) n_s: usize,
    /// Per-task overrides of the default tolerances, in file order.
    pub(crate) tolerances: Vec<(TaskKind, f64)>,
}

impl Scenario {
    /// The scenario name from the file.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The crossed module the scenario runs over.
    pub fn crossed_module(&self) -> &CrossedModule {
        &self.cm
    }

    /// The seed driving every random draw in the run.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Replaces the seed (the command line can override the file).
    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    /// The tasks that will run, in declaration order.
    pub fn tasks(&self) -> Vec<TaskKind> {
        self.tasks.clone()
    }

    /// Grid resolutions `(n_t, n_s)`.
    pub fn resolution(&self) -> (usize, usize) {
        (self.n_t, self.n_s)
    }

    /// The pass threshold for a task: the scenario override if present,
    /// otherwise the default.
    pub fn tolerance_for(&self, task: TaskKind) -> f64 {
        self.tolerances
            .iter()
            .find(|(k, _)| *k == task)
            .map(|(_, tol)| *tol)
            .unwrap_or_else(|| task.default_tolerance())
    }

    /// Restricts the run to a single named task, regardless of the task list
    /// in the file. Fails when the name is unknown or the scenario lacks a
    /// section that task needs.
    pub fn restrict_to(&mut self, task: &str) -> Result<(), ConfigError> {
        let kind =
            TaskKind::parse(task).ok_or_else(|| ConfigError::UnknownTask(task.to_string()))?;
        let tasks = vec![kind];
        check_requirements(&tasks, self.surface.is_some(), self.path.is_some(), self.reparam.is_some())?;
        self.tasks = tasks;
        Ok(())
    }
}

/// Parses and validates a scenario document. All validation happens here,
/// before any task runs.
pub fn load_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let root: Table =
        toml::from_str(text).map_err(|e| ConfigError::ConfigParse(e.to_string()))?;
    check_keys(
        &root,
        "scenario",
        &[
            "name",
            "crossed_module",
            "seed",
            "tasks",
            "fields",
            "geometry",
            "reparametrization",
            "numerics",
        ],
    )?;

    let name = require_str(&root, "name", "scenario")?;
    let cm_name = require_str(&root, "crossed_module", "scenario")?;
    let cm = CrossedModule::by_name(&cm_name)
        .ok_or_else(|| ConfigError::UnknownFamily(cm_name.clone()))?;
    let seed = optional_u64(&root, "seed", "scenario")?.unwrap_or(0);
    let tasks = parse_tasks(&root)?;

    let fields = optional_table(&root, "fields", "scenario")?;
    let (abar, a, b2) = match fields {
        Some(table) => {
            check_keys(table, "fields", &["Abar", "A", "B"])?;
            let abar = match optional_table(table, "Abar", "fields")? {
                Some(t) => parse_connection(&cm, t, "fields.Abar")?,
                None => ConnectionSpec::Zero,
            };
            let a = match optional_table(table, "A", "fields")? {
                Some(t) => parse_connection(&cm, t, "fields.A")?,
                None => ConnectionSpec::Zero,
            };
            let b2 = match optional_table(table, "B", "fields")? {
                Some(t) => parse_two_form(&cm, t, "fields.B")?,
                None => TwoFormSpec::Zero,
            };
            (abar, a, b2)
        }
        None => (ConnectionSpec::Zero, ConnectionSpec::Zero, TwoFormSpec::Zero),
    };

    let geometry = optional_table(&root, "geometry", "scenario")?;
    let (surface, path) = match geometry {
        Some(table) => {
            check_keys(table, "geometry", &["surface", "path"])?;
            let surface = match optional_table(table, "surface", "geometry")? {
                Some(t) => Some(parse_surface(t, "geometry.surface")?),
                None => None,
            };
            let path = match optional_table(table, "path", "geometry")? {
                Some(t) => Some(parse_path(t, "geometry.path")?),
                None => None,
            };
            (surface, path)
        }
        None => (None, None),
    };

    let reparam = match optional_table(&root, "reparametrization", "scenario")? {
        Some(t) => Some(parse_reparametrization(t)?),
        None => None,
    };

    let (n_t, n_s, tolerances) = match optional_table(&root, "numerics", "scenario")? {
        Some(t) => parse_numerics(t)?,
        None => (200, 200, Vec::new()),
    };

    check_requirements(&tasks, surface.is_some(), path.is_some(), reparam.is_some())?;

    // Build every declared object once so that malformed parameters are
    // reported now rather than mid-run. The builds are discarded; runs
    // rebuild at whatever resolution they need.
    let abar_probe = abar
        .build(cm.g_tag(), 0)
        .map_err(|e| parse_err("fields.Abar", &e))?;
    a.build(cm.g_tag(), 0).map_err(|e| parse_err("fields.A", &e))?;
    b2.build(&cm, &abar_probe, 0)
        .map_err(|e| parse_err("fields.B", &e))?;
    if let Some(family) = &surface {
        SurfaceGrid::new(family.clone(), n_t, n_s)
            .map_err(|e| parse_err("geometry.surface", &e))?;
    }
    if let Some(family) = &path {
        family
            .validate()
            .map_err(|e| parse_err("geometry.path", &e))?;
    }

    Ok(Scenario {
        name,
        cm,
        seed,
        tasks,
        abar,
        a,
        b2,
        surface,
        path,
        reparam,
        n_t,
        n_s,
        tolerances,
    })
}

fn check_requirements(
    tasks: &[TaskKind],
    has_surface: bool,
    has_path: bool,
    has_reparam: bool,
) -> Result<(), ConfigError> {
    for task in tasks {
        if task.needs_surface() && !has_surface {
            return Err(ConfigError::ConfigParse(format!(
                "task `{task}` needs a [geometry.surface] table"
            )));
        }
        if *task == TaskKind::TransportPath && !has_path && !has_surface {
            return Err(ConfigError::ConfigParse(
                "task `transport-path` needs a [geometry.path] or [geometry.surface] table"
                    .to_string(),
            ));
        }
        if *task == TaskKind::Reparam && !has_reparam {
            return Err(ConfigError::ConfigParse(format!(
                "task `{task}` needs a [reparametrization] table"
            )));
        }
    }
    Ok(())
}

fn parse_tasks(root: &Table) -> Result<Vec<TaskKind>, ConfigError> {
    let value = require(root, "tasks", "scenario")?;
    let array = as_array(value, "scenario.tasks")?;
    let mut tasks = Vec::with_capacity(array.len());
    for entry in array {
        let name = as_str(entry, "scenario.tasks entry")?;
        let kind = TaskKind::parse(&name).ok_or(ConfigError::UnknownTask(name))?;
        if tasks.contains(&kind) {
            return Err(ConfigError::ConfigParse(format!(
                "task `{kind}` is listed twice"
            )));
        }
        tasks.push(kind);
    }
    Ok(tasks)
}

fn parse_connection(
    cm: &CrossedModule,
    table: &Table,
    path: &str,
) -> Result<ConnectionSpec, ConfigError> {
    let family = require_str(table, "family", path)?;
    let tag = cm.g_tag();
    match family.as_str() {
        "zero" => {
            check_keys(table, path, &["family"])?;
            Ok(ConnectionSpec::Zero)
        }
        "constant" => {
            check_keys(table, path, &["family", "c1", "c2"])?;
            Ok(ConnectionSpec::Constant {
                c1: algebra_field(tag, table, "c1", path)?,
                c2: algebra_field(tag, table, "c2", path)?,
            })
        }
        "affine" => {
            check_keys(table, path, &["family", "c1", "c2", "d11", "d12", "d21", "d22"])?;
            let c = [
                algebra_field(tag, table, "c1", path)?,
                algebra_field(tag, table, "c2", path)?,
            ];
            let d = [
                [
                    algebra_field(tag, table, "d11", path)?,
                    algebra_field(tag, table, "d12", path)?,
                ],
                [
                    algebra_field(tag, table, "d21", path)?,
                    algebra_field(tag, table, "d22", path)?,
                ],
            ];
            Ok(ConnectionSpec::Affine { c, d })
        }
        "landau" => {
            check_keys(table, path, &["family", "b", "axis", "direction"])?;
            let b = require_f64(table, "b", path)?;
            let axis = require_u64(table, "axis", path)? as usize;
            let direction = algebra_field(tag, table, "direction", path)?;
            Ok(ConnectionSpec::Landau { b, axis, direction })
        }
        "poly2" => {
            check_keys(table, path, &["family", "rows"])?;
            let rows = as_array(require(table, "rows", path)?, &format!("{path}.rows"))?;
            if rows.len() != 2 {
                return Err(ConfigError::ConfigParse(format!(
                    "{path}.rows: expected 2 component rows, got {}",
                    rows.len()
                )));
            }
            let mut out: Vec<[AlgebraElement; 6]> = Vec::with_capacity(2);
            for (mu, row) in rows.iter().enumerate() {
                let row_path = format!("{path}.rows[{mu}]");
                let entries = as_array(row, &row_path)?;
                if entries.len() != 6 {
                    return Err(ConfigError::ConfigParse(format!(
                        "{row_path}: expected 6 monomial coefficients, got {}",
                        entries.len()
                    )));
                }
                let mut coeffs = Vec::with_capacity(6);
                for (m, entry) in entries.iter().enumerate() {
                    coeffs.push(algebra_value(
                        tag,
                        entry,
                        &format!("{row_path}[{m}]"),
                    )?);
                }
                out.push(coeffs.try_into().expect("length checked"));
            }
            let coeffs: [[AlgebraElement; 6]; 2] =
                out.try_into().expect("length checked");
            Ok(ConnectionSpec::Poly2 {
                coeffs: Box::new(coeffs),
            })
        }
        "random-poly2" => {
            check_keys(table, path, &["family", "scale"])?;
            Ok(ConnectionSpec::RandomPoly2 {
                scale: positive_f64(table, "scale", path)?,
            })
        }
        other => Err(ConfigError::UnknownFamily(other.to_string())),
    }
}

fn parse_two_form(
    cm: &CrossedModule,
    table: &Table,
    path: &str,
) -> Result<TwoFormSpec, ConfigError> {
    let family = require_str(table, "family", path)?;
    let tag = cm.h_tag();
    match family.as_str() {
        "zero" => {
            check_keys(table, path, &["family"])?;
            Ok(TwoFormSpec::Zero)
        }
        "constant" => {
            check_keys(table, path, &["family", "value"])?;
            Ok(TwoFormSpec::Constant {
                value: algebra_field(tag, table, "value", path)?,
            })
        }
        "poly2" => {
            check_keys(table, path, &["family", "rows"])?;
            let entries = as_array(require(table, "rows", path)?, &format!("{path}.rows"))?;
            if entries.len() != 6 {
                return Err(ConfigError::ConfigParse(format!(
                    "{path}.rows: expected 6 monomial coefficients, got {}",
                    entries.len()
                )));
            }
            let mut coeffs = Vec::with_capacity(6);
            for (m, entry) in entries.iter().enumerate() {
                coeffs.push(algebra_value(tag, entry, &format!("{path}.rows[{m}]"))?);
            }
            let coeffs: [AlgebraElement; 6] = coeffs.try_into().expect("length checked");
            Ok(TwoFormSpec::Poly2 {
                coeffs: Box::new(coeffs),
            })
        }
        "random-poly2" => {
            check_keys(table, path, &["family", "scale"])?;
            Ok(TwoFormSpec::RandomPoly2 {
                scale: positive_f64(table, "scale", path)?,
            })
        }
        "flatting" => {
            check_keys(table, path, &["family"])?;
            if !cm.tau_alg_invertible() {
                return Err(ConfigError::ConfigParse(format!(
                    "{path}: family `flatting` needs an invertible tau; module `{}` has none",
                    cm.name()
                )));
            }
            Ok(TwoFormSpec::Flatting)
        }
        other => Err(ConfigError::UnknownFamily(other.to_string())),
    }
}

fn parse_path(table: &Table, path: &str) -> Result<PathFamily, ConfigError> {
    let family = require_str(table, "family", path)?;
    let built = match family.as_str() {
        "segment" => {
            check_keys(table, path, &["family", "from", "to"])?;
            PathFamily::Segment {
                from: point_field(table, "from", path)?,
                to: point_field(table, "to", path)?,
            }
        }
        "arc" => {
            check_keys(
                table,
                path,
                &["family", "center", "radius", "start_angle", "end_angle"],
            )?;
            PathFamily::Arc {
                center: point_field(table, "center", path)?,
                radius: require_f64(table, "radius", path)?,
                start_angle: require_f64(table, "start_angle", path)?,
                end_angle: require_f64(table, "end_angle", path)?,
            }
        }
        "cubic-bezier" => {
            check_keys(table, path, &["family", "control"])?;
            let entries = as_array(require(table, "control", path)?, &format!("{path}.control"))?;
            if entries.len() != 4 {
                return Err(ConfigError::ConfigParse(format!(
                    "{path}.control: expected 4 control points, got {}",
                    entries.len()
                )));
            }
            let mut control = Vec::with_capacity(4);
            for (k, entry) in entries.iter().enumerate() {
                control.push(point_value(entry, &format!("{path}.control[{k}]"))?);
            }
            PathFamily::CubicBezier {
                control: control.try_into().expect("length checked"),
            }
        }
        "points" => {
            check_keys(table, path, &["family", "points"])?;
            let entries = as_array(require(table, "points", path)?, &format!("{path}.points"))?;
            let mut points = Vec::with_capacity(entries.len());
            for (k, entry) in entries.iter().enumerate() {
                points.push(point_value(entry, &format!("{path}.points[{k}]"))?);
            }
            PathFamily::Points { points }
        }
        other => return Err(ConfigError::UnknownFamily(other.to_string())),
    };
    built.validate().map_err(|e| parse_err(path, &e))?;
    Ok(built)
}

fn parse_surface(table: &Table, path: &str) -> Result<SurfaceFamily, ConfigError> {
    let family = require_str(table, "family", path)?;
    match family.as_str() {
        "identity-square" => {
            check_keys(table, path, &["family"])?;
            Ok(SurfaceFamily::IdentitySquare)
        }
        "warp" => {
            check_keys(table, path, &["family", "amplitude"])?;
            Ok(SurfaceFamily::Warp {
                amplitude: require_f64(table, "amplitude", path)?,
            })
        }
        "ruled" => {
            check_keys(table, path, &["family", "bottom", "top"])?;
            let bottom = parse_path(
                require_table(table, "bottom", path)?,
                &format!("{path}.bottom"),
            )?;
            let top = parse_path(require_table(table, "top", path)?, &format!("{path}.top"))?;
            Ok(SurfaceFamily::Ruled { bottom, top })
        }
        "points" => {
            check_keys(table, path, &["family", "rows"])?;
            let entries = as_array(require(table, "rows", path)?, &format!("{path}.rows"))?;
            let mut rows = Vec::with_capacity(entries.len());
            for (j, row) in entries.iter().enumerate() {
                let row_path = format!("{path}.rows[{j}]");
                let row_entries = as_array(row, &row_path)?;
                let mut points = Vec::with_capacity(row_entries.len());
                for (k, entry) in row_entries.iter().enumerate() {
                    points.push(point_value(entry, &format!("{row_path}[{k}]"))?);
                }
                rows.push(points);
            }
            Ok(SurfaceFamily::Points { rows })
        }
        other => Err(ConfigError::UnknownFamily(other.to_string())),
    }
}

fn parse_reparametrization(table: &Table) -> Result<Reparametrization, ConfigError> {
    let path = "reparametrization";
    check_keys(table, path, &["a", "b", "mode"])?;
    let a = require_f64(table, "a", path)?;
    let b = require_f64(table, "b", path)?;
    let mode = require_str(table, "mode", path)?;
    Reparametrization::new(a, b, &mode).map_err(|e| parse_err(path, &e))
}

fn parse_numerics(table: &Table) -> Result<(usize, usize, Vec<(TaskKind, f64)>), ConfigError> {
    let path = "numerics";
    check_keys(table, path, &["N_t", "N_s", "tolerances"])?;
    let n_t = match optional_u64(table, "N_t", path)? {
        Some(n) => checked_resolution(n, "numerics.N_t")?,
        None => 200,
    };
    let n_s = match optional_u64(table, "N_s", path)? {
        Some(n) => checked_resolution(n, "numerics.N_s")?,
        None => 200,
    };
    let mut tolerances = Vec::new();
    if let Some(tols) = optional_table(table, "tolerances", path)? {
        for (key, value) in tols {
            let kind = TaskKind::parse(key)
                .ok_or_else(|| ConfigError::UnknownTask(key.clone()))?;
            let tol = as_f64(value, &format!("numerics.tolerances.{key}"))?;
            if !(tol.is_finite() && tol > 0.0) {
                return Err(ConfigError::ConfigParse(format!(
                    "numerics.tolerances.{key}: tolerance must be positive and finite, got {tol}"
                )));
            }
            tolerances.push((kind, tol));
        }
    }
    Ok((n_t, n_s, tolerances))
}

/// Grid resolutions must be even (the transverse direction runs at half
/// steps) and large enough for the quadratures to make sense.
pub(crate) fn checked_resolution(n: u64, what: &str) -> Result<usize, ConfigError> {
    if n < 10 || n % 2 != 0 {
        return Err(ConfigError::ConfigParse(format!(
            "{what}: resolution must be even and at least 10, got {n}"
        )));
    }
    Ok(n as usize)
}

// --- small typed accessors over toml values -------------------------------

fn parse_err(path: &str, err: &dyn fmt::Display) -> ConfigError {
    ConfigError::ConfigParse(format!("{path}: {err}"))
}

fn check_keys(table: &Table, path: &str, allowed: &[&str]) -> Result<(), ConfigError> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigError::ConfigParse(format!(
                "{path}: unknown key `{key}` (expected one of: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn require<'a>(table: &'a Table, key: &str, path: &str) -> Result<&'a Value, ConfigError> {
    table.get(key).ok_or_else(|| {
        ConfigError::ConfigParse(format!("{path}: missing required field `{key}`"))
    })
}

fn as_str(value: &Value, path: &str) -> Result<String, ConfigError> {
    value
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| ConfigError::ConfigParse(format!("{path}: expected a string")))
}

fn as_f64(value: &Value, path: &str) -> Result<f64, ConfigError> {
    value
        .as_float()
        .or_else(|| value.as_integer().map(|i| i as f64))
        .ok_or_else(|| ConfigError::ConfigParse(format!("{path}: expected a number")))
}

fn as_u64(value: &Value, path: &str) -> Result<u64, ConfigError> {
    value
        .as_integer()
        .filter(|i| *i >= 0)
        .map(|i| i as u64)
        .ok_or_else(|| {
            ConfigError::ConfigParse(format!("{path}: expected a non-negative integer"))
        })
}

fn as_array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>, ConfigError> {
    value
        .as_array()
        .ok_or_else(|| ConfigError::ConfigParse(format!("{path}: expected an array")))
}

fn as_table<'a>(value: &'a Value, path: &str) -> Result<&'a Table, ConfigError> {
    value
        .as_table()
        .ok_or_else(|| ConfigError::ConfigParse(format!("{path}: expected a table")))
}

fn require_str(table: &Table, key: &str, path: &str) -> Result<String, ConfigError> {
    as_str(require(table, key, path)?, &format!("{path}.{key}"))
}

fn require_f64(table: &Table, key: &str, path: &str) -> Result<f64, ConfigError> {
    as_f64(require(table, key, path)?, &format!("{path}.{key}"))
}

fn require_u64(table: &Table, key: &str, path: &str) -> Result<u64, ConfigError> {
    as_u64(require(table, key, path)?, &format!("{path}.{key}"))
}

fn require_table<'a>(table: &'a Table, key: &str, path: &str) -> Result<&'a Table, ConfigError> {
    as_table(require(table, key, path)?, &format!("{path}.{key}"))
}

fn optional_u64(table: &Table, key: &str, path: &str) -> Result<Option<u64>, ConfigError> {
    match table.get(key) {
        Some(v) => Ok(Some(as_u64(v, &format!("{path}.{key}"))?)),
        None => Ok(None),
    }
}

fn optional_table<'a>(
    table: &'a Table,
    key: &str,
    path: &str,
) -> Result<Option<&'a Table>, ConfigError> {
    match table.get(key) {
        Some(v) => Ok(Some(as_table(v, &format!("{path}.{key}"))?)),
        None => Ok(None),
    }
}

fn positive_f64(table: &Table, key: &str, path: &str) -> Result<f64, ConfigError> {
    let v = require_f64(table, key, path)?;
    if !(v.is_finite() && v > 0.0) {
        return Err(ConfigError::ConfigParse(format!(
            "{path}.{key}: expected a positive number, got {v}"
        )));
    }
    Ok(v)
}

fn f64_array(value: &Value, path: &str) -> Result<Vec<f64>, ConfigError> {
    as_array(value, path)?
        .iter()
        .enumerate()
        .map(|(k, v)| as_f64(v, &format!("{path}[{k}]")))
        .collect()
}

fn algebra_value(
    tag: &GroupTag,
    value: &Value,
    path: &str,
) -> Result<AlgebraElement, ConfigError> {
    let coeffs = f64_array(value, path)?;
    AlgebraElement::from_coefficients(tag.clone(), &coeffs).map_err(|e| parse_err(path, &e))
}

fn algebra_field(
    tag: &GroupTag,
    table: &Table,
    key: &str,
    path: &str,
) -> Result<AlgebraElement, ConfigError> {
    algebra_value(tag, require(table, key, path)?, &format!("{path}.{key}"))
}

fn point_value(value: &Value, path: &str) -> Result<BasePoint, ConfigError> {
    let coords = f64_array(value, path)?;
    if coords.len() != 2 {
        return Err(ConfigError::ConfigParse(format!(
            "{path}: expected a two-entry point, got {} entries",
            coords.len()
        )));
    }
    Ok(BasePoint::new(coords[0], coords[1]))
}

fn point_field(table: &Table, key: &str, path: &str) -> Result<BasePoint, ConfigError> {
    point_value(require(table, key, path)?, &format!("{path}.{key}"))
}
