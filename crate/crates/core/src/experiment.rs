//! Experiment configuration, suite orchestration and report files.
//!
//! A run is described by one JSON document. Each suite executes its pinned
//! acceptance criteria and then a configured run on the requested grid and
//! coefficient family. Reports are deterministic for a fixed configuration.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::beltrami::{
    apriori_check, log_derivative, principal_solution, BeltramiCoefficient, SolveMethod,
    SolveOptions,
};
use crate::criteria::{apriori_data, run_criterion, CriterionOutcome, Curve};
use crate::error::{LabError, Result};
use crate::family::{generate_family, FamilySpec};
use crate::grid::{lp_norm, save_cfld1, ComplexField, GridSpec};
use crate::multiplier::frac_laplacian;
use crate::sobolev::{dyadic_scales, norm_report, vmo_modulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    VerifyOperators,
    CommutatorSuite,
    Solve,
    LogRegularity,
    AprioriSweep,
    VmoExample,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::VerifyOperators,
        Suite::CommutatorSuite,
        Suite::Solve,
        Suite::LogRegularity,
        Suite::AprioriSweep,
        Suite::VmoExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::VerifyOperators => "verify-operators",
            Suite::CommutatorSuite => "commutator-suite",
            Suite::Solve => "solve",
            Suite::LogRegularity => "log-regularity",
            Suite::AprioriSweep => "apriori-sweep",
            Suite::VmoExample => "vmo-example",
        }
    }

    /// Acceptance criteria run by this suite.
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::VerifyOperators => &[1, 2, 3],
            Suite::CommutatorSuite => &[4, 5, 6],
            Suite::Solve => &[7],
            Suite::LogRegularity => &[8, 11],
            Suite::AprioriSweep => &[9],
            Suite::VmoExample => &[10],
        }
    }
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub points_per_axis: usize,
    pub half_width: f64,
}

fn default_dim() -> usize {
    2
}

impl GridParams {
    pub fn spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.dim, self.points_per_axis, self.half_width)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamLists {
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_beta")]
    pub beta: Vec<f64>,
    #[serde(default = "default_p")]
    pub p: Vec<f64>,
}

fn default_alpha() -> Vec<f64> {
    vec![0.75]
}

fn default_beta() -> Vec<f64> {
    vec![0.5]
}

fn default_p() -> Vec<f64> {
    vec![2.0]
}

impl Default for ParamLists {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            beta: default_beta(),
            p: default_p(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverTolerances {
    #[serde(default = "default_tol")]
    pub solve: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    200
}

impl Default for SolverTolerances {
    fn default() -> Self {
        Self {
            solve: default_tol(),
            max_iter: default_max_iter(),
        }
    }
}

/// One experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub grid: GridParams,
    pub family: FamilySpec,
    #[serde(default)]
    pub params: ParamLists,
    #[serde(default)]
    pub tolerances: SolverTolerances,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Dump fields in CFLD1 alongside the reports.
    #[serde(default)]
    pub write_fields: bool,
}

fn in_open(
    name: &'static str,
    values: &[f64],
    lo: f64,
    hi: f64,
    reason: &'static str,
) -> Result<()> {
    if values.is_empty() {
        return Err(LabError::Config(format!("{name} list is empty")));
    }
    match values.iter().find(|&&v| !(v > lo && v < hi)) {
        Some(&value) => Err(LabError::InvalidParameter {
            name,
            value,
            reason,
        }),
        None => Ok(()),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks every field; nothing is computed before this succeeds.
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid.spec()?;
        if grid.dim() != 2 {
            return Err(LabError::Config(
                "configured runs use planar grids (dim = 2)".into(),
            ));
        }
        self.family.validate()?;
        in_open("alpha", &self.params.alpha, 0.0, 1.0, "must lie in (0, 1)")?;
        in_open("beta", &self.params.beta, 0.0, 1.0, "must lie in (0, 1)")?;
        in_open("p", &self.params.p, 1.0, f64::INFINITY, "must exceed 1")?;
        if self.suite == Suite::LogRegularity {
            in_open(
                "alpha",
                &self.params.alpha,
                0.5,
                1.0,
                "must lie in (1/2, 1) for the log-regularity run",
            )?;
        }
        if self.suite == Suite::AprioriSweep {
            for &a in &self.params.alpha {
                in_open(
                    "p",
                    &self.params.p,
                    1.0,
                    2.0 / a,
                    "must satisfy 1 < p < 2/α",
                )?;
            }
        }
        if !(self.tolerances.solve > 0.0) || self.tolerances.max_iter == 0 {
            return Err(LabError::Config(
                "solver tolerance and iteration cap must be positive".into(),
            ));
        }
        Ok(())
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tolerances.solve,
            max_iter: self.tolerances.max_iter,
            method: SolveMethod::Auto,
            ..SolveOptions::default()
        }
    }
}

/// Everything a suite produced.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
    /// Measurements of the configured run, one entry per family member.
    pub configured: Vec<Value>,
    #[serde(skip)]
    pub curves: Vec<Curve>,
    #[serde(skip)]
    pub fields: Vec<(String, ComplexField)>,
}

/// Runs the suite's criteria followed by the configured run.
pub fn run_suite(config: &ExperimentConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut report = SuiteReport {
        suite: config.suite,
        config: config.clone(),
        passed: true,
        criteria: Vec::new(),
        configured: Vec::new(),
        curves: Vec::new(),
        fields: Vec::new(),
    };
    for &id in config.suite.criteria() {
        let outcome = run_criterion(id)?;
        report.passed &= outcome.passed;
        report.criteria.push(outcome);
    }
    configured_run(config, &mut report)?;
    Ok(report)
}

fn configured_run(config: &ExperimentConfig, report: &mut SuiteReport) -> Result<()> {
    let grid = config.grid.spec()?;
    let family = generate_family(&config.family, grid)?;
    let opts = config.solve_options();
    for (index, mu) in family.iter().enumerate() {
        let tag = format!("member{index}");
        let mut entry = json!({
            "member": index,
            "sup_bound": mu.sup_bound(),
            "support_radius": mu.support_radius(),
        });
        match config.suite {
            Suite::VerifyOperators | Suite::CommutatorSuite => {
                let norms = config
                    .params
                    .beta
                    .iter()
                    .flat_map(|&b| config.params.p.iter().map(move |&p| (b, p)))
                    .map(|(b, p)| {
                        Ok(json!({ "beta": b, "p": p, "norm": norm_report(mu.field(), b, p)? }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                entry["norms"] = Value::from(norms);
            }
            Suite::Solve => {
                let sol = principal_solution(mu, &opts)?;
                let relation = (&sol.dbarphi - &(mu.field() * &sol.dphi)).l2_norm();
                report.passed &= sol.report.converged;
                entry["solve"] = serde_json::to_value(&sol.report)?;
                entry["beltrami_relation_residual"] = relation.into();
                entry["displacement_sup"] = sol.phi_displacement.sup_norm().into();
                report.curves.push(Curve::new(
                    format!("{tag}_residual"),
                    "iteration",
                    "residual",
                    sol.report
                        .residual_curve
                        .iter()
                        .enumerate()
                        .map(|(i, &r)| (i as f64, r))
                        .collect(),
                ));
                report
                    .fields
                    .push((format!("{tag}_mu"), mu.field().clone()));
                report
                    .fields
                    .push((format!("{tag}_phi_displacement"), sol.phi_displacement));
                report.fields.push((format!("{tag}_dphi"), sol.dphi));
                report.fields.push((format!("{tag}_dbarphi"), sol.dbarphi));
            }
            Suite::LogRegularity => {
                let ld = log_derivative(mu, &opts)?;
                let norms = config
                    .params
                    .alpha
                    .iter()
                    .map(|&a| Ok(json!({ "alpha": a, "norm": lp_norm(&frac_laplacian(&ld.g, a)?, 2.0 / a)? })))
                    .collect::<Result<Vec<_>>>()?;
                report.passed &= ld.report.converged;
                entry["consistency_error"] = ld.consistency_error.into();
                entry["fractional_norms"] = Value::from(norms);
                entry["solve"] = serde_json::to_value(&ld.report)?;
                report.fields.push((format!("{tag}_g"), ld.g));
            }
            Suite::AprioriSweep => {
                let nu = BeltramiCoefficient::zero(grid)?;
                let data = apriori_data(grid)?;
                let mut rows = Vec::new();
                for &a in &config.params.alpha {
                    let mut points = Vec::new();
                    for &p in &config.params.p {
                        let r = apriori_check(mu, &nu, a, p, &data, &opts)?;
                        report.passed &= r.solve.converged;
                        points.push((p, r.ratio));
                        rows.push(serde_json::to_value(&r)?);
                    }
                    report.curves.push(Curve::new(
                        format!("{tag}_alpha{a}_ratio"),
                        "p",
                        "ratio",
                        points,
                    ));
                }
                entry["apriori"] = Value::from(rows);
            }
            Suite::VmoExample => {
                let scales = dyadic_scales(mu.field(), grid.half_width() / 2.0);
                let curve = vmo_modulus(mu.field(), &scales)?;
                report.curves.push(Curve::new(
                    format!("{tag}_vmo_modulus"),
                    "scale",
                    "modulus",
                    curve.iter().map(|m| (m.scale, m.modulus)).collect(),
                ));
                entry["vmo_modulus"] = serde_json::to_value(&curve)?;
            }
        }
        report.configured.push(entry);
    }
    Ok(())
}

fn write_csv(curve: &Curve, path: &Path) -> Result<()> {
    let mut text = format!("{},{}\n", curve.columns[0], curve.columns[1]);
    for (x, y) in &curve.points {
        text.push_str(&format!("{x:e},{y:e}\n"));
    }
    fs::write(path, text)?;
    Ok(())
}

/// Writes `report.json`, one CSV per curve and, when requested, CFLD1 dumps.
/// Existing files of the same names are overwritten. Returns the paths written.
pub fn emit_report(
    report: &SuiteReport,
    output_dir: &Path,
    write_fields: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(output_dir)?;
    let mut written = Vec::new();
    let json_path = output_dir.join("report.json");
    fs::write(&json_path, serde_json::to_string_pretty(report)?)?;
    written.push(json_path);
    let criterion_curves = report.criteria.iter().flat_map(|c| {
        c.curves
            .iter()
            .map(move |curve| (format!("criterion{}_{}", c.id, curve.name), curve))
    });
    let run_curves = report
        .curves
        .iter()
        .map(|curve| (format!("run_{}", curve.name), curve));
    for (stem, curve) in criterion_curves.chain(run_curves) {
        let path = output_dir.join(format!("{stem}.csv"));
        write_csv(curve, &path)?;
        written.push(path);
    }
    if write_fields {
        let criterion_fields = report.criteria.iter().flat_map(|c| {
            c.fields
                .iter()
                .map(move |(name, f)| (format!("criterion{}_{name}", c.id), f))
        });
        let run_fields = report
            .fields
            .iter()
            .map(|(name, f)| (format!("run_{name}"), f));
        for (stem, field) in criterion_fields.chain(run_fields) {
            let path = output_dir.join(format!("{stem}.cfld"));
            save_cfld1(field, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}
