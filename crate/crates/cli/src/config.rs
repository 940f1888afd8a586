//! Run configuration: JSON in, validated parameters out.

use std::path::Path;

use lioup::model::{ModelParams, DEFAULT_GAMMA_SP, PARAM_NAMES};
use lioup::superop::BasisKind;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// 4-level model in the rotating frame.
    Full4,
    /// Effective 3-level ground-state model.
    Eff3,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Hybrid Liouvillian at the configured `q`.
    #[default]
    Liouvillian,
    /// The non-Hermitian Hamiltonian itself.
    Nhh,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Quad,
}

fn gellmann() -> BasisKind {
    BasisKind::GellMann
}

fn default_gamma_sp() -> f64 {
    DEFAULT_GAMMA_SP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    #[serde(default = "gellmann")]
    pub basis: BasisKind,
    #[serde(default)]
    pub generator: Generator,
    #[serde(default)]
    pub precision: Precision,
    pub params: ParamsConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub findep: Option<FindEpConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveConfig>,
}

/// Model parameters; give exactly one of `omega` and `omega_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_r: Option<f64>,
    pub j: f64,
    #[serde(default)]
    pub delta_rf: f64,
    #[serde(default)]
    pub delta_opt: f64,
    #[serde(default = "default_gamma_sp")]
    pub gamma_sp: f64,
    #[serde(default)]
    pub gamma_g: f64,
    #[serde(default)]
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Clustering radius relative to the spectral scale.
    pub tol_cluster_rel: f64,
    /// Relative singular-value threshold for numerical rank.
    pub tol_rank: f64,
    /// Real-part gap that separates eigenvalue groups; when absent, a tenth
    /// of `gamma_sp` for the 4-level model and of `omega` otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_gap: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_cluster_rel: 1e-6,
            tol_rank: 1e-7,
            group_gap: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branches {
    /// Every eigenvalue, continuity tracked.
    #[default]
    All,
    /// The three jump-dependent hybrid eigenvalues λ₇, λ₈, λ₉.
    Triplet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default)]
    pub branches: Branches,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub parameter: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindEpConfig {
    #[serde(rename = "box")]
    pub bounds: Vec<AxisConfig>,
    pub target_mult: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_seeds: Option<usize>,
}

/// Initial density matrix, in the model's level order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Rho0Spec {
    /// `|k⟩⟨k|`.
    BasisState(usize),
    /// Diagonal populations, normalised to unit trace.
    Diagonal(Vec<f64>),
    /// Full matrix given by real and imaginary rows.
    Matrix {
        re: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub rho0: Rho0Spec,
    pub t_max: f64,
    pub steps: usize,
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

impl RunConfig {
    /// Parses a config document, or the `config` block of a metadata
    /// document written by an earlier run.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        let inner = match value {
            Value::Object(mut map) if map.get("tool") == Some(&Value::from("lioup")) => map
                .remove("config")
                .ok_or_else(|| schema("metadata document has no `config` block"))?,
            other => other,
        };
        let cfg: RunConfig = serde_json::from_value(inner).map_err(|e| schema(e.to_string()))?;
        cfg.model_params()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn model_params(&self) -> Result<ModelParams<f64>, CliError> {
        let p = &self.params;
        let base = match (p.omega, p.omega_r) {
            (Some(omega), None) => ModelParams::from_reduced(omega, p.j, p.delta_rf, p.gamma_sp),
            (None, Some(omega_r)) => {
                ModelParams::from_optical(omega_r, p.j, p.delta_rf, p.gamma_sp)
            }
            (Some(_), Some(_)) => {
                return Err(schema(
                    "params: give `omega` or `omega_r`, not both (they are tied by gamma_sp)",
                ))
            }
            (None, None) => return Err(schema("params: missing field `omega` (or `omega_r`)")),
        };
        let params = base
            .with_delta_opt(p.delta_opt)
            .with_gamma_g(p.gamma_g)
            .with_q(p.q);
        params
            .validate()
            .map_err(|e| schema(format!("params: {e}")))?;
        Ok(params)
    }

    /// Real-part gap used to group eigenvalues.
    pub fn group_gap(&self, p: &ModelParams<f64>) -> f64 {
        self.tolerances.group_gap.unwrap_or(match self.model {
            ModelKind::Full4 => 0.1 * p.gamma_sp,
            ModelKind::Eff3 => 0.1 * p.omega,
        })
    }

    pub fn require_sweep(&self) -> Result<&SweepConfig, CliError> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| schema("missing `sweep` block"))?;
        check_param_name("sweep.parameter", &s.parameter)?;
        if s.points < 2 {
            return Err(schema("sweep.points: need at least 2"));
        }
        if !(s.start < s.stop) || !s.start.is_finite() || !s.stop.is_finite() {
            return Err(schema("sweep.stop: must be finite and above sweep.start"));
        }
        if s.spacing == Spacing::Log && s.start <= 0.0 {
            return Err(schema("sweep.start: log spacing needs a positive start"));
        }
        if s.branches == Branches::Triplet {
            if self.model != ModelKind::Eff3 || self.generator != Generator::Liouvillian {
                return Err(schema(
                    "sweep.branches: `triplet` tracks the 3-level hybrid Liouvillian only",
                ));
            }
            if s.parameter != "j" || self.params.delta_rf != 0.0 {
                return Err(schema(
                    "sweep.branches: `triplet` needs a sweep over `j` at delta_rf = 0",
                ));
            }
        }
        Ok(s)
    }

    pub fn require_findep(&self) -> Result<&FindEpConfig, CliError> {
        let f = self
            .findep
            .as_ref()
            .ok_or_else(|| schema("missing `findep` block"))?;
        if f.bounds.is_empty() || f.bounds.len() > 2 {
            return Err(schema("findep.box: give one or two axes"));
        }
        for a in &f.bounds {
            check_param_name("findep.box.parameter", &a.parameter)?;
            if !(a.lower < a.upper) || !a.lower.is_finite() || !a.upper.is_finite() {
                return Err(schema(format!(
                    "findep.box.upper: axis `{}` needs finite bounds with lower < upper",
                    a.parameter
                )));
            }
        }
        if f.target_mult < 2 {
            return Err(schema("findep.target_mult: must be at least 2"));
        }
        Ok(f)
    }

    pub fn require_evolve(&self) -> Result<&EvolveConfig, CliError> {
        let e = self
            .evolve
            .as_ref()
            .ok_or_else(|| schema("missing `evolve` block"))?;
        if self.params.q != 1.0 {
            return Err(schema(format!(
                "params.q = {}: evolve needs q = 1, since a hybrid generator with q < 1 \
                 drops part of the repopulation and does not preserve the trace",
                self.params.q
            )));
        }
        if self.generator != Generator::Liouvillian {
            return Err(schema(
                "generator: evolve needs the Liouvillian, the non-Hermitian Hamiltonian does not preserve the trace",
            ));
        }
        if self.precision != Precision::Double {
            return Err(schema("precision: evolve runs in double precision only"));
        }
        if !(e.t_max > 0.0) || !e.t_max.is_finite() {
            return Err(schema("evolve.t_max: must be positive"));
        }
        if e.steps == 0 {
            return Err(schema("evolve.steps: must be positive"));
        }
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        match self.model {
            ModelKind::Full4 => 4,
            ModelKind::Eff3 => 3,
        }
    }
}

fn check_param_name(key: &str, name: &str) -> Result<(), CliError> {
    if PARAM_NAMES.contains(&name) {
        Ok(())
    } else {
        Err(schema(format!(
            "{key}: unknown parameter `{name}`, expected one of {}",
            PARAM_NAMES.join(", ")
        )))
    }
}
