//! Run configuration: one JSON document, leaf fields overridable by dotted paths.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::mesh::Resolution;
use crate::model::ProblemSpec;
use crate::nonlinear::SolverConfig;
use crate::{Error, Result};

/// How a single solve is carried out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Damped Newton on the quasilinear residual with nested iteration.
    #[default]
    Newton,
    /// The amplitude-matched fixed-point map, polished by Newton.
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    PsiDecreasing,
    Comparison,
    Pohozaev,
    Holder,
    Apriori,
    Validate,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::PsiDecreasing,
        CheckName::Comparison,
        CheckName::Pohozaev,
        CheckName::Holder,
        CheckName::Apriori,
        CheckName::Validate,
    ];
}

/// Options of the `check` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckOptions {
    pub name: Option<CheckName>,
    /// Hölder exponent.
    pub alpha: f64,
    /// Point at which `g` is frozen for the ψ check.
    pub x0: [f64; 2],
    pub anchor: Option<f64>,
    /// Length scale `L` of the ψ check.
    pub scale: f64,
    /// Pohozaev exponent (default: the `p` of `f`).
    pub exponent: Option<f64>,
    /// Evaluate the Pohozaev defect on `1 - r²` instead of a solution.
    pub manufactured: bool,
    /// `u = θ v` in the comparison check.
    pub theta: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            name: None,
            alpha: 0.5,
            x0: [0.0, 0.0],
            anchor: None,
            scale: 1.0,
            exponent: None,
            manufactured: false,
            theta: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Semilinearize,
    Gamma,
    TruncateDelta,
    TruncateS0,
    PowerCheck,
    Blowup,
}

/// Options of the `transform` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformOptions {
    pub kind: Option<TransformKind>,
    /// Exponent of the γ-transform.
    pub gamma: f64,
    /// Fixed scale `b` of the γ-transform (automatic when absent).
    pub b: Option<f64>,
    /// Truncation level.
    pub level: f64,
    pub s0: f64,
    /// Solve the transformed problem and write the pulled-back solution.
    pub solve: bool,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            kind: None,
            gamma: 2.0,
            b: None,
            level: 1.0,
            s0: 0.5,
            solve: false,
        }
    }
}

/// Options of the `eigen` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct EigenOptions {
    /// Use the interval `[a, b]` instead of the problem domain.
    pub interval: Option<[f64; 2]>,
    /// Also solve on the refined mesh and extrapolate.
    pub richardson: bool,
}

fn default_levels() -> usize {
    3
}

/// Everything a run depends on. Its canonical JSON is hashed into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    #[serde(default)]
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub method: Method,
    /// λ or t grid of the sweeps.
    #[serde(default)]
    pub grid: Vec<f64>,
    /// Refinement levels of the nonexistence probe.
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub check: CheckOptions,
    #[serde(default)]
    pub transform: TransformOptions,
    #[serde(default)]
    pub eigen: EigenOptions,
}

impl RunConfig {
    pub fn new(problem: ProblemSpec) -> Self {
        RunConfig {
            problem,
            resolution: Resolution::default(),
            solver: SolverConfig::default(),
            method: Method::default(),
            grid: Vec::new(),
            levels: default_levels(),
            check: CheckOptions::default(),
            transform: TransformOptions::default(),
            eigen: EigenOptions::default(),
        }
    }

    /// Parse a JSON document, apply `path=value` overrides and validate.
    pub fn from_json(text: &str, overrides: &[String]) -> Result<Self> {
        let mut value: Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("config is not valid JSON: {e}")))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: RunConfig = serde_json::from_value(value)
            .map_err(|e| Error::InvalidSpec(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Re-parse this config with overrides applied.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        Self::from_json(&self.to_json(), overrides)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        self.solver.validate()?;
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("grid values must be finite".into()));
        }
        Ok(())
    }

    /// Canonical JSON (field order fixed by the type).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configs serialize")
    }

    /// Hex SHA-256 of [`to_json`](Self::to_json).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Set the leaf at a dotted path (`problem.lambda=2`, `grid.1=0.5`).
///
/// The value is read as JSON when it parses, else as a string. Missing
/// objects along the path are created; array indices must exist.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::InvalidSpec(format!("override `{assignment}` lacks `=`")))?;
    let path = path.trim();
    if path.is_empty() {
        return Err(Error::InvalidSpec("override with an empty path".into()));
    }
    let value =
        serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().into()));
    let keys: Vec<&str> = path.split('.').collect();
    let mut node = root;
    for (i, key) in keys.iter().enumerate() {
        let last = i + 1 == keys.len();
        node = match node {
            Value::Array(items) => {
                let k: usize = key.parse().map_err(|_| {
                    Error::InvalidSpec(format!("`{key}` in `{path}` is not an array index"))
                })?;
                let len = items.len();
                items.get_mut(k).ok_or_else(|| {
                    Error::InvalidSpec(format!("index {k} out of range ({len}) in `{path}`"))
                })?
            }
            Value::Object(map) => map.entry(key.to_string()).or_insert_with(|| {
                if last {
                    Value::Null
                } else {
                    Value::Object(Default::default())
                }
            }),
            Value::Null => {
                *node = Value::Object(Default::default());
                node.as_object_mut()
                    .expect("just created")
                    .entry(key.to_string())
                    .or_insert(Value::Null)
            }
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "`{path}` descends into a scalar at `{key}`"
                )))
            }
        };
    }
    *node = value;
    Ok(())
}
