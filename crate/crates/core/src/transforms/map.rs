//! Node-wise maps between solutions and the transform output type.

use serde::{Deserialize, Serialize};

use super::psi::{psi_forward, psi_inverse, PsiParams};
use crate::mesh::DiscreteField;
use crate::model::ProblemSpec;
use crate::Result;

/// A strictly increasing map `s ↦ ŝ` with `0 ↦ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldMap {
    Identity,
    /// `ŝ = ψ(s)`.
    Psi {
        params: PsiParams,
    },
    /// `ŝ = (s+δ)^γ - δ^γ`, inverse `s = (ŝ+δ^γ)^{1/γ} - δ`.
    Gamma {
        gamma: f64,
        delta: f64,
    },
}

impl FieldMap {
    pub fn forward(&self, s: f64) -> Result<f64> {
        match self {
            FieldMap::Identity => Ok(s),
            FieldMap::Psi { params } => psi_forward(params, s),
            FieldMap::Gamma { gamma, delta } => Ok(gamma_forward(*gamma, *delta, s)),
        }
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        match self {
            FieldMap::Identity => Ok(y),
            FieldMap::Psi { params } => psi_inverse(params, y),
            FieldMap::Gamma { gamma, delta } => Ok(gamma_inverse(*gamma, *delta, y)),
        }
    }

    /// Apply [`forward`](Self::forward) at every node.
    pub fn forward_field(&self, u: &DiscreteField) -> Result<DiscreteField> {
        self.apply(u, |s| self.forward(s))
    }

    /// Apply [`inverse`](Self::inverse) at every node.
    pub fn inverse_field(&self, v: &DiscreteField) -> Result<DiscreteField> {
        self.apply(v, |s| self.inverse(s))
    }

    fn apply<F: Fn(f64) -> Result<f64>>(&self, u: &DiscreteField, f: F) -> Result<DiscreteField> {
        let vals = u
            .values()
            .iter()
            .enumerate()
            .map(|(k, &s)| f(s).map_err(|e| e.at_node(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiscreteField::from_vec(vals))
    }
}

// Written as δ^γ((1+s/δ)^γ - 1) for δ > 0 so that small s loses nothing.
pub(crate) fn gamma_forward(gamma: f64, delta: f64, s: f64) -> f64 {
    if delta > 0.0 {
        delta.powf(gamma) * (gamma * (s / delta).ln_1p()).exp_m1()
    } else {
        s.powf(gamma)
    }
}

pub(crate) fn gamma_inverse(gamma: f64, delta: f64, y: f64) -> f64 {
    if delta > 0.0 {
        let dg = delta.powf(gamma);
        delta * ((y / dg).ln_1p() / gamma).exp_m1()
    } else {
        y.powf(1.0 / gamma)
    }
}

/// Parameters recorded by a transform.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformMeta {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Truncation level, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
}

impl TransformMeta {
    pub(crate) fn named(name: &str) -> Self {
        TransformMeta {
            name: name.to_string(),
            ..Default::default()
        }
    }
}

/// A transformed spec together with the map `u ↦ v` between solutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformedProblem {
    pub spec: ProblemSpec,
    pub map: FieldMap,
    pub transform: TransformMeta,
}

impl TransformedProblem {
    /// Map a solution of the transformed problem back to the original unknown.
    pub fn pull_back(&self, v: &DiscreteField) -> Result<DiscreteField> {
        self.map.inverse_field(v)
    }

    /// Map a solution of the original problem to the transformed unknown.
    pub fn push_forward(&self, u: &DiscreteField) -> Result<DiscreteField> {
        self.map.forward_field(u)
    }
}
