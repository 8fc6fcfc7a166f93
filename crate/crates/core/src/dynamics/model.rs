use std::fmt;
use std::str::FromStr;

use super::{Activation, Stimulus};
use crate::error::{Error, Result};
use crate::topology::Topology;

/// The four coupled neural-synaptic models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Hopfield neurons, Hebbian synapses.
    HopfieldHebbian,
    /// Firing-rate neurons, Hebbian synapses.
    FiringRateHebbian,
    /// Hopfield neurons, Oja synapses.
    HopfieldOja,
    /// Firing-rate neurons, Oja synapses.
    FiringRateOja,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::HopfieldHebbian,
        ModelKind::FiringRateHebbian,
        ModelKind::HopfieldOja,
        ModelKind::FiringRateOja,
    ];

    pub fn is_firing_rate(self) -> bool {
        matches!(self, ModelKind::FiringRateHebbian | ModelKind::FiringRateOja)
    }

    pub fn is_oja(self) -> bool {
        matches!(self, ModelKind::HopfieldOja | ModelKind::FiringRateOja)
    }

    /// Short tag: `HH`, `FH`, `HO` or `FO`.
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::HopfieldHebbian => "HH",
            ModelKind::FiringRateHebbian => "FH",
            ModelKind::HopfieldOja => "HO",
            ModelKind::FiringRateOja => "FO",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HH" => Ok(ModelKind::HopfieldHebbian),
            "FH" => Ok(ModelKind::FiringRateHebbian),
            "HO" => Ok(ModelKind::HopfieldOja),
            "FO" => Ok(ModelKind::FiringRateOja),
            other => Err(Error::InvalidParams(format!(
                "unknown model `{other}` (expected HH, FH, HO or FO)"
            ))),
        }
    }
}

/// Model selection, rates, activations and stimuli.
///
/// `activation` is used by the neural equation and `synaptic_activation` by
/// the learning rule; both default to the logistic sigmoid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Neural decay rate.
    pub c_n: f64,
    /// Synaptic decay rate.
    pub c_s: f64,
    /// Oja coefficient; zero for the Hebbian models.
    pub c_o: f64,
    pub activation: Activation,
    pub synaptic_activation: Activation,
    /// Per-neuron stimulus.
    pub u: Stimulus,
    /// Per-edge stimulus.
    pub ubar: Stimulus,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, c_n: f64, c_s: f64, c_o: f64, u: Stimulus, ubar: Stimulus) -> Result<Self> {
        let spec = Self {
            kind,
            c_n,
            c_s,
            c_o,
            activation: Activation::Sigmoid,
            synaptic_activation: Activation::Sigmoid,
            u,
            ubar,
        };
        spec.validate_params()?;
        Ok(spec)
    }

    /// Same activation for both roles.
    pub fn with_activation(mut self, act: Activation) -> Result<Self> {
        act.validate()?;
        self.activation = act;
        self.synaptic_activation = act;
        Ok(self)
    }

    pub fn with_synaptic_activation(mut self, act: Activation) -> Result<Self> {
        act.validate()?;
        self.synaptic_activation = act;
        Ok(self)
    }

    /// Checks rates and model/`c_o` consistency. `c_o = 0` is accepted for
    /// the Oja models (they then coincide with their Hebbian siblings).
    pub fn validate_params(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must be positive and finite (got {v})")))
            }
        };
        positive("c_n", self.c_n)?;
        positive("c_s", self.c_s)?;
        if !(self.c_o >= 0.0 && self.c_o.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "c_o must be non-negative and finite (got {})",
                self.c_o
            )));
        }
        if !self.kind.is_oja() && self.c_o != 0.0 {
            return Err(Error::InvalidParams(format!(
                "model {} requires c_o = 0 (got {})",
                self.kind, self.c_o
            )));
        }
        self.activation.validate()?;
        self.synaptic_activation.validate()
    }

    /// Full validation against a topology (stimulus channel counts).
    pub fn validate(&self, topo: &Topology) -> Result<()> {
        self.validate_params()?;
        if self.u.len() != topo.n() {
            return Err(Error::DimensionMismatch {
                what: "neural stimulus channels",
                expected: topo.n(),
                got: self.u.len(),
            });
        }
        if self.ubar.len() != topo.m() {
            return Err(Error::DimensionMismatch {
                what: "synaptic stimulus channels",
                expected: topo.m(),
                got: self.ubar.len(),
            });
        }
        Ok(())
    }

    /// Supremum of the activations, taken over both roles.
    pub fn phi_max(&self) -> f64 {
        self.activation.phi_max().max(self.synaptic_activation.phi_max())
    }
}

/// Packed neural (`y`) and synaptic (`w`) state. `y` holds membrane
/// potentials for the Hopfield models and firing rates otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl SystemState {
    pub fn new(y: Vec<f64>, w: Vec<f64>) -> Self {
        Self { y, w }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            y: vec![0.0; n],
            w: vec![0.0; m],
        }
    }

    pub fn dim(&self) -> usize {
        self.y.len() + self.w.len()
    }

    pub fn is_finite(&self) -> bool {
        self.y.iter().chain(&self.w).all(|v| v.is_finite())
    }

    /// `[y; w]` as a single vector.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        out.extend_from_slice(&self.y);
        out.extend_from_slice(&self.w);
        out
    }

    pub fn from_flat(flat: &[f64], n: usize) -> Self {
        Self {
            y: flat[..n].to_vec(),
            w: flat[n..].to_vec(),
        }
    }

    pub fn check_dims(&self, topo: &Topology) -> Result<()> {
        topo.check_neurons(&self.y, "neural state")?;
        topo.check_edges(&self.w, "synaptic state")?;
        if !self.is_finite() {
            return Err(Error::InvalidParams("state has non-finite entries".into()));
        }
        Ok(())
    }

    /// `self + scale * other`, entrywise.
    pub(crate) fn axpy(&self, scale: f64, other: &SystemState) -> SystemState {
        SystemState {
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + scale * b).collect(),
            w: self.w.iter().zip(&other.w).map(|(a, b)| a + scale * b).collect(),
        }
    }
}
