//! JSON run configuration.

use std::fs;
use std::path::Path;

use neurosyn::dynamics::{Activation, ModelKind, ModelSpec, Signal, Stimulus, SystemState};
use neurosyn::Topology;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub network: NetworkConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub stimuli: StimuliConfig,
    pub run: RunBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub neurons: usize,
    #[serde(default)]
    pub edges: Vec<EdgeConfig>,
}

/// One directed edge, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub post: usize,
    pub pre: usize,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// `HH`, `FH`, `HO` or `FO`.
    pub kind: String,
    pub c_n: f64,
    pub c_s: f64,
    #[serde(default)]
    pub c_o: f64,
    #[serde(default)]
    pub activation: ActivationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synaptic_activation: Option<ActivationConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActivationConfig {
    #[default]
    Sigmoid,
    ScaledSigmoid { gain: f64, ceiling: f64 },
}

impl From<ActivationConfig> for Activation {
    fn from(a: ActivationConfig) -> Self {
        match a {
            ActivationConfig::Sigmoid => Activation::Sigmoid,
            ActivationConfig::ScaledSigmoid { gain, ceiling } => Activation::ScaledSigmoid { gain, ceiling },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    Zero,
    Constant { value: f64 },
    Sinusoid { amplitude: f64, omega: f64, phase: f64 },
    Tanh { amplitude: f64 },
}

impl From<SignalConfig> for Signal {
    fn from(s: SignalConfig) -> Self {
        match s {
            SignalConfig::Zero => Signal::Zero,
            SignalConfig::Constant { value } => Signal::Constant(value),
            SignalConfig::Sinusoid { amplitude, omega, phase } => Signal::Sinusoid { amplitude, omega, phase },
            SignalConfig::Tanh { amplitude } => Signal::TanhRamp { amplitude },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StimuliConfig {
    #[serde(default)]
    pub neurons: Vec<NeuronStimulus>,
    #[serde(default)]
    pub edges: Vec<EdgeStimulus>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeuronStimulus {
    pub neuron: usize,
    pub signal: SignalConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeStimulus {
    pub edge: usize,
    pub signal: SignalConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub delay: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub initial: InitialConfig,
    /// Input period for the entrainment monitor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    /// Time discarded before the entrainment comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transient: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    /// Uniform in `[-range, range]`; `dale` signs the weights by `h`;
    /// `confine` also clips the box to the invariant radii.
    Random {
        range: f64,
        #[serde(default)]
        dale: bool,
        #[serde(default)]
        confine: bool,
    },
    Explicit { y: Vec<f64>, w: Vec<f64> },
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig::Random {
            range: 1.0,
            dale: true,
            confine: false,
        }
    }
}

/// Environment variable consulted when the config has no seed.
pub const SEED_ENV: &str = "NEUROSYN_SEED";

fn invalid(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.build()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn kind(&self) -> Result<ModelKind, CliError> {
        self.model.kind.parse().map_err(|_| invalid("model.kind", format!("unknown model kind {:?} (expected HH, FH, HO or FO)", self.model.kind)))
    }

    pub fn topology(&self) -> Result<Topology, CliError> {
        let n = self.network.neurons;
        for (k, e) in self.network.edges.iter().enumerate() {
            for (name, v) in [("post", e.post), ("pre", e.pre)] {
                if v == 0 || v > n {
                    return Err(invalid(format!("network.edges[{k}].{name}"), format!("neuron index {v} outside 1..={n}")));
                }
            }
        }
        let pairs: Vec<(usize, usize)> = self.network.edges.iter().map(|e| (e.post, e.pre)).collect();
        let h: Vec<f64> = self.network.edges.iter().map(|e| e.h).collect();
        Topology::new(n, &pairs, &h).map_err(|e| invalid("network.edges", e.to_string()))
    }

    /// Validated topology and model.
    pub fn build(&self) -> Result<(Topology, ModelSpec), CliError> {
        let topo = self.topology()?;
        let kind = self.kind()?;
        let mut u = vec![Signal::Zero; topo.n()];
        for (k, s) in self.stimuli.neurons.iter().enumerate() {
            if s.neuron == 0 || s.neuron > topo.n() {
                return Err(invalid(format!("stimuli.neurons[{k}].neuron"), format!("neuron index {} outside 1..={}", s.neuron, topo.n())));
            }
            u[s.neuron - 1] = s.signal.into();
        }
        let mut ubar = vec![Signal::Zero; topo.m()];
        for (k, s) in self.stimuli.edges.iter().enumerate() {
            if s.edge == 0 || s.edge > topo.m() {
                return Err(invalid(format!("stimuli.edges[{k}].edge"), format!("edge index {} outside 1..={}", s.edge, topo.m())));
            }
            ubar[s.edge - 1] = s.signal.into();
        }
        let u = Stimulus::new(u).map_err(|e| invalid("stimuli.neurons", e.to_string()))?;
        let ubar = Stimulus::new(ubar).map_err(|e| invalid("stimuli.edges", e.to_string()))?;
        let m = &self.model;
        let mut spec = ModelSpec::new(kind, m.c_n, m.c_s, m.c_o, u, ubar)
            .map_err(|e| invalid("model", e.to_string()))?
            .with_activation(m.activation.into())
            .map_err(|e| invalid("model.activation", e.to_string()))?;
        if let Some(a) = m.synaptic_activation {
            spec = spec
                .with_synaptic_activation(a.into())
                .map_err(|e| invalid("model.synaptic_activation", e.to_string()))?;
        }
        self.check_run(&topo)?;
        Ok((topo, spec))
    }

    fn check_run(&self, topo: &Topology) -> Result<(), CliError> {
        let r = &self.run;
        if !(r.dt > 0.0 && r.dt.is_finite()) {
            return Err(invalid("run.dt", format!("must be positive (got {})", r.dt)));
        }
        if !(r.t_end >= r.dt && r.t_end.is_finite()) {
            return Err(invalid("run.t_end", format!("must be at least dt (got {})", r.t_end)));
        }
        if !(r.delay >= 0.0 && r.delay.is_finite()) {
            return Err(invalid("run.delay", format!("must be non-negative (got {})", r.delay)));
        }
        if let Some(p) = r.period {
            if !(p > 0.0 && p.is_finite()) {
                return Err(invalid("run.period", format!("must be positive (got {p})")));
            }
        }
        match &r.initial {
            InitialConfig::Random { range, .. } if !(*range >= 0.0 && range.is_finite()) => {
                Err(invalid("run.initial.range", format!("must be non-negative (got {range})")))
            }
            InitialConfig::Explicit { y, .. } if y.len() != topo.n() => {
                Err(invalid("run.initial.y", format!("expected {} values, got {}", topo.n(), y.len())))
            }
            InitialConfig::Explicit { w, .. } if w.len() != topo.m() => {
                Err(invalid("run.initial.w", format!("expected {} values, got {}", topo.m(), w.len())))
            }
            _ => Ok(()),
        }
    }

    /// Seed from the config, else from [`SEED_ENV`], else zero.
    pub fn seed(&self) -> u64 {
        self.run
            .seed
            .or_else(|| std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()))
            .unwrap_or(0)
    }

    /// The configured explicit state, if any.
    pub fn explicit_initial(&self) -> Option<SystemState> {
        match &self.run.initial {
            InitialConfig::Explicit { y, w } => Some(SystemState::new(y.clone(), w.clone())),
            InitialConfig::Random { .. } => None,
        }
    }
}
