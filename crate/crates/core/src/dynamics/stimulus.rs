use crate::error::{Error, Result};

/// A scalar external input signal.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Signal {
    #[default]
    Zero,
    Constant(f64),
    /// `amplitude * sin(omega * t + phase)`.
    Sinusoid { amplitude: f64, omega: f64, phase: f64 },
    /// `amplitude * tanh(t)`.
    TanhRamp { amplitude: f64 },
}

impl Signal {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Signal::Zero => 0.0,
            Signal::Constant(a) => a,
            Signal::Sinusoid {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).sin(),
            Signal::TanhRamp { amplitude } => amplitude * t.tanh(),
        }
    }

    /// `sup_{t >= 0} |s(t)|`, exact for every family.
    pub fn sup_abs(&self) -> f64 {
        match *self {
            Signal::Zero => 0.0,
            Signal::Constant(a) => a.abs(),
            Signal::Sinusoid { amplitude, .. } => amplitude.abs(),
            Signal::TanhRamp { amplitude } => amplitude.abs(),
        }
    }

    /// True when the signal vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.sup_abs() == 0.0
    }

    pub fn scaled(&self, factor: f64) -> Signal {
        match *self {
            Signal::Zero => Signal::Zero,
            Signal::Constant(a) => Signal::Constant(a * factor),
            Signal::Sinusoid {
                amplitude,
                omega,
                phase,
            } => Signal::Sinusoid {
                amplitude: amplitude * factor,
                omega,
                phase,
            },
            Signal::TanhRamp { amplitude } => Signal::TanhRamp {
                amplitude: amplitude * factor,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = match *self {
            Signal::Zero => true,
            Signal::Constant(a) => a.is_finite(),
            Signal::Sinusoid {
                amplitude,
                omega,
                phase,
            } => amplitude.is_finite() && omega.is_finite() && phase.is_finite(),
            Signal::TanhRamp { amplitude } => amplitude.is_finite(),
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("non-finite stimulus {self:?}")))
        }
    }
}

/// One signal per channel; channels are neurons (`u`) or edges (`ū`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Stimulus {
    channels: Vec<Signal>,
}

impl Stimulus {
    pub fn new(channels: Vec<Signal>) -> Result<Self> {
        for c in &channels {
            c.validate()?;
        }
        Ok(Self { channels })
    }

    pub fn zero(len: usize) -> Self {
        Self {
            channels: vec![Signal::Zero; len],
        }
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[Signal] {
        &self.channels
    }

    pub fn channel(&self, i: usize) -> Signal {
        self.channels[i]
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.channels.iter().map(|s| s.eval(t)).collect()
    }

    /// `max_i sup_t |s_i(t)|`, zero when there are no channels.
    pub fn sup_bound(&self) -> f64 {
        self.channels.iter().fold(0.0, |acc, s| acc.max(s.sup_abs()))
    }

    pub fn scaled(&self, factor: f64) -> Stimulus {
        Stimulus {
            channels: self.channels.iter().map(|s| s.scaled(factor)).collect(),
        }
    }
}
