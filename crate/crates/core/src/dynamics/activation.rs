use crate::error::{Error, Result};

/// Bounded, monotone activation functions.
///
/// Only logistic-type functions are offered so that the supremum of the
/// function and of its derivative are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Activation {
    /// `1 / (1 + e^{-s})`.
    #[default]
    Sigmoid,
    /// `ceiling / (1 + e^{-gain s})`; requires `gain * ceiling <= 4` so that
    /// the slope never exceeds one.
    ScaledSigmoid { gain: f64, ceiling: f64 },
}

/// Logistic function evaluated without overflow for large `|s|`.
fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

impl Activation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Activation::Sigmoid => Ok(()),
            Activation::ScaledSigmoid { gain, ceiling } => {
                if !(gain > 0.0 && gain.is_finite()) || !(ceiling > 0.0 && ceiling.is_finite()) {
                    return Err(Error::InvalidParams(format!(
                        "scaled sigmoid needs positive finite gain and ceiling (got {gain}, {ceiling})"
                    )));
                }
                if gain * ceiling > 4.0 {
                    return Err(Error::InvalidParams(format!(
                        "scaled sigmoid slope gain*ceiling/4 = {} exceeds 1",
                        gain * ceiling / 4.0
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn phi(&self, s: f64) -> f64 {
        match *self {
            Activation::Sigmoid => logistic(s),
            Activation::ScaledSigmoid { gain, ceiling } => ceiling * logistic(gain * s),
        }
    }

    /// Derivative `g * phi * (phi_max - phi) / phi_max`, evaluated as
    /// `g * phi_max * sigma(gs) * sigma(-gs)` to avoid cancellation.
    pub fn phi_prime(&self, s: f64) -> f64 {
        let (gain, ceiling) = self.gain_ceiling();
        let gs = gain * s;
        gain * ceiling * logistic(gs) * logistic(-gs)
    }

    /// Supremum of the activation.
    pub fn phi_max(&self) -> f64 {
        self.gain_ceiling().1
    }

    /// Supremum of the derivative, attained at zero.
    pub fn phi_prime_max(&self) -> f64 {
        let (gain, ceiling) = self.gain_ceiling();
        gain * ceiling / 4.0
    }

    fn gain_ceiling(&self) -> (f64, f64) {
        match *self {
            Activation::Sigmoid => (1.0, 1.0),
            Activation::ScaledSigmoid { gain, ceiling } => (gain, ceiling),
        }
    }

    pub(crate) fn map(&self, s: &[f64]) -> Vec<f64> {
        s.iter().map(|&v| self.phi(v)).collect()
    }

    pub(crate) fn map_prime(&self, s: &[f64]) -> Vec<f64> {
        s.iter().map(|&v| self.phi_prime(v)).collect()
    }
}
