//! Empirical contraction rate from a pair of trajectories on a shared grid.

use std::fmt;

use super::Trajectory;
use crate::dynamics::SystemState;
use crate::error::{Error, Result};

/// Distance below which the fit stops, to keep rounding noise out of the
/// regression.
pub const DISTANCE_FLOOR: f64 = 1e-10;

/// Default transient discarded before fitting.
pub const DEFAULT_TRANSIENT: f64 = 1.0;

fn inf_norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Composite distance: the neural and synaptic infinity norms of the
/// difference, weighted by `eta` and combined with the outer `p`-norm
/// (`p` in `{1, inf}`).
pub fn composite_distance(a: &SystemState, b: &SystemState, eta: &[f64; 2], p: f64) -> Result<f64> {
    let dy = eta[0] * inf_norm_diff(&a.y, &b.y);
    let dw = eta[1] * inf_norm_diff(&a.w, &b.w);
    if p == f64::INFINITY {
        Ok(dy.max(dw))
    } else if p == 1.0 {
        Ok(dy + dw)
    } else {
        Err(Error::UnsupportedExponent(p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    /// Negated slope of `log distance` against time; `+inf` when saturated.
    pub rate: f64,
    /// Fitted time window `(start, end)`.
    pub window: (f64, f64),
    /// Human-readable description of the composite norm.
    pub norm: String,
    /// Root-mean-square residual of the log-linear fit.
    pub residual: f64,
    /// Number of samples in the fit.
    pub samples: usize,
    /// Distance already at or below the floor when the window opens.
    pub saturated: bool,
}

impl fmt::Display for RateEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.saturated {
            write!(f, "rate=saturated window=[{}, {}] norm={}", self.window.0, self.window.1, self.norm)
        } else {
            write!(
                f,
                "rate={:.6} window=[{:.4}, {:.4}] samples={} residual={:.3e} norm={}",
                self.rate, self.window.0, self.window.1, self.samples, self.residual, self.norm
            )
        }
    }
}

/// Least-squares fit of `log d(t)` over a window.
///
/// With `window = None` the fit starts at `t = 1` (or the trajectory end,
/// whichever is earlier) and stops at the first sample whose distance drops
/// below [`DISTANCE_FLOOR`]. An explicit window is used as given.
pub fn empirical_rate(a: &Trajectory, b: &Trajectory, eta: &[f64; 2], p: f64, window: Option<(f64, f64)>) -> Result<RateEstimate> {
    if a.len() != b.len() || a.dt != b.dt || a.times != b.times {
        return Err(Error::GridMismatch);
    }
    if a.is_empty() {
        return Err(Error::DegenerateWindow { start: 0.0, end: 0.0 });
    }
    let norm = format!("outer {} of weighted (neural inf, synaptic inf) with eta = ({}, {})", if p == 1.0 { "1-norm" } else { "inf-norm" }, eta[0], eta[1]);
    let dist: Vec<f64> = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| composite_distance(x, y, eta, p))
        .collect::<Result<_>>()?;

    let t_end = a.t_end();
    let (start, explicit_end) = match window {
        Some((s, e)) => {
            if !(s < e && s >= 0.0 && e <= t_end + 1e-9 * a.dt) {
                return Err(Error::DegenerateWindow { start: s, end: e });
            }
            (s, Some(e))
        }
        None => (DEFAULT_TRANSIENT.min(t_end), None),
    };
    let first = a.times.iter().position(|&t| t >= start - 1e-9 * a.dt).unwrap_or(a.len() - 1);
    if dist[first] <= DISTANCE_FLOOR && explicit_end.is_none() {
        return Ok(RateEstimate {
            rate: f64::INFINITY,
            window: (a.times[first], a.times[first]),
            norm,
            residual: 0.0,
            samples: 0,
            saturated: true,
        });
    }
    let mut last = first;
    for i in first..a.len() {
        match explicit_end {
            Some(e) if a.times[i] > e + 1e-9 * a.dt => break,
            None if dist[i] < DISTANCE_FLOOR => break,
            _ => {}
        }
        last = i;
    }
    if last <= first {
        return Err(Error::DegenerateWindow {
            start: a.times[first],
            end: a.times[last],
        });
    }
    if dist[first..=last].iter().any(|&d| d <= 0.0) {
        return Ok(RateEstimate {
            rate: f64::INFINITY,
            window: (a.times[first], a.times[last]),
            norm,
            residual: 0.0,
            samples: 0,
            saturated: true,
        });
    }

    let ts = &a.times[first..=last];
    let ls: Vec<f64> = dist[first..=last].iter().map(|d| d.ln()).collect();
    let k = ts.len() as f64;
    let t_mean = ts.iter().sum::<f64>() / k;
    let l_mean = ls.iter().sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, l) in ts.iter().zip(&ls) {
        sxy += (t - t_mean) * (l - l_mean);
        sxx += (t - t_mean) * (t - t_mean);
    }
    let slope = sxy / sxx;
    let sse: f64 = ts
        .iter()
        .zip(&ls)
        .map(|(t, l)| {
            let r = l - (l_mean + slope * (t - t_mean));
            r * r
        })
        .sum();
    Ok(RateEstimate {
        rate: -slope,
        window: (ts[0], ts[ts.len() - 1]),
        norm,
        residual: (sse / k).sqrt(),
        samples: ts.len(),
        saturated: false,
    })
}
