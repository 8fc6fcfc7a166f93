//! Report-only checks run over finished trajectories.

use std::fmt;

use nalgebra::DMatrix;

use super::{DenseTrajectory, Trajectory};
use crate::analysis::Bounds;
use crate::dynamics::{DenseModel, ModelSpec, SystemState};
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Slack allowed for integrator jitter in sign checks.
pub const SIGN_TOLERANCE: f64 = 1e-9;

/// A state component, 0-based internally and printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Neuron(usize),
    Synapse(usize),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Neuron(i) => write!(f, "y_{}", i + 1),
            Component::Synapse(e) => write!(f, "w_{}", e + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub component: Component,
    /// Envelope minus absolute value; negative on violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub violations: Vec<Violation>,
    pub neural_max: f64,
    pub synaptic_max: f64,
    /// Largest `|y_i|` and `|w_e|` seen over the run.
    pub peak_neural: f64,
    pub peak_synaptic: f64,
    /// Terminal excess over the box radii (zero when inside).
    pub terminal_excess: f64,
}

impl InvarianceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "invariance: violations={} peak|y|={:.6} (bound {:.6}) peak|w|={:.6} (bound {:.6}) terminal_excess={:.3e}",
            self.violations.len(),
            self.peak_neural,
            self.neural_max,
            self.peak_synaptic,
            self.synaptic_max,
            self.terminal_excess
        )?;
        for v in self.violations.iter().take(10) {
            writeln!(f, "invariance violation t={} {} margin={:.3e}", v.t, v.component, v.margin)?;
        }
        Ok(())
    }
}

/// Checks the per-component envelopes
/// `|y_i(t)| <= (|y_i(0)| - y_max) e^{-c_n t} + y_max` and
/// `|w_e(t)| <= (|w_e(0)| - w_max) e^{-c_s t} + w_max`
/// at every grid point.
pub fn check_invariance(traj: &Trajectory, bounds: &Bounds, spec: &ModelSpec) -> InvarianceReport {
    let y_max = bounds.neural_max(spec.kind);
    let w_max = bounds.w_max;
    let mut report = InvarianceReport {
        violations: Vec::new(),
        neural_max: y_max,
        synaptic_max: w_max,
        peak_neural: 0.0,
        peak_synaptic: 0.0,
        terminal_excess: 0.0,
    };
    let Some(s0) = traj.states.first() else {
        return report;
    };
    let envelope = |a0: f64, radius: f64, rate: f64, t: f64| (a0.abs() - radius) * (-rate * t).exp() + radius;
    for (&t, st) in traj.times.iter().zip(&traj.states) {
        let parts = [
            (&st.y, &s0.y, y_max, spec.c_n, Component::Neuron as fn(usize) -> Component),
            (&st.w, &s0.w, w_max, spec.c_s, Component::Synapse as fn(usize) -> Component),
        ];
        for (idx, (vals, init, radius, rate, tag)) in parts.into_iter().enumerate() {
            for (k, (&v, &v0)) in vals.iter().zip(init.iter()).enumerate() {
                let env = envelope(v0, radius, rate, t);
                let margin = env - v.abs();
                if margin < -1e-9 * (1.0 + env) {
                    report.violations.push(Violation {
                        t,
                        component: tag(k),
                        margin,
                    });
                }
                let peak = if idx == 0 { &mut report.peak_neural } else { &mut report.peak_synaptic };
                *peak = peak.max(v.abs());
            }
        }
    }
    let last = traj.last();
    let excess_y = last.y.iter().map(|v| v.abs() - y_max).fold(0.0, f64::max);
    let excess_w = last.w.iter().map(|v| v.abs() - w_max).fold(0.0, f64::max);
    report.terminal_excess = excess_y.max(excess_w);
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DaleVerdict {
    /// The sign of `h_e` and `w_e(0)` is kept for the whole run.
    Preserved,
    Violated { t: f64, value: f64 },
    /// Hypothesis unmet: nonzero synaptic stimulus or `w_e(0)` of the wrong sign.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DaleReport {
    pub verdicts: Vec<DaleVerdict>,
}

impl DaleReport {
    pub fn flips(&self) -> usize {
        self.verdicts
            .iter()
            .filter(|v| matches!(v, DaleVerdict::Violated { .. }))
            .count()
    }

    pub fn applicable(&self) -> usize {
        self.verdicts.iter().filter(|v| **v != DaleVerdict::NotApplicable).count()
    }
}

impl fmt::Display for DaleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dale: applicable={} flips={}", self.applicable(), self.flips())?;
        for (e, v) in self.verdicts.iter().enumerate() {
            match v {
                DaleVerdict::Preserved => writeln!(f, "dale edge {} preserved", e + 1)?,
                DaleVerdict::Violated { t, value } => writeln!(f, "dale edge {} flipped t={t} w={value:.3e}", e + 1)?,
                DaleVerdict::NotApplicable => writeln!(f, "dale edge {} not applicable", e + 1)?,
            }
        }
        Ok(())
    }
}

/// Sign preservation per edge: with zero synaptic stimulus, `h_e > 0` and
/// `w_e(0) >= 0` keep `w_e >= 0`; `h_e < 0` and `w_e(0) <= 0` keep `w_e <= 0`.
pub fn check_dale(traj: &Trajectory, topo: &Topology, spec: &ModelSpec) -> DaleReport {
    let verdicts = topo
        .h()
        .iter()
        .enumerate()
        .map(|(e, &h)| {
            let Some(w0) = traj.states.first().map(|s| s.w[e]) else {
                return DaleVerdict::NotApplicable;
            };
            let stimulated = e < spec.ubar.len() && !spec.ubar.channel(e).is_zero();
            let sign = if h > 0.0 && w0 >= 0.0 {
                1.0
            } else if h < 0.0 && w0 <= 0.0 {
                -1.0
            } else {
                0.0
            };
            if stimulated || sign == 0.0 {
                return DaleVerdict::NotApplicable;
            }
            for (&t, st) in traj.times.iter().zip(&traj.states) {
                if sign * st.w[e] < -SIGN_TOLERANCE {
                    return DaleVerdict::Violated { t, value: st.w[e] };
                }
            }
            DaleVerdict::Preserved
        })
        .collect();
    DaleReport { verdicts }
}

/// Skew-symmetric part `(W - W^T) / 2`.
pub fn skew_part(w: &DMatrix<f64>) -> DMatrix<f64> {
    (w - w.transpose()) * 0.5
}

fn norm_inf(a: &DMatrix<f64>) -> f64 {
    crate::analysis::norm_inf(a)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SkewReport {
    /// Oja drag or synaptic stimulus present; no claim is made.
    NotApplicable(String),
    /// `W_A(0) = 0`: largest `||W_A(t)||_inf` over the run.
    StaysSymmetric { max_skew: f64 },
    /// Largest `| ||W_A(t)|| / (e^{-c_s t} ||W_A(0)||) - 1 |` over the run.
    Decays { max_relative_error: f64 },
}

impl fmt::Display for SkewReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkewReport::NotApplicable(why) => writeln!(f, "skew: not applicable ({why})"),
            SkewReport::StaysSymmetric { max_skew } => writeln!(f, "skew: symmetric start, max |W_A| = {max_skew:.3e}"),
            SkewReport::Decays { max_relative_error } => {
                writeln!(f, "skew: exponential decay, max relative error = {max_relative_error:.3e}")
            }
        }
    }
}

/// Compares the skew-symmetric part of a dense run with its exact
/// exponential decay at rate `c_s`. The model's `H` must be symmetric.
pub fn check_skew_decay(traj: &DenseTrajectory, model: &DenseModel) -> Result<SkewReport> {
    let (h, spec) = (&model.h, &model.spec);
    let scale = h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !h.is_square() || (h - h.transpose()).iter().any(|v| v.abs() > 1e-12 * scale.max(1.0)) {
        return Err(Error::NonSymmetricH);
    }
    if spec.kind.is_oja() && spec.c_o != 0.0 {
        return Ok(SkewReport::NotApplicable("Oja drag breaks the symmetric/skew split".into()));
    }
    if model.ubar.iter().any(|(_, _, s)| !s.is_zero()) {
        return Ok(SkewReport::NotApplicable("nonzero synaptic stimulus".into()));
    }
    let Some(w0) = traj.w.first() else {
        return Ok(SkewReport::StaysSymmetric { max_skew: 0.0 });
    };
    let a0 = norm_inf(&skew_part(w0));
    if a0 == 0.0 {
        let max_skew = traj.w.iter().map(|w| norm_inf(&skew_part(w))).fold(0.0, f64::max);
        return Ok(SkewReport::StaysSymmetric { max_skew });
    }
    let max_relative_error = traj
        .times
        .iter()
        .zip(&traj.w)
        .map(|(&t, w)| (norm_inf(&skew_part(w)) / (a0 * (-spec.c_s * t).exp()) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(SkewReport::Decays { max_relative_error })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntrainmentReport {
    pub period: f64,
    pub periods_checked: usize,
    /// `max ||z(t) - z(t - T)||_inf` over the final periods.
    pub residual: f64,
    pub tolerance: f64,
    pub entrained: bool,
}

impl fmt::Display for EntrainmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "entrainment: period={:.6} periods={} residual={:.3e} tol={:.1e} entrained={}",
            self.period, self.periods_checked, self.residual, self.tolerance, self.entrained
        )
    }
}

/// Compares each grid state in the last `periods` periods with its
/// interpolated value one period earlier. Needs `transient + (periods + 1) T`
/// of trajectory.
pub fn check_entrainment(traj: &Trajectory, period: f64, transient: f64, periods: usize, tolerance: f64) -> Result<EntrainmentReport> {
    if !(period > 0.0 && period.is_finite()) || periods == 0 {
        return Err(Error::InvalidParams(format!("entrainment needs a positive period and k >= 1 (got {period}, {periods})")));
    }
    let needed = transient.max(0.0) + (periods as f64 + 1.0) * period;
    let have = traj.t_end();
    if have < needed {
        return Err(Error::TrajectoryTooShort { needed, have });
    }
    let start = have - periods as f64 * period;
    let mut residual = 0.0f64;
    for (&t, st) in traj.times.iter().zip(&traj.states) {
        if t < start {
            continue;
        }
        let earlier = traj.sample(t - period).expect("inside the span");
        let d = diff_inf(st, &earlier);
        residual = residual.max(d);
    }
    Ok(EntrainmentReport {
        period,
        periods_checked: periods,
        residual,
        tolerance,
        entrained: residual < tolerance,
    })
}

fn diff_inf(a: &SystemState, b: &SystemState) -> f64 {
    a.y.iter()
        .zip(&b.y)
        .chain(a.w.iter().zip(&b.w))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::compute_bounds;
    use crate::dynamics::{ModelKind, Signal, Stimulus};
    use crate::simulate::{integrate, integrate_dense};

    fn pair() -> (Topology, ModelSpec) {
        let topo = Topology::new(2, &[(1, 2), (2, 1)], &[1.0, -1.0]).unwrap();
        let u = Stimulus::new(vec![Signal::Constant(1.0), Signal::Zero]).unwrap();
        let spec = ModelSpec::new(ModelKind::HopfieldHebbian, 2.0, 2.0, 0.0, u, Stimulus::zero(2)).unwrap();
        (topo, spec)
    }

    #[test]
    fn invariance_from_outside_still_follows_envelope() {
        let (topo, spec) = pair();
        let b = compute_bounds(&topo, &spec).unwrap();
        let s0 = SystemState::new(vec![3.0, -4.0], vec![2.0 * b.w_max, -2.0 * b.w_max]);
        let traj = integrate(&topo, &spec, &s0, 5.0, 1e-3).unwrap();
        let rep = check_invariance(&traj, &b, &spec);
        assert!(rep.is_clean(), "{rep}");
        assert!(rep.terminal_excess < 1e-3);
    }

    #[test]
    fn invariance_reports_injected_violation() {
        let (topo, spec) = pair();
        let b = compute_bounds(&topo, &spec).unwrap();
        let mut traj = integrate(&topo, &spec, &SystemState::zeros(2, 2), 1.0, 1e-2).unwrap();
        traj.states[50].w[1] = 10.0;
        let rep = check_invariance(&traj, &b, &spec);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].component, Component::Synapse(1));
        assert!(rep.violations[0].margin < 0.0);
    }

    #[test]
    fn dale_verdicts() {
        let (topo, spec) = pair();
        let traj = integrate(&topo, &spec, &SystemState::new(vec![0.5, 0.5], vec![0.0, -0.1]), 3.0, 1e-3).unwrap();
        let rep = check_dale(&traj, &topo, &spec);
        assert_eq!(rep.verdicts, vec![DaleVerdict::Preserved, DaleVerdict::Preserved]);
        let wrong = integrate(&topo, &spec, &SystemState::new(vec![0.5, 0.5], vec![-0.1, -0.1]), 1.0, 1e-3).unwrap();
        assert_eq!(check_dale(&wrong, &topo, &spec).verdicts[0], DaleVerdict::NotApplicable);
        let stim = ModelSpec {
            ubar: Stimulus::new(vec![Signal::Zero, Signal::Constant(1.5)]).unwrap(),
            ..spec.clone()
        };
        assert_eq!(check_dale(&traj, &topo, &stim).verdicts[1], DaleVerdict::NotApplicable);
        let mut flipped = traj.clone();
        flipped.states[10].w[0] = -1e-6;
        assert!(matches!(check_dale(&flipped, &topo, &spec).verdicts[0], DaleVerdict::Violated { .. }));
    }

    fn dense_setup(kind: ModelKind, c_o: f64) -> DenseModel {
        let h = DMatrix::from_row_slice(3, 3, &[0.5, -1.0, 0.3, -1.0, 0.0, 0.8, 0.3, 0.8, -0.2]);
        let u = Stimulus::new(vec![
            Signal::Sinusoid {
                amplitude: 1.0,
                omega: 2.0,
                phase: 0.0,
            },
            Signal::Zero,
            Signal::Constant(-0.5),
        ])
        .unwrap();
        let spec = ModelSpec::new(kind, 1.5, 1.2, c_o, u, Stimulus::zero(0)).unwrap();
        DenseModel::new(spec, h).unwrap()
    }

    #[test]
    fn skew_part_vanishes_from_symmetric_start() {
        let model = dense_setup(ModelKind::HopfieldHebbian, 0.0);
        let w0 = DMatrix::from_row_slice(3, 3, &[0.1, 0.2, 0.0, 0.2, -0.3, 0.4, 0.0, 0.4, 0.0]);
        let traj = integrate_dense(&model, &[0.3, -0.2, 0.1], &w0, 5.0, 1e-3).unwrap();
        match check_skew_decay(&traj, &model).unwrap() {
            SkewReport::StaysSymmetric { max_skew } => assert!(max_skew < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn skew_part_decays_exponentially() {
        let model = dense_setup(ModelKind::FiringRateHebbian, 0.0);
        let w0 = DMatrix::from_row_slice(3, 3, &[0.1, 0.9, 0.0, -0.2, -0.3, 0.4, 0.5, 0.0, 0.0]);
        let traj = integrate_dense(&model, &[0.3, -0.2, 0.1], &w0, 5.0, 1e-3).unwrap();
        match check_skew_decay(&traj, &model).unwrap() {
            SkewReport::Decays { max_relative_error } => assert!(max_relative_error < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn skew_check_gates() {
        let model = dense_setup(ModelKind::HopfieldOja, 0.4);
        let w0 = DMatrix::zeros(3, 3);
        let traj = integrate_dense(&model, &[0.0; 3], &w0, 0.1, 1e-2).unwrap();
        assert!(matches!(
            check_skew_decay(&traj, &model).unwrap(),
            SkewReport::NotApplicable(_)
        ));
        let mut skewed = dense_setup(ModelKind::HopfieldHebbian, 0.0);
        skewed.h[(0, 1)] = 3.0;
        assert_eq!(check_skew_decay(&traj, &skewed), Err(Error::NonSymmetricH));
    }

    #[test]
    fn constant_input_is_trivially_entrained() {
        let (topo, spec) = pair();
        let traj = integrate(&topo, &spec, &SystemState::new(vec![0.5, -0.5], vec![0.2, -0.2]), 20.0, 1e-2).unwrap();
        let rep = check_entrainment(&traj, 1.234, 10.0, 3, 1e-3).unwrap();
        assert!(rep.entrained, "{rep}");
        assert!(matches!(
            check_entrainment(&traj, 5.0, 10.0, 3, 1e-3),
            Err(Error::TrajectoryTooShort { .. })
        ));
    }
}
