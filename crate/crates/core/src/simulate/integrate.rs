//! Fixed-step classical Runge-Kutta integration of the edge-indexed and
//! dense models, with an optional delay on every activation argument.

use std::io::{self, Write};

use nalgebra::DMatrix;

use crate::dynamics::{eval_field, DenseModel, ModelSpec, SystemState};
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Largest admissible `dt * max(c_n, c_s)`.
pub const STABILITY_FACTOR: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `times[i] = i * dt`
    pub times: Vec<f64>,
    pub states: Vec<SystemState>,
    pub dt: f64,
    /// Effective delay after rounding to the grid; `None` for an undelayed run.
    pub delay: Option<f64>,
    /// Non-fatal notes raised while integrating (delay rounding).
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn last(&self) -> &SystemState {
        self.states.last().expect("trajectory has at least the initial state")
    }

    /// State at an arbitrary time inside the span by cubic Lagrange
    /// interpolation through the four nearest grid points.
    pub fn sample(&self, t: f64) -> Option<SystemState> {
        let len = self.len();
        if len == 0 || !(t >= 0.0 && t <= self.t_end() + 1e-12 * self.dt) {
            return None;
        }
        if len < 4 {
            let i = ((t / self.dt).round() as usize).min(len - 1);
            return Some(self.states[i].clone());
        }
        let pos = t / self.dt;
        let base = (pos.floor() as isize - 1).clamp(0, len as isize - 4) as usize;
        let s = pos - base as f64;
        // Lagrange basis on nodes 0, 1, 2, 3
        let weights = [
            -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
            s * (s - 2.0) * (s - 3.0) / 2.0,
            -s * (s - 1.0) * (s - 3.0) / 2.0,
            s * (s - 1.0) * (s - 2.0) / 6.0,
        ];
        let nodes = &self.states[base..base + 4];
        let mix = |pick: fn(&SystemState) -> &Vec<f64>| -> Vec<f64> {
            (0..pick(&nodes[0]).len())
                .map(|k| weights.iter().zip(nodes).map(|(c, st)| c * pick(st)[k]).sum())
                .collect()
        };
        Some(SystemState {
            y: mix(|st| &st.y),
            w: mix(|st| &st.w),
        })
    }

    /// CSV with header `t,y_1..y_n,w_1..w_m`. Values use the shortest
    /// representation that round-trips.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let (n, m) = self.states.first().map_or((0, 0), |s| (s.y.len(), s.w.len()));
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("y_{i}")));
        header.extend((1..=m).map(|e| format!("w_{e}")));
        writeln!(out, "{}", header.join(","))?;
        for (t, st) in self.times.iter().zip(&self.states) {
            write!(out, "{t}")?;
            for v in st.y.iter().chain(&st.w) {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn check_step(spec: &ModelSpec, t_end: f64, dt: f64) -> Result<usize> {
    let limit = STABILITY_FACTOR / spec.c_n.max(spec.c_s);
    if !(dt > 0.0 && dt.is_finite()) || dt > limit {
        return Err(Error::UnstableStep { dt, limit });
    }
    if !(t_end >= dt && t_end.is_finite()) {
        return Err(Error::InvalidParams(format!("t_end = {t_end} must be at least dt = {dt}")));
    }
    Ok((t_end / dt).round() as usize)
}

/// Classical RK4 on the chosen model from `state0` at `t = 0`.
pub fn integrate(topo: &Topology, spec: &ModelSpec, state0: &SystemState, t_end: f64, dt: f64) -> Result<Trajectory> {
    spec.validate(topo)?;
    state0.check_dims(topo)?;
    let steps = check_step(spec, t_end, dt)?;
    let f = |s: &SystemState, t: f64| eval_field(topo, spec, s, s, t, t);

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(state0.clone());
    let mut cur = state0.clone();
    for i in 0..steps {
        let t = i as f64 * dt;
        let k1 = f(&cur, t);
        let k2 = f(&cur.axpy(0.5 * dt, &k1), t + 0.5 * dt);
        let k3 = f(&cur.axpy(0.5 * dt, &k2), t + 0.5 * dt);
        let k4 = f(&cur.axpy(dt, &k3), t + dt);
        cur = combine(&cur, dt, &k1, &k2, &k3, &k4);
        let t_next = (i + 1) as f64 * dt;
        if !cur.is_finite() {
            return Err(Error::NonFiniteState { t: t_next });
        }
        times.push(t_next);
        states.push(cur.clone());
    }
    Ok(Trajectory {
        times,
        states,
        dt,
        delay: None,
        warnings: Vec::new(),
    })
}

fn combine(cur: &SystemState, dt: f64, k1: &SystemState, k2: &SystemState, k3: &SystemState, k4: &SystemState) -> SystemState {
    let mix = |x: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..x.len())
            .map(|k| x[k] + dt / 6.0 * (a[k] + 2.0 * b[k] + 2.0 * c[k] + d[k]))
            .collect()
    };
    SystemState {
        y: mix(&cur.y, &k1.y, &k2.y, &k3.y, &k4.y),
        w: mix(&cur.w, &k1.w, &k2.w, &k3.w, &k4.w),
    }
}

/// Delay rounded to the grid: the number of steps and an optional warning.
pub fn round_delay(tau: f64, dt: f64) -> Result<(usize, Option<String>)> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParams(format!("delay must be non-negative (got {tau})")));
    }
    let lag = (tau / dt).round() as usize;
    let effective = lag as f64 * dt;
    let warning = ((effective - tau).abs() > 1e-9 * dt.max(tau))
        .then(|| format!("delay {tau} is not a multiple of dt = {dt}; rounded to {effective}"));
    Ok((lag, warning))
}

/// RK4 where every activation argument is read at `t - tau`. The history
/// on `[-tau, 0]` is constant and equal to `state0`. Half-step lagged states
/// come from cubic Hermite interpolation of the stored grid states and
/// derivatives, which keeps the scheme fourth order.
///
/// `tau` is rounded to the nearest multiple of `dt` (noted in
/// [`Trajectory::warnings`]); a zero delay defers to [`integrate`].
pub fn integrate_delayed(
    topo: &Topology,
    spec: &ModelSpec,
    state0: &SystemState,
    t_end: f64,
    dt: f64,
    tau: f64,
) -> Result<Trajectory> {
    spec.validate(topo)?;
    state0.check_dims(topo)?;
    let steps = check_step(spec, t_end, dt)?;
    let (lag, warning) = round_delay(tau, dt)?;
    let effective = lag as f64 * dt;
    if lag == 0 {
        let mut traj = integrate(topo, spec, state0, t_end, dt)?;
        traj.delay = (tau > 0.0).then_some(0.0);
        traj.warnings.extend(warning);
        return Ok(traj);
    }

    let zero = SystemState::zeros(topo.n(), topo.m());
    let mut states = Vec::with_capacity(steps + 1);
    let mut derivs: Vec<SystemState> = Vec::with_capacity(steps + 1);
    states.push(state0.clone());

    // grid state and derivative at index i - lag, constant before zero
    let lagged = |states: &[SystemState], derivs: &[SystemState], i: usize| -> (SystemState, SystemState) {
        if i < lag {
            (state0.clone(), zero.clone())
        } else {
            (states[i - lag].clone(), derivs[i - lag].clone())
        }
    };

    for i in 0..steps {
        let t = i as f64 * dt;
        let cur = states[i].clone();
        let (lag0, d0) = lagged(&states, &derivs, i);
        let k1 = eval_field(topo, spec, &cur, &lag0, t, t - effective);
        derivs.push(k1.clone());
        // i + 1 - lag <= i, so its derivative is already stored
        let (lag1, d1) = lagged(&states, &derivs, i + 1);
        let mid = hermite_midpoint(&lag0, &d0, &lag1, &d1, dt);
        let tm = t + 0.5 * dt;
        let k2 = eval_field(topo, spec, &cur.axpy(0.5 * dt, &k1), &mid, tm, tm - effective);
        let k3 = eval_field(topo, spec, &cur.axpy(0.5 * dt, &k2), &mid, tm, tm - effective);
        let k4 = eval_field(topo, spec, &cur.axpy(dt, &k3), &lag1, t + dt, t + dt - effective);
        let next = combine(&cur, dt, &k1, &k2, &k3, &k4);
        if !next.is_finite() {
            return Err(Error::NonFiniteState { t: t + dt });
        }
        states.push(next);
    }
    Ok(Trajectory {
        times: (0..=steps).map(|i| i as f64 * dt).collect(),
        states,
        dt,
        delay: Some(effective),
        warnings: warning.into_iter().collect(),
    })
}

/// Cubic Hermite value at the midpoint of an interval of length `dt`.
fn hermite_midpoint(a: &SystemState, da: &SystemState, b: &SystemState, db: &SystemState, dt: f64) -> SystemState {
    let mix = |x: &[f64], dx: &[f64], y: &[f64], dy: &[f64]| -> Vec<f64> {
        (0..x.len())
            .map(|k| 0.5 * (x[k] + y[k]) + dt / 8.0 * (dx[k] - dy[k]))
            .collect()
    };
    SystemState {
        y: mix(&a.y, &da.y, &b.y, &db.y),
        w: mix(&a.w, &da.w, &b.w, &db.w),
    }
}

/// Trajectory of the dense matrix-form model.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTrajectory {
    pub times: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub w: Vec<DMatrix<f64>>,
    pub dt: f64,
}

/// Classical RK4 on the dense model.
pub fn integrate_dense(model: &DenseModel, y0: &[f64], w0: &DMatrix<f64>, t_end: f64, dt: f64) -> Result<DenseTrajectory> {
    let steps = check_step(&model.spec, t_end, dt)?;
    model.vector_field(y0, w0, 0.0)?;
    let shift = |y: &[f64], w: &DMatrix<f64>, h: f64, dy: &[f64], dw: &DMatrix<f64>| {
        let y: Vec<f64> = y.iter().zip(dy).map(|(a, b)| a + h * b).collect();
        (y, w + dw * h)
    };
    let mut ys = vec![y0.to_vec()];
    let mut ws = vec![w0.clone()];
    for i in 0..steps {
        let t = i as f64 * dt;
        let (y, w) = (&ys[i], &ws[i]);
        let (a1, b1) = model.vector_field(y, w, t)?;
        let (y2, w2) = shift(y, w, 0.5 * dt, &a1, &b1);
        let (a2, b2) = model.vector_field(&y2, &w2, t + 0.5 * dt)?;
        let (y3, w3) = shift(y, w, 0.5 * dt, &a2, &b2);
        let (a3, b3) = model.vector_field(&y3, &w3, t + 0.5 * dt)?;
        let (y4, w4) = shift(y, w, dt, &a3, &b3);
        let (a4, b4) = model.vector_field(&y4, &w4, t + dt)?;
        let y_next: Vec<f64> = (0..y.len())
            .map(|k| y[k] + dt / 6.0 * (a1[k] + 2.0 * a2[k] + 2.0 * a3[k] + a4[k]))
            .collect();
        let w_next = w + (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (dt / 6.0);
        if y_next.iter().chain(w_next.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { t: t + dt });
        }
        ys.push(y_next);
        ws.push(w_next);
    }
    Ok(DenseTrajectory {
        times: (0..=steps).map(|i| i as f64 * dt).collect(),
        y: ys,
        w: ws,
        dt,
    })
}
