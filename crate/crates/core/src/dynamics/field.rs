//! Right-hand sides and Jacobians of the low-dimensional (edge-indexed)
//! models.
//!
//! Hopfield models:
//! ```text
//! x' = -c_n x + B_in diag(w) B_out^T Phi(x) + u
//! ```
//! Firing-rate models:
//! ```text
//! v' = -c_n v + Phi(B_in diag(w) B_out^T v + u)
//! ```
//! Synapses (Oja drag vanishes when `c_o = 0`):
//! ```text
//! w_e' = h_e psi(y_pre) psi(y_post) - (c_s + c_o psi(y_post)^2) w_e + ubar_e
//! ```

use nalgebra::DMatrix;

use super::{ModelSpec, SystemState};
use crate::error::Result;
use crate::topology::Topology;

/// Evaluates the chosen model's right-hand side at `(state, t)`.
pub fn vector_field(topo: &Topology, spec: &ModelSpec, state: &SystemState, t: f64) -> Result<SystemState> {
    spec.validate(topo)?;
    state.check_dims(topo)?;
    Ok(eval(topo, spec, state, state, t, t))
}

/// Unchecked evaluation where every activation argument is read from
/// `lagged` (at time `t_lag`) while the linear decay and the synaptic
/// stimulus use `state` at `t`. With `lagged == state` this is the plain
/// vector field.
pub(crate) fn eval(
    topo: &Topology,
    spec: &ModelSpec,
    state: &SystemState,
    lagged: &SystemState,
    t: f64,
    t_lag: f64,
) -> SystemState {
    let n = topo.n();
    let mut dy = vec![0.0; n];

    if spec.kind.is_firing_rate() {
        let mut z = spec.u.eval(t_lag);
        topo.accumulate_weighted(&lagged.w, &lagged.y, &mut z);
        for i in 0..n {
            dy[i] = -spec.c_n * state.y[i] + spec.activation.phi(z[i]);
        }
    } else {
        let phi = spec.activation.map(&lagged.y);
        let mut coupling = vec![0.0; n];
        topo.accumulate_weighted(&state.w, &phi, &mut coupling);
        let u = spec.u.eval(t);
        for i in 0..n {
            dy[i] = -spec.c_n * state.y[i] + coupling[i] + u[i];
        }
    }

    let psi = spec.synaptic_activation.map(&lagged.y);
    let ubar = spec.ubar.eval(t);
    let dw = topo
        .edges()
        .iter()
        .zip(topo.h())
        .enumerate()
        .map(|(e, (edge, &h))| {
            let post = psi[edge.post];
            let decay = spec.c_s + spec.c_o * post * post;
            h * psi[edge.pre] * post - decay * state.w[e] + ubar[e]
        })
        .collect();

    SystemState { y: dy, w: dw }
}

/// Jacobian in block form `[[J_nn, J_ns], [J_sn, J_ss]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianBlocks {
    /// `n x n`
    pub nn: DMatrix<f64>,
    /// `n x m`
    pub ns: DMatrix<f64>,
    /// `m x n`
    pub sn: DMatrix<f64>,
    /// `m x m`
    pub ss: DMatrix<f64>,
}

impl JacobianBlocks {
    /// The full `(n+m) x (n+m)` matrix.
    pub fn assemble(&self) -> DMatrix<f64> {
        let n = self.nn.nrows();
        let m = self.ss.nrows();
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.nn);
        out.view_mut((0, n), (n, m)).copy_from(&self.ns);
        out.view_mut((n, 0), (m, n)).copy_from(&self.sn);
        out.view_mut((n, n), (m, m)).copy_from(&self.ss);
        out
    }
}

/// Analytic Jacobian of [`vector_field`] at `(state, t)`.
///
/// For the firing-rate models the slope of the outer activation scales the
/// rows of the coupling terms: `J_nn = -c_n I + diag(Phi'(z)) W` and
/// `J_ns = diag(Phi'(z)) B_in diag(B_out^T v)` with `z = W v + u`.
pub fn jacobian(topo: &Topology, spec: &ModelSpec, state: &SystemState, t: f64) -> Result<JacobianBlocks> {
    spec.validate(topo)?;
    state.check_dims(topo)?;
    let n = topo.n();
    let m = topo.m();
    let y = &state.y;
    let w = &state.w;

    let mut nn = DMatrix::from_diagonal_element(n, n, -spec.c_n);
    let mut ns = DMatrix::zeros(n, m);
    if spec.kind.is_firing_rate() {
        let mut z = spec.u.eval(t);
        topo.accumulate_weighted(w, y, &mut z);
        let slope = spec.activation.map_prime(&z);
        for (e, edge) in topo.edges().iter().enumerate() {
            nn[(edge.post, edge.pre)] += slope[edge.post] * w[e];
            ns[(edge.post, e)] = slope[edge.post] * y[edge.pre];
        }
    } else {
        let phi = spec.activation.map(y);
        let slope = spec.activation.map_prime(y);
        for (e, edge) in topo.edges().iter().enumerate() {
            nn[(edge.post, edge.pre)] += w[e] * slope[edge.pre];
            ns[(edge.post, e)] = phi[edge.pre];
        }
    }

    let psi = spec.synaptic_activation.map(y);
    let dpsi = spec.synaptic_activation.map_prime(y);
    let mut sn = DMatrix::zeros(m, n);
    let mut ss = DMatrix::zeros(m, m);
    for (e, (edge, &h)) in topo.edges().iter().zip(topo.h()).enumerate() {
        let (pre, post) = (edge.pre, edge.post);
        sn[(e, pre)] += h * dpsi[pre] * psi[post];
        sn[(e, post)] += h * psi[pre] * dpsi[post] - 2.0 * spec.c_o * w[e] * psi[post] * dpsi[post];
        ss[(e, e)] = -(spec.c_s + spec.c_o * psi[post] * psi[post]);
    }

    Ok(JacobianBlocks { nn, ns, sn, ss })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Activation, ModelKind, Signal, Stimulus};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn decoupled(kind: ModelKind) -> (Topology, ModelSpec) {
        let topo = Topology::new(1, &[], &[]).unwrap();
        let spec = ModelSpec::new(kind, 1.0, 2.0, 0.0, Stimulus::zero(1), Stimulus::zero(0)).unwrap();
        (topo, spec)
    }

    #[test]
    fn linear_decay_without_synapses() {
        let (topo, spec) = decoupled(ModelKind::HopfieldHebbian);
        let d = vector_field(&topo, &spec, &SystemState::new(vec![2.0], vec![]), 0.0).unwrap();
        assert_eq!(d.y, vec![-2.0]);
        let j = jacobian(&topo, &spec, &SystemState::new(vec![2.0], vec![]), 0.0).unwrap();
        assert_eq!(j.nn, DMatrix::from_element(1, 1, -1.0));
        assert_eq!(j.ns.shape(), (1, 0));
        assert_eq!(j.sn.shape(), (0, 1));
        assert_eq!(j.ss.shape(), (0, 0));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (topo, spec) = decoupled(ModelKind::HopfieldHebbian);
        let bad = SystemState::new(vec![1.0, 2.0], vec![]);
        assert!(vector_field(&topo, &spec, &bad, 0.0).is_err());
        assert!(jacobian(&topo, &spec, &bad, 0.0).is_err());
    }

    fn random_instance(rng: &mut ChaCha8Rng, kind: ModelKind, c_o: f64) -> (Topology, ModelSpec, SystemState) {
        let topo = Topology::new(
            4,
            &[(1, 2), (2, 3), (3, 1), (4, 1), (2, 2), (1, 4)],
            &[0.7, -0.4, 1.1, -0.9, 0.5, 0.3],
        )
        .unwrap();
        let u = Stimulus::new(vec![
            Signal::Sinusoid {
                amplitude: 2.0,
                omega: 3.0,
                phase: 0.1,
            },
            Signal::Constant(-0.5),
            Signal::Zero,
            Signal::TanhRamp { amplitude: 1.5 },
        ])
        .unwrap();
        let ubar = Stimulus::new((0..6).map(|e| Signal::Constant(0.1 * e as f64)).collect()).unwrap();
        let spec = ModelSpec::new(kind, 1.3, 0.8, c_o, u, ubar).unwrap();
        let state = SystemState::new(
            (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            (0..6).map(|_| rng.gen_range(-1.5..1.5)).collect(),
        );
        (topo, spec, state)
    }

    #[test]
    fn ss_block_is_pure_decay_for_hebbian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (topo, spec, state) = random_instance(&mut rng, ModelKind::HopfieldHebbian, 0.0);
            let j = jacobian(&topo, &spec, &state, 0.4).unwrap();
            assert_eq!(j.ss, DMatrix::from_diagonal_element(6, 6, -0.8));
        }
    }

    #[test]
    fn oja_with_zero_coefficient_reduces_to_hebbian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (oja, hebb) in [
            (ModelKind::HopfieldOja, ModelKind::HopfieldHebbian),
            (ModelKind::FiringRateOja, ModelKind::FiringRateHebbian),
        ] {
            for _ in 0..100 {
                let (topo, spec_o, state) = random_instance(&mut rng, oja, 0.0);
                let spec_h = ModelSpec { kind: hebb, ..spec_o.clone() };
                let t = rng.gen_range(0.0..10.0);
                assert_eq!(
                    vector_field(&topo, &spec_o, &state, t).unwrap(),
                    vector_field(&topo, &spec_h, &state, t).unwrap()
                );
                assert_eq!(
                    jacobian(&topo, &spec_o, &state, t).unwrap(),
                    jacobian(&topo, &spec_h, &state, t).unwrap()
                );
            }
        }
    }

    #[test]
    fn scaled_activation_roles_are_respected() {
        // distinct neural / synaptic activations must still give a consistent Jacobian
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (topo, spec, state) = random_instance(&mut rng, ModelKind::FiringRateOja, 0.6);
        let spec = spec
            .with_activation(Activation::ScaledSigmoid {
                gain: 2.0,
                ceiling: 1.5,
            })
            .unwrap()
            .with_synaptic_activation(Activation::Sigmoid)
            .unwrap();
        assert_eq!(spec.phi_max(), 1.5);
        let j = jacobian(&topo, &spec, &state, 0.2).unwrap().assemble();
        let h = 1e-6;
        let base = state.to_flat();
        for k in 0..base.len() {
            let mut plus = base.clone();
            let mut minus = base.clone();
            plus[k] += h;
            minus[k] -= h;
            let fp = vector_field(&topo, &spec, &SystemState::from_flat(&plus, 4), 0.2).unwrap().to_flat();
            let fm = vector_field(&topo, &spec, &SystemState::from_flat(&minus, 4), 0.2).unwrap().to_flat();
            for r in 0..base.len() {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                assert!((fd - j[(r, k)]).abs() < 1e-6 * (1.0 + fd.abs()));
            }
        }
    }
}
