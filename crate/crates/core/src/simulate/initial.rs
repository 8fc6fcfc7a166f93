//! Random initial conditions.

use rand::Rng;

use crate::analysis::Bounds;
use crate::dynamics::{ModelKind, SystemState};
use crate::topology::Topology;

/// Uniform draw from `[-range, range]^{n+m}`.
pub fn sample_uniform<R: Rng>(topo: &Topology, range: f64, rng: &mut R) -> SystemState {
    let mut draw = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.gen_range(-range..=range)).collect() };
    let y = draw(topo.n());
    let w = draw(topo.m());
    SystemState { y, w }
}

/// Flips each weight to the sign of its coupling coefficient.
pub fn with_dale_signs(state: &SystemState, topo: &Topology) -> SystemState {
    let w = state.w.iter().zip(topo.h()).map(|(w, h)| w.abs().copysign(*h)).collect();
    SystemState { y: state.y.clone(), w }
}

/// Uniform draw inside both `[-range, range]^{n+m}` and the invariant box,
/// with weights signed by their coupling coefficients.
pub fn sample_invariant<R: Rng>(topo: &Topology, kind: ModelKind, bounds: &Bounds, range: f64, rng: &mut R) -> SystemState {
    let ry = range.min(bounds.neural_max(kind));
    let rw = range.min(bounds.w_max);
    let y = (0..topo.n()).map(|_| rng.gen_range(-ry..=ry)).collect();
    let w = topo.h().iter().map(|h| rng.gen_range(0.0..=rw).copysign(*h)).collect();
    SystemState { y, w }
}
