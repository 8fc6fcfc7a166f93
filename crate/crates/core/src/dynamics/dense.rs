//! Full-dimensional matrix form of the coupled models, with `n^2` synaptic
//! variables. Used as an independent oracle for the edge-indexed form and
//! for experiments that need a dense symmetric coupling matrix.

use nalgebra::{DMatrix, DVector};

use super::{ModelSpec, Signal};
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Dense coupling matrix `H` and synaptic stimuli `Ū` placed on its support.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseModel {
    pub spec: ModelSpec,
    pub h: DMatrix<f64>,
    /// `(post, pre, signal)` triples, 0-based.
    pub ubar: Vec<(usize, usize, Signal)>,
}

impl DenseModel {
    /// A dense model with an arbitrary square `H` and zero synaptic stimulus.
    /// `spec.ubar` is ignored.
    pub fn new(spec: ModelSpec, h: DMatrix<f64>) -> Result<Self> {
        spec.validate_params()?;
        if !h.is_square() {
            return Err(Error::NonSquare {
                rows: h.nrows(),
                cols: h.ncols(),
            });
        }
        if spec.u.len() != h.nrows() {
            return Err(Error::DimensionMismatch {
                what: "neural stimulus channels",
                expected: h.nrows(),
                got: spec.u.len(),
            });
        }
        Ok(Self { spec, h, ubar: Vec::new() })
    }

    /// Lifts an edge-indexed model: `H` from the coupling coefficients and
    /// each `ū_e` placed at `(post_e, pre_e)`.
    pub fn from_topology(topo: &Topology, spec: &ModelSpec) -> Result<Self> {
        spec.validate(topo)?;
        let ubar = topo
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| (edge.post, edge.pre, spec.ubar.channel(e)))
            .collect();
        Ok(Self {
            spec: spec.clone(),
            h: topo.coupling_matrix(),
            ubar,
        })
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    pub fn ubar_at(&self, t: f64) -> DMatrix<f64> {
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        for &(i, j, s) in &self.ubar {
            out[(i, j)] = s.eval(t);
        }
        out
    }

    /// Derivative `(y', W')` of the matrix-form model at `(y, W, t)`.
    pub fn vector_field(&self, y: &[f64], w: &DMatrix<f64>, t: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = self.n();
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                what: "neural state",
                expected: n,
                got: y.len(),
            });
        }
        if w.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                what: "dense weight matrix rows/cols",
                expected: n,
                got: if w.nrows() != n { w.nrows() } else { w.ncols() },
            });
        }
        let spec = &self.spec;
        let yv = DVector::from_column_slice(y);
        let u = DVector::from_vec(spec.u.eval(t));
        let dy: Vec<f64> = if spec.kind.is_firing_rate() {
            let z = w * &yv + &u;
            (0..n).map(|i| -spec.c_n * y[i] + spec.activation.phi(z[i])).collect()
        } else {
            let phi = yv.map(|v| spec.activation.phi(v));
            let drive = w * phi + u;
            (0..n).map(|i| -spec.c_n * y[i] + drive[i]).collect()
        };

        let psi: Vec<f64> = y.iter().map(|&v| spec.synaptic_activation.phi(v)).collect();
        let ubar = self.ubar_at(t);
        // H_ij * (psi_i psi_j) keeps the Hebbian term bitwise symmetric when H is.
        let dw = DMatrix::from_fn(n, n, |i, j| {
            let decay = spec.c_s + spec.c_o * psi[i] * psi[i];
            self.h[(i, j)] * (psi[i] * psi[j]) - decay * w[(i, j)] + ubar[(i, j)]
        });
        Ok((dy, dw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{vector_field, ModelKind, Stimulus, SystemState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn pure_decay_without_coupling() {
        let spec = ModelSpec::new(ModelKind::HopfieldHebbian, 1.0, 2.5, 0.0, Stimulus::zero(3), Stimulus::zero(0)).unwrap();
        let model = DenseModel::new(spec, DMatrix::zeros(3, 3)).unwrap();
        let w = DMatrix::from_fn(3, 3, |i, j| (i as f64) - 2.0 * j as f64);
        let (_, dw) = model.vector_field(&[0.3, -0.2, 1.0], &w, 0.0).unwrap();
        assert_eq!(dw, -2.5 * w);
    }

    #[test]
    fn symmetric_premise_keeps_skew_derivative_zero() {
        let spec = ModelSpec::new(ModelKind::FiringRateHebbian, 1.0, 1.7, 0.0, Stimulus::zero(4), Stimulus::zero(0)).unwrap();
        let h = DMatrix::from_fn(4, 4, |i, j| ((i + j) as f64 * 0.37).sin());
        let model = DenseModel::new(spec, h).unwrap();
        let w = DMatrix::from_fn(4, 4, |i, j| ((i * j) as f64 * 0.21).cos());
        let (_, dw) = model.vector_field(&[0.3, -0.2, 1.0, 2.0], &w, 0.0).unwrap();
        let skew = (&dw - dw.transpose()) * 0.5;
        assert_eq!(skew.amax(), 0.0);
    }

    #[test]
    fn sparse_and_dense_agree_on_active_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for kind in ModelKind::ALL {
            for _ in 0..200 {
                let n = rng.gen_range(1..=6usize);
                let mut pairs = Vec::new();
                for i in 1..=n {
                    for j in 1..=n {
                        if pairs.len() < 10 && rng.gen_bool(0.4) {
                            pairs.push((i, j));
                        }
                    }
                }
                let m = pairs.len();
                let h: Vec<f64> = (0..m).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * rng.gen_range(0.1..1.0)).collect();
                let topo = Topology::new(n, &pairs, &h).unwrap();
                let u = Stimulus::new((0..n).map(|_| Signal::Sinusoid { amplitude: rng.gen_range(-5.0..5.0), omega: 2.0, phase: 0.3 }).collect()).unwrap();
                let ubar = Stimulus::new((0..m).map(|_| Signal::Constant(rng.gen_range(-1.0..1.0))).collect()).unwrap();
                let c_o = if kind.is_oja() { rng.gen_range(0.0..2.0) } else { 0.0 };
                let spec = ModelSpec::new(kind, rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0), c_o, u, ubar).unwrap();
                let state = SystemState::new(
                    (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                    (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                );
                let t = rng.gen_range(0.0..5.0);
                let sparse = vector_field(&topo, &spec, &state, t).unwrap();
                let dense_model = DenseModel::from_topology(&topo, &spec).unwrap();
                let w_dense = topo.reconstruct_adjacency(&state.w).unwrap();
                let (dy, dw) = dense_model.vector_field(&state.y, &w_dense, t).unwrap();
                for i in 0..n {
                    assert!(rel_close(sparse.y[i], dy[i], 1e-12), "{kind}: y[{i}] {} vs {}", sparse.y[i], dy[i]);
                }
                for (e, edge) in topo.edges().iter().enumerate() {
                    assert!(rel_close(sparse.w[e], dw[(edge.post, edge.pre)], 1e-12));
                }
            }
        }
    }
}
