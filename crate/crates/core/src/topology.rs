//! Sparse synaptic topology.
//!
//! A network of `n` neurons and `m` synapses is stored as an ordered edge
//! list. Edge `e` carries the synapse from a pre-synaptic neuron `pre` to a
//! post-synaptic neuron `post`, i.e. it is the entry `W[post, pre]` of the
//! dense weight matrix. The in-incidence matrix `B_in` marks the post
//! endpoint of each edge and the out-incidence matrix `B_out` marks the pre
//! endpoint, so that
//!
//! ```text
//! W = B_in diag(w) B_out^T,   (B_out^T x)_e = x[pre],   (B_in^T x)_e = x[post].
//! ```
//!
//! The incidence matrices are never materialized except through the
//! `*_dense` debug helpers.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A synapse, stored with 0-based neuron indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub post: usize,
    pub pre: usize,
}

/// Immutable network topology with per-edge Hebbian coupling coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    n: usize,
    edges: Vec<Edge>,
    h: Vec<f64>,
}

impl Topology {
    /// Builds a topology from 1-based `(post, pre)` pairs and their coupling
    /// coefficients.
    pub fn new(n: usize, edges: &[(usize, usize)], h: &[f64]) -> Result<Self> {
        if edges.len() != h.len() {
            return Err(Error::DimensionMismatch {
                what: "coupling coefficients",
                expected: edges.len(),
                got: h.len(),
            });
        }
        let mut seen: HashMap<Edge, usize> = HashMap::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        for (e, (&(post, pre), &coeff)) in edges.iter().zip(h).enumerate() {
            for index in [post, pre] {
                if index == 0 || index > n {
                    return Err(Error::IndexOutOfRange {
                        edge: e + 1,
                        index,
                        n,
                    });
                }
            }
            let edge = Edge {
                post: post - 1,
                pre: pre - 1,
            };
            if let Some(&first) = seen.get(&edge) {
                return Err(Error::DuplicateEdge {
                    edge: e + 1,
                    first: first + 1,
                    post,
                    pre,
                });
            }
            if coeff == 0.0 || !coeff.is_finite() {
                return Err(Error::ZeroCoefficient { edge: e + 1 });
            }
            seen.insert(edge, e);
            stored.push(edge);
        }
        Ok(Self {
            n,
            edges: stored,
            h: h.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// `h_max = max_e |h_e|`, zero for an empty graph.
    pub fn h_max(&self) -> f64 {
        self.h.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// The same edge list with every coefficient multiplied by `scale`.
    pub fn with_scaled_coupling(&self, scale: f64) -> Result<Self> {
        let pairs = self.one_based_edges();
        let h: Vec<f64> = self.h.iter().map(|v| v * scale).collect();
        Self::new(self.n, &pairs, &h)
    }

    /// Edge list as 1-based `(post, pre)` pairs.
    pub fn one_based_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.post + 1, e.pre + 1)).collect()
    }

    /// `(B_out^T x)_e = x[pre_e]`.
    pub fn gather_pre(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_neurons(x, "neuron vector")?;
        Ok(self.edges.iter().map(|e| x[e.pre]).collect())
    }

    /// `(B_in^T x)_e = x[post_e]`.
    pub fn gather_post(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_neurons(x, "neuron vector")?;
        Ok(self.edges.iter().map(|e| x[e.post]).collect())
    }

    /// `B_in diag(w) B_out^T v`, accumulated edge by edge in edge-list order:
    /// `out[post_e] += w_e * v[pre_e]`.
    pub fn apply_weighted(&self, w: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        self.check_edges(w, "edge weights")?;
        self.check_neurons(v, "neuron vector")?;
        let mut out = vec![0.0; self.n];
        self.accumulate_weighted(w, v, &mut out);
        Ok(out)
    }

    /// Unchecked kernel of [`apply_weighted`](Self::apply_weighted); adds into `out`.
    pub(crate) fn accumulate_weighted(&self, w: &[f64], v: &[f64], out: &mut [f64]) {
        for (e, edge) in self.edges.iter().enumerate() {
            out[edge.post] += w[e] * v[edge.pre];
        }
    }

    /// Dense `n x n` adjacency with `W[post_e, pre_e] = w_e`.
    pub fn reconstruct_adjacency(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        self.check_edges(w, "edge weights")?;
        let mut out = DMatrix::zeros(self.n, self.n);
        for (edge, &value) in self.edges.iter().zip(w) {
            out[(edge.post, edge.pre)] = value;
        }
        Ok(out)
    }

    /// Dense coupling matrix `H`.
    pub fn coupling_matrix(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (edge, &value) in self.edges.iter().zip(&self.h) {
            out[(edge.post, edge.pre)] = value;
        }
        out
    }

    /// Number of incoming synapses of each neuron (row sums of `B_in`).
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for edge in &self.edges {
            deg[edge.post] += 1;
        }
        deg
    }

    /// Number of outgoing synapses of each neuron (row sums of `B_out`).
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for edge in &self.edges {
            deg[edge.pre] += 1;
        }
        deg
    }

    /// `d_max = ||B_in||_inf`, the maximum topological in-degree.
    pub fn max_in_degree(&self) -> usize {
        self.in_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_degrees().into_iter().max().unwrap_or(0)
    }

    /// Dense `n x m` in-incidence matrix. Debug and test use only.
    pub fn b_in_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.m());
        for (e, edge) in self.edges.iter().enumerate() {
            out[(edge.post, e)] = 1.0;
        }
        out
    }

    /// Dense `n x m` out-incidence matrix. Debug and test use only.
    pub fn b_out_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.m());
        for (e, edge) in self.edges.iter().enumerate() {
            out[(edge.pre, e)] = 1.0;
        }
        out
    }

    pub(crate) fn check_neurons(&self, x: &[f64], what: &'static str) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_edges(&self, w: &[f64], what: &'static str) -> Result<()> {
        if w.len() != self.m() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.m(),
                got: w.len(),
            });
        }
        Ok(())
    }
}
