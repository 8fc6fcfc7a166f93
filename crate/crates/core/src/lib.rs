//! Coupled neural-synaptic networks in sparse incidence form.
//!
//! Four models are supported: Hopfield or firing-rate neurons, each paired
//! with Hebbian or Oja plasticity. The crate evaluates their vector fields
//! and Jacobians, computes forward-invariant bounds and closed-form
//! contraction certificates, and integrates trajectories with monitors.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod simulate;
pub mod topology;

pub use error::{Error, Result};
pub use topology::{Edge, Topology};
