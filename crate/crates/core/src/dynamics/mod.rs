//! Activation functions, stimuli, and the four coupled neural-synaptic
//! vector fields with their Jacobians.

mod activation;
mod dense;
mod field;
mod model;
mod stimulus;

pub use activation::Activation;
pub use dense::DenseModel;
pub use field::{jacobian, vector_field, JacobianBlocks};
pub(crate) use field::eval as eval_field;
pub use model::{ModelKind, ModelSpec, SystemState};
pub use stimulus::{Signal, Stimulus};
