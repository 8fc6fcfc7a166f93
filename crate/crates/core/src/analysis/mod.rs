//! Log norms, Perron weights, constant majorants, invariant-set bounds and
//! contraction certificates.

mod bounds;
mod certificate;
mod eta;
mod lognorm;
mod majorant;

pub use bounds::{compute_bounds, Bounds};
pub use certificate::{certify, certify_params, certify_with_exponent, Certificate, REDUCIBLE_DELTA};
pub use eta::{compute_eta, dominant_eigenvectors};
pub use lognorm::{is_irreducible, is_metzler, lognorm_inf, metzler_majorant, norm_inf, spectral_abscissa, weighted_lognorm};
pub use majorant::{aggregate_metzler_majorant, composite_lognorm_bound, majorant_bound, MajorantParams};
