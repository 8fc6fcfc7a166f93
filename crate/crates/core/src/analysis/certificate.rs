//! Closed-form contraction certificates for the four models.
//!
//! Each model yields a constant `2 x 2` Metzler majorant `J` of the
//! aggregated Jacobian. The system is certified when `J` is Hurwitz, which
//! for these matrices reduces to the scalar test
//!
//! ```text
//! c_n c_s > rhs(model)
//! ```
//!
//! and the certified rate is `-alpha(J)`. Writing the characteristic
//! polynomial as `s^2 + (c~ + g)/c_s s + g` with `g = c_n c_s - rhs`, the
//! rate is the smaller root magnitude
//!
//! ```text
//! lambda = (c~ + g - sqrt((c~ + g)^2 - 4 g c_s^2)) / (2 c_s)
//!        = 2 g c_s / (c~ + g + sqrt((c~ + g)^2 - 4 g c_s^2)).
//! ```
//!
//! The second form is the one evaluated; it avoids cancellation when `g`
//! is small.

use nalgebra::Matrix2;

use super::eta::compute_eta;
use super::lognorm::is_irreducible;
use super::majorant::{majorant_bound, MajorantParams};
use crate::dynamics::{ModelKind, ModelSpec};
use crate::error::Result;
use crate::topology::Topology;

/// Perturbation used for the Perron weights when the majorant is reducible.
pub const REDUCIBLE_DELTA: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: ModelKind,
    pub params: MajorantParams,
    /// Constant majorant of the aggregated Jacobian.
    pub majorant: Matrix2<f64>,
    /// `c_n c_s`
    pub condition_lhs: f64,
    pub condition_rhs: f64,
    pub satisfied: bool,
    /// Certified contraction rate; `None` when not satisfied.
    pub rate: Option<f64>,
    pub c_tilde: f64,
    /// `condition_lhs - condition_rhs`, the majorant's determinant.
    pub g: f64,
    /// Norm weights for the aggregating norm.
    pub eta: [f64; 2],
    /// Aggregating norm exponent.
    pub p: f64,
    /// Perturbation used to compute `eta` (zero when the majorant is irreducible).
    pub delta: f64,
}

/// Right-hand side of the model's contractivity test and the constant `c~`.
fn condition_terms(kind: ModelKind, params: &MajorantParams) -> (f64, f64) {
    let MajorantParams {
        c_n,
        c_s,
        c_o,
        phi_max,
        d_max,
        ubar_max,
        ..
    } = *params;
    let b = params.b_max();
    let stim = d_max * ubar_max;
    let phi2 = phi_max * phi_max;
    let (coupling, spread) = if kind.is_firing_rate() {
        (b * (1.0 + 2.0 / c_n), 2.0 * b / c_n)
    } else {
        (3.0 * b, 2.0 * b)
    };
    let oja = if kind.is_oja() {
        let ratio = if kind.is_firing_rate() { c_o / (c_s * c_n) } else { c_o / c_s };
        2.0 * ratio * phi2 * (b + stim)
    } else {
        0.0
    };
    let rhs = coupling + stim + oja;
    let c_tilde = c_s * c_s + spread + oja;
    (rhs, c_tilde)
}

/// Certificate from scalar constants alone.
pub fn certify_params(kind: ModelKind, params: &MajorantParams, p: f64) -> Result<Certificate> {
    let majorant = majorant_bound(kind, params)?;
    let (condition_rhs, c_tilde) = condition_terms(kind, params);
    let condition_lhs = params.c_n * params.c_s;
    let g = condition_lhs - condition_rhs;
    let c_s = params.c_s;
    let sum = c_tilde + g;
    let disc = sum * sum - 4.0 * g * c_s * c_s;

    // a negative discriminant can only come from rounding at the boundary
    let satisfied = condition_lhs > condition_rhs && disc >= 0.0;
    let rate = satisfied.then(|| 2.0 * g * c_s / (sum + disc.sqrt()));

    let delta = if is_irreducible(&majorant) { 0.0 } else { REDUCIBLE_DELTA };
    let eta = compute_eta(&majorant, p, delta)?;

    Ok(Certificate {
        kind,
        params: *params,
        majorant,
        condition_lhs,
        condition_rhs,
        satisfied,
        rate,
        c_tilde,
        g,
        eta: [eta[0], eta[1]],
        p,
        delta,
    })
}

/// Certificate for a concrete network with the default aggregating norm
/// (`p = inf`).
pub fn certify(topo: &Topology, spec: &ModelSpec) -> Result<Certificate> {
    certify_with_exponent(topo, spec, f64::INFINITY)
}

pub fn certify_with_exponent(topo: &Topology, spec: &ModelSpec, p: f64) -> Result<Certificate> {
    let params = MajorantParams::from_model(topo, spec)?;
    certify_params(spec.kind, &params, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lognorm::{spectral_abscissa, weighted_lognorm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig1_params() -> MajorantParams {
        MajorantParams {
            c_n: 3.6,
            c_s: 3.2,
            c_o: 0.0,
            phi_max: 1.0,
            h_max: 1.0,
            ubar_max: 1.5,
            d_max: 2.0,
        }
    }

    #[test]
    fn fig1_rate() {
        let cert = certify_params(ModelKind::HopfieldHebbian, &fig1_params(), f64::INFINITY).unwrap();
        assert!(cert.satisfied);
        assert_eq!(cert.condition_rhs, 9.0);
        assert!((cert.condition_lhs - 11.52).abs() < 1e-12);
        // c~ = 14.24, g = 2.52 -> lambda = (16.76 - sqrt(177.6784)) / 6.4
        let expected = (16.76 - 177.6784f64.sqrt()) / 6.4;
        let rate = cert.rate.unwrap();
        assert!((rate - expected).abs() < 1e-12);
        assert!((rate - 0.536).abs() < 0.005);
        assert!((weighted_lognorm(&cert.majorant, &cert.eta, f64::INFINITY).unwrap() + rate).abs() < 1e-9);
        assert_eq!(cert.delta, 0.0);
    }

    #[test]
    fn decoupled_rate_is_min_decay() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let c_n = rng.gen_range(0.1..5.0);
            let c_s = rng.gen_range(0.1..5.0);
            let params = MajorantParams {
                c_n,
                c_s,
                h_max: 0.0,
                ubar_max: 0.0,
                ..fig1_params()
            };
            for kind in [ModelKind::HopfieldHebbian, ModelKind::FiringRateHebbian] {
                let cert = certify_params(kind, &params, f64::INFINITY).unwrap();
                assert!(cert.satisfied);
                assert!((cert.rate.unwrap() - c_n.min(c_s)).abs() < 1e-12);
                assert_eq!(cert.delta, REDUCIBLE_DELTA);
            }
        }
    }

    #[test]
    fn rate_vanishes_at_boundary() {
        let base = fig1_params();
        let (rhs, _) = condition_terms(ModelKind::HopfieldHebbian, &base);
        let rates: Vec<f64> = [1.0, 0.1, 0.01]
            .iter()
            .map(|eps| {
                let params = MajorantParams {
                    c_n: (rhs + eps) / base.c_s,
                    ..base
                };
                certify_params(ModelKind::HopfieldHebbian, &params, f64::INFINITY).unwrap().rate.unwrap()
            })
            .collect();
        assert!(rates[0] > rates[1] && rates[1] > rates[2] && rates[2] > 0.0, "{rates:?}");
        assert!(rates[2] < 1e-2);
        let at = MajorantParams { c_n: rhs / base.c_s, ..base };
        let cert = certify_params(ModelKind::HopfieldHebbian, &at, f64::INFINITY).unwrap();
        assert!(!cert.satisfied && cert.rate.is_none());
    }

    #[test]
    fn fig1_with_slow_neurons_fails() {
        let params = MajorantParams { c_n: 1.0, ..fig1_params() };
        let cert = certify_params(ModelKind::HopfieldHebbian, &params, f64::INFINITY).unwrap();
        assert!(!cert.satisfied);
        assert!(cert.condition_lhs < cert.condition_rhs);
    }

    #[test]
    fn hebbian_tests_coincide_at_unit_neural_decay() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let params = MajorantParams {
                c_n: 1.0,
                c_s: rng.gen_range(0.1..10.0),
                h_max: rng.gen_range(0.0..2.0),
                ubar_max: rng.gen_range(0.0..2.0),
                d_max: rng.gen_range(0..5) as f64,
                ..fig1_params()
            };
            let hh = certify_params(ModelKind::HopfieldHebbian, &params, f64::INFINITY).unwrap();
            let fh = certify_params(ModelKind::FiringRateHebbian, &params, f64::INFINITY).unwrap();
            assert!((hh.condition_rhs - fh.condition_rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn condition_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let c_n = rng.gen_range(0.1..5.0);
            let hebb = MajorantParams {
                c_n,
                c_s: rng.gen_range(0.1..5.0),
                c_o: 0.0,
                phi_max: rng.gen_range(0.1..2.0),
                h_max: rng.gen_range(0.01..2.0),
                ubar_max: rng.gen_range(0.0..2.0),
                d_max: rng.gen_range(1..6) as f64,
            };
            let oja = MajorantParams {
                c_o: rng.gen_range(0.01..3.0),
                ..hebb
            };
            let rhs = |k, p: &MajorantParams| condition_terms(k, p).0;
            assert!(rhs(ModelKind::HopfieldOja, &oja) >= rhs(ModelKind::HopfieldHebbian, &hebb));
            assert!(rhs(ModelKind::FiringRateOja, &oja) >= rhs(ModelKind::FiringRateHebbian, &hebb));
            let (hh, fh) = (rhs(ModelKind::HopfieldHebbian, &hebb), rhs(ModelKind::FiringRateHebbian, &hebb));
            if c_n > 1.0 {
                assert!(fh < hh);
            } else if c_n < 1.0 {
                assert!(fh > hh);
            }
        }
    }

    #[test]
    fn closed_form_matches_determinant_and_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in ModelKind::ALL {
            for _ in 0..300 {
                let params = MajorantParams {
                    c_n: rng.gen_range(0.2..6.0),
                    c_s: rng.gen_range(0.2..6.0),
                    c_o: if kind.is_oja() { rng.gen_range(0.0..2.0) } else { 0.0 },
                    phi_max: rng.gen_range(0.2..1.5),
                    h_max: rng.gen_range(0.0..1.5),
                    ubar_max: rng.gen_range(0.0..2.0),
                    d_max: rng.gen_range(0..4) as f64,
                };
                let cert = certify_params(kind, &params, f64::INFINITY).unwrap();
                let j = cert.majorant;
                assert!((j.determinant() - cert.g).abs() < 1e-9 * (1.0 + cert.g.abs()));
                assert!((j.trace() + (cert.c_tilde + cert.g) / params.c_s).abs() < 1e-9 * (1.0 + j.trace().abs()));
                let alpha = spectral_abscissa(&j).unwrap();
                assert_eq!(cert.satisfied, alpha < 0.0);
                if let Some(rate) = cert.rate {
                    assert!((rate + alpha).abs() < 1e-10, "{kind}: {rate} vs {alpha}");
                }
            }
        }
    }
}
