use nalgebra::Matrix2;

use super::lognorm::{lognorm_inf, norm_inf, weighted_lognorm};
use crate::dynamics::{JacobianBlocks, ModelKind, ModelSpec};
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Scalar network and model constants entering the constant majorant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantParams {
    pub c_n: f64,
    pub c_s: f64,
    pub c_o: f64,
    pub phi_max: f64,
    pub h_max: f64,
    pub ubar_max: f64,
    pub d_max: f64,
}

impl MajorantParams {
    /// Constants of a concrete network. The neural stimulus does not enter.
    pub fn from_model(topo: &Topology, spec: &ModelSpec) -> Result<Self> {
        spec.validate(topo)?;
        Ok(Self {
            c_n: spec.c_n,
            c_s: spec.c_s,
            c_o: spec.c_o,
            phi_max: spec.phi_max(),
            h_max: topo.h_max(),
            ubar_max: spec.ubar.sup_bound(),
            d_max: topo.max_in_degree() as f64,
        })
    }

    pub fn validate(&self, kind: ModelKind) -> Result<()> {
        let check = |name: &str, v: f64, strict: bool| {
            let ok = v.is_finite() && if strict { v > 0.0 } else { v >= 0.0 };
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} = {v} out of range")))
            }
        };
        check("c_n", self.c_n, true)?;
        check("c_s", self.c_s, true)?;
        check("c_o", self.c_o, false)?;
        check("phi_max", self.phi_max, false)?;
        check("h_max", self.h_max, false)?;
        check("ubar_max", self.ubar_max, false)?;
        check("d_max", self.d_max, false)?;
        if !kind.is_oja() && self.c_o != 0.0 {
            return Err(Error::InvalidParams(format!("model {kind} requires c_o = 0")));
        }
        Ok(())
    }

    /// `w_max = (h_max phi_max^2 + ubar_max) / c_s`.
    pub fn w_max(&self) -> f64 {
        (self.h_max * self.phi_max * self.phi_max + self.ubar_max) / self.c_s
    }

    /// `b_max = d_max h_max phi_max^2`.
    pub fn b_max(&self) -> f64 {
        self.d_max * self.h_max * self.phi_max * self.phi_max
    }
}

/// Aggregate Metzler majorant of a block Jacobian with infinity-norm local
/// norms: `[[mu(J_nn), ||J_ns||], [||J_sn||, mu(J_ss)]]`.
pub fn aggregate_metzler_majorant(blocks: &JacobianBlocks) -> Result<Matrix2<f64>> {
    let JacobianBlocks { nn, ns, sn, ss } = blocks;
    if !nn.is_square() {
        return Err(Error::NonSquareDiagonalBlock {
            block: "J_nn",
            rows: nn.nrows(),
            cols: nn.ncols(),
        });
    }
    if !ss.is_square() {
        return Err(Error::NonSquareDiagonalBlock {
            block: "J_ss",
            rows: ss.nrows(),
            cols: ss.ncols(),
        });
    }
    let (n, m) = (nn.nrows(), ss.nrows());
    if ns.shape() != (n, m) || sn.shape() != (m, n) {
        return Err(Error::DimensionMismatch {
            what: "off-diagonal Jacobian blocks",
            expected: n * m,
            got: ns.nrows() * ns.ncols(),
        });
    }
    Ok(Matrix2::new(
        lognorm_inf(nn)?,
        norm_inf(ns),
        norm_inf(sn),
        lognorm_inf(ss)?,
    ))
}

/// Constant, state-independent upper bound on the aggregate Metzler
/// majorant over the forward-invariant set.
///
/// Common to all models: `(1,1) = d_max w_max - c_n`, `(2,2) = -c_s`.
/// Firing-rate models divide the `(1,2)` entry by `c_n`; Oja models add
/// `c_o w_max` inside the `(2,1)` entry.
pub fn majorant_bound(kind: ModelKind, params: &MajorantParams) -> Result<Matrix2<f64>> {
    params.validate(kind)?;
    let MajorantParams {
        c_n,
        c_s,
        c_o,
        phi_max,
        h_max,
        d_max,
        ..
    } = *params;
    let w_max = params.w_max();
    let top_right = if kind.is_firing_rate() {
        d_max * phi_max / c_n
    } else {
        d_max * phi_max
    };
    let bottom_left = if kind.is_oja() {
        2.0 * phi_max * (h_max + c_o * w_max)
    } else {
        2.0 * h_max * phi_max
    };
    Ok(Matrix2::new(d_max * w_max - c_n, top_right, bottom_left, -c_s))
}

/// Upper bound on the composite log norm of a block Jacobian: the weighted
/// log norm of its aggregate Metzler majorant.
pub fn composite_lognorm_bound(blocks: &JacobianBlocks, eta: &[f64], p: f64) -> Result<f64> {
    let agg = aggregate_metzler_majorant(blocks)?;
    weighted_lognorm(&agg, eta, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

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
    fn hopfield_hebbian_bound_on_fig1() {
        let m = majorant_bound(ModelKind::HopfieldHebbian, &fig1_params()).unwrap();
        // d_max (h_max + ubar_max) / c_s - c_n = 2 * 2.5 / 3.2 - 3.6
        assert!((m[(0, 0)] - (-2.0375)).abs() < 1e-14);
        assert_eq!(m[(0, 1)], 2.0);
        assert_eq!(m[(1, 0)], 2.0);
        assert_eq!(m[(1, 1)], -3.2);
        // determinant equals c_n c_s - 3 b_max - d_max ubar_max = 2.52
        assert!((m.determinant() - 2.52).abs() < 1e-12);
    }

    #[test]
    fn decoupled_limit() {
        let p = MajorantParams {
            h_max: 0.0,
            ubar_max: 0.0,
            ..fig1_params()
        };
        let m = majorant_bound(ModelKind::HopfieldHebbian, &p).unwrap();
        assert_eq!(m, Matrix2::new(-3.6, 2.0, 0.0, -3.2));
    }

    #[test]
    fn model_variants() {
        let p = MajorantParams {
            c_o: 0.5,
            ..fig1_params()
        };
        let w_max = p.w_max();
        let fo = majorant_bound(ModelKind::FiringRateOja, &p).unwrap();
        assert_eq!(fo[(0, 1)], 2.0 / 3.6);
        assert_eq!(fo[(1, 0)], 2.0 * (1.0 + 0.5 * w_max));
        let ho = majorant_bound(ModelKind::HopfieldOja, &p).unwrap();
        assert_eq!(ho[(0, 1)], 2.0);
        assert!(majorant_bound(ModelKind::HopfieldHebbian, &p).is_err());
        let bad = MajorantParams { c_s: 0.0, ..fig1_params() };
        assert!(majorant_bound(ModelKind::HopfieldHebbian, &bad).is_err());
    }

    #[test]
    fn aggregate_of_block_diagonal() {
        let blocks = JacobianBlocks {
            nn: DMatrix::from_row_slice(2, 2, &[-3.0, 1.0, -0.5, -2.0]),
            ns: DMatrix::zeros(2, 3),
            sn: DMatrix::zeros(3, 2),
            ss: DMatrix::from_diagonal_element(3, 3, -4.0),
        };
        let agg = aggregate_metzler_majorant(&blocks).unwrap();
        assert_eq!(agg, Matrix2::new(-1.5, 0.0, 0.0, -4.0));
        let bound = composite_lognorm_bound(&blocks, &[1.0, 1.0], f64::INFINITY).unwrap();
        assert_eq!(bound, -1.5);
    }

    #[test]
    fn aggregate_rejects_bad_blocks() {
        let blocks = JacobianBlocks {
            nn: DMatrix::zeros(2, 3),
            ns: DMatrix::zeros(2, 1),
            sn: DMatrix::zeros(1, 2),
            ss: DMatrix::zeros(1, 1),
        };
        assert!(matches!(
            aggregate_metzler_majorant(&blocks),
            Err(Error::NonSquareDiagonalBlock { block: "J_nn", .. })
        ));
    }
}
