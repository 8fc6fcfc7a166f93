use crate::dynamics::{ModelKind, ModelSpec};
use crate::error::Result;
use crate::topology::Topology;

/// Radii of the forward-invariant, attractive box for the neural and
/// synaptic states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub h_max: f64,
    pub d_max: f64,
    pub phi_max: f64,
    pub u_max: f64,
    pub ubar_max: f64,
    /// `d_max h_max phi_max^2`
    pub b_max: f64,
    /// `(h_max phi_max^2 + ubar_max) / c_s`
    pub w_max: f64,
    /// `(u_max + d_max phi_max w_max) / c_n`
    pub x_max: f64,
    /// `phi_max / c_n`
    pub nu_max: f64,
}

impl Bounds {
    /// Bound on `|y_i|`: `x_max` for Hopfield models, `nu_max` for
    /// firing-rate models.
    pub fn neural_max(&self, kind: ModelKind) -> f64 {
        if kind.is_firing_rate() {
            self.nu_max
        } else {
            self.x_max
        }
    }
}

pub fn compute_bounds(topo: &Topology, spec: &ModelSpec) -> Result<Bounds> {
    spec.validate(topo)?;
    let h_max = topo.h_max();
    let d_max = topo.max_in_degree() as f64;
    let phi_max = spec.phi_max();
    let u_max = spec.u.sup_bound();
    let ubar_max = spec.ubar.sup_bound();
    let w_max = (h_max * phi_max * phi_max + ubar_max) / spec.c_s;
    Ok(Bounds {
        h_max,
        d_max,
        phi_max,
        u_max,
        ubar_max,
        b_max: d_max * h_max * phi_max * phi_max,
        w_max,
        x_max: (u_max + d_max * phi_max * w_max) / spec.c_n,
        nu_max: phi_max / spec.c_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Signal, Stimulus};

    #[test]
    fn fig1_values() {
        let topo = Topology::new(
            6,
            &[(4, 1), (6, 1), (3, 2), (5, 2), (6, 3), (5, 4)],
            &[1.0, 1.0, 1.0, 1.0, -1.0, -1.0],
        )
        .unwrap();
        let mut u = vec![Signal::Zero; 6];
        u[0] = Signal::Sinusoid { amplitude: 20.0, omega: 8.0, phase: 0.0 };
        u[1] = Signal::Sinusoid { amplitude: 15.0, omega: 8.0, phase: std::f64::consts::FRAC_PI_2 };
        let mut ubar = vec![Signal::Constant(1.5); 4];
        ubar.extend([Signal::Zero, Signal::Zero]);
        let spec = ModelSpec::new(
            ModelKind::HopfieldHebbian,
            3.6,
            3.2,
            0.0,
            Stimulus::new(u).unwrap(),
            Stimulus::new(ubar).unwrap(),
        )
        .unwrap();
        let b = compute_bounds(&topo, &spec).unwrap();
        assert!((b.w_max - 0.78125).abs() < 1e-12);
        // (20 + 2 * 0.78125) / 3.6
        assert!((b.x_max - 5.989583333333333).abs() < 1e-12);
        assert_eq!(b.neural_max(ModelKind::HopfieldHebbian), b.x_max);
        assert_eq!(b.neural_max(ModelKind::FiringRateHebbian), 1.0 / 3.6);
        assert_eq!(b.b_max, 2.0);
    }

    #[test]
    fn zero_inputs_and_coupling() {
        let topo = Topology::new(3, &[], &[]).unwrap();
        let spec = ModelSpec::new(ModelKind::HopfieldHebbian, 2.0, 1.0, 0.0, Stimulus::zero(3), Stimulus::zero(0)).unwrap();
        let b = compute_bounds(&topo, &spec).unwrap();
        assert_eq!(b.w_max, 0.0);
        assert_eq!(b.x_max, 0.0);
        assert_eq!(b.nu_max, 0.5);
    }

    #[test]
    fn monotone_in_inputs() {
        let topo = Topology::new(2, &[(1, 2), (2, 1)], &[0.5, -0.3]).unwrap();
        let mut prev: Option<Bounds> = None;
        for k in 0..10 {
            let a = k as f64 * 0.5;
            let spec = ModelSpec::new(
                ModelKind::HopfieldOja,
                1.0,
                2.0,
                0.3,
                Stimulus::new(vec![Signal::Constant(a), Signal::Zero]).unwrap(),
                Stimulus::new(vec![Signal::Constant(a), Signal::Zero]).unwrap(),
            )
            .unwrap();
            let b = compute_bounds(&topo, &spec).unwrap();
            assert!(b.w_max >= 0.0 && b.x_max >= 0.0);
            if let Some(p) = prev {
                assert!(b.w_max >= p.w_max && b.x_max >= p.x_max);
            }
            prev = Some(b);
        }
    }
}
