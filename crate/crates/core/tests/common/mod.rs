#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use neurosyn::dynamics::{ModelKind, ModelSpec, Signal, Stimulus};
use neurosyn::Topology;

/// Six-neuron feedforward network driven by two sinusoids.
pub fn feedforward() -> (Topology, ModelSpec) {
    let topo = Topology::new(
        6,
        &[(4, 1), (6, 1), (3, 2), (5, 2), (6, 3), (5, 4)],
        &[1.0, 1.0, 1.0, 1.0, -1.0, -1.0],
    )
    .unwrap();
    let mut u = vec![Signal::Zero; 6];
    u[0] = Signal::Sinusoid {
        amplitude: 20.0,
        omega: 8.0,
        phase: 0.0,
    };
    u[1] = Signal::Sinusoid {
        amplitude: 15.0,
        omega: 8.0,
        phase: FRAC_PI_2,
    };
    let ubar = (0..6)
        .map(|e| if e < 4 { Signal::Constant(1.5) } else { Signal::Zero })
        .collect();
    let spec = ModelSpec::new(
        ModelKind::HopfieldHebbian,
        3.6,
        3.2,
        0.0,
        Stimulus::new(u).unwrap(),
        Stimulus::new(ubar).unwrap(),
    )
    .unwrap();
    (topo, spec)
}

/// The feedforward network with three recurrent edges and ramp inputs.
pub fn recurrent() -> (Topology, ModelSpec) {
    let topo = Topology::new(
        6,
        &[(4, 1), (6, 1), (3, 2), (5, 2), (6, 3), (5, 4), (2, 4), (1, 5), (3, 6)],
        &[1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0, 1.0],
    )
    .unwrap();
    let mut u = vec![Signal::Zero; 6];
    u[0] = Signal::TanhRamp { amplitude: 5.0 };
    u[1] = Signal::TanhRamp { amplitude: 3.0 };
    u[3] = Signal::TanhRamp { amplitude: 7.0 };
    let ubar = [1.5, 1.0, 1.0, 1.5, 0.0, 0.0, 0.0, 0.0, 1.0]
        .iter()
        .map(|&v| if v == 0.0 { Signal::Zero } else { Signal::Constant(v) })
        .collect();
    let spec = ModelSpec::new(
        ModelKind::HopfieldHebbian,
        3.6,
        3.2,
        0.0,
        Stimulus::new(u).unwrap(),
        Stimulus::new(ubar).unwrap(),
    )
    .unwrap();
    (topo, spec)
}
