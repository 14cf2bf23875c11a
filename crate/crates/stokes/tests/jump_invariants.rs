mod common;

use common::*;
use stokes::formal_model::Parameters;
use stokes::laplace_engine::{actual_fundamental, QuadConfig, Ray};
use stokes::stokes_core::{singular_directions, stokes_matrices, STOKES_ENTRY};
use stokes::verify::{jump_samples, measure_direction, DEFAULT_EPS};

#[test]
fn halving_eps_keeps_the_measurement() {
    let cfg = QuadConfig::default().with_tol(1e-12);
    for (name, p) in case_sets().into_iter().take(4) {
        let th = singular_directions(&p);
        for k in [0, 2] {
            let entry = STOKES_ENTRY[k];
            let xs = jump_samples(th[k], p.beta[entry.0] - p.beta[entry.1], 5);
            let (wide, _) = measure_direction(&p, th[k], entry, DEFAULT_EPS, &xs, &cfg).unwrap();
            let (narrow, _) = measure_direction(&p, th[k], entry, DEFAULT_EPS / 2.0, &xs, &cfg).unwrap();
            let diff = (wide.measured_mu - narrow.measured_mu).norm();
            let noise = wide.noise + narrow.noise;
            assert!(diff <= 3.0 * noise, "{name} direction {k}: {diff:e} vs {noise:e}");
        }
    }
}

#[test]
fn third_direction_jump_of_phi13_is_mu3_phi12() {
    let cfg = QuadConfig::default().with_tol(1e-12);
    let p = Parameters::canonical();
    let data = stokes_matrices(&p).unwrap();
    let theta = data.theta[2];
    for x in jump_samples(theta, p.beta[1] - p.beta[2], 5) {
        let minus = actual_fundamental(&p, [Ray::new(theta - DEFAULT_EPS); 3], x, &cfg).unwrap();
        let plus = actual_fundamental(&p, [Ray::new(theta + DEFAULT_EPS); 3], x, &cfg).unwrap();
        let jump = minus[0][2] - plus[0][2];
        let expected = data.mu[2] * plus[0][1];
        assert!((jump - expected).norm() <= 1e-8 * expected.norm(), "{jump} vs {expected}");
        assert!((minus[0][1] - plus[0][1]).norm() <= 1e-10 * plus[0][1].norm());
    }
}
