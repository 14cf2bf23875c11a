#![allow(dead_code)]

use num_complex::Complex64;
use stokes::formal_model::Parameters;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn beta_canonical() -> [C; 3] {
    [c(0.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)]
}

/// Order-by-order solve of `x^2 H' + (a x + c) H = x^2 G` at `x = 0`:
/// `c h_n = g_{n-2} - (n - 1 + a) h_{n-1}`.
pub fn recurrence(a: C, cc: C, g: &[C], n: usize) -> Vec<C> {
    let mut h = vec![C::new(0.0, 0.0); n + 1];
    for k in 0..=n {
        let gk = if k >= 2 { g.get(k - 2).copied().unwrap_or_default() } else { C::new(0.0, 0.0) };
        let prev = if k >= 1 { h[k - 1] } else { C::new(0.0, 0.0) };
        h[k] = (gk - (k as f64 - 1.0 + a) * prev) / cc;
    }
    h
}

/// `(H12, H23, H13)` from substituting `H x^Lambda e^{-Q/x}` into the system.
pub fn recurrence_oracle(p: &Parameters, n: usize) -> (Vec<C>, Vec<C>, Vec<C>) {
    let one = [C::new(1.0, 0.0)];
    let h12 = recurrence(p.da(1, 2), p.db(1, 2), &one, n);
    let h23 = recurrence(p.da(2, 3), p.db(2, 3), &one, n);
    let h13 = recurrence(p.da(1, 3), p.db(1, 3), &h23, n);
    (h12, h23, h13)
}

/// Parameter sets covering every non-excluded case of the formal solution.
pub fn case_sets() -> Vec<(&'static str, Parameters)> {
    let b = beta_canonical();
    let eq = [c(0.0, 0.0), c(3.0, 0.0), c(1.5, 1.0)];
    vec![
        ("generic", Parameters::canonical()),
        ("generic-complex", Parameters::new([c(0.1, 0.2), c(0.35, -0.1), c(-0.4, 0.3)], b)),
        ("a3-a2=-2", Parameters::real_alpha([0.0, 0.3, -1.7], b)),
        ("a3-a2=-3", Parameters::real_alpha([0.0, 0.3, -2.7], b)),
        ("a3-a2=0,a2-a1=-2", Parameters::real_alpha([0.0, -2.0, -2.0], b)),
        ("a3-a2=-1,a2-a1=-2", Parameters::real_alpha([0.0, -2.0, -3.0], b)),
        ("a2-a1=-3,a3-a2 generic", Parameters::real_alpha([0.0, -3.0, -2.5], b)),
        ("shifted generic", Parameters::real_alpha([0.0, -2.5, -3.25], b)),
        ("a3-a1=-4,a3-a2 generic", Parameters::real_alpha([0.0, 0.5, -4.0], b)),
        ("a3-a1=-5,a2-a1=1", Parameters::real_alpha([0.0, 1.0, -5.0], b)),
        ("a3-a1=-4,a2-a1=-1", Parameters::real_alpha([0.0, -1.0, -4.0], b)),
        ("a3-a1=-4,a3-a2=1", Parameters::real_alpha([0.0, -5.0, -4.0], b)),
        ("both pairs integer", Parameters::real_alpha([0.0, -3.0, -5.0], b)),
        ("equal modulus", Parameters::new([c(0.0, 0.0), c(0.25, 0.0), c(-0.5, 0.0)], eq)),
        ("other beta", Parameters::real_alpha([0.0, 0.25, -0.5], [c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)])),
    ]
}

pub fn rel_err(a: C, b: C) -> f64 {
    let d = (a - b).norm();
    if b.norm() > 0.0 {
        d / b.norm()
    } else {
        d
    }
}
