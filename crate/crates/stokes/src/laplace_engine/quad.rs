//! Globally adaptive Gauss-Kronrod (7, 15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: C,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: FnMut(f64) -> Result<C>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx)? + f(mid + dx)?;
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).norm() + 50.0 * f64::EPSILON * value.norm();
    Ok(Panel { a, b, value, err })
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Integral {
    pub value: C,
    pub err: f64,
}

/// Integrate over the consecutive intervals defined by `nodes`, refining the
/// worst panel until the summed error estimate is below `tol_abs(value, mass)`,
/// where `mass` is the sum of the panel magnitudes.
pub(crate) fn integrate<F: FnMut(f64) -> Result<C>>(
    mut f: F,
    nodes: &[f64],
    tol_abs: impl Fn(C, f64) -> f64,
    max_panels: usize,
) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    for w in nodes.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(&mut f, w[0], w[1])?);
        }
    }
    loop {
        let (value, err, mass) =
            heap.iter().fold((C::new(0.0, 0.0), 0.0, 0.0), |(v, e, m), p| (v + p.value, e + p.err, m + p.value.norm()));
        let tol = tol_abs(value, mass);
        if err <= tol {
            return Ok(Integral { value, err });
        }
        if heap.len() >= max_panels {
            return Err(Error::QuadratureFailure { est_error: err, tol });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::QuadratureFailure { est_error: err, tol });
        }
        heap.push(gk15(&mut f, worst.a, m)?);
        heap.push(gk15(&mut f, m, worst.b)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|t| Ok(C::new(t * t * t, 2.0 * t)), &[0.0, 2.0], |_, _| 1e-12, 10).unwrap();
        assert!((r.value - C::new(4.0, 4.0)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_exponential() {
        // int_0^20 e^{-(1+5i)t} dt
        let w = C::new(1.0, 5.0);
        let r = integrate(|t| Ok((-w * t).exp()), &[0.0, 20.0], |_, _| 1e-13, 500).unwrap();
        let exact = (1.0 - (-w * 20.0).exp()) / w;
        assert!((r.value - exact).norm() < 1e-13);
        assert!(r.err >= (r.value - exact).norm());
    }

    #[test]
    fn endpoint_singularity_converges() {
        let r = integrate(|t| Ok(C::new(t.sqrt(), 0.0)), &[0.0, 1.0], |_, _| 1e-10, 2000).unwrap();
        assert!((r.value.re - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn panel_budget_is_enforced() {
        let e = integrate(|t| Ok(C::new(1.0 / t.abs().max(1e-300).sqrt(), 0.0)), &[-1.0, 1.0], |_, _| 1e-15, 4);
        assert!(matches!(e, Err(Error::QuadratureFailure { .. })));
    }
}
