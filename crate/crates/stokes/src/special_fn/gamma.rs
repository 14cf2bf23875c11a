use std::f64::consts::PI;

use num_complex::Complex64;

use super::{nearest_integer, DEFAULT_INT_TOL};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128, n = 15.
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// `a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn rising_factorial(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

fn is_pole(z: Complex64, tol: f64) -> bool {
    matches!(nearest_integer(z, tol), Some(k) if k <= 0)
}

/// `sin(pi z)` with the real part reduced exactly before scaling.
fn sin_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = Complex64::new(z.re - k, z.im);
    let s = (r * PI).sin();
    if (k as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

/// `ln Gamma(z)` for `Re z >= 0.5` (principal branch of the Lanczos form).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Euler Gamma function on the complex plane.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z, DEFAULT_INT_TOL) {
        return Err(Error::PoleError(format!("{z}")));
    }
    if z.re < 0.5 {
        let g = ln_gamma_right(1.0 - z).exp();
        Ok(PI / (sin_pi(z) * g))
    } else {
        if z.im == 0.0 && z.re == z.re.round() && z.re <= 171.0 {
            let mut f = 1.0;
            for k in 2..(z.re as u64) {
                f *= k as f64;
            }
            return Ok(Complex64::new(f, 0.0));
        }
        Ok(ln_gamma_right(z).exp())
    }
}

/// `1/Gamma(z)`, exactly zero at the poles.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    recip_gamma_tol(z, DEFAULT_INT_TOL)
}

pub fn recip_gamma_tol(z: Complex64, tol: f64) -> Complex64 {
    if is_pole(z, tol) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        sin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}
