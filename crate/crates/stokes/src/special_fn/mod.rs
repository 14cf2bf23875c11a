//! Complex Gamma, reciprocal Gamma, rising factorials and the Gauss
//! hypergeometric function with its connection formulas.

mod gamma;
mod hyp;
mod path;

pub use gamma::{gamma, recip_gamma, recip_gamma_tol, rising_factorial};
pub use hyp::{hyp2f1, hyp2f1_one_sided, hyp2f1_polynomial, hyp2f1_series, hyp2f1_via, HypParams, Route, Side};
pub use path::{hyp2f1_continued, HypPath};

use num_complex::Complex64;

/// Default tolerance of the integer gate.
pub const DEFAULT_INT_TOL: f64 = 1e-9;

/// The integer `k` with `|z - k| <= tol`, if any.
pub fn nearest_integer(z: Complex64, tol: f64) -> Option<i64> {
    let k = z.re.round();
    if (z.re - k).abs() <= tol && z.im.abs() <= tol {
        Some(k as i64)
    } else {
        None
    }
}

/// Principal power `w^s` with `0^s = 0` for `Re s > 0` and `w^0 = 1`.
pub fn cpow(w: Complex64, s: Complex64) -> Complex64 {
    if s == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0, 0.0);
    }
    if w == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    (s * w.ln()).exp()
}
