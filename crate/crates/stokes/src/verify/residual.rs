//! Residual of `L3 L2 L1 y = 0` by finite differences.
//!
//! A column `y = x^a e^{-b/x} h(x)` is checked through the conjugated operators
//! `L~_k = d/dx - ((a_k - a)/x + (b_k - b)/x^2)` acting on the smooth factor `h`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::formal_model::Parameters;
use crate::laplace_engine::{actual_h, QuadConfig, Ray};

type C = Complex64;

pub const FD_STEP: f64 = 5e-4;

struct Jet {
    d0: C,
    d1: C,
    d2: C,
    d3: C,
}

fn stencil<F: Fn(C) -> Result<C>>(h: &F, x: C, step: C) -> Result<Jet> {
    let f = |k: f64| h(x + step * k);
    let (m2, m1, z, p1, p2) = (f(-2.0)?, f(-1.0)?, f(0.0)?, f(1.0)?, f(2.0)?);
    let jet = Jet {
        d0: z,
        d1: (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * step),
        d2: (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * step * step),
        d3: (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * step * step * step),
    };
    if ![jet.d0, jet.d1, jet.d2, jet.d3].iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::StepUnstable(format!("non-finite stencil value at x = {x}")));
    }
    Ok(jet)
}

/// `|L~3 L~2 L~1 h| / scale` at one point, with `scale` the largest term of the expansion.
fn residual_at<F: Fn(C) -> Result<C>>(params: &Parameters, j: usize, h: &F, x: C) -> Result<f64> {
    let jet = stencil(h, x, x * FD_STEP)?;
    let coef = |k: usize| (params.alpha[k] - params.alpha[j], params.beta[k] - params.beta[j]);
    let a = |k: usize| {
        let (ak, bk) = coef(k);
        (ak / x + bk / (x * x), -ak / (x * x) - 2.0 * bk / x.powu(3), 2.0 * ak / x.powu(3) + 6.0 * bk / x.powu(4))
    };
    let (a1, a1p, a1pp) = a(0);
    let (a2, a2p, _) = a(1);
    let (a3, _, _) = a(2);
    let terms1 = [jet.d1, a1 * jet.d0];
    let w1 = terms1[0] - terms1[1];
    let terms1p = [jet.d2, a1p * jet.d0, a1 * jet.d1];
    let w1p = terms1p[0] - terms1p[1] - terms1p[2];
    let terms1pp = [jet.d3, a1pp * jet.d0, 2.0 * a1p * jet.d1, a1 * jet.d2];
    let w1pp = terms1pp[0] - terms1pp[1] - terms1pp[2] - terms1pp[3];
    let w2 = w1p - a2 * w1;
    let terms2p = [w1pp, a2p * w1, a2 * w1p];
    let w2p = terms2p[0] - terms2p[1] - terms2p[2];
    let w3 = w2p - a3 * w2;
    let scale = terms1
        .iter()
        .chain(&terms1p)
        .chain(&terms1pp)
        .chain(&terms2p)
        .chain(&[a2 * w1, a3 * w2])
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 && w3.norm() == 0.0 {
        return Ok(0.0);
    }
    if !(scale > 0.0) {
        return Err(Error::StepUnstable(format!("vanishing scale at x = {x}")));
    }
    Ok(w3.norm() / scale)
}

/// Largest relative residual of column `j` (0-based), `y = x^{a_j} e^{-b_j/x} h(x)`, over `xs`.
pub fn ode_residual<F>(params: &Parameters, j: usize, h: F, xs: &[C]) -> Result<f64>
where
    F: Fn(C) -> Result<C> + Sync + Send,
{
    let r = crate::par::try_map(xs, |&x| residual_at(params, j, &h, x))?;
    Ok(r.into_iter().fold(0.0, f64::max))
}

/// The smooth factor `H_{1j}` of the first-row fundamental solutions along `ray`.
pub fn first_row_factor<'a>(
    params: &'a Parameters,
    j: usize,
    ray: Ray,
    cfg: &QuadConfig,
) -> impl Fn(C) -> Result<C> + Sync + Send + 'a {
    let cfg = *cfg;
    move |x| {
        if j == 0 {
            return Ok(C::new(1.0, 0.0));
        }
        Ok(actual_h(params, [ray; 3], x, &cfg)?[0][j])
    }
}
