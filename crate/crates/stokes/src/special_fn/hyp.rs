use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{gamma, recip_gamma};
use super::path::{hyp2f1_continued, taylor_step};
use super::{cpow, nearest_integer, DEFAULT_INT_TOL};
use crate::error::{Error, Result};

type C = Complex64;

const DIRECT_RADIUS: f64 = 0.7;
const ROUTE_RADIUS: f64 = 0.9;
const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypParams {
    pub a: C,
    pub b: C,
    pub c: C,
}

impl HypParams {
    pub fn new(a: C, b: C, c: C) -> Self {
        HypParams { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        HypParams::new(C::new(a, 0.0), C::new(b, 0.0), C::new(c, 0.0))
    }

    /// Degree of the polynomial when `a` or `b` is a non-positive integer.
    pub fn terminating_degree(&self) -> Option<usize> {
        let deg = |x: C| match nearest_integer(x, DEFAULT_INT_TOL) {
            Some(k) if k <= 0 => Some((-k) as usize),
            _ => None,
        };
        match (deg(self.a), deg(self.b)) {
            (Some(n), Some(m)) => Some(n.min(m)),
            (Some(n), None) | (None, Some(n)) => Some(n),
            (None, None) => None,
        }
    }

    fn derivative(&self) -> HypParams {
        HypParams::new(self.a + 1.0, self.b + 1.0, self.c + 1.0)
    }
}

/// Argument maps of the dispatcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// z
    Direct,
    /// z/(z-1)
    Pfaff,
    /// 1-z
    OneMinus,
    /// 1/z
    Inverse,
    /// 1/(1-z)
    InverseOneMinus,
    /// 1-1/z
    OneMinusInverse,
}

pub const ALL_ROUTES: [Route; 6] =
    [Route::Direct, Route::Pfaff, Route::OneMinus, Route::Inverse, Route::InverseOneMinus, Route::OneMinusInverse];

impl Route {
    pub fn argument(self, z: C) -> C {
        let one = C::new(1.0, 0.0);
        match self {
            Route::Direct => z,
            Route::Pfaff => z / (z - 1.0),
            Route::OneMinus => one - z,
            Route::Inverse => one / z,
            Route::InverseOneMinus => one / (one - z),
            Route::OneMinusInverse => one - one / z,
        }
    }

    /// True when the connection coefficients of the route have a Gamma pole.
    pub fn is_degenerate(self, p: &HypParams) -> bool {
        let int = |x: C| nearest_integer(x, DEFAULT_INT_TOL).is_some();
        match self {
            Route::Direct | Route::Pfaff => false,
            Route::OneMinus | Route::OneMinusInverse => int(p.c - p.a - p.b),
            Route::Inverse | Route::InverseOneMinus => int(p.a - p.b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Above,
    Below,
}

fn on_cut(z: C) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

fn c_pole_check(p: &HypParams) -> Result<()> {
    if let Some(k) = nearest_integer(p.c, DEFAULT_INT_TOL) {
        if k <= 0 {
            let m = (-k) as usize;
            match p.terminating_degree() {
                Some(n) if n <= m => {}
                _ => {
                    return Err(Error::InvalidDegenerate(format!(
                        "c = {} is a non-positive integer without an earlier termination",
                        p.c
                    )))
                }
            }
        }
    }
    Ok(())
}

fn polynomial(p: &HypParams, n: usize, z: C) -> C {
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..n {
        let k = k as f64;
        term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Defining series, summed until the terms drop below machine precision.
pub fn hyp2f1_series(p: &HypParams, z: C) -> Result<C> {
    c_pole_check(p)?;
    if let Some(n) = p.terminating_degree() {
        return Ok(polynomial(p, n, z));
    }
    if z.norm() >= 1.0 {
        return Err(Error::DivergentSeries(format!("2F1 series at |z| = {} >= 1", z.norm())));
    }
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (p.a + kf) * (p.b + kf) / ((p.c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && ratio.norm() < 1.0 {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::DivergentSeries(format!("2F1 series at z = {z} did not converge")))
}

/// Evaluate through one transformation formula.
pub fn hyp2f1_via(p: &HypParams, z: C, route: Route) -> Result<C> {
    c_pole_check(p)?;
    if let Some(n) = p.terminating_degree() {
        return Ok(polynomial(p, n, z));
    }
    if route.is_degenerate(p) {
        return Err(Error::LogarithmicCase(format!("{route:?} at a={}, b={}, c={}", p.a, p.b, p.c)));
    }
    if route != Route::Direct && route != Route::Pfaff && on_cut(z) {
        return Err(Error::BranchCut(format!("{z}")));
    }
    let (a, b, c) = (p.a, p.b, p.c);
    let one = C::new(1.0, 0.0);
    let w = route.argument(z);
    let f = |a, b, c| hyp2f1_series(&HypParams::new(a, b, c), w);
    let gc = gamma(c)?;
    match route {
        Route::Direct => hyp2f1_series(p, z),
        Route::Pfaff => Ok(cpow(one - z, -a) * f(a, c - b, c)?),
        Route::OneMinus => {
            let s = c - a - b;
            let t1 = gc * gamma(s)? * recip_gamma(c - a) * recip_gamma(c - b) * f(a, b, one - s)?;
            let t2 = gc * gamma(-s)? * recip_gamma(a) * recip_gamma(b) * cpow(one - z, s) * f(c - a, c - b, one + s)?;
            Ok(t1 + t2)
        }
        Route::Inverse => {
            let mz = -z;
            let t1 = gc
                * gamma(b - a)?
                * recip_gamma(b)
                * recip_gamma(c - a)
                * cpow(mz, -a)
                * f(a, a - c + 1.0, a - b + 1.0)?;
            let t2 = gc
                * gamma(a - b)?
                * recip_gamma(a)
                * recip_gamma(c - b)
                * cpow(mz, -b)
                * f(b, b - c + 1.0, b - a + 1.0)?;
            Ok(t1 + t2)
        }
        Route::InverseOneMinus => {
            let t1 = gc
                * gamma(b - a)?
                * recip_gamma(b)
                * recip_gamma(c - a)
                * cpow(one - z, -a)
                * f(a, c - b, a - b + 1.0)?;
            let t2 = gc
                * gamma(a - b)?
                * recip_gamma(a)
                * recip_gamma(c - b)
                * cpow(one - z, -b)
                * f(b, c - a, b - a + 1.0)?;
            Ok(t1 + t2)
        }
        Route::OneMinusInverse => {
            let s = c - a - b;
            let t1 =
                gc * gamma(s)? * recip_gamma(c - a) * recip_gamma(c - b) * cpow(z, -a) * f(a, a - c + 1.0, one - s)?;
            let t2 = gc
                * gamma(-s)?
                * recip_gamma(a)
                * recip_gamma(b)
                * cpow(one - z, s)
                * cpow(z, a - c)
                * f(c - a, one - a, one + s)?;
            Ok(t1 + t2)
        }
    }
}

/// Best non-degenerate route for `z`, with its transformed modulus.
pub(crate) fn best_route(p: &HypParams, z: C) -> (Option<(Route, f64)>, Option<(Route, f64)>) {
    let mut valid: Option<(Route, f64)> = None;
    let mut any: Option<(Route, f64)> = None;
    for route in ALL_ROUTES {
        let r = route.argument(z).norm();
        if !r.is_finite() {
            continue;
        }
        if any.is_none_or(|(_, m)| r < m) {
            any = Some((route, r));
        }
        if !route.is_degenerate(p) && valid.is_none_or(|(_, m)| r < m) {
            valid = Some((route, r));
        }
    }
    (valid, any)
}

/// Gauss hypergeometric function, principal branch, cut on `[1, inf)`.
pub fn hyp2f1(p: &HypParams, z: C) -> Result<C> {
    c_pole_check(p)?;
    if let Some(n) = p.terminating_degree() {
        return Ok(polynomial(p, n, z));
    }
    if on_cut(z) {
        return Err(Error::BranchCut(format!("{z}")));
    }
    if z.norm() <= DIRECT_RADIUS {
        return hyp2f1_series(p, z);
    }
    match best_route(p, z) {
        (Some((route, r)), _) if r <= ROUTE_RADIUS => hyp2f1_via(p, z, route),
        (_, Some((route, r))) if r <= ROUTE_RADIUS => Err(Error::LogarithmicCase(format!(
            "{route:?} is the only convergent route at z = {z} (a={}, b={}, c={})",
            p.a, p.b, p.c
        ))),
        _ => hyp2f1_continued(p, z),
    }
}

pub(crate) fn hyp2f1_with_derivative(p: &HypParams, z: C) -> Result<(C, C)> {
    let f = hyp2f1(p, z)?;
    let df = if p.c == C::new(0.0, 0.0) { C::new(0.0, 0.0) } else { p.a * p.b / p.c * hyp2f1(&p.derivative(), z)? };
    Ok((f, df))
}

/// Boundary value `F(u + i0)` or `F(u - i0)` for real `u > 1`.
pub fn hyp2f1_one_sided(p: &HypParams, u: f64, side: Side) -> Result<C> {
    c_pole_check(p)?;
    if let Some(n) = p.terminating_degree() {
        return Ok(polynomial(p, n, C::new(u, 0.0)));
    }
    if u < 1.0 {
        return hyp2f1(p, C::new(u, 0.0));
    }
    if u == 1.0 {
        return Err(Error::BranchCut("one-sided value at the branch point z = 1".into()));
    }
    let sign = match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    let h = (u - 1.0).min(0.5 * u);
    let center = C::new(u, sign * h);
    let (f, df) = match hyp2f1_with_derivative(p, center) {
        Ok(v) => v,
        Err(Error::LogarithmicCase(_)) => super::path::continued_with_derivative(p, center)?,
        Err(e) => return Err(e),
    };
    Ok(taylor_step(p, center, f, df, C::new(0.0, -sign * h)).0)
}

/// `sum_{s=0}^{n} (a)_s (-n)_s / ((-m)_s s!) z^s`.
pub fn hyp2f1_polynomial(a: C, n: usize, m: usize, z: C) -> Result<C> {
    if n > m {
        return Err(Error::InvalidDegenerate(format!("F(a, -{n}; -{m}; z) with n > m")));
    }
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    for s in 0..n {
        let sf = s as f64;
        term *= (a + sf) * (sf - n as f64) / ((sf - m as f64) * (sf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}
