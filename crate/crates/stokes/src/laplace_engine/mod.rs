//! Laplace transforms of Borel-plane functions along rays, and the 1-sums built from them.
//!
//! A Borel function here is `prefactor * prod (1 + xi/b)^e * 2F1(a, b; c; u(xi))` with the
//! hypergeometric factor optional and `u` affine. The binomials are evaluated with principal
//! powers, which agrees with continuation along any ray from the origin that misses `-b`.
//! The hypergeometric factor is continued along the ray itself, so a ray that crosses the
//! principal cut of `2F1` sees the continued branch.
//!
//! The transform uses the measure `d(xi/x)`: for `f ≡ 1` the result is exactly `1`.

mod quad;
mod sums;

pub use sums::{
    a1_integrand, actual_fundamental, actual_h, chi_coefficient, exponential_part, g_integrand, phi13_sum,
    phi_integrand, phi_sum, psi_sum, psi_sum_series, upsilon_integrand, upsilon_sum, SeriesOracle,
};

pub(crate) use quad::integrate;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{cpow, hyp2f1, nearest_integer, HypParams, HypPath};

type C = Complex64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Reduce an angle difference to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TWO_PI);
    if r > std::f64::consts::PI {
        r - TWO_PI
    } else {
        r
    }
}

/// Integration direction on the Riemann surface of the logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub theta: f64,
}

impl Ray {
    pub fn new(theta: f64) -> Self {
        Ray { theta }
    }

    pub fn direction(&self) -> C {
        C::from_polar(1.0, self.theta)
    }
}

/// A point `x = r e^{i arg}` with `arg` kept as a real coordinate on the log surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub r: f64,
    pub arg: f64,
}

impl SurfacePoint {
    pub fn new(r: f64, arg: f64) -> Self {
        SurfacePoint { r, arg }
    }

    pub fn value(&self) -> C {
        C::from_polar(self.r, self.arg)
    }

    pub fn ln(&self) -> C {
        C::new(self.r.ln(), self.arg)
    }

    /// `x^c` on this sheet.
    pub fn pow(&self, c: C) -> C {
        (c * self.ln()).exp()
    }

    /// Shift by a small complex step without crossing a sheet boundary.
    pub fn offset(&self, h: C) -> SurfacePoint {
        let v = self.value() + h;
        let darg = wrap_angle(v.arg() - self.arg);
        SurfacePoint { r: v.norm(), arg: self.arg + darg }
    }
}

/// Quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub tol: f64,
    pub delta_min: f64,
    pub delta_cone: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { tol: 1e-10, delta_min: 1e-3, delta_cone: 1e-2, max_panels: 20_000 }
    }
}

impl QuadConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// The factor `(1 + xi/b)^e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Binomial {
    pub b: C,
    pub e: C,
}

impl Binomial {
    fn degree(&self) -> Option<usize> {
        match nearest_integer(self.e, 1e-12) {
            Some(k) if k >= 0 => Some(k as usize),
            _ => None,
        }
    }

    fn eval(&self, xi: C) -> C {
        match self.degree() {
            Some(k) => (1.0 + xi / self.b).powu(k as u32),
            None => cpow(1.0 + xi / self.b, self.e),
        }
    }
}

/// `2F1(params; (xi + s0)/s1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypFactor {
    pub params: HypParams,
    pub s0: C,
    pub s1: C,
}

impl HypFactor {
    pub fn u(&self, xi: C) -> C {
        (xi + self.s0) / self.s1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelIntegrand {
    pub prefactor: C,
    pub binomials: Vec<Binomial>,
    pub hyp: Option<HypFactor>,
}

impl BorelIntegrand {
    pub fn constant(prefactor: C) -> Self {
        BorelIntegrand { prefactor, binomials: vec![], hyp: None }
    }

    pub fn binomial(mut self, b: C, e: C) -> Self {
        self.binomials.push(Binomial { b, e });
        self
    }

    pub fn hypergeometric(mut self, params: HypParams, s0: C, s1: C) -> Self {
        self.hyp = Some(HypFactor { params, s0, s1 });
        self
    }

    /// Points where the function can fail to be analytic: `-b` for each non-polynomial
    /// binomial, and `u = 1`, `u = 0` for a non-terminating hypergeometric factor.
    pub fn branch_points(&self) -> Vec<C> {
        let mut out: Vec<C> = self.binomials.iter().filter(|b| b.degree().is_none()).map(|b| -b.b).collect();
        if let Some(h) = &self.hyp {
            if h.params.terminating_degree().is_none() {
                out.push(h.s1 - h.s0);
                out.push(-h.s0);
            }
        }
        out
    }

    /// Value on the principal branch of every factor.
    pub fn eval_principal(&self, xi: C) -> Result<C> {
        let mut v = self.prefactor;
        for b in &self.binomials {
            v *= b.eval(xi);
        }
        if let Some(h) = &self.hyp {
            v *= hyp2f1(&h.params, h.u(xi))?;
        }
        Ok(v)
    }

    /// Coefficients in `xi` when the function is a polynomial.
    fn polynomial_coeffs(&self) -> Option<Vec<C>> {
        if self.hyp.is_some() {
            return None;
        }
        let mut poly = vec![self.prefactor];
        for b in &self.binomials {
            let k = b.degree()?;
            for _ in 0..k {
                let mut next = vec![C::new(0.0, 0.0); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] += c / b.b;
                }
                poly = next;
            }
        }
        Some(poly)
    }

    fn growth_order(&self) -> f64 {
        let mut p: f64 = self.binomials.iter().map(|b| b.e.re.max(0.0)).sum();
        if let Some(h) = &self.hyp {
            p += (-h.params.a.re).max(-h.params.b.re).max(0.0);
        }
        p
    }
}

/// The value of a 1-sum together with a bound on its numerical error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSumValue {
    pub value: C,
    pub theta: f64,
    pub est_error: f64,
}

impl OneSumValue {
    pub fn exact(value: C, theta: f64) -> Self {
        OneSumValue { value, theta, est_error: 0.0 }
    }

    pub fn scale(self, k: C) -> Self {
        OneSumValue { value: self.value * k, theta: self.theta, est_error: self.est_error * k.norm() }
    }

    pub fn add(self, other: OneSumValue) -> Self {
        OneSumValue { value: self.value + other.value, theta: self.theta, est_error: self.est_error + other.est_error }
    }

    pub fn sub(self, other: OneSumValue) -> Self {
        self.add(other.scale(C::new(-1.0, 0.0)))
    }

    pub fn add_const(self, c: C) -> Self {
        OneSumValue { value: self.value + c, ..self }
    }
}

/// Check the convergence cone and the distance to every branch direction.
pub fn check_ray(f: &BorelIntegrand, ray: Ray, x: C, cfg: &QuadConfig) -> Result<()> {
    let phi = wrap_angle(ray.theta - x.arg());
    if phi.abs() > std::f64::consts::FRAC_PI_2 - cfg.delta_cone {
        return Err(Error::ConvergenceConeViolation { theta: ray.theta, arg_x: x.arg() });
    }
    for p in f.branch_points() {
        let d = wrap_angle(ray.theta - p.arg()).abs();
        if d < cfg.delta_min {
            return Err(Error::RayTooCloseToSingular { theta: ray.theta, singular: p.arg(), distance: d });
        }
    }
    Ok(())
}

/// Hypergeometric factor continued along a ray, evaluated from the nearest node.
struct RayHyp {
    h: HypFactor,
    poly: bool,
    path: Option<HypPath>,
    first: usize,
    ts: Vec<f64>,
    dir: C,
}

impl RayHyp {
    fn new(h: HypFactor, dir: C, t_max: f64) -> Result<Self> {
        if h.params.terminating_degree().is_some() {
            return Ok(RayHyp { h, poly: true, path: None, first: 0, ts: vec![], dir });
        }
        let mut path = HypPath::from_origin(&h.params, h.u(C::new(0.0, 0.0)))?;
        let first = path.len() - 1;
        path.extend_to(h.u(dir * t_max))?;
        let ts = (first..path.len()).map(|k| ((path.node_point(k) * h.s1 - h.s0) * dir.conj()).re).collect();
        Ok(RayHyp { h, poly: false, path: Some(path), first, ts, dir })
    }

    fn eval(&self, t: f64) -> Result<C> {
        let u = self.h.u(self.dir * t);
        match &self.path {
            None => {
                debug_assert!(self.poly);
                hyp2f1(&self.h.params, u)
            }
            Some(path) => {
                let k = self.ts.partition_point(|&tk| tk <= t).saturating_sub(1);
                Ok(path.eval_from(self.first + k, u))
            }
        }
    }
}

fn factorial_powers(poly: &[C], x: C) -> C {
    let mut acc = C::new(0.0, 0.0);
    let mut fx = C::new(1.0, 0.0);
    for (n, c) in poly.iter().enumerate() {
        if n > 0 {
            fx *= x * n as f64;
        }
        acc += c * fx;
    }
    acc
}

const S_START: f64 = 36.0;
const S_LIMIT: f64 = 4000.0;
const ROUNDOFF_FLOOR: f64 = 200.0 * f64::EPSILON;

struct RayFrame {
    dir: C,
    rate: f64,
    tan: f64,
    kappa: C,
    jac: C,
    osc: C,
}

impl RayFrame {
    // xi = s * kappa, so that |e^{-xi/x}| = e^{-s}
    fn new(ray: Ray, x: C) -> Self {
        let dir = ray.direction();
        let w = dir / x;
        let phi = wrap_angle(ray.theta - x.arg());
        let rate = w.norm() * phi.cos();
        let tan = phi.tan();
        RayFrame { dir, rate, tan, kappa: dir / rate, jac: w / rate, osc: C::new(1.0, tan) }
    }

    fn integrate<F: FnMut(f64) -> Result<C>>(
        &self,
        mut integrand: F,
        branch_points: &[C],
        s_max: f64,
        p: f64,
        ray: Ray,
        cfg: &QuadConfig,
    ) -> Result<OneSumValue> {
        let mut nodes = vec![0.0, s_max];
        for bp in branch_points {
            let local = bp * self.dir.conj();
            let (along, off) = (local.re * self.rate, local.im.abs() * self.rate);
            for s in [along - off, along, along + off] {
                if s > 0.0 && s < s_max {
                    nodes.push(s);
                }
            }
        }
        let width = (std::f64::consts::PI / self.tan.abs().max(1e-3)).clamp(0.25, 4.0);
        let mut s = width;
        while s < s_max {
            nodes.push(s);
            s += width;
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

        let tail_bound = integrand(s_max)?.norm() * s_max / (s_max - p).max(1.0);
        let tol = cfg.tol;
        let scale = self.jac.norm();
        let jac = self.jac;
        // cancellation between panels sets a floor of a few ulps of the integrand mass
        let r = integrate(
            integrand,
            &nodes,
            |v, mass| tol * (v * jac).norm().max(1.0) / scale + ROUNDOFF_FLOOR * mass,
            cfg.max_panels,
        )?;
        Ok(OneSumValue { value: r.value * jac, theta: ray.theta, est_error: (r.err + tail_bound) * scale })
    }
}

fn truncation_point(p: f64, tol: f64, probe: impl Fn(f64) -> f64) -> Result<f64> {
    let mut s_max = S_START.max(4.0 * p);
    while probe(s_max) * s_max / (s_max - p) > 1e-3 * tol {
        s_max *= 1.3;
        if s_max > S_LIMIT {
            return Err(Error::QuadratureFailure { est_error: f64::INFINITY, tol });
        }
    }
    Ok(s_max)
}

/// `(L_theta f)(x) = int_0^{infinity e^{i theta}} f(xi) e^{-xi/x} d(xi/x)`.
pub fn laplace_ray(f: &BorelIntegrand, ray: Ray, x: C, cfg: &QuadConfig) -> Result<OneSumValue> {
    check_ray(f, ray, x, cfg)?;
    if let Some(poly) = f.polynomial_coeffs() {
        return Ok(OneSumValue::exact(factorial_powers(&poly, x), ray.theta));
    }
    let fr = RayFrame::new(ray, x);
    let p = f.growth_order() + 1.0;

    let binom = |s: f64| -> C {
        let xi = fr.kappa * s;
        let mut v = f.prefactor;
        for b in &f.binomials {
            v *= b.eval(xi);
        }
        v
    };

    let s_max = truncation_point(p, cfg.tol, |s| {
        let g = binom(s).norm() * (-s).exp();
        match &f.hyp {
            Some(h) => {
                let v = hyp2f1(&h.params, h.u(fr.dir * (s / fr.rate))).map(|v| v.norm()).unwrap_or(1.0);
                g * v.max(1.0)
            }
            None => g,
        }
    })?;

    let ray_hyp = match &f.hyp {
        Some(h) => Some(RayHyp::new(*h, fr.dir, s_max / fr.rate * 1.0001)?),
        None => None,
    };

    let integrand = |s: f64| -> Result<C> {
        let mut v = binom(s) * (-fr.osc * s).exp();
        if let Some(rh) = &ray_hyp {
            v *= rh.eval(s / fr.rate)?;
        }
        Ok(v)
    };
    fr.integrate(integrand, &f.branch_points(), s_max, p, ray, cfg)
}

/// Laplace transform of an arbitrary Borel function `f(xi)` along `ray`.
///
/// `branch_points` are used for ray admissibility and panel placement; `growth` bounds
/// `|f(xi)| = O(|xi|^growth)` and sets the truncation point.
pub fn laplace_fn<F>(f: F, branch_points: &[C], growth: f64, ray: Ray, x: C, cfg: &QuadConfig) -> Result<OneSumValue>
where
    F: Fn(C) -> Result<C>,
{
    let phi = wrap_angle(ray.theta - x.arg());
    if phi.abs() > std::f64::consts::FRAC_PI_2 - cfg.delta_cone {
        return Err(Error::ConvergenceConeViolation { theta: ray.theta, arg_x: x.arg() });
    }
    for p in branch_points {
        let d = wrap_angle(ray.theta - p.arg()).abs();
        if d < cfg.delta_min {
            return Err(Error::RayTooCloseToSingular { theta: ray.theta, singular: p.arg(), distance: d });
        }
    }
    let fr = RayFrame::new(ray, x);
    let p = growth.max(0.0) + 1.0;
    let s_max = truncation_point(p, cfg.tol, |s| {
        f(fr.kappa * s).map(|v| v.norm()).unwrap_or(f64::INFINITY).max(s.powf(p - 1.0)) * (-s).exp()
    })?;
    fr.integrate(|s| Ok(f(fr.kappa * s)? * (-fr.osc * s).exp()), branch_points, s_max, p, ray, cfg)
}
