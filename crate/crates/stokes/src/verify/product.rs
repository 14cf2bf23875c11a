//! Summation of the product `phi_12 * phi_23` by three independent routes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_model::Parameters;
use crate::laplace_engine::{
    laplace_fn, laplace_ray, phi_integrand, upsilon_integrand, BorelIntegrand, OneSumValue, QuadConfig, Ray,
};
use crate::special_fn::{cpow, gamma, rising_factorial, HypParams};

type C = Complex64;

const ROMBERG_MAX_LEVEL: usize = 14;

fn one() -> C {
    C::new(1.0, 0.0)
}

/// `int_a^b f` by Romberg extrapolation of trapezoid sums on `2^0 .. 2^14` intervals.
fn romberg<F: Fn(f64) -> Result<C>>(f: &F, a: f64, b: f64, tol: f64) -> Result<(C, f64)> {
    let h0 = b - a;
    let mut prev = vec![0.5 * h0 * (f(a)? + f(b)?)];
    let mut est = f64::INFINITY;
    for k in 1..=ROMBERG_MAX_LEVEL {
        let n_new = 1usize << (k - 1);
        let h = h0 / (1usize << k) as f64;
        let mut mid = C::new(0.0, 0.0);
        for i in 0..n_new {
            mid += f(a + (2 * i + 1) as f64 * h)?;
        }
        let mut row = Vec::with_capacity(k + 1);
        row.push(0.5 * prev[0] + h * mid);
        let mut pow4 = 1.0;
        for j in 1..=k {
            pow4 *= 4.0;
            let r = row[j - 1] + (row[j - 1] - prev[j - 1]) / (pow4 - 1.0);
            row.push(r);
        }
        est = (row[k] - prev[k - 1]).norm();
        if k >= 3 && est <= tol * row[k].norm().max(1.0) {
            return Ok((row[k], est));
        }
        prev = row;
    }
    Err(Error::GridTooCoarse { est_error: est, tol })
}

/// `(f * g)(xi) = int_0^xi f(z) g(xi - z) dz` along the straight segment, on a grid graded
/// towards the closest approaches of the branch points.
pub fn convolve(f: &BorelIntegrand, g: &BorelIntegrand, xi: C, tol: f64) -> Result<(C, f64)> {
    if f.hyp.is_some() || g.hyp.is_some() {
        return Err(Error::InvalidParameters("convolution needs binomial Borel functions".into()));
    }
    if xi.norm() == 0.0 {
        return Ok((C::new(0.0, 0.0), 0.0));
    }
    let mut nodes = vec![0.0, 1.0];
    let mut grade = |t_star: f64, d: f64| {
        let d = d.max(1e-6);
        let mut w = d;
        while w < 1.0 {
            for t in [t_star - w, t_star + w] {
                if t > 0.0 && t < 1.0 {
                    nodes.push(t);
                }
            }
            w *= 2.0;
        }
        if t_star > 0.0 && t_star < 1.0 {
            nodes.push(t_star);
        }
    };
    for p in f.branch_points() {
        let q = p / xi;
        grade(q.re, q.im.abs());
    }
    for p in g.branch_points() {
        let q = p / xi;
        grade(1.0 - q.re, q.im.abs());
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let h = |t: f64| -> Result<C> { Ok(f.eval_principal(xi * t)? * g.eval_principal(xi * (1.0 - t))?) };
    let mut total = C::new(0.0, 0.0);
    let mut err = 0.0;
    for w in nodes.windows(2) {
        let (v, e) = romberg(&h, w[0], w[1], tol)?;
        total += v;
        err += e;
    }
    Ok((total * xi, err * xi.norm()))
}

fn growth(f: &BorelIntegrand) -> f64 {
    f.binomials.iter().map(|b| b.e.re.max(0.0)).sum()
}

/// 1-sum of the product series `f^ g^` from the Laplace transform of the convolution.
pub fn product_by_convolution(
    f: &BorelIntegrand,
    g: &BorelIntegrand,
    extra_branch_points: &[C],
    ray: Ray,
    x: C,
    inner_tol: f64,
    cfg: &QuadConfig,
) -> Result<OneSumValue> {
    let mut bps = f.branch_points();
    bps.extend(g.branch_points());
    bps.extend_from_slice(extra_branch_points);
    let p = growth(f) + growth(g) + 1.0;
    let inner_err = std::cell::Cell::new(0.0f64);
    let v = laplace_fn(
        |xi| {
            let (value, err) = convolve(f, g, xi, inner_tol)?;
            inner_err.set(inner_err.get().max(err));
            Ok(value)
        },
        &bps,
        p,
        ray,
        x,
        cfg,
    )?;
    let cos_phi = crate::laplace_engine::wrap_angle(ray.theta - x.arg()).cos();
    let v = OneSumValue { est_error: v.est_error + inner_err.get() / cos_phi, ..v };
    Ok(v.scale(1.0 / x))
}

/// `L[phi_12 * phi_23](x) / x`, the brute-force 1-sum of `phi^_12 phi^_23`.
pub fn convolution_oracle(
    params: &Parameters,
    ray: Ray,
    x: C,
    inner_tol: f64,
    cfg: &QuadConfig,
) -> Result<OneSumValue> {
    let extra = [-params.db(1, 3)];
    product_by_convolution(&phi_integrand(1, 2, params), &phi_integrand(2, 3, params), &extra, ray, x, inner_tol, cfg)
}

/// `W = sum_p (2+a2-a1)^(p) / (4+a3-a1)^(p) ((b3-b1)/(b2-b1))^p` by direct summation.
pub fn w_series(params: &Parameters, tol: f64) -> Result<C> {
    let z = params.db(1, 3) / params.db(1, 2);
    if z.norm() >= 1.0 {
        return Err(Error::HypothesisViolated("W needs |b3-b1| < |b2-b1|".into()));
    }
    let (a, c) = (2.0 + params.da(1, 2), 4.0 + params.da(1, 3));
    let mut term = one();
    let mut sum = one();
    for p in 0..100_000 {
        term *= (a + p as f64) / (c + p as f64) * z;
        sum += term;
        if term.norm() <= tol * sum.norm() && p > 4 {
            return Ok(sum);
        }
    }
    Err(Error::DivergentSeries("W did not converge".into()))
}

/// The coefficient `G(alpha, beta)` of the `theta_2` integral.
pub fn g_coefficient(params: &Parameters) -> Result<C> {
    let (d12, d13, d23) = (params.da(1, 2), params.da(1, 3), params.da(2, 3));
    let (c12, c13, c23) = (params.db(1, 2), params.db(1, 3), params.db(2, 3));
    let t1 = gamma(-d23 - 1.0)? / gamma(2.0 + d12)? * cpow(-c12 / c23, -d12 - 2.0) * cpow(-c13 / -c12, -d13 - 4.0);
    let t2 = gamma(-d12 - 1.0)? / gamma(2.0 + d23)? * cpow(-c23 / c12, -d12 - 2.0) * cpow(-c13 / -c23, -d13 - 4.0);
    Ok(t1 + t2)
}

fn require_moduli(params: &Parameters) -> Result<()> {
    let (c12, c13, c23) = (params.db(1, 2).norm(), params.db(1, 3).norm(), params.db(2, 3).norm());
    if !(c13 < c23 && c13 < c12) {
        return Err(Error::HypothesisViolated(format!(
            "need |b3-b1| < |b3-b2| and |b3-b1| < |b2-b1|, got {c13:.6} vs {c23:.6}, {c12:.6}"
        )));
    }
    Ok(())
}

fn b_l(params: &Parameters, l: usize) -> C {
    let s = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    s * rising_factorial(2.0 + params.da(2, 3), l) / params.db(2, 3).powu(l as u32)
}

fn c_l(params: &Parameters, l: usize) -> C {
    let s = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    s * rising_factorial(2.0 + params.da(1, 2), l) / params.db(1, 2).powu(l as u32)
}

/// 1-sum of `phi^_12 phi^_23` from the iterated-integral representation.
///
/// `rays[0]`, `rays[1]`, `rays[2]` carry the integrals whose kernels are singular at
/// `b1-b2`, `b1-b3` and `b2-b3` respectively. The infinite `s`-sums are taken in closed
/// form as Gauss functions of the Borel variable.
pub fn omega_sum(params: &Parameters, rays: [Ray; 3], x: C, cfg: &QuadConfig) -> Result<OneSumValue> {
    require_moduli(params)?;
    let (d12, d13, d23) = (params.da(1, 2), params.da(1, 3), params.da(2, 3));
    let (c12, c13, c23) = (params.db(1, 2), params.db(1, 3), params.db(2, 3));
    if params.is_int_le(d13, -4) {
        if params.is_int_le(d12, -2) || params.is_int_le(d23, -2) {
            return Err(Error::HypothesisViolated("a2-a1 or a3-a2 in Z<=-2".into()));
        }
        let n = params.int_value(-d13 - 4.0).expect("integer gate") as usize;
        let mut poly = C::new(0.0, 0.0);
        for l in 0..=n {
            let mut inner = C::new(0.0, 0.0);
            for s in 0..=(n - l) {
                let sg = if s % 2 == 0 { 1.0 } else { -1.0 };
                inner += sg * rising_factorial(4.0 + l as f64 + d13, s) / c13.powu(s as u32) * x.powu(s as u32);
            }
            poly += (c12 * b_l(params, l) + c23 * c_l(params, l)) * x.powu(l as u32) * inner;
        }
        let k1 = BorelIntegrand::constant(one()).binomial(c23, 1.0 + d12).binomial(c13, -one());
        let k2 = BorelIntegrand::constant(one()).binomial(c12, 1.0 + d23).binomial(c13, -one());
        let a = n + 1;
        let i1 = laplace_ray(&k1, rays[2], x, cfg)?.scale(b_l(params, a) * c12);
        let i2 = laplace_ray(&k2, rays[0], x, cfg)?.scale(c_l(params, a) * c23);
        return Ok(i1.add(i2).scale(x.powu(a as u32)).add_const(poly).scale(1.0 / c13));
    }
    if params.is_int(d12) || params.is_int(d23) {
        return Err(Error::HypothesisViolated("a2-a1 and a3-a2 must both be non-integer".into()));
    }
    let k = -gamma(4.0 + d13)? * g_coefficient(params)?;
    generic_omega(params, k, rays, x, cfg)
}

fn generic_gauss_integrands(params: &Parameters) -> (BorelIntegrand, BorelIntegrand) {
    let (d12, d23) = (params.da(1, 2), params.da(2, 3));
    let (c12, c23) = (params.db(1, 2), params.db(2, 3));
    let g3 = BorelIntegrand::constant(one()).binomial(c23, -d23 - 2.0).hypergeometric(
        HypParams::new(one(), 2.0 + d12, -d23 - 1.0),
        c23,
        -c12,
    );
    let g1 = BorelIntegrand::constant(one()).binomial(c12, -d12 - 2.0).hypergeometric(
        HypParams::new(one(), 2.0 + d23, -d12 - 1.0),
        c12,
        -c23,
    );
    (g3, g1)
}

fn generic_omega(params: &Parameters, k: C, rays: [Ray; 3], x: C, cfg: &QuadConfig) -> Result<OneSumValue> {
    let (g3, g1) = generic_gauss_integrands(params);
    let ups = laplace_ray(&upsilon_integrand(params), rays[1], x, cfg)?.scale(k);
    let i3 = laplace_ray(&g3, rays[2], x, cfg)?;
    let i1 = laplace_ray(&g1, rays[0], x, cfg)?;
    Ok(ups.add(i3).add(i1))
}

/// The `L[Upsilon]` coefficient fixed by requiring the constant term of the generic
/// representation to be `1`: `1 - g3(0) - g1(0)` with `g3`, `g1` the Gauss integrands.
pub fn upsilon_coefficient_from_constant_term(params: &Parameters) -> Result<C> {
    let (g3, g1) = generic_gauss_integrands(params);
    let zero = C::new(0.0, 0.0);
    Ok(one() - g3.eval_principal(zero)? - g1.eval_principal(zero)?)
}

/// The generic representation with the `L[Upsilon]` coefficient from
/// [`upsilon_coefficient_from_constant_term`] in place of `-Gamma(4+a3-a1) G`.
pub fn omega_sum_matched(params: &Parameters, rays: [Ray; 3], x: C, cfg: &QuadConfig) -> Result<OneSumValue> {
    require_moduli(params)?;
    if params.is_int_le(params.da(1, 3), -4) || params.is_int(params.da(1, 2)) || params.is_int(params.da(2, 3)) {
        return Err(Error::HypothesisViolated("generic representation needs non-integer differences".into()));
    }
    generic_omega(params, upsilon_coefficient_from_constant_term(params)?, rays, x, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductRow {
    pub x: C,
    pub product_of_sums: C,
    pub sum_of_product: C,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductRuleReport {
    pub theta: f64,
    pub rows: Vec<ProductRow>,
    pub max_rel_dev: f64,
}

/// Compare `S(f) S(g)` with the 1-sum of `f^ g^` obtained by convolution.
pub fn check_product_rule(
    f: &BorelIntegrand,
    g: &BorelIntegrand,
    ray: Ray,
    xs: &[C],
    inner_tol: f64,
    cfg: &QuadConfig,
) -> Result<ProductRuleReport> {
    let rows = crate::par::try_map(xs, |&x| -> Result<ProductRow> {
        let lhs = laplace_ray(f, ray, x, cfg)?.value * laplace_ray(g, ray, x, cfg)?.value;
        let rhs = product_by_convolution(f, g, &[], ray, x, inner_tol, cfg)?.value;
        Ok(ProductRow {
            x,
            product_of_sums: lhs,
            sum_of_product: rhs,
            rel_dev: (lhs - rhs).norm() / lhs.norm().max(1e-300),
        })
    })?;
    let max_rel_dev = rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    Ok(ProductRuleReport { theta: ray.theta, rows, max_rel_dev })
}
