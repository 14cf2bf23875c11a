use num_complex::Complex64;

use super::{laplace_ray, BorelIntegrand, OneSumValue, QuadConfig, Ray, SurfacePoint};
use crate::error::{Error, Result};
use crate::formal_model::{a_coeffs, f_n, phi_hat, psi_hat, require_not_excluded, PairClass, Parameters, TripleClass};
use crate::special_fn::{gamma, recip_gamma, HypParams};

type C = Complex64;

fn one() -> C {
    C::new(1.0, 0.0)
}

fn poly_eval(coeffs: &[C], x: C) -> C {
    coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// `(1 + zeta/(b_j - b_i))^{a_i - a_j - 2}`.
pub fn phi_integrand(i: usize, j: usize, params: &Parameters) -> BorelIntegrand {
    BorelIntegrand::constant(one()).binomial(params.db(i, j), params.da(j, i) - 2.0)
}

/// 1-sum of `phi_ij`; exact finite sum when `a_j - a_i` is in `Z<=-2`.
pub fn phi_sum(i: usize, j: usize, ray: Ray, x: C, params: &Parameters, cfg: &QuadConfig) -> Result<OneSumValue> {
    let series = phi_hat(i, j, params, 0)?;
    if params.is_int_le(params.da(i, j), -2) {
        let full = phi_hat(i, j, params, series.coeffs.len().max(64))?;
        return Ok(OneSumValue::exact(poly_eval(&full.coeffs, x), ray.theta));
    }
    laplace_ray(&phi_integrand(i, j, params), ray, x, cfg)
}

/// `(1 + nu/(b3 - b1))^{a1 - a3 - 4}`.
pub fn upsilon_integrand(params: &Parameters) -> BorelIntegrand {
    BorelIntegrand::constant(one()).binomial(params.db(1, 3), params.da(3, 1) - 4.0)
}

pub fn upsilon_sum(ray: Ray, x: C, params: &Parameters, cfg: &QuadConfig) -> Result<OneSumValue> {
    laplace_ray(&upsilon_integrand(params), ray, x, cfg)
}

/// Closed Borel function of `sum a_n x^n`:
/// `(b3-b1)/(b1-b2) (a2-a3-2)/(a1-a3-4) (1 + xi/(b3-b2))^{a2-a3-2} 2F1(1, 2+a2-a1; 5+a3-a1; (b1-b3-xi)/(b1-b2))`.
pub fn a1_integrand(params: &Parameters) -> BorelIntegrand {
    let (c13, c23, c12) = (params.db(1, 3), params.db(2, 3), params.db(1, 2));
    let e23 = params.da(3, 2) - 2.0;
    let pre = c13 / (-c12) * e23 / (params.da(3, 1) - 4.0);
    BorelIntegrand::constant(pre).binomial(c23, e23).hypergeometric(
        HypParams::new(one(), 2.0 + params.da(1, 2), 5.0 + params.da(1, 3)),
        c13,
        c12,
    )
}

/// The summed `s`-series of Laplace kernels:
/// `(b3-b1)/(b1-b2) (1 + xi/(b3-b2))^{a2-a3-2} 2F1(1, 2+a2-a1; a2-a3-1; (b3-b2+xi)/(b1-b2))`.
pub fn g_integrand(params: &Parameters) -> BorelIntegrand {
    let (c13, c23, c12) = (params.db(1, 3), params.db(2, 3), params.db(1, 2));
    let e23 = params.da(3, 2) - 2.0;
    BorelIntegrand::constant(c13 / (-c12)).binomial(c23, e23).hypergeometric(
        HypParams::new(one(), 2.0 + params.da(1, 2), e23 + 1.0),
        c23,
        -c12,
    )
}

/// Coefficient `K` of the `beta_1 - beta_3` integral in the series form of `psi`:
/// `psi = -K L[(1 + xi/(b3-b1))^{a1-a3-4}] + L[g]`.
pub fn chi_coefficient(params: &Parameters) -> Result<C> {
    let (c13, c23, c21) = (params.db(1, 3), params.db(2, 3), params.db(2, 1));
    let d13 = params.da(1, 3);
    let d23 = params.da(2, 3);
    let g = gamma(4.0 + d13)? * gamma(-d23 - 1.0)? * recip_gamma(2.0 + params.da(1, 2));
    let p1 = crate::special_fn::cpow(c21 / c23, -d23 - 3.0);
    let p2 = crate::special_fn::cpow(-c13 / c21, -d13 - 4.0);
    Ok(c13 / c23 * g * p1 * p2)
}

/// 1-sum of `sum a_n x^n` (the series subtracted inside the `H_13` bracket), or of the
/// series `phi` of the `a3 - a1` in `Z<=-4` case.
pub fn psi_sum(params: &Parameters, ray2: Ray, ray3: Ray, x: C, cfg: &QuadConfig) -> Result<OneSumValue> {
    let tag = require_not_excluded(params)?;
    let (c13, c23) = (params.db(1, 3), params.db(2, 3));
    if tag.triple13 == TripleClass::IntLeMinus4 {
        let e = params.da(1, 2) + 1.0;
        let a_tilde = crate::special_fn::cpow(params.db(2, 1) / c23, e);
        let q = BorelIntegrand::constant(one()).binomial(c13, -one());
        let full = BorelIntegrand::constant(one()).binomial(c23, 1.0 + params.da(1, 2)).binomial(c13, -one());
        let first = laplace_ray(&q, ray2, x, cfg)?.scale(a_tilde);
        return Ok(first.sub(laplace_ray(&full, ray3, x, cfg)?));
    }
    if tag.pair23 == PairClass::IntLeMinus2 {
        let a = a_coeffs(params, usize::MAX)?;
        return Ok(OneSumValue::exact(poly_eval(&a, x), ray3.theta));
    }
    let main = laplace_ray(&a1_integrand(params), ray3, x, cfg)?;
    let generic = !params.is_int(params.da(2, 3));
    if generic && ray2.theta != ray3.theta {
        let k = chi_coefficient(params)?;
        if k != C::new(0.0, 0.0) {
            let ups = upsilon_integrand(params);
            let d = laplace_ray(&ups, ray3, x, cfg)?.sub(laplace_ray(&ups, ray2, x, cfg)?);
            return Ok(main.add(d.scale(k)));
        }
    }
    Ok(main)
}

/// Truncated term-by-term evaluation of the series form of `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOracle {
    pub value: C,
    pub last_term: f64,
    pub terms: usize,
}

/// `-K L_{ray2}[upsilon] + (b3-b1)/(b1-b2) sum_{s <= s_max} r_s L_{ray3}[(1 + xi/(b3-b2))^{a2-a3-2+s}]`.
pub fn psi_sum_series(
    params: &Parameters,
    ray2: Ray,
    ray3: Ray,
    x: C,
    s_max: usize,
    cfg: &QuadConfig,
) -> Result<SeriesOracle> {
    let tag = require_not_excluded(params)?;
    if tag.triple13 == TripleClass::IntLeMinus4 || params.is_int(params.da(2, 3)) {
        return Err(Error::InvalidParameters("series form needs a3-a1 not in Z<=-4 and a3-a2 not in Z".into()));
    }
    let (c13, c23, c12) = (params.db(1, 3), params.db(2, 3), params.db(1, 2));
    let k = chi_coefficient(params)?;
    let mut value = -k * upsilon_sum(ray2, x, params, cfg)?.value;
    let e23 = params.da(3, 2) - 2.0;
    let u = c23 / (-c12);
    let mut last = 0.0;
    let mut r = one();
    for s in 0..=s_max {
        let f = BorelIntegrand::constant(one()).binomial(c23, e23 + s as f64);
        let term = c13 / (-c12) * r * laplace_ray(&f, ray3, x, cfg)?.value;
        value += term;
        last = term.norm();
        r *= (2.0 + params.da(1, 2) + s as f64) / (e23 + 1.0 + s as f64) * u;
    }
    Ok(SeriesOracle { value, last_term: last, terms: s_max + 1 })
}

fn b_coeff(params: &Parameters, l: usize) -> C {
    let s = 2.0 + params.da(2, 3);
    let d = params.db(2, 3);
    let mut v = one();
    for k in 0..l {
        v *= -(s + k as f64) / d;
    }
    v
}

/// The bracket `psi` of `H_13 = x^4 psi / ((b3-b2)(b3-b1))`, case by case.
pub fn phi13_sum(params: &Parameters, ray2: Ray, ray3: Ray, x: C, cfg: &QuadConfig) -> Result<OneSumValue> {
    let tag = require_not_excluded(params)?;
    if tag.pair12 == PairClass::IntLeMinus2 && tag.pair23 == PairClass::IntLeMinus2 {
        let p = psi_hat(params, 0)?;
        let deg = match p.sigma {
            crate::formal_model::Sigma::Finite(d) => d,
            crate::formal_model::Sigma::Infinite => unreachable!("polynomial case"),
        };
        let p = psi_hat(params, deg)?;
        return Ok(OneSumValue::exact(poly_eval(&p.coeffs, x), ray3.theta));
    }
    if tag.triple13 == TripleClass::Generic {
        let f0 = f_n(params, 0)?;
        let ups = upsilon_sum(ray2, x, params, cfg)?.scale(f0);
        let sub = psi_sum(params, ray2, ray3, x, cfg)?;
        return Ok(OneSumValue { theta: ray3.theta, ..ups.sub(sub) });
    }
    let k = params.int_value(-params.da(1, 3)).expect("integer gate");
    let head = crate::formal_model::finite_double_sum(params, k - 4, k - 4, |l| b_coeff(params, l));
    let (c13, c23) = (params.db(1, 3), params.db(2, 3));
    let full = BorelIntegrand::constant(one()).binomial(c23, 1.0 + params.da(1, 2)).binomial(c13, -one());
    let shift = (k - 3) as u32;
    let tail = laplace_ray(&full, ray3, x, cfg)?.scale(x.powu(shift) * b_coeff(params, k as usize - 3));
    Ok(tail.add_const(poly_eval(&head, x)))
}

/// The analytic part `H_theta(x)`, upper unitriangular.
pub fn actual_h(params: &Parameters, rays: [Ray; 3], x: C, cfg: &QuadConfig) -> Result<[[C; 3]; 3]> {
    let (c12, c13, c23) = (params.db(1, 2), params.db(1, 3), params.db(2, 3));
    let h12 = x * x * phi_sum(1, 2, rays[0], x, params, cfg)?.value / c12;
    let h23 = x * x * phi_sum(2, 3, rays[2], x, params, cfg)?.value / c23;
    let h13 = x.powu(4) * phi13_sum(params, rays[1], rays[2], x, cfg)?.value / (c23 * c13);
    let z = C::new(0.0, 0.0);
    Ok([[one(), h12, h13], [z, one(), h23], [z, z, one()]])
}

/// `x^{alpha_j} e^{-beta_j/x}` on the sheet of `x`.
pub fn exponential_part(params: &Parameters, x: SurfacePoint) -> [C; 3] {
    let xv = x.value();
    [0, 1, 2].map(|j| x.pow(params.alpha[j]) * (-params.beta[j] / xv).exp())
}

/// `Phi_theta(x) = H_theta(x) (x^Lambda e^{-Q/x})` with rays `(theta_1, theta_2, theta_3)`
/// used for the `beta_1-beta_2`, `beta_1-beta_3` and `beta_2-beta_3` kernels.
pub fn actual_fundamental(
    params: &Parameters,
    rays: [Ray; 3],
    x: SurfacePoint,
    cfg: &QuadConfig,
) -> Result<[[C; 3]; 3]> {
    let h = actual_h(params, rays, x.value(), cfg)?;
    let e = exponential_part(params, x);
    let mut out = h;
    for row in out.iter_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= e[j];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_model::Parameters;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn beta() -> [C; 3] {
        [c(0.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)]
    }

    #[test]
    fn a1_equals_g_minus_chi_generic() {
        let p = Parameters::canonical();
        let k = chi_coefficient(&p).unwrap();
        let a1 = a1_integrand(&p);
        let g = g_integrand(&p);
        let ups = upsilon_integrand(&p);
        for xi in [c(0.1, 0.05), c(-0.2, 0.1), c(0.3, -0.2)] {
            let lhs = a1.eval_principal(xi).unwrap();
            let rhs = g.eval_principal(xi).unwrap() - k * ups.eval_principal(xi).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0), "{xi}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn a1_taylor_coefficients_match_a_n() {
        let p = Parameters::canonical();
        let a = a_coeffs(&p, 3).unwrap();
        let f = a1_integrand(&p);
        // Borel coefficients a_n / n! from a contour average of radius 0.3
        let m = 256;
        for (n, an) in a.iter().enumerate() {
            let mut acc = C::new(0.0, 0.0);
            for k in 0..m {
                let z = C::from_polar(0.3, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
                acc += f.eval_principal(z).unwrap() / z.powu(n as u32);
            }
            let coeff = acc / m as f64;
            let fact: f64 = (1..=n).map(|v| v as f64).product();
            assert!((coeff * fact - an).norm() < 1e-11 * an.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn swapped_psi_matches_truncated_series() {
        // term ratio |b3-b2|/|b2-b1| is at least 1/2 in the supported regime
        let cfg = QuadConfig::default();
        for alpha in [[0.0, 0.25, -0.5], [0.0, -0.4, 0.35]] {
            let p = Parameters::real_alpha(alpha, beta());
            for theta in [1.6, 0.4, -0.5] {
                let r = Ray::new(theta);
                let x = C::from_polar(0.02, theta + 0.2);
                let primary = psi_sum(&p, r, r, x, &cfg).unwrap().value;
                let long = psi_sum_series(&p, r, r, x, 120, &cfg).unwrap();
                let d = (primary - long.value).norm();
                assert!(d < 1e-7, "{alpha:?} {theta}: {d:e}");
                let short = psi_sum_series(&p, r, r, x, 25, &cfg).unwrap();
                let d = (primary - short.value).norm();
                assert!(d < 3.0 * short.last_term && d > 0.5 * short.last_term, "{alpha:?} {theta}: {d:e}");
            }
        }
    }

    #[test]
    fn phi_sum_polynomial_and_zero_exponent() {
        let p = Parameters::real_alpha([0.0, -2.0, -2.5], beta());
        let v = phi_sum(1, 2, Ray::new(0.3), c(0.1, 0.0), &p, &QuadConfig::default()).unwrap();
        assert_eq!(v.value, one());
        let q = Parameters::real_alpha([0.0, -4.0, -4.5], beta());
        let x = c(0.05, 0.01);
        let v = phi_sum(1, 2, Ray::new(0.3), x, &q, &QuadConfig::default()).unwrap();
        // (-2)_n / 3^n (-1)^n: 1 + 2x/3 + 2x^2/9
        let expected = 1.0 + 2.0 * x / 3.0 + 2.0 * x * x / 9.0;
        assert!((v.value - expected).norm() < 1e-15);
    }

    #[test]
    fn upsilon_zero_exponent_is_one() {
        let p = Parameters::real_alpha([0.0, 0.3, -4.0], beta());
        let v = upsilon_sum(Ray::new(1.0), C::from_polar(0.05, 1.2), &p, &QuadConfig::default()).unwrap();
        assert_eq!(v.value, one());
    }

    #[test]
    fn psi2_first_integrand_collapses() {
        // a2 - a1 = -1: the two integrals of the Z<=-4 form coincide on a common ray
        let p = Parameters::real_alpha([0.0, -1.0, -4.0], beta());
        let x = C::from_polar(0.05, 1.6);
        let v = psi_sum(&p, Ray::new(1.6), Ray::new(1.6), x, &QuadConfig::default()).unwrap();
        assert!(v.value.norm() < 1e-14, "{}", v.value);
    }

    #[test]
    fn fundamental_lower_triangle_and_diagonal() {
        let p = Parameters::canonical();
        let x = SurfacePoint::new(0.05, 1.6);
        let r = Ray::new(1.6);
        let phi = actual_fundamental(&p, [r; 3], x, &QuadConfig::default()).unwrap();
        let e = exponential_part(&p, x);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(phi[i][j], C::new(0.0, 0.0));
            }
            assert_eq!(phi[i][i], e[i]);
        }
    }

    #[test]
    fn bracket_tends_to_one() {
        let p = Parameters::canonical();
        let cfg = QuadConfig::default();
        let mut prev = f64::INFINITY;
        for r in [0.04, 0.02, 0.01, 0.005] {
            let x = C::from_polar(r, 1.6);
            let v = phi13_sum(&p, Ray::new(1.6), Ray::new(1.6), x, &cfg).unwrap();
            let d = (v.value - 1.0).norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 0.05);
    }
}
