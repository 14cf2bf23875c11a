//! Problem parameters, the integer case analysis and the formal fundamental
//! matrix `H(x) x^Lambda exp(-Q/x)` at the irregular singular point `x = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{cpow, hyp2f1, nearest_integer, HypParams, DEFAULT_INT_TOL};

type C = Complex64;

pub const DEFAULT_TRUNCATION: usize = 40;

const ARG_TOL: f64 = 1e-12;
const MODULUS_TOL: f64 = 1e-12;

fn default_int_tol() -> f64 {
    DEFAULT_INT_TOL
}

/// Exponents `alpha` and irregular coefficients `beta` of
/// `L_j = d/dx - (alpha_j/x + beta_j/x^2)`, `L = L_3 L_2 L_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub alpha: [C; 3],
    pub beta: [C; 3],
    #[serde(default = "default_int_tol")]
    pub int_tol: f64,
}

impl Parameters {
    pub fn new(alpha: [C; 3], beta: [C; 3]) -> Self {
        Parameters { alpha, beta, int_tol: DEFAULT_INT_TOL }
    }

    pub fn real_alpha(alpha: [f64; 3], beta: [C; 3]) -> Self {
        Parameters::new(alpha.map(|a| C::new(a, 0.0)), beta)
    }

    /// `alpha = (0, 1/4, -1/2)`, `beta = (0, 3, 1+i)`.
    pub fn canonical() -> Self {
        Parameters::real_alpha([0.0, 0.25, -0.5], [C::new(0.0, 0.0), C::new(3.0, 0.0), C::new(1.0, 1.0)])
    }

    pub fn with_int_tol(mut self, tol: f64) -> Self {
        self.int_tol = tol;
        self
    }

    /// `alpha_j - alpha_i` (1-based).
    pub fn da(&self, i: usize, j: usize) -> C {
        self.alpha[j - 1] - self.alpha[i - 1]
    }

    /// `beta_j - beta_i` (1-based).
    pub fn db(&self, i: usize, j: usize) -> C {
        self.beta[j - 1] - self.beta[i - 1]
    }

    pub fn int_value(&self, z: C) -> Option<i64> {
        nearest_integer(z, self.int_tol)
    }

    pub fn is_int(&self, z: C) -> bool {
        self.int_value(z).is_some()
    }

    pub fn is_int_le(&self, z: C, k: i64) -> bool {
        matches!(self.int_value(z), Some(n) if n <= k)
    }

    pub fn is_int_ge(&self, z: C, k: i64) -> bool {
        matches!(self.int_value(z), Some(n) if n >= k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Generic,
    IntLeMinus2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleClass {
    Generic,
    IntLeMinus4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `|beta_3 - beta_1| < |beta_3 - beta_2|`
    Strict,
    /// `|beta_3 - beta_1| = |beta_3 - beta_2|`
    EqualModulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub pair12: PairClass,
    pub pair23: PairClass,
    pub triple13: TripleClass,
    pub excluded: bool,
    pub regime: Regime,
}

fn arg_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

/// Validate parameters and tag the integer cases.
pub fn classify(params: &Parameters) -> Result<CaseTag> {
    let b = params.beta;
    let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if (b[i] - b[j]).norm() <= 1e-14 * scale {
            return Err(Error::InvalidParameters(format!("beta_{} = beta_{}", i + 1, j + 1)));
        }
    }
    let args = [(b[0] - b[1]).arg(), (b[0] - b[2]).arg(), (b[1] - b[2]).arg()];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if arg_distance(args[i], args[j]) <= ARG_TOL {
            return Err(Error::InvalidParameters(
                "arg(b1-b2), arg(b1-b3), arg(b2-b3) must be pairwise distinct".into(),
            ));
        }
    }
    let c13 = params.db(1, 3);
    let c23 = params.db(2, 3);
    let (m13, m23) = (c13.norm(), c23.norm());
    let regime = if (m13 - m23).abs() <= MODULUS_TOL * m23 {
        if (c13 - c23).norm() <= 1e-12 * m23 || (c13 + c23).norm() <= 1e-12 * m23 {
            return Err(Error::RegimeUnsupported("equal moduli with b3-b1 = +-(b3-b2)".into()));
        }
        if params.da(1, 2).re <= -1.0 {
            return Err(Error::RegimeUnsupported("equal moduli |b3-b1| = |b3-b2| require Re(a2-a1) > -1".into()));
        }
        Regime::EqualModulus
    } else if m13 < m23 {
        Regime::Strict
    } else {
        return Err(Error::RegimeUnsupported(format!("|b3-b1| = {m13} exceeds |b3-b2| = {m23}")));
    };
    let pair = |z: C| {
        if params.is_int_le(z, -2) {
            PairClass::IntLeMinus2
        } else {
            PairClass::Generic
        }
    };
    let d12 = params.da(1, 2);
    let d23 = params.da(2, 3);
    let d13 = params.da(1, 3);
    let triple13 = if params.is_int_le(d13, -4) { TripleClass::IntLeMinus4 } else { TripleClass::Generic };
    let excluded = !params.is_int_le(d13, -4) && params.is_int_ge(d23, -1) && !params.is_int_le(d12, -2);
    Ok(CaseTag { pair12: pair(d12), pair23: pair(d23), triple13, excluded, regime })
}

/// `classify`, rejecting the excluded logarithmic case.
pub fn require_not_excluded(params: &Parameters) -> Result<CaseTag> {
    let tag = classify(params)?;
    if tag.excluded {
        return Err(Error::ExcludedCase("a3-a1 not in Z<=-4, a3-a2 in Z>=-1 and a2-a1 not in Z<=-2".into()));
    }
    Ok(tag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "degree")]
pub enum Sigma {
    Finite(usize),
    Infinite,
}

/// Gevrey-1 certificate `|f_n| <= C A^n n!`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyBound {
    pub c: f64,
    pub a: f64,
}

impl GevreyBound {
    /// Bound for `(-1)^n (s)_n / d^n`.
    pub fn rising(s: C, d: C) -> Self {
        let m = s.norm();
        let a = if m > 1.0 { (m + 1.0) / d.norm() } else { 1.0 / d.norm() };
        GevreyBound { c: 1.0, a }
    }

    pub fn scale(self, k: f64) -> Self {
        GevreyBound { c: self.c * k, a: self.a }
    }

    pub fn sum(self, other: GevreyBound) -> Self {
        GevreyBound { c: self.c + other.c, a: self.a.max(other.a) }
    }

    /// Bound after multiplication by `x^k`.
    pub fn shift(self, k: usize) -> Self {
        GevreyBound { c: self.c * self.a.powi(-(k as i32)), a: self.a }
    }

    /// Exact bound for a finite coefficient list with growth rate `a`.
    pub fn of_polynomial(coeffs: &[C], a: f64) -> Self {
        let mut c: f64 = 0.0;
        let mut scale = 1.0;
        for (n, f) in coeffs.iter().enumerate() {
            if n > 0 {
                scale *= a * n as f64;
            }
            c = c.max(f.norm() / scale);
        }
        GevreyBound { c, a }
    }

    /// `C A^n n!`
    pub fn at(&self, n: usize) -> f64 {
        let mut v = self.c;
        for k in 1..=n {
            v *= self.a * k as f64;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalSeries {
    pub coeffs: Vec<C>,
    pub sigma: Sigma,
    pub gevrey_c: f64,
    pub gevrey_a: f64,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<C>, sigma: Sigma, bound: GevreyBound) -> Self {
        FormalSeries { coeffs, sigma, gevrey_c: bound.c, gevrey_a: bound.a }
    }

    pub fn constant(v: C) -> Self {
        FormalSeries::new(vec![v], Sigma::Finite(0), GevreyBound { c: v.norm(), a: 1.0 })
    }

    pub fn zero() -> Self {
        FormalSeries::new(vec![], Sigma::Finite(0), GevreyBound { c: 0.0, a: 1.0 })
    }

    pub fn bound(&self) -> GevreyBound {
        GevreyBound { c: self.gevrey_c, a: self.gevrey_a }
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// `sum_{n < terms} f_n x^n`
    pub fn partial_sum(&self, x: C, terms: usize) -> C {
        let n = terms.min(self.coeffs.len());
        self.coeffs[..n].iter().rev().fold(C::new(0.0, 0.0), |acc, f| acc * x + f)
    }

    /// Gevrey remainder bound `C A^N N! |x|^N`.
    pub fn remainder_bound(&self, x: C, n: usize) -> f64 {
        self.bound().at(n) * x.norm().powi(n as i32)
    }

    pub fn certificate_holds(&self) -> bool {
        let b = self.bound();
        self.coeffs.iter().enumerate().all(|(n, f)| f.norm() <= b.at(n) * (1.0 + 1e-12))
    }

    /// Multiply by `x^k / d`.
    fn shifted(&self, k: usize, d: C) -> FormalSeries {
        let mut coeffs = vec![C::new(0.0, 0.0); k];
        coeffs.extend(self.coeffs.iter().map(|f| f / d));
        let sigma = match self.sigma {
            Sigma::Finite(s) => Sigma::Finite(s + k),
            Sigma::Infinite => Sigma::Infinite,
        };
        FormalSeries::new(coeffs, sigma, self.bound().scale(1.0 / d.norm()).shift(k))
    }
}

fn rising_coeffs(s: C, d: C, n: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = C::new(1.0, 0.0);
    for k in 0..=n {
        if k > 0 {
            v *= -(s + (k - 1) as f64) / d;
        }
        out.push(v);
    }
    out
}

/// Coefficients `b_n = (-1)^n (2 + a_j - a_i)_n / (b_j - b_i)^n` of `phi_ij`.
pub fn phi_hat(i: usize, j: usize, params: &Parameters, n: usize) -> Result<FormalSeries> {
    if !matches!((i, j), (1, 2) | (2, 3)) {
        return Err(Error::InvalidParameters(format!("phi_hat defined for (1,2) and (2,3), got ({i},{j})")));
    }
    let s = 2.0 + params.da(i, j);
    let d = params.db(i, j);
    if d.norm() == 0.0 {
        return Err(Error::InvalidParameters(format!("beta_{i} = beta_{j}")));
    }
    let bound = GevreyBound::rising(s, d);
    if params.is_int_le(params.da(i, j), -2) {
        let deg = (-params.int_value(s).expect("integer gate")) as usize;
        let mut coeffs = rising_coeffs(s, d, deg.min(n));
        coeffs.truncate(deg + 1);
        return Ok(FormalSeries::new(coeffs, Sigma::Finite(deg), bound));
    }
    Ok(FormalSeries::new(rising_coeffs(s, d, n), Sigma::Infinite, bound))
}

fn ratio_13_23(params: &Parameters) -> Result<C> {
    let z = params.db(1, 3) / params.db(2, 3);
    if z.norm() > 1.0 + MODULUS_TOL {
        return Err(Error::DivergentSeries(format!("|(b3-b1)/(b3-b2)| = {} > 1", z.norm())));
    }
    Ok(z)
}

/// `F(alpha; beta; n) = 2F1(1, 2+n+a3-a2; 4+n+a3-a1; (b3-b1)/(b3-b2))`.
pub fn f_n(params: &Parameters, n: usize) -> Result<C> {
    if params.is_int_le(params.da(1, 3), -4) {
        return Err(Error::InvalidParameters("F(alpha;beta;n) needs a3-a1 not in Z<=-4".into()));
    }
    let z = ratio_13_23(params)?;
    let nf = n as f64;
    let p = HypParams::new(C::new(1.0, 0.0), 2.0 + nf + params.da(2, 3), 4.0 + nf + params.da(1, 3));
    hyp2f1(&p, z)
}

/// `F~(alpha; beta; n) = 2F1(1, a1-a2-1+n; 1+n; (b3-b1)/(b3-b2))`.
pub fn f_tilde_n(params: &Parameters, n: usize) -> Result<C> {
    if !params.is_int_le(params.da(1, 3), -4) {
        return Err(Error::InvalidParameters("F~(alpha;beta;n) needs a3-a1 in Z<=-4".into()));
    }
    let z = ratio_13_23(params)?;
    let nf = n as f64;
    let p = HypParams::new(C::new(1.0, 0.0), params.da(2, 1) - 1.0 + nf, C::new(1.0 + nf, 0.0));
    hyp2f1(&p, z)
}

/// Closed form `F~(alpha; beta; 0) = ((b1-b2)/(b3-b2))^{a2-a1+1}`.
pub fn f_tilde_0_closed(params: &Parameters) -> C {
    cpow(params.db(2, 1) / params.db(2, 3), params.da(1, 2) + 1.0)
}

fn max_norm<I: Iterator<Item = Result<C>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for v in it {
        m = m.max(v?.norm());
    }
    Ok(m)
}

/// Finite double sum `sum_l coef(l) x^l sum_{s <= top-l} (-1)^s (4+l+a3-a1)_s x^s/(b3-b1)^s`.
pub(crate) fn finite_double_sum(params: &Parameters, l_max: i64, top: i64, coef: impl Fn(usize) -> C) -> Vec<C> {
    if top < 0 || l_max < 0 {
        return vec![];
    }
    let c13 = params.db(1, 3);
    let mut out = vec![C::new(0.0, 0.0); top as usize + 1];
    for l in 0..=(l_max.min(top) as usize) {
        let cl = coef(l);
        let inner = rising_coeffs(4.0 + l as f64 + params.da(1, 3), c13, top as usize - l);
        for (s, v) in inner.iter().enumerate() {
            out[l + s] += cl * v;
        }
    }
    out
}

/// `a_n = b_n (F(alpha; beta; n) - 1)` for `n <= min(n_max, sigma)`.
pub fn a_coeffs(params: &Parameters, n_max: usize) -> Result<Vec<C>> {
    if params.is_int_le(params.da(1, 3), -4) {
        return Err(Error::InvalidParameters("a_n needs a3-a1 not in Z<=-4".into()));
    }
    let top = if params.is_int_le(params.da(2, 3), -2) {
        (params.int_value(params.da(3, 2) - 2.0).expect("integer gate") as usize).min(n_max)
    } else {
        n_max
    };
    let b = rising_coeffs(2.0 + params.da(2, 3), params.db(2, 3), top);
    (0..=top).map(|k| Ok(b[k] * (f_n(params, k)? - 1.0))).collect()
}

/// The series `psi` with `H_13 = x^4 psi / ((b3-b2)(b3-b1))`.
pub fn psi_hat(params: &Parameters, n: usize) -> Result<FormalSeries> {
    let tag = require_not_excluded(params)?;
    let c13 = params.db(1, 3);
    let c23 = params.db(2, 3);
    let d23 = params.da(2, 3);
    let d13 = params.da(1, 3);
    let b_coef = rising_coeffs(2.0 + d23, c23, n.max(1));
    let b_bound = GevreyBound::rising(2.0 + d23, c23);
    let both_pairs = tag.pair12 == PairClass::IntLeMinus2 && tag.pair23 == PairClass::IntLeMinus2;

    if both_pairs {
        let l_max = params.int_value(params.da(3, 2) - 2.0).expect("integer gate");
        let top = params.int_value(-d13 - 4.0).expect("integer gate");
        let coeffs = finite_double_sum(params, l_max, top, |l| b_coef_at(&b_coef, 2.0 + d23, c23, l));
        let degree = coeffs.len().saturating_sub(1);
        let bound = GevreyBound::of_polynomial(&coeffs, 1.0);
        let mut coeffs = coeffs;
        coeffs.truncate(n + 1);
        return Ok(FormalSeries::new(coeffs, Sigma::Finite(degree), bound));
    }

    if tag.triple13 == TripleClass::Generic {
        let f0 = f_n(params, 0)?;
        let s0 = rising_coeffs(4.0 + d13, c13, n);
        let sigma = if tag.pair23 == PairClass::IntLeMinus2 {
            Some(params.int_value(params.da(3, 2) - 2.0).expect("integer gate") as usize)
        } else {
            None
        };
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let a_k = match sigma {
                Some(s) if k > s => C::new(0.0, 0.0),
                _ => b_coef[k] * (f_n(params, k)? - 1.0),
            };
            coeffs.push(f0 * s0[k] - a_k);
        }
        let c_f = max_norm((0..=n.max(200)).map(|k| f_n(params, k)))?.max((c23 / params.db(2, 1)).norm());
        let bound = GevreyBound::rising(4.0 + d13, c13).scale(f0.norm()).sum(b_bound.scale(c_f + 1.0));
        return Ok(FormalSeries::new(coeffs, Sigma::Infinite, bound));
    }

    // a3 - a1 in Z<=-4
    let k = params.int_value(-d13).expect("integer gate") as usize;
    let head = finite_double_sum(params, k as i64 - 4, k as i64 - 4, |l| b_coef_at(&b_coef, 2.0 + d23, c23, l));
    let head_bound = GevreyBound::of_polynomial(&head, 1.0);
    let shift = k - 3;
    let b_shift = b_coef_at(&b_coef, 2.0 + d23, c23, shift);
    let ft0 = f_tilde_n(params, 0)?;
    let c_coef = rising_coeffs(params.da(2, 1) - 1.0, c23, n);
    let s_tilde = rising_coeffs(C::new(1.0, 0.0), c13, n);
    let mut bracket = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let a_m = c_coef[m] * (f_tilde_n(params, m)? - 1.0);
        bracket.push(ft0 * s_tilde[m] - a_m);
    }
    let c_ft = max_norm((0..=n.max(200)).map(|m| f_tilde_n(params, m)))?;
    let bracket_bound = GevreyBound::rising(C::new(1.0, 0.0), c13)
        .scale(ft0.norm())
        .sum(GevreyBound::rising(params.da(2, 1) - 1.0, c23).scale(c_ft + 1.0));
    let mut coeffs = vec![C::new(0.0, 0.0); n + 1];
    for (i, h) in head.iter().enumerate().take(n + 1) {
        coeffs[i] += h;
    }
    for (m, v) in bracket.iter().enumerate() {
        if m + shift <= n {
            coeffs[m + shift] += b_shift * v;
        }
    }
    let bound = head_bound.sum(bracket_bound.scale(b_shift.norm()).shift(shift));
    Ok(FormalSeries::new(coeffs, Sigma::Infinite, bound))
}

fn b_coef_at(cache: &[C], s: C, d: C, l: usize) -> C {
    if l < cache.len() {
        cache[l]
    } else {
        rising_coeffs(s, d, l)[l]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalFundamental {
    pub h: [[FormalSeries; 3]; 3],
    pub lambda: [C; 3],
    pub q: [C; 3],
}

impl FormalFundamental {
    pub fn entry(&self, i: usize, j: usize) -> &FormalSeries {
        &self.h[i - 1][j - 1]
    }
}

/// `H_12 = x^2 phi_12/(b2-b1)`, `H_23 = x^2 phi_23/(b3-b2)`, `H_13 = x^4 psi/((b3-b2)(b3-b1))`.
pub fn formal_fundamental(params: &Parameters, n: usize) -> Result<FormalFundamental> {
    require_not_excluded(params)?;
    let one = FormalSeries::constant(C::new(1.0, 0.0));
    let zero = FormalSeries::zero();
    let h12 = phi_hat(1, 2, params, n)?.shifted(2, params.db(1, 2));
    let h23 = phi_hat(2, 3, params, n)?.shifted(2, params.db(2, 3));
    let h13 = psi_hat(params, n)?.shifted(4, params.db(2, 3) * params.db(1, 3));
    let trim = |mut s: FormalSeries| {
        s.coeffs.truncate(n + 1);
        s
    };
    Ok(FormalFundamental {
        h: [[one.clone(), trim(h12), trim(h13)], [zero.clone(), one.clone(), trim(h23)], [zero.clone(), zero, one]],
        lambda: params.alpha,
        q: params.beta,
    })
}

/// `exp(2 pi i alpha_j)`.
pub fn formal_monodromy(params: &Parameters) -> [C; 3] {
    params.alpha.map(|a| (C::new(0.0, 2.0 * std::f64::consts::PI) * a).exp())
}

/// `(-a1, -a2-1, -a3-2)`.
pub fn exponents_at_infinity(params: &Parameters) -> [C; 3] {
    [-params.alpha[0], -params.alpha[1] - 1.0, -params.alpha[2] - 2.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn beta() -> [C; 3] {
        [c(0.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)]
    }

    #[test]
    fn classify_examples() {
        let t = classify(&Parameters::canonical()).unwrap();
        assert_eq!(t.pair12, PairClass::Generic);
        assert_eq!(t.pair23, PairClass::Generic);
        assert_eq!(t.triple13, TripleClass::Generic);
        assert!(!t.excluded);
        assert_eq!(t.regime, Regime::Strict);

        let t = classify(&Parameters::real_alpha([0.0, -3.0, -5.0], beta())).unwrap();
        assert_eq!(t.pair12, PairClass::IntLeMinus2);
        assert_eq!(t.pair23, PairClass::IntLeMinus2);
        assert_eq!(t.triple13, TripleClass::IntLeMinus4);

        assert!(!classify(&Parameters::real_alpha([0.0, 0.5, 0.0], beta())).unwrap().excluded);
        assert!(classify(&Parameters::real_alpha([0.0, 0.5, 1.5], beta())).unwrap().excluded);
    }

    #[test]
    fn classify_rejects_bad_input() {
        let p = Parameters::real_alpha([0.0; 3], [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)]);
        assert!(matches!(classify(&p), Err(Error::InvalidParameters(_))));
        let p = Parameters::real_alpha([0.0; 3], [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(classify(&p), Err(Error::InvalidParameters(_))));
        let p = Parameters::real_alpha([0.0; 3], [c(0.0, 0.0), c(1.0, 1.0), c(5.0, 0.0)]);
        assert!(matches!(classify(&p), Err(Error::RegimeUnsupported(_))));
    }

    #[test]
    fn phi_hat_examples() {
        let p = Parameters::canonical();
        let s = phi_hat(1, 2, &p, 10).unwrap();
        assert_eq!(s.coeffs[0], c(1.0, 0.0));
        assert!((s.coeffs[1] - c(-0.75, 0.0)).norm() < 1e-15);
        assert_eq!(s.sigma, Sigma::Infinite);
        let q = Parameters::real_alpha([0.0, -2.0, -0.5], beta());
        let s = phi_hat(1, 2, &q, 10).unwrap();
        assert_eq!(s.coeffs, vec![c(1.0, 0.0)]);
        assert_eq!(s.sigma, Sigma::Finite(0));
    }

    #[test]
    fn psi_leading_coefficient_is_one() {
        let p = Parameters::canonical();
        let s = psi_hat(&p, 12).unwrap();
        assert!((s.coeffs[0] - c(1.0, 0.0)).norm() < 1e-14);
        let a0 = f_n(&p, 0).unwrap() - 1.0;
        assert!((f_n(&p, 0).unwrap() - a0 - s.coeffs[0]).norm() < 1e-14);
    }

    #[test]
    fn f_n_limit() {
        // the approach is O(1/n): n |F_n - L| settles to a constant
        let p = Parameters::canonical();
        let lim = p.db(2, 3) / p.db(2, 1);
        let dev = |n: usize| (f_n(&p, n).unwrap() - lim).norm();
        let mut prev = dev(10);
        for n in [25, 50, 100, 200, 400, 800] {
            let d = dev(n);
            assert!(d < prev);
            prev = d;
        }
        let (s400, s800) = (400.0 * dev(400), 800.0 * dev(800));
        assert!((s400 - s800).abs() < 0.01 * s800);
        assert!(dev(800) < 1e-2);
    }

    #[test]
    fn f_n_finite_sigma() {
        let p = Parameters::real_alpha([0.0, 0.3, -1.7], beta());
        assert!((f_n(&p, 0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn f_tilde_closed_form() {
        let p = Parameters::real_alpha([0.0, 0.5, -4.0], beta());
        let v = f_tilde_n(&p, 0).unwrap();
        assert!((v - f_tilde_0_closed(&p)).norm() < 1e-12);
        let q = Parameters::real_alpha([0.0, 0.0, -4.0], beta());
        assert!((f_tilde_n(&q, 1).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn excluded_case_rejected() {
        let p = Parameters::real_alpha([0.0, 0.5, 1.5], beta());
        assert!(matches!(psi_hat(&p, 5), Err(Error::ExcludedCase(_))));
        assert!(matches!(formal_fundamental(&p, 5), Err(Error::ExcludedCase(_))));
    }

    #[test]
    fn case_three_is_polynomial() {
        let p = Parameters::real_alpha([0.0, -3.0, -5.0], beta());
        let s = psi_hat(&p, 12).unwrap();
        assert_eq!(s.sigma, Sigma::Finite(1));
        assert_eq!(s.coeffs.len(), 2);
    }

    #[test]
    fn formal_fundamental_shape() {
        let p = Parameters::canonical();
        let f = formal_fundamental(&p, 12).unwrap();
        for i in 1..=3 {
            assert_eq!(f.entry(i, i).coeffs, vec![c(1.0, 0.0)]);
            for j in 1..i {
                assert!(f.entry(i, j).coeffs.is_empty());
            }
        }
        let h12 = f.entry(1, 2);
        assert_eq!(h12.coeffs[0], c(0.0, 0.0));
        assert!((h12.coeffs[2] - 1.0 / p.db(1, 2)).norm() < 1e-15);
        for e in [f.entry(1, 2), f.entry(2, 3), f.entry(1, 3)] {
            assert!(e.certificate_holds());
        }
    }

    #[test]
    fn monodromy_and_infinity_exponents() {
        let p = Parameters::real_alpha([0.0, 0.5, 0.25], beta());
        let m = formal_monodromy(&p);
        assert!((m[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m[1] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((m[2] - c(0.0, 1.0)).norm() < 1e-15);
        let p = Parameters::real_alpha([0.0, -2.0, -4.0], beta());
        assert_eq!(exponents_at_infinity(&p), [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let p = Parameters::real_alpha([1.0, 2.0, 3.0], beta());
        assert_eq!(exponents_at_infinity(&p), [c(-1.0, 0.0), c(-3.0, 0.0), c(-5.0, 0.0)]);
    }
}
