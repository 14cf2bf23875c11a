//! Jumps of 1-sums across singular directions.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_model::Parameters;
use crate::laplace_engine::{actual_h, exponential_part, wrap_angle, OneSumValue, QuadConfig, Ray, SurfacePoint};
use crate::matrix::{self, Mat3};
use crate::par;
use crate::stokes_core::{stokes_matrices, StokesData, STOKES_ENTRY};

type C = Complex64;

/// Angle between `arg x` and the singular direction used by [`jump_samples`].
pub const SAMPLE_OFFSET: f64 = 1.4;
pub const DEFAULT_EPS: f64 = 0.05;
const ZERO_MU: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpMeasurement {
    pub theta_sing: f64,
    pub epsilon: f64,
    pub samples: Vec<SurfacePoint>,
    pub measured_mu: C,
    pub residual: f64,
    /// Summed quadrature error estimates divided by the basis, maximised over samples.
    pub noise: f64,
}

/// `theta` represented in `(-3pi/2, pi/2]`.
pub fn representative(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t > FRAC_PI_2 {
        t - 2.0 * PI
    } else {
        t
    }
}

/// `n` points with `arg x = representative(theta) + SAMPLE_OFFSET` and moduli chosen so
/// that `|e^{-b/x}|` stays above `e^{-8}`.
pub fn jump_samples(theta: f64, b: C, n: usize) -> Vec<SurfacePoint> {
    let arg = representative(theta) + SAMPLE_OFFSET;
    let r_lo = (b.norm() * SAMPLE_OFFSET.cos() / 8.0).max(0.02);
    let r_hi = (1.6 * r_lo).max(0.1);
    (0..n)
        .map(|k| {
            let t = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
            SurfacePoint::new(r_lo + t * (r_hi - r_lo), arg)
        })
        .collect()
}

fn basis_value(basis: (C, C), x: &SurfacePoint) -> Result<C> {
    let v = x.pow(basis.0) * (-basis.1 / x.value()).exp();
    if !(v.norm() > 1e-280) || !v.norm().is_finite() {
        return Err(Error::IllConditioned(format!("|x^c e^(-b/x)| = {:e} at x = {}", v.norm(), x.value())));
    }
    Ok(v)
}

fn summarize(ratios: &[C], noise: f64) -> (C, f64) {
    let mean = ratios.iter().sum::<C>() / ratios.len() as f64;
    let absolute = mean.norm() <= ZERO_MU.max(10.0 * noise);
    let residual = ratios
        .iter()
        .map(|r| {
            let d = (r - mean).norm();
            if absolute {
                d
            } else {
                d / mean.norm()
            }
        })
        .fold(0.0, f64::max);
    (mean, residual)
}

/// Mean of `(f_{theta-eps}(x) - f_{theta+eps}(x)) / (x^c e^{-b/x})` over `xs`.
pub fn measure_jump<F>(
    family: F,
    theta_sing: f64,
    basis: (C, C),
    eps: f64,
    xs: &[SurfacePoint],
    cfg: &QuadConfig,
) -> Result<JumpMeasurement>
where
    F: Fn(Ray, C) -> Result<OneSumValue> + Sync + Send,
{
    if !(eps >= 2.0 * cfg.delta_min) || xs.is_empty() {
        return Err(Error::InvalidParameters(format!("jump needs eps >= 2 delta_min and samples, eps = {eps}")));
    }
    let per_x = par::try_map(xs, |x| -> Result<(C, f64)> {
        let b = basis_value(basis, x)?;
        let minus = family(Ray::new(theta_sing - eps), x.value())?;
        let plus = family(Ray::new(theta_sing + eps), x.value())?;
        Ok(((minus.value - plus.value) / b, (minus.est_error + plus.est_error) / b.norm()))
    })?;
    let ratios: Vec<C> = per_x.iter().map(|p| p.0).collect();
    let noise = per_x.iter().map(|p| p.1).fold(0.0, f64::max);
    let (measured_mu, residual) = summarize(&ratios, noise);
    Ok(JumpMeasurement { theta_sing, epsilon: eps, samples: xs.to_vec(), measured_mu, residual, noise })
}

/// Measured Stokes matrix entries for one singular direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionCheck {
    pub index: usize,
    pub theta: f64,
    pub entry: (usize, usize),
    pub closed_form: C,
    pub measured: C,
    /// Spread of the per-sample values.
    pub residual: f64,
    /// `|measured - closed|`, relative when the closed form is nonzero.
    pub deviation: f64,
    pub relative: bool,
    /// Largest entry of `(H+)^{-1} H- - I` outside the target position.
    pub off_target: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesReport {
    pub data: StokesData,
    pub directions: Vec<DirectionCheck>,
    pub pass: bool,
}

/// `(H+)^{-1} H-` at one point, with every ray on the same side.
pub fn lateral_ratio(params: &Parameters, theta: f64, eps: f64, x: C, cfg: &QuadConfig) -> Result<(Mat3, Mat3)> {
    let hm = actual_h(params, [Ray::new(theta - eps); 3], x, cfg)?;
    let hp = actual_h(params, [Ray::new(theta + eps); 3], x, cfg)?;
    Ok((matrix::mul(&matrix::inv_unit_upper(&hp), &hm), hp))
}

/// Measure the Stokes matrix of one direction at `xs`.
pub fn measure_direction(
    params: &Parameters,
    theta: f64,
    entry: (usize, usize),
    eps: f64,
    xs: &[SurfacePoint],
    cfg: &QuadConfig,
) -> Result<(JumpMeasurement, f64)> {
    let (i, j) = entry;
    let basis = (params.alpha[i] - params.alpha[j], params.beta[i] - params.beta[j]);
    let per_x = par::try_map(xs, |x| -> Result<(C, f64, f64)> {
        let e = exponential_part(params, *x);
        let (m, hp) = lateral_ratio(params, theta, eps, x.value(), cfg)?;
        let b = basis_value(basis, x)?;
        let scale = e[i] / e[j];
        debug_assert!((scale - b).norm() <= 1e-10 * b.norm());
        let mut off: f64 = 0.0;
        for (p, q) in STOKES_ENTRY {
            if (p, q) != entry {
                off = off.max(m[p][q].norm() / hp[p][q].norm().max(1.0));
            }
        }
        let noise = cfg.tol * hp.iter().flatten().map(|v| v.norm()).fold(1.0, f64::max) / b.norm();
        Ok((m[i][j] / b, off, noise))
    })?;
    let ratios: Vec<C> = per_x.iter().map(|p| p.0).collect();
    let noise = per_x.iter().map(|p| p.2).fold(0.0, f64::max);
    let off = per_x.iter().map(|p| p.1).fold(0.0, f64::max);
    let (measured_mu, residual) = summarize(&ratios, noise);
    Ok((JumpMeasurement { theta_sing: theta, epsilon: eps, samples: xs.to_vec(), measured_mu, residual, noise }, off))
}

/// Compare `(Phi+)^{-1} Phi-` with the closed-form Stokes matrices in every direction.
pub fn check_stokes(params: &Parameters, tol: f64, cfg: &QuadConfig) -> Result<StokesReport> {
    let data = stokes_matrices(params)?;
    let mut directions = Vec::with_capacity(3);
    for k in 0..3 {
        let entry = STOKES_ENTRY[k];
        let b = params.beta[entry.0] - params.beta[entry.1];
        let xs = jump_samples(data.theta[k], b, 5);
        let (jm, off_target) = measure_direction(params, data.theta[k], entry, DEFAULT_EPS, &xs, cfg)?;
        let closed = data.mu[k];
        let relative = closed.norm() > 0.0;
        let deviation =
            if relative { (jm.measured_mu - closed).norm() / closed.norm() } else { (jm.measured_mu - closed).norm() };
        directions.push(DirectionCheck {
            index: k + 1,
            theta: data.theta[k],
            entry,
            closed_form: closed,
            measured: jm.measured_mu,
            residual: jm.residual,
            deviation,
            relative,
            off_target,
            pass: deviation <= tol && off_target <= tol,
        });
    }
    let pass = directions.iter().all(|d| d.pass);
    Ok(StokesReport { data, directions, pass })
}
