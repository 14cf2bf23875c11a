//! Gevrey-1 asymptotics of 1-sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formal_model::FormalSeries;
use crate::laplace_engine::{OneSumValue, Ray};

type C = Complex64;

pub const GEVREY_ORDERS: [usize; 3] = [5, 10, 15];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GevreyRow {
    pub x: C,
    pub n: usize,
    pub remainder: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GevreyReport {
    pub theta: f64,
    pub rows: Vec<GevreyRow>,
    pub pass: bool,
}

/// `|f(x) - sum_{n<N} f_n x^n| <= C A^N N! |x|^N` for each `N` in `orders`.
pub fn gevrey_check<F>(series: &FormalSeries, sum_fn: F, theta: f64, xs: &[C], orders: &[usize]) -> Result<GevreyReport>
where
    F: Fn(Ray, C) -> Result<OneSumValue> + Sync + Send,
{
    let per_x = crate::par::try_map(xs, |&x| -> Result<Vec<GevreyRow>> {
        let f = sum_fn(Ray::new(theta), x)?;
        Ok(orders
            .iter()
            .map(|&n| {
                let remainder = (f.value - series.partial_sum(x, n)).norm();
                let bound = series.remainder_bound(x, n);
                GevreyRow { x, n, remainder, bound, pass: remainder <= bound + f.est_error }
            })
            .collect())
    })?;
    let rows: Vec<GevreyRow> = per_x.into_iter().flatten().collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(GevreyReport { theta, rows, pass })
}

/// Stirling-type bound on the remainder at the optimal order `N* = floor(1/(A|x|))`:
/// `C e^{1/2 - 1/(A|x|)} sqrt(2 pi / (A|x|))`.
pub fn optimal_truncation(series: &FormalSeries, x: C) -> (usize, f64) {
    let t = 1.0 / (series.gevrey_a * x.norm());
    let n = t.floor().max(0.0) as usize;
    let bound = series.gevrey_c * (0.5 - t).exp() * (2.0 * std::f64::consts::PI * t).sqrt();
    (n, bound)
}
