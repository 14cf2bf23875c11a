//! Closed-form Stokes data.
//!
//! Half-plane selection reduces arguments to `(-pi/2, 3pi/2]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_model::{classify, f_n, formal_monodromy, CaseTag, Parameters, Regime, TripleClass};
use crate::matrix::{self, Mat3};
use crate::special_fn::{cpow, gamma, recip_gamma, rising_factorial};

type C = Complex64;

fn two_pi_i() -> C {
    C::new(0.0, 2.0 * PI)
}

fn e_pi_i(z: C) -> C {
    (C::new(0.0, PI) * z).exp()
}

/// Argument reduced to `(-pi/2, 3pi/2]`.
pub fn half_plane_arg(z: C) -> f64 {
    let a = z.arg();
    if a <= -PI / 2.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `true` for `pi/2 < arg z <= 3pi/2`.
fn first_half_plane(z: C) -> bool {
    half_plane_arg(z) > PI / 2.0
}

/// `(arg(b1-b2), arg(b1-b3), arg(b2-b3))` in `[0, 2pi)`.
pub fn singular_directions(params: &Parameters) -> [f64; 3] {
    [params.db(2, 1), params.db(3, 1), params.db(3, 2)].map(|z| z.arg().rem_euclid(2.0 * PI))
}

/// `mu_1` for `(1, 2)` and `mu_3` for `(2, 3)`.
pub fn mu_pair(i: usize, j: usize, params: &Parameters) -> Result<C> {
    if !matches!((i, j), (1, 2) | (2, 3)) {
        return Err(Error::InvalidParameters(format!("mu_pair defined for (1,2) and (2,3), got ({i},{j})")));
    }
    let e = params.da(j, i) - 1.0;
    let rg = recip_gamma(2.0 + params.da(i, j));
    let dji = params.db(i, j);
    if first_half_plane(dji) {
        Ok(two_pi_i() * rg / cpow(-dji, e))
    } else {
        Ok(-two_pi_i() * e_pi_i(params.da(j, i)) * rg / cpow(dji, e))
    }
}

fn equal_modulus_supported(params: &Parameters, tag: &CaseTag) -> bool {
    match tag.triple13 {
        TripleClass::Generic => !params.is_int(params.da(2, 3)),
        TripleClass::IntLeMinus4 => params.is_int_ge(params.da(1, 2), -1) || !params.is_int(params.da(2, 3)),
    }
}

/// Closed-form branch used for `mu_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mu2Case {
    /// `a3-a1` not in `Z<=-4`, `a3-a2` not an integer.
    NonIntegerA3A2,
    /// `a3-a1` not in `Z<=-4`, `a3-a2` in `Z<=-2`.
    A3A2LeMinus2,
    /// `a3-a1` not in `Z<=-4`, `a3-a2` in `Z>=-1`, `a2-a1` in `Z<=-2`.
    A3A2GeMinus1,
    /// `a3-a1` in `Z<=-4`, `a2-a1` in `Z>=-1`.
    TripleA2A1GeMinus1,
    /// `a3-a1` in `Z<=-4`, `a2-a1` not in `Z>=-1`.
    TripleA2A1Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mu2Branch {
    pub case: Mu2Case,
    /// `arg(b3 - b1)` in `(-pi/2, pi/2]`.
    pub first_half_plane: bool,
}

/// Select the `mu_2` branch, rejecting uncovered cases.
pub fn mu_13_branch(params: &Parameters, tag: &CaseTag) -> Result<Mu2Branch> {
    if tag.excluded {
        return Err(Error::ExcludedCase("a3-a1 not in Z<=-4, a3-a2 in Z>=-1 and a2-a1 not in Z<=-2".into()));
    }
    if tag.regime == Regime::EqualModulus && !equal_modulus_supported(params, tag) {
        return Err(Error::RegimeUnsupported(
            "|b3-b1| = |b3-b2| covers only the generic case and the a3-a1 in Z<=-4 sub-cases".into(),
        ));
    }
    let (d12, d23) = (params.da(1, 2), params.da(2, 3));
    let case = if tag.triple13 == TripleClass::IntLeMinus4 {
        if params.is_int_ge(d12, -1) {
            Mu2Case::TripleA2A1GeMinus1
        } else if !params.is_int(d23) || params.is_int_le(d23, -2) {
            Mu2Case::TripleA2A1Other
        } else {
            return Err(Error::CaseNotCovered("a3-a1 in Z<=-4 with a2-a1 not in Z>=-1 and a3-a2 in Z>=-1".into()));
        }
    } else if !params.is_int(d23) {
        Mu2Case::NonIntegerA3A2
    } else if params.is_int_le(d23, -2) {
        Mu2Case::A3A2LeMinus2
    } else {
        Mu2Case::A3A2GeMinus1
    };
    Ok(Mu2Branch { case, first_half_plane: first_half_plane(params.db(1, 3)) })
}

/// `mu_2`, by case and half-plane of `arg(b3 - b1)`.
pub fn mu_13(params: &Parameters, tag: &CaseTag) -> Result<C> {
    let branch = mu_13_branch(params, tag)?;
    let (c12, c13, c23) = (params.db(1, 2), params.db(1, 3), params.db(2, 3));
    let (d12, d13, d23) = (params.da(1, 2), params.da(1, 3), params.da(2, 3));
    let first = branch.first_half_plane;
    let signed = |v: C| if first { -v } else { v };
    let base = || cpow(c23, -d23 - 1.0) * cpow(-c12, -d12 - 1.0);

    let extra = match branch.case {
        Mu2Case::TripleA2A1GeMinus1 => {
            let v = two_pi_i() * gamma(-d23 - 1.0)? * recip_gamma(2.0 + d12) / cpow(c23, -d13 - 2.0);
            return Ok(signed(v));
        }
        Mu2Case::TripleA2A1Other => {
            let k = params.int_value(-d13).expect("integer gate");
            let sign = if (k - 3) % 2 == 0 { 1.0 } else { -1.0 };
            let v = two_pi_i() * sign * gamma(-d12 - 1.0)? * recip_gamma(2.0 + d23) / base();
            return Ok(signed(v));
        }
        Mu2Case::NonIntegerA3A2 => gamma(-d23 - 1.0)? * recip_gamma(2.0 + d12) / base(),
        Mu2Case::A3A2LeMinus2 => C::new(0.0, 0.0),
        Mu2Case::A3A2GeMinus1 => {
            let m = params.int_value(d13 + 3.0).expect("integer gate") as usize;
            1.0 / (base() * rising_factorial(-d23 - 1.0, m))
        }
    };
    let f0 = f_n(params, 0)?;
    let rg4 = recip_gamma(4.0 + d13);
    if first {
        let ft = f0 * rg4 / (c23 * cpow(-c13, -d13 - 3.0));
        Ok(two_pi_i() * (ft - extra))
    } else {
        let ph = e_pi_i(-d13);
        let ft = f0 * rg4 / (c23 * cpow(c13, -d13 - 3.0));
        Ok(-two_pi_i() * ph * (ft + ph * extra))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesData {
    /// `(theta_1, theta_2, theta_3)` in `[0, 2pi)`.
    pub theta: [f64; 3],
    /// `(mu_1, mu_2, mu_3)`.
    pub mu: [C; 3],
    /// `St_{theta_1}`, `St_{theta_2}`, `St_{theta_3}`.
    pub st: [Mat3; 3],
    pub formal_monodromy: [C; 3],
    pub case: CaseTag,
    pub mu2_branch: Mu2Branch,
}

/// Position of the multiplier of each Stokes matrix.
pub const STOKES_ENTRY: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

pub fn stokes_matrices(params: &Parameters) -> Result<StokesData> {
    let tag = classify(params)?;
    let mu = [mu_pair(1, 2, params)?, mu_13(params, &tag)?, mu_pair(2, 3, params)?];
    let st = [0, 1, 2].map(|k| {
        let mut m = matrix::identity();
        let (i, j) = STOKES_ENTRY[k];
        m[i][j] = mu[k];
        m
    });
    Ok(StokesData {
        theta: singular_directions(params),
        mu,
        st,
        formal_monodromy: formal_monodromy(params),
        mu2_branch: mu_13_branch(params, &tag)?,
        case: tag,
    })
}

/// `M St St St` with the factors ordered by increasing direction in `[0, 2pi)`.
pub fn monodromy_product(data: &StokesData) -> Mat3 {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| data.theta[a].total_cmp(&data.theta[b]));
    let mut m = matrix::diag(data.formal_monodromy);
    for k in order {
        m = matrix::mul(&m, &data.st[k]);
    }
    m
}

/// `M St M^{-1}`.
pub fn conjugate_by_monodromy(data: &StokesData, st: &Mat3) -> Mat3 {
    let m = matrix::diag(data.formal_monodromy);
    let minv = matrix::diag(data.formal_monodromy.map(|v| 1.0 / v));
    matrix::mul(&matrix::mul(&m, st), &minv)
}
