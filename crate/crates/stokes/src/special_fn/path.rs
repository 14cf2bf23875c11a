//! Analytic continuation of 2F1 by Taylor stepping along straight segments.
//!
//! The hypergeometric equation `z(1-z)F'' + [c - (a+b+1)z]F' - abF = 0` gives a
//! three-term recurrence for the Taylor coefficients at any regular point, so
//! `(F, F')` can be transported along a path that avoids `z = 0` and `z = 1`.
//! Every step stays within half the distance to the nearest singular point.

use num_complex::Complex64;

use super::hyp::{hyp2f1_series, HypParams};
use crate::error::{Error, Result};

type C = Complex64;

const START_RADIUS: f64 = 0.5;
const STEP_FRACTION: f64 = 0.5;
const MAX_TAYLOR_TERMS: usize = 4000;
const MAX_NODES: usize = 100_000;

/// Value and derivative at `z0 + t` from the Taylor expansion at `z0`.
pub(crate) fn taylor_step(p: &HypParams, z0: C, f0: C, df0: C, t: C) -> (C, C) {
    let (a, b, c) = (p.a, p.b, p.c);
    let p0 = z0 * (1.0 - z0);
    let p1 = 1.0 - 2.0 * z0;
    let q0 = c - (a + b + 1.0) * z0;
    let q1 = -(a + b + 1.0);
    let r = -a * b;
    let mut y_prev = f0;
    let mut y_cur = df0;
    let mut tn = t;
    let mut f = f0 + df0 * t;
    let mut df = df0;
    let mut small = 0;
    for n in 0..MAX_TAYLOR_TERMS {
        let nf = n as f64;
        let y_next = -((p1 * nf * (nf + 1.0) + q0 * (nf + 1.0)) * y_cur + (-nf * (nf - 1.0) + q1 * nf + r) * y_prev)
            / (p0 * (nf + 2.0) * (nf + 1.0));
        let dterm = y_next * (nf + 2.0) * tn;
        tn *= t;
        let term = y_next * tn;
        f += term;
        df += dterm;
        if term.norm() <= 1e-17 * f.norm() && dterm.norm() <= 1e-17 * df.norm().max(f.norm()) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        y_prev = y_cur;
        y_cur = y_next;
    }
    (f, df)
}

fn singular_distance(z: C) -> f64 {
    z.norm().min((z - 1.0).norm())
}

#[derive(Debug, Clone, Copy)]
struct Node {
    z: C,
    f: C,
    df: C,
}

/// A chain of expansion points carrying `(F, F')` along a polygonal path.
#[derive(Debug, Clone)]
pub struct HypPath {
    p: HypParams,
    nodes: Vec<Node>,
}

impl HypPath {
    /// Start near the origin on the segment `[0, toward]`, principal branch.
    pub fn from_origin(p: &HypParams, toward: C) -> Result<Self> {
        let r = toward.norm();
        let z = if r > START_RADIUS { toward * (START_RADIUS / r) } else { toward };
        let f = hyp2f1_series(p, z)?;
        let df = if p.c == C::new(0.0, 0.0) {
            C::new(0.0, 0.0)
        } else {
            p.a * p.b / p.c * hyp2f1_series(&HypParams::new(p.a + 1.0, p.b + 1.0, p.c + 1.0), z)?
        };
        let mut path = HypPath { p: *p, nodes: vec![Node { z, f, df }] };
        path.extend_to(toward)?;
        Ok(path)
    }

    /// Start at an explicit point with known `(F, F')`.
    pub fn from_point(p: &HypParams, z: C, f: C, df: C) -> Self {
        HypPath { p: *p, nodes: vec![Node { z, f, df }] }
    }

    /// Append a straight segment from the last node to `to`.
    pub fn extend_to(&mut self, to: C) -> Result<usize> {
        let start = self.nodes.len();
        loop {
            let last = *self.nodes.last().expect("path has a node");
            let remaining = to - last.z;
            let dist = remaining.norm();
            if dist == 0.0 {
                break;
            }
            let d = singular_distance(last.z);
            if d < 1e-12 {
                return Err(Error::BranchCut(format!("continuation path hits a singular point near {}", last.z)));
            }
            let h = (STEP_FRACTION * d).min(dist);
            let t = remaining * (h / dist);
            let (f, df) = taylor_step(&self.p, last.z, last.f, last.df, t);
            let z = if h == dist { to } else { last.z + t };
            self.nodes.push(Node { z, f, df });
            if self.nodes.len() > MAX_NODES {
                return Err(Error::BranchCut("continuation path needs too many steps".into()));
            }
        }
        Ok(start)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_point(&self, k: usize) -> C {
        self.nodes[k].z
    }

    pub fn end(&self) -> (C, C, C) {
        let n = self.nodes.last().expect("path has a node");
        (n.z, n.f, n.df)
    }

    /// Value at `z` expanded around node `k`; `z` must lie in its disc of convergence.
    pub fn eval_from(&self, k: usize, z: C) -> C {
        let n = &self.nodes[k];
        taylor_step(&self.p, n.z, n.f, n.df, z - n.z).0
    }
}

pub(crate) fn continued_with_derivative(p: &HypParams, z: C) -> Result<(C, C)> {
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::BranchCut(format!("{z}")));
    }
    let path = HypPath::from_origin(p, z)?;
    let (_, f, df) = path.end();
    Ok((f, df))
}

/// Principal-branch 2F1 by continuation along the segment from the origin.
pub fn hyp2f1_continued(p: &HypParams, z: C) -> Result<C> {
    continued_with_derivative(p, z).map(|(f, _)| f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::hyp2f1;

    #[test]
    fn continuation_matches_dispatcher() {
        let p = HypParams::new(C::new(0.7, 0.2), C::new(-1.3, 0.5), C::new(2.2, -0.1));
        // the last point hugs the cut, so its path passes within 2e-3 of z = 1
        for (z, tol) in [
            (C::new(2.0, 0.5), 1e-12),
            (C::new(-3.0, -1.0), 1e-12),
            (C::new(0.9, -0.9), 1e-12),
            (C::new(5.0, -0.01), 1e-11),
        ] {
            let a = hyp2f1(&p, z).unwrap();
            let b = hyp2f1_continued(&p, z).unwrap();
            assert!((a - b).norm() < tol * a.norm().max(1.0), "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn crossing_the_cut_picks_up_the_monodromy() {
        // continuing F(1,1;2;z) = -ln(1-z)/z from above the cut to below adds 2 pi i / z
        let p = HypParams::real(1.0, 1.0, 2.0);
        let mut path = HypPath::from_origin(&p, C::new(3.0, 1.0)).unwrap();
        path.extend_to(C::new(3.0, -1.0)).unwrap();
        let (z, f, _) = path.end();
        let principal = -(1.0 - z).ln() / z;
        let expected = principal + 2.0 * std::f64::consts::PI * C::new(0.0, 1.0) / z;
        assert!((f - expected).norm() < 1e-12);
    }
}
