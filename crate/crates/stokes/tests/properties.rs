mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use stokes::formal_model::Parameters;
use stokes::matrix;
use stokes::special_fn::{cpow, gamma, hyp2f1, hyp2f1_series, rising_factorial, HypParams, HypPath};
use stokes::stokes_core::{conjugate_by_monodromy, monodromy_product, stokes_matrices, STOKES_ENTRY};

fn complex(re: std::ops::Range<f64>, im: std::ops::Range<f64>) -> impl Strategy<Value = C> {
    (re, im).prop_map(|(a, b)| c(a, b))
}

fn off_integer(z: C) -> bool {
    z.im.abs() > 0.05 || (z.re - z.re.round()).abs() > 0.05
}

fn hyp_params() -> impl Strategy<Value = HypParams> {
    (complex(-2.0..2.0, -1.0..1.0), complex(-2.0..2.0, -1.0..1.0), complex(0.5..3.0, -1.0..1.0))
        .prop_filter("non-degenerate", |(a, b, cc)| {
            [*a, *b, *cc, cc - a - b, a - b, cc - a, cc - b].iter().all(|&v| off_integer(v))
        })
        .prop_map(|(a, b, cc)| HypParams::new(a, b, cc))
}

fn beta_triple() -> impl Strategy<Value = [C; 3]> {
    (complex(-2.0..2.0, -2.0..2.0), complex(-2.0..2.0, -2.0..2.0), complex(-2.0..2.0, -2.0..2.0))
        .prop_filter("distinct", |(a, b, d)| (a - b).norm() > 0.3 && (a - d).norm() > 0.3 && (b - d).norm() > 0.3)
        .prop_map(|(a, b, d)| [a, b, d])
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_reflection(z in complex(-4.0..4.0, -3.0..3.0)) {
        prop_assume!(off_integer(z));
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        prop_assert!(close(lhs, rhs, 1e-11), "{lhs} vs {rhs}");
    }

    #[test]
    fn gamma_recurrence(z in complex(-4.0..6.0, -3.0..3.0)) {
        prop_assume!(off_integer(z));
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn rising_factorial_is_a_gamma_ratio(a in complex(-3.0..3.0, -2.0..2.0), n in 0usize..12) {
        prop_assume!(off_integer(a) && off_integer(a + n as f64));
        let ratio = gamma(a + n as f64).unwrap() / gamma(a).unwrap();
        prop_assert!(close(rising_factorial(a, n), ratio, 1e-11));
    }

    #[test]
    fn dispatcher_matches_series_inside_the_disc(p in hyp_params(), r in 0.0..0.7f64, t in -PI..PI) {
        let z = C::from_polar(r, t);
        prop_assert!(close(hyp2f1(&p, z).unwrap(), hyp2f1_series(&p, z).unwrap(), 1e-12));
    }

    #[test]
    fn pfaff_transformation(p in hyp_params(), r in 0.0..0.9f64, t in -PI..PI) {
        let z = C::from_polar(r, t);
        let lhs = hyp2f1(&p, z).unwrap();
        let rhs = cpow(1.0 - z, -p.a) * hyp2f1(&HypParams::new(p.a, p.c - p.b, p.c), z / (z - 1.0)).unwrap();
        prop_assert!(close(rhs, lhs, 1e-9), "{lhs} vs {rhs}");
    }

    #[test]
    fn continuation_is_path_independent(p in hyp_params(), r in 0.2..1.8f64, t in 0.1..3.0f64, lower in any::<bool>()) {
        let z = C::from_polar(r, if lower { -t } else { t });
        prop_assume!((z - 1.0).norm() > 0.1);
        let mut path = HypPath::from_origin(&p, c(0.3, 0.9_f64.copysign(z.im))).unwrap();
        path.extend_to(z).unwrap();
        let direct = hyp2f1(&p, z).unwrap();
        prop_assert!(close(path.end().1, direct, 1e-9), "{} vs {direct}", path.end().1);
    }

    #[test]
    fn stokes_matrices_are_unipotent(
        a2 in complex(-3.0..3.0, -0.5..0.5),
        a3 in complex(-3.0..3.0, -0.5..0.5),
        beta in beta_triple(),
    ) {
        let p = Parameters::new([c(0.0, 0.0), a2, a3], beta);
        let Ok(data) = stokes_matrices(&p) else { return Ok(()); };
        for st in &data.st {
            prop_assert_eq!(matrix::det(st), c(1.0, 0.0));
            for i in 0..3 {
                prop_assert_eq!(st[i][i], c(1.0, 0.0));
                for j in 0..i {
                    prop_assert_eq!(st[i][j], c(0.0, 0.0));
                }
            }
        }
        let prod = monodromy_product(&data);
        for j in 0..3 {
            let expected = (2.0 * PI * c(0.0, 1.0) * p.alpha[j]).exp();
            prop_assert!((prod[j][j] - expected).norm() <= 1e-12 * expected.norm());
        }
        for st in &data.st {
            let conj = conjugate_by_monodromy(&data, st);
            for (i, j) in STOKES_ENTRY {
                let phase = (2.0 * PI * c(0.0, 1.0) * (p.alpha[i] - p.alpha[j])).exp();
                prop_assert!((conj[i][j] - phase * st[i][j]).norm() <= 1e-12 * st[i][j].norm().max(1.0));
            }
        }
    }

    #[test]
    fn integer_differences_kill_the_pair_multipliers(
        k in 2i64..7,
        shift in complex(-2.0..2.0, -0.5..0.5),
        first in any::<bool>(),
        beta in beta_triple(),
    ) {
        let alpha = if first {
            [c(0.0, 0.0), c(-(k as f64), 0.0), shift]
        } else {
            [c(0.0, 0.0), shift, shift - k as f64]
        };
        let p = Parameters::new(alpha, beta);
        let Ok(data) = stokes_matrices(&p) else { return Ok(()); };
        let idx = if first { 0 } else { 2 };
        prop_assert_eq!(data.mu[idx], c(0.0, 0.0));
    }
}
