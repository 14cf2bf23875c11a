//! 3×3 complex matrix helpers.

use num_complex::Complex64;

pub type Mat3 = [[Complex64; 3]; 3];

pub fn identity() -> Mat3 {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn diag(d: [Complex64; 3]) -> Mat3 {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

/// Inverse of an upper triangular matrix with unit diagonal.
pub fn inv_unit_upper(a: &Mat3) -> Mat3 {
    let mut m = identity();
    m[0][1] = -a[0][1];
    m[1][2] = -a[1][2];
    m[0][2] = a[0][1] * a[1][2] - a[0][2];
    m
}

pub fn det(a: &Mat3) -> Complex64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_upper_inverse() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let mut a = identity();
        a[0][1] = c(1.0, 2.0);
        a[0][2] = c(-0.5, 0.3);
        a[1][2] = c(2.0, -1.0);
        let p = mul(&a, &inv_unit_upper(&a));
        assert!(max_abs_diff(&p, &identity()) < 1e-15);
        assert_eq!(det(&a), c(1.0, 0.0));
    }
}
