//! Scaled spherical Bessel functions `j_k(z)/z^k` and `y_k(z)/z^k`, k ≤ 5.
//!
//! These are exactly the iterates of `(1/z) d/dz` applied to `j_0` and `y_0`
//! (up to the sign `(-1)^k`), which is what the sinc profiles need.

const SERIES_LIMIT: f64 = 2.0;

/// `j_k(z) / z^k` for `z ≥ 0`.
pub(crate) fn j_scaled(k: usize, z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < SERIES_LIMIT {
        // sum_i (-z^2/2)^i / (i! (2k+2i+1)!!)
        let mut dfact = 1.0;
        for m in (1..=2 * k + 1).step_by(2) {
            dfact *= m as f64;
        }
        let mut term = 1.0 / dfact;
        let mut sum = term;
        let q = -0.5 * z * z;
        for i in 0..40 {
            term *= q / ((i + 1) as f64 * (2 * k + 2 * i + 3) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let (s, c) = z.sin_cos();
    let mut prev = s / z;
    if k == 0 {
        return prev;
    }
    let mut cur = s / (z * z) - c / z;
    for m in 1..k {
        let next = (2 * m + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur / z.powi(k as i32)
}

/// `y_k(z) / z^k` for `z > 0`.
pub(crate) fn y_scaled(k: usize, z: f64) -> f64 {
    debug_assert!(z > 0.0);
    let (s, c) = z.sin_cos();
    let mut prev = -c / z;
    if k == 0 {
        return prev;
    }
    let mut cur = -c / (z * z) - s / z;
    for m in 1..k {
        let next = (2 * m + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur / z.powi(k as i32)
}
