//! Harmonic sums by complex rotation.
//!
//! `cos(kx)` and `sin(kx)` are advanced by multiplying with `e^{ix}` and
//! re-seeded from `sin_cos` every `RESYNC` steps, which bounds the drift to a
//! few dozen ulps while costing four multiplies per term.

use num_complex::Complex64;

const RESYNC: usize = 32;

/// Returns `(Σ c_k cos(kx), Σ c_k sin(kx))` with `coeffs[0]` holding `c_1`.
pub(crate) fn harmonic_sums(coeffs: &[f64], x: f64) -> (f64, f64) {
    let (step_s, step_c) = x.sin_cos();
    let mut cos_sum = 0.0;
    let mut sin_sum = 0.0;
    let (mut s, mut c) = (step_s, step_c);
    for (i, &a) in coeffs.iter().enumerate() {
        let k = i + 1;
        if k % RESYNC == 0 {
            let (rs, rc) = (k as f64 * x).sin_cos();
            s = rs;
            c = rc;
        }
        cos_sum += a * c;
        sin_sum += a * s;
        let next_c = c * step_c - s * step_s;
        let next_s = s * step_c + c * step_s;
        c = next_c;
        s = next_s;
    }
    (cos_sum, sin_sum)
}

/// Returns `Σ a_k (r e^{ix})^k` with `coeffs[0]` holding `a_1`.
pub(crate) fn power_sum(coeffs: &[f64], r: f64, x: f64) -> Complex64 {
    let step = Complex64::from_polar(r, x);
    let mut z = step;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &a) in coeffs.iter().enumerate() {
        let k = i + 1;
        if k % RESYNC == 0 {
            z = Complex64::from_polar(r.powi(k as i32), k as f64 * x);
        }
        if z.re == 0.0 && z.im == 0.0 {
            break;
        }
        acc += z * a;
        z *= step;
    }
    acc
}
