//! Brute-force reference implementations for tests.
//!
//! Nothing here shares code with the rest of the crate: moving averages use
//! Simpson's rule on function handles rather than grids, and partial sums
//! call `sin`/`cos` term by term.

use crate::error::{Error, Result};

/// Nested averaging cost grows as `resolution^depth`.
pub const MAX_ORACLE_DEPTH: usize = 6;

/// Simpson intervals per averaging window and the harmonic cap for partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub resolution: usize,
    pub k_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            resolution: 10_000,
            k_cap: 100_000,
        }
    }
}

impl OracleConfig {
    /// Simpson needs an even number of intervals.
    fn intervals(&self) -> usize {
        let n = self.resolution.max(2);
        n + n % 2
    }
}

/// `(1/2ε) ∫_{θ-ε}^{θ+ε} f` by composite Simpson.
pub fn oracle_moving_average(f: &dyn Fn(f64) -> f64, theta: f64, range: f64, cfg: &OracleConfig) -> f64 {
    let n = cfg.intervals();
    let a = theta - range;
    let h = 2.0 * range / n as f64;
    let mut sum = f(a) + f(theta + range);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0 / (2.0 * range)
}

/// Moving averages with the given half-widths applied in sequence.
pub fn oracle_iterated_filter(
    f: &dyn Fn(f64) -> f64,
    theta: f64,
    stage_ranges: &[f64],
    cfg: &OracleConfig,
) -> Result<f64> {
    if stage_ranges.len() > MAX_ORACLE_DEPTH {
        return Err(Error::DepthExceeded(stage_ranges.len()));
    }
    if let Some(bad) = stage_ranges
        .iter()
        .find(|r| !(r.is_finite() && **r > 0.0 && **r <= std::f64::consts::PI))
    {
        return Err(Error::InvalidArgument(format!("stage range {bad} outside (0, π]")));
    }
    Ok(nested(f, theta, stage_ranges, cfg))
}

fn nested(f: &dyn Fn(f64) -> f64, theta: f64, ranges: &[f64], cfg: &OracleConfig) -> f64 {
    match ranges.split_last() {
        None => f(theta),
        Some((&outer, inner)) => {
            let g = |t: f64| nested(f, t, inner, cfg);
            oracle_moving_average(&g, theta, outer, cfg)
        }
    }
}

/// `Σ_{k ≤ k_cap} a_k cos(kθ)` or the sine analogue, one call to `cos`/`sin`
/// per term.
pub fn oracle_partial_sum(coeffs: &[f64], sine: bool, theta: f64, cfg: &OracleConfig) -> f64 {
    coeffs
        .iter()
        .take(cfg.k_cap)
        .enumerate()
        .map(|(i, a)| {
            let x = (i + 1) as f64 * theta;
            a * if sine { x.sin() } else { x.cos() }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            x.sin() / x
        }
    }

    #[test]
    fn moving_average_examples() {
        let cfg = OracleConfig::default();
        assert_abs_diff_eq!(oracle_moving_average(&|_| 1.0, 0.3, 0.5, &cfg), 1.0, epsilon = 1e-14);
        for k in 1..6 {
            let kf = k as f64;
            let v = oracle_moving_average(&|t| (kf * t).cos(), 0.7, 0.5, &cfg);
            assert_abs_diff_eq!(v, sinc(kf * 0.5) * (kf * 0.7).cos(), epsilon = 1e-10);
        }
        let sign = |t: f64| {
            if t > 0.0 {
                1.0
            } else if t < 0.0 {
                -1.0
            } else {
                0.0
            }
        };
        assert_abs_diff_eq!(oracle_moving_average(&sign, 0.25, 0.5, &cfg), 0.5, epsilon = 1e-6);
    }

    #[test]
    fn iterated_examples() {
        let cfg = OracleConfig {
            resolution: 400,
            k_cap: 10,
        };
        let f = |t: f64| (3.0 * t).cos();
        assert_eq!(oracle_iterated_filter(&f, 0.4, &[], &cfg).unwrap(), f(0.4));
        let v = oracle_iterated_filter(&f, 0.4, &[0.25, 0.25], &cfg).unwrap();
        assert_abs_diff_eq!(v, sinc(0.75).powi(2) * f(0.4), epsilon = 1e-8);
        assert!(matches!(
            oracle_iterated_filter(&f, 0.0, &[0.1; 7], &cfg),
            Err(Error::DepthExceeded(7))
        ));
        assert!(oracle_iterated_filter(&f, 0.0, &[4.0], &cfg).is_err());
    }

    #[test]
    fn partial_sum_of_a_short_series() {
        let cfg = OracleConfig {
            resolution: 10,
            k_cap: 2,
        };
        let v = oracle_partial_sum(&[1.0, 2.0, 100.0], false, 0.0, &cfg);
        assert_eq!(v, 3.0);
    }
}
