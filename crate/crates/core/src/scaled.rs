//! The scaled filter: stages of half-width `ε/2, ε/4, ..., ε/2^N`.
//!
//! The total range `ε(1 - 2^-N)` stays below `ε` for every `N`, and the
//! kernel becomes smoother with every stage, so the `N → ∞` limit is a
//! `C^∞` function supported on `[-ε, ε]`. Its value is pinned at five points
//! for every `N ≥ 2`:
//!
//! ```text
//! K(±ε) = 0      K(±ε/2) = 1/(2ε)      K(0) = 1/ε
//! ```
//!
//! The first derivative is a difference of two half-scale copies,
//!
//! ```text
//! K'_ε^(N)(θ) = (1/ε) [K_{ε/2}^(N-1)(θ + ε/2) - K_{ε/2}^(N-1)(θ - ε/2)]
//! ```
//!
//! which makes every derivative of order `n` vanish on a regular grid of
//! `2ⁿ + 1` points.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernel::{Kernel, SeriesTable, Stages};
use crate::series::{make_waveform, EvalOptions, HarmonicCoefficients, Waveform};

/// Order used when "infinite order" is requested.
pub const DEFAULT_SCALED_ORDER: u32 = 100;

/// Final range `ε` and number of construction steps `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledKernelParams {
    range: f64,
    order: u32,
}

impl ScaledKernelParams {
    /// Requires `0 < ε < π`.
    pub fn new(range: f64, order: u32) -> Result<Self> {
        check_open_range(range)?;
        Ok(Self { range, order })
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn stages(&self) -> Stages {
        Stages::Dyadic {
            range: self.range,
            count: self.order,
        }
    }

    /// The construction one level down: half the range, one step fewer.
    pub fn half_scale(&self) -> Option<Self> {
        (self.order > 0).then(|| Self {
            range: self.range / 2.0,
            order: self.order - 1,
        })
    }
}

fn check_open_range(range: f64) -> Result<()> {
    if !(range.is_finite() && range > 0.0 && range < PI) {
        return Err(invalid(format!("scaled range must lie in (0, π), got {range}")));
    }
    Ok(())
}

/// `Π_{n=1..N} sinc(kε/2ⁿ)`, as a running product.
///
/// ```
/// use dpfilter::{scaled_coefficient, sinc, ScaledKernelParams};
/// let p = ScaledKernelParams::new(0.5, 1).unwrap();
/// assert_eq!(scaled_coefficient(1, &p), sinc(0.25));
/// ```
pub fn scaled_coefficient(k: usize, params: &ScaledKernelParams) -> f64 {
    params.stages().multiplier(k as f64)
}

/// `ε(1 - 2^-N)`, the half-width of the order-N support.
pub fn effective_range(params: &ScaledKernelParams) -> f64 {
    params.stages().total_range()
}

impl Kernel {
    /// The order-N scaled kernel.
    pub fn scaled(params: &ScaledKernelParams, opts: &EvalOptions) -> Result<Self> {
        opts.validate()?;
        if params.order == 0 {
            return Err(invalid(
                "the order-zero kernel is a delta and cannot be evaluated pointwise",
            ));
        }
        Kernel::from_stages(params.stages(), opts)
    }
}

/// Value of the order-N scaled kernel at `Δθ`.
pub fn scaled_kernel_eval(params: &ScaledKernelParams, delta: f64, opts: &EvalOptions) -> Result<f64> {
    if !delta.is_finite() {
        return Err(invalid(format!("angle must be finite, got {delta}")));
    }
    Ok(Kernel::scaled(params, opts)?.value(delta))
}

/// Multiplies each `a_k` by the scaled coefficient of harmonic `k`.
pub fn apply_scaled_filter(coeffs: &HarmonicCoefficients, params: &ScaledKernelParams) -> HarmonicCoefficients {
    let stages = params.stages();
    coeffs.map_multiplier(|k| stages.multiplier(k as f64))
}

/// Scaled-filtered waveform, truncated where the rigorous tail bound of the
/// filtered series drops below `opts.tail_tol`.
pub fn filtered_waveform(
    kind: Waveform,
    params: &ScaledKernelParams,
    opts: &EvalOptions,
) -> Result<HarmonicCoefficients> {
    opts.validate()?;
    let (amplitude, power) = kind.coefficient_envelope();
    let cut = params.stages().truncation(power, amplitude, opts)?;
    Ok(apply_scaled_filter(&make_waveform(kind, cut)?, params))
}

/// The `n`-th derivative of the scaled kernel as a term-wise differentiated
/// series, with its coefficient table built once.
#[derive(Debug, Clone)]
pub struct ScaledDerivative {
    table: SeriesTable,
}

impl ScaledDerivative {
    /// Requires `N ≥ n + 2`, which makes the differentiated series
    /// absolutely convergent.
    pub fn new(params: &ScaledKernelParams, derivative: u32, opts: &EvalOptions) -> Result<Self> {
        opts.validate()?;
        if derivative == 0 {
            return Err(invalid("derivative order must be positive"));
        }
        if params.order < derivative + 2 {
            return Err(Error::InsufficientOrder {
                order: params.order,
                derivative,
            });
        }
        Ok(Self {
            table: SeriesTable::new(&params.stages(), derivative, opts)?,
        })
    }

    pub fn value(&self, delta: f64) -> f64 {
        self.table.value(delta)
    }

    /// Number of harmonics kept.
    pub fn truncation(&self) -> usize {
        self.table.len()
    }
}

/// Term-wise `n`-th derivative of the scaled kernel at `Δθ`.
pub fn scaled_kernel_derivative(
    params: &ScaledKernelParams,
    derivative: u32,
    delta: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    if !delta.is_finite() {
        return Err(invalid(format!("angle must be finite, got {delta}")));
    }
    Ok(ScaledDerivative::new(params, derivative, opts)?.value(delta))
}

/// The `n`-th derivative assembled from `2ⁿ` shifted copies of the kernel at
/// scale `ε/2ⁿ` and order `N - n`:
///
/// ```text
/// Dⁿ K_ε^(N)(θ) = 2^{n(n-1)/2}/εⁿ · Σ_σ (Π σ_i) K_{ε/2ⁿ}^(N-n)(θ + Σ_i σ_i ε/2^{i+1})
/// ```
#[derive(Debug, Clone)]
pub struct SelfSimilarDerivative {
    copy: Kernel,
    prefactor: f64,
    /// `(shift, sign)` of every copy.
    shifts: Vec<(f64, f64)>,
}

impl SelfSimilarDerivative {
    pub fn new(params: &ScaledKernelParams, derivative: u32, opts: &EvalOptions) -> Result<Self> {
        if derivative == 0 || derivative > 16 {
            return Err(invalid("derivative order must lie in 1..=16"));
        }
        if params.order <= derivative {
            return Err(Error::InsufficientOrder {
                order: params.order,
                derivative,
            });
        }
        let eps = params.range;
        let copy_params = ScaledKernelParams {
            range: eps * 0.5f64.powi(derivative as i32),
            order: params.order - derivative,
        };
        let copy = Kernel::scaled(&copy_params, opts)?;
        let n = derivative as i32;
        let prefactor = 2f64.powi(n * (n - 1) / 2) / eps.powi(n);
        let shifts = (0..1u32 << derivative)
            .map(|mask| {
                let mut shift = 0.0;
                let mut sign = 1.0;
                for i in 0..derivative {
                    let step = eps * 0.5f64.powi(i as i32 + 1);
                    if mask >> i & 1 == 1 {
                        shift -= step;
                        sign = -sign;
                    } else {
                        shift += step;
                    }
                }
                (shift, sign)
            })
            .collect();
        Ok(Self {
            copy,
            prefactor,
            shifts,
        })
    }

    pub fn value(&self, delta: f64) -> f64 {
        let sum: f64 = self
            .shifts
            .iter()
            .map(|&(shift, sign)| sign * self.copy.value(delta + shift))
            .sum();
        self.prefactor * sum
    }
}

/// The five points every scaled kernel of order `N ≥ 2` passes through.
pub fn invariant_points(range: f64) -> Result<Vec<(f64, f64)>> {
    check_open_range(range)?;
    let center = 1.0 / range;
    let half = 0.5 / range;
    Ok(vec![
        (-range, 0.0),
        (-range / 2.0, half),
        (0.0, center),
        (range / 2.0, half),
        (range, 0.0),
    ])
}

/// Points where every derivative of order `≥ n` of the limiting kernel
/// vanishes: `{±ε}` for `n = 0`, else the `2ⁿ + 1` multiples of `ε/2^{n-1}`
/// in `[-ε, ε]`.
///
/// ```
/// use dpfilter::zero_derivative_points;
/// assert_eq!(zero_derivative_points(0.5, 2).unwrap(), vec![-0.5, -0.25, 0.0, 0.25, 0.5]);
/// ```
pub fn zero_derivative_points(range: f64, n: u32) -> Result<Vec<f64>> {
    check_open_range(range)?;
    if n > 30 {
        return Err(invalid("table order is limited to 30"));
    }
    if n == 0 {
        return Ok(vec![-range, range]);
    }
    let half_count = 1i64 << (n - 1);
    let spacing = range / half_count as f64;
    Ok((-half_count..=half_count).map(|m| m as f64 * spacing).collect())
}
