//! First-order and order-N moving-average filters.
//!
//! A first-order filter replaces `f(θ)` by its mean over `[θ-ε, θ+ε]`. On the
//! `k`-th harmonic this is multiplication by `sinc(kε)`, so an order-N filter
//! is a product of sinc factors, one per stage. The variants differ only in
//! how the stage half-widths scale with `N`:
//!
//! | variant    | stage half-width | total range  |
//! |------------|------------------|--------------|
//! | `naive`    | `ε`              | `Nε`         |
//! | `fixed`    | `ε/N`            | `ε`          |
//! | `gaussian` | `ε/√N`           | `√N ε`       |
//! | `scaled`   | `ε/2ⁿ`           | `ε(1-2^-N)`  |

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernel::{Kernel, Stages};
use crate::series::{EvalOptions, HarmonicCoefficients, SampledSignal};

/// Below this the Taylor polynomial is used; its truncation error is under 1e-22.
const SINC_TAYLOR_CUTOFF: f64 = 1e-4;

/// `sin(x)/x`, equal to 1 at the origin.
///
/// ```
/// use dpfilter::sinc;
/// assert_eq!(sinc(0.0), 1.0);
/// assert!((sinc(0.5) - 0.958851077208406).abs() < 1e-15);
/// ```
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// How the stage ranges of an order-N filter scale with `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Naive,
    Fixed,
    Gaussian,
    Scaled,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Naive, Variant::Fixed, Variant::Gaussian, Variant::Scaled];

    fn name(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::Fixed => "fixed",
            Variant::Gaussian => "gaussian",
            Variant::Scaled => "scaled",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                invalid(format!(
                    "unknown variant `{s}` (expected naive, fixed, gaussian or scaled)"
                ))
            })
    }
}

/// Order, range parameter and variant of a filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    order: u32,
    range: f64,
    variant: Variant,
}

impl KernelSpec {
    /// A spec whose kernel support fits inside one period.
    ///
    /// `0 < ε ≤ π`, and additionally `Nε ≤ π` for `naive` and `√N ε ≤ π`
    /// for `gaussian`.
    pub fn new(order: u32, range: f64, variant: Variant) -> Result<Self> {
        check_range(range)?;
        if range > PI {
            return Err(invalid(format!("range parameter {range} exceeds π")));
        }
        let n = f64::from(order.max(1));
        match variant {
            Variant::Naive if range > PI / n => Err(invalid(format!(
                "naive order {order} with range {range}: total range {} exceeds π",
                n * range
            ))),
            Variant::Gaussian if range > PI / n.sqrt() => Err(invalid(format!(
                "gaussian order {order} with range {range}: total range {} exceeds π",
                n.sqrt() * range
            ))),
            _ => Ok(Self { order, range, variant }),
        }
    }

    /// A spec whose kernel may wrap around the circle.
    ///
    /// Only each stage must fit in one period. Used to follow the large-`N`
    /// limits of the `naive` and `gaussian` regimes, where the total range
    /// eventually exceeds `π`.
    pub fn periodic(order: u32, range: f64, variant: Variant) -> Result<Self> {
        check_range(range)?;
        let spec = Self { order, range, variant };
        let widest = spec.stage_ranges().into_iter().fold(0.0, f64::max);
        if widest > PI {
            return Err(invalid(format!("stage range {widest} exceeds π")));
        }
        Ok(spec)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Half-width of each first-order stage, in application order.
    pub fn stage_ranges(&self) -> Vec<f64> {
        let n = self.order as usize;
        match self.stages() {
            None => Vec::new(),
            Some(Stages::Uniform { width, .. }) => vec![width; n],
            Some(Stages::Dyadic { range, .. }) => (1..=n).map(|i| range * 0.5f64.powi(i as i32)).collect(),
        }
    }

    /// Half-width of the kernel support.
    pub fn total_range(&self) -> f64 {
        self.stages().map_or(0.0, |s| s.total_range())
    }

    pub(crate) fn stages(&self) -> Option<Stages> {
        let count = self.order;
        if count == 0 {
            return None;
        }
        let n = f64::from(count);
        Some(match self.variant {
            Variant::Naive => Stages::Uniform {
                width: self.range,
                count,
            },
            Variant::Fixed => Stages::Uniform {
                width: self.range / n,
                count,
            },
            Variant::Gaussian => Stages::Uniform {
                width: self.range / n.sqrt(),
                count,
            },
            Variant::Scaled => Stages::Dyadic {
                range: self.range,
                count,
            },
        })
    }

    fn require_stages(&self) -> Result<Stages> {
        self.stages()
            .ok_or_else(|| invalid("the order-zero kernel is a delta and cannot be evaluated pointwise"))
    }
}

fn check_range(range: f64) -> Result<()> {
    if !(range.is_finite() && range > 0.0) {
        return Err(invalid(format!(
            "range parameter must be positive and finite, got {range}"
        )));
    }
    Ok(())
}

/// Factor applied to the `k`-th harmonic by the filter.
///
/// ```
/// use dpfilter::{filter_multiplier, sinc, KernelSpec, Variant};
/// let spec = KernelSpec::new(2, 0.5, Variant::Fixed).unwrap();
/// assert_eq!(filter_multiplier(2, &spec), sinc(0.5).powi(2));
/// ```
pub fn filter_multiplier(k: usize, spec: &KernelSpec) -> f64 {
    spec.stages().map_or(1.0, |s| s.multiplier(k as f64))
}

/// Filters a series in coefficient space.
pub fn apply_filter_coeffs(coeffs: &HarmonicCoefficients, spec: &KernelSpec) -> HarmonicCoefficients {
    match spec.stages() {
        None => coeffs.clone(),
        Some(stages) => coeffs.map_multiplier(|k| stages.multiplier(k as f64)),
    }
}

/// First-order filter applied to samples: the mean over `[θ_j-ε, θ_j+ε]`.
///
/// Interior cells use composite Simpson weights; the two fractional end
/// cells integrate the linear interpolant. Every weight is positive, so the
/// output stays between the input's extremes and monotone stretches stay
/// monotone.
pub fn filter_direct(signal: &SampledSignal, range: f64, opts: &EvalOptions) -> Result<SampledSignal> {
    opts.validate()?;
    check_range(range)?;
    if range > PI {
        return Err(invalid(format!("range {range} exceeds π")));
    }
    let m = signal.resolution();
    let h = signal.step();
    let half_cells = range / h;
    if 2.0 * half_cells < 8.0 {
        return Err(Error::RangeTooSmallForGrid {
            range,
            cells: 2.0 * half_cells,
        });
    }
    let q = half_cells.floor() as usize;
    let t = half_cells - q as f64;
    let pad = q + 1;

    // g[i] = f at grid offset i - pad, so the window centred on j starts at g[j].
    let g: Vec<f64> = (0..m + 2 * pad + 1)
        .map(|i| signal.at(i as isize - pad as isize))
        .collect();
    let mut plain = Vec::with_capacity(g.len() + 1);
    let mut alternating = Vec::with_capacity(g.len() + 1);
    let (mut p, mut a) = (0.0, 0.0);
    plain.push(p);
    alternating.push(a);
    for (i, &v) in g.iter().enumerate() {
        p += v;
        a += if i % 2 == 0 { v } else { -v };
        plain.push(p);
        alternating.push(a);
    }

    let inner_w = t - 0.5 * t * t;
    let outer_w = 0.5 * t * t;
    let values = (0..m)
        .map(|j| {
            // Simpson over offsets -q..=q: weights 1,4,2,...,2,4,1.
            let s = j + 1;
            let e = s + 2 * q;
            let all = plain[e + 1] - plain[s];
            let alt = alternating[e + 1] - alternating[s];
            let alt = if s % 2 == 0 { alt } else { -alt };
            let odd = 0.5 * (all - alt);
            let simpson = (2.0 * all + 2.0 * odd - g[s] - g[e]) / 3.0;
            let ends = inner_w * (g[s] + g[e]) + outer_w * (g[j] + g[e + 1]);
            (simpson + ends) * h / (2.0 * range)
        })
        .collect();
    SampledSignal::new(values)
}

impl Kernel {
    /// Kernel of `spec`, in closed form for low orders and as a truncated
    /// series otherwise.
    pub fn new(spec: &KernelSpec, opts: &EvalOptions) -> Result<Self> {
        opts.validate()?;
        Kernel::from_stages(spec.require_stages()?, opts)
    }

    /// Kernel of `spec` as a truncated Fourier series, regardless of order.
    pub fn series(spec: &KernelSpec, opts: &EvalOptions) -> Result<Self> {
        Kernel::series_from_stages(spec.require_stages()?, opts)
    }

    /// Kernel of `spec` as a sum of truncated powers.
    ///
    /// Exact for low orders; the alternating sum cancels catastrophically as
    /// the order grows, so orders above 16 are refused.
    pub fn closed_form(spec: &KernelSpec) -> Result<Self> {
        let stages = spec.require_stages()?;
        if stages.count() > 16 {
            return Err(invalid("closed form is limited to orders up to 16"));
        }
        Ok(Kernel::closed_from_stages(stages))
    }
}

/// Kernel value at angular offset `Δθ`.
///
/// At the jumps of the order-one box the midpoint `1/(4ε)` is returned.
pub fn kernel_eval(spec: &KernelSpec, delta: f64, opts: &EvalOptions) -> Result<f64> {
    if !delta.is_finite() {
        return Err(invalid(format!("angle must be finite, got {delta}")));
    }
    Ok(Kernel::new(spec, opts)?.value(delta))
}

/// Integral of the kernel over one period; 1 up to quadrature error.
pub fn kernel_integral(spec: &KernelSpec, opts: &EvalOptions) -> Result<f64> {
    Ok(Kernel::new(spec, opts)?.integral(opts.quad_resolution))
}
