//! Kernels built by composing moving averages.
//!
//! Every kernel in this crate is the periodic convolution of boxes
//! `1/(2w) · 1[|θ| < w]`. Its Fourier coefficients are products of sinc
//! factors `sinc(k w)`, one per stage, and it can be evaluated either from
//! that series or in closed form as a sum of truncated powers:
//!
//! ```text
//! K(x) = 1 / ((N-1)! Π 2w_i) · Σ_σ (Π σ_i) (x + Σ σ_i w_i)_+^(N-1)
//! ```
//!
//! The closed form cancels badly once the order grows, so it is only used
//! for low orders. The series is truncated where a rigorous tail bound drops
//! below the requested tolerance.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::filters::sinc;
use crate::series::EvalOptions;
use crate::trig::harmonic_sums;

/// Per-stage bound switches from `exp(-x²/6)` to `1/x` here; any value up to
/// the crossing of the two curves (≈ 2.13) keeps the bound non-increasing.
const SATURATION: f64 = 2.0;

/// Stage factors with `k w` below this are exactly 1 to double precision.
const NEGLIGIBLE_ARGUMENT: f64 = 1e-8;

/// Dyadic stages past this depth are left out of the tail bound (their
/// factors are bounded by 1, so the bound stays valid).
const MAX_BOUND_STAGES: u32 = 64;

/// Largest uniform order evaluated in closed form.
const CLOSED_FORM_UNIFORM_MAX: u32 = 8;

/// Largest dyadic order evaluated in closed form.
const CLOSED_FORM_DYADIC_MAX: u32 = 5;

/// The list of box half-widths a kernel is composed of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Stages {
    /// `count` stages of the same half-width.
    Uniform { width: f64, count: u32 },
    /// Half-widths `range/2, range/4, ..., range/2^count`.
    Dyadic { range: f64, count: u32 },
}

impl Stages {
    pub(crate) fn count(&self) -> u32 {
        match *self {
            Stages::Uniform { count, .. } | Stages::Dyadic { count, .. } => count,
        }
    }

    /// Support half-width of the composed kernel.
    pub(crate) fn total_range(&self) -> f64 {
        match *self {
            Stages::Uniform { width, count } => width * count as f64,
            Stages::Dyadic { range, count } => range - range * 0.5f64.powi(count as i32),
        }
    }

    fn widths(&self) -> Vec<f64> {
        match *self {
            Stages::Uniform { width, count } => vec![width; count as usize],
            Stages::Dyadic { range, count } => {
                let mut w = range;
                (0..count)
                    .map(|_| {
                        w *= 0.5;
                        w
                    })
                    .collect()
            }
        }
    }

    /// Coefficient multiplier `Π sinc(k w_n)` of harmonic `k`.
    pub(crate) fn multiplier(&self, k: f64) -> f64 {
        match *self {
            Stages::Uniform { width, count } => sinc(k * width).powi(count as i32),
            Stages::Dyadic { range, count } => {
                let mut product = 1.0;
                let mut w = range;
                for _ in 0..count {
                    w *= 0.5;
                    let x = k * w;
                    if x < NEGLIGIBLE_ARGUMENT {
                        break;
                    }
                    product *= sinc(x);
                }
                product
            }
        }
    }

    /// `ln` of a non-increasing upper bound on `|multiplier(k)|`, together
    /// with the number of stages that are in the `1/x` regime at `k`.
    fn log_envelope(&self, k: f64) -> (f64, u32) {
        match *self {
            Stages::Uniform { width, count } => {
                let x = k * width;
                if x >= SATURATION {
                    (-(count as f64) * x.ln(), count)
                } else {
                    (-(count as f64) * x * x / 6.0, 0)
                }
            }
            Stages::Dyadic { range, count } => {
                let mut log = 0.0;
                let mut saturated = 0;
                let mut w = range;
                for _ in 0..count.min(MAX_BOUND_STAGES) {
                    w *= 0.5;
                    let x = k * w;
                    if x >= SATURATION {
                        log -= x.ln();
                        saturated += 1;
                    } else if x < NEGLIGIBLE_ARGUMENT {
                        break;
                    } else {
                        log -= x * x / 6.0;
                    }
                }
                (log, saturated)
            }
        }
    }

    fn bound_stage_count(&self) -> u32 {
        match *self {
            Stages::Uniform { count, .. } => count,
            Stages::Dyadic { count, .. } => count.min(MAX_BOUND_STAGES),
        }
    }

    /// Upper bound on `Σ_{k>K} k^p |multiplier(k)|`.
    ///
    /// The tail is split into dyadic blocks `(2^j K, 2^{j+1} K]`; each block
    /// is bounded by its length times the largest `k^p` in it times the
    /// envelope at its left end. Once every stage is in the `1/x` regime the
    /// remaining blocks form a geometric series with ratio `2^{1+p-m}`.
    pub(crate) fn tail_bound(&self, k_cut: usize, power: f64) -> f64 {
        let m = self.bound_stage_count();
        if k_cut == 0 || m == 0 {
            return f64::INFINITY;
        }
        let ratio_log = (1.0 + power - m as f64) * LN_2;
        let mut total = 0.0;
        let ln_k = (k_cut as f64).ln();
        for j in 0..2048u32 {
            let ln_a = ln_k + j as f64 * LN_2;
            let a = ln_a.exp();
            let (ln_env, saturated) = self.log_envelope(a);
            let ln_pow = if power >= 0.0 {
                power * (ln_a + LN_2)
            } else {
                power * ln_a
            };
            let term = (ln_a + ln_pow + ln_env).exp();
            if saturated == m {
                if ratio_log >= 0.0 {
                    return f64::INFINITY;
                }
                return total + term / (1.0 - ratio_log.exp());
            }
            total += term;
        }
        f64::INFINITY
    }

    /// Smallest harmonic cut-off `K ≤ k_max` whose tail, scaled by
    /// `prefactor`, is below `opts.tail_tol`.
    pub(crate) fn truncation(&self, power: f64, prefactor: f64, opts: &EvalOptions) -> Result<usize> {
        let mut k = 8usize.min(opts.k_max);
        loop {
            let bound = prefactor * self.tail_bound(k, power);
            if bound <= opts.tail_tol {
                return Ok(k);
            }
            if k >= opts.k_max {
                return Err(Error::NonConvergence {
                    k_max: opts.k_max,
                    bound,
                    tol: opts.tail_tol,
                });
            }
            k = ((k as f64 * 1.05).ceil() as usize).max(k + 1).min(opts.k_max);
        }
    }

    fn prefers_closed_form(&self) -> bool {
        match *self {
            Stages::Uniform { count, .. } => count <= CLOSED_FORM_UNIFORM_MAX,
            Stages::Dyadic { count, .. } => count <= CLOSED_FORM_DYADIC_MAX,
        }
    }
}

/// Which one-sided limit to take at a jump of an order-one kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Midpoint,
    Below,
    Above,
}

/// Truncated-power representation of a box convolution.
#[derive(Debug, Clone)]
pub(crate) struct ClosedForm {
    order: u32,
    range: f64,
    /// `(shift, weight)`: contributes `weight · (x + shift)_+^(order-1)`.
    terms: Vec<(f64, f64)>,
}

impl ClosedForm {
    pub(crate) fn new(stages: &Stages) -> Self {
        let order = stages.count();
        assert!(order >= 1, "closed form needs at least one stage");
        let factorial: f64 = (1..order).map(f64::from).product();
        let terms = match *stages {
            Stages::Uniform { width, count } => {
                let norm = 1.0 / (factorial * (2.0 * width).powi(count as i32));
                let mut binom = 1.0;
                (0..=count)
                    .map(|j| {
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        let shift = (count as f64 - 2.0 * j as f64) * width;
                        let term = (shift, sign * binom * norm);
                        binom = binom * (count - j) as f64 / (j + 1) as f64;
                        term
                    })
                    .collect()
            }
            Stages::Dyadic { .. } => {
                let widths = stages.widths();
                let norm = 1.0 / (factorial * widths.iter().map(|w| 2.0 * w).product::<f64>());
                (0..1u64 << order)
                    .map(|mask| {
                        let mut shift = 0.0;
                        let mut sign = 1.0;
                        for (i, w) in widths.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                shift -= w;
                                sign = -sign;
                            } else {
                                shift += w;
                            }
                        }
                        (shift, sign * norm)
                    })
                    .collect()
            }
        };
        Self {
            order,
            range: stages.total_range(),
            terms,
        }
    }

    /// Value of the non-periodic kernel at `x`.
    fn line_value(&self, x: f64, side: Side) -> f64 {
        if self.order == 1 {
            let mut acc = 0.0;
            for &(shift, weight) in &self.terms {
                let y = x + shift;
                let step = if y > 0.0 {
                    1.0
                } else if y < 0.0 {
                    0.0
                } else {
                    match side {
                        Side::Midpoint => 0.5,
                        Side::Below => 0.0,
                        Side::Above => 1.0,
                    }
                };
                acc += weight * step;
            }
            return acc;
        }
        if x.abs() >= self.range {
            return 0.0;
        }
        // The kernel is even; on the left half fewer terms are active.
        let y = -x.abs();
        let power = (self.order - 1) as i32;
        self.terms
            .iter()
            .filter(|(shift, _)| y + shift > 0.0)
            .map(|&(shift, weight)| weight * (y + shift).powi(power))
            .sum()
    }

    /// Periodic kernel value: the sum over every `2π` image inside the support.
    pub(crate) fn value(&self, x: f64, side: Side) -> f64 {
        let two_pi = 2.0 * PI;
        let first = ((-self.range - x) / two_pi).ceil() as i64;
        let last = ((self.range - x) / two_pi).floor() as i64;
        // `+ 0.0` turns the -0.0 of an all-cancelled sum into +0.0.
        (first..=last)
            .map(|m| self.line_value(x + two_pi * m as f64, side))
            .sum::<f64>()
            + 0.0
    }

    /// Break points of the piecewise polynomial, not reduced modulo `2π`.
    pub(crate) fn knots(&self) -> Vec<f64> {
        let mut knots: Vec<f64> = self.terms.iter().map(|&(shift, _)| -shift).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        knots
    }
}

/// Truncated cosine series `1/(2π) + (1/π) Σ c_k cos(kx)` or one of its
/// term-wise derivatives.
#[derive(Debug, Clone)]
pub(crate) struct SeriesTable {
    derivative: u32,
    /// `c_k k^n` for `k = 1..=K`.
    coeffs: Vec<f64>,
}

impl SeriesTable {
    pub(crate) fn new(stages: &Stages, derivative: u32, opts: &EvalOptions) -> Result<Self> {
        let cut = stages.truncation(derivative as f64, 1.0 / PI, opts)?;
        let coeffs = (1..=cut)
            .map(|k| {
                let kf = k as f64;
                stages.multiplier(kf) * kf.powi(derivative as i32)
            })
            .collect();
        Ok(Self { derivative, coeffs })
    }

    pub(crate) fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        let (c, s) = harmonic_sums(&self.coeffs, x);
        // d^n/dx^n cos(kx) = k^n cos(kx + nπ/2)
        let sum = match self.derivative % 4 {
            0 => c,
            1 => -s,
            2 => -c,
            _ => s,
        };
        let constant = if self.derivative == 0 { 0.5 / PI } else { 0.0 };
        constant + sum / PI
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Closed(ClosedForm),
    Series(SeriesTable),
}

/// A ready-to-evaluate kernel: the coefficient table or closed form is built
/// once so repeated evaluation is cheap.
#[derive(Debug, Clone)]
pub struct Kernel {
    stages: Stages,
    repr: Repr,
}

impl Kernel {
    /// Picks the closed form for low orders and the truncated series otherwise.
    pub(crate) fn from_stages(stages: Stages, opts: &EvalOptions) -> Result<Self> {
        if stages.prefers_closed_form() {
            Ok(Self::closed_from_stages(stages))
        } else {
            Self::series_from_stages(stages, opts)
        }
    }

    pub(crate) fn series_from_stages(stages: Stages, opts: &EvalOptions) -> Result<Self> {
        opts.validate()?;
        let table = SeriesTable::new(&stages, 0, opts)?;
        Ok(Self {
            stages,
            repr: Repr::Series(table),
        })
    }

    pub(crate) fn closed_from_stages(stages: Stages) -> Self {
        Self {
            repr: Repr::Closed(ClosedForm::new(&stages)),
            stages,
        }
    }

    /// Kernel value at the angular offset `x`; periodic in `x`.
    pub fn value(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Closed(c) => c.value(x, Side::Midpoint),
            Repr::Series(s) => s.value(x),
        }
    }

    /// Half-width of the support.
    pub fn total_range(&self) -> f64 {
        self.stages.total_range()
    }

    pub fn order(&self) -> u32 {
        self.stages.count()
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.repr, Repr::Closed(_))
    }

    /// Number of harmonics kept when the series path is in use.
    pub fn truncation(&self) -> Option<usize> {
        match &self.repr {
            Repr::Series(s) => Some(s.len()),
            Repr::Closed(_) => None,
        }
    }

    /// Coefficient multiplier of harmonic `k`.
    pub fn multiplier(&self, k: usize) -> f64 {
        self.stages.multiplier(k as f64)
    }

    /// Composite trapezoid over one period with about `resolution` nodes.
    ///
    /// For the closed form the nodes include every break point of the
    /// piecewise polynomial, with one-sided limits taken at jumps, so the rule
    /// keeps its accuracy on the low-order kernels that are only `C^0` or
    /// discontinuous.
    pub fn integral(&self, resolution: usize) -> f64 {
        let closed = match &self.repr {
            Repr::Closed(c) => c,
            Repr::Series(_) => return periodic_trapezoid(resolution, |x| self.value(x)),
        };
        let mut knots: Vec<f64> = closed.knots().into_iter().map(crate::series::wrap_angle).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let two_pi = 2.0 * PI;
        let mut total = 0.0;
        for (i, &a) in knots.iter().enumerate() {
            let b = if i + 1 < knots.len() {
                knots[i + 1]
            } else {
                knots[0] + two_pi
            };
            let len = b - a;
            if len <= 0.0 {
                continue;
            }
            let n = ((resolution as f64 * len / two_pi).round() as usize).max(1);
            let h = len / n as f64;
            let mut sum = 0.5 * (closed.value(a, Side::Above) + closed.value(b, Side::Below));
            for j in 1..n {
                sum += closed.value(a + j as f64 * h, Side::Midpoint);
            }
            total += sum * h;
        }
        total
    }
}

/// `(2π/M) Σ f(θ_j)` on the grid `θ_j = -π + 2πj/M`.
pub(crate) fn periodic_trapezoid(resolution: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / resolution as f64;
    (0..resolution)
        .map(|j| f(crate::series::grid_point(j, resolution)))
        .sum::<f64>()
        * h
}
