//! Filters on inner analytic functions.
//!
//! An inner analytic function `w(z) = Σ_{k≥1} a_k z^k` with real `a_k` ties
//! a cosine series and a sine series together: on the circle of radius `ρ`,
//!
//! ```text
//! w(ρ e^{iθ}) = f_c(ρ, θ) + i f_s(ρ, θ).
//! ```
//!
//! Filtering along the circle is an operator on `w` itself. With the
//! logarithmic primitive `P(z) = Σ a_k z^k / k`,
//!
//! ```text
//! w_ε(z) = -(i/2ε) [P(z e^{iε}) - P(z e^{-iε})]
//! ```
//!
//! which has coefficients `sinc(kε) a_k`. The operator splits a singularity
//! on the unit circle into two softer ones displaced by `±ε`; in coefficient
//! space each pass gains one extra power of `1/k` in the decay.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::filters::{sinc, KernelSpec};
use crate::kernel::Stages;
use crate::series::{EvalOptions, HarmonicCoefficients};
use crate::trig::power_sum;

/// Real Taylor coefficients `a_1, a_2, ...` of a function analytic on the
/// open unit disk with `w(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInner")]
pub struct InnerAnalytic {
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawInner {
    coeffs: Vec<f64>,
}

impl TryFrom<RawInner> for InnerAnalytic {
    type Error = Error;

    fn try_from(raw: RawInner) -> Result<Self> {
        Self::new(raw.coeffs)
    }
}

impl InnerAnalytic {
    /// `coeffs[0]` is `a_1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|a| !a.is_finite()) {
            return Err(invalid(format!("Taylor coefficient a_{} is not finite", k + 1)));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn map(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().enumerate().map(|(i, &a)| f(i + 1, a)).collect(),
        }
    }
}

impl From<&HarmonicCoefficients> for InnerAnalytic {
    /// The function whose boundary values have this series as real part
    /// (cosine) or imaginary part (sine).
    fn from(series: &HarmonicCoefficients) -> Self {
        Self {
            coeffs: series.coeffs().to_vec(),
        }
    }
}

/// A point `ρ e^{iθ}` of the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub rho: f64,
    pub theta: f64,
}

impl DiskPoint {
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(rho.is_finite() && (0.0..=1.0).contains(&rho)) {
            return Err(Error::RadiusOutOfRange(rho));
        }
        if !theta.is_finite() {
            return Err(invalid(format!("angle must be finite, got {theta}")));
        }
        Ok(Self { rho, theta })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.norm(), z.arg())
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.theta)
    }

    fn rotated(&self, angle: f64) -> Self {
        Self {
            rho: self.rho,
            theta: self.theta + angle,
        }
    }
}

/// `w(ρ e^{iθ})`, truncated at `min(len, k_max)` terms.
///
/// On the unit circle itself the sum is only taken when the discarded
/// coefficients are absolutely summable below `tail_tol`.
pub fn eval_inner(w: &InnerAnalytic, p: DiskPoint, opts: &EvalOptions) -> Result<Complex64> {
    opts.validate()?;
    if !(p.rho.is_finite() && (0.0..=1.0).contains(&p.rho)) {
        return Err(Error::RadiusOutOfRange(p.rho));
    }
    let cut = w.len().min(opts.k_max);
    if p.rho == 1.0 {
        let tail: f64 = w.coeffs[cut..].iter().map(|a| a.abs()).sum();
        if tail >= opts.tail_tol {
            return Err(Error::NonConvergence {
                k_max: opts.k_max,
                bound: tail,
                tol: opts.tail_tol,
            });
        }
    }
    Ok(power_sum(&w.coeffs[..cut], p.rho, p.theta))
}

/// Coefficients `k a_k`, the expansion of `z w'(z)`.
pub fn log_derivative(w: &InnerAnalytic) -> InnerAnalytic {
    w.map(|k, a| k as f64 * a)
}

/// Coefficients `a_k / k`, the expansion of `∫_0^z w(z')/z' dz'`.
pub fn log_primitive(w: &InnerAnalytic) -> InnerAnalytic {
    w.map(|k, a| a / k as f64)
}

/// The `n`-fold logarithmic primitive, coefficients `a_k / kⁿ`.
pub fn log_primitive_n(w: &InnerAnalytic, n: u32) -> InnerAnalytic {
    w.map(|k, a| a / (k as f64).powi(n as i32))
}

fn check_filter_range(range: f64) -> Result<()> {
    if !(range.is_finite() && range > 0.0 && range <= PI) {
        return Err(invalid(format!("filter range must lie in (0, π], got {range}")));
    }
    Ok(())
}

fn check_interior(p: DiskPoint) -> Result<()> {
    if !(p.rho.is_finite() && (0.0..1.0).contains(&p.rho)) {
        return Err(Error::RadiusOutOfRange(p.rho));
    }
    Ok(())
}

/// First-order filter through the logarithmic primitive evaluated at the two
/// rotated points `z e^{±iε}`.
pub fn complex_filter_eval(w: &InnerAnalytic, range: f64, p: DiskPoint, opts: &EvalOptions) -> Result<Complex64> {
    check_filter_range(range)?;
    check_interior(p)?;
    let primitive = log_primitive(w);
    let plus = eval_inner(&primitive, p.rotated(range), opts)?;
    let minus = eval_inner(&primitive, p.rotated(-range), opts)?;
    Ok(Complex64::new(0.0, -0.5 / range) * (plus - minus))
}

/// First-order filter in coefficient space: `a_k ↦ sinc(kε) a_k`.
pub fn complex_filter_coeffs(w: &InnerAnalytic, range: f64) -> Result<InnerAnalytic> {
    check_filter_range(range)?;
    Ok(w.map(|k, a| sinc(k as f64 * range) * a))
}

/// Largest order accepted by [`superposition_filter_eval`] for uniform stages.
pub const MAX_SUPERPOSITION_ORDER: u32 = 20;

/// Largest order accepted by [`superposition_filter_eval`] for scaled stages.
pub const MAX_SCALED_SUPERPOSITION_ORDER: u32 = 12;

/// Order-N filter as a superposition of the `N`-fold primitive at rotated
/// points.
///
/// Each stage of half-width `s` contributes `-(i/2s)(e^{iks} - e^{-iks})` per
/// harmonic, so for equal stages the rotations and weights follow a row of
/// Pascal's triangle:
///
/// ```text
/// w^(N)(z) = (-i/2s)^N Σ_n (-1)^n C(N,n) P_N(z e^{i(N-2n)s})
/// ```
///
/// The prefactor grows like `(N/2ε)^N` while the sum cancels, so the
/// coefficient path is the reference for anything but small `N`.
pub fn superposition_filter_eval(
    w: &InnerAnalytic,
    spec: &KernelSpec,
    p: DiskPoint,
    opts: &EvalOptions,
) -> Result<Complex64> {
    check_interior(p)?;
    let Some(stages) = spec.stages() else {
        return eval_inner(w, p, opts);
    };
    let order = stages.count();
    let primitive = log_primitive_n(w, order);
    // (rotation, real weight); the prefactor carries the (-i)^N and 1/(2s) factors.
    let (rotations, scale): (Vec<(f64, f64)>, f64) = match stages {
        Stages::Uniform { width, count } => {
            if count > MAX_SUPERPOSITION_ORDER {
                return Err(invalid(format!(
                    "superposition is limited to order {MAX_SUPERPOSITION_ORDER}"
                )));
            }
            let mut binom: u64 = 1;
            let rows = (0..=count)
                .map(|n| {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let row = ((count as f64 - 2.0 * n as f64) * width, sign * binom as f64);
                    binom = binom * u64::from(count - n) / u64::from(n + 1);
                    row
                })
                .collect();
            (rows, (0.5 / width).powi(count as i32))
        }
        Stages::Dyadic { range, count } => {
            if count > MAX_SCALED_SUPERPOSITION_ORDER {
                return Err(invalid(format!(
                    "scaled superposition is limited to order {MAX_SCALED_SUPERPOSITION_ORDER}"
                )));
            }
            let rows = (0..1u32 << count)
                .map(|mask| {
                    let mut shift = 0.0;
                    let mut sign = 1.0;
                    for i in 0..count {
                        let w = range * 0.5f64.powi(i as i32 + 1);
                        if mask >> i & 1 == 1 {
                            shift -= w;
                            sign = -sign;
                        } else {
                            shift += w;
                        }
                    }
                    (shift, sign)
                })
                .collect();
            let scale = (1..=count).map(|i| 2f64.powi(i as i32 - 1) / range).product();
            (rows, scale)
        }
    };
    let mut sum = Complex64::new(0.0, 0.0);
    for (angle, weight) in rotations {
        sum += eval_inner(&primitive, p.rotated(angle), opts)? * weight;
    }
    let phase = Complex64::new(0.0, -1.0).powu(order);
    Ok(phase * scale * sum)
}

/// Complex kernel `κ(z, z₁) = 1/(2π) + (1/π) Σ multiplier(k) (z/z₁)^k`,
/// prepared for a fixed ratio `ρ/ρ₁`.
#[derive(Debug, Clone)]
pub struct ComplexKernel {
    ratio: f64,
    multipliers: Vec<f64>,
}

impl ComplexKernel {
    /// Requires `0 ≤ ρ < ρ₁ ≤ 1`.
    ///
    /// The series is cut where the smaller of the geometric tail and the
    /// multiplier tail bound drops below `tail_tol`.
    pub fn new(spec: &KernelSpec, rho: f64, rho1: f64, opts: &EvalOptions) -> Result<Self> {
        opts.validate()?;
        if !(rho.is_finite() && rho1.is_finite() && 0.0 <= rho && rho < rho1 && rho1 <= 1.0) {
            return Err(Error::RadiusOrdering { rho, rho1 });
        }
        let ratio = rho / rho1;
        let target = PI * opts.tail_tol;
        let geometric = if ratio == 0.0 {
            Some(1)
        } else {
            // Σ_{k>K} r^k = r^{K+1}/(1-r)
            let k = ((target * (1.0 - ratio)).ln() / ratio.ln() - 1.0).ceil().max(1.0);
            (k <= opts.k_max as f64).then_some(k as usize)
        };
        let stages = spec.stages();
        let bounded = stages.and_then(|s| s.truncation(0.0, 1.0 / PI, opts).ok());
        let cut = match (geometric, bounded) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => {
                return Err(Error::NonConvergence {
                    k_max: opts.k_max,
                    bound: ratio.powf(opts.k_max as f64 + 1.0) / (1.0 - ratio) / PI,
                    tol: opts.tail_tol,
                })
            }
        };
        let multipliers = (1..=cut)
            .map(|k| stages.map_or(1.0, |s| s.multiplier(k as f64)))
            .collect();
        Ok(Self { ratio, multipliers })
    }

    /// `κ` at angles `θ` (of `z`) and `θ₁` (of `z₁`).
    pub fn value(&self, theta: f64, theta1: f64) -> Complex64 {
        Complex64::new(0.5 / PI, 0.0) + power_sum(&self.multipliers, self.ratio, theta - theta1) / PI
    }

    pub fn truncation(&self) -> usize {
        self.multipliers.len()
    }
}

/// Complex kernel at `z = ρe^{iθ}` for the source point `z₁ = ρ₁e^{iθ₁}`.
pub fn complex_kernel_eval(
    spec: &KernelSpec,
    p: DiskPoint,
    rho1: f64,
    theta1: f64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    Ok(ComplexKernel::new(spec, p.rho, rho1, opts)?.value(p.theta, theta1))
}

/// Mean of `w` along the straight segment `z_c + λ e^{iα}`, `|λ| ≤ L`,
/// by composite Simpson on about `quad_resolution` panels.
///
/// The contour integral `(1/2L) ∫ w(z') dz'` along the same segment is
/// `e^{iα}` times this mean; see [`segment_line_integral`].
pub fn segment_filter(
    w: &InnerAnalytic,
    center: Complex64,
    half_length: f64,
    angle: f64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    opts.validate()?;
    if !(half_length.is_finite() && half_length >= 0.0) {
        return Err(invalid(format!("half-length must be non-negative, got {half_length}")));
    }
    if !(center.re.is_finite() && center.im.is_finite() && angle.is_finite()) {
        return Err(invalid("segment centre and direction must be finite"));
    }
    let direction = Complex64::from_polar(1.0, angle);
    let reach = (center + direction * half_length)
        .norm()
        .max((center - direction * half_length).norm());
    if reach >= 1.0 {
        return Err(Error::SegmentEscapesDisk(reach));
    }
    let at = |lambda: f64| eval_inner(w, DiskPoint::from_complex(center + direction * lambda)?, opts);
    if half_length == 0.0 {
        return at(0.0);
    }
    // Composite Simpson over an even number of panels.
    let intervals = (opts.quad_resolution.max(2) + 1) & !1;
    let h = 2.0 * half_length / intervals as f64;
    let mut sum = at(-half_length)? + at(half_length)?;
    for j in 1..intervals {
        let weight = if j % 2 == 1 { 4.0 } else { 2.0 };
        sum += at(-half_length + j as f64 * h)? * weight;
    }
    Ok(sum * h / (6.0 * half_length))
}

/// `(1/2L) ∫_{z_⊖}^{z_⊕} w(z') dz'` along the segment of [`segment_filter`].
pub fn segment_line_integral(
    w: &InnerAnalytic,
    center: Complex64,
    half_length: f64,
    angle: f64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0, angle) * segment_filter(w, center, half_length, angle, opts)?)
}

/// Largest residual of the polar Cauchy-Riemann relations
/// `∂u/∂ρ = (1/ρ) ∂v/∂θ` and `∂v/∂ρ = -(1/ρ) ∂u/∂θ`, by central differences
/// with step `h`.
pub fn cauchy_riemann_residual(w: &InnerAnalytic, p: DiskPoint, h: f64, opts: &EvalOptions) -> Result<f64> {
    if !(h > 0.0 && p.rho - h > 0.0 && p.rho + h < 1.0) {
        return Err(invalid("finite-difference stencil must stay inside the punctured disk"));
    }
    let f = |rho: f64, theta: f64| eval_inner(w, DiskPoint { rho, theta }, opts);
    let d_rho = (f(p.rho + h, p.theta)? - f(p.rho - h, p.theta)?) / (2.0 * h);
    let d_theta = (f(p.rho, p.theta + h)? - f(p.rho, p.theta - h)?) / (2.0 * h);
    let first = (d_rho.re - d_theta.im / p.rho).abs();
    let second = (d_rho.im + d_theta.re / p.rho).abs();
    Ok(first.max(second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{filter_multiplier, Variant};
    use crate::series::{eval_series, make_waveform, Parity, Waveform};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    fn inner(c: &[f64]) -> InnerAnalytic {
        InnerAnalytic::new(c.to_vec()).unwrap()
    }

    fn pt(rho: f64, theta: f64) -> DiskPoint {
        DiskPoint::new(rho, theta).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(
            eval_inner(&inner(&[1.0]), pt(0.5, 0.0), &opts()).unwrap(),
            Complex64::new(0.5, 0.0)
        );
        assert_eq!(
            eval_inner(&inner(&[3.0, -2.0]), pt(0.0, 1.2), &opts()).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let v = eval_inner(&inner(&[0.0, 1.0]), pt(0.5, PI / 2.0), &opts()).unwrap();
        assert_abs_diff_eq!(v.re, -0.25, epsilon = 1e-16);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-16);
        assert!(DiskPoint::new(1.2, 0.0).is_err());
    }

    #[test]
    fn unit_circle_needs_absolute_convergence() {
        let short = EvalOptions { k_max: 10, ..opts() };
        let w = inner(&[1.0; 20]);
        assert!(matches!(
            eval_inner(&w, pt(1.0, 0.3), &short),
            Err(Error::NonConvergence { .. })
        ));
        assert!(eval_inner(&w, pt(1.0, 0.3), &opts()).is_ok());
        assert!(eval_inner(&w, pt(0.99, 0.3), &short).is_ok());
    }

    #[test]
    fn logarithmic_operations() {
        assert_eq!(log_derivative(&inner(&[1.0])), inner(&[1.0]));
        assert_eq!(log_derivative(&inner(&[0.0, 1.0])), inner(&[0.0, 2.0]));
        assert_eq!(log_derivative(&inner(&[1.0, 1.0, 1.0])), inner(&[1.0, 2.0, 3.0]));
        assert_eq!(log_primitive(&inner(&[1.0])), inner(&[1.0]));
        assert_eq!(log_primitive(&inner(&[0.0, 1.0])), inner(&[0.0, 0.5]));
        assert_eq!(
            log_primitive_n(&inner(&[1.0, 1.0, 1.0]), 2),
            inner(&[1.0, 0.25, 1.0 / 9.0])
        );
    }

    #[test]
    fn filter_examples() {
        let z = inner(&[1.0]);
        let p = pt(0.7, 0.4);
        let v = complex_filter_eval(&z, 0.9, p, &opts()).unwrap();
        assert!((v - p.z() * sinc(0.9)).norm() < 1e-15);
        assert!(complex_filter_eval(&z, PI, p, &opts()).unwrap().norm() < 1e-15);

        let z2 = inner(&[0.0, 1.0]);
        let v = complex_filter_eval(&z2, 0.5, pt(0.5, 0.0), &opts()).unwrap();
        assert_abs_diff_eq!(v.re, 0.210367746, epsilon = 1e-9);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-16);

        let w = inner(&[0.3, -1.0, 0.25, 2.0, -0.7]);
        let p = pt(0.8, -2.1);
        let narrow = complex_filter_eval(&w, 1e-6, p, &opts()).unwrap();
        assert!((narrow - eval_inner(&w, p, &opts()).unwrap()).norm() <= 1e-9);

        assert!(complex_filter_coeffs(&inner(&[1.0, 1.0]), PI).unwrap().coeffs()[0].abs() < 1e-16);
        assert_abs_diff_eq!(
            complex_filter_coeffs(&inner(&[1.0]), 0.5).unwrap().coeffs()[0],
            0.958851077,
            epsilon = 1e-9
        );
        assert!(complex_filter_coeffs(&w, 0.0).is_err());
    }

    #[test]
    fn filtering_softens_by_one_power_of_k() {
        let square = InnerAnalytic::from(&make_waveform(Waveform::Square, 10_000).unwrap());
        let filtered = complex_filter_coeffs(&square, 0.5).unwrap();
        let worst = filtered
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| a.abs() * ((i + 1) as f64).powi(2))
            .fold(0.0, f64::max);
        // |sin(kε)|/ε · 4/π is the envelope.
        assert!(worst <= 4.0 / PI / 0.5 + 1e-9);
        let unfiltered = square.coeffs()[9_998] * 9_999f64.powi(2);
        assert!(unfiltered > 1e3);
    }

    #[test]
    fn segment_examples() {
        let z = inner(&[1.0]);
        let c = Complex64::new(0.2, -0.3);
        assert!((segment_filter(&z, c, 0.4, 1.1, &opts()).unwrap() - c).norm() < 1e-14);

        let z2 = inner(&[0.0, 1.0]);
        let zero = Complex64::new(0.0, 0.0);
        let v = segment_filter(&z2, zero, 0.5, 0.0, &opts()).unwrap();
        assert_abs_diff_eq!(v.re, 0.25 / 3.0, epsilon = 1e-9);
        let v = segment_filter(&z2, zero, 0.5, PI / 2.0, &opts()).unwrap();
        assert_abs_diff_eq!(v.re, -0.25 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-9);
        let line = segment_line_integral(&z2, zero, 0.5, PI / 2.0, &opts()).unwrap();
        assert_abs_diff_eq!(line.im, -0.25 / 3.0, epsilon = 1e-9);

        assert!(matches!(
            segment_filter(&z2, Complex64::new(0.8, 0.0), 0.3, 0.0, &opts()),
            Err(Error::SegmentEscapesDisk(_))
        ));
    }

    #[test]
    fn complex_kernel_examples() {
        let spec = KernelSpec::new(2, 0.5, Variant::Fixed).unwrap();
        let origin = complex_kernel_eval(&spec, pt(0.0, 0.7), 1.0, 0.2, &opts()).unwrap();
        assert_eq!(origin, Complex64::new(0.5 / PI, 0.0));
        assert!(matches!(
            complex_kernel_eval(&spec, pt(0.9, 0.0), 0.9, 0.0, &opts()),
            Err(Error::RadiusOrdering { .. })
        ));

        let kernel = ComplexKernel::new(&spec, 0.999 * 0.95, 0.95, &opts()).unwrap();
        let m = 1 << 14;
        let h = 2.0 * PI / m as f64;
        let total = (0..m)
            .map(|j| kernel.value(crate::series::grid_point(j, m), 0.4))
            .sum::<Complex64>()
            * h;
        assert_abs_diff_eq!(total.re, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(total.im, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn complex_kernel_real_part_approaches_the_kernel() {
        let spec = KernelSpec::new(4, 0.5, Variant::Fixed).unwrap();
        let real = crate::Kernel::new(&spec, &opts()).unwrap();
        let kernel = ComplexKernel::new(&spec, 1.0 - 1e-7, 1.0, &opts()).unwrap();
        for &x in &[0.0, 0.1, 0.3, 0.6] {
            assert_abs_diff_eq!(kernel.value(x, 0.0).re, real.value(x), epsilon = 1e-5);
        }
    }

    #[test]
    fn boundary_values_match_the_series() {
        let tri = make_waveform(Waveform::Triangle, 100_000).unwrap();
        let w = InnerAnalytic::from(&tri);
        for &theta in &[0.0, 0.4, 2.0, -3.0] {
            let v = eval_inner(&w, pt(1.0 - 1e-8, theta), &opts()).unwrap();
            assert_abs_diff_eq!(v.re, eval_series(&tri, theta, &opts()).unwrap(), epsilon = 1e-6);
        }
        let sine = HarmonicCoefficients::new(Parity::Sine, tri.coeffs().to_vec()).unwrap();
        let v = eval_inner(&w, pt(1.0 - 1e-8, 0.9), &opts()).unwrap();
        assert_abs_diff_eq!(v.im, eval_series(&sine, 0.9, &opts()).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn pascal_superposition_matches_coefficients() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let w = InnerAnalytic::new((0..24).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        for order in [2u32, 3, 4] {
            let spec = KernelSpec::new(order, 0.5, Variant::Fixed).unwrap();
            let filtered = w.map(|k, a| filter_multiplier(k, &spec) * a);
            for _ in 0..20 {
                let p = pt(rng.gen_range(0.0..0.95), rng.gen_range(-PI..PI));
                let a = superposition_filter_eval(&w, &spec, p, &opts()).unwrap();
                let b = eval_inner(&filtered, p, &opts()).unwrap();
                assert!((a - b).norm() <= 1e-9, "order {order}: {}", (a - b).norm());
            }
        }
        let scaled = KernelSpec::new(3, 0.5, Variant::Scaled).unwrap();
        let filtered = w.map(|k, a| filter_multiplier(k, &scaled) * a);
        let p = pt(0.6, 1.0);
        let a = superposition_filter_eval(&w, &scaled, p, &opts()).unwrap();
        assert!((a - eval_inner(&filtered, p, &opts()).unwrap()).norm() <= 1e-9);
    }

    #[test]
    fn cauchy_riemann_holds_for_filtered_functions() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let square = InnerAnalytic::from(&make_waveform(Waveform::Square, 2000).unwrap());
        let w = complex_filter_coeffs(&square, 0.5).unwrap();
        for _ in 0..50 {
            let p = pt(rng.gen_range(0.1..0.9), rng.gen_range(-PI..PI));
            assert!(cauchy_riemann_residual(&w, p, 1e-5, &opts()).unwrap() <= 1e-6);
        }
    }

    proptest! {
        #[test]
        fn primitive_then_derivative_is_identity(c in proptest::collection::vec(-1e3f64..1e3, 0..50)) {
            let w = InnerAnalytic::new(c).unwrap();
            let back = log_derivative(&log_primitive(&w));
            for (a, b) in back.coeffs().iter().zip(w.coeffs()) {
                prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs());
            }
        }

        #[test]
        fn operator_and_coefficient_filters_agree(
            c in proptest::collection::vec(-1.0f64..1.0, 32),
            eps in 0.01f64..PI,
            rho in 0.0f64..0.99,
            theta in -PI..PI,
        ) {
            let w = InnerAnalytic::new(c).unwrap();
            let p = pt(rho, theta);
            let a = complex_filter_eval(&w, eps, p, &opts()).unwrap();
            let b = eval_inner(&complex_filter_coeffs(&w, eps).unwrap(), p, &opts()).unwrap();
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}
