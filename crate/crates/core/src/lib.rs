//! Low-pass filters for definite-parity Fourier series.
//!
//! The filters are compositions of moving averages. In coefficient space each
//! stage multiplies harmonic `k` by `sinc(k w)`, in physical space it
//! convolves with a box of half-width `w`. Choosing how the stage widths scale
//! with the number of stages gives four families:
//!
//! - [`Variant::Naive`], [`Variant::Fixed`] and [`Variant::Gaussian`], whose
//!   `N → ∞` limits are a constant, a delta and a Gaussian;
//! - [`Variant::Scaled`], whose limit is a smooth bump supported on `[-ε, ε]`.
//!
//! The same filters act on inner analytic functions in the unit disk
//! ([`complex`]), and an independent brute-force [`oracle`] backs the tests.
//!
//! ```
//! use dpfilter::{apply_scaled_filter, eval_series, make_waveform};
//! use dpfilter::{EvalOptions, ScaledKernelParams, Waveform};
//!
//! let square = make_waveform(Waveform::Square, 20_000)?;
//! let params = ScaledKernelParams::new(0.5, 100)?;
//! let smooth = apply_scaled_filter(&square, &params);
//! let v = eval_series(&smooth, 1.0, &EvalOptions::default())?;
//! assert!((v - 1.0).abs() < 1e-4);
//! # Ok::<(), dpfilter::Error>(())
//! ```

pub mod cli;
pub mod complex;
mod error;
pub mod filters;
pub mod io;
mod kernel;
pub mod oracle;
pub mod scaled;
pub mod series;
mod trig;

pub use complex::{
    cauchy_riemann_residual, complex_filter_coeffs, complex_filter_eval, complex_kernel_eval, eval_inner,
    log_derivative, log_primitive, log_primitive_n, segment_filter, segment_line_integral, superposition_filter_eval,
    ComplexKernel, DiskPoint, InnerAnalytic,
};
pub use error::{Error, Result};
pub use filters::{
    apply_filter_coeffs, filter_direct, filter_multiplier, kernel_eval, kernel_integral, sinc, KernelSpec, Variant,
};
pub use kernel::Kernel;
pub use oracle::{oracle_iterated_filter, oracle_moving_average, oracle_partial_sum, OracleConfig};
pub use scaled::{
    apply_scaled_filter, effective_range, filtered_waveform, invariant_points, scaled_coefficient,
    scaled_kernel_derivative, scaled_kernel_eval, zero_derivative_points, ScaledDerivative, ScaledKernelParams,
    SelfSimilarDerivative, DEFAULT_SCALED_ORDER,
};
pub use series::{
    eval_series, grid_point, make_waveform, render_signal, wrap_angle, EvalOptions, HarmonicCoefficients, Parity,
    SampledSignal, Waveform,
};

/// Guide chapters, compiled so their snippets stay in step with the API.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/moving-average.md")]
    struct MovingAverage;
    #[doc = include_str!("../../../book/src/stages.md")]
    struct Stages;
    #[doc = include_str!("../../../book/src/scaled-kernel.md")]
    struct ScaledKernel;
    #[doc = include_str!("../../../book/src/complex-plane.md")]
    struct ComplexPlane;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
}
