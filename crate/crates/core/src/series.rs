//! Definite-parity Fourier series and sampled periodic signals.
//!
//! A definite-parity series is either a pure cosine series or a pure sine
//! series with no constant term:
//!
//! ```text
//! f_c(θ) = Σ_{k≥1} a_k cos(kθ)        f_s(θ) = Σ_{k≥1} a_k sin(kθ)
//! ```
//!
//! Sampled signals live on the uniform periodic grid `θ_j = -π + 2πj/M`, so
//! that `θ = 0` and `θ = -π` are always grid points for even `M`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::trig::harmonic_sums;

/// Which trigonometric family a coefficient sequence multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Even series `Σ a_k cos(kθ)`.
    Cosine,
    /// Odd series `Σ a_k sin(kθ)`.
    Sine,
}

/// One side of a Fourier-conjugate pair: `a_1, a_2, ...` plus a parity tag.
///
/// The `k = 0` slot does not exist, so every series represented here has zero
/// mean over the period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients")]
pub struct HarmonicCoefficients {
    parity: Parity,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCoefficients {
    parity: Parity,
    coeffs: Vec<f64>,
}

impl TryFrom<RawCoefficients> for HarmonicCoefficients {
    type Error = Error;

    fn try_from(raw: RawCoefficients) -> Result<Self> {
        Self::new(raw.parity, raw.coeffs)
    }
}

impl HarmonicCoefficients {
    /// Builds a coefficient sequence; `coeffs[0]` is `a_1`.
    pub fn new(parity: Parity, coeffs: Vec<f64>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|a| !a.is_finite()) {
            return Err(invalid(format!("coefficient a_{} is not finite", k + 1)));
        }
        Ok(Self { parity, coeffs })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// The coefficients, `a_1` first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies `a_k` by `multiplier(k)` for every `k ≥ 1`.
    pub fn map_multiplier(&self, mut multiplier: impl FnMut(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * multiplier(i + 1))
            .collect();
        Self {
            parity: self.parity,
            coeffs,
        }
    }
}

/// Truncation and quadrature controls shared by the evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Largest harmonic index any series may use.
    pub k_max: usize,
    /// Absolute bound a series tail must fall below before truncation.
    pub tail_tol: f64,
    /// Quadrature nodes per period.
    pub quad_resolution: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            k_max: 1 << 20,
            tail_tol: 1e-12,
            quad_resolution: 1 << 14,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(invalid("k_max must be positive"));
        }
        if self.tail_tol.is_nan() || self.tail_tol <= 0.0 {
            return Err(invalid("tail_tol must be positive"));
        }
        if self.quad_resolution < 2 {
            return Err(invalid("quad_resolution must be at least 2"));
        }
        Ok(())
    }
}

/// Real samples on the periodic grid `θ_j = -π + 2πj/M`, `j = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("a sampled signal needs at least one value"));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {j} is not finite")));
        }
        Ok(Self { values })
    }

    /// Samples `f` on the grid of the given resolution.
    pub fn from_fn(resolution: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if resolution == 0 {
            return Err(invalid("resolution must be positive"));
        }
        Self::new((0..resolution).map(|j| f(grid_point(j, resolution))).collect())
    }

    pub fn resolution(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Grid angle of sample `j`.
    pub fn theta(&self, j: usize) -> f64 {
        grid_point(j, self.values.len())
    }

    /// Grid spacing `2π/M`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.values.len() as f64
    }

    /// Sample at a possibly out-of-range index, wrapping modulo `M`.
    pub fn at(&self, j: isize) -> f64 {
        let m = self.values.len() as isize;
        self.values[j.rem_euclid(m) as usize]
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |j| self.theta(j))
    }
}

/// `θ_j = -π + 2πj/M`.
pub fn grid_point(j: usize, resolution: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / resolution as f64
}

/// Maps an angle into `[-π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let wrapped = theta - two_pi * ((theta + PI) / two_pi).floor();
    if wrapped >= PI {
        wrapped - two_pi
    } else {
        wrapped
    }
}

/// Evaluates the series at `theta`, truncated at `min(len, k_max)` terms.
pub fn eval_series(coeffs: &HarmonicCoefficients, theta: f64, opts: &EvalOptions) -> Result<f64> {
    if !theta.is_finite() {
        return Err(invalid("theta must be finite"));
    }
    let n = coeffs.len().min(opts.k_max);
    let (c, s) = harmonic_sums(&coeffs.coeffs[..n], theta);
    Ok(match coeffs.parity {
        Parity::Cosine => c,
        Parity::Sine => s,
    })
}

/// Samples the series on the periodic grid of the given resolution.
pub fn render_signal(coeffs: &HarmonicCoefficients, resolution: usize, opts: &EvalOptions) -> Result<SampledSignal> {
    if resolution < 2 {
        return Err(invalid("resolution must be at least 2"));
    }
    let values = (0..resolution)
        .map(|j| eval_series(coeffs, grid_point(j, resolution), opts))
        .collect::<Result<Vec<_>>>()?;
    SampledSignal::new(values)
}

/// The three unit-amplitude test waveforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Waveform {
    /// `+1` on `(0, π)`, `-1` on `(-π, 0)`.
    Square,
    /// Period-π ramp from `+1` down to `-1`, jumping at `0` and `±π`.
    Sawtooth,
    /// `2|θ|/π - 1`, with corners at `0` and `±π`.
    Triangle,
}

impl Waveform {
    pub const ALL: [Waveform; 3] = [Waveform::Square, Waveform::Sawtooth, Waveform::Triangle];

    pub fn parity(self) -> Parity {
        match self {
            Waveform::Square | Waveform::Sawtooth => Parity::Sine,
            Waveform::Triangle => Parity::Cosine,
        }
    }

    /// Fourier coefficient `a_k` of the waveform.
    pub fn coefficient(self, k: usize) -> f64 {
        let kf = k as f64;
        let odd = k % 2 == 1;
        match self {
            Waveform::Square if odd => 4.0 / (PI * kf),
            Waveform::Sawtooth if !odd => -4.0 / (PI * kf),
            Waveform::Triangle if odd => -8.0 / (PI * PI * kf * kf),
            _ => 0.0,
        }
    }

    /// `(A, p)` with `|a_k| ≤ A k^p` for every `k`.
    pub fn coefficient_envelope(self) -> (f64, f64) {
        match self {
            Waveform::Square | Waveform::Sawtooth => (4.0 / PI, -1.0),
            Waveform::Triangle => (8.0 / (PI * PI), -2.0),
        }
    }

    /// Exact pointwise value; jumps take the midpoint of the one-sided limits.
    pub fn value(self, theta: f64) -> f64 {
        let t = wrap_angle(theta);
        match self {
            Waveform::Square => {
                if t == 0.0 || t == -PI {
                    0.0
                } else {
                    t.signum()
                }
            }
            Waveform::Sawtooth => {
                if t == 0.0 || t == -PI {
                    0.0
                } else if t > 0.0 {
                    2.0 * t / PI - 1.0
                } else {
                    2.0 * t / PI + 1.0
                }
            }
            Waveform::Triangle => 2.0 * t.abs() / PI - 1.0,
        }
    }
}

impl fmt::Display for Waveform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Waveform::Square => "square",
            Waveform::Sawtooth => "sawtooth",
            Waveform::Triangle => "triangle",
        })
    }
}

impl FromStr for Waveform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Waveform::Square),
            "sawtooth" => Ok(Waveform::Sawtooth),
            "triangle" => Ok(Waveform::Triangle),
            other => Err(invalid(format!(
                "unknown waveform '{other}' (expected square, sawtooth or triangle)"
            ))),
        }
    }
}

/// First `k_max` Fourier coefficients of a waveform.
pub fn make_waveform(kind: Waveform, k_max: usize) -> Result<HarmonicCoefficients> {
    if k_max == 0 {
        return Err(invalid("k_max must be at least 1"));
    }
    let coeffs = (1..=k_max).map(|k| kind.coefficient(k)).collect();
    HarmonicCoefficients::new(kind.parity(), coeffs)
}
