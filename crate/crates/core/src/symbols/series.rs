//! Truncated Taylor expansions extracted by sampling on a circle.
//!
//! Coefficients come from the discrete Fourier transform of boundary samples
//! on `|z| = rho_s < 1`:
//!
//! `c_n = rho_s^{-n} * (1/M) * sum_k f(rho_s e^{2 pi i k / M}) e^{-2 pi i n k / M}`.
//!
//! With `M` samples the DFT aliases coefficients `M` apart; since every map
//! we expand is bounded by 1 on the disk, the aliasing error per coefficient
//! is at most `rho_s^M / (1 - rho_s^M)`. The sample count is chosen so that
//! this bound meets the requested tolerance (never fewer than `4 (D + 1)`
//! samples for degree `D`). Sampling strictly inside the disk keeps the zoo
//! maps that touch the boundary well-conditioned.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::symbols::{Role, SymbolSpec};

/// Truncated Taylor series with sampling provenance and a tail estimate.
#[derive(Debug, Clone)]
pub struct PowerSeries {
    /// Coefficients `c_0 ..= c_D`.
    pub coefficients: Vec<Complex64>,
    /// Radius of the sampling circle used for extraction.
    pub sampling_radius: f64,
    /// Cauchy-bound estimate of the discarded tail at the sampling radius:
    /// `max |f| on the circle * rho_s^{D+1} / (1 - rho_s)`.
    pub tail_estimate: f64,
}

impl PowerSeries {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation of the truncated series.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Options for Taylor extraction.
#[derive(Debug, Clone)]
pub struct TaylorOptions {
    /// Aliasing tolerance the sample count must certify.
    pub aliasing_tol: f64,
    /// Hard cap on the number of boundary samples.
    pub max_samples: usize,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions {
            aliasing_tol: 1e-13,
            max_samples: 1 << 22,
        }
    }
}

/// Default sampling radius for a degree-`d` expansion.
///
/// The zoo maps touch the boundary, so sampling on the unit circle itself is
/// ill-conditioned; `max(0.5, 1 - 4/d)` balances coefficient amplification
/// `rho^{-n}` against the aliasing bound.
pub fn default_sampling_radius(degree: usize) -> f64 {
    if degree == 0 {
        0.5
    } else {
        (1.0 - 4.0 / degree as f64).max(0.5)
    }
}

/// Number of samples certifying the aliasing tolerance at radius `rho`.
pub(crate) fn sample_count(degree: usize, rho: f64, opts: &TaylorOptions) -> Result<usize> {
    let from_degree = 4 * (degree + 1);
    let from_aliasing = (opts.aliasing_tol.ln() / rho.ln()).ceil() as usize;
    let required = from_degree.max(from_aliasing).max(64);
    let m = required.next_power_of_two();
    if m > opts.max_samples {
        return Err(Error::AliasingBudget {
            radius: rho,
            required: m,
            cap: opts.max_samples,
            tolerance: opts.aliasing_tol,
        });
    }
    Ok(m)
}

/// Samples of a map on the circle `|z| = rho`, shared by matrix builders.
pub(crate) struct CircleSamples {
    pub values: Vec<Complex64>,
}

pub(crate) fn sample_circle(spec: &SymbolSpec, rho: f64, m: usize) -> Result<CircleSamples> {
    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        values.push(spec.eval(Complex64::from_polar(rho, t))?);
    }
    Ok(CircleSamples { values })
}

/// DFT of the samples scaled back to Taylor coefficients, plus the recorded
/// tail estimate. `fft` must be a forward plan of the sample length.
pub(crate) fn coefficients_from_samples(
    samples: &[Complex64],
    rho: f64,
    degree: usize,
    fft: &Arc<dyn Fft<f64>>,
) -> PowerSeries {
    let m = samples.len();
    let mut buf = samples.to_vec();
    fft.process(&mut buf);
    let sup = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let inv_m = 1.0 / m as f64;
    let mut coefficients = Vec::with_capacity(degree + 1);
    let mut scale = 1.0;
    for item in buf.iter().take(degree + 1) {
        coefficients.push(item * inv_m * scale);
        scale /= rho;
    }
    let tail_estimate = sup * rho.powi(degree as i32 + 1) / (1.0 - rho);
    PowerSeries {
        coefficients,
        sampling_radius: rho,
        tail_estimate,
    }
}

/// Taylor coefficients `c_0 ..= c_degree` of the map described by `spec`,
/// extracted on the circle of radius `radius`.
pub fn taylor(
    spec: &SymbolSpec,
    degree: usize,
    radius: f64,
    opts: &TaylorOptions,
) -> Result<PowerSeries> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling radius {radius} outside (0, 1)"
        )));
    }
    spec.validate(Role::Weight)?;
    let m = sample_count(degree, radius, opts)?;
    let samples = sample_circle(spec, radius, m)?;
    let fft = FftPlanner::new().plan_fft_forward(m);
    Ok(coefficients_from_samples(
        &samples.values,
        radius,
        degree,
        &fft,
    ))
}
