//! Decay-law fitting for singular value sequences, beta-parameter
//! estimation, and lattice-counting oracles.

mod lattice;

pub use lattice::{chobou_budget, count_lattice, estim_inf_bound, rearrangement_oracle, Level};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy1d::SingularSpectrum;

/// Model families `a_n ~ A exp(-beta g(n))` fitted by least squares on the
/// log scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayFamily {
    /// `g(n) = n`.
    Exponential,
    /// `g(n) = sqrt(n)`.
    SqrtExponential,
    /// `g(n) = n^(1/3)`.
    CubeRootExponential,
    /// `g(n) = sqrt(n / log n)`.
    SqrtOverLog,
    /// `g(n) = n / log n`.
    LinearOverLog,
}

impl DecayFamily {
    pub const ALL: [DecayFamily; 5] = [
        DecayFamily::Exponential,
        DecayFamily::SqrtExponential,
        DecayFamily::CubeRootExponential,
        DecayFamily::SqrtOverLog,
        DecayFamily::LinearOverLog,
    ];

    /// Index transform `g(n)`; `n >= 2` for the log-involving families.
    pub fn transform(&self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            DecayFamily::Exponential => x,
            DecayFamily::SqrtExponential => x.sqrt(),
            DecayFamily::CubeRootExponential => x.cbrt(),
            DecayFamily::SqrtOverLog => (x / x.ln()).sqrt(),
            DecayFamily::LinearOverLog => x / x.ln(),
        }
    }

    fn needs_log(&self) -> bool {
        matches!(self, DecayFamily::SqrtOverLog | DecayFamily::LinearOverLog)
    }
}

/// Fitted rate model for a singular value sequence.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub family: DecayFamily,
    /// Decay exponent, positive for decaying input.
    pub beta: f64,
    pub amplitude: f64,
    /// Coefficient of determination of the linear fit of `log a_n` against
    /// the transformed index.
    pub r2: f64,
    /// Inclusive 1-based index range used by the fit.
    pub n_range: (usize, usize),
}

/// Leading indices dropped before fitting: asymptotic statements, early
/// indices are constant-dominated.
const FIT_SKIP: usize = 5;
const FIT_MIN_POINTS: usize = 8;

/// Ordinary least squares of `log a_n` on `g(n)` over the stabilized
/// entries (non-stabilized values are dropped wherever they sit: in a merged
/// block spectrum the unconverged entries of one block interleave with
/// well-converged entries of the others).
pub fn fit_decay(spectrum: &SingularSpectrum, family: DecayFamily) -> Result<DecayFit> {
    let start = if family.needs_log() {
        FIT_SKIP.max(2)
    } else {
        FIT_SKIP
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut n_range = (usize::MAX, 0usize);
    for i in start..spectrum.values.len() {
        if !spectrum.stabilized(i) {
            continue;
        }
        let v = spectrum.values[i];
        if v <= 0.0 {
            break;
        }
        let n = i + 1;
        xs.push(family.transform(n));
        ys.push(v.ln());
        n_range = (n_range.0.min(n), n_range.1.max(n));
    }
    if xs.len() < FIT_MIN_POINTS {
        return Err(Error::InsufficientData {
            needed: FIT_MIN_POINTS,
            got: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::NotDecaying);
    }
    let slope = sxy / sxx;
    if slope >= 0.0 {
        return Err(Error::NotDecaying);
    }
    let intercept = my - slope * mx;
    let r2 = (sxy * sxy) / (sxx * syy);
    Ok(DecayFit {
        family,
        beta: -slope,
        amplitude: intercept.exp(),
        r2,
        n_range,
    })
}

/// Classification thresholds for [`beta_estimate`], surfaced in the output.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaThresholds {
    /// A stable plateau must stay below this to count as bounded below 1.
    pub plateau_cap: f64,
    /// Max spread of the last three ratios accepted as a plateau.
    pub plateau_spread: f64,
    /// Final value an increasing sequence must exceed to count as
    /// approaching 1.
    pub approach_floor: f64,
}

impl Default for BetaThresholds {
    fn default() -> Self {
        BetaThresholds {
            plateau_cap: 0.98,
            plateau_spread: 0.02,
            approach_floor: 0.9,
        }
    }
}

/// Observed trend of `b_n = a_(n^d)^(1/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "trend", rename_all = "snake_case")]
pub enum BetaTrend {
    ApproachingOne,
    BoundedBelowOne { value: f64 },
    Inconclusive,
}

/// Estimate of the dimension-`d` decay parameter from a finite spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct BetaEstimate {
    pub d: usize,
    /// Pairs `(n, b_n)` over the stabilized range.
    pub ratios: Vec<(usize, f64)>,
    pub trend: BetaTrend,
    pub thresholds: BetaThresholds,
}

/// Compute `b_n = a_(n^d)^(1/n)` on stabilized values and classify the
/// trend.
///
/// An increasing tail with final value above `approach_floor` is classified
/// as approaching 1 (checked first: a sequence still climbing at the window
/// edge is not a plateau); otherwise a last-three plateau below
/// `plateau_cap` is classified as bounded below 1; anything else is
/// inconclusive.
pub fn beta_estimate(
    spectrum: &SingularSpectrum,
    d: usize,
    thresholds: BetaThresholds,
) -> Result<BetaEstimate> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension d must be >= 1".into()));
    }
    let mut ratios = Vec::new();
    for n in 1usize.. {
        let Some(index) = n.checked_pow(d as u32) else {
            break;
        };
        if index > spectrum.values.len() {
            break;
        }
        // Skip sample points whose entry has not stabilized.
        if !spectrum.stabilized(index - 1) {
            continue;
        }
        let a = spectrum.values[index - 1];
        if a <= 0.0 {
            break;
        }
        ratios.push((n, a.powf(1.0 / n as f64)));
    }
    // The head ratios are norm-dominated transients (b_1 is literally
    // ||T||^1); classify on the n >= 3 window.
    let window: Vec<f64> = ratios
        .iter()
        .filter(|(n, _)| *n >= 3)
        .map(|p| p.1)
        .collect();
    if window.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: window.len(),
        });
    }

    let last3: Vec<f64> = window.iter().rev().take(3).copied().collect();
    let spread = last3.iter().cloned().fold(f64::MIN, f64::max)
        - last3.iter().cloned().fold(f64::MAX, f64::min);
    let max_b = window.iter().copied().fold(f64::MIN, f64::max);
    let final_b = *window.last().unwrap();
    let increasing_tail = last3[0] > last3[1] && last3[1] > last3[2];

    let trend = if increasing_tail && final_b > thresholds.approach_floor {
        BetaTrend::ApproachingOne
    } else if spread <= thresholds.plateau_spread && max_b < thresholds.plateau_cap {
        BetaTrend::BoundedBelowOne { value: final_b }
    } else {
        BetaTrend::Inconclusive
    };
    Ok(BetaEstimate {
        d,
        ratios,
        trend,
        thresholds,
    })
}
