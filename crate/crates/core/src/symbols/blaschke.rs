//! Circles on which an interpolating Blaschke product stays bounded away
//! from zero.
//!
//! For real positive zeros with `eps_j = 1 - |z_j| = eps1 * sigma^(j-1)` the
//! construction picks, per level `l`, a radius `r_l = 1 - rho_l` with
//! `rho_l ~ sigma^l` such that `|B| >= delta` on `|z| = r_l`, where `delta`
//! depends only on `sigma`. The floor is an infinite product over the
//! pseudo-hyperbolic separations `rho(r_l, |z_j|)`, split at the last zero
//! with `eps_j >= sigma^(l-1) eps1`; it is evaluated here with a certified
//! truncation of the product tail.

use crate::error::{Error, Result};

/// Which branch of the radius rule fired at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelCase {
    /// Pivot zero well separated: `rho_l = alpha * sigma^(l-1) * eps1` with
    /// fixed `alpha in (1, 2)`.
    SeparatedPivot,
    /// Pivot zero tight: `rho_l = a * eps_{p_l}` with fixed `a in (sigma, 1)`.
    TightPivot,
}

/// Radius and certified modulus floor for one level.
#[derive(Debug, Clone)]
pub struct LevelRadius {
    /// Level index `l >= 1`.
    pub level: usize,
    /// Circle radius `r_l = 1 - rho_l`.
    pub r: f64,
    /// Distance to the boundary `rho_l`.
    pub rho: f64,
    /// Certified lower bound for `|B|` on the circle (for the full infinite
    /// product, hence also for any truncation of it).
    pub delta_floor: f64,
    pub case: LevelCase,
}

/// Fixed midpoint choices inside the admissible parameter ranges
/// `1 < alpha < 2` and `sigma < a < 1`; midpoints avoid the degenerate ends.
const ALPHA: f64 = 1.5;

fn tight_a(sigma: f64) -> f64 {
    (1.0 + sigma) / 2.0
}

/// Certified lower bound for `prod_{k>=0} (1 - q sigma^k) / (1 + q sigma^k)`
/// with `0 < q < 1`: the product is truncated once the factors are within
/// ~1 ulp of 1 and the dropped tail is absorbed by an explicit bound on
/// `|log|` of the remaining factors.
fn separation_product(q: f64, sigma: f64) -> f64 {
    debug_assert!(q > 0.0 && q < 1.0);
    let mut log_sum = 0.0_f64;
    let mut x = q;
    let mut k = 0usize;
    while x > 1e-18 && k < 10_000 {
        log_sum += ((1.0 - x) / (1.0 + x)).ln();
        x *= sigma;
        k += 1;
    }
    // |log((1-x)/(1+x))| = 2 atanh(x) <= 2.02 x for x <= 1e-18-ish tail.
    let tail = 2.02 * x / (1.0 - sigma);
    (log_sum - tail).exp()
}

fn floor_for_case(case: LevelCase, sigma: f64) -> f64 {
    match case {
        LevelCase::SeparatedPivot => {
            // Zeros at or before the pivot: rho_l / eps_j <= (alpha/2) sigma^k;
            // after it: eps_j / rho_l <= (1/alpha) sigma^k.
            separation_product(ALPHA / 2.0, sigma) * separation_product(1.0 / ALPHA, sigma)
        }
        LevelCase::TightPivot => {
            // Before the pivot: rho_l / eps_j <= a sigma^k; after it:
            // eps_j / rho_l <= (sigma/a) sigma^k.
            let a = tight_a(sigma);
            separation_product(a, sigma) * separation_product(sigma / a, sigma)
        }
    }
}

/// Radii `r_l` and certified floors for levels `1..=levels`.
///
/// Zeros follow the strongly interpolating model `eps_j = eps1 sigma^(j-1)`.
/// Levels whose `rho_l` would drop below the floating-point floor `1e-14`
/// are rejected.
pub fn blaschke_radii(sigma: f64, eps1: f64, levels: usize) -> Result<Vec<LevelRadius>> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "interpolation ratio sigma {sigma} outside (0, 1)"
        )));
    }
    if !(eps1 > 0.0 && eps1 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps1 {eps1} outside (0, 1)"
        )));
    }
    let mut out = Vec::with_capacity(levels);
    for l in 1..=levels {
        // Pivot p_l: the last zero with eps_j >= sigma^(l-1) eps1. In the
        // geometric model this is exactly j = l.
        let scale = eps1 * sigma.powi(l as i32 - 1);
        let eps_pivot = scale;
        let (rho, case) = if eps_pivot >= 2.0 * scale {
            (ALPHA * scale, LevelCase::SeparatedPivot)
        } else {
            (tight_a(sigma) * eps_pivot, LevelCase::TightPivot)
        };
        if rho < 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "level {l} puts the circle within {rho:e} of the boundary"
            )));
        }
        out.push(LevelRadius {
            level: l,
            r: 1.0 - rho,
            rho,
            delta_floor: floor_for_case(case, sigma),
            case,
        });
    }
    Ok(out)
}
