//! Closed-form Green and Monge-Ampere capacities for centered disks and
//! polydisks, and the `Gamma` parameters that link capacity to spectral
//! decay rates.

use serde::Serialize;

use crate::error::{Error, Result};

/// Capacity of a product set together with its decay parameter.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityValue {
    /// Normalized Monge-Ampere capacity `tau_m`.
    pub tau: f64,
    /// Dimension `m >= 1`.
    pub m: usize,
    /// `Gamma_m = exp(-(m! / tau_m)^(1/m))`, in `(0, 1)`.
    pub gamma: f64,
    /// The polydisk radii describing the set.
    pub radii: Vec<f64>,
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// `Gamma_m` from a capacity value, `exp(-(m!/tau)^(1/m))`.
pub fn gamma_from_tau(tau: f64, m: usize) -> f64 {
    (-(factorial(m) / tau).powf(1.0 / m as f64)).exp()
}

/// Green capacity of the centered disk of radius `r` relative to the unit
/// disk: `1 / log(1/r)`.
pub fn green_capacity_disk(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "disk radius {r} outside (0, 1); capacity diverges at r = 1"
        )));
    }
    Ok(1.0 / (1.0 / r).ln())
}

/// Capacity of the centered polydisk with the given radii:
/// `tau_m = prod_k 1/log(1/r_k)` and the induced `Gamma_m`.
pub fn tau_polydisk(radii: &[f64]) -> Result<CapacityValue> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter(
            "polydisk needs at least one radius".into(),
        ));
    }
    let mut tau = 1.0;
    for &r in radii {
        tau *= green_capacity_disk(r)?;
    }
    let m = radii.len();
    Ok(CapacityValue {
        tau,
        m,
        gamma: gamma_from_tau(tau, m),
        radii: radii.to_vec(),
    })
}

/// Growth proxy `log(1/(1 - diam))` for the capacity of a set of the given
/// pseudo-hyperbolic diameter.
///
/// The absolute constant relating this to the true capacity is unknown; the
/// value is only meaningful in slope comparisons and is flagged as a proxy
/// in every output that carries it.
pub fn capacity_growth_proxy(diam: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&diam) {
        return Err(Error::InvalidParameter(format!(
            "pseudo-hyperbolic diameter {diam} outside [0, 1)"
        )));
    }
    Ok((1.0 / (1.0 - diam)).ln())
}
