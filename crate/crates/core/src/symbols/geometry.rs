//! Pseudo-hyperbolic geometry and boundary statistics of disk self-maps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbols::SymbolSpec;

/// Pseudo-hyperbolic distance `rho(a, b) = |a - b| / |1 - conj(a) b|` on the
/// open disk. Symmetric and invariant under disk automorphisms.
pub fn pseudo_hyperbolic(a: Complex64, b: Complex64) -> Result<f64> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "pseudo-hyperbolic distance needs points in the open disk, got {a}, {b}"
        )));
    }
    Ok(((a - b) / (Complex64::ONE - a.conj() * b)).norm())
}

/// Deterministic grid of `n` points filling the open disk (a low-discrepancy
/// spiral), for property tests and boundary statistics.
pub fn disk_grid(n: usize) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|k| {
            let r = 0.995 * ((k as f64 + 0.5) / n as f64).sqrt();
            Complex64::from_polar(r, golden * k as f64)
        })
        .collect()
}

/// Sampled lower bound for the pseudo-hyperbolic diameter of the image of
/// the closed disk of radius `r`: the max pairwise distance over the images
/// of `samples` equally spaced circle points plus the center.
pub fn pseudo_diameter(spec: &SymbolSpec, r: f64, samples: usize) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "radius {r} outside (0, 1)"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "need at least two circle samples".into(),
        ));
    }
    let mut images = Vec::with_capacity(samples + 1);
    for k in 0..samples {
        let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        images.push(spec.eval(Complex64::from_polar(r, t))?);
    }
    images.push(spec.eval(Complex64::ZERO)?);
    // Values may sit on the boundary up to rounding; nudge inside so the
    // distance stays defined.
    for w in &mut images {
        let n = w.norm();
        if n >= 1.0 {
            *w *= (1.0 - 1e-15) / n;
        }
    }
    let mut best: f64 = 0.0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            best = best.max(pseudo_hyperbolic(images[i], images[j])?);
        }
    }
    Ok(best)
}

/// Empirical pull-back mass of the window `D(1, h)`: the fraction of
/// `samples` boundary points whose image lands within distance `h` of 1.
///
/// Uses a uniform midpoint grid on the circle (deterministic, and never
/// hitting the contact point `z = 1` exactly).
pub fn pullback_window_mass(spec: &SymbolSpec, h: f64, samples: usize) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window size {h} must be positive"
        )));
    }
    if samples < 1000 {
        return Err(Error::InvalidParameter(
            "boundary mass estimate needs at least 1000 samples".into(),
        ));
    }
    let mut hits = 0usize;
    for k in 0..samples {
        let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / samples as f64;
        let w = spec.eval(Complex64::from_polar(1.0, t))?;
        if (w - Complex64::ONE).norm() <= h {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}

/// Sampled non-tangential contact constant: `sup |1 - f(z)| / (1 - |f(z)|)`
/// over a disk grid of the given size. Finite exactly when the image touches
/// the boundary non-tangentially.
pub fn veritas_constant(spec: &SymbolSpec, grid: usize) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for z in disk_grid(grid) {
        let w = spec.eval(z)?;
        let denom = 1.0 - w.norm();
        if denom <= 0.0 {
            continue;
        }
        sup = sup.max((Complex64::ONE - w).norm() / denom);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn distance_to_origin_is_modulus() {
        for &a in &[c(0.3, 0.4), c(-0.7, 0.1), c(0.0, 0.9)] {
            assert!((pseudo_hyperbolic(a, Complex64::ZERO).unwrap() - a.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn identical_points_have_zero_distance() {
        assert_eq!(pseudo_hyperbolic(c(0.5, 0.0), c(0.5, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn near_boundary_lower_bound() {
        // rho(1-u, 1-v) >= |u - v| / (u + v).
        let (u, v) = (0.1, 0.3);
        let d = pseudo_hyperbolic(c(1.0 - u, 0.0), c(1.0 - v, 0.0)).unwrap();
        assert!(d >= (u - v).abs() / (u + v) - 1e-15);
        assert!(d >= 0.5 - 1e-15);
    }

    #[test]
    fn diameter_of_centered_disk_image() {
        // Affine(0.5, 0) at radius 0.9: the antipodal pair is extremal.
        let spec = SymbolSpec::dilation(0.5);
        let want = pseudo_hyperbolic(c(-0.45, 0.0), c(0.45, 0.0)).unwrap();
        assert!((want - 0.9 / (1.0 + 0.2025)).abs() < 1e-12);
        let got = pseudo_diameter(&spec, 0.9, 512).unwrap();
        assert!((got - want).abs() < 1e-6, "got {got}, want {want}");
        // Dense sampling cross-check: no pair beats the antipodal one.
        let dense = pseudo_diameter(&spec, 0.9, 2048).unwrap();
        assert!(dense <= want + 1e-12);
    }

    #[test]
    fn identity_diameter_matches_full_dilation() {
        let a = pseudo_diameter(&SymbolSpec::Identity, 0.7, 256).unwrap();
        let b = pseudo_diameter(&SymbolSpec::dilation(1.0), 0.7, 256).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn lens_diameter_dominates_radial_value() {
        let spec = SymbolSpec::lens(0.5);
        let diam = pseudo_diameter(&spec, 0.99, 2048).unwrap();
        let radial = spec.eval(c(0.99, 0.0)).unwrap().norm();
        assert!(
            diam >= radial - 1e-12,
            "diam {diam} < radial value {radial}"
        );
    }

    #[test]
    fn identity_window_mass_matches_arc_length() {
        let got = pullback_window_mass(&SymbolSpec::Identity, 0.5, 2_000_000).unwrap();
        let want = std::f64::consts::FRAC_2_PI * 0.25f64.asin();
        assert!((got - want).abs() < 1e-5, "got {got}, want {want}");
    }

    #[test]
    fn shrunk_image_never_enters_window() {
        let got = pullback_window_mass(&SymbolSpec::dilation(0.5), 0.4, 10_000).unwrap();
        assert_eq!(got, 0.0);
    }
}
