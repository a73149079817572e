//! Stable boundary evaluation of `1 - |f(e^{it})|^2` (the "defect") and
//! `1 - f(e^{it})` (the "gap").
//!
//! Near a boundary contact point the defect underflows the naive
//! `1 - norm_sqr` path long before it is actually zero; the Hilbert-Schmidt
//! integrands `|w|^2/(1-|phi|^2)` need it far below f64 resolution of
//! `|phi|` itself. For the closed-form primitives both quantities follow
//! from exact factorizations (for the lens map,
//! `1 - |lambda|^2 = 4 Re(a conj(b)) / |a+b|^2` with `a = (1+z)^theta`,
//! `b = (1-z)^theta`, and `Re(a conj(b)) = cos(theta pi/2) (2 sin t)^theta`),
//! and the combinators propagate them. Nodes without a stable rule fall
//! back to the naive evaluation.

use num_complex::Complex64;

use crate::error::Result;
use crate::symbols::SymbolSpec;

/// `1 - e^{it}` without cancellation: `2 sin(t/2) e^{i(t/2 - pi/2)}`.
fn gap_identity(t: f64) -> Complex64 {
    let half = 0.5 * t;
    Complex64::from_polar(2.0 * half.sin().abs(), {
        if half.sin() >= 0.0 {
            half - std::f64::consts::FRAC_PI_2
        } else {
            half + std::f64::consts::FRAC_PI_2
        }
    })
}

/// Normalize the angle into `(-pi, pi]`.
fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = t % two_pi;
    if t > std::f64::consts::PI {
        t -= two_pi;
    } else if t <= -std::f64::consts::PI {
        t += two_pi;
    }
    t
}

/// The factors `(1+z)^theta` and `(1-z)^theta` at `z = e^{it}` in stable
/// polar form (`|t| <= pi`).
fn lens_factors(theta: f64, t: f64) -> (Complex64, Complex64) {
    let half = 0.5 * t;
    // 1 + e^{it} = 2 cos(t/2) e^{it/2}; 1 - e^{it} = 2 |sin(t/2)| e^{i(...)}.
    let a = Complex64::from_polar((2.0 * half.cos()).powf(theta), theta * half);
    let gap = gap_identity(t);
    let b = Complex64::from_polar(gap.norm().powf(theta), theta * gap.arg());
    (a, b)
}

/// Stable `1 - f(e^{it})` where the node structure provides one.
fn boundary_gap(spec: &SymbolSpec, t: f64) -> Result<Option<Complex64>> {
    let t = wrap_angle(t);
    match spec {
        SymbolSpec::Identity => Ok(Some(gap_identity(t))),
        SymbolSpec::HalfShift => Ok(Some(gap_identity(t) / 2.0)),
        SymbolSpec::Lens { theta } => {
            let (a, b) = lens_factors(*theta, t);
            Ok(Some(2.0 * b / (a + b)))
        }
        SymbolSpec::Compose { outer, inner } => match (&**outer, boundary_gap(inner, t)?) {
            (SymbolSpec::HalfShift, Some(gap)) => Ok(Some(gap / 2.0)),
            _ => Ok(None),
        },
        _ => Ok(None),
    }
}

/// `1 - |f(e^{it})|^2`, stable where the node structure provides a rule and
/// the naive evaluation otherwise. Always in `[0, 1]` up to rounding.
pub fn boundary_defect(spec: &SymbolSpec, t: f64) -> Result<f64> {
    if let Some(d) = stable_defect(spec, t)? {
        return Ok(d.max(0.0));
    }
    let z = Complex64::from_polar(1.0, t);
    Ok((1.0 - spec.eval(z)?.norm_sqr()).max(0.0))
}

fn stable_defect(spec: &SymbolSpec, t: f64) -> Result<Option<f64>> {
    let t = wrap_angle(t);
    match spec {
        SymbolSpec::Identity | SymbolSpec::Power { q: 1.. } => Ok(Some(0.0)),
        SymbolSpec::BlaschkeFinite { .. } | SymbolSpec::BlaschkeInterp { .. } => Ok(Some(0.0)),
        SymbolSpec::HalfShift => {
            let s = (0.5 * t).sin();
            Ok(Some(s * s))
        }
        SymbolSpec::Lens { theta } => {
            let (a, b) = lens_factors(*theta, t);
            let delta = (*theta * std::f64::consts::FRAC_PI_2).cos();
            let re_ab = delta * (2.0 * t.sin().abs()).powf(*theta);
            Ok(Some(4.0 * re_ab / (a + b).norm_sqr()))
        }
        SymbolSpec::Cusp => {
            // Logarithmic contact: chi_3 = a / chi_2 stays O(1/log), so the
            // expansion 1 - |1 - chi_3|^2 = 2 Re(chi_3) - |chi_3|^2 is exact
            // to working precision at any representable angle.
            if t == 0.0 {
                return Ok(Some(0.0));
            }
            let z = Complex64::from_polar(1.0, t);
            let chi = spec.eval(z)?;
            let chi3 = Complex64::ONE - chi;
            Ok(Some(2.0 * chi3.re - chi3.norm_sqr()))
        }
        SymbolSpec::OuterWeight { theta } => {
            // |w|^2 = exp(-2 Re S); near S -> 0 use expm1.
            let gap = gap_identity(t);
            if gap == Complex64::ZERO {
                return Ok(Some(1.0));
            }
            let cayley = (2.0 - gap) / gap;
            let s = cayley.powf(*theta);
            Ok(Some(-(-2.0 * s.re).exp_m1()))
        }
        SymbolSpec::PointwiseProduct { left, right } => {
            match (stable_defect(left, t)?, stable_defect(right, t)?) {
                (Some(dl), Some(dr)) => Ok(Some(dl + dr - dl * dr)),
                _ => Ok(None),
            }
        }
        SymbolSpec::ScalarMultiple { scalar, inner } => match stable_defect(inner, t)? {
            Some(d) => {
                let c2 = scalar.norm_sqr();
                Ok(Some((1.0 - c2) + c2 * d))
            }
            None => Ok(None),
        },
        SymbolSpec::Compose { outer, inner } => match &**outer {
            SymbolSpec::HalfShift => match (boundary_gap(inner, t)?, stable_defect(inner, t)?) {
                (Some(gap), Some(defect)) => Ok(Some((2.0 * gap.re + defect) / 4.0)),
                _ => Ok(None),
            },
            SymbolSpec::OuterWeight { theta } => match boundary_gap(inner, t)? {
                Some(gap) if gap != Complex64::ZERO => {
                    let cayley = (2.0 - gap) / gap;
                    let s = cayley.powf(*theta);
                    Ok(Some(-(-2.0 * s.re).exp_m1()))
                }
                Some(_) => Ok(Some(1.0)),
                None => Ok(None),
            },
            SymbolSpec::Power { q } => match stable_defect(inner, t)? {
                // 1 - (1-d)^q through log1p/expm1.
                Some(d) if d < 1.0 => Ok(Some(-(*q as f64 * (-d).ln_1p()).exp_m1())),
                Some(_) => Ok(Some(1.0)),
                None => Ok(None),
            },
            _ => Ok(None),
        },
        _ => Ok(None),
    }
}
