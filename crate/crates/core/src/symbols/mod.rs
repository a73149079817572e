//! Analytic self-maps of the unit disk: construction, evaluation, Taylor
//! coefficients and hyperbolic-geometry utilities.
//!
//! A [`SymbolSpec`] is a closed-term expression tree over a small set of
//! primitives: affine maps, lens maps, the cusp map, Blaschke products,
//! outer weights `exp(-((1+z)/(1-z))^theta)`, integer powers, the half-shift
//! `z -> (1+z)/2`, plus composition, pointwise product and scalar multiples.
//! All fractional powers and logarithms use the principal branch; an
//! intermediate value landing exactly on the cut is reported as an error,
//! never perturbed.

mod blaschke;
mod defect;
mod geometry;
pub(crate) mod series;

pub use blaschke::{blaschke_radii, LevelCase, LevelRadius};
pub use defect::boundary_defect;
pub use geometry::{
    disk_grid, pseudo_diameter, pseudo_hyperbolic, pullback_window_mass, veritas_constant,
};
pub use series::{taylor, PowerSeries, TaylorOptions};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the `|z| <= 1` domain check.
pub const DISK_TOLERANCE: f64 = 1e-12;

/// Closed-term description of an analytic map on the unit disk.
///
/// Self-maps satisfy `|value| <= 1` on the closed disk. Some node choices
/// (an affine map with `|scale| + |offset| > 1`, `power` with exponent 0)
/// only make sense as bounded weights; [`SymbolSpec::validate`] checks the
/// invariants for the intended role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolSpec {
    /// `z -> z`.
    Identity,
    /// `z -> scale*z + offset`.
    Affine { scale: f64, offset: Complex64 },
    /// Lens map of parameter `theta in (0,1]`, conjugate to `u -> u^theta`
    /// on the right half-plane; touches the boundary at `+-1`.
    Lens { theta: f64 },
    /// Cusp map: exponentially sharp contact with the boundary at `z = 1`.
    Cusp,
    /// Finite Blaschke product with the given zeros in the open disk.
    BlaschkeFinite { zeros: Vec<Complex64> },
    /// Truncated interpolating Blaschke product with real positive zeros
    /// `z_j = 1 - eps_1 * sigma^(j-1)`, `j = 1..=count`.
    BlaschkeInterp { sigma: f64, eps1: f64, count: usize },
    /// Outer weight `z -> exp(-((1+z)/(1-z))^theta)`, `theta in (0,1]`.
    OuterWeight { theta: f64 },
    /// `z -> z^q`.
    Power { q: u32 },
    /// `z -> (1+z)/2`.
    #[serde(rename = "halfshift")]
    HalfShift,
    /// `z -> outer(inner(z))`.
    Compose {
        outer: Box<SymbolSpec>,
        inner: Box<SymbolSpec>,
    },
    /// `z -> left(z) * right(z)`.
    PointwiseProduct {
        left: Box<SymbolSpec>,
        right: Box<SymbolSpec>,
    },
    /// `z -> scalar * inner(z)`.
    ScalarMultiple {
        scalar: Complex64,
        inner: Box<SymbolSpec>,
    },
}

/// Role a spec plays when validating its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Must map the closed disk into itself.
    SelfMap,
    /// Must only be bounded on the disk.
    Weight,
}

/// Cusp-map normalization constant `a = 1 - (2/pi) log(sqrt(2)-1)`, chosen
/// so that the cusp map vanishes at the origin. Lies in `(1, 2)`.
pub fn cusp_constant() -> f64 {
    1.0 - std::f64::consts::FRAC_2_PI * (std::f64::consts::SQRT_2 - 1.0).ln()
}

/// Principal-branch complex power with an explicit branch-cut check.
///
/// `0^theta = 0` for `theta > 0`. A base exactly on the cut (negative real
/// axis with `im == 0`) is reported as [`Error::BranchCut`].
fn principal_pow(base: Complex64, theta: f64) -> Result<Complex64> {
    if base.im == 0.0 && base.re < 0.0 {
        return Err(Error::BranchCut { value: base });
    }
    if base == Complex64::ZERO {
        return Ok(Complex64::ZERO);
    }
    Ok(base.powf(theta))
}

/// Principal logarithm with the same cut check as [`principal_pow`].
fn principal_ln(value: Complex64) -> Result<Complex64> {
    if value.im == 0.0 && value.re < 0.0 {
        return Err(Error::BranchCut { value });
    }
    Ok(value.ln())
}

fn lens_eval(theta: f64, z: Complex64) -> Result<Complex64> {
    // Removable boundary singularities of the closed form.
    if (z - Complex64::ONE).norm() < 1e-15 {
        return Ok(Complex64::ONE);
    }
    if (z + Complex64::ONE).norm() < 1e-15 {
        return Ok(-Complex64::ONE);
    }
    let a = principal_pow(Complex64::ONE + z, theta)?;
    let b = principal_pow(Complex64::ONE - z, theta)?;
    Ok((a - b) / (a + b))
}

/// The cusp chain evaluated in order: each stage stays in the half-plane the
/// next stage needs.
fn cusp_eval(z: Complex64) -> Result<Complex64> {
    if z.norm() > 1.0 - 1e-12 {
        // Near the contact point the angle carries the whole asymptotics;
        // the stable boundary form resolves it down to denormal range and
        // yields the limit value 1 at the point itself.
        let t = z.arg();
        if t.abs() < 0.1 {
            let w = cusp_boundary_near_contact(t.abs());
            return Ok(if t >= 0.0 { w } else { w.conj() });
        }
    }
    // t = (z - i)/(iz - 1) maps the closed disk into the closed upper
    // half-plane; a tiny negative imaginary part can only be rounding noise,
    // and clamping it keeps the square root on the correct side of the cut.
    let i = Complex64::I;
    let denom = i * z - Complex64::ONE;
    let chi0 = if denom == Complex64::ZERO {
        // z = -i is the pole of the front-end; the chain's limit there is i.
        i
    } else {
        let mut t = (z - i) / denom;
        if t.im < 0.0 {
            t.im = 0.0;
        }
        let s = if t.im == 0.0 && t.re < 0.0 {
            // Boundary points land exactly on the cut; the chain continues
            // with the upper-half-plane limit.
            Complex64::new(0.0, (-t.re).sqrt())
        } else {
            principal_pow(t, 0.5)?
        };
        (s - i) / (-i * s + Complex64::ONE)
    };
    let chi1 = principal_ln(chi0)?;
    let chi2 = -std::f64::consts::FRAC_2_PI * chi1 + Complex64::ONE;
    let chi3 = cusp_constant() / chi2;
    Ok(Complex64::ONE - chi3)
}

/// Boundary cusp value for small positive angles, organized so the contact
/// asymptotics survive in f64: the Moebius front-end `T = (z-i)/(iz-1)` is
/// evaluated through `1 + T = sqrt(2) sin(t/2) / sin(t/2 + pi/4)`, which
/// keeps the distance to the pre-image of the cusp point exactly.
fn cusp_boundary_near_contact(t: f64) -> Complex64 {
    debug_assert!((0.0..=0.1).contains(&t));
    let tau =
        std::f64::consts::SQRT_2 * (0.5 * t).sin() / (0.5 * t + std::f64::consts::FRAC_PI_4).sin();
    if tau == 0.0 {
        return Complex64::ONE;
    }
    // s = i sqrt(1 - tau); chi_0 = -i tau / (1 + sqrt(1 - tau))^2.
    let u = (1.0 - tau).sqrt();
    let chi0_mag = tau / ((1.0 + u) * (1.0 + u));
    // chi_1 = log chi_0 with arg(chi_0) = -pi/2.
    let chi1 = Complex64::new(chi0_mag.ln(), -std::f64::consts::FRAC_PI_2);
    let chi2 = -std::f64::consts::FRAC_2_PI * chi1 + Complex64::ONE;
    let chi3 = cusp_constant() / chi2;
    Complex64::ONE - chi3
}

fn blaschke_factor(zero: Complex64, z: Complex64) -> Complex64 {
    if zero == Complex64::ZERO {
        return z;
    }
    (zero.norm() / zero) * (zero - z) / (Complex64::ONE - zero.conj() * z)
}

/// Zeros of the truncated interpolating Blaschke product.
pub fn interp_zeros(sigma: f64, eps1: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|j| Complex64::new(1.0 - eps1 * sigma.powi(j as i32), 0.0))
        .collect()
}

/// Tail of the zero sequence dropped by truncating the interpolating product
/// at `count` zeros: `sum_{j > count} eps_j <= eps1 * sigma^count / (1 - sigma)`.
pub fn interp_truncation_tail(sigma: f64, eps1: f64, count: usize) -> f64 {
    eps1 * sigma.powi(count as i32) / (1.0 - sigma)
}

impl SymbolSpec {
    /// Lens map shorthand.
    pub fn lens(theta: f64) -> Self {
        SymbolSpec::Lens { theta }
    }

    /// `scale*z` shorthand.
    pub fn dilation(scale: f64) -> Self {
        SymbolSpec::Affine {
            scale,
            offset: Complex64::ZERO,
        }
    }

    /// Constant map `z -> c` (a scalar multiple of the constant one).
    pub fn constant(c: Complex64) -> Self {
        SymbolSpec::ScalarMultiple {
            scalar: c,
            inner: Box::new(SymbolSpec::Power { q: 0 }),
        }
    }

    /// `outer(inner(z))` shorthand.
    pub fn compose(outer: SymbolSpec, inner: SymbolSpec) -> Self {
        SymbolSpec::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    /// `f(z)^k` as a spec tree (power composed with `f`).
    pub fn pow_of(self, k: u32) -> Self {
        SymbolSpec::compose(SymbolSpec::Power { q: k }, self)
    }

    /// Check parameter ranges and structural invariants for the given role.
    pub fn validate(&self, role: Role) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSymbol(msg));
        match self {
            SymbolSpec::Identity | SymbolSpec::Cusp | SymbolSpec::HalfShift => Ok(()),
            SymbolSpec::Affine { scale, offset } => {
                if !scale.is_finite() || !offset.re.is_finite() || !offset.im.is_finite() {
                    return fail("affine parameters must be finite".into());
                }
                if role == Role::SelfMap {
                    if *scale <= 0.0 || *scale > 1.0 {
                        return fail(format!("affine scale {scale} outside (0, 1]"));
                    }
                    if scale.abs() + offset.norm() > 1.0 + 1e-12 {
                        return fail(format!(
                            "affine |scale| + |offset| = {} exceeds 1",
                            scale.abs() + offset.norm()
                        ));
                    }
                }
                Ok(())
            }
            SymbolSpec::Lens { theta } => {
                if !(*theta > 0.0 && *theta <= 1.0) {
                    return fail(format!("lens theta {theta} outside (0, 1]"));
                }
                Ok(())
            }
            SymbolSpec::BlaschkeFinite { zeros } => {
                for zero in zeros {
                    if zero.norm() >= 1.0 {
                        return fail(format!("Blaschke zero {zero} not in the open disk"));
                    }
                }
                Ok(())
            }
            SymbolSpec::BlaschkeInterp { sigma, eps1, count } => {
                if !(*sigma > 0.0 && *sigma < 1.0) {
                    return fail(format!("interpolation ratio sigma {sigma} outside (0, 1)"));
                }
                if !(*eps1 > 0.0 && *eps1 < 1.0) {
                    return fail(format!("eps1 {eps1} outside (0, 1)"));
                }
                if *count == 0 {
                    return fail("interpolating product needs at least one zero".into());
                }
                Ok(())
            }
            SymbolSpec::OuterWeight { theta } => {
                if !(*theta > 0.0 && *theta <= 1.0) {
                    return fail(format!("outer weight theta {theta} outside (0, 1]"));
                }
                Ok(())
            }
            SymbolSpec::Power { q } => {
                // `q = 0` is the constant-one map: fine as a weight (and as
                // the building block of constants), not a disk self-map.
                if role == Role::SelfMap && *q == 0 {
                    // Allowed: maps the disk to the closed-disk point 1.
                    // Needed to express constant second components.
                }
                Ok(())
            }
            SymbolSpec::Compose { outer, inner } => {
                inner.validate(Role::SelfMap)?;
                outer.validate(role)
            }
            SymbolSpec::PointwiseProduct { left, right } => {
                left.validate(role)?;
                right.validate(role)
            }
            SymbolSpec::ScalarMultiple { scalar, inner } => {
                if !scalar.re.is_finite() || !scalar.im.is_finite() {
                    return fail("scalar must be finite".into());
                }
                if role == Role::SelfMap && scalar.norm() > 1.0 + 1e-12 {
                    return fail(format!("scalar modulus {} exceeds 1", scalar.norm()));
                }
                inner.validate(role)
            }
        }
    }

    /// Evaluate the map at `z` with `|z| <= 1` (up to [`DISK_TOLERANCE`]).
    ///
    /// Boundary points of the lens and cusp maps evaluate to their radial
    /// limits. Principal branches throughout.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + DISK_TOLERANCE {
            return Err(Error::OutsideDisk { z });
        }
        self.eval_unchecked(z)
    }

    fn eval_unchecked(&self, z: Complex64) -> Result<Complex64> {
        match self {
            SymbolSpec::Identity => Ok(z),
            SymbolSpec::Affine { scale, offset } => Ok(scale * z + offset),
            SymbolSpec::Lens { theta } => lens_eval(*theta, z),
            SymbolSpec::Cusp => cusp_eval(z),
            SymbolSpec::BlaschkeFinite { zeros } => {
                let mut out = Complex64::ONE;
                for zero in zeros {
                    out *= blaschke_factor(*zero, z);
                }
                Ok(out)
            }
            SymbolSpec::BlaschkeInterp { sigma, eps1, count } => {
                let mut out = Complex64::ONE;
                for zero in interp_zeros(*sigma, *eps1, *count) {
                    out *= blaschke_factor(zero, z);
                }
                Ok(out)
            }
            SymbolSpec::OuterWeight { theta } => {
                if (z - Complex64::ONE).norm() < 1e-15 {
                    // Radial limit: the weight vanishes at the contact point.
                    return Ok(Complex64::ZERO);
                }
                let cayley = (Complex64::ONE + z) / (Complex64::ONE - z);
                let power = principal_pow(cayley, *theta)?;
                Ok((-power).exp())
            }
            SymbolSpec::Power { q } => Ok(z.powu(*q)),
            SymbolSpec::HalfShift => Ok((Complex64::ONE + z) / 2.0),
            SymbolSpec::Compose { outer, inner } => {
                let w = inner.eval_unchecked(z)?;
                outer.eval_unchecked(clamp_to_disk(w))
            }
            SymbolSpec::PointwiseProduct { left, right } => {
                Ok(left.eval_unchecked(z)? * right.eval_unchecked(z)?)
            }
            SymbolSpec::ScalarMultiple { scalar, inner } => Ok(scalar * inner.eval_unchecked(z)?),
        }
    }

    /// Truncation tail recorded for interpolating Blaschke products, zero for
    /// every exactly-represented node.
    pub fn truncation_tail(&self) -> f64 {
        match self {
            SymbolSpec::BlaschkeInterp { sigma, eps1, count } => {
                interp_truncation_tail(*sigma, *eps1, *count)
            }
            SymbolSpec::Compose { outer, inner } => {
                outer.truncation_tail() + inner.truncation_tail()
            }
            SymbolSpec::PointwiseProduct { left, right } => {
                left.truncation_tail() + right.truncation_tail()
            }
            SymbolSpec::ScalarMultiple { inner, .. } => inner.truncation_tail(),
            _ => 0.0,
        }
    }
}

/// Self-maps may overshoot the closed disk by rounding; pull the value back
/// onto the boundary so downstream principal branches stay well-posed.
fn clamp_to_disk(w: Complex64) -> Complex64 {
    let n = w.norm();
    if n > 1.0 {
        w / n
    } else {
        w
    }
}

/// `kappa = L / sqrt(L^2 + 1) < 1`: pseudo-hyperbolic separation bound for
/// points with `|a - b| <= L * min(1 - |a|, 1 - |b|)`.
pub fn kappa_bound(l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kappa bound needs L > 0, got {l}"
        )));
    }
    Ok(l / l.hypot(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lens_at_origin_is_zero() {
        let lens = SymbolSpec::lens(0.7);
        assert!(lens.eval(Complex64::ZERO).unwrap().norm() < 1e-15);
    }

    #[test]
    fn lens_theta_one_is_identity() {
        let lens = SymbolSpec::lens(1.0);
        for &z in &[c(0.3, 0.4), c(-0.9, 0.0), c(0.0, 0.99), c(0.7, -0.2)] {
            assert!((lens.eval(z).unwrap() - z).norm() < 1e-14);
        }
    }

    #[test]
    fn lens_boundary_limits() {
        let lens = SymbolSpec::lens(0.5);
        assert_eq!(lens.eval(Complex64::ONE).unwrap(), Complex64::ONE);
        assert_eq!(lens.eval(-Complex64::ONE).unwrap(), -Complex64::ONE);
    }

    #[test]
    fn cusp_vanishes_at_origin() {
        assert!(SymbolSpec::Cusp.eval(Complex64::ZERO).unwrap().norm() < 1e-14);
    }

    #[test]
    fn cusp_chain_head_value() {
        // chi_0(0) = sqrt(2) - 1, so the full chain normalizes through a.
        let i = Complex64::I;
        let t = (Complex64::ZERO - i) / (i * Complex64::ZERO - Complex64::ONE);
        let s = principal_pow(t, 0.5).unwrap();
        let chi0 = (s - i) / (-i * s + Complex64::ONE);
        assert!((chi0 - c(std::f64::consts::SQRT_2 - 1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cusp_constant_value() {
        // Direct high-precision evaluation; the constant lies in (1, 2).
        let a = cusp_constant();
        assert!((a - 1.5610998523391801).abs() < 1e-12);
        assert!(a > 1.0 && a < 2.0);
    }

    #[test]
    fn cusp_boundary_point_is_one() {
        assert_eq!(
            SymbolSpec::Cusp.eval(Complex64::ONE).unwrap(),
            Complex64::ONE
        );
    }

    #[test]
    fn cusp_is_a_self_map_on_a_grid() {
        for z in disk_grid(200) {
            let w = SymbolSpec::Cusp.eval(z).unwrap();
            assert!(w.norm() <= 1.0 + 1e-12, "cusp({z}) = {w} escapes the disk");
        }
    }

    #[test]
    fn cusp_boundary_eval_is_finite_and_contractive() {
        for k in 1..64 {
            let t = std::f64::consts::PI * k as f64 / 64.0;
            let z = Complex64::from_polar(1.0, t);
            let w = SymbolSpec::Cusp.eval(z).unwrap();
            assert!(w.norm() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn outside_disk_rejected() {
        let got = SymbolSpec::Identity.eval(c(1.1, 0.0));
        assert!(matches!(got, Err(Error::OutsideDisk { .. })));
    }

    #[test]
    fn blaschke_single_zero_at_origin_value() {
        let b = SymbolSpec::BlaschkeFinite {
            zeros: vec![c(0.5, 0.0)],
        };
        assert!((b.eval(Complex64::ZERO).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn interp_zeros_are_strongly_interpolating() {
        let zeros = interp_zeros(0.5, 0.5, 10);
        for j in 0..zeros.len() - 1 {
            let eps_j = 1.0 - zeros[j].norm();
            let eps_next = 1.0 - zeros[j + 1].norm();
            assert!(eps_next <= 0.5 * eps_j + 1e-15);
        }
    }

    #[test]
    fn outer_weight_is_contractive_inside() {
        let w = SymbolSpec::OuterWeight { theta: 0.5 };
        for z in disk_grid(150) {
            assert!(w.eval(z).unwrap().norm() <= 1.0 + 1e-12);
        }
        assert_eq!(w.eval(Complex64::ONE).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn affine_self_map_invariant_enforced() {
        let bad = SymbolSpec::Affine {
            scale: 0.9,
            offset: c(0.3, 0.0),
        };
        assert!(bad.validate(Role::SelfMap).is_err());
        assert!(bad.validate(Role::Weight).is_ok());
    }

    #[test]
    fn kappa_bound_values() {
        assert!((kappa_bound(4.0).unwrap() - 4.0 / 17.0f64.sqrt()).abs() < 1e-15);
        assert!((kappa_bound(1.0).unwrap() - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!(kappa_bound(1e-9).unwrap() < 1e-8);
        assert!(kappa_bound(0.0).is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let spec = SymbolSpec::compose(SymbolSpec::HalfShift, SymbolSpec::lens(0.5));
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"compose","outer":{"kind":"halfshift"},"inner":{"kind":"lens","theta":0.5}}"#
        );
        let back: SymbolSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);

        let awkward = SymbolSpec::Affine {
            scale: 0.1 + 0.2, // not exactly representable; must still round-trip
            offset: c(1.0 / 3.0, -2.0 / 7.0),
        };
        let json = serde_json::to_string(&awkward).unwrap();
        let back: SymbolSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, awkward);
    }

    #[test]
    fn branch_cut_reported() {
        assert!(matches!(
            principal_pow(c(-0.5, 0.0), 0.5),
            Err(Error::BranchCut { .. })
        ));
        // Just off the cut is fine.
        assert!(principal_pow(c(-0.5, 1e-300), 0.5).is_ok());
    }
}
