//! Two-variable symbols on the bidisk and their approximation numbers.
//!
//! Four structural classes are modeled: separated `(phi(z1), psi(z2))`,
//! glued `(phi(z1), phi(z1))`, triangularly separated
//! `(phi(z1), psi(z1) h(z2))`, and diagonal `(r1 z1, ..., rm zm)`. Each gets
//! a structurally efficient spectrum (tensor merge, Bergman-to-Hardy
//! factorization, block-diagonal model, rearrangement) plus the dense
//! degree-truncated oracle in [`direct2d_spectrum`].

mod direct2d;
mod glued;
mod tensor;
pub(crate) mod triangular;

pub use direct2d::{direct2d_spectrum, Direct2dOptions};
pub use glued::{glued_spectrum, GluedOptions};
pub use tensor::tensor_spectrum;
pub use triangular::{boundary_sup, triangular_spectrum, TriangularOptions};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::{Role, SymbolSpec};

/// A self-map of the polydisk in one of four structural classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Symbol2D {
    /// `(z1, z2) -> (phi(z1), psi(z2))`.
    Separated { phi: SymbolSpec, psi: SymbolSpec },
    /// `(z1, z2) -> (phi(z1), phi(z1))`.
    Glued { phi: SymbolSpec },
    /// `(z1, z2) -> (phi(z1), psi(z1) h(z2))` with `h` inner, `h(0) = 0`.
    Triangular {
        phi: SymbolSpec,
        psi: SymbolSpec,
        h: SymbolSpec,
    },
    /// `(z1, ..., zm) -> (r1 z1, ..., rm zm)`.
    Diagonal { radii: Vec<f64> },
}

/// Is `h` one of the inner instances the block model is exact for:
/// `z^q` with `q >= 1`, or a finite Blaschke product vanishing at 0?
fn is_exact_inner(h: &SymbolSpec) -> bool {
    match h {
        SymbolSpec::Identity => true,
        SymbolSpec::Power { q } => *q >= 1,
        SymbolSpec::BlaschkeFinite { zeros } => {
            !zeros.is_empty() && zeros.iter().any(|z| z.norm() == 0.0)
        }
        _ => false,
    }
}

impl Symbol2D {
    pub fn validate(&self) -> Result<()> {
        match self {
            Symbol2D::Separated { phi, psi } => {
                phi.validate(Role::SelfMap)?;
                psi.validate(Role::SelfMap)
            }
            Symbol2D::Glued { phi } => phi.validate(Role::SelfMap),
            Symbol2D::Triangular { phi, psi, h } => {
                phi.validate(Role::SelfMap)?;
                psi.validate(Role::SelfMap)?;
                h.validate(Role::SelfMap)?;
                if !is_exact_inner(h) {
                    return Err(Error::InvalidSymbol(
                        "triangular second factor needs an inner h with h(0) = 0 \
                         (a power z^q, q >= 1, or a finite Blaschke product vanishing at 0)"
                            .into(),
                    ));
                }
                Ok(())
            }
            Symbol2D::Diagonal { radii } => {
                if radii.is_empty() {
                    return Err(Error::InvalidSymbol("diagonal symbol needs radii".into()));
                }
                for &r in radii {
                    if !(r > 0.0 && r < 1.0) {
                        return Err(Error::InvalidSymbol(format!(
                            "diagonal radius {r} outside (0, 1)"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// The counterexample symbol: triangular with `phi = (1 + lens_theta)/2`,
/// `psi = w o phi` for the outer weight `w`, and `h = z`. Its sup-norm is 1
/// (contact at `z1 = 1`) yet the weight `psi` is uniformly contractive.
pub fn chobou_symbol(theta: f64) -> Result<Symbol2D> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "counterexample symbol needs theta in (0, 1), got {theta}"
        )));
    }
    let phi = SymbolSpec::compose(SymbolSpec::HalfShift, SymbolSpec::lens(theta));
    let psi = SymbolSpec::compose(SymbolSpec::OuterWeight { theta }, phi.clone());
    Ok(Symbol2D::Triangular {
        phi,
        psi,
        h: SymbolSpec::Power { q: 1 },
    })
}

/// Norm of the reproducing kernel of `H^2` of the bidisk at `(a, b)`:
/// `((1 - |a|^2)(1 - |b|^2))^(-1/2)`.
pub fn kernel_norm(a: Complex64, b: Complex64) -> Result<f64> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "kernel point ({a}, {b}) not inside the open bidisk"
        )));
    }
    Ok(1.0 / ((1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr())).sqrt())
}
