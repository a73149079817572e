//! Block-diagonal model for triangularly separated symbols.
//!
//! With `Phi(z1, z2) = (phi(z1), psi(z1) h(z2))` and `h` inner vanishing at
//! the origin, the powers `h^k` are orthonormal and `C_Phi` is unitarily
//! equivalent to the direct sum over `k >= 0` of the weighted composition
//! operators `T_k = M_{psi^k} C_phi` on `H^2`. The spectrum of the direct
//! sum is the non-increasing rearrangement of the block spectra; blocks
//! beyond `K` are controlled by `||T_k|| <= ||psi||_inf^k ||C_phi||`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hardy1d::{
    build_matrix, operator_norm_bound, singular_values, BasisKind, BuildOptions, SingularSpectrum,
};
use crate::symbols::{Role, SymbolSpec};

#[derive(Debug, Clone)]
pub struct TriangularOptions {
    pub build: BuildOptions,
    /// Number of blocks `0..=K`; `None` picks the smallest `K` whose
    /// discarded-block ceiling sits below half the requested floor.
    pub blocks: Option<usize>,
    /// Smallest singular value the merged spectrum must certify.
    pub floor: f64,
    /// Boundary grid size for measuring `||psi||_inf`.
    pub sup_grid: usize,
}

impl Default for TriangularOptions {
    fn default() -> Self {
        TriangularOptions {
            build: BuildOptions::default(),
            blocks: None,
            floor: 1e-10,
            sup_grid: 8192,
        }
    }
}

/// Sup of `|f|` over a uniform midpoint grid on the boundary circle, refined
/// dyadically toward `z = +-1` where the zoo maps make boundary contact.
pub fn boundary_sup(f: &SymbolSpec, grid: usize) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for k in 0..grid {
        let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / grid as f64;
        sup = sup.max(f.eval(Complex64::from_polar(1.0, t))?.norm());
    }
    for j in 1..=45 {
        let dt = std::f64::consts::PI * 2.0f64.powi(-j);
        for base in [0.0, std::f64::consts::PI] {
            for t in [base + dt, base - dt] {
                sup = sup.max(f.eval(Complex64::from_polar(1.0, t))?.norm());
            }
        }
    }
    Ok(sup)
}

/// Merged spectrum of the block model `(+)_k M_{psi^k} C_phi`, `k <= K`.
///
/// Values are certified down to the discarded-block ceiling
/// `||C_phi||-bound * rho^(K+1)`; the merged list is truncated there and the
/// ceiling is recorded as the spectrum's tail budget contribution. Requires
/// `||psi||_inf < 1` measured on a boundary grid.
pub fn triangular_spectrum(
    phi: &SymbolSpec,
    psi: &SymbolSpec,
    n: usize,
    n_keep: usize,
    opts: &TriangularOptions,
) -> Result<SingularSpectrum> {
    phi.validate(Role::SelfMap)?;
    psi.validate(Role::SelfMap)?;
    let rho = boundary_sup(psi, opts.sup_grid)?;
    if rho >= 1.0 - 1e-12 {
        return Err(Error::WeightNotContractive { sup: rho });
    }
    let norm_bound = operator_norm_bound(phi.eval(Complex64::ZERO)?)?;
    let blocks = match opts.blocks {
        Some(k) => k,
        None => {
            if rho == 0.0 {
                0
            } else {
                let k = ((opts.floor / (2.0 * norm_bound)).ln() / rho.ln()).ceil();
                k.max(0.0) as usize
            }
        }
    };
    let ceiling = if rho == 0.0 {
        0.0
    } else {
        norm_bound * rho.powi(blocks as i32 + 1)
    };

    let block_spectra: Vec<SingularSpectrum> = (0..=blocks)
        .into_par_iter()
        .map(|k| {
            let matrix = if k == 0 {
                build_matrix(None, phi, n, BasisKind::Hardy, &opts.build)?
            } else {
                let weight = psi.clone().pow_of(k as u32);
                build_matrix(Some(&weight), phi, n, BasisKind::Hardy, &opts.build)?
            };
            singular_values(&matrix, n)
        })
        .collect::<Result<_>>()?;

    // Non-increasing rearrangement of the union, with block provenance.
    let mut tagged: Vec<(f64, f64, usize)> = Vec::new();
    for (k, spec) in block_spectra.iter().enumerate() {
        for (i, &v) in spec.values.iter().enumerate() {
            tagged.push((v, spec.rel_change[i], k));
        }
    }
    tagged.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite singular values"));

    let certified = tagged.iter().take_while(|(v, _, _)| *v >= ceiling).count();
    if certified < n_keep {
        return Err(Error::FloorUnreachable {
            floor: opts.floor,
            certified,
        });
    }
    tagged.truncate(certified.min(n_keep));

    let values: Vec<f64> = tagged.iter().map(|t| t.0).collect();
    let rel_change: Vec<f64> = tagged.iter().map(|t| t.1).collect();
    let block_ids: Vec<usize> = tagged.iter().map(|t| t.2).collect();
    let certificate = rel_change.iter().copied().fold(0.0, f64::max);
    let tail_budget = block_spectra
        .iter()
        .map(|s| s.tail_budget * s.tail_budget)
        .sum::<f64>()
        .sqrt()
        + ceiling;
    Ok(SingularSpectrum {
        values,
        truncation: n * (blocks + 1),
        rel_change,
        certificate,
        tail_budget,
        blocks: Some(block_ids),
    })
}
