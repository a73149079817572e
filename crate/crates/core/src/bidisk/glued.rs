//! Spectrum of a glued symbol `(phi(z1), phi(z1))` through the Bergman
//! factorization.
//!
//! `C_Phi` factors through the coefficient-summing contraction
//! `H^2(bidisk) -> B^2` followed by `C_phi : B^2 -> H^2` and the isometric
//! embedding back into the bidisk space. The summing map carries the unit
//! ball of `H^2(bidisk)` onto the unit ball of `B^2` (spread mass equally
//! along anti-diagonals), so the approximation numbers of `C_Phi` equal the
//! singular values of `C_phi : B^2 -> H^2` exactly; those are computed from
//! the Bergman-domain matrix truncation.

use crate::error::{Error, Result};
use crate::hardy1d::{
    build_matrix, hs_norm_bergman, singular_values, BasisKind, BuildOptions, QuadOptions,
    SingularSpectrum,
};
use crate::symbols::SymbolSpec;

#[derive(Debug, Clone, Default)]
pub struct GluedOptions {
    pub build: BuildOptions,
    pub quad: QuadOptions,
}

/// Singular values of `C_phi : B^2 -> H^2` at truncation `n` (equivalently,
/// the approximation numbers of the glued symbol's composition operator).
///
/// The column norms of the Bergman-domain matrix must be square-summable;
/// this is certified up front through the boundary integral
/// `sum_n (n+1) ||phi^n||^2 = int (1 - |phi|^2)^{-2} dm`. When that
/// quadrature diverges the truncations are drifting toward an unbounded
/// limit and the evidence is reported as an error, not a spectrum.
pub fn glued_spectrum(
    phi: &SymbolSpec,
    n: usize,
    n_keep: usize,
    opts: &GluedOptions,
) -> Result<SingularSpectrum> {
    match hs_norm_bergman(phi, &opts.quad) {
        Ok(_) => {}
        Err(Error::QuadratureDivergent { last, nodes }) => {
            return Err(Error::UnboundedEvidence {
                estimate: last,
                detail: format!(
                    "column-norm sum quadrature failed to stabilize after {nodes} nodes"
                ),
            });
        }
        Err(other) => return Err(other),
    }
    let matrix = build_matrix(None, phi, n, BasisKind::Bergman, &opts.build)?;
    singular_values(&matrix, n_keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilation_bergman_spectrum_is_sorted_scaled_powers() {
        // Bergman-domain matrix of phi = r z is diag(sqrt(n+1) r^n).
        let r = 0.6f64;
        let s = glued_spectrum(&SymbolSpec::dilation(r), 48, 30, &GluedOptions::default()).unwrap();
        let mut want: Vec<f64> = (0..48)
            .map(|n| ((n + 1) as f64).sqrt() * r.powi(n as i32))
            .collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in s.values.iter().zip(&want) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn borderline_lens_flagged_as_unbounded_evidence() {
        // theta = 1/2: the column-norm sum diverges logarithmically.
        let got = glued_spectrum(&SymbolSpec::lens(0.5), 64, 10, &GluedOptions::default());
        assert!(matches!(got, Err(Error::UnboundedEvidence { .. })));
    }

    #[test]
    fn small_theta_passes_the_tail_check() {
        let s = glued_spectrum(&SymbolSpec::lens(0.25), 128, 20, &GluedOptions::default()).unwrap();
        assert!(s.values[0] > 0.0);
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
