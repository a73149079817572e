//! Truncated matrices of weighted composition operators on `H^2` (and from
//! the Bergman space into `H^2`), their singular values and eigenvalues, and
//! the one-variable bound formulas.
//!
//! The matrix of `M_w C_phi` on the monomial basis has column `n` equal to
//! the Taylor coefficients of `w * phi^n`. Columns are extracted by the same
//! circle-sampling rule as [`crate::symbols::taylor`], sharing one set of
//! boundary samples across all columns; a Bergman domain basis multiplies
//! column `n` by `sqrt(n+1)`.

pub mod quad;

pub use quad::{boundary_arc_integral, boundary_integral, hs_norm, hs_norm_bergman, QuadOptions};

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::symbols::{self, Role, SymbolSpec, TaylorOptions};

/// Relative change under truncation doubling below which a singular value
/// counts as stabilized.
///
/// Truncations of boundary-contact symbols converge polynomially slowly (a
/// deep singular value needs truncation degrees far beyond any dense-matrix
/// budget), so the gate is set at the level the downstream rate fits and
/// cross-model comparisons actually consume.
pub const STABILIZATION_RTOL: f64 = 1e-2;

/// Domain basis of an operator matrix. The codomain basis is always the
/// Hardy monomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BasisKind {
    /// Monomials `z^n`.
    Hardy,
    /// `sqrt(n+1) z^n`, orthonormal in the Bergman space.
    Bergman,
}

/// Dense truncation of a weighted composition operator.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub data: DMatrix<Complex64>,
    pub domain: BasisKind,
    /// Truncation size `N` (matrix is `N x N`).
    pub truncation: usize,
    /// Per-column tail bounds from the series engine (Bergman scaling
    /// included when applicable).
    pub column_tails: Vec<f64>,
}

impl OperatorMatrix {
    /// Euclidean norms of the columns.
    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.truncation)
            .map(|j| self.data.column(j).norm())
            .collect()
    }

    /// Combined matrix perturbation budget: column tails combined in
    /// quadrature (a Frobenius-style bound on the discarded block).
    pub fn tail_budget(&self) -> f64 {
        self.column_tails.iter().map(|t| t * t).sum::<f64>().sqrt()
    }
}

/// Non-increasing singular values with truncation metadata.
#[derive(Debug, Clone)]
pub struct SingularSpectrum {
    /// `a_1 >= a_2 >= ...` (1-indexed in the math, 0-indexed here).
    pub values: Vec<f64>,
    /// Truncation the values were computed at.
    pub truncation: usize,
    /// Relative change of each value when the truncation was last doubled
    /// (1.0 where no comparison value exists).
    pub rel_change: Vec<f64>,
    /// `max` of `rel_change` over the kept values.
    pub certificate: f64,
    /// Matrix perturbation budget inherited from the builder.
    pub tail_budget: f64,
    /// Originating block per value, for block-diagonal models.
    pub blocks: Option<Vec<usize>>,
}

impl SingularSpectrum {
    pub fn stabilized(&self, index: usize) -> bool {
        self.rel_change
            .get(index)
            .map(|r| *r < STABILIZATION_RTOL)
            .unwrap_or(false)
    }

    /// Number of leading values that are all stabilized.
    pub fn stabilized_len(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .take_while(|(i, _)| self.stabilized(*i))
            .count()
    }

    /// CSV rows `n,a_n,stabilized,tail_budget[,block]`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.blocks.is_some() {
            out.push_str("n,a_n,stabilized,tail_budget,block\n");
        } else {
            out.push_str("n,a_n,stabilized,tail_budget\n");
        }
        for (i, v) in self.values.iter().enumerate() {
            match &self.blocks {
                Some(blocks) => out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i + 1,
                    v,
                    self.stabilized(i),
                    self.tail_budget,
                    blocks[i]
                )),
                None => out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    v,
                    self.stabilized(i),
                    self.tail_budget
                )),
            }
        }
        out
    }
}

/// Knobs for the matrix builder.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Sampling radius override; defaults to `max(0.5, 1 - 4/D)` for degree
    /// `D = N - 1`.
    pub sampling_radius: Option<f64>,
    /// Aliasing tolerance / sample cap forwarded to the series engine.
    pub taylor: TaylorOptions,
    /// Largest accepted truncation.
    pub max_truncation: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            sampling_radius: None,
            taylor: TaylorOptions::default(),
            max_truncation: 4096,
        }
    }
}

/// Build the `N x N` truncation of `M_w C_phi` (weight `None` means `w = 1`).
///
/// Column `n` holds the degree-`(N-1)` Taylor coefficients of `w * phi^n`,
/// all extracted from one set of circle samples; the per-column tail bound
/// `max_k |w phi^n|(sample_k) * rho^N / (1 - rho)` is recorded.
pub fn build_matrix(
    weight: Option<&SymbolSpec>,
    phi: &SymbolSpec,
    n: usize,
    domain: BasisKind,
    opts: &BuildOptions,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("empty truncation".into()));
    }
    if n > opts.max_truncation {
        return Err(Error::TruncationTooLarge {
            requested: n,
            max: opts.max_truncation,
        });
    }
    phi.validate(Role::SelfMap)?;
    if let Some(w) = weight {
        w.validate(Role::Weight)?;
    }

    let degree = n - 1;
    let rho = opts
        .sampling_radius
        .unwrap_or_else(|| symbols::series::default_sampling_radius(degree));
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling radius {rho} outside (0, 1)"
        )));
    }
    let m = symbols::series::sample_count(degree, rho, &opts.taylor)?;
    let phi_samples = symbols::series::sample_circle(phi, rho, m)?;
    let weight_samples = match weight {
        Some(w) => Some(symbols::series::sample_circle(w, rho, m)?),
        None => None,
    };

    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(m);
    let columns: Vec<(Vec<Complex64>, f64)> = (0..n)
        .into_par_iter()
        .map(|col| {
            let mut values: Vec<Complex64> = (0..m)
                .map(|k| {
                    let p = phi_samples.values[k].powu(col as u32);
                    match &weight_samples {
                        Some(w) => w.values[k] * p,
                        None => p,
                    }
                })
                .collect();
            let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            fft.process(&mut values);
            let inv_m = 1.0 / m as f64;
            let mut coeffs = Vec::with_capacity(n);
            let mut scale = inv_m;
            for v in values.iter().take(n) {
                coeffs.push(v * scale);
                scale /= rho;
            }
            let mut tail = sup * rho.powi(n as i32) / (1.0 - rho);
            if domain == BasisKind::Bergman {
                let factor = ((col + 1) as f64).sqrt();
                for c in &mut coeffs {
                    *c *= factor;
                }
                tail *= factor;
            }
            (coeffs, tail)
        })
        .collect();

    let mut data = DMatrix::zeros(n, n);
    let mut column_tails = Vec::with_capacity(n);
    for (j, (coeffs, tail)) in columns.into_iter().enumerate() {
        for (i, c) in coeffs.into_iter().enumerate() {
            data[(i, j)] = c;
        }
        column_tails.push(tail);
    }
    Ok(OperatorMatrix {
        data,
        domain,
        truncation: n,
        column_tails,
    })
}

/// Sorted singular values of a dense complex matrix.
pub fn svd_values(matrix: &DMatrix<Complex64>) -> Vec<f64> {
    try_svd_values(matrix).expect("dense SVD of a finite matrix converges")
}

/// Sorted singular values, with non-convergence flagged instead of panicking.
pub fn try_svd_values(matrix: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let svd = matrix
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(Error::Decomposition)?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    Ok(values)
}

/// First `n_keep` singular values of the truncation, with a stabilization
/// certificate against the half-size leading principal submatrix (the
/// `N/2` truncation of the same operator).
pub fn singular_values(matrix: &OperatorMatrix, n_keep: usize) -> Result<SingularSpectrum> {
    let n = matrix.truncation;
    if n_keep > n {
        return Err(Error::InvalidParameter(format!(
            "cannot keep {n_keep} values from an {n}-truncation"
        )));
    }
    let full = try_svd_values(&matrix.data)?;
    let half_n = n / 2;
    let half = if half_n > 0 {
        try_svd_values(&matrix.data.view((0, 0), (half_n, half_n)).into_owned())?
    } else {
        Vec::new()
    };
    let values: Vec<f64> = full.iter().take(n_keep).copied().collect();
    let rel_change: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| match half.get(i) {
            Some(&h) => {
                if v == 0.0 && h == 0.0 {
                    0.0
                } else {
                    (v - h).abs() / v.abs().max(f64::MIN_POSITIVE)
                }
            }
            None => 1.0,
        })
        .collect();
    let certificate = rel_change.iter().copied().fold(0.0, f64::max);
    Ok(SingularSpectrum {
        values,
        truncation: n,
        rel_change,
        certificate,
        tail_budget: matrix.tail_budget(),
        blocks: None,
    })
}

/// Eigenvalues of the truncation sorted by non-increasing modulus.
pub fn eigenvalues(matrix: &OperatorMatrix, n_keep: usize) -> Result<Vec<Complex64>> {
    let schur = matrix
        .data
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or(Error::Decomposition)?;
    let mut eigs: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::Decomposition)?
        .iter()
        .copied()
        .collect();
    eigs.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).expect("finite moduli"));
    eigs.truncate(n_keep);
    Ok(eigs)
}

/// Norm bound `||C_phi|| <= sqrt((1 + |phi(0)|) / (1 - |phi(0)|))`.
pub fn operator_norm_bound(phi0: Complex64) -> Result<f64> {
    let a = phi0.norm();
    if a >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "phi(0) modulus {a} not inside the disk"
        )));
    }
    Ok(((1.0 + a) / (1.0 - a)).sqrt())
}

/// Upper-bound skeleton `max(exp(-a n), exp(-R 2^(m theta)))` with
/// `a = log(sqrt(16 C^2 + 1) / (4C))`, for weights decaying like
/// `exp(-R / |1-z|^theta)` under a non-tangential symbol.
pub fn bound_special(n: usize, m: usize, theta: f64, r: f64, c: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) || !(r > 0.0) || !(c >= 1.0) {
        return Err(Error::InvalidParameter(
            "bound needs theta in (0,1], R > 0, C >= 1".into(),
        ));
    }
    let a = ((16.0 * c * c + 1.0).sqrt() / (4.0 * c)).ln();
    let first = (-a * n as f64).exp();
    let second = (-r * 2.0f64.powf(m as f64 * theta)).exp();
    Ok(first.max(second))
}

/// Lower-bound skeleton `sqrt(1-r) * delta * Gamma^n` (up to an absolute
/// constant; useful only for rate comparisons).
pub fn widom_lower_form(r: f64, delta: f64, gamma: f64, n: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&r) || !(delta > 0.0 && delta <= 1.0) || !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(
            "lower form needs r in [0,1), delta in (0,1], Gamma in (0,1)".into(),
        ));
    }
    Ok((1.0 - r).sqrt() * delta * gamma.powi(n as i32))
}

/// Dump a matrix as little-endian `f64` re/im pairs in column-major order,
/// with a JSON sidecar describing the truncation, basis and symbols.
pub fn dump_matrix(
    bin_path: &std::path::Path,
    sidecar_path: &std::path::Path,
    matrix: &OperatorMatrix,
    phi: &SymbolSpec,
    weight: Option<&SymbolSpec>,
) -> Result<()> {
    let mut bytes = Vec::with_capacity(matrix.truncation * matrix.truncation * 16);
    for j in 0..matrix.truncation {
        for i in 0..matrix.truncation {
            let v = matrix.data[(i, j)];
            bytes.extend_from_slice(&v.re.to_le_bytes());
            bytes.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    std::fs::write(bin_path, bytes)?;
    let sidecar = serde_json::json!({
        "n": matrix.truncation,
        "basis": matrix.domain,
        "phi": phi,
        "weight": weight,
        "layout": "column-major, little-endian f64 re/im pairs",
    });
    std::fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}
