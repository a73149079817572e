//! Direct dense truncation of `C_Phi` on the bidisk: the ground-truth
//! oracle the structural models are checked against.
//!
//! The matrix acts on the monomial basis `z1^j z2^k` truncated at total
//! degree `j + k <= D` (the triangular truncation respects the grading of
//! `H^2`). For every structural class the image `Phi_1^j Phi_2^k` factors as
//! a product of one-variable series in `z1` and `z2`, so columns are built
//! from one-dimensional truncated series products.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardy1d::{svd_values, SingularSpectrum};
use crate::symbols::{taylor, PowerSeries, SymbolSpec, TaylorOptions};

use super::Symbol2D;

#[derive(Debug, Clone)]
pub struct Direct2dOptions {
    /// Hard cap on the total degree (matrix side grows quadratically).
    pub max_degree: usize,
    /// Sampling radius for the base one-variable expansions.
    pub sampling_radius: Option<f64>,
    pub taylor: TaylorOptions,
}

impl Default for Direct2dOptions {
    fn default() -> Self {
        Direct2dOptions {
            max_degree: 40,
            sampling_radius: None,
            taylor: TaylorOptions::default(),
        }
    }
}

/// Truncated product of two coefficient vectors (degrees beyond `d` cannot
/// feed back into lower degrees, so this is exact on the kept range).
fn series_mul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; d + 1];
    for (i, &ai) in a.iter().enumerate().take(d + 1) {
        if ai == Complex64::ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(d + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn unit_series(d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; d + 1];
    out[0] = Complex64::ONE;
    out
}

/// Table of truncated powers `f^0 ..= f^max_pow`.
fn power_table(f: &PowerSeries, max_pow: usize, d: usize) -> Vec<Vec<Complex64>> {
    let mut table = Vec::with_capacity(max_pow + 1);
    table.push(unit_series(d));
    for _ in 1..=max_pow {
        let last = table.last().unwrap();
        table.push(series_mul(last, &f.coefficients, d));
    }
    table
}

fn base_series(spec: &SymbolSpec, d: usize, opts: &Direct2dOptions) -> Result<PowerSeries> {
    let rho = opts
        .sampling_radius
        .unwrap_or_else(|| crate::symbols::series::default_sampling_radius(d.max(1)));
    taylor(spec, d, rho, &opts.taylor)
}

/// Per-column factor pair: coefficients in `z1` and in `z2`.
type ColumnFactors = (Vec<Complex64>, Vec<Complex64>);

fn column_factors(
    sym: &Symbol2D,
    pairs: &[(usize, usize)],
    d: usize,
    opts: &Direct2dOptions,
) -> Result<(Vec<ColumnFactors>, f64)> {
    match sym {
        Symbol2D::Separated { phi, psi } => {
            let sp = base_series(phi, d, opts)?;
            let sq = base_series(psi, d, opts)?;
            let tp = power_table(&sp, d, d);
            let tq = power_table(&sq, d, d);
            let cols = pairs
                .iter()
                .map(|&(j, k)| (tp[j].clone(), tq[k].clone()))
                .collect();
            let budget = first_order_budget(pairs, sp.tail_estimate, sq.tail_estimate, 0.0);
            Ok((cols, budget))
        }
        Symbol2D::Glued { phi } => {
            let sp = base_series(phi, d, opts)?;
            let tp = power_table(&sp, 2 * d, d);
            let cols = pairs
                .iter()
                .map(|&(j, k)| (tp[j + k].clone(), unit_series(d)))
                .collect();
            let budget = first_order_budget(pairs, sp.tail_estimate, sp.tail_estimate, 0.0);
            Ok((cols, budget))
        }
        Symbol2D::Triangular { phi, psi, h } => {
            let sp = base_series(phi, d, opts)?;
            let sq = base_series(psi, d, opts)?;
            let sh = base_series(h, d, opts)?;
            let tp = power_table(&sp, d, d);
            let tq = power_table(&sq, d, d);
            let th = power_table(&sh, d, d);
            let cols = pairs
                .iter()
                .map(|&(j, k)| (series_mul(&tp[j], &tq[k], d), th[k].clone()))
                .collect();
            let budget =
                first_order_budget(pairs, sp.tail_estimate, sq.tail_estimate, sh.tail_estimate);
            Ok((cols, budget))
        }
        Symbol2D::Diagonal { radii } => {
            if radii.len() != 2 {
                return Err(Error::InvalidParameter(format!(
                    "direct 2-D truncation needs a 2-variable diagonal symbol, got {} radii",
                    radii.len()
                )));
            }
            let sp = base_series(&SymbolSpec::dilation(radii[0]), d, opts)?;
            let sq = base_series(&SymbolSpec::dilation(radii[1]), d, opts)?;
            let tp = power_table(&sp, d, d);
            let tq = power_table(&sq, d, d);
            let cols = pairs
                .iter()
                .map(|&(j, k)| (tp[j].clone(), tq[k].clone()))
                .collect();
            let budget = first_order_budget(pairs, sp.tail_estimate, sq.tail_estimate, 0.0);
            Ok((cols, budget))
        }
    }
}

/// First-order tail accounting: a column built from `j + 2k` factor series,
/// each carrying tail `eps`, inherits roughly that multiple of it.
fn first_order_budget(pairs: &[(usize, usize)], e1: f64, e2: f64, e3: f64) -> f64 {
    pairs
        .iter()
        .map(|&(j, k)| {
            let t = j as f64 * e1 + k as f64 * e2 + k as f64 * e3;
            t * t
        })
        .sum::<f64>()
        .sqrt()
}

/// Singular values of the degree-`d` triangular truncation of `C_Phi`.
///
/// Basis pairs are ordered by total degree then by `z1`-degree, so the
/// half-degree truncation used for the stabilization certificate is a
/// leading principal submatrix.
pub fn direct2d_spectrum(
    sym: &Symbol2D,
    degree: usize,
    n_keep: usize,
    opts: &Direct2dOptions,
) -> Result<SingularSpectrum> {
    sym.validate()?;
    if degree > opts.max_degree {
        return Err(Error::TruncationTooLarge {
            requested: degree,
            max: opts.max_degree,
        });
    }
    let pairs = graded_pairs(degree);
    let side = pairs.len();
    let (factors, tail_budget) = column_factors(sym, &pairs, degree, opts)?;

    let mut matrix = DMatrix::zeros(side, side);
    for (col, (u, v)) in factors.iter().enumerate() {
        for (row, &(m1, m2)) in pairs.iter().enumerate() {
            matrix[(row, col)] = u[m1] * v[m2];
        }
    }

    let full = svd_values(&matrix);
    let half_side = graded_pairs(degree / 2).len();
    let half = svd_values(&matrix.view((0, 0), (half_side, half_side)).into_owned());

    let values: Vec<f64> = full.into_iter().take(n_keep.min(side)).collect();
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
        truncation: side,
        rel_change,
        certificate,
        tail_budget,
        blocks: None,
    })
}

/// Monomial pairs `(j, k)` with `j + k <= d`, graded by total degree.
pub fn graded_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for s in 0..=d {
        for j in (0..=s).rev() {
            pairs.push((j, s - j));
        }
    }
    pairs
}
