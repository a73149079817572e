//! The experiment registry: one entry per predefined computation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bidisk::{
    chobou_symbol, direct2d_spectrum, glued_spectrum, kernel_norm, tensor_spectrum,
    triangular_spectrum, Direct2dOptions, GluedOptions, Symbol2D, TriangularOptions,
};
use crate::capacity::{capacity_growth_proxy, gamma_from_tau, green_capacity_disk, tau_polydisk};
use crate::error::{Error, Result};
use crate::hardy1d::{
    build_matrix, eigenvalues, hs_norm_bergman, singular_values, svd_values, BasisKind,
    BuildOptions, QuadOptions, SingularSpectrum,
};
use crate::rates::{
    beta_estimate, count_lattice, estim_inf_bound, fit_decay, rearrangement_oracle, BetaThresholds,
    DecayFamily, Level,
};
use crate::symbols::{blaschke_radii, interp_truncation_tail, interp_zeros, pseudo_diameter, SymbolSpec};

use super::{output::Output, Caps, Params};

type RunFn = fn(&Params, &Caps, &mut Output) -> Result<serde_json::Value>;

/// A registry entry: identifier, one-line description, declared parameters
/// with defaults, and the run body.
pub struct ExperimentDef {
    pub id: &'static str,
    pub description: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub(crate) run: RunFn,
}

/// All predefined experiments.
pub fn registry() -> Vec<ExperimentDef> {
    vec![
        ExperimentDef {
            id: "diag-seminal",
            description: "1-D dilation z -> rz: exact spectrum r^(n-1) and its geometric fit",
            params: &[("r", "0.5"), ("n", "64"), ("dump_matrix", "false")],
            run: run_diag_seminal,
        },
        ExperimentDef {
            id: "tensor-lemma",
            description: "Kronecker SVD against the heap-merged product spectrum on random pairs",
            params: &[("pairs", "20"), ("seed", "7")],
            run: run_tensor_lemma,
        },
        ExperimentDef {
            id: "bilens-trichotomy",
            description:
                "glued lens maps: HS convergence, borderline divergence, unboundedness witness",
            params: &[
                ("theta_hs", "0.4"),
                ("theta_border", "0.5"),
                ("theta_unbounded", "0.6"),
                ("columns", "2000"),
            ],
            run: run_bilens_trichotomy,
        },
        ExperimentDef {
            id: "glued-rate",
            description: "glued lens spectrum through the Bergman factorization and its sqrt-n fit",
            params: &[("theta", "0.25"), ("n", "1024"), ("n_keep", "200")],
            run: run_glued_rate,
        },
        ExperimentDef {
            id: "triangular-lens",
            description:
                "lens/Blaschke triangular symbol: block spectrum, cube-root fit, lower envelope",
            params: &[
                ("theta", "0.5"),
                ("c", "0.5"),
                ("sigma", "0.5"),
                ("eps1", "0.5"),
                ("zeros", "40"),
                ("n", "512"),
                ("n_keep", "150"),
                ("floor", "1e-9"),
            ],
            run: run_triangular_lens,
        },
        ExperimentDef {
            id: "triangular-cusp",
            description: "cusp/Blaschke triangular symbol and its sqrt(n/log n) fit",
            params: &[
                ("c", "0.5"),
                ("sigma", "0.5"),
                ("eps1", "0.5"),
                ("zeros", "40"),
                ("n", "512"),
                ("n_keep", "150"),
                ("floor", "1e-9"),
            ],
            run: run_triangular_cusp,
        },
        ExperimentDef {
            id: "chobou",
            description:
                "counterexample symbol: sup-norm one, spectrum bounded below one in beta_2",
            params: &[
                ("theta", "0.5"),
                ("n", "512"),
                ("n_keep", "160"),
                ("floor", "1e-10"),
            ],
            run: run_chobou,
        },
        ExperimentDef {
            id: "blaschke-circles",
            description: "interpolating Blaschke product: circles with certified modulus floors",
            params: &[
                ("sigma", "0.5"),
                ("eps1", "0.5"),
                ("levels", "8"),
                ("zeros", "40"),
                ("samples", "4096"),
            ],
            run: run_blaschke_circles,
        },
        ExperimentDef {
            id: "gunatillake",
            description: "weighted composition spectrum w(a) phi'(a)^n at the fixed point",
            params: &[
                ("w_offset", "0.3"),
                ("r", "0.5"),
                ("n", "48"),
                ("n_keep", "8"),
            ],
            run: run_gunatillake,
        },
        ExperimentDef {
            id: "capacity-table",
            description: "Green/Monge-Ampere capacities and Gamma for a centered polydisk",
            params: &[("radii", "0.36787944117144233,0.36787944117144233")],
            run: run_capacity_table,
        },
        ExperimentDef {
            id: "counting-lemma",
            description: "exact lattice counts against the asymptotic A^m/(prod lambda m!)",
            params: &[("lambdas", "1,2"), ("thresholds", "10,20,40,80")],
            run: run_counting_lemma,
        },
        ExperimentDef {
            id: "beta-vs-gamma",
            description: "diagonal symbol: beta estimate against the capacity parameter Gamma",
            params: &[("r1", "0.5"), ("r2", "0.3"), ("degree", "40")],
            run: run_beta_vs_gamma,
        },
    ]
}

fn spectrum_json(spec: &SingularSpectrum) -> serde_json::Value {
    json!({
        "truncation": spec.truncation,
        "kept": spec.values.len(),
        "stabilized": spec.stabilized_len(),
        "certificate": spec.certificate,
        "tail_budget": spec.tail_budget,
    })
}

fn fit_result_json(fit: &crate::error::Result<crate::rates::DecayFit>) -> serde_json::Value {
    match fit {
        Ok(f) => fit_json(f),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn fit_json(fit: &crate::rates::DecayFit) -> serde_json::Value {
    json!({
        "family": fit.family,
        "beta": fit.beta,
        "amplitude": fit.amplitude,
        "r2": fit.r2,
        "n_range": [fit.n_range.0, fit.n_range.1],
    })
}

fn run_diag_seminal(params: &Params, caps: &Caps, out: &mut Output) -> Result<serde_json::Value> {
    let r = params.f64("r")?;
    let n = params.usize("n")?.min(caps.n_max);
    let phi = SymbolSpec::dilation(r);
    let matrix = build_matrix(None, &phi, n, BasisKind::Hardy, &BuildOptions::default())?;
    let spec = singular_values(&matrix, n)?;
    out.spectrum("a", "a_n", &spec);
    let max_abs_error = spec
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - r.powi(i as i32)).abs())
        .fold(0.0, f64::max);
    let fit = fit_decay(&spec, DecayFamily::Exponential);
    if params.bool("dump_matrix")? {
        let bin = out.extra_path("matrix.bin")?;
        let sidecar = out.extra_path("matrix.json")?;
        crate::hardy1d::dump_matrix(&bin, &sidecar, &matrix, &phi, None)?;
    }
    Ok(json!({
        "r": r,
        "n": n,
        "max_abs_error": max_abs_error,
        "fit": fit_result_json(&fit),
        "spectrum": spectrum_json(&spec),
    }))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn kronecker(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

fn plain_spectrum(values: Vec<f64>) -> SingularSpectrum {
    let n = values.len();
    SingularSpectrum {
        values,
        truncation: n,
        rel_change: vec![0.0; n],
        certificate: 0.0,
        tail_budget: 0.0,
        blocks: None,
    }
}

fn run_tensor_lemma(params: &Params, _caps: &Caps, out: &mut Output) -> Result<serde_json::Value> {
    let pairs = params.usize("pairs")?;
    let seed = params.usize("seed")? as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    let mut min_margin = f64::INFINITY;
    for pair in 0..pairs {
        let a = random_matrix(&mut rng, 4, 4);
        let b = random_matrix(&mut rng, 3, 3);
        let sa = plain_spectrum(svd_values(&a));
        let sb = plain_spectrum(svd_values(&b));
        let merged = tensor_spectrum(&sa, &sb, 12)?;
        let direct = svd_values(&kronecker(&a, &b));
        let dev = merged
            .values
            .iter()
            .zip(&direct)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        max_dev = max_dev.max(dev);
        out.row("kron_max_abs_dev", pair + 1, dev);
        for m in 1..=4usize {
            for n in 1..=3usize {
                let margin = direct[m * n - 1] - sa.values[m - 1] * sb.values[n - 1];
                min_margin = min_margin.min(margin);
            }
        }
    }
    Ok(json!({
        "pairs": pairs,
        "max_abs_deviation": max_dev,
        "min_product_margin": min_margin,
        "product_lower_bound_holds": min_margin >= -1e-12,
    }))
}

fn run_bilens_trichotomy(
    params: &Params,
    caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    let theta_hs = params.f64("theta_hs")?;
    let theta_border = params.f64("theta_border")?;
    let theta_unbounded = params.f64("theta_unbounded")?;
    let columns = params.usize("columns")?;
    let quad = QuadOptions::default();

    let hs = hs_norm_bergman(&SymbolSpec::lens(theta_hs), &quad)?;
    out.row("bergman_hs_norm", 1, hs);

    let border = match hs_norm_bergman(&SymbolSpec::lens(theta_border), &quad) {
        Err(Error::QuadratureDivergent { last, nodes }) => {
            json!({ "theta": theta_border, "divergent": true, "last_estimate": last, "nodes": nodes })
        }
        Ok(value) => json!({ "theta": theta_border, "divergent": false, "value": value }),
        Err(other) => return Err(other),
    };

    // Bergman column norms sqrt(n+1) ||phi^n|| for the over-half parameter.
    let n = (columns + 1).next_power_of_two().min(caps.n_max);
    let matrix = build_matrix(
        None,
        &SymbolSpec::lens(theta_unbounded),
        n,
        BasisKind::Bergman,
        &BuildOptions::default(),
    )?;
    let norms = matrix.column_norms();
    let mut max_col: f64 = 0.0;
    for (i, v) in norms.iter().enumerate().take(columns) {
        if (i + 1).is_power_of_two() || i + 1 == columns {
            out.row("bergman_column_norm", i + 1, *v);
        }
        max_col = max_col.max(*v);
    }

    // Kernel-ratio witness of unboundedness for theta > 1/2.
    let lens = SymbolSpec::lens(theta_unbounded);
    let mut ratios = Vec::new();
    for j in 3..40 {
        let a = Complex64::new(1.0 - 2.0f64.powi(-j), 0.0);
        let la = lens.eval(a)?;
        let ratio = kernel_norm(la, la)? / kernel_norm(a, Complex64::ZERO)?;
        out.row("kernel_ratio", j as usize, ratio);
        ratios.push(ratio);
    }
    // The asymptotic regime starts once a is well inside the contact zone.
    let monotone = ratios[7..].windows(2).all(|w| w[1] > w[0]);

    Ok(json!({
        "hilbert_schmidt": { "theta": theta_hs, "value": hs },
        "borderline": border,
        "unbounded": {
            "theta": theta_unbounded,
            "max_bergman_column_norm": max_col,
            "columns": columns,
            "kernel_ratio_monotone": monotone,
            "kernel_ratio_growth": ratios.last().unwrap() / ratios.first().unwrap(),
        },
    }))
}

fn run_glued_rate(params: &Params, caps: &Caps, out: &mut Output) -> Result<serde_json::Value> {
    let theta = params.f64("theta")?;
    let n = params.usize("n")?.min(caps.n_max);
    let n_keep = params.usize("n_keep")?;
    let spec = glued_spectrum(
        &SymbolSpec::lens(theta),
        n,
        n_keep,
        &GluedOptions::default(),
    )?;
    out.spectrum("glued", "a_n", &spec);
    let sqrt_fit = fit_decay(&spec, DecayFamily::SqrtExponential);
    let exp_fit = fit_decay(&spec, DecayFamily::Exponential);
    let cbrt_fit = fit_decay(&spec, DecayFamily::CubeRootExponential);
    let sqrt_wins = match (&sqrt_fit, &exp_fit, &cbrt_fit) {
        (Ok(s), Ok(e), Ok(c)) => json!(s.r2 > e.r2 && s.r2 > c.r2),
        _ => json!(null),
    };
    Ok(json!({
        "theta": theta,
        "n": n,
        "fits": {
            "sqrt": fit_result_json(&sqrt_fit),
            "exp": fit_result_json(&exp_fit),
            "cbrt": fit_result_json(&cbrt_fit),
        },
        "sqrt_wins": sqrt_wins,
        "spectrum": spectrum_json(&spec),
    }))
}

fn triangular_blaschke_run(
    phi: SymbolSpec,
    family: DecayFamily,
    params: &Params,
    caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    let c = params.f64("c")?;
    let sigma = params.f64("sigma")?;
    let eps1 = params.f64("eps1")?;
    let zeros = params.usize("zeros")?;
    let n = params.usize("n")?.min(caps.n_max);
    let n_keep = params.usize("n_keep")?;
    let floor = params.f64("floor")?;

    let psi = SymbolSpec::ScalarMultiple {
        scalar: Complex64::new(c, 0.0),
        inner: Box::new(SymbolSpec::BlaschkeInterp {
            sigma,
            eps1,
            count: zeros,
        }),
    };
    let weight_truncation_tail = psi.truncation_tail();
    let opts = TriangularOptions {
        floor,
        blocks: None,
        ..TriangularOptions::default()
    };
    let spec = triangular_spectrum(&phi, &psi, n, n_keep, &opts)?;
    out.spectrum("triangular", "a_n", &spec);
    let fit = fit_decay(&spec, family);

    // Lower-bound envelope from the Blaschke circles and the diameter-based
    // capacity growth proxy.
    let mut levels = Vec::new();
    for lv in blaschke_radii(sigma, eps1, 8)? {
        let diam = pseudo_diameter(&phi, lv.r, 512)?;
        let proxy_cap = capacity_growth_proxy(diam)?;
        if proxy_cap <= 0.0 {
            continue;
        }
        let gamma = (-1.0 / proxy_cap).exp();
        let delta = (c * lv.delta_floor).min(gamma);
        if delta <= 0.0 {
            continue;
        }
        levels.push(Level {
            r: lv.r,
            delta,
            gamma,
            proxy: true,
        });
    }
    for &nn in &[10usize, 20, 40, 80, 160] {
        let (value, proxy) = estim_inf_bound(nn, &levels)?;
        out.row_full("lower_envelope", nn, value, true, proxy);
    }

    Ok(json!({
        "n": n,
        "fit": fit_result_json(&fit),
        "levels": levels.len(),
        "weight_truncation_tail": weight_truncation_tail,
        "spectrum": spectrum_json(&spec),
    }))
}

fn run_triangular_lens(
    params: &Params,
    caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    let theta = params.f64("theta")?;
    triangular_blaschke_run(
        SymbolSpec::lens(theta),
        DecayFamily::CubeRootExponential,
        params,
        caps,
        out,
    )
}

fn run_triangular_cusp(
    params: &Params,
    caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    triangular_blaschke_run(
        SymbolSpec::Cusp,
        DecayFamily::SqrtOverLog,
        params,
        caps,
        out,
    )
}

fn run_chobou(params: &Params, caps: &Caps, out: &mut Output) -> Result<serde_json::Value> {
    let theta = params.f64("theta")?;
    let n = params.usize("n")?.min(caps.n_max);
    let n_keep = params.usize("n_keep")?;
    let floor = params.f64("floor")?;
    let symbol = chobou_symbol(theta)?;
    let Symbol2D::Triangular { phi, psi, .. } = &symbol else {
        unreachable!("counterexample symbol is triangular");
    };
    let sup_phi = crate::bidisk::triangular::boundary_sup(phi, 8192)?;
    let sup_psi = crate::bidisk::triangular::boundary_sup(psi, 8192)?;
    let opts = TriangularOptions {
        floor,
        ..TriangularOptions::default()
    };
    let spec = triangular_spectrum(phi, psi, n, n_keep, &opts)?;
    out.spectrum("chobou", "a_n", &spec);
    let fit = fit_decay(&spec, DecayFamily::SqrtExponential);
    let beta = match beta_estimate(&spec, 2, BetaThresholds::default()) {
        Ok(beta) => {
            for (bn, value) in &beta.ratios {
                out.row("b_n", *bn, *value);
            }
            serde_json::to_value(&beta)?
        }
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "theta": theta,
        "sup_phi": sup_phi,
        "sup_psi": sup_psi,
        "fit": fit_result_json(&fit),
        "beta_estimate": beta,
        "spectrum": spectrum_json(&spec),
    }))
}

fn run_blaschke_circles(
    params: &Params,
    _caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    let sigma = params.f64("sigma")?;
    let eps1 = params.f64("eps1")?;
    let levels = params.usize("levels")?;
    let zeros = params.usize("zeros")?;
    let samples = params.usize("samples")?;
    let product = SymbolSpec::BlaschkeFinite {
        zeros: interp_zeros(sigma, eps1, zeros),
    };
    let truncation_tail = interp_truncation_tail(sigma, eps1, zeros);
    let mut all_above_floor = true;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for lv in blaschke_radii(sigma, eps1, levels)? {
        let mut min = f64::INFINITY;
        for k in 0..samples {
            let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            min = min.min(product.eval(Complex64::from_polar(lv.r, t))?.norm());
        }
        all_above_floor &= min >= lv.delta_floor;
        out.row("r_l", lv.level, lv.r);
        out.row("delta_floor", lv.level, lv.delta_floor);
        out.row("sampled_min", lv.level, min);
        xs.push(lv.level as f64);
        ys.push(lv.rho.ln());
    }
    // Straight-line fit of log rho_l against l.
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = (sxy * sxy) / (sxx * syy);
    Ok(json!({
        "sigma": sigma,
        "levels": levels,
        "zeros": zeros,
        "zero_sequence_truncation_tail": truncation_tail,
        "all_sampled_minima_above_floor": all_above_floor,
        "log_gap_slope": slope,
        "log_sigma": sigma.ln(),
        "slope_relative_error": (slope - sigma.ln()).abs() / sigma.ln().abs(),
        "r2": r2,
    }))
}

fn run_gunatillake(params: &Params, caps: &Caps, out: &mut Output) -> Result<serde_json::Value> {
    let w_offset = params.f64("w_offset")?;
    let r = params.f64("r")?;
    let n = params.usize("n")?.min(caps.n_max);
    let n_keep = params.usize("n_keep")?;
    let weight = SymbolSpec::Affine {
        scale: 1.0,
        offset: Complex64::new(w_offset, 0.0),
    };
    let phi = SymbolSpec::dilation(r);
    let matrix = build_matrix(
        Some(&weight),
        &phi,
        n,
        BasisKind::Hardy,
        &BuildOptions::default(),
    )?;
    let eigs = eigenvalues(&matrix, n_keep)?;
    // Fixed point a = 0: spectrum moduli |w(0)| * |phi'(0)|^k.
    let mut max_dev: f64 = 0.0;
    for (k, e) in eigs.iter().enumerate() {
        let want = w_offset.abs() * r.abs().powi(k as i32);
        out.row("eigen_modulus", k + 1, e.norm());
        max_dev = max_dev.max((e.norm() - want).abs());
    }
    Ok(json!({
        "w_offset": w_offset,
        "r": r,
        "n": n,
        "max_abs_deviation": max_dev,
    }))
}

fn run_capacity_table(
    params: &Params,
    _caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    let radii = params.f64_list("radii")?;
    let value = tau_polydisk(&radii)?;
    for (i, &r) in radii.iter().enumerate() {
        out.row("green_capacity", i + 1, green_capacity_disk(r)?);
    }
    out.row("tau", 1, value.tau);
    out.row("gamma", 1, value.gamma);
    Ok(json!({
        "radii": radii,
        "m": value.m,
        "tau": value.tau,
        "gamma": value.gamma,
        "gamma_check": gamma_from_tau(value.tau, value.m),
    }))
}

fn run_counting_lemma(
    params: &Params,
    _caps: &Caps,
    out: &mut Output,
) -> Result<serde_json::Value> {
    let lambdas = params.f64_list("lambdas")?;
    let thresholds = params.f64_list("thresholds")?;
    let mut ratios = Vec::new();
    for (i, &a) in thresholds.iter().enumerate() {
        let (count, ratio) = count_lattice(&lambdas, a)?;
        out.row("count", i + 1, count as f64);
        out.row("ratio", i + 1, ratio);
        ratios.push(ratio);
    }
    let monotone = ratios
        .windows(2)
        .all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs());
    let last = *ratios.last().unwrap();
    Ok(json!({
        "lambdas": lambdas,
        "thresholds": thresholds,
        "ratios": ratios,
        "monotone_toward_one": monotone,
        "final_in_window": (0.9..=1.1).contains(&last),
    }))
}

fn run_beta_vs_gamma(params: &Params, caps: &Caps, out: &mut Output) -> Result<serde_json::Value> {
    let r1 = params.f64("r1")?;
    let r2 = params.f64("r2")?;
    let degree = params.usize("degree")?.min(caps.d_max);
    let symbol = Symbol2D::Diagonal {
        radii: vec![r1, r2],
    };
    let side = (degree + 1) * (degree + 2) / 2;
    let spec = direct2d_spectrum(&symbol, degree, side, &Direct2dOptions::default())?;
    out.spectrum("diagonal", "a_n", &spec);
    let oracle = rearrangement_oracle(&[(1.0 / r1).ln(), (1.0 / r2).ln()], 50)?;
    let max_dev = spec
        .values
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let gamma = tau_polydisk(&[r1, r2])?.gamma;
    let beta = beta_estimate(&spec, 2, BetaThresholds::default())?;
    for (n, b) in &beta.ratios {
        out.row("b_n", *n, *b);
    }
    let final_b = beta.ratios.last().unwrap().1;
    Ok(json!({
        "r1": r1,
        "r2": r2,
        "gamma": gamma,
        "final_b": final_b,
        "abs_gap": (final_b - gamma).abs(),
        "oracle_max_abs_deviation": max_dev,
        "beta_estimate": beta,
    }))
}
