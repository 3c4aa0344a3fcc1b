//! The four subcommands: `waveform`, `pdf`, `capacity`, `validate`.
//!
//! Each command resolves its parameters with the same precedence — command
//! line flag, then config file, then built-in default — builds the
//! corresponding jrc-core objects, and writes CSV/JSON files through
//! [`crate::output::OutputCtx`]. Commands return `Err` when an output cannot
//! be produced **or** when an embedded validation fails after its files were
//! written, so the process exit code is 0 exactly when everything was
//! written and every requested check passed.

use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use serde_json::{json, Map, Value};

use jrc_core::capacity::{
    capacity_fast_fading, capacity_sweep, optimal_outage_probability, outage_capacity,
    OutageSpec, SnrConfig,
};
use jrc_core::distributions::{
    product_pdf_curve, product_snr_pdf_curve, snr_pdf_truncated_curve, truncated_rayleigh_curve,
    FadingModel, PdfCurve, PhasePdf, TruncationWindow,
};
use jrc_core::montecarlo::{child_seed, goodness_of_fit, sample, SampleModel};
use jrc_core::validation::{run_selected, table2_report, Table2Cell, Table2Target};
use jrc_core::waveform::{
    generate_comm_fixed, generate_null_fixed, ArrayConfig, ConstraintMode, ConstraintSpec,
    PhaseCodingMatrix, DEFAULT_MAX_ITERATIONS,
};

use crate::config::FileConfig;
use crate::output::{fmt_f, read_file, OutputCtx};
use crate::parse::{parse_angle, parse_criteria, parse_methods, parse_probability_grid, parse_snr_grid};
use crate::{CapacityArgs, PdfArgs, ValidateArgs, WaveformArgs};

/// Paper-default communication direction (Fig. 4 caption), used when
/// neither angle is specified anywhere.
const DEFAULT_THETA_C_DEG: f64 = -22.0;
/// Paper-default null direction, paired with [`DEFAULT_THETA_C_DEG`].
const DEFAULT_THETA_N_DEG: f64 = 38.0;

// ---------------------------------------------------------------------------
// Parameter resolution helpers
// ---------------------------------------------------------------------------

fn pick<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn pick_str(flag: &Option<String>, file: &Option<String>, default: &str) -> String {
    flag.clone()
        .or_else(|| file.clone())
        .unwrap_or_else(|| default.to_string())
}

/// Resolve the (θ_c, θ_n) pair in radians. The angles are a pair: with both
/// omitted the paper defaults apply, but giving exactly one is a usage error
/// naming the missing flag (a half-specified geometry is always a mistake).
fn angle_pair(args_c: &Option<String>, args_n: &Option<String>, file: &FileConfig) -> anyhow::Result<(f64, f64)> {
    let from_flag = |s: &Option<String>, name: &str| -> anyhow::Result<Option<f64>> {
        match s {
            Some(text) => parse_angle(text)
                .map(Some)
                .map_err(|e| anyhow!("{name}: {e}")),
            None => Ok(None),
        }
    };
    let from_file = |v: &Option<crate::config::AngleValue>, name: &str| -> anyhow::Result<Option<f64>> {
        match v {
            Some(angle) => angle
                .radians()
                .map(Some)
                .map_err(|e| anyhow!("config {name}: {e}")),
            None => Ok(None),
        }
    };
    let theta_c = match from_flag(args_c, "--theta-c")? {
        Some(v) => Some(v),
        None => from_file(&file.theta_c, "theta_c")?,
    };
    let theta_n = match from_flag(args_n, "--theta-n")? {
        Some(v) => Some(v),
        None => from_file(&file.theta_n, "theta_n")?,
    };
    match (theta_c, theta_n) {
        (Some(c), Some(n)) => Ok((c, n)),
        (None, None) => Ok((DEFAULT_THETA_C_DEG.to_radians(), DEFAULT_THETA_N_DEG.to_radians())),
        (None, Some(_)) => bail!("missing --theta-c: the angles form a pair; set both --theta-c and --theta-n (or neither, for the built-in −22°/38° geometry)"),
        (Some(_), None) => bail!("missing --theta-n: the angles form a pair; set both --theta-c and --theta-n (or neither, for the built-in −22°/38° geometry)"),
    }
}

/// Fading std deviation σ_H from the `--sigma-h` / `--sigma-h2` pair
/// (the latter is the variance σ_H², the convention of the capacity
/// figures). Giving both is ambiguous and rejected.
fn resolve_sigma_h(
    flag_sh: Option<f64>,
    flag_sh2: Option<f64>,
    file: &FileConfig,
) -> anyhow::Result<f64> {
    let (sh, sh2) = if flag_sh.is_some() || flag_sh2.is_some() {
        (flag_sh, flag_sh2)
    } else {
        (file.sigma_h, file.sigma_h2)
    };
    let sigma_h = match (sh, sh2) {
        (Some(_), Some(_)) => bail!("--sigma-h and --sigma-h2 are two spellings of the same parameter; give only one"),
        (Some(s), None) => s,
        (None, Some(s2)) => {
            if !(s2 > 0.0) || !s2.is_finite() {
                bail!("sigma_h2 must be positive and finite, got {s2}");
            }
            s2.sqrt()
        }
        (None, None) => 1.0,
    };
    if !(sigma_h > 0.0) || !sigma_h.is_finite() {
        bail!("sigma_h must be positive and finite, got {sigma_h}");
    }
    Ok(sigma_h)
}

fn fading_model(name: &str, sigma_h: f64, k: Option<f64>) -> anyhow::Result<FadingModel> {
    match name.to_ascii_lowercase().as_str() {
        "rayleigh" => Ok(FadingModel::Rayleigh { sigma_h }),
        "rician" => {
            let k_factor = k.ok_or_else(|| anyhow!("rician fading needs --k (the K factor)"))?;
            Ok(FadingModel::Rician { sigma_h, k_factor })
        }
        other => bail!("unknown fading model `{other}`; expected rayleigh or rician"),
    }
}

fn fading_meta(fading: &FadingModel) -> Value {
    match *fading {
        FadingModel::Awgn => json!({"model": "awgn"}),
        FadingModel::Rayleigh { sigma_h } => json!({"model": "rayleigh", "sigma_h": sigma_h}),
        FadingModel::Rician { sigma_h, k_factor } => {
            json!({"model": "rician", "sigma_h": sigma_h, "k": k_factor})
        }
    }
}

/// Truncation window from its CLI name. The distribution-side convention
/// keeps the single-side window open above ([A₀, ∞), as in the amplitude
/// pdfs); the capacity-side convention caps it at the physical maximum M.
fn window_from_name(
    name: &str,
    p0: f64,
    delta_db: f64,
    m: usize,
    capacity_side: bool,
) -> anyhow::Result<TruncationWindow> {
    let win = match name.to_ascii_lowercase().as_str() {
        "none" => TruncationWindow::unconstrained(m),
        "single" => {
            if capacity_side {
                TruncationWindow::single_side_capped(p0, m)
            } else {
                TruncationWindow::single_side(p0, m)
            }
        }
        "double" => TruncationWindow::double_sided(p0, delta_db, m),
        other => bail!("unknown window `{other}`; expected none, single, or double"),
    };
    Ok(win?)
}

fn window_meta(name: &str, p0: f64, delta_db: f64, win: &TruncationWindow) -> Value {
    let mut map = Map::new();
    map.insert("kind".into(), json!(name));
    map.insert("a1".into(), json!(win.a1));
    let a2 = if win.a2.is_finite() { json!(win.a2) } else { json!("inf") };
    map.insert("a2".into(), a2);
    if name != "none" {
        map.insert("p0".into(), json!(p0));
    }
    if name == "double" {
        map.insert("delta_db".into(), json!(delta_db));
    }
    Value::Object(map)
}

/// Resolve an SNR grid: flag text, else config value, else the default
/// range. Returns the grid and the text it came from (for metadata).
fn resolve_snr_grid(
    flag: &Option<String>,
    file: &Option<crate::config::GridValue>,
    default: &str,
) -> anyhow::Result<(Vec<f64>, String)> {
    if let Some(text) = flag {
        let grid = parse_snr_grid(text).map_err(|e| anyhow!("--snr-db: {e}"))?;
        return Ok((grid, text.trim().to_string()));
    }
    if let Some(value) = file {
        let grid = value.values().map_err(|e| anyhow!("config snr_db: {e}"))?;
        let desc = match value {
            crate::config::GridValue::Single(v) => fmt_f(*v),
            crate::config::GridValue::Text(s) => s.trim().to_string(),
        };
        return Ok((grid, desc));
    }
    let grid = parse_snr_grid(default).expect("default grid parses");
    Ok((grid, default.to_string()))
}

/// Linear interpolation of a pdf curve at `x` (clamped to the end values).
fn interp(curve: &PdfCurve, x: f64) -> f64 {
    let g = &curve.grid;
    let last = g.len() - 1;
    if x <= g[0] {
        return curve.density[0];
    }
    if x >= g[last] {
        return curve.density[last];
    }
    let k = g.partition_point(|&gi| gi <= x) - 1;
    let t = (x - g[k]) / (g[k + 1] - g[k]);
    curve.density[k] + t * (curve.density[k + 1] - curve.density[k])
}

// ---------------------------------------------------------------------------
// waveform
// ---------------------------------------------------------------------------

pub fn cmd_waveform(args: &WaveformArgs, file: &FileConfig, out: &OutputCtx) -> anyhow::Result<()> {
    let m = pick(args.m, file.m, 16);
    let l = pick(args.l, file.l, 256);
    let d = pick(args.d, file.d, 0.5);
    let f_c = pick(args.f_c, file.f_c, 10.0e9);
    let (theta_c, theta_n) = angle_pair(&args.theta_c, &args.theta_n, file)?;
    let cfg = ArrayConfig { m, d, l, theta_c, theta_n, f_c };

    let constraint_name = pick_str(&args.constraint, &file.constraint, "none");
    let mode = match constraint_name.to_ascii_lowercase().as_str() {
        "none" => ConstraintMode::None,
        "single" => ConstraintMode::SingleSide,
        "double" => ConstraintMode::DoubleSide,
        other => bail!("unknown constraint `{other}`; expected none, single, or double"),
    };
    let p0 = pick(args.p0, file.p0, 0.1);
    let delta_db = pick(args.delta_db, file.delta_db, 3.0);
    let max_iterations = pick(args.max_iterations, file.max_iterations, DEFAULT_MAX_ITERATIONS);
    let spec = ConstraintSpec { mode, p0, delta_db, max_iterations };

    let method = pick_str(&args.method, &file.method, "null-fixed");
    let pulses = pick(args.pulses, file.pulses, 1);
    if pulses == 0 {
        bail!("--pulses must be at least 1");
    }

    let mut matrices: Vec<PhaseCodingMatrix> = Vec::with_capacity(pulses);
    for p in 0..pulses {
        let pulse_seed = child_seed(out.seed, p as u64);
        let matrix = match method.as_str() {
            "null-fixed" | "null_fixed" => generate_null_fixed(&cfg, &spec, pulse_seed)
                .with_context(|| format!("pulse {p} (seed {pulse_seed})"))?,
            "comm-fixed" | "comm_fixed" => generate_comm_fixed(&cfg, p0, pulse_seed)
                .with_context(|| format!("pulse {p} (seed {pulse_seed})"))?,
            other => bail!("unknown method `{other}`; expected null-fixed or comm-fixed"),
        };
        matrices.push(matrix);
    }

    let parameters = json!({
        "constraint": constraint_name,
        "d": d,
        "delta_db": delta_db,
        "f_c": f_c,
        "l": l,
        "m": m,
        "max_iterations": max_iterations,
        "method": method,
        "p0": p0,
        "pulse_seed_derivation": "splitmix64(seed, pulse)",
        "pulses": pulses,
        "theta_c_rad": theta_c,
        "theta_n_rad": theta_n,
    });

    // Phase matrix of the first pulse, as self-describing JSON.
    let matrix_json = serde_json::to_string_pretty(&matrices[0])? + "\n";
    out.write("phase_matrix.json", &matrix_json)?;

    let mut amp_rows = Vec::new();
    let mut iter_rows = Vec::new();
    for (p, matrix) in matrices.iter().enumerate() {
        for (sub, &a) in matrix.per_subpulse_amplitude.iter().enumerate() {
            amp_rows.push(vec![p.to_string(), sub.to_string(), fmt_f(a)]);
        }
        iter_rows.push(vec![
            p.to_string(),
            matrix.seed.to_string(),
            matrix.iterations_used.to_string(),
        ]);
    }
    let amp_body = out.csv_body(
        "waveform",
        None,
        parameters.clone(),
        &["pulse", "subpulse", "amplitude"],
        &amp_rows,
        &[],
    );
    out.write("amplitudes.csv", &amp_body)?;
    let iter_body = out.csv_body(
        "waveform",
        None,
        parameters,
        &["pulse", "pulse_seed", "iterations"],
        &iter_rows,
        &[],
    );
    out.write("iterations.csv", &iter_body)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// pdf
// ---------------------------------------------------------------------------

enum PdfSource {
    ModulationOnly,
    Fading(FadingModel),
    PhaseMatrix(PathBuf),
}

pub fn cmd_pdf(args: &PdfArgs, file: &FileConfig, out: &OutputCtx) -> anyhow::Result<()> {
    let m = pick(args.m, file.m, 16);
    let p0 = pick(args.p0, file.p0, 0.1);
    let delta_db = pick(args.delta_db, file.delta_db, 3.0);
    let window_name = pick_str(&args.window, &file.window, "none");
    let domain = pick_str(&args.domain, &file.domain, "amplitude");
    if domain != "amplitude" && domain != "snr" {
        bail!("unknown domain `{domain}`; expected amplitude or snr");
    }

    let explicit_sources =
        [args.modulation_only, args.fading.is_some(), args.phase_matrix.is_some()];
    if explicit_sources.iter().filter(|&&b| b).count() > 1 {
        bail!("--modulation-only, --fading, and --phase-matrix are mutually exclusive");
    }
    let source = if let Some(path) = &args.phase_matrix {
        PdfSource::PhaseMatrix(path.clone())
    } else if args.modulation_only {
        PdfSource::ModulationOnly
    } else if let Some(name) = args.fading.clone().or_else(|| file.fading.clone()) {
        let sigma_h = resolve_sigma_h(args.sigma_h, args.sigma_h2, file)?;
        PdfSource::Fading(fading_model(&name, sigma_h, args.k.or(file.k))?)
    } else {
        bail!(
            "pdf needs a source: --fading rayleigh|rician for the product channel, \
             --modulation-only for the truncated-modulation density, or --phase-matrix FILE"
        );
    };

    // Phase-matrix source: Fourier phase density, its own file shape.
    if let PdfSource::PhaseMatrix(path) = &source {
        if args.validate {
            bail!("--validate is not available with --phase-matrix (the Fourier curve is already an empirical estimate)");
        }
        if domain == "snr" {
            bail!("--phase-matrix produces a phase density; --domain snr does not apply");
        }
        let matrix: PhaseCodingMatrix = serde_json::from_str(&read_file(path)?)
            .map_err(|e| anyhow!("cannot parse {} as a phase matrix: {e}", path.display()))?;
        matrix.validate()?;
        let n_max = pick(args.fourier_terms, file.fourier_terms, 16);
        if n_max == 0 {
            bail!("--fourier-terms must be at least 1");
        }
        let pdf = PhasePdf::new(&matrix, n_max);
        let points = pick(args.points, file.points, 4001).max(2);
        let mut rows = Vec::with_capacity(points);
        for i in 0..points {
            let phi = -PI + 2.0 * PI * i as f64 / (points - 1) as f64;
            rows.push(vec![fmt_f(phi), fmt_f(pdf.eval(phi))]);
        }
        let parameters = json!({
            "fourier_terms": n_max,
            "l": matrix.l,
            "m": matrix.m,
            "points": points,
            "source": "phase_matrix",
            "matrix_seed": matrix.seed,
        });
        let body = out.csv_body("pdf", None, parameters, &["phi", "density"], &rows, &[]);
        out.write("phase_pdf.csv", &body)?;
        return Ok(());
    }

    let win = window_from_name(&window_name, p0, delta_db, m, false)?;
    let points = pick(args.points, file.points, if domain == "snr" { 16001 } else { 4001 });
    let c_gamma = args.c_gamma.or(file.c_gamma);

    let (curve, source_name, fading_param) = match &source {
        PdfSource::ModulationOnly => {
            let curve = if domain == "snr" {
                let c = c_gamma.ok_or_else(|| anyhow!("--domain snr needs --c-gamma (reference SNR)"))?;
                snr_pdf_truncated_curve(&win, c, points)?
            } else {
                truncated_rayleigh_curve(&win, points)?
            };
            (curve, "modulation_only", None)
        }
        PdfSource::Fading(fading) => {
            let curve = if domain == "snr" {
                let c = c_gamma.ok_or_else(|| anyhow!("--domain snr needs --c-gamma (reference SNR)"))?;
                product_snr_pdf_curve(&win, fading, c, points)?
            } else {
                product_pdf_curve(&win, fading, points)?
            };
            (curve, "product_channel", Some(fading_meta(fading)))
        }
        PdfSource::PhaseMatrix(_) => unreachable!("handled above"),
    };

    let mut parameters = Map::new();
    parameters.insert("domain".into(), json!(domain));
    parameters.insert("m".into(), json!(m));
    parameters.insert("points".into(), json!(points));
    parameters.insert("source".into(), json!(source_name));
    parameters.insert("total_mass".into(), json!(curve.total_mass));
    parameters.insert("window".into(), window_meta(&window_name, p0, delta_db, &win));
    if let Some(f) = fading_param {
        parameters.insert("fading".into(), f);
    }
    if let Some(c) = c_gamma {
        if domain == "snr" {
            parameters.insert("c_gamma".into(), json!(c));
        }
    }
    let parameters = Value::Object(parameters);

    let x_column = if domain == "snr" { "snr" } else { "amplitude" };
    let rows: Vec<Vec<String>> = curve
        .grid
        .iter()
        .zip(&curve.density)
        .map(|(&x, &f)| vec![fmt_f(x), fmt_f(f)])
        .collect();
    let body = out.csv_body("pdf", None, parameters.clone(), &[x_column, "density"], &rows, &[]);
    out.write("pdf_curve.csv", &body)?;

    if !args.validate {
        return Ok(());
    }
    if domain == "snr" {
        bail!("--validate supports --domain amplitude (the SNR density is its exact change of variables)");
    }

    let samples = pick(args.samples, file.samples, 1_000_000);
    let model = match &source {
        PdfSource::ModulationOnly => SampleModel::TruncatedRayleigh { window: win },
        PdfSource::Fading(fading) => SampleModel::ProductChannel { window: win, fading: fading.clone() },
        PdfSource::PhaseMatrix(_) => unreachable!("handled above"),
    };
    let batch = sample(&model, samples, out.seed)?;
    let gof = goodness_of_fit(&batch, &curve)?;

    // 64-bin histogram over the curve's support for visual comparison.
    let nb = 64usize;
    let lo = curve.grid[0];
    let hi = *curve.grid.last().expect("curve has points");
    let width = (hi - lo) / nb as f64;
    let mut counts = vec![0u64; nb];
    let mut outside = 0u64;
    for &v in &batch.values {
        if v < lo || v > hi {
            outside += 1;
            continue;
        }
        let idx = (((v - lo) / width) as usize).min(nb - 1);
        counts[idx] += 1;
    }
    let n = batch.values.len() as f64;
    let hist_rows: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let b_lo = lo + i as f64 * width;
            let b_hi = lo + (i + 1) as f64 * width;
            let center = 0.5 * (b_lo + b_hi);
            vec![
                fmt_f(b_lo),
                fmt_f(b_hi),
                c.to_string(),
                fmt_f(c as f64 / (n * width)),
                fmt_f(interp(&curve, center)),
            ]
        })
        .collect();
    let mut hist_params = parameters
        .as_object()
        .cloned()
        .expect("parameters is an object");
    hist_params.insert("samples".into(), json!(samples));
    hist_params.insert("outside_support".into(), json!(outside));
    let hist_body = out.csv_body(
        "pdf",
        None,
        Value::Object(hist_params),
        &["bin_lo", "bin_hi", "count", "empirical_density", "analytic_density"],
        &hist_rows,
        &[],
    );
    out.write("pdf_histogram.csv", &hist_body)?;
    out.write("gof_report.json", &(serde_json::to_string_pretty(&gof)? + "\n"))?;

    let threshold = pick(args.ks_threshold, file.ks_threshold, 0.02);
    if !(gof.ks_statistic < threshold) {
        bail!(
            "goodness-of-fit failed: KS statistic {} at {} samples is not below the threshold {}",
            gof.ks_statistic,
            gof.sample_count,
            threshold
        );
    }
    println!(
        "goodness-of-fit passed: KS {:.6} < {} at {} samples",
        gof.ks_statistic, threshold, gof.sample_count
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// capacity
// ---------------------------------------------------------------------------

pub fn cmd_capacity(args: &CapacityArgs, file: &FileConfig, out: &OutputCtx) -> anyhow::Result<()> {
    if args.table2 {
        return cmd_table2(args, file, out);
    }
    let regime = pick_str(&args.regime, &file.regime, "awgn");
    let m = pick(args.m, file.m, 16);
    let p0 = pick(args.p0, file.p0, 0.1);
    let delta_db = pick(args.delta_db, file.delta_db, 3.0);
    let (grid, grid_desc) = resolve_snr_grid(&args.snr_db, &file.snr_db, "-10:30:1")?;
    let snrs: Vec<SnrConfig> = grid
        .iter()
        .map(|&db| SnrConfig::from_snr_db(db))
        .collect::<Result<_, _>>()?;

    match regime.to_ascii_lowercase().as_str() {
        "awgn" => {
            let methods =
                parse_methods(&pick_str(&args.methods, &file.methods, "all")).map_err(anyhow::Error::msg)?;
            let labels: Vec<String> = methods.iter().map(|mm| mm.label()).collect();
            let table = capacity_sweep(&snrs, m, p0, &methods)?;
            let mut columns: Vec<&str> = vec!["snr_db"];
            columns.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = grid
                .iter()
                .zip(&table)
                .map(|(&db, row)| {
                    let mut cells = vec![fmt_f(db)];
                    cells.extend(row.iter().map(|r| fmt_f(out.scale_capacity(r.nats))));
                    cells
                })
                .collect();
            let parameters = json!({
                "m": m,
                "methods": labels,
                "p0": p0,
                "regime": "awgn",
                "snr_db": grid_desc,
            });
            let body = out.csv_body(
                "capacity",
                Some(out.capacity_units()),
                parameters,
                &columns,
                &rows,
                &[],
            );
            out.write("capacity_sweep.csv", &body)?;
        }
        "fast" => {
            let fading_name = args
                .fading
                .clone()
                .or_else(|| file.fading.clone())
                .ok_or_else(|| anyhow!("regime fast needs --fading rayleigh|rician"))?;
            let sigma_h = resolve_sigma_h(args.sigma_h, args.sigma_h2, file)?;
            let fading = fading_model(&fading_name, sigma_h, args.k.or(file.k))?;
            let window_name = pick_str(&args.window, &file.window, "none");
            let win = window_from_name(&window_name, p0, delta_db, m, true)?;
            let rows: Vec<Vec<String>> = snrs
                .iter()
                .zip(&grid)
                .map(|(snr, &db)| {
                    capacity_fast_fading(snr, &win, &fading).map(|r| {
                        vec![fmt_f(db), fmt_f(snr.c_gamma()), fmt_f(out.scale_capacity(r.nats))]
                    })
                })
                .collect::<Result<_, _>>()?;
            let parameters = json!({
                "fading": fading_meta(&fading),
                "m": m,
                "regime": "fast",
                "snr_db": grid_desc,
                "window": window_meta(&window_name, p0, delta_db, &win),
            });
            let body = out.csv_body(
                "capacity",
                Some(out.capacity_units()),
                parameters,
                &["snr_db", "c_gamma", "capacity"],
                &rows,
                &[],
            );
            out.write("capacity_fast.csv", &body)?;
        }
        "slow" => {
            let fading_name = args
                .fading
                .clone()
                .or_else(|| file.fading.clone())
                .ok_or_else(|| anyhow!("regime slow needs --fading rayleigh|rician"))?;
            let sigma_h = resolve_sigma_h(args.sigma_h, args.sigma_h2, file)?;
            let fading = fading_model(&fading_name, sigma_h, args.k.or(file.k))?;
            let window_name = pick_str(&args.window, &file.window, "none");
            let win = window_from_name(&window_name, p0, delta_db, m, true)?;
            if args.outage_scan {
                let p_grid_text = args
                    .p_out_grid
                    .clone()
                    .or_else(|| match &file.p_out_grid {
                        Some(crate::config::GridValue::Text(s)) => Some(s.clone()),
                        Some(crate::config::GridValue::Single(v)) => Some(fmt_f(*v)),
                        None => None,
                    })
                    .unwrap_or_else(|| "0.01:0.5:0.01".to_string());
                let p_grid = parse_probability_grid(&p_grid_text).map_err(anyhow::Error::msg)?;
                let mut rows = Vec::with_capacity(grid.len() * p_grid.len());
                let mut annotations = Vec::with_capacity(grid.len());
                for (snr, &db) in snrs.iter().zip(&grid) {
                    for &p_out in &p_grid {
                        let (cap, rate) = outage_capacity(snr, &win, &fading, &OutageSpec { p_out })?;
                        rows.push(vec![
                            fmt_f(db),
                            fmt_f(p_out),
                            fmt_f(out.scale_capacity(cap.nats)),
                            fmt_f(out.scale_capacity(rate.nats)),
                        ]);
                    }
                    let (p_star, best) = optimal_outage_probability(snr, &win, &fading)?;
                    annotations.push(format!(
                        "# argmax snr_db={} p_out_star={} rate={}",
                        fmt_f(db),
                        fmt_f(p_star),
                        fmt_f(out.scale_capacity(best.nats))
                    ));
                }
                let parameters = json!({
                    "fading": fading_meta(&fading),
                    "m": m,
                    "p_out_grid": p_grid_text.trim(),
                    "regime": "slow",
                    "snr_db": grid_desc,
                    "window": window_meta(&window_name, p0, delta_db, &win),
                });
                let body = out.csv_body(
                    "capacity",
                    Some(out.capacity_units()),
                    parameters,
                    &["snr_db", "p_out", "capacity", "rate"],
                    &rows,
                    &annotations,
                );
                out.write("outage_scan.csv", &body)?;
            } else {
                let p_out = pick(args.p_out, file.p_out, 0.1);
                let spec = OutageSpec::new(p_out)?;
                let rows: Vec<Vec<String>> = snrs
                    .iter()
                    .zip(&grid)
                    .map(|(snr, &db)| {
                        outage_capacity(snr, &win, &fading, &spec).map(|(cap, rate)| {
                            vec![
                                fmt_f(db),
                                fmt_f(snr.c_gamma()),
                                fmt_f(out.scale_capacity(cap.nats)),
                                fmt_f(out.scale_capacity(rate.nats)),
                            ]
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let parameters = json!({
                    "fading": fading_meta(&fading),
                    "m": m,
                    "p_out": p_out,
                    "regime": "slow",
                    "snr_db": grid_desc,
                    "window": window_meta(&window_name, p0, delta_db, &win),
                });
                let body = out.csv_body(
                    "capacity",
                    Some(out.capacity_units()),
                    parameters,
                    &["snr_db", "c_gamma", "capacity", "rate"],
                    &rows,
                    &[],
                );
                out.write("capacity_slow.csv", &body)?;
            }
        }
        other => bail!("unknown regime `{other}`; expected awgn, fast, or slow"),
    }
    Ok(())
}

fn cmd_table2(args: &CapacityArgs, file: &FileConfig, out: &OutputCtx) -> anyhow::Result<()> {
    // Table 2 is pinned to c_γ = 10 (10 dB); accept only a grid that names
    // exactly that point.
    if args.snr_db.is_some() || file.snr_db.is_some() {
        let (grid, _) = resolve_snr_grid(&args.snr_db, &file.snr_db, "10")?;
        if grid.len() != 1 || (grid[0] - 10.0).abs() > 1e-12 {
            bail!("Table 2 is defined at 10 dB (c_γ = 10); pass --snr-db 10 or omit the flag");
        }
    }
    let report = table2_report()?;
    let cell_rows = |name: &str, cells: &[Table2Cell]| -> Vec<Vec<String>> {
        cells
            .iter()
            .map(|cell| {
                let target = match cell.target {
                    Table2Target::Printed(v) => fmt_f(v),
                    Table2Target::Below(v) => format!("<{}", fmt_f(v)),
                };
                vec![
                    name.to_string(),
                    cell.m.to_string(),
                    fmt_f(cell.computed),
                    target,
                    cell.passes.to_string(),
                ]
            })
            .collect()
    };
    let mut rows = cell_rows("rcsi_vs_no_constraint", &report.rcsi_vs_no_constraint);
    rows.extend(cell_rows("approx_vs_exact_single_side", &report.approx_vs_exact_single_side));
    let mut parameters = Map::new();
    parameters.insert("c_gamma".into(), json!(10.0));
    parameters.insert("p0".into(), json!(0.1));
    if out.bits {
        // The published differences are nats at B = 1; unit conversion would
        // break comparability, so --bits is ignored here.
        parameters.insert("bits_ignored".into(), json!(true));
    }
    let body = out.csv_body(
        "capacity",
        Some("nats"),
        Value::Object(parameters),
        &["row", "m", "computed", "target", "passes"],
        &rows,
        &[],
    );
    out.write("table2.csv", &body)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

pub fn cmd_validate(args: &ValidateArgs, file: &FileConfig, out: &OutputCtx) -> anyhow::Result<()> {
    let selection = pick_str(&args.criteria, &file.criteria, "all");
    let ids = parse_criteria(&selection).map_err(anyhow::Error::msg)?;
    let report = run_selected(&ids, out.seed)?;

    let mut text = String::new();
    if !out.no_timestamp {
        text.push_str(&crate::output::timestamp_line());
        text.push('\n');
    }
    text.push_str(&report.render());
    out.write("acceptance_report.txt", &text)?;
    out.write(
        "acceptance_results.json",
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    print!("{}", report.render());

    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.id.to_string())
            .collect();
        bail!(
            "{} of {} criteria failed: {}",
            failed.len(),
            report.outcomes.len(),
            failed.join(", ")
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_pair_rule() {
        let empty = FileConfig::default();
        let both = angle_pair(&Some("-22deg".into()), &Some("38deg".into()), &empty).unwrap();
        assert!((both.0 - (-22f64).to_radians()).abs() < 1e-15);
        let defaults = angle_pair(&None, &None, &empty).unwrap();
        assert!((defaults.0 - (-22f64).to_radians()).abs() < 1e-15);
        assert!((defaults.1 - 38f64.to_radians()).abs() < 1e-15);
        let err = angle_pair(&None, &Some("38deg".into()), &empty).unwrap_err();
        assert!(err.to_string().contains("--theta-c"), "{err}");
        let err = angle_pair(&Some("-22deg".into()), &None, &empty).unwrap_err();
        assert!(err.to_string().contains("--theta-n"), "{err}");
        // Config file supplies the pair too.
        let cfg = FileConfig::parse_str("theta_c = \"-22deg\"\ntheta_n = 0.5\n").unwrap();
        let pair = angle_pair(&None, &None, &cfg).unwrap();
        assert_eq!(pair.1, 0.5);
    }

    #[test]
    fn sigma_resolution_prefers_flags_and_rejects_ambiguity() {
        let cfg = FileConfig::parse_str("sigma_h2 = 0.25\n").unwrap();
        assert_eq!(resolve_sigma_h(None, None, &cfg).unwrap(), 0.5);
        assert_eq!(resolve_sigma_h(Some(2.0), None, &cfg).unwrap(), 2.0);
        assert!((resolve_sigma_h(None, Some(2.0), &cfg).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(resolve_sigma_h(Some(1.0), Some(1.0), &cfg).is_err());
        assert_eq!(resolve_sigma_h(None, None, &FileConfig::default()).unwrap(), 1.0);
    }

    #[test]
    fn window_conventions_differ_between_pdf_and_capacity() {
        let pdf_side = window_from_name("single", 0.1, 3.0, 16, false).unwrap();
        assert!(pdf_side.a2.is_infinite());
        let cap_side = window_from_name("single", 0.1, 3.0, 16, true).unwrap();
        assert_eq!(cap_side.a2, 16.0);
        assert!(window_from_name("sideways", 0.1, 3.0, 16, true).is_err());
    }

    #[test]
    fn interp_is_linear_between_grid_points() {
        let curve = PdfCurve::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((interp(&curve, 0.5) - 0.5).abs() < 1e-15);
        assert!((interp(&curve, 1.75) - 0.25).abs() < 1e-15);
        assert_eq!(interp(&curve, -1.0), 0.0);
        assert_eq!(interp(&curve, 5.0), 0.0);
    }
}
