//! Monte-Carlo sampling and goodness-of-fit cross-validation.
//!
//! Every analytic density and capacity expression in this crate has an
//! independent empirical counterpart here:
//!
//! * [`sample`] draws reproducible batches from the channel models — the
//!   truncated Rayleigh modulation coefficient via its closed-form inverse
//!   CDF, Rayleigh/Rician fading via complex-Gaussian synthesis, and the
//!   product channel by independent pairwise multiplication;
//! * [`goodness_of_fit`] compares a batch against an analytic [`PdfCurve`]
//!   with an exact Kolmogorov–Smirnov statistic;
//! * [`empirical_capacity`] estimates `E[B·ln(1+γ)]` with a standard error,
//!   cross-validating the closed-form and quadrature capacity routes;
//! * [`waveform_amplitude_harvest`] collects amplitudes from physically
//!   generated phase-coding matrices, tying the waveform generator to the
//!   statistical model it is supposed to induce.
//!
//! # Reproducibility
//!
//! A batch is a pure function of `(model, sample_count, seed)`. Values are
//! produced in chunks of [`SAMPLE_CHUNK`]: chunk `c` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` with stream `c`, and each value consumes
//! a fixed number of draws from its chunk stream. Chunks are therefore
//! independent and the layout is stable under future parallelisation — only
//! commutative reductions are applied across chunks. The waveform harvest
//! derives pulse `p`'s seed as `splitmix64(seed, p)`, so pulses are likewise
//! independent and order-stable.

use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::capacity::{SnrConfig, SMALL_SNR_FLOOR};
use crate::distributions::{fading_params, FadingModel, PdfCurve, TruncationWindow};
use crate::error::{JrcError, Result};
use crate::waveform::{generate_null_fixed, ArrayConfig, ConstraintSpec};

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Number of values drawn per RNG stream. Chunk `c` of a batch uses
/// `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(c)`.
pub const SAMPLE_CHUNK: usize = 65_536;

/// Histogram bins used for the mean absolute density error diagnostic.
const DENSITY_ERROR_BINS: usize = 64;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Generating distribution of a sample batch.
///
/// The serialized form doubles as the batch's provenance tag: a batch is
/// reproducible from `(model, sample_count, seed)` alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleModel {
    /// Rayleigh fading amplitude `|h|`, `h ~ CN(0, 2σ_H²)`.
    Rayleigh { sigma_h: f64 },
    /// Rician fading amplitude `|μ + CN(0, 2σ_H²)|` with `μ = σ_H·√(2K)`.
    Rician { sigma_h: f64, k_factor: f64 },
    /// Truncated Rayleigh modulation coefficient `Ã ∈ [a₁, a₂]` (Theorem 1).
    TruncatedRayleigh { window: TruncationWindow },
    /// Product `Z = Ã·|h|` of an independent truncated Rayleigh modulation
    /// coefficient and fading amplitude.
    ProductChannel {
        window: TruncationWindow,
        fading: FadingModel,
    },
    /// Amplitudes harvested from physically generated phase-coding matrices
    /// ([`waveform_amplitude_harvest`]); not drawable via [`sample`].
    WaveformAmplitude { m: usize, l: usize },
}

impl SampleModel {
    fn validate(&self) -> Result<()> {
        match self {
            SampleModel::Rayleigh { sigma_h } => {
                FadingModel::Rayleigh { sigma_h: *sigma_h }.validate()
            }
            SampleModel::Rician { sigma_h, k_factor } => FadingModel::Rician {
                sigma_h: *sigma_h,
                k_factor: *k_factor,
            }
            .validate(),
            SampleModel::TruncatedRayleigh { window } => window.validate(),
            SampleModel::ProductChannel { window, fading } => {
                window.validate()?;
                fading.validate()?;
                // Mirrors the analytic product pdf: a fading model without a
                // random amplitude has no product density to validate against.
                fading_params(fading).map(|_| ())
            }
            SampleModel::WaveformAmplitude { m, l } => {
                if *m == 0 || *l == 0 {
                    return Err(JrcError::InvalidConfig(
                        "waveform amplitude model needs m >= 1 and l >= 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A reproducible batch of nonnegative sample values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    /// Sample values; all finite and `>= 0`.
    pub values: Vec<f64>,
    /// Seed the batch was generated from.
    pub seed: u64,
    /// Generating distribution.
    pub model: SampleModel,
}

impl SampleBatch {
    /// Number of values in the batch.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Whether the batch is empty (never true for batches built by this
    /// module, which require `n >= 1`).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample mean.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Standard error of the sample mean (`0` for a single-value batch).
    pub fn std_error(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64 / n as f64).sqrt()
    }

    fn check_values(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(JrcError::InvalidConfig(
                "sample batch is empty; need at least one value".into(),
            ));
        }
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(JrcError::Domain(format!(
                    "sample batch value #{i} is {v}; values must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }
}

/// Goodness-of-fit report from [`goodness_of_fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    /// Kolmogorov–Smirnov statistic `sup_x |F_n(x) − F(x)|`, in `[0, 1]`.
    pub ks_statistic: f64,
    /// Number of samples the report was computed from.
    pub sample_count: usize,
    /// Mean absolute difference between a 64-bin histogram density and the
    /// analytic density at the bin centres (diagnostic; units of the density).
    pub mean_abs_density_error: f64,
}

/// Empirical capacity estimate from [`empirical_capacity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCapacity {
    /// Sample mean of `B·ln(1 + γ)` in nats/s.
    pub nats: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Number of Monte-Carlo draws.
    pub sample_count: usize,
    /// Seed the estimate was generated from.
    pub seed: u64,
}

// ---------------------------------------------------------------------------
// Seed derivation
// ---------------------------------------------------------------------------

/// SplitMix64-derived child seed for job `index` of master `seed`.
///
/// This is the documented seed-splitting function for everything that fans
/// one master seed out into independent sub-streams: pulse `p` of
/// [`waveform_amplitude_harvest`] uses `child_seed(seed, p)`. Distinct
/// indices give statistically independent ChaCha streams.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) use child_seed as splitmix64;

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// One draw from the model, consuming a fixed number of RNG values.
fn draw_one(model: &SampleModel, rng: &mut ChaCha8Rng) -> f64 {
    match model {
        SampleModel::Rayleigh { sigma_h } => draw_fading(*sigma_h, 0.0, rng),
        SampleModel::Rician { sigma_h, k_factor } => {
            let mu = sigma_h * (2.0 * k_factor).sqrt();
            draw_fading(*sigma_h, mu, rng)
        }
        SampleModel::TruncatedRayleigh { window } => draw_truncated(window, rng),
        SampleModel::ProductChannel { window, fading } => {
            let a = draw_truncated(window, rng);
            let (sigma_h, mu) = fading_params(fading).expect("validated before sampling");
            a * draw_fading(sigma_h, mu, rng)
        }
        SampleModel::WaveformAmplitude { .. } => {
            unreachable!("validate() rejects WaveformAmplitude before sampling")
        }
    }
}

/// `|μ + σ(N₁ + jN₂)|` with independent standard normals N₁, N₂ (two draws).
fn draw_fading(sigma_h: f64, mu: f64, rng: &mut ChaCha8Rng) -> f64 {
    let n1: f64 = rng.sample(StandardNormal);
    let n2: f64 = rng.sample(StandardNormal);
    let re = mu + sigma_h * n1;
    let im = sigma_h * n2;
    (re * re + im * im).sqrt()
}

/// Closed-form inverse CDF of the truncated Rayleigh window (one draw):
/// `ρ = √(−M·ln(e^{−Ã₁} − u·α))` with `u ~ Uniform[0, 1)`.
///
/// `u = 0` maps to exactly `a₁`; `u → 1` approaches `a₂` from below, so every
/// sample lies inside the window with no clipping.
fn draw_truncated(window: &TruncationWindow, rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    let inner = (-window.a_tilde1()).exp() - u * window.alpha();
    (-(window.m as f64) * inner.ln()).sqrt()
}

/// Draw `sample_count` values from `model` under `seed`.
///
/// Deterministic: the same `(model, sample_count, seed)` triple always yields
/// the identical batch, and the first `k` values of a batch equal the
/// `k`-value batch for `k` within the same chunk layout (chunks of
/// [`SAMPLE_CHUNK`] values each use their own RNG stream).
///
/// # Errors
///
/// [`JrcError::InvalidConfig`] for `sample_count == 0`, invalid model
/// parameters, or a [`SampleModel::WaveformAmplitude`] model (those batches
/// only arise from [`waveform_amplitude_harvest`]); [`JrcError::Domain`] for
/// a product model whose fading component has no random amplitude.
pub fn sample(model: &SampleModel, sample_count: usize, seed: u64) -> Result<SampleBatch> {
    if sample_count == 0 {
        return Err(JrcError::InvalidConfig(
            "sample count must be at least 1".into(),
        ));
    }
    if matches!(model, SampleModel::WaveformAmplitude { .. }) {
        return Err(JrcError::InvalidConfig(
            "waveform amplitude batches come from waveform_amplitude_harvest, not sample()".into(),
        ));
    }
    model.validate()?;

    let mut values = Vec::with_capacity(sample_count);
    let chunks = sample_count.div_ceil(SAMPLE_CHUNK);
    for chunk in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let count = (sample_count - chunk * SAMPLE_CHUNK).min(SAMPLE_CHUNK);
        for _ in 0..count {
            values.push(draw_one(model, &mut rng));
        }
    }
    Ok(SampleBatch {
        values,
        seed,
        model: model.clone(),
    })
}

// ---------------------------------------------------------------------------
// Goodness of fit
// ---------------------------------------------------------------------------

/// Piecewise-quadratic CDF of a [`PdfCurve`] (exact trapezoid integral of the
/// piecewise-linear density).
struct CurveCdf<'a> {
    curve: &'a PdfCurve,
    cumulative: Vec<f64>,
}

impl<'a> CurveCdf<'a> {
    fn new(curve: &'a PdfCurve) -> Self {
        let g = &curve.grid;
        let d = &curve.density;
        let mut cumulative = Vec::with_capacity(g.len());
        cumulative.push(0.0);
        for i in 1..g.len() {
            let panel = 0.5 * (g[i] - g[i - 1]) * (d[i] + d[i - 1]);
            cumulative.push(cumulative[i - 1] + panel);
        }
        CurveCdf { curve, cumulative }
    }

    /// CDF value at `x`, clamped to `[0, 1]`; constant outside the grid.
    fn eval(&self, x: f64) -> f64 {
        let g = &self.curve.grid;
        let d = &self.curve.density;
        let raw = if x <= g[0] {
            0.0
        } else if x >= *g.last().expect("curve has at least two points") {
            *self.cumulative.last().expect("cumulative matches grid")
        } else {
            // Cell k with g[k] <= x < g[k+1].
            let k = match g.partition_point(|&gi| gi <= x) {
                0 => 0,
                p => p - 1,
            };
            let h = g[k + 1] - g[k];
            let t = (x - g[k]) / h;
            let dx = d[k] + t * (d[k + 1] - d[k]);
            self.cumulative[k] + 0.5 * (x - g[k]) * (d[k] + dx)
        };
        raw.clamp(0.0, 1.0)
    }

    /// Linear interpolation of the density at `x` (0 outside the grid).
    fn density_at(&self, x: f64) -> f64 {
        let g = &self.curve.grid;
        let d = &self.curve.density;
        if x < g[0] || x > *g.last().expect("curve has at least two points") {
            return 0.0;
        }
        let k = match g.partition_point(|&gi| gi <= x) {
            0 => 0,
            p => (p - 1).min(g.len() - 2),
        };
        let t = (x - g[k]) / (g[k + 1] - g[k]);
        d[k] + t * (d[k + 1] - d[k])
    }
}

/// Compare a sample batch against an analytic density curve.
///
/// The Kolmogorov–Smirnov statistic is the exact supremum distance between
/// the empirical step CDF and the curve's numerically integrated CDF,
/// evaluated at every sample point:
/// `D = max_i max(F(x_(i)) − (i−1)/n, i/n − F(x_(i)))`.
///
/// # Errors
///
/// [`JrcError::Coverage`] if the curve's grid fails to cover at least
/// `1 − 1e-6` of the batch's empirical mass, or if the curve's own mass falls
/// short of `1 − 1e-3` (an under-resolved or mis-ranged curve would otherwise
/// masquerade as a genuine mismatch); [`JrcError::Domain`] for non-finite or
/// negative batch values; [`JrcError::InvalidConfig`] for an empty batch.
pub fn goodness_of_fit(batch: &SampleBatch, pdf: &PdfCurve) -> Result<GofReport> {
    batch.check_values()?;
    let n = batch.values.len();
    let lo = pdf.grid[0];
    let hi = *pdf.grid.last().expect("curve has at least two points");

    let outside = batch
        .values
        .iter()
        .filter(|&&v| !(lo..=hi).contains(&v))
        .count();
    let covered = 1.0 - outside as f64 / n as f64;
    if covered < 1.0 - 1e-6 {
        return Err(JrcError::Coverage(format!(
            "curve grid [{lo:.6e}, {hi:.6e}] covers only {covered:.8} of the batch \
             ({outside} of {n} values outside); need >= 1 - 1e-6"
        )));
    }
    if pdf.total_mass < 1.0 - 1e-3 {
        return Err(JrcError::Coverage(format!(
            "curve integrates to {:.8}, short of 1 - 1e-3; refine or widen it before \
             comparing against samples",
            pdf.total_mass
        )));
    }

    let cdf = CurveCdf::new(pdf);
    let mut sorted = batch.values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("values checked finite"));

    let n_f = n as f64;
    let mut ks: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf.eval(x);
        let below = f - i as f64 / n_f;
        let above = (i + 1) as f64 / n_f - f;
        ks = ks.max(below).max(above);
    }
    let ks_statistic = ks.clamp(0.0, 1.0);

    // Histogram diagnostic: equal-width bins across the curve's grid.
    let width = (hi - lo) / DENSITY_ERROR_BINS as f64;
    let mut counts = [0usize; DENSITY_ERROR_BINS];
    for &v in &sorted {
        if (lo..=hi).contains(&v) {
            let bin = (((v - lo) / width) as usize).min(DENSITY_ERROR_BINS - 1);
            counts[bin] += 1;
        }
    }
    let mean_abs_density_error = counts
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let center = lo + (j as f64 + 0.5) * width;
            let empirical = c as f64 / (n_f * width);
            (empirical - cdf.density_at(center)).abs()
        })
        .sum::<f64>()
        / DENSITY_ERROR_BINS as f64;

    Ok(GofReport {
        ks_statistic,
        sample_count: n,
        mean_abs_density_error,
    })
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_x |F_a(x) − F_b(x)|`.
///
/// Used to compare the physical waveform-harvest route against the
/// statistical inverse-CDF route without privileging either as "the truth".
///
/// # Errors
///
/// [`JrcError::InvalidConfig`] if either slice is empty;
/// [`JrcError::Domain`] for non-finite values.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(JrcError::InvalidConfig(
            "two-sample KS needs at least one value on each side".into(),
        ));
    }
    for v in a.iter().chain(b.iter()) {
        if !v.is_finite() {
            return Err(JrcError::Domain(format!(
                "two-sample KS value is {v}; values must be finite"
            )));
        }
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.partial_cmp(y).expect("checked finite"));
    sb.sort_by(|x, y| x.partial_cmp(y).expect("checked finite"));

    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() && j < sb.len() {
        if sa[i] <= sb[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Empirical capacity
// ---------------------------------------------------------------------------

/// Monte-Carlo estimate of the ergodic capacity `E[B·ln(1 + γ)]`.
///
/// The instantaneous SNR is `γ = c_γ·v²/M` where `v` is an amplitude sample
/// from `model` — the truncated modulation coefficient for the AWGN-regime
/// channel, or the product `Ã·|h|` for the fading channel. `c_γ` below
/// [`SMALL_SNR_FLOOR`] short-circuits to exactly `0` with zero standard
/// error, without drawing any samples.
///
/// # Errors
///
/// [`JrcError::InvalidConfig`] for `sample_count < 1000` (the standard error
/// would be meaningless), an invalid [`SnrConfig`], or a model other than
/// [`SampleModel::TruncatedRayleigh`] / [`SampleModel::ProductChannel`]
/// (only those define an SNR through a modulation window).
pub fn empirical_capacity(
    model: &SampleModel,
    snr: &SnrConfig,
    sample_count: usize,
    seed: u64,
) -> Result<EmpiricalCapacity> {
    snr.validate()?;
    if sample_count < 1000 {
        return Err(JrcError::InvalidConfig(format!(
            "empirical capacity needs at least 1000 samples, got {sample_count}"
        )));
    }
    let m = match model {
        SampleModel::TruncatedRayleigh { window } => window.m,
        SampleModel::ProductChannel { window, .. } => window.m,
        _ => {
            return Err(JrcError::InvalidConfig(
                "empirical capacity is defined for truncated_rayleigh and product_channel \
                 models only"
                    .into(),
            ))
        }
    };

    let c = snr.c_gamma();
    if c < SMALL_SNR_FLOOR {
        return Ok(EmpiricalCapacity {
            nats: 0.0,
            std_error: 0.0,
            sample_count,
            seed,
        });
    }

    let batch = sample(model, sample_count, seed)?;
    let scale = c / m as f64;
    let b = snr.bandwidth;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &v in &batch.values {
        let rate = b * (scale * v * v).ln_1p();
        sum += rate;
        sum_sq += rate * rate;
    }
    let n_f = sample_count as f64;
    let mean = sum / n_f;
    let variance = ((sum_sq / n_f - mean * mean).max(0.0)) * n_f / (n_f - 1.0);
    Ok(EmpiricalCapacity {
        nats: mean,
        std_error: (variance / n_f).sqrt(),
        sample_count,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Waveform amplitude harvest
// ---------------------------------------------------------------------------

/// Harvest per-sub-pulse amplitudes `A_l = |G_l(θ_c)|` from physically
/// generated null-direction-fixed phase-coding matrices.
///
/// Pulse `p` (0-based) uses seed `splitmix64(seed, p)` and contributes its
/// `L` amplitudes in sub-pulse order; the batch concatenates pulses in order,
/// for `pulses·L` values total. This is the physical route to the modulation
/// distribution — Theorem 1's truncated Rayleigh is the statistical route —
/// and the two are cross-validated in the acceptance suite.
///
/// # Errors
///
/// [`JrcError::InvalidConfig`] for `pulses == 0` or an invalid
/// configuration/constraint; [`JrcError::IterationBudgetExceeded`] is
/// propagated verbatim from any pulse whose rejection sampling exhausts its
/// budget.
pub fn waveform_amplitude_harvest(
    cfg: &ArrayConfig,
    constraint: &ConstraintSpec,
    pulses: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if pulses == 0 {
        return Err(JrcError::InvalidConfig(
            "amplitude harvest needs at least one pulse".into(),
        ));
    }
    let mut values = Vec::with_capacity(pulses * cfg.l);
    for p in 0..pulses {
        let matrix = generate_null_fixed(cfg, constraint, splitmix64(seed, p as u64))?;
        values.extend_from_slice(&matrix.per_subpulse_amplitude);
    }
    Ok(SampleBatch {
        values,
        seed,
        model: SampleModel::WaveformAmplitude { m: cfg.m, l: cfg.l },
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{
        product_pdf_curve, truncated_rayleigh_curve, truncated_rayleigh_pdf,
    };
    use crate::waveform::ConstraintMode;

    fn rayleigh_sigma1() -> SampleModel {
        SampleModel::Rayleigh { sigma_h: 1.0 }
    }

    #[test]
    fn truncated_sampling_stays_in_window_and_matches_moments() {
        let window = TruncationWindow::double_sided(0.1, 3.0, 16).unwrap();
        let model = SampleModel::TruncatedRayleigh {
            window: window.clone(),
        };
        let batch = sample(&model, 200_000, 7).unwrap();

        let outside = batch
            .values
            .iter()
            .filter(|&&v| v < window.a1 || v > window.a2)
            .count();
        assert_eq!(
            outside, 0,
            "inverse-CDF sampling must keep every value inside the window"
        );

        // Frozen truncated mean for (p0, Δ, M) = (0.1, 3 dB, 16).
        let mean_ref = 5.6217512947793443;
        let dev = (batch.mean() - mean_ref).abs();
        assert!(
            dev < 3.0 * batch.std_error(),
            "truncated mean {} deviates {dev:.3e} from {mean_ref}, over 3 SE = {:.3e}",
            batch.mean(),
            3.0 * batch.std_error()
        );

        // Open window: mean must be √(Mπ)/2 = 2√π for M = 16.
        let open = SampleModel::TruncatedRayleigh {
            window: TruncationWindow::unconstrained(16).unwrap(),
        };
        let open_batch = sample(&open, 400_000, 7).unwrap();
        let open_dev = (open_batch.mean() - 3.5449077018110321).abs();
        assert!(
            open_dev < 3.0 * open_batch.std_error(),
            "open-window mean {} deviates {open_dev:.3e}, over 3 SE",
            open_batch.mean()
        );
    }

    #[test]
    fn sampling_is_deterministic_and_chunk_stable() {
        let model = SampleModel::TruncatedRayleigh {
            window: TruncationWindow::single_side_capped(0.1, 16).unwrap(),
        };
        let a = sample(&model, SAMPLE_CHUNK + 100, 42).unwrap();
        let b = sample(&model, SAMPLE_CHUNK + 100, 42).unwrap();
        assert_eq!(a, b, "identical (model, n, seed) must reproduce the batch");

        // Chunk streams are independent: a shorter batch is a prefix.
        let short = sample(&model, 50, 42).unwrap();
        assert_eq!(
            &a.values[..50],
            &short.values[..],
            "first values must be stable as the batch grows"
        );
        // And the second chunk starts from its own stream.
        let c = sample(&model, SAMPLE_CHUNK + 300, 42).unwrap();
        assert_eq!(
            &a.values[..SAMPLE_CHUNK + 100],
            &c.values[..SAMPLE_CHUNK + 100],
            "chunk layout must not depend on total batch size"
        );

        let other_seed = sample(&model, 50, 43).unwrap();
        assert_ne!(
            short.values, other_seed.values,
            "different seeds must give different draws"
        );
    }

    #[test]
    fn rician_k0_reduces_to_rayleigh() {
        let k0 = SampleModel::Rician {
            sigma_h: 1.0,
            k_factor: 0.0,
        };
        let a = sample(&k0, 10_000, 5).unwrap();
        let b = sample(&rayleigh_sigma1(), 10_000, 5).unwrap();
        assert_eq!(
            a.values, b.values,
            "K = 0 must reproduce the Rayleigh draw path exactly"
        );
        assert!(a.values.iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn gof_accepts_matching_and_rejects_mismatched_models() {
        // Rayleigh σ_H = 1 amplitude ≡ truncated-Rayleigh modulation pdf with
        // M = 2σ_H² = 2 and no window.
        let curve = truncated_rayleigh_curve(&TruncationWindow::unconstrained(2).unwrap(), 4001)
            .unwrap();
        let matched = sample(&rayleigh_sigma1(), 200_000, 3).unwrap();
        let report = goodness_of_fit(&matched, &curve).unwrap();
        assert!(
            report.ks_statistic < 0.01,
            "self-consistency KS = {} should be far below 0.01 at n = 2e5",
            report.ks_statistic
        );
        assert_eq!(report.sample_count, 200_000);
        assert!(report.mean_abs_density_error < 0.01);

        // Widen the Rayleigh curve's grid so it covers the Rician batch's
        // range; the KS statistic then measures shape mismatch, not support
        // mismatch.
        let wide_curve = PdfCurve::new(
            (0..=2400).map(|i| i as f64 * 0.005).collect(),
            (0..=2400)
                .map(|i| {
                    truncated_rayleigh_pdf(
                        &TruncationWindow::unconstrained(2).unwrap(),
                        i as f64 * 0.005,
                    )
                })
                .collect(),
        )
        .unwrap();
        let mismatched = sample(
            &SampleModel::Rician {
                sigma_h: 1.0,
                k_factor: 3.0,
            },
            200_000,
            3,
        )
        .unwrap();
        let bad = goodness_of_fit(&mismatched, &wide_curve).unwrap();
        assert!(
            bad.ks_statistic > 0.05,
            "Rayleigh curve vs Rician K=3 batch KS = {} should exceed 0.05",
            bad.ks_statistic
        );
    }

    #[test]
    fn gof_cross_validates_product_channel_series_pdf() {
        let window = TruncationWindow::double_sided(0.1, 3.0, 16).unwrap();
        let fading = FadingModel::Rician {
            sigma_h: 1.0,
            k_factor: 3.0,
        };
        let model = SampleModel::ProductChannel {
            window: window.clone(),
            fading: fading.clone(),
        };
        let batch = sample(&model, 100_000, 17).unwrap();
        let curve = product_pdf_curve(&window, &fading, 4001).unwrap();
        let report = goodness_of_fit(&batch, &curve).unwrap();
        assert!(
            report.ks_statistic < 0.02,
            "product-channel sampler vs series pdf KS = {}",
            report.ks_statistic
        );
    }

    #[test]
    fn gof_handles_single_sample_and_reports_coverage_errors() {
        let curve = truncated_rayleigh_curve(&TruncationWindow::unconstrained(2).unwrap(), 1001)
            .unwrap();
        let single = sample(&rayleigh_sigma1(), 1, 9).unwrap();
        let report = goodness_of_fit(&single, &curve).unwrap();
        assert_eq!(report.sample_count, 1);
        assert!((0.0..=1.0).contains(&report.ks_statistic));

        // A curve truncated to [0, 1.2] misses a large share of Rayleigh σ=2
        // samples: coverage precondition must fire.
        let narrow = PdfCurve::new(
            (0..=100).map(|i| i as f64 * 0.012).collect(),
            (0..=100)
                .map(|i| {
                    truncated_rayleigh_pdf(
                        &TruncationWindow::unconstrained(2).unwrap(),
                        i as f64 * 0.012,
                    )
                })
                .collect(),
        )
        .unwrap();
        let wide = sample(&SampleModel::Rayleigh { sigma_h: 2.0 }, 10_000, 4).unwrap();
        match goodness_of_fit(&wide, &narrow) {
            Err(JrcError::Coverage(_)) => {}
            other => panic!("expected Coverage error, got {other:?}"),
        }
    }

    #[test]
    fn empirical_capacity_matches_closed_forms() {
        use crate::capacity::{awgn_capacity, capacity_fast_fading, AwgnMethod};

        let snr = SnrConfig::from_c_gamma(10.0).unwrap();

        // AWGN regime: truncated modulation window (A₀, M), frozen Eq. 24
        // value 3.4923640760607855.
        let window = TruncationWindow::single_side_capped(0.1, 16).unwrap();
        let model = SampleModel::TruncatedRayleigh {
            window: window.clone(),
        };
        let est = empirical_capacity(&model, &snr, 300_000, 11).unwrap();
        let analytic = awgn_capacity(&snr, 16, 0.1, AwgnMethod::SingleSide)
            .unwrap()
            .nats;
        assert!(
            (analytic - 3.4923640760607855).abs() < 1e-12,
            "anchor drifted"
        );
        let dev = (est.nats - analytic).abs();
        assert!(
            dev < 3.0 * est.std_error && est.std_error < 0.01,
            "empirical {} vs analytic {analytic}: dev {dev:.3e}, 3 SE {:.3e}",
            est.nats,
            3.0 * est.std_error
        );

        // Fast fading: no window, Rayleigh σ_H² = 0.5, frozen quadrature
        // value 1.7037295849718886.
        let product = SampleModel::ProductChannel {
            window: TruncationWindow::unconstrained(16).unwrap(),
            fading: FadingModel::Rayleigh {
                sigma_h: 0.5f64.sqrt(),
            },
        };
        let fast = empirical_capacity(&product, &snr, 300_000, 13).unwrap();
        let fast_analytic = capacity_fast_fading(
            &snr,
            &TruncationWindow::unconstrained(16).unwrap(),
            &FadingModel::Rayleigh {
                sigma_h: 0.5f64.sqrt(),
            },
        )
        .unwrap()
        .nats;
        assert!(
            (fast_analytic - 1.7037295849718886).abs() < 1e-7,
            "anchor drifted"
        );
        let fast_dev = (fast.nats - fast_analytic).abs();
        assert!(
            fast_dev < 3.0 * fast.std_error,
            "empirical {} vs analytic {fast_analytic}: dev {fast_dev:.3e}, 3 SE {:.3e}",
            fast.nats,
            3.0 * fast.std_error
        );
    }

    #[test]
    fn empirical_capacity_floors_tiny_snr_and_validates_inputs() {
        let model = SampleModel::TruncatedRayleigh {
            window: TruncationWindow::unconstrained(16).unwrap(),
        };
        let tiny = SnrConfig::from_c_gamma(1e-300).unwrap();
        let est = empirical_capacity(&model, &tiny, 5_000, 1).unwrap();
        assert_eq!(est.nats, 0.0, "vanishing SNR must give exactly zero");
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.sample_count, 5_000);

        let snr = SnrConfig::from_c_gamma(1.0).unwrap();
        assert!(matches!(
            empirical_capacity(&model, &snr, 10, 1),
            Err(JrcError::InvalidConfig(_))
        ));
        assert!(matches!(
            empirical_capacity(&rayleigh_sigma1(), &snr, 5_000, 1),
            Err(JrcError::InvalidConfig(_))
        ));
    }

    #[test]
    fn standard_error_scales_as_inverse_sqrt_n() {
        let model = SampleModel::TruncatedRayleigh {
            window: TruncationWindow::double_sided(0.1, 3.0, 16).unwrap(),
        };
        let snr = SnrConfig::from_c_gamma(1.0).unwrap();
        let small = empirical_capacity(&model, &snr, 10_000, 5).unwrap();
        let large = empirical_capacity(&model, &snr, 1_000_000, 5).unwrap();
        let ratio = small.std_error / large.std_error;
        assert!(
            (8.0..=12.0).contains(&ratio),
            "SE ratio for n = 1e4 vs 1e6 should be 10 ± 20%, got {ratio}"
        );
    }

    #[test]
    fn harvest_is_deterministic_and_respects_constraint_windows() {
        let cfg = ArrayConfig {
            m: 16,
            d: 0.5,
            l: 32,
            theta_c: 0.18,
            theta_n: -0.30,
            f_c: 1.0e9,
        };

        let none = ConstraintSpec::new(ConstraintMode::None, 0.1, 3.0);
        let a = waveform_amplitude_harvest(&cfg, &none, 6, 77).unwrap();
        assert_eq!(a.len(), 6 * cfg.l);
        assert!(a.values.iter().all(|v| v.is_finite() && *v >= 0.0));
        assert_eq!(
            a.model,
            SampleModel::WaveformAmplitude { m: 16, l: 32 }
        );
        let b = waveform_amplitude_harvest(&cfg, &none, 6, 77).unwrap();
        assert_eq!(a, b, "harvest must be reproducible from its seed");

        let single = ConstraintSpec::new(ConstraintMode::SingleSide, 0.3, 3.0);
        let a0 = single.a0(cfg.m);
        let constrained = waveform_amplitude_harvest(&cfg, &single, 6, 77).unwrap();
        let outside = constrained.values.iter().filter(|&&v| v < a0).count();
        assert_eq!(
            outside, 0,
            "single-side harvest must keep every amplitude at or above A₀"
        );

        let mut starved = ConstraintSpec::new(ConstraintMode::DoubleSide, 1e-9, 0.01);
        starved.max_iterations = 200;
        match waveform_amplitude_harvest(&cfg, &starved, 2, 77) {
            Err(JrcError::IterationBudgetExceeded { budget: 200, .. }) => {}
            other => panic!("expected IterationBudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn harvest_agrees_with_statistical_route_at_m_100() {
        let cfg = ArrayConfig {
            m: 100,
            d: 0.5,
            l: 256,
            theta_c: 0.18,
            theta_n: -0.30,
            f_c: 1.0e9,
        };
        let none = ConstraintSpec::new(ConstraintMode::None, 0.1, 3.0);
        let physical = waveform_amplitude_harvest(&cfg, &none, 400, 21).unwrap();
        assert_eq!(physical.len(), 400 * 256);

        // Physical route vs Theorem 1's analytic pdf.
        let window = TruncationWindow::unconstrained(100).unwrap();
        let curve = truncated_rayleigh_curve(&window, 4001).unwrap();
        let report = goodness_of_fit(&physical, &curve).unwrap();
        assert!(
            report.ks_statistic < 0.01,
            "harvest vs Theorem 1 pdf at M = 100: KS = {}",
            report.ks_statistic
        );

        // Physical route vs statistical inverse-CDF route.
        let statistical = sample(
            &SampleModel::TruncatedRayleigh { window },
            physical.len(),
            22,
        )
        .unwrap();
        let d = ks_two_sample(&physical.values, &statistical.values).unwrap();
        assert!(
            d < 0.02,
            "physical vs statistical route two-sample KS = {d}"
        );
    }

    #[test]
    fn two_sample_ks_basics() {
        let a = sample(&rayleigh_sigma1(), 20_000, 1).unwrap();
        let b = sample(&rayleigh_sigma1(), 20_000, 2).unwrap();
        let same = ks_two_sample(&a.values, &b.values).unwrap();
        assert!(same < 0.02, "same model, different seeds: KS = {same}");

        let shifted: Vec<f64> = a.values.iter().map(|v| v + 10.0).collect();
        let far = ks_two_sample(&a.values, &shifted).unwrap();
        assert!(far > 0.99, "disjoint supports must give KS ≈ 1, got {far}");

        assert!(matches!(
            ks_two_sample(&[], &a.values),
            Err(JrcError::InvalidConfig(_))
        ));
    }

    #[test]
    fn sample_rejects_invalid_models() {
        assert!(matches!(
            sample(&rayleigh_sigma1(), 0, 1),
            Err(JrcError::InvalidConfig(_))
        ));
        assert!(matches!(
            sample(&SampleModel::Rayleigh { sigma_h: -1.0 }, 10, 1),
            Err(JrcError::InvalidConfig(_))
        ));
        assert!(matches!(
            sample(&SampleModel::WaveformAmplitude { m: 16, l: 64 }, 10, 1),
            Err(JrcError::InvalidConfig(_))
        ));
        // Product with AWGN fading has no random amplitude — mirrors the
        // analytic pdf's domain error.
        assert!(matches!(
            sample(
                &SampleModel::ProductChannel {
                    window: TruncationWindow::unconstrained(16).unwrap(),
                    fading: FadingModel::Awgn,
                },
                10,
                1
            ),
            Err(JrcError::Domain(_))
        ));
    }

    #[test]
    fn sample_model_serialization_round_trips() {
        let model = SampleModel::ProductChannel {
            window: TruncationWindow::double_sided(0.1, 1.0, 16).unwrap(),
            fading: FadingModel::Rician {
                sigma_h: 1.0,
                k_factor: 3.0,
            },
        };
        let json = serde_json::to_string(&model).unwrap();
        assert!(json.contains("\"kind\":\"product_channel\""));
        let back: SampleModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, model);

        let report = GofReport {
            ks_statistic: 0.0123,
            sample_count: 1_000_000,
            mean_abs_density_error: 4.5e-4,
        };
        let back: GofReport =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
