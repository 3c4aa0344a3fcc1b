//! Channel-capacity calculators for every regime: stable AWGN, ergodic
//! capacity under the unintentional amplitude modulation, slow-fading outage,
//! and fast-fading ergodic capacity.
//!
//! All capacities are in nats (× bandwidth B, default 1). The central closed
//! form is the truncated-modulation ergodic capacity
//!
//!   C = (B/α)·[ln(1+c_γÃ₁)e^{-Ã₁} − ln(1+c_γÃ₂)e^{-Ã₂}
//!              + e^{-Ã₁}·S(1/c_γ+Ã₁) − e^{-Ã₂}·S(1/c_γ+Ã₂)],
//!
//! where S(x) = eˣ·E₁(x) is the scaled exponential integral (the scaled form
//! avoids e^{1/c_γ} overflow at small SNR). Special windows recover the
//! paper's other expressions: (0, ∞) → the Rayleigh-CSI capacity
//! B·S(1/c_γ), and the single-side window (A₀, M) is approximated by
//! B·[ln(1−c_γ·ln p₀) + S(1/c_γ − ln p₀)].

use serde::{Deserialize, Serialize};

use crate::distributions::{product_snr_pdf, FadingModel, TruncationWindow};
use crate::error::{JrcError, Result};
use crate::quadrature::{integrate, QuadSpec};
use crate::specfun::{exp_e1_scaled, meijer_g_capacity_kernel};

/// Below this c_γ every capacity evaluates to 0: e^{1/c_γ}·E₁(1/c_γ) is
/// indeterminate at machine precision there while the true value → 0.
pub const SMALL_SNR_FLOOR: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Link-budget configuration; c_γ = P_t/(σ_N²·B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrConfig {
    /// Total transmit power (normalized watts).
    pub p_t: f64,
    /// Noise variance (normalized watts/Hz).
    pub sigma_n2: f64,
    /// Bandwidth in Hz; 1 makes capacities nats per channel use.
    pub bandwidth: f64,
}

impl SnrConfig {
    pub fn new(p_t: f64, sigma_n2: f64, bandwidth: f64) -> Result<Self> {
        let cfg = Self { p_t, sigma_n2, bandwidth };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Unit-noise, unit-bandwidth configuration with the given c_γ.
    pub fn from_c_gamma(c_gamma: f64) -> Result<Self> {
        Self::new(c_gamma, 1.0, 1.0)
    }

    /// Unit-noise, unit-bandwidth configuration with c_γ = 10^{dB/10}.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::from_c_gamma(10f64.powf(snr_db / 10.0))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_t", self.p_t),
            ("sigma_n2", self.sigma_n2),
            ("bandwidth", self.bandwidth),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(JrcError::InvalidConfig(format!(
                    "SnrConfig.{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// c_γ = P_t/(σ_N²·B).
    pub fn c_gamma(&self) -> f64 {
        self.p_t / (self.sigma_n2 * self.bandwidth)
    }
}

/// Which capacity analysis a result belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    StableAwgn,
    ErgodicUnintentional,
    SlowFadingOutage,
    FastFadingErgodic,
}

/// Provenance of a capacity value: every parameter that entered it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityParams {
    pub c_gamma: f64,
    pub bandwidth: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<TruncationWindow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fading: Option<FadingModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_out: Option<f64>,
}

impl CapacityParams {
    fn bare(snr: &SnrConfig) -> Self {
        Self {
            c_gamma: snr.c_gamma(),
            bandwidth: snr.bandwidth,
            m: None,
            p0: None,
            window: None,
            fading: None,
            p_out: None,
        }
    }
}

/// A capacity value with its regime and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    /// Capacity in nats (× bandwidth), ≥ 0.
    pub nats: f64,
    pub regime: Regime,
    pub params: CapacityParams,
}

/// Outage specification for the slow-fading regime. The outage SNR threshold
/// γ_min coincides with γ̃ = E[|h|²]·c_γ·(−ln(1−p_out)) — the value
/// substituted for c_γ in the ergodic closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageSpec {
    /// Accepted outage probability, in (0,1).
    pub p_out: f64,
}

impl OutageSpec {
    pub fn new(p_out: f64) -> Result<Self> {
        let spec = Self { p_out };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_out > 0.0 && self.p_out < 1.0 {
            Ok(())
        } else {
            Err(JrcError::InvalidConfig(format!(
                "p_out must lie in (0,1), got {}",
                self.p_out
            )))
        }
    }

    /// γ̃ = E[|h|²]·c_γ·(−ln(1−p_out)) > 0.
    pub fn tilde_gamma(&self, c_gamma: f64, fading: &FadingModel) -> f64 {
        -fading.mean_power() * c_gamma * (1.0 - self.p_out).ln_1p_negated()
    }
}

/// ln(1−p) as a method so the γ̃ formula reads like the definition; keeps
/// precision for small p via ln_1p.
trait Ln1pNegated {
    fn ln_1p_negated(self) -> f64;
}
impl Ln1pNegated for f64 {
    fn ln_1p_negated(self) -> f64 {
        // self is (1 − p_out); compute ln(1 − p_out) = ln_1p(−p_out).
        (self - 1.0).ln_1p()
    }
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Clamp float-cancellation dust; anything meaningfully negative is a
/// numerical failure.
fn finalize_nats(v: f64) -> Result<f64> {
    if !v.is_finite() {
        Err(JrcError::Domain(format!("capacity evaluated to {v}")))
    } else if v < 0.0 {
        if v > -1e-12 {
            Ok(0.0)
        } else {
            Err(JrcError::NonConvergence(format!(
                "capacity {v} is significantly negative — numerical misconvergence"
            )))
        }
    } else {
        Ok(v)
    }
}

/// Stable-channel capacity C_s = B·ln(1 − c_γ·ln p₀) — the achievable rate
/// when communication symbols ride the constraint threshold A₀ = √(−M·ln p₀)
/// (so the A₀²·c_γ/M route is the identical value).
pub fn capacity_stable(snr: &SnrConfig, m: usize, p0: f64) -> Result<CapacityResult> {
    snr.validate()?;
    if m < 1 {
        return Err(JrcError::InvalidConfig("m must be >= 1".into()));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(JrcError::InvalidConfig(format!(
            "p0 must lie in (0,1), got {p0}"
        )));
    }
    let c = snr.c_gamma();
    let nats = finalize_nats(snr.bandwidth * (-c * p0.ln()).ln_1p())?;
    Ok(CapacityResult {
        nats,
        regime: Regime::StableAwgn,
        params: CapacityParams {
            m: Some(m),
            p0: Some(p0),
            ..CapacityParams::bare(snr)
        },
    })
}

/// Shared core of the ergodic closed form, parameterized on the SNR-like
/// scale (c_γ, or γ̃ for the outage regime).
fn ergodic_closed_form(c: f64, bandwidth: f64, win: &TruncationWindow) -> Result<f64> {
    if c < SMALL_SNR_FLOOR {
        return Ok(0.0);
    }
    let inv_c = 1.0 / c;
    let at1 = win.a_tilde1();
    let lower = (c * at1).ln_1p() * (-at1).exp() + (-at1).exp() * exp_e1_scaled(inv_c + at1)?;
    let upper = if win.a2.is_finite() {
        let at2 = win.a_tilde2();
        (c * at2).ln_1p() * (-at2).exp() + (-at2).exp() * exp_e1_scaled(inv_c + at2)?
    } else {
        0.0
    };
    finalize_nats(bandwidth * (lower - upper) / win.alpha())
}

/// Ergodic capacity of the truncated unintentional modulation (the E₁ closed
/// form of the defining integral ∫ B·ln(1+a)·p_γ(a)·da).
pub fn capacity_ergodic_truncated(snr: &SnrConfig, win: &TruncationWindow) -> Result<CapacityResult> {
    snr.validate()?;
    win.validate()?;
    let nats = ergodic_closed_form(snr.c_gamma(), snr.bandwidth, win)?;
    Ok(CapacityResult {
        nats,
        regime: Regime::ErgodicUnintentional,
        params: CapacityParams {
            m: Some(win.m),
            window: Some(*win),
            ..CapacityParams::bare(snr)
        },
    })
}

/// Ergodic capacity of the Rayleigh fading channel with receiver CSI:
/// C_RCSI = −B·e^{1/c_γ}·Ei(−1/c_γ) = B·e^{1/c_γ}·E₁(1/c_γ) — the M → ∞
/// limit of the unconstrained modulation capacity.
pub fn capacity_rayleigh_csi(snr: &SnrConfig) -> Result<CapacityResult> {
    snr.validate()?;
    let c = snr.c_gamma();
    let nats = if c < SMALL_SNR_FLOOR {
        0.0
    } else {
        finalize_nats(snr.bandwidth * exp_e1_scaled(1.0 / c)?)?
    };
    Ok(CapacityResult {
        nats,
        regime: Regime::ErgodicUnintentional,
        params: CapacityParams::bare(snr),
    })
}

/// Large-M approximation of the single-side-window capacity:
/// C ≈ B·[ln(1 − c_γ·ln p₀) + S(1/c_γ − ln p₀)], S(x) = eˣE₁(x).
/// (The 1/p₀·e^{1/c_γ}·E₁ form in the derivation is this expression with the
/// e^{ln p₀} factor folded into the scaled E₁.)
pub fn capacity_single_side_approx(snr: &SnrConfig, m: usize, p0: f64) -> Result<CapacityResult> {
    snr.validate()?;
    if m < 1 {
        return Err(JrcError::InvalidConfig("m must be >= 1".into()));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(JrcError::InvalidConfig(format!(
            "p0 must lie in (0,1), got {p0}"
        )));
    }
    let c = snr.c_gamma();
    let nats = if c < SMALL_SNR_FLOOR {
        0.0
    } else {
        let stable = (-c * p0.ln()).ln_1p();
        let tail = exp_e1_scaled(1.0 / c - p0.ln())?;
        finalize_nats(snr.bandwidth * (stable + tail))?
    };
    Ok(CapacityResult {
        nats,
        regime: Regime::ErgodicUnintentional,
        params: CapacityParams {
            m: Some(m),
            p0: Some(p0),
            ..CapacityParams::bare(snr)
        },
    })
}

/// Slow-fading outage capacity and average outage rate: γ̃ replaces c_γ in
/// the ergodic closed form over the same window, and the rate discounts by
/// the outage probability — returns (capacity, rate).
pub fn outage_capacity(
    snr: &SnrConfig,
    win: &TruncationWindow,
    fading: &FadingModel,
    outage: &OutageSpec,
) -> Result<(CapacityResult, CapacityResult)> {
    snr.validate()?;
    win.validate()?;
    fading.validate()?;
    outage.validate()?;
    if matches!(fading, FadingModel::Awgn) {
        return Err(JrcError::InvalidConfig(
            "outage capacity requires a Rayleigh or Rician fading model".into(),
        ));
    }
    let tilde = outage.tilde_gamma(snr.c_gamma(), fading);
    let cap_nats = ergodic_closed_form(tilde, snr.bandwidth, win)?;
    let params = CapacityParams {
        m: Some(win.m),
        window: Some(*win),
        fading: Some(*fading),
        p_out: Some(outage.p_out),
        ..CapacityParams::bare(snr)
    };
    let capacity = CapacityResult {
        nats: cap_nats,
        regime: Regime::SlowFadingOutage,
        params: params.clone(),
    };
    let rate = CapacityResult {
        nats: (1.0 - outage.p_out) * cap_nats,
        regime: Regime::SlowFadingOutage,
        params,
    };
    Ok((capacity, rate))
}

/// Maximizes the average outage rate (1−p_out)·C(γ̃(p_out)) over
/// p_out ∈ [0.001, 0.999]: coarse grid then golden-section, tolerance 1e-4
/// in p_out. Returns the argmax and the rate there.
pub fn optimal_outage_probability(
    snr: &SnrConfig,
    win: &TruncationWindow,
    fading: &FadingModel,
) -> Result<(f64, CapacityResult)> {
    let rate_at = |p: f64| -> Result<f64> {
        Ok(outage_capacity(snr, win, fading, &OutageSpec { p_out: p })?.1.nats)
    };
    // Coarse scan to bracket the unimodal peak.
    const GRID: usize = 64;
    let (lo, hi) = (0.001f64, 0.999f64);
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let coarse: Vec<f64> = (0..GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64)
        .collect();
    for (i, &p) in coarse.iter().enumerate() {
        let v = rate_at(p)?;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = coarse[best_i.saturating_sub(1)];
    let mut b = coarse[(best_i + 1).min(GRID - 1)];
    // Golden-section refinement.
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = rate_at(x1)?;
    let mut f2 = rate_at(x2)?;
    while b - a > 1e-4 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = rate_at(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = rate_at(x1)?;
        }
    }
    let p_star = 0.5 * (a + b);
    let rate = outage_capacity(snr, win, fading, &OutageSpec { p_out: p_star })?.1;
    Ok((p_star, rate))
}

// ---------------------------------------------------------------------------
// Fast fading (quadrature + Meijer-G route)
// ---------------------------------------------------------------------------

/// Fast-fading ergodic capacity ∫₀^∞ B·ln(1+a)·p_γ(a)·da by adaptive
/// quadrature over the product-channel SNR density (any window × fading
/// dispatch case). The upper limit truncates where the density's own tail
/// bound drops below 1e-10 of the mass.
pub fn capacity_fast_fading(
    snr: &SnrConfig,
    win: &TruncationWindow,
    fading: &FadingModel,
) -> Result<CapacityResult> {
    snr.validate()?;
    win.validate()?;
    fading.validate()?;
    if matches!(fading, FadingModel::Awgn) {
        return Err(JrcError::InvalidConfig(
            "fast-fading capacity requires a Rayleigh or Rician fading model".into(),
        ));
    }
    let c = snr.c_gamma();
    let params = CapacityParams {
        m: Some(win.m),
        window: Some(*win),
        fading: Some(*fading),
        ..CapacityParams::bare(snr)
    };
    if c < SMALL_SNR_FLOOR {
        return Ok(CapacityResult {
            nats: 0.0,
            regime: Regime::FastFadingErgodic,
            params,
        });
    }
    let z_hi = crate::distributions::product_support_upper(win, fading, 11.0);
    let a_hi = c * z_hi * z_hi / win.m as f64;
    let spec = QuadSpec {
        rel_tol: 1e-8,
        abs_tol: 1e-300,
        max_subdivisions: 400,
    };
    let integrand = |a: f64| match product_snr_pdf(win, fading, c, a) {
        Ok(p) => a.ln_1p() * p,
        // Interior evaluation cannot hit the a = 0 singularity; any series
        // failure surfaces as a NaN that the quadrature rejects.
        Err(_) => f64::NAN,
    };
    let integral = integrate(integrand, 0.0, a_hi, &spec)?;
    let nats = finalize_nats(snr.bandwidth * integral.value)?;
    Ok(CapacityResult {
        nats,
        regime: Regime::FastFadingErgodic,
        params,
    })
}

/// Closed-form fast-fading capacity for the unconstrained-window Rayleigh
/// case: C̄ = (B/s)·G(1/s) with s = 2·c_γ·σ_H² and G the Meijer-G capacity
/// kernel.
pub fn capacity_fast_fading_meijer(snr: &SnrConfig, sigma_h: f64) -> Result<CapacityResult> {
    snr.validate()?;
    let fading = FadingModel::Rayleigh { sigma_h };
    fading.validate()?;
    let c = snr.c_gamma();
    let params = CapacityParams {
        fading: Some(fading),
        ..CapacityParams::bare(snr)
    };
    if c < SMALL_SNR_FLOOR {
        return Ok(CapacityResult {
            nats: 0.0,
            regime: Regime::FastFadingErgodic,
            params,
        });
    }
    let s = 2.0 * c * sigma_h * sigma_h;
    let nats = finalize_nats(snr.bandwidth / s * meijer_g_capacity_kernel(1.0 / s)?)?;
    Ok(CapacityResult {
        nats,
        regime: Regime::FastFadingErgodic,
        params,
    })
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// AWGN-regime capacity method for sweeps and figure reproduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum AwgnMethod {
    /// Stable channel C_s.
    Stable,
    /// Double-side window (A₀/Δ, A₀·Δ).
    DoubleDelta { delta_db: f64 },
    /// Single-side window (A₀, M).
    SingleSide,
    /// No constraint: full physical amplitude range (0, M).
    NoConstraint,
    /// Rayleigh-CSI reference C_RCSI.
    RayleighCsi,
}

impl AwgnMethod {
    /// Short label for CSV columns.
    pub fn label(&self) -> String {
        match *self {
            AwgnMethod::Stable => "stable".into(),
            AwgnMethod::DoubleDelta { delta_db } => {
                if delta_db == delta_db.trunc() {
                    format!("delta_{}db", delta_db as i64)
                } else {
                    format!("delta_{delta_db}db")
                }
            }
            AwgnMethod::SingleSide => "single_side".into(),
            AwgnMethod::NoConstraint => "no_constraint".into(),
            AwgnMethod::RayleighCsi => "rayleigh_csi".into(),
        }
    }
}

/// Evaluates one AWGN-regime method at one SNR point.
pub fn awgn_capacity(
    snr: &SnrConfig,
    m: usize,
    p0: f64,
    method: AwgnMethod,
) -> Result<CapacityResult> {
    match method {
        AwgnMethod::Stable => capacity_stable(snr, m, p0),
        AwgnMethod::DoubleDelta { delta_db } => {
            let win = TruncationWindow::double_sided(p0, delta_db, m)?;
            capacity_ergodic_truncated(snr, &win)
        }
        AwgnMethod::SingleSide => {
            let win = TruncationWindow::single_side_capped(p0, m)?;
            capacity_ergodic_truncated(snr, &win)
        }
        AwgnMethod::NoConstraint => {
            let win = TruncationWindow::full_range(m)?;
            capacity_ergodic_truncated(snr, &win)
        }
        AwgnMethod::RayleighCsi => capacity_rayleigh_csi(snr),
    }
}

/// Evaluates every method at every SNR point (outer index: SNR, inner:
/// method, deterministic ordering). Element failures propagate with the grid
/// coordinates attached.
pub fn capacity_sweep(
    snrs: &[SnrConfig],
    m: usize,
    p0: f64,
    methods: &[AwgnMethod],
) -> Result<Vec<Vec<CapacityResult>>> {
    if snrs.is_empty() {
        return Err(JrcError::InvalidConfig("capacity sweep needs a nonempty SNR grid".into()));
    }
    if methods.is_empty() {
        return Err(JrcError::InvalidConfig("capacity sweep needs at least one method".into()));
    }
    snrs.iter()
        .map(|snr| {
            methods
                .iter()
                .map(|&method| {
                    awgn_capacity(snr, m, p0, method).map_err(|e| {
                        JrcError::Domain(format!(
                            "sweep point c_gamma={:.6e}, method {}: {e}",
                            snr.c_gamma(),
                            method.label()
                        ))
                    })
                })
                .collect()
        })
        .collect()
}
