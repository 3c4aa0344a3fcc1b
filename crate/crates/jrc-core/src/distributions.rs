//! Analytic probability densities for the unintentional amplitude modulation
//! and its products with channel fading.
//!
//! Coordinate conventions, used consistently everywhere:
//! * the sub-pulse amplitude A follows the Rayleigh law p(ρ) = (2ρ/M)e^{-ρ²/M}
//!   (per-component variance σ²_{X₁} = M/2), truncated to the constraint
//!   window [a₁, a₂] with ã_i = a_i²/M and normalizer α = e^{-ã₁} − e^{-ã₂};
//! * the fading amplitude |h| is Rayleigh (per-component std σ_H) or Rician
//!   with line-of-sight μ = σ_H·√(2K);
//! * the product Z = A·|h| has density (window × fading dispatch)
//!   p_Z(z) = z·e^{-K}/(α·M·σ_H²) · Σ_i (z·μ/2)^{2i} / ((i!)²·(M·σ_H⁴)^i)
//!            · [Γ(-i, ã₁; b_z) − Γ(-i, ã₂; b_z)],   b_z = z²/(2·M·σ_H²),
//!   which collapses to the single i = 0 term for Rayleigh fading (μ = 0),
//!   drops the ã₂ terms for a single-side window, and degenerates to the
//!   modified-Bessel forms p_Z(z) = (2z/(M·σ_H²))·K₀(z·√(2/M)/σ_H) (Rayleigh)
//!   and the Σ r^i·K_i(x)/(i!)² series (Rician) when no window is applied;
//! * the SNR is γ = c_γ·Z²/M, so SNR densities are the amplitude densities
//!   pushed through z = √(a·M/c_γ) with Jacobian ½·√(M/(a·c_γ)).

use serde::{Deserialize, Serialize};

use crate::error::{JrcError, Result};
use crate::specfun::{bessel_k, exp_integral_e1, gen_incomplete_gamma};
use crate::waveform::PhaseCodingMatrix;

/// Series cap for the Rician product expansions; the expansions converge in
/// ~30 terms on the paper's parameter ranges, 200 leaves margin for larger
/// K or z.
const RICIAN_SERIES_CAP: usize = 200;
/// Relative stop for the (positive-term) Rician series.
const RICIAN_SERIES_REL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Channel fading model between the radar transmitter and the communication
/// receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingModel {
    /// No fading: |h| = 1 deterministically.
    Awgn,
    /// Rayleigh fading with per-component standard deviation σ_H.
    Rayleigh { sigma_h: f64 },
    /// Rician fading with per-component σ_H and shape factor K = μ²/(2σ_H²).
    Rician { sigma_h: f64, k_factor: f64 },
}

impl FadingModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::Awgn => Ok(()),
            FadingModel::Rayleigh { sigma_h } => {
                if sigma_h > 0.0 && sigma_h.is_finite() {
                    Ok(())
                } else {
                    Err(JrcError::InvalidConfig(format!(
                        "Rayleigh sigma_h must be positive and finite, got {sigma_h}"
                    )))
                }
            }
            FadingModel::Rician { sigma_h, k_factor } => {
                if !(sigma_h > 0.0 && sigma_h.is_finite()) {
                    Err(JrcError::InvalidConfig(format!(
                        "Rician sigma_h must be positive and finite, got {sigma_h}"
                    )))
                } else if !(k_factor >= 0.0 && k_factor.is_finite()) {
                    Err(JrcError::InvalidConfig(format!(
                        "Rician k_factor must be nonnegative and finite, got {k_factor}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Line-of-sight amplitude μ = σ_H·√(2K); 0 for AWGN/Rayleigh.
    pub fn mu(&self) -> f64 {
        match *self {
            FadingModel::Rician { sigma_h, k_factor } => sigma_h * (2.0 * k_factor).sqrt(),
            _ => 0.0,
        }
    }

    /// Mean channel power E[|h|²]: 1 (AWGN), 2σ_H² (Rayleigh),
    /// μ² + 2σ_H² (Rician).
    pub fn mean_power(&self) -> f64 {
        match *self {
            FadingModel::Awgn => 1.0,
            FadingModel::Rayleigh { sigma_h } => 2.0 * sigma_h * sigma_h,
            FadingModel::Rician { sigma_h, k_factor } => {
                2.0 * sigma_h * sigma_h * (1.0 + k_factor)
            }
        }
    }
}

/// serde helper: an infinite f64 crosses JSON/TOML as `null`/absent.
mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Amplitude truncation window [a₁, a₂] at array size M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationWindow {
    /// Lower amplitude limit, ≥ 0.
    pub a1: f64,
    /// Upper amplitude limit; infinite means unbounded above
    /// (serialized as null).
    #[serde(with = "infinite_as_null")]
    pub a2: f64,
    /// Array size M (sets the amplitude scale ã = a²/M).
    pub m: usize,
}

impl TruncationWindow {
    pub fn new(a1: f64, a2: f64, m: usize) -> Result<Self> {
        let win = Self { a1, a2, m };
        win.validate()?;
        Ok(win)
    }

    /// Double-side constraint window [A₀/Δ, A₀·Δ] with Δ = 10^{delta_db/20}.
    pub fn double_sided(p0: f64, delta_db: f64, m: usize) -> Result<Self> {
        let a0 = threshold_amplitude(p0, m)?;
        let delta = 10f64.powf(delta_db / 20.0);
        Self::new(a0 / delta, a0 * delta, m)
    }

    /// Single-side window [A₀, ∞) — the distribution-side convention.
    pub fn single_side(p0: f64, m: usize) -> Result<Self> {
        Self::new(threshold_amplitude(p0, m)?, f64::INFINITY, m)
    }

    /// Single-side window [A₀, M] — the capacity-side convention, which uses
    /// the physical maximum amplitude M as the upper limit.
    pub fn single_side_capped(p0: f64, m: usize) -> Result<Self> {
        Self::new(threshold_amplitude(p0, m)?, m as f64, m)
    }

    /// No truncation: [0, ∞).
    pub fn unconstrained(m: usize) -> Result<Self> {
        Self::new(0.0, f64::INFINITY, m)
    }

    /// Physical amplitude range [0, M] — the no-constraint capacity window.
    pub fn full_range(m: usize) -> Result<Self> {
        Self::new(0.0, m as f64, m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(JrcError::InvalidConfig("window m must be >= 1".into()));
        }
        if !(self.a1 >= 0.0) || !self.a1.is_finite() {
            return Err(JrcError::InvalidConfig(format!(
                "window a1 must be finite and >= 0, got {}",
                self.a1
            )));
        }
        if !(self.a2 > self.a1) {
            return Err(JrcError::InvalidConfig(format!(
                "window requires a1 < a2, got [{}, {}]",
                self.a1, self.a2
            )));
        }
        Ok(())
    }

    /// ã₁ = a₁²/M.
    pub fn a_tilde1(&self) -> f64 {
        self.a1 * self.a1 / self.m as f64
    }

    /// ã₂ = a₂²/M (infinite when unbounded).
    pub fn a_tilde2(&self) -> f64 {
        if self.a2.is_finite() {
            self.a2 * self.a2 / self.m as f64
        } else {
            f64::INFINITY
        }
    }

    /// Normalizer α = e^{-ã₁} − e^{-ã₂}.
    pub fn alpha(&self) -> f64 {
        let upper = if self.a2.is_finite() {
            (-self.a_tilde2()).exp()
        } else {
            0.0
        };
        (-self.a_tilde1()).exp() - upper
    }

    /// True when the window is [0, ∞) — no truncation at all.
    pub fn is_no_window(&self) -> bool {
        self.a1 == 0.0 && self.a2.is_infinite()
    }
}

/// A₀ = √(−M·ln p₀).
pub fn threshold_amplitude(p0: f64, m: usize) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(JrcError::InvalidConfig(format!(
            "p0 must lie in (0,1), got {p0}"
        )));
    }
    Ok((-(m as f64) * p0.ln()).sqrt())
}

/// A sampled density curve with its trapezoid mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfCurve {
    /// Strictly increasing abscissae.
    pub grid: Vec<f64>,
    /// Nonnegative density values, same length as `grid`.
    pub density: Vec<f64>,
    /// Trapezoid integral of `density` over `grid`.
    pub total_mass: f64,
}

impl PdfCurve {
    /// Builds a curve from parallel grid/density vectors, clamping
    /// float-cancellation dust (> −1e-12) to zero and rejecting anything
    /// more negative.
    pub fn new(grid: Vec<f64>, mut density: Vec<f64>) -> Result<Self> {
        if grid.len() != density.len() || grid.len() < 2 {
            return Err(JrcError::InvalidConfig(
                "curve needs equal-length grid/density with at least 2 points".into(),
            ));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(JrcError::InvalidConfig("curve grid must be strictly increasing".into()));
        }
        for d in &mut density {
            if !d.is_finite() {
                return Err(JrcError::Domain("curve density must be finite".into()));
            }
            if *d < 0.0 {
                if *d > -1e-12 {
                    *d = 0.0;
                } else {
                    return Err(JrcError::NonConvergence(format!(
                        "curve density {d} is significantly negative — series misconvergence"
                    )));
                }
            }
        }
        let total_mass = grid
            .windows(2)
            .zip(density.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum();
        Ok(Self { grid, density, total_mass })
    }

    /// Samples `f` on `points` equispaced abscissae over [lo, hi].
    pub fn sample(
        lo: f64,
        hi: f64,
        points: usize,
        f: impl FnMut(f64) -> Result<f64>,
    ) -> Result<Self> {
        Self::sample_graded(lo, hi, points, 1.0, f)
    }

    /// Samples `f` on a power-graded grid x_i = lo + (hi−lo)·t_i^power with
    /// t uniform on [0, 1]. Grading concentrates points toward `lo`, which
    /// keeps the trapezoid mass accurate for densities with curvature
    /// singularities at the origin and long exponential tails.
    pub fn sample_graded(
        lo: f64,
        hi: f64,
        points: usize,
        power: f64,
        mut f: impl FnMut(f64) -> Result<f64>,
    ) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(JrcError::InvalidConfig(format!(
                "curve range must be finite with lo < hi, got [{lo}, {hi}]"
            )));
        }
        if points < 2 {
            return Err(JrcError::InvalidConfig("curve needs at least 2 points".into()));
        }
        if !(power >= 1.0) || !power.is_finite() {
            return Err(JrcError::InvalidConfig(format!(
                "curve grading power must be >= 1, got {power}"
            )));
        }
        let grid: Vec<f64> = (0..points)
            .map(|i| lo + (hi - lo) * (i as f64 / (points - 1) as f64).powf(power))
            .collect();
        let density = grid.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
        Self::new(grid, density)
    }
}

// ---------------------------------------------------------------------------
// Modulation-only densities
// ---------------------------------------------------------------------------

/// Rayleigh amplitude density of the unintentional modulation:
/// p(ρ) = (2ρ/M)·e^{-ρ²/M} for ρ ≥ 0.
pub fn rayleigh_amplitude_pdf(m: usize, rho: f64) -> f64 {
    debug_assert!(m >= 1, "array size must be positive");
    if rho <= 0.0 {
        return 0.0;
    }
    let mf = m as f64;
    (2.0 * rho / mf) * (-rho * rho / mf).exp()
}

/// Double-truncated Rayleigh density:
/// p(ρ) = (2ρ·e^{-ρ²/M}) / (α·M) on [a₁, a₂], 0 outside.
pub fn truncated_rayleigh_pdf(win: &TruncationWindow, rho: f64) -> f64 {
    if rho < win.a1 || rho > win.a2 || rho <= 0.0 {
        return 0.0;
    }
    let mf = win.m as f64;
    (2.0 * rho / mf) * (-rho * rho / mf).exp() / win.alpha()
}

/// SNR density of the truncated modulation alone (AWGN channel):
/// p(a) = e^{-a/c_γ} / (α·c_γ) on [c_γ·ã₁, c_γ·ã₂], 0 outside.
pub fn snr_pdf_truncated(win: &TruncationWindow, c_gamma: f64, a: f64) -> f64 {
    assert!(
        c_gamma > 0.0 && c_gamma.is_finite(),
        "snr_pdf_truncated requires c_gamma > 0"
    );
    let lo = c_gamma * win.a_tilde1();
    let hi = if win.a2.is_finite() {
        c_gamma * win.a_tilde2()
    } else {
        f64::INFINITY
    };
    if a < lo || a > hi {
        return 0.0;
    }
    (-a / c_gamma).exp() / (win.alpha() * c_gamma)
}

// ---------------------------------------------------------------------------
// Product densities (modulation × fading)
// ---------------------------------------------------------------------------

pub(crate) fn fading_params(fading: &FadingModel) -> Result<(f64, f64)> {
    fading.validate()?;
    match *fading {
        FadingModel::Awgn => Err(JrcError::Domain(
            "product density requires a Rayleigh or Rician fading model".into(),
        )),
        FadingModel::Rayleigh { sigma_h } => Ok((sigma_h, 0.0)),
        FadingModel::Rician { sigma_h, .. } => Ok((sigma_h, fading.mu())),
    }
}

/// Density of Z = A·|h| — the product of the (truncated) modulation amplitude
/// and the fading amplitude. Dispatches over window shape × fading kind; see
/// the module docs for the unified series.
pub fn product_pdf(win: &TruncationWindow, fading: &FadingModel, x: f64) -> Result<f64> {
    product_pdf_capped(win, fading, x, RICIAN_SERIES_CAP)
}

/// `product_pdf` with an explicit Rician series cap (exposed for the
/// convergence-budget tests; the public wrapper uses 200).
pub(crate) fn product_pdf_capped(
    win: &TruncationWindow,
    fading: &FadingModel,
    x: f64,
    cap: usize,
) -> Result<f64> {
    win.validate()?;
    let (sigma_h, mu) = fading_params(fading)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let mf = win.m as f64;
    let sh2 = sigma_h * sigma_h;
    let kk = mu * mu / (2.0 * sh2); // Rician K factor (0 for Rayleigh)

    let value = if win.is_no_window() {
        // Bessel forms.
        let x_arg = x * (2.0 / mf).sqrt() / sigma_h;
        if x_arg < 1e-10 {
            // Sub-resolution: the density behaves like x·|ln x| here and the
            // mass below this point is ≪ 1e-19.
            return Ok(0.0);
        }
        if mu == 0.0 {
            (2.0 * x / (mf * sh2)) * bessel_k(0, x_arg)?
        } else {
            // Σ_i r^i·K_i(x_arg)/(i!)² via the balanced recurrence
            // v_{i+1} = r/(i+1)²·(w_i + (2i/x)·v_i), w_{i+1} = r/(i+1)²·v_i
            // with v_i = r^i·K_i/(i!)², w_i = r^i·K_{i-1}/(i!)² — the
            // factorially-shrinking coefficient is carried inside the
            // recurrence so the factorially-growing K_i never overflows.
            let r = mu * mu * x / (2.0 * (2.0 * mf).sqrt() * sigma_h * sh2);
            let mut v = bessel_k(0, x_arg)?;
            let mut w = bessel_k(1, x_arg)?;
            let mut sum = v;
            let mut converged = false;
            for i in 0..cap {
                let f = r / ((i + 1) * (i + 1)) as f64;
                let nv = f * (w + (2.0 * i as f64 / x_arg) * v);
                w = f * v;
                v = nv;
                sum += v;
                if v.abs() < RICIAN_SERIES_REL * sum {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(JrcError::NonConvergence(format!(
                    "Rician product Bessel series did not converge in {cap} terms at z={x}"
                )));
            }
            (2.0 * x * (-kk).exp() / (mf * sh2)) * sum
        }
    } else {
        // Windowed: generalized-incomplete-gamma series (one term for
        // Rayleigh fading).
        let bz = x * x / (2.0 * mf * sh2);
        let at1 = win.a_tilde1();
        let at2 = win.a_tilde2();
        let mut coeff = 1.0; // (x·μ/2)^{2i} / ((i!)²·(M·σ_H⁴)^i)
        let mut sum = 0.0;
        let mut converged = false;
        for i in 0..cap {
            let g1 = gen_incomplete_gamma(-(i as i64), at1, bz)?;
            let g2 = if at2.is_finite() {
                gen_incomplete_gamma(-(i as i64), at2, bz)?
            } else {
                0.0
            };
            let term = coeff * (g1 - g2);
            sum += term;
            if mu == 0.0 || term.abs() < RICIAN_SERIES_REL * sum.abs() {
                converged = true;
                break;
            }
            coeff *= x * x * mu * mu / (4.0 * ((i + 1) * (i + 1)) as f64 * mf * sh2 * sh2);
        }
        if !converged {
            return Err(JrcError::NonConvergence(format!(
                "Rician product gamma series did not converge in {cap} terms at z={x}"
            )));
        }
        x * (-kk).exp() * sum / (win.alpha() * mf * sh2)
    };

    if value < 0.0 {
        if value > -1e-12 {
            Ok(0.0)
        } else {
            Err(JrcError::NonConvergence(format!(
                "product density {value} at z={x} is significantly negative — \
                 series misconvergence"
            )))
        }
    } else if value.is_finite() {
        Ok(value)
    } else {
        Err(JrcError::Domain(format!(
            "product density is not finite at z={x}"
        )))
    }
}

/// SNR density of the product channel: γ = c_γ·Z²/M, so
/// p_Γ(a) = p_Z(√(a·M/c_γ)) · ½·√(M/(a·c_γ)).
///
/// The density is smooth in a down to a = 0 when a₁ > 0, where it takes the
/// finite limit e^{-K}·[E₁(ã₁) − E₁(ã₂)] / (2·c_γ·α·σ_H²). When a₁ = 0 it
/// diverges logarithmically at a = 0 (an integrable singularity), and
/// evaluation exactly at 0 is a domain error.
pub fn product_snr_pdf(
    win: &TruncationWindow,
    fading: &FadingModel,
    c_gamma: f64,
    a: f64,
) -> Result<f64> {
    if !(c_gamma > 0.0) || !c_gamma.is_finite() {
        return Err(JrcError::InvalidConfig(format!(
            "c_gamma must be positive and finite, got {c_gamma}"
        )));
    }
    if a < 0.0 {
        return Ok(0.0);
    }
    if a == 0.0 {
        win.validate()?;
        if win.a1 == 0.0 {
            return Err(JrcError::Domain(
                "the SNR density of an a1 = 0 window diverges logarithmically at a = 0"
                    .into(),
            ));
        }
        let (sigma_h, mu) = fading_params(fading)?;
        let sh2 = sigma_h * sigma_h;
        let kk = mu * mu / (2.0 * sh2);
        let e1_upper = if win.a2.is_finite() {
            exp_integral_e1(win.a_tilde2())?
        } else {
            0.0
        };
        let e1_gap = exp_integral_e1(win.a_tilde1())? - e1_upper;
        return Ok((-kk).exp() * e1_gap / (2.0 * c_gamma * win.alpha() * sh2));
    }
    let mf = win.m as f64;
    let z = (a * mf / c_gamma).sqrt();
    let jacobian = 0.5 * (mf / (a * c_gamma)).sqrt();
    Ok(product_pdf(win, fading, z)? * jacobian)
}

// ---------------------------------------------------------------------------
// Curve builders
// ---------------------------------------------------------------------------

/// Upper amplitude limit capturing all but ≤ 10^{-neg_log10_tail} of the
/// truncated-Rayleigh mass: the tail beyond ρ is e^{-ρ²/M}/α.
fn rayleigh_support_upper(win: &TruncationWindow, neg_log10_tail: f64) -> f64 {
    if win.a2.is_finite() {
        win.a2
    } else {
        let mf = win.m as f64;
        let ln_tail = neg_log10_tail * std::f64::consts::LN_10;
        (mf * (win.a_tilde1() + (ln_tail - win.alpha().ln()).max(1.0))).sqrt()
    }
}

/// Upper fading-amplitude limit capturing all but ≤ 10^{-neg_log10_tail} of
/// |h|'s mass.
fn fading_support_upper(fading: &FadingModel, neg_log10_tail: f64) -> f64 {
    let ln_tail = neg_log10_tail * std::f64::consts::LN_10;
    match *fading {
        FadingModel::Awgn => 1.0,
        FadingModel::Rayleigh { sigma_h } => sigma_h * (2.0 * ln_tail).sqrt(),
        FadingModel::Rician { sigma_h, .. } => fading.mu() + sigma_h * (2.0 * ln_tail).sqrt(),
    }
}

/// Upper limit of the product Z = A·|h| omitting at most 2·10^{-neg_log10_tail}
/// of its mass (union bound over the two factors' tails).
pub fn product_support_upper(
    win: &TruncationWindow,
    fading: &FadingModel,
    neg_log10_tail: f64,
) -> f64 {
    rayleigh_support_upper(win, neg_log10_tail) * fading_support_upper(fading, neg_log10_tail)
}

/// Curve of the truncated Rayleigh amplitude density over its support.
pub fn truncated_rayleigh_curve(win: &TruncationWindow, points: usize) -> Result<PdfCurve> {
    win.validate()?;
    let lo = win.a1;
    let hi = rayleigh_support_upper(win, 9.0);
    PdfCurve::sample(lo, hi, points, |rho| Ok(truncated_rayleigh_pdf(win, rho)))
}

/// Curve of the truncated-modulation SNR density over its support.
pub fn snr_pdf_truncated_curve(
    win: &TruncationWindow,
    c_gamma: f64,
    points: usize,
) -> Result<PdfCurve> {
    win.validate()?;
    if !(c_gamma > 0.0) || !c_gamma.is_finite() {
        return Err(JrcError::InvalidConfig(format!(
            "c_gamma must be positive and finite, got {c_gamma}"
        )));
    }
    let lo = c_gamma * win.a_tilde1();
    let hi = if win.a2.is_finite() {
        c_gamma * win.a_tilde2()
    } else {
        // Exponential tail: e^{-a/c}/α ≤ 1e-11 of mass beyond.
        c_gamma * (win.a_tilde1() + (1e11 * win.alpha().recip()).ln().max(1.0))
    };
    PdfCurve::sample(lo, hi, points, |a| Ok(snr_pdf_truncated(win, c_gamma, a)))
}

/// Curve of the product density Z = A·|h| on a quadratically graded grid
/// (the density has a z·ln z curvature singularity at the origin). The upper
/// limit is the product of the two factors' 1e-11-tail limits, so the
/// omitted mass is below 2e-11.
pub fn product_pdf_curve(
    win: &TruncationWindow,
    fading: &FadingModel,
    points: usize,
) -> Result<PdfCurve> {
    win.validate()?;
    let hi = product_support_upper(win, fading, 9.0);
    PdfCurve::sample_graded(0.0, hi, points, 2.0, |z| product_pdf(win, fading, z))
}

/// Curve of the product SNR density on the quartic grid that is the image of
/// the quadratically graded amplitude grid under a = c_γ·z²/M. For an
/// a₁ = 0 window the grid starts just above the logarithmic singularity at
/// 0 (the omitted sliver carries < 1e-9 of the mass). Reaching the 1e-6
/// trapezoid-mass target on these long-tailed curves takes ~16000 points.
pub fn product_snr_pdf_curve(
    win: &TruncationWindow,
    fading: &FadingModel,
    c_gamma: f64,
    points: usize,
) -> Result<PdfCurve> {
    win.validate()?;
    if !(c_gamma > 0.0) || !c_gamma.is_finite() {
        return Err(JrcError::InvalidConfig(format!(
            "c_gamma must be positive and finite, got {c_gamma}"
        )));
    }
    let z_hi = product_support_upper(win, fading, 9.0);
    let hi = c_gamma * z_hi * z_hi / win.m as f64;
    let lo = if win.a1 == 0.0 { hi * 1e-14 } else { 0.0 };
    PdfCurve::sample_graded(lo, hi, points, 4.0, |a| {
        product_snr_pdf(win, fading, c_gamma, a)
    })
}

// ---------------------------------------------------------------------------
// Phase density (Fourier expansion)
// ---------------------------------------------------------------------------

/// Truncated Fourier expansion of a phase-coding matrix's empirical phase
/// density:
/// f(φ) = 1/2π + (1/(π·L·M))·Σ_{n=1}^{n_max} [C_n·cos(nφ) + S_n·sin(nφ)]
/// with C_n = Σ cos(n·φ_{l,m}), S_n = Σ sin(n·φ_{l,m}).
///
/// A truncated Fourier series is a signed approximation; it is not clamped.
#[derive(Debug, Clone)]
pub struct PhasePdf {
    cos_coeff: Vec<f64>,
    sin_coeff: Vec<f64>,
    count: f64,
}

impl PhasePdf {
    pub fn new(matrix: &PhaseCodingMatrix, n_max: usize) -> Self {
        let mut cos_coeff = vec![0.0; n_max];
        let mut sin_coeff = vec![0.0; n_max];
        for &phi in &matrix.phases {
            for n in 1..=n_max {
                let (s, c) = (n as f64 * phi).sin_cos();
                cos_coeff[n - 1] += c;
                sin_coeff[n - 1] += s;
            }
        }
        Self {
            cos_coeff,
            sin_coeff,
            count: matrix.phases.len() as f64,
        }
    }

    pub fn eval(&self, phi: f64) -> f64 {
        let mut f = 0.5 / std::f64::consts::PI;
        let scale = 1.0 / (std::f64::consts::PI * self.count);
        for n in 1..=self.cos_coeff.len() {
            let (s, c) = (n as f64 * phi).sin_cos();
            f += scale * (self.cos_coeff[n - 1] * c + self.sin_coeff[n - 1] * s);
        }
        f
    }
}

/// One-shot evaluation of the phase-density Fourier expansion.
pub fn phase_pdf(matrix: &PhaseCodingMatrix, n_max: usize, phi: f64) -> f64 {
    PhasePdf::new(matrix, n_max).eval(phi)
}
