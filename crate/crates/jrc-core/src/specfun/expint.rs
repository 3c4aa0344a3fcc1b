//! Exponential integrals E₁, Ei, and Eₙ.
//!
//! * `E₁(x) = ∫ₓ^∞ e^{-t}/t dt` — ascending series for `x ≤ 1`, modified
//!   Lentz continued fraction for `x > 1`.
//! * `Ei(x) = -PV ∫_{-x}^∞ e^{-t}/t dt` — ascending series for `x < 40`,
//!   asymptotic series truncated at its smallest term beyond.
//! * `Eₙ(x) = ∫₁^∞ t^{-n} e^{-xt} dt` — the same continued fraction for
//!   `x > 1` (any order), the stable upward recurrence
//!   `E_{k+1}(x) = (e^{-x} - x·E_k(x))/k` from E₁ for `x ≤ 1`.
//!
//! A scaled variant `eˣ·E₁(x)` is exposed because the capacity closed forms
//! multiply `E₁(1/c_γ + ã)` by `e^{1/c_γ}`-sized factors that individually
//! overflow at small SNR.

use crate::error::{JrcError, Result};

/// Euler–Mascheroni constant γ.
pub(crate) const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

const FPMIN: f64 = 1e-300;
const SERIES_EPS: f64 = 1e-17;
const CF_EPS: f64 = 1e-16;
const CF_MAX_ITER: usize = 500;

fn domain_positive(x: f64, name: &str) -> Result<()> {
    if !(x > 0.0) {
        return Err(JrcError::Domain(format!(
            "{name} requires x > 0, got {x}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// E₁
// ---------------------------------------------------------------------------

/// Ascending series for E₁, valid and well-conditioned for 0 < x ≤ 1:
/// E₁(x) = -γ - ln x + Σ_{k≥1} (-1)^{k+1} xᵏ/(k·k!).
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0; // xᵏ/k!
    let mut sign = 1.0;
    for k in 1..CF_MAX_ITER {
        pow *= x / k as f64;
        let term = sign * pow / k as f64;
        sum += term;
        sign = -sign;
        if term.abs() < SERIES_EPS * sum.abs().max(1.0) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// Modified Lentz evaluation of the continued fraction for eˣ·Eₙ(x),
/// convergent for x > 1 at any order n ≥ 1:
/// eˣ·Eₙ(x) = 1/(x+n- 1·n/(x+n+2- 2(n+1)/(x+n+4- …))).
fn en_cf_scaled(n: u32, x: f64) -> Result<f64> {
    let nf = n as f64;
    let mut b = x + nf;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=CF_MAX_ITER {
        let a = -(i as f64) * (nf - 1.0 + i as f64);
        b += 2.0;
        d = a * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        d = 1.0 / d;
        c = b + a / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= CF_EPS {
            return Ok(h);
        }
    }
    Err(JrcError::NonConvergence(format!(
        "continued fraction for E_{n}({x}) did not converge in {CF_MAX_ITER} iterations"
    )))
}

/// Exponential integral E₁(x) = ∫ₓ^∞ e^{-t}/t dt for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    domain_positive(x, "exp_integral_e1")?;
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(en_cf_scaled(1, x)? * (-x).exp())
    }
}

/// Scaled exponential integral eˣ·E₁(x) for x > 0.
///
/// Stays O(1/x) however large x grows, where E₁ itself underflows.
pub fn exp_e1_scaled(x: f64) -> Result<f64> {
    domain_positive(x, "exp_e1_scaled")?;
    if x <= 1.0 {
        Ok(e1_series(x) * x.exp())
    } else {
        en_cf_scaled(1, x)
    }
}

// ---------------------------------------------------------------------------
// Ei
// ---------------------------------------------------------------------------

/// Exponential integral Ei(x) (Cauchy principal value) for x > 0.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    domain_positive(x, "exp_integral_ei")?;
    if x < 40.0 {
        // Ascending series: Ei(x) = γ + ln x + Σ_{k≥1} xᵏ/(k·k!).
        // All terms positive; the largest is ~e^x/x^{3/2}, well inside f64
        // range for x < 40.
        let mut sum = 0.0;
        let mut pow = 1.0;
        for k in 1..CF_MAX_ITER {
            pow *= x / k as f64;
            let term = pow / k as f64;
            sum += term;
            if term < SERIES_EPS * sum {
                break;
            }
        }
        Ok(EULER_GAMMA + x.ln() + sum)
    } else {
        // Asymptotic series Ei(x) ~ (e^x/x)·Σ_k k!/xᵏ, truncated at the
        // smallest term; at x ≥ 40 that term is below 1e-16 relative.
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..CF_MAX_ITER {
            let next = term * k as f64 / x;
            if next >= term {
                break; // divergent tail reached
            }
            term = next;
            sum += term;
            if term < SERIES_EPS * sum {
                break;
            }
        }
        Ok(x.exp() / x * sum)
    }
}

// ---------------------------------------------------------------------------
// Eₙ
// ---------------------------------------------------------------------------

/// Generalized exponential integral Eₙ(x) = ∫₁^∞ t^{-n} e^{-xt} dt for
/// x > 0, n ≥ 0.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    domain_positive(x, "exp_integral_en")?;
    if n == 0 {
        return Ok((-x).exp() / x);
    }
    if x > 1.0 {
        return Ok(en_cf_scaled(n, x)? * (-x).exp());
    }
    // x ≤ 1: upward recurrence from E₁. Each step multiplies the absolute
    // error by x/k ≤ 1/k, so the recurrence is strongly stable here.
    let mut e = e1_series(x);
    if n == 1 {
        return Ok(e);
    }
    let emx = (-x).exp();
    for k in 1..n as u64 {
        e = (emx - x * e) / k as f64;
    }
    Ok(e)
}

/// Negative-order exponential integral E_{-m}(y) for m ≥ 1, y > 0, via the
/// closed form E_{-m}(y) = (m!/y^{m+1})·e^{-y}·Σ_{k=0}^{m} yᵏ/k!,
/// evaluated as e^{-y}/y·Σ_{j=0}^{m} c_j with c_0 = 1, c_j = c_{j-1}(m-j+1)/y
/// to keep every intermediate at the scale of the result.
pub(crate) fn exp_integral_en_negative(m: u32, y: f64) -> f64 {
    debug_assert!(m >= 1 && y > 0.0);
    let mut sum = 1.0;
    let mut c = 1.0;
    for j in 1..=m {
        c *= (m - j + 1) as f64 / y;
        sum += c;
    }
    (-y).exp() / y * sum
}
