//! Modified Bessel functions I₀, K₀, K₁, and integer-order Kₙ.
//!
//! * `I₀` — ascending series for `x ≤ 20`, asymptotic series beyond; a scaled
//!   `e^{-x}·I₀(x)` variant backs the Rician density at large line-of-sight
//!   arguments.
//! * `K₀`, `K₁` — ascending log-series for `x < 2`; for `x ≥ 2` the scaled
//!   integral representations
//!   `eˣ·K₀(x) = ∫₀^∞ e^{-x(cosh t - 1)} dt` and
//!   `eˣ·K₁(x) = ∫₀^∞ cosh t · e^{-x(cosh t - 1)} dt`
//!   evaluated by the crate's adaptive Gauss–Kronrod rule with the exponent
//!   computed as `x·2·sinh²(t/2)` to avoid cancellation in `cosh t - 1`.
//! * `Kₙ` — stable upward recurrence `K_{n+1} = K_{n-1} + (2n/x)·Kₙ`.

use crate::error::{JrcError, Result};
use crate::quadrature::{integrate, QuadSpec};

use super::expint::EULER_GAMMA;

/// Documented evaluation floor for `bessel_k`: arguments below this are
/// rejected rather than chased into the x → 0⁺ divergence.
pub const BESSEL_K_MIN_X: f64 = 1e-12;

const SERIES_EPS: f64 = 1e-17;
const MAX_TERMS: usize = 500;

// ---------------------------------------------------------------------------
// I₀
// ---------------------------------------------------------------------------

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    sum
}

/// Asymptotic factor S(x) with I₀(x) ~ eˣ/√(2πx)·S(x), truncated at its
/// smallest term; below 1e-16 relative for x > 20.
fn i0_asymptotic_factor(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (8.0 * x * kf);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs() {
            break;
        }
    }
    sum
}

/// Modified Bessel function of the first kind, I₀(x), for x ≥ 0.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(JrcError::Domain(format!(
            "bessel_i0 requires x >= 0, got {x}"
        )));
    }
    if x <= 20.0 {
        Ok(i0_series(x))
    } else {
        Ok(x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * i0_asymptotic_factor(x))
    }
}

/// Scaled modified Bessel function e^{-x}·I₀(x) for x ≥ 0.
///
/// Bounded by 1 for all x, where I₀ itself overflows near x ≈ 713.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(JrcError::Domain(format!(
            "bessel_i0_scaled requires x >= 0, got {x}"
        )));
    }
    if x <= 20.0 {
        Ok(i0_series(x) * (-x).exp())
    } else {
        Ok(i0_asymptotic_factor(x) / (2.0 * std::f64::consts::PI * x).sqrt())
    }
}

// ---------------------------------------------------------------------------
// K₀, K₁ — small-argument series
// ---------------------------------------------------------------------------

/// I₁(x) by ascending series (needed by the K₁ series only).
fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)ᵏ / (k!(k+1)!)
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    0.5 * x * sum
}

/// Ascending series for K₀ (x < 2):
/// K₀(x) = -(ln(x/2) + γ)·I₀(x) + Σ_{k≥1} H_k·(x²/4)ᵏ/(k!)².
fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)ᵏ/(k!)²
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        let add = harmonic * term;
        sum += add;
        if add < SERIES_EPS * sum.max(1.0) {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0_series(x) + sum
}

/// Ascending series for K₁ (x < 2):
/// K₁(x) = 1/x + ln(x/2)·I₁(x)
///         - (x/4)·Σ_{k≥0} (H_k + H_{k+1} - 2γ)·(x²/4)ᵏ/(k!(k+1)!).
fn k1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)ᵏ/(k!(k+1)!)
    let mut h_k = 0.0; // H_k
    let mut h_k1 = 1.0; // H_{k+1}
    let mut sum = (h_k + h_k1 - 2.0 * EULER_GAMMA) * term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        h_k += 1.0 / kf;
        h_k1 += 1.0 / (kf + 1.0);
        let add = (h_k + h_k1 - 2.0 * EULER_GAMMA) * term;
        sum += add;
        if add.abs() < SERIES_EPS * sum.abs().max(1.0) {
            break;
        }
    }
    1.0 / x + (0.5 * x).ln() * i1_series(x) - 0.25 * x * sum
}

// ---------------------------------------------------------------------------
// K₀, K₁ — scaled integral representation (x ≥ 2)
// ---------------------------------------------------------------------------

/// eˣ·K_ν(x) for ν ∈ {0, 1} via the cosh integral representation over the
/// finite range where the integrand has not yet underflowed to zero.
fn k_scaled_integral(order: u32, x: f64) -> Result<f64> {
    // Beyond x(cosh t - 1) = 750 the integrand is exactly 0 in f64.
    let y = 1.0 + 750.0 / x;
    let t_max = (y + (y * y - 1.0).sqrt()).ln();
    let spec = QuadSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-300,
        max_subdivisions: 200,
    };
    let r = integrate(
        |t: f64| {
            let s = (0.5 * t).sinh();
            let e = (-(x * 2.0 * s * s)).exp();
            if order == 1 {
                t.cosh() * e
            } else {
                e
            }
        },
        0.0,
        t_max,
        &spec,
    )?;
    Ok(r.value)
}

fn k01(order: u32, x: f64) -> Result<f64> {
    debug_assert!(order <= 1);
    if x < 2.0 {
        Ok(if order == 0 { k0_series(x) } else { k1_series(x) })
    } else {
        Ok(k_scaled_integral(order, x)? * (-x).exp())
    }
}

/// Modified Bessel function of the second kind, Kₙ(x), for integer order
/// n ≥ 0 and x above [`BESSEL_K_MIN_X`].
///
/// Orders beyond 1 use the upward recurrence
/// `K_{j+1}(x) = K_{j-1}(x) + (2j/x)·K_j(x)`, which is stable because Kₙ
/// grows with order. An evaluation whose true value overflows f64 (huge
/// order at small argument) is reported as a domain error rather than
/// returned as infinity.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(JrcError::Domain(format!(
            "bessel_k requires x > 0, got {x}"
        )));
    }
    if x < BESSEL_K_MIN_X {
        return Err(JrcError::Domain(format!(
            "bessel_k({order}, {x:e}): argument below the documented floor \
             {BESSEL_K_MIN_X:e} (K diverges as x → 0⁺)"
        )));
    }
    let k0 = k01(0, x)?;
    if order == 0 {
        return Ok(k0);
    }
    let k1 = k01(1, x)?;
    if order == 1 {
        return Ok(k1);
    }
    let mut km = k0;
    let mut k = k1;
    for j in 1..order {
        let next = km + (2.0 * j as f64 / x) * k;
        km = k;
        k = next;
        if !k.is_finite() {
            return Err(JrcError::Domain(format!(
                "bessel_k({order}, {x}): overflow during upward recurrence at order {}",
                j + 1
            )));
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Frozen reference values computed independently with 40-digit
    /// arithmetic.
    #[test]
    fn i0_reference_values() {
        let cases: &[(f64, f64, f64)] = &[
            (0.5, 1.0634833707413235, 1e-14),
            (1.0, 1.2660658777520083, 1e-14),
            (2.0, 2.2795853023360673, 1e-14),
            (5.0, 27.239871823604447, 1e-14),
            (10.0, 2815.7166284662545, 1e-14),
            (19.0, 16446190.440611711, 1e-13),
            (20.0, 43558282.559553533, 1e-13),
            (21.0, 115513961.92215806, 1e-13),
            (50.0, 2.9325537838493363e20, 1e-13),
            (100.0, 1.0737517071310738e42, 1e-13),
            (700.0, 1.5295933476718737e302, 1e-13),
        ];
        for &(x, want, tol) in cases {
            let got = bessel_i0(x).unwrap();
            assert!(
                ((got - want) / want).abs() < tol,
                "I0({x}): got {got:e}, want {want:e}"
            );
        }
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
    }

    #[test]
    fn i0_asymptotic_cross_check() {
        // I₀(20) matches eˣ/√(2πx) within 1%.
        let x = 20.0f64;
        let rough = x.exp() / (2.0 * std::f64::consts::PI * x).sqrt();
        let exact = bessel_i0(x).unwrap();
        assert!(((exact - rough) / exact).abs() < 0.01);
    }

    #[test]
    fn i0_scaled_consistency() {
        for &x in &[0.0, 0.5, 5.0, 19.5, 20.5, 80.0] {
            let scaled = bessel_i0_scaled(x).unwrap();
            let want = bessel_i0(x).unwrap() * (-x).exp();
            assert!(
                ((scaled - want) / want.max(1e-300)).abs() < 1e-12,
                "x={x}: scaled {scaled}, want {want}"
            );
        }
        // Far beyond the overflow point of I₀ itself.
        let s = bessel_i0_scaled(1e4).unwrap();
        let asym = 1.0 / (2.0 * std::f64::consts::PI * 1e4).sqrt();
        assert!(((s - asym) / asym).abs() < 1e-4);
    }

    #[test]
    fn i0_domain_error() {
        assert!(bessel_i0(-0.1).is_err());
        assert!(bessel_i0_scaled(-0.1).is_err());
    }

    #[test]
    fn k0_k1_reference_values() {
        let cases: &[(u32, f64, f64, f64)] = &[
            (0, 0.01, 4.7212447301610950, 1e-13),
            (1, 0.01, 99.973894118296248, 1e-13),
            (0, 0.1, 2.4270690247020166, 1e-13),
            (1, 0.1, 9.8538447808706061, 1e-13),
            (0, 0.5, 0.92441907122766586, 1e-13),
            (1, 0.5, 1.6564411200033009, 1e-13),
            (0, 1.0, 0.42102443824070833, 1e-13),
            (1, 1.0, 0.60190723019723457, 1e-13),
            (0, 2.0, 0.11389387274953344, 1e-12),
            (1, 2.0, 0.13986588181652243, 1e-12),
            (0, 5.0, 0.0036910983340425943, 1e-12),
            (1, 5.0, 0.0040446134454521642, 1e-12),
            (0, 10.0, 1.7780062316167652e-5, 1e-12),
            (1, 10.0, 1.8648773453825585e-5, 1e-12),
            (0, 20.0, 5.7412378153365243e-10, 1e-12),
            (1, 20.0, 5.8830579695570382e-10, 1e-12),
            (0, 50.0, 3.4101677497894955e-23, 1e-12),
            (0, 100.0, 4.6566282291759020e-45, 1e-12),
            (0, 600.0, 1.3558285309948524e-262, 1e-12),
        ];
        for &(order, x, want, tol) in cases {
            let got = bessel_k(order, x).unwrap();
            assert!(
                ((got - want) / want).abs() < tol,
                "K{order}({x}): got {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn kn_reference_values() {
        let cases: &[(u32, f64, f64, f64)] = &[
            (2, 1.0, 1.6248388986351775, 1e-12),
            (5, 0.5, 12097.979476096393, 1e-12),
            (5, 5.0, 0.032706273712031858, 1e-12),
            (10, 0.1, 1.8574295846304010e18, 1e-12),
            (10, 10.0, 0.0016142553003906700, 1e-12),
            (30, 1.0, 4.7061455267836269e39, 1e-12),
            (30, 30.0, 2.1965122563995389e-8, 1e-12),
            (3, 0.001, 7999999000.0001250, 1e-12),
        ];
        for &(order, x, want, tol) in cases {
            let got = bessel_k(order, x).unwrap();
            assert!(
                ((got - want) / want).abs() < tol,
                "K{order}({x}): got {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn kn_recurrence_identity() {
        // K_{n+1}(x) = K_{n-1}(x) + (2n/x)·Kₙ(x) to rel 1e-8 for n ≤ 10.
        for &x in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            for n in 1..=10u32 {
                let a = bessel_k(n - 1, x).unwrap();
                let b = bessel_k(n, x).unwrap();
                let c = bessel_k(n + 1, x).unwrap();
                let rhs = a + (2.0 * n as f64 / x) * b;
                assert!(
                    ((c - rhs) / c).abs() < 1e-8,
                    "recurrence at n={n}, x={x}"
                );
            }
        }
    }

    #[test]
    fn k2_recurrence_example() {
        // K₂(1) = K₀(1) + 2·K₁(1).
        let k0 = bessel_k(0, 1.0).unwrap();
        let k1 = bessel_k(1, 1.0).unwrap();
        let k2 = bessel_k(2, 1.0).unwrap();
        assert!(((k2 - (k0 + 2.0 * k1)) / k2).abs() < 1e-13);
    }

    #[test]
    fn k_domain_and_floor_errors() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(0, -1.0).is_err());
        assert!(bessel_k(0, 1e-13).is_err(), "below documented floor");
        // Overflow of the recurrence at extreme order/argument combinations
        // is reported, not returned as infinity.
        assert!(bessel_k(300, 1e-3).is_err());
    }

    #[test]
    fn k0_defining_integral_cross_check() {
        // K₀(x) = ∫₀^∞ e^{-x·cosh t} dt on both sides of the series/integral
        // switch at x = 2.
        use crate::quadrature::{integrate_semi_infinite, QuadSpec};
        let spec = QuadSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 200,
        };
        for &x in &[0.3, 1.0, 1.9, 2.1, 4.0] {
            let direct =
                integrate_semi_infinite(|t| (-(x * t.cosh())).exp(), 0.0, &spec)
                    .unwrap()
                    .value;
            let ours = bessel_k(0, x).unwrap();
            assert!(
                ((ours - direct) / direct).abs() < 1e-11,
                "K0({x}): ours {ours}, integral {direct}"
            );
        }
    }
}
