//! The single Meijer-G instance needed for the ergodic Rayleigh capacity.
//!
//! `meijer_g_capacity_kernel(z)` evaluates G^{3,1}_{1,3}(z | −1; −1,−1,0)
//! through the equivalent real integral
//!
//! G(z) = (1/z)·∫₀^∞ u·ln(1 + u²/(4z))·K₀(u) du,
//!
//! obtained by writing the ergodic capacity integral over the product-channel
//! SNR density in the Bessel form and substituting u = 2√(γ/s). The ergodic
//! capacity itself is then `(B/s)·G(1/s)` with `s = 2·c_γ·σ_H²`. This is not
//! a general Meijer-G implementation.

use crate::error::{JrcError, Result};
use crate::quadrature::{integrate_semi_infinite, QuadSpec};

use super::bessel::bessel_k;

/// G^{3,1}_{1,3}(z | −1; −1,−1,0) for z > 0 by adaptive quadrature of the
/// real integral form.
pub fn meijer_g_capacity_kernel(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(JrcError::Domain(format!(
            "meijer_g_capacity_kernel requires finite z > 0, got {z}"
        )));
    }
    let spec = QuadSpec {
        rel_tol: 1e-9,
        abs_tol: 1e-280,
        max_subdivisions: 200,
    };
    let four_z = 4.0 * z;
    let result = integrate_semi_infinite(
        |u: f64| {
            // The true integrand is O(u³·ln u) at the origin; below the
            // Bessel evaluation floor it is indistinguishable from zero.
            if u <= 1e-12 {
                return 0.0;
            }
            match bessel_k(0, u) {
                Ok(k0) => u * (u * u / four_z).ln_1p() * k0,
                Err(_) => 0.0, // K₀ underflows to 0 for large u
            }
        },
        0.0,
        &spec,
    )?;
    Ok(result.value / z)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Frozen reference values computed independently with 30-digit
    /// arithmetic from the contour-integral definition.
    #[test]
    fn kernel_reference_values() {
        let cases: &[(f64, f64)] = &[
            (0.05, 44.310152890110916),
            (0.1, 17.037295849718886),
            (0.5, 1.5618231743300678),
            (1.0, 0.51235837769822266),
            (2.0, 0.15903806981917760),
            (10.0, 0.0086289562985306958),
        ];
        for &(z, want) in cases {
            let got = meijer_g_capacity_kernel(z).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-7,
                "G({z}): got {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn kernel_matches_direct_capacity_quadrature() {
        // (1/s)·G(1/s) must equal ∫₀^∞ ln(1+γ)·K₀(√(2γ/s'))/s' dγ with
        // s' = c_γ·σ_H² = s/2 — the two quadrature routes to the same
        // ergodic capacity.
        let spec = QuadSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-280,
            max_subdivisions: 200,
        };
        for &s in &[0.5f64, 5.0, 50.0] {
            let via_kernel = meijer_g_capacity_kernel(1.0 / s).unwrap() / s;
            let half_s = 0.5 * s;
            let direct = integrate_semi_infinite(
                |g: f64| {
                    if g <= 1e-24 {
                        return 0.0;
                    }
                    match bessel_k(0, (2.0 * g / half_s).sqrt()) {
                        Ok(k0) => g.ln_1p() * k0 / half_s,
                        Err(_) => 0.0,
                    }
                },
                0.0,
                &spec,
            )
            .unwrap()
            .value;
            assert!(
                ((via_kernel - direct) / direct).abs() < 1e-6,
                "s={s}: kernel route {via_kernel:e}, direct {direct:e}"
            );
        }
    }

    #[test]
    fn kernel_is_decreasing_in_z() {
        let mut prev = meijer_g_capacity_kernel(0.02).unwrap();
        for &z in &[0.1, 0.5, 1.0, 5.0, 20.0] {
            let v = meijer_g_capacity_kernel(z).unwrap();
            assert!(v < prev, "kernel not decreasing at z={z}");
            prev = v;
        }
    }

    #[test]
    fn kernel_domain_errors() {
        assert!(meijer_g_capacity_kernel(0.0).is_err());
        assert!(meijer_g_capacity_kernel(-1.0).is_err());
        assert!(meijer_g_capacity_kernel(f64::NAN).is_err());
    }
}
