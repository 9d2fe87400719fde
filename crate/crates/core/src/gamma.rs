//! Complex log-gamma via the Lanczos approximation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficient set for g = 607/128.
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];

const POLE_TOL: f64 = 1e-12;

/// Distance-based pole test: true when `z` is within `1e-12` of `0, -1, -2, ...`.
pub fn near_pole(z: Complex64) -> bool {
    z.re < 0.5 && z.im.abs() <= POLE_TOL && (z.re - z.re.round()).abs() <= POLE_TOL
}

/// `ln Γ(z)` on a branch continuous away from the negative real axis.
///
/// Only `exp` of the result is meaningful near the negative axis; the imaginary
/// part may differ from the principal logarithm by a multiple of `2π`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin(z * PI) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, c) in LANCZOS_C.iter().enumerate().skip(1) {
        x += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln Γ(z)`, failing with [`Error::PoleHit`] at the poles.
pub fn ln_gamma_checked(z: Complex64) -> Result<Complex64> {
    if near_pole(z) {
        return Err(Error::PoleHit { arg: z });
    }
    Ok(ln_gamma(z))
}

/// `Γ(z)`.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `1 / (Γ(w) Γ(-w)) = -w sin(πw) / π`, entire in `w`.
pub fn recip_gamma_reflected(w: Complex64) -> Complex64 {
    -w * (w * PI).sin() / PI
}

// ln sin(w) without overflow for large |Im w|.
pub(crate) fn ln_sin(w: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if w.im > 1.0 {
        -i * w + (1.0 - (2.0 * i * w).exp()).ln() + Complex64::new(0.5, 0.0).ln() + i * (PI / 2.0)
    } else if w.im < -1.0 {
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() + Complex64::new(0.5, 0.0).ln() - i * (PI / 2.0)
    } else {
        w.sin().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_real_log_gamma() {
        for &x in &[0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.5, 100.0, 170.3] {
            let ours = ln_gamma(c(x, 0.0));
            let reference = statrs::function::gamma::ln_gamma(x);
            assert!((ours.re - reference).abs() <= 1e-13 * reference.abs().max(1.0), "x = {x}");
            assert!(ours.im.abs() < 1e-14);
        }
    }

    #[test]
    fn half_integer_values() {
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(1.5, 0.0)).re - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((gamma(c(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_and_reflection() {
        for &z in &[c(0.3, 2.0), c(-3.2, 0.7), c(5.0, -11.0), c(-0.5, 30.0), c(2.25, 45.0)] {
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "recurrence at {z}");
            let prod = gamma(z) * gamma(1.0 - z);
            let refl = PI / (z * PI).sin();
            assert!((prod - refl).norm() <= 1e-12 * refl.norm(), "reflection at {z}");
        }
    }

    #[test]
    fn modulus_on_the_critical_line() {
        // |Γ(1/2 + it)|^2 = π / cosh(πt)
        for &t in &[0.0, 1.0, 7.5, 30.0] {
            let lhs = (2.0 * ln_gamma(c(0.5, t)).re).exp();
            let rhs = PI / (PI * t).cosh();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs, "t = {t}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(-1.3, 4.2);
        let a = gamma(z);
        let b = gamma(z.conj());
        assert!((a.conj() - b).norm() <= 1e-14 * a.norm());
    }

    #[test]
    fn poles_are_reported() {
        assert!(ln_gamma_checked(c(-3.0, 0.0)).is_err());
        assert!(ln_gamma_checked(c(0.0, 0.0)).is_err());
        assert!(ln_gamma_checked(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn reciprocal_pair() {
        let w = c(0.3, 1.7);
        let direct = 1.0 / (gamma(w) * gamma(-w));
        assert!((recip_gamma_reflected(w) - direct).norm() <= 1e-12 * direct.norm());
    }
}
