use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::FamilySpec;
use crate::algebra::{factorial, pochhammer, Scalar};
use crate::error::{degenerate, Error, Result};
use crate::gamma::{ln_gamma_checked, ln_sin};

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

fn nonzero(v: Scalar, label: &str) -> Result<Scalar> {
    if v.is_zero() {
        Err(degenerate(label))
    } else {
        Ok(v)
    }
}

/// Hahn weight `(α+1)_x (β+1)_{N-x} / (x! (N-x)!)`, zero outside `0..=N`.
pub fn hahn_weight_zero_extended(alpha: &Scalar, beta: &Scalar, big_n: i64, x: i64) -> Scalar {
    if x < 0 || x > big_n {
        return Scalar::zero();
    }
    let (x, rest) = (x as usize, (big_n - x) as usize);
    let one = Scalar::one();
    &(&pochhammer(&(alpha + &one), x) * &pochhammer(&(beta + &one), rest)) / &(&factorial(x) * &factorial(rest))
}

/// Mass of the discrete weight at the support point `x`.
///
/// Gamma ratios are rewritten as Pochhammer products, which drops a constant
/// factor (`Γ(α+1)Γ(β+1)` for Hahn, `N!` for dual Hahn). Orthogonality is
/// unaffected and the masses stay exact.
pub fn discrete_weight(spec: &FamilySpec, x: i64) -> Result<Scalar> {
    let big_n = spec.cutoff()?;
    if x < 0 || x > big_n {
        return Err(Error::OutOfSupport { x, n: big_n });
    }
    let xu = x as usize;
    let one = Scalar::one();
    match spec {
        FamilySpec::Hahn { alpha, beta, .. } => Ok(hahn_weight_zero_extended(alpha, beta, big_n, x)),
        FamilySpec::Racah { alpha, beta, gamma, delta, .. } => {
            let gd = gamma + delta;
            let half = Scalar::ratio(1, 2);
            let num = [
                alpha + &one,
                &(beta + delta) + &one,
                gamma + &one,
                &gd + &one,
                &(&gd + &sc(3)) * &half,
            ]
            .iter()
            .fold(Scalar::one(), |acc, a| &acc * &pochhammer(a, xu));
            let den_terms = [
                (&(&gd - alpha) + &one, "(-alpha+gamma+delta+1)_x"),
                (&(gamma - beta) + &one, "(-beta+gamma+1)_x"),
                (&(&gd + &one) * &half, "((gamma+delta+1)/2)_x"),
                (delta + &one, "(delta+1)_x"),
            ];
            let mut den = factorial(xu);
            for (a, label) in den_terms.iter() {
                den = &den * &nonzero(pochhammer(a, xu), label)?;
            }
            Ok(&num / &den)
        }
        FamilySpec::DualHahn { gamma, delta, .. } => {
            let s = &(gamma + delta) + &one;
            let xs = sc(x);
            let num = &(&(&(&xs * &sc(2)) + &s) * &pochhammer(&(gamma + &one), xu)) * &pochhammer(&sc(-big_n), xu);
            let den = &(&nonzero(pochhammer(&(&xs + &s), big_n as usize + 1), "(x+gamma+delta+1)_{N+1}")?
                * &nonzero(pochhammer(&(delta + &one), xu), "(delta+1)_x")?)
                * &factorial(xu);
            Ok(&(&num / &den) * &sc(-1).powi(x))
        }
        FamilySpec::Krawtchouk { p, .. } => {
            let rest = (big_n - x) as usize;
            Ok(&(&p.powi(x) * &(&one - p).powi(rest as i64)) / &(&factorial(xu) * &factorial(rest)))
        }
        _ => Err(Error::NotFinite(spec.name().into())),
    }
}

/// How the lattice weight's doubling Gamma factor is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NuVariant {
    /// Denominator `Γ(2iξ)`, the standard Wilson-type weight.
    ImaginaryDoubling,
    /// Denominator `Γ(2ξ)`.
    RealDoubling,
}

/// Where the λ-polynomials are evaluated along the contour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LatticeArgument {
    /// `λ'(z) = z(z + 2m)` on the shifted lattice.
    LatticePoint,
    /// `z^2`.
    Squared,
}

/// Gamma-product weights integrated along vertical lines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ContinuousWeight {
    /// `Γ(-z) Γ(β+N+1-z) Γ(1+z) Γ(α+N+2+z)`.
    HahnSobolev { alpha: Complex64, beta: Complex64, big_n: i64 },
    /// `Γ(a+z) Γ(b+z) Γ(c-z) Γ(d-z)`: the continuous Hahn weight after `x = -iz`.
    ContinuousHahn { a: Complex64, b: Complex64, c: Complex64, d: Complex64 },
    /// `Γ(-z) Γ(β+z) (-c)^z`.
    Meixner { beta: Complex64, c: Complex64 },
    /// `Γ(-z) Γ(1+z) (p/(1-p))^z`.
    Krawtchouk { p: Complex64 },
    /// `ν(ξ) ν(-ξ)` with `ξ = i(z+m)` and `ν(ξ) = ∏ Γ(p_j + iξ) / Γ(2iξ)`.
    LatticeProduct {
        params: Vec<Complex64>,
        center: Complex64,
        variant: NuVariant,
        argument: LatticeArgument,
    },
}

impl ContinuousWeight {
    /// Starts of the pole sequences `s, s+1, s+2, ...`.
    pub fn increasing_poles(&self) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            ContinuousWeight::HahnSobolev { beta, big_n, .. } => vec![zero, beta + (*big_n as f64) + 1.0],
            ContinuousWeight::ContinuousHahn { c, d, .. } => vec![*c, *d],
            ContinuousWeight::Meixner { .. } | ContinuousWeight::Krawtchouk { .. } => vec![zero],
            ContinuousWeight::LatticeProduct { params, center, .. } => params.iter().map(|p| p - center).collect(),
        }
    }

    /// Starts of the pole sequences `s, s-1, s-2, ...`.
    pub fn decreasing_poles(&self) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            ContinuousWeight::HahnSobolev { alpha, big_n, .. } => vec![-one, -alpha - (*big_n as f64) - 2.0],
            ContinuousWeight::ContinuousHahn { a, b, .. } => vec![-a, -b],
            ContinuousWeight::Meixner { beta, .. } => vec![-beta],
            ContinuousWeight::Krawtchouk { .. } => vec![-one],
            ContinuousWeight::LatticeProduct { params, center, .. } => params.iter().map(|p| -p - center).collect(),
        }
    }

    /// The point at which the integrated polynomials are evaluated.
    pub fn point(&self, z: Complex64) -> Complex64 {
        match self {
            ContinuousWeight::ContinuousHahn { .. } => Complex64::new(0.0, -1.0) * z,
            ContinuousWeight::LatticeProduct { center, argument, .. } => match argument {
                LatticeArgument::LatticePoint => z * (z + 2.0 * center),
                LatticeArgument::Squared => z * z,
            },
            _ => z,
        }
    }

    /// Constant Jacobian between the polynomial variable and `z`.
    pub fn measure(&self) -> Complex64 {
        match self {
            ContinuousWeight::ContinuousHahn { .. } => Complex64::new(0.0, -1.0),
            _ => Complex64::new(1.0, 0.0),
        }
    }

    fn gamma_arguments(&self, z: Complex64) -> Vec<Complex64> {
        match self {
            ContinuousWeight::HahnSobolev { alpha, beta, big_n } => {
                let nn = *big_n as f64;
                vec![-z, beta + nn + 1.0 - z, 1.0 + z, alpha + nn + 2.0 + z]
            }
            ContinuousWeight::ContinuousHahn { a, b, c, d } => vec![a + z, b + z, c - z, d - z],
            ContinuousWeight::Meixner { beta, .. } => vec![-z, beta + z],
            ContinuousWeight::Krawtchouk { .. } => vec![-z, 1.0 + z],
            ContinuousWeight::LatticeProduct { params, center, .. } => {
                let w = z + center;
                params.iter().flat_map(|p| [p + w, p - w]).collect()
            }
        }
    }

    /// Logarithm of the weight at `z`; the caller exponentiates.
    pub fn log_weight(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for arg in self.gamma_arguments(z) {
            acc += ln_gamma_checked(arg)?;
        }
        match self {
            ContinuousWeight::Meixner { c, .. } => acc += z * (-c).ln(),
            ContinuousWeight::Krawtchouk { p } => acc += z * (p / (1.0 - p)).ln(),
            ContinuousWeight::LatticeProduct { center, variant, .. } => {
                // 1/(Γ(w)Γ(-w)) = -w sin(πw)/π
                let w = match variant {
                    NuVariant::ImaginaryDoubling => -2.0 * (z + center),
                    NuVariant::RealDoubling => Complex64::new(0.0, 2.0) * (z + center),
                };
                acc += (-w).ln() + ln_sin(w * PI) - PI.ln();
            }
            _ => {}
        }
        Ok(acc)
    }
}

/// `ln w(z)` for one of the contour weights.
pub fn continuous_log_weight(weight: &ContinuousWeight, z: Complex64) -> Result<Complex64> {
    weight.log_weight(z)
}
