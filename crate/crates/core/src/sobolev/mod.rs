//! Δ-Sobolev inner products: an exact discrete sum over the mass points plus
//! a vertical-line contour integral of `(N+1)`-fold differences.
//!
//! The discrete part is summed in exact arithmetic. The contour part is a
//! composite Gauss–Legendre quadrature in double precision whose weight
//! values are computed once per contour and reused across a Gram matrix.

mod gram;
mod meixner;
mod quadrature;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{delta_pow, lattice_divided_difference, QPoly, Scalar};
use crate::error::{Error, Result};
use crate::families::{discrete_weight, ContinuousWeight, FamilySpec, LatticeArgument, NuVariant};

pub use gram::{characterize, gram, gram_with, EntryMode, GramReport, ORTHOGONALITY_TOLERANCE};
pub use meixner::{
    meixner_continued, meixner_contour, meixner_orthogonality_pair, meixner_series, MeixnerPair, SeriesValue,
};
pub use quadrature::{gauss_legendre, CompensatedSum, Contour, ContourRule, ContourValue, QuadratureSpec, Rule};

/// Choices for the contour part that the formulas leave open.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourChoice {
    /// Doubling Gamma factor of the lattice weights.
    pub variant: NuVariant,
    /// Evaluation point of λ-polynomials on the contour.
    pub argument: LatticeArgument,
    /// Override of the line abscissa; the strip midpoint otherwise.
    pub sigma: Option<f64>,
}

impl Default for ContourChoice {
    fn default() -> Self {
        ContourChoice { variant: NuVariant::ImaginaryDoubling, argument: LatticeArgument::LatticePoint, sigma: None }
    }
}

fn c64(s: &Scalar) -> Complex64 {
    s.to_complex()
}

/// `Σ_{x=0}^{N} f(λ(x)) g(λ(x)) w(x)` in exact arithmetic.
pub fn discrete_inner(f: &QPoly, g: &QPoly, spec: &FamilySpec) -> Result<Scalar> {
    let big_n = spec.cutoff()?;
    let lat = spec.lattice();
    let mut acc = Scalar::zero();
    for x in 0..=big_n {
        let pt = lat.lambda_at(&Scalar::from_i64(x));
        let fv = f.eval(&pt);
        if fv.is_zero() {
            continue;
        }
        let gv = g.eval(&pt);
        if gv.is_zero() {
            continue;
        }
        acc = &acc + &(&(&fv * &gv) * &discrete_weight(spec, x)?);
    }
    Ok(acc)
}

/// `∫ f(x(z)) g(x(z)) w(z) dz` along the line, upward.
pub fn contour_inner(
    f: &QPoly,
    g: &QPoly,
    weight: &ContinuousWeight,
    contour: &Contour,
    quad: &QuadratureSpec,
) -> Result<ContourValue> {
    let rule = ContourRule::new(weight, contour, quad)?;
    let (cf, cg) = (f.to_c64(), g.to_c64());
    rule.integrate(|p| cf.eval_c64(p) * cg.eval_c64(p))
}

/// The `(N+1)`-fold difference entering the contour part: `Δ^{N+1}` on a
/// linear lattice, `(Δ/Δλ)^{N+1}` on a quadratic one.
pub fn sobolev_difference(f: &QPoly, spec: &FamilySpec) -> Result<QPoly> {
    let k = (spec.cutoff()? + 1).max(0) as usize;
    match spec {
        FamilySpec::Hahn { .. } | FamilySpec::Krawtchouk { .. } => Ok(delta_pow(f, k)),
        FamilySpec::Racah { .. } | FamilySpec::DualHahn { .. } => {
            Ok(lattice_divided_difference(f, &spec.lattice(), k)?.0)
        }
        _ => Err(Error::NotFinite(spec.name().into())),
    }
}

/// The contour weight paired with [`sobolev_difference`].
pub fn sobolev_weight(spec: &FamilySpec, choice: &ContourChoice) -> Result<ContinuousWeight> {
    let big_n = spec.cutoff()?;
    let half = Scalar::ratio(1, 2);
    let one = Scalar::one();
    let nn = Scalar::from_i64(big_n);
    let w = match spec {
        FamilySpec::Hahn { alpha, beta, .. } => {
            ContinuousWeight::HahnSobolev { alpha: c64(alpha), beta: c64(beta), big_n }
        }
        FamilySpec::Krawtchouk { p, .. } => ContinuousWeight::Krawtchouk { p: c64(p) },
        FamilySpec::Racah { alpha, beta, gamma, delta, .. } => {
            // s' = γ+δ+N+2 is the lattice shift after N+1 divided differences
            let s2 = &(&(gamma + delta) + &nn) + &Scalar::from_i64(2);
            let params = [
                &s2 * &half,
                &(alpha + &one) + &(&(&(&nn - gamma) - delta) * &half),
                &(beta + &one) + &(&(&(&nn - gamma) + delta) * &half),
                &one + &(&(&(&nn + gamma) - delta) * &half),
            ];
            ContinuousWeight::LatticeProduct {
                params: params.iter().map(c64).collect(),
                center: c64(&(&s2 * &half)),
                variant: choice.variant,
                argument: choice.argument,
            }
        }
        FamilySpec::DualHahn { gamma, delta, .. } => {
            let s2 = &(&(gamma + delta) + &nn) + &Scalar::from_i64(2);
            let params = [
                &s2 * &half,
                &one + &(&(&(gamma - delta) + &nn) * &half),
                -(&(&(gamma + delta) + &nn) * &half),
            ];
            ContinuousWeight::LatticeProduct {
                params: params.iter().map(c64).collect(),
                center: c64(&(&s2 * &half)),
                variant: choice.variant,
                argument: choice.argument,
            }
        }
        _ => return Err(Error::NotFinite(spec.name().into())),
    };
    Ok(w)
}

/// The contour used for a family's Sobolev product.
pub fn sobolev_contour(weight: &ContinuousWeight, choice: &ContourChoice) -> Result<Contour> {
    match choice.sigma {
        Some(sigma) => Ok(Contour::at(weight, sigma)),
        None => Contour::for_weight(weight),
    }
}

/// Value of a Sobolev inner product with its two parts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevValue {
    pub value: Complex64,
    /// Exact discrete part.
    pub discrete: Scalar,
    /// Contour part; absent when one of the differences vanishes identically.
    pub contour: Option<ContourValue>,
}

/// `⟨f, g⟩_S` with the default contour choices.
pub fn sobolev_inner(f: &QPoly, g: &QPoly, spec: &FamilySpec, quad: &QuadratureSpec) -> Result<SobolevValue> {
    sobolev_inner_with(f, g, spec, quad, &ContourChoice::default())
}

/// `⟨f, g⟩_S` with explicit contour choices.
pub fn sobolev_inner_with(
    f: &QPoly,
    g: &QPoly,
    spec: &FamilySpec,
    quad: &QuadratureSpec,
    choice: &ContourChoice,
) -> Result<SobolevValue> {
    check_conditions(spec)?;
    let discrete = discrete_inner(f, g, spec)?;
    let (df, dg) = (sobolev_difference(f, spec)?, sobolev_difference(g, spec)?);
    let contour = if df.is_zero() || dg.is_zero() {
        None
    } else {
        let weight = sobolev_weight(spec, choice)?;
        let contour = sobolev_contour(&weight, choice)?;
        Some(contour_inner(&df, &dg, &weight, &contour, quad)?)
    };
    let value = discrete.to_complex() + contour.map(|c| c.value).unwrap_or_default();
    Ok(SobolevValue { value, discrete, contour })
}

/// Parameter hypotheses under which the Sobolev product characterizes the family.
pub fn check_conditions(spec: &FamilySpec) -> Result<()> {
    let big_n = spec.cutoff()?;
    if big_n < 0 {
        return Err(Error::ConditionViolated(format!("N = {big_n} is negative")));
    }
    match spec {
        FamilySpec::Hahn { alpha, beta, .. } => {
            for (name, v) in [("-alpha", -alpha.clone()), ("-beta", -beta.clone())] {
                if let Some(k) = v.as_integer() {
                    if k >= 1 && k != big_n + 1 {
                        return Err(Error::ConditionViolated(format!(
                            "{name} = {k} lies in {{1,...,N, N+2,...}} with N = {big_n}"
                        )));
                    }
                }
            }
            if let Some(k) = (-(alpha + beta)).as_integer() {
                if k >= 1 && k != 2 * big_n + 2 {
                    return Err(Error::ConditionViolated(format!(
                        "-alpha-beta = {k} lies in {{1,...,2N+1, 2N+3,...}} with N = {big_n}"
                    )));
                }
            }
            Ok(())
        }
        FamilySpec::Krawtchouk { p, .. } => {
            if p.is_zero() || p.is_one() {
                Err(Error::ConditionViolated("p must differ from 0 and 1".into()))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}
