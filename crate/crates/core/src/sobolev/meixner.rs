//! Meixner orthogonality along a vertical line and as a weighted series.
//!
//! With `W(z) = Γ(-z) Γ(β+z) (-c)^z`, closing the line to the right picks up
//! the poles of `Γ(-z)`:
//!
//! `∫ f(z) W(z) dz = 2πi Γ(β) Σ_{k≥0} f(k) (β)_k c^k / k!`,
//!
//! so the line integral divided by `2πi Γ(β)` is the classical Meixner sum.
//! The line integral only exists for `c ∉ [0, ∞)`; for `0 < c < 1` the value
//! is obtained by analytic continuation in `c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{CompensatedSum, Contour, ContourRule, ContourValue, QuadratureSpec};
use crate::algebra::{CPoly, QPoly, Scalar, Var};
use crate::error::{Error, Result};
use crate::families::{hypergeometric_build, ContinuousWeight, FamilySpec};
use crate::gamma::ln_gamma_checked;

/// Truncated Meixner series with a rigorous tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Upper bound on the magnitude of the omitted terms.
    pub tail: f64,
    /// Sum of the magnitudes of the included terms.
    pub scale: f64,
    pub terms: usize,
}

/// Both sides of one Meixner orthogonality relation, normalized as series values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeixnerPair {
    pub n: usize,
    pub m: usize,
    pub beta: Scalar,
    pub c: Scalar,
    /// `∫ M_n z^m W dz / (2πi Γ(β))`.
    pub contour: Complex64,
    pub contour_error: f64,
    /// True when `c` lies in `(0, 1)` and the line value came from analytic continuation.
    pub continued: bool,
    /// `Σ M_n(x) x^m (β)_x c^x / x!` when `0 < |c| < 1`.
    pub series: Option<SeriesValue>,
    /// `sqrt(|⟨M_n, M_n⟩| · |⟨x^m, x^m⟩|)` on the same path as `contour`.
    pub diagonal_scale: f64,
}

fn on_nonnegative_axis(c: Complex64) -> bool {
    c.im == 0.0 && c.re >= 0.0
}

fn meixner_line(beta: Complex64, c: Complex64) -> Result<(ContinuousWeight, Contour)> {
    if on_nonnegative_axis(c) {
        return Err(Error::ContourInvalid(format!("(-c)^z needs c outside [0, inf), got c = {c}")));
    }
    let weight = ContinuousWeight::Meixner { beta, c };
    let line = Contour::at(&weight, -0.5);
    let line = if line.separation_ok { line } else { Contour::for_weight(&weight)? };
    Ok((weight, line))
}

/// `∫ f(z) g(z) Γ(-z) Γ(β+z) (-c)^z dz` upward along a separating line.
pub fn meixner_contour(f: &QPoly, g: &QPoly, beta: &Scalar, c: &Scalar, quad: &QuadratureSpec) -> Result<ContourValue> {
    let (weight, line) = meixner_line(beta.to_complex(), c.to_complex())?;
    let rule = ContourRule::new(&weight, &line, quad)?;
    let p = f.mul(g).to_c64();
    rule.integrate(|z| p.eval_c64(z))
}

/// `Σ_{x≥0} f(x) g(x) (β)_x c^x / x!`, stopped once the tail bound is far
/// below `10^-12` of the accumulated magnitude.
pub fn meixner_series(f: &QPoly, g: &QPoly, beta: &Scalar, c: &Scalar) -> Result<SeriesValue> {
    let cc = c.to_complex();
    if cc.norm() >= 1.0 {
        return Err(Error::SeriesDiverges { modulus: cc.norm() });
    }
    let p = f.mul(g).to_c64();
    series_of(&p, beta.to_complex(), cc)
}

fn series_of(p: &CPoly, beta: Complex64, c: Complex64) -> Result<SeriesValue> {
    let zero = Complex64::new(0.0, 0.0);
    if p.is_zero() || c == zero {
        let value = if p.is_zero() { zero } else { p.coeff(0) };
        return Ok(SeriesValue { value, tail: 0.0, scale: value.norm(), terms: 1 });
    }
    let d = p.degree() as i32;
    let lead = p.leading().copied().unwrap_or(zero).norm();
    // Cauchy bound on the roots of p
    let radius = 1.0 + p.coeffs().iter().take(d as usize).map(|a| a.norm() / lead).fold(0.0, f64::max);
    let (cm, bm) = (c.norm(), beta.norm());
    let mut acc = CompensatedSum::default();
    let mut scale = 0.0;
    let mut r = Complex64::new(1.0, 0.0);
    for x in 0..1_000_000usize {
        let xf = x as f64;
        let term = p.eval_c64(Complex64::new(xf, 0.0)) * r;
        acc.add(term);
        scale += term.norm();
        if r == zero {
            return Ok(SeriesValue { value: acc.value(), tail: 0.0, scale, terms: x + 1 });
        }
        if xf > radius {
            let rho = cm * ((bm + xf) / (xf + 1.0)).max(1.0) * ((xf + 1.0 + radius) / (xf - radius)).powi(d);
            if rho < 1.0 && term != zero {
                let tail = term.norm() * rho / (1.0 - rho);
                if tail <= 1e-17 * scale {
                    return Ok(SeriesValue { value: acc.value(), tail, scale, terms: x + 1 });
                }
            }
        }
        r = r * c * (beta + xf) / (xf + 1.0);
    }
    Err(Error::TailTooFat { tail: f64::INFINITY, tolerance: 1e-12 * scale })
}

fn normalizer(beta: Complex64) -> Result<Complex64> {
    Ok(Complex64::new(0.0, 2.0 * PI) * ln_gamma_checked(beta)?.exp())
}

/// The normalized line value `∫ f g W dz / (2πi Γ(β))` continued to any `c ∉ [1, ∞)`.
///
/// `(1-c)^{β+d} Σ f(k) g(k) (β)_k c^k / k!` is a polynomial of degree at most
/// `d = deg(fg)` in `c`. It is sampled with line integrals at Chebyshev nodes
/// in `[-2, -1/20]` and evaluated at `c` by Lagrange interpolation.
pub fn meixner_continued(f: &QPoly, g: &QPoly, beta: &Scalar, c: &Scalar, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let cc = c.to_complex();
    if cc.im == 0.0 && cc.re >= 1.0 {
        return Err(Error::ContourInvalid(format!("no continuation to c = {cc} on [1, inf)")));
    }
    let p = f.mul(g);
    if p.is_zero() {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let b = beta.to_complex();
    let norm = normalizer(b)?;
    let d = p.degree() as usize;
    let power = b + d as f64;
    let (lo, hi) = (-2.0, -0.05);
    let nodes: Vec<f64> = (0..=d)
        .map(|j| {
            let theta = PI * (2 * j + 1) as f64 / (2 * (d + 1)) as f64;
            0.5 * (lo + hi) + 0.5 * (hi - lo) * theta.cos()
        })
        .collect();
    let samples: Vec<(Complex64, f64)> = nodes
        .iter()
        .map(|&cj| {
            let v = meixner_contour(f, g, beta, &Scalar::from_f64(cj).expect("finite node"), quad)?;
            let lift = Complex64::new(1.0 - cj, 0.0).powc(power);
            Ok((v.value / norm * lift, v.error / norm.norm() * lift.norm()))
        })
        .collect::<Result<_>>()?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for (j, &cj) in nodes.iter().enumerate() {
        let mut basis = Complex64::new(1.0, 0.0);
        for (k, &ck) in nodes.iter().enumerate() {
            if k != j {
                basis *= (cc - ck) / (cj - ck);
            }
        }
        value += samples[j].0 * basis;
        error += samples[j].1 * basis.norm();
    }
    let drop = (1.0 - cc).powc(power);
    Ok((value / drop, error / drop.norm()))
}

fn normalized_line(f: &QPoly, g: &QPoly, beta: &Scalar, c: &Scalar, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let cc = c.to_complex();
    if on_nonnegative_axis(cc) && cc.re < 1.0 && cc.re > 0.0 {
        return meixner_continued(f, g, beta, c, quad);
    }
    let v = meixner_contour(f, g, beta, c, quad)?;
    let norm = normalizer(beta.to_complex())?;
    Ok((v.value / norm, v.error / norm.norm()))
}

/// `∫ M_n(z) z^m W(z) dz / (2πi Γ(β))` with the series side when it converges.
pub fn meixner_orthogonality_pair(n: usize, m: usize, beta: &Scalar, c: &Scalar, quad: &QuadratureSpec) -> Result<MeixnerPair> {
    if beta.is_nonpositive_integer() {
        return Err(Error::ConditionViolated(format!("beta = {beta} is a non-positive integer")));
    }
    let spec = FamilySpec::meixner(beta.clone(), c.clone());
    let mn = hypergeometric_build(&spec, n)?;
    let xm = QPoly::monomial(Scalar::one(), m, Var::X);
    let cc = c.to_complex();
    let continued = on_nonnegative_axis(cc) && cc.re > 0.0 && cc.re < 1.0;
    let (contour, contour_error) = normalized_line(&mn, &xm, beta, c, quad)?;
    let (dn, _) = normalized_line(&mn, &mn, beta, c, quad)?;
    let (dm, _) = normalized_line(&xm, &xm, beta, c, quad)?;
    let series = if cc.norm() < 1.0 && cc.norm() > 0.0 { Some(meixner_series(&mn, &xm, beta, c)?) } else { None };
    Ok(MeixnerPair {
        n,
        m,
        beta: beta.clone(),
        c: c.clone(),
        contour,
        contour_error,
        continued,
        series,
        diagonal_scale: (dn.norm() * dm.norm()).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn one() -> QPoly {
        QPoly::one(Var::X)
    }

    #[test]
    fn geometric_series() {
        let v = meixner_series(&one(), &one(), &s("1"), &s("1/2")).unwrap();
        assert!((v.value - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(v.tail <= 1e-12 * v.scale);
        assert!(matches!(meixner_series(&one(), &one(), &s("1"), &s("3/2")), Err(Error::SeriesDiverges { .. })));
    }

    #[test]
    fn series_orthogonality() {
        let (beta, c) = (s("5/2"), s("1/3"));
        let spec = FamilySpec::meixner(beta.clone(), c.clone());
        let m2 = hypergeometric_build(&spec, 2).unwrap();
        let x = QPoly::identity(Var::X);
        let off = meixner_series(&m2, &x, &beta, &c).unwrap();
        let diag = meixner_series(&m2, &m2, &beta, &c).unwrap();
        assert!(off.value.norm() <= 1e-10 * diag.value.norm());
    }

    #[test]
    fn line_matches_series_for_negative_c() {
        // both sides are the same analytic function for -1 < c < 0
        let (beta, c) = (s("3/2"), s("-1/2"));
        let x = QPoly::identity(Var::X);
        let (line, _) = normalized_line(&x, &x, &beta, &c, &QuadratureSpec::default()).unwrap();
        let series = meixner_series(&x, &x, &beta, &c).unwrap();
        assert!((line - series.value).norm() <= 1e-10 * series.value.norm());
    }

    #[test]
    fn line_orthogonality_example() {
        let p = meixner_orthogonality_pair(1, 0, &s("3/2"), &s("-1/2"), &QuadratureSpec::default()).unwrap();
        assert!(!p.continued);
        assert!(p.contour.norm() <= 1e-8 * p.diagonal_scale, "{p:?}");
    }

    #[test]
    fn continuation_matches_series() {
        let quad = QuadratureSpec::default();
        let p = meixner_orthogonality_pair(1, 1, &s("3/2"), &s("1/2"), &quad).unwrap();
        assert!(p.continued);
        let series = p.series.unwrap().value;
        assert!((p.contour - series).norm() <= 1e-8 * series.norm(), "{p:?}");
        let x = QPoly::identity(Var::X);
        assert!(matches!(meixner_contour(&x, &x, &s("3/2"), &s("1/2"), &quad), Err(Error::ContourInvalid(_))));
    }
}
