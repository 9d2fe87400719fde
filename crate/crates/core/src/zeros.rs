//! Complex zeros of family members.
//!
//! Beyond the cutoff the mass-point factor `∏_{j=0}^{N} (x - j)` is divided
//! out exactly and only the cofactor is solved numerically, by Aberth–Ehrlich
//! iteration followed by a Newton polish.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{CPoly, QPoly, Scalar, Var};
use crate::error::{Error, Result};
use crate::families::{hypergeometric_build, FamilySpec};

/// Iteration cap for the simultaneous iteration.
pub const MAX_ITERATIONS: usize = 200;
/// Backward error a residual root must reach.
pub const BACKWARD_TOLERANCE: f64 = 1e-10;
/// Tolerance of the line test `|Re r - N/2|`.
pub const LINE_TOLERANCE: f64 = 1e-8;

/// A numerically located root with its backward error `|q(r)| / Σ|q_k||r|^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualRoot {
    pub re: f64,
    pub im: f64,
    pub backward_error: f64,
}

impl ResidualRoot {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Zeros of `p_n`, split into the exactly deflated mass points and the rest.
///
/// For Racah and dual Hahn the polynomial lives in `λ`; `integer_roots` then
/// holds the lattice indices `j` with `p_n(λ(j)) = 0` and residual roots are
/// values of `λ`.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub n: usize,
    pub var: Var,
    pub integer_roots: Vec<i64>,
    pub residual_roots: Vec<ResidualRoot>,
    /// Mass-point values in the polynomial's own variable, aligned with `integer_roots`.
    #[serde(skip)]
    integer_points: Vec<f64>,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.integer_roots.len() + self.residual_roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Residual roots ordered by `(Im, Re)`.
    pub fn sorted_residuals(&self) -> Vec<ResidualRoot> {
        let mut r = self.residual_roots.clone();
        r.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        r
    }

    /// CSV with header `re,im,kind`: mass points ascending, then residual roots by `(Im, Re)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,kind\n");
        for x in &self.integer_points {
            out.push_str(&format!("{x},0,integer\n"));
        }
        for r in self.sorted_residuals() {
            out.push_str(&format!("{},{},residual\n", r.re, r.im));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("zero set serializes")
    }
}

fn local_scale(p: &CPoly, z: Complex64) -> f64 {
    let r = z.norm();
    p.coeffs().iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn backward_error(p: &CPoly, z: Complex64) -> f64 {
    let scale = local_scale(p, z);
    if scale == 0.0 {
        0.0
    } else {
        p.eval_c64(z).norm() / scale
    }
}

/// Value and derivative by Horner's scheme.
fn eval_with_derivative(p: &CPoly, z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    p.coeffs().iter().rev().fold((zero, zero), |(v, d), c| (v * z + c, d * z + v))
}

/// Fujiwara's bound on the root moduli of a polynomial with nonzero leading coefficient.
fn fujiwara_bound(p: &CPoly) -> f64 {
    let c = p.coeffs();
    let d = c.len() - 1;
    let lead = c[d].norm();
    (1..=d)
        .map(|k| {
            let ratio = c[d - k].norm() / lead;
            if k == d {
                (ratio / 2.0).powf(1.0 / k as f64)
            } else {
                ratio.powf(1.0 / k as f64)
            }
        })
        .fold(0.0, f64::max)
        * 2.0
}

/// All roots of `p` by Aberth–Ehrlich iteration from a circle, then Newton-polished.
pub fn aberth(p: &CPoly) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d < 0 {
        return Err(Error::InvalidArgument("the zero polynomial has no isolated roots".into()));
    }
    let d = d as usize;
    if d == 0 {
        return Ok(Vec::new());
    }
    let radius = fujiwara_bound(p).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4)).collect();
    let mut converged = vec![false; d];
    for _ in 0..MAX_ITERATIONS {
        for k in 0..d {
            if converged[k] {
                continue;
            }
            let (v, dv) = eval_with_derivative(p, z[k]);
            if v.norm() <= 1e-16 * local_scale(p, z[k]) {
                converged[k] = true;
                continue;
            }
            let w = v / dv;
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if !step.is_finite() {
                return Err(Error::NumericBreakdown { step: k, pivot: dv.norm(), scale: v.norm() });
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                converged[k] = true;
            }
        }
        if converged.iter().all(|c| *c) {
            return Ok(z.into_iter().map(|r| polish(p, r)).collect());
        }
    }
    let residual = z.iter().map(|r| backward_error(p, *r)).fold(0.0, f64::max);
    if residual <= BACKWARD_TOLERANCE {
        return Ok(z.into_iter().map(|r| polish(p, r)).collect());
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual })
}

/// A few Newton steps, kept only while they reduce the residual.
fn polish(p: &CPoly, mut z: Complex64) -> Complex64 {
    let mut best = p.eval_c64(z).norm();
    for _ in 0..3 {
        let (v, dv) = eval_with_derivative(p, z);
        let next = z - v / dv;
        let val = p.eval_c64(next).norm();
        if !next.is_finite() || val >= best {
            break;
        }
        z = next;
        best = val;
    }
    z
}

/// Roots of an exact polynomial, solved around its exact centroid.
fn centered_roots(q: &QPoly) -> Result<Vec<Complex64>> {
    let d = q.degree();
    if d <= 0 {
        return Ok(Vec::new());
    }
    let lead = q.leading().expect("nonzero").clone();
    let centroid = -(&q.coeff(d as usize - 1) / &(&lead * &Scalar::from_i64(d as i64)));
    let shifted = q.shift(&centroid).to_c64();
    let c = centroid.to_complex();
    Ok(aberth(&shifted)?.into_iter().map(|r| r + c).collect())
}

fn mass_point_factor(spec: &FamilySpec, big_n: i64) -> QPoly {
    let lat = spec.lattice();
    let var = spec.var();
    (0..=big_n).fold(QPoly::one(var), |acc, j| {
        acc.mul(&QPoly::new(vec![-lat.lambda_at(&Scalar::from_i64(j)), Scalar::one()], var))
    })
}

/// Zeros of `p_n`, deflating the mass points exactly when `n > N`.
pub fn roots(spec: &FamilySpec, n: usize) -> Result<ZeroSet> {
    let p = hypergeometric_build(spec, n)?;
    let lat = spec.lattice();
    let (integer_roots, cofactor) = match spec.cutoff() {
        Ok(big_n) if n as i64 > big_n => {
            let left = mass_point_factor(spec, big_n);
            ((0..=big_n).collect::<Vec<_>>(), p.exact_div(&left)?)
        }
        _ => (Vec::new(), p),
    };
    let cofactor_f = cofactor.to_c64();
    let residual_roots = centered_roots(&cofactor)?
        .into_iter()
        .map(|r| ResidualRoot { re: r.re, im: r.im, backward_error: backward_error(&cofactor_f, r) })
        .collect();
    let integer_points = integer_roots.iter().map(|&j| lat.lambda_at(&Scalar::from_i64(j)).to_complex().re).collect();
    Ok(ZeroSet {
        family: spec.name().to_string(),
        params: spec.params().into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        n,
        var: spec.var(),
        integer_roots,
        residual_roots,
        integer_points,
    })
}

/// [`roots`] for several polynomials at once, in input order.
pub fn roots_batch(items: &[(FamilySpec, usize)]) -> Vec<Result<ZeroSet>> {
    items.par_iter().map(|(spec, n)| roots(spec, *n)).collect()
}

/// Outcome of the line test for `α = β`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineCheck {
    pub center: f64,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Structural verdicts on the zeros beyond the cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroStructureReport {
    pub zeros: ZeroSet,
    /// The deflated multiset is exactly `{0, …, N}`.
    pub integer_roots_ok: bool,
    /// Every residual root meets the backward-error bound.
    pub residuals_ok: bool,
    /// Present only for Hahn with `α = β` real.
    pub line: Option<LineCheck>,
    /// Largest distance from a residual root's conjugate to the nearest residual
    /// root, for real parameters.
    pub conjugate_gap: Option<f64>,
    pub passed: bool,
}

/// Largest distance from each conjugate to its nearest partner.
fn conjugate_gap(roots: &[ResidualRoot]) -> f64 {
    roots
        .iter()
        .map(|r| roots.iter().map(|s| (s.value() - r.value().conj()).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Checks the zero configuration of `p_n` for `n > N`.
pub fn zero_structure_report(spec: &FamilySpec, n: usize) -> Result<ZeroStructureReport> {
    let big_n = spec.cutoff()?;
    if n as i64 <= big_n {
        return Err(Error::InvalidArgument(format!("the zero structure needs n > N = {big_n}")));
    }
    let zeros = roots(spec, n)?;
    let integer_roots_ok = zeros.integer_roots == (0..=big_n).collect::<Vec<_>>();
    let residuals_ok = zeros.residual_roots.iter().all(|r| r.backward_error <= BACKWARD_TOLERANCE);
    let line = match spec {
        FamilySpec::Hahn { alpha, beta, .. } if alpha == beta && alpha.is_real() => {
            let center = big_n as f64 / 2.0;
            let max_deviation = zeros.residual_roots.iter().map(|r| (r.re - center).abs()).fold(0.0, f64::max);
            Some(LineCheck { center, max_deviation, passed: max_deviation <= LINE_TOLERANCE })
        }
        _ => None,
    };
    let conjugate_gap = spec.is_real().then(|| conjugate_gap(&zeros.residual_roots));
    let passed = integer_roots_ok && residuals_ok && line.as_ref().is_none_or(|l| l.passed);
    Ok(ZeroStructureReport { zeros, integer_roots_ok, residuals_ok, line, conjugate_gap, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::RacahBranch;
    use proptest::prelude::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn aberth_on_known_roots() {
        let want = [c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 3.0), c(0.5, -3.0)];
        let p = want.iter().fold(CPoly::one(Var::X), |acc, r| acc.mul(&CPoly::new(vec![-r, c(1.0, 0.0)], Var::X)));
        let got = aberth(&p).unwrap();
        for w in want {
            let nearest = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-12, "{w}");
        }
        assert!(aberth(&CPoly::constant(c(2.0, 0.0), Var::X)).unwrap().is_empty());
        assert!(aberth(&CPoly::zero(Var::X)).is_err());
    }

    #[test]
    fn fujiwara_encloses_roots() {
        let p = CPoly::new(vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)], Var::X);
        assert!(fujiwara_bound(&p) >= 3.0);
    }

    #[test]
    fn cutoff_member_has_only_mass_points() {
        let z = roots(&FamilySpec::hahn(s("1"), s("1"), 5), 6).unwrap();
        assert_eq!(z.integer_roots, vec![0, 1, 2, 3, 4, 5]);
        assert!(z.residual_roots.is_empty());
        assert!(roots(&FamilySpec::hahn(s("1"), s("1"), 5), 0).unwrap().is_empty());
    }

    #[test]
    fn symmetric_hahn_zeros_lie_on_the_line() {
        let r = zero_structure_report(&FamilySpec::hahn(s("1"), s("1"), 5), 15).unwrap();
        assert_eq!(r.zeros.residual_roots.len(), 9);
        let line = r.line.clone().unwrap();
        assert!(line.passed, "{}", line.max_deviation);
        assert!(r.passed);
        assert!(r.conjugate_gap.unwrap() < 1e-10);
    }

    #[test]
    fn asymmetric_hahn_skips_the_line() {
        let r = zero_structure_report(&FamilySpec::hahn(s("1"), s("15"), 5), 15).unwrap();
        assert!(r.line.is_none());
        assert!(r.integer_roots_ok && r.residuals_ok);
        assert_eq!(r.zeros.residual_roots.len(), 9);
        assert!(r.conjugate_gap.unwrap() < 1e-10);
    }

    #[test]
    fn krawtchouk_residual_root() {
        // K_6 = K_5 · M_1(x-5; 6, -1), whose root is N + 1 - p(N + 2) = 2.
        let z = roots(&FamilySpec::krawtchouk(s("1/2"), 4), 6).unwrap();
        assert_eq!(z.integer_roots, vec![0, 1, 2, 3, 4]);
        assert_eq!(z.residual_roots.len(), 1);
        assert!((z.residual_roots[0].value() - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lattice_families_deflate_in_lambda() {
        let d = FamilySpec::dual_hahn(s("1"), s("1"), 3);
        let z = roots(&d, 6).unwrap();
        assert_eq!(z.integer_roots, vec![0, 1, 2, 3]);
        assert_eq!(z.residual_roots.len(), 2);
        let r = FamilySpec::racah(s("-4"), s("1/2"), s("1/3"), s("1/5"), RacahBranch::AlphaOne).unwrap();
        assert_eq!(roots(&r, 6).unwrap().len(), 6);
        assert!(zero_structure_report(&d, 3).is_err());
    }

    #[test]
    fn below_the_cutoff_nothing_is_deflated() {
        let z = roots(&FamilySpec::hahn(s("1/2"), s("3/2"), 6), 4).unwrap();
        assert!(z.integer_roots.is_empty());
        assert_eq!(z.residual_roots.len(), 4);
        for r in &z.residual_roots {
            assert!(r.im.abs() < 1e-10 && r.re > 0.0 && r.re < 6.0);
        }
    }

    #[test]
    fn csv_layout() {
        let csv = roots(&FamilySpec::hahn(s("1"), s("1"), 5), 15).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "re,im,kind");
        assert_eq!(lines.len(), 16);
        assert_eq!(lines[1], "0,0,integer");
        assert_eq!(lines[6], "5,0,integer");
        let ims: Vec<f64> = lines[7..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert!(ims.windows(2).all(|w| w[0] <= w[1]));
        assert!(lines[7..].iter().all(|l| l.ends_with(",residual")));
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (1i64..40, 1i64..8).prop_map(|(p, q)| Scalar::ratio(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn counts_and_residuals(a in rational(), b in rational(), big_n in 0i64..=5, n in 0usize..=14) {
            let spec = FamilySpec::hahn(a, b, big_n);
            let z = match roots(&spec, n) {
                Ok(z) => z,
                Err(Error::DegenerateParameters { .. }) => return Ok(()),
                Err(e) => panic!("{spec} n={n}: {e}"),
            };
            prop_assert_eq!(z.len(), n);
            let p = hypergeometric_build(&spec, n).unwrap().to_c64();
            for r in &z.residual_roots {
                prop_assert!(r.backward_error <= BACKWARD_TOLERANCE);
                prop_assert!(backward_error(&p, r.value()) <= 1e-8);
            }
            prop_assert!(conjugate_gap(&z.residual_roots) <= 1e-10 * (1.0 + z.residual_roots.iter().map(|r| r.value().norm()).fold(0.0, f64::max)));
        }
    }
}
