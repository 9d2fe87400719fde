use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_conditions, sobolev_contour, sobolev_difference, sobolev_weight, ContourChoice, ContourRule, QuadratureSpec,
};
use crate::algebra::{CPoly, QPoly, Scalar};
use crate::error::{Error, Result};
use crate::families::{discrete_weight, hypergeometric_build, FamilySpec};

/// Relative off-diagonal size below which a Gram matrix counts as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

/// How a Gram entry was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryMode {
    /// Only the exact discrete part contributes.
    Exact,
    /// The contour part was integrated numerically.
    Quadrature,
}

/// Gram matrix of a family under its Sobolev product.
#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub nmax: usize,
    /// Row-major `(nmax+1)^2` entries as `[re, im]`.
    pub entries: Vec<[f64; 2]>,
    pub max_offdiag_rel: f64,
    pub min_diag_abs: f64,
    pub certified: bool,
    pub quad: QuadratureSpec,
    pub tolerance: f64,
    /// Row-major modes matching `entries`.
    pub modes: Vec<EntryMode>,
    /// Exact discrete parts, row-major, as canonical strings.
    pub discrete: Vec<String>,
    /// Largest quadrature error estimate over all entries.
    pub max_quadrature_error: f64,
    /// Abscissa of the contour line, when one was needed.
    pub sigma: Option<f64>,
    pub notes: Vec<String>,
}

impl GramReport {
    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        let [re, im] = self.entries[m * (self.nmax + 1) + n];
        Complex64::new(re, im)
    }

    pub fn mode(&self, m: usize, n: usize) -> EntryMode {
        self.modes[m * (self.nmax + 1) + n]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Bilinear form values on a list of polynomials, shared by [`gram`] and [`characterize`].
struct FormMatrix {
    size: usize,
    discrete: Vec<Scalar>,
    contour: Vec<Option<(Complex64, f64)>>,
    sigma: Option<f64>,
}

impl FormMatrix {
    fn build(spec: &FamilySpec, polys: &[QPoly], quad: &QuadratureSpec, choice: &ContourChoice) -> Result<Self> {
        let size = polys.len();
        let big_n = spec.cutoff()?;
        let lat = spec.lattice();
        let masses: Vec<(Scalar, Scalar)> = (0..=big_n)
            .map(|x| Ok((lat.lambda_at(&Scalar::from_i64(x)), discrete_weight(spec, x)?)))
            .collect::<Result<_>>()?;
        let values: Vec<Vec<Scalar>> = polys
            .par_iter()
            .map(|p| masses.iter().map(|(pt, _)| p.eval(pt)).collect())
            .collect();
        let pairs: Vec<(usize, usize)> = (0..size).flat_map(|m| (m..size).map(move |n| (m, n))).collect();
        let upper: Vec<Scalar> = pairs
            .par_iter()
            .map(|&(m, n)| {
                let mut acc = Scalar::zero();
                for ((a, b), (_, w)) in values[m].iter().zip(&values[n]).zip(&masses) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(&(a * b) * w);
                    }
                }
                acc
            })
            .collect();
        let mut discrete = vec![Scalar::zero(); size * size];
        for (&(m, n), v) in pairs.iter().zip(&upper) {
            discrete[m * size + n] = v.clone();
            discrete[n * size + m] = v.clone();
        }

        let diffs: Vec<QPoly> = polys.iter().map(|p| sobolev_difference(p, spec)).collect::<Result<_>>()?;
        let mut contour = vec![None; size * size];
        let mut sigma = None;
        if diffs.iter().any(|d| !d.is_zero()) {
            let weight = sobolev_weight(spec, choice)?;
            let line = sobolev_contour(&weight, choice)?;
            sigma = Some(line.sigma);
            let rule = ContourRule::new(&weight, &line, quad)?;
            let ends = rule.end_points();
            let evals: Vec<Option<[Vec<Complex64>; 3]>> = diffs
                .par_iter()
                .map(|d| {
                    (!d.is_zero()).then(|| {
                        let c = d.to_c64();
                        let at = |pts: &[Complex64]| pts.iter().map(|&p| c.eval_c64(p)).collect::<Vec<_>>();
                        [at(rule.coarse_points()), at(rule.points()), at(&ends)]
                    })
                })
                .collect();
            let live: Vec<(usize, usize)> =
                pairs.iter().copied().filter(|&(m, n)| evals[m].is_some() && evals[n].is_some()).collect();
            let vals: Vec<Result<(Complex64, f64)>> = live
                .par_iter()
                .map(|&(m, n)| {
                    let (a, b) = (evals[m].as_ref().unwrap(), evals[n].as_ref().unwrap());
                    let prod = |k: usize| a[k].iter().zip(&b[k]).map(|(x, y)| x * y).collect::<Vec<_>>();
                    let v = rule.integrate_values(&prod(0), &prod(1), &prod(2))?;
                    Ok((v.value, v.error))
                })
                .collect();
            for (&(m, n), v) in live.iter().zip(vals) {
                let v = v?;
                contour[m * size + n] = Some(v);
                contour[n * size + m] = Some(v);
            }
        }
        Ok(FormMatrix { size, discrete, contour, sigma })
    }

    fn value(&self, m: usize, n: usize) -> Complex64 {
        let k = m * self.size + n;
        self.discrete[k].to_complex() + self.contour[k].map(|c| c.0).unwrap_or_default()
    }
}

/// Gram matrix of `p_0, ..., p_nmax` with the default contour choices.
pub fn gram(spec: &FamilySpec, nmax: usize, quad: &QuadratureSpec) -> Result<GramReport> {
    gram_with(spec, nmax, quad, &ContourChoice::default())
}

/// Gram matrix of `p_0, ..., p_nmax` with explicit contour choices.
pub fn gram_with(spec: &FamilySpec, nmax: usize, quad: &QuadratureSpec, choice: &ContourChoice) -> Result<GramReport> {
    check_conditions(spec)?;
    let polys: Vec<QPoly> = (0..=nmax).map(|n| hypergeometric_build(spec, n)).collect::<Result<_>>()?;
    let form = FormMatrix::build(spec, &polys, quad, choice)?;
    let size = nmax + 1;
    let mut entries = Vec::with_capacity(size * size);
    let mut modes = Vec::with_capacity(size * size);
    let mut max_err: f64 = 0.0;
    for m in 0..size {
        for n in 0..size {
            let v = form.value(m, n);
            entries.push([v.re, v.im]);
            match form.contour[m * size + n] {
                Some((_, err)) => {
                    modes.push(EntryMode::Quadrature);
                    max_err = max_err.max(err);
                }
                None => modes.push(EntryMode::Exact),
            }
        }
    }
    let diag: Vec<f64> = (0..size).map(|n| form.value(n, n).norm()).collect();
    let min_diag_abs = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let mut max_offdiag_rel: f64 = 0.0;
    for m in 0..size {
        for n in 0..size {
            if m != n {
                let scale = (diag[m] * diag[n]).sqrt();
                let rel = if scale > 0.0 { form.value(m, n).norm() / scale } else { f64::INFINITY };
                max_offdiag_rel = max_offdiag_rel.max(rel);
            }
        }
    }
    let big_n = spec.cutoff()?;
    let mut notes = Vec::new();
    if nmax as i64 > big_n {
        notes.push(format!(
            "contour entries keep the factor (n-N)_(N+1) relating the {}-fold difference of p_n to its continuous counterpart",
            big_n + 1
        ));
    }
    Ok(GramReport {
        family: spec.name().to_string(),
        params: spec.params().into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        nmax,
        entries,
        max_offdiag_rel,
        min_diag_abs,
        certified: max_offdiag_rel <= ORTHOGONALITY_TOLERANCE && min_diag_abs > 0.0,
        quad: *quad,
        tolerance: ORTHOGONALITY_TOLERANCE,
        modes,
        discrete: form.discrete.iter().map(|s| s.to_string()).collect(),
        max_quadrature_error: max_err,
        sigma: form.sigma,
        notes,
    })
}

/// Monic orthogonal polynomials obtained by Gram–Schmidt on `1, v, ..., v^nmax`
/// under the Sobolev product, `v` being the family variable.
pub fn characterize(spec: &FamilySpec, nmax: usize, quad: &QuadratureSpec) -> Result<Vec<CPoly>> {
    check_conditions(spec)?;
    let var = spec.var();
    let monomials: Vec<QPoly> = (0..=nmax).map(|k| QPoly::monomial(Scalar::one(), k, var)).collect();
    let form = FormMatrix::build(spec, &monomials, quad, &ContourChoice::default())?;
    let size = nmax + 1;
    let moments: Vec<Vec<Complex64>> = (0..size).map(|m| (0..size).map(|n| form.value(m, n)).collect()).collect();
    let bilinear = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, ai) in a.iter().enumerate() {
            if *ai == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                acc += ai * moments[i][j] * bj;
            }
        }
        acc
    };
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(size);
    let mut norms: Vec<Complex64> = Vec::with_capacity(size);
    for k in 0..size {
        let mut v = vec![Complex64::new(0.0, 0.0); size];
        v[k] = Complex64::new(1.0, 0.0);
        for (p, d) in basis.iter().zip(&norms) {
            let coef = bilinear(&v, p) / d;
            for (vi, pi) in v.iter_mut().zip(p) {
                *vi -= coef * pi;
            }
        }
        let pivot = bilinear(&v, &v);
        let scale = moments[k][k].norm();
        if !(pivot.norm() >= 1e-10 * scale) || pivot.norm() == 0.0 {
            return Err(Error::NumericBreakdown { step: k, pivot: pivot.norm(), scale });
        }
        basis.push(v);
        norms.push(pivot);
    }
    Ok(basis.into_iter().map(|c| CPoly::new(c, var)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{LatticeArgument, NuVariant, RacahBranch};

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    #[test]
    fn trivial_report() {
        let r = gram(&FamilySpec::hahn(s("1"), s("1"), 5), 0, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!(r.certified);
        assert_eq!(r.mode(0, 0), EntryMode::Exact);
        assert_eq!(r.max_offdiag_rel, 0.0);
    }

    #[test]
    fn hahn_gram_is_certified() {
        let quad = QuadratureSpec::default();
        for (a, b, n) in [("1", "1", 2), ("1/2", "3/2", 3)] {
            let spec = FamilySpec::hahn(s(a), s(b), n);
            let r = gram(&spec, n as usize + 5, &quad).unwrap();
            assert!(r.certified, "{spec}: {}", r.max_offdiag_rel);
            for m in 0..=n as usize {
                for k in 0..=n as usize {
                    assert_eq!(r.mode(m, k), EntryMode::Exact);
                    if m != k {
                        assert_eq!(r.entry(m, k), Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn violated_conditions_are_rejected() {
        let spec = FamilySpec::hahn(s("-4"), s("1"), 2);
        assert!(matches!(gram(&spec, 4, &QuadratureSpec::default()), Err(Error::ConditionViolated(_))));
    }

    #[test]
    fn json_schema() {
        let r = gram(&FamilySpec::krawtchouk(s("1/2"), 1), 3, &QuadratureSpec::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["family", "params", "nmax", "entries", "max_offdiag_rel", "certified", "quad"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["entries"].as_array().unwrap().len(), 16);
        assert_eq!(v["entries"][0].as_array().unwrap().len(), 2);
        assert_eq!(v["family"], "krawtchouk");
    }

    #[test]
    fn characterize_small_degrees_exactly() {
        let spec = FamilySpec::hahn(s("1"), s("1"), 2);
        let polys = characterize(&spec, 2, &QuadratureSpec::default()).unwrap();
        assert_eq!(polys[0].coeffs().len(), 1);
        for (n, p) in polys.iter().enumerate() {
            let exact = hypergeometric_build(&spec, n).unwrap().to_c64();
            for (a, b) in p.coeffs().iter().zip(exact.coeffs()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn characterize_recovers_hahn() {
        let spec = FamilySpec::hahn(s("1"), s("1"), 2);
        let polys = characterize(&spec, 5, &QuadratureSpec::default()).unwrap();
        for (n, p) in polys.iter().enumerate() {
            let exact = hypergeometric_build(&spec, n).unwrap().to_c64();
            assert_eq!(p.degree(), exact.degree());
            for (a, b) in p.coeffs().iter().zip(exact.coeffs()) {
                assert!((a - b).norm() <= 1e-6, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn lattice_families_report() {
        let quad = QuadratureSpec::default();
        let r = FamilySpec::racah(s("-4"), s("1/2"), s("1/3"), s("1/5"), RacahBranch::AlphaOne).unwrap();
        let rep = gram(&r, 3, &quad).unwrap();
        assert!(rep.certified);
        assert!(matches!(gram(&r, 5, &quad), Err(Error::ContourInvalid(_))));
        for spec in [
            FamilySpec::dual_hahn(s("-11/5"), s("1/2"), 1),
            FamilySpec::racah(s("-2"), s("1/3"), s("-11/5"), s("1/2"), RacahBranch::AlphaOne).unwrap(),
        ] {
            assert!(gram(&spec, 5, &quad).unwrap().certified, "{spec}");
            let real = ContourChoice { variant: NuVariant::RealDoubling, ..Default::default() };
            assert!(!gram_with(&spec, 5, &quad, &real).unwrap().certified);
            let squared = ContourChoice { argument: LatticeArgument::Squared, ..Default::default() };
            assert!(!gram_with(&spec, 5, &quad, &squared).unwrap().certified);
        }
    }
}
