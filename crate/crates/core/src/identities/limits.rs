use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::params_map;
use crate::algebra::{pochhammer, QPoly, Scalar};
use crate::error::{degenerate, Error, Result};
use crate::families::{hypergeometric_build, FamilySpec, RacahBranch};

/// Limit relations between families, parameterized by the target family.
///
/// Each relation builds a source polynomial depending on a ladder parameter
/// `t` that tends to the target polynomial as `t → ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitRelation {
    /// `R_n(λ(x); α, β, -N-1, t) / (β+t+1)_n → h_n^{α,β}(x; N)`.
    RacahToHahnA,
    /// `R_n(λ(x); α, β, t, -β-N-1) / (t+1)_n → h_n^{α,β}(x; N)`.
    RacahToHahnB,
    /// `R_n(λ(x); -N-1, β+γ+N+1, γ, t) / (β+γ+N+t+2)_n → h_n^{γ,β}(x; N)`,
    /// with the target's `α` playing the part of `γ`.
    RacahToHahnC,
    /// `R_n(λ; -N-1, t, γ, δ) → R_n(λ; γ, δ, N)`.
    RacahToDualHahnA,
    /// `R_n(λ; t, -δ-N-1, γ, δ) → R_n(λ; γ, δ, N)`.
    RacahToDualHahnB,
    /// `R_n(λ; γ, t, -N-1, γ+δ+N+1) → R_n(λ; γ, δ, N)`.
    RacahToDualHahnC,
    /// `h_n^{pt,(1-p)t}(x; N) → K_n(x; p, N)`.
    HahnToKrawtchouk,
    /// `R_n(λ(x); pt, (1-p)t, N) p^n / (pt+1)_n → K_n(x; p, N)`.
    DualHahnToKrawtchouk,
    /// `(-i)^n p_n(ix; 0, -t/c, t, β) → M_n(x; β, c)`.
    ContinuousHahnToMeixner,
}

impl LimitRelation {
    pub const ALL: [LimitRelation; 9] = [
        LimitRelation::RacahToHahnA,
        LimitRelation::RacahToHahnB,
        LimitRelation::RacahToHahnC,
        LimitRelation::RacahToDualHahnA,
        LimitRelation::RacahToDualHahnB,
        LimitRelation::RacahToDualHahnC,
        LimitRelation::HahnToKrawtchouk,
        LimitRelation::DualHahnToKrawtchouk,
        LimitRelation::ContinuousHahnToMeixner,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LimitRelation::RacahToHahnA => "racah-to-hahn-a",
            LimitRelation::RacahToHahnB => "racah-to-hahn-b",
            LimitRelation::RacahToHahnC => "racah-to-hahn-c",
            LimitRelation::RacahToDualHahnA => "racah-to-dual-hahn-a",
            LimitRelation::RacahToDualHahnB => "racah-to-dual-hahn-b",
            LimitRelation::RacahToDualHahnC => "racah-to-dual-hahn-c",
            LimitRelation::HahnToKrawtchouk => "hahn-to-krawtchouk",
            LimitRelation::DualHahnToKrawtchouk => "dual-hahn-to-krawtchouk",
            LimitRelation::ContinuousHahnToMeixner => "continuous-hahn-to-meixner",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        LimitRelation::ALL.into_iter().find(|r| r.name() == name)
    }

    /// Name of the family the relation converges to.
    pub fn target_family(&self) -> &'static str {
        match self {
            LimitRelation::RacahToHahnA | LimitRelation::RacahToHahnB | LimitRelation::RacahToHahnC => "hahn",
            LimitRelation::RacahToDualHahnA | LimitRelation::RacahToDualHahnB | LimitRelation::RacahToDualHahnC => {
                "dual-hahn"
            }
            LimitRelation::HahnToKrawtchouk | LimitRelation::DualHahnToKrawtchouk => "krawtchouk",
            LimitRelation::ContinuousHahnToMeixner => "meixner",
        }
    }
}

/// Errors of one limit relation along a ladder of parameter values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitLadderReport {
    pub relation: String,
    pub params: BTreeMap<String, String>,
    pub n: usize,
    pub ladder: Vec<String>,
    /// Largest coefficient distance to the limit, per ladder point; `None` where
    /// the source polynomial is degenerate.
    pub errors: Vec<Option<f64>>,
    /// Least-squares slope of `ln e` against `ln t` over the tail of the ladder.
    pub slope: Option<f64>,
    /// Errors strictly decrease over the last three usable points.
    pub decreasing: bool,
    pub flagged: Vec<String>,
}

impl LimitLadderReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

fn nonzero_div(p: QPoly, d: Scalar, label: &str) -> Result<QPoly> {
    if d.is_zero() {
        return Err(degenerate(label));
    }
    Ok(p.scale(&d.checked_inv().expect("nonzero")))
}

fn mismatch(relation: LimitRelation, target: &FamilySpec) -> Error {
    Error::InvalidArgument(format!(
        "{} converges to a {} family, got {}",
        relation.name(),
        relation.target_family(),
        target.name()
    ))
}

/// The source polynomial at ladder value `t`, written in the target's variable
/// (`x` for Hahn, Krawtchouk and Meixner targets, `λ` for dual Hahn targets).
pub fn limit_source(relation: LimitRelation, target: &FamilySpec, n: usize, t: &Scalar) -> Result<QPoly> {
    let one = Scalar::one();
    match (relation, target) {
        (LimitRelation::RacahToHahnA, FamilySpec::Hahn { alpha, beta, big_n }) => {
            let r = FamilySpec::racah(alpha.clone(), beta.clone(), sc(-big_n - 1), t.clone(), RacahBranch::GammaOne)?;
            let p = r.lattice().to_x(&hypergeometric_build(&r, n)?);
            nonzero_div(p, pochhammer(&(&(beta + t) + &one), n), "(beta+delta+1)_n")
        }
        (LimitRelation::RacahToHahnB, FamilySpec::Hahn { alpha, beta, big_n }) => {
            let delta = -(beta + &sc(big_n + 1));
            let r = FamilySpec::racah(alpha.clone(), beta.clone(), t.clone(), delta, RacahBranch::BetaDelta)?;
            let p = r.lattice().to_x(&hypergeometric_build(&r, n)?);
            nonzero_div(p, pochhammer(&(t + &one), n), "(gamma+1)_n")
        }
        (LimitRelation::RacahToHahnC, FamilySpec::Hahn { alpha, beta, big_n }) => {
            let beta_r = &(beta + alpha) + &sc(big_n + 1);
            let r = FamilySpec::racah(sc(-big_n - 1), beta_r.clone(), alpha.clone(), t.clone(), RacahBranch::AlphaOne)?;
            let p = r.lattice().to_x(&hypergeometric_build(&r, n)?);
            nonzero_div(p, pochhammer(&(&(&beta_r + t) + &one), n), "(beta+delta+1)_n")
        }
        (LimitRelation::RacahToDualHahnA, FamilySpec::DualHahn { gamma, delta, big_n }) => {
            let r = FamilySpec::racah(sc(-big_n - 1), t.clone(), gamma.clone(), delta.clone(), RacahBranch::AlphaOne)?;
            hypergeometric_build(&r, n)
        }
        (LimitRelation::RacahToDualHahnB, FamilySpec::DualHahn { gamma, delta, big_n }) => {
            let beta = -(delta + &sc(big_n + 1));
            let r = FamilySpec::racah(t.clone(), beta, gamma.clone(), delta.clone(), RacahBranch::BetaDelta)?;
            hypergeometric_build(&r, n)
        }
        (LimitRelation::RacahToDualHahnC, FamilySpec::DualHahn { gamma, delta, big_n }) => {
            let delta_r = &(gamma + delta) + &sc(big_n + 1);
            let r = FamilySpec::racah(gamma.clone(), t.clone(), sc(-big_n - 1), delta_r, RacahBranch::GammaOne)?;
            hypergeometric_build(&r, n)
        }
        (LimitRelation::HahnToKrawtchouk, FamilySpec::Krawtchouk { p, big_n }) => {
            hypergeometric_build(&FamilySpec::hahn(p * t, &(&one - p) * t, *big_n), n)
        }
        (LimitRelation::DualHahnToKrawtchouk, FamilySpec::Krawtchouk { p, big_n }) => {
            let d = FamilySpec::dual_hahn(p * t, &(&one - p) * t, *big_n);
            let q = d.lattice().to_x(&hypergeometric_build(&d, n)?).scale(&p.powi(n as i64));
            nonzero_div(q, pochhammer(&(&(p * t) + &one), n), "(pt+1)_n")
        }
        (LimitRelation::ContinuousHahnToMeixner, FamilySpec::Meixner { beta, c }) => {
            let c_inv = c.checked_inv().ok_or_else(|| degenerate("c"))?;
            let ch = FamilySpec::continuous_hahn(Scalar::zero(), -(t * &c_inv), t.clone(), beta.clone());
            Ok(hypergeometric_build(&ch, n)?
                .affine_substitute(&Scalar::i(), &Scalar::zero())
                .scale(&(-Scalar::i()).powi(n as i64)))
        }
        _ => Err(mismatch(relation, target)),
    }
}

/// The limit polynomial in the same variable as [`limit_source`].
fn limit_target(relation: LimitRelation, target: &FamilySpec, n: usize) -> Result<QPoly> {
    let p = hypergeometric_build(target, n)?;
    Ok(match relation {
        LimitRelation::RacahToDualHahnA | LimitRelation::RacahToDualHahnB | LimitRelation::RacahToDualHahnC => p,
        _ => target.lattice().to_x(&p),
    })
}

/// Least-squares slope of `ln e` against `ln t` over the last `max(3, ⌈len/2⌉)` points.
fn tail_slope(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, e)| e > 0.0).collect();
    if usable.len() < 2 || usable.len() != points.len() {
        return None;
    }
    let take = usable.len().div_ceil(2).max(3).min(usable.len());
    let tail = &usable[usable.len() - take..];
    let xs: Vec<f64> = tail.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = tail.iter().map(|(_, e)| e.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Evaluates a limit relation along an increasing ladder.
pub fn limit_probe(relation: LimitRelation, target: &FamilySpec, n: usize, ladder: &[Scalar]) -> Result<LimitLadderReport> {
    if ladder.windows(2).any(|w| w[0].to_complex().re >= w[1].to_complex().re) || ladder.iter().any(|t| !t.is_real()) {
        return Err(Error::InvalidArgument("the ladder must be real and strictly increasing".into()));
    }
    let limit = limit_target(relation, target, n)?;
    let results: Vec<Result<f64>> = ladder
        .par_iter()
        .map(|t| Ok(limit_source(relation, target, n, t)?.max_coeff_distance(&limit)))
        .collect();
    let mut errors = Vec::with_capacity(ladder.len());
    let mut flagged = Vec::new();
    for (t, r) in ladder.iter().zip(results) {
        match r {
            Ok(e) => errors.push(Some(e)),
            Err(Error::DegenerateParameters { factor }) => {
                flagged.push(format!("t = {t}: {factor} vanishes"));
                errors.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let points: Vec<(f64, f64)> =
        ladder.iter().zip(&errors).filter_map(|(t, e)| e.map(|e| (t.to_complex().re, e))).collect();
    let last: Vec<f64> = points.iter().rev().take(3).map(|p| p.1).collect();
    let all_zero = points.iter().all(|p| p.1 == 0.0);
    let decreasing = all_zero || (last.len() == 3.min(points.len()) && last.windows(2).all(|w| w[0] < w[1]));
    Ok(LimitLadderReport {
        relation: relation.name().to_string(),
        params: params_map(target),
        n,
        ladder: ladder.iter().map(|t| t.to_string()).collect(),
        errors,
        slope: tail_slope(&points),
        decreasing,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn ladder() -> Vec<Scalar> {
        vec![s("100"), s("1000"), s("10000")]
    }

    fn target_for(relation: LimitRelation) -> FamilySpec {
        match relation.target_family() {
            "hahn" => FamilySpec::hahn(s("1/2"), s("3/2"), 3),
            "dual-hahn" => FamilySpec::dual_hahn(s("2/3"), s("1/4"), 3),
            "krawtchouk" => FamilySpec::krawtchouk(s("1/3"), 3),
            _ => FamilySpec::meixner(s("3/2"), s("-1/2")),
        }
    }

    #[test]
    fn degree_zero_is_exact() {
        for relation in LimitRelation::ALL {
            let r = limit_probe(relation, &target_for(relation), 0, &ladder()).unwrap();
            assert!(r.errors.iter().all(|e| *e == Some(0.0)), "{}", relation.name());
            assert!(r.decreasing);
            assert_eq!(r.slope, None);
        }
    }

    #[test]
    fn every_relation_converges_at_first_order() {
        for relation in LimitRelation::ALL {
            for n in 1..=5 {
                let r = limit_probe(relation, &target_for(relation), n, &ladder()).unwrap();
                assert!(r.decreasing, "{} n={n}: {:?}", relation.name(), r.errors);
                if r.errors.iter().all(|e| *e == Some(0.0)) {
                    continue;
                }
                let slope = r.slope.unwrap_or_else(|| panic!("{} n={n}: {:?}", relation.name(), r.errors));
                assert!((slope + 1.0).abs() < 0.2, "{} n={n}: slope {slope}", relation.name());
            }
        }
    }

    #[test]
    fn krawtchouk_example() {
        let k = FamilySpec::krawtchouk(s("1/2"), 3);
        let r = limit_probe(LimitRelation::HahnToKrawtchouk, &k, 2, &ladder()).unwrap();
        assert!((r.slope.unwrap() + 1.0).abs() <= 0.2);
        let e: Vec<f64> = r.errors.iter().map(|e| e.unwrap()).collect();
        assert!(e[2] <= 2e-2 * e[0], "{e:?}");
    }

    #[test]
    fn names_and_errors() {
        for relation in LimitRelation::ALL {
            assert_eq!(LimitRelation::from_name(relation.name()), Some(relation));
        }
        let k = FamilySpec::krawtchouk(s("1/2"), 3);
        assert!(limit_probe(LimitRelation::RacahToHahnA, &k, 2, &ladder()).is_err());
        assert!(limit_probe(LimitRelation::HahnToKrawtchouk, &k, 2, &[s("10"), s("5")]).is_err());
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1e2, 1e3, 1e4, 1e5].iter().map(|&t: &f64| (t, 3.0 / t)).collect();
        assert!((tail_slope(&pts).unwrap() + 1.0).abs() < 1e-12);
    }
}
