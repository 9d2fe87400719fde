use std::io::Write;

use anyhow::Context;
use clap::ValueEnum;
use opoly::families::{hypergeometric_build, ttrr_build, RacahBranch};
use opoly::identities::{
    check_delta_relations, check_difference_equation, check_factorization, check_generating_function,
    check_rodrigues, generating_functions, limit_probe, CheckReport, GeneratingFunction, LimitRelation,
};
use opoly::sobolev::gram_with;
use opoly::zeros::{roots, zero_structure_report};
use opoly::{Error, FamilySpec, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::params::{Family, ParamArgs, QuadArgs};
use crate::{Format, Outcome, UsageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Path {
    Hypergeometric,
    Ttrr,
    /// Build both ways and require equality.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityId {
    DeltaRelations,
    DifferenceEquation,
    Rodrigues,
    Factorization,
    GeneratingFunction,
    All,
}

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn emit(line: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").context("writing to stdout")
}

#[derive(Serialize)]
struct CoeffsReport<'a> {
    family: &'a str,
    params: std::collections::BTreeMap<&'a str, String>,
    n: usize,
    var: &'a str,
    path: &'a str,
    coeffs: Vec<String>,
}

pub fn coeffs(spec: &FamilySpec, n: usize, path: Path, format: Format) -> anyhow::Result<Outcome> {
    let (poly, label, agree) = match path {
        Path::Hypergeometric => (hypergeometric_build(spec, n)?, "hypergeometric", true),
        Path::Ttrr => (ttrr_build(spec, n)?, "ttrr", true),
        Path::Both => {
            let h = hypergeometric_build(spec, n)?;
            let agree = ttrr_build(spec, n)? == h;
            (h, "both", agree)
        }
    };
    let coeffs = poly.coeff_strings();
    let var = match spec.var() {
        opoly::Var::X => "x",
        opoly::Var::Lambda => "lambda",
    };
    match format {
        Format::Json => {
            let params = spec.params().into_iter().map(|(k, v)| (k, v.to_string())).collect();
            let report = CoeffsReport { family: spec.name(), params, n, var, path: label, coeffs };
            emit(&serde_json::to_string(&report)?)?;
        }
        Format::Csv => {
            emit("degree,coeff")?;
            for (k, c) in coeffs.iter().enumerate() {
                emit(&format!("{k},{c}"))?;
            }
        }
        Format::Pretty => emit(&format!("{spec}, n = {n} ({label}): {poly}"))?,
    }
    Ok(outcome(agree))
}

pub fn gram(spec: &FamilySpec, nmax: usize, quad: &QuadArgs, format: Format) -> anyhow::Result<Outcome> {
    let report = gram_with(spec, nmax, &quad.quad(), &quad.choice())?;
    match format {
        Format::Pretty => {
            emit(&format!(
                "{spec}, nmax = {nmax}: certified = {}, max off-diagonal ratio = {:e}, min |diagonal| = {:e}",
                report.certified, report.max_offdiag_rel, report.min_diag_abs
            ))?;
            for note in &report.notes {
                emit(&format!("  {note}"))?;
            }
        }
        Format::Csv => {
            emit("m,n,re,im,mode")?;
            for m in 0..=nmax {
                for n in 0..=nmax {
                    let v = report.entry(m, n);
                    emit(&format!("{m},{n},{},{},{:?}", v.re, v.im, report.mode(m, n)).to_lowercase())?;
                }
            }
        }
        Format::Json => emit(&report.to_json())?,
    }
    Ok(outcome(report.certified))
}

fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(1..=30), rng.gen_range(1..=8))
}

/// Random admissible parameters of the same family as `family`.
fn draw(family: Family, big_n: Option<i64>, rng: &mut ChaCha8Rng) -> anyhow::Result<FamilySpec> {
    let big_n = big_n.unwrap_or_else(|| rng.gen_range(0..=5));
    Ok(match family {
        Family::Hahn => FamilySpec::hahn(rational(rng), rational(rng), big_n),
        Family::DualHahn => FamilySpec::dual_hahn(rational(rng), rational(rng), big_n),
        Family::Krawtchouk => FamilySpec::krawtchouk(Scalar::ratio(rng.gen_range(1..=19), 20), big_n),
        Family::Racah => FamilySpec::racah(
            Scalar::from_i64(-big_n - 1),
            rational(rng),
            rational(rng),
            rational(rng),
            RacahBranch::AlphaOne,
        )?,
        other => return Err(UsageError(format!("random draws are not available for {other:?}")).into()),
    })
}

fn identity_reports(spec: &FamilySpec, id: IdentityId, n: usize, k: Option<usize>, order: usize) -> opoly::Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let hahn = matches!(spec, FamilySpec::Hahn { .. });
    let finite_beyond = spec.cutoff().map(|big_n| n as i64 > big_n).unwrap_or(false);
    let want = |x: IdentityId| id == x || id == IdentityId::All;
    if want(IdentityId::DeltaRelations) && (hahn || id != IdentityId::All) {
        let ks: Vec<usize> = match k {
            Some(k) => vec![k],
            None => (0..=n).collect(),
        };
        for k in ks {
            out.push(check_delta_relations(spec, n, k)?);
        }
    }
    if want(IdentityId::DifferenceEquation) && (hahn || id != IdentityId::All) {
        out.push(check_difference_equation(spec, n)?);
    }
    if want(IdentityId::Rodrigues) && (hahn || id != IdentityId::All) {
        out.push(check_rodrigues(spec, n)?);
    }
    if want(IdentityId::Factorization) && (finite_beyond || id != IdentityId::All) {
        match check_factorization(spec, n) {
            Ok(r) => out.push(r),
            Err(Error::ConditionViolated(_)) if id == IdentityId::All => {}
            Err(e) => return Err(e),
        }
    }
    if want(IdentityId::GeneratingFunction) {
        let forms = generating_functions(spec);
        if forms.is_empty() && id != IdentityId::All {
            return Err(Error::InvalidArgument(format!("no generating function is checked for {}", spec.name())));
        }
        for gf in forms {
            out.push(check_generating_function(spec, gf, order)?);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn check(
    family: Family,
    params: &ParamArgs,
    id: IdentityId,
    n: usize,
    k: Option<usize>,
    order: usize,
    draws: Option<usize>,
    seed: u64,
) -> anyhow::Result<Outcome> {
    let specs = match draws {
        None => vec![params.spec(family)?],
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| draw(family, params.big_n, &mut rng)).collect::<anyhow::Result<Vec<_>>>()?
        }
    };
    let results: Vec<opoly::Result<Vec<CheckReport>>> =
        specs.par_iter().map(|spec| identity_reports(spec, id, n, k, order)).collect();
    let mut pass = true;
    for result in results {
        for report in result? {
            pass &= report.passed();
            emit(&report.to_json())?;
        }
    }
    Ok(outcome(pass))
}

pub fn gf(spec: &FamilySpec, order: usize, form: Option<&str>) -> anyhow::Result<Outcome> {
    let forms = match form {
        Some(name) => vec![GeneratingFunction::from_name(name)
            .ok_or_else(|| UsageError(format!("unknown generating function {name}")))?],
        None => generating_functions(spec),
    };
    if forms.is_empty() {
        return Err(Error::InvalidArgument(format!("no generating function is checked for {}", spec.name())).into());
    }
    let mut pass = true;
    for gf in forms {
        let report = check_generating_function(spec, gf, order)?;
        pass &= report.passed();
        emit(&report.to_json())?;
    }
    Ok(outcome(pass))
}

fn target_spec(relation: LimitRelation, params: &ParamArgs) -> anyhow::Result<FamilySpec> {
    let family = match relation.target_family() {
        "hahn" => Family::Hahn,
        "dual-hahn" => Family::DualHahn,
        "krawtchouk" => Family::Krawtchouk,
        _ => Family::Meixner,
    };
    params.spec(family)
}

pub fn limits(relation: &str, params: &ParamArgs, n: usize, ladder: &str, format: Format) -> anyhow::Result<Outcome> {
    let relation = LimitRelation::from_name(relation).ok_or_else(|| {
        let names: Vec<&str> = LimitRelation::ALL.iter().map(|r| r.name()).collect();
        UsageError(format!("unknown relation {relation}; expected one of {}", names.join(", ")))
    })?;
    let ladder: Vec<Scalar> = ladder
        .split(',')
        .map(|t| t.trim().parse::<Scalar>().map_err(|e| UsageError(format!("ladder value {t}: {e}"))))
        .collect::<Result<_, _>>()?;
    let report = limit_probe(relation, &target_spec(relation, params)?, n, &ladder)?;
    match format {
        Format::Pretty => {
            emit(&format!("{} n = {n}: slope = {:?}, decreasing = {}", report.relation, report.slope, report.decreasing))?;
            for (t, e) in report.ladder.iter().zip(&report.errors) {
                emit(&format!("  t = {t}: {}", e.map_or("degenerate".to_string(), |e| format!("{e:e}"))))?;
            }
        }
        Format::Csv => {
            emit("t,error")?;
            for (t, e) in report.ladder.iter().zip(&report.errors) {
                emit(&format!("{t},{}", e.map_or(String::new(), |e| e.to_string())))?;
            }
        }
        Format::Json => emit(&report.to_json())?,
    }
    Ok(outcome(report.decreasing))
}

pub fn zeros(spec: &FamilySpec, n: usize, format: Format) -> anyhow::Result<Outcome> {
    let beyond = spec.cutoff().map(|big_n| n as i64 > big_n).unwrap_or(false);
    let (set, pass, json) = if beyond {
        let report = zero_structure_report(spec, n)?;
        let json = serde_json::to_string(&report)?;
        (report.zeros, report.passed, json)
    } else {
        let set = roots(spec, n)?;
        let json = set.to_json();
        (set, true, json)
    };
    match format {
        Format::Csv => print!("{}", set.to_csv()),
        Format::Json => emit(&json)?,
        Format::Pretty => {
            emit(&format!("{spec}, n = {n}: mass points {:?}", set.integer_roots))?;
            for r in set.sorted_residuals() {
                emit(&format!("  {:+.12} {:+.12}i  (backward error {:.1e})", r.re, r.im, r.backward_error))?;
            }
        }
    }
    Ok(outcome(pass))
}
