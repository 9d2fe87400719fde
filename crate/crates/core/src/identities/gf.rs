use serde::Serialize;

use super::{CheckReport, Verdict};
use crate::algebra::{factorial, pochhammer, QPoly, Scalar, Var};
use crate::error::{degenerate, Error, Result};
use crate::families::{hypergeometric_build, FamilySpec};

/// Generating functions, each expanded as a power series in `t` whose
/// coefficients are polynomials in `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratingFunction {
    /// `1F1(-x; α+1 | -t) · 1F1(x-N; β+1 | t)`.
    Hahn,
    /// `(1 - (1-p)t/p)^x (1+t)^{N-x}`.
    Krawtchouk,
    /// `(1-t)^{N-x} · 2F1(-x, -x-δ; γ+1 | t)`.
    DualHahnFirst,
    /// `(1-t)^x · 2F1(x-N, x+γ+1; -δ-N | t)`.
    DualHahnSecond,
    /// `2F1(-x, -x+β-γ; β+δ+1 | t) · 2F1(x+α+1, x+γ+1; α-δ+1 | t)`.
    RacahFirst,
    /// `2F1(-x, -x-δ; γ+1 | t) · 2F1(x+α+1, x+β+δ+1; α+β-γ+1 | t)`.
    RacahSecond,
}

impl GeneratingFunction {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratingFunction::Hahn => "hahn",
            GeneratingFunction::Krawtchouk => "krawtchouk",
            GeneratingFunction::DualHahnFirst => "dual-hahn-1",
            GeneratingFunction::DualHahnSecond => "dual-hahn-2",
            GeneratingFunction::RacahFirst => "racah-1",
            GeneratingFunction::RacahSecond => "racah-2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            GeneratingFunction::Hahn,
            GeneratingFunction::Krawtchouk,
            GeneratingFunction::DualHahnFirst,
            GeneratingFunction::DualHahnSecond,
            GeneratingFunction::RacahFirst,
            GeneratingFunction::RacahSecond,
        ]
        .into_iter()
        .find(|g| g.name() == name)
    }
}

/// The generating functions available for a family.
pub fn generating_functions(spec: &FamilySpec) -> Vec<GeneratingFunction> {
    match spec {
        FamilySpec::Hahn { .. } => vec![GeneratingFunction::Hahn],
        FamilySpec::Krawtchouk { .. } => vec![GeneratingFunction::Krawtchouk],
        FamilySpec::DualHahn { .. } => vec![GeneratingFunction::DualHahnFirst, GeneratingFunction::DualHahnSecond],
        FamilySpec::Racah { .. } => vec![GeneratingFunction::RacahFirst, GeneratingFunction::RacahSecond],
        _ => vec![],
    }
}

type Series = Vec<QPoly>;

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

/// `x·u + v` as a polynomial in x.
fn lin(u: i64, v: Scalar) -> QPoly {
    QPoly::new(vec![v, sc(u)], Var::X)
}

/// `Σ_k Π(a_i)_k / Π(b_j)_k · z^k t^k / k!` up to `t^order`, with polynomial
/// numerator parameters.
fn hypergeometric_series(nums: &[QPoly], dens: &[Scalar], z: &Scalar, order: usize) -> Result<Series> {
    let mut out = Vec::with_capacity(order + 1);
    let mut term = QPoly::one(Var::X);
    for k in 0..=order {
        out.push(term.clone());
        let kk = sc(k as i64);
        let mut den = sc(k as i64 + 1);
        for b in dens {
            let f = b + &kk;
            if f.is_zero() {
                return Err(degenerate(format!("lower parameter {b} at order {}", k + 1)));
            }
            den = &den * &f;
        }
        for a in nums {
            term = term.mul(&a.add(&QPoly::constant(kk.clone(), Var::X)));
        }
        term = term.scale(&(z / &den));
    }
    Ok(out)
}

fn product(a: &Series, b: &Series) -> Series {
    (0..a.len())
        .map(|n| (0..=n).fold(QPoly::zero(Var::X), |acc, k| acc.add(&a[k].mul(&b[n - k]))))
        .collect()
}

fn nonzero(v: Scalar, label: &str) -> Result<Scalar> {
    if v.is_zero() {
        Err(degenerate(label))
    } else {
        Ok(v)
    }
}

/// `Π (a_i)_n` over `Π (b_j)_n · n!`, failing when the denominator vanishes.
fn ratio(nums: &[Scalar], dens: &[(Scalar, &str)], n: usize) -> Result<Scalar> {
    let mut num = Scalar::one();
    for a in nums {
        num = &num * &pochhammer(a, n);
    }
    let mut den = factorial(n);
    for (b, label) in dens {
        den = &den * &nonzero(pochhammer(b, n), label)?;
    }
    Ok(&num / &den)
}

/// Checks `Σ_n c_n p_n(x) t^n` against the expansion of a closed form to
/// order `t^order`, coefficient by coefficient as polynomials in x.
pub fn check_generating_function(spec: &FamilySpec, gf: GeneratingFunction, order: usize) -> Result<CheckReport> {
    let one = Scalar::one();
    let x_neg = lin(-1, Scalar::zero());
    let mismatch = || Error::InvalidArgument(format!("{} does not apply to {}", gf.name(), spec.name()));
    let (rhs, prefactor): (Series, Box<dyn Fn(usize) -> Result<Scalar>>) = match (gf, spec) {
        (GeneratingFunction::Hahn, FamilySpec::Hahn { alpha, beta, big_n }) => {
            let (a1, b1) = (alpha + &one, beta + &one);
            let left = hypergeometric_series(&[x_neg], std::slice::from_ref(&a1), &sc(-1), order)?;
            let right = hypergeometric_series(&[lin(1, sc(-big_n))], std::slice::from_ref(&b1), &one, order)?;
            let ab = alpha + beta;
            (
                product(&left, &right),
                Box::new(move |n| {
                    ratio(&[&ab + &sc(n as i64 + 1)], &[(b1.clone(), "(beta+1)_n"), (a1.clone(), "(alpha+1)_n")], n)
                }),
            )
        }
        (GeneratingFunction::Krawtchouk, FamilySpec::Krawtchouk { p, big_n }) => {
            let p = nonzero(p.clone(), "p")?;
            let c = &(&one - &p) / &p;
            let left = hypergeometric_series(&[x_neg], &[], &c, order)?;
            let right = hypergeometric_series(&[lin(1, sc(-big_n))], &[], &sc(-1), order)?;
            (
                product(&left, &right),
                Box::new(move |n| Ok(&sc(-1).powi(n as i64) / &(&factorial(n) * &p.powi(n as i64)))),
            )
        }
        (GeneratingFunction::DualHahnFirst, FamilySpec::DualHahn { gamma, delta, big_n }) => {
            let g1 = gamma + &one;
            let left = hypergeometric_series(&[lin(1, sc(-big_n))], &[], &one, order)?;
            let right = hypergeometric_series(&[x_neg.clone(), lin(-1, -delta.clone())], std::slice::from_ref(&g1), &one, order)?;
            (product(&left, &right), Box::new(move |n| ratio(&[], &[(g1.clone(), "(gamma+1)_n")], n)))
        }
        (GeneratingFunction::DualHahnSecond, FamilySpec::DualHahn { gamma, delta, big_n }) => {
            let d = -(delta + &sc(*big_n));
            let left = hypergeometric_series(&[x_neg], &[], &one, order)?;
            let right =
                hypergeometric_series(&[lin(1, sc(-big_n)), lin(1, gamma + &one)], std::slice::from_ref(&d), &one, order)?;
            (product(&left, &right), Box::new(move |n| ratio(&[], &[(d.clone(), "(-delta-N)_n")], n)))
        }
        (GeneratingFunction::RacahFirst, FamilySpec::Racah { alpha, beta, gamma, delta, .. }) => {
            let (bd, ad) = (&(beta + delta) + &one, &(alpha - delta) + &one);
            let left = hypergeometric_series(&[x_neg, lin(-1, beta - gamma)], std::slice::from_ref(&bd), &one, order)?;
            let right =
                hypergeometric_series(&[lin(1, alpha + &one), lin(1, gamma + &one)], std::slice::from_ref(&ad), &one, order)?;
            let ab = alpha + beta;
            (
                product(&left, &right),
                Box::new(move |n| {
                    ratio(
                        &[&ab + &sc(n as i64 + 1)],
                        &[(ad.clone(), "(alpha-delta+1)_n"), (bd.clone(), "(beta+delta+1)_n")],
                        n,
                    )
                }),
            )
        }
        (GeneratingFunction::RacahSecond, FamilySpec::Racah { alpha, beta, gamma, delta, .. }) => {
            let (g1, abg) = (gamma + &one, &(&(alpha + beta) - gamma) + &one);
            let left = hypergeometric_series(&[x_neg, lin(-1, -delta.clone())], std::slice::from_ref(&g1), &one, order)?;
            let right = hypergeometric_series(
                &[lin(1, alpha + &one), lin(1, &(beta + delta) + &one)],
                std::slice::from_ref(&abg),
                &one,
                order,
            )?;
            let ab = alpha + beta;
            (
                product(&left, &right),
                Box::new(move |n| {
                    ratio(
                        &[&ab + &sc(n as i64 + 1)],
                        &[(abg.clone(), "(alpha+beta-gamma+1)_n"), (g1.clone(), "(gamma+1)_n")],
                        n,
                    )
                }),
            )
        }
        _ => return Err(mismatch()),
    };
    let lattice = spec.lattice();
    let mut verdict = Verdict::ExactPass;
    for (n, coeff) in rhs.iter().enumerate() {
        let lhs = lattice.to_x(&hypergeometric_build(spec, n)?).scale(&prefactor(n)?);
        if &lhs != coeff {
            let diff = lhs.sub(coeff);
            let j = (0..diff.coeffs().len()).find(|&j| !diff.coeff(j).is_zero()).unwrap_or(0);
            verdict = Verdict::Fail(format!(
                "t^{n}: coefficient of x^{j} is {} on the left and {} on the right",
                lhs.coeff(j),
                coeff.coeff(j)
            ));
            break;
        }
    }
    Ok(CheckReport::new(&format!("generating-function/{}", gf.name()), spec, order, None, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::RacahBranch;
    use proptest::prelude::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    #[test]
    fn constant_term_is_one() {
        let series = hypergeometric_series(&[lin(-1, Scalar::zero())], &[s("2")], &s("-1"), 0).unwrap();
        assert_eq!(series, vec![QPoly::one(Var::X)]);
    }

    #[test]
    fn examples() {
        let k = FamilySpec::krawtchouk(s("1/2"), 2);
        assert!(check_generating_function(&k, GeneratingFunction::Krawtchouk, 4).unwrap().passed());
        let h = FamilySpec::hahn(s("1"), s("1"), 3);
        assert!(check_generating_function(&h, GeneratingFunction::Hahn, 5).unwrap().passed());
        let d = FamilySpec::dual_hahn(s("3/7"), s("1/2"), 4);
        for gf in generating_functions(&d) {
            assert!(check_generating_function(&d, gf, 6).unwrap().passed(), "{gf:?}");
        }
        let r = FamilySpec::racah(s("-4"), s("2/5"), s("3/7"), s("1/2"), RacahBranch::AlphaOne).unwrap();
        for gf in generating_functions(&r) {
            assert!(check_generating_function(&r, gf, 6).unwrap().passed(), "{gf:?}");
        }
    }

    #[test]
    fn mismatches_are_reported() {
        let h = FamilySpec::hahn(s("1"), s("1"), 3);
        assert!(check_generating_function(&h, GeneratingFunction::Krawtchouk, 3).is_err());
        let d = FamilySpec::dual_hahn(s("1/3"), s("2"), 1);
        assert!(matches!(
            check_generating_function(&d, GeneratingFunction::DualHahnSecond, 4),
            Err(Error::DegenerateParameters { .. })
        ));
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (1i64..30, 2i64..9).prop_map(|(p, q)| Scalar::ratio(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn generating_functions_hold(a in rational(), b in rational(), big_n in 0i64..=5, p in 1i64..9) {
            let order = 6;
            let passes = |spec: &FamilySpec, gf| match check_generating_function(spec, gf, order) {
                Ok(r) => r.passed(),
                Err(Error::DegenerateParameters { .. }) => true,
                Err(e) => panic!("{e}"),
            };
            let h = FamilySpec::hahn(a.clone(), b.clone(), big_n);
            prop_assert!(passes(&h, GeneratingFunction::Hahn));
            let k = FamilySpec::krawtchouk(Scalar::ratio(p, 10), big_n);
            prop_assert!(passes(&k, GeneratingFunction::Krawtchouk));
            let d = FamilySpec::dual_hahn(a.clone(), b.clone(), big_n);
            for gf in generating_functions(&d) {
                prop_assert!(passes(&d, gf));
            }
            let r = FamilySpec::racah(Scalar::from_i64(-big_n - 1), a, b, Scalar::ratio(1, 3), RacahBranch::AlphaOne).unwrap();
            for gf in generating_functions(&r) {
                prop_assert!(passes(&r, gf));
            }
        }
    }
}
