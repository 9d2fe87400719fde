use super::{compare, CheckReport, Verdict};
use crate::algebra::{QPoly, Scalar, Var};
use crate::error::{Error, Result};
use crate::families::{hypergeometric_build, FamilySpec, RacahBranch};

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

/// `(left, right)` with `p_n = left · right` for `n ≥ N+1`; `left` is the
/// degree `N+1` member, which vanishes on the mass points.
///
/// Hahn and Krawtchouk factors are polynomials in x; Racah and dual Hahn
/// factors are polynomials in `λ(x) = x(x+γ+δ+1)`.
pub fn factorized_form(spec: &FamilySpec, n: usize) -> Result<(QPoly, QPoly)> {
    let big_n = spec.cutoff()?;
    if (n as i64) < big_n + 1 {
        return Err(Error::InvalidArgument(format!("factorization needs n >= N+1 = {}", big_n + 1)));
    }
    let m = n - big_n as usize - 1;
    let one = Scalar::one();
    let half = Scalar::ratio(1, 2);
    let nn = sc(big_n);
    let sign = sc(-1).powi(m as i64);
    let (left, right) = match spec {
        FamilySpec::Hahn { alpha, beta, .. } => {
            // (x-N)_{N+1} (-i)^m p_m(ix; N+1, β+N+1, 1, α+1)
            let left = QPoly::rising(&-nn.clone(), big_n as usize + 1, Var::X);
            let ch = FamilySpec::continuous_hahn(&nn + &one, &(beta + &nn) + &one, one.clone(), alpha + &one);
            let right = hypergeometric_build(&ch, m)?
                .affine_substitute(&Scalar::i(), &Scalar::zero())
                .scale(&(-Scalar::i()).powi(m as i64));
            (left, right)
        }
        FamilySpec::Krawtchouk { p, .. } => {
            // K_{N+1}(x) M_m(x-N-1; N+2, p/(p-1))
            let left = hypergeometric_build(spec, big_n as usize + 1)?;
            let pm1 = p - &one;
            if pm1.is_zero() {
                return Err(crate::error::degenerate("p-1"));
            }
            let meixner = FamilySpec::meixner(&nn + &sc(2), p / &pm1);
            let right = hypergeometric_build(&meixner, m)?.shift(&-(&nn + &one));
            (left, right)
        }
        FamilySpec::Racah { beta, gamma, delta, branch, .. } => {
            if *branch != RacahBranch::AlphaOne {
                return Err(Error::ConditionViolated("the Racah factorization needs alpha+1 = -N".into()));
            }
            let s = &(gamma + delta) + &one;
            let left = hypergeometric_build(spec, big_n as usize + 1)?;
            let wilson = FamilySpec::wilson(
                &nn + &(&(&(gamma + delta) + &sc(3)) * &half),
                &(&(&one - gamma) - delta) * &half,
                beta + &(&(&(delta - gamma) + &one) * &half),
                &(&(gamma - delta) + &one) * &half,
            );
            let right = wilson_to_lattice(&hypergeometric_build(&wilson, m)?, &s).scale(&sign);
            (left, right)
        }
        FamilySpec::DualHahn { gamma, delta, .. } => {
            let s = &(gamma + delta) + &one;
            let left = hypergeometric_build(spec, big_n as usize + 1)?;
            let cdh = FamilySpec::continuous_dual_hahn(
                &nn + &(&(&(gamma + delta) + &sc(3)) * &half),
                &(&(&one - gamma) - delta) * &half,
                &(&(gamma - delta) + &one) * &half,
            );
            let right = wilson_to_lattice(&hypergeometric_build(&cdh, m)?, &s).scale(&sign);
            (left, right)
        }
        _ => return Err(Error::NotFinite(spec.name().into())),
    };
    Ok((left, right))
}

/// `q(-λ - s^2/4)` as a polynomial in λ.
fn wilson_to_lattice(q: &QPoly, s: &Scalar) -> QPoly {
    q.affine_substitute(&sc(-1), &-(&(s * s) / &sc(4))).with_var(Var::Lambda)
}

/// Checks `p_n = left · right` exactly and that `left` vanishes on the mass points.
pub fn check_factorization(spec: &FamilySpec, n: usize) -> Result<CheckReport> {
    let (left, right) = factorized_form(spec, n)?;
    let lhs = hypergeometric_build(spec, n)?;
    let mut verdict = compare("factorization", &lhs, &left.mul(&right));
    if verdict.passed() {
        let lat = spec.lattice();
        for x in 0..=spec.cutoff()? {
            let v = left.eval(&lat.lambda_at(&sc(x)));
            if !v.is_zero() {
                verdict = Verdict::Fail(format!("left factor is {v} at x = {x}"));
                break;
            }
        }
    }
    Ok(CheckReport::new("factorization", spec, n, None, verdict))
}

/// Largest coefficient distance between the factorized Hahn form at
/// `α = pt, β = (1-p)t` and the factorized Krawtchouk form, both as
/// polynomials in x.
pub fn factorization_limit_gap(p: &Scalar, big_n: i64, n: usize, t: &Scalar) -> Result<f64> {
    let one = Scalar::one();
    let hahn = FamilySpec::hahn(p * t, &(&one - p) * t, big_n);
    let kraw = FamilySpec::krawtchouk(p.clone(), big_n);
    let (hl, hr) = factorized_form(&hahn, n)?;
    let (kl, kr) = factorized_form(&kraw, n)?;
    let left_gap = hl.max_coeff_distance(&kl);
    let right_gap = hr.max_coeff_distance(&kr);
    Ok(left_gap.max(right_gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    #[test]
    fn cutoff_member_is_the_mass_polynomial() {
        let h = FamilySpec::hahn(s("1"), s("1"), 5);
        let (left, right) = factorized_form(&h, 6).unwrap();
        assert_eq!(right, QPoly::one(Var::X));
        assert_eq!(left, hypergeometric_build(&h, 6).unwrap());
    }

    #[test]
    fn examples() {
        let h = FamilySpec::hahn(s("1"), s("1"), 5);
        for n in [6, 7, 8, 10] {
            let r = check_factorization(&h, n).unwrap();
            assert_eq!(r.verdict, Verdict::ExactPass, "n={n}");
        }
        let (_, right) = factorized_form(&h, 8).unwrap();
        assert!(right.is_real());

        let k = FamilySpec::krawtchouk(s("1/2"), 3);
        for n in [4, 5, 7] {
            assert!(check_factorization(&k, n).unwrap().passed());
        }
        // M_1(x-N-1; N+2, p/(p-1)) = x - N - 1 + p(N+2)
        let p = s("1/3");
        let k = FamilySpec::krawtchouk(p.clone(), 3);
        let (_, right) = factorized_form(&k, 5).unwrap();
        assert_eq!(right, QPoly::new(vec![&s("-4") + &(&p * &s("5")), s("1")], Var::X));

        let d = FamilySpec::dual_hahn(s("1"), s("1"), 3);
        let r = FamilySpec::racah(s("-4"), s("1"), s("1"), s("1"), RacahBranch::AlphaOne).unwrap();
        for n in [4, 5] {
            assert!(check_factorization(&d, n).unwrap().passed());
            assert!(check_factorization(&r, n).unwrap().passed());
        }
        assert!(check_factorization(&d, 2).is_err());
    }

    #[test]
    fn hahn_limit_matches_krawtchouk_factorization() {
        let gap = factorization_limit_gap(&s("1/2"), 3, 5, &s("1000000")).unwrap();
        assert!(gap <= 1e-6, "{gap}");
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (1i64..30, 2i64..9).prop_map(|(p, q)| Scalar::ratio(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn factorizations_hold(a in rational(), b in rational(), big_n in 0i64..=4, extra in 0usize..=5, p in 1i64..10) {
            let n = big_n as usize + 1 + extra;
            let specs = [
                FamilySpec::hahn(a.clone(), b.clone(), big_n),
                FamilySpec::krawtchouk(Scalar::ratio(p, 10), big_n),
                FamilySpec::dual_hahn(a.clone(), b.clone(), big_n),
                FamilySpec::racah(Scalar::from_i64(-big_n - 1), a, b, Scalar::ratio(2, 7), RacahBranch::AlphaOne).unwrap(),
            ];
            for spec in &specs {
                match check_factorization(spec, n) {
                    Ok(r) => prop_assert!(r.passed(), "{spec} n={n}: {}", r.verdict),
                    Err(Error::DegenerateParameters { .. }) => {}
                    Err(e) => panic!("{spec}: {e}"),
                }
            }
        }
    }
}
