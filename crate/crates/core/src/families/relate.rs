use serde::Serialize;

use super::{hypergeometric_build, FamilySpec, RacahBranch};
use crate::algebra::{QPoly, Scalar};
use crate::error::{degenerate, Error, Result};

/// `source_n(t) = prefactor · counterpart_n(u·t + v)` in the family variable `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Relation {
    pub counterpart: FamilySpec,
    pub u: Scalar,
    pub v: Scalar,
    pub prefactor: Scalar,
}

impl Relation {
    /// Maps a counterpart polynomial to the source side.
    pub fn apply(&self, counterpart_poly: &QPoly) -> QPoly {
        counterpart_poly.affine_substitute(&self.u, &self.v).scale(&self.prefactor)
    }

    /// Builds the counterpart polynomial of degree `n` and maps it back.
    pub fn source_poly(&self, n: usize) -> Result<QPoly> {
        Ok(self.apply(&hypergeometric_build(&self.counterpart, n)?))
    }
}

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

fn natural(v: &Scalar, what: &str) -> Result<i64> {
    match v.as_integer() {
        Some(k) if k >= 0 => Ok(k),
        _ => Err(Error::NoCounterpart(format!("{what} = {v} is not a non-negative integer"))),
    }
}

/// The counterpart family of `spec` and the affine map connecting degree-`n` members.
pub fn relate(spec: &FamilySpec, n: usize) -> Result<Relation> {
    let one = Scalar::one();
    let half = Scalar::ratio(1, 2);
    let sign = sc(-1).powi(n as i64);
    let rel = match spec {
        FamilySpec::Hahn { alpha, beta, big_n } => Relation {
            counterpart: FamilySpec::continuous_hahn(
                Scalar::zero(),
                &(beta + &sc(*big_n)) + &one,
                sc(-big_n),
                alpha + &one,
            ),
            u: Scalar::i(),
            v: Scalar::zero(),
            prefactor: (-Scalar::i()).powi(n as i64),
        },
        FamilySpec::ContinuousHahn { a, b, c, d } => {
            let big_n = natural(&-(a + c), "-a-c")?;
            Relation {
                counterpart: FamilySpec::hahn(&(a + d) - &one, &(b + c) - &one, big_n),
                u: -Scalar::i(),
                v: -a.clone(),
                prefactor: Scalar::i().powi(n as i64),
            }
        }
        FamilySpec::Racah { alpha, beta, gamma, delta, .. } => {
            let s = &(gamma + delta) + &one;
            let gd = gamma + delta;
            Relation {
                counterpart: FamilySpec::wilson(
                    &s * &half,
                    alpha - &(&(&gd - &one) * &half),
                    beta + &(&(&(delta - gamma) + &one) * &half),
                    &(&(gamma - delta) + &one) * &half,
                ),
                u: sc(-1),
                v: -(&(&s * &s) / &sc(4)),
                prefactor: sign,
            }
        }
        FamilySpec::Wilson { a, b, c, d } => {
            let (alpha, beta, gamma, delta) = (&(a + b) - &one, &(c + d) - &one, &(a + d) - &one, a - d);
            let branch = [
                (&alpha + &one, RacahBranch::AlphaOne),
                (&(&beta + &delta) + &one, RacahBranch::BetaDelta),
                (&gamma + &one, RacahBranch::GammaOne),
            ]
            .into_iter()
            .find(|(v, _)| v.is_nonpositive_integer())
            .map(|(_, b)| b)
            .ok_or_else(|| Error::NoCounterpart("none of a+b, a+c, a+d is a non-positive integer".into()))?;
            Relation {
                counterpart: FamilySpec::racah(alpha, beta, gamma, delta, branch)?,
                u: sc(-1),
                v: -(a * a),
                prefactor: sign,
            }
        }
        FamilySpec::DualHahn { gamma, delta, big_n } => {
            let s = &(gamma + delta) + &one;
            Relation {
                counterpart: FamilySpec::continuous_dual_hahn(
                    &s * &half,
                    &(&(gamma - delta) + &one) * &half,
                    &sc(-big_n) - &(&s * &half),
                ),
                u: sc(-1),
                v: -(&(&s * &s) / &sc(4)),
                prefactor: sign,
            }
        }
        FamilySpec::ContinuousDualHahn { a, b, c } => {
            let big_n = natural(&-(a + c), "-a-c")?;
            Relation {
                counterpart: FamilySpec::dual_hahn(&(a + b) - &one, a - b, big_n),
                u: sc(-1),
                v: -(a * a),
                prefactor: sign,
            }
        }
        FamilySpec::Krawtchouk { p, big_n } => {
            let pm1 = p - &one;
            if pm1.is_zero() {
                return Err(degenerate("p-1"));
            }
            Relation {
                counterpart: FamilySpec::meixner(sc(-big_n), p / &pm1),
                u: one,
                v: Scalar::zero(),
                prefactor: Scalar::one(),
            }
        }
        FamilySpec::Meixner { beta, c } => {
            let big_n = natural(&-beta.clone(), "-beta")?;
            let cm1 = c - &one;
            if cm1.is_zero() {
                return Err(degenerate("c-1"));
            }
            Relation {
                counterpart: FamilySpec::krawtchouk(c / &cm1, big_n),
                u: one,
                v: Scalar::zero(),
                prefactor: Scalar::one(),
            }
        }
    };
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn check(spec: &FamilySpec, nmax: usize) {
        for n in 0..=nmax {
            let rel = relate(spec, n).unwrap();
            let lhs = hypergeometric_build(spec, n).unwrap();
            let rhs = rel.source_poly(n).unwrap();
            assert_eq!(lhs, rhs, "{spec} -> {} at n={n}", rel.counterpart);
            if spec.is_finite() && spec.is_real() {
                assert!(rhs.is_real());
            }
        }
    }

    #[test]
    fn every_relation_reproduces_the_source() {
        let specs = [
            FamilySpec::hahn(s("1/3"), s("2/5"), 4),
            FamilySpec::continuous_hahn(s("1/2"), s("1/3"), s("-5/2"), s("3/4")),
            FamilySpec::racah(s("-4"), s("1/2"), s("2/3"), s("1/5"), RacahBranch::AlphaOne).unwrap(),
            FamilySpec::racah(s("1/3"), s("2/5"), s("-3"), s("1/7"), RacahBranch::GammaOne).unwrap(),
            FamilySpec::wilson(s("1/2"), s("-5/2"), s("2/7"), s("3/4")),
            FamilySpec::dual_hahn(s("1/3"), s("2/5"), 3),
            FamilySpec::continuous_dual_hahn(s("1/2"), s("1/3"), s("-7/2")),
            FamilySpec::krawtchouk(s("1/3"), 4),
            FamilySpec::meixner(s("-3"), s("-1/2")),
        ];
        for spec in &specs {
            check(spec, 7);
        }
    }

    #[test]
    fn krawtchouk_example() {
        let k = FamilySpec::krawtchouk(s("1/2"), 4);
        let rel = relate(&k, 1).unwrap();
        assert_eq!(rel.counterpart, FamilySpec::meixner(s("-4"), s("-1")));
        let expected = QPoly::parse_coeffs(&["-2", "1"], crate::algebra::Var::X).unwrap();
        assert_eq!(rel.source_poly(1).unwrap(), expected);
        assert_eq!(hypergeometric_build(&k, 1).unwrap(), expected);
    }

    #[test]
    fn missing_counterparts() {
        assert!(matches!(
            relate(&FamilySpec::meixner(s("3/2"), s("-1/2")), 2),
            Err(Error::NoCounterpart(_))
        ));
        assert!(matches!(
            relate(&FamilySpec::wilson(s("1/2"), s("1/3"), s("2/7"), s("3/4")), 2),
            Err(Error::NoCounterpart(_))
        ));
    }
}
