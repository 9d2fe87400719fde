//! The eight families: specs, both constructions, recurrence coefficients,
//! cross-family relations and weights.

mod build;
mod relate;
mod weights;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{Lattice, Scalar, Var};
use crate::error::{Error, Result};

pub use build::{hypergeometric_build, recurrence_coefficients, ttrr_build, RecurrenceCoefficients};
pub use relate::{relate, Relation};
pub use weights::{
    continuous_log_weight, discrete_weight, hahn_weight_zero_extended, ContinuousWeight, LatticeArgument,
    NuVariant,
};

/// Which truncation condition makes a Racah family finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RacahBranch {
    /// `α + 1 = -N`
    AlphaOne,
    /// `β + δ + 1 = -N`
    BetaDelta,
    /// `γ + 1 = -N`
    GammaOne,
}

/// One of the eight families together with its parameters.
///
/// `big_n` is the truncation parameter `N`. It is normally a non-negative
/// integer; the builders also accept negative values, which the difference
/// relations produce when `N - k < 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Hahn { alpha: Scalar, beta: Scalar, big_n: i64 },
    ContinuousHahn { a: Scalar, b: Scalar, c: Scalar, d: Scalar },
    Racah { alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar, branch: RacahBranch },
    Wilson { a: Scalar, b: Scalar, c: Scalar, d: Scalar },
    DualHahn { gamma: Scalar, delta: Scalar, big_n: i64 },
    ContinuousDualHahn { a: Scalar, b: Scalar, c: Scalar },
    Krawtchouk { p: Scalar, big_n: i64 },
    Meixner { beta: Scalar, c: Scalar },
}

impl FamilySpec {
    pub fn hahn(alpha: Scalar, beta: Scalar, big_n: i64) -> Self {
        FamilySpec::Hahn { alpha, beta, big_n }
    }

    pub fn continuous_hahn(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        FamilySpec::ContinuousHahn { a, b, c, d }
    }

    /// A Racah spec; fails unless the stated branch condition holds for some `N ≥ 0`.
    pub fn racah(alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar, branch: RacahBranch) -> Result<Self> {
        let spec = FamilySpec::Racah { alpha, beta, gamma, delta, branch };
        spec.racah_n()?;
        Ok(spec)
    }

    pub fn wilson(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        FamilySpec::Wilson { a, b, c, d }
    }

    pub fn dual_hahn(gamma: Scalar, delta: Scalar, big_n: i64) -> Self {
        FamilySpec::DualHahn { gamma, delta, big_n }
    }

    pub fn continuous_dual_hahn(a: Scalar, b: Scalar, c: Scalar) -> Self {
        FamilySpec::ContinuousDualHahn { a, b, c }
    }

    pub fn krawtchouk(p: Scalar, big_n: i64) -> Self {
        FamilySpec::Krawtchouk { p, big_n }
    }

    pub fn meixner(beta: Scalar, c: Scalar) -> Self {
        FamilySpec::Meixner { beta, c }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Hahn { .. } => "hahn",
            FamilySpec::ContinuousHahn { .. } => "continuous-hahn",
            FamilySpec::Racah { .. } => "racah",
            FamilySpec::Wilson { .. } => "wilson",
            FamilySpec::DualHahn { .. } => "dual-hahn",
            FamilySpec::ContinuousDualHahn { .. } => "continuous-dual-hahn",
            FamilySpec::Krawtchouk { .. } => "krawtchouk",
            FamilySpec::Meixner { .. } => "meixner",
        }
    }

    /// Named parameters in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, Scalar)> {
        let n = |v: i64| Scalar::from_i64(v);
        match self {
            FamilySpec::Hahn { alpha, beta, big_n } => {
                vec![("alpha", alpha.clone()), ("beta", beta.clone()), ("N", n(*big_n))]
            }
            FamilySpec::ContinuousHahn { a, b, c, d } | FamilySpec::Wilson { a, b, c, d } => {
                vec![("a", a.clone()), ("b", b.clone()), ("c", c.clone()), ("d", d.clone())]
            }
            FamilySpec::Racah { alpha, beta, gamma, delta, .. } => vec![
                ("alpha", alpha.clone()),
                ("beta", beta.clone()),
                ("gamma", gamma.clone()),
                ("delta", delta.clone()),
            ],
            FamilySpec::DualHahn { gamma, delta, big_n } => {
                vec![("gamma", gamma.clone()), ("delta", delta.clone()), ("N", n(*big_n))]
            }
            FamilySpec::ContinuousDualHahn { a, b, c } => vec![("a", a.clone()), ("b", b.clone()), ("c", c.clone())],
            FamilySpec::Krawtchouk { p, big_n } => vec![("p", p.clone()), ("N", n(*big_n))],
            FamilySpec::Meixner { beta, c } => vec![("beta", beta.clone()), ("c", c.clone())],
        }
    }

    /// True for the families with finitely many mass points.
    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            FamilySpec::Hahn { .. } | FamilySpec::Racah { .. } | FamilySpec::DualHahn { .. } | FamilySpec::Krawtchouk { .. }
        )
    }

    fn racah_n(&self) -> Result<i64> {
        let FamilySpec::Racah { alpha, beta, gamma, delta, branch } = self else {
            return Err(Error::NotFinite(self.name().into()));
        };
        let one = Scalar::one();
        let (value, label) = match branch {
            RacahBranch::AlphaOne => (alpha + &one, "alpha+1"),
            RacahBranch::BetaDelta => (&(beta + delta) + &one, "beta+delta+1"),
            RacahBranch::GammaOne => (gamma + &one, "gamma+1"),
        };
        match value.as_integer() {
            Some(k) if k <= 0 => Ok(-k),
            _ => Err(Error::ConditionViolated(format!(
                "{label} = {value} is not a non-positive integer"
            ))),
        }
    }

    /// The truncation parameter `N` of a finite family.
    pub fn cutoff(&self) -> Result<i64> {
        match self {
            FamilySpec::Hahn { big_n, .. } | FamilySpec::DualHahn { big_n, .. } | FamilySpec::Krawtchouk { big_n, .. } => {
                Ok(*big_n)
            }
            FamilySpec::Racah { .. } => self.racah_n(),
            _ => Err(Error::NotFinite(self.name().into())),
        }
    }

    /// The lattice the family's polynomials are written on.
    pub fn lattice(&self) -> Lattice {
        match self {
            FamilySpec::Racah { gamma, delta, .. } | FamilySpec::DualHahn { gamma, delta, .. } => {
                Lattice::quadratic(&(gamma + delta) + &Scalar::one())
            }
            FamilySpec::Wilson { .. } | FamilySpec::ContinuousDualHahn { .. } => Lattice::quadratic(Scalar::zero()),
            _ => Lattice::Linear,
        }
    }

    pub fn var(&self) -> Var {
        self.lattice().var()
    }

    /// True when every parameter is real.
    pub fn is_real(&self) -> bool {
        self.params().iter().all(|(_, v)| v.is_real())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.name(), parts.join(", "))?;
        if let FamilySpec::Racah { branch, .. } = self {
            write!(f, "[{branch:?}]")?;
        }
        Ok(())
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let params = self.params();
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("family", self.name())?;
        for (k, v) in &params {
            map.serialize_entry(k, &v.to_string())?;
        }
        if let FamilySpec::Racah { branch, .. } = self {
            map.serialize_entry("branch", branch)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }

    #[test]
    fn racah_branch_is_checked() {
        assert!(FamilySpec::racah(s(-4), s(1), s(1), s(1), RacahBranch::AlphaOne).is_ok());
        assert!(FamilySpec::racah(s(-4), s(1), s(1), s(1), RacahBranch::GammaOne).is_err());
        let r = FamilySpec::racah(s(-4), s(1), s(1), s(1), RacahBranch::AlphaOne).unwrap();
        assert_eq!(r.cutoff().unwrap(), 3);
    }

    #[test]
    fn lattices() {
        let d = FamilySpec::dual_hahn(s(1), s(1), 3);
        assert_eq!(d.lattice(), Lattice::quadratic(s(3)));
        assert_eq!(FamilySpec::krawtchouk(Scalar::ratio(1, 2), 3).var(), Var::X);
        assert!(FamilySpec::meixner(s(1), s(-1)).cutoff().is_err());
    }
}
