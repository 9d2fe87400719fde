use clap::{Args, ValueEnum};
use opoly::families::RacahBranch;
use opoly::sobolev::{ContourChoice, QuadratureSpec, Rule};
use opoly::families::{LatticeArgument, NuVariant};
use opoly::{FamilySpec, Scalar};

use crate::UsageError;

pub fn scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hahn,
    ContinuousHahn,
    Racah,
    Wilson,
    DualHahn,
    ContinuousDualHahn,
    Krawtchouk,
    Meixner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    /// alpha + 1 = -N
    Alpha,
    /// beta + delta + 1 = -N
    BetaDelta,
    /// gamma + 1 = -N
    Gamma,
}

impl From<Branch> for RacahBranch {
    fn from(b: Branch) -> Self {
        match b {
            Branch::Alpha => RacahBranch::AlphaOne,
            Branch::BetaDelta => RacahBranch::BetaDelta,
            Branch::Gamma => RacahBranch::GammaOne,
        }
    }
}

/// Family parameters; rationals are given as `p/q` strings.
#[derive(Args, Clone, Debug, Default)]
pub struct ParamArgs {
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub alpha: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub beta: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub gamma: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub delta: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub a: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub b: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub c: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub d: Option<Scalar>,
    #[arg(long, value_parser = scalar, allow_hyphen_values = true)]
    pub p: Option<Scalar>,
    /// Truncation parameter.
    #[arg(long = "N", allow_hyphen_values = true)]
    pub big_n: Option<i64>,
    /// Racah truncation branch; the first one that holds is used when omitted.
    #[arg(long, value_enum)]
    pub branch: Option<Branch>,
}

fn need(v: &Option<Scalar>, name: &str) -> Result<Scalar, UsageError> {
    v.clone().ok_or_else(|| UsageError(format!("missing --{name}")))
}

impl ParamArgs {
    fn big_n(&self) -> Result<i64, UsageError> {
        self.big_n.ok_or_else(|| UsageError("missing --N".into()))
    }

    pub fn spec(&self, family: Family) -> anyhow::Result<FamilySpec> {
        Ok(match family {
            Family::Hahn => FamilySpec::hahn(need(&self.alpha, "alpha")?, need(&self.beta, "beta")?, self.big_n()?),
            Family::ContinuousHahn => FamilySpec::continuous_hahn(
                need(&self.a, "a")?,
                need(&self.b, "b")?,
                need(&self.c, "c")?,
                need(&self.d, "d")?,
            ),
            Family::Wilson => {
                FamilySpec::wilson(need(&self.a, "a")?, need(&self.b, "b")?, need(&self.c, "c")?, need(&self.d, "d")?)
            }
            Family::DualHahn => {
                FamilySpec::dual_hahn(need(&self.gamma, "gamma")?, need(&self.delta, "delta")?, self.big_n()?)
            }
            Family::ContinuousDualHahn => {
                FamilySpec::continuous_dual_hahn(need(&self.a, "a")?, need(&self.b, "b")?, need(&self.c, "c")?)
            }
            Family::Krawtchouk => FamilySpec::krawtchouk(need(&self.p, "p")?, self.big_n()?),
            Family::Meixner => FamilySpec::meixner(need(&self.beta, "beta")?, need(&self.c, "c")?),
            Family::Racah => {
                let (a, b, g, d) =
                    (need(&self.alpha, "alpha")?, need(&self.beta, "beta")?, need(&self.gamma, "gamma")?, need(&self.delta, "delta")?);
                match self.branch {
                    Some(br) => FamilySpec::racah(a, b, g, d, br.into())?,
                    None => {
                        let mut last = None;
                        for br in [RacahBranch::AlphaOne, RacahBranch::BetaDelta, RacahBranch::GammaOne] {
                            match FamilySpec::racah(a.clone(), b.clone(), g.clone(), d.clone(), br) {
                                Ok(spec) => return Ok(spec),
                                Err(e) => last = Some(e),
                            }
                        }
                        return Err(last.expect("three branches tried").into());
                    }
                }
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Gauss,
    Trapezoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NuArg {
    Imaginary,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArgumentArg {
    Lattice,
    Squared,
}

/// Overrides of the contour quadrature.
#[derive(Args, Clone, Debug, Default)]
pub struct QuadArgs {
    /// Truncation height T of the line integral.
    #[arg(long = "T")]
    pub truncation: Option<f64>,
    #[arg(long)]
    pub panels: Option<usize>,
    /// Nodes per panel.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    /// Abscissa of the integration line.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Doubling factor of the lattice weights.
    #[arg(long, value_enum)]
    pub nu: Option<NuArg>,
    /// Evaluation point of lattice polynomials on the contour.
    #[arg(long, value_enum)]
    pub argument: Option<ArgumentArg>,
}

impl QuadArgs {
    pub fn quad(&self) -> QuadratureSpec {
        let mut q = QuadratureSpec::default();
        if let Some(t) = self.truncation {
            q.truncation = t;
        }
        if let Some(p) = self.panels {
            q.panels = p;
        }
        if let Some(o) = self.order {
            q.order = o;
        }
        if let Some(r) = self.rule {
            q.rule = match r {
                RuleArg::Gauss => Rule::GaussLegendreComposite,
                RuleArg::Trapezoid => Rule::Trapezoid,
            };
        }
        q
    }

    pub fn choice(&self) -> ContourChoice {
        let mut c = ContourChoice { sigma: self.sigma, ..ContourChoice::default() };
        if let Some(nu) = self.nu {
            c.variant = match nu {
                NuArg::Imaginary => NuVariant::ImaginaryDoubling,
                NuArg::Real => NuVariant::RealDoubling,
            };
        }
        if let Some(a) = self.argument {
            c.argument = match a {
                ArgumentArg::Lattice => LatticeArgument::LatticePoint,
                ArgumentArg::Squared => LatticeArgument::Squared,
            };
        }
        c
    }
}
