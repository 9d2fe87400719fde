//! Exact verifiers for the structural identities of the families: difference
//! relations, the difference equation, the Rodrigues formula, generating
//! functions, factorizations beyond the cutoff and limit relations.

mod factor;
mod gf;
mod hahn;
mod limits;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::QPoly;
use crate::families::FamilySpec;

pub use factor::{check_factorization, factorization_limit_gap, factorized_form};
pub use gf::{check_generating_function, generating_functions, GeneratingFunction};
pub use hahn::{check_delta_relations, check_difference_equation, check_rodrigues};
pub use limits::{limit_probe, limit_source, LimitLadderReport, LimitRelation};

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Verdict {
    /// Both sides agree in exact arithmetic.
    ExactPass,
    /// Agreement within a floating-point residual.
    NumericPass(f64),
    /// The first place where the sides differ.
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Fail(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ExactPass => f.write_str("ExactPass"),
            Verdict::NumericPass(r) => write!(f, "NumericPass({r:e})"),
            Verdict::Fail(w) => write!(f, "Fail({w})"),
        }
    }
}

/// Result of checking one identity for one parameter set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub(crate) fn new(id: &str, spec: &FamilySpec, n: usize, k: Option<usize>, verdict: Verdict) -> Self {
        CheckReport { id: id.to_string(), family: spec.name().to_string(), params: params_map(spec), n, k, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub(crate) fn params_map(spec: &FamilySpec) -> BTreeMap<String, String> {
    spec.params().into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// Exact coefficient comparison; the witness names the first mismatch.
pub(crate) fn compare(label: &str, lhs: &QPoly, rhs: &QPoly) -> Verdict {
    if lhs == rhs {
        return Verdict::ExactPass;
    }
    let len = lhs.coeffs().len().max(rhs.coeffs().len());
    for j in 0..len {
        let (a, b) = (lhs.coeff(j), rhs.coeff(j));
        if a != b {
            return Verdict::Fail(format!("{label}: coefficient of degree {j} is {a} on the left and {b} on the right"));
        }
    }
    Verdict::Fail(format!("{label}: variables differ"))
}

/// Merges verdicts, keeping the first failure.
pub(crate) fn all_of(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    for v in verdicts {
        if !v.passed() {
            return v;
        }
    }
    Verdict::ExactPass
}
