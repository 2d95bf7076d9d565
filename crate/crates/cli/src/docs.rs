//! Config and output documents. Scalars and polynomials travel as text in
//! the same grammar the parsers accept.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use virab::algebra::classify_case;
use virab::classify::{CandidateFamily, InfeasibilityCertificate, Outcome};
use virab::poly::parse_poly;
use virab::repmod::{Family, GenericFamily, ModuleSpec};
use virab::Scalar;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn zero() -> Scalar {
    Scalar::zero()
}

fn one() -> Scalar {
    Scalar::one()
}

/// A `Φ` or `Θ` module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpecDoc {
    pub family: String,
    #[serde(default = "zero")]
    pub a: Scalar,
    #[serde(default = "one")]
    pub b: Scalar,
    pub lambda: Scalar,
    #[serde(default = "zero")]
    pub alpha: Scalar,
    #[serde(default)]
    pub coeffs: Vec<Scalar>,
    /// `Vir(a,b)` when set, `W(a,b)` otherwise.
    #[serde(default)]
    pub extension: bool,
}

impl ModuleSpecDoc {
    pub fn to_spec(&self) -> Result<ModuleSpec> {
        let family = match self.family.as_str() {
            "phi" => Family::Phi,
            "theta" => Family::Theta,
            other => bail!("unknown family {other:?}, expected \"phi\" or \"theta\""),
        };
        let algebra = classify_case(&self.a, &self.b, self.extension);
        Ok(ModuleSpec::with_algebra(
            family,
            algebra,
            self.lambda.clone(),
            self.alpha.clone(),
            self.coeffs.clone(),
        )?)
    }
}

/// Candidate data `a_m(s,t)`, `g_m(s,t)` for `|m| ≤ N`, keyed by `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDoc {
    #[serde(default = "zero")]
    pub a: Scalar,
    pub b: Scalar,
    #[serde(rename = "N")]
    pub n: i64,
    pub a_m: BTreeMap<String, String>,
    pub g_m: BTreeMap<String, String>,
}

impl CandidateDoc {
    pub fn to_family(&self) -> Result<CandidateFamily> {
        let parse = |name: &str, map: &BTreeMap<String, String>| -> Result<BTreeMap<_, _>> {
            map.iter()
                .map(|(m, text)| {
                    let m: i64 = m.trim().parse().with_context(|| format!("{name} key {m:?} is not an integer"))?;
                    let p = parse_poly(text).with_context(|| format!("{name}[{m}] = {text:?}"))?;
                    Ok((m, p))
                })
                .collect()
        };
        let algebra = classify_case(&self.a, &self.b, false);
        Ok(GenericFamily::new(algebra, self.n, parse("a_m", &self.a_m)?, parse("g_m", &self.g_m)?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub indices: Vec<i64>,
    pub residue: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfeasibleDoc {
    pub constraint: String,
    pub witness: WitnessDoc,
}

/// Output of `classify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassifyDoc {
    Canonical {
        family: String,
        lambda: String,
        alpha: String,
        coeffs: Vec<String>,
    },
    Infeasible {
        infeasible: InfeasibleDoc,
    },
}

impl ClassifyDoc {
    pub fn from_outcome(outcome: &Outcome) -> ClassifyDoc {
        match outcome {
            Outcome::Canonical(p) => ClassifyDoc::Canonical {
                family: p.family.name().to_string(),
                lambda: p.lambda.to_string(),
                alpha: p.alpha.to_string(),
                coeffs: p.coeffs.iter().map(ToString::to_string).collect(),
            },
            Outcome::Infeasible(cert) => ClassifyDoc::Infeasible {
                infeasible: InfeasibleDoc::from_certificate(cert),
            },
        }
    }
}

impl InfeasibleDoc {
    fn from_certificate(cert: &InfeasibilityCertificate) -> InfeasibleDoc {
        InfeasibleDoc {
            constraint: cert.constraint.clone(),
            witness: WitnessDoc {
                indices: cert.indices.clone(),
                residue: cert.residue.to_string(),
            },
        }
    }
}
