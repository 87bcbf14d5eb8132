//! Certificate JSON schema and lossless conversion to and from the core
//! evidence types, so a verifier can replay everything from the file
//! alone.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use unipotent_core::cohomology::ExclusionCertificate;
use unipotent_core::grammar::{parse_ratfn, ratfn_to_string};
use unipotent_core::isotropy::{AnisotropyMethod, SplitCertificate};
use unipotent_core::ppoly::ElementaryStep;
use unipotent_core::{DiagonalForm, Fq, LaurentSeries, Substitution};

use crate::input::PresentationInput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "SPLIT_SPECIAL")]
    SplitSpecial,
    #[serde(rename = "NOT_SPLIT_NOT_SPECIAL")]
    NotSplitNotSpecial,
    #[serde(rename = "UNDECIDED")]
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub diagnostics: Diagnostics,
    pub seed: u64,
    pub version: String,
    pub input: PresentationInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Split(SplitJson),
    Exclusion(ExclusionJson),
    None {},
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitJson {
    /// Invertible substitutions, each a list of elementary steps.
    pub chain: Vec<Vec<StepJson>>,
    pub elimination_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepJson {
    Scale { var: usize, factor: String },
    Shear { target: usize, source: usize, coeff: String, height: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionJson {
    pub target: LaurentJson,
    /// Entries (variable, coefficient, height) of the principal part.
    pub form: Vec<(usize, String, u32)>,
    pub method: String,
    pub min_height: u32,
    pub m_bound: i64,
    pub target_valuation: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    /// (t-exponent, coefficient) pairs, exponents strictly increasing.
    pub terms: Vec<(i64, String)>,
    pub prec_end: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anisotropy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotropy_witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsor_spot_checks: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn laurent_to_json(series: &LaurentSeries) -> LaurentJson {
    LaurentJson {
        terms: series.terms().map(|(e, c)| (e, ratfn_to_string(c))).collect(),
        prec_end: series.prec_end(),
    }
}

pub fn laurent_from_json(field: Fq, json: &LaurentJson) -> Result<LaurentSeries> {
    let mut terms = Vec::new();
    for (e, c) in &json.terms {
        terms.push((*e, parse_ratfn(field, c).context("bad series coefficient")?));
    }
    Ok(LaurentSeries::from_terms(field, &terms, json.prec_end))
}

pub fn step_to_json(step: &ElementaryStep) -> StepJson {
    match step {
        ElementaryStep::Scale { var, factor } => {
            StepJson::Scale { var: *var, factor: ratfn_to_string(factor) }
        }
        ElementaryStep::Shear { target, source, coeff, height } => StepJson::Shear {
            target: *target,
            source: *source,
            coeff: ratfn_to_string(coeff),
            height: *height,
        },
    }
}

pub fn step_from_json(field: Fq, json: &StepJson) -> Result<ElementaryStep> {
    Ok(match json {
        StepJson::Scale { var, factor } => ElementaryStep::Scale {
            var: *var,
            factor: parse_ratfn(field, factor).context("bad scale factor")?,
        },
        StepJson::Shear { target, source, coeff, height } => ElementaryStep::Shear {
            target: *target,
            source: *source,
            coeff: parse_ratfn(field, coeff).context("bad shear coefficient")?,
            height: *height,
        },
    })
}

pub fn split_to_json(cert: &SplitCertificate) -> Result<SplitJson> {
    let mut chain = Vec::new();
    for sigma in &cert.chain {
        let steps = sigma
            .steps()
            .context("split chain substitution lacks elementary steps")?;
        chain.push(steps.iter().map(step_to_json).collect());
    }
    Ok(SplitJson { chain, elimination_order: cert.elimination_order.clone() })
}

pub fn split_from_json(field: Fq, arity: usize, json: &SplitJson) -> Result<SplitCertificate> {
    let mut chain = Vec::new();
    for steps_json in &json.chain {
        let steps: Result<Vec<ElementaryStep>> =
            steps_json.iter().map(|s| step_from_json(field, s)).collect();
        chain.push(Substitution::from_steps(field, arity, steps?)?);
    }
    Ok(SplitCertificate { chain, elimination_order: json.elimination_order.clone() })
}

pub fn method_to_string(method: AnisotropyMethod) -> String {
    match method {
        AnisotropyMethod::EqualHeightLinearAlgebra => "equal_height_linear_algebra".into(),
        AnisotropyMethod::ValuationSeparation => "valuation_separation".into(),
    }
}

pub fn method_from_string(name: &str) -> Result<AnisotropyMethod> {
    Ok(match name {
        "equal_height_linear_algebra" => AnisotropyMethod::EqualHeightLinearAlgebra,
        "valuation_separation" => AnisotropyMethod::ValuationSeparation,
        other => bail!("unknown anisotropy method {other:?}"),
    })
}

pub fn exclusion_to_json(cert: &ExclusionCertificate) -> ExclusionJson {
    ExclusionJson {
        target: laurent_to_json(&cert.target),
        form: cert
            .form
            .entries()
            .iter()
            .map(|(v, c, h)| (*v, ratfn_to_string(c), *h))
            .collect(),
        method: method_to_string(cert.method),
        min_height: cert.min_height,
        m_bound: cert.m_bound,
        target_valuation: cert.target_valuation,
    }
}

pub fn exclusion_from_json(field: Fq, json: &ExclusionJson) -> Result<ExclusionCertificate> {
    let mut entries = Vec::new();
    for (v, c, h) in &json.form {
        entries.push((*v, parse_ratfn(field, c).context("bad form coefficient")?, *h));
    }
    Ok(ExclusionCertificate {
        target: laurent_from_json(field, &json.target)?,
        form: DiagonalForm::new(field, entries)?,
        method: method_from_string(&json.method)?,
        min_height: json.min_height,
        m_bound: json.m_bound,
        target_valuation: json.target_valuation,
    })
}
