//! The dichotomy pipeline: split certification, exclusion of t⁻¹, torsor
//! spot checks, and independent certificate verification.

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use unipotent_core::cohomology::{exclude_target, solve_positive_valuation, DEFAULT_SEARCH_BOUND};
use unipotent_core::grammar::ratfn_to_string;
use unipotent_core::isotropy::{anisotropy_pipeline, certify_split, AnisotropyVerdict};
use unipotent_core::{Error, Fq, LaurentSeries, PPolynomial, RatFn};

use crate::certificate::{
    exclusion_from_json, exclusion_to_json, laurent_to_json, split_from_json, split_to_json,
    Certificate, Diagnostics, Evidence, Verdict,
};
use crate::input::PresentationInput;
use crate::VERSION;

pub const SPOT_CHECKS: u32 = 5;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub precision: i64,
    pub budget: u32,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options { precision: 16, budget: 8, seed: 0 }
    }
}

/// A deterministic stream of torsor targets with valuation ≥ 1: random
/// Laurent polynomials in t with small F_q(s) coefficients.
fn sample_torsor_targets(
    field: Fq,
    seed: u64,
    count: u32,
    min_valuation: i64,
    precision: i64,
) -> Vec<LaurentSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count as usize {
        let n_terms = rng.gen_range(1..=3);
        let mut terms = Vec::new();
        for _ in 0..n_terms {
            let exp = rng.gen_range(min_valuation..min_valuation + 5);
            let c0 = rng.gen_range(0..field.q());
            let c1 = rng.gen_range(0..field.q());
            // coefficient c0 + c1·s, redrawn implicitly if everything is 0
            let coeff = RatFn::from_poly(unipotent_core::PolyS::new(
                field,
                vec![field.element(c0), field.element(c1)],
            ));
            terms.push((exp, coeff));
        }
        let series = LaurentSeries::from_terms(field, &terms, precision);
        if !series.is_zero() {
            out.push(series);
        }
    }
    out
}

/// Solve each sampled target and insist the residual vanishes on the
/// whole window.
pub fn run_spot_checks(
    p: &PPolynomial,
    seed: u64,
    count: u32,
    min_valuation: i64,
    precision: i64,
) -> Result<()> {
    for target in sample_torsor_targets(p.field(), seed, count, min_valuation, precision) {
        let alpha = solve_positive_valuation(p, &target)
            .map_err(|e| anyhow!("torsor spot check failed to solve: {e}"))?;
        let residual = p
            .evaluate_laurent(&alpha)?
            .truncated(precision)
            .sub(&target.truncated(precision));
        if !residual.is_zero() {
            bail!("torsor spot check left a nonzero residual");
        }
    }
    Ok(())
}

pub fn classify(input: &PresentationInput, p: &PPolynomial, opts: Options) -> Result<Certificate> {
    if !p.is_separable() {
        return Err(Error::NotSeparable.into());
    }
    let base = |verdict, evidence, diagnostics| Certificate {
        verdict,
        evidence,
        diagnostics,
        seed: opts.seed,
        version: VERSION.into(),
        input: input.clone(),
    };

    if let Some(split) = certify_split(p, opts.budget)? {
        // the two verdicts must be unreachable together: a split kernel
        // cannot have a certified-anisotropic principal part
        if let Ok(AnisotropyVerdict::Anisotropic(_)) =
            anisotropy_pipeline(&p.principal_part()?, DEFAULT_SEARCH_BOUND)
        {
            bail!("internal contradiction: split chain and anisotropic principal part");
        }
        split.replay(p).context("freshly built split chain failed replay")?;
        run_spot_checks(p, opts.seed, SPOT_CHECKS, 1, opts.precision)?;
        return Ok(base(
            Verdict::SplitSpecial,
            Evidence::Split(split_to_json(&split)?),
            Diagnostics {
                budget: Some(opts.budget),
                torsor_spot_checks: Some(SPOT_CHECKS),
                ..Diagnostics::default()
            },
        ));
    }

    let form = p.principal_part()?;
    match anisotropy_pipeline(&form, DEFAULT_SEARCH_BOUND) {
        Ok(AnisotropyVerdict::Anisotropic(_)) => {
            let target =
                LaurentSeries::monomial(RatFn::one(p.field()), -1, opts.precision);
            let cert = exclude_target(p, &target)?;
            Ok(base(
                Verdict::NotSplitNotSpecial,
                Evidence::Exclusion(exclusion_to_json(&cert)),
                Diagnostics {
                    search_bound: Some(DEFAULT_SEARCH_BOUND),
                    ..Diagnostics::default()
                },
            ))
        }
        Ok(AnisotropyVerdict::Isotropic(witness)) => Ok(base(
            Verdict::Undecided,
            Evidence::None {},
            Diagnostics {
                anisotropy: Some("isotropic".into()),
                isotropy_witness: Some(witness.iter().map(ratfn_to_string).collect()),
                budget: Some(opts.budget),
                note: Some(
                    "isotropy witness found but no height reduction applies".into(),
                ),
                ..Diagnostics::default()
            },
        )),
        Ok(AnisotropyVerdict::Unknown { search_bound }) => Ok(base(
            Verdict::Undecided,
            Evidence::None {},
            Diagnostics {
                anisotropy: Some("unknown".into()),
                search_bound: Some(search_bound),
                budget: Some(opts.budget),
                note: Some("anisotropy undecided within the search bound".into()),
                ..Diagnostics::default()
            },
        )),
        Err(e) => Ok(base(
            Verdict::Undecided,
            Evidence::None {},
            Diagnostics {
                anisotropy: Some("not applicable".into()),
                budget: Some(opts.budget),
                note: Some(format!("anisotropy pipeline refused: {e}")),
                ..Diagnostics::default()
            },
        )),
    }
}

/// Independent replay of a certificate against the original input. Never
/// trusts cached intermediates: chains are re-applied, the residue-form
/// anisotropy is re-decided, spot checks are re-run from the recorded
/// seed. Returns Ok(()) or the first failure reason.
pub fn verify(cert: &Certificate, input: &PresentationInput, opts: Options) -> Result<()> {
    if cert.input != *input {
        bail!("certificate input echo does not match the presentation file");
    }
    let p = input.to_ppolynomial()?;
    match (&cert.verdict, &cert.evidence) {
        (Verdict::SplitSpecial, Evidence::Split(json)) => {
            let split = split_from_json(p.field(), p.arity(), json)?;
            split.replay(&p).map_err(|e| anyhow!("split chain replay failed: {e}"))?;
            let checks = cert.diagnostics.torsor_spot_checks.unwrap_or(SPOT_CHECKS);
            run_spot_checks(&p, cert.seed, checks, 1, opts.precision)?;
            Ok(())
        }
        (Verdict::NotSplitNotSpecial, Evidence::Exclusion(json)) => {
            let exclusion = exclusion_from_json(p.field(), json)?;
            exclusion.verify(&p).map_err(|e| anyhow!("exclusion replay failed: {e}"))?;
            Ok(())
        }
        (Verdict::Undecided, Evidence::None {}) => Ok(()),
        _ => bail!("verdict and evidence kind do not match"),
    }
}

/// Serializable result for the `h1` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum H1Outcome {
    Trivial { preimage: Vec<crate::certificate::LaurentJson> },
    Nontrivial { exclusion: crate::certificate::ExclusionJson },
    Undecided { note: String },
}

pub fn h1_class(p: &PPolynomial, target: &LaurentSeries) -> Result<H1Outcome> {
    if let Ok(alpha) = solve_positive_valuation(p, target) {
        return Ok(H1Outcome::Trivial {
            preimage: alpha.iter().map(laurent_to_json).collect(),
        });
    }
    match exclude_target(p, target) {
        Ok(cert) => Ok(H1Outcome::Nontrivial { exclusion: exclusion_to_json(&cert) }),
        Err(e) => Ok(H1Outcome::Undecided {
            note: format!("neither solvable by contraction nor excludable: {e}"),
        }),
    }
}
