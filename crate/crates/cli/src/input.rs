//! JSON input formats: p-polynomial presentations and finite group
//! multiplication tables.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use unipotent_core::frattini::FiniteGroupTable;
use unipotent_core::grammar::parse_ratfn;
use unipotent_core::{Fq, PPolynomial};

/// A separable p-polynomial presentation of a smooth commutative
/// p-torsion unipotent group: G = ker P ⊂ G_a^r over F_q(s).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationInput {
    pub p: u64,
    pub q: u64,
    /// Base-p digits of a monic irreducible modulus, low to high;
    /// required exactly when q > p.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    pub variables: Vec<String>,
    pub terms: Vec<TermInput>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermInput {
    pub var: String,
    pub height: u32,
    pub coeff: String,
}

impl PresentationInput {
    pub fn field(&self) -> Result<Fq> {
        if self.q == self.p {
            if self.modulus.is_some() {
                bail!("modulus given but q = p");
            }
            return Ok(Fq::prime(self.p)?);
        }
        let digits = self
            .modulus
            .as_ref()
            .context("q > p requires an irreducible modulus")?;
        let field = Fq::extension(self.p, digits)?;
        if field.q() != self.q {
            bail!("modulus degree does not match q = {}", self.q);
        }
        Ok(field)
    }

    pub fn to_ppolynomial(&self) -> Result<PPolynomial> {
        let field = self.field()?;
        if self.variables.is_empty() {
            bail!("at least one variable is required");
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            let var = self
                .variables
                .iter()
                .position(|v| *v == t.var)
                .with_context(|| format!("unknown variable {:?}", t.var))?;
            let coeff = parse_ratfn(field, &t.coeff)
                .with_context(|| format!("bad coefficient {:?}", t.coeff))?;
            terms.push((var, t.height, coeff));
        }
        Ok(PPolynomial::from_terms(field, self.variables.len(), terms)?)
    }
}

/// A finite group by multiplication table, 0-based, row = left factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInput {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupInput {
    pub fn to_group(&self) -> Result<FiniteGroupTable> {
        if self.table.len() != self.order {
            bail!("table has {} rows but order is {}", self.table.len(), self.order);
        }
        Ok(FiniteGroupTable::new(self.table.clone())?)
    }
}

pub fn read_presentation(path: &std::path::Path) -> Result<(PresentationInput, PPolynomial)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let input: PresentationInput =
        serde_json::from_str(&text).context("invalid presentation JSON")?;
    let p = input.to_ppolynomial()?;
    Ok((input, p))
}

pub fn read_group(path: &std::path::Path) -> Result<(GroupInput, FiniteGroupTable)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let input: GroupInput = serde_json::from_str(&text).context("invalid group JSON")?;
    let g = input.to_group()?;
    Ok((input, g))
}
