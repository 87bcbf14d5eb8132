//! p-polynomials P = Σ_i P_i(T_i) over k and additive changes of
//! variables. The kernel of a separable P presents a smooth commutative
//! p-torsion unipotent group as a subgroup of G_a^r.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::laurent::LaurentSeries;
use crate::ratfn::RatFn;

/// A p-polynomial in r variables: a set of monomials c·T_i^{p^j} with at
/// most one term per (variable, height) pair and nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPolynomial {
    field: Fq,
    arity: usize,
    /// (variable index, height) -> nonzero coefficient.
    terms: BTreeMap<(usize, u32), RatFn>,
}

/// A diagonal additive form Σ_i c_i T_i^{p^{m_i}}: the principal part of
/// a p-polynomial, one entry per occurring variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    field: Fq,
    /// (variable index, nonzero coefficient, height), sorted by variable.
    entries: Vec<(usize, RatFn, u32)>,
}

impl PPolynomial {
    /// Build from a term list; duplicate (var, height) pairs are summed
    /// and zero coefficients dropped.
    pub fn from_terms(
        field: Fq,
        arity: usize,
        terms: impl IntoIterator<Item = (usize, u32, RatFn)>,
    ) -> Result<PPolynomial> {
        let mut map: BTreeMap<(usize, u32), RatFn> = BTreeMap::new();
        for (var, height, coeff) in terms {
            if var >= arity {
                return Err(Error::Invalid("variable index out of range"));
            }
            if coeff.field() != field {
                return Err(Error::FieldMismatch);
            }
            let entry = map.entry((var, height)).or_insert_with(|| RatFn::zero(field));
            *entry = entry.add(&coeff);
            if entry.is_zero() {
                map.remove(&(var, height));
            }
        }
        Ok(PPolynomial { field, arity, terms: map })
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32, &RatFn)> {
        self.terms.iter().map(|(&(v, h), c)| (v, h, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, var: usize, height: u32) -> Option<&RatFn> {
        self.terms.get(&(var, height))
    }

    /// Variables that actually occur, in increasing order.
    pub fn occurring_vars(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.terms.keys().map(|&(v, _)| v).collect();
        vars.dedup();
        vars
    }

    /// Maximal height among the terms of a variable, if it occurs.
    pub fn max_height(&self, var: usize) -> Option<u32> {
        self.terms
            .range((var, 0)..(var + 1, 0))
            .map(|(&(_, h), _)| h)
            .max()
    }

    /// True iff some term has height 0 (a nonzero monomial of degree 1),
    /// i.e. the kernel of P is smooth.
    pub fn is_separable(&self) -> bool {
        self.terms.keys().any(|&(_, h)| h == 0)
    }

    /// The sum of the leading terms of the P_i.
    pub fn principal_part(&self) -> Result<DiagonalForm> {
        if self.terms.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let entries = self
            .occurring_vars()
            .into_iter()
            .map(|v| {
                let h = self.max_height(v).unwrap();
                (v, self.terms[&(v, h)].clone(), h)
            })
            .collect();
        Ok(DiagonalForm { field: self.field, entries })
    }

    /// Exact evaluation at a point of k^r.
    pub fn evaluate(&self, point: &[RatFn]) -> Result<RatFn> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: point.len() });
        }
        let mut acc = RatFn::zero(self.field);
        for (&(v, h), c) in &self.terms {
            acc = acc.add(&c.mul(&point[v].frobenius(h)));
        }
        Ok(acc)
    }

    /// Evaluation at a point of L^r, truncated to the supportable window.
    pub fn evaluate_laurent(&self, point: &[LaurentSeries]) -> Result<LaurentSeries> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: point.len() });
        }
        let min_prec = point.iter().map(LaurentSeries::prec_end).min().unwrap_or(i64::MAX / 4);
        let mut acc = LaurentSeries::zero(self.field, i64::MAX / 4);
        for (&(v, h), c) in &self.terms {
            acc = acc.add(&point[v].frobenius(h).scale(c));
        }
        if self.terms.is_empty() {
            acc = acc.truncated(min_prec);
        }
        Ok(acc)
    }

    /// Compose with an additive substitution: returns Q with
    /// Q(α) = P(σ(α)) for all α.
    pub fn substitute(&self, sigma: &Substitution) -> Result<PPolynomial> {
        if sigma.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: sigma.arity() });
        }
        let mut out: Vec<(usize, u32, RatFn)> = Vec::new();
        for (&(v, h), c) in &self.terms {
            // c·(Σ a·T_w^{p^e})^{p^h} = Σ c·a^{p^h}·T_w^{p^{e+h}}
            for (a, w, e) in &sigma.exprs[v].terms {
                out.push((*w, e + h, c.mul(&a.frobenius(h))));
            }
        }
        PPolynomial::from_terms(self.field, self.arity, out)
    }
}

impl DiagonalForm {
    pub fn new(field: Fq, entries: Vec<(usize, RatFn, u32)>) -> Result<DiagonalForm> {
        for (_, c, _) in &entries {
            if c.is_zero() {
                return Err(Error::Invalid("diagonal form coefficients must be nonzero"));
            }
        }
        Ok(DiagonalForm { field, entries })
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn entries(&self) -> &[(usize, RatFn, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn heights(&self) -> Vec<u32> {
        self.entries.iter().map(|&(_, _, h)| h).collect()
    }

    pub fn min_height(&self) -> Option<u32> {
        self.entries.iter().map(|&(_, _, h)| h).min()
    }

    /// Evaluate Σ c_i w_i^{p^{m_i}} at a coefficient tuple indexed like
    /// `entries`.
    pub fn evaluate(&self, witness: &[RatFn]) -> Result<RatFn> {
        if witness.len() != self.entries.len() {
            return Err(Error::ArityMismatch { expected: self.entries.len(), got: witness.len() });
        }
        let mut acc = RatFn::zero(self.field);
        for ((_, c, h), w) in self.entries.iter().zip(witness) {
            acc = acc.add(&c.mul(&w.frobenius(*h)));
        }
        Ok(acc)
    }
}

/// One additive-polynomial expression Σ a·T_w^{p^e}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveExpr {
    /// (coefficient, variable, height); zero coefficients dropped.
    pub terms: Vec<(RatFn, usize, u32)>,
}

impl AdditiveExpr {
    pub fn variable(var: usize, field: Fq) -> AdditiveExpr {
        AdditiveExpr { terms: vec![(RatFn::one(field), var, 0)] }
    }

    fn eval_ratfn(&self, field: Fq, point: &[RatFn]) -> RatFn {
        let mut acc = RatFn::zero(field);
        for (a, w, e) in &self.terms {
            acc = acc.add(&a.mul(&point[*w].frobenius(*e)));
        }
        acc
    }

    fn eval_laurent(&self, field: Fq, point: &[LaurentSeries], prec: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::zero(field, prec);
        for (a, w, e) in &self.terms {
            acc = acc.add(&point[*w].frobenius(*e).scale(a));
        }
        acc
    }
}

/// An elementary invertible change of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryStep {
    /// T_var ← factor·T_var, factor ≠ 0.
    Scale { var: usize, factor: RatFn },
    /// T_target ← T_target + coeff·T_source^{p^height}, target ≠ source.
    Shear { target: usize, source: usize, coeff: RatFn, height: u32 },
}

impl ElementaryStep {
    pub fn inverse(&self) -> ElementaryStep {
        match self {
            ElementaryStep::Scale { var, factor } => ElementaryStep::Scale {
                var: *var,
                factor: factor.inv().expect("scale factor nonzero"),
            },
            ElementaryStep::Shear { target, source, coeff, height } => ElementaryStep::Shear {
                target: *target,
                source: *source,
                coeff: coeff.neg(),
                height: *height,
            },
        }
    }
}

/// An additive change of variables on G_a^r: each variable is mapped to
/// an additive-polynomial expression in the variables. Substitutions
/// assembled from elementary steps record the steps and are flagged
/// invertible, carrying their inverse chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    field: Fq,
    exprs: Vec<AdditiveExpr>,
    steps: Option<Vec<ElementaryStep>>,
}

impl Substitution {
    pub fn identity(field: Fq, arity: usize) -> Substitution {
        Substitution {
            field,
            exprs: (0..arity).map(|v| AdditiveExpr::variable(v, field)).collect(),
            steps: Some(vec![]),
        }
    }

    /// A general (not necessarily invertible) substitution.
    pub fn from_exprs(field: Fq, exprs: Vec<AdditiveExpr>) -> Result<Substitution> {
        let arity = exprs.len();
        for expr in &exprs {
            for (_, w, _) in &expr.terms {
                if *w >= arity {
                    return Err(Error::Invalid("substitution variable index out of range"));
                }
            }
        }
        Ok(Substitution { field, exprs, steps: None })
    }

    /// Compose elementary invertible steps, applied left to right.
    pub fn from_steps(field: Fq, arity: usize, steps: Vec<ElementaryStep>) -> Result<Substitution> {
        let mut sub = Substitution::identity(field, arity);
        for step in &steps {
            sub = sub.then_step(step)?;
        }
        sub.steps = Some(steps);
        Ok(sub)
    }

    fn then_step(&self, step: &ElementaryStep) -> Result<Substitution> {
        let mut exprs = self.exprs.clone();
        match step {
            ElementaryStep::Scale { var, factor } => {
                if *var >= exprs.len() {
                    return Err(Error::Invalid("scale variable out of range"));
                }
                if factor.is_zero() {
                    return Err(Error::Invalid("scale factor must be nonzero"));
                }
                for (a, _, _) in exprs[*var].terms.iter_mut() {
                    *a = a.mul(factor);
                }
            }
            ElementaryStep::Shear { target, source, coeff, height } => {
                if *target >= exprs.len() || *source >= exprs.len() {
                    return Err(Error::Invalid("shear variable out of range"));
                }
                if target == source {
                    return Err(Error::Invalid("shear target must differ from source"));
                }
                // Steps compose on the output side: appending a shear
                // sends slot `target` to expr_target + coeff·expr_source^{p^e}.
                let src_expr = exprs[*source].clone();
                let mut new_terms = exprs[*target].terms.clone();
                for (a, w, e) in &src_expr.terms {
                    new_terms.push((coeff.mul(&a.frobenius(*height)), *w, e + height));
                }
                exprs[*target] = normalize_expr(self.field, new_terms);
            }
        }
        Ok(Substitution { field: self.field, exprs, steps: None })
    }

    pub fn arity(&self) -> usize {
        self.exprs.len()
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn exprs(&self) -> &[AdditiveExpr] {
        &self.exprs
    }

    pub fn is_invertible(&self) -> bool {
        self.steps.is_some()
    }

    pub fn steps(&self) -> Option<&[ElementaryStep]> {
        self.steps.as_deref()
    }

    /// The recorded inverse chain (reversed, step-inverted).
    pub fn inverse(&self) -> Option<Substitution> {
        let steps = self.steps.as_ref()?;
        let inv: Vec<ElementaryStep> = steps.iter().rev().map(ElementaryStep::inverse).collect();
        Some(Substitution::from_steps(self.field, self.arity(), inv).expect("inverse of valid steps"))
    }

    /// Apply the substitution to a point of k^r.
    pub fn apply(&self, point: &[RatFn]) -> Result<Vec<RatFn>> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        Ok(self.exprs.iter().map(|e| e.eval_ratfn(self.field, point)).collect())
    }

    /// Apply the substitution to a point of L^r.
    pub fn apply_laurent(&self, point: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        let prec = point.iter().map(LaurentSeries::prec_end).min().unwrap_or(i64::MAX / 4);
        Ok(self.exprs.iter().map(|e| e.eval_laurent(self.field, point, prec)).collect())
    }
}

fn normalize_expr(field: Fq, terms: Vec<(RatFn, usize, u32)>) -> AdditiveExpr {
    let mut map: BTreeMap<(usize, u32), RatFn> = BTreeMap::new();
    for (a, w, e) in terms {
        let entry = map.entry((w, e)).or_insert_with(|| RatFn::zero(field));
        *entry = entry.add(&a);
        if entry.is_zero() {
            map.remove(&(w, e));
        }
    }
    AdditiveExpr { terms: map.into_iter().map(|((w, e), a)| (a, w, e)).collect() }
}
