//! Anisotropy decisions for diagonal additive forms Σ c_i T_i^{p^{m_i}}
//! and split certification for separable p-polynomials.
//!
//! The layering is: exact decision in the equal-height case (reduction
//! to k^{p^m}-linear dependence), a sound valuation-separation test for
//! mixed heights, a bounded deterministic witness search, and otherwise
//! an honest Unknown.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::linalg::left_nullspace;
use crate::poly::PolyS;
use crate::ppoly::{DiagonalForm, ElementaryStep, PPolynomial, Substitution};
use crate::ratfn::RatFn;

/// How an Anisotropic verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnisotropyMethod {
    EqualHeightLinearAlgebra,
    ValuationSeparation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnisotropyVerdict {
    Anisotropic(AnisotropyMethod),
    /// Carries a verified nonzero zero of the form.
    Isotropic(Vec<RatFn>),
    /// Bounded search exhausted up to the recorded s-degree bound.
    Unknown { search_bound: u32 },
}

impl AnisotropyVerdict {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self, AnisotropyVerdict::Anisotropic(_))
    }
}

fn check_witness(form: &DiagonalForm, witness: &[RatFn]) -> Result<()> {
    if witness.iter().all(RatFn::is_zero) {
        return Err(Error::Invalid("isotropy witness must be nonzero"));
    }
    if !form.evaluate(witness)?.is_zero() {
        return Err(Error::Invalid("isotropy witness does not evaluate to zero"));
    }
    Ok(())
}

/// Exact anisotropy decision when all heights are equal to some m ≥ 1:
/// the form vanishes somewhere on k^r \ {0} iff the coefficients are
/// linearly dependent over the subfield k^{p^m}.
pub fn decide_equal_height(form: &DiagonalForm) -> Result<AnisotropyVerdict> {
    if form.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    let m = form.entries()[0].2;
    if m == 0 || form.entries().iter().any(|&(_, _, h)| h != m) {
        return Err(Error::HeightMismatch);
    }
    let field = form.field();
    // Coordinates of each c_i over the basis {1, s, …, s^{p^m - 1}} of k
    // over k^{p^m}, pulled back along the p^m-th power isomorphism.
    let rows: Vec<Vec<RatFn>> = form
        .entries()
        .iter()
        .map(|(_, c, _)| {
            c.pm_decompose(m)
                .into_iter()
                .map(|u| u.p_root(m).expect("pm_decompose components lie in k^{p^m}"))
                .collect()
        })
        .collect();
    let ncols = field.p().pow(m) as usize;
    let nullspace = left_nullspace(field, &rows, ncols);
    match nullspace.into_iter().next() {
        None => Ok(AnisotropyVerdict::Anisotropic(AnisotropyMethod::EqualHeightLinearAlgebra)),
        Some(w) => {
            check_witness(form, &w)?;
            Ok(AnisotropyVerdict::Isotropic(w))
        }
    }
}

/// Sufficient anisotropy test for arbitrary heights ≥ 1 by the s-adic
/// valuation on k: a nontrivial zero forces two terms to share the
/// minimal s-adic valuation, which requires
/// ord_s(c_i) ≡ ord_s(c_j) (mod p^{min(m_i, m_j)}) for some pair i ≠ j.
pub fn valuation_separation(form: &DiagonalForm) -> Result<AnisotropyVerdict> {
    if form.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if form.entries().iter().any(|&(_, _, h)| h == 0) {
        return Err(Error::HeightMismatch);
    }
    let p = form.field().p() as i64;
    let entries = form.entries();
    for i in 0..entries.len() {
        for j in 0..i {
            let (_, ci, mi) = &entries[i];
            let (_, cj, mj) = &entries[j];
            let modulus = p.pow(*mi.min(mj));
            let oi = ci.ord_s().expect("form coefficients are nonzero");
            let oj = cj.ord_s().expect("form coefficients are nonzero");
            if oi.rem_euclid(modulus) == oj.rem_euclid(modulus) {
                return Ok(AnisotropyVerdict::Unknown { search_bound: 0 });
            }
        }
    }
    Ok(AnisotropyVerdict::Anisotropic(AnisotropyMethod::ValuationSeparation))
}

/// All polynomials of s-degree ≤ bound over F_q, in the canonical order
/// (digit-encoded integers, low coefficient first).
pub(crate) fn polys_up_to_degree(field: Fq, bound: u32) -> Vec<PolyS> {
    let q = field.q();
    let slots = bound as usize + 1;
    let total = q.pow(slots as u32);
    (0..total)
        .map(|mut idx| {
            let mut coeffs = Vec::with_capacity(slots);
            for _ in 0..slots {
                coeffs.push(field.element(idx % q));
                idx /= q;
            }
            PolyS::new(field, coeffs)
        })
        .collect()
}

/// Exhaustive scan for a nontrivial zero with polynomial entries of
/// s-degree ≤ `degree_bound` (denominator 1), in the fixed deterministic
/// order: increasing total s-degree, then lexicographic coefficient
/// tuples. Returns the first verified witness; absence means only "no
/// witness within bound".
pub fn search_isotropy(form: &DiagonalForm, degree_bound: u32) -> Result<Option<Vec<RatFn>>> {
    if form.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    let field = form.field();
    let r = form.len();
    let pool = polys_up_to_degree(field, degree_bound);
    let n = pool.len() as u64;
    let total = n.checked_pow(r as u32).ok_or(Error::SearchSpaceTooLarge)?;

    // (total degree, index tuple) keys; stable candidate order.
    let mut candidates: Vec<(u32, u64)> = (1..total)
        .map(|code| {
            let mut c = code;
            let mut deg_sum = 0u32;
            for _ in 0..r {
                let poly = &pool[(c % n) as usize];
                deg_sum += poly.degree().map(|d| d as u32).unwrap_or(0);
                c /= n;
            }
            (deg_sum, code)
        })
        .collect();
    candidates.sort_unstable();

    for (_, code) in candidates {
        let mut c = code;
        let mut w = Vec::with_capacity(r);
        for _ in 0..r {
            w.push(RatFn::from_poly(pool[(c % n) as usize].clone()));
            c /= n;
        }
        if form.evaluate(&w)?.is_zero() && !w.iter().all(RatFn::is_zero) {
            check_witness(form, &w)?;
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// The layered anisotropy pipeline for forms with all heights ≥ 1:
/// exact equal-height decision, then the valuation-separation test,
/// then a bounded witness search, and otherwise Unknown.
pub fn anisotropy_pipeline(form: &DiagonalForm, search_bound: u32) -> Result<AnisotropyVerdict> {
    if form.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if form.entries().iter().any(|&(_, _, h)| h == 0) {
        return Err(Error::HeightMismatch);
    }
    let heights = form.heights();
    if heights.iter().all(|&h| h == heights[0]) {
        return decide_equal_height(form);
    }
    if valuation_separation(form)?.is_anisotropic() {
        return Ok(AnisotropyVerdict::Anisotropic(AnisotropyMethod::ValuationSeparation));
    }
    match search_isotropy(form, search_bound)? {
        Some(w) => Ok(AnisotropyVerdict::Isotropic(w)),
        None => Ok(AnisotropyVerdict::Unknown { search_bound }),
    }
}

/// A replayable split certificate: an invertible substitution chain and
/// the order in which variables are eliminated afterwards. Replaying the
/// chain must leave each named variable occurring only at height 0 (or
/// not at all) at its elimination step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    pub chain: Vec<Substitution>,
    pub elimination_order: Vec<usize>,
}

impl SplitCertificate {
    /// Replay against a polynomial; checks the per-step linear-occurrence
    /// condition and that the eliminations exhaust every variable.
    pub fn replay(&self, p: &PPolynomial) -> Result<()> {
        let mut q = p.clone();
        for sigma in &self.chain {
            if !sigma.is_invertible() {
                return Err(Error::Invalid("chain substitution lacks an inverse record"));
            }
            q = q.substitute(sigma)?;
        }
        let mut remaining = q;
        let mut eliminated = vec![false; p.arity()];
        for &var in &self.elimination_order {
            if var >= p.arity() || eliminated[var] {
                return Err(Error::Invalid("bad elimination order"));
            }
            eliminated[var] = true;
            match remaining.max_height(var) {
                None => {} // free variable: a G_a factor splits off
                Some(0) => {
                    // solved linearly: the remaining coordinates are free
                    remaining = PPolynomial::from_terms(
                        remaining.field(),
                        remaining.arity(),
                        [],
                    )?;
                }
                Some(_) => {
                    return Err(Error::Invalid(
                        "eliminated variable occurs above height 0",
                    ));
                }
            }
        }
        if !remaining.is_zero() {
            return Err(Error::Invalid("elimination order leaves constraints unresolved"));
        }
        if !eliminated.iter().all(|&b| b) {
            return Err(Error::Invalid("elimination order misses a variable"));
        }
        Ok(())
    }
}

/// Greedy split certification: eliminate variables occurring only
/// linearly; otherwise use an equal-height isotropy witness to build an
/// invertible substitution that strictly reduces the top height of some
/// variable, and repeat within `budget` substitution steps.
pub fn certify_split(p: &PPolynomial, budget: u32) -> Result<Option<SplitCertificate>> {
    if !p.is_separable() && !p.is_zero() {
        return Err(Error::NotSeparable);
    }
    let field = p.field();
    let mut current = p.clone();
    let mut chain = Vec::new();

    for _ in 0..=budget {
        if let Some(order) = elimination_order(&current) {
            let cert = SplitCertificate { chain, elimination_order: order };
            cert.replay(p)?;
            return Ok(Some(cert));
        }
        let form = current.principal_part()?;
        let heights = form.heights();
        let m = heights[0];
        if m == 0 || heights.iter().any(|&h| h != m) {
            // mixed-height isotropy has no reduction rule
            return Ok(None);
        }
        match decide_equal_height(&form)? {
            AnisotropyVerdict::Anisotropic(_) => return Ok(None),
            AnisotropyVerdict::Unknown { .. } => return Ok(None),
            AnisotropyVerdict::Isotropic(witness) => {
                let sigma = reduction_substitution(field, &current, &form, &witness)?;
                let next = current.substitute(&sigma)?;
                chain.push(sigma);
                current = next;
            }
        }
    }
    Ok(None)
}

/// An elimination order exists when some variable occurs only at height
/// 0 (or the polynomial is zero): solving that variable linearly leaves
/// every other coordinate free, so the kernel is a product of G_a's.
fn elimination_order(p: &PPolynomial) -> Option<Vec<usize>> {
    if p.is_zero() {
        return Some((0..p.arity()).collect());
    }
    let linear = p.occurring_vars().into_iter().find(|&v| p.max_height(v) == Some(0))?;
    let mut order = vec![linear];
    order.extend((0..p.arity()).filter(|&v| v != linear));
    Some(order)
}

/// Build the invertible substitution induced by an equal-height isotropy
/// witness w: with pivot j0 (the last index with w_{j0} ≠ 0),
/// T_i ← T_i + w_i·T_{j0} for i ≠ j0 and T_{j0} ← w_{j0}·T_{j0}. The
/// height-m coefficient of T_{j0} in the image is Σ c_i w_i^{p^m} = 0,
/// so the pivot's top height strictly drops.
fn reduction_substitution(
    field: Fq,
    current: &PPolynomial,
    form: &DiagonalForm,
    witness: &[RatFn],
) -> Result<Substitution> {
    let pivot_pos = witness
        .iter()
        .rposition(|w| !w.is_zero())
        .ok_or(Error::Invalid("empty witness"))?;
    let pivot_var = form.entries()[pivot_pos].0;
    let mut steps = Vec::new();
    for (pos, (var, _, _)) in form.entries().iter().enumerate() {
        if pos == pivot_pos || witness[pos].is_zero() {
            continue;
        }
        steps.push(ElementaryStep::Shear {
            target: *var,
            source: pivot_var,
            coeff: witness[pos].clone(),
            height: 0,
        });
    }
    if !witness[pivot_pos].is_one() {
        steps.push(ElementaryStep::Scale { var: pivot_var, factor: witness[pivot_pos].clone() });
    }
    let sigma = Substitution::from_steps(field, current.arity(), steps)?;
    // the pivot's top height must strictly drop, otherwise reduction
    // would loop
    let old_h = current.max_height(pivot_var);
    let new = current.substitute(&sigma)?;
    if new.max_height(pivot_var) >= old_h {
        return Err(Error::Invalid("reduction substitution failed to reduce"));
    }
    Ok(sigma)
}
