//! Computing with H¹(L, G) ≅ L / P(L × ⋯ × L) for L = k((t)) and
//! G = ker P: exclusion certificates for negative-valuation targets by
//! the valuation argument, a contraction solver for positive-valuation
//! targets, and an independent brute-force oracle over bounded windows.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::isotropy::{anisotropy_pipeline, polys_up_to_degree, AnisotropyMethod, AnisotropyVerdict};
use crate::laurent::LaurentSeries;
use crate::ppoly::{DiagonalForm, PPolynomial};
use crate::ratfn::RatFn;

/// Bound on the s-degree of witness candidates tried while certifying a
/// mixed-height principal part anisotropic.
pub const DEFAULT_SEARCH_BOUND: u32 = 3;

/// A machine-checkable proof that [target] is a nontrivial class of
/// H¹(L, G): no preimage under P exists because any one would need a
/// coordinate of negative valuation, forcing the value's valuation down
/// to m ≤ -p^{min height} ≤ -p, where the coefficient of t^m is the
/// residue form Σ_{i∈I} c_i a_i^{p^{m_i}} that anisotropy keeps nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionCertificate {
    pub target: LaurentSeries,
    /// The principal part, with all heights ≥ 1.
    pub form: DiagonalForm,
    /// How the form was certified anisotropic.
    pub method: AnisotropyMethod,
    /// min_i m_i of the form.
    pub min_height: u32,
    /// The valuation bound -p^{min height} any preimage would force.
    pub m_bound: i64,
    pub target_valuation: i64,
}

impl ExclusionCertificate {
    /// Independently replay the certificate against a presentation,
    /// trusting no cached intermediate value.
    pub fn verify(&self, p: &PPolynomial) -> Result<()> {
        if !p.is_separable() {
            return Err(Error::NotSeparable);
        }
        let form = p.principal_part()?;
        if form != self.form {
            return Err(Error::Invalid("certificate form does not match the presentation"));
        }
        let min_height = form.min_height().ok_or(Error::EmptyPolynomial)?;
        if min_height < 1 || min_height != self.min_height {
            return Err(Error::Invalid("certificate min height mismatch"));
        }
        let verdict = match self.method {
            AnisotropyMethod::EqualHeightLinearAlgebra => crate::isotropy::decide_equal_height(&form)?,
            AnisotropyMethod::ValuationSeparation => crate::isotropy::valuation_separation(&form)?,
        };
        if !verdict.is_anisotropic() {
            return Err(Error::PrincipalPartNotCertified);
        }
        let pc = p.field().p() as i64;
        let v = self.target.valuation().ok_or(Error::TargetValuationOutOfRange)?;
        if v != self.target_valuation || v <= -pc || v >= 0 {
            return Err(Error::TargetValuationOutOfRange);
        }
        let m_bound = -pc.pow(min_height);
        if m_bound != self.m_bound || !(m_bound <= -pc && -pc < v) {
            return Err(Error::Invalid("valuation bound chain broken"));
        }
        Ok(())
    }
}

/// A class of H¹(L, G) ≅ L / P(L^r), given by a representative. Two
/// representatives differing by a value of P define the same class;
/// equality is only semi-decidable, via the solver or the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Class {
    pub representative: LaurentSeries,
    pub presentation: PPolynomial,
}

impl H1Class {
    /// Shift the representative by P(β); the class is unchanged.
    pub fn shift(&self, beta: &[LaurentSeries]) -> Result<H1Class> {
        let delta = self.presentation.evaluate_laurent(beta)?;
        Ok(H1Class {
            representative: self.representative.add(&delta),
            presentation: self.presentation.clone(),
        })
    }
}

/// Certify that `target` has no preimage under P over L, hence that
/// [target] ∈ H¹(L, G) is nontrivial and G is not special.
///
/// Sound exactly for -p < v(target) < 0: a preimage would need some
/// v(α_i) ≤ -1, so v(P(α)) = m ≤ -p^{min height} ≤ -p < v(target), and
/// the t^m coefficient is a value of the principal part on a nonzero
/// tuple of leading coefficients, which anisotropy forbids to vanish.
pub fn exclude_target(p: &PPolynomial, target: &LaurentSeries) -> Result<ExclusionCertificate> {
    if !p.is_separable() {
        return Err(Error::NotSeparable);
    }
    let form = p.principal_part()?;
    let min_height = form.min_height().ok_or(Error::EmptyPolynomial)?;
    if min_height < 1 {
        return Err(Error::PrincipalPartNotCertified);
    }
    let method = match anisotropy_pipeline(&form, DEFAULT_SEARCH_BOUND)? {
        AnisotropyVerdict::Anisotropic(method) => method,
        _ => return Err(Error::PrincipalPartNotCertified),
    };
    let pc = p.field().p() as i64;
    let v = target.valuation().ok_or(Error::TargetValuationOutOfRange)?;
    if v <= -pc || v >= 0 {
        return Err(Error::TargetValuationOutOfRange);
    }
    let cert = ExclusionCertificate {
        target: target.clone(),
        form,
        method,
        min_height,
        m_bound: -pc.pow(min_height),
        target_valuation: v,
    };
    cert.verify(p)?;
    Ok(cert)
}

/// Solve P(α) = target by t-adic contraction on a height-0 variable.
///
/// A variable occurring only at height 0 solves any target exactly in
/// one step. Otherwise the fixed-point iteration
/// x ← c_0^{-1}(target - higher terms) contracts only for
/// v(target) ≥ 1.
pub fn solve_positive_valuation(
    p: &PPolynomial,
    target: &LaurentSeries,
) -> Result<Vec<LaurentSeries>> {
    if !p.is_separable() {
        return Err(Error::NotSeparable);
    }
    let field = p.field();
    let prec = target.prec_end();
    if target.is_zero() {
        return Ok(vec![LaurentSeries::zero(field, prec); p.arity()]);
    }
    let linear_vars: Vec<usize> = p
        .occurring_vars()
        .into_iter()
        .filter(|&v| p.coeff(v, 0).is_some())
        .collect();
    let var = *linear_vars
        .iter()
        .find(|&&v| p.max_height(v) == Some(0))
        .or_else(|| linear_vars.first())
        .ok_or(Error::NoLinearTerm)?;
    if p.max_height(var) != Some(0) && target.valuation().map_or(true, |v| v < 1) {
        return Err(Error::TargetValuationOutOfRange);
    }

    let c0_inv = p.coeff(var, 0).unwrap().inv()?;
    let higher: Vec<(u32, RatFn)> = p
        .terms()
        .filter(|&(v, h, _)| v == var && h > 0)
        .map(|(_, h, c)| (h, c.clone()))
        .collect();

    let mut x = LaurentSeries::zero(field, prec);
    let window = (prec - target.valuation().unwrap()).max(1) as u32 + 2;
    for _ in 0..window {
        let mut rhs = target.clone();
        for (h, c) in &higher {
            rhs = rhs.sub(&x.frobenius(*h).truncated(prec).scale(c));
        }
        let next = rhs.scale(&c0_inv).truncated(prec);
        if next == x {
            break;
        }
        x = next;
    }

    let mut alpha = vec![LaurentSeries::zero(field, prec); p.arity()];
    alpha[var] = x;
    let residual = p.evaluate_laurent(&alpha)?.truncated(prec).sub(&target.truncated(prec));
    if !residual.is_zero() {
        return Err(Error::PrecisionExceeded);
    }
    Ok(alpha)
}

/// Outcome of the bounded-window oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageSearch {
    /// A verified preimage.
    InImage(Vec<LaurentSeries>),
    /// The bounded candidate space is exhausted; asserts nothing beyond
    /// the window and degree bound.
    NotInWindow,
}

/// Exhaustive deterministic scan for a preimage of `target` under P with
/// candidate coordinates that are Laurent polynomials supported on
/// exponents [vmin, vmax], coefficients of s-degree ≤ `deg_bound` and
/// denominator 1.
///
/// P is additive and char-p Frobenius is termwise, so the coefficient of
/// t^n in P(α) decomposes over the unknowns a_{i,e} (coefficient of t^e
/// in α_i) as Σ_{e·p^j = n} c_{ij}·a_{i,e}^{p^j}. The scan is a
/// backtracking search over the unknowns in (e, i) order, checking each
/// t^n constraint as soon as its last unknown is assigned; the first
/// fully consistent assignment in this order wins. `node_cap` bounds the
/// number of explored assignments; exceeding it refuses with an error
/// rather than truncating.
pub fn brute_force_image(
    p: &PPolynomial,
    target: &LaurentSeries,
    vmin: i64,
    vmax: i64,
    deg_bound: u32,
    node_cap: u64,
) -> Result<ImageSearch> {
    if vmin > vmax {
        return Err(Error::Invalid("empty exponent window"));
    }
    let field = p.field();
    let pc = field.p() as i64;
    let r = p.arity();
    let width = (vmax - vmin + 1) as usize;
    let n_unknowns = r * width;
    // unknown index: (e - vmin) * r + i
    let unknown = |i: usize, e: i64| ((e - vmin) as usize) * r + i;

    // t^n constraints: contributor list per n.
    let mut constraints: BTreeMap<i64, Vec<(usize, u32, RatFn)>> = BTreeMap::new();
    for (i, j, c) in p.terms() {
        let step = pc.checked_pow(j).ok_or(Error::SearchSpaceTooLarge)?;
        for e in vmin..=vmax {
            let n = e * step;
            if n < target.prec_end() {
                constraints.entry(n).or_default().push((unknown(i, e), j, c.clone()));
            }
        }
    }
    if let Some(v) = target.valuation() {
        for n in v..target.prec_end() {
            if !target.coeff_at(n)?.is_zero() {
                constraints.entry(n).or_default();
            }
        }
    }

    // Constraints with no contributors are decided now.
    let mut closing_at: Vec<Vec<i64>> = vec![Vec::new(); n_unknowns];
    for (&n, contributors) in &constraints {
        match contributors.iter().map(|&(u, _, _)| u).max() {
            Some(u) => closing_at[u].push(n),
            None => {
                if !target.coeff_at(n)?.is_zero() {
                    return Ok(ImageSearch::NotInWindow);
                }
            }
        }
    }

    let pool: Vec<RatFn> = polys_up_to_degree(field, deg_bound)
        .into_iter()
        .map(RatFn::from_poly)
        .collect();
    let n_values = pool.len();

    let mut assignment: Vec<usize> = vec![0; n_unknowns];
    let mut depth = 0usize;
    let mut nodes = 0u64;
    'search: loop {
        if assignment[depth] < n_values {
            nodes += 1;
            if nodes > node_cap {
                return Err(Error::SearchSpaceTooLarge);
            }
            let ok = closing_at[depth].iter().all(|&n| {
                let mut acc = RatFn::zero(field);
                for &(u, j, ref c) in &constraints[&n] {
                    acc = acc.add(&c.mul(&pool[assignment[u]].frobenius(j)));
                }
                acc == target.coeff_at(n).expect("n below window end")
            });
            if ok {
                if depth + 1 == n_unknowns {
                    let alpha = reconstruct(field, &pool, &assignment, r, vmin, vmax, target.prec_end());
                    if alpha.iter().all(LaurentSeries::is_zero) && target.is_zero() {
                        return Ok(ImageSearch::InImage(alpha));
                    }
                    let value = p.evaluate_laurent(&alpha)?;
                    let prec = value.prec_end().min(target.prec_end());
                    if value.truncated(prec) == target.truncated(prec) {
                        return Ok(ImageSearch::InImage(alpha));
                    }
                    assignment[depth] += 1;
                    continue 'search;
                }
                depth += 1;
                assignment[depth] = 0;
                continue 'search;
            }
            assignment[depth] += 1;
            continue 'search;
        }
        // exhausted this level; backtrack
        if depth == 0 {
            return Ok(ImageSearch::NotInWindow);
        }
        assignment[depth] = 0;
        depth -= 1;
        assignment[depth] += 1;
    }
}

fn reconstruct(
    field: crate::fq::Fq,
    pool: &[RatFn],
    assignment: &[usize],
    r: usize,
    vmin: i64,
    vmax: i64,
    prec: i64,
) -> Vec<LaurentSeries> {
    (0..r)
        .map(|i| {
            let terms: Vec<(i64, RatFn)> = (vmin..=vmax)
                .map(|e| (e, pool[assignment[((e - vmin) as usize) * r + i]].clone()))
                .collect();
            LaurentSeries::from_terms(field, &terms, prec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use crate::grammar::{parse_laurent_poly, parse_ratfn};

    fn f2() -> Fq {
        Fq::prime(2).unwrap()
    }

    fn r(text: &str) -> RatFn {
        parse_ratfn(f2(), text).unwrap()
    }

    fn series(text: &str, prec: i64) -> LaurentSeries {
        LaurentSeries::from_poly(&parse_laurent_poly(f2(), text).unwrap(), prec)
    }

    /// P = x^2 + x + s·y^2
    fn wound() -> PPolynomial {
        PPolynomial::from_terms(f2(), 2, [(0, 1, r("1")), (0, 0, r("1")), (1, 1, r("s"))])
            .unwrap()
    }

    /// P = x^2 + x (Artin-Schreier)
    fn artin_schreier() -> PPolynomial {
        PPolynomial::from_terms(f2(), 1, [(0, 1, r("1")), (0, 0, r("1"))]).unwrap()
    }

    #[test]
    fn excludes_t_inverse() {
        let cert = exclude_target(&wound(), &series("t^-1", 16)).unwrap();
        assert_eq!(cert.target_valuation, -1);
        assert_eq!(cert.m_bound, -2);
        cert.verify(&wound()).unwrap();
    }

    #[test]
    fn excludes_any_valuation_minus_one_target() {
        let cert = exclude_target(&wound(), &series("t^-1 + 1 + t", 16)).unwrap();
        cert.verify(&wound()).unwrap();
    }

    #[test]
    fn rejects_positive_valuation_target() {
        assert_eq!(
            exclude_target(&wound(), &series("t", 16)),
            Err(Error::TargetValuationOutOfRange)
        );
    }

    #[test]
    fn rejects_split_presentation() {
        // y + x^2 has a height-0 principal entry
        let p = PPolynomial::from_terms(f2(), 2, [(1, 0, r("1")), (0, 1, r("1"))]).unwrap();
        assert_eq!(
            exclude_target(&p, &series("t^-1", 16)),
            Err(Error::PrincipalPartNotCertified)
        );
    }

    #[test]
    fn verify_rejects_wrong_presentation() {
        let cert = exclude_target(&wound(), &series("t^-1", 16)).unwrap();
        assert!(cert.verify(&artin_schreier()).is_err());
    }

    #[test]
    fn solver_artin_schreier_target_t() {
        let alpha = solve_positive_valuation(&artin_schreier(), &series("t", 16)).unwrap();
        let expected = series("t + t^2 + t^4 + t^8", 16);
        assert_eq!(alpha[0], expected);
    }

    #[test]
    fn solver_wound_shape_keeps_second_variable_zero() {
        let alpha = solve_positive_valuation(&wound(), &series("t", 16)).unwrap();
        assert!(alpha[1].is_zero());
        assert_eq!(alpha[0], series("t + t^2 + t^4 + t^8", 16));
    }

    #[test]
    fn solver_zero_target() {
        let alpha = solve_positive_valuation(&wound(), &LaurentSeries::zero(f2(), 16)).unwrap();
        assert!(alpha.iter().all(LaurentSeries::is_zero));
    }

    #[test]
    fn solver_linear_only_variable_handles_any_valuation() {
        let p = PPolynomial::from_terms(f2(), 2, [(1, 0, r("1")), (0, 1, r("1"))]).unwrap();
        let target = series("t^-3 + s*t^-1 + 1", 16);
        let alpha = solve_positive_valuation(&p, &target).unwrap();
        let value = p.evaluate_laurent(&alpha).unwrap();
        let prec = value.prec_end().min(16);
        assert_eq!(value.truncated(prec), target.truncated(prec));
    }

    #[test]
    fn solver_rejects_low_valuation_without_linear_only_variable() {
        assert_eq!(
            solve_positive_valuation(&wound(), &series("1", 16)),
            Err(Error::TargetValuationOutOfRange)
        );
    }

    #[test]
    fn oracle_agrees_with_claim() {
        let res = brute_force_image(&wound(), &series("t^-1", 16), -2, 2, 2, 10_000_000).unwrap();
        assert_eq!(res, ImageSearch::NotInWindow);
    }

    #[test]
    fn oracle_artin_schreier_misses_constant_one() {
        // x^2 + x = 1 needs a root of X^2+X+1, absent from F_2(s)
        let res =
            brute_force_image(&artin_schreier(), &series("1", 16), 0, 2, 1, 1_000_000).unwrap();
        assert_eq!(res, ImageSearch::NotInWindow);
    }

    #[test]
    fn oracle_linear_variable_hits_everything() {
        let p = PPolynomial::from_terms(f2(), 2, [(1, 0, r("1")), (0, 1, r("1"))]).unwrap();
        for text in ["1", "t + s", "t^-1 + s^2*t^2"] {
            let target = series(text, 3);
            match brute_force_image(&p, &target, -1, 2, 2, 10_000_000).unwrap() {
                ImageSearch::InImage(alpha) => {
                    let value = p.evaluate_laurent(&alpha).unwrap();
                    let prec = value.prec_end().min(target.prec_end());
                    assert_eq!(value.truncated(prec), target.truncated(prec));
                }
                other => panic!("expected preimage for {text}, got {other:?}"),
            }
        }
    }

    #[test]
    fn oracle_finds_solver_solutions() {
        let target = series("t", 3);
        match brute_force_image(&artin_schreier(), &target, 0, 2, 1, 10_000_000).unwrap() {
            ImageSearch::InImage(alpha) => {
                let value = artin_schreier().evaluate_laurent(&alpha).unwrap();
                let prec = value.prec_end().min(3);
                assert_eq!(value.truncated(prec), target.truncated(prec));
            }
            other => panic!("expected preimage, got {other:?}"),
        }
    }

    #[test]
    fn image_is_a_subgroup() {
        // if target is hit, target + P(β) is hit by the shifted preimage
        let p = artin_schreier();
        let target = series("t", 3);
        let beta = [series("s*t + t^2", 3)];
        let shifted = target.add(&p.evaluate_laurent(&beta).unwrap()).truncated(3);
        let res = brute_force_image(&p, &shifted, 0, 2, 1, 10_000_000).unwrap();
        assert!(matches!(res, ImageSearch::InImage(_)));
    }

    #[test]
    fn node_cap_refuses() {
        assert_eq!(
            brute_force_image(&wound(), &series("t^-1", 16), -2, 2, 2, 10),
            Err(Error::SearchSpaceTooLarge)
        );
    }
}
