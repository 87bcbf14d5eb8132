//! Randomized structural invariants across the algebra stack, checked
//! with exact comparison throughout.

use proptest::prelude::*;

use unipotent_core::cohomology::{brute_force_image, ImageSearch};
use unipotent_core::isotropy::{
    decide_equal_height, search_isotropy, valuation_separation, AnisotropyVerdict,
};
use unipotent_core::laurent::LaurentSeries;
use unipotent_core::poly::PolyS;
use unipotent_core::ppoly::{DiagonalForm, ElementaryStep, PPolynomial, Substitution};
use unipotent_core::{Fq, RatFn};

fn fields() -> impl Strategy<Value = Fq> {
    prop_oneof![
        Just(Fq::prime(2).unwrap()),
        Just(Fq::prime(3).unwrap()),
        Just(Fq::prime(5).unwrap()),
        // F_4 = F_2[g]/(g² + g + 1)
        Just(Fq::extension(2, &[1, 1, 1]).unwrap()),
    ]
}

fn arb_poly(field: Fq) -> impl Strategy<Value = PolyS> {
    proptest::collection::vec(0u64..field.q(), 0..5).prop_map(move |digits| {
        PolyS::new(field, digits.iter().map(|&d| field.element(d)).collect())
    })
}

fn arb_ratfn(field: Fq) -> impl Strategy<Value = RatFn> {
    (arb_poly(field), arb_poly(field)).prop_map(move |(num, den)| {
        let den = if den.is_zero() { PolyS::one(field) } else { den };
        RatFn::new(num, den).unwrap()
    })
}

fn arb_nonzero_ratfn(field: Fq) -> impl Strategy<Value = RatFn> {
    arb_ratfn(field).prop_map(move |f| if f.is_zero() { RatFn::one(field) } else { f })
}

/// A tracked series with terms in [-3, 4) and window end in [5, 9).
fn arb_laurent(field: Fq) -> impl Strategy<Value = LaurentSeries> {
    (proptest::collection::vec((-3i64..4, arb_ratfn(field)), 0..4), 5i64..9)
        .prop_map(move |(terms, prec)| LaurentSeries::from_terms(field, &terms, prec))
}

fn arb_ppoly(field: Fq, arity: usize) -> impl Strategy<Value = PPolynomial> {
    proptest::collection::vec((0..arity, 0u32..3, arb_ratfn(field)), 1..5)
        .prop_map(move |terms| PPolynomial::from_terms(field, arity, terms).unwrap())
}

fn arb_point(field: Fq, arity: usize) -> impl Strategy<Value = Vec<RatFn>> {
    proptest::collection::vec(arb_ratfn(field), arity)
}

fn arb_invertible_substitution(
    field: Fq,
    arity: usize,
    max_height: u32,
) -> impl Strategy<Value = Substitution> {
    let step =
        (0..arity, 0..arity, arb_nonzero_ratfn(field), 0..=max_height, any::<bool>()).prop_map(
            move |(a, b, coeff, height, scale)| {
                if scale || a == b {
                    ElementaryStep::Scale { var: a, factor: coeff }
                } else {
                    ElementaryStep::Shear { target: a, source: b, coeff, height }
                }
            },
        );
    proptest::collection::vec(step, 0..4)
        .prop_map(move |steps| Substitution::from_steps(field, arity, steps).unwrap())
}

fn arb_equal_height_form(field: Fq, m: u32) -> impl Strategy<Value = DiagonalForm> {
    proptest::collection::vec(arb_nonzero_ratfn(field), 1..4).prop_map(move |coeffs| {
        let entries = coeffs.into_iter().enumerate().map(|(i, c)| (i, c, m)).collect();
        DiagonalForm::new(field, entries).unwrap()
    })
}

fn arb_mixed_form(field: Fq) -> impl Strategy<Value = DiagonalForm> {
    proptest::collection::vec((arb_nonzero_ratfn(field), 1u32..=2), 1..4).prop_map(
        move |entries| {
            let entries = entries.into_iter().enumerate().map(|(i, (c, m))| (i, c, m)).collect();
            DiagonalForm::new(field, entries).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(
        (field, a, b, c) in fields().prop_flat_map(|f| {
            (Just(f), arb_ratfn(f), arb_ratfn(f), arb_ratfn(f))
        }),
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.add(&RatFn::zero(field)), a.clone());
        prop_assert_eq!(a.mul(&RatFn::one(field)), a.clone());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }
}

proptest! {
    #[test]
    fn p_root_undoes_frobenius(
        (m, a) in fields().prop_flat_map(|f| (0u32..=3, arb_ratfn(f))),
    ) {
        let image = a.frobenius(m);
        prop_assert_eq!(image.p_root(m), Some(a));
    }

    #[test]
    fn pm_decompose_reconstructs(
        (field, m, a) in fields().prop_flat_map(|f| (Just(f), 1u32..=2, arb_ratfn(f))),
    ) {
        let parts = a.pm_decompose(m);
        prop_assert_eq!(parts.len() as u64, field.p().pow(m));
        // the decomposition is a = Σ_j u_j s^j with every u_j in k^{p^m}
        let mut acc = RatFn::zero(field);
        let mut s_pow = RatFn::one(field);
        for u in &parts {
            prop_assert!(u.p_root(m).is_some());
            acc = acc.add(&u.mul(&s_pow));
            s_pow = s_pow.mul(&RatFn::s(field));
        }
        prop_assert_eq!(acc, a);
    }

    #[test]
    fn valuation_is_multiplicative(
        (a, b) in fields().prop_flat_map(|f| (arb_laurent(f), arb_laurent(f))),
    ) {
        let prod = a.mul(&b);
        match (a.valuation(), b.valuation()) {
            (Some(va), Some(vb)) => {
                // the leading term is visible whenever the shrunk window
                // reaches past it
                if prod.prec_end() > va + vb {
                    prop_assert_eq!(prod.valuation(), Some(va + vb));
                }
            }
            // a tracked zero forces a tracked-zero product
            _ => prop_assert!(prod.valuation().is_none()),
        }
    }

    #[test]
    fn p_polynomials_are_additive(
        (p, alpha, beta) in (fields(), 1usize..=3).prop_flat_map(|(f, r)| {
            (arb_ppoly(f, r), arb_point(f, r), arb_point(f, r))
        }),
    ) {
        let sum: Vec<RatFn> = alpha.iter().zip(&beta).map(|(x, y)| x.add(y)).collect();
        let lhs = p.evaluate(&sum).unwrap();
        let rhs = p.evaluate(&alpha).unwrap().add(&p.evaluate(&beta).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_coherence(
        (p, sigma, alpha) in (fields(), 1usize..=3).prop_flat_map(|(f, r)| {
            (arb_ppoly(f, r), arb_invertible_substitution(f, r, 2), arb_point(f, r))
        }),
    ) {
        let q = p.substitute(&sigma).unwrap();
        let lhs = q.evaluate(&alpha).unwrap();
        let rhs = p.evaluate(&sigma.apply(&alpha).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn principal_part_heights_are_maximal(
        p in (fields(), 1usize..=3).prop_flat_map(|(f, r)| arb_ppoly(f, r)),
    ) {
        prop_assume!(!p.is_zero());
        let form = p.principal_part().unwrap();
        for (var, coeff, height) in form.entries() {
            prop_assert_eq!(p.max_height(*var), Some(*height));
            prop_assert_eq!(p.coeff(*var, *height), Some(coeff));
        }
        // every occurring variable contributes exactly one entry
        prop_assert_eq!(
            form.entries().iter().map(|(v, _, _)| *v).collect::<Vec<_>>(),
            p.occurring_vars()
        );
    }

    #[test]
    fn separability_survives_height_zero_steps(
        (p, sigma) in (fields(), 1usize..=3).prop_flat_map(|(f, r)| {
            (arb_ppoly(f, r), arb_invertible_substitution(f, r, 0))
        }),
    ) {
        let q = p.substitute(&sigma).unwrap();
        prop_assert_eq!(p.is_separable(), q.is_separable());
    }

    #[test]
    fn isotropy_witnesses_are_sound(
        form in fields().prop_flat_map(|f| {
            (1u32..=2).prop_flat_map(move |m| arb_equal_height_form(f, m))
        }),
    ) {
        if let AnisotropyVerdict::Isotropic(w) = decide_equal_height(&form).unwrap() {
            prop_assert!(w.iter().any(|x| !x.is_zero()));
            prop_assert!(form.evaluate(&w).unwrap().is_zero());
        }
        if let Some(w) = search_isotropy(&form, 1).unwrap() {
            prop_assert!(w.iter().any(|x| !x.is_zero()));
            prop_assert!(form.evaluate(&w).unwrap().is_zero());
        }
    }

    #[test]
    fn valuation_separation_never_contradicts_search(
        form in fields().prop_flat_map(arb_mixed_form),
    ) {
        if valuation_separation(&form).unwrap().is_anisotropic() {
            prop_assert_eq!(search_isotropy(&form, 2).unwrap(), None);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // The image of a p-polynomial on the window is a subgroup: any found
    // preimage shifts by an arbitrary point to a preimage of the shifted
    // target.
    #[test]
    fn image_is_a_subgroup(seed_terms in proptest::collection::vec((-1i64..2, 0u64..2), 1..3)) {
        let f = Fq::prime(2).unwrap();
        // y + x² over F_2(s): every target in the window is hit
        let p = PPolynomial::from_terms(
            f,
            2,
            [(0, 1, RatFn::one(f)), (1, 0, RatFn::one(f))],
        )
        .unwrap();
        let terms: Vec<(i64, RatFn)> = seed_terms
            .iter()
            .map(|&(e, c)| (e, RatFn::from_int(f, c as i64)))
            .collect();
        let target = LaurentSeries::from_terms(f, &terms, 3);
        let alpha = match brute_force_image(&p, &target, -1, 2, 1, 200_000).unwrap() {
            ImageSearch::InImage(alpha) => alpha,
            ImageSearch::NotInWindow => {
                return Err(TestCaseError::fail("linear kernel must cover the window"));
            }
        };
        let beta = vec![
            LaurentSeries::monomial(RatFn::s(f), 1, 3),
            LaurentSeries::monomial(RatFn::one(f), -1, 3),
        ];
        let shifted_target = target.add(&p.evaluate_laurent(&beta).unwrap());
        let shifted: Vec<LaurentSeries> =
            alpha.iter().zip(&beta).map(|(a, b)| a.add(b)).collect();
        let replay = p.evaluate_laurent(&shifted).unwrap();
        prop_assert!(replay.sub(&shifted_target.truncated(replay.prec_end())).is_zero());
    }

    // An excluded class stays excluded after any invertible change of
    // variables: the oracle must keep reporting NotInWindow.
    #[test]
    fn exclusion_is_substitution_invariant(
        steps_seed in proptest::collection::vec((0usize..2, 0usize..2, 0u32..2, any::<bool>()), 0..3),
    ) {
        let f = Fq::prime(2).unwrap();
        // x² + x + s·y², with t⁻¹ certified outside the image
        let p = PPolynomial::from_terms(
            f,
            2,
            [
                (0, 1, RatFn::one(f)),
                (0, 0, RatFn::one(f)),
                (1, 1, RatFn::s(f)),
            ],
        )
        .unwrap();
        let steps: Vec<ElementaryStep> = steps_seed
            .iter()
            .map(|&(a, b, h, scale)| {
                if scale || a == b {
                    ElementaryStep::Scale { var: a, factor: RatFn::s(f) }
                } else {
                    ElementaryStep::Shear { target: a, source: b, coeff: RatFn::s(f), height: h }
                }
            })
            .collect();
        let sigma = Substitution::from_steps(f, 2, steps).unwrap();
        let q = p.substitute(&sigma).unwrap();
        let target = LaurentSeries::monomial(RatFn::one(f), -1, 3);
        let found = brute_force_image(&q, &target, -2, 2, 2, 500_000).unwrap();
        prop_assert_eq!(found, ImageSearch::NotInWindow);
    }
}
