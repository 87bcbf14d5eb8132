//! The imperfect base field k = F_q(s).
//!
//! Elements are kept in canonical form (gcd-reduced, monic denominator)
//! so equality of values is equality of representations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::poly::PolyS;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: PolyS,
    den: PolyS,
}

impl RatFn {
    pub fn new(num: PolyS, den: PolyS) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        let field = num.field();
        if num.is_zero() {
            return Ok(RatFn { num, den: PolyS::one(field) });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead_inv = field.inv(den.leading_coeff())?;
        Ok(RatFn { num: num.scale(lead_inv), den: den.make_monic() })
    }

    pub fn from_poly(p: PolyS) -> RatFn {
        let field = p.field();
        RatFn { num: p, den: PolyS::one(field) }
    }

    pub fn zero(field: Fq) -> RatFn {
        RatFn::from_poly(PolyS::zero(field))
    }

    pub fn one(field: Fq) -> RatFn {
        RatFn::from_poly(PolyS::one(field))
    }

    pub fn s(field: Fq) -> RatFn {
        RatFn::from_poly(PolyS::s(field))
    }

    pub fn from_int(field: Fq, n: i64) -> RatFn {
        RatFn::from_poly(PolyS::constant(field, field.from_int(n)))
    }

    pub fn field(&self) -> Fq {
        self.num.field()
    }

    pub fn num(&self) -> &PolyS {
        &self.num
    }

    pub fn den(&self) -> &PolyS {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == PolyS::one(self.field()) && self.den == PolyS::one(self.field())
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFn::new(num, self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<RatFn> {
        RatFn::one(self.field()).div(self)
    }

    pub fn scale_fq(&self, c: FqElem) -> RatFn {
        RatFn::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// s-adic order: multiplicity of s in the numerator minus the
    /// denominator. `None` for zero.
    pub fn ord_s(&self) -> Option<i64> {
        let n = self.num.ord_s()? as i64;
        let d = self.den.ord_s().expect("nonzero denominator") as i64;
        Some(n - d)
    }

    /// a ↦ a^{p^m}.
    pub fn frobenius(&self, m: u32) -> RatFn {
        RatFn {
            num: self.num.frobenius(m),
            den: self.den.frobenius(m),
        }
    }

    /// p^m-th root, defined iff the value lies in k^{p^m}.
    pub fn p_root(&self, m: u32) -> Option<RatFn> {
        let mut a = self.clone();
        for _ in 0..m {
            a = a.single_p_root()?;
        }
        Some(a)
    }

    fn single_p_root(&self) -> Option<RatFn> {
        let field = self.field();
        let p = field.p();
        if self.is_zero() {
            return Some(self.clone());
        }
        // a = f/g = f·g^{p-1} / g^p, and g^p always has root g.
        let h = self.num.mul(&self.den.pow(p - 1));
        let mut root = vec![field.zero(); h.degree().unwrap() / p as usize + 1];
        for (i, &c) in h.coeffs().iter().enumerate() {
            if c.0 == 0 {
                continue;
            }
            if i % p as usize != 0 {
                return None;
            }
            root[i / p as usize] = field.p_root(c, 1);
        }
        let candidate =
            RatFn::new(PolyS::new(field, root), self.den.clone()).expect("nonzero denominator");
        if candidate.frobenius(1) == *self {
            Some(candidate)
        } else {
            None
        }
    }

    /// Decompose c = Σ_j u_j s^j over the basis {1, s, …, s^{p^m - 1}} of
    /// k over k^{p^m}; each returned u_j lies in k^{p^m}.
    pub fn pm_decompose(&self, m: u32) -> Vec<RatFn> {
        let field = self.field();
        let q = field.p().pow(m);
        let qm = q as usize;
        // c = f·g^{q-1} / g^q; split the numerator by exponent residue.
        let g_qm1 = self.den.pow(q - 1);
        let h = self.num.mul(&g_qm1);
        let mut buckets: Vec<Vec<FqElem>> = vec![vec![]; qm];
        for (i, &c) in h.coeffs().iter().enumerate() {
            let (j, k) = (i % qm, i / qm);
            let bucket = &mut buckets[j];
            while bucket.len() <= k {
                bucket.push(field.zero());
            }
            // The ground field is perfect, so the coefficient root exists.
            bucket[k] = field.p_root(c, m);
        }
        buckets
            .into_iter()
            .map(|digits| {
                let root = RatFn::new(PolyS::new(field, digits), self.den.clone())
                    .expect("nonzero denominator");
                root.frobenius(m)
            })
            .collect()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == PolyS::one(self.field()) {
            if self.num.degree().map_or(true, |d| d == 0) || self.num.coeffs().iter().filter(|c| c.0 != 0).count() == 1 {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_ratfn;

    fn f2() -> Fq {
        Fq::prime(2).unwrap()
    }

    fn r(text: &str) -> RatFn {
        parse_ratfn(f2(), text).unwrap()
    }

    #[test]
    fn add_cancels_to_one() {
        // s/(s+1) + 1/(s+1) = 1 over F_2
        assert!(r("s/(s+1)").add(&r("1/(s+1)")).is_one());
    }

    #[test]
    fn mul_by_inverse() {
        assert!(r("1/s").mul(&r("s")).is_one());
    }

    #[test]
    fn char_two_reduction() {
        // (s^2+1)/(s+1) = s+1 since (s+1)^2 = s^2+1; verified by
        // multiplying back.
        let v = r("(s^2+1)/(s+1)");
        assert_eq!(v, r("s+1"));
        assert_eq!(v.mul(&r("s+1")), r("s^2+1"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(r("s").div(&RatFn::zero(f2())), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(r("s").frobenius(1), r("s^2"));
        assert_eq!(r("s^2").p_root(1), Some(r("s")));
        assert_eq!(r("s").p_root(1), None);
    }

    #[test]
    fn p_root_undoes_frobenius() {
        for text in ["s", "s/(s+1)", "(s^3+s)/(s^2+s+1)"] {
            for m in 0..=3 {
                let a = r(text);
                assert_eq!(a.frobenius(m).p_root(m), Some(a));
            }
        }
    }

    #[test]
    fn pm_decompose_spec_example() {
        // s^3/(s^2+1) = 0·1 + (s^2/(s^2+1))·s over k^2
        let u = r("s^3/(s^2+1)").pm_decompose(1);
        assert_eq!(u.len(), 2);
        assert!(u[0].is_zero());
        assert_eq!(u[1], r("s^2/(s^2+1)"));
        assert!(u[1].p_root(1).is_some());
    }

    #[test]
    fn pm_decompose_trivial_examples() {
        let one = RatFn::one(f2());
        let u = one.pm_decompose(2);
        assert!(u[0].is_one());
        assert!(u[1..].iter().all(RatFn::is_zero));

        let u = r("s").pm_decompose(1);
        assert!(u[0].is_zero());
        assert!(u[1].is_one());
    }

    #[test]
    fn pm_decompose_reconstructs() {
        for text in ["s^3/(s^2+1)", "(s^5+s+1)/(s^3+s)", "1/(s+1)"] {
            let c = r(text);
            for m in 1..=2u32 {
                let u = c.pm_decompose(m);
                let mut acc = RatFn::zero(f2());
                let mut s_pow = RatFn::one(f2());
                for uj in &u {
                    assert!(uj.p_root(m).is_some(), "u_j not in k^(p^m)");
                    acc = acc.add(&uj.mul(&s_pow));
                    s_pow = s_pow.mul(&r("s"));
                }
                assert_eq!(acc, c);
            }
        }
    }

    #[test]
    fn ord_s_values() {
        assert_eq!(r("s^2/(s+1)").ord_s(), Some(2));
        assert_eq!(r("1/s").ord_s(), Some(-1));
        assert_eq!(RatFn::zero(f2()).ord_s(), None);
    }
}
