//! Truncated formal Laurent series over k = F_q(s): elements of
//! L = k((t)) known exactly on (-∞, prec_end).
//!
//! A series is stored as its valuation `val`, the coefficient vector for
//! exponents `val, val+1, …, prec_end-1`, and the exclusive precision
//! cutoff `prec_end`. Coefficients below `val` are known zero; nothing is
//! known at or above `prec_end`. Arithmetic shrinks windows
//! pessimistically and never widens one.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::grammar::LaurentPoly;
use crate::ratfn::RatFn;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Fq,
    /// Valuation when nonzero; equal to `prec_end` for the tracked zero.
    val: i64,
    /// coeffs[k] is the coefficient of t^{val + k}; coeffs[0] != 0
    /// unless the vector is empty (the tracked zero).
    coeffs: Vec<RatFn>,
    prec_end: i64,
}

impl LaurentSeries {
    fn normalized(field: Fq, mut anchor: i64, mut coeffs: Vec<RatFn>, prec_end: i64) -> LaurentSeries {
        coeffs.truncate((prec_end - anchor).max(0) as usize);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => LaurentSeries { field, val: prec_end, coeffs: vec![], prec_end },
            Some(k) => {
                coeffs.drain(..k);
                anchor += k as i64;
                coeffs.resize((prec_end - anchor) as usize, RatFn::zero(field));
                LaurentSeries { field, val: anchor, coeffs, prec_end }
            }
        }
    }

    /// The tracked zero with an explicit window.
    pub fn zero(field: Fq, prec_end: i64) -> LaurentSeries {
        LaurentSeries { field, val: prec_end, coeffs: vec![], prec_end }
    }

    pub fn from_terms(field: Fq, terms: &[(i64, RatFn)], prec_end: i64) -> LaurentSeries {
        if terms.is_empty() {
            return LaurentSeries::zero(field, prec_end);
        }
        let anchor = terms.iter().map(|&(e, _)| e).min().unwrap();
        let len = (prec_end - anchor).max(0) as usize;
        let mut coeffs = vec![RatFn::zero(field); len];
        for (e, c) in terms {
            if *e < prec_end {
                let k = (e - anchor) as usize;
                coeffs[k] = coeffs[k].add(c);
            }
        }
        LaurentSeries::normalized(field, anchor, coeffs, prec_end)
    }

    /// An exact Laurent polynomial, truncated at `prec_end`.
    pub fn from_poly(poly: &LaurentPoly, prec_end: i64) -> LaurentSeries {
        let terms: Vec<(i64, RatFn)> = poly.terms().map(|(e, c)| (e, c.clone())).collect();
        LaurentSeries::from_terms(poly.field(), &terms, prec_end)
    }

    /// The constant c ∈ k viewed in L.
    pub fn constant(c: RatFn, prec_end: i64) -> LaurentSeries {
        let field = c.field();
        LaurentSeries::from_terms(field, &[(0, c)], prec_end)
    }

    pub fn monomial(c: RatFn, exp: i64, prec_end: i64) -> LaurentSeries {
        let field = c.field();
        LaurentSeries::from_terms(field, &[(exp, c)], prec_end)
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    /// t-adic valuation; undefined (None) only for the tracked zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn prec_end(&self) -> i64 {
        self.prec_end
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of t^j; an error if j is at or beyond the window end.
    pub fn coeff_at(&self, j: i64) -> Result<RatFn> {
        if j >= self.prec_end {
            return Err(Error::PrecisionExceeded);
        }
        if j < self.val {
            return Ok(RatFn::zero(self.field));
        }
        Ok(self.coeffs[(j - self.val) as usize].clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatFn)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (self.val + k as i64, c))
    }

    pub fn truncated(&self, prec_end: i64) -> LaurentSeries {
        let prec_end = prec_end.min(self.prec_end);
        LaurentSeries::normalized(self.field, self.val, self.coeffs.clone(), prec_end)
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let prec = self.prec_end.min(other.prec_end);
        let anchor = self.val.min(other.val).min(prec);
        let len = (prec - anchor) as usize;
        let mut coeffs = vec![RatFn::zero(self.field); len];
        for (src, base) in [(self, anchor), (other, anchor)] {
            for (k, c) in src.coeffs.iter().enumerate() {
                let e = src.val + k as i64;
                if e < prec {
                    let idx = (e - base) as usize;
                    coeffs[idx] = coeffs[idx].add(c);
                }
            }
        }
        LaurentSeries::normalized(self.field, anchor, coeffs, prec)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries {
            field: self.field,
            val: self.val,
            coeffs: self.coeffs.iter().map(RatFn::neg).collect(),
            prec_end: self.prec_end,
        }
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        // val acts as the effective valuation bound for the tracked zero
        // too (val == prec_end there), so the window formula is uniform:
        // the product is known on (-∞, min(v_a + p_b, v_b + p_a)).
        let prec = (self.val + other.prec_end).min(other.val + self.prec_end);
        if self.is_zero() || other.is_zero() {
            return LaurentSeries::zero(self.field, prec);
        }
        let v = self.val + other.val;
        let len = (prec - v) as usize;
        let mut coeffs = vec![RatFn::zero(self.field); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len && !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        LaurentSeries::normalized(self.field, v, coeffs, prec)
    }

    /// Multiply by a scalar from k (exact, window preserved).
    pub fn scale(&self, c: &RatFn) -> LaurentSeries {
        if c.is_zero() {
            return LaurentSeries::zero(self.field, self.prec_end);
        }
        LaurentSeries {
            field: self.field,
            val: self.val,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            prec_end: self.prec_end,
        }
    }

    /// Multiplicative inverse, to the same relative precision.
    pub fn inv(&self) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let len = self.coeffs.len();
        let c0_inv = self.coeffs[0].inv()?;
        let mut inv = Vec::with_capacity(len);
        inv.push(c0_inv.clone());
        for n in 1..len {
            let mut acc = RatFn::zero(self.field);
            for k in 1..=n {
                acc = acc.add(&self.coeffs[k].mul(&inv[n - k]));
            }
            inv.push(acc.neg().mul(&c0_inv));
        }
        Ok(LaurentSeries::normalized(self.field, -self.val, inv, -self.val + len as i64))
    }

    /// a ↦ a^{p^m}; in characteristic p this is termwise, and the window
    /// scales by p^m.
    pub fn frobenius(&self, m: u32) -> LaurentSeries {
        if m == 0 {
            return self.clone();
        }
        let step = self.field.p().pow(m) as i64;
        let prec = self.prec_end.saturating_mul(step);
        if self.is_zero() {
            return LaurentSeries::zero(self.field, prec);
        }
        let v = self.val * step;
        let len = ((self.coeffs.len() - 1) as i64 * step + 1) as usize;
        let mut coeffs = vec![RatFn::zero(self.field); len.max((prec - v) as usize)];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step as usize] = c.frobenius(m);
        }
        LaurentSeries::normalized(self.field, v, coeffs, prec)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.prec_end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_laurent_poly;

    fn f2() -> Fq {
        Fq::prime(2).unwrap()
    }

    fn series(text: &str, prec: i64) -> LaurentSeries {
        LaurentSeries::from_poly(&parse_laurent_poly(f2(), text).unwrap(), prec)
    }

    #[test]
    fn valuation_of_mixed_series() {
        assert_eq!(series("t^-1 + 1 + t", 16).valuation(), Some(-1));
    }

    #[test]
    fn monomial_product_valuation() {
        let prod = series("t^-1", 16).mul(&series("t^2", 16));
        assert_eq!(prod.valuation(), Some(1));
        assert_eq!(prod, series("t", 15).truncated(prod.prec_end()));
    }

    #[test]
    fn char_two_square_coefficient() {
        // (t^-1 + s)^2 = t^-2 + s^2
        let a = series("t^-1 + s", 16);
        let sq = a.mul(&a);
        assert!(sq.coeff_at(-2).unwrap().is_one());
        assert!(sq.coeff_at(-1).unwrap().is_zero());
        assert_eq!(sq.coeff_at(0).unwrap(), crate::grammar::parse_ratfn(f2(), "s^2").unwrap());
    }

    #[test]
    fn coeff_beyond_window_errors() {
        let a = series("t", 8);
        assert_eq!(a.coeff_at(8), Err(Error::PrecisionExceeded));
        assert!(a.coeff_at(7).is_ok());
        assert!(a.coeff_at(-5).unwrap().is_zero());
    }

    #[test]
    fn addition_valuation_rules() {
        let a = series("t^-1 + t", 16);
        let b = series("t^-1", 16);
        // equal valuations may cancel
        assert_eq!(a.add(&b).valuation(), Some(1));
        // distinct valuations take the min
        let c = series("t^2", 16);
        assert_eq!(a.add(&c).valuation(), Some(-1));
    }

    #[test]
    fn windows_shrink_on_multiplication() {
        let a = series("t^-2 + 1", 10); // val -2, prec 10
        let b = series("t^3", 5); // val 3, prec 5
        let prod = a.mul(&b);
        // known on (-inf, min(-2 + 5, 3 + 10)) = (-inf, 3)
        assert_eq!(prod.prec_end(), 3);
        assert_eq!(prod.valuation(), Some(1));
    }

    #[test]
    fn inverse_is_an_inverse() {
        let a = series("t^-1 + 1 + s*t^3", 12);
        let inv = a.inv().unwrap();
        let prod = a.mul(&inv);
        assert_eq!(prod.coeff_at(0).unwrap(), RatFn::one(f2()));
        let diff = prod.sub(&LaurentSeries::constant(RatFn::one(f2()), prod.prec_end()));
        assert!(diff.is_zero());
    }

    #[test]
    fn inversion_of_tracked_zero_fails() {
        assert_eq!(LaurentSeries::zero(f2(), 4).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_squares_termwise() {
        let a = series("t^-1 + s", 8);
        let sq = a.frobenius(1);
        assert_eq!(sq.valuation(), Some(-2));
        let direct = a.mul(&a);
        let prec = sq.prec_end().min(direct.prec_end());
        assert_eq!(sq.truncated(prec), direct.truncated(prec));
    }
}
