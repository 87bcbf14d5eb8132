//! Dense polynomials in s over F_q.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};

/// An element of F_q[s] with trailing zero coefficients stripped, so the
/// representation is canonical. The zero polynomial has an empty
/// coefficient vector and `degree()` returns `None` rather than a number
/// that could leak into arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyS {
    field: Fq,
    coeffs: Vec<FqElem>,
}

impl PolyS {
    pub fn new(field: Fq, mut coeffs: Vec<FqElem>) -> PolyS {
        while coeffs.last().map_or(false, |c| c.0 == 0) {
            coeffs.pop();
        }
        PolyS { field, coeffs }
    }

    pub fn zero(field: Fq) -> PolyS {
        PolyS { field, coeffs: vec![] }
    }

    pub fn one(field: Fq) -> PolyS {
        PolyS::constant(field, field.one())
    }

    pub fn constant(field: Fq, c: FqElem) -> PolyS {
        PolyS::new(field, vec![c])
    }

    /// The monomial c·s^k.
    pub fn monomial(field: Fq, c: FqElem, k: usize) -> PolyS {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        PolyS::new(field, coeffs)
    }

    pub fn s(field: Fq) -> PolyS {
        PolyS::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs.get(k).copied().unwrap_or(self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(self.field.zero())
    }

    /// Multiplicity of s (the s-adic order); `None` for zero.
    pub fn ord_s(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.0 != 0)
    }

    pub fn add(&self, other: &PolyS) -> PolyS {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        PolyS::new(f, coeffs)
    }

    pub fn neg(&self) -> PolyS {
        let f = self.field;
        PolyS::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &PolyS) -> PolyS {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PolyS) -> PolyS {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return PolyS::zero(f);
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        PolyS::new(f, coeffs)
    }

    pub fn scale(&self, c: FqElem) -> PolyS {
        let f = self.field;
        PolyS::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn pow(&self, mut n: u64) -> PolyS {
        let mut base = self.clone();
        let mut acc = PolyS::one(self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn div_rem(&self, den: &PolyS) -> Result<(PolyS, PolyS)> {
        let f = self.field;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = den.degree().unwrap();
        let lead_inv = f.inv(den.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if lead.0 != 0 {
                let qc = f.mul(lead, lead_inv);
                quo[shift] = qc;
                for (k, &dc) in den.coeffs.iter().enumerate() {
                    rem[shift + k] = f.sub(rem[shift + k], f.mul(qc, dc));
                }
            }
            rem.pop();
        }
        Ok((PolyS::new(f, quo), PolyS::new(f, rem)))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &PolyS) -> PolyS {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn make_monic(&self) -> PolyS {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading_coeff()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == self.field.one()
    }

    /// Coefficient-wise p^m-th power with exponent spread: (Σ aᵢ sⁱ)^{p^m}
    /// = Σ aᵢ^{p^m} s^{i·p^m} in characteristic p.
    pub fn frobenius(&self, m: u32) -> PolyS {
        let f = self.field;
        if self.is_zero() || m == 0 {
            return self.clone();
        }
        let step = f.p().pow(m) as usize;
        let mut coeffs = vec![f.zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = f.frobenius(a, m);
        }
        PolyS::new(f, coeffs)
    }
}

/// Render an F_q element so the grammar parses it back: a plain digit in
/// the prime field, a parenthesized polynomial in `g` otherwise.
fn fmt_fq(f: &mut fmt::Formatter<'_>, field: Fq, c: FqElem) -> fmt::Result {
    if field.e() == 1 || c.0 < field.p() {
        return write!(f, "{}", c.0);
    }
    let p = field.p();
    let mut x = c.0;
    let mut digits = alloc::vec::Vec::new();
    while x > 0 {
        digits.push(x % p);
        x /= p;
    }
    write!(f, "(")?;
    let mut first = true;
    for (k, &d) in digits.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        if !first {
            write!(f, "+")?;
        }
        first = false;
        match (k, d) {
            (0, _) => write!(f, "{d}")?,
            (1, 1) => write!(f, "g")?,
            (1, _) => write!(f, "{d}*g")?,
            (_, 1) => write!(f, "g^{k}")?,
            (_, _) => write!(f, "{d}*g^{k}")?,
        }
    }
    write!(f, ")")
}

impl fmt::Display for PolyS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.0 == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let unit = c == self.field.one();
            match (k, unit) {
                (0, _) => fmt_fq(f, self.field, c)?,
                (1, true) => write!(f, "s")?,
                (_, true) => write!(f, "s^{}", k)?,
                (1, false) => {
                    fmt_fq(f, self.field, c)?;
                    write!(f, "*s")?;
                }
                (_, false) => {
                    fmt_fq(f, self.field, c)?;
                    write!(f, "*s^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fq {
        Fq::prime(2).unwrap()
    }

    fn poly(f: Fq, coeffs: &[i64]) -> PolyS {
        PolyS::new(f, coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    #[test]
    fn zero_degree_is_sentinel() {
        let f = f2();
        assert_eq!(PolyS::zero(f).degree(), None);
        assert_eq!(poly(f, &[1, 1]).degree(), Some(1));
    }

    #[test]
    fn char_two_square_factors() {
        let f = f2();
        // (s+1)^2 = s^2 + 1
        let sp1 = poly(f, &[1, 1]);
        assert_eq!(sp1.mul(&sp1), poly(f, &[1, 0, 1]));
    }

    #[test]
    fn div_rem_roundtrip() {
        let f = f2();
        let a = poly(f, &[1, 0, 1, 1]);
        let b = poly(f, &[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn gcd_of_char_two_square() {
        let f = f2();
        // gcd(s^2+1, s+1) = s+1
        assert_eq!(poly(f, &[1, 0, 1]).gcd(&poly(f, &[1, 1])), poly(f, &[1, 1]));
    }

    #[test]
    fn frobenius_spreads_exponents() {
        let f = f2();
        // (s + 1)^2 = s^2 + 1
        assert_eq!(poly(f, &[1, 1]).frobenius(1), poly(f, &[1, 0, 1]));
    }

    #[test]
    fn ord_s_counts_multiplicity() {
        let f = f2();
        assert_eq!(poly(f, &[0, 0, 1, 1]).ord_s(), Some(2));
        assert_eq!(PolyS::zero(f).ord_s(), None);
    }
}
