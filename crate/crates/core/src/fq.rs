//! The finite ground field F_q, q = p^e.
//!
//! Elements are stored as a single `u64` encoding the base-p digit vector
//! of the residue polynomial (low digit first), so an element is exactly
//! an integer in `0..q` and the encoding is canonical. For `e > 1` the
//! arithmetic is modulo a user-supplied irreducible monic modulus over
//! F_p; no canonical-modulus table is bundled.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// An element of F_q in canonical encoded form (an integer `< q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u64);

/// Field context for F_q = F_p[g]/(modulus).
///
/// `Copy` on purpose: the context is embedded in every polynomial and
/// rational function so values stay self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    p: u64,
    e: u32,
    /// Base-p encoding of the monic modulus (degree e); 0 when e = 1.
    modulus: u64,
}

/// Desk-scale bound keeping q^2-sized intermediates comfortably in u64.
const MAX_Q: u64 = 1 << 20;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::Invalid("p must be prime"));
        }
        if p > MAX_Q {
            return Err(Error::Invalid("p too large"));
        }
        Ok(Fq { p, e: 1, modulus: 0 })
    }

    /// F_{p^e} given the monic irreducible modulus over F_p, digits low
    /// to high (length e + 1, leading digit 1).
    pub fn extension(p: u64, modulus_digits: &[u64]) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::Invalid("p must be prime"));
        }
        if modulus_digits.len() < 3 {
            return Err(Error::Invalid("modulus must have degree at least 2"));
        }
        let e = (modulus_digits.len() - 1) as u32;
        if *modulus_digits.last().unwrap() % p != 1 {
            return Err(Error::Invalid("modulus must be monic"));
        }
        if modulus_digits.iter().any(|&d| d >= p) {
            return Err(Error::Invalid("modulus digits must be reduced mod p"));
        }
        let q = p.checked_pow(e).filter(|&q| q <= MAX_Q).ok_or(Error::Invalid("q too large"))?;
        let _ = q;
        let mut modulus = 0u64;
        for &d in modulus_digits.iter().rev() {
            modulus = modulus * p + d;
        }
        let fq = Fq { p, e, modulus };
        if !fq.modulus_is_irreducible() {
            return Err(Error::Invalid("modulus is reducible over F_p"));
        }
        Ok(fq)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn modulus_digits(&self) -> Vec<u64> {
        if self.e == 1 {
            return vec![];
        }
        let mut digits = self.decode(self.modulus, (self.e + 1) as usize);
        digits.truncate((self.e + 1) as usize);
        digits
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// Embed an integer via the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        FqElem(r)
    }

    /// The element with canonical index `idx` (`idx < q`).
    pub fn element(&self, idx: u64) -> FqElem {
        debug_assert!(idx < self.q());
        FqElem(idx)
    }

    fn decode(&self, mut x: u64, len: usize) -> Vec<u64> {
        let mut digits = vec![0u64; len];
        for d in digits.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
        debug_assert_eq!(x, 0);
        digits
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut x = 0u64;
        for &d in digits.iter().rev() {
            x = x * self.p + (d % self.p);
        }
        x
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem((a.0 + b.0) % self.p);
        }
        let da = self.decode(a.0, self.e as usize);
        let db = self.decode(b.0, self.e as usize);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        FqElem(self.encode(&sum))
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem((self.p - a.0) % self.p);
        }
        let da = self.decode(a.0, self.e as usize);
        let neg: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        FqElem(self.encode(&neg))
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem((a.0 * b.0) % self.p);
        }
        let e = self.e as usize;
        let da = self.decode(a.0, e);
        let db = self.decode(b.0, e);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.reduce_mod_modulus(&mut prod);
        FqElem(self.encode(&prod[..e]))
    }

    /// Reduce a digit vector in place modulo the (monic) modulus.
    fn reduce_mod_modulus(&self, digits: &mut [u64]) {
        let e = self.e as usize;
        let m = self.decode(self.modulus, e + 1);
        for i in (e..digits.len()).rev() {
            let lead = digits[i];
            if lead == 0 {
                continue;
            }
            digits[i] = 0;
            for (k, &md) in m.iter().enumerate().take(e) {
                let idx = i - e + k;
                digits[idx] = (digits[idx] + (self.p - md % self.p) * lead) % self.p;
            }
        }
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    /// The Frobenius x ↦ x^{p^m}.
    pub fn frobenius(&self, a: FqElem, m: u32) -> FqElem {
        let mut r = a;
        for _ in 0..m {
            r = self.pow(r, self.p);
        }
        r
    }

    /// The inverse of Frobenius; always defined since F_q is perfect.
    pub fn p_root(&self, a: FqElem, m: u32) -> FqElem {
        // Frobenius has order e on F_q, so the inverse of x ↦ x^p is
        // x ↦ x^{p^{e-1}}.
        let mut r = a;
        for _ in 0..m {
            r = self.frobenius(r, self.e - 1);
        }
        r
    }

    fn modulus_is_irreducible(&self) -> bool {
        // Brute force: no monic divisor of degree 1..=e/2. Degrees are
        // tiny by the MAX_Q cap.
        let e = self.e as usize;
        let m = self.decode(self.modulus, e + 1);
        for d in 1..=e / 2 {
            let count = self.p.pow(d as u32);
            for idx in 0..count {
                let mut div = self.decode(idx, d);
                div.push(1); // monic of degree d
                if poly_rem_is_zero(&m, &div, self.p) {
                    return false;
                }
            }
        }
        true
    }
}

/// Remainder test for F_p[x] digit vectors (dense, low-first).
fn poly_rem_is_zero(num: &[u64], den: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd] % p, 1);
    while r.len() > dd {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (k, &cd) in den.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - cd % p) * lead) % p;
            }
        }
        r.pop();
        while r.len() > dd && *r.last().unwrap() % p == 0 {
            if r.len() == dd + 1 {
                break;
            }
            r.pop();
        }
    }
    r.iter().all(|&c| c % p == 0)
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Fq::prime(5).unwrap();
        let a = f.from_int(3);
        let b = f.from_int(4);
        assert_eq!(f.add(a, b), f.from_int(2));
        assert_eq!(f.mul(a, b), f.from_int(2));
        assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        assert_eq!(f.neg(a), f.from_int(2));
    }

    #[test]
    fn rejects_composite_p() {
        assert!(Fq::prime(6).is_err());
        assert!(Fq::prime(1).is_err());
    }

    #[test]
    fn f4_via_modulus() {
        // F_4 = F_2[g]/(g^2 + g + 1)
        let f = Fq::extension(2, &[1, 1, 1]).unwrap();
        assert_eq!(f.q(), 4);
        let g = f.element(2);
        // g^2 = g + 1
        assert_eq!(f.mul(g, g), f.element(3));
        // g^3 = 1
        assert_eq!(f.pow(g, 3), f.one());
        for idx in 1..4 {
            let a = f.element(idx);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // g^2 + 1 = (g+1)^2 over F_2
        assert!(Fq::extension(2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn frobenius_and_root_are_inverse() {
        let f = Fq::extension(3, &[1, 0, 1]).unwrap(); // g^2 + 1 irreducible over F_3
        for idx in 0..f.q() {
            let a = f.element(idx);
            assert_eq!(f.p_root(f.frobenius(a, 2), 2), a);
            assert_eq!(f.frobenius(f.p_root(a, 1), 1), a);
        }
    }
}
