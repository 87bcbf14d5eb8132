//! Finite p-groups given by multiplication tables: Frattini subgroup,
//! elementary abelian quotient, and the reduction of non-specialness to
//! the Artin-Schreier kernel x^p - x.

use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{exclude_target, ExclusionCertificate};
use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::laurent::LaurentSeries;
use crate::ppoly::PPolynomial;
use crate::ratfn::RatFn;

pub const MAX_ORDER: usize = 64;

/// A finite group of order ≤ 64 as an explicit multiplication table
/// (row = left factor). Group axioms are verified exhaustively at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// An element subset closed under the table, as a bitmask over indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup(pub u64);

impl Subgroup {
    pub fn contains(&self, g: usize) -> bool {
        self.0 >> g & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..64).filter(|&g| self.contains(g)).collect()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.0 & !other.0 == 0
    }
}

impl FiniteGroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<FiniteGroupTable> {
        let order = table.len();
        if order == 0 || order > MAX_ORDER {
            return Err(Error::NotAGroup("order must be between 1 and 64"));
        }
        for row in &table {
            if row.len() != order || row.iter().any(|&x| x >= order) {
                return Err(Error::NotAGroup("table is not square over valid indices"));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(Error::NotAGroup("no identity element"))?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup("associativity fails"));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(Error::NotAGroup("missing inverse"))?;
            inverse[g] = inv;
        }
        Ok(FiniteGroupTable { order, table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, g: usize, n: usize) -> usize {
        let mut acc = self.identity;
        for _ in 0..n {
            acc = self.mul(acc, g);
        }
        acc
    }

    /// The unique prime p with |G| = p^k, if one exists.
    pub fn p_group_prime(&self) -> Option<usize> {
        if self.order == 1 {
            return None;
        }
        let p = (2..=self.order).find(|d| self.order % d == 0).unwrap();
        let mut n = self.order;
        while n % p == 0 {
            n /= p;
        }
        (n == 1).then_some(p)
    }

    /// Subgroup generated by a seed set.
    pub fn closure(&self, seed: u64) -> Subgroup {
        let mut members = seed | 1u64 << self.identity;
        loop {
            let mut grew = false;
            let elems: Vec<usize> = (0..self.order).filter(|&g| members >> g & 1 == 1).collect();
            for &a in &elems {
                for &b in &elems {
                    let c = self.mul(a, b);
                    if members >> c & 1 == 0 {
                        members |= 1u64 << c;
                        grew = true;
                    }
                }
                let i = self.inv(a);
                if members >> i & 1 == 0 {
                    members |= 1u64 << i;
                    grew = true;
                }
            }
            if !grew {
                return Subgroup(members);
            }
        }
    }

    /// Every subgroup, by closing the set of cyclic subgroups under
    /// pairwise joins until stable.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut set: Vec<u64> = vec![1u64 << self.identity];
        let cyclic: Vec<u64> = (0..self.order).map(|g| self.closure(1u64 << g).0).collect();
        for &c in &cyclic {
            if !set.contains(&c) {
                set.push(c);
            }
        }
        loop {
            let mut grew = false;
            let snapshot = set.clone();
            for &h in &snapshot {
                for &c in &cyclic {
                    if h & c == c {
                        continue;
                    }
                    let join = self.closure(h | c).0;
                    if !set.contains(&join) {
                        set.push(join);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        set.sort_unstable();
        set.into_iter().map(Subgroup).collect()
    }

    /// Proper subgroups maximal under inclusion.
    pub fn maximal_subgroups(&self) -> Vec<Subgroup> {
        let full = u64::MAX >> (64 - self.order);
        let all = self.all_subgroups();
        all.iter()
            .copied()
            .filter(|h| h.0 != full)
            .filter(|h| {
                !all.iter().any(|k| k.0 != full && k.0 != h.0 && h.is_subset_of(k))
            })
            .collect()
    }

    /// Subgroup generated by all commutators and p-th powers.
    pub fn commutator_pth_power_subgroup(&self, p: usize) -> Subgroup {
        let mut seed = 1u64 << self.identity;
        for a in 0..self.order {
            for b in 0..self.order {
                let comm = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                seed |= 1u64 << comm;
            }
            seed |= 1u64 << self.pow(a, p);
        }
        self.closure(seed)
    }

    /// Relabel elements by a permutation (for invariance tests).
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteGroupTable> {
        if perm.len() != self.order {
            return Err(Error::Invalid("permutation length mismatch"));
        }
        let mut table = vec![vec![0usize; self.order]; self.order];
        for a in 0..self.order {
            for b in 0..self.order {
                table[perm[a]][perm[b]] = perm[self.table[a][b]];
            }
        }
        FiniteGroupTable::new(table)
    }
}

/// Φ(G) = intersection of the maximal subgroups; for p-groups this is
/// also the subgroup generated by commutators and p-th powers, and both
/// computations are run and compared.
pub fn frattini_subgroup(group: &FiniteGroupTable) -> Result<Subgroup> {
    if group.order() == 1 {
        return Ok(Subgroup(1u64 << group.identity()));
    }
    let p = group.p_group_prime().ok_or(Error::NotPGroup)?;
    let maximals = group.maximal_subgroups();
    let full = (0..group.order()).fold(0u64, |m, g| m | 1u64 << g);
    let from_maximals = Subgroup(maximals.iter().fold(full, |acc, h| acc & h.0));
    let from_generators = group.commutator_pth_power_subgroup(p);
    if from_maximals != from_generators {
        return Err(Error::Invalid("frattini cross-check disagreement"));
    }
    Ok(from_maximals)
}

/// The rank s of the elementary abelian quotient G/Φ(G) ≅ (Z/p)^s.
/// Commutativity and exponent p of the quotient are verified, not
/// assumed.
pub fn elementary_quotient(group: &FiniteGroupTable) -> Result<u32> {
    if group.order() == 1 {
        return Err(Error::TrivialGroup);
    }
    let p = group.p_group_prime().ok_or(Error::NotPGroup)?;
    let phi = frattini_subgroup(group)?;
    // cosets of Φ
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps: Vec<usize> = Vec::new();
    for g in 0..group.order() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        for &h in &phi.elements() {
            coset_of[group.mul(g, h)] = idx;
        }
        reps.push(g);
    }
    let m = reps.len();
    // well-definedness plus the elementary abelian checks
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            let ab = coset_of[group.mul(a, b)];
            let ba = coset_of[group.mul(b, a)];
            if ab != ba {
                return Err(Error::Invalid("quotient by frattini subgroup is not commutative"));
            }
            for g in 0..group.order() {
                if coset_of[g] == i {
                    for h in 0..group.order() {
                        if coset_of[h] == j && coset_of[group.mul(g, h)] != ab {
                            return Err(Error::Invalid("frattini subgroup is not normal"));
                        }
                    }
                }
            }
        }
        if coset_of[group.pow(a, p)] != coset_of[group.identity()] {
            return Err(Error::Invalid("quotient has an element of order above p"));
        }
    }
    let mut s = 0u32;
    let mut n = m;
    while n > 1 {
        if n % p != 0 {
            return Err(Error::NotPGroup);
        }
        n /= p;
        s += 1;
    }
    Ok(s)
}

/// Realize (Z/p)^s as the kernel of the Artin-Schreier block x^p - x and
/// certify non-specialness by excluding t^{-1} in the first coordinate;
/// the remaining coordinates reduce by the product decomposition.
pub fn etale_not_special(rank: u32, field: Fq, precision: i64) -> Result<ExclusionCertificate> {
    if rank == 0 {
        return Err(Error::TrivialGroup);
    }
    let p = artin_schreier_kernel(field)?;
    let target = LaurentSeries::monomial(RatFn::one(field), -1, precision);
    exclude_target(&p, &target)
}

/// x^p - x over F_q(s).
pub fn artin_schreier_kernel(field: Fq) -> Result<PPolynomial> {
    PPolynomial::from_terms(
        field,
        1,
        [(0, 1, RatFn::one(field)), (0, 0, RatFn::from_int(field, -1))],
    )
}

/// Table builders for the bundled p-group corpus.
pub mod tables {
    use super::*;

    /// Z/n.
    pub fn cyclic(n: usize) -> FiniteGroupTable {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroupTable::new(table).expect("cyclic tables are groups")
    }

    /// A × B with index a·|B| + b.
    pub fn direct_product(a: &FiniteGroupTable, b: &FiniteGroupTable) -> FiniteGroupTable {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        FiniteGroupTable::new(table).expect("products of groups are groups")
    }

    /// (Z/p)^k.
    pub fn elementary_abelian(p: usize, k: u32) -> FiniteGroupTable {
        let mut g = cyclic(p);
        for _ in 1..k {
            g = direct_product(&g, &cyclic(p));
        }
        g
    }

    /// The dihedral group of order 2n; index = rotation + n·reflection.
    pub fn dihedral(n: usize) -> FiniteGroupTable {
        let order = 2 * n;
        let table = (0..order)
            .map(|x| {
                let (r1, f1) = (x % n, x / n);
                (0..order)
                    .map(|y| {
                        let (r2, f2) = (y % n, y / n);
                        // (r1, f1)·(r2, f2) = (r1 + (-1)^{f1} r2, f1 + f2)
                        let r = if f1 == 0 { (r1 + r2) % n } else { (r1 + n - r2) % n };
                        r + n * ((f1 + f2) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroupTable::new(table).expect("dihedral tables are groups")
    }

    /// The quaternion group Q8: {±1, ±i, ±j, ±k} with
    /// index = unit·2 + sign (units 1, i, j, k).
    pub fn quaternion8() -> FiniteGroupTable {
        // multiplication of units with sign: i·j = k, j·i = -k, etc.
        const UNIT: [[usize; 4]; 4] = [
            [0, 1, 2, 3],
            [1, 0, 3, 2],
            [2, 3, 0, 1],
            [3, 2, 1, 0],
        ];
        const SIGN: [[usize; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 1, 0, 1],
            [0, 1, 1, 0],
            [0, 0, 1, 1],
        ];
        let table = (0..8usize)
            .map(|x| {
                let (u1, s1) = (x / 2, x % 2);
                (0..8usize)
                    .map(|y| {
                        let (u2, s2) = (y / 2, y % 2);
                        let u = UNIT[u1][u2];
                        let s = (s1 + s2 + SIGN[u1][u2]) % 2;
                        u * 2 + s
                    })
                    .collect()
            })
            .collect();
        FiniteGroupTable::new(table).expect("quaternion table is a group")
    }
}
