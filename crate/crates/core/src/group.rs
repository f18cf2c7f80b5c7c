//! Finite groups stored as Cayley tables.
//!
//! Element `0` is always the identity. Constructors fix a canonical element
//! order: cyclic groups list `a^0, a^1, ..., a^{n-1}`, symmetric groups list
//! permutations in lexicographic one-line notation, and direct products list
//! pairs lexicographically.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};

/// Groups whose associativity is checked exhaustively on construction.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 24;

/// How a group was built. Kept for serialisation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Product(Vec<GroupSpec>),
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    spec: GroupSpec,
}

impl FiniteGroup {
    /// Cyclic group of order `n`; element `i` is `a^i`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            bail!(InvalidDescriptor, "cyclic group needs order >= 1");
        }
        let table = (0..n * n).map(|ij| (ij / n + ij % n) % n).collect();
        Self::build(n, table, GroupSpec::Cyclic(n))
    }

    /// Symmetric group on `n <= 4` points.
    ///
    /// The product is composition with the right factor applied first:
    /// `(s t)(i) = s(t(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            bail!(InvalidDescriptor, "symmetric group supported for 1 <= n <= 4, got {n}");
        }
        let perms = permutations(n);
        let order = perms.len();
        let mut table = vec![0; order * order];
        for (i, s) in perms.iter().enumerate() {
            for (j, t) in perms.iter().enumerate() {
                let st: Vec<usize> = t.iter().map(|&x| s[x]).collect();
                table[i * order + j] = perms.binary_search(&st).expect("closed under composition");
            }
        }
        Self::build(order, table, GroupSpec::Symmetric(n))
    }

    /// Direct product `G x H`; the pair `(g, h)` has index `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (a, b) = (g.order, h.order);
        let order = a * b;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let first = g.mul(x / b, y / b);
                let second = h.mul(x % b, y % b);
                table[x * order + y] = first * b + second;
            }
        }
        let spec = match (&g.spec, &h.spec) {
            (GroupSpec::Product(fs), other) => {
                let mut fs = fs.clone();
                fs.push(other.clone());
                GroupSpec::Product(fs)
            }
            (l, r) => GroupSpec::Product(vec![l.clone(), r.clone()]),
        };
        Self::build(order, table, spec)
    }

    /// Left fold of [`FiniteGroup::direct_product`] over `factors`.
    pub fn product_of(factors: &[FiniteGroup]) -> Result<Self> {
        let Some((first, rest)) = factors.split_first() else {
            bail!(InvalidDescriptor, "product needs at least one factor");
        };
        let mut acc = first.clone();
        if rest.is_empty() {
            acc.spec = GroupSpec::Product(vec![first.spec.clone()]);
        }
        for f in rest {
            acc = Self::direct_product(&acc, f)?;
        }
        Ok(acc)
    }

    /// Group from an explicit row-major Cayley table.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self> {
        Self::build(order, table, GroupSpec::Table)
    }

    fn build(order: usize, table: Vec<usize>, spec: GroupSpec) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            bail!(InvalidDescriptor, "Cayley table must be {order}x{order}");
        }
        let mut seen = vec![false; order];
        for r in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..order {
                let v = table[r * order + c];
                if v >= order || seen[v] {
                    bail!(InvalidDescriptor, "Cayley table row {r} is not a permutation");
                }
                seen[v] = true;
            }
        }
        for c in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..order {
                let v = table[r * order + c];
                if seen[v] {
                    bail!(InvalidDescriptor, "Cayley table column {c} is not a permutation");
                }
                seen[v] = true;
            }
        }
        for x in 0..order {
            if table[x] != x || table[x * order] != x {
                bail!(InvalidDescriptor, "element 0 is not the identity");
            }
        }
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = table[a * order + b];
                    for c in 0..order {
                        let bc = table[b * order + c];
                        if table[ab * order + c] != table[a * order + bc] {
                            bail!(InvalidDescriptor, "table is not associative at ({a}, {b}, {c})");
                        }
                    }
                }
            }
        }
        let inverses =
            (0..order).map(|a| (0..order).find(|&b| table[a * order + b] == 0).expect("latin square")).collect();
        Ok(FiniteGroup { order, table, inverses, spec })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Index of a permutation (one-line notation, 1-based) in a symmetric group.
    pub fn permutation_index(&self, one_line: &[usize]) -> Option<usize> {
        let GroupSpec::Symmetric(n) = self.spec else {
            return None;
        };
        if one_line.len() != n {
            return None;
        }
        let zero_based: Vec<usize> = one_line.iter().map(|&v| v.wrapping_sub(1)).collect();
        permutations(n).binary_search(&zero_based).ok()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_powers() {
        let c5 = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(c5.mul(3, 4), 2);
        assert_eq!(c5.inverse(2), 3);
        assert!(c5.is_abelian());
    }

    #[test]
    fn s3_order_and_rotation() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        // (123) is 2,3,1 in one-line notation
        let sigma = s3.permutation_index(&[2, 3, 1]).unwrap();
        let sigma2 = s3.mul(sigma, sigma);
        assert_eq!(sigma2, s3.permutation_index(&[3, 1, 2]).unwrap());
        assert_eq!(s3.mul(sigma2, sigma), 0);
    }

    #[test]
    fn s4_is_a_group() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(FiniteGroup::symmetric(5).is_err());
    }

    #[test]
    fn products() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let g = FiniteGroup::product_of(&[c2.clone(), c3.clone(), c2.clone()]).unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.is_abelian());
        assert_eq!(
            g.spec(),
            &GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3), GroupSpec::Cyclic(2)])
        );
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 1]).is_err());
        assert!(FiniteGroup::from_table(2, vec![1, 0, 0, 1]).is_err());
        // a latin square with identity that is not associative (order 5 loop)
        let loop5 = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroup::from_table(5, loop5).is_err());
    }
}
