//! Brute-force ground truth for small rings.
//!
//! Nothing here uses the lifting machinery or the divisor form of ideals:
//! units come from scanning all products, ideals from the sets `a^e R`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::chain::{CncChain, Ideal};
use crate::error::{bail, Result};
use crate::ring::{same_ring, Coordinates, Element, Ring};

/// Default bound on the number of ring elements the oracle will enumerate.
pub const DEFAULT_CAP: u128 = 100_000;

/// Upper bound on products formed while checking nilpotency exhaustively.
const PRODUCT_WORK_CAP: u128 = 10_000_000;

/// A ring small enough to list.
#[derive(Debug, Clone)]
pub struct EnumerableRing {
    ring: Arc<Ring>,
    size: u128,
}

impl EnumerableRing {
    pub fn new(ring: Arc<Ring>) -> Result<Self> {
        Self::with_cap(ring, DEFAULT_CAP)
    }

    pub fn with_cap(ring: Arc<Ring>, cap: u128) -> Result<Self> {
        match ring.size() {
            Some(size) if size <= cap => Ok(EnumerableRing { ring, size }),
            Some(size) => bail!(ResourceLimit, "{ring} has {size} elements, above the cap of {cap}"),
            None => bail!(ResourceLimit, "{ring} has more than 2^128 elements"),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    /// Every element, lexicographic in the coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        Coordinates::new(&self.ring).map(|c| Element::from_coords_unchecked(&self.ring, c))
    }

    /// Every unit with its inverse, in canonical order. Each `x` is tested
    /// against every `y`; finding two inverses is reported as an internal error.
    pub fn enumerate_units(&self) -> Result<Vec<(Element, Element)>> {
        let all: Vec<Vec<u64>> = Coordinates::new(&self.ring).collect();
        let one = self.ring.one_coords();
        let mut out = Vec::new();
        let mut xy = self.ring.zero_coords();
        let mut yx = self.ring.zero_coords();
        for x in &all {
            let mut found: Option<&Vec<u64>> = None;
            for y in &all {
                self.ring.mul_into(x, y, &mut xy);
                if xy != one {
                    continue;
                }
                self.ring.mul_into(y, x, &mut yx);
                if yx != one {
                    continue;
                }
                if found.is_some() {
                    bail!(Internal, "two distinct inverses found in {}", self.ring);
                }
                found = Some(y);
            }
            if let Some(y) = found {
                out.push((
                    Element::from_coords_unchecked(&self.ring, x.clone()),
                    Element::from_coords_unchecked(&self.ring, y.clone()),
                ));
            }
        }
        Ok(out)
    }

    pub fn count_units(&self) -> Result<u128> {
        Ok(self.enumerate_units()?.len() as u128)
    }

    /// The unique two-sided inverse of `x`, found by search.
    pub fn brute_inverse(&self, x: &Element) -> Result<Option<Element>> {
        if !same_ring(x.ring(), &self.ring) {
            bail!(ShapeMismatch, "element does not belong to {}", self.ring);
        }
        let mut found = None;
        for y in self.elements() {
            if x.mul(&y)?.is_one() && y.mul(x)?.is_one() {
                if found.is_some() {
                    bail!(Internal, "{x} has two distinct inverses");
                }
                found = Some(y);
            }
        }
        Ok(found)
    }

    /// The set `a^e R` for the ideal's generator `a`, as coordinate vectors.
    pub fn ideal_set(&self, ideal: &Ideal) -> Result<BTreeSet<Vec<u64>>> {
        if !same_ring(ideal.ring(), &self.ring) {
            bail!(ShapeMismatch, "ideal does not belong to {}", self.ring);
        }
        let a = ideal.generator().pow(ideal.exponent() as u128);
        let scalar = embed_scalar(&self.ring, &a);
        let mut out = BTreeSet::new();
        for r in Coordinates::new(&self.ring) {
            out.insert(self.ring.mul(&scalar, &r));
        }
        Ok(out)
    }
}

/// `a` from the coefficient ring, placed on the diagonal or at the identity
/// of the group, i.e. `a * 1`.
fn embed_scalar(ring: &Arc<Ring>, a: &Element) -> Vec<u64> {
    let scalar_one = a.ring().one_coords();
    let mut out = ring.one_coords();
    for block in out.chunks_mut(scalar_one.len()) {
        if *block == scalar_one[..] {
            block.copy_from_slice(a.coords());
        }
    }
    out
}

/// `(x, x^-1)` for every unit of `ring`.
pub fn enumerate_units(ring: &EnumerableRing) -> Result<Vec<(Element, Element)>> {
    ring.enumerate_units()
}

/// Inverse of `x` by exhaustive search under the default cap.
pub fn brute_inverse(x: &Element) -> Result<Option<Element>> {
    EnumerableRing::new(x.ring().clone())?.brute_inverse(x)
}

/// Smallest `t >= 2` with `N^t ⊆ next` and smallest `s >= 1` with
/// `s N ⊆ next`, both by exhaustive membership.
pub fn infer_indices(ideal: &Ideal, next: &Ideal) -> Result<(u32, u64)> {
    let ring = EnumerableRing::new(ideal.ring().clone())?;
    let n = ring.ideal_set(ideal)?;
    let target = ring.ideal_set(next)?;
    let r = ring.ring();
    let mut products = n.clone();
    let mut t = 1u32;
    loop {
        let next_products: BTreeSet<Vec<u64>> =
            products.iter().flat_map(|p| n.iter().map(move |x| r.mul(p, x))).collect();
        t += 1;
        if next_products.is_subset(&target) {
            break;
        }
        if next_products == products || t as usize > n.len() + 1 {
            bail!(Precondition, "no power of N lies in the next ideal");
        }
        products = next_products;
    }
    let q = r.modulus();
    let s = (1..=q)
        .find(|&s| {
            n.iter().all(|x| {
                let mut y = r.zero_coords();
                r.scale_into(x, s, &mut y);
                target.contains(&y)
            })
        })
        .expect("q N = 0");
    Ok((t, s))
}

/// Outcome of the brute-force checks of the three CNC conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveChecks {
    pub chain: bool,
    pub nilpotency: bool,
    pub characteristic: bool,
}

/// Membership-based check of a chain. Fails with `ResourceLimit` when the
/// ring or the product search is too large.
pub fn check_chain_exhaustively(chain: &CncChain, cap: u128) -> Result<ExhaustiveChecks> {
    let ring = EnumerableRing::with_cap(chain.ring().clone(), cap)?;
    let r = ring.ring();
    let sets: Vec<BTreeSet<Vec<u64>>> = chain.ideals().iter().map(|i| ring.ideal_set(i)).collect::<Result<_>>()?;
    let zero: BTreeSet<Vec<u64>> = [r.zero_coords()].into_iter().collect();
    let mut out = ExhaustiveChecks {
        chain: *sets.last().expect("non-empty chain") == zero,
        nilpotency: true,
        characteristic: true,
    };
    for i in 0..sets.len() - 1 {
        let (cur, next) = (&sets[i], &sets[i + 1]);
        let t = chain.nilpotency_indices()[i];
        let s = chain.characteristics()[i];
        out.chain &= next.is_subset(cur);
        let work = (cur.len() as u128).pow(2) * t.max(1) as u128;
        if work > PRODUCT_WORK_CAP {
            bail!(ResourceLimit, "nilpotency check would form {work} products");
        }
        let mut products = cur.clone();
        for _ in 1..t {
            products = products.iter().flat_map(|p| cur.iter().map(move |x| r.mul(p, x))).collect();
        }
        out.nilpotency &= t >= 2 && products.is_subset(next);
        out.characteristic &= cur.iter().all(|x| {
            let mut y = r.zero_coords();
            r.scale_into(x, s, &mut y);
            next.contains(&y)
        });
    }
    Ok(out)
}

/// `|(R/N_{i+1})^*| = |(R/N_i)^*| |N_i / N_{i+1}|` at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    pub level: usize,
    pub units_below: u128,
    pub units_above: u128,
    pub index: u128,
}

impl LevelCheck {
    pub fn holds(&self) -> bool {
        self.units_below == self.units_above * self.index
    }
}

/// Enumerated `|R^*|` against `|(R/N_1)^*| |N_1|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityReport {
    pub ring: String,
    pub units: u128,
    pub quotient_units: u128,
    pub ideal_size: u128,
    pub levels: Vec<LevelCheck>,
}

impl CardinalityReport {
    pub fn predicted(&self) -> u128 {
        self.quotient_units * self.ideal_size
    }

    pub fn passed(&self) -> bool {
        self.units == self.predicted() && self.levels.iter().all(LevelCheck::holds)
    }
}

/// Counts every quantity in the cardinality identity by enumeration.
pub fn verify_cardinality(ring: &Arc<Ring>, chain: &CncChain) -> Result<CardinalityReport> {
    if !same_ring(ring, chain.ring()) {
        bail!(ShapeMismatch, "chain does not belong to {ring}");
    }
    verify_cardinality_with_cap(chain, DEFAULT_CAP)
}

pub fn verify_cardinality_with_cap(chain: &CncChain, cap: u128) -> Result<CardinalityReport> {
    let full = EnumerableRing::with_cap(chain.ring().clone(), cap)?;
    let sizes: Vec<u128> =
        chain.ideals().iter().map(|i| full.ideal_set(i).map(|s| s.len() as u128)).collect::<Result<_>>()?;
    // |(R/N_i)^*| for every level; R/N_k = R
    let unit_counts: Vec<u128> = chain
        .ideals()
        .iter()
        .map(|i| {
            let q = if i.is_zero() { full.ring().clone() } else { i.quotient_ring()? };
            EnumerableRing::with_cap(q, cap)?.count_units()
        })
        .collect::<Result<_>>()?;
    let levels = (0..chain.len() - 1)
        .map(|i| LevelCheck {
            level: i + 1,
            units_below: unit_counts[i + 1],
            units_above: unit_counts[i],
            index: sizes[i] / sizes[i + 1],
        })
        .collect();
    Ok(CardinalityReport {
        ring: alloc::format!("{}", chain.ring()),
        units: *unit_counts.last().expect("non-empty chain"),
        quotient_units: unit_counts[0],
        ideal_size: sizes[0],
        levels,
    })
}

/// `|R^*|` by enumeration under `cap`.
pub fn count_units(ring: &Arc<Ring>, cap: u128) -> Result<u128> {
    EnumerableRing::with_cap(ring.clone(), cap)?.count_units()
}
