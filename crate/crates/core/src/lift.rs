//! Inverse lifting along CNC chains.
//!
//! A unit `x` of `R` is recovered from an inverse `g` of its image in
//! `R/N_1` as `x^{-1} = g (x g)^{S - 1}` with `S = s_1 ... s_{k-1}`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::arith;
use crate::chain::{CncChain, Ideal, IdealElements};
use crate::error::{bail, Error, Result};
use crate::ring::{same_ring, Element, Ring};

/// Largest coset that [`unit_class`] will walk.
pub const UNIT_CLASS_CAP: u128 = 100_000;

/// Default cap on the odd exponent searched by [`binomial_inverse`].
pub const BINOMIAL_BOUND: u32 = 64;

/// A unit with its inverse and the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCertificate {
    element: Element,
    inverse: Element,
    quotient_inverse: Element,
    exponent: u128,
    product: Element,
    lifted_power: Element,
    trace: Vec<Element>,
}

impl UnitCertificate {
    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn inverse(&self) -> &Element {
        &self.inverse
    }

    /// The lift `g` of the quotient inverse, as used in the formula.
    pub fn quotient_inverse(&self) -> &Element {
        &self.quotient_inverse
    }

    /// `S`.
    pub fn exponent(&self) -> u128 {
        self.exponent
    }

    /// `x g`.
    pub fn product(&self) -> &Element {
        &self.product
    }

    /// `(x g)^{S - 1}`.
    pub fn lifted_power(&self) -> &Element {
        &self.lifted_power
    }

    /// Level `i` is the image of `(x g)^{s_1 ... s_i}` in `R/N_{i+1}`; each
    /// one equals 1.
    pub fn trace(&self) -> &[Element] {
        &self.trace
    }
}

/// Moves `g` into `ring`, lifting from `R/N_1` with zero extension when needed.
fn lift_to_ring(g: &Element, ring: &Arc<Ring>, first: &Ideal) -> Result<Element> {
    if same_ring(g.ring(), ring) {
        return Ok(g.clone());
    }
    if g.ring().modulus() == first.divisor() && first.quotient_ring().is_ok_and(|q| same_ring(&q, g.ring())) {
        return first.lift(g);
    }
    bail!(ShapeMismatch, "g must belong to {ring} or to its quotient by N_1")
}

/// Inverse of the image of `x` in `R/N_1`, lifted back to `R`. `None` when
/// the image is not a unit.
pub fn quotient_inverse(x: &Element, chain: &CncChain) -> Result<Option<Element>> {
    let first = chain.first();
    if !same_ring(x.ring(), first.ring()) {
        bail!(ShapeMismatch, "element does not belong to the chain's ring");
    }
    if first.is_zero() {
        return Ok(x.inverse());
    }
    let residue = first.residue(x)?;
    residue.inverse().map(|g| first.lift(&g)).transpose()
}

/// `x` is a unit of `R` exactly when its image in `R/N_1` is.
pub fn is_unit_via_quotient(x: &Element, chain: &CncChain) -> Result<bool> {
    Ok(quotient_inverse(x, chain)?.is_some())
}

/// `g (x g)^{S - 1}`, where `g` (in `R` or `R/N_1`) inverts `x` modulo `N_1`.
pub fn lift_inverse(x: &Element, g: &Element, chain: &CncChain) -> Result<UnitCertificate> {
    chain.ensure_valid()?;
    let ring = chain.ring();
    if !same_ring(x.ring(), ring) {
        bail!(ShapeMismatch, "element does not belong to the chain's ring");
    }
    let first = chain.first();
    let g = lift_to_ring(g, ring, first)?;
    let product = x.mul(&g)?;
    let residue_is_one = if first.is_zero() { product.is_one() } else { first.residue(&product)?.is_one() };
    if !residue_is_one {
        bail!(Precondition, "g is not an inverse of x modulo N_1");
    }
    let exponent = chain.lifting_exponent()?.value();
    let lifted_power = product.pow(exponent - 1);
    let inverse = g.mul(&lifted_power)?;

    let mut trace = Vec::with_capacity(chain.len());
    let mut power = product.clone();
    for (i, ideal) in chain.ideals().iter().enumerate() {
        if i > 0 {
            power = power.pow(chain.characteristics()[i - 1] as u128);
        }
        let level = if ideal.is_zero() { power.clone() } else { ideal.residue(&power)? };
        if !level.is_one() {
            bail!(Internal, "trace level {i} is not 1 modulo N_{}", i + 1);
        }
        trace.push(level);
    }
    if !x.mul(&inverse)?.is_one() || !inverse.mul(x)?.is_one() {
        bail!(Internal, "lifted inverse fails x * x^-1 = 1; the chain data is inconsistent");
    }
    Ok(UnitCertificate { element: x.clone(), inverse, quotient_inverse: g, exponent, product, lifted_power, trace })
}

/// `g^S x^{S - 1}`, valid in commutative rings.
pub fn lift_inverse_commutative(x: &Element, g: &Element, chain: &CncChain) -> Result<Element> {
    let ring = chain.ring();
    if !ring.is_commutative() {
        bail!(Unsupported, "{ring} is not commutative");
    }
    let cert = lift_inverse(x, g, chain)?;
    let s = cert.exponent;
    let out = cert.quotient_inverse.pow(s).mul(&x.pow(s - 1))?;
    if out != cert.inverse {
        bail!(Internal, "commutative form disagrees with g (xg)^(S-1)");
    }
    Ok(out)
}

/// Inverse from the binomial expansion of `(x g - 1)^{2n+1} = 0`:
/// `e = g * sum_{i=0}^{2n} C(2n+1, i) (-1)^i (x g)^{2n-i}`.
///
/// `2n + 1` is the smallest odd exponent killing `x g - 1`, searched up to
/// `bound`.
pub fn binomial_inverse(x: &Element, g: &Element, ideal: &Ideal, bound: u32) -> Result<Element> {
    let ring = ideal.ring();
    if !same_ring(x.ring(), ring) {
        bail!(ShapeMismatch, "element does not belong to the ideal's ring");
    }
    let g = lift_to_ring(g, ring, ideal)?;
    let y = x.mul(&g)?;
    let nil = y.sub(&Element::one(ring))?;
    if !ideal.contains(&nil) {
        bail!(Precondition, "x g - 1 is not in N");
    }
    let odd = (0..=bound / 2)
        .map(|n| 2 * n + 1)
        .find(|&e| nil.pow(e as u128).is_zero())
        .ok_or_else(|| Error::Precondition(alloc::format!("x g - 1 is not nilpotent within exponent {bound}")))?;
    let m = ring.modulus();
    let two_n = odd as u64 - 1;
    let mut acc = Element::zero(ring);
    for i in 0..=two_n {
        let c = (arith::binomial(odd as u64, i)? % m as u128) as u64;
        let c = if i % 2 == 0 { c } else { arith::neg_mod(c, m) };
        acc = acc.mul(&y)?.add(&Element::from_int(ring, c as i128))?;
    }
    let e = g.mul(&acc)?;
    if !x.mul(&e)?.is_one() || !e.mul(x)?.is_one() {
        bail!(Internal, "binomial inverse fails x * e = 1");
    }
    Ok(e)
}

/// `r = sum_{i=1}^{t-1} (C(p, i) / p) n^{i-1}`, so that `(1 + n)^p = 1 + p n r`
/// whenever `n^t = 0` and `p >= t`.
pub fn power_reduction_witness(n: &Element, p: u64, t: u32) -> Result<Element> {
    let ring = n.ring();
    if !ring.is_commutative() {
        bail!(Unsupported, "{ring} is not commutative");
    }
    if !arith::is_prime(p) {
        bail!(Precondition, "{p} is not prime");
    }
    if t == 0 || (p as u128) < t as u128 {
        bail!(Precondition, "need p >= t, got p = {p}, t = {t}");
    }
    if !n.pow(t as u128).is_zero() {
        bail!(Precondition, "n^{t} is not zero");
    }
    let m = ring.modulus() as u128;
    let mut r = Element::zero(ring);
    let mut n_power = Element::one(ring);
    for i in 1..t as u64 {
        let k = arith::binomial(p, i)? / p as u128;
        r = r.add(&n_power.scale((k % m) as u64))?;
        n_power = n_power.mul(n)?;
    }
    let one = Element::one(ring);
    let lhs = one.add(n)?.pow(p as u128);
    let rhs = one.add(&n.mul(&r)?.scale((p as u128 % m) as u64))?;
    if lhs != rhs {
        bail!(Internal, "(1 + n)^p != 1 + p n r");
    }
    Ok(r)
}

/// Certificates for every element of the coset `f + N_1` over a unit
/// `residue` of `R/N_1`.
pub fn unit_class(residue: &Element, chain: &CncChain) -> Result<UnitClass> {
    let first = chain.first().clone();
    let ring = chain.ring().clone();
    let size = first.size().unwrap_or(u128::MAX);
    if size > UNIT_CLASS_CAP {
        bail!(ResourceLimit, "N_1 has {size} elements, above the cap of {UNIT_CLASS_CAP}");
    }
    let base = lift_to_ring(residue, &ring, &first)?;
    let Some(g) = quotient_inverse(&base, chain)? else {
        bail!(NotAUnit, "{residue} is not a unit of R/N_1");
    };
    Ok(UnitClass { base, g, chain: chain.clone(), offsets: first.elements() })
}

pub struct UnitClass {
    base: Element,
    g: Element,
    chain: CncChain,
    offsets: IdealElements,
}

impl UnitClass {
    /// The common quotient inverse, lifted to `R`.
    pub fn quotient_inverse(&self) -> &Element {
        &self.g
    }
}

impl Iterator for UnitClass {
    type Item = Result<UnitCertificate>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.offsets.next()?;
        Some(self.base.add(&n).and_then(|x| lift_inverse(&x, &self.g, &self.chain)))
    }
}
