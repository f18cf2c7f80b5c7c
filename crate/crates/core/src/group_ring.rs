//! Unit lifting in group rings `R G`, the chain-ring unit description, and
//! inversion in `Z_m G` through the CRT or through the radical of `m`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::arith::{self, checked_mul, checked_pow, inv_mod};
use crate::chain::{CncChain, IdealElements};
use crate::crt::CrtBasis;
use crate::error::{bail, Error, Result};
use crate::group::FiniteGroup;
use crate::lift::{self, UnitCertificate};
use crate::matrix::prime_chain;
use crate::oracle::{self, EnumerableRing};
use crate::ring::{Element, Ring, RingKind};

fn group_of(ring: &Ring) -> Result<&Arc<FiniteGroup>> {
    match ring.kind() {
        RingKind::GroupRing { group, .. } => Ok(group),
        _ => bail!(ShapeMismatch, "{ring} is not a group ring"),
    }
}

/// Convolution `(x y)_h = sum_{g_1 g_2 = h} x_{g_1} y_{g_2}`.
pub fn group_ring_mul(x: &Element, y: &Element) -> Result<Element> {
    group_of(x.ring())?;
    x.mul(y)
}

/// Lifts along `{N G, N^2 G, ..., N^k G}` for `N = <generator>` of index `k`
/// in the coefficient ring and `s = char(R/N)`.
pub fn lift_inverse_group_ring(
    x: &Element,
    g: &Element,
    generator: &Element,
    k: u32,
    s: u64,
) -> Result<UnitCertificate> {
    let ring = x.ring();
    group_of(ring)?;
    let coefficients = ring.coefficient_ring();
    let chain = CncChain::power(&coefficients, generator, k, s)?.promote(ring)?;
    lift::lift_inverse(x, g, &chain)
}

/// Shape checks shared by the chain-ring enumerations: returns `(p, k, F)`
/// with `F` the residue field.
fn chain_ring_data(base: &Arc<Ring>) -> Result<(u64, u32, Arc<Ring>)> {
    if !base.is_local_scalar() {
        bail!(Unsupported, "{base} is not a supported chain ring");
    }
    let &[(p, k)] = base.modulus_factors() else {
        bail!(Internal, "local scalar ring with composite modulus");
    };
    let field = if k == 1 { base.clone() } else { base.with_modulus(p)? };
    Ok((p, k, field))
}

/// Every unit of `R G` for a chain ring `R` with maximal ideal `<p>` of
/// index `k`, as cosets `f + <p> G` over the units `f` of `F G`, each with
/// its inverse `g^r f^{r-1}`, `r = p^{k-1}`.
pub fn chain_ring_units(base: &Arc<Ring>, group: &Arc<FiniteGroup>) -> Result<ChainRingUnits> {
    if !group.is_abelian() {
        bail!(Unsupported, "the chain-ring description needs a commutative group");
    }
    let (p, k, field) = chain_ring_data(base)?;
    let ring = Ring::group_ring(group.clone(), base.clone())?;
    let residue_ring = Ring::group_ring(group.clone(), field)?;
    let residues = EnumerableRing::new(residue_ring)?.enumerate_units()?;
    let chain = prime_chain(&ring, p, k)?;
    Ok(ChainRingUnits { ring, chain, residues, next_residue: 0, current: None })
}

pub struct ChainRingUnits {
    ring: Arc<Ring>,
    chain: CncChain,
    residues: Vec<(Element, Element)>,
    next_residue: usize,
    current: Option<(Element, Element, IdealElements)>,
}

impl ChainRingUnits {
    /// `|(F G)^*| |<p>|^{|G|}`.
    pub fn expected_count(&self) -> Result<u128> {
        let ideal = self.chain.first().size().ok_or_else(|| Error::Overflow("ideal size".into()))?;
        checked_mul(self.residues.len() as u128, ideal)
    }

    /// Units of the residue group ring with their inverses.
    pub fn residue_units(&self) -> &[(Element, Element)] {
        &self.residues
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    fn certify(&self, x: Element, g: &Element) -> Result<UnitCertificate> {
        let cert = lift::lift_inverse(&x, g, &self.chain)?;
        let r = cert.exponent();
        let power_form = g.pow(r).mul(&x.pow(r - 1))?;
        if &power_form != cert.inverse() {
            bail!(Internal, "g^r f^(r-1) differs from the lifted inverse");
        }
        Ok(cert)
    }
}

impl Iterator for ChainRingUnits {
    type Item = Result<UnitCertificate>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some((f, g, offsets)) = &mut self.current {
                if let Some(n) = offsets.next() {
                    let (f, g) = (f.clone(), g.clone());
                    return Some(f.add(&n).and_then(|x| self.certify(x, &g)));
                }
                self.current = None;
            }
            let (fbar, gbar) = self.residues.get(self.next_residue)?;
            self.next_residue += 1;
            let first = self.chain.first();
            let lifted = if first.is_zero() {
                Ok((fbar.clone(), gbar.clone()))
            } else {
                first.lift(fbar).and_then(|f| Ok((f, first.lift(gbar)?)))
            };
            match lifted {
                Ok((f, g)) => self.current = Some((f, g, first.elements())),
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// An inverse in `Z_m G` with the per-prime pieces that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZmgCertificate {
    pub element: Element,
    pub inverse: Element,
    /// Inverses of the components over `Z_{p_i^{r_i}} G`.
    pub component_inverses: Vec<Element>,
    /// The exponent in the lifting step: `alpha_i = p_i^{r_i - 1}` for the
    /// CRT method, or the single `P^{k-1}` for the radical method.
    pub exponents: Vec<u128>,
}

fn check_zmg_group(ring: &Ring) -> Result<()> {
    let group = group_of(ring)?;
    if !group.is_abelian() {
        bail!(Unsupported, "Z_m G inversion needs a commutative group");
    }
    Ok(())
}

/// `f = sum s_i m_i f_i` and `f^{-1} = sum s_i m_i g_i^{alpha_i} f_i^{alpha_i - 1}`
/// with `alpha_i = p_i^{r_i - 1}`.
///
/// Component `i` lives over `Z_{p_i} G` (as in the theorem) or over
/// `Z_{p_i^{r_i}} G`; `g_i` inverts it modulo `p_i`.
pub fn invert_zmg_crt(f_components: &[Element], g_components: &[Element], basis: &CrtBasis) -> Result<ZmgCertificate> {
    if f_components.len() != basis.len() || g_components.len() != basis.len() {
        bail!(ShapeMismatch, "expected {} components", basis.len());
    }
    let mut lifted = Vec::with_capacity(basis.len());
    let mut inverses = Vec::with_capacity(basis.len());
    let mut exponents = Vec::with_capacity(basis.len());
    for (i, ((f, g), c)) in f_components.iter().zip(g_components).zip(basis.components()).enumerate() {
        check_zmg_group(f.ring())?;
        let target = f.ring().rebase(c.modulus)?;
        let (f, g) = (f.recast(&target)?, g.recast(&target)?);
        let chain = prime_chain(&target, c.prime, c.exponent)?;
        if !lift::is_unit_via_quotient(&f, &chain)? {
            bail!(NotAUnit, "component {i} is not a unit modulo {}", c.prime);
        }
        let inverse = lift::lift_inverse_commutative(&f, &g, &chain)?;
        exponents.push(chain.lifting_exponent()?.value());
        lifted.push(f);
        inverses.push(inverse);
    }
    let target = lifted[0].ring().rebase(basis.modulus())?;
    let element = basis.combine_into(&target, &lifted)?;
    let inverse = basis.combine_into(&target, &inverses)?;
    if !element.mul(&inverse)?.is_one() {
        bail!(Internal, "CRT-assembled inverse fails f f^-1 = 1");
    }
    Ok(ZmgCertificate { element, inverse, component_inverses: inverses, exponents })
}

/// With `P = p_1 ... p_j`, `c_i = P / p_i` and `t_i c_i = 1 mod p_i`: `f =
/// sum t_i c_i f_i` and `w = sum t_i c_i g_i`, then
/// `f^{-1} = w^{P^{k-1}} f^{P^{k-1} - 1}` in `Z_m G` for `k = max r_i`.
///
/// The sums are formed from the canonical representatives of `f_i`, `g_i`
/// and reduced mod `m`; their images mod `P` are the theorem's elements of
/// `Z_P G`.
pub fn invert_zmg_radical(f_components: &[Element], g_components: &[Element], m: u64) -> Result<ZmgCertificate> {
    let basis = CrtBasis::new(m)?;
    if f_components.len() != basis.len() || g_components.len() != basis.len() {
        bail!(ShapeMismatch, "expected {} components", basis.len());
    }
    let big_p = basis.radical();
    let k = basis.max_exponent();
    let ring = f_components[0].ring().rebase(m)?;
    check_zmg_group(&ring)?;
    let mut f = Element::zero(&ring);
    let mut w = Element::zero(&ring);
    for (i, ((fi, gi), c)) in f_components.iter().zip(g_components).zip(basis.components()).enumerate() {
        let residue = fi.ring().rebase(c.prime)?;
        let (fi, gi) = (fi.recast(&residue)?, gi.recast(&residue)?);
        if !fi.mul(&gi)?.is_one() {
            if fi.inverse().is_none() {
                bail!(NotAUnit, "component {i} is not a unit modulo {}", c.prime);
            }
            bail!(Precondition, "g_{i} does not invert f_{i} modulo {}", c.prime);
        }
        let ci = big_p / c.prime;
        let ti = inv_mod(ci % c.prime, c.prime).expect("distinct primes");
        let weight = ci * ti;
        f = f.add(&fi.recast(&ring)?.scale(weight))?;
        w = w.add(&gi.recast(&ring)?.scale(weight))?;
    }
    let chain = if k == 1 {
        CncChain::trivial(&ring)
    } else {
        let coefficients = ring.coefficient_ring();
        CncChain::power(&coefficients, &Element::from_int(&coefficients, big_p as i128), k, big_p)?.promote(&ring)?
    };
    let inverse = lift::lift_inverse_commutative(&f, &w, &chain)?;
    let exponent = checked_pow(big_p as u128, k - 1)?;
    Ok(ZmgCertificate {
        element: f,
        inverse: inverse.clone(),
        component_inverses: Vec::from([inverse]),
        exponents: Vec::from([exponent]),
    })
}

/// Inverse of a unit of `Z_m G` by splitting it with the CRT and inverting
/// each component through [`invert_zmg_crt`].
pub fn invert_zmg_unit(f: &Element) -> Result<ZmgCertificate> {
    check_zmg_group(f.ring())?;
    let basis = CrtBasis::new(f.ring().modulus())?;
    let parts = basis.split(f)?;
    let mut quotient_inverses = Vec::with_capacity(parts.len());
    for (i, (part, c)) in parts.iter().zip(basis.components()).enumerate() {
        let residue = part.recast(&part.ring().with_modulus(c.prime)?)?;
        let Some(g) = residue.inverse() else {
            bail!(NotAUnit, "component {i} is not a unit modulo {}", c.prime);
        };
        quotient_inverses.push(g);
    }
    invert_zmg_crt(&parts, &quotient_inverses, &basis)
}

/// `|R G^*| = |N_1|^{|G|} |((R/N_1) G)^*|`, the quotient counted by
/// enumeration.
pub fn count_group_ring_units(base: &Arc<Ring>, chain: &CncChain, group: &Arc<FiniteGroup>) -> Result<u128> {
    let ring = Ring::group_ring(group.clone(), base.clone())?;
    let first = chain.first().promote(&ring)?;
    let ideal = first.size().ok_or_else(|| Error::Overflow("ideal size".into()))?;
    let quotient = if first.is_zero() { ring } else { first.quotient_ring()? };
    checked_mul(ideal, oracle::count_units(&quotient, oracle::DEFAULT_CAP)?)
}

/// `|(Z_m G)^*| = (m / (p_1 ... p_j))^{|G|} prod_i |(Z_{p_i} G)^*|`.
pub fn zmg_unit_count(m: u64, group: &Arc<FiniteGroup>) -> Result<u128> {
    let basis = CrtBasis::new(m)?;
    let order = u32::try_from(group.order()).map_err(|_| Error::Overflow("group order".into()))?;
    let mut total = checked_pow((m / basis.radical()) as u128, order)?;
    for c in basis.components() {
        let ring = Ring::group_ring(group.clone(), Ring::zmod(c.prime)?)?;
        total = checked_mul(total, oracle::count_units(&ring, oracle::DEFAULT_CAP)?)?;
    }
    Ok(total)
}

/// `t_i` with `t_i (P / p_i) = 1 mod p_i`, for every prime of `m`.
pub fn radical_coefficients(m: u64) -> Vec<u64> {
    let big_p = arith::radical(m);
    arith::factorize(m).into_iter().map(|(p, _)| inv_mod((big_p / p) % p, p).expect("distinct primes")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(group: FiniteGroup, m: u64) -> Arc<Ring> {
        Ring::group_ring(Arc::new(group), Ring::zmod(m).unwrap()).unwrap()
    }

    fn el(ring: &Arc<Ring>, c: &[u64]) -> Element {
        Element::new(ring, c.to_vec()).unwrap()
    }

    #[test]
    fn z25c5_products() {
        let r = gr(FiniteGroup::cyclic(5).unwrap(), 25);
        let fg = group_ring_mul(&el(&r, &[2, 24, 0, 0, 0]), &el(&r, &[1, 3, 4, 2, 1])).unwrap();
        assert_eq!(fg.coords(), &[1, 5, 5, 0, 0]);
        assert_eq!(fg.pow(4).coords(), &[1, 20, 20, 0, 0]);
        let z25 = Ring::zmod(25).unwrap();
        let five = Element::from_int(&z25, 5);
        let cert = lift_inverse_group_ring(&el(&r, &[2, 24, 0, 0, 0]), &el(&r, &[1, 3, 4, 2, 1]), &five, 2, 5).unwrap();
        assert_eq!(cert.inverse().coords(), &[11, 18, 9, 17, 21]);
    }

    #[test]
    fn matrix_coefficients_over_s3() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let sigma = s3.permutation_index(&[2, 3, 1]).unwrap();
        let sigma2 = s3.mul(sigma, sigma);
        let z9 = Ring::zmod(9).unwrap();
        let three = Element::from_int(&z9, 3);
        for n in [1usize, 2] {
            let base = Ring::matrix(n, z9.clone()).unwrap();
            let ring = Ring::group_ring(s3.clone(), base.clone()).unwrap();
            let combo = |c: [i128; 3]| {
                let mut parts = alloc::vec![Element::zero(&base); 6];
                parts[0] = Element::from_int(&base, c[0]);
                parts[sigma] = Element::from_int(&base, c[1]);
                parts[sigma2] = Element::from_int(&base, c[2]);
                Element::from_parts(&ring, &parts).unwrap()
            };
            let g = combo([1, 2, 1]);
            let cert = lift_inverse_group_ring(&combo([2, 8, 0]), &g, &three, 2, 3).unwrap();
            assert_eq!(cert.inverse(), &combo([7, 8, 4]));
            let x = combo([2, 2, 0]);
            let cert = lift_inverse_group_ring(&x, &g, &three, 2, 3).unwrap();
            assert_eq!(cert.inverse(), &combo([7, 2, 7]));
            // the printed value 4 + s + 4 s^2 multiplies x to 7 + s + s^2
            assert_eq!(x.mul(&combo([4, 1, 4])).unwrap(), combo([7, 1, 1]));
        }
    }

    #[test]
    fn chain_ring_unit_counts() {
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let c1 = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let cases = [
            (Ring::zmod(4).unwrap(), c2.clone(), 8u128),
            (Ring::zmod(9).unwrap(), c1.clone(), 6),
            (Ring::galois(2, 2, &[1, 1, 1]).unwrap(), c1.clone(), 12),
        ];
        for (base, g, expected) in cases {
            let units = chain_ring_units(&base, &g).unwrap();
            assert_eq!(units.expected_count().unwrap(), expected);
            let all: Vec<UnitCertificate> = units.collect::<Result<_>>().unwrap();
            assert_eq!(all.len() as u128, expected);
        }
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        assert!(chain_ring_units(&Ring::zmod(4).unwrap(), &s3).is_err());
    }

    #[test]
    fn crt_examples() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let (r2, r3) = (gr(c2.clone(), 2), gr(c2.clone(), 3));
        let basis = CrtBasis::new(6).unwrap();
        let f = [el(&r2, &[0, 1]), el(&r3, &[2, 0])];
        let g = [el(&r2, &[0, 1]), el(&r3, &[2, 0])];
        let cert = invert_zmg_crt(&f, &g, &basis).unwrap();
        assert_eq!(cert.element.coords(), &[2, 3]);
        assert_eq!(cert.inverse.coords(), &[2, 3]);
        let radical = invert_zmg_radical(&f, &g, 6).unwrap();
        assert_eq!((radical.element, radical.inverse), (cert.element, cert.inverse));

        let c1 = FiniteGroup::cyclic(1).unwrap();
        let (t2, t3) = (gr(c1.clone(), 2), gr(c1.clone(), 3));
        let f = [el(&t2, &[1]), el(&t3, &[2])];
        let cert = invert_zmg_crt(&f, &f, &basis).unwrap();
        assert_eq!((cert.element.coords(), cert.inverse.coords()), (&[5u64][..], &[5u64][..]));
        let ones = [el(&t2, &[1]), el(&t3, &[1])];
        assert!(invert_zmg_crt(&ones, &ones, &basis).unwrap().inverse.is_one());
        let zero = [el(&t2, &[1]), el(&t3, &[0])];
        let err = invert_zmg_crt(&zero, &zero, &basis).unwrap_err();
        assert!(matches!(err, Error::NotAUnit(ref why) if why.contains("component 1")));
    }

    #[test]
    fn radical_example_m12() {
        let c1 = FiniteGroup::cyclic(1).unwrap();
        let (t2, t3) = (gr(c1.clone(), 2), gr(c1.clone(), 3));
        let f = [el(&t2, &[1]), el(&t3, &[2])];
        let cert = invert_zmg_radical(&f, &f, 12).unwrap();
        assert_eq!((cert.element.coords()[0], cert.inverse.coords()[0]), (11, 11));
        assert_eq!(cert.exponents, [6]);
        let wrapped = invert_zmg_unit(&cert.element).unwrap();
        assert_eq!(wrapped.inverse, cert.inverse);
        assert_eq!(radical_coefficients(12), [1, 2]);
    }

    #[test]
    fn unit_counts() {
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let z4 = Ring::zmod(4).unwrap();
        let chain = CncChain::radical(&z4).unwrap();
        assert_eq!(count_group_ring_units(&z4, &chain, &c2).unwrap(), 8);
        let z9 = Ring::zmod(9).unwrap();
        let c1 = Arc::new(FiniteGroup::cyclic(1).unwrap());
        assert_eq!(count_group_ring_units(&z9, &CncChain::radical(&z9).unwrap(), &c1).unwrap(), 6);
        assert_eq!(zmg_unit_count(6, &c2).unwrap(), 8);
        assert_eq!(zmg_unit_count(4, &c2).unwrap(), 8);
    }
}
