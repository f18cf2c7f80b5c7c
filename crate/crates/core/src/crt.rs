//! Chinese remainder decomposition of `Z_m`, applied coordinatewise to any
//! ring whose coefficients live in `Z_m`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::arith::{self, add_mod, mul_mod};
use crate::error::{bail, Error, Result};
use crate::ring::{same_shape, Element, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtComponent {
    pub prime: u64,
    pub exponent: u32,
    /// `p^r`.
    pub modulus: u64,
    /// `m / p^r`.
    pub cofactor: u64,
    /// Inverse of the cofactor mod `p^r`, in `[0, p^r)`.
    pub coefficient: u64,
}

impl CrtComponent {
    /// `s_i * m_i mod m`: 1 modulo this component and 0 modulo the others.
    pub fn idempotent(&self, m: u64) -> u64 {
        mul_mod(self.coefficient, self.cofactor, m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtBasis {
    m: u64,
    components: Vec<CrtComponent>,
}

impl CrtBasis {
    pub fn new(m: u64) -> Result<CrtBasis> {
        if m < 2 {
            bail!(InvalidDescriptor, "CRT basis needs m >= 2, got {m}");
        }
        Ok(CrtBasis::from_factors(m, &arith::factorize(m)))
    }

    pub(crate) fn from_factors(m: u64, factors: &[(u64, u32)]) -> CrtBasis {
        let components = factors
            .iter()
            .map(|&(prime, exponent)| {
                let modulus = prime.pow(exponent);
                let cofactor = m / modulus;
                let coefficient = arith::inv_mod(cofactor % modulus, modulus).expect("coprime cofactor");
                CrtComponent { prime, exponent, modulus, cofactor, coefficient }
            })
            .collect();
        CrtBasis { m, components }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn components(&self) -> &[CrtComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.components.iter().map(|c| c.prime).product()
    }

    /// Largest prime exponent.
    pub fn max_exponent(&self) -> u32 {
        self.components.iter().map(|c| c.exponent).max().unwrap_or(1)
    }

    /// Reduces each coordinate of `x` modulo every `p_i^{r_i}`.
    pub fn split(&self, x: &Element) -> Result<Vec<Element>> {
        if x.ring().modulus() != self.m {
            bail!(ShapeMismatch, "element modulus {} does not match basis {}", x.ring().modulus(), self.m);
        }
        self.components.iter().map(|c| x.recast(&x.ring().with_modulus(c.modulus)?)).collect()
    }

    /// `sum_i s_i m_i x_i mod m`, landing in the ring with the components'
    /// shape over `Z_m`.
    pub fn combine(&self, parts: &[Element]) -> Result<Element> {
        let Some(first) = parts.first() else {
            bail!(ShapeMismatch, "no components to combine");
        };
        let target = first.ring().rebase(self.m)?;
        self.combine_into(&target, parts)
    }

    pub fn combine_into(&self, target: &Arc<Ring>, parts: &[Element]) -> Result<Element> {
        if parts.len() != self.components.len() {
            bail!(ShapeMismatch, "expected {} components, got {}", self.components.len(), parts.len());
        }
        if target.modulus() != self.m {
            bail!(ShapeMismatch, "target modulus {} does not match basis {}", target.modulus(), self.m);
        }
        let mut coords = alloc::vec![0u64; target.coord_len()];
        for (c, part) in self.components.iter().zip(parts) {
            if part.ring().modulus() != c.modulus {
                bail!(
                    ShapeMismatch,
                    "component modulus {} does not match {}^{}",
                    part.ring().modulus(),
                    c.prime,
                    c.exponent
                );
            }
            if !same_shape(part.ring(), target) {
                return Err(Error::ShapeMismatch("component has a different ring shape".into()));
            }
            let e = c.idempotent(self.m);
            for (acc, &v) in coords.iter_mut().zip(part.coords()) {
                *acc = add_mod(*acc, mul_mod(e, v, self.m), self.m);
            }
        }
        Element::new(target, coords)
    }

    /// Componentwise split for a single residue, as plain integers.
    pub fn split_int(&self, x: u64) -> Vec<u64> {
        self.components.iter().map(|c| x % c.modulus).collect()
    }
}

/// CRT split of an element of a ring over `Z_m`.
pub fn crt_split(x: &Element, basis: &CrtBasis) -> Result<Vec<Element>> {
    basis.split(x)
}

/// CRT reconstruction `sum_i s_i m_i f_i`.
pub fn crt_combine(parts: &[Element], basis: &CrtBasis) -> Result<Element> {
    basis.combine(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_coefficients() {
        let b = CrtBasis::new(12).unwrap();
        let idem: Vec<u64> = b.components().iter().map(|c| c.idempotent(12)).collect();
        assert_eq!(idem, [9, 4]);
        assert_eq!(idem.iter().sum::<u64>() % 12, 1);
        let b6 = CrtBasis::new(6).unwrap();
        let idem6: Vec<u64> = b6.components().iter().map(|c| c.idempotent(6)).collect();
        assert_eq!(idem6, [3, 4]);
        assert!(CrtBasis::new(1).is_err());
    }

    #[test]
    fn split_and_combine_examples() {
        let z6 = Ring::zmod(6).unwrap();
        let basis = CrtBasis::new(6).unwrap();
        let parts = crt_split(&Element::from_int(&z6, 5), &basis).unwrap();
        assert_eq!(parts[0].coords(), &[1]);
        assert_eq!(parts[1].coords(), &[2]);
        assert_eq!(crt_combine(&parts, &basis).unwrap().coords(), &[5]);

        let z12 = Ring::zmod(12).unwrap();
        let basis = CrtBasis::new(12).unwrap();
        let parts = crt_split(&Element::from_int(&z12, 11), &basis).unwrap();
        assert_eq!((parts[0].coords()[0], parts[1].coords()[0]), (3, 2));
        assert_eq!(crt_combine(&parts, &basis).unwrap().coords(), &[11]);

        let ones = crt_split(&Element::one(&z12), &basis).unwrap();
        assert!(ones.iter().all(Element::is_one));
        assert!(crt_combine(&ones, &basis).unwrap().is_one());
    }

    #[test]
    fn combine_rejects_mismatches() {
        let basis = CrtBasis::new(6).unwrap();
        let z2 = Ring::zmod(2).unwrap();
        let z5 = Ring::zmod(5).unwrap();
        let bad = [Element::one(&z2), Element::one(&z5)];
        assert!(crt_combine(&bad, &basis).is_err());
        assert!(crt_combine(&[Element::one(&z2)], &basis).is_err());
    }
}
