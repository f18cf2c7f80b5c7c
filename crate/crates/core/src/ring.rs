//! Finite ring descriptors and canonical elements.
//!
//! Every supported ring is a free module over a single coefficient ring
//! `Z_q`, so an element is a flat vector of residues in `[0, q)`:
//!
//! | ring                     | coordinates                                   |
//! |--------------------------|-----------------------------------------------|
//! | `Z_m`                    | one residue                                   |
//! | `Z_{p^k}[i]`             | `(a, b)` for `a + bi`                          |
//! | `GR(p^k, r)`             | `r` polynomial coefficients, ascending degree |
//! | `M_n(B)`                 | `n * n` base payloads, row major              |
//! | `B[G]`                   | `|G|` base payloads in canonical group order  |
//!
//! Addition is coordinatewise mod `q` for all of them; only multiplication
//! depends on the shape. Equality of elements is equality of coordinates.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{self, add_mod, mul_mod, neg_mod, sub_mod, MODULUS_LIMIT};
use crate::error::{bail, Error, Result};
use crate::group::FiniteGroup;
use crate::matrix::ModMatrix;

/// Deepest permitted nesting of matrix and group-ring constructors.
pub const MAX_DEPTH: usize = 2;

/// Largest Galois-ring degree whose irreducibility we can certify.
pub const MAX_GALOIS_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `Z_m`.
    ZMod,
    /// `Z_{p^k}[i]` with `i^2 = -1`.
    Gaussian {
        p: u64,
        k: u32,
    },
    /// `Z_{p^k}[x]/(q(x))`. `poly` is monic, ascending, reduced mod `p^k`.
    Galois {
        p: u64,
        k: u32,
        poly: Vec<u64>,
    },
    Matrix {
        n: usize,
        base: Arc<Ring>,
    },
    GroupRing {
        group: Arc<FiniteGroup>,
        base: Arc<Ring>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    modulus: u64,
    factors: Vec<(u64, u32)>,
    coord_len: usize,
    depth: usize,
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        bail!(InvalidDescriptor, "modulus must be at least 2, got {m}");
    }
    if m >= MODULUS_LIMIT {
        bail!(InvalidDescriptor, "modulus {m} is not below 2^63");
    }
    Ok(())
}

impl Ring {
    pub fn zmod(m: u64) -> Result<Arc<Ring>> {
        check_modulus(m)?;
        Ok(Arc::new(Ring { kind: RingKind::ZMod, modulus: m, factors: arith::factorize(m), coord_len: 1, depth: 0 }))
    }

    /// `Z_{p^k}[i]` for an odd prime `p`.
    pub fn gaussian(p: u64, k: u32) -> Result<Arc<Ring>> {
        if p == 2 || !arith::is_prime(p) {
            bail!(InvalidDescriptor, "Gaussian integers mod p^k need an odd prime p, got {p}");
        }
        if k == 0 {
            bail!(InvalidDescriptor, "exponent k must be at least 1");
        }
        let modulus =
            p.checked_pow(k).ok_or_else(|| Error::InvalidDescriptor(alloc::format!("{p}^{k} is not below 2^63")))?;
        check_modulus(modulus)?;
        Ok(Arc::new(Ring { kind: RingKind::Gaussian { p, k }, modulus, factors: vec![(p, k)], coord_len: 2, depth: 0 }))
    }

    /// Galois ring `Z_{p^k}[x]/(q(x))`; `q` is given ascending and must be monic
    /// of degree `1..=4` with irreducible image mod `p`.
    pub fn galois(p: u64, k: u32, q: &[u64]) -> Result<Arc<Ring>> {
        if !arith::is_prime(p) {
            bail!(InvalidDescriptor, "Galois ring characteristic base {p} is not prime");
        }
        if k == 0 {
            bail!(InvalidDescriptor, "exponent k must be at least 1");
        }
        let modulus =
            p.checked_pow(k).ok_or_else(|| Error::InvalidDescriptor(alloc::format!("{p}^{k} is not below 2^63")))?;
        check_modulus(modulus)?;
        if q.len() < 2 {
            bail!(InvalidDescriptor, "Galois polynomial must have degree >= 1");
        }
        let poly: Vec<u64> = q.iter().map(|c| c % modulus).collect();
        if *poly.last().unwrap() != 1 {
            bail!(InvalidDescriptor, "Galois polynomial must be monic");
        }
        let degree = poly.len() - 1;
        if degree > MAX_GALOIS_DEGREE {
            bail!(InvalidDescriptor, "Galois polynomial degree {degree} exceeds {MAX_GALOIS_DEGREE}");
        }
        let residue: Vec<u64> = poly.iter().map(|c| c % p).collect();
        if !irreducible_mod_p(&residue, p) {
            bail!(InvalidDescriptor, "polynomial {q:?} is reducible mod {p}");
        }
        Ok(Arc::new(Ring {
            kind: RingKind::Galois { p, k, poly },
            modulus,
            factors: vec![(p, k)],
            coord_len: degree,
            depth: 0,
        }))
    }

    /// `M_n(base)`.
    pub fn matrix(n: usize, base: Arc<Ring>) -> Result<Arc<Ring>> {
        if n == 0 {
            bail!(InvalidDescriptor, "matrix dimension must be at least 1");
        }
        let depth = base.depth + 1;
        if depth > MAX_DEPTH {
            bail!(InvalidDescriptor, "descriptor nesting depth {depth} exceeds {MAX_DEPTH}");
        }
        let coord_len = n
            .checked_mul(n)
            .and_then(|nn| nn.checked_mul(base.coord_len))
            .ok_or_else(|| Error::InvalidDescriptor("matrix payload too large".into()))?;
        Ok(Arc::new(Ring {
            modulus: base.modulus,
            factors: base.factors.clone(),
            coord_len,
            depth,
            kind: RingKind::Matrix { n, base },
        }))
    }

    /// Group ring `base[G]`.
    pub fn group_ring(group: Arc<FiniteGroup>, base: Arc<Ring>) -> Result<Arc<Ring>> {
        let depth = base.depth + 1;
        if depth > MAX_DEPTH {
            bail!(InvalidDescriptor, "descriptor nesting depth {depth} exceeds {MAX_DEPTH}");
        }
        let coord_len = group
            .order()
            .checked_mul(base.coord_len)
            .ok_or_else(|| Error::InvalidDescriptor("group ring payload too large".into()))?;
        Ok(Arc::new(Ring {
            modulus: base.modulus,
            factors: base.factors.clone(),
            coord_len,
            depth,
            kind: RingKind::GroupRing { group, base },
        }))
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    /// The coefficient modulus `q`: every coordinate lives in `[0, q)`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Factorisation of [`Ring::modulus`].
    pub fn modulus_factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn coord_len(&self) -> usize {
        self.coord_len
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Additive order of `1`, which equals the coefficient modulus.
    pub fn characteristic(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `None` when it does not fit in 128 bits.
    pub fn size(&self) -> Option<u128> {
        let exp = u32::try_from(self.coord_len).ok()?;
        (self.modulus as u128).checked_pow(exp)
    }

    pub fn is_commutative(&self) -> bool {
        match &self.kind {
            RingKind::ZMod | RingKind::Gaussian { .. } | RingKind::Galois { .. } => true,
            RingKind::Matrix { n, base } => *n == 1 && base.is_commutative(),
            RingKind::GroupRing { group, base } => group.is_abelian() && base.is_commutative(),
        }
    }

    /// True for the scalar coefficient rings `Z_m`, `Z_{p^k}[i]`, `GR(p^k, r)`.
    pub fn is_scalar(&self) -> bool {
        matches!(self.kind, RingKind::ZMod | RingKind::Gaussian { .. } | RingKind::Galois { .. })
    }

    /// Scalar rings with a unique maximal ideal. In these a matrix is
    /// invertible exactly when unit-pivot elimination succeeds.
    pub fn is_local_scalar(&self) -> bool {
        match &self.kind {
            RingKind::ZMod => self.factors.len() == 1,
            RingKind::Galois { .. } => true,
            RingKind::Gaussian { p, .. } => p % 4 == 3,
            _ => false,
        }
    }

    /// When the ring is a finite field, its order.
    pub fn field_order(&self) -> Option<u128> {
        match &self.kind {
            RingKind::ZMod if arith::is_prime(self.modulus) => Some(self.modulus as u128),
            RingKind::Gaussian { p, k: 1 } if p % 4 == 3 => Some((*p as u128) * (*p as u128)),
            RingKind::Galois { k: 1, .. } => self.size(),
            _ => None,
        }
    }

    /// Innermost scalar ring, in which ideal generators live.
    pub fn coefficient_ring(self: &Arc<Self>) -> Arc<Ring> {
        match &self.kind {
            RingKind::Matrix { base, .. } | RingKind::GroupRing { base, .. } => base.coefficient_ring(),
            _ => self.clone(),
        }
    }

    /// Same-shaped ring with coefficients reduced mod `d`, i.e. `R / dR`.
    pub fn with_modulus(self: &Arc<Self>, d: u64) -> Result<Arc<Ring>> {
        if d == 0 || !self.modulus.is_multiple_of(d) {
            bail!(Precondition, "{d} does not divide the coefficient modulus {}", self.modulus);
        }
        if d == self.modulus {
            return Ok(self.clone());
        }
        if d == 1 {
            bail!(Unsupported, "quotient by the whole ring is the zero ring");
        }
        match &self.kind {
            RingKind::ZMod => Ring::zmod(d),
            RingKind::Gaussian { p, .. } => Ring::gaussian(*p, exponent_of(d, *p)),
            RingKind::Galois { p, poly, .. } => Ring::galois(*p, exponent_of(d, *p), poly),
            RingKind::Matrix { n, base } => Ring::matrix(*n, base.with_modulus(d)?),
            RingKind::GroupRing { group, base } => Ring::group_ring(group.clone(), base.with_modulus(d)?),
        }
    }

    /// Same-shaped ring over an arbitrary coefficient modulus `m`. Gaussian and
    /// Galois shapes only admit powers of their prime.
    pub fn rebase(self: &Arc<Self>, m: u64) -> Result<Arc<Ring>> {
        if m == self.modulus {
            return Ok(self.clone());
        }
        match &self.kind {
            RingKind::ZMod => Ring::zmod(m),
            RingKind::Gaussian { p, .. } | RingKind::Galois { p, .. } => {
                let k = exponent_of(m, *p);
                if k == 0 {
                    bail!(Unsupported, "{self} cannot be rebased to modulus {m}");
                }
                match &self.kind {
                    RingKind::Gaussian { .. } => Ring::gaussian(*p, k),
                    RingKind::Galois { poly, .. } => Ring::galois(*p, k, poly),
                    _ => unreachable!(),
                }
            }
            RingKind::Matrix { n, base } => Ring::matrix(*n, base.rebase(m)?),
            RingKind::GroupRing { group, base } => Ring::group_ring(group.clone(), base.rebase(m)?),
        }
    }

    pub(crate) fn zero_coords(&self) -> Vec<u64> {
        vec![0; self.coord_len]
    }

    pub(crate) fn one_coords(&self) -> Vec<u64> {
        self.scalar_coords(1)
    }

    /// Coordinates of `c * 1`.
    pub(crate) fn scalar_coords(&self, c: u64) -> Vec<u64> {
        let mut out = self.zero_coords();
        self.write_scalar(c % self.modulus, &mut out);
        out
    }

    fn write_scalar(&self, c: u64, out: &mut [u64]) {
        match &self.kind {
            RingKind::ZMod | RingKind::Gaussian { .. } | RingKind::Galois { .. } => out[0] = c,
            RingKind::Matrix { n, base } => {
                let w = base.coord_len;
                for i in 0..*n {
                    let at = (i * n + i) * w;
                    base.write_scalar(c, &mut out[at..at + w]);
                }
            }
            RingKind::GroupRing { base, .. } => base.write_scalar(c, &mut out[..base.coord_len]),
        }
    }

    pub(crate) fn add_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let m = self.modulus;
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = add_mod(x, y, m);
        }
    }

    pub(crate) fn add_assign(&self, acc: &mut [u64], b: &[u64]) {
        let m = self.modulus;
        for (o, &y) in acc.iter_mut().zip(b) {
            *o = add_mod(*o, y, m);
        }
    }

    pub(crate) fn sub_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let m = self.modulus;
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = sub_mod(x, y, m);
        }
    }

    pub(crate) fn sub_assign(&self, acc: &mut [u64], b: &[u64]) {
        let m = self.modulus;
        for (o, &y) in acc.iter_mut().zip(b) {
            *o = sub_mod(*o, y, m);
        }
    }

    pub(crate) fn scale_into(&self, a: &[u64], c: u64, out: &mut [u64]) {
        let m = self.modulus;
        let c = c % m;
        for (o, &x) in out.iter_mut().zip(a) {
            *o = mul_mod(x, c, m);
        }
    }

    /// `out = a * b`. `out` must not alias the inputs.
    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let m = self.modulus;
        match &self.kind {
            RingKind::ZMod => out[0] = mul_mod(a[0], b[0], m),
            RingKind::Gaussian { .. } => {
                let re = sub_mod(mul_mod(a[0], b[0], m), mul_mod(a[1], b[1], m), m);
                let im = add_mod(mul_mod(a[0], b[1], m), mul_mod(a[1], b[0], m), m);
                out[0] = re;
                out[1] = im;
            }
            RingKind::Galois { poly, .. } => {
                let r = self.coord_len;
                let mut prod = vec![0u64; 2 * r - 1];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, m), m);
                    }
                }
                for d in (r..2 * r - 1).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    // x^r = -(q_0 + ... + q_{r-1} x^{r-1})
                    for (j, &qj) in poly[..r].iter().enumerate() {
                        prod[d - r + j] = sub_mod(prod[d - r + j], mul_mod(c, qj, m), m);
                    }
                }
                out.copy_from_slice(&prod[..r]);
            }
            RingKind::Matrix { n, base } => {
                let n = *n;
                let w = base.coord_len;
                if matches!(base.kind, RingKind::ZMod) {
                    for i in 0..n {
                        for j in 0..n {
                            let mut acc: u64 = 0;
                            for t in 0..n {
                                acc = add_mod(acc, mul_mod(a[i * n + t], b[t * n + j], m), m);
                            }
                            out[i * n + j] = acc;
                        }
                    }
                    return;
                }
                out.fill(0);
                let mut tmp = vec![0u64; w];
                for i in 0..n {
                    for j in 0..n {
                        let at = (i * n + j) * w;
                        for t in 0..n {
                            let x = &a[(i * n + t) * w..(i * n + t + 1) * w];
                            let y = &b[(t * n + j) * w..(t * n + j + 1) * w];
                            base.mul_into(x, y, &mut tmp);
                            base.add_assign(&mut out[at..at + w], &tmp);
                        }
                    }
                }
            }
            RingKind::GroupRing { group, base } => {
                let w = base.coord_len;
                let order = group.order();
                out.fill(0);
                let mut tmp = vec![0u64; w];
                for g in 0..order {
                    let x = &a[g * w..(g + 1) * w];
                    if x.iter().all(|&c| c == 0) {
                        continue;
                    }
                    for h in 0..order {
                        let y = &b[h * w..(h + 1) * w];
                        if y.iter().all(|&c| c == 0) {
                            continue;
                        }
                        base.mul_into(x, y, &mut tmp);
                        let gh = group.mul(g, h);
                        base.add_assign(&mut out[gh * w..(gh + 1) * w], &tmp);
                    }
                }
            }
        }
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero_coords();
        self.mul_into(a, b, &mut out);
        out
    }

    pub(crate) fn pow(&self, a: &[u64], mut exp: u128) -> Vec<u64> {
        let mut acc = self.one_coords();
        let mut base = a.to_vec();
        let mut tmp = self.zero_coords();
        while exp > 0 {
            if exp & 1 == 1 {
                self.mul_into(&acc, &base, &mut tmp);
                core::mem::swap(&mut acc, &mut tmp);
            }
            exp >>= 1;
            if exp > 0 {
                self.mul_into(&base, &base, &mut tmp);
                core::mem::swap(&mut base, &mut tmp);
            }
        }
        acc
    }

    pub(crate) fn is_one(&self, a: &[u64]) -> bool {
        a == self.one_coords().as_slice()
    }

    /// Two-sided inverse, or `None` when `a` is not a unit.
    pub(crate) fn inverse_coords(&self, a: &[u64]) -> Option<Vec<u64>> {
        let candidate = match &self.kind {
            RingKind::ZMod => return arith::inv_mod(a[0], self.modulus).map(|v| vec![v]),
            RingKind::Matrix { n, base } if base.is_local_scalar() => {
                return unit_pivot_inverse(*n, base, a);
            }
            _ => self.regular_inverse(a)?,
        };
        let one = self.one_coords();
        (self.mul(a, &candidate) == one && self.mul(&candidate, a) == one).then_some(candidate)
    }

    /// Solves `a * y = 1` through the matrix of left multiplication by `a`
    /// over `Z_q`. In a finite ring a right inverse is two-sided.
    fn regular_inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        let d = self.coord_len;
        let mut lmat = ModMatrix::zero(d, self.modulus);
        let mut basis = self.zero_coords();
        let mut col = self.zero_coords();
        for j in 0..d {
            basis[j] = 1;
            self.mul_into(a, &basis, &mut col);
            basis[j] = 0;
            for (i, &v) in col.iter().enumerate() {
                lmat.set(i, j, v);
            }
        }
        lmat.solve_crt(&self.factors, &self.one_coords())
    }
}

/// Gauss-Jordan with unit pivots over a local scalar base; computes a left
/// inverse, which is two-sided in a finite ring.
fn unit_pivot_inverse(n: usize, base: &Ring, a: &[u64]) -> Option<Vec<u64>> {
    let w = base.coord_len;
    let at = |i: usize, j: usize| (i * n + j) * w;
    let mut left = a.to_vec();
    let mut right = vec![0u64; n * n * w];
    for i in 0..n {
        base.write_scalar(1, &mut right[at(i, i)..at(i, i) + w]);
    }
    let mut tmp = vec![0u64; w];
    for col in 0..n {
        let (pivot_row, pivot_inv) =
            (col..n).find_map(|r| base.inverse_coords(&left[at(r, col)..at(r, col) + w]).map(|inv| (r, inv)))?;
        if pivot_row != col {
            for j in 0..n {
                for c in 0..w {
                    left.swap(at(pivot_row, j) + c, at(col, j) + c);
                    right.swap(at(pivot_row, j) + c, at(col, j) + c);
                }
            }
        }
        for mat in [&mut left, &mut right] {
            for j in 0..n {
                base.mul_into(&pivot_inv, &mat[at(col, j)..at(col, j) + w], &mut tmp);
                mat[at(col, j)..at(col, j) + w].copy_from_slice(&tmp);
            }
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = left[at(r, col)..at(r, col) + w].to_vec();
            if factor.iter().all(|&c| c == 0) {
                continue;
            }
            for mat in [&mut left, &mut right] {
                for j in 0..n {
                    let pivot_entry = mat[at(col, j)..at(col, j) + w].to_vec();
                    base.mul_into(&factor, &pivot_entry, &mut tmp);
                    base.sub_assign(&mut mat[at(r, j)..at(r, j) + w], &tmp);
                }
            }
        }
    }
    Some(right)
}

fn exponent_of(d: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut v = d;
    while v.is_multiple_of(p) {
        v /= p;
        e += 1;
    }
    // a non-power of p leaves v > 1; the caller rejects it through k = 0 or a mismatch
    if v != 1 {
        0
    } else {
        e
    }
}

/// Exhaustive search for a monic divisor of degree `1..=deg/2` over `F_p`.
fn irreducible_mod_p(q: &[u64], p: u64) -> bool {
    let degree = q.len() - 1;
    for d in 1..=degree / 2 {
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                divisor.push((v % p as u128) as u64);
                v /= p as u128;
            }
            divisor.push(1);
            if poly_rem_is_zero(q, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u64], monic_div: &[u64], p: u64) -> bool {
    let mut r = num.to_vec();
    let dd = monic_div.len() - 1;
    for top in (dd..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (j, &dj) in monic_div.iter().enumerate() {
            let idx = top - dd + j;
            r[idx] = sub_mod(r[idx], mul_mod(c, dj, p), p);
        }
    }
    r[..dd].iter().all(|&c| c == 0)
}

/// A canonical element of a described ring.
#[derive(Clone)]
pub struct Element {
    ring: Arc<Ring>,
    coords: Vec<u64>,
}

impl Element {
    /// Element from raw coordinates, which must already be canonical.
    pub fn new(ring: &Arc<Ring>, coords: Vec<u64>) -> Result<Element> {
        if coords.len() != ring.coord_len {
            bail!(ShapeMismatch, "expected {} coordinates, got {}", ring.coord_len, coords.len());
        }
        if let Some(c) = coords.iter().find(|&&c| c >= ring.modulus) {
            bail!(ShapeMismatch, "coordinate {c} is outside [0, {})", ring.modulus);
        }
        Ok(Element { ring: ring.clone(), coords })
    }

    /// Element from signed coordinates, reduced into canonical range.
    pub fn from_signed(ring: &Arc<Ring>, coords: &[i128]) -> Result<Element> {
        let m = ring.modulus as i128;
        Element::new(ring, coords.iter().map(|c| c.rem_euclid(m) as u64).collect())
    }

    pub(crate) fn from_coords_unchecked(ring: &Arc<Ring>, coords: Vec<u64>) -> Element {
        debug_assert_eq!(coords.len(), ring.coord_len);
        Element { ring: ring.clone(), coords }
    }

    /// The integer `c` as a ring element, `c * 1`.
    pub fn from_int(ring: &Arc<Ring>, c: i128) -> Element {
        let c = c.rem_euclid(ring.modulus as i128) as u64;
        Element::from_coords_unchecked(ring, ring.scalar_coords(c))
    }

    pub fn zero(ring: &Arc<Ring>) -> Element {
        Element::from_coords_unchecked(ring, ring.zero_coords())
    }

    pub fn one(ring: &Arc<Ring>) -> Element {
        Element::from_coords_unchecked(ring, ring.one_coords())
    }

    /// Assembles a matrix (row-major, `n * n` parts) or group-ring element
    /// (`|G|` parts) from base-ring elements.
    pub fn from_parts(ring: &Arc<Ring>, parts: &[Element]) -> Result<Element> {
        let (count, base) = match &ring.kind {
            RingKind::Matrix { n, base } => (n * n, base),
            RingKind::GroupRing { group, base } => (group.order(), base),
            _ => bail!(ShapeMismatch, "scalar rings have no parts"),
        };
        if parts.len() != count {
            bail!(ShapeMismatch, "expected {count} parts, got {}", parts.len());
        }
        let mut coords = Vec::with_capacity(ring.coord_len);
        for part in parts {
            if !same_ring(&part.ring, base) {
                bail!(ShapeMismatch, "part does not belong to the base ring");
            }
            coords.extend_from_slice(&part.coords);
        }
        Ok(Element::from_coords_unchecked(ring, coords))
    }

    /// Inverse of [`Element::from_parts`].
    pub fn parts(&self) -> Vec<Element> {
        match &self.ring.kind {
            RingKind::Matrix { base, .. } | RingKind::GroupRing { base, .. } => {
                self.coords.chunks(base.coord_len).map(|c| Element::from_coords_unchecked(base, c.to_vec())).collect()
            }
            _ => vec![self.clone()],
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    fn check(&self, other: &Element) -> Result<()> {
        if !same_ring(&self.ring, &other.ring) {
            bail!(ShapeMismatch, "operands belong to different rings");
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let mut out = self.ring.zero_coords();
        self.ring.add_into(&self.coords, &other.coords, &mut out);
        Ok(Element::from_coords_unchecked(&self.ring, out))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let mut out = self.ring.zero_coords();
        self.ring.sub_into(&self.coords, &other.coords, &mut out);
        Ok(Element::from_coords_unchecked(&self.ring, out))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(Element::from_coords_unchecked(&self.ring, self.ring.mul(&self.coords, &other.coords)))
    }

    pub fn neg(&self) -> Element {
        let m = self.ring.modulus;
        Element::from_coords_unchecked(&self.ring, self.coords.iter().map(|&c| neg_mod(c, m)).collect())
    }

    /// Integer multiple `c * self`.
    pub fn scale(&self, c: u64) -> Element {
        let mut out = self.ring.zero_coords();
        self.ring.scale_into(&self.coords, c, &mut out);
        Element::from_coords_unchecked(&self.ring, out)
    }

    /// Square-and-multiply power; `x^0 = 1`.
    pub fn pow(&self, exp: u128) -> Element {
        Element::from_coords_unchecked(&self.ring, self.ring.pow(&self.coords, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.ring.is_one(&self.coords)
    }

    /// Exact two-sided inverse computed directly in this ring.
    pub fn inverse(&self) -> Option<Element> {
        self.ring.inverse_coords(&self.coords).map(|c| Element::from_coords_unchecked(&self.ring, c))
    }

    /// Reinterprets the coordinates in `target`, which must have the same
    /// shape and a modulus that is a multiple of this one (zero-extension lift)
    /// or a divisor of it (reduction).
    pub fn recast(&self, target: &Arc<Ring>) -> Result<Element> {
        if target.coord_len != self.ring.coord_len || !same_shape(&self.ring, target) {
            bail!(ShapeMismatch, "rings have different shapes");
        }
        let (a, b) = (self.ring.modulus, target.modulus);
        if b % a == 0 {
            Ok(Element::from_coords_unchecked(target, self.coords.clone()))
        } else if a % b == 0 {
            Ok(Element::from_coords_unchecked(target, self.coords.iter().map(|c| c % b).collect()))
        } else {
            bail!(ShapeMismatch, "moduli {a} and {b} are not comparable")
        }
    }
}

/// Structural equality ignoring the coefficient modulus.
pub fn same_shape(a: &Ring, b: &Ring) -> bool {
    match (&a.kind, &b.kind) {
        (RingKind::ZMod, RingKind::ZMod) => true,
        (RingKind::Gaussian { p: p1, .. }, RingKind::Gaussian { p: p2, .. }) => p1 == p2,
        (RingKind::Galois { p: p1, poly: q1, .. }, RingKind::Galois { p: p2, poly: q2, .. }) => {
            p1 == p2 && q1.len() == q2.len() && q1.iter().zip(q2).all(|(x, y)| x % p1 == y % p1)
        }
        (RingKind::Matrix { n: n1, base: b1 }, RingKind::Matrix { n: n2, base: b2 }) => n1 == n2 && same_shape(b1, b2),
        (RingKind::GroupRing { group: g1, base: b1 }, RingKind::GroupRing { group: g2, base: b2 }) => {
            g1 == g2 && same_shape(b1, b2)
        }
        _ => false,
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for Element {}

impl core::hash::Hash for Element {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Nested-array rendering that mirrors the JSON payload shape.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn render(ring: &Ring, c: &[u64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let list = |f: &mut fmt::Formatter<'_>, items: &[u64]| {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            };
            match &ring.kind {
                RingKind::ZMod => write!(f, "{}", c[0]),
                RingKind::Gaussian { .. } | RingKind::Galois { .. } => list(f, c),
                RingKind::Matrix { n, base } => {
                    let w = base.coord_len;
                    f.write_str("[")?;
                    for i in 0..*n {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        f.write_str("[")?;
                        for j in 0..*n {
                            if j > 0 {
                                f.write_str(",")?;
                            }
                            let at = (i * n + j) * w;
                            render(base, &c[at..at + w], f)?;
                        }
                        f.write_str("]")?;
                    }
                    f.write_str("]")
                }
                RingKind::GroupRing { base, .. } => {
                    f.write_str("[")?;
                    for (i, part) in c.chunks(base.coord_len).enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        render(base, part, f)?;
                    }
                    f.write_str("]")
                }
            }
        }
        render(&self.ring, &self.coords, f)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::ZMod => write!(f, "Z_{}", self.modulus),
            RingKind::Gaussian { .. } => write!(f, "Z_{}[i]", self.modulus),
            RingKind::Galois { p, k, poly } => write!(f, "GR({}^{}, {})", p, k, poly.len() - 1),
            RingKind::Matrix { n, base } => write!(f, "M_{n}({base})"),
            RingKind::GroupRing { group, base } => write!(f, "({base})G[{}]", group.order()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Exact ring arithmetic on two elements of the same ring.
pub fn element_arithmetic(a: &Element, b: &Element, op: ArithOp) -> Result<Element> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
    }
}

/// Lists every element of `ring` in lexicographic coordinate order.
pub(crate) struct Coordinates {
    modulus: u64,
    current: Option<Vec<u64>>,
}

impl Coordinates {
    pub(crate) fn new(ring: &Ring) -> Self {
        Coordinates { modulus: ring.modulus, current: Some(ring.zero_coords()) }
    }
}

impl Iterator for Coordinates {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut carried = true;
        for c in next.iter_mut().rev() {
            *c += 1;
            if *c < self.modulus {
                carried = false;
                break;
            }
            *c = 0;
        }
        self.current = if carried { None } else { Some(next) };
        Some(out)
    }
}
