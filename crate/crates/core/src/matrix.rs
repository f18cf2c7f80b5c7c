//! Matrices over `Z_m`: a dense kernel type for the inversion benchmarks and
//! the element-level inversion algorithms for `M_n(Z_{p^k})` and `M_n(Z_m)`.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{self, add_mod, inv_mod, mul_mod, neg_mod, sub_mod};
use crate::chain::CncChain;
use crate::crt::CrtBasis;
use crate::error::{bail, Error, Result};
use crate::lift::{self, UnitCertificate};
use crate::oracle;
use crate::ring::{Element, Ring, RingKind};

/// Multiplication counters for the benchmark kernels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    /// Modular scalar multiplications.
    pub scalar_muls: u64,
    /// Full `n x n` matrix products, squarings included.
    pub matrix_products: u64,
    pub squarings: u64,
}

/// Dense row-major `n x n` matrix with entries in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(n: usize, modulus: u64) -> ModMatrix {
        ModMatrix { n, modulus, data: vec![0; n * n] }
    }

    pub fn identity(n: usize, modulus: u64) -> ModMatrix {
        let mut out = ModMatrix::zero(n, modulus);
        for i in 0..n {
            out.data[i * n + i] = 1 % modulus;
        }
        out
    }

    /// Entries are reduced mod `modulus`.
    pub fn from_rows(rows: &[Vec<u64>], modulus: u64) -> Result<ModMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            bail!(ShapeMismatch, "matrix rows must all have length {n}");
        }
        let data = rows.iter().flatten().map(|&v| v % modulus).collect();
        Ok(ModMatrix { n, modulus, data })
    }

    pub(crate) fn from_flat(n: usize, modulus: u64, data: Vec<u64>) -> ModMatrix {
        debug_assert_eq!(data.len(), n * n);
        ModMatrix { n, modulus, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n.max(1)).map(<[u64]>::to_vec).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v % self.modulus;
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.n, self.modulus)
    }

    /// Entries reduced mod a divisor of the modulus.
    pub fn reduce(&self, d: u64) -> ModMatrix {
        ModMatrix { n: self.n, modulus: d, data: self.data.iter().map(|v| v % d).collect() }
    }

    /// Same entries read modulo `m`; `m` must be at least every entry.
    pub fn recast(&self, m: u64) -> ModMatrix {
        ModMatrix { n: self.n, modulus: m, data: self.data.iter().map(|v| v % m).collect() }
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        self.mul_counted(other, &mut OpCount::default())
    }

    pub fn mul_counted(&self, other: &ModMatrix, ops: &mut OpCount) -> ModMatrix {
        let (n, m) = (self.n, self.modulus);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (t, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let src = &other.data[t * n..(t + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = add_mod(*d, mul_mod(a, b, m), m);
                }
            }
        }
        ops.scalar_muls += (n * n * n) as u64;
        ops.matrix_products += 1;
        ModMatrix { n, modulus: m, data: out }
    }

    pub fn scale(&self, c: u64) -> ModMatrix {
        let m = self.modulus;
        ModMatrix { n: self.n, modulus: m, data: self.data.iter().map(|&v| mul_mod(v, c, m)).collect() }
    }

    /// Left-to-right square-and-multiply.
    pub fn pow_counted(&self, exp: u128, ops: &mut OpCount) -> ModMatrix {
        if exp == 0 {
            return ModMatrix::identity(self.n, self.modulus);
        }
        let mut acc = self.clone();
        for bit in (0..127 - exp.leading_zeros()).rev() {
            acc = acc.mul_counted(&acc, ops);
            ops.squarings += 1;
            if (exp >> bit) & 1 == 1 {
                acc = acc.mul_counted(self, ops);
            }
        }
        acc
    }

    pub fn pow(&self, exp: u128) -> ModMatrix {
        self.pow_counted(exp, &mut OpCount::default())
    }

    /// Gauss-Jordan elimination choosing pivots that are units mod `p`. Over
    /// `Z_{p^k}` this succeeds exactly when the matrix is invertible.
    pub fn inverse_unit_pivot(&self, p: u64, ops: &mut OpCount) -> Option<ModMatrix> {
        let (n, m) = (self.n, self.modulus);
        let mut a = self.data.clone();
        let mut inv = ModMatrix::identity(n, m).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_multiple_of(p))?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let scale = inv_mod(a[col * n + col], m)?;
            for j in 0..n {
                a[col * n + j] = mul_mod(a[col * n + j], scale, m);
                inv[col * n + j] = mul_mod(inv[col * n + j], scale, m);
            }
            ops.scalar_muls += 2 * n as u64;
            for r in 0..n {
                let factor = a[r * n + col];
                if r == col || factor == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = sub_mod(a[r * n + j], mul_mod(factor, a[col * n + j], m), m);
                    inv[r * n + j] = sub_mod(inv[r * n + j], mul_mod(factor, inv[col * n + j], m), m);
                }
                ops.scalar_muls += 2 * n as u64;
            }
        }
        Some(ModMatrix { n, modulus: m, data: inv })
    }

    /// Solves `self * y = rhs` over `Z_m` for invertible `self`, one prime
    /// power at a time, recombining with the CRT.
    pub fn solve_crt(&self, factors: &[(u64, u32)], rhs: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus;
        let basis = CrtBasis::from_factors(m, factors);
        let mut out = vec![0u64; self.n];
        for c in basis.components() {
            let local = self.reduce(c.modulus);
            let inv = local.inverse_unit_pivot(c.prime, &mut OpCount::default())?;
            let e = c.idempotent(m);
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (j, &r) in rhs.iter().enumerate() {
                    acc = add_mod(acc, mul_mod(inv.get(i, j), r % c.modulus, c.modulus), c.modulus);
                }
                *o = add_mod(*o, mul_mod(e, acc, m), m);
            }
        }
        Some(out)
    }

    /// Coefficients `v` of `det(xI - A) = sum_j v[j] x^{n-j}` by Berkowitz's
    /// division-free algorithm.
    pub fn charpoly(&self) -> Vec<u64> {
        self.charpoly_counted(&mut OpCount::default())
    }

    pub fn charpoly_counted(&self, ops: &mut OpCount) -> Vec<u64> {
        let (n, m) = (self.n, self.modulus);
        if n == 0 {
            return vec![1 % m];
        }
        let mut v = vec![1 % m, neg_mod(self.get(0, 0), m)];
        for r in 1..n {
            // A_{r+1} = [[A_r, c], [row, a]]; Toeplitz column is
            // 1, -a, -row c, -row A_r c, ..., -row A_r^{r-1} c
            let mut col = vec![1 % m, neg_mod(self.get(r, r), m)];
            let mut c: Vec<u64> = (0..r).map(|i| self.get(i, r)).collect();
            for _ in 0..r {
                let dot = (0..r).fold(0, |acc, j| add_mod(acc, mul_mod(self.get(r, j), c[j], m), m));
                col.push(neg_mod(dot, m));
                c = (0..r)
                    .map(|i| (0..r).fold(0, |acc, j| add_mod(acc, mul_mod(self.get(i, j), c[j], m), m)))
                    .collect();
                ops.scalar_muls += (r + r * r) as u64;
            }
            let mut next = vec![0u64; r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = 0;
                for (j, &vj) in v.iter().enumerate() {
                    if i >= j {
                        acc = add_mod(acc, mul_mod(col[i - j], vj, m), m);
                    }
                }
                *slot = acc;
            }
            ops.scalar_muls += ((r + 2) * (r + 1)) as u64;
            v = next;
        }
        v
    }

    pub fn det(&self) -> u64 {
        self.det_counted(&mut OpCount::default())
    }

    pub fn det_counted(&self, ops: &mut OpCount) -> u64 {
        let v = self.charpoly_counted(ops);
        let last = v[self.n];
        if self.n.is_multiple_of(2) {
            last
        } else {
            neg_mod(last, self.modulus)
        }
    }

    /// `adj(A) = (-1)^{n+1} sum_{j<n} v[j] A^{n-1-j}` from Cayley-Hamilton,
    /// evaluated by Horner's rule. Also returns `det(A)`.
    pub fn adjugate_counted(&self, ops: &mut OpCount) -> (ModMatrix, u64) {
        let (n, m) = (self.n, self.modulus);
        let v = self.charpoly_counted(ops);
        let mut b = ModMatrix::identity(n, m).scale(v[0]);
        for &vj in &v[1..n] {
            b = b.mul_counted(self, ops);
            for i in 0..n {
                b.data[i * n + i] = add_mod(b.data[i * n + i], vj, m);
            }
        }
        let det = if n % 2 == 0 { v[n] } else { neg_mod(v[n], m) };
        if n % 2 == 0 {
            b = b.scale(m - 1);
        }
        (b, det)
    }

    pub fn adjugate(&self) -> ModMatrix {
        self.adjugate_counted(&mut OpCount::default()).0
    }

    /// Laplace expansion along the first row; for cross-checks with `n <= 4`.
    pub fn det_cofactor(&self) -> u64 {
        let idx: Vec<usize> = (0..self.n).collect();
        cofactor_det(self, &idx, &idx)
    }

    /// Transposed cofactor matrix by Laplace expansion.
    pub fn adjugate_cofactor(&self) -> ModMatrix {
        let (n, m) = (self.n, self.modulus);
        let mut out = ModMatrix::zero(n, m);
        if n == 1 {
            out.data[0] = 1 % m;
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = cofactor_det(self, &rows, &cols);
                out.data[i * n + j] = if (i + j) % 2 == 0 { minor } else { neg_mod(minor, m) };
            }
        }
        out
    }
}

fn cofactor_det(a: &ModMatrix, rows: &[usize], cols: &[usize]) -> u64 {
    let m = a.modulus;
    match rows.len() {
        0 => 1 % m,
        1 => a.get(rows[0], cols[0]),
        _ => {
            let mut acc = 0;
            for (k, &c) in cols.iter().enumerate() {
                let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = mul_mod(a.get(rows[0], c), cofactor_det(a, &rows[1..], &sub), m);
                acc = if k % 2 == 0 { add_mod(acc, term, m) } else { sub_mod(acc, term, m) };
            }
            acc
        }
    }
}

/// Inverse as `det^{-1} adj(A)` over `Z_{p^k}`.
pub fn adjugate_inverse(a: &ModMatrix, ops: &mut OpCount) -> Option<ModMatrix> {
    let (adj, det) = a.adjugate_counted(ops);
    let d = inv_mod(det, a.modulus)?;
    ops.scalar_muls += (a.n * a.n) as u64;
    Some(adj.scale(d))
}

/// Unit-pivot Gauss-Jordan directly over `Z_{p^k}`.
pub fn gauss_jordan_inverse(a: &ModMatrix, p: u64, ops: &mut OpCount) -> Option<ModMatrix> {
    a.inverse_unit_pivot(p, ops)
}

/// Inverse mod `p`, lifted to `Z_{p^k}` as `g (a g)^{p^{k-1} - 1}`.
pub fn lift_inverse_kernel(a: &ModMatrix, p: u64, k: u32, ops: &mut OpCount) -> Option<ModMatrix> {
    let g = a.reduce(p).inverse_unit_pivot(p, ops)?.recast(a.modulus);
    if k == 1 {
        return Some(g);
    }
    let s = (p as u128).pow(k - 1);
    let ag = a.mul_counted(&g, ops);
    let lifted = ag.pow_counted(s - 1, ops);
    Some(g.mul_counted(&lifted, ops))
}

/// `(n, base)` of a matrix ring.
fn matrix_shape(ring: &Ring) -> Result<(usize, &Arc<Ring>)> {
    match ring.kind() {
        RingKind::Matrix { n, base } => Ok((*n, base)),
        _ => bail!(ShapeMismatch, "{ring} is not a matrix ring"),
    }
}

/// `(n, m)` for a matrix ring over `Z_m`.
fn zmod_matrix_shape(ring: &Ring) -> Result<(usize, u64)> {
    let (n, base) = matrix_shape(ring)?;
    if !matches!(base.kind(), RingKind::ZMod) {
        bail!(Unsupported, "expected a matrix ring over Z_m, got {ring}");
    }
    Ok((n, ring.modulus()))
}

pub(crate) fn to_mod_matrix(f: &Element) -> Result<ModMatrix> {
    let (n, m) = zmod_matrix_shape(f.ring())?;
    Ok(ModMatrix::from_flat(n, m, f.coords().to_vec()))
}

pub(crate) fn from_mod_matrix(ring: &Arc<Ring>, a: &ModMatrix) -> Result<Element> {
    Element::new(ring, a.as_slice().to_vec())
}

/// Determinant over a commutative base: Laplace expansion for `n <= 4`,
/// Berkowitz otherwise.
pub fn mat_det(f: &Element) -> Result<Element> {
    let (n, base) = matrix_shape(f.ring())?;
    if !base.is_commutative() {
        bail!(Unsupported, "determinant needs a commutative base, got {base}");
    }
    let w = base.coord_len();
    let entries: Vec<Element> = f.coords().chunks(w).map(|c| Element::new(base, c.to_vec())).collect::<Result<_>>()?;
    let get = |i: usize, j: usize| &entries[i * n + j];
    if n <= 4 {
        let idx: Vec<usize> = (0..n).collect();
        return generic_cofactor(base, &get, &idx, &idx);
    }
    generic_berkowitz(base, n, &get)
}

fn generic_cofactor<'a>(
    base: &Arc<Ring>,
    get: &impl Fn(usize, usize) -> &'a Element,
    rows: &[usize],
    cols: &[usize],
) -> Result<Element> {
    if rows.is_empty() {
        return Ok(Element::one(base));
    }
    let mut acc = Element::zero(base);
    for (k, &c) in cols.iter().enumerate() {
        let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = get(rows[0], c).mul(&generic_cofactor(base, get, &rows[1..], &sub)?)?;
        acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

fn generic_berkowitz<'a>(base: &Arc<Ring>, n: usize, get: &impl Fn(usize, usize) -> &'a Element) -> Result<Element> {
    let mut v = vec![Element::one(base), get(0, 0).neg()];
    for r in 1..n {
        let mut col = vec![Element::one(base), get(r, r).neg()];
        let mut c: Vec<Element> = (0..r).map(|i| get(i, r).clone()).collect();
        for _ in 0..r {
            let mut dot = Element::zero(base);
            for (j, cj) in c.iter().enumerate() {
                dot = dot.add(&get(r, j).mul(cj)?)?;
            }
            col.push(dot.neg());
            let mut next = Vec::with_capacity(r);
            for i in 0..r {
                let mut acc = Element::zero(base);
                for (j, cj) in c.iter().enumerate() {
                    acc = acc.add(&get(i, j).mul(cj)?)?;
                }
                next.push(acc);
            }
            c = next;
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = Element::zero(base);
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                acc = acc.add(&col[i - j].mul(vj)?)?;
            }
            next.push(acc);
        }
        v = next;
    }
    let last = v.pop().expect("n + 1 coefficients");
    Ok(if n.is_multiple_of(2) { last } else { last.neg() })
}

/// Inverse over a prime field `Z_p` by Gauss-Jordan, cross-checked against
/// `det^{-1} adj` for `n <= 3`.
pub fn invert_mod_prime(f: &Element) -> Result<Element> {
    let (n, p) = zmod_matrix_shape(f.ring())?;
    if !arith::is_prime(p) {
        bail!(Precondition, "invert_mod_prime needs a prime modulus, got {p}");
    }
    let a = to_mod_matrix(f)?;
    let Some(inv) = a.inverse_unit_pivot(p, &mut OpCount::default()) else {
        bail!(NotAUnit, "matrix is singular mod {p}");
    };
    if n <= 3 {
        let d = inv_mod(a.det_cofactor(), p)
            .ok_or_else(|| Error::Internal("elimination succeeded on a singular matrix".into()))?;
        if a.adjugate_cofactor().scale(d) != inv {
            bail!(Internal, "Gauss-Jordan and adjugate inverses differ mod {p}");
        }
    }
    from_mod_matrix(f.ring(), &inv)
}

/// Inversion over `Z_{p^k}` in three steps: `det(f mod p) != 0`, invert mod
/// `p`, lift along the chain `<p> ⊃ <p^2> ⊃ ... ⊃ 0`.
pub fn invert_matrix_prime_power(f: &Element) -> Result<UnitCertificate> {
    let (n, m) = zmod_matrix_shape(f.ring())?;
    let Some((p, k)) = arith::prime_power(m) else {
        bail!(Precondition, "modulus {m} is not a prime power");
    };
    let ring = f.ring();
    let chain = prime_chain(ring, p, k)?;
    let residue_ring = Ring::matrix(n, Ring::zmod(p)?)?;
    let fbar = f.recast(&residue_ring)?;
    if to_mod_matrix(&fbar)?.det() == 0 {
        bail!(NotAUnit, "det of the matrix is 0 mod {p}");
    }
    let gbar = invert_mod_prime(&fbar)?;
    lift::lift_inverse(f, &gbar, &chain)
}

/// `<p>`-power chain of `Z_{p^k}` promoted to `ring`; trivial when `k = 1`.
pub(crate) fn prime_chain(ring: &Arc<Ring>, p: u64, k: u32) -> Result<CncChain> {
    if k == 1 {
        return Ok(CncChain::trivial(ring));
    }
    let coeff = ring.coefficient_ring();
    let scalar = CncChain::power(&coeff, &Element::from_int(&coeff, p as i128), k, p)?;
    scalar.promote(ring)
}

/// Inverse over `Z_m` assembled from per-prime-power inverses.
#[derive(Debug, Clone)]
pub struct CrtInverse {
    pub inverse: Element,
    pub components: Vec<UnitCertificate>,
}

/// `Psi^{-1}` of the componentwise inverses `f_i^{-1}` over `Z_{p_i^{r_i}}`.
pub fn invert_matrix_crt(f: &Element, basis: &CrtBasis) -> Result<CrtInverse> {
    zmod_matrix_shape(f.ring())?;
    let parts = basis.split(f)?;
    let mut components = Vec::with_capacity(parts.len());
    for (part, c) in parts.iter().zip(basis.components()) {
        match invert_matrix_prime_power(part) {
            Ok(cert) => components.push(cert),
            Err(Error::NotAUnit(why)) => {
                bail!(NotAUnit, "component mod {}^{} is singular: {why}", c.prime, c.exponent)
            }
            Err(e) => return Err(e),
        }
    }
    let inverses: Vec<Element> = components.iter().map(|c| c.inverse().clone()).collect();
    let inverse = basis.combine_into(f.ring(), &inverses)?;
    let one = Element::one(f.ring());
    if f.mul(&inverse)? != one || inverse.mul(f)? != one {
        bail!(Internal, "CRT-assembled inverse fails f * f^-1 = 1");
    }
    Ok(CrtInverse { inverse, components })
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn general_linear_order(n: usize, q: u128) -> Result<u128> {
    let n32 = u32::try_from(n).map_err(|_| Error::Overflow("dimension".to_string()))?;
    let qn = arith::checked_pow(q, n32)?;
    (0..n32).try_fold(1u128, |acc, i| arith::checked_mul(acc, qn - arith::checked_pow(q, i)?))
}

/// `|M_n(R)^*| = |M_n(R/N_1)^*| |N_1|^{n^2}`, with the quotient count from
/// `|GL_n(F_q)|` when `R/N_1` is a field and by enumeration otherwise.
pub fn count_matrix_units(ring: &Arc<Ring>, chain: &CncChain) -> Result<u128> {
    let (n, _) = matrix_shape(ring)?;
    let first = chain.first().promote(ring)?;
    let ideal_size = first.size().ok_or_else(|| Error::Overflow("ideal size does not fit in 128 bits".to_string()))?;
    if first.is_zero() {
        return quotient_matrix_units(n, ring);
    }
    let quotient = first.quotient_ring()?;
    let quotient_units = quotient_matrix_units(n, &quotient)?;
    arith::checked_mul(quotient_units, ideal_size)
}

fn quotient_matrix_units(n: usize, quotient: &Arc<Ring>) -> Result<u128> {
    let (_, qbase) = matrix_shape(quotient)?;
    if let Some(q) = qbase.field_order() {
        return general_linear_order(n, q);
    }
    oracle::EnumerableRing::new(quotient.clone())?.count_units()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m27() -> Arc<Ring> {
        Ring::matrix(3, Ring::zmod(27).unwrap()).unwrap()
    }

    const F: [u64; 9] = [19, 12, 22, 6, 5, 24, 0, 16, 11];

    #[test]
    fn berkowitz_matches_cofactor() {
        let a = ModMatrix::from_flat(3, 27, F.to_vec());
        assert_eq!(a.det(), a.det_cofactor());
        assert_eq!(a.adjugate(), a.adjugate_cofactor());
        let b = ModMatrix::from_rows(&[vec![1, 2, 3, 4], vec![0, 5, 6, 7], vec![8, 9, 1, 2], vec![3, 4, 5, 0]], 101)
            .unwrap();
        assert_eq!(b.det(), b.det_cofactor());
        assert_eq!(b.adjugate(), b.adjugate_cofactor());
        let prod = b.mul(&b.adjugate());
        assert_eq!(prod, ModMatrix::identity(4, 101).scale(b.det()));
    }

    #[test]
    fn three_kernels_agree() {
        let a = ModMatrix::from_flat(3, 27, F.to_vec());
        let mut ops = OpCount::default();
        let x = adjugate_inverse(&a, &mut ops).unwrap();
        let y = gauss_jordan_inverse(&a, 3, &mut ops).unwrap();
        let z = lift_inverse_kernel(&a, 3, 3, &mut ops).unwrap();
        assert_eq!(x, y);
        assert_eq!(y, z);
        assert_eq!(x.as_slice(), &[13, 22, 7, 15, 2, 0, 15, 2, 5]);
    }

    #[test]
    fn squaring_count() {
        let a = ModMatrix::identity(2, 1 << 16);
        let mut ops = OpCount::default();
        a.pow_counted((1u128 << 15) - 1, &mut ops);
        assert_eq!(ops.squarings, 14);
        assert_eq!(ops.matrix_products, 28);
    }

    #[test]
    fn worked_example() {
        let f = Element::new(&m27(), F.to_vec()).unwrap();
        let cert = invert_matrix_prime_power(&f).unwrap();
        assert_eq!(cert.inverse().coords(), &[13, 22, 7, 15, 2, 0, 15, 2, 5]);
        assert_eq!(cert.lifted_power().coords(), &[19, 21, 18, 21, 1, 0, 0, 0, 16]);
        assert_eq!(cert.exponent(), 9);
    }

    #[test]
    fn determinant_examples() {
        let z3 = Ring::matrix(3, Ring::zmod(3).unwrap()).unwrap();
        let fbar = Element::new(&z3, vec![1, 0, 1, 0, 2, 0, 0, 1, 2]).unwrap();
        assert!(mat_det(&fbar).unwrap().is_one());
        let inv = invert_mod_prime(&fbar).unwrap();
        assert_eq!(inv.coords(), &[1, 1, 1, 0, 2, 0, 0, 2, 2]);
        let z4 = Ring::matrix(2, Ring::zmod(4).unwrap()).unwrap();
        let t = Element::new(&z4, vec![1, 2, 0, 1]).unwrap();
        assert!(mat_det(&t).unwrap().is_one());
        assert_eq!(invert_matrix_prime_power(&t).unwrap().inverse().coords(), &[1, 2, 0, 1]);
        let swap = Element::new(&Ring::matrix(2, Ring::zmod(2).unwrap()).unwrap(), vec![0, 1, 1, 0]).unwrap();
        assert_eq!(invert_mod_prime(&swap).unwrap(), swap);
    }

    #[test]
    fn large_determinant_uses_berkowitz() {
        let r = Ring::matrix(5, Ring::gaussian(3, 2).unwrap()).unwrap();
        let coords: Vec<u64> = (0..50).map(|i| (i * 7 + 3) % 9).collect();
        let f = Element::new(&r, coords).unwrap();
        let d = mat_det(&f).unwrap();
        // det(f) is a unit exactly when f is
        assert_eq!(d.inverse().is_some(), f.inverse().is_some());
    }

    #[test]
    fn crt_examples() {
        let r6 = Ring::matrix(2, Ring::zmod(6).unwrap()).unwrap();
        let f = Element::new(&r6, vec![1, 0, 0, 5]).unwrap();
        let out = invert_matrix_crt(&f, &CrtBasis::new(6).unwrap()).unwrap();
        assert_eq!(out.inverse, f);
        let r12 = Ring::matrix(2, Ring::zmod(12).unwrap()).unwrap();
        let f = Element::new(&r12, vec![1, 2, 0, 1]).unwrap();
        let out = invert_matrix_crt(&f, &CrtBasis::new(12).unwrap()).unwrap();
        assert_eq!(out.inverse.coords(), &[1, 10, 0, 1]);
        let singular = Element::new(&r12, vec![3, 0, 0, 1]).unwrap();
        let err = invert_matrix_crt(&singular, &CrtBasis::new(12).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotAUnit(ref why) if why.contains("3^1")), "{err}");
    }

    #[test]
    fn unit_counts() {
        let gl = |n, q| general_linear_order(n, q).unwrap();
        assert_eq!((gl(2, 2), gl(2, 3)), (6, 48));
        let z4 = Ring::zmod(4).unwrap();
        let chain = CncChain::radical(&z4).unwrap();
        let m2 = Ring::matrix(2, z4).unwrap();
        assert_eq!(count_matrix_units(&m2, &chain).unwrap(), 96);
        let z9 = Ring::zmod(9).unwrap();
        let chain = CncChain::radical(&z9).unwrap();
        assert_eq!(count_matrix_units(&Ring::matrix(2, z9).unwrap(), &chain).unwrap(), 3888);
        let z27 = Ring::zmod(27).unwrap();
        let chain = CncChain::radical(&z27).unwrap();
        assert_eq!(count_matrix_units(&Ring::matrix(1, z27).unwrap(), &chain).unwrap(), 18);
    }
}
