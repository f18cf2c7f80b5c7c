//! Principal power ideals and ideal chains with their nilpotency and
//! characteristic conditions.
//!
//! Every supported ideal is `<a>^e` for a generator `a` of the coefficient
//! ring, promoted structurally to matrix and group rings (`M_n(N)`, `N G`).
//! Such an ideal always equals `d R` for a divisor `d` of the coefficient
//! modulus, which turns containment, powers and quotients into divisibility.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{self, gcd};
use crate::error::{bail, Error, Result};
use crate::oracle;
use crate::ring::{same_ring, Element, Ring, RingKind};

/// Ideal sizes up to which [`CncChain::validate`] also checks membership by
/// enumeration.
pub const EXHAUSTIVE_CHECK_CAP: u128 = 100_000;

/// `<generator>^exponent` inside `ring`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<Ring>,
    generator: Element,
    exponent: u32,
    divisor: u64,
}

impl Ideal {
    /// `generator` must belong to `ring.coefficient_ring()`.
    pub fn power(ring: &Arc<Ring>, generator: Element, exponent: u32) -> Result<Ideal> {
        if exponent == 0 {
            bail!(InvalidChain, "ideal exponent must be at least 1");
        }
        let coefficients = ring.coefficient_ring();
        if !same_ring(generator.ring(), &coefficients) {
            bail!(ShapeMismatch, "ideal generator must lie in {coefficients}");
        }
        let m = ring.modulus();
        let base = generator_divisor(&generator)?;
        let mut divisor = base;
        for _ in 1..exponent {
            let next = gcd(((divisor as u128 * base as u128) % m as u128) as u64, m);
            if next == divisor {
                break;
            }
            divisor = next;
        }
        Ok(Ideal { ring: ring.clone(), generator, exponent, divisor })
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        let generator = Element::zero(&ring.coefficient_ring());
        Ideal { ring: ring.clone(), generator, exponent: 1, divisor: ring.modulus() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// The `d` with `self = d R`.
    pub fn divisor(&self) -> u64 {
        self.divisor
    }

    pub fn is_zero(&self) -> bool {
        self.divisor == self.ring.modulus()
    }

    /// Some power of the ideal vanishes.
    pub fn is_nilpotent(&self) -> bool {
        self.ring.modulus_factors().iter().all(|(p, _)| self.divisor.is_multiple_of(*p))
    }

    /// Same generator and exponent inside a ring with the same coefficients.
    pub fn promote(&self, ring: &Arc<Ring>) -> Result<Ideal> {
        Ideal::power(ring, self.generator.clone(), self.exponent)
    }

    pub fn contains(&self, x: &Element) -> bool {
        same_ring(x.ring(), &self.ring) && x.coords().iter().all(|c| c % self.divisor == 0)
    }

    /// `|N| = (q / d)^coords`.
    pub fn size(&self) -> Option<u128> {
        let per = (self.ring.modulus() / self.divisor) as u128;
        per.checked_pow(u32::try_from(self.ring.coord_len()).ok()?)
    }

    pub fn quotient_ring(&self) -> Result<Arc<Ring>> {
        self.ring.with_modulus(self.divisor)
    }

    /// Image of `x` under `R -> R/N`.
    pub fn residue(&self, x: &Element) -> Result<Element> {
        if !same_ring(x.ring(), &self.ring) {
            bail!(ShapeMismatch, "element does not belong to {}", self.ring);
        }
        x.recast(&self.quotient_ring()?)
    }

    /// Representative in `R` of a residue, taking every coordinate in `[0, d)`.
    pub fn lift(&self, residue: &Element) -> Result<Element> {
        if residue.ring().modulus() != self.divisor {
            bail!(ShapeMismatch, "residue is not an element of R/N");
        }
        residue.recast(&self.ring)
    }

    /// Every element of the ideal, in lexicographic coordinate order.
    pub fn elements(&self) -> IdealElements {
        IdealElements {
            ring: self.ring.clone(),
            step: self.divisor,
            steps: self.ring.modulus() / self.divisor,
            current: Some(vec![0; self.ring.coord_len()]),
        }
    }
}

/// Image of `x` in the quotient by `ideal`.
pub fn residue_map(x: &Element, ideal: &Ideal) -> Result<Element> {
    ideal.residue(x)
}

/// `d` with `<a> = d R` for a coefficient-ring element `a`.
fn generator_divisor(a: &Element) -> Result<u64> {
    let ring = a.ring();
    let m = ring.modulus();
    match ring.kind() {
        RingKind::ZMod => Ok(gcd(a.coords()[0], m)),
        RingKind::Galois { .. } => Ok(valuation_divisor(a.coords(), m)),
        RingKind::Gaussian { p, .. } if p % 4 == 3 => Ok(valuation_divisor(a.coords(), m)),
        RingKind::Gaussian { .. } => {
            if a.coords()[1] != 0 {
                bail!(Unsupported, "non-scalar generators in Z_{m}[i] with p = 1 mod 4 are not principal in d R form");
            }
            Ok(gcd(a.coords()[0], m))
        }
        _ => bail!(ShapeMismatch, "generator must be a scalar ring element"),
    }
}

/// In a chain ring over `Z_{p^k}`, `<a> = p^v R` where `v` is the smallest
/// p-adic valuation among the coordinates, which is what the gcd computes.
fn valuation_divisor(coords: &[u64], m: u64) -> u64 {
    coords.iter().fold(m, |acc, &c| gcd(acc, c))
}

pub struct IdealElements {
    ring: Arc<Ring>,
    step: u64,
    steps: u64,
    current: Option<Vec<u64>>,
}

impl Iterator for IdealElements {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut done = true;
        for c in next.iter_mut().rev() {
            let idx = *c / self.step + 1;
            if idx < self.steps {
                *c = idx * self.step;
                done = false;
                break;
            }
            *c = 0;
        }
        if !done {
            self.current = Some(next);
        }
        Some(Element::new(&self.ring, cur).expect("multiples of the divisor are canonical"))
    }
}

/// Lifting exponent `S = s_1 s_2 ... s_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftingExponent(pub u128);

impl LiftingExponent {
    pub fn value(self) -> u128 {
        self.0
    }
}

/// Ideals `N_1 ⊇ N_2 ⊇ ... ⊇ N_k = 0` with per-step nilpotency indices `t`
/// and characteristics `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CncChain {
    ideals: Vec<Ideal>,
    t: Vec<u32>,
    s: Vec<u64>,
}

impl CncChain {
    /// Checks shapes only; the three conditions are reported by [`CncChain::validate`].
    pub fn new(ideals: Vec<Ideal>, t: Vec<u32>, s: Vec<u64>) -> Result<CncChain> {
        let Some(first) = ideals.first() else {
            bail!(InvalidChain, "a chain needs at least one ideal");
        };
        if t.len() + 1 != ideals.len() || s.len() + 1 != ideals.len() {
            bail!(
                InvalidChain,
                "{} ideals need {} nilpotency indices and characteristics, got {} and {}",
                ideals.len(),
                ideals.len() - 1,
                t.len(),
                s.len()
            );
        }
        if ideals.iter().any(|i| !same_ring(i.ring(), first.ring())) {
            bail!(InvalidChain, "all ideals of a chain must live in the same ring");
        }
        Ok(CncChain { ideals, t, s })
    }

    /// `{<a>, <a>^2, ..., <a>^k}` with `t_i = 2` and `s_i = s`, for `a` of
    /// nilpotency index exactly `k` and `s` the characteristic of `R/<a>`.
    pub fn power(ring: &Arc<Ring>, generator: &Element, k: u32, s: u64) -> Result<CncChain> {
        if k == 0 {
            bail!(InvalidChain, "nilpotency index must be at least 1");
        }
        if !generator.pow(k as u128).is_zero() || generator.pow(k as u128 - 1).is_zero() {
            bail!(InvalidChain, "{generator} is not nilpotent of index {k}");
        }
        let ideals = (1..=k).map(|e| Ideal::power(ring, generator.clone(), e)).collect::<Result<Vec<_>>>()?;
        let steps = (k - 1) as usize;
        let chain = CncChain::new(ideals, vec![2; steps], vec![s; steps])?;
        chain.ensure_valid()?;
        Ok(chain)
    }

    /// The one-ideal chain `{0}`; lifting through it is plain inversion.
    pub fn trivial(ring: &Arc<Ring>) -> CncChain {
        CncChain { ideals: vec![Ideal::zero(ring)], t: Vec::new(), s: Vec::new() }
    }

    /// Chain along the radical of the coefficient modulus: `a = p_1...p_j`
    /// has index `max r_i` and `R/aR` has characteristic `a`.
    pub fn radical(ring: &Arc<Ring>) -> Result<CncChain> {
        let factors = ring.modulus_factors();
        let a: u64 = factors.iter().map(|(p, _)| p).product();
        let k = factors.iter().map(|(_, r)| *r).max().unwrap_or(1);
        let coefficients = ring.coefficient_ring();
        CncChain::power(ring, &Element::from_int(&coefficients, a as i128), k, a)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.ideals[0].ring()
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn first(&self) -> &Ideal {
        &self.ideals[0]
    }

    pub fn nilpotency_indices(&self) -> &[u32] {
        &self.t
    }

    pub fn characteristics(&self) -> &[u64] {
        &self.s
    }

    /// Number of ideals `k`.
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// The same chain inside a matrix or group ring over the same coefficients.
    pub fn promote(&self, ring: &Arc<Ring>) -> Result<CncChain> {
        let ideals = self.ideals.iter().map(|i| i.promote(ring)).collect::<Result<Vec<_>>>()?;
        CncChain::new(ideals, self.t.clone(), self.s.clone())
    }

    pub fn lifting_exponent(&self) -> Result<LiftingExponent> {
        self.s.iter().try_fold(1u128, |acc, &s| arith::checked_mul(acc, s as u128)).map(LiftingExponent)
    }

    /// Symbolic check of the three conditions.
    pub fn structural_report(&self) -> ValidationReport {
        let m = self.ring().modulus();
        let d: Vec<u64> = self.ideals.iter().map(Ideal::divisor).collect();
        let mut report = ValidationReport::default();
        if *d.last().unwrap() != m {
            report.chain.fail(String::from("last ideal is not zero"));
        }
        for i in 0..self.t.len() {
            if !d[i + 1].is_multiple_of(d[i]) {
                report.chain.fail(alloc::format!("N_{} is not contained in N_{}", i + 2, i + 1));
            }
            let t = self.t[i];
            if t < 2 {
                report.nilpotency.fail(alloc::format!("t_{} = {t} is below 2", i + 1));
            } else {
                let mut power = 1u64;
                for _ in 0..t {
                    power = gcd(((power as u128 * d[i] as u128) % m as u128) as u64, m);
                }
                if !power.is_multiple_of(d[i + 1]) {
                    report.nilpotency.fail(alloc::format!("N_{}^{t} is not contained in N_{}", i + 1, i + 2));
                }
            }
            let s = self.s[i];
            if s == 0 {
                report.characteristic.fail(alloc::format!("s_{} must be at least 1", i + 1));
                continue;
            }
            let scaled = gcd(((s as u128 % m as u128) * d[i] as u128 % m as u128) as u64, m);
            if !scaled.is_multiple_of(d[i + 1]) {
                report.characteristic.fail(alloc::format!("{s} N_{} is not contained in N_{}", i + 1, i + 2));
            }
            if let Some((p, _)) = arith::factorize(s).into_iter().find(|&(p, _)| p < t as u64) {
                report.characteristic.fail(alloc::format!(
                    "prime factor {p} of s_{} is below t_{} = {t}",
                    i + 1,
                    i + 1
                ));
            }
        }
        report
    }

    /// Full report: symbolic checks, plus exhaustive membership checks when
    /// the ring has at most [`EXHAUSTIVE_CHECK_CAP`] elements.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with_cap(EXHAUSTIVE_CHECK_CAP)
    }

    pub fn validate_with_cap(&self, cap: u128) -> ValidationReport {
        let mut report = self.structural_report();
        if let Ok(exhaustive) = oracle::check_chain_exhaustively(self, cap) {
            report.chain.exhaustive = Some(exhaustive.chain);
            report.nilpotency.exhaustive = Some(exhaustive.nilpotency);
            report.characteristic.exhaustive = Some(exhaustive.characteristic);
            for c in [&mut report.chain, &mut report.nilpotency, &mut report.characteristic] {
                if c.exhaustive == Some(false) && c.structural {
                    c.failures.push(String::from("exhaustive check disagrees with the symbolic check"));
                }
            }
        }
        report
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.structural_report();
        if report.passed() {
            Ok(())
        } else {
            Err(Error::InvalidChain(report.failures().join("; ")))
        }
    }
}

/// Outcome for one of the three CNC conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub structural: bool,
    pub exhaustive: Option<bool>,
    pub failures: Vec<String>,
}

impl Default for ConditionResult {
    fn default() -> Self {
        ConditionResult { structural: true, exhaustive: None, failures: Vec::new() }
    }
}

impl ConditionResult {
    fn fail(&mut self, why: String) {
        self.structural = false;
        self.failures.push(why);
    }

    pub fn passed(&self) -> bool {
        self.structural && self.exhaustive.unwrap_or(true)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub chain: ConditionResult,
    pub nilpotency: ConditionResult,
    pub characteristic: ConditionResult,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.chain.passed() && self.nilpotency.passed() && self.characteristic.passed()
    }

    pub fn failures(&self) -> Vec<String> {
        [&self.chain, &self.nilpotency, &self.characteristic].iter().flat_map(|c| c.failures.iter().cloned()).collect()
    }
}

/// Reports the chain, nilpotency and characteristic conditions. Never fails.
pub fn validate_cnc(chain: &CncChain) -> ValidationReport {
    chain.validate()
}

pub fn lifting_exponent(chain: &CncChain) -> Result<LiftingExponent> {
    chain.lifting_exponent()
}

/// `{<a>, ..., <a>^k}` with `t_i = 2`, `s_i = s`.
pub fn make_power_chain(ring: &Arc<Ring>, generator: &Element, k: u32, s: u64) -> Result<CncChain> {
    CncChain::power(ring, generator, k, s)
}
