use std::sync::Arc;

use proptest::prelude::*;
use unitlift_core::matrix::ModMatrix;
use unitlift_core::oracle::EnumerableRing;
use unitlift_core::{
    crt_combine, crt_split, invert_matrix_crt, invert_matrix_prime_power, invert_zmg_crt, invert_zmg_radical,
    lifting_exponent, mat_det, power_reduction_witness, residue_map, validate_cnc, CncChain, CrtBasis, Element,
    FiniteGroup, Ideal, Ring,
};

fn z(m: u64) -> Arc<Ring> {
    Ring::zmod(m).unwrap()
}

fn sample_rings() -> Vec<Arc<Ring>> {
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let c2c3 =
        Arc::new(FiniteGroup::product_of(&[FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(3).unwrap()]).unwrap());
    vec![
        z(12),
        z(27),
        Ring::gaussian(3, 2).unwrap(),
        Ring::gaussian(5, 1).unwrap(),
        Ring::galois(2, 3, &[1, 1, 0, 1]).unwrap(),
        Ring::galois(3, 2, &[2, 2, 1]).unwrap(),
        Ring::matrix(3, z(10)).unwrap(),
        Ring::matrix(2, Ring::gaussian(3, 2).unwrap()).unwrap(),
        Ring::group_ring(s3.clone(), z(9)).unwrap(),
        Ring::group_ring(c2c3, z(4)).unwrap(),
        Ring::group_ring(s3, Ring::matrix(2, z(9)).unwrap()).unwrap(),
        Ring::matrix(2, Ring::group_ring(Arc::new(FiniteGroup::cyclic(3).unwrap()), z(4)).unwrap()).unwrap(),
    ]
}

/// Strategy for an element of `ring` from raw `u64` draws.
fn element(ring: Arc<Ring>) -> impl Strategy<Value = Element> {
    let (len, m) = (ring.coord_len(), ring.modulus());
    prop::collection::vec(0..m, len).prop_map(move |c| Element::new(&ring, c).unwrap())
}

fn ring_and_triple() -> impl Strategy<Value = (Element, Element, Element)> {
    (0..sample_rings().len()).prop_flat_map(|i| {
        let ring = sample_rings()[i].clone();
        (element(ring.clone()), element(ring.clone()), element(ring))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms((a, b, c) in ring_and_triple()) {
        let ring = a.ring().clone();
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(b.add(&c).unwrap().mul(&a).unwrap(), b.mul(&a).unwrap().add(&c.mul(&a).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&Element::one(&ring)).unwrap(), a.clone());
        prop_assert_eq!(Element::one(&ring).mul(&a).unwrap(), a.clone());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        if ring.is_commutative() {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }
    }

    #[test]
    fn residue_map_is_a_homomorphism((a, b, _) in ring_and_triple(), pick in 0usize..4) {
        let ring = a.ring().clone();
        let factors = ring.modulus_factors();
        let (p, _) = factors[pick % factors.len()];
        let coefficients = ring.coefficient_ring();
        let ideal = Ideal::power(&ring, Element::from_int(&coefficients, p as i128), 1).unwrap();
        let r = |x: &Element| residue_map(x, &ideal).unwrap();
        prop_assert_eq!(r(&a.mul(&b).unwrap()), r(&a).mul(&r(&b)).unwrap());
        prop_assert_eq!(r(&a.add(&b).unwrap()), r(&a).add(&r(&b)).unwrap());
        prop_assert!(r(&Element::one(&ring)).is_one());
    }

    #[test]
    fn inverses_are_two_sided((a, _, _) in ring_and_triple()) {
        if let Some(inv) = a.inverse() {
            prop_assert!(a.mul(&inv).unwrap().is_one());
            prop_assert!(inv.mul(&a).unwrap().is_one());
        }
    }

    #[test]
    fn crt_split_is_a_multiplicative_bijection(m in 2u64..10_000, x in any::<u64>(), y in any::<u64>()) {
        let ring = z(m);
        let basis = CrtBasis::new(m).unwrap();
        let (x, y) = (Element::from_int(&ring, (x % m) as i128), Element::from_int(&ring, (y % m) as i128));
        let sx = crt_split(&x, &basis).unwrap();
        prop_assert_eq!(crt_combine(&sx, &basis).unwrap(), x.clone());
        let sy = crt_split(&y, &basis).unwrap();
        let sxy = crt_split(&x.mul(&y).unwrap(), &basis).unwrap();
        for ((a, b), ab) in sx.iter().zip(&sy).zip(&sxy) {
            prop_assert_eq!(&a.mul(b).unwrap(), ab);
        }
        let total: u64 = basis.components().iter().map(|c| c.idempotent(m)).sum::<u64>() % m;
        prop_assert_eq!(total, 1 % m);
    }

    #[test]
    fn psi_is_multiplicative_on_matrices(m in prop::sample::select(vec![6u64, 12]), seed in any::<[u64; 8]>()) {
        let ring = Ring::matrix(2, z(m)).unwrap();
        let f = Element::new(&ring, seed[..4].iter().map(|v| v % m).collect()).unwrap();
        let g = Element::new(&ring, seed[4..].iter().map(|v| v % m).collect()).unwrap();
        let basis = CrtBasis::new(m).unwrap();
        let (sf, sg) = (crt_split(&f, &basis).unwrap(), crt_split(&g, &basis).unwrap());
        let sfg = crt_split(&f.mul(&g).unwrap(), &basis).unwrap();
        for ((a, b), ab) in sf.iter().zip(&sg).zip(&sfg) {
            prop_assert_eq!(&a.mul(b).unwrap(), ab);
        }
        prop_assert_eq!(crt_combine(&sf, &basis).unwrap(), f.clone());
        match invert_matrix_crt(&f, &basis) {
            Ok(out) => prop_assert_eq!(Some(out.inverse), f.inverse()),
            Err(_) => prop_assert!(f.inverse().is_none()),
        }
    }

    #[test]
    fn sampled_m3_z27_unit_criterion(entries in prop::collection::vec(0u64..27, 9)) {
        let ring = Ring::matrix(3, z(27)).unwrap();
        let f = Element::new(&ring, entries.clone()).unwrap();
        let det_bar = ModMatrix::from_rows(&entries.chunks(3).map(<[u64]>::to_vec).collect::<Vec<_>>(), 3).unwrap().det();
        let det = mat_det(&f).unwrap().coords()[0];
        let lifted = invert_matrix_prime_power(&f);
        prop_assert_eq!(det_bar != 0, !det.is_multiple_of(3));
        prop_assert_eq!(det_bar != 0, lifted.is_ok());
        if let Ok(cert) = lifted {
            let a = ModMatrix::from_rows(&entries.chunks(3).map(<[u64]>::to_vec).collect::<Vec<_>>(), 27).unwrap();
            let gj = a.inverse_unit_pivot(3, &mut Default::default()).unwrap();
            let adj = a.adjugate_cofactor().scale(unitlift_core::arith::inv_mod(det, 27).unwrap());
            prop_assert_eq!(cert.inverse().coords(), gj.as_slice());
            prop_assert_eq!(gj, adj);
        }
    }

    #[test]
    fn group_ring_axioms(pick in 0usize..5, seed in any::<u64>()) {
        let groups = [
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::symmetric(3).unwrap(),
            FiniteGroup::product_of(&[FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(3).unwrap()]).unwrap(),
            FiniteGroup::cyclic(24).unwrap(),
            FiniteGroup::direct_product(&FiniteGroup::symmetric(3).unwrap(), &FiniteGroup::cyclic(4).unwrap()).unwrap(),
        ];
        let ring = Ring::group_ring(Arc::new(groups[pick].clone()), z(7)).unwrap();
        let mut state = seed;
        let mut draw = || {
            let coords = (0..ring.coord_len())
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 33) % 7
                })
                .collect();
            Element::new(&ring, coords).unwrap()
        };
        let (a, b, c) = (draw(), draw(), draw());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn zmg_methods_agree(
        m in prop::sample::select(vec![6u64, 12, 36, 10, 45, 100]),
        n in 1usize..4,
        seed in any::<u64>(),
    ) {
        let group = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let basis = CrtBasis::new(m).unwrap();
        let mut state = seed;
        let mut fs = Vec::new();
        let mut gs = Vec::new();
        for c in basis.components() {
            let field = Ring::group_ring(group.clone(), z(c.prime)).unwrap();
            // first unit at or after a pseudorandom starting point
            let units = EnumerableRing::new(field).unwrap().enumerate_units().unwrap();
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let (f, g) = units[(state >> 33) as usize % units.len()].clone();
            fs.push(f);
            gs.push(g);
        }
        let radical = invert_zmg_radical(&fs, &gs, m).unwrap();
        // the CRT method on the components of the radical method's f
        let parts = crt_split(&radical.element, &basis).unwrap();
        let crt = invert_zmg_crt(&parts, &gs, &basis).unwrap();
        prop_assert_eq!(&crt.element, &radical.element);
        prop_assert_eq!(&crt.inverse, &radical.inverse);
        if basis.max_exponent() == 1 {
            let direct = invert_zmg_crt(&fs, &gs, &basis).unwrap();
            prop_assert_eq!(direct.element, radical.element);
            prop_assert_eq!(direct.inverse, radical.inverse);
        }
    }
}

#[test]
fn power_reduction_membership_is_exhaustive() {
    for p in [3u64, 5] {
        for k in [2u32, 3] {
            let ring = z(p.pow(k));
            let ideal = Ideal::power(&ring, Element::from_int(&ring, p as i128), 1).unwrap();
            let oracle = EnumerableRing::new(ring.clone()).unwrap();
            for n in ideal.elements() {
                // p <n> as the set of multiples p * n * r
                let p_n: Vec<Element> = oracle.elements().map(|r| n.mul(&r).unwrap().scale(p)).collect();
                let lhs = Element::one(&ring).add(&n).unwrap().pow(p as u128).sub(&Element::one(&ring)).unwrap();
                assert!(p_n.contains(&lhs), "Z_{}: n = {n}", p.pow(k));
                let r = power_reduction_witness(&n, p, k).unwrap();
                assert_eq!(lhs, n.mul(&r).unwrap().scale(p));
            }
        }
    }
}

#[test]
fn power_chains_validate_and_promote() {
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let c4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
    for (m, p, k) in [(8u64, 2u64, 3u32), (27, 3, 3), (25, 5, 2), (16, 2, 4)] {
        let ring = z(m);
        let chain = CncChain::power(&ring, &Element::from_int(&ring, p as i128), k, p).unwrap();
        let report = validate_cnc(&chain);
        assert!(report.passed());
        assert_eq!(report.nilpotency.exhaustive, Some(true));
        assert_eq!(lifting_exponent(&chain).unwrap().value(), (p as u128).pow(k - 1));
        let sizes: Vec<u128> = chain.ideals().iter().map(|i| i.size().unwrap()).collect();
        assert!(sizes.windows(2).all(|w| w[0] >= w[1]) && *sizes.last().unwrap() == 1);
        for g in [&s3, &c4] {
            let promoted = chain.promote(&Ring::group_ring(g.clone(), ring.clone()).unwrap()).unwrap();
            let report = validate_cnc(&promoted);
            assert!(report.passed(), "{report:?}");
            assert_eq!(promoted.nilpotency_indices(), chain.nilpotency_indices());
        }
        let matrix = chain.promote(&Ring::matrix(2, ring.clone()).unwrap()).unwrap();
        assert!(validate_cnc(&matrix).passed());
    }
}

#[test]
fn structural_and_exhaustive_checks_agree_on_explicit_chains() {
    let ring = z(16);
    for a in [2i128, 4, 8] {
        for b in [4i128, 8, 0] {
            for t in 1..5 {
                for s in [1u64, 2, 3, 4] {
                    let ideals = vec![
                        Ideal::power(&ring, Element::from_int(&ring, a), 1).unwrap(),
                        Ideal::power(&ring, Element::from_int(&ring, b), 1).unwrap(),
                        Ideal::zero(&ring),
                    ];
                    let chain = CncChain::new(ideals, vec![t, 2], vec![s, 2]).unwrap();
                    let report = validate_cnc(&chain);
                    assert_eq!(Some(report.chain.structural), report.chain.exhaustive);
                    assert_eq!(Some(report.nilpotency.structural), report.nilpotency.exhaustive, "<{a}>,<{b}> t={t}");
                    if report.characteristic.exhaustive == Some(false) {
                        assert!(!report.characteristic.structural);
                    }
                }
            }
        }
    }
}

#[test]
fn prime_factor_rule_rejects_small_primes() {
    // Z_27 with <3> ⊃ 0 and N^3 = 0: t = 3, s = 6 has prime factor 2 < 3
    let ring = z(27);
    let ideals = vec![Ideal::power(&ring, Element::from_int(&ring, 3), 1).unwrap(), Ideal::zero(&ring)];
    let report = validate_cnc(&CncChain::new(ideals.clone(), vec![3], vec![9]).unwrap());
    assert!(report.passed());
    let report = validate_cnc(&CncChain::new(ideals, vec![3], vec![18]).unwrap());
    assert!(!report.characteristic.passed());
    assert_eq!(report.characteristic.exhaustive, Some(true), "containment alone holds");
}

#[test]
fn m2_z4_unit_criterion_is_exhaustive() {
    let ring = Ring::matrix(2, z(4)).unwrap();
    for f in EnumerableRing::new(ring.clone()).unwrap().elements() {
        let det = mat_det(&f).unwrap().coords()[0];
        let det_bar = ModMatrix::from_rows(&[f.coords()[..2].to_vec(), f.coords()[2..].to_vec()], 2).unwrap().det();
        let brute = unitlift_core::brute_inverse(&f).unwrap();
        assert_eq!(det % 2 == 1, det_bar == 1);
        assert_eq!(brute.is_some(), det_bar == 1);
        if let Some(inv) = brute {
            assert_eq!(invert_matrix_prime_power(&f).unwrap().inverse(), &inv);
        }
    }
}
