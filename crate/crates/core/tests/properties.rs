mod common;

use std::sync::Arc;

use modinv::gf::{Elem, FieldSpec};
use modinv::grobner::{GbConfig, IdealBasis};
use modinv::group::{composition_series, is_transvection, unipotent_transvections, MatrixGroup, DEFAULT_GROUP_CAP};
use modinv::invariants::{InvariantOptions, InvariantRing};
use modinv::linalg::Matrix;
use modinv::poly::{Monomial, Polynomial, Ring};
use modinv::samples;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<Arc<FieldSpec>> {
    vec![
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(3).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::extension(2, vec![1, 1, 1]).unwrap(),
        samples::f9(),
    ]
}

fn field() -> impl Strategy<Value = Arc<FieldSpec>> {
    (0..fields().len()).prop_map(|i| fields()[i].clone())
}

fn rng() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(ChaCha8Rng::seed_from_u64)
}

fn random_invertible(f: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| common::random_elem(f, rng)).collect()).collect();
        let m = Matrix::from_rows(rows).unwrap();
        if m.is_invertible(f) {
            return m;
        }
    }
}

fn random_transvection_group(f: &Arc<FieldSpec>, n: usize, count: usize, rng: &mut ChaCha8Rng) -> MatrixGroup {
    let pool = unipotent_transvections(f, n, n - 1);
    let gens: Vec<Matrix> = (0..count).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
    MatrixGroup::generate(f, n, &gens, DEFAULT_GROUP_CAP, true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field(), mut r in rng()) {
        let (a, b, c) = (common::random_elem(&f, &mut r), common::random_elem(&f, &mut r), common::random_elem(&f, &mut r));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul_slow(a, b));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.inv(a).unwrap(), f.inv_by_gcd(a));
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn monomial_order_is_multiplicative(n in 1usize..5, mut r in rng()) {
        let ring = Ring::deglex(FieldSpec::prime(2).unwrap(), n);
        let a = common::random_monomial(n, r.gen_range(0..6), &mut r);
        let b = common::random_monomial(n, r.gen_range(0..6), &mut r);
        let c = common::random_monomial(n, r.gen_range(0..6), &mut r);
        prop_assert_eq!(ring.cmp(&a, &b), ring.cmp(&a.mul(&c), &b.mul(&c)));
        prop_assert!(ring.cmp(&Monomial::one(n), &a) != std::cmp::Ordering::Greater);
        prop_assert_eq!(ring.cmp(&a, &b), ring.cmp(&b, &a).reverse());
    }

    #[test]
    fn delta_is_iterative(f in field(), mut r in rng(), j in 0usize..3, s in 0u32..6, t in 0u32..6) {
        let ring = Ring::deglex(f, 3);
        let a = common::random_poly(&ring, 9, 6, &mut r);
        prop_assert!(common::iterative(&ring, j, s, t, &a));
    }

    #[test]
    fn delta_satisfies_leibniz(f in field(), mut r in rng(), j in 0usize..3, l in 0u32..9) {
        let ring = Ring::deglex(f, 3);
        let a = common::random_poly(&ring, 6, 5, &mut r);
        let b = common::random_poly(&ring, 6, 5, &mut r);
        prop_assert!(common::leibniz(&ring, j, l, &a, &b));
    }

    #[test]
    fn delta_extracts_coefficients(f in field(), mut r in rng(), n in 1usize..4) {
        let ring = Ring::deglex(f, n);
        let a = common::random_poly(&ring, 6, 6, &mut r);
        let start = r.gen_range(0..n);
        prop_assert!(common::extraction(&ring, start, &a));
    }

    #[test]
    fn delta_is_equivariant_at_terminal_variables(f in field(), mut r in rng(), l in 0u32..6) {
        let g = random_transvection_group(&f, 3, 2, &mut r);
        let ring = Ring::deglex(f, 3);
        let a = common::random_poly(&ring, 6, 5, &mut r);
        for j in 0..3 {
            if g.is_terminal(j) {
                prop_assert!(common::equivariant(&ring, &g, j, l, &a));
            }
        }
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(f in field(), mut r in rng(), n in 1usize..4) {
        let ring = Ring::deglex(f.clone(), n);
        let m = random_invertible(&f, n, &mut r);
        let a = common::random_poly(&ring, 4, 5, &mut r);
        let b = common::random_poly(&ring, 4, 5, &mut r);
        let act = |p: &Polynomial| ring.apply_linear_substitution(p, &m).unwrap();
        prop_assert_eq!(act(&ring.add(&a, &b)), ring.add(&act(&a), &act(&b)));
        prop_assert_eq!(act(&ring.mul(&a, &b)), ring.mul(&act(&a), &act(&b)));
        let back = ring.apply_linear_substitution(&act(&a), &m.inverse(&f).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn membership_matches_degree_slices(f in field(), mut r in rng(), n in 1usize..4) {
        let ring = Ring::deglex(f, n);
        let gens: Vec<Polynomial> = (0..r.gen_range(1..4))
            .map(|_| { let d = r.gen_range(1..4); common::random_homogeneous(&ring, d, 3, &mut r) })
            .filter(|g| !g.is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let ideal = IdealBasis::new(&ring, gens.clone(), GbConfig::default()).unwrap();
        for g in &gens {
            prop_assert!(ideal.contains(g));
        }
        for _ in 0..4 {
            let d = r.gen_range(1..6);
            let q = common::random_homogeneous(&ring, d, 4, &mut r);
            prop_assert_eq!(ideal.contains(&q), common::slice_member(&ring, &gens, &q));
        }
    }

    #[test]
    fn conjugates_of_transvections_are_transvections(f in field(), mut r in rng(), n in 2usize..5) {
        let pool = unipotent_transvections(&f, n, n - 1);
        let t = &pool[r.gen_range(0..pool.len())];
        let s = &pool[r.gen_range(0..pool.len())];
        let p = random_invertible(&f, n, &mut r);
        let conj = p.inverse(&f).unwrap().mul(t, &f).mul(&p, &f);
        prop_assert!(is_transvection(t, &f));
        prop_assert!(is_transvection(&conj, &f));
        // (t - 1)(s - 1) = (s - 1)(t - 1) = 0 forces ts = st
        let commute = t.mul(s, &f) == s.mul(t, &f);
        let (dt, ds) = (t.minus_identity(&f), s.minus_identity(&f));
        if dt.mul(&ds, &f).is_zero() && ds.mul(&dt, &f).is_zero() {
            prop_assert!(commute);
        }
    }

    #[test]
    fn composition_series_steps_have_index_p(p in prop::sample::select(vec![2u32, 3]), mut r in rng(), n in 2usize..5) {
        let f = FieldSpec::prime(p).unwrap();
        let g = random_transvection_group(&f, n, r.gen_range(1..4), &mut r);
        let series = composition_series(&g).unwrap();
        prop_assert_eq!(series.chain.first().map(MatrixGroup::order), Some(1));
        prop_assert_eq!(series.chain.last().map(MatrixGroup::order), Some(g.order()));
        for (l, w) in series.witnesses.iter().enumerate() {
            let (lo, hi) = (&series.chain[l], &series.chain[l + 1]);
            prop_assert_eq!(hi.order(), lo.order() * p as usize);
            prop_assert!(lo.is_normal_in(hi));
            prop_assert!(is_transvection(w, &f));
            prop_assert!(hi.contains(w) && !lo.contains(w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hilbert_colength_bounds_group_order(p in prop::sample::select(vec![2u32, 3]), mut r in rng()) {
        let f = FieldSpec::prime(p).unwrap();
        let g = random_transvection_group(&f, 3, r.gen_range(1..3), &mut r);
        let order = g.order() as u64;
        let inv = InvariantRing::new(g, Ring::deglex(f, 3)).unwrap();
        let opts = InvariantOptions::default();
        let h = inv.hilbert_ideal(&opts).unwrap();
        prop_assume!(h.certified);
        let colength = h.ideal.colength().finite().unwrap();
        prop_assert!(colength >= order);
        let gens = inv.algebra_generators(&opts).unwrap();
        prop_assume!(gens.certification.is_certified());
        let degrees: u64 = gens.degrees(inv.ring()).iter().map(|&d| d as u64).product();
        let free = gens.generators.len() == 3 && degrees == order;
        prop_assert_eq!(colength == order, free);
    }
}
