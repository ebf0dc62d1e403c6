use nilprod_core::exactlin::{Field, Q};
use nilprod_core::homology::{
    ce_d2, ce_d3, ce_homology, central_extension_validate, exactness_check, ganea_sequence,
};
use nilprod_core::nonassoc::{
    check_identity, commute_nil_birkhoff_test, higgins_commutator, j_filtration, left_normed_chain,
    lower_central_series, nilpotentisation, rep_tensor_lie, SCAlgebra, Subspace,
};
use nilprod_core::random::{
    random_invertible, random_lie_central_extension, random_matrix, random_rep_pair, random_sc_algebra, seeded,
};
use nilprod_core::Variety;
use proptest::prelude::*;

fn field_of(use_f5: bool) -> Field {
    if use_f5 {
        Field::prime(5).unwrap()
    } else {
        Field::Rational
    }
}

/// Every product of `n` basis vectors in every bracketing, by brute force.
fn all_bracketings(a: &SCAlgebra, n: usize) -> Vec<Vec<Q>> {
    if n == 1 {
        return (0..a.dim).map(|i| a.unit(i)).collect();
    }
    let mut out = vec![];
    for k in 1..n {
        let left = all_bracketings(a, k);
        let right = all_bracketings(a, n - k);
        for u in &left {
            for v in &right {
                out.push(a.mul(u, v));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn j_filtration_matches_brute_force(seed in any::<u64>(), use_f5 in any::<bool>(), v in 0usize..3) {
        let field = field_of(use_f5);
        let variety = [Variety::Lie, Variety::Leib, Variety::Assoc][v];
        let mut rng = seeded(seed);
        let a = random_sc_algebra(&mut rng, &field, variety, 3);
        let j = j_filtration(&a, 4);
        // every product of at least n factors is a sum of products of exactly n
        for n in 1..=4 {
            let brute = Subspace::from_vectors(&field, a.dim, &all_bracketings(&a, n));
            prop_assert_eq!(&brute, &j[n - 1]);
        }
        prop_assert_eq!(left_normed_chain(&a, 4), j);
    }

    #[test]
    fn change_of_basis_preserves_structure(seed in any::<u64>(), v in 0usize..4) {
        let field = Field::Rational;
        let variety = [Variety::Lie, Variety::Leib, Variety::Assoc, Variety::Comm][v];
        let mut rng = seeded(seed);
        let a = random_sc_algebra(&mut rng, &field, variety, 4);
        let p = random_invertible(&mut rng, &field, a.dim);
        let b = a.change_basis(&p).unwrap();
        prop_assert!(check_identity(&b, variety).holds);
        prop_assert_eq!(lower_central_series(&a).dims(), lower_central_series(&b).dims());
        prop_assert_eq!(a.center().dim(), b.center().dim());
    }

    #[test]
    fn higgins_is_symmetric_and_below_ideal_closure(seed in any::<u64>()) {
        let field = Field::Rational;
        let mut rng = seeded(seed);
        let a = random_sc_algebra(&mut rng, &field, Variety::Lie, 4);
        let k = Subspace::spanned_by(&field, a.dim, &random_matrix(&mut rng, &field, a.dim, 1));
        let l = Subspace::spanned_by(&field, a.dim, &random_matrix(&mut rng, &field, a.dim, 1));
        let kl = higgins_commutator(&a, &k, &l).unwrap();
        let lk = higgins_commutator(&a, &l, &k).unwrap();
        prop_assert_eq!(&kl, &lk);
        prop_assert!(kl.le(&j_filtration(&a, 2)[1]));
    }

    #[test]
    fn reflectors_commute(seed in any::<u64>(), n in 1usize..3) {
        let field = Field::Rational;
        let mut rng = seeded(seed);
        let a = random_sc_algebra(&mut rng, &field, Variety::Leib, 5);
        let r = commute_nil_birkhoff_test(&a, n).unwrap();
        prop_assert!(r.isomorphic);
    }

    #[test]
    fn nilpotentisation_is_nilpotent(seed in any::<u64>(), n in 1usize..4) {
        let field = Field::Rational;
        let mut rng = seeded(seed);
        let a = random_sc_algebra(&mut rng, &field, Variety::Assoc, 4);
        let q = nilpotentisation(&a, n).unwrap();
        let lcs = lower_central_series(&q.algebra);
        prop_assert!(lcs.nilpotent);
        prop_assert!(lcs.class.unwrap() <= n);
    }

    #[test]
    fn ce_complex_and_invariance(seed in any::<u64>(), use_f5 in any::<bool>()) {
        let field = field_of(use_f5);
        let mut rng = seeded(seed);
        let g = random_sc_algebra(&mut rng, &field, Variety::Lie, 5);
        prop_assert!(field.is_zero_matrix(&field.mul_mat(&ce_d2(&g), &ce_d3(&g))));
        let p = random_invertible(&mut rng, &field, g.dim);
        let h = g.change_basis(&p).unwrap();
        for d in [1, 2] {
            prop_assert_eq!(ce_homology(&g, d).unwrap().dim(), ce_homology(&h, d).unwrap().dim());
        }
    }

    #[test]
    fn ganea_exact_and_section_independent(seed in any::<u64>()) {
        let field = Field::Rational;
        let mut rng = seeded(seed);
        let (b, k) = random_lie_central_extension(&mut rng, &field, 6, true);
        let e = central_extension_validate(&b, &k).unwrap();
        let s = ganea_sequence(&e).unwrap();
        let r = exactness_check(&s);
        prop_assert!(r.exact, "{:?}", r);
        for w in s.maps.windows(2) {
            prop_assert!(field.is_zero_matrix(&field.mul_mat(&w[1], &w[0])));
        }
        // shift the section by a K-valued map
        let shift = field.mul_mat(&k.basis, &random_matrix(&mut rng, &field, k.dim(), e.a.dim));
        let e2 = e.with_section(&e.section.add(&shift)).unwrap();
        let s2 = ganea_sequence(&e2).unwrap();
        let r2 = exactness_check(&s2);
        prop_assert_eq!(r2.exact, r.exact);
        prop_assert_eq!(r2.dims, r.dims);
    }

    #[test]
    fn kronecker_sum_is_a_representation(seed in any::<u64>(), use_f5 in any::<bool>()) {
        let field = field_of(use_f5);
        let mut rng = seeded(seed);
        let (x, y) = random_rep_pair(&mut rng, &field);
        let t = rep_tensor_lie(&x, &y).unwrap();
        prop_assert!(t.first_failure().is_none());
        prop_assert_eq!(t.dim(), x.dim() * y.dim());
    }
}
