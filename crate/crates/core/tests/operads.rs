use nilprod_core::exactlin::{FgAbGroup, Field, QMatrix};
use nilprod_core::nilgrp::twist_matrix;
use nilprod_core::operad2::{
    coproduct2, cosmash2, cosmash_kernel_structure, j_filtration2, lcs2, preset_operad, product2, right_exactness2,
    symmetry2, validate_algebra, BaseRing, Nil2Algebra, Nil2Operad, RModule,
};
use nilprod_core::random::{random_nil2_algebra, random_surjection, seeded};
use nilprod_core::Variety;
use proptest::prelude::*;

const PRESETS: [Variety; 4] = [Variety::Comm, Variety::Assoc, Variety::Lie, Variety::Leib];

fn ring_of(integers: bool) -> BaseRing {
    if integers {
        BaseRing::Integers
    } else {
        BaseRing::Field(Field::Rational)
    }
}

fn operad(v: usize, integers: bool) -> Nil2Operad {
    preset_operad(PRESETS[v], &ring_of(integers)).unwrap()
}

#[test]
fn comm_symmetry_is_the_plain_twist() {
    let op = preset_operad(Variety::Comm, &BaseRing::Integers).unwrap();
    for (na, nb) in [(1, 1), (2, 3), (3, 2)] {
        let a = Nil2Algebra::abelian(&op, &RModule::free(na));
        let b = Nil2Algebra::abelian(&op, &RModule::free(nb));
        let s = symmetry2(&a, &b).unwrap();
        let t = twist_matrix(&FgAbGroup::free(na), &FgAbGroup::free(nb), false);
        assert_eq!((s.matrix.rows(), s.matrix.cols()), (t.rows(), t.cols()));
        for r in 0..t.rows() {
            for c in 0..t.cols() {
                assert_eq!(s.matrix[(r, c)].to_integer(), t[(r, c)]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_algebras_are_valid(seed in any::<u64>(), v in 0usize..4, integers in any::<bool>()) {
        let op = operad(v, integers);
        let a = random_nil2_algebra(&mut seeded(seed), &op, 4);
        let r = validate_algebra(&a);
        prop_assert!(r.valid, "{:?}", r.violations);
    }

    #[test]
    fn cosmash_distributes_over_coproducts(seed in any::<u64>(), v in 0usize..4, integers in any::<bool>()) {
        let op = operad(v, integers);
        let mut rng = seeded(seed);
        let a = random_nil2_algebra(&mut rng, &op, 3);
        let b = random_nil2_algebra(&mut rng, &op, 3);
        let c = random_nil2_algebra(&mut rng, &op, 3);
        let ab = coproduct2(&a, &b).unwrap().algebra;
        let lhs = cosmash2(&ab, &c).unwrap().algebra;
        let rhs = product2(&cosmash2(&a, &c).unwrap().algebra, &cosmash2(&b, &c).unwrap().algebra).unwrap().algebra;
        prop_assert_eq!(lhs.structure(), rhs.structure());
    }

    #[test]
    fn cosmash_is_the_comparison_kernel(seed in any::<u64>(), v in 0usize..4, integers in any::<bool>()) {
        let op = operad(v, integers);
        let mut rng = seeded(seed);
        let a = random_nil2_algebra(&mut rng, &op, 3);
        let b = random_nil2_algebra(&mut rng, &op, 3);
        let direct = cosmash_kernel_structure(&a, &b).unwrap();
        prop_assert_eq!(cosmash2(&a, &b).unwrap().algebra.structure(), direct);
    }

    #[test]
    fn tensoring_is_right_exact(seed in any::<u64>(), v in 0usize..4) {
        let op = operad(v, true);
        let mut rng = seeded(seed);
        let x = random_nil2_algebra(&mut rng, &op, 3);
        let (b, a, f) = random_surjection(&mut rng, &BaseRing::Integers, 3);
        let r = right_exactness2(&x, &b, &a, &f).unwrap();
        prop_assert!(r.exact(), "{:?}", r);
    }

    #[test]
    fn filtration_is_lcs(seed in any::<u64>(), v in 0usize..4, integers in any::<bool>()) {
        let op = operad(v, integers);
        let a = random_nil2_algebra(&mut seeded(seed), &op, 4);
        let ring = &op.ring;
        let j = j_filtration2(&a);
        let g = lcs2(&a);
        for n in 0..3 {
            prop_assert!(ring.span_le(&a.module, &j[n], &g[n]));
            prop_assert!(ring.span_le(&a.module, &g[n], &j[n]));
        }
    }

    #[test]
    fn symmetry_is_an_involution(seed in any::<u64>(), v in 0usize..4, integers in any::<bool>()) {
        let op = operad(v, integers);
        let mut rng = seeded(seed);
        let a = random_nil2_algebra(&mut rng, &op, 3);
        let b = random_nil2_algebra(&mut rng, &op, 3);
        let s = symmetry2(&a, &b).unwrap();
        let back = symmetry2(&b, &a).unwrap();
        let ring = &op.ring;
        let sq = ring.mul(&back.matrix, &s.matrix);
        let diff = sq.sub(&QMatrix::identity(sq.rows()));
        prop_assert!(ring.is_zero_map(&s.source.module, &diff));
    }
}
