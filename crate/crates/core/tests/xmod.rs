use nilprod_core::exactlin::FgAbGroup;
use nilprod_core::random::{random_ab_xmod, seeded};
use nilprod_core::xmod::{
    pxmod_comparison, pxmod_tensor, xmod_associativity_check, xmod_symmetry, xmod_tensor, AbCrossedModule,
};
use proptest::prelude::*;

#[test]
fn golden_value() {
    let m = AbCrossedModule::free_rank_one();
    let t = xmod_tensor(&m, &m).unwrap().module;
    assert_eq!(t.g, FgAbGroup::free(4));
    assert_eq!(t.a, FgAbGroup::free(3));
    let (ker, coker) = t.boundary_invariants();
    assert_eq!(ker, FgAbGroup::trivial());
    assert_eq!(coker, FgAbGroup::free(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn epsilon_is_well_defined(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (m1, m2) = (random_ab_xmod(&mut rng), random_ab_xmod(&mut rng));
        prop_assert!(xmod_tensor(&m1, &m2).unwrap().well_defined);
    }

    #[test]
    fn unit_on_both_sides(seed in any::<u64>()) {
        let m = random_ab_xmod(&mut seeded(seed));
        let u = AbCrossedModule::unit();
        prop_assert!(xmod_tensor(&u, &m).unwrap().module.same_invariants(&m));
        prop_assert!(xmod_tensor(&m, &u).unwrap().module.same_invariants(&m));
    }

    #[test]
    fn zero_annihilates(seed in any::<u64>()) {
        let m = random_ab_xmod(&mut seeded(seed));
        let t = xmod_tensor(&m, &AbCrossedModule::zero()).unwrap().module;
        prop_assert!(t.same_invariants(&AbCrossedModule::zero()));
    }

    #[test]
    fn symmetric(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (m1, m2) = (random_ab_xmod(&mut rng), random_ab_xmod(&mut rng));
        let s = xmod_symmetry(&m1, &m2).unwrap();
        prop_assert!(s.invariants_equal && s.isomorphism && s.commutes);
    }

    #[test]
    fn precrossed_comparison(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (m1, m2) = (random_ab_xmod(&mut rng), random_ab_xmod(&mut rng));
        let c = pxmod_comparison(&m1, &m2).unwrap();
        prop_assert!(c.surjective && c.boundary_compatible && c.kernel_matches);
        let p = pxmod_tensor(&m1, &m2).unwrap();
        prop_assert_eq!(&p.top, &xmod_tensor(&m1, &m2).unwrap().module.g);
    }

    #[test]
    fn associative_on_invariants(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (m1, m2, m3) = (random_ab_xmod(&mut rng), random_ab_xmod(&mut rng), random_ab_xmod(&mut rng));
        prop_assert!(xmod_associativity_check(&m1, &m2, &m3).unwrap());
    }
}
