use std::collections::HashMap;

use nilprod_core::exactlin::{smith_normal_form, tensor_fgab, FgAbGroup, IntMatrix};
use nilprod_core::nilgrp::{
    bilinear_product_gp, nil2_coproduct, symmetry_gp, twist_matrix, FpGroupPresentation, Nil2CoproductGroup,
    Nil2Element,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

type Perm = [usize; 4];

fn compose(p: &Perm, q: &Perm) -> Perm {
    // apply q first, then p
    let mut out = [0; 4];
    for i in 0..4 {
        out[i] = p[q[i]];
    }
    out
}

/// Symmetries of a square acting on its vertices.
fn d4() -> Vec<Perm> {
    let r: Perm = [1, 2, 3, 0];
    let s: Perm = [0, 3, 2, 1];
    let mut elems = vec![[0, 1, 2, 3]];
    let mut i = 0;
    while i < elems.len() {
        for g in [r, s] {
            let x = compose(&elems[i], &g);
            if !elems.contains(&x) {
                elems.push(x);
            }
        }
        i += 1;
    }
    elems
}

fn try_iso(g: &Nil2CoproductGroup, x: &Nil2Element, y: &Nil2Element) -> bool {
    let r: Perm = [1, 2, 3, 0];
    let s: Perm = [0, 3, 2, 1];
    let mut phi: HashMap<Perm, Nil2Element> = HashMap::new();
    phi.insert([0, 1, 2, 3], g.identity());
    let mut queue = vec![[0, 1, 2, 3]];
    while let Some(w) = queue.pop() {
        let img = phi[&w].clone();
        for (gen, target) in [(r, x), (s, y)] {
            let next = compose(&w, &gen);
            let next_img = g.mul(&img, target).unwrap();
            match phi.get(&next) {
                Some(existing) if *existing != next_img => return false,
                Some(_) => {}
                None => {
                    phi.insert(next, next_img);
                    queue.push(next);
                }
            }
        }
    }
    let images: std::collections::HashSet<&Nil2Element> = phi.values().collect();
    if images.len() != 8 {
        return false;
    }
    let elems = d4();
    elems.iter().all(|u| elems.iter().all(|v| phi[&compose(u, v)] == g.mul(&phi[u], &phi[v]).unwrap()))
}

#[test]
fn d4_oracle() {
    let z2 = FgAbGroup::cyclic(2);
    let g = nil2_coproduct(&z2, &z2);
    let elems = g.elements().unwrap();
    assert_eq!(elems.len(), 8);
    assert_eq!(g.order(), Some(BigInt::from(8)));
    assert_eq!(g.class().unwrap(), 2);
    assert_eq!(g.center().unwrap().structure, FgAbGroup::cyclic(2));
    let found = elems.iter().any(|x| elems.iter().any(|y| try_iso(&g, x, y)));
    assert!(found, "no isomorphism to the dihedral group of order 8");
}

#[test]
fn quaternion_is_not_reached() {
    // the coproduct of Z/2 and Z/2 has five involutions, unlike Q8
    let z2 = FgAbGroup::cyclic(2);
    let g = nil2_coproduct(&z2, &z2);
    let involutions = g
        .elements()
        .unwrap()
        .iter()
        .filter(|e| **e != g.identity() && g.mul(e, e).unwrap() == g.identity())
        .count();
    assert_eq!(involutions, 5);
}

#[test]
fn table_examples() {
    let x = FpGroupPresentation::cyclic(4);
    let y = FpGroupPresentation::cyclic(6);
    assert_eq!(bilinear_product_gp(&x, &y).product, FgAbGroup::cyclic(2));
    let s3 = FpGroupPresentation::parse(&["s", "t"], &["s^2", "t^3", "(s t)^2"]).unwrap();
    let b = bilinear_product_gp(&s3, &s3);
    assert_eq!(b.ab_x, FgAbGroup::cyclic(2));
    assert_eq!(b.product, FgAbGroup::cyclic(2));
}

#[test]
fn symmetry_is_negative_twist_on_free_groups() {
    let a = FgAbGroup::free(2);
    let b = FgAbGroup::free(3);
    let s = symmetry_gp(&a, &b);
    let t = twist_matrix(&a, &b, false);
    assert_eq!(s, t.neg());
    assert_ne!(s, t);
}

fn orders_strategy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(prop::sample::select(vec![0u64, 2, 3, 4, 6]), 1..3)
}

fn group_of(orders: &[u64]) -> FgAbGroup {
    FgAbGroup::from_cyclic_orders(&orders.iter().map(|&o| BigInt::from(o)).collect::<Vec<_>>())
}

fn element(g: &Nil2CoproductGroup, raw: &[i64]) -> Nil2Element {
    let take = |n: usize, off: usize| -> Vec<BigInt> { (0..n).map(|i| BigInt::from(raw[(off + i) % raw.len()])).collect() };
    let (na, nb, nt) = (g.a.ngens(), g.b.ngens(), g.t.ngens());
    g.element(&take(na, 0), &take(nb, na), &take(nt, na + nb)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coproduct_group_axioms(
        oa in orders_strategy(),
        ob in orders_strategy(),
        r1 in prop::collection::vec(-5i64..5, 8),
        r2 in prop::collection::vec(-5i64..5, 8),
        r3 in prop::collection::vec(-5i64..5, 8),
    ) {
        let g = nil2_coproduct(&group_of(&oa), &group_of(&ob));
        let (x, y, z) = (element(&g, &r1), element(&g, &r2), element(&g, &r3));
        let lhs = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
        let rhs = g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(g.mul(&x, &g.inv(&x).unwrap()).unwrap(), g.identity());
        prop_assert_eq!(g.mul(&g.identity(), &x).unwrap(), x.clone());
        let c = g.commutator(&x, &y).unwrap();
        prop_assert!(g.is_central(&c).unwrap());
        // class two: [[x, y], z] = 1
        prop_assert_eq!(g.commutator(&c, &z).unwrap(), g.identity());
    }

    #[test]
    fn power_matches_repeated_product(
        oa in orders_strategy(),
        ob in orders_strategy(),
        r in prop::collection::vec(-5i64..5, 8),
        n in -6i64..7,
    ) {
        let g = nil2_coproduct(&group_of(&oa), &group_of(&ob));
        let x = element(&g, &r);
        let step = if n < 0 { g.inv(&x).unwrap() } else { x.clone() };
        let mut acc = g.identity();
        for _ in 0..n.unsigned_abs() {
            acc = g.mul(&acc, &step).unwrap();
        }
        prop_assert_eq!(g.pow(&x, &BigInt::from(n)).unwrap(), acc);
    }

    #[test]
    fn cosmash_is_tensor(oa in orders_strategy(), ob in orders_strategy()) {
        let (a, b) = (group_of(&oa), group_of(&ob));
        let g = nil2_coproduct(&a, &b);
        prop_assert_eq!(&g.t, &tensor_fgab(&a, &b));
        // symmetry squares to the identity
        let s = symmetry_gp(&a, &b);
        let back = symmetry_gp(&b, &a);
        let ab = tensor_fgab(&a, &b);
        let sq = ab.reduce_columns(&back.mul(&s));
        prop_assert_eq!(sq, ab.reduce_columns(&IntMatrix::identity(ab.ngens())));
    }

    #[test]
    fn snf_reconstructs(entries in prop::collection::vec(-6i64..7, 12), rows in 1usize..4) {
        let cols = 12 / rows.max(1) / 2 + 1;
        let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[(i * cols + j) % 12]).collect()).collect();
        let refs: Vec<&[i64]> = data.iter().map(|r| r.as_slice()).collect();
        let m = IntMatrix::from_i64_rows(&refs);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.mul(&s.u_inv).is_identity());
        prop_assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= BigInt::zero());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}
