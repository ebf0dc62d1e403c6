//! Seeded random inputs for the property suites.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{q, FgAbGroup, Field, Matrix, QMatrix, Q};
use crate::nonassoc::library::*;
use crate::nonassoc::rep::standard_sl2;
use crate::nonassoc::{identity_residuals, LieRep, SCAlgebra, Subspace};
use crate::operad2::rmod::to_int_matrix;
use crate::operad2::{BaseRing, Nil2Algebra, Nil2Operad, RModule};
use crate::xmod::AbCrossedModule;
use crate::Variety;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small<R: Rng + ?Sized>(rng: &mut R, field: &Field, bound: i64) -> Q {
    field.from_i64(rng.gen_range(-bound..=bound))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, field: &Field, rows: usize, cols: usize) -> QMatrix {
    Matrix::from_fn(rows, cols, |_, _| small(rng, field, 2))
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, field: &Field, n: usize) -> QMatrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if field.rank(&m) == n {
            return m;
        }
    }
}

/// Cocycles `w : A x A -> F^k` for which `A + F^k` with
/// `(a, x)(b, y) = (ab, w(a, b))` stays in `variety`, as columns indexed
/// by `(i * n + j) * k + c`.
pub fn central_cocycles(a: &SCAlgebra, variety: Variety, k: usize) -> QMatrix {
    let f = &a.field;
    let n = a.dim;
    let nvars = n * n * k;
    let mut cols = vec![];
    for var in 0..nvars {
        let e = extension_with(a, k, |idx| if idx == var { Q::one() } else { Q::zero() });
        let res: Vec<Q> = identity_residuals(&e, variety).into_iter().flat_map(|(_, _, r)| r).collect();
        cols.push(res);
    }
    let rows = cols.first().map_or(0, |c| c.len());
    let m = Matrix::from_cols(&cols, rows);
    f.kernel(&m)
}

fn extension_with(a: &SCAlgebra, k: usize, w: impl Fn(usize) -> Q) -> SCAlgebra {
    let n = a.dim;
    let d = n + k;
    let mut table = QMatrix::zeros(d, d * d);
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                table[(r, i * d + j)] = a.table[(r, i * n + j)].clone();
            }
            for c in 0..k {
                table[(n + c, i * d + j)] = w((i * n + j) * k + c);
            }
        }
    }
    SCAlgebra { field: a.field.clone(), dim: d, table, variety: None }
}

/// A random central extension of `a` by `F^k` in `variety`; the new basis
/// vectors come last and span a central ideal.
pub fn random_central_extension<R: Rng + ?Sized>(
    rng: &mut R,
    a: &SCAlgebra,
    variety: Variety,
    k: usize,
) -> SCAlgebra {
    let f = &a.field;
    let basis = central_cocycles(a, variety, k);
    let mut w = vec![Q::zero(); a.dim * a.dim * k];
    for col in basis.columns() {
        let c = small(rng, f, 2);
        for (x, y) in w.iter_mut().zip(&col) {
            *x = f.add(x, &f.mul(&c, y));
        }
    }
    let mut e = extension_with(a, k, |idx| w[idx].clone());
    e.variety = Some(variety);
    e
}

fn seeds(field: &Field, variety: Variety) -> Vec<SCAlgebra> {
    let tag = |a: SCAlgebra| a.with_variety(Some(variety)).expect("seed satisfies the identities");
    let lie = || {
        let mut v = vec![
            SCAlgebra::abelian(field, 1, Some(Variety::Lie)),
            SCAlgebra::abelian(field, 2, Some(Variety::Lie)),
            r2(field),
            heisenberg(field),
            scaling3(field),
            filiform(field, 4),
        ];
        if field.characteristic() != 2 {
            v.push(sl2(field));
        }
        v
    };
    match variety {
        Variety::Lie => lie(),
        Variety::Leib => {
            let mut v: Vec<SCAlgebra> = lie().into_iter().map(tag).collect();
            v.push(leibniz_square(field));
            let r = r2(field);
            let rho = vec![Matrix::from_vec(1, 1, vec![q(1)]), QMatrix::zeros(1, 1)];
            v.push(hemisemidirect(&LieRep::new(&r, rho).expect("one-dimensional rep of r2")));
            v
        }
        Variety::Assoc => vec![
            SCAlgebra::abelian(field, 1, Some(Variety::Assoc)),
            tag(idempotent(field)),
            tag(dual_numbers(field)),
            upper_triangular(field),
            matrices2(field),
        ],
        Variety::Comm => vec![
            SCAlgebra::abelian(field, 1, Some(Variety::Comm)),
            idempotent(field),
            dual_numbers(field),
        ],
    }
}

/// A random algebra in `variety` of dimension between 1 and `max_dim`,
/// built from library seeds by direct sums, central extensions and a
/// random change of basis.
pub fn random_sc_algebra<R: Rng + ?Sized>(rng: &mut R, field: &Field, variety: Variety, max_dim: usize) -> SCAlgebra {
    assert!(max_dim >= 1);
    let pool: Vec<SCAlgebra> = seeds(field, variety).into_iter().filter(|s| s.dim <= max_dim).collect();
    let mut a = pool.choose(rng).expect("dimension-one seeds exist").clone();
    while a.dim < max_dim && rng.gen_bool(0.6) {
        let room = max_dim - a.dim;
        let fitting: Vec<&SCAlgebra> = pool.iter().filter(|s| s.dim <= room).collect();
        if rng.gen_bool(0.6) || fitting.is_empty() {
            let k = rng.gen_range(1..=room.min(2));
            a = random_central_extension(rng, &a, variety, k);
        } else {
            let b = *fitting.choose(rng).expect("nonempty");
            a = a.direct_sum(b).expect("same field");
        }
    }
    let p = random_invertible(rng, field, a.dim);
    a.change_basis(&p).expect("invertible change of basis")
}

/// A random nilpotent Lie algebra built by iterated central extensions.
pub fn random_nilpotent_lie<R: Rng + ?Sized>(rng: &mut R, field: &Field, min_dim: usize, max_dim: usize) -> SCAlgebra {
    let start = rng.gen_range(1..=2.min(max_dim));
    let mut a = SCAlgebra::abelian(field, start, Some(Variety::Lie));
    let target = rng.gen_range(min_dim.max(start)..=max_dim);
    while a.dim < target {
        let k = rng.gen_range(1..=(target - a.dim).min(2));
        a = random_central_extension(rng, &a, Variety::Lie, k);
    }
    a
}

/// A Lie algebra of dimension at most `max_dim` with a nonzero central
/// ideal, in a random basis. With `nilpotent` the result is nilpotent.
pub fn random_lie_central_extension<R: Rng + ?Sized>(
    rng: &mut R,
    field: &Field,
    max_dim: usize,
    nilpotent: bool,
) -> (SCAlgebra, Subspace) {
    assert!(max_dim >= 2);
    let base = if nilpotent || rng.gen_bool(0.5) {
        random_nilpotent_lie(rng, field, 1, max_dim - 1)
    } else {
        random_sc_algebra(rng, field, Variety::Lie, max_dim - 1)
    };
    let k = rng.gen_range(1..=(max_dim - base.dim).min(2));
    let e = random_central_extension(rng, &base, Variety::Lie, k);
    let n = e.dim;
    let kvecs: Vec<Vec<Q>> = (base.dim..n).map(|i| e.unit(i)).collect();
    let p = random_invertible(rng, field, n);
    let pinv = field.inverse(&p).expect("invertible");
    let e2 = e.change_basis(&p).expect("invertible change of basis");
    let kk: Vec<Vec<Q>> = kvecs.iter().map(|v| field.mul_vec(&pinv, v)).collect();
    (e2, Subspace::from_vectors(field, n, &kk))
}

fn base_reps<R: Rng + ?Sized>(rng: &mut R, field: &Field) -> Vec<LieRep> {
    let z = |x: i64| field.from_i64(x);
    match rng.gen_range(0..4) {
        0 if field.characteristic() != 2 => {
            let g = sl2(field);
            vec![
                standard_sl2(field),
                LieRep::adjoint(&g).expect("adjoint"),
                LieRep::trivial(&g, 1).expect("trivial"),
            ]
        }
        1 => {
            let g = heisenberg(field);
            let mut e12 = QMatrix::zeros(3, 3);
            e12[(0, 1)] = z(1);
            let mut e23 = QMatrix::zeros(3, 3);
            e23[(1, 2)] = z(1);
            let mut e13 = QMatrix::zeros(3, 3);
            e13[(0, 2)] = z(1);
            vec![
                LieRep::new(&g, vec![e12, e23, e13]).expect("upper triangular rep"),
                LieRep::adjoint(&g).expect("adjoint"),
                LieRep::trivial(&g, 1).expect("trivial"),
            ]
        }
        2 => {
            let g = r2(field);
            let c = small(rng, field, 3);
            vec![
                LieRep::adjoint(&g).expect("adjoint"),
                LieRep::new(&g, vec![Matrix::from_vec(1, 1, vec![c]), QMatrix::zeros(1, 1)]).expect("character"),
            ]
        }
        _ => {
            let g = SCAlgebra::abelian(field, 2, Some(Variety::Lie));
            let m = random_matrix(rng, field, 2, 2);
            let a = small(rng, field, 2);
            let b = small(rng, field, 2);
            // two polynomials in one matrix commute
            let x = m.scale(&a);
            let y = field.reduce_matrix(&field.mul_mat(&m, &m).add(&QMatrix::identity(2).scale(&b)));
            vec![LieRep::new(&g, vec![x, y]).expect("commuting matrices")]
        }
    }
}

fn random_rep_from<R: Rng + ?Sized>(rng: &mut R, field: &Field, pool: &[LieRep], max_dim: usize) -> LieRep {
    let fits: Vec<&LieRep> = pool.iter().filter(|r| r.dim() <= max_dim).collect();
    let mut r = (*fits.choose(rng).expect("one-dimensional reps exist")).clone();
    let fits2: Vec<&LieRep> = pool.iter().filter(|s| s.dim() + r.dim() <= max_dim).collect();
    if !fits2.is_empty() && rng.gen_bool(0.4) {
        r = r.direct_sum(fits2.choose(rng).expect("nonempty")).expect("same algebra");
    }
    let p = random_invertible(rng, field, r.dim());
    r.conjugate(&p).expect("invertible")
}

/// Two representations of the same random Lie algebra, each of dimension at most 4.
pub fn random_rep_pair<R: Rng + ?Sized>(rng: &mut R, field: &Field) -> (LieRep, LieRep) {
    let pool = base_reps(rng, field);
    let a = random_rep_from(rng, field, &pool, 4);
    let b = random_rep_from(rng, field, &pool, 4);
    (a, b)
}

/// Random orders, drawn so that torsion occurs over `Z` and fields see free modules.
pub fn random_orders<R: Rng + ?Sized>(rng: &mut R, ring: &BaseRing, n: usize) -> Vec<BigInt> {
    const CHOICES: [i64; 7] = [0, 0, 0, 2, 3, 4, 6];
    (0..n)
        .map(|_| match ring {
            BaseRing::Integers => BigInt::from(*CHOICES.choose(rng).expect("nonempty")),
            BaseRing::Field(_) => BigInt::zero(),
        })
        .collect()
}

/// A random homomorphism `src -> tgt` of cyclic decompositions.
pub fn random_hom<R: Rng + ?Sized>(rng: &mut R, ring: &BaseRing, src: &RModule, tgt: &RModule) -> QMatrix {
    let mut m = QMatrix::zeros(tgt.ngens(), src.ngens());
    for (r, o) in tgt.orders.iter().enumerate() {
        for (c, d) in src.orders.iter().enumerate() {
            // d * x must vanish in Z/o
            let mult = if o.is_zero() {
                if d.is_zero() { BigInt::one() } else { BigInt::zero() }
            } else {
                o / d.gcd(o)
            };
            let x = BigInt::from(rng.gen_range(-3i64..=3)) * mult;
            m[(r, c)] = ring.element(&Q::from_integer(x)).expect("integer scalar");
        }
    }
    ring.norm_mat(tgt, &m)
}

/// A random class-2 algebra: generators `abar` of `A` multiply into a second
/// block `W`, with products symmetrised so the twist relation holds.
pub fn random_nil2_algebra<R: Rng + ?Sized>(rng: &mut R, operad: &Nil2Operad, max_gens: usize) -> Nil2Algebra {
    let ring = &operad.ring;
    let k = rng.gen_range(1..=max_gens.clamp(1, 2));
    let w = rng.gen_range(0..=(max_gens.saturating_sub(k)).min(2));
    let abar = ring.module(&random_orders(rng, ring, k));
    let wmod = ring.module(&random_orders(rng, ring, w));
    let module = abar.direct_sum(&wmod);
    let n = module.ngens();
    let p = operad.p2_dim();
    let k = abar.ngens();
    let src = operad.cosmash_module(&abar, &abar);
    let mut products = QMatrix::zeros(n, n * n * p);
    if rng.gen_bool(0.85) && wmod.ngens() > 0 {
        let mu0 = random_hom(rng, ring, &src, &wmod);
        let mu = ring.norm_mat(&wmod, &mu0.add(&ring.mul(&mu0, &operad.twist(k, k))));
        for i in 0..k {
            for j in 0..k {
                for x in 0..p {
                    let s = (i * k + j) * p + x;
                    let t = (i * n + j) * p + x;
                    for r in 0..wmod.ngens() {
                        products[(k + r, t)] = mu[(r, s)].clone();
                    }
                }
            }
        }
    }
    Nil2Algebra::from_products(operad, &module, &products, &products).expect("products land in the second block")
}

/// A random quotient map of modules `B -> A` (surjective by construction).
pub fn random_surjection<R: Rng + ?Sized>(rng: &mut R, ring: &BaseRing, max_gens: usize) -> (RModule, RModule, QMatrix) {
    let na = rng.gen_range(1..=max_gens.max(1));
    let a = ring.module(&random_orders(rng, ring, na));
    let na = a.ngens();
    let ne = rng.gen_range(0..=1);
    let extra = ring.module(&random_orders(rng, ring, ne));
    if rng.gen_bool(0.5) {
        // free cover
        let b = RModule::free(na).direct_sum(&extra);
        let g = random_hom(rng, ring, &extra, &a);
        let f = QMatrix::identity(na).hstack(&g);
        let f = ring.norm_mat(&a, &f);
        (b, a, f)
    } else {
        let b = a.direct_sum(&extra);
        let g = random_hom(rng, ring, &extra, &a);
        let f = ring.norm_mat(&a, &QMatrix::identity(na).hstack(&g));
        (b, a, f)
    }
}

/// A random abelian crossed module on small groups in canonical coordinates.
pub fn random_ab_xmod<R: Rng + ?Sized>(rng: &mut R) -> AbCrossedModule {
    const SHAPES: [&[i64]; 8] = [&[], &[0], &[0, 0], &[2], &[6], &[2, 0], &[2, 4], &[3, 0]];
    let pick = |rng: &mut R| {
        let f: Vec<BigInt> = SHAPES.choose(rng).expect("nonempty").iter().map(|&x| BigInt::from(x)).collect();
        (FgAbGroup::from_invariant_factors(f.clone()).expect("canonical shapes"), RModule { orders: f })
    };
    let (g, gm) = pick(rng);
    let (a, am) = pick(rng);
    let d = to_int_matrix(&random_hom(rng, &BaseRing::Integers, &am, &gm));
    AbCrossedModule::new(g, a, d).expect("random_hom respects torsion")
}
