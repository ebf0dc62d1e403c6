//! Two-step nilpotent operads with `P(1) = R` and their algebras.
//!
//! An algebra is a module `A`, its decomposables `D`, and
//! `mu2bar : (Abar (x) Abar) (x) P2 -> D` with `Abar = A / D`.

pub mod rmod;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{q, ExactError, Field, Matrix, QMatrix, Q};
use crate::Variety;
pub use rmod::{cols_matrix, format_structure, BaseRing, RModule, RQuotient, RSub};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Operad2Error {
    #[error("{variety} needs characteristic different from {p}")]
    BadCharacteristic { variety: Variety, p: u64 },
    #[error("t is not an involution on P2")]
    NotInvolution,
    #[error("algebras live over different operads")]
    OperadMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not an algebra map: {0}")]
    NotAMorphism(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Reduced symmetric operad with `P(1) = R`, `P(2)` a module with involution `t`,
/// and nothing in higher arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nil2Operad {
    pub ring: BaseRing,
    pub p2: RModule,
    pub t: QMatrix,
}

pub fn preset_operad(variety: Variety, ring: &BaseRing) -> Result<Nil2Operad, Operad2Error> {
    match variety {
        Variety::Comm => operad_from_bifunctor_data(ring, &RModule::free(1), &QMatrix::identity(1)),
        Variety::Assoc | Variety::Leib => operad_from_bifunctor_data(
            ring,
            &RModule::free(2),
            &QMatrix::permutation(&[1, 0]),
        ),
        Variety::Lie => {
            if ring.characteristic() == 2 {
                return Err(Operad2Error::BadCharacteristic { variety, p: 2 });
            }
            operad_from_bifunctor_data(ring, &RModule::free(1), &Matrix::from_vec(1, 1, vec![ring_neg_one(ring)]))
        }
    }
}

fn ring_neg_one(ring: &BaseRing) -> Q {
    match ring {
        BaseRing::Integers => q(-1),
        BaseRing::Field(f) => f.from_i64(-1),
    }
}

/// The operad whose algebras are plain modules (`P2 = 0`).
pub fn module_operad(ring: &BaseRing) -> Nil2Operad {
    Nil2Operad { ring: ring.clone(), p2: RModule::zero(), t: QMatrix::zeros(0, 0) }
}

/// `P(1) = R`, `P(2) = m` with symmetric-group action `t`.
pub fn operad_from_bifunctor_data(
    ring: &BaseRing,
    m: &RModule,
    t: &QMatrix,
) -> Result<Nil2Operad, Operad2Error> {
    ring.check_hom(m, m, t)?;
    let t = ring.norm_mat(m, t);
    let tt = ring.mul(&t, &t);
    if !ring.is_zero_map(m, &tt.sub(&QMatrix::identity(m.ngens()))) {
        return Err(Operad2Error::NotInvolution);
    }
    Ok(Nil2Operad { ring: ring.clone(), p2: m.clone(), t })
}

impl Nil2Operad {
    pub fn p2_dim(&self) -> usize {
        self.p2.ngens()
    }

    /// `(M (x) N) (x) P2`.
    pub fn cosmash_module(&self, m: &RModule, n: &RModule) -> RModule {
        self.ring.tensor3(m, n, &self.p2)
    }

    /// `m (x) n (x) x -> n (x) m (x) t x` from `M (x) N (x) P2` to `N (x) M (x) P2`.
    pub fn twist(&self, nm: usize, nn: usize) -> QMatrix {
        let p = self.p2_dim();
        let mut out = QMatrix::zeros(nn * nm * p, nm * nn * p);
        for i in 0..nm {
            for j in 0..nn {
                for x in 0..p {
                    let src = (i * nn + j) * p + x;
                    for y in 0..p {
                        let c = &self.t[(y, x)];
                        if !c.is_zero() {
                            out[((j * nm + i) * p + y, src)] = c.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// `f (x) g (x) 1_{P2}`.
    pub fn tensor_maps(&self, f: &QMatrix, g: &QMatrix) -> QMatrix {
        f.kron(g).kron(&QMatrix::identity(self.p2_dim()))
    }

    /// `m . (f (x) g (x) 1_{P2})` without forming the Kronecker product.
    pub fn after_tensor(&self, m: &QMatrix, f: &QMatrix, g: &QMatrix) -> QMatrix {
        let p = self.p2_dim();
        assert_eq!(m.cols(), f.rows() * g.rows() * p, "bilinear map and tensor factors disagree");
        let nz = |a: &QMatrix, c: usize| -> Vec<(usize, Q)> {
            (0..a.rows()).filter(|&r| !a[(r, c)].is_zero()).map(|r| (r, a[(r, c)].clone())).collect()
        };
        let fcols: Vec<_> = (0..f.cols()).map(|c| nz(f, c)).collect();
        let gcols: Vec<_> = (0..g.cols()).map(|c| nz(g, c)).collect();
        let mut out = QMatrix::zeros(m.rows(), f.cols() * g.cols() * p);
        for (i2, fc) in fcols.iter().enumerate() {
            for (j2, gc) in gcols.iter().enumerate() {
                for x in 0..p {
                    let col = (i2 * g.cols() + j2) * p + x;
                    for (i, a) in fc {
                        for (j, b) in gc {
                            let c = a * b;
                            let src = (i * g.rows() + j) * p + x;
                            for r in 0..m.rows() {
                                let v = &m[(r, src)];
                                if !v.is_zero() {
                                    out[(r, col)] += v * &c;
                                }
                            }
                        }
                    }
                }
            }
        }
        if let BaseRing::Field(field) = &self.ring {
            out = out.map(|x| field.norm(x.clone()));
        }
        out
    }
}

/// A class-2 algebra over a [`Nil2Operad`].
#[derive(Clone, Debug, Serialize)]
pub struct Nil2Algebra {
    pub operad: Nil2Operad,
    pub module: RModule,
    /// generators of `D` as columns in `A` coordinates
    pub decomposables: QMatrix,
    #[serde(skip)]
    pub abar: RQuotient,
    /// `ngens(A) x (nbar * nbar * p)`, indexed by `(i * nbar + j) * p + x`
    pub mu2bar: QMatrix,
}

impl Nil2Algebra {
    /// `D = 0` and trivial multiplication.
    pub fn abelian(operad: &Nil2Operad, module: &RModule) -> Self {
        let n = module.ngens();
        let d = QMatrix::zeros(n, 0);
        let abar = operad.ring.quotient(module, &d);
        let nb = abar.module.ngens();
        let p = operad.p2_dim();
        Nil2Algebra {
            operad: operad.clone(),
            module: module.clone(),
            decomposables: d,
            mu2bar: QMatrix::zeros(n, nb * nb * p),
            abar,
        }
    }

    /// Builds an algebra from products of generators of `A`:
    /// `products` is `ngens(A) x (n * n * p)` with column `(i * n + j) * p + x`
    /// holding `mu(e_i, e_j; x)`. Products involving `D` must vanish.
    pub fn from_products(
        operad: &Nil2Operad,
        module: &RModule,
        decomposables: &QMatrix,
        products: &QMatrix,
    ) -> Result<Self, Operad2Error> {
        let ring = &operad.ring;
        let n = module.ngens();
        let p = operad.p2_dim();
        if decomposables.rows() != n || products.shape() != (n, n * n * p) {
            return Err(Operad2Error::InvalidAlgebra("matrix shapes do not match the module".into()));
        }
        let src = ring.cosmash_module_of(module, &operad.p2);
        ring.check_hom(&src, module, products)?;
        let products = ring.norm_mat(module, products);
        // products must kill D in either slot
        for d in decomposables.columns() {
            for j in 0..n {
                for x in 0..p {
                    let e = ring.unit(n, j);
                    let ex = ring.unit(p, x);
                    for v in [
                        crate::exactlin::kron_vec(&crate::exactlin::kron_vec(&d, &e), &ex),
                        crate::exactlin::kron_vec(&crate::exactlin::kron_vec(&e, &d), &ex),
                    ] {
                        if !ring.is_zero_vec(module, &ring.mul_vec(&products, &v)) {
                            return Err(Operad2Error::InvalidAlgebra(
                                "a product with a decomposable factor is nonzero".into(),
                            ));
                        }
                    }
                }
            }
        }
        let abar = ring.quotient(module, decomposables);
        let s = &abar.section;
        let mu2bar = ring.norm_mat(module, &operad.after_tensor(&products, s, s));
        Ok(Nil2Algebra {
            operad: operad.clone(),
            module: module.clone(),
            decomposables: decomposables.clone(),
            abar,
            mu2bar,
        })
    }

    /// Assembles an algebra from an explicit quotient and `mu2bar`.
    pub fn from_parts(
        operad: &Nil2Operad,
        module: &RModule,
        decomposables: &QMatrix,
        abar: RQuotient,
        mu2bar: &QMatrix,
    ) -> Self {
        Nil2Algebra {
            operad: operad.clone(),
            module: module.clone(),
            decomposables: decomposables.clone(),
            mu2bar: operad.ring.norm_mat(module, mu2bar),
            abar,
        }
    }

    pub fn ring(&self) -> &BaseRing {
        &self.operad.ring
    }

    pub fn ngens(&self) -> usize {
        self.module.ngens()
    }

    pub fn nbar(&self) -> usize {
        self.abar.module.ngens()
    }

    /// `(Abar (x) Abar) (x) P2`.
    pub fn mu_source(&self) -> RModule {
        self.operad.cosmash_module(&self.abar.module, &self.abar.module)
    }

    /// `mu2bar(u (x) v (x) x)` for `u, v` in `Abar` coordinates.
    pub fn product(&self, u: &[Q], v: &[Q], x: &[Q]) -> Vec<Q> {
        let w = crate::exactlin::kron_vec(&crate::exactlin::kron_vec(u, v), x);
        self.ring().norm_vec(&self.module, &self.ring().mul_vec(&self.mu2bar, &w))
    }

    /// The product lifted to `A (x) A (x) P2`.
    pub fn lifted_products(&self) -> QMatrix {
        let pi = &self.abar.projection;
        self.ring().norm_mat(&self.module, &self.operad.after_tensor(&self.mu2bar, pi, pi))
    }

    pub fn is_abelian(&self) -> bool {
        self.ring().is_zero_map(&self.module, &self.decomposables)
            && self.ring().is_zero_map(&self.module, &self.mu2bar)
    }

    pub fn structure(&self) -> Vec<BigInt> {
        self.ring().structure(&self.module)
    }
}

impl BaseRing {
    /// `(M (x) M) (x) P2`.
    pub fn cosmash_module_of(&self, m: &RModule, p2: &RModule) -> RModule {
        self.tensor3(m, m, p2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    NotHomomorphism,
    OutsideDecomposables,
    NotOntoDecomposables,
    Symmetry,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn show_vec(v: &[Q]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

pub fn validate_algebra(a: &Nil2Algebra) -> ValidationReport {
    let ring = a.ring();
    let mut violations = vec![];
    let src = a.mu_source();
    if let Err(e) = ring.check_hom(&src, &a.module, &a.mu2bar) {
        violations.push(Violation { kind: ViolationKind::NotHomomorphism, detail: e.to_string() });
    }
    if let Some(j) = ring.first_outside(&a.module, &a.decomposables, &a.mu2bar) {
        violations.push(Violation {
            kind: ViolationKind::OutsideDecomposables,
            detail: format!("product column {j} = {}", show_vec(&a.mu2bar.col(j))),
        });
    }
    if let Some(j) = ring.first_outside(&a.module, &a.mu2bar, &a.decomposables) {
        violations.push(Violation {
            kind: ViolationKind::NotOntoDecomposables,
            detail: format!("decomposable {} is not a sum of products", show_vec(&a.decomposables.col(j))),
        });
    }
    let n = a.nbar();
    let sym = ring.mul(&a.mu2bar, &a.operad.twist(n, n));
    let diff = ring.norm_mat(&a.module, &a.mu2bar.sub(&sym));
    if let Some(j) = (0..diff.cols()).find(|&j| diff.col(j).iter().any(|x| !x.is_zero())) {
        let p = a.operad.p2_dim();
        violations.push(Violation {
            kind: ViolationKind::Symmetry,
            detail: format!(
                "mu(e{} e{}; x{}) differs from its twisted counterpart by {}",
                j / p / n,
                (j / p) % n,
                j % p,
                show_vec(&diff.col(j))
            ),
        });
    }
    ValidationReport { valid: violations.is_empty(), violations }
}

/// A module map between algebras, validated against `D` and `mu2bar`.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub source: Nil2Algebra,
    pub target: Nil2Algebra,
    pub matrix: QMatrix,
}

impl AlgebraMap {
    pub fn new(source: &Nil2Algebra, target: &Nil2Algebra, matrix: &QMatrix) -> Result<Self, Operad2Error> {
        if source.operad != target.operad {
            return Err(Operad2Error::OperadMismatch);
        }
        let ring = source.ring();
        ring.check_hom(&source.module, &target.module, matrix)?;
        let matrix = ring.norm_mat(&target.module, matrix);
        let image_d = ring.mul(&matrix, &source.decomposables);
        if let Some(j) = ring.first_outside(&target.module, &target.decomposables, &image_d) {
            return Err(Operad2Error::NotAMorphism(format!("decomposable {j} leaves D")));
        }
        let fbar = induced_bar(source, target, &matrix);
        let lhs = ring.mul(&matrix, &source.mu2bar);
        let rhs = source.operad.after_tensor(&target.mu2bar, &fbar, &fbar);
        if !ring.is_zero_map(&target.module, &lhs.sub(&rhs)) {
            return Err(Operad2Error::NotAMorphism("does not commute with the products".into()));
        }
        Ok(AlgebraMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn bar(&self) -> QMatrix {
        induced_bar(&self.source, &self.target, &self.matrix)
    }
}

/// `fbar = pi_T f s_S : Abar_S -> Abar_T`.
pub fn induced_bar(source: &Nil2Algebra, target: &Nil2Algebra, f: &QMatrix) -> QMatrix {
    let ring = source.ring();
    let m = ring.mul(&ring.mul(&target.abar.projection, f), &source.abar.section);
    ring.norm_mat(&target.abar.module, &m)
}

/// `A + B` with injections; the mixed summand is `Abar (x) Bbar (x) P2`.
#[derive(Clone, Debug)]
pub struct Coproduct2 {
    pub algebra: Nil2Algebra,
    pub a: Nil2Algebra,
    pub b: Nil2Algebra,
    pub inj_a: QMatrix,
    pub inj_b: QMatrix,
    /// inclusion of the mixed summand
    pub mixed: QMatrix,
}

fn place(r0: usize, c0: usize, block: &QMatrix, out: &mut QMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            out[(r0 + i, c0 + j)] = block[(i, j)].clone();
        }
    }
}

pub fn coproduct2(a: &Nil2Algebra, b: &Nil2Algebra) -> Result<Coproduct2, Operad2Error> {
    if a.operad != b.operad {
        return Err(Operad2Error::OperadMismatch);
    }
    let op = &a.operad;
    let ring = &op.ring;
    let (na, nb) = (a.ngens(), b.ngens());
    let (ka, kb) = (a.nbar(), b.nbar());
    let p = op.p2_dim();
    let mixed_mod = op.cosmash_module(&a.abar.module, &b.abar.module);
    let nm = mixed_mod.ngens();
    let module = a.module.direct_sum(&b.module).direct_sum(&mixed_mod);
    let n = na + nb + nm;

    let mut d = QMatrix::zeros(n, a.decomposables.cols() + b.decomposables.cols() + nm);
    place(0, 0, &a.decomposables, &mut d);
    place(na, a.decomposables.cols(), &b.decomposables, &mut d);
    place(na + nb, a.decomposables.cols() + b.decomposables.cols(), &QMatrix::identity(nm), &mut d);

    // products on (Abar + Bbar) (x) (Abar + Bbar) (x) P2
    let k = ka + kb;
    let mut blocks = QMatrix::zeros(n, k * k * p);
    for i in 0..k {
        for j in 0..k {
            for x in 0..p {
                let col = (i * k + j) * p + x;
                if i < ka && j < ka {
                    let src = (i * ka + j) * p + x;
                    for r in 0..na {
                        blocks[(r, col)] = a.mu2bar[(r, src)].clone();
                    }
                } else if i >= ka && j >= ka {
                    let src = ((i - ka) * kb + (j - ka)) * p + x;
                    for r in 0..nb {
                        blocks[(na + r, col)] = b.mu2bar[(r, src)].clone();
                    }
                } else if i < ka {
                    // abar (x) bbar (x) x lands on itself
                    blocks[(na + nb + (i * kb + (j - ka)) * p + x, col)] = Q::one();
                } else {
                    // bbar (x) abar (x) x -> abar (x) bbar (x) t x
                    let (ai, bj) = (j, i - ka);
                    for y in 0..p {
                        let c = &op.t[(y, x)];
                        if !c.is_zero() {
                            blocks[(na + nb + (ai * kb + bj) * p + y, col)] = c.clone();
                        }
                    }
                }
            }
        }
    }
    let abar = ring.quotient(&module, &d);
    // fresh quotient coordinates -> Abar + Bbar
    let mut split = QMatrix::zeros(k, n);
    place(0, 0, &a.abar.projection, &mut split);
    place(ka, na, &b.abar.projection, &mut split);
    let to_blocks = ring.mul(&split, &abar.section);
    let mu2bar = op.after_tensor(&blocks, &to_blocks, &to_blocks);
    let algebra = Nil2Algebra::from_parts(op, &module, &d, abar, &mu2bar);

    let mut inj_a = QMatrix::zeros(n, na);
    place(0, 0, &QMatrix::identity(na), &mut inj_a);
    let mut inj_b = QMatrix::zeros(n, nb);
    place(na, 0, &QMatrix::identity(nb), &mut inj_b);
    let mut mixed = QMatrix::zeros(n, nm);
    place(na + nb, 0, &QMatrix::identity(nm), &mut mixed);
    Ok(Coproduct2 { algebra, a: a.clone(), b: b.clone(), inj_a, inj_b, mixed })
}

impl Coproduct2 {
    /// `<f, g>(a, b, a' (x) b' (x) x) = f(a) + g(b) + mu_C(fbar a' (x) gbar b' (x) x)`.
    pub fn copair(&self, f: &AlgebraMap, g: &AlgebraMap) -> Result<AlgebraMap, Operad2Error> {
        let c = &f.target;
        if g.target.module != c.module || g.target.operad != c.operad {
            return Err(Operad2Error::NotAMorphism("maps have different targets".into()));
        }
        let ring = c.ring();
        let p = c.operad.p2_dim();
        let (ka, kb) = (self.a.nbar(), self.b.nbar());
        let fbar = f.bar();
        let gbar = g.bar();
        let mut cols: Vec<Vec<Q>> = f.matrix.columns();
        cols.extend(g.matrix.columns());
        for i in 0..ka {
            for j in 0..kb {
                for x in 0..p {
                    cols.push(c.product(&fbar.col(i), &gbar.col(j), &ring.unit(p, x)));
                }
            }
        }
        let m = cols_matrix(&cols, c.ngens());
        AlgebraMap::new(&self.algebra, c, &m)
    }
}

/// `A x B` with componentwise structure.
#[derive(Clone, Debug)]
pub struct Product2 {
    pub algebra: Nil2Algebra,
    pub proj_a: QMatrix,
    pub proj_b: QMatrix,
}

pub fn product2(a: &Nil2Algebra, b: &Nil2Algebra) -> Result<Product2, Operad2Error> {
    if a.operad != b.operad {
        return Err(Operad2Error::OperadMismatch);
    }
    let op = &a.operad;
    let ring = &op.ring;
    let (na, nb) = (a.ngens(), b.ngens());
    let (ka, kb) = (a.nbar(), b.nbar());
    let p = op.p2_dim();
    let n = na + nb;
    let module = a.module.direct_sum(&b.module);
    let d = a.decomposables.block_diag(&b.decomposables);
    let k = ka + kb;
    let mut blocks = QMatrix::zeros(n, k * k * p);
    for i in 0..k {
        for j in 0..k {
            for x in 0..p {
                let col = (i * k + j) * p + x;
                if i < ka && j < ka {
                    let src = (i * ka + j) * p + x;
                    for r in 0..na {
                        blocks[(r, col)] = a.mu2bar[(r, src)].clone();
                    }
                } else if i >= ka && j >= ka {
                    let src = ((i - ka) * kb + (j - ka)) * p + x;
                    for r in 0..nb {
                        blocks[(na + r, col)] = b.mu2bar[(r, src)].clone();
                    }
                }
            }
        }
    }
    let abar = ring.quotient(&module, &d);
    let split = a.abar.projection.block_diag(&b.abar.projection);
    let to_blocks = ring.mul(&split, &abar.section);
    let mu2bar = op.after_tensor(&blocks, &to_blocks, &to_blocks);
    let algebra = Nil2Algebra::from_parts(op, &module, &d, abar, &mu2bar);
    let mut proj_a = QMatrix::zeros(na, n);
    place(0, 0, &QMatrix::identity(na), &mut proj_a);
    let mut proj_b = QMatrix::zeros(nb, n);
    place(0, na, &QMatrix::identity(nb), &mut proj_b);
    Ok(Product2 { algebra, proj_a, proj_b })
}

/// The canonical comparison `A + B -> A x B`.
pub fn comparison_map(cp: &Coproduct2) -> QMatrix {
    let (na, nb) = (cp.a.ngens(), cp.b.ngens());
    let n = cp.algebra.ngens();
    let mut m = QMatrix::zeros(na + nb, n);
    place(0, 0, &QMatrix::identity(na + nb), &mut m);
    m
}

/// `A <> B = (Abar (x) Bbar) (x) P2`, abelian, with its inclusion into `A + B`.
#[derive(Clone, Debug)]
pub struct Cosmash2 {
    pub algebra: Nil2Algebra,
    pub coproduct: Coproduct2,
    pub inclusion: QMatrix,
}

pub fn cosmash2(a: &Nil2Algebra, b: &Nil2Algebra) -> Result<Cosmash2, Operad2Error> {
    let coproduct = coproduct2(a, b)?;
    let m = a.operad.cosmash_module(&a.abar.module, &b.abar.module);
    let algebra = Nil2Algebra::abelian(&a.operad, &m);
    debug_assert!(algebra.is_abelian());
    let inclusion = coproduct.mixed.clone();
    Ok(Cosmash2 { algebra, coproduct, inclusion })
}

/// Invariant factors (or dimension) of `ker(A + B -> A x B)` computed directly.
pub fn cosmash_kernel_structure(a: &Nil2Algebra, b: &Nil2Algebra) -> Result<Vec<BigInt>, Operad2Error> {
    let cp = coproduct2(a, b)?;
    let ring = a.ring();
    let target = a.module.direct_sum(&b.module);
    let k = ring.kernel(&cp.algebra.module, &target, &comparison_map(&cp));
    let sub = ring.submodule(&cp.algebra.module, &k);
    Ok(ring.structure(&sub.module))
}

/// `A / D` as an abelian algebra together with the quotient map.
#[derive(Clone, Debug)]
pub struct Abelianized {
    pub algebra: Nil2Algebra,
    pub quotient: QMatrix,
}

pub fn abelianization2(a: &Nil2Algebra) -> Abelianized {
    Abelianized {
        algebra: Nil2Algebra::abelian(&a.operad, &a.abar.module),
        quotient: a.abar.projection.clone(),
    }
}

/// `A (x) B = (A/J2 (x) B/J2) (x) P2`: the cosmash of the abelianisations.
///
/// Only meaningful for algebras of class at most 2, which is every value of
/// [`Nil2Algebra`]; other algebras must be nilpotentised first.
pub fn bilinear2(a: &Nil2Algebra, b: &Nil2Algebra) -> Result<Nil2Algebra, Operad2Error> {
    let r = cosmash2(&abelianization2(a).algebra, &abelianization2(b).algebra)?;
    Ok(r.algebra)
}

/// `a (x) b (x) x -> b (x) a (x) t x` as a map `A <> B -> B <> A`.
pub fn symmetry2(a: &Nil2Algebra, b: &Nil2Algebra) -> Result<AlgebraMap, Operad2Error> {
    let ab = cosmash2(a, b)?.algebra;
    let ba = cosmash2(b, a)?.algebra;
    let m = a.operad.twist(a.nbar(), b.nbar());
    AlgebraMap::new(&ab, &ba, &m)
}

/// `f <> g : A <> B -> A' <> B'` for algebra maps `f`, `g`.
pub fn cosmash_map(f: &AlgebraMap, g: &AlgebraMap) -> QMatrix {
    f.source.operad.tensor_maps(&f.bar(), &g.bar())
}

/// `[gamma_1, gamma_2, gamma_3] = [A, D, 0]` as generator matrices.
pub fn lcs2(a: &Nil2Algebra) -> Vec<QMatrix> {
    let n = a.ngens();
    vec![QMatrix::identity(n), a.decomposables.clone(), QMatrix::zeros(n, 0)]
}

/// `J_1, J_2, J_3` computed from the products: `J_2 = im mu`, `J_3` the products
/// with a factor in `J_2`.
pub fn j_filtration2(a: &Nil2Algebra) -> Vec<QMatrix> {
    let ring = a.ring();
    let n = a.ngens();
    let k = a.nbar();
    let p = a.operad.p2_dim();
    let j2 = a.mu2bar.clone();
    let j2bar = ring.norm_mat(&a.abar.module, &ring.mul(&a.abar.projection, &j2));
    let mut j3 = vec![];
    for d in j2bar.columns() {
        for i in 0..k {
            for x in 0..p {
                let e = ring.unit(k, i);
                let ex = ring.unit(p, x);
                j3.push(a.product(&d, &e, &ex));
                j3.push(a.product(&e, &d, &ex));
            }
        }
    }
    vec![QMatrix::identity(n), j2, cols_matrix(&j3, n)]
}

/// Exactness report for `X (x) K -> X (x) B -> X (x) A -> 0`.
#[derive(Clone, Debug, Serialize)]
pub struct RightExactReport {
    pub surjective: bool,
    pub composite_zero: bool,
    pub kernel_in_image: bool,
    pub structures: [Vec<BigInt>; 3],
}

impl RightExactReport {
    pub fn exact(&self) -> bool {
        self.surjective && self.composite_zero && self.kernel_in_image
    }
}

/// Tensors the surjection `f : B -> A` of modules with `X` and checks exactness.
pub fn right_exactness2(
    x: &Nil2Algebra,
    b: &RModule,
    a: &RModule,
    f: &QMatrix,
) -> Result<RightExactReport, Operad2Error> {
    let ring = x.ring();
    let op = &x.operad;
    ring.check_hom(b, a, f)?;
    let kgens = ring.kernel(b, a, f);
    let ksub = ring.submodule(b, &kgens);
    let xb = &x.abar.module;
    let t_k = op.cosmash_module(xb, &ksub.module);
    let t_b = op.cosmash_module(xb, b);
    let t_a = op.cosmash_module(xb, a);
    let id = QMatrix::identity(xb.ngens());
    let inc = op.tensor_maps(&id, &ksub.inclusion);
    let fx = op.tensor_maps(&id, f);
    let image_f = ring.quotient(&t_a, &fx);
    let surjective = ring.is_trivial(&image_f.module);
    let composite_zero = ring.is_zero_map(&t_a, &ring.mul(&fx, &inc));
    let ker = ring.kernel(&t_b, &t_a, &fx);
    let kernel_in_image = ring.span_le(&t_b, &ker, &inc);
    Ok(RightExactReport {
        surjective,
        composite_zero,
        kernel_in_image,
        structures: [ring.structure(&t_k), ring.structure(&t_b), ring.structure(&t_a)],
    })
}

pub fn rational() -> BaseRing {
    BaseRing::Field(Field::Rational)
}

/// The free class-2 algebra on one generator for a single-output operad:
/// `A = R^2`, `D = span(e2)`, `e1 e1 = e2` under the first operation.
pub fn free_nil2_one_generator(operad: &Nil2Operad) -> Result<Nil2Algebra, Operad2Error> {
    let p = operad.p2_dim();
    let module = RModule::free(2);
    let d = cols_matrix(&[vec![Q::zero(), Q::one()]], 2);
    let mut products = QMatrix::zeros(2, 4 * p);
    if p > 0 {
        products[(1, 0)] = Q::one();
    }
    Nil2Algebra::from_products(operad, &module, &d, &products)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn presets() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        assert!(comm.t.is_identity());
        let assoc = preset_operad(Variety::Assoc, &BaseRing::Integers).unwrap();
        assert_eq!(assoc.t, QMatrix::permutation(&[1, 0]));
        let lie = preset_operad(Variety::Lie, &qq).unwrap();
        assert_eq!(lie.t[(0, 0)], q(-1));
        let f2 = BaseRing::Field(Field::Prime(2));
        assert!(matches!(
            preset_operad(Variety::Lie, &f2),
            Err(Operad2Error::BadCharacteristic { .. })
        ));
    }

    #[test]
    fn bifunctor_data() {
        let zz = BaseRing::Integers;
        let op = operad_from_bifunctor_data(&zz, &RModule::free(1), &QMatrix::identity(1)).unwrap();
        assert_eq!(op, preset_operad(Variety::Comm, &zz).unwrap());
        let bad = Matrix::from_vec(1, 1, vec![q(2)]);
        assert!(matches!(
            operad_from_bifunctor_data(&zz, &RModule::free(1), &bad),
            Err(Operad2Error::NotInvolution)
        ));
        // P2 = Z/2: the bilinear product of Z-modules is (A (x) B) (x) Z/2
        let m2 = RModule { orders: vec![z(2)] };
        let op = operad_from_bifunctor_data(&zz, &m2, &QMatrix::identity(1)).unwrap();
        let a = Nil2Algebra::abelian(&op, &RModule { orders: vec![z(0)] });
        let b = Nil2Algebra::abelian(&op, &RModule { orders: vec![z(6)] });
        let c = cosmash2(&a, &b).unwrap();
        assert_eq!(c.algebra.structure(), vec![z(2)]);
    }

    #[test]
    fn validation() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        let ab = Nil2Algebra::abelian(&comm, &RModule::free(2));
        assert!(validate_algebra(&ab).valid);
        let free = free_nil2_one_generator(&comm).unwrap();
        assert!(validate_algebra(&free).valid);
        // mu2bar hitting a non-decomposable vector
        let mut bad = free.clone();
        bad.mu2bar[(0, 0)] = q(1);
        let r = validate_algebra(&bad);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::OutsideDecomposables));
    }

    #[test]
    fn lie_symmetry_violation_detected() {
        let qq = rational();
        let lie = preset_operad(Variety::Lie, &qq).unwrap();
        // e1 e1 = e2 is not antisymmetric
        let r = free_nil2_one_generator(&lie).map(|a| validate_algebra(&a).valid);
        assert!(!r.unwrap());
    }

    #[test]
    fn coproduct_examples() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        let a = Nil2Algebra::abelian(&comm, &RModule::free(1));
        let cp = coproduct2(&a, &a).unwrap();
        assert_eq!(cp.algebra.ngens(), 3);
        assert!(validate_algebra(&cp.algebra).valid);
        let assoc = preset_operad(Variety::Assoc, &qq).unwrap();
        let a = Nil2Algebra::abelian(&assoc, &RModule::free(1));
        let cp = coproduct2(&a, &a).unwrap();
        assert_eq!(cp.algebra.ngens(), 4);
        assert!(validate_algebra(&cp.algebra).valid);
        let zero = Nil2Algebra::abelian(&assoc, &RModule::zero());
        let cp = coproduct2(&zero, &a).unwrap();
        assert_eq!(cp.algebra.ngens(), 1);
    }

    #[test]
    fn injections_and_copair() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        let a = Nil2Algebra::abelian(&comm, &RModule::free(1));
        let b = free_nil2_one_generator(&comm).unwrap();
        let cp = coproduct2(&a, &b).unwrap();
        AlgebraMap::new(&a, &cp.algebra, &cp.inj_a).unwrap();
        AlgebraMap::new(&b, &cp.algebra, &cp.inj_b).unwrap();
        // copair of the injections is the identity
        let ia = AlgebraMap::new(&a, &cp.algebra, &cp.inj_a).unwrap();
        let ib = AlgebraMap::new(&b, &cp.algebra, &cp.inj_b).unwrap();
        let id = cp.copair(&ia, &ib).unwrap();
        assert!(id.matrix.is_identity());
    }

    #[test]
    fn cosmash_examples() {
        let zz = BaseRing::Integers;
        let comm = preset_operad(Variety::Comm, &zz).unwrap();
        let a = Nil2Algebra::abelian(&comm, &RModule { orders: vec![z(4)] });
        let b = Nil2Algebra::abelian(&comm, &RModule { orders: vec![z(6)] });
        assert_eq!(cosmash2(&a, &b).unwrap().algebra.structure(), vec![z(2)]);
        assert_eq!(cosmash_kernel_structure(&a, &b).unwrap(), vec![z(2)]);
        let zero = Nil2Algebra::abelian(&comm, &RModule::zero());
        assert!(cosmash2(&a, &zero).unwrap().algebra.structure().is_empty());
        let qq = rational();
        let leib = preset_operad(Variety::Leib, &qq).unwrap();
        let a = Nil2Algebra::abelian(&leib, &RModule::free(2));
        let b = Nil2Algebra::abelian(&leib, &RModule::free(3));
        assert_eq!(cosmash2(&a, &b).unwrap().algebra.ngens(), 12);
    }

    #[test]
    fn bilinear_and_abelianization() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        let free = free_nil2_one_generator(&comm).unwrap();
        assert_eq!(bilinear2(&free, &free).unwrap().ngens(), 1);
        assert_eq!(abelianization2(&free).algebra.ngens(), 1);
        let a = Nil2Algebra::abelian(&comm, &RModule::free(2));
        let cp = coproduct2(&a, &free).unwrap();
        assert_eq!(abelianization2(&cp.algebra).algebra.ngens(), 3);
    }

    #[test]
    fn symmetry_presets() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        let a = Nil2Algebra::abelian(&comm, &RModule::free(2));
        let b = Nil2Algebra::abelian(&comm, &RModule::free(3));
        let s = symmetry2(&a, &b).unwrap();
        // plain twist: (i, j) -> (j, i)
        let perm: Vec<usize> = (0..6).map(|idx| (idx % 3) * 2 + idx / 3).collect();
        assert_eq!(s.matrix, QMatrix::permutation(&perm));
        let lie = preset_operad(Variety::Lie, &qq).unwrap();
        let a = Nil2Algebra::abelian(&lie, &RModule::free(1));
        assert_eq!(symmetry2(&a, &a).unwrap().matrix, Matrix::from_vec(1, 1, vec![q(-1)]));
        let assoc = preset_operad(Variety::Assoc, &qq).unwrap();
        let a = Nil2Algebra::abelian(&assoc, &RModule::free(1));
        assert_eq!(symmetry2(&a, &a).unwrap().matrix, QMatrix::permutation(&[1, 0]));
        let back = symmetry2(&a, &a).unwrap().matrix;
        assert!(back.mul(&back).is_identity());
    }

    #[test]
    fn lcs_and_j_filtration() {
        let qq = rational();
        let comm = preset_operad(Variety::Comm, &qq).unwrap();
        let free = free_nil2_one_generator(&comm).unwrap();
        let lcs = lcs2(&free);
        let j = j_filtration2(&free);
        let ring = free.ring();
        assert!(ring.span_eq(&free.module, &lcs[1], &j[1]));
        assert!(ring.is_zero_map(&free.module, &j[2]));
        let a = Nil2Algebra::abelian(&comm, &RModule::free(1));
        let b = Nil2Algebra::abelian(&comm, &RModule::free(1));
        let cp = coproduct2(&a, &b).unwrap();
        assert!(ring.span_eq(&cp.algebra.module, &lcs2(&cp.algebra)[1], &cp.mixed));
    }

    #[test]
    fn comparison_is_onto_with_cosmash_kernel() {
        let qq = rational();
        let assoc = preset_operad(Variety::Assoc, &qq).unwrap();
        let a = Nil2Algebra::abelian(&assoc, &RModule::free(2));
        let b = Nil2Algebra::abelian(&assoc, &RModule::free(1));
        let cp = coproduct2(&a, &b).unwrap();
        assert_eq!(Field::Rational.rank(&comparison_map(&cp)), 3);
        assert_eq!(cosmash_kernel_structure(&a, &b).unwrap().len(), 4);
    }

    #[test]
    fn right_exact_small() {
        let zz = BaseRing::Integers;
        let comm = preset_operad(Variety::Comm, &zz).unwrap();
        let x = Nil2Algebra::abelian(&comm, &RModule { orders: vec![z(4)] });
        // Z -> Z/6 reduction, kernel 6Z
        let f = Matrix::from_vec(1, 1, vec![q(1)]);
        let r = right_exactness2(&x, &RModule::free(1), &RModule { orders: vec![z(6)] }, &f).unwrap();
        assert!(r.exact());
        assert_eq!(r.structures[2], vec![z(2)]);
    }
}
