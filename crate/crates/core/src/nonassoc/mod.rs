//! Finite-dimensional algebras over a field given by structure constants.

pub mod rep;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{field_quotient, kron_vec, ExactError, Field, Matrix, QMatrix, Q};
use crate::operad2::{cosmash2, preset_operad, Nil2Algebra, RModule, BaseRing};
use crate::Variety;

pub use rep::{rep_tensor_lie, LieRep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NonassocError {
    #[error("expected a {expected} algebra, found {found}")]
    WrongVariety { expected: String, found: String },
    #[error("algebras have different varieties or fields")]
    VarietyMismatch,
    #[error("subspace does not fit the ambient algebra")]
    NotSubspace,
    #[error("not an ideal: {0}")]
    NotIdeal(String),
    #[error("{variety} identity fails: {detail}")]
    IdentityFailure { variety: Variety, detail: String },
    #[error("representations are over different algebras")]
    AlgebraMismatch,
    #[error("representation axiom fails on basis pair ({0}, {1})")]
    RepAxiomFailure(usize, usize),
    #[error("invalid structure constants: {0}")]
    InvalidConstants(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `e_i e_j = sum_k c[i][j][k] e_k`, stored as a `dim x dim^2` matrix whose
/// column `i * dim + j` is `e_i e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SCAlgebra {
    pub field: Field,
    pub dim: usize,
    pub table: QMatrix,
    pub variety: Option<Variety>,
}

fn variety_name(v: Option<Variety>) -> String {
    v.map_or_else(|| "untagged".to_string(), |v| v.to_string())
}

impl SCAlgebra {
    /// Builds an algebra and, when tagged, checks the variety identities.
    pub fn new(field: &Field, dim: usize, table: &QMatrix, variety: Option<Variety>) -> Result<Self, NonassocError> {
        if table.shape() != (dim, dim * dim) {
            return Err(NonassocError::InvalidConstants(format!(
                "table has shape {:?}, expected ({dim}, {})",
                table.shape(),
                dim * dim
            )));
        }
        let mut entries = Vec::with_capacity(dim * dim * dim);
        for x in table.data() {
            entries.push(field.element(x)?);
        }
        let a = SCAlgebra { field: field.clone(), dim, table: Matrix::from_vec(dim, dim * dim, entries), variety };
        if let Some(v) = variety {
            let report = check_identity(&a, v);
            if let Some(f) = report.failures.first() {
                return Err(NonassocError::IdentityFailure { variety: v, detail: f.to_string() });
            }
        }
        Ok(a)
    }

    /// Builds from `(i, j, e_i e_j)` triples; for Lie algebras the opposite
    /// bracket `e_j e_i = -e_i e_j` is filled in.
    pub fn from_products(
        field: &Field,
        dim: usize,
        products: &[(usize, usize, Vec<Q>)],
        variety: Option<Variety>,
    ) -> Result<Self, NonassocError> {
        let mut table = QMatrix::zeros(dim, dim * dim);
        for (i, j, v) in products {
            if *i >= dim || *j >= dim || v.len() != dim {
                return Err(NonassocError::InvalidConstants(format!("bad product entry ({i}, {j})")));
            }
            for k in 0..dim {
                table[(k, i * dim + j)] = v[k].clone();
                if variety == Some(Variety::Lie) && i != j {
                    table[(k, j * dim + i)] = field.neg(&v[k]);
                }
            }
        }
        SCAlgebra::new(field, dim, &table, variety)
    }

    pub fn abelian(field: &Field, dim: usize, variety: Option<Variety>) -> Self {
        SCAlgebra { field: field.clone(), dim, table: QMatrix::zeros(dim, dim * dim), variety }
    }

    pub fn with_variety(&self, variety: Option<Variety>) -> Result<Self, NonassocError> {
        SCAlgebra::new(&self.field, self.dim, &self.table, variety)
    }

    pub fn mul(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        self.field.mul_vec(&self.table, &kron_vec(u, v))
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Q> {
        self.table.col(i * self.dim + j)
    }

    pub fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    /// Matrix of `v -> x v`.
    pub fn left_mult(&self, x: &[Q]) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|j| self.mul(x, &self.unit(j))).collect();
        Matrix::from_cols(&cols, self.dim)
    }

    /// Matrix of `v -> v x`.
    pub fn right_mult(&self, x: &[Q]) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|j| self.mul(&self.unit(j), x)).collect();
        Matrix::from_cols(&cols, self.dim)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::whole(&self.field, self.dim)
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(&self.field, self.dim)
    }

    /// Constants in the basis given by the columns of the invertible `p`.
    pub fn change_basis(&self, p: &QMatrix) -> Result<Self, NonassocError> {
        let pinv = self.field.inverse(p)?;
        let n = self.dim;
        let mut table = QMatrix::zeros(n, n * n);
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul(&p.col(i), &p.col(j));
                let c = self.field.mul_vec(&pinv, &prod);
                for k in 0..n {
                    table[(k, i * n + j)] = c[k].clone();
                }
            }
        }
        Ok(SCAlgebra { field: self.field.clone(), dim: n, table, variety: self.variety })
    }

    /// Direct product with componentwise multiplication.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, NonassocError> {
        if self.field != other.field {
            return Err(NonassocError::VarietyMismatch);
        }
        let (n, m) = (self.dim, other.dim);
        let d = n + m;
        let mut table = QMatrix::zeros(d, d * d);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table[(k, i * d + j)] = self.table[(k, i * n + j)].clone();
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    table[(n + k, (n + i) * d + n + j)] = other.table[(k, i * m + j)].clone();
                }
            }
        }
        let variety = if self.variety == other.variety { self.variety } else { None };
        Ok(SCAlgebra { field: self.field.clone(), dim: d, table, variety })
    }

    /// `{x : x a = a x = 0 for all a}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows: Vec<Vec<Q>> = vec![];
        for j in 0..n {
            rows.extend(self.right_mult(&self.unit(j)).to_rows());
            rows.extend(self.left_mult(&self.unit(j)).to_rows());
        }
        let m = Matrix::from_rows(rows, n);
        Subspace::spanned_by(&self.field, n, &self.field.kernel(&m))
    }
}

impl fmt::Display for SCAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} algebra of dimension {} over {}", variety_name(self.variety), self.dim, self.field)
    }
}

/// A subspace of `F^n` with an independent column basis.
#[derive(Clone, Debug, Serialize)]
pub struct Subspace {
    pub field: Field,
    pub ambient_dim: usize,
    pub basis: QMatrix,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.le(other) && other.le(self)
    }
}

impl Subspace {
    pub fn spanned_by(field: &Field, n: usize, gens: &QMatrix) -> Self {
        assert_eq!(gens.rows(), n, "generators have the wrong length");
        let basis = field.column_basis(&field.reduce_matrix(gens));
        Subspace { field: field.clone(), ambient_dim: n, basis }
    }

    pub fn from_vectors(field: &Field, n: usize, vs: &[Vec<Q>]) -> Self {
        Subspace::spanned_by(field, n, &Matrix::from_cols(vs, n))
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        Subspace { field: field.clone(), ambient_dim: n, basis: QMatrix::zeros(n, 0) }
    }

    pub fn whole(field: &Field, n: usize) -> Self {
        Subspace { field: field.clone(), ambient_dim: n, basis: QMatrix::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn vectors(&self) -> Vec<Vec<Q>> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.field.in_span(&self.basis, v)
    }

    pub fn le(&self, other: &Self) -> bool {
        self.vectors().iter().all(|v| other.contains(v))
    }

    pub fn join(&self, other: &Self) -> Self {
        Subspace::spanned_by(&self.field, self.ambient_dim, &self.basis.hstack(&other.basis))
    }

    pub fn meet(&self, other: &Self) -> Self {
        // x = B u = C v  <=>  [B | -C] (u, v) = 0
        let m = self.basis.hstack(&other.basis.neg());
        let k = self.field.kernel(&m);
        let idx: Vec<usize> = (0..self.dim()).collect();
        let u = k.select_rows(&idx);
        Subspace::spanned_by(&self.field, self.ambient_dim, &self.field.mul_mat(&self.basis, &u))
    }

    fn check(&self, a: &SCAlgebra) -> Result<(), NonassocError> {
        if self.ambient_dim != a.dim || self.field != a.field {
            return Err(NonassocError::NotSubspace);
        }
        Ok(())
    }
}

/// `span{u v, v u : u in U, v in V}`.
pub fn product_span(a: &SCAlgebra, u: &Subspace, v: &Subspace) -> Subspace {
    let mut out = vec![];
    for x in u.vectors() {
        for y in v.vectors() {
            out.push(a.mul(&x, &y));
            out.push(a.mul(&y, &x));
        }
    }
    Subspace::from_vectors(&a.field, a.dim, &out)
}

/// `span{u v : u in U, v in V}` (one-sided).
pub fn ordered_product_span(a: &SCAlgebra, u: &Subspace, v: &Subspace) -> Subspace {
    let mut out = vec![];
    for x in u.vectors() {
        for y in v.vectors() {
            out.push(a.mul(&x, &y));
        }
    }
    Subspace::from_vectors(&a.field, a.dim, &out)
}

/// One basis triple on which an identity fails, with the residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub indices: Vec<usize>,
    pub law: String,
    pub residual: Vec<String>,
}

impl fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on basis {:?} leaves [{}]", self.law, self.indices, self.residual.join(", "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub variety: Variety,
    pub holds: bool,
    pub failures: Vec<IdentityFailure>,
}

/// Residual vectors of the defining identities of `variety` on all basis tuples.
pub fn identity_residuals(a: &SCAlgebra, variety: Variety) -> Vec<(Vec<usize>, &'static str, Vec<Q>)> {
    let f = &a.field;
    let n = a.dim;
    let e = |i: usize| a.unit(i);
    let sub = |x: &[Q], y: &[Q]| -> Vec<Q> { x.iter().zip(y).map(|(p, q)| f.sub(p, q)).collect() };
    let addv = |x: &[Q], y: &[Q]| -> Vec<Q> { x.iter().zip(y).map(|(p, q)| f.add(p, q)).collect() };
    let mut out = vec![];
    match variety {
        Variety::Lie => {
            for i in 0..n {
                out.push((vec![i], "alternating", a.basis_product(i, i)));
                for j in i + 1..n {
                    out.push((vec![i, j], "antisymmetry", addv(&a.basis_product(i, j), &a.basis_product(j, i))));
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let t1 = a.mul(&e(i), &a.basis_product(j, k));
                        let t2 = a.mul(&e(j), &a.basis_product(k, i));
                        let t3 = a.mul(&e(k), &a.basis_product(i, j));
                        out.push((vec![i, j, k], "Jacobi", addv(&addv(&t1, &t2), &t3)));
                    }
                }
            }
        }
        Variety::Leib => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = a.mul(&e(i), &a.basis_product(j, k));
                        let r1 = a.mul(&a.basis_product(i, j), &e(k));
                        let r2 = a.mul(&a.basis_product(i, k), &e(j));
                        out.push((vec![i, j, k], "Leibniz", sub(&lhs, &sub(&r1, &r2))));
                    }
                }
            }
        }
        Variety::Assoc | Variety::Comm => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = a.mul(&a.basis_product(i, j), &e(k));
                        let rhs = a.mul(&e(i), &a.basis_product(j, k));
                        out.push((vec![i, j, k], "associativity", sub(&lhs, &rhs)));
                    }
                }
            }
            if variety == Variety::Comm {
                for i in 0..n {
                    for j in i + 1..n {
                        out.push((vec![i, j], "commutativity", sub(&a.basis_product(i, j), &a.basis_product(j, i))));
                    }
                }
            }
        }
    }
    out
}

pub fn check_identity(a: &SCAlgebra, variety: Variety) -> IdentityReport {
    let failures: Vec<IdentityFailure> = identity_residuals(a, variety)
        .into_iter()
        .filter(|(_, _, r)| r.iter().any(|x| !x.is_zero()))
        .map(|(indices, law, r)| IdentityFailure {
            indices,
            law: law.to_string(),
            residual: r.iter().map(|x| x.to_string()).collect(),
        })
        .collect();
    IdentityReport { variety, holds: failures.is_empty(), failures }
}

/// Smallest subspace containing `s` and closed under multiplication by `A` on either side.
pub fn ideal_closure(a: &SCAlgebra, s: &Subspace) -> Result<Subspace, NonassocError> {
    s.check(a)?;
    let whole = a.whole();
    let mut cur = s.clone();
    loop {
        let next = cur.join(&product_span(a, &cur, &whole));
        if next.dim() == cur.dim() {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Smallest subalgebra containing `s`.
pub fn subalgebra_closure(a: &SCAlgebra, s: &Subspace) -> Result<Subspace, NonassocError> {
    s.check(a)?;
    let mut cur = s.clone();
    loop {
        let next = cur.join(&ordered_product_span(a, &cur, &cur));
        if next.dim() == cur.dim() {
            return Ok(cur);
        }
        cur = next;
    }
}

pub fn is_ideal(a: &SCAlgebra, s: &Subspace) -> bool {
    product_span(a, s, &a.whole()).le(s)
}

fn ideal_witness(a: &SCAlgebra, s: &Subspace) -> Option<String> {
    for (k, v) in s.vectors().iter().enumerate() {
        for j in 0..a.dim {
            let e = a.unit(j);
            if !s.contains(&a.mul(v, &e)) {
                return Some(format!("basis vector {k} times e{} leaves the subspace", j + 1));
            }
            if !s.contains(&a.mul(&e, v)) {
                return Some(format!("e{} times basis vector {k} leaves the subspace", j + 1));
            }
        }
    }
    None
}

pub fn require_ideal(a: &SCAlgebra, s: &Subspace) -> Result<(), NonassocError> {
    s.check(a)?;
    match ideal_witness(a, s) {
        Some(w) => Err(NonassocError::NotIdeal(w)),
        None => Ok(()),
    }
}

/// Higgins commutator `[K, L]`: the span of all monomials that involve at
/// least one factor from `K` and one from `L`.
///
/// Starting from `[<K>, <L>]`, the span is closed under multiplication by
/// `<K>`, `<L>` and itself. Every mixed monomial has a top product `u v`
/// where either the factors already mix (handled by induction) or one side
/// lies purely in `<K>` and the other purely in `<L>`, so the fixpoint is
/// exactly the mixed span.
pub fn higgins_commutator(a: &SCAlgebra, k: &Subspace, l: &Subspace) -> Result<Subspace, NonassocError> {
    k.check(a)?;
    l.check(a)?;
    let kc = subalgebra_closure(a, k)?;
    let lc = subalgebra_closure(a, l)?;
    let mut m = product_span(a, &kc, &lc);
    loop {
        let next = m
            .join(&product_span(a, &m, &kc))
            .join(&product_span(a, &m, &lc))
            .join(&product_span(a, &m, &m));
        if next.dim() == m.dim() {
            return Ok(m);
        }
        m = next;
    }
}

/// `[K, L, M] = [[K, L], M] v [[M, K], L]` for ideals `K`, `L`, `M`.
pub fn ternary_commutator(a: &SCAlgebra, k: &Subspace, l: &Subspace, m: &Subspace) -> Result<Subspace, NonassocError> {
    for s in [k, l, m] {
        require_ideal(a, s)?;
    }
    let kl = higgins_commutator(a, k, l)?;
    let mk = higgins_commutator(a, m, k)?;
    Ok(higgins_commutator(a, &kl, m)?.join(&higgins_commutator(a, &mk, l)?))
}

/// `J_n` (spans of products with at least `n` factors) and the left-normed chain.
#[derive(Clone, Debug, Serialize)]
pub struct LowerCentralSeries {
    /// `J_1, ..., J_s` where `s` is the first index with `J_s = J_{s+1}`
    pub terms: Vec<Subspace>,
    /// `L_1 = A`, `L_{n+1} = A L_n + L_n A`, same length as `terms`
    pub left_normed: Vec<Subspace>,
    /// smallest `n` with `J_n = J_{n+1}`
    pub stable_index: usize,
    pub nilpotent: bool,
    /// nilpotency class when nilpotent
    pub class: Option<usize>,
}

impl LowerCentralSeries {
    pub fn gamma(&self, n: usize) -> &Subspace {
        let idx = (n - 1).min(self.terms.len() - 1);
        &self.terms[idx]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|s| s.dim()).collect()
    }
}

/// `J_1 .. J_n` by `J_k = sum_{i+j=k} J_i J_j`.
pub fn j_filtration(a: &SCAlgebra, n: usize) -> Vec<Subspace> {
    let mut j = vec![a.whole()];
    for k in 2..=n {
        let mut acc = a.zero_subspace();
        for i in 1..k {
            acc = acc.join(&ordered_product_span(a, &j[i - 1], &j[k - i - 1]));
        }
        j.push(acc);
    }
    j
}

/// `L_1 .. L_n` with `L_{k+1} = A L_k + L_k A`.
pub fn left_normed_chain(a: &SCAlgebra, n: usize) -> Vec<Subspace> {
    let whole = a.whole();
    let mut out = vec![whole.clone()];
    for _ in 1..n {
        let next = product_span(a, out.last().unwrap(), &whole);
        out.push(next);
    }
    out
}

pub fn lower_central_series(a: &SCAlgebra) -> LowerCentralSeries {
    // the chain is strictly decreasing until it stabilises, so dim + 2 terms suffice
    let max = a.dim + 2;
    let all = j_filtration(a, max);
    let mut stable_index = max;
    for k in 0..max - 1 {
        if all[k].dim() == all[k + 1].dim() {
            stable_index = k + 1;
            break;
        }
    }
    let terms: Vec<Subspace> = all[..stable_index].to_vec();
    let left_normed = left_normed_chain(a, terms.len());
    let nilpotent = terms.last().is_none_or(|s| s.is_zero());
    let class = nilpotent.then(|| terms.iter().position(|s| s.is_zero()).unwrap_or(0));
    LowerCentralSeries { terms, left_normed, stable_index, nilpotent, class }
}

/// A quotient algebra `A / I` with projection and section.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientAlgebra {
    pub algebra: SCAlgebra,
    pub kernel: Subspace,
    /// `dim(A/I) x dim(A)`
    pub projection: QMatrix,
    /// `dim(A) x dim(A/I)`
    pub section: QMatrix,
}

pub fn quotient_algebra(a: &SCAlgebra, ideal: &Subspace) -> Result<QuotientAlgebra, NonassocError> {
    require_ideal(a, ideal)?;
    let f = &a.field;
    let qt = field_quotient(f, &QMatrix::identity(a.dim), &ideal.basis)?;
    let m = qt.section.cols();
    let mut table = QMatrix::zeros(m, m * m);
    for i in 0..m {
        for j in 0..m {
            let prod = a.mul(&qt.section.col(i), &qt.section.col(j));
            let c = f.mul_vec(&qt.projection, &prod);
            for k in 0..m {
                table[(k, i * m + j)] = c[k].clone();
            }
        }
    }
    let algebra = SCAlgebra { field: f.clone(), dim: m, table, variety: a.variety };
    Ok(QuotientAlgebra { algebra, kernel: ideal.clone(), projection: qt.projection, section: qt.section })
}

/// `Nil_n(A) = A / gamma_{n+1}(A)`.
pub fn nilpotentisation(a: &SCAlgebra, n: usize) -> Result<QuotientAlgebra, NonassocError> {
    assert!(n >= 1, "nilpotency degree must be at least 1");
    let j = j_filtration(a, n + 1);
    quotient_algebra(a, &j[n])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reflector {
    LieFromLeib,
    CommFromAssoc,
}

/// Quotient by the ideal generated by squares (Leib to Lie) or commutators
/// (Assoc to Comm).
pub fn birkhoff_reflect(a: &SCAlgebra, target: Reflector) -> Result<QuotientAlgebra, NonassocError> {
    let f = &a.field;
    let (ok, expected, tag) = match target {
        Reflector::LieFromLeib => (
            matches!(a.variety, Some(Variety::Leib) | Some(Variety::Lie)),
            "Leib",
            Variety::Lie,
        ),
        Reflector::CommFromAssoc => (
            matches!(a.variety, Some(Variety::Assoc) | Some(Variety::Comm)),
            "Assoc",
            Variety::Comm,
        ),
    };
    if !ok {
        return Err(NonassocError::WrongVariety { expected: expected.into(), found: variety_name(a.variety) });
    }
    let n = a.dim;
    let mut gens = vec![];
    for i in 0..n {
        for j in i..n {
            let (x, y) = (a.basis_product(i, j), a.basis_product(j, i));
            match target {
                Reflector::LieFromLeib => {
                    if i == j {
                        gens.push(x);
                    } else {
                        gens.push(x.iter().zip(&y).map(|(p, q)| f.add(p, q)).collect());
                    }
                }
                Reflector::CommFromAssoc => {
                    if i != j {
                        gens.push(x.iter().zip(&y).map(|(p, q)| f.sub(p, q)).collect());
                    }
                }
            }
        }
    }
    let seed = Subspace::from_vectors(f, n, &gens);
    let ideal = ideal_closure(a, &seed)?;
    let mut q = quotient_algebra(a, &ideal)?;
    q.algebra = q.algebra.with_variety(Some(tag))?;
    Ok(q)
}

/// Both composites `Lie(Nil_n A)` and `Nil_n(Lie A)` as quotients of `A`.
#[derive(Clone, Debug, Serialize)]
pub struct CommuteReport {
    pub n: usize,
    pub reflect_after_nil: Subspace,
    pub nil_after_reflect: Subspace,
    pub dims: (usize, usize),
    pub isomorphic: bool,
}

/// Kernel in `A` of `A -> Q1 -> Q2` given the two quotient steps.
fn composite_kernel(a: &SCAlgebra, first: &QuotientAlgebra, second: &QuotientAlgebra) -> Subspace {
    let f = &a.field;
    let lifted = f.mul_mat(&first.section, &second.kernel.basis);
    Subspace::spanned_by(f, a.dim, &first.kernel.basis.hstack(&lifted))
}

pub fn commute_nil_birkhoff_test(a: &SCAlgebra, n: usize) -> Result<CommuteReport, NonassocError> {
    if !matches!(a.variety, Some(Variety::Leib) | Some(Variety::Lie)) {
        return Err(NonassocError::WrongVariety { expected: "Leib".into(), found: variety_name(a.variety) });
    }
    let nil = nilpotentisation(a, n)?;
    let left = birkhoff_reflect(&nil.algebra, Reflector::LieFromLeib)?;
    let k_left = composite_kernel(a, &nil, &left);
    let lie = birkhoff_reflect(a, Reflector::LieFromLeib)?;
    let right = nilpotentisation(&lie.algebra, n)?;
    let k_right = composite_kernel(a, &lie, &right);
    let dims = (left.algebra.dim, right.algebra.dim);
    // the canonical comparison is induced by the identity of A, so it is an
    // isomorphism exactly when both kernels coincide
    let isomorphic = k_left == k_right;
    Ok(CommuteReport { n, reflect_after_nil: k_left, nil_after_reflect: k_right, dims, isomorphic })
}

/// `A (x) B` in the variety: dimensions and basis labels.
#[derive(Clone, Debug, Serialize)]
pub struct BilinearSc {
    pub variety: Variety,
    pub ab_dims: (usize, usize),
    pub dim: usize,
    pub labels: Vec<String>,
    /// dimension reported by the operad engine, when the preset exists over this field
    pub operad_dim: Option<usize>,
}

pub fn bilinear_product_sc(a: &SCAlgebra, b: &SCAlgebra) -> Result<BilinearSc, NonassocError> {
    if a.field != b.field || a.variety != b.variety {
        return Err(NonassocError::VarietyMismatch);
    }
    let variety = a.variety.ok_or(NonassocError::VarietyMismatch)?;
    let ab_a = a.dim - j_filtration(a, 2)[1].dim();
    let ab_b = b.dim - j_filtration(b, 2)[1].dim();
    let mut labels = vec![];
    for i in 0..ab_a {
        for j in 0..ab_b {
            labels.push(format!("a{}(x)b{}", i + 1, j + 1));
        }
    }
    if matches!(variety, Variety::Assoc | Variety::Leib) {
        for j in 0..ab_b {
            for i in 0..ab_a {
                labels.push(format!("b{}(x)a{}", j + 1, i + 1));
            }
        }
    }
    let ring = BaseRing::Field(a.field.clone());
    let operad_dim = preset_operad(variety, &ring).ok().and_then(|op| {
        let x = Nil2Algebra::abelian(&op, &RModule::free(ab_a));
        let y = Nil2Algebra::abelian(&op, &RModule::free(ab_b));
        cosmash2(&x, &y).ok().map(|c| c.algebra.ngens())
    });
    Ok(BilinearSc { variety, ab_dims: (ab_a, ab_b), dim: labels.len(), labels, operad_dim })
}

/// Commutator data of an extension `0 -> A -> X -> X/A -> 0`.
#[derive(Clone, Debug, Serialize)]
pub struct AbelianExtensionReport {
    pub aa: Subspace,
    pub aax: Subspace,
    pub kernel_abelian: bool,
    pub ternary_vanishes: bool,
    pub abelian_extension: bool,
    pub join_is_ideal: bool,
    pub quotient: QuotientAlgebra,
}

pub fn abelian_extension_analysis(x: &SCAlgebra, a: &Subspace) -> Result<AbelianExtensionReport, NonassocError> {
    require_ideal(x, a)?;
    let whole = x.whole();
    let aa = higgins_commutator(x, a, a)?;
    let aax = ternary_commutator(x, a, a, &whole)?;
    let join = aa.join(&aax);
    let join_is_ideal = is_ideal(x, &join);
    if !join_is_ideal {
        return Err(NonassocError::NotIdeal("[A,A] v [A,A,X] is not an ideal".into()));
    }
    let quotient = quotient_algebra(x, &join)?;
    let kernel_abelian = aa.is_zero();
    let ternary_vanishes = aax.is_zero();
    Ok(AbelianExtensionReport {
        aa,
        aax,
        kernel_abelian,
        ternary_vanishes,
        abelian_extension: kernel_abelian && ternary_vanishes,
        join_is_ideal,
        quotient,
    })
}

pub mod library {
    //! Small algebras used as examples and as seeds for random generation.

    use super::*;
    use crate::exactlin::q;

    fn v(field: &Field, xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    /// Basis `(e, f, h)`: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
    pub fn sl2(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(
            field,
            3,
            &[(0, 1, v(field, &[0, 0, 1])), (2, 0, v(field, &[2, 0, 0])), (2, 1, v(field, &[0, -2, 0]))],
            Some(Variety::Lie),
        )
        .expect("sl2 satisfies the Lie identities")
    }

    /// `[x, y] = z`, `z` central.
    pub fn heisenberg(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(field, 3, &[(0, 1, v(field, &[0, 0, 1]))], Some(Variety::Lie))
            .expect("heisenberg is Lie")
    }

    /// `[x, y] = y`.
    pub fn r2(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(field, 2, &[(0, 1, v(field, &[0, 1]))], Some(Variety::Lie)).expect("r2 is Lie")
    }

    /// `[x, y] = x`.
    pub fn r2_left(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(field, 2, &[(0, 1, v(field, &[1, 0]))], Some(Variety::Lie)).expect("r2 is Lie")
    }

    /// `[x, y] = y`, `[x, z] = z`.
    pub fn scaling3(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(
            field,
            3,
            &[(0, 1, v(field, &[0, 1, 0])), (0, 2, v(field, &[0, 0, 1]))],
            Some(Variety::Lie),
        )
        .expect("scaling algebra is Lie")
    }

    /// Filiform `[e1, e_i] = e_{i+1}` in dimension `n >= 2`.
    pub fn filiform(field: &Field, n: usize) -> SCAlgebra {
        let prods: Vec<(usize, usize, Vec<Q>)> = (1..n - 1)
            .map(|i| {
                let mut w = vec![Q::zero(); n];
                w[i + 1] = Q::one();
                (0, i, w)
            })
            .collect();
        SCAlgebra::from_products(field, n, &prods, Some(Variety::Lie)).expect("filiform is Lie")
    }

    /// Leibniz algebra `x x = y`, all other products zero.
    pub fn leibniz_square(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(field, 2, &[(0, 0, v(field, &[0, 1]))], Some(Variety::Leib))
            .expect("x x = y is Leibniz")
    }

    /// `g + M` with `[m, x] = -rho(x) m`, `[x, m] = 0`: Leibniz, not Lie.
    pub fn hemisemidirect(r: &LieRep) -> SCAlgebra {
        let g = &r.algebra;
        let f = &g.field;
        let (n, m) = (g.dim, r.dim());
        let d = n + m;
        let mut table = QMatrix::zeros(d, d * d);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table[(k, i * d + j)] = g.table[(k, i * n + j)].clone();
                }
            }
        }
        for a in 0..m {
            for x in 0..n {
                for k in 0..m {
                    table[(n + k, (n + a) * d + x)] = f.neg(&r.rho[x][(k, a)]);
                }
            }
        }
        SCAlgebra { field: f.clone(), dim: d, table, variety: Some(Variety::Leib) }
    }

    /// Upper triangular 2x2 matrices, basis `(e11, e12, e22)`.
    pub fn upper_triangular(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(
            field,
            3,
            &[
                (0, 0, v(field, &[1, 0, 0])),
                (0, 1, v(field, &[0, 1, 0])),
                (1, 2, v(field, &[0, 1, 0])),
                (2, 2, v(field, &[0, 0, 1])),
            ],
            Some(Variety::Assoc),
        )
        .expect("upper triangular matrices are associative")
    }

    /// Full 2x2 matrices, basis `(e11, e12, e21, e22)`.
    pub fn matrices2(field: &Field) -> SCAlgebra {
        let idx = |i: usize, j: usize| i * 2 + j;
        let mut prods = vec![];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        if j == k {
                            let mut w = vec![Q::zero(); 4];
                            w[idx(i, l)] = Q::one();
                            prods.push((idx(i, j), idx(k, l), w));
                        }
                    }
                }
            }
        }
        SCAlgebra::from_products(field, 4, &prods, Some(Variety::Assoc)).expect("matrices are associative")
    }

    /// `x x = x` (commutative, associative).
    pub fn idempotent(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(field, 1, &[(0, 0, vec![q(1)])], Some(Variety::Comm)).expect("idempotent")
    }

    /// `x x = y` (commutative, associative).
    pub fn dual_numbers(field: &Field) -> SCAlgebra {
        SCAlgebra::from_products(field, 2, &[(0, 0, v(field, &[0, 1]))], Some(Variety::Comm)).expect("dual numbers")
    }
}
