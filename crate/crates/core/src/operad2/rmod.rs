//! Finitely generated modules `R^n / diag(orders)` over `Z`, `Q` or `F_p`,
//! with elements and maps carried as rational matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactlin::{
    cokernel_presented, field_quotient, int_kernel, qi, ExactError, FgAbGroup, Field, IntMatrix,
    Matrix, QMatrix, Subgroup, Q,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaseRing {
    Integers,
    Field(Field),
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::Field(k) => write!(f, "{k}"),
        }
    }
}

/// `R^n / diag(orders)`; over a field every order is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RModule {
    pub orders: Vec<BigInt>,
}

impl RModule {
    pub fn free(n: usize) -> Self {
        RModule { orders: vec![BigInt::zero(); n] }
    }

    pub fn zero() -> Self {
        RModule { orders: vec![] }
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        RModule { orders: self.orders.iter().chain(&other.orders).cloned().collect() }
    }
}

/// Quotient `M / N` with canonical generators, projection and a lift.
#[derive(Clone, Debug)]
pub struct RQuotient {
    pub module: RModule,
    /// `ngens(quotient) x ngens(M)`
    pub projection: QMatrix,
    /// `ngens(M) x ngens(quotient)`
    pub section: QMatrix,
}

/// A submodule with its own canonical generators.
#[derive(Clone, Debug)]
pub struct RSub {
    pub module: RModule,
    /// `ngens(M) x ngens(sub)`
    pub inclusion: QMatrix,
}

pub fn to_int_vec(v: &[Q]) -> Vec<BigInt> {
    v.iter()
        .map(|x| {
            assert!(x.is_integer(), "non-integral coefficient {x} over Z");
            x.to_integer()
        })
        .collect()
}

pub fn to_int_matrix(m: &QMatrix) -> IntMatrix {
    Matrix::from_vec(m.rows(), m.cols(), to_int_vec(m.data()))
}

pub fn from_int_matrix(m: &IntMatrix) -> QMatrix {
    m.map(qi)
}

pub fn from_int_vec(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(qi).collect()
}

/// Column matrix with the given vectors (which must all have length `rows`).
pub fn cols_matrix(cols: &[Vec<Q>], rows: usize) -> QMatrix {
    Matrix::from_cols(cols, rows)
}

impl BaseRing {
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseRing::Integers => 0,
            BaseRing::Field(f) => f.characteristic(),
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, BaseRing::Integers)
    }

    /// Maps a rational input into the ring (must be integral over `Z`).
    pub fn element(&self, x: &Q) -> Result<Q, ExactError> {
        match self {
            BaseRing::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(ExactError::NotInField(x.to_string(), "Z".into()))
                }
            }
            BaseRing::Field(f) => f.element(x),
        }
    }

    /// A module with the given orders; over a field nonzero orders collapse.
    pub fn module(&self, orders: &[BigInt]) -> RModule {
        match self {
            BaseRing::Integers => RModule { orders: orders.to_vec() },
            BaseRing::Field(f) => {
                let p = BigInt::from(f.characteristic());
                // a cyclic summand R/(d) over a field is R when d == 0 in R, else 0
                let n = orders.iter().filter(|d| d.is_zero() || (!p.is_zero() && d.is_multiple_of(&p))).count();
                RModule::free(n)
            }
        }
    }

    pub fn norm_scalar(&self, order: &BigInt, x: &Q) -> Q {
        match self {
            BaseRing::Integers => {
                let v = x.to_integer();
                debug_assert!(x.is_integer());
                if order.is_zero() {
                    qi(&v)
                } else {
                    qi(&v.mod_floor(order))
                }
            }
            BaseRing::Field(f) => f.norm(x.clone()),
        }
    }

    pub fn norm_vec(&self, m: &RModule, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), m.ngens(), "vector length does not match module");
        v.iter().zip(&m.orders).map(|(x, d)| self.norm_scalar(d, x)).collect()
    }

    /// Reduces each row `i` modulo the order of generator `i` of `m`.
    pub fn norm_mat(&self, m: &RModule, a: &QMatrix) -> QMatrix {
        assert_eq!(a.rows(), m.ngens(), "matrix rows do not match module");
        Matrix::from_fn(a.rows(), a.cols(), |i, j| self.norm_scalar(&m.orders[i], &a[(i, j)]))
    }

    pub fn is_zero_vec(&self, m: &RModule, v: &[Q]) -> bool {
        self.norm_vec(m, v).iter().all(|x| x.is_zero())
    }

    pub fn is_zero_map(&self, target: &RModule, a: &QMatrix) -> bool {
        self.norm_mat(target, a).data().iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, a: &QMatrix, b: &QMatrix) -> QMatrix {
        match self {
            BaseRing::Integers => a.mul(b),
            BaseRing::Field(f) => f.mul_mat(a, b),
        }
    }

    pub fn mul_vec(&self, a: &QMatrix, v: &[Q]) -> Vec<Q> {
        match self {
            BaseRing::Integers => a.mul_vec(v),
            BaseRing::Field(f) => f.mul_vec(a, v),
        }
    }

    /// Checks that `f` is a homomorphism `src -> tgt` (rows = target generators).
    pub fn check_hom(&self, src: &RModule, tgt: &RModule, f: &QMatrix) -> Result<(), ExactError> {
        if f.shape() != (tgt.ngens(), src.ngens()) {
            return Err(ExactError::DimensionMismatch {
                expected: (tgt.ngens(), src.ngens()),
                found: f.shape(),
            });
        }
        for x in f.data() {
            self.element(x)?;
        }
        if self.is_integers() {
            for (j, d) in src.orders.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let img: Vec<Q> = f.col(j).iter().map(|x| x * qi(d)).collect();
                if !self.is_zero_vec(tgt, &img) {
                    return Err(ExactError::DomainMismatch(format!(
                        "generator {j} has order {d} but its image does not"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn tensor(&self, a: &RModule, b: &RModule) -> RModule {
        let mut orders = Vec::with_capacity(a.ngens() * b.ngens());
        for x in &a.orders {
            for y in &b.orders {
                orders.push(x.gcd(y));
            }
        }
        RModule { orders }
    }

    pub fn tensor3(&self, a: &RModule, b: &RModule, c: &RModule) -> RModule {
        self.tensor(&self.tensor(a, b), c)
    }

    /// `M / span(gens)`.
    pub fn quotient(&self, m: &RModule, gens: &QMatrix) -> RQuotient {
        assert_eq!(gens.rows(), m.ngens());
        match self {
            BaseRing::Integers => {
                let c = cokernel_presented(&m.orders, &to_int_matrix(gens));
                RQuotient {
                    module: RModule { orders: c.group.factors().to_vec() },
                    projection: from_int_matrix(&c.projection),
                    section: from_int_matrix(&c.section),
                }
            }
            BaseRing::Field(f) => {
                let n = m.ngens();
                let q = field_quotient(f, &QMatrix::identity(n), gens)
                    .expect("every subspace lies in the ambient space");
                RQuotient {
                    module: RModule::free(q.section.cols()),
                    projection: q.projection,
                    section: q.section,
                }
            }
        }
    }

    /// The submodule generated by the columns of `gens`.
    pub fn submodule(&self, m: &RModule, gens: &QMatrix) -> RSub {
        assert_eq!(gens.rows(), m.ngens());
        match self {
            BaseRing::Integers => {
                let s = Subgroup::generated_in(&m.orders, &to_int_matrix(gens));
                RSub {
                    module: RModule { orders: s.structure.factors().to_vec() },
                    inclusion: from_int_matrix(&s.inclusion),
                }
            }
            BaseRing::Field(f) => {
                let basis = f.column_basis(&f.reduce_matrix(gens));
                RSub { module: RModule::free(basis.cols()), inclusion: basis }
            }
        }
    }

    pub fn contains(&self, m: &RModule, gens: &QMatrix, v: &[Q]) -> bool {
        match self {
            BaseRing::Integers => {
                Subgroup::generated_in(&m.orders, &to_int_matrix(gens)).contains(&to_int_vec(v))
            }
            BaseRing::Field(f) => f.in_span(gens, &f.reduce_vec(v)),
        }
    }

    /// Every column of `sub` lies in the span of `sup`; returns the first violating column.
    pub fn first_outside(&self, m: &RModule, sup: &QMatrix, sub: &QMatrix) -> Option<usize> {
        match self {
            BaseRing::Integers => {
                let s = Subgroup::generated_in(&m.orders, &to_int_matrix(sup));
                (0..sub.cols()).find(|&j| !s.contains(&to_int_vec(&sub.col(j))))
            }
            BaseRing::Field(f) => {
                let (_, piv) = f.rref(sup);
                let base = piv.len();
                (0..sub.cols()).find(|&j| {
                    let cand = sup.hstack(&cols_matrix(&[sub.col(j)], sub.rows()));
                    f.rank(&cand) > base
                })
            }
        }
    }

    pub fn span_le(&self, m: &RModule, sub: &QMatrix, sup: &QMatrix) -> bool {
        self.first_outside(m, sup, sub).is_none()
    }

    pub fn span_eq(&self, m: &RModule, x: &QMatrix, y: &QMatrix) -> bool {
        self.span_le(m, x, y) && self.span_le(m, y, x)
    }

    /// Generators (columns, in `src` coordinates) of the kernel of `f : src -> tgt`.
    pub fn kernel(&self, src: &RModule, tgt: &RModule, f: &QMatrix) -> QMatrix {
        match self {
            BaseRing::Integers => {
                let rel_cols: Vec<Vec<BigInt>> = tgt
                    .orders
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| !d.is_zero())
                    .map(|(i, d)| {
                        let mut v = vec![BigInt::zero(); tgt.ngens()];
                        v[i] = d.clone();
                        v
                    })
                    .collect();
                let rel = IntMatrix::from_cols(&rel_cols, tgt.ngens());
                let k = int_kernel(&to_int_matrix(f).hstack(&rel));
                let idx: Vec<usize> = (0..src.ngens()).collect();
                let mut gens = k.select_rows(&idx);
                // torsion generators of the source are always in the kernel
                for (i, d) in src.orders.iter().enumerate() {
                    if !d.is_zero() {
                        let mut e = vec![BigInt::zero(); src.ngens()];
                        e[i] = d.clone();
                        gens = gens.hstack(&IntMatrix::from_cols(&[e], src.ngens()));
                    }
                }
                from_int_matrix(&gens)
            }
            BaseRing::Field(fld) => fld.kernel(&fld.reduce_matrix(f)),
        }
    }

    /// Invariant factors (over `Z`) or `dim` zeros (over a field).
    pub fn structure(&self, m: &RModule) -> Vec<BigInt> {
        match self {
            BaseRing::Integers => FgAbGroup::from_cyclic_orders(&m.orders).factors().to_vec(),
            BaseRing::Field(_) => vec![BigInt::zero(); m.ngens()],
        }
    }

    pub fn is_trivial(&self, m: &RModule) -> bool {
        self.structure(m).is_empty()
    }

    /// Unit vector helper.
    pub fn unit(&self, n: usize, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        v[i] = Q::one();
        v
    }
}

pub fn format_structure(ring: &BaseRing, factors: &[BigInt]) -> String {
    match ring {
        BaseRing::Integers => FgAbGroup::from_invariant_factors(factors.to_vec())
            .map(|g| g.to_string())
            .unwrap_or_else(|_| format!("{factors:?}")),
        BaseRing::Field(f) => format!("{f}^{}", factors.len()),
    }
}
