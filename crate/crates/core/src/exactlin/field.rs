use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::Matrix;
use super::ExactError;

pub type Q = BigRational;
pub type QMatrix = Matrix<Q>;

/// Coefficient field: the rationals or a prime field.
///
/// Elements of `F_p` are stored as integer-valued rationals in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

pub fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

pub fn qi(x: &BigInt) -> Q {
    Q::from_integer(x.clone())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, ExactError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(ExactError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Maps a rational into this field.
    pub fn element(&self, x: &Q) -> Result<Q, ExactError> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(ExactError::NotInField(x.to_string(), self.to_string()));
                }
                let inv = mod_inverse(&den, &p);
                Ok(qi(&(x.numer() * inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_i64(&self, x: i64) -> Q {
        self.norm(q(x))
    }

    /// Reduces an already field-valued element (integer-valued for `F_p`).
    pub fn norm(&self, x: Q) -> Q {
        match self {
            Field::Rational => x,
            Field::Prime(p) => {
                debug_assert!(x.is_integer(), "non-integral F_p representative");
                qi(&x.to_integer().mod_floor(&BigInt::from(*p)))
            }
        }
    }

    pub fn add(&self, a: &Q, b: &Q) -> Q {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Q, b: &Q) -> Q {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Q, b: &Q) -> Q {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Q) -> Q {
        self.norm(-a)
    }

    pub fn inv(&self, a: &Q) -> Q {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                qi(&mod_inverse(&a.to_integer(), &p))
            }
        }
    }

    pub fn div(&self, a: &Q, b: &Q) -> Q {
        self.mul(a, &self.inv(b))
    }

    pub fn dot(&self, a: &[Q], b: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        self.norm(acc)
    }

    pub fn reduce_matrix(&self, m: &QMatrix) -> QMatrix {
        m.map(|x| self.norm(x.clone()))
    }

    pub fn reduce_vec(&self, v: &[Q]) -> Vec<Q> {
        v.iter().map(|x| self.norm(x.clone())).collect()
    }

    pub fn mul_mat(&self, a: &QMatrix, b: &QMatrix) -> QMatrix {
        self.reduce_matrix(&a.mul(b))
    }

    pub fn mul_vec(&self, a: &QMatrix, v: &[Q]) -> Vec<Q> {
        self.reduce_vec(&a.mul_vec(v))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, m: &QMatrix) -> (QMatrix, Vec<usize>) {
        let mut a = self.reduce_matrix(m);
        let (rows, cols) = a.shape();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, pr);
            let inv = self.inv(&a[(r, c)]);
            for j in c..cols {
                a[(r, j)] = self.mul(&a[(r, j)], &inv);
            }
            for i in 0..rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..cols {
                    if a[(r, j)].is_zero() {
                        continue;
                    }
                    let v = self.sub(&a[(i, j)], &self.mul(&f, &a[(r, j)]));
                    a[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, m: &QMatrix) -> usize {
        self.rref(m).1.len()
    }

    /// Basis of the null space as columns of an `cols x k` matrix.
    pub fn kernel(&self, m: &QMatrix) -> QMatrix {
        let (r, pivots) = self.rref(m);
        let n = m.cols();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = self.neg(&r[(i, f)]);
            }
            basis.push(v);
        }
        Matrix::from_cols(&basis, n)
    }

    /// A maximal independent subset of the columns of `m`, in order.
    pub fn column_basis(&self, m: &QMatrix) -> QMatrix {
        let (_, pivots) = self.rref(m);
        m.select_cols(&pivots)
    }

    /// Some `x` with `a x = b`, if one exists.
    pub fn solve(&self, a: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(a.rows(), b.len());
        let aug = a.hstack(&Matrix::from_cols(&[b.to_vec()], b.len()));
        let (r, pivots) = self.rref(&aug);
        if pivots.last() == Some(&a.cols()) {
            return None;
        }
        let mut x = vec![Q::zero(); a.cols()];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, a.cols())].clone();
        }
        Some(x)
    }

    pub fn in_span(&self, basis: &QMatrix, v: &[Q]) -> bool {
        self.solve(basis, v).is_some()
    }

    pub fn inverse(&self, m: &QMatrix) -> Result<QMatrix, ExactError> {
        let n = m.rows();
        if m.cols() != n {
            return Err(ExactError::DimensionMismatch { expected: (n, n), found: m.shape() });
        }
        let aug = m.hstack(&QMatrix::identity(n));
        let (r, pivots) = self.rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(ExactError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    pub fn is_zero_matrix(&self, m: &QMatrix) -> bool {
        m.data().iter().all(|x| self.norm(x.clone()).is_zero())
    }

    /// `dim ker (m - lambda)^n`, the generalised eigenspace dimension.
    pub fn generalized_eigenspace_dim(&self, m: &QMatrix, lambda: &Q) -> usize {
        let n = m.rows();
        let shifted = m.sub(&QMatrix::identity(n).scale(lambda));
        let shifted = self.reduce_matrix(&shifted);
        let mut power = QMatrix::identity(n);
        for _ in 0..n {
            power = self.mul_mat(&power, &shifted);
        }
        n - self.rank(&power)
    }

    /// Extends the independent columns of `sub` by standard basis vectors to a
    /// basis of the ambient space; returns the indices of the added vectors.
    pub fn complement_indices(&self, sub: &QMatrix) -> Vec<usize> {
        let n = sub.rows();
        let mut cur = self.column_basis(sub);
        let mut added = vec![];
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = Q::one();
            let candidate = cur.hstack(&Matrix::from_cols(&[e], n));
            if self.rank(&candidate) > cur.cols() {
                cur = candidate;
                added.push(i);
            }
        }
        added
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.mod_floor(p).extended_gcd(p);
    assert!(e.gcd.is_one(), "{a} is not invertible modulo {p}");
    e.x.mod_floor(p)
}

/// Quotient `V / W` of subspaces given by column bases, `W` inside `V`.
#[derive(Clone, Debug)]
pub struct FieldQuotient {
    /// Columns of `V` whose images form a basis of the quotient.
    pub section: QMatrix,
    /// `dim(V/W) x ambient` partial projection, defined on `V`.
    pub projection: QMatrix,
}

pub fn field_quotient(field: &Field, v: &QMatrix, w: &QMatrix) -> Result<FieldQuotient, ExactError> {
    let vb = field.column_basis(v);
    let wb = field.column_basis(w);
    if field.rank(&vb.hstack(&wb)) > vb.cols() {
        return Err(ExactError::NotSubspace);
    }
    // greedy basis of [W | V | ambient units]: W, then a section, then a complement
    let ambient = v.rows();
    let k = wb.cols();
    let (_, pivots) = field.rref(&wb.hstack(&vb).hstack(&QMatrix::identity(ambient)));
    let section_idx: Vec<usize> = pivots.iter().filter(|&&c| c >= k && c < k + vb.cols()).map(|c| c - k).collect();
    let section = vb.select_cols(&section_idx);
    let full = wb.hstack(&vb).hstack(&QMatrix::identity(ambient)).select_cols(&pivots);
    let mut proj_cols = vec![];
    let inv = if ambient == 0 { full } else { field.inverse(&full).expect("completed basis is invertible") };
    for i in 0..ambient {
        proj_cols.push((k..k + section.cols()).map(|r| inv[(r, i)].clone()).collect::<Vec<Q>>());
    }
    let projection = Matrix::from_cols(&proj_cols, section.cols());
    Ok(FieldQuotient { section, projection })
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
