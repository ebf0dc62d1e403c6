//! Representations of Lie algebras by matrices.

use serde::Serialize;

use super::{check_identity, NonassocError, SCAlgebra};
use crate::exactlin::{Field, Matrix, QMatrix, Q};
use crate::Variety;

/// `rho[i]` is the action of the `i`-th basis vector.
#[derive(Clone, Debug, Serialize)]
pub struct LieRep {
    pub algebra: SCAlgebra,
    pub rho: Vec<QMatrix>,
}

fn commutator(f: &Field, x: &QMatrix, y: &QMatrix) -> QMatrix {
    let xy = f.mul_mat(x, y);
    let yx = f.mul_mat(y, x);
    f.reduce_matrix(&xy.sub(&yx))
}

impl LieRep {
    /// Checks `rho([e_i, e_j]) = [rho(e_i), rho(e_j)]` on all basis pairs.
    pub fn new(algebra: &SCAlgebra, rho: Vec<QMatrix>) -> Result<Self, NonassocError> {
        if algebra.variety != Some(Variety::Lie) || !check_identity(algebra, Variety::Lie).holds {
            return Err(NonassocError::WrongVariety {
                expected: "Lie".into(),
                found: algebra.variety.map_or_else(|| "untagged".into(), |v| v.to_string()),
            });
        }
        if rho.len() != algebra.dim {
            return Err(NonassocError::InvalidConstants(format!(
                "{} matrices for an algebra of dimension {}",
                rho.len(),
                algebra.dim
            )));
        }
        let m = rho.first().map_or(0, |r| r.rows());
        if rho.iter().any(|r| r.shape() != (m, m)) {
            return Err(NonassocError::InvalidConstants("action matrices must be square of one size".into()));
        }
        let f = &algebra.field;
        let rho: Vec<QMatrix> = rho.iter().map(|r| f.reduce_matrix(r)).collect();
        let rep = LieRep { algebra: algebra.clone(), rho };
        if let Some((i, j)) = rep.first_failure() {
            return Err(NonassocError::RepAxiomFailure(i, j));
        }
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.rho.first().map_or(0, |r| r.rows())
    }

    /// Action of an arbitrary element.
    pub fn act(&self, x: &[Q]) -> QMatrix {
        let f = &self.algebra.field;
        let m = self.dim();
        let mut out = QMatrix::zeros(m, m);
        for (c, r) in x.iter().zip(&self.rho) {
            out = out.add(&r.scale(c));
        }
        f.reduce_matrix(&out)
    }

    pub fn first_failure(&self) -> Option<(usize, usize)> {
        let f = &self.algebra.field;
        let n = self.algebra.dim;
        for i in 0..n {
            for j in 0..n {
                let lhs = self.act(&self.algebra.basis_product(i, j));
                let rhs = commutator(f, &self.rho[i], &self.rho[j]);
                if !f.is_zero_matrix(&lhs.sub(&rhs)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn trivial(algebra: &SCAlgebra, m: usize) -> Result<Self, NonassocError> {
        LieRep::new(algebra, vec![QMatrix::zeros(m, m); algebra.dim])
    }

    pub fn adjoint(algebra: &SCAlgebra) -> Result<Self, NonassocError> {
        let rho = (0..algebra.dim).map(|i| algebra.left_mult(&algebra.unit(i))).collect();
        LieRep::new(algebra, rho)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, NonassocError> {
        if self.algebra != other.algebra {
            return Err(NonassocError::AlgebraMismatch);
        }
        let rho = self.rho.iter().zip(&other.rho).map(|(a, b)| a.block_diag(b)).collect();
        Ok(LieRep { algebra: self.algebra.clone(), rho })
    }

    /// The same representation in the basis given by the columns of `p`.
    pub fn conjugate(&self, p: &QMatrix) -> Result<Self, NonassocError> {
        let f = &self.algebra.field;
        let pinv = f.inverse(p)?;
        let rho = self.rho.iter().map(|r| f.mul_mat(&pinv, &f.mul_mat(r, p))).collect();
        Ok(LieRep { algebra: self.algebra.clone(), rho })
    }
}

/// The tensor product with `x` acting by `rho(x) (x) 1 + 1 (x) sigma(x)`.
pub fn rep_tensor_lie(xi: &LieRep, zeta: &LieRep) -> Result<LieRep, NonassocError> {
    if xi.algebra != zeta.algebra {
        return Err(NonassocError::AlgebraMismatch);
    }
    let (m, k) = (xi.dim(), zeta.dim());
    let f = &xi.algebra.field;
    let rho = xi
        .rho
        .iter()
        .zip(&zeta.rho)
        .map(|(a, b)| f.reduce_matrix(&a.kron(&QMatrix::identity(k)).add(&QMatrix::identity(m).kron(b))))
        .collect();
    let out = LieRep { algebra: xi.algebra.clone(), rho };
    if let Some((i, j)) = out.first_failure() {
        return Err(NonassocError::RepAxiomFailure(i, j));
    }
    Ok(out)
}

/// The two-dimensional representation of `sl2` in the basis `(e, f, h)`.
pub fn standard_sl2(field: &Field) -> LieRep {
    let z = |x: i64| field.from_i64(x);
    let e = Matrix::from_rows(vec![vec![z(0), z(1)], vec![z(0), z(0)]], 2);
    let fm = Matrix::from_rows(vec![vec![z(0), z(0)], vec![z(1), z(0)]], 2);
    let h = Matrix::from_rows(vec![vec![z(1), z(0)], vec![z(0), z(-1)]], 2);
    LieRep::new(&super::library::sl2(field), vec![e, fm, h]).expect("standard sl2 representation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q;
    use crate::nonassoc::library::{heisenberg, sl2};

    #[test]
    fn sl2_tensor_weights() {
        let f = Field::Rational;
        let v = standard_sl2(&f);
        let t = rep_tensor_lie(&v, &v).unwrap();
        let h = &t.rho[2];
        let diag: Vec<Q> = (0..4).map(|i| h[(i, i)].clone()).collect();
        assert_eq!(diag, vec![q(2), q(0), q(0), q(-2)]);
        assert!(f.is_zero_matrix(&h.sub(&QMatrix::diagonal(&diag))));
    }

    #[test]
    fn adjoint_and_mismatch() {
        let f = Field::Rational;
        let ad = LieRep::adjoint(&sl2(&f)).unwrap();
        assert_eq!(ad.dim(), 3);
        let other = LieRep::trivial(&heisenberg(&f), 2).unwrap();
        assert!(matches!(rep_tensor_lie(&ad, &other), Err(NonassocError::AlgebraMismatch)));
    }

    #[test]
    fn rejects_non_representation() {
        let f = Field::Rational;
        let h = heisenberg(&f);
        let x = Matrix::from_rows(vec![vec![q(1)]], 1);
        let bad = LieRep::new(&h, vec![QMatrix::zeros(1, 1), QMatrix::zeros(1, 1), x]);
        assert!(matches!(bad, Err(NonassocError::RepAxiomFailure(0, 1)) | Err(NonassocError::RepAxiomFailure(1, 0))));
    }
}
