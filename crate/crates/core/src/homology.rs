//! Chevalley-Eilenberg homology in degrees 1 and 2 and the six-term
//! sequence of a central extension of Lie algebras.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{field_quotient, ExactError, Field, FieldQuotient, Matrix, QMatrix, Q};
use crate::nonassoc::{j_filtration, quotient_algebra, require_ideal, NonassocError, SCAlgebra, Subspace};
use crate::Variety;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("expected a Lie algebra, found {0}")]
    WrongVariety(String),
    #[error("homology is only computed in degrees 1 and 2, not {0}")]
    BadDegree(usize),
    #[error("not an ideal: {0}")]
    NotIdeal(String),
    #[error("not central: {0}")]
    NotCentral(String),
    #[error("section is not a right inverse of the projection")]
    BadSection,
    #[error(transparent)]
    Nonassoc(NonassocError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<NonassocError> for HomologyError {
    fn from(e: NonassocError) -> Self {
        match e {
            NonassocError::NotIdeal(w) => HomologyError::NotIdeal(w),
            other => HomologyError::Nonassoc(other),
        }
    }
}

fn require_lie(g: &SCAlgebra) -> Result<(), HomologyError> {
    if g.variety != Some(Variety::Lie) {
        return Err(HomologyError::WrongVariety(g.variety.map_or_else(|| "untagged".into(), |v| v.to_string())));
    }
    Ok(())
}

/// Basis of `Lambda^2 F^n`: pairs `i < j` in lexicographic order.
pub fn wedge2_basis(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Basis of `Lambda^3 F^n`: triples `i < j < k` in lexicographic order.
pub fn wedge3_basis(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Coordinates of `u ^ v` in [`wedge2_basis`].
pub fn wedge2(field: &Field, u: &[Q], v: &[Q]) -> Vec<Q> {
    wedge2_basis(u.len())
        .into_iter()
        .map(|(i, j)| field.sub(&field.mul(&u[i], &v[j]), &field.mul(&u[j], &v[i])))
        .collect()
}

/// `d2(x ^ y) = -[x, y]` as a `dim x C(dim, 2)` matrix.
pub fn ce_d2(g: &SCAlgebra) -> QMatrix {
    let f = &g.field;
    let cols: Vec<Vec<Q>> = wedge2_basis(g.dim)
        .into_iter()
        .map(|(i, j)| g.basis_product(i, j).iter().map(|x| f.neg(x)).collect())
        .collect();
    Matrix::from_cols(&cols, g.dim)
}

/// `d3(x ^ y ^ z) = -[x,y] ^ z + [x,z] ^ y - [y,z] ^ x`.
pub fn ce_d3(g: &SCAlgebra) -> QMatrix {
    let f = &g.field;
    let n = g.dim;
    let rows = wedge2_basis(n).len();
    let cols: Vec<Vec<Q>> = wedge3_basis(n)
        .into_iter()
        .map(|(i, j, k)| {
            let t1 = wedge2(f, &g.basis_product(i, j), &g.unit(k));
            let t2 = wedge2(f, &g.basis_product(i, k), &g.unit(j));
            let t3 = wedge2(f, &g.basis_product(j, k), &g.unit(i));
            (0..rows).map(|r| f.sub(&f.sub(&t2[r], &t1[r]), &t3[r])).collect()
        })
        .collect();
    Matrix::from_cols(&cols, rows)
}

/// `H_d = cycles / boundaries` with chosen representatives.
#[derive(Clone, Debug, Serialize)]
pub struct CeHomology {
    pub degree: usize,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    /// chain-level representatives of a basis of `H_d`, as columns
    pub representatives: QMatrix,
    #[serde(skip)]
    quotient: Option<FieldQuotient>,
}

impl CeHomology {
    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }

    /// Coordinates of the class of a cycle.
    pub fn class_of(&self, cycle: &[Q]) -> Vec<Q> {
        let f = &self.cycles.field;
        let q = self.quotient.as_ref().expect("quotient is kept after construction");
        f.mul_vec(&q.projection, cycle)
    }

    pub fn is_boundary(&self, chain: &[Q]) -> bool {
        self.boundaries.contains(chain)
    }
}

fn homology_from(field: &Field, degree: usize, cycles: Subspace, boundaries: Subspace) -> Result<CeHomology, HomologyError> {
    let q = field_quotient(field, &cycles.basis, &boundaries.basis)?;
    Ok(CeHomology { degree, cycles, boundaries, representatives: q.section.clone(), quotient: Some(q) })
}

pub fn ce_homology(g: &SCAlgebra, degree: usize) -> Result<CeHomology, HomologyError> {
    require_lie(g)?;
    let f = &g.field;
    let d2 = ce_d2(g);
    match degree {
        1 => {
            let cycles = Subspace::whole(f, g.dim);
            let boundaries = Subspace::spanned_by(f, g.dim, &d2);
            homology_from(f, 1, cycles, boundaries)
        }
        2 => {
            let m = d2.cols();
            let cycles = Subspace::spanned_by(f, m, &f.kernel(&d2));
            let boundaries = Subspace::spanned_by(f, m, &ce_d3(g));
            homology_from(f, 2, cycles, boundaries)
        }
        d => Err(HomologyError::BadDegree(d)),
    }
}

/// `0 -> K -> B -> A -> 0` with `K` central, `A = B / K`.
#[derive(Clone, Debug, Serialize)]
pub struct CentralExtension {
    pub b: SCAlgebra,
    pub k: Subspace,
    pub a: SCAlgebra,
    /// `dim(A) x dim(B)`
    pub projection: QMatrix,
    /// `dim(B) x dim(A)`, lifting `A`-basis vectors to complementary coordinates of `B`
    pub section: QMatrix,
}

pub fn central_extension_validate(b: &SCAlgebra, k: &Subspace) -> Result<CentralExtension, HomologyError> {
    require_lie(b)?;
    require_ideal(b, k)?;
    for (idx, kv) in k.vectors().iter().enumerate() {
        for j in 0..b.dim {
            let w = b.mul(&b.unit(j), kv);
            if w.iter().any(|x| !x.is_zero()) {
                let show = |v: &[Q]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
                return Err(HomologyError::NotCentral(format!(
                    "[e{}, k{}] = ({}) where k{} = ({})",
                    j + 1,
                    idx + 1,
                    show(&w),
                    idx + 1,
                    show(kv)
                )));
            }
        }
    }
    let q = quotient_algebra(b, k)?;
    Ok(CentralExtension { b: b.clone(), k: k.clone(), a: q.algebra, projection: q.projection, section: q.section })
}

impl CentralExtension {
    /// The same extension with another lift of the `A`-basis.
    pub fn with_section(&self, section: &QMatrix) -> Result<Self, HomologyError> {
        let f = &self.b.field;
        let ps = f.mul_mat(&self.projection, section);
        if section.shape() != self.section.shape() || !f.is_zero_matrix(&ps.sub(&QMatrix::identity(self.a.dim))) {
            return Err(HomologyError::BadSection);
        }
        Ok(CentralExtension { section: f.reduce_matrix(section), ..self.clone() })
    }
}

/// `K (x) H1(B) -> H2(B) -> H2(A) -> K -> H1(B) -> H1(A) -> 0`.
#[derive(Clone, Debug, Serialize)]
pub struct GaneaSequence {
    pub extension: CentralExtension,
    pub h1b: CeHomology,
    pub h2b: CeHomology,
    pub h1a: CeHomology,
    pub h2a: CeHomology,
    /// dimensions of the six terms in order
    pub dims: [usize; 6],
    /// `g1 .. g5`, each `dim(target) x dim(source)`
    pub maps: [QMatrix; 5],
    /// characteristic 2 instances are computed but flagged
    pub characteristic_two: bool,
}

pub const GANEA_TERMS: [&str; 6] = ["K(x)ab(B)", "H2(B)", "H2(A)", "K", "H1(B)", "H1(A)"];

pub fn ganea_sequence(e: &CentralExtension) -> Result<GaneaSequence, HomologyError> {
    let f = &e.b.field;
    let h1b = ce_homology(&e.b, 1)?;
    let h2b = ce_homology(&e.b, 2)?;
    let h1a = ce_homology(&e.a, 1)?;
    let h2a = ce_homology(&e.a, 2)?;
    let kdim = e.k.dim();
    let nb = e.b.dim;
    let na = e.a.dim;

    // g1: k_a (x) beta_b -> [k_a ^ rep(beta_b)]
    let mut g1_cols = vec![];
    for kv in e.k.vectors() {
        for rep in h1b.representatives.columns() {
            g1_cols.push(h2b.class_of(&wedge2(f, &kv, &rep)));
        }
    }
    let g1 = Matrix::from_cols(&g1_cols, h2b.dim());

    // g2: Lambda^2 p on representatives
    let pcols: Vec<Vec<Q>> = e.projection.columns();
    let lambda2p_cols: Vec<Vec<Q>> =
        wedge2_basis(nb).into_iter().map(|(i, j)| wedge2(f, &pcols[i], &pcols[j])).collect();
    let lambda2p = Matrix::from_cols(&lambda2p_cols, wedge2_basis(na).len());
    let g2_cols: Vec<Vec<Q>> =
        h2b.representatives.columns().iter().map(|r| h2a.class_of(&f.mul_vec(&lambda2p, r))).collect();
    let g2 = Matrix::from_cols(&g2_cols, h2a.dim());

    // g3: sum c_ij abar_i ^ abar_j -> sum c_ij [s abar_i, s abar_j], in K coordinates
    let scols = e.section.columns();
    let w2a = wedge2_basis(na);
    let mut g3_cols = vec![];
    for r in h2a.representatives.columns() {
        let mut acc = vec![Q::zero(); nb];
        for (c, (i, j)) in r.iter().zip(&w2a) {
            if c.is_zero() {
                continue;
            }
            let br = e.b.mul(&scols[*i], &scols[*j]);
            for (x, y) in acc.iter_mut().zip(&br) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        let coords = f.solve(&e.k.basis, &acc).ok_or(HomologyError::NotCentral(
            "lifted brackets of a 2-cycle leave K".into(),
        ))?;
        g3_cols.push(coords);
    }
    let g3 = Matrix::from_cols(&g3_cols, kdim);

    // g4: K -> B -> H1(B)
    let g4_cols: Vec<Vec<Q>> = e.k.vectors().iter().map(|kv| h1b.class_of(kv)).collect();
    let g4 = Matrix::from_cols(&g4_cols, h1b.dim());

    // g5: induced by p
    let g5_cols: Vec<Vec<Q>> =
        h1b.representatives.columns().iter().map(|r| h1a.class_of(&f.mul_vec(&e.projection, r))).collect();
    let g5 = Matrix::from_cols(&g5_cols, h1a.dim());

    let dims = [kdim * h1b.dim(), h2b.dim(), h2a.dim(), kdim, h1b.dim(), h1a.dim()];
    Ok(GaneaSequence {
        extension: e.clone(),
        h1b,
        h2b,
        h1a,
        h2a,
        dims,
        maps: [g1, g2, g3, g4, g5],
        characteristic_two: f.characteristic() == 2,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PositionReport {
    pub term: String,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub dims: [usize; 6],
    pub positions: Vec<PositionReport>,
    pub last_surjective: bool,
    pub exact: bool,
}

/// Exactness at the four interior terms plus surjectivity onto `H1(A)`.
pub fn exactness_check(s: &GaneaSequence) -> ExactnessReport {
    let f = &s.extension.b.field;
    let mut positions = vec![];
    for pos in 0..4 {
        let incoming = &s.maps[pos];
        let outgoing = &s.maps[pos + 1];
        let image_dim = f.rank(incoming);
        let kernel_dim = s.dims[pos + 1] - f.rank(outgoing);
        let composite_zero = f.is_zero_matrix(&f.mul_mat(outgoing, incoming));
        positions.push(PositionReport {
            term: GANEA_TERMS[pos + 1].to_string(),
            image_dim,
            kernel_dim,
            composite_zero,
            exact: composite_zero && image_dim == kernel_dim,
        });
    }
    let last_surjective = f.rank(&s.maps[4]) == s.dims[5];
    let exact = last_surjective && positions.iter().all(|p| p.exact);
    ExactnessReport { dims: s.dims, positions, last_surjective, exact }
}

/// The fragment `gamma_n(X) (x) X -> H2(X) -> H2(X / gamma_n) -> gamma_n(X)`.
#[derive(Clone, Debug, Serialize)]
pub struct LcsGaneaReport {
    pub n: usize,
    pub gamma_dim: usize,
    pub fragment_dims: [usize; 4],
    pub fragment_exact: bool,
    pub sequence: ExactnessReport,
}

/// Requires `gamma_n(X)` to be central, that is nilpotency class at most `n`.
pub fn lcs_ganea_application(x: &SCAlgebra, n: usize) -> Result<LcsGaneaReport, HomologyError> {
    require_lie(x)?;
    assert!(n >= 2, "the lower central series application needs n >= 2");
    let gamma = j_filtration(x, n)[n - 1].clone();
    let e = central_extension_validate(x, &gamma)?;
    let s = ganea_sequence(&e)?;
    let report = exactness_check(&s);
    let fragment_exact = report.positions[0].exact && report.positions[1].exact;
    Ok(LcsGaneaReport {
        n,
        gamma_dim: gamma.dim(),
        fragment_dims: [s.dims[0], s.dims[1], s.dims[2], s.dims[3]],
        fragment_exact,
        sequence: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q;
    use crate::nonassoc::library::{heisenberg, r2, sl2};

    fn qf() -> Field {
        Field::Rational
    }

    #[test]
    fn homology_examples() {
        let f = qf();
        for n in 1..5 {
            let a = SCAlgebra::abelian(&f, n, Some(Variety::Lie));
            assert_eq!(ce_homology(&a, 2).unwrap().dim(), n * (n - 1) / 2);
            assert_eq!(ce_homology(&a, 1).unwrap().dim(), n);
        }
        let h = heisenberg(&f);
        assert_eq!(ce_homology(&h, 1).unwrap().dim(), 2);
        let h2 = ce_homology(&h, 2).unwrap();
        assert_eq!(h2.dim(), 2);
        assert_eq!(h2.cycles.dim(), 2);
        assert!(h2.boundaries.is_zero());
        let s = sl2(&f);
        assert_eq!(ce_homology(&s, 1).unwrap().dim(), 0);
        assert_eq!(ce_homology(&s, 2).unwrap().dim(), 0);
        assert!(matches!(ce_homology(&h, 3), Err(HomologyError::BadDegree(3))));
    }

    #[test]
    fn d2_after_d3_vanishes() {
        let f = qf();
        for g in [heisenberg(&f), sl2(&f), r2(&f)] {
            assert!(f.is_zero_matrix(&f.mul_mat(&ce_d2(&g), &ce_d3(&g))));
        }
    }

    #[test]
    fn validation() {
        let f = qf();
        let h = heisenberg(&f);
        let e = central_extension_validate(&h, &h.center()).unwrap();
        assert_eq!(e.a.dim, 2);
        let z = central_extension_validate(&h, &h.zero_subspace()).unwrap();
        assert_eq!(z.a.dim, 3);
        let r = r2(&f);
        let y = Subspace::from_vectors(&f, 2, &[vec![q(0), q(1)]]);
        assert!(matches!(central_extension_validate(&r, &y), Err(HomologyError::NotCentral(_))));
        let x = Subspace::from_vectors(&f, 2, &[vec![q(1), q(0)]]);
        assert!(matches!(central_extension_validate(&r, &x), Err(HomologyError::NotIdeal(_))));
    }

    #[test]
    fn heisenberg_ganea() {
        let f = qf();
        let h = heisenberg(&f);
        let e = central_extension_validate(&h, &h.center()).unwrap();
        let s = ganea_sequence(&e).unwrap();
        assert_eq!(s.dims, [2, 2, 1, 1, 2, 2]);
        assert_eq!(f.rank(&s.maps[0]), 2);
        assert!(s.maps[1].is_zero());
        assert_eq!(s.maps[2].to_rows(), vec![vec![q(1)]]);
        assert!(s.maps[3].is_zero());
        assert_eq!(f.rank(&s.maps[4]), 2);
        let r = exactness_check(&s);
        assert!(r.exact);

        let mut bad = s.clone();
        bad.maps[2] = QMatrix::zeros(1, 1);
        let r = exactness_check(&bad);
        assert!(!r.exact);
        assert!(!r.positions[2].exact);
    }

    #[test]
    fn degenerate_and_abelian() {
        let f = qf();
        let h = heisenberg(&f);
        let s = ganea_sequence(&central_extension_validate(&h, &h.zero_subspace()).unwrap()).unwrap();
        assert_eq!(s.dims, [0, 2, 2, 0, 2, 2]);
        assert!(exactness_check(&s).exact);
        let a = SCAlgebra::abelian(&f, 3, Some(Variety::Lie));
        let k = Subspace::from_vectors(&f, 3, &[vec![q(1), q(1), q(0)]]);
        let s = ganea_sequence(&central_extension_validate(&a, &k).unwrap()).unwrap();
        assert!(s.maps[2].is_zero());
        assert_eq!(f.rank(&s.maps[3]), 1);
        assert!(exactness_check(&s).exact);
    }

    #[test]
    fn g1_ignores_boundaries() {
        let f = qf();
        let h = heisenberg(&f);
        let e = central_extension_validate(&h, &h.center()).unwrap();
        let s = ganea_sequence(&e).unwrap();
        // z lies in [B, B], so z ^ z = 0 and k ^ [x, y] is a boundary
        let k = h.unit(2);
        let w = wedge2(&f, &k, &h.basis_product(0, 1));
        assert!(s.h2b.is_boundary(&w));
    }

    #[test]
    fn lcs_application() {
        let f = qf();
        let r = lcs_ganea_application(&heisenberg(&f), 2).unwrap();
        assert_eq!(r.fragment_dims, [2, 2, 1, 1]);
        assert!(r.fragment_exact && r.sequence.exact);
        let a = SCAlgebra::abelian(&f, 2, Some(Variety::Lie));
        let r = lcs_ganea_application(&a, 2).unwrap();
        assert_eq!(r.gamma_dim, 0);
        assert!(r.sequence.exact);
        let fil = crate::nonassoc::library::filiform(&f, 4);
        assert!(matches!(lcs_ganea_application(&fil, 2), Err(HomologyError::NotCentral(_))));
    }
}
