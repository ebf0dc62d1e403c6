use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::matrix::{kron_vec, IntMatrix, Matrix};
use super::snf::smith_normal_form;
use super::ExactError;

/// Change of basis between the generators of a presentation and the
/// canonical (invariant factor) coordinates of its cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `k x n`: presentation coordinates to canonical coordinates.
    pub to_canonical: IntMatrix,
    /// `n x k`: canonical generator `i` lifted to the presentation generators.
    pub from_canonical: IntMatrix,
}

/// A finitely generated abelian group `Z/d_1 + ... + Z/d_s + Z^r`.
///
/// Invariant factors are stored finite-first in divisibility order, followed
/// by one `0` per free summand.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    factors: Vec<BigInt>,
    presentation: Option<IntMatrix>,
    witness: Option<Witness>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FgAbGroup {}

impl Serialize for FgAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.factors.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }
}

impl FgAbGroup {
    pub fn from_invariant_factors(factors: Vec<BigInt>) -> Result<Self, ExactError> {
        let mut seen_free = false;
        let mut prev: Option<&BigInt> = None;
        for d in &factors {
            if d.is_zero() {
                seen_free = true;
                continue;
            }
            if seen_free {
                return Err(ExactError::InvalidFactors(format!(
                    "finite factor {d} listed after a free summand"
                )));
            }
            if d < &BigInt::from(2) {
                return Err(ExactError::InvalidFactors(format!("factor {d} is neither 0 nor >= 2")));
            }
            if let Some(p) = prev {
                if !d.is_multiple_of(p) {
                    return Err(ExactError::InvalidFactors(format!("{p} does not divide {d}")));
                }
            }
            prev = Some(d);
        }
        Ok(FgAbGroup { factors, presentation: None, witness: None })
    }

    pub fn trivial() -> Self {
        FgAbGroup { factors: vec![], presentation: None, witness: None }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { factors: vec![BigInt::zero(); rank], presentation: None, witness: None }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        FgAbGroup::from_cyclic_orders(&[BigInt::from(n)])
    }

    /// `Z/o_1 + ... + Z/o_k` for arbitrary orders (0 meaning `Z`), normalised
    /// through its diagonal presentation; the witness maps summand `i` to
    /// canonical coordinates.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let rel = IntMatrix::diagonal(orders);
        fgab_from_presentation(&rel)
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn ngens(&self) -> usize {
        self.factors.len()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.factors.iter().all(|d| d.is_zero())
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.factors.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    pub fn presentation(&self) -> Option<&IntMatrix> {
        self.presentation.as_ref()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Presentation-to-canonical matrix (identity when no presentation is recorded).
    pub fn to_canonical(&self) -> IntMatrix {
        match &self.witness {
            Some(w) => w.to_canonical.clone(),
            None => IntMatrix::identity(self.ngens()),
        }
    }

    /// Canonical-to-presentation lift (identity when no presentation is recorded).
    pub fn from_canonical(&self) -> IntMatrix {
        match &self.witness {
            Some(w) => w.from_canonical.clone(),
            None => IntMatrix::identity(self.ngens()),
        }
    }

    /// Canonical coordinates reduced into `[0, d_i)` for finite factors.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens(), "element has the wrong number of coordinates");
        v.iter()
            .zip(&self.factors)
            .map(|(x, d)| if d.is_zero() { x.clone() } else { x.mod_floor(d) })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Reduces every column of `m`, read as elements of this group.
    pub fn reduce_columns(&self, m: &IntMatrix) -> IntMatrix {
        assert_eq!(m.rows(), self.ngens());
        Matrix::from_fn(m.rows(), m.cols(), |i, j| {
            let d = &self.factors[i];
            if d.is_zero() {
                m[(i, j)].clone()
            } else {
                m[(i, j)].mod_floor(d)
            }
        })
    }

    /// Every element of a finite group, in lexicographic coordinate order.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        self.order()?;
        let mut out = vec![vec![]];
        for d in &self.factors {
            let n = d.to_u64()?;
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for prefix in &out {
                for x in 0..n {
                    let mut p = prefix.clone();
                    p.push(BigInt::from(x));
                    next.push(p);
                }
            }
            out = next;
        }
        Some(out)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.factors.clone();
        orders.extend(other.factors.iter().cloned());
        FgAbGroup::from_cyclic_orders(&orders)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel of a relation matrix: `Z^cols / rowspan(m)`.
pub fn fgab_from_presentation(m: &IntMatrix) -> FgAbGroup {
    let n = m.cols();
    let snf = smith_normal_form(m);
    let diag: Vec<BigInt> = (0..n)
        .map(|i| if i < m.rows() { snf.d[(i, i)].clone() } else { BigInt::zero() })
        .collect();
    let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
    let factors: Vec<BigInt> = keep.iter().map(|&i| diag[i].clone()).collect();
    // rowspan(m) = rowspan(D V^{-1}); with y = V^T x the relations become diag(D).
    let vt = snf.v.transpose();
    let v_inv_t = snf.v_inv.transpose();
    let mut to_canonical = vt.select_rows(&keep);
    let from_canonical = v_inv_t.select_cols(&keep);
    for (r, d) in factors.iter().enumerate() {
        if !d.is_zero() {
            for c in 0..to_canonical.cols() {
                to_canonical[(r, c)] = to_canonical[(r, c)].mod_floor(d);
            }
        }
    }
    FgAbGroup {
        factors,
        presentation: Some(m.clone()),
        witness: Some(Witness { to_canonical, from_canonical }),
    }
}

/// `A (x) B = sum_{i,j} Z/gcd(d_i, e_j)`; the witness maps pair `(i, j)`
/// (index `i * B.ngens() + j`) to canonical coordinates.
pub fn tensor_fgab(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let mut orders = Vec::with_capacity(a.ngens() * b.ngens());
    for d in a.factors() {
        for e in b.factors() {
            orders.push(d.gcd(e));
        }
    }
    FgAbGroup::from_cyclic_orders(&orders)
}

/// `sum_{i<j} Z/gcd(d_i, d_j)`; the witness indexes pairs `i < j` lexicographically.
pub fn exterior_square_fgab(a: &FgAbGroup) -> FgAbGroup {
    let f = a.factors();
    let mut orders = vec![];
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            orders.push(f[i].gcd(&f[j]));
        }
    }
    FgAbGroup::from_cyclic_orders(&orders)
}

/// Canonical coordinates of `x (x) y` inside `tensor_fgab(a, b)`.
pub fn tensor_element(t: &FgAbGroup, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    t.reduce(&t.to_canonical().mul_vec(&kron_vec(x, y)))
}

/// Checks that `f` (rows = gens of `b`, cols = gens of `a`) is a homomorphism `a -> b`.
pub fn check_hom(f: &IntMatrix, a: &FgAbGroup, b: &FgAbGroup) -> Result<(), ExactError> {
    if f.shape() != (b.ngens(), a.ngens()) {
        return Err(ExactError::DimensionMismatch {
            expected: (b.ngens(), a.ngens()),
            found: f.shape(),
        });
    }
    for (j, aj) in a.factors().iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        let image: Vec<BigInt> = f.col(j).iter().map(|x| x * aj).collect();
        if !b.is_zero_element(&image) {
            return Err(ExactError::DomainMismatch(format!(
                "generator {j} has order {aj} but its image does not"
            )));
        }
    }
    Ok(())
}

/// `f (x) g : A (x) B -> A' (x) B'` in canonical coordinates of the `tensor_fgab` results.
pub fn tensor_hom(
    f: &IntMatrix,
    g: &IntMatrix,
    source: &FgAbGroup,
    target: &FgAbGroup,
) -> IntMatrix {
    let pair = f.kron(g);
    target.reduce_columns(&target.to_canonical().mul(&pair).mul(&source.from_canonical()))
}

/// Quotient of a presented module together with the projection and a lift.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbGroup,
    /// target coordinates -> cokernel canonical coordinates
    pub projection: IntMatrix,
    /// cokernel canonical coordinates -> target coordinates
    pub section: IntMatrix,
}

/// Cokernel of `f` into `Z^m / diag(orders)`; `orders` need not be in chain form.
pub fn cokernel_presented(orders: &[BigInt], f: &IntMatrix) -> Cokernel {
    let m = orders.len();
    assert_eq!(f.rows(), m, "map codomain does not match the target module");
    let mut rel_rows: Vec<Vec<BigInt>> = f.transpose().to_rows();
    for (i, d) in orders.iter().enumerate() {
        if !d.is_zero() {
            let mut r = vec![BigInt::zero(); m];
            r[i] = d.clone();
            rel_rows.push(r);
        }
    }
    let rel = IntMatrix::from_rows(rel_rows, m);
    let group = fgab_from_presentation(&rel);
    let projection = group.to_canonical();
    let section = group.from_canonical();
    Cokernel { group, projection, section }
}

/// `B / im(f)` for a homomorphism `f : A -> B` in canonical coordinates.
pub fn map_cokernel(f: &IntMatrix, a: &FgAbGroup, b: &FgAbGroup) -> Result<Cokernel, ExactError> {
    check_hom(f, a, b)?;
    Ok(cokernel_presented(b.factors(), f))
}

pub fn is_surjective(f: &IntMatrix, target: &FgAbGroup) -> bool {
    cokernel_presented(target.factors(), f).group.is_trivial()
}

/// A lattice in `Z^m` spanned by columns, with exact membership tests.
#[derive(Clone, Debug)]
pub struct Lattice {
    u: IntMatrix,
    diag: Vec<BigInt>,
    /// `m x r` basis of the lattice
    basis: IntMatrix,
}

impl Lattice {
    pub fn spanned_by(gens: &IntMatrix) -> Self {
        let m = gens.rows();
        let snf = smith_normal_form(gens);
        let diag: Vec<BigInt> = (0..m)
            .map(|i| if i < gens.cols() { snf.d[(i, i)].clone() } else { BigInt::zero() })
            .collect();
        let r = diag.iter().filter(|d| !d.is_zero()).count();
        let basis = Matrix::from_fn(m, r, |i, k| &snf.u_inv[(i, k)] * &diag[k]);
        Lattice { u: snf.u, diag, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `v` in `basis()`, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.u.mul_vec(v);
        let r = self.rank();
        let mut out = Vec::with_capacity(r);
        for (i, x) in w.iter().enumerate() {
            if i < r {
                let (q, rem) = x.div_rem(&self.diag[i]);
                if !rem.is_zero() {
                    return None;
                }
                out.push(q);
            } else if !x.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }
}

/// The subgroup of `group` generated by the columns of `gens`.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub structure: FgAbGroup,
    /// subgroup canonical coordinates -> ambient canonical coordinates
    pub inclusion: IntMatrix,
    lattice: Lattice,
}

impl Subgroup {
    pub fn generated_by(group: &FgAbGroup, gens: &IntMatrix) -> Self {
        Subgroup::generated_in(group.factors(), gens)
    }

    /// Same as `generated_by` but for a module `Z^m / diag(orders)`.
    pub fn generated_in(orders: &[BigInt], gens: &IntMatrix) -> Self {
        let m = orders.len();
        assert_eq!(gens.rows(), m);
        let rel_cols: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut v = vec![BigInt::zero(); m];
                v[i] = d.clone();
                v
            })
            .collect();
        let rel = IntMatrix::from_cols(&rel_cols, m);
        let lattice = Lattice::spanned_by(&gens.hstack(&rel));
        let r = lattice.rank();
        let rel_rows: Vec<Vec<BigInt>> = rel_cols
            .iter()
            .map(|c| lattice.coords(c).expect("relations lie in the spanned lattice"))
            .collect();
        let structure = fgab_from_presentation(&IntMatrix::from_rows(rel_rows, r));
        let inclusion = lattice.basis().mul(&structure.from_canonical());
        let inclusion = Matrix::from_fn(m, inclusion.cols(), |i, j| {
            let d = &orders[i];
            if d.is_zero() {
                inclusion[(i, j)].clone()
            } else {
                inclusion[(i, j)].mod_floor(d)
            }
        });
        Subgroup { structure, inclusion, lattice }
    }

    /// Membership of an ambient element in the subgroup.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.lattice.contains(v)
    }
}

/// Kernel of a homomorphism `f : a -> b` as a subgroup of `a`.
pub fn hom_kernel(f: &IntMatrix, a: &FgAbGroup, b: &FgAbGroup) -> Result<Subgroup, ExactError> {
    check_hom(f, a, b)?;
    let n = a.ngens();
    let rel = IntMatrix::diagonal(b.factors());
    let k = super::snf::int_kernel(&f.hstack(&rel));
    let idx: Vec<usize> = (0..n).collect();
    let gens = k.select_rows(&idx);
    Ok(Subgroup::generated_by(a, &gens))
}

/// Membership of `v` in `span(gens) + relations` of `Z^m / diag(orders)`.
pub fn in_span_mod(orders: &[BigInt], gens: &IntMatrix, v: &[BigInt]) -> bool {
    Subgroup::generated_in(orders, gens).contains(v)
}

pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn factors(g: &FgAbGroup) -> Vec<i64> {
        g.factors().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn presentation_examples() {
        assert_eq!(factors(&fgab_from_presentation(&IntMatrix::from_i64_rows(&[&[4]]))), vec![4]);
        assert_eq!(factors(&fgab_from_presentation(&IntMatrix::zeros(0, 2))), vec![0, 0]);
        assert_eq!(
            factors(&fgab_from_presentation(&IntMatrix::from_i64_rows(&[&[2, 0], &[0, 6]]))),
            vec![2, 6]
        );
    }

    #[test]
    fn witness_is_consistent() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let g = fgab_from_presentation(&m);
        let w = g.witness().unwrap();
        // every relation maps to zero
        for r in m.to_rows() {
            assert!(g.is_zero_element(&w.to_canonical.mul_vec(&r)));
        }
        // lifting then projecting is the identity on canonical coordinates
        let round = w.to_canonical.mul(&w.from_canonical);
        for j in 0..g.ngens() {
            let mut e = vec![BigInt::zero(); g.ngens()];
            e[j] = BigInt::one();
            assert_eq!(g.reduce(&round.col(j)), g.reduce(&e));
        }
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_fgab(&FgAbGroup::cyclic(4), &FgAbGroup::cyclic(6));
        assert_eq!(factors(&t), vec![2]);
        let t = tensor_fgab(&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(3));
        assert!(t.is_trivial());
        let a = FgAbGroup::from_invariant_factors(vec![z(2), z(6), z(0)]).unwrap();
        assert_eq!(tensor_fgab(&FgAbGroup::free(1), &a), a);
    }

    #[test]
    fn exterior_square_examples() {
        assert!(exterior_square_fgab(&FgAbGroup::free(1)).is_trivial());
        let v4 = FgAbGroup::from_invariant_factors(vec![z(2), z(2)]).unwrap();
        assert_eq!(factors(&exterior_square_fgab(&v4)), vec![2]);
        assert_eq!(factors(&exterior_square_fgab(&FgAbGroup::free(2))), vec![0]);
    }

    #[test]
    fn cokernel_examples() {
        let z1 = FgAbGroup::free(1);
        let z4 = FgAbGroup::free(4);
        let f = IntMatrix::from_i64_rows(&[&[1], &[-1], &[0], &[0]]);
        let c = map_cokernel(&f, &z1, &z4).unwrap();
        assert_eq!(factors(&c.group), vec![0, 0, 0]);
        let c = map_cokernel(&IntMatrix::zeros(4, 1), &z1, &z4).unwrap();
        assert_eq!(c.group, z4);
        let two = IntMatrix::from_i64_rows(&[&[2]]);
        assert_eq!(factors(&map_cokernel(&two, &z1, &z1).unwrap().group), vec![2]);
    }

    #[test]
    fn cokernel_rejects_torsion_violation() {
        // Z/2 -> Z, 1 -> 1 is not a homomorphism
        let f = IntMatrix::from_i64_rows(&[&[1]]);
        let err = map_cokernel(&f, &FgAbGroup::cyclic(2), &FgAbGroup::free(1));
        assert!(matches!(err, Err(ExactError::DomainMismatch(_))));
        // Z/2 -> Z/4, 1 -> 2 is fine
        let f = IntMatrix::from_i64_rows(&[&[2]]);
        let c = map_cokernel(&f, &FgAbGroup::cyclic(2), &FgAbGroup::cyclic(4)).unwrap();
        assert_eq!(factors(&c.group), vec![2]);
    }

    #[test]
    fn subgroup_structure() {
        // <(2, 0)> in Z/4 + Z is Z/2
        let g = FgAbGroup::from_invariant_factors(vec![z(4), z(0)]).unwrap();
        let s = Subgroup::generated_by(&g, &IntMatrix::from_i64_rows(&[&[2], &[0]]));
        assert_eq!(factors(&s.structure), vec![2]);
        assert!(s.contains(&[z(6), z(0)]));
        assert!(!s.contains(&[z(1), z(0)]));
        // <(1, 2)> in Z/4 + Z is Z
        let s = Subgroup::generated_by(&g, &IntMatrix::from_i64_rows(&[&[1], &[2]]));
        assert_eq!(factors(&s.structure), vec![0]);
    }

    #[test]
    fn kernels() {
        // Z/4 -> Z/2 reduction has kernel Z/2
        let k = hom_kernel(&IntMatrix::from_i64_rows(&[&[1]]), &FgAbGroup::cyclic(4), &FgAbGroup::cyclic(2))
            .unwrap();
        assert_eq!(factors(&k.structure), vec![2]);
        // Z^2 -> Z, (x, y) -> x + y has kernel Z
        let k = hom_kernel(&IntMatrix::from_i64_rows(&[&[1, 1]]), &FgAbGroup::free(2), &FgAbGroup::free(1))
            .unwrap();
        assert_eq!(factors(&k.structure), vec![0]);
    }

    #[test]
    fn invalid_factor_lists() {
        assert!(FgAbGroup::from_invariant_factors(vec![z(2), z(3)]).is_err());
        assert!(FgAbGroup::from_invariant_factors(vec![z(0), z(2)]).is_err());
        assert!(FgAbGroup::from_invariant_factors(vec![z(1)]).is_err());
    }
}
