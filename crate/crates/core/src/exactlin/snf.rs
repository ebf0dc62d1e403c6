//! Smith normal form over the integers.
//!
//! Pivoting always picks the nonzero entry of smallest absolute value in the
//! active submatrix, lowest row first and then lowest column, so `U` and `V`
//! are reproducible for a given input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal in chain form.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d_1 | d_2 | ... ` including trailing zeros, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    // row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let x = m[(j, c)].clone();
                if !x.is_zero() {
                    m[(i, c)] += k * x;
                }
            }
        }
        // u_inv <- u_inv * E^{-1}: col_j -= k * col_i
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let x = m[(r, i)].clone();
            if !x.is_zero() {
                m[(r, j)] -= k * x;
            }
        }
    }

    // col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let x = m[(r, j)].clone();
                if !x.is_zero() {
                    m[(r, i)] += k * x;
                }
            }
        }
        // v_inv <- E^{-1} * v_inv: row_j -= k * row_i
        let m = &mut self.v_inv;
        for c in 0..m.cols() {
            let x = m[(i, c)].clone();
            if !x.is_zero() {
                m[(j, c)] -= k * x;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            self.a[(i, c)] = -self.a[(i, c)].clone();
        }
        for c in 0..self.u.cols() {
            self.u[(i, c)] = -self.u[(i, c)].clone();
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)].clone();
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.a.rows().min(self.a.cols());
        for t in 0..n {
            loop {
                let Some((pi, pj)) = self.find_pivot(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..self.a.rows() {
                    let x = self.a[(i, t)].clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.div_floor(&p);
                    self.add_row(i, t, &-q);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..self.a.cols() {
                    let x = self.a[(t, j)].clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.div_floor(&p);
                    self.add_col(j, t, &-q);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                let offending = (t + 1..self.a.rows()).find(|&i| {
                    (t + 1..self.a.cols()).any(|j| !self.a[(i, j)].is_multiple_of(&p))
                });
                match offending {
                    Some(i) => self.add_row(t, i, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (r, c) = m.shape();
    let mut red = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    red.run();
    SnfResult { u: red.u, d: red.a, v: red.v, u_inv: red.u_inv, v_inv: red.v_inv }
}

/// Some integer `x` with `m x = v`, if one exists.
pub fn solve_int(m: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), v.len(), "right-hand side has the wrong length");
    let s = smith_normal_form(m);
    let w = s.u.mul_vec(v);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, x) in w.iter().enumerate() {
        let d = if i < m.cols() { s.d[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !x.is_zero() {
                return None;
            }
        } else {
            let (q, r) = x.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Basis (as columns) of the integer kernel lattice `{x : m x = 0}`.
pub fn int_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    s.v.select_cols(&idx)
}

/// Integer determinant by fraction-free elimination (Bareiss).
pub fn int_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.clone();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = val;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for (i, x) in diag.iter().enumerate() {
            assert!(!x.is_negative());
            if i + 1 < diag.len() && !x.is_zero() {
                assert!(diag[i + 1].is_multiple_of(x));
            }
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn two_by_two_minor_oracle() {
        // d1 = gcd of entries = 2, d1 * d2 = |gcd of 2x2 minors| = |16 - 24| = 8
        let s = check(&IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(4));
        assert!(s.d.is_identity());
        let z = IntMatrix::zeros(3, 2);
        let s = check(&z);
        assert!(s.d.is_zero());
    }

    #[test]
    fn chain_from_coprime_diagonal() {
        let s = check(&IntMatrix::from_i64_rows(&[&[4, 0], &[0, 6]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_i64_rows(&[&[3, 5, 7], &[2, -4, 6], &[9, 1, 0]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
        check(&m);
    }

    #[test]
    fn integer_solutions() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let x = solve_int(&m, &[BigInt::from(2), BigInt::from(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![BigInt::from(2), BigInt::from(2)]);
        assert!(solve_int(&m, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let k = int_kernel(&IntMatrix::from_i64_rows(&[&[1, 2, 3]]));
        assert_eq!(k.cols(), 2);
        assert!(IntMatrix::from_i64_rows(&[&[1, 2, 3]]).mul(&k).is_zero());
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(int_determinant(&m), BigInt::from(6));
        assert_eq!(int_determinant(&IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }
}
