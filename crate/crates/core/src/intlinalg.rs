//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything is built on one unimodular column reduction: for a matrix `M`
//! we find `U` in `GL_c(Z)` with `M U` in column echelon form. Trailing zero
//! columns of `M U` give the kernel, and the echelon part solves
//! `M x = b` by forward substitution.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().cloned().map(Into::into).collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Replaces columns `j`, `k` by `(a*cj + b*ck, c*cj + d*ck)`.
    fn combine_columns(&mut self, j: usize, k: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        for i in 0..self.rows {
            let x = self.get(i, j).clone();
            let y = self.get(i, k).clone();
            self.set(i, j, a * &x + b * &y);
            self.set(i, k, c * &x + d * &y);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A subgroup of `Z^dim` given by a linearly independent basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub dim: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn trivial(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Lattice { dim, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Integer membership test.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.basis.is_empty() {
            return v.iter().all(Zero::is_zero);
        }
        let mut m = IntMatrix::zeros(self.dim, self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            for (i, x) in b.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        solve_diophantine(&m, v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }
}

/// Result of the unimodular column reduction `m * u = h`.
struct ColumnEchelon {
    h: IntMatrix,
    u: IntMatrix,
    /// `(row, column)` of each pivot, rows strictly increasing, columns `0..rank`.
    pivots: Vec<(usize, usize)>,
}

fn column_echelon(m: &IntMatrix) -> ColumnEchelon {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..m.rows {
        if k == m.cols {
            break;
        }
        for j in (k + 1)..m.cols {
            if h.get(i, j).is_zero() {
                continue;
            }
            let a = h.get(i, k).clone();
            let b = h.get(i, j).clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            // [s  -b/g; t  a/g] has determinant 1
            let c = -(&b / &g);
            let d = &a / &g;
            h.combine_columns(k, j, &s, &t, &c, &d);
            u.combine_columns(k, j, &s, &t, &c, &d);
        }
        if h.get(i, k).is_zero() {
            continue;
        }
        if h.get(i, k).is_negative() {
            let (m1, z) = (-BigInt::one(), BigInt::zero());
            h.combine_columns(k, k, &m1, &z, &m1, &z);
            u.combine_columns(k, k, &m1, &z, &m1, &z);
        }
        pivots.push((i, k));
        k += 1;
    }
    ColumnEchelon { h, u, pivots }
}

/// A basis of `{x : M x = 0}` over `Z`.
pub fn kernel_basis(m: &IntMatrix) -> Lattice {
    let ce = column_echelon(m);
    let rank = ce.pivots.len();
    Lattice {
        dim: m.cols,
        basis: (rank..m.cols).map(|j| ce.u.column(j)).collect(),
    }
}

/// Solves `A x = b` over the integers: a particular solution and the kernel.
pub fn solve_diophantine(a: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigInt>, Lattice)> {
    assert_eq!(a.rows, b.len(), "dimension mismatch");
    let ce = column_echelon(a);
    let rank = ce.pivots.len();
    let mut y = vec![BigInt::zero(); a.cols];
    let mut next = 0;
    for (i, bi) in b.iter().enumerate().take(a.rows) {
        let mut residual = bi.clone();
        for (l, yl) in y.iter().enumerate().take(next) {
            residual -= ce.h.get(i, l) * yl;
        }
        if next < rank && ce.pivots[next].0 == i {
            let p = ce.h.get(i, next);
            let (q, r) = residual.div_rem(p);
            if !r.is_zero() {
                return None;
            }
            y[next] = q;
            next += 1;
        } else if !residual.is_zero() {
            return None;
        }
    }
    let x = ce.u.mul_vec(&y);
    let kernel = Lattice {
        dim: a.cols,
        basis: (rank..a.cols).map(|j| ce.u.column(j)).collect(),
    };
    Some((x, kernel))
}

/// Exponent such that every periodic point of a 2x2 integer matrix has a
/// period dividing it: finite orders in `GL_2(Z)` are 1, 2, 3, 4 or 6.
pub const PERIOD_EXPONENT: u32 = 12;

/// `Per(M) = Ker(M^12 - I)` for a 2x2 integer matrix.
pub fn periodic_lattice(m: &IntMatrix) -> Lattice {
    assert!(m.rows == 2 && m.cols == 2, "periodic_lattice expects a 2x2 matrix");
    kernel_basis(&m.pow(PERIOD_EXPONENT).sub(&IntMatrix::identity(2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_i64(&[&[1, -1], &[1, -1]]));
        assert_eq!(k.rank(), 1);
        assert!(k.contains_i64(&[1, 1]));
        assert!(!k.contains_i64(&[1, 0]));
        assert!(kernel_basis(&IntMatrix::identity(2)).is_trivial());
        let z = kernel_basis(&IntMatrix::zeros(2, 2));
        assert_eq!(z.rank(), 2);
        assert!(z.contains_i64(&[3, -7]));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 4y = 0 has kernel generated by (2, 1), not (4, 2)
        let k = kernel_basis(&IntMatrix::from_i64(&[&[2, -4]]));
        assert!(k.contains_i64(&[2, 1]));
    }

    #[test]
    fn diophantine_examples() {
        let a = IntMatrix::from_i64(&[&[1, 2]]);
        let (x, ker) = solve_diophantine(&a, &big(&[3])).unwrap();
        assert_eq!(a.mul_vec(&x), big(&[3]));
        assert_eq!(ker.rank(), 1);
        assert!(solve_diophantine(&IntMatrix::from_i64(&[&[2, 4]]), &big(&[3])).is_none());
        let (x, ker) = solve_diophantine(&IntMatrix::from_i64(&[&[0]]), &big(&[0])).unwrap();
        assert_eq!(x, big(&[0]));
        assert_eq!(ker.rank(), 1);
    }

    #[test]
    fn diophantine_overdetermined() {
        let a = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(solve_diophantine(&a, &big(&[1, 2, 3])).is_some());
        assert!(solve_diophantine(&a, &big(&[1, 2, 4])).is_none());
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_lattice(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).rank(), 2);
        let p = periodic_lattice(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]]));
        assert_eq!(p.rank(), 1);
        assert!(p.contains_i64(&[0, 1]));
        assert!(periodic_lattice(&IntMatrix::from_i64(&[&[2, 0], &[0, 2]])).is_trivial());
    }

    #[test]
    fn display() {
        assert_eq!(IntMatrix::from_i64(&[&[1, -1], &[0, 2]]).to_string(), "[1, -1; 0, 2]");
    }
}
