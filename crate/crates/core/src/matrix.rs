//! Dense exact matrices over a [`Field`].
//!
//! Every elimination routine pivots deterministically (first nonzero entry,
//! columns left to right, rows top to bottom), so all derived bases are
//! reproducible.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("right-hand side is not in the column space")]
    NoSolution,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(field: Field, n: usize, s: &Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|s| s.field() != field) {
            return Err(LinalgError::Shape("entry from a different field".into()));
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            data,
        })
    }

    /// Integer entries, interpreted in `field`.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!(self.field, rhs.field, "matrix product over different fields");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { data, ..*self }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| -a).collect();
        Matrix { data, ..*self }
    }

    /// Entries `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                m.set(r - r0, c - c0, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            m.set_block(0, c0, p);
            c0 += p.cols;
        }
        m
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            m.set_block(r0, 0, p);
            r0 += p.rows;
        }
        m
    }

    pub fn block_diag(field: Field, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            m.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        m.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        m
    }

    /// Row-major flattening into a column vector.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let pivot_entry = m.get(row, c);
                    if pivot_entry.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * pivot_entry);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of the null space, one per free column in
    /// increasing order, normalized to 1 at that free column.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { matrix: r, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, -r.get(pr, f));
            }
        }
        k
    }

    /// The pivot columns of `self`, a basis of its column space.
    pub fn column_space_basis(&self) -> Matrix {
        self.select_columns(&self.rref().pivots)
    }

    /// Returns `(c, s)` with `c` a surjection onto the cokernel of `self`
    /// (`c · self = 0`, full row rank) and `s` a section (`c · s = 1`).
    ///
    /// The complement of the column space is spanned by the first standard
    /// basis vectors (in index order) not already in the span.
    pub fn cokernel_projection(&self) -> (Matrix, Matrix) {
        let k = self.rows;
        let aug = Matrix::hstack(self.field, k, &[self, &Matrix::identity(self.field, k)]);
        let Rref { pivots, .. } = aug.rref();
        let image_cols: Vec<usize> = pivots.iter().copied().filter(|&p| p < self.cols).collect();
        let complement: Vec<usize> = pivots
            .iter()
            .filter(|&&p| p >= self.cols)
            .map(|&p| p - self.cols)
            .collect();
        let image = self.select_columns(&image_cols);
        let section = Matrix::identity(self.field, k).select_columns(&complement);
        let basis = Matrix::hstack(self.field, k, &[&image, &section]);
        let inv = basis.inverse().expect("image plus complement spans the target");
        let c = inv.block(image_cols.len(), k, 0, k);
        (c, section)
    }

    /// Solves `self · X = b`; free variables are set to zero.
    pub fn solve_right(&self, b: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != b.rows {
            return Err(LinalgError::Shape(format!(
                "solve_right: {} rows vs {} rows",
                self.rows, b.rows
            )));
        }
        let aug = Matrix::hstack(self.field, self.rows, &[self, b]);
        let Rref { matrix: r, pivots, .. } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::NoSolution);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(pr, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    /// Solves `X · self = b`.
    pub fn solve_left(&self, b: &Matrix) -> Result<Matrix, LinalgError> {
        Ok(self.transpose().solve_right(&b.transpose())?.transpose())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        self.solve_right(&Matrix::identity(self.field, n))
            .ok()
            .filter(|x| self.mul(x) == Matrix::identity(self.field, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// `true` when `self^n = 0` for `n = rows`.
    pub fn is_nilpotent(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut p = self.clone();
        for _ in 1..self.rows.max(1) {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(q(), 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);

        let z = Matrix::zeros(q(), 3, 2);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);

        let m = Matrix::from_i64(q(), &[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(q(), 4).kernel_basis().cols(), 0);
        let k = Matrix::zeros(q(), 2, 3).kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let k = Matrix::from_i64(q(), &[&[1, 1]]).kernel_basis();
        assert_eq!(k, Matrix::from_i64(q(), &[&[-1], &[1]]));
    }

    #[test]
    fn cokernel_examples() {
        let (c, s) = Matrix::identity(q(), 3).cokernel_projection();
        assert_eq!(c.rows(), 0);
        assert_eq!(s.cols(), 0);

        let (c, s) = Matrix::zeros(q(), 2, 3).cokernel_projection();
        assert_eq!(c, Matrix::identity(q(), 2));
        assert_eq!(s, Matrix::identity(q(), 2));

        let m = Matrix::from_i64(q(), &[&[1], &[1]]);
        let (c, s) = m.cokernel_projection();
        assert!(c.mul(&m).is_zero());
        assert_eq!(c.mul(&s), Matrix::identity(q(), 1));
        // e_0 is the first standard vector outside the image
        assert_eq!(s, Matrix::from_i64(q(), &[&[1], &[0]]));
        assert_eq!(c, Matrix::from_i64(q(), &[&[1, -1]]));
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(q(), &[&[3, -1], &[7, 2]]);
        assert_eq!(Matrix::identity(q(), 2).solve_right(&b).unwrap(), b);
        let z = Matrix::zeros(q(), 2, 2);
        assert_eq!(z.solve_right(&b), Err(LinalgError::NoSolution));
        let a = Matrix::from_i64(q(), &[&[1], &[1]]);
        let b = Matrix::from_i64(q(), &[&[2], &[2]]);
        assert_eq!(a.solve_right(&b).unwrap(), Matrix::from_i64(q(), &[&[2]]));
    }

    // reference rank by elimination directly on residues mod p
    fn naive_rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
        let mut m: Vec<Vec<u64>> = rows.to_vec();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_multiple_of(p)) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = (1..p).find(|x| m[rank][c] * x % p == 1).unwrap();
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c] * inv % p;
                    for k in 0..ncols {
                        m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn to_matrix(field: Field, rows: &[Vec<u64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, field.from_i64(rows[i][j] as i64));
            }
        }
        m
    }

    #[test]
    fn exhaustive_f2_three_by_three_against_oracle() {
        let f = Field::Prime(2);
        for bits in 0u32..512 {
            let rows: Vec<Vec<u64>> = (0..3)
                .map(|i| (0..3).map(|j| ((bits >> (3 * i + j)) & 1) as u64).collect())
                .collect();
            let m = to_matrix(f, &rows);
            let rank = m.rank();
            assert_eq!(rank, naive_rank_mod_p(&rows, 2));
            assert_eq!(rank + m.kernel_basis().cols(), 3);
            assert!(m.mul(&m.kernel_basis()).is_zero());
            assert_eq!(m.transpose().rank(), rank);
        }
    }

    fn mod_p_matrix(p: u64) -> impl Strategy<Value = Vec<Vec<u64>>> {
        (1usize..=6, 1usize..=6).prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(0..p, c), r))
    }

    fn rat_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
                let f = Field::Rationals;
                let data = v.into_iter().map(|(n, d)| f.from_ratio(n, d)).collect();
                Matrix::from_vec(f, r, c, data).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn prime_field_agrees_with_oracle(rows in mod_p_matrix(5)) {
            let f = Field::Prime(5);
            let m = to_matrix(f, &rows);
            prop_assert_eq!(m.rank(), naive_rank_mod_p(&rows, 5));
            prop_assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
            let (c, s) = m.cokernel_projection();
            prop_assert!(c.mul(&m).is_zero());
            prop_assert_eq!(c.mul(&s), Matrix::identity(f, c.rows()));
            prop_assert_eq!(c.rows(), m.rows() - m.rank());
        }

        #[test]
        fn rational_invariants(m in rat_matrix()) {
            let r = m.rref();
            prop_assert_eq!(&r.matrix.rref().matrix, &r.matrix);
            prop_assert_eq!(r.rank, m.transpose().rank());
            let k = m.kernel_basis();
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
            prop_assert_eq!(r.rank + k.cols(), m.cols());
            let (c, s) = m.cokernel_projection();
            prop_assert!(c.mul(&m).is_zero());
            prop_assert_eq!(c.mul(&s), Matrix::identity(Field::Rationals, c.rows()));
            prop_assert_eq!(c.rank(), c.rows());
        }

        #[test]
        fn solve_right_recovers_consistent_systems(m in rat_matrix(), seed in 0i64..50) {
            let f = Field::Rationals;
            let x0 = Matrix::from_vec(f, m.cols(), 1,
                (0..m.cols()).map(|i| f.from_i64((seed + i as i64) % 5 - 2)).collect()).unwrap();
            let b = m.mul(&x0);
            let x = m.solve_right(&b).unwrap();
            prop_assert_eq!(m.mul(&x), b);
        }
    }
}
