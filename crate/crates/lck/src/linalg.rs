//! Dense matrices, linear solving, and canonical subspaces over a [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> std::fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::ShapeMismatch {
                    left_rows: nrows,
                    left_cols: ncols,
                    right_rows: 1,
                    right_cols: r.len(),
                });
            }
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(ambient: usize, cols: &[Vec<S>]) -> Self {
        Matrix::from_fn(ambient, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c).clone() + other.at(r, c).clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c).clone() - other.at(r, c).clone()
        })
    }

    pub fn neg(&self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| -self.at(r, c).clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            k.clone() * self.at(r, c).clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self.at(r, k).clone() * other.at(k, c).clone();
            }
            acc
        }))
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>> {
        if self.cols != x.len() {
            return Err(Error::DimMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for (k, xk) in x.iter().enumerate() {
                    acc = acc + self.at(r, k).clone() * xk.clone();
                }
                acc
            })
            .collect())
    }

    pub fn trace(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = S::zero();
        for i in 0..self.rows {
            acc = acc + self.at(i, i).clone();
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.scalar_eq(b))
    }

    /// Row/column index and value of the first (row-major) nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &S)> {
        self.data
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i / self.cols, i % self.cols, x))
    }

    /// Largest absolute entry, for reporting residual sizes.
    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for x in &self.data {
            let a = x.abs();
            if (a.clone() - best.clone()).is_positive() {
                best = a;
            }
        }
        best
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Reduced row echelon form; returns the pivot columns. The form is the
    /// canonical representative of the row space, whatever pivot order the
    /// elimination visits.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Largest |entry| as pivot: harmless for exact scalars, necessary
            // for float stability.
            let mut best: Option<usize> = None;
            for rr in r..m.rows {
                if !m.at(rr, c).is_zero() {
                    match best {
                        None => best = Some(rr),
                        Some(b) => {
                            if (m.at(rr, c).abs() - m.at(b, c).abs()).is_positive() {
                                best = Some(rr);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { continue };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(r * m.cols + k, p * m.cols + k);
                }
            }
            let inv = m.at(r, c).clone().recip();
            for k in c..m.cols {
                let v = m.at(r, k).clone() * inv.clone();
                m.set(r, k, v);
            }
            for rr in 0..m.rows {
                if rr != r && !m.at(rr, c).is_zero() {
                    let factor = m.at(rr, c).clone();
                    for k in c..m.cols {
                        let v = m.at(rr, k).clone() - factor.clone() * m.at(r, k).clone();
                        m.set(rr, k, v);
                    }
                }
            }
            // Clean residues so downstream zero tests are literal.
            for rr in 0..m.rows {
                if rr != r {
                    m.set(rr, c, S::zero());
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            pivot_of_col[pc] = Some(row);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (col, slot) in pivot_of_col.iter().enumerate() {
                if let Some(row) = slot {
                    v[col] = -r.at(*row, free).clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[S]) -> Result<Option<Vec<S>>> {
        if b.len() != self.rows {
            return Err(Error::DimMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        aug = aug.rref().0;
        let mut x = vec![S::zero(); self.cols];
        for r in 0..self.rows {
            let lead = (0..self.cols + 1).find(|&c| !aug.at(r, c).is_zero());
            match lead {
                Some(c) if c == self.cols => return Ok(None),
                Some(c) => x[c] = aug.at(r, self.cols).clone(),
                None => {}
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c).clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(n, n, |r, c| red.at(r, n + c).clone()))
    }

    /// Determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let mut best: Option<usize> = None;
            for rr in c..n {
                if !m.at(rr, c).is_zero() {
                    match best {
                        None => best = Some(rr),
                        Some(b) => {
                            if (m.at(rr, c).abs() - m.at(b, c).abs()).is_positive() {
                                best = Some(rr);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { return Ok(S::zero()) };
            if p != c {
                for k in 0..n {
                    m.data.swap(c * n + k, p * n + k);
                }
                det = -det;
            }
            let pivot = m.at(c, c).clone();
            det = det * pivot.clone();
            for rr in (c + 1)..n {
                if !m.at(rr, c).is_zero() {
                    let factor = m.at(rr, c).clone() / pivot.clone();
                    for k in c..n {
                        let v = m.at(rr, k).clone() - factor.clone() * m.at(c, k).clone();
                        m.set(rr, k, v);
                    }
                }
            }
        }
        Ok(det)
    }

    /// Determinant of the top-left `k`×`k` block.
    pub fn leading_principal_minor(&self, k: usize) -> Result<S> {
        Matrix::from_fn(k, k, |r, c| self.at(r, c).clone()).det()
    }
}

/// Componentwise vector helpers (vectors are plain `Vec<S>` throughout).
pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn vec_scale<S: Scalar>(k: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| k.clone() * x.clone()).collect()
}

pub fn vec_neg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn vec_is_zero<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn vec_eq<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.scalar_eq(y))
}

pub fn basis_vector<S: Scalar>(dim: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); dim];
    v[i] = S::one();
    v
}

/// Linear subspace in canonical form: the basis matrix is the reduced column
/// echelon form of any spanning set, so equal subspaces compare equal.
#[derive(Clone, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}, basis {:?})",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

impl<S: Scalar> Subspace<S> {
    pub fn from_spanning(ambient: usize, vectors: &[Vec<S>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "spanning vector has wrong length");
        }
        // Reduced column echelon form = transpose of the RREF of the
        // transpose, with zero columns dropped.
        let rows: Vec<Vec<S>> = vectors.to_vec();
        let m = Matrix::from_rows(rows).expect("rectangular");
        let (r, pivots) = m.rref();
        let kept: Vec<Vec<S>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis: Matrix::from_cols(ambient, &kept),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::from_spanning(ambient, &[])
    }

    pub fn full(ambient: usize) -> Self {
        let vectors: Vec<Vec<S>> = (0..ambient).map(|i| basis_vector(ambient, i)).collect();
        Subspace::from_spanning(ambient, &vectors)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<S>> {
        (0..self.basis.cols()).map(|c| self.basis.col(c)).collect()
    }

    pub fn contains(&self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if vec_is_zero(v) {
            return true;
        }
        let mut vectors = self.basis_vectors();
        vectors.push(v.to_vec());
        Subspace::from_spanning(self.ambient, &vectors).dim() == self.dim()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.basis.approx_eq(&other.basis)
    }

    /// Orthogonal complement with respect to a symmetric bilinear form `g`:
    /// all `x` with `g(b, x) = 0` for every basis vector `b`.
    pub fn orthogonal_complement(&self, g: &Matrix<S>) -> Self {
        let constraints = Matrix::from_fn(self.dim(), self.ambient, |r, c| {
            let b = self.basis.col(r);
            let mut acc = S::zero();
            for (i, bi) in b.iter().enumerate() {
                acc = acc + bi.clone() * g.at(i, c).clone();
            }
            acc
        });
        Subspace::from_spanning(self.ambient, &constraints.nullspace())
    }
}
