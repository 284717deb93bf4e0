//! Metric + almost complex structure pairs.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A positive-definite symmetric bilinear form `g` together with an almost
/// complex structure `J` that preserves it (`J^2 = -Id`, `J^T g J = g`).
/// Integrability of `J` is a separate question answered by the Nijenhuis
/// tensor, not an invariant of this type.
#[derive(Clone, PartialEq)]
pub struct HermitianStructure<S> {
    g: Matrix<S>,
    g_inv: Matrix<S>,
    j: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for HermitianStructure<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HermitianStructure(dim {})", self.dim())
    }
}

impl<S: Scalar> HermitianStructure<S> {
    pub fn new(g: Matrix<S>, j: Matrix<S>) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::NotSquare {
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        let n = g.rows();
        if j.rows() != n || j.cols() != n {
            return Err(Error::ShapeMismatch {
                left_rows: n,
                left_cols: n,
                right_rows: j.rows(),
                right_cols: j.cols(),
            });
        }
        for i in 0..n {
            for k in (i + 1)..n {
                if !g.at(i, k).scalar_eq(g.at(k, i)) {
                    return Err(Error::MetricNotSymmetric { i, j: k });
                }
            }
        }
        // Positive definiteness: all leading principal minors strictly positive.
        for order in 1..=n {
            let minor = g.leading_principal_minor(order)?;
            if !minor.is_positive() {
                return Err(Error::MetricNotPositiveDefinite {
                    order,
                    value: format!("{minor}"),
                });
            }
        }
        let j_sq = j.mul(&j)?;
        let should_be_zero = j_sq.add(&Matrix::identity(n));
        if let Some((r, c, _)) = should_be_zero.first_nonzero() {
            return Err(Error::NotAlmostComplex { i: r, j: c });
        }
        let jgj = j.transpose().mul(&g)?.mul(&j)?;
        if let Some((r, c, _)) = jgj.sub(&g).first_nonzero() {
            return Err(Error::JNotOrthogonal { i: r, j: c });
        }
        let g_inv = g.inverse()?;
        Ok(HermitianStructure { g, g_inv, j })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn g_inv(&self) -> &Matrix<S> {
        &self.g_inv
    }

    pub fn j(&self) -> &Matrix<S> {
        &self.j
    }

    /// `g(x, y)`.
    pub fn pairing(&self, x: &[S], y: &[S]) -> S {
        let gy = self.g.mul_vec(y).expect("dimension checked");
        let mut acc = S::zero();
        for (xi, gyi) in x.iter().zip(gy) {
            acc = acc + xi.clone() * gyi;
        }
        acc
    }

    pub fn norm_sq(&self, x: &[S]) -> S {
        self.pairing(x, x)
    }

    pub fn apply_j(&self, x: &[S]) -> Vec<S> {
        self.j.mul_vec(x).expect("dimension checked")
    }

    /// Musical isomorphism down: coefficients of the 1-form `g(x, ·)`.
    pub fn flat(&self, x: &[S]) -> Vec<S> {
        self.g.mul_vec(x).expect("dimension checked")
    }

    /// Musical isomorphism up: the vector dual to a 1-form's coefficients.
    pub fn sharp(&self, alpha: &[S]) -> Vec<S> {
        self.g_inv.mul_vec(alpha).expect("dimension checked")
    }

    /// Metric adjoint `m* = g^{-1} m^T g`, so `g(m* x, y) = g(x, m y)`.
    pub fn adjoint(&self, m: &Matrix<S>) -> Matrix<S> {
        self.g_inv
            .mul(&m.transpose())
            .and_then(|t| t.mul(&self.g))
            .expect("dimension checked")
    }

    /// The structure in the basis given by the columns of `s`.
    pub fn change_basis(&self, s: &Matrix<S>) -> Result<Self> {
        let s_inv = s.inverse()?;
        let g = s.transpose().mul(&self.g)?.mul(s)?;
        let j = s_inv.mul(&self.j)?.mul(s)?;
        HermitianStructure::new(g, j)
    }

    /// Same `J`, metric multiplied by a positive factor.
    pub fn rescaled(&self, factor: &S) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::Invalid(format!(
                "metric rescaling factor must be positive, got {factor}"
            )));
        }
        HermitianStructure::new(self.g.scale(factor), self.j.clone())
    }

    /// Block-diagonal combination of two structures.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n1 = self.dim();
        let n = n1 + other.dim();
        let embed = |a: &Matrix<S>, b: &Matrix<S>| {
            Matrix::from_fn(n, n, |r, c| {
                if r < n1 && c < n1 {
                    a.at(r, c).clone()
                } else if r >= n1 && c >= n1 {
                    b.at(r - n1, c - n1).clone()
                } else {
                    S::zero()
                }
            })
        };
        HermitianStructure::new(embed(&self.g, &other.g), embed(&self.j, &other.j))
            .expect("direct sum of valid structures is valid")
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<HermitianStructure<T>> {
        HermitianStructure::new(self.g.map(&f), self.j.map(&f))
    }
}

/// The standard structure on even dimension 2m: `g = Id` and `J` built from
/// 2×2 rotation blocks `e_{2a} -> e_{2a+1} -> -e_{2a}`.
pub fn standard_structure<S: Scalar>(dim: usize) -> HermitianStructure<S> {
    assert!(dim.is_multiple_of(2), "standard structure needs even dimension");
    let mut j = Matrix::zeros(dim, dim);
    for a in 0..dim / 2 {
        j.set(2 * a + 1, 2 * a, S::one());
        j.set(2 * a, 2 * a + 1, -S::one());
    }
    HermitianStructure::new(Matrix::identity(dim), j).expect("standard structure is valid")
}
