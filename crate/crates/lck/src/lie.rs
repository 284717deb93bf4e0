//! Lie algebras given by structure constants on a fixed basis.

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, vec_is_zero, Matrix, Subspace};
use crate::scalar::Scalar;

/// One sparse bracket row `(i, j, Σ coeff·e_k)` with `i < j`, as consumed by
/// [`LieAlgebra::from_bracket_table`].
pub type BracketRow<S> = (usize, usize, Vec<(usize, S)>);

/// Finite-dimensional Lie algebra over the scalar field, stored as the full
/// structure-constant tensor `c[i][j][k]` with `[e_i, e_j] = Σ_k c_ijk e_k`.
/// Construction validates antisymmetry and the Jacobi identity eagerly, so a
/// value of this type is always an actual Lie algebra.
#[derive(Clone, PartialEq)]
pub struct LieAlgebra<S> {
    dim: usize,
    c: Vec<S>, // flattened dim^3, index (i*dim + j)*dim + k
}

impl<S: Scalar> std::fmt::Debug for LieAlgebra<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LieAlgebra(dim {})", self.dim)
    }
}

impl<S: Scalar> LieAlgebra<S> {
    pub fn new(dim: usize, constants: Vec<S>) -> Result<Self> {
        if constants.len() != dim * dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim * dim,
                got: constants.len(),
            });
        }
        let alg = LieAlgebra { dim, c: constants };
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let sum = alg.c(i, j, k).clone() + alg.c(j, i, k).clone();
                    if !sum.is_zero() {
                        return Err(Error::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        if let Some(err) = alg.check_jacobi() {
            return Err(err);
        }
        Ok(alg)
    }

    /// Build from sparse bracket data `{(i, j) -> Σ coeff_k e_k}` given only
    /// for `i < j`; the `j > i` half is filled in by antisymmetry.
    pub fn from_bracket_table(dim: usize, entries: &[BracketRow<S>]) -> Result<Self> {
        let mut c = vec![S::zero(); dim * dim * dim];
        for (i, j, terms) in entries {
            if *i >= dim || *j >= dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: (*i).max(*j) + 1,
                });
            }
            if i >= j {
                return Err(Error::Invalid(format!(
                    "bracket entries must have i < j; got ({i}, {j})"
                )));
            }
            for (k, coeff) in terms {
                if *k >= dim {
                    return Err(Error::DimMismatch {
                        expected: dim,
                        got: *k + 1,
                    });
                }
                let idx = (i * dim + j) * dim + k;
                c[idx] = c[idx].clone() + coeff.clone();
                let idx_sym = (j * dim + i) * dim + k;
                c[idx_sym] = c[idx_sym].clone() - coeff.clone();
            }
        }
        LieAlgebra::new(dim, c)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![S::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<S> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// `[x, y]` for arbitrary coefficient vectors.
    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: if x.len() != self.dim { x.len() } else { y.len() },
            });
        }
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let factor = xi.clone() * yj.clone();
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *slot = slot.clone() + factor.clone() * c.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// First Jacobi violation over basis triples i < j < k, if any.
    pub fn check_jacobi(&self) -> Option<Error> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ei = basis_vector::<S>(self.dim, i);
                    let ej = basis_vector::<S>(self.dim, j);
                    let ek = basis_vector::<S>(self.dim, k);
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &ek).unwrap()).unwrap();
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei).unwrap()).unwrap();
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej).unwrap()).unwrap();
                    for component in 0..self.dim {
                        let sum =
                            t1[component].clone() + t2[component].clone() + t3[component].clone();
                        if !sum.is_zero() {
                            return Some(Error::Jacobi {
                                i,
                                j,
                                k,
                                component,
                                residual: format!("{sum}"),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// Adjoint endomorphism `ad_x = [x, ·]` as a matrix (columns are images
    /// of basis vectors).
    pub fn ad(&self, x: &[S]) -> Matrix<S> {
        let cols: Vec<Vec<S>> = (0..self.dim)
            .map(|j| self.bracket(x, &basis_vector(self.dim, j)).unwrap())
            .collect();
        Matrix::from_cols(self.dim, &cols)
    }

    pub fn trace_ad(&self, x: &[S]) -> S {
        self.ad(x).trace().unwrap()
    }

    /// `trace(ad_x) = 0` for every `x`; checked on the basis (trace is linear).
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.trace_ad(&basis_vector(self.dim, i)).is_zero())
    }

    /// Span of all brackets of vectors in `w`.
    pub fn derived_subspace_of(&self, w: &Subspace<S>) -> Subspace<S> {
        let basis = w.basis_vectors();
        let mut spanning = Vec::new();
        for (a, x) in basis.iter().enumerate() {
            for y in basis.iter().skip(a + 1) {
                spanning.push(self.bracket(x, y).unwrap());
            }
        }
        Subspace::from_spanning(self.dim, &spanning)
    }

    /// `[g, g]` in canonical form.
    pub fn derived_subalgebra(&self) -> Subspace<S> {
        self.derived_subspace_of(&Subspace::full(self.dim))
    }

    /// Dimensions of the derived series `g ⊇ [g,g] ⊇ [[g,g],[g,g]] ⊇ …`,
    /// recorded until the dimension stabilizes (ending in 0 iff solvable).
    pub fn derived_series(&self) -> Vec<usize> {
        let mut dims = vec![self.dim];
        let mut current = Subspace::full(self.dim);
        loop {
            let next = self.derived_subspace_of(&current);
            if next.dim() == current.dim() {
                if dims.len() == 1 {
                    dims.push(next.dim());
                }
                break;
            }
            dims.push(next.dim());
            if next.dim() == 0 {
                break;
            }
            current = next;
        }
        dims
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last() == Some(&0)
    }

    /// Is `w` an ideal: `[e_i, w] ⊆ w` for every basis vector. Returns the
    /// first violating pair (basis index, subspace basis index).
    pub fn ideal_violation(&self, w: &Subspace<S>) -> Option<(usize, usize)> {
        let wb = w.basis_vectors();
        for i in 0..self.dim {
            let ei = basis_vector::<S>(self.dim, i);
            for (a, y) in wb.iter().enumerate() {
                if !w.contains(&self.bracket(&ei, y).unwrap()) {
                    return Some((i, a));
                }
            }
        }
        None
    }

    /// Do all brackets inside `w` vanish? Returns the first violating pair of
    /// subspace basis indices.
    pub fn abelian_violation(&self, w: &Subspace<S>) -> Option<(usize, usize)> {
        let wb = w.basis_vectors();
        for a in 0..wb.len() {
            for b in (a + 1)..wb.len() {
                if !vec_is_zero(&self.bracket(&wb[a], &wb[b]).unwrap()) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Structure constants in the basis given by the columns of `s`
    /// (`e'_j = Σ_i s_ij e_i`). `s` must be invertible.
    pub fn change_basis(&self, s: &Matrix<S>) -> Result<Self> {
        if s.rows() != self.dim || s.cols() != self.dim {
            return Err(Error::ShapeMismatch {
                left_rows: self.dim,
                left_cols: self.dim,
                right_rows: s.rows(),
                right_cols: s.cols(),
            });
        }
        let s_inv = s.inverse()?;
        let mut c = vec![S::zero(); self.dim * self.dim * self.dim];
        for a in 0..self.dim {
            for b in 0..self.dim {
                let w = self.bracket(&s.col(a), &s.col(b))?;
                let coords = s_inv.mul_vec(&w)?;
                for (k, v) in coords.into_iter().enumerate() {
                    c[(a * self.dim + b) * self.dim + k] = v;
                }
            }
        }
        LieAlgebra::new(self.dim, c)
    }

    /// Block direct sum: brackets between the two summands vanish.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let dim = self.dim + other.dim;
        let mut c = vec![S::zero(); dim * dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    c[(i * dim + j) * dim + k] = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    c[((self.dim + i) * dim + (self.dim + j)) * dim + (self.dim + k)] =
                        other.c(i, j, k).clone();
                }
            }
        }
        LieAlgebra { dim, c }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
        }
    }
}
