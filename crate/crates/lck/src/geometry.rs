//! Levi-Civita connection, codifferential, and Lie derivatives for invariant
//! metrics on Lie algebras.

use crate::error::{Error, Result};
use crate::forms::KForm;
use crate::hermitian::HermitianStructure;
use crate::lie::LieAlgebra;
use crate::linalg::{basis_vector, vec_is_zero, vec_sub, Matrix};
use crate::scalar::Scalar;

/// The Levi-Civita connection of an invariant metric, tabulated on the basis:
/// `nabla[i][j] = ∇_{e_i} e_j` as a coefficient vector.
#[derive(Clone)]
pub struct LeviCivita<S> {
    dim: usize,
    nabla: Vec<Vec<S>>, // dim*dim entries, index i*dim + j
}

/// Solve the Koszul formula for each basis pair:
/// `2 g(∇_X Y, Z) = g([X,Y], Z) − g([Y,Z], X) + g([Z,X], Y)`.
pub fn levi_civita<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<LeviCivita<S>> {
    let dim = alg.dim();
    if h.dim() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: h.dim(),
        });
    }
    let half = S::from_fraction(1, 2);
    let mut nabla = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let ei = basis_vector::<S>(dim, i);
        for j in 0..dim {
            let ej = basis_vector::<S>(dim, j);
            let mut rhs = Vec::with_capacity(dim);
            for l in 0..dim {
                let el = basis_vector::<S>(dim, l);
                let t1 = h.pairing(&alg.bracket(&ei, &ej)?, &el);
                let t2 = h.pairing(&alg.bracket(&ej, &el)?, &ei);
                let t3 = h.pairing(&alg.bracket(&el, &ei)?, &ej);
                rhs.push(half.clone() * (t1 - t2 + t3));
            }
            // rhs_l = g(∇_{e_i} e_j, e_l), so ∇_{e_i} e_j = g^{-1} rhs.
            nabla.push(h.sharp(&rhs));
        }
    }
    Ok(LeviCivita { dim, nabla })
}

impl<S: Scalar> LeviCivita<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_{e_i} e_j`.
    pub fn nabla_basis(&self, i: usize, j: usize) -> &[S] {
        &self.nabla[i * self.dim + j]
    }

    /// `∇_x y` for arbitrary coefficient vectors (bilinear over scalars).
    pub fn nabla(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
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
                for (k, v) in self.nabla_basis(i, j).iter().enumerate() {
                    if !v.is_zero() {
                        out[k] = out[k].clone() + factor.clone() * v.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// First basis pair where `∇_X Y − ∇_Y X ≠ [X, Y]`, if any.
    pub fn torsion_violation(&self, alg: &LieAlgebra<S>) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let diff = vec_sub(self.nabla_basis(i, j), self.nabla_basis(j, i));
                if !vec_is_zero(&vec_sub(&diff, &alg.bracket_basis(i, j))) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First basis triple where `g(∇_X Y, Z) + g(Y, ∇_X Z) ≠ 0`, if any.
    pub fn metric_compat_violation(
        &self,
        h: &HermitianStructure<S>,
    ) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ej = basis_vector::<S>(self.dim, j);
                for k in j..self.dim {
                    let ek = basis_vector::<S>(self.dim, k);
                    let s = h.pairing(self.nabla_basis(i, j), &ek)
                        + h.pairing(&ej, self.nabla_basis(i, k));
                    if !s.is_zero() {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Covariant derivative of an invariant form along `e_i`:
    /// `(∇_{e_i} α)(Y_1, …, Y_k) = −Σ_s α(Y_1, …, ∇_{e_i} Y_s, …, Y_k)`.
    pub fn covariant_derivative(&self, form: &KForm<S>, i: usize) -> KForm<S> {
        let k = form.degree();
        let mut out = KForm::zero(self.dim, k);
        for tuple in crate::forms::increasing_tuples(self.dim, k) {
            let mut acc = S::zero();
            for slot in 0..k {
                let image = self.nabla_basis(i, tuple[slot]);
                for (m, coeff) in image.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut moved = tuple.clone();
                    moved[slot] = m;
                    let v = form.get(&moved);
                    if !v.is_zero() {
                        acc = acc - coeff.clone() * v;
                    }
                }
            }
            out.add_term(&tuple, acc);
        }
        out
    }

    /// Codifferential `δα = −Σ_{i,j} g^{ij} (∇_{e_i} α)(e_j, ·, …)`,
    /// lowering the degree by one.
    pub fn codifferential(
        &self,
        h: &HermitianStructure<S>,
        form: &KForm<S>,
    ) -> Result<KForm<S>> {
        if form.degree() == 0 {
            return Err(Error::BadDegree {
                degree: 0,
                reason: "codifferential needs degree >= 1".into(),
            });
        }
        let mut out = KForm::zero(self.dim, form.degree() - 1);
        for i in 0..self.dim {
            let grad = self.covariant_derivative(form, i);
            for j in 0..self.dim {
                let gij = h.g_inv().at(i, j);
                if gij.is_zero() {
                    continue;
                }
                let contracted = grad.interior_vector(&basis_vector(self.dim, j))?;
                out = out.sub(&contracted.scale(gij));
            }
        }
        Ok(out)
    }
}

/// `(L_x g)(Y, Z) = −g([x, Y], Z) − g(Y, [x, Z])` as a symmetric matrix on
/// the basis; zero iff `x` is a Killing vector.
pub fn lie_derivative_metric<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    x: &[S],
) -> Result<Matrix<S>> {
    let dim = alg.dim();
    let mut out = Matrix::zeros(dim, dim);
    for a in 0..dim {
        let ea = basis_vector::<S>(dim, a);
        let bracket_a = alg.bracket(x, &ea)?;
        for b in 0..dim {
            let eb = basis_vector::<S>(dim, b);
            let bracket_b = alg.bracket(x, &eb)?;
            let v = -h.pairing(&bracket_a, &eb) - h.pairing(&ea, &bracket_b);
            out.set(a, b, v);
        }
    }
    Ok(out)
}

/// `(L_x J)(Y) = [x, J Y] − J [x, Y]` as an endomorphism matrix.
pub fn lie_derivative_j<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    x: &[S],
) -> Result<Matrix<S>> {
    let dim = alg.dim();
    let mut cols = Vec::with_capacity(dim);
    for a in 0..dim {
        let ea = basis_vector::<S>(dim, a);
        let t1 = alg.bracket(x, &h.apply_j(&ea))?;
        let t2 = h.apply_j(&alg.bracket(x, &ea)?);
        cols.push(vec_sub(&t1, &t2));
    }
    Ok(Matrix::from_cols(dim, &cols))
}
