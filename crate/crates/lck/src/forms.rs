//! Exterior algebra of invariant forms and the bracket-built differential.
//!
//! A `k`-form is stored by its coefficients on strictly increasing index
//! tuples, with `e^I(e_{j_1}, …, e_{j_k})` equal to the permutation sign when
//! `{j}` is a rearrangement of `I` and zero otherwise. Under this convention
//! the wedge of 1-forms satisfies `(α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X)` and no
//! factorial normalizations appear anywhere.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hermitian::HermitianStructure;
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Alternating multilinear form of fixed degree on a `dim`-dimensional space.
#[derive(Clone, PartialEq)]
pub struct KForm<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, S>, // keys strictly increasing, values nonzero
}

impl<S: Scalar> std::fmt::Debug for KForm<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KForm(deg {}, dim {}) {{", self.degree, self.dim)?;
        for (idx, v) in &self.coeffs {
            write!(f, " {idx:?}: {v},")?;
        }
        write!(f, " }}")
    }
}

/// Sort an index tuple, returning the permutation sign, or `None` when an
/// index repeats (the form value is zero there).
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut idx = indices.to_vec();
    let mut swaps = 0usize;
    // Insertion sort; tuples are tiny.
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((idx, swaps % 2 == 1))
}

/// All strictly increasing `k`-tuples drawn from `0..dim`.
pub fn increasing_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    if k > dim {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + dim - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in (i + 1)..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

impl<S: Scalar> KForm<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: S) -> Self {
        let mut f = KForm::zero(dim, 0);
        f.add_term(&[], value);
        f
    }

    pub fn one_form(coeffs: &[S]) -> Self {
        let mut f = KForm::zero(coeffs.len(), 1);
        for (i, v) in coeffs.iter().enumerate() {
            f.add_term(&[i], v.clone());
        }
        f
    }

    /// 2-form from its antisymmetric value matrix `B_ij = α(e_i, e_j)`.
    pub fn two_form_from_matrix(b: &Matrix<S>) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSquare {
                rows: b.rows(),
                cols: b.cols(),
            });
        }
        let dim = b.rows();
        for i in 0..dim {
            for j in i..dim {
                let sum = b.at(i, j).clone() + b.at(j, i).clone();
                if !sum.is_zero() {
                    return Err(Error::Invalid(format!(
                        "matrix is not antisymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut f = KForm::zero(dim, 2);
        for i in 0..dim {
            for j in (i + 1)..dim {
                f.add_term(&[i, j], b.at(i, j).clone());
            }
        }
        Ok(f)
    }

    /// Value matrix `B_ij = α(e_i, e_j)` of a 2-form.
    pub fn two_form_matrix(&self) -> Result<Matrix<S>> {
        if self.degree != 2 {
            return Err(Error::BadDegree {
                degree: self.degree,
                reason: "value matrix exists for 2-forms only".into(),
            });
        }
        Ok(Matrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value on a basis tuple of arbitrary order (0 on repeated indices).
    pub fn get(&self, indices: &[usize]) -> S {
        assert_eq!(indices.len(), self.degree, "wrong arity for this form");
        match sort_with_sign(indices) {
            None => S::zero(),
            Some((key, flip)) => match self.coeffs.get(&key) {
                None => S::zero(),
                Some(v) => {
                    if flip {
                        -v.clone()
                    } else {
                        v.clone()
                    }
                }
            },
        }
    }

    /// Add `value` to the coefficient at an arbitrary-order tuple.
    pub fn add_term(&mut self, indices: &[usize], value: S) {
        assert_eq!(indices.len(), self.degree, "wrong arity for this form");
        if value.is_zero() {
            return;
        }
        let Some((key, flip)) = sort_with_sign(indices) else {
            return;
        };
        let signed = if flip { -value } else { value };
        let entry = self.coeffs.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(signed);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let new = e.get().clone() + signed;
                if new.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = new;
                }
            }
        }
    }

    /// Coefficients on increasing tuples, in lexicographic order. The first
    /// entry is the canonical witness when a form that should vanish does not.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.coeffs.iter()
    }

    pub fn first_term(&self) -> Option<(&Vec<usize>, &S)> {
        self.coeffs.iter().next()
    }

    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for v in self.coeffs.values() {
            let a = v.abs();
            if (a.clone() - best.clone()).is_positive() {
                best = a;
            }
        }
        best
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (idx, v) in &other.coeffs {
            out.add_term(idx, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), -v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, v) in &self.coeffs {
            out.add_term(idx, k.clone() * v.clone());
        }
        out
    }

    /// Graded exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = KForm::zero(self.dim, self.degree + other.degree);
        for (left, lv) in &self.coeffs {
            for (right, rv) in &other.coeffs {
                let mut joined = left.clone();
                joined.extend_from_slice(right);
                out.add_term(&joined, lv.clone() * rv.clone());
            }
        }
        Ok(out)
    }

    /// Iterated wedge `self^power` (power ≥ 0; the 0th power is the constant 1).
    pub fn wedge_power(&self, power: usize) -> Result<Self> {
        let mut out = KForm::constant(self.dim, S::one());
        for _ in 0..power {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Full multilinear evaluation on coefficient vectors: each stored term
    /// contributes `coeff · det(rows = vectors, cols = term indices)`.
    pub fn eval(&self, vectors: &[&[S]]) -> Result<S> {
        if vectors.len() != self.degree {
            return Err(Error::DimMismatch {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        for v in vectors {
            if v.len() != self.dim {
                return Err(Error::DimMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        let mut acc = S::zero();
        for (idx, coeff) in &self.coeffs {
            let minor = Matrix::from_fn(self.degree, self.degree, |r, c| {
                vectors[r][idx[c]].clone()
            });
            acc = acc + coeff.clone() * minor.det()?;
        }
        Ok(acc)
    }

    /// Contraction with a vector in the first slot.
    pub fn interior_vector(&self, x: &[S]) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::BadDegree {
                degree: 0,
                reason: "cannot contract a 0-form".into(),
            });
        }
        if x.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (idx, coeff) in &self.coeffs {
            for (slot, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(s, _)| *s != slot)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if slot % 2 == 0 { S::one() } else { -S::one() };
                out.add_term(&rest, sign * x[i].clone() * coeff.clone());
            }
        }
        Ok(out)
    }

    /// Degree-preserving contraction with an endomorphism:
    /// `(i_M α)(X_1, …, X_k) = Σ_a α(X_1, …, M X_a, …, X_k)`.
    pub fn interior_endo(&self, m: &Matrix<S>) -> Result<Self> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::ShapeMismatch {
                left_rows: self.dim,
                left_cols: self.dim,
                right_rows: m.rows(),
                right_cols: m.cols(),
            });
        }
        let mut out = KForm::zero(self.dim, self.degree);
        for tuple in increasing_tuples(self.dim, self.degree) {
            let mut acc = S::zero();
            for slot in 0..self.degree {
                for row in 0..self.dim {
                    let entry = m.at(row, tuple[slot]);
                    if entry.is_zero() {
                        continue;
                    }
                    let mut moved = tuple.clone();
                    moved[slot] = row;
                    let v = self.get(&moved);
                    if !v.is_zero() {
                        acc = acc + entry.clone() * v;
                    }
                }
            }
            out.add_term(&tuple, acc);
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KForm<T> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, v) in &self.coeffs {
            out.add_term(idx, f(v));
        }
        out
    }
}

/// Contraction with `J` of a Hermitian structure.
pub fn interior_j<S: Scalar>(h: &HermitianStructure<S>, form: &KForm<S>) -> Result<KForm<S>> {
    form.interior_endo(h.j())
}

/// The invariant exterior differential of a Lie algebra: for each increasing
/// output tuple `(t_0 < … < t_k)`,
/// `dα(e_{t_0}, …, e_{t_k}) = Σ_{a<b} (−1)^{a+b} α([e_{t_a}, e_{t_b}], …rest…)`.
/// In particular `dθ(X, Y) = −θ([X, Y])` for 1-forms, and `d∘d = 0` by the
/// Jacobi identity.
pub fn differential<S: Scalar>(alg: &LieAlgebra<S>, form: &KForm<S>) -> Result<KForm<S>> {
    if form.dim() != alg.dim() {
        return Err(Error::DimMismatch {
            expected: alg.dim(),
            got: form.dim(),
        });
    }
    let k = form.degree();
    let mut out = KForm::zero(form.dim(), k + 1);
    for tuple in increasing_tuples(form.dim(), k + 1) {
        let mut acc = S::zero();
        for a in 0..tuple.len() {
            for b in (a + 1)..tuple.len() {
                let bracket = alg.bracket_basis(tuple[a], tuple[b]);
                // α evaluated with the bracket in the first slot and the
                // remaining tuple entries (minus slots a, b) after it.
                let rest: Vec<usize> = tuple
                    .iter()
                    .enumerate()
                    .filter(|(s, _)| *s != a && *s != b)
                    .map(|(_, &v)| v)
                    .collect();
                let mut slot_value = S::zero();
                for (m, coeff) in bracket.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut args = Vec::with_capacity(k);
                    args.push(m);
                    args.extend_from_slice(&rest);
                    let v = form.get(&args);
                    if !v.is_zero() {
                        slot_value = slot_value + coeff.clone() * v;
                    }
                }
                if (a + b) % 2 == 1 {
                    slot_value = -slot_value;
                }
                acc = acc + slot_value;
            }
        }
        out.add_term(&tuple, acc);
    }
    Ok(out)
}
