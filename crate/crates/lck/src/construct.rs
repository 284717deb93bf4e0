//! Builders and classifiers: Kähler triples `(𝔥, u, v, c)`, the semidirect
//! extension by the plane `[U, V] = cV`, the membership condition checker,
//! the class-parameter correspondence, and the dimension-4 classification.

use crate::analysis::kaehler_flag;
use crate::error::{Error, Result};
use crate::hermitian::{standard_structure, HermitianStructure};
use crate::lie::{BracketRow, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::{render_scalar, Scalar};

/// A Kähler Lie algebra `𝔥` of dimension `2n` together with two derivations
/// `u`, `v` and a class parameter `c`. Construction validates that the base
/// is Kähler and that `u`, `v` are derivations; the remaining membership
/// conditions are evaluated by [`KahlerTriple::check`].
#[derive(Clone, Debug)]
pub struct KahlerTriple<S: Scalar> {
    pub h_alg: LieAlgebra<S>,
    pub h_herm: HermitianStructure<S>,
    pub u: Matrix<S>,
    pub v: Matrix<S>,
    pub c: S,
    pub n: usize,
}

/// Residuals of the four membership conditions plus the base-shape booleans.
/// The triple belongs to the general class iff all four residuals vanish,
/// and to the abelian class iff additionally the base algebra is abelian.
#[derive(Clone, Debug)]
pub struct TripleReport<S: Scalar> {
    /// `[u, v] − c·v`.
    pub bracket_residual: Matrix<S>,
    /// `[v + uJ, J]` — the integrability condition.
    pub integrability_residual: Matrix<S>,
    /// `[v + Ju, J]` — a variant reading with the composition reversed,
    /// reported as a diagnostic only; membership uses `[v + uJ, J]`.
    pub integrability_variant_residual: Matrix<S>,
    /// `v*J + J v` with `v* = g⁻¹ vᵀ g`.
    pub v_compat_residual: Matrix<S>,
    /// `J + u*J + J u`.
    pub u_compat_residual: Matrix<S>,
    pub h_abelian: bool,
    pub member_h: bool,
    pub member_a: bool,
}

pub(crate) fn commutator<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    Ok(a.mul(b)?.sub(&b.mul(a)?))
}

/// First basis pair (and component) where `m` fails the derivation rule
/// `m[x, y] = [mx, y] + [x, my]`.
fn derivation_violation<S: Scalar>(
    alg: &LieAlgebra<S>,
    m: &Matrix<S>,
) -> Option<(usize, usize, usize)> {
    let dim = alg.dim();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let lhs = m.mul_vec(&alg.bracket_basis(i, j)).ok()?;
            let rhs = crate::linalg::vec_add(
                &alg.bracket(&m.col(i), &crate::linalg::basis_vector(dim, j))
                    .ok()?,
                &alg.bracket(&crate::linalg::basis_vector(dim, i), &m.col(j))
                    .ok()?,
            );
            let diff = crate::linalg::vec_sub(&lhs, &rhs);
            if let Some((k, _)) = diff.iter().enumerate().find(|(_, x)| !x.is_zero()) {
                return Some((i, j, k));
            }
        }
    }
    None
}

impl<S: Scalar> KahlerTriple<S> {
    pub fn new(
        h_alg: LieAlgebra<S>,
        h_herm: HermitianStructure<S>,
        u: Matrix<S>,
        v: Matrix<S>,
        c: S,
    ) -> Result<Self> {
        let dim = h_alg.dim();
        if h_herm.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: h_herm.dim(),
            });
        }
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "the base algebra must have positive even dimension; got {dim}"
            )));
        }
        for (name, m) in [("u", &u), ("v", &v)] {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Invalid(format!(
                    "{name} must be {dim}x{dim}; got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let base = kaehler_flag(&h_alg, &h_herm);
        if !base.holds() {
            return Err(Error::BaseNotKaehler {
                reason: base.label(),
            });
        }
        for (name, m) in [("u", &u), ("v", &v)] {
            if let Some((i, j, k)) = derivation_violation(&h_alg, m) {
                return Err(Error::NotDerivation {
                    map: if name == "u" { "u" } else { "v" },
                    i,
                    j,
                    component: k,
                });
            }
        }
        Ok(KahlerTriple {
            n: dim / 2,
            h_alg,
            h_herm,
            u,
            v,
            c,
        })
    }

    /// Evaluate the four membership conditions exactly.
    pub fn check(&self) -> TripleReport<S> {
        let j = self.h_herm.j();
        let u_star = self.h_herm.adjoint(&self.u);
        let v_star = self.h_herm.adjoint(&self.v);
        let bracket_residual = commutator(&self.u, &self.v)
            .expect("square matrices")
            .sub(&self.v.scale(&self.c));
        let v_plus_uj = self.v.add(&self.u.mul(j).expect("square matrices"));
        let integrability_residual = commutator(&v_plus_uj, j).expect("square matrices");
        let v_plus_ju = self.v.add(&j.mul(&self.u).expect("square matrices"));
        let integrability_variant_residual =
            commutator(&v_plus_ju, j).expect("square matrices");
        let v_compat_residual = v_star
            .mul(j)
            .expect("square matrices")
            .add(&j.mul(&self.v).expect("square matrices"));
        let u_compat_residual = j
            .add(&u_star.mul(j).expect("square matrices"))
            .add(&j.mul(&self.u).expect("square matrices"));
        let member_h = bracket_residual.is_zero()
            && integrability_residual.is_zero()
            && v_compat_residual.is_zero()
            && u_compat_residual.is_zero();
        let h_abelian = self.h_alg.is_abelian();
        TripleReport {
            bracket_residual,
            integrability_residual,
            integrability_variant_residual,
            v_compat_residual,
            u_compat_residual,
            h_abelian,
            member_h,
            member_a: member_h && h_abelian,
        }
    }

    /// The semidirect extension: dimension `2n + 2` with basis
    /// `(U, V, base-basis)`, brackets `[U, V] = cV`, `[U, x] = u x`,
    /// `[V, x] = v x`, base brackets unchanged; the metric is the identity on
    /// `span(U, V)` plus the base metric, and `J` maps `U ↦ V` and restricts
    /// to the base `J`. Construction re-validates the Jacobi identity, so a
    /// triple with `[u, v] ≠ cv` is rejected here even though it is a valid
    /// [`KahlerTriple`].
    pub fn semidirect(&self) -> Result<(LieAlgebra<S>, HermitianStructure<S>)> {
        let dim_h = self.h_alg.dim();
        let dim = dim_h + 2;
        let mut entries: Vec<BracketRow<S>> = Vec::new();
        entries.push((0, 1, vec![(1, self.c.clone())]));
        for i in 0..dim_h {
            let ucol: Vec<(usize, S)> = self
                .u
                .col(i)
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k + 2, x))
                .collect();
            if !ucol.is_empty() {
                entries.push((0, i + 2, ucol));
            }
            let vcol: Vec<(usize, S)> = self
                .v
                .col(i)
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k + 2, x))
                .collect();
            if !vcol.is_empty() {
                entries.push((1, i + 2, vcol));
            }
        }
        for i in 0..dim_h {
            for j in (i + 1)..dim_h {
                let terms: Vec<(usize, S)> = self
                    .h_alg
                    .bracket_basis(i, j)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (k + 2, x))
                    .collect();
                if !terms.is_empty() {
                    entries.push((i + 2, j + 2, terms));
                }
            }
        }
        let alg = LieAlgebra::from_bracket_table(dim, &entries)?;
        let plane = standard_structure::<S>(2);
        let herm = plane.direct_sum(&self.h_herm);
        Ok((alg, herm))
    }

    /// Transport the whole triple through a base change `s` of `𝔥`
    /// (columns of `s` are the new basis vectors): `u ↦ s⁻¹ u s`, etc.
    pub fn change_h_basis(&self, s: &Matrix<S>) -> Result<Self> {
        let s_inv = s.inverse()?;
        let conj = |m: &Matrix<S>| -> Result<Matrix<S>> { s_inv.mul(m)?.mul(s) };
        KahlerTriple::new(
            self.h_alg.change_basis(s)?,
            self.h_herm.change_basis(s)?,
            conj(&self.u)?,
            conj(&self.v)?,
            self.c.clone(),
        )
    }

    /// Block sum of two triples with the same class parameter.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.c.scalar_eq(&other.c) {
            return Err(Error::Invalid(format!(
                "direct sum needs equal class parameters; got {} and {}",
                render_scalar(&self.c),
                render_scalar(&other.c)
            )));
        }
        KahlerTriple::new(
            self.h_alg.direct_sum(&other.h_alg),
            self.h_herm.direct_sum(&other.h_herm),
            block_diag(&self.u, &other.u),
            block_diag(&self.v, &other.v),
            self.c.clone(),
        )
    }
}

fn block_diag<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let n1 = a.rows();
    let n2 = b.rows();
    Matrix::from_fn(n1 + n2, n1 + n2, |r, c| {
        if r < n1 && c < n1 {
            a.at(r, c).clone()
        } else if r >= n1 && c >= n1 {
            b.at(r - n1, c - n1).clone()
        } else {
            S::zero()
        }
    })
}

/// The plane with bracket `[U, V] = cV`, flat metric, and `JU = V`; the
/// structure is Kähler for every `c`.
pub fn build_r2c<S: Scalar>(c: &S) -> Result<(LieAlgebra<S>, HermitianStructure<S>)> {
    let alg = LieAlgebra::from_bracket_table(2, &[(0, 1, vec![(1, c.clone())])])?;
    Ok((alg, standard_structure(2)))
}

/// The one-parameter family member: abelian plane, `u = −(1/2)Id + b·J`,
/// `v = 0`, `c = 1`.
pub fn build_gb<S: Scalar>(b: &S) -> KahlerTriple<S> {
    let herm = standard_structure::<S>(2);
    let u = herm
        .j()
        .scale(b)
        .sub(&Matrix::identity(2).scale(&S::from_fraction(1, 2)));
    KahlerTriple::new(
        LieAlgebra::abelian(2),
        herm,
        u,
        Matrix::zeros(2, 2),
        S::one(),
    )
    .expect("family members are always valid")
}

/// The rank-one-`v` member at `c = 1`: abelian plane, `u = diag(0, −1)`,
/// `v` the elementary nilpotent.
pub fn build_d4<S: Scalar>() -> KahlerTriple<S> {
    build_dim(1).expect("n = 1 is valid")
}

/// The block construction in dimension `2n + 2`: `n` copies of the plane
/// with per-block `u = diag((n−1)/2, −(n+1)/2)` and `v = [[0, n], [0, 0]]`,
/// class parameter `c = n`. Its semidirect extension is unimodular.
pub fn build_dim<S: Scalar>(n: usize) -> Result<KahlerTriple<S>> {
    if n < 1 {
        return Err(Error::Invalid(
            "the block construction needs n >= 1".into(),
        ));
    }
    let dim = 2 * n;
    let mut u = Matrix::zeros(dim, dim);
    let mut v = Matrix::zeros(dim, dim);
    let a = S::from_fraction(n as i64 - 1, 2);
    let d = S::from_fraction(-(n as i64 + 1), 2);
    for blk in 0..n {
        u.set(2 * blk, 2 * blk, a.clone());
        u.set(2 * blk + 1, 2 * blk + 1, d.clone());
        v.set(2 * blk, 2 * blk + 1, S::from_int(n as i64));
    }
    KahlerTriple::new(
        LieAlgebra::abelian(dim),
        standard_structure(dim),
        u,
        v,
        S::from_int(n as i64),
    )
}

/// The non-abelian member at `c = −1`: base `[A, B] = A` with `JA = B`,
/// `u = diag(−1, 0)`, `v` mapping `B ↦ −A`. It belongs to the general class
/// but not to the abelian one, and its semidirect extension is not
/// unimodular.
pub fn build_nonabelian_example<S: Scalar>() -> KahlerTriple<S> {
    let alg = LieAlgebra::from_bracket_table(2, &[(0, 1, vec![(0, S::one())])])
        .expect("valid bracket table");
    let herm = standard_structure::<S>(2);
    let mut u = Matrix::zeros(2, 2);
    u.set(0, 0, -S::one());
    let mut v = Matrix::zeros(2, 2);
    v.set(0, 1, -S::one());
    KahlerTriple::new(alg, herm, u, v, -S::one()).expect("example is valid")
}

fn require_member_a<S: Scalar>(t: &KahlerTriple<S>) -> Result<()> {
    let report = t.check();
    if !report.member_h {
        return Err(Error::NotMember {
            reason: "a membership condition has nonzero residual".into(),
        });
    }
    if !report.h_abelian {
        return Err(Error::NotMember {
            reason: "the base algebra is not abelian".into(),
        });
    }
    Ok(())
}

/// Map a member of the abelian class at parameter `c ≠ 0` to the class at
/// parameter 1: `u ↦ (1/c)u + ((1−c)/(2c))·Id`, `v ↦ (1/c)v`.
pub fn to_class_one<S: Scalar>(t: &KahlerTriple<S>) -> Result<KahlerTriple<S>> {
    require_member_a(t)?;
    if t.c.is_zero() {
        return Err(Error::Invalid(
            "the correspondence requires a nonzero class parameter".into(),
        ));
    }
    let dim = t.h_alg.dim();
    let inv_c = S::one() / t.c.clone();
    let shift = (S::one() - t.c.clone()) / (S::from_int(2) * t.c.clone());
    let u = t.u.scale(&inv_c).add(&Matrix::identity(dim).scale(&shift));
    let v = t.v.scale(&inv_c);
    KahlerTriple::new(t.h_alg.clone(), t.h_herm.clone(), u, v, S::one())
}

/// Inverse of [`to_class_one`]: map a member of the abelian class at
/// parameter 1 to parameter `c ≠ 0`: `u ↦ c·u − ((1−c)/2)·Id`, `v ↦ c·v`.
pub fn from_class_one<S: Scalar>(t: &KahlerTriple<S>, c: &S) -> Result<KahlerTriple<S>> {
    require_member_a(t)?;
    if !t.c.is_one() {
        return Err(Error::Invalid(format!(
            "expected a triple at class parameter 1; got {}",
            render_scalar(&t.c)
        )));
    }
    if c.is_zero() {
        return Err(Error::Invalid(
            "the correspondence requires a nonzero class parameter".into(),
        ));
    }
    let dim = t.h_alg.dim();
    let shift = (S::one() - c.clone()) / S::from_int(2);
    let u = t.u.scale(c).sub(&Matrix::identity(dim).scale(&shift));
    let v = t.v.scale(c);
    KahlerTriple::new(t.h_alg.clone(), t.h_herm.clone(), u, v, c.clone())
}

/// Transport a member of the abelian class from its own parameter to
/// `to_c`, through the parameter-1 normal form.
pub fn correspondence<S: Scalar>(t: &KahlerTriple<S>, to_c: &S) -> Result<KahlerTriple<S>> {
    from_class_one(&to_class_one(t)?, to_c)
}

/// Isomorphism type of a dimension-4 member (base dimension 2, `c = 1`).
#[derive(Clone, Debug, PartialEq)]
pub enum Dim4Class<S: Scalar> {
    /// `v = 0`, `u = −(1/2)Id + b·J`.
    FamilyGb(S),
    /// `rank(v) = 1`; unique up to isomorphism.
    D4,
}

#[derive(Clone, Debug)]
pub struct Dim4Classification<S: Scalar> {
    pub class: Dim4Class<S>,
    /// Columns: the adapted base basis `(x, Jx)` in which the matrices take
    /// their normal form.
    pub adapted_basis: Matrix<S>,
    /// Whether the adapted basis could be rescaled to unit length in this
    /// scalar backend (needs an exact square root).
    pub normalized: bool,
}

/// Normalize the columns of a J-adapted basis `(x, Jx)` to unit length when
/// `|x|` has an exact square root in `S`.
fn normalize_adapted<S: Scalar>(
    h: &HermitianStructure<S>,
    x: &[S],
) -> (Matrix<S>, bool) {
    let jx = h.apply_j(x);
    let norm_sq = h.norm_sq(x);
    match norm_sq.sqrt() {
        Some(s) if !s.is_zero() => {
            let inv = S::one() / s;
            let cols = vec![
                crate::linalg::vec_scale(&inv, x),
                crate::linalg::vec_scale(&inv, &jx),
            ];
            (Matrix::from_cols(x.len(), &cols), true)
        }
        _ => (
            Matrix::from_cols(x.len(), &[x.to_vec(), jx]),
            false,
        ),
    }
}

/// Classify a dimension-4 member of the abelian class at `c = 1` by the
/// rank of `v`: rank 0 gives the one-parameter family (with `b` recovered
/// from `u + (1/2)Id = b·J`), rank 1 gives the unique rank-one class after
/// verifying the normal form in the basis `(x, Jx)` with `x ∈ ker v` (first
/// nonzero coordinate positive). The parameter `b` and both shape checks are
/// invariant under rescaling of the adapted basis, so no orthonormalization
/// is needed for the verdict itself.
pub fn classify_dim4<S: Scalar>(t: &KahlerTriple<S>) -> Result<Dim4Classification<S>> {
    if t.h_alg.dim() != 2 {
        return Err(Error::Invalid(format!(
            "classification needs a base of dimension 2; got {}",
            t.h_alg.dim()
        )));
    }
    if !t.c.is_one() {
        return Err(Error::Invalid(format!(
            "classification needs class parameter 1; got {}",
            render_scalar(&t.c)
        )));
    }
    require_member_a(t)?;
    let j = t.h_herm.j();
    match t.v.rank() {
        0 => {
            // u + (1/2)Id must equal b·J; then −(u + Id/2)·J = b·Id.
            let m = t
                .u
                .add(&Matrix::identity(2).scale(&S::from_fraction(1, 2)));
            let scaled = m.mul(j)?.neg();
            let b = scaled.at(0, 0).clone();
            if !scaled.sub(&Matrix::identity(2).scale(&b)).is_zero() {
                return Err(Error::NotMember {
                    reason: "u is not of the form -(1/2)Id + b J".into(),
                });
            }
            let x = crate::linalg::basis_vector::<S>(2, 0);
            let (adapted_basis, normalized) = normalize_adapted(&t.h_herm, &x);
            Ok(Dim4Classification {
                class: Dim4Class::FamilyGb(b),
                adapted_basis,
                normalized,
            })
        }
        1 => {
            let kernel = t.v.nullspace();
            let mut x = kernel
                .into_iter()
                .next()
                .expect("rank 1 in dimension 2 leaves a kernel line");
            if let Some(first) = x.iter().find(|value| !value.is_zero()) {
                if !first.is_positive() {
                    x = crate::linalg::vec_neg(&x);
                }
            }
            let jx = t.h_herm.apply_j(&x);
            let p = Matrix::from_cols(2, &[x.clone(), jx]);
            let p_inv = p.inverse()?;
            let u_shape = p_inv.mul(&t.u)?.mul(&p)?;
            let v_shape = p_inv.mul(&t.v)?.mul(&p)?;
            let mut expect_u = Matrix::zeros(2, 2);
            expect_u.set(1, 1, -S::one());
            let mut expect_v = Matrix::zeros(2, 2);
            expect_v.set(0, 1, S::one());
            if !u_shape.sub(&expect_u).is_zero() || !v_shape.sub(&expect_v).is_zero() {
                return Err(Error::NotMember {
                    reason: "matrices do not reduce to the rank-one normal form".into(),
                });
            }
            let (adapted_basis, normalized) = normalize_adapted(&t.h_herm, &x);
            Ok(Dim4Classification {
                class: Dim4Class::D4,
                adapted_basis,
                normalized,
            })
        }
        _ => Err(Error::Invalid(
            "v has rank 2, which no valid member admits in base dimension 2".into(),
        )),
    }
}

/// Two dimension-4 members are isomorphic iff they classify to the same
/// tag, with literal equality of the family parameter `b` (orientation-
/// reversing identifications of `b` with `−b` are deliberately not taken).
pub fn triples_isomorphic_dim4<S: Scalar>(
    t1: &KahlerTriple<S>,
    t2: &KahlerTriple<S>,
) -> Result<bool> {
    let c1 = classify_dim4(t1)?;
    let c2 = classify_dim4(t2)?;
    Ok(match (c1.class, c2.class) {
        (Dim4Class::D4, Dim4Class::D4) => true,
        (Dim4Class::FamilyGb(b1), Dim4Class::FamilyGb(b2)) => b1.scalar_eq(&b2),
        _ => false,
    })
}

/// Exhaustive description of the members over an abelian plane at class
/// parameter `c`, split by the rank of the (necessarily nilpotent) `v`.
#[derive(Clone, Debug)]
pub struct Dim2Enumeration<S: Scalar> {
    /// The `v = 0` case: a one-parameter family, described symbolically.
    pub family_description: String,
    /// Sampled family members, tagged by their parameter.
    pub family_samples: Vec<(S, KahlerTriple<S>)>,
    /// The unique `rank(v) = 1` representative; absent when `c = 0`, where
    /// the rank-one case is empty.
    pub rank_one: Option<KahlerTriple<S>>,
}

/// Enumerate the members over a given abelian plane: for every `c` the
/// family `u = −(1/2)Id + b·J`, `v = 0` (parameter `b` free), plus — when
/// `c ≠ 0` — one rank-one representative with `u = diag((c−1)/2, −(c+1)/2)`
/// and `v = [[0, c], [0, 0]]` in an adapted basis. For `c = 0` the rank-one
/// case is empty: `[u, v] = 0` with the forced shapes makes `v` a multiple
/// of `J`, which is never nilpotent of rank 1.
pub fn enumerate_nilpotent_v_dim2<S: Scalar>(
    h_alg: &LieAlgebra<S>,
    h_herm: &HermitianStructure<S>,
    c: &S,
) -> Result<Dim2Enumeration<S>> {
    if h_alg.dim() != 2 || h_herm.dim() != 2 {
        return Err(Error::Invalid(format!(
            "enumeration needs an abelian plane; got dimension {}",
            h_alg.dim()
        )));
    }
    if !h_alg.is_abelian() {
        return Err(Error::Invalid(
            "enumeration needs an abelian plane; the base has nonzero brackets".into(),
        ));
    }
    let j = h_herm.j();
    let half_id = Matrix::identity(2).scale(&S::from_fraction(1, 2));
    let mut family_samples = Vec::new();
    for (num, den) in [(0, 1), (1, 1), (-1, 1), (2, 1), (7, 2)] {
        let b = S::from_fraction(num, den);
        let u = j.scale(&b).sub(&half_id);
        let t = KahlerTriple::new(
            h_alg.clone(),
            h_herm.clone(),
            u,
            Matrix::zeros(2, 2),
            c.clone(),
        )?;
        family_samples.push((b, t));
    }
    let rank_one = if c.is_zero() {
        None
    } else {
        let x = crate::linalg::basis_vector::<S>(2, 0);
        let jx = h_herm.apply_j(&x);
        let p = Matrix::from_cols(2, &[x, jx]);
        let p_inv = p.inverse()?;
        let mut u0 = Matrix::zeros(2, 2);
        u0.set(0, 0, (c.clone() - S::one()) / S::from_int(2));
        u0.set(1, 1, -(c.clone() + S::one()) / S::from_int(2));
        let mut v0 = Matrix::zeros(2, 2);
        v0.set(0, 1, c.clone());
        let u = p.mul(&u0)?.mul(&p_inv)?;
        let v = p.mul(&v0)?.mul(&p_inv)?;
        Some(KahlerTriple::new(
            h_alg.clone(),
            h_herm.clone(),
            u,
            v,
            c.clone(),
        )?)
    };
    Ok(Dim2Enumeration {
        family_description: "u = -1/2 Id + b J, v = 0, parameter b free".into(),
        family_samples,
        rank_one,
    })
}
