//! Geometric predicates and identity residuals for Hermitian Lie algebras:
//! Lee data extraction, Kähler / locally-conformally-Kähler / Vaisman /
//! integrable / first-kind detection, and exact residual checks for the
//! structural identities these instances satisfy.

use crate::error::{Error, Result};
use crate::forms::{differential, interior_j, KForm};
use crate::geometry::{levi_civita, lie_derivative_j, lie_derivative_metric};
use crate::hermitian::HermitianStructure;
use crate::lie::LieAlgebra;
use crate::linalg::{basis_vector, vec_is_zero, vec_scale, vec_sub, Matrix};
use crate::scalar::{render_scalar, Scalar};

/// Lee data of a Hermitian Lie algebra of dimension `2n + 2`:
/// the anti-Lee form `η = (1/n) δΩ`, the Lee form `θ = i_J η`, and their
/// metric duals `U` (Lee vector) and `V` (anti-Lee vector).
#[derive(Clone, Debug)]
pub struct LeeData<S: Scalar> {
    pub n: usize,
    pub theta: KForm<S>,
    pub eta: KForm<S>,
    pub u: Vec<S>,
    pub v: Vec<S>,
    /// `|θ|² = g(U, U) = g(V, V)`.
    pub norm_sq: S,
}

impl<S: Scalar> LeeData<S> {
    pub fn lee_vanishes(&self) -> bool {
        self.norm_sq.is_zero()
    }
}

/// Outcome of a predicate: established, refuted with a concrete witness, or
/// meaningless for the instance at hand.
#[derive(Clone, Debug, PartialEq)]
pub enum Flag {
    Holds,
    Fails(Witness),
    NotApplicable(String),
}

/// Where a predicate fails: the smallest violating index tuple in
/// lexicographic order, plus the residual value found there.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub residual: String,
}

impl Flag {
    pub fn holds(&self) -> bool {
        matches!(self, Flag::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Flag::Fails(_))
    }

    pub fn not_applicable(&self) -> bool {
        matches!(self, Flag::NotApplicable(_))
    }

    pub fn fail_at<S: Scalar>(indices: Vec<usize>, residual: &S) -> Flag {
        Flag::Fails(Witness {
            indices,
            residual: render_scalar(residual),
        })
    }

    /// Human-readable one-liner used by reports.
    pub fn label(&self) -> String {
        match self {
            Flag::Holds => "holds".into(),
            Flag::Fails(w) => {
                let idx = w
                    .indices
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                if idx.is_empty() {
                    format!("fails: residual {}", w.residual)
                } else {
                    format!("fails at ({idx}): residual {}", w.residual)
                }
            }
            Flag::NotApplicable(why) => format!("not applicable: {why}"),
        }
    }
}

/// Flag from a residual form: `Holds` iff the form vanishes, otherwise the
/// lexicographically first nonzero coefficient is the witness.
fn flag_from_form<S: Scalar>(residual: &KForm<S>) -> Flag {
    match residual.first_term() {
        None => Flag::Holds,
        Some((tuple, value)) => Flag::fail_at(tuple.clone(), value),
    }
}

/// The fundamental 2-form `Ω(x, y) = g(x, J y)`.
pub fn fundamental_form<S: Scalar>(h: &HermitianStructure<S>) -> KForm<S> {
    let dim = h.dim();
    let mut omega = KForm::zero(dim, 2);
    for a in 0..dim {
        let ea = basis_vector::<S>(dim, a);
        for b in (a + 1)..dim {
            let eb = basis_vector::<S>(dim, b);
            omega.add_term(&[a, b], h.pairing(&ea, &h.apply_j(&eb)));
        }
    }
    omega
}

/// Nijenhuis torsion `N_J(x, y) = −[x,y] + [Jx,Jy] − J[Jx,y] − J[x,Jy]`;
/// `J` is integrable iff this vanishes on all basis pairs.
pub fn nijenhuis<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    x: &[S],
    y: &[S],
) -> Result<Vec<S>> {
    let jx = h.apply_j(x);
    let jy = h.apply_j(y);
    let t1 = alg.bracket(x, y)?;
    let t2 = alg.bracket(&jx, &jy)?;
    let t3 = h.apply_j(&alg.bracket(&jx, y)?);
    let t4 = h.apply_j(&alg.bracket(x, &jy)?);
    Ok(vec_sub(&vec_sub(&t2, &t1), &crate::linalg::vec_add(&t3, &t4)))
}

/// `Holds` iff the Nijenhuis torsion vanishes on all basis pairs
/// (the almost-complex structure is integrable).
pub fn hermitian_flag<S: Scalar>(alg: &LieAlgebra<S>, h: &HermitianStructure<S>) -> Flag {
    let dim = alg.dim();
    for i in 0..dim {
        let ei = basis_vector::<S>(dim, i);
        for j in (i + 1)..dim {
            let ej = basis_vector::<S>(dim, j);
            let nij = nijenhuis(alg, h, &ei, &ej).expect("basis vectors have valid length");
            if let Some((k, value)) = nij
                .iter()
                .enumerate()
                .find(|(_, value)| !value.is_zero())
            {
                return Flag::fail_at(vec![i, j, k], value);
            }
        }
    }
    Flag::Holds
}

/// `Holds` iff the structure is Kähler: integrable `J` and `dΩ = 0`.
pub fn kaehler_flag<S: Scalar>(alg: &LieAlgebra<S>, h: &HermitianStructure<S>) -> Flag {
    let hermitian = hermitian_flag(alg, h);
    if !hermitian.holds() {
        return hermitian;
    }
    let d_omega = differential(alg, &fundamental_form(h))
        .expect("the fundamental form differentiates over its own algebra");
    flag_from_form(&d_omega)
}

/// Extract the Lee data. Requires dimension `2n + 2` with `n ≥ 1`: in odd
/// dimension there is no almost-complex structure, and in dimension 2 the
/// anti-Lee normalization `(1/n) δΩ` is undefined.
pub fn lee_data<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<LeeData<S>> {
    let dim = alg.dim();
    if !dim.is_multiple_of(2) || dim < 4 {
        return Err(Error::LeeUndefined { dim });
    }
    let n = dim / 2 - 1;
    let lc = levi_civita(alg, h)?;
    let omega = fundamental_form(h);
    let delta_omega = lc.codifferential(h, &omega)?;
    let eta = delta_omega.scale(&S::from_fraction(1, n as i64));
    let theta = interior_j(h, &eta)?;
    let theta_coeffs: Vec<S> = (0..dim).map(|a| theta.get(&[a])).collect();
    let eta_coeffs: Vec<S> = (0..dim).map(|a| eta.get(&[a])).collect();
    let u = h.sharp(&theta_coeffs);
    let v = h.sharp(&eta_coeffs);
    let norm_sq = theta.eval(&[&u])?;
    Ok(LeeData {
        n,
        theta,
        eta,
        u,
        v,
        norm_sq,
    })
}

/// Residual of twisted closedness for a caller-supplied candidate Lee form:
/// `dΩ − θ ∧ Ω`. Zero iff `Ω` is twisted-closed with respect to that `θ`.
pub fn lck_residual_given_lee<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    theta: &KForm<S>,
) -> Result<KForm<S>> {
    if theta.degree() != 1 {
        return Err(Error::BadDegree {
            degree: theta.degree(),
            reason: "the candidate Lee form must be a 1-form".into(),
        });
    }
    let omega = fundamental_form(h);
    let d_omega = differential(alg, &omega)?;
    Ok(d_omega.sub(&theta.wedge(&omega)?))
}

/// `Holds` iff `dθ = 0` and `dΩ = θ ∧ Ω` for the computed Lee form.
pub fn lck_flag<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
) -> Flag {
    let d_theta = differential(alg, &lee.theta)
        .expect("the Lee form differentiates over its own algebra");
    if let Some((tuple, value)) = d_theta.first_term() {
        return Flag::fail_at(tuple.clone(), value);
    }
    let residual = lck_residual_given_lee(alg, h, &lee.theta)
        .expect("computed Lee form has degree 1");
    flag_from_form(&residual)
}

/// `Holds` iff the Lee vector is parallel: `∇_{e_i} U = 0` for all `i`
/// (equivalent to `∇θ = 0` for an invariant metric). Vacuously true when
/// `θ = 0`.
pub fn vaisman_flag<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
) -> Result<Flag> {
    let lc = levi_civita(alg, h)?;
    for i in 0..alg.dim() {
        let nabla_u = lc.nabla(&basis_vector(alg.dim(), i), &lee.u)?;
        if let Some((k, value)) = nabla_u
            .iter()
            .enumerate()
            .find(|(_, value)| !value.is_zero())
        {
            return Ok(Flag::fail_at(vec![i, k], value));
        }
    }
    Ok(Flag::Holds)
}

/// `Holds` iff `η ∧ dη = 0` and `J` is integrable; `NotApplicable` when the
/// anti-Lee vector vanishes (the Kähler case), where the defining condition
/// is empty.
pub fn integrable_lck_flag<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
) -> Flag {
    if vec_is_zero(&lee.v) {
        return Flag::NotApplicable("anti-Lee vector vanishes".into());
    }
    let d_eta = differential(alg, &lee.eta)
        .expect("the anti-Lee form differentiates over its own algebra");
    let contact = lee
        .eta
        .wedge(&d_eta)
        .expect("degrees 1 and 2 wedge in any dimension >= 3");
    if let Some((tuple, value)) = contact.first_term() {
        return Flag::fail_at(tuple.clone(), value);
    }
    hermitian_flag(alg, h)
}

/// `Holds` iff `dη` has rank `2n` and `θ ∧ η ∧ (dη)^n` is a volume form
/// (nonzero top coefficient).
pub fn lcs_first_kind_flag<S: Scalar>(alg: &LieAlgebra<S>, lee: &LeeData<S>) -> Flag {
    let dim = alg.dim();
    let d_eta = differential(alg, &lee.eta)
        .expect("the anti-Lee form differentiates over its own algebra");
    let rank = d_eta
        .two_form_matrix()
        .expect("differential of a 1-form has degree 2")
        .rank();
    let top = lee
        .theta
        .wedge(&lee.eta)
        .and_then(|te| te.wedge(&d_eta.wedge_power(lee.n)?))
        .expect("total degree equals the dimension");
    let top_coeff = top.get(&(0..dim).collect::<Vec<_>>());
    if rank == 2 * lee.n && !top_coeff.is_zero() {
        return Flag::Holds;
    }
    Flag::Fails(Witness {
        indices: vec![],
        residual: format!(
            "rank(d eta) = {rank} (need {}), top coefficient = {}",
            2 * lee.n,
            render_scalar(&top_coeff)
        ),
    })
}

/// The codifferential of the Lee form, `δθ`, as a scalar.
pub fn delta_theta<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
) -> Result<S> {
    let lc = levi_civita(alg, h)?;
    Ok(lc.codifferential(h, &lee.theta)?.get(&[]))
}

/// `Holds` iff the metric is Gauduchon: `δθ = 0`.
pub fn gauduchon_flag<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
) -> Result<Flag> {
    let dt = delta_theta(alg, h, lee)?;
    if dt.is_zero() {
        Ok(Flag::Holds)
    } else {
        Ok(Flag::fail_at(vec![], &dt))
    }
}

/// Left-hand side of the scalar identity `|θ|² δθ + dη(U, V) + n |θ|⁴`;
/// zero on every integrable instance.
pub fn theorem_delta_residual<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<S> {
    let lee = lee_data(alg, h)?;
    let dt = delta_theta(alg, h, &lee)?;
    let d_eta = differential(alg, &lee.eta)?;
    let d_eta_uv = d_eta.eval(&[&lee.u, &lee.v])?;
    let n = S::from_int(lee.n as i64);
    Ok(lee.norm_sq.clone() * dt + d_eta_uv + n * lee.norm_sq.clone() * lee.norm_sq.clone())
}

/// Residuals of the two halves of the structure identity
/// `dη = (δθ/|θ|² + n) η∧θ` and `[U, V] = (δθ + n|θ|²) V`
/// (the gradient term vanishes identically for invariant structures).
#[derive(Clone, Debug)]
pub struct DetaReport<S: Scalar> {
    /// `δθ/|θ|² + n`.
    pub form_coefficient: S,
    /// `δθ + n |θ|²`.
    pub bracket_coefficient: S,
    /// `dη − (δθ/|θ|² + n)·η∧θ`.
    pub form_residual: KForm<S>,
    /// `[U, V] − (δθ + n|θ|²)·V`.
    pub bracket_residual: Vec<S>,
}

impl<S: Scalar> DetaReport<S> {
    pub fn both_zero(&self) -> bool {
        self.form_residual.is_zero() && vec_is_zero(&self.bracket_residual)
    }
}

pub fn theorem_deta_check<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<DetaReport<S>> {
    let lee = lee_data(alg, h)?;
    if lee.lee_vanishes() {
        return Err(Error::LeeFormVanishes);
    }
    let dt = delta_theta(alg, h, &lee)?;
    let n = S::from_int(lee.n as i64);
    let form_coefficient = dt.clone() / lee.norm_sq.clone() + n.clone();
    let bracket_coefficient = dt + n * lee.norm_sq.clone();
    let d_eta = differential(alg, &lee.eta)?;
    let eta_theta = lee.eta.wedge(&lee.theta)?;
    let form_residual = d_eta.sub(&eta_theta.scale(&form_coefficient));
    let bracket_residual = vec_sub(
        &alg.bracket(&lee.u, &lee.v)?,
        &vec_scale(&bracket_coefficient, &lee.v),
    );
    Ok(DetaReport {
        form_coefficient,
        bracket_coefficient,
        form_residual,
        bracket_residual,
    })
}

/// Residual of the proportionality identity `|θ|⁴ · dη = dη(U, V) · θ∧η`,
/// as a 2-form; zero on every integrable instance.
pub fn prop_sss_residual<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<KForm<S>> {
    let lee = lee_data(alg, h)?;
    let d_eta = differential(alg, &lee.eta)?;
    let d_eta_uv = d_eta.eval(&[&lee.u, &lee.v])?;
    let norm4 = lee.norm_sq.clone() * lee.norm_sq.clone();
    let theta_eta = lee.theta.wedge(&lee.eta)?;
    Ok(d_eta.scale(&norm4).sub(&theta_eta.scale(&d_eta_uv)))
}

/// Residual of the compatibility identity
/// `(L_V g)(y, z) = g(y, ((L_V J) ∘ J) z)` as a matrix on the basis.
pub fn lie_v_compatibility_residual<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
) -> Result<Matrix<S>> {
    let lg = lie_derivative_metric(alg, h, &lee.v)?;
    let lj = lie_derivative_j(alg, h, &lee.v)?;
    // g(y, (L_V J)(J z)) as a matrix: g · (L_V J) · J evaluated columnwise.
    let rhs = h.g().mul(&lj.mul(h.j())?)?;
    Ok(lg.sub(&rhs))
}

/// Rescale the metric by the rational factor `|θ|²` so the rescaled
/// structure has `|θ|² = 1`. Exact whenever `|θ|²` is; errors when the Lee
/// form vanishes.
pub fn rescale_to_unit_lee<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<HermitianStructure<S>> {
    let lee = lee_data(alg, h)?;
    if lee.lee_vanishes() {
        return Err(Error::LeeFormVanishes);
    }
    h.rescaled(&lee.norm_sq)
}

/// One structural claim checked by [`structural_theorem_suite`].
#[derive(Clone, Debug)]
pub struct ClaimOutcome {
    pub name: &'static str,
    pub flag: Flag,
}

/// Full predicate-and-claims report for one Hermitian Lie algebra.
#[derive(Clone, Debug)]
pub struct StructureReport<S: Scalar> {
    pub dim: usize,
    /// `dim = 2n + 2` when the Lee data exists.
    pub n: Option<usize>,
    pub hermitian: Flag,
    pub kaehler: Flag,
    pub lck: Flag,
    pub vaisman: Flag,
    pub integrable_lck: Flag,
    pub lcs_first_kind: Flag,
    pub gauduchon: Flag,
    pub unimodular: Flag,
    pub solvable: Flag,
    pub lee: Option<LeeData<S>>,
    pub delta_theta: Option<S>,
    pub derived_series: Vec<usize>,
    pub claims: Vec<ClaimOutcome>,
}

fn unimodular_flag<S: Scalar>(alg: &LieAlgebra<S>) -> Flag {
    for i in 0..alg.dim() {
        let tr = alg.trace_ad(&basis_vector(alg.dim(), i));
        if !tr.is_zero() {
            return Flag::fail_at(vec![i], &tr);
        }
    }
    Flag::Holds
}

fn solvable_flag(derived_series: &[usize]) -> Flag {
    match derived_series.last() {
        Some(0) => Flag::Holds,
        Some(d) => Flag::Fails(Witness {
            indices: vec![],
            residual: format!("derived series stabilizes at dimension {d}"),
        }),
        None => Flag::Holds,
    }
}

/// Evaluate every predicate plus the structural claims that integrable
/// instances must satisfy: the orthogonal complement of `span(U, V)` is a
/// J-invariant ideal with closed restricted fundamental form, and — under
/// unimodularity — the algebra is solvable with derived subalgebra equal to
/// `U^⊥` and abelian complement.
pub fn structural_theorem_suite<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
) -> Result<StructureReport<S>> {
    let dim = alg.dim();
    if h.dim() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: h.dim(),
        });
    }
    let hermitian = hermitian_flag(alg, h);
    let kaehler = kaehler_flag(alg, h);
    let unimodular = unimodular_flag(alg);
    let derived_series = alg.derived_series();
    let solvable = solvable_flag(&derived_series);

    let lee = match lee_data(alg, h) {
        Ok(lee) => Some(lee),
        Err(Error::LeeUndefined { .. }) => None,
        Err(e) => return Err(e),
    };

    let mut report = StructureReport {
        dim,
        n: lee.as_ref().map(|l| l.n),
        hermitian,
        kaehler,
        lck: Flag::NotApplicable(format!("Lee data undefined in dimension {dim}")),
        vaisman: Flag::NotApplicable(format!("Lee data undefined in dimension {dim}")),
        integrable_lck: Flag::NotApplicable(format!(
            "Lee data undefined in dimension {dim}"
        )),
        lcs_first_kind: Flag::NotApplicable(format!(
            "Lee data undefined in dimension {dim}"
        )),
        gauduchon: Flag::NotApplicable(format!("Lee data undefined in dimension {dim}")),
        unimodular,
        solvable,
        lee: None,
        delta_theta: None,
        derived_series,
        claims: vec![],
    };

    let lee = match lee {
        Some(lee) => lee,
        None => return Ok(report),
    };

    report.lck = lck_flag(alg, h, &lee);
    report.lcs_first_kind = lcs_first_kind_flag(alg, &lee);
    report.gauduchon = gauduchon_flag(alg, h, &lee)?;
    report.delta_theta = Some(delta_theta(alg, h, &lee)?);
    report.vaisman = if report.lck.holds() {
        vaisman_flag(alg, h, &lee)?
    } else {
        Flag::NotApplicable("the twisted-closedness predicate fails".into())
    };
    report.integrable_lck = if report.lck.holds() {
        integrable_lck_flag(alg, h, &lee)
    } else {
        Flag::NotApplicable("the twisted-closedness predicate fails".into())
    };
    report.claims = structural_claims(alg, h, &lee, &report.integrable_lck, &report.unimodular)?;
    report.lee = Some(lee);
    Ok(report)
}

fn structural_claims<S: Scalar>(
    alg: &LieAlgebra<S>,
    h: &HermitianStructure<S>,
    lee: &LeeData<S>,
    integrable: &Flag,
    unimodular: &Flag,
) -> Result<Vec<ClaimOutcome>> {
    use crate::linalg::Subspace;
    let mut claims = Vec::new();
    if !integrable.holds() {
        let why = "integrability hypothesis fails".to_string();
        for name in [
            "complement of span(U, V) is an ideal",
            "complement of span(U, V) is J-invariant",
            "restricted fundamental form is closed",
            "unimodular case: algebra is solvable",
            "unimodular case: derived subalgebra equals the Lee-orthogonal complement",
            "unimodular case: complement of span(U, V) is abelian",
        ] {
            claims.push(ClaimOutcome {
                name,
                flag: Flag::NotApplicable(why.clone()),
            });
        }
        return Ok(claims);
    }

    let dim = alg.dim();
    let span_uv = Subspace::from_spanning(dim, &[lee.u.clone(), lee.v.clone()]);
    let complement = span_uv.orthogonal_complement(h.g());

    // (a) ideal: [e_i, w] stays inside for every basis direction and every
    // complement basis vector.
    let ideal_flag = match alg.ideal_violation(&complement) {
        None => Flag::Holds,
        Some((i, wi)) => Flag::Fails(Witness {
            indices: vec![i, wi],
            residual: "bracket leaves the subspace".into(),
        }),
    };
    claims.push(ClaimOutcome {
        name: "complement of span(U, V) is an ideal",
        flag: ideal_flag,
    });

    // (b) J-invariance.
    let mut j_flag = Flag::Holds;
    for (wi, w) in complement.basis_vectors().iter().enumerate() {
        if !complement.contains(&h.apply_j(w)) {
            j_flag = Flag::Fails(Witness {
                indices: vec![wi],
                residual: "J image leaves the subspace".into(),
            });
            break;
        }
    }
    claims.push(ClaimOutcome {
        name: "complement of span(U, V) is J-invariant",
        flag: j_flag,
    });

    // (c) the restricted fundamental form is closed: dΩ vanishes on all
    // triples drawn from the complement (the complement is bracket-closed by
    // (a), so this is its intrinsic differential).
    let omega = fundamental_form(h);
    let d_omega = differential(alg, &omega)?;
    let basis = complement.basis_vectors();
    let mut restricted_flag = Flag::Holds;
    'outer: for a in 0..basis.len() {
        for b in (a + 1)..basis.len() {
            for c in (b + 1)..basis.len() {
                let value = d_omega.eval(&[&basis[a], &basis[b], &basis[c]])?;
                if !value.is_zero() {
                    restricted_flag = Flag::fail_at(vec![a, b, c], &value);
                    break 'outer;
                }
            }
        }
    }
    claims.push(ClaimOutcome {
        name: "restricted fundamental form is closed",
        flag: restricted_flag,
    });

    // Unimodular-contingent claims.
    let derived = alg.derived_subalgebra();
    let u_perp =
        Subspace::from_spanning(dim, std::slice::from_ref(&lee.u)).orthogonal_complement(h.g());
    let derived_eq_u_perp = derived.equals(&u_perp);
    if unimodular.holds() {
        claims.push(ClaimOutcome {
            name: "unimodular case: algebra is solvable",
            flag: solvable_flag(&alg.derived_series()),
        });
        claims.push(ClaimOutcome {
            name: "unimodular case: derived subalgebra equals the Lee-orthogonal complement",
            flag: if derived_eq_u_perp {
                Flag::Holds
            } else {
                Flag::Fails(Witness {
                    indices: vec![],
                    residual: format!(
                        "dim [g, g] = {}, dim U-perp = {}",
                        derived.dim(),
                        u_perp.dim()
                    ),
                })
            },
        });
        let abelian_flag = match alg.abelian_violation(&complement) {
            None => Flag::Holds,
            Some((a, b)) => Flag::Fails(Witness {
                indices: vec![a, b],
                residual: "nonzero bracket inside the complement".into(),
            }),
        };
        claims.push(ClaimOutcome {
            name: "unimodular case: complement of span(U, V) is abelian",
            flag: abelian_flag,
        });
    } else {
        let why = "unimodularity hypothesis fails".to_string();
        claims.push(ClaimOutcome {
            name: "unimodular case: algebra is solvable",
            flag: Flag::NotApplicable(why.clone()),
        });
        claims.push(ClaimOutcome {
            name: "unimodular case: derived subalgebra equals the Lee-orthogonal complement",
            flag: Flag::NotApplicable(format!(
                "{why}; observed: dim [g, g] = {}, dim U-perp = {}, equal = {}",
                derived.dim(),
                u_perp.dim(),
                derived_eq_u_perp
            )),
        });
        claims.push(ClaimOutcome {
            name: "unimodular case: complement of span(U, V) is abelian",
            flag: Flag::NotApplicable(why),
        });
    }
    Ok(claims)
}
