//! Built-in verification suite: replays every identity the library is
//! supposed to guarantee on the bundled example corpus — interior-product
//! dualities, theorem residuals, the structural suite, the membership
//! condition equivalences in both directions, the non-unimodular
//! counterexample, classification and correspondence round trips, and the
//! block builders — and reports one verdict per check. Checks are grouped
//! under stable keys (`section2` … `section7`) so a subset can be replayed.

use crate::analysis::{
    fundamental_form, hermitian_flag, lck_residual_given_lee, lee_data, lie_v_compatibility_residual,
    prop_sss_residual, structural_theorem_suite, theorem_delta_residual, theorem_deta_check,
};
use crate::construct::{
    build_d4, build_dim, build_gb, build_nonabelian_example, classify_dim4, from_class_one,
    to_class_one, triples_isomorphic_dim4, Dim4Class, KahlerTriple,
};
use crate::error::Error;
use crate::forms::{interior_j, KForm};
use crate::hermitian::{standard_structure, HermitianStructure};
use crate::lie::LieAlgebra;
use crate::linalg::{basis_vector, Matrix};
use crate::scalar::{render_scalar, Scalar};

/// Stable group keys, in execution order.
pub const SECTION_KEYS: [&str; 6] = [
    "section2", "section3", "section4", "section5", "section6", "section7",
];

/// One verdict: the check either passed or failed with a reason.
pub struct VerifyCheck {
    pub section: &'static str,
    pub name: String,
    pub outcome: std::result::Result<(), String>,
}

/// All verdicts of one run.
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.is_ok())
    }

    pub fn first_failure(&self) -> Option<&VerifyCheck> {
        self.checks.iter().find(|c| c.outcome.is_err())
    }

    /// One line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match &c.outcome {
                Ok(()) => out.push_str(&format!("[ ok ] {}  {}\n", c.section, c.name)),
                Err(reason) => {
                    out.push_str(&format!("[FAIL] {}  {} — {}\n", c.section, c.name, reason))
                }
            }
        }
        let failed = self.checks.iter().filter(|c| c.outcome.is_err()).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        if let Some(first) = self.first_failure() {
            out.push_str(&format!("first failing check: {}\n", first.name));
        }
        out
    }
}

struct Harness {
    only: Option<String>,
    checks: Vec<VerifyCheck>,
}

type CheckResult = std::result::Result<(), String>;

impl Harness {
    fn run(
        &mut self,
        section: &'static str,
        name: impl Into<String>,
        f: impl FnOnce() -> CheckResult,
    ) {
        if self.only.as_deref().is_some_and(|o| o != section) {
            return;
        }
        self.checks.push(VerifyCheck {
            section,
            name: name.into(),
            outcome: f(),
        });
    }
}

fn expect(cond: bool, detail: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn core<T>(r: crate::error::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn m2<S: Scalar>(a: i64, b: i64, c: i64, d: i64) -> Matrix<S> {
    let vals = [a, b, c, d];
    Matrix::from_fn(2, 2, |r, col| S::from_int(vals[r * 2 + col]))
}

/// The model Lee form of a semidirect product: the dual of the first
/// generator. When the membership conditions hold, the product satisfies
/// dΩ = θ∧Ω with exactly this θ.
fn model_lee_form<S: Scalar>(dim: usize) -> KForm<S> {
    let mut coeffs = vec![S::zero(); dim];
    coeffs[0] = S::one();
    KForm::one_form(&coeffs)
}

/// The labeled example corpus: every product is a valid Hermitian Lie
/// algebra with well-defined Lee data.
fn corpus<S: Scalar>() -> Vec<(String, LieAlgebra<S>, HermitianStructure<S>)> {
    let mut out = Vec::new();
    let mut push = |label: &str, t: &KahlerTriple<S>| {
        let (alg, herm) = t.semidirect().expect("corpus members are valid");
        out.push((label.to_string(), alg, herm));
    };
    push("rank-one model", &build_d4::<S>());
    push("family b=0", &build_gb(&S::zero()));
    push("family b=1", &build_gb(&S::one()));
    push("family b=-2", &build_gb(&S::from_int(-2)));
    push("family b=7/2", &build_gb(&S::from_fraction(7, 2)));
    push(
        "two-block builder",
        &build_dim::<S>(2).expect("builder accepts n=2"),
    );
    push("non-abelian base example", &build_nonabelian_example::<S>());
    out
}

/// Only the members of the abelian class (the non-abelian example is a
/// member of the wider class but not of the abelian one).
fn abelian_class_corpus<S: Scalar>() -> Vec<(String, KahlerTriple<S>)> {
    vec![
        ("rank-one model".to_string(), build_d4::<S>()),
        ("family b=0".to_string(), build_gb(&S::zero())),
        ("family b=1".to_string(), build_gb(&S::one())),
        ("family b=-2".to_string(), build_gb(&S::from_int(-2))),
        ("family b=7/2".to_string(), build_gb(&S::from_fraction(7, 2))),
        (
            "two-block builder".to_string(),
            build_dim::<S>(2).expect("builder accepts n=2"),
        ),
    ]
}

fn section2<S: Scalar>(h: &mut Harness) {
    for (label, alg, herm) in corpus::<S>() {
        h.run("section2", format!("Lee-field contractions of the fundamental form ({label})"), || {
            let lee = core(lee_data(&alg, &herm))?;
            let omega = fundamental_form(&herm);
            let i_u = core(omega.interior_vector(&lee.u))?;
            let i_v = core(omega.interior_vector(&lee.v))?;
            expect(
                i_u.add(&lee.eta).is_zero(),
                || "contraction with the Lee field is not minus the anti-Lee form".to_string(),
            )?;
            expect(
                i_v.sub(&lee.theta).is_zero(),
                || "contraction with the anti-Lee field is not the Lee form".to_string(),
            )
        });
        h.run("section2", format!("J-contraction of d(eta) vanishes ({label})"), || {
            let lee = core(lee_data(&alg, &herm))?;
            let d_eta = core(crate::forms::differential(&alg, &lee.eta))?;
            let contracted = core(interior_j(&herm, &d_eta))?;
            expect(contracted.is_zero(), || {
                "i_J d(eta) has a nonzero coefficient".to_string()
            })
        });
        h.run("section2", format!("anti-Lee Lie derivatives of g and J are compatible ({label})"), || {
            let lee = core(lee_data(&alg, &herm))?;
            let residual = core(lie_v_compatibility_residual(&alg, &herm, &lee))?;
            expect(residual.is_zero(), || {
                format!("residual matrix has max entry {}", render_scalar(&residual.max_abs()))
            })
        });
    }
}

fn section3<S: Scalar>(h: &mut Harness) {
    for (label, alg, herm) in corpus::<S>() {
        h.run("section3", format!("codifferential residual vanishes ({label})"), || {
            let residual = core(theorem_delta_residual(&alg, &herm))?;
            expect(residual.is_zero(), || render_scalar(&residual))
        });
        h.run("section3", format!("twisted-closedness of d(eta), both readings ({label})"), || {
            let report = core(theorem_deta_check(&alg, &herm))?;
            expect(report.both_zero(), || {
                format!(
                    "form coefficient {}, bracket coefficient {}",
                    render_scalar(&report.form_coefficient),
                    render_scalar(&report.bracket_coefficient)
                )
            })
        });
        h.run("section3", format!("d(eta) proportionality residual vanishes ({label})"), || {
            let residual = core(prop_sss_residual(&alg, &herm))?;
            expect(residual.is_zero(), || {
                "proportionality residual has a nonzero coefficient".to_string()
            })
        });
    }
}

fn section4<S: Scalar>(h: &mut Harness) {
    for (label, t) in abelian_class_corpus::<S>() {
        h.run("section4", format!("structural suite holds on the product ({label})"), || {
            let (alg, herm) = core(t.semidirect())?;
            let report = core(structural_theorem_suite(&alg, &herm))?;
            for (name, flag) in [
                ("lck", &report.lck),
                ("integrable_lck", &report.integrable_lck),
                ("unimodular", &report.unimodular),
                ("solvable", &report.solvable),
            ] {
                expect(flag.holds(), || format!("{name}: {}", flag.label()))?;
            }
            for claim in &report.claims {
                expect(claim.flag.holds(), || {
                    format!("claim '{}': {}", claim.name, claim.flag.label())
                })?;
            }
            expect(
                report.derived_series.last().is_some_and(|d| *d == 0)
                    && report.derived_series.len() <= 4,
                || format!("derived series dims {:?}", report.derived_series),
            )
        });
    }
}

fn section5<S: Scalar>(h: &mut Harness) {
    // Condition-passing triples: the membership residuals vanish and the
    // product is integrable LCK.
    for (label, t) in abelian_class_corpus::<S>() {
        h.run("section5", format!("passing conditions give an integrable LCK product ({label})"), || {
            let report = t.check();
            expect(report.member_a, || "membership residuals are nonzero".to_string())?;
            let (alg, herm) = core(t.semidirect())?;
            let suite = core(structural_theorem_suite(&alg, &herm))?;
            expect(suite.integrable_lck.holds(), || suite.integrable_lck.label())?;
            let residual = core(lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim())))?;
            expect(residual.is_zero(), || {
                "dOmega − theta∧Omega is nonzero against the model Lee form".to_string()
            })
        });
    }

    // Violating the commutation condition [v + uJ, J] = 0 (and only it)
    // must surface as a nonzero Nijenhuis tensor — while the model
    // twisted-closedness residual dΩ − θ∧Ω (θ the dual of the first
    // generator) stays zero.
    for gamma in [1i64, -1, 2] {
        h.run("section5", format!("commutation violation is exactly a Nijenhuis violation (gamma={gamma})"), || {
            let u = m2::<S>(-1, 0, 0, -1)
                .scale(&S::from_fraction(1, 2))
                .add(&m2::<S>(gamma, 0, 0, -gamma));
            let t = core(KahlerTriple::new(
                LieAlgebra::abelian(2),
                standard_structure(2),
                u,
                Matrix::zeros(2, 2),
                S::one(),
            ))?;
            let report = t.check();
            expect(!report.integrability_residual.is_zero(), || {
                "the commutation residual unexpectedly vanishes".to_string()
            })?;
            expect(
                report.u_compat_residual.is_zero() && report.v_compat_residual.is_zero(),
                || "the violation is not isolated to the commutation condition".to_string(),
            )?;
            let (alg, herm) = core(t.semidirect())?;
            expect(hermitian_flag(&alg, &herm).fails(), || {
                "the Nijenhuis tensor of the product vanishes despite the violation".to_string()
            })?;
            let residual = core(lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim())))?;
            expect(residual.is_zero(), || {
                "the model twisted-closedness residual is nonzero despite intact adjoint conditions"
                    .to_string()
            })
        });
    }

    // Violating the adjoint conditions (and only them) must surface as a
    // nonzero twisted-closedness residual dΩ − θ∧Ω, and vice versa.
    for (label, u, v, c) in [
        ("u trace 0", m2::<S>(0, 0, 0, 0), m2::<S>(0, 0, 0, 0), S::one()),
        ("u trace 2", m2::<S>(1, 0, 0, 1), m2::<S>(0, 0, 0, 0), S::one()),
        (
            "v a nonzero multiple of the identity",
            m2::<S>(-1, 0, 0, -1).scale(&S::from_fraction(1, 2)),
            m2::<S>(1, 0, 0, 1),
            S::zero(),
        ),
    ] {
        h.run("section5", format!("adjoint violation is exactly a twisted-closedness violation ({label})"), || {
            let t = core(KahlerTriple::new(
                LieAlgebra::abelian(2),
                standard_structure(2),
                u.clone(),
                v.clone(),
                c.clone(),
            ))?;
            let report = t.check();
            expect(
                !report.u_compat_residual.is_zero() || !report.v_compat_residual.is_zero(),
                || "the adjoint residuals unexpectedly vanish".to_string(),
            )?;
            expect(report.integrability_residual.is_zero(), || {
                "the violation is not isolated to the adjoint conditions".to_string()
            })?;
            let (alg, herm) = core(t.semidirect())?;
            expect(hermitian_flag(&alg, &herm).holds(), || {
                "the product is unexpectedly non-integrable".to_string()
            })?;
            let residual = core(lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim())))?;
            expect(!residual.is_zero(), || {
                "dOmega − theta∧Omega unexpectedly vanishes despite the violation".to_string()
            })
        });
    }

    h.run("section5", "the valid non-unimodular example separates the unimodularity hypothesis", || {
        let t = build_nonabelian_example::<S>();
        let report = t.check();
        expect(report.member_h, || "the example fails its membership conditions".to_string())?;
        expect(!report.member_a, || {
            "the example base is unexpectedly abelian".to_string()
        })?;
        let (alg, herm) = core(t.semidirect())?;
        let suite = core(structural_theorem_suite(&alg, &herm))?;
        expect(suite.integrable_lck.holds(), || suite.integrable_lck.label())?;
        let trace_ad_u = alg.trace_ad(&basis_vector(alg.dim(), 0));
        expect(trace_ad_u.scalar_eq(&S::from_int(-2)), || {
            format!("trace ad_U = {}", render_scalar(&trace_ad_u))
        })?;
        expect(suite.unimodular.fails(), || {
            "the example is unexpectedly unimodular".to_string()
        })?;
        let derived_dim = suite.derived_series.get(1).copied().unwrap_or(0);
        expect(derived_dim == 2 && alg.dim() - 1 == 3, || {
            format!(
                "dim of the derived subalgebra is {derived_dim}, the Lee-orthogonal complement has dim {}",
                alg.dim() - 1
            )
        })
    });
}

fn section6<S: Scalar>(h: &mut Harness) {
    h.run("section6", "classification recovers every family parameter bit-exactly", || {
        for b in [S::zero(), S::one(), S::from_int(-2), S::from_fraction(7, 2)] {
            let verdict = core(classify_dim4(&build_gb(&b)))?;
            match verdict.class {
                Dim4Class::FamilyGb(found) => {
                    expect(found.scalar_eq(&b), || {
                        format!(
                            "parameter {} came back as {}",
                            render_scalar(&b),
                            render_scalar(&found)
                        )
                    })?;
                }
                Dim4Class::D4 => {
                    return Err("a family member classified as the rank-one class".to_string())
                }
            }
        }
        Ok(())
    });

    h.run("section6", "classification identifies the rank-one model", || {
        let verdict = core(classify_dim4(&build_d4::<S>()))?;
        expect(matches!(verdict.class, Dim4Class::D4), || {
            "the rank-one model did not classify as such".to_string()
        })
    });

    h.run("section6", "isomorphism agrees with parameter equality", || {
        let same = core(triples_isomorphic_dim4(
            &build_gb(&S::from_fraction(5, 3)),
            &build_gb(&S::from_fraction(5, 3)),
        ))?;
        let different = core(triples_isomorphic_dim4(
            &build_gb(&S::from_fraction(5, 3)),
            &build_gb(&S::from_fraction(-5, 3)),
        ))?;
        let mixed = core(triples_isomorphic_dim4(
            &build_gb(&S::zero()),
            &build_d4::<S>(),
        ))?;
        expect(same && !different && !mixed, || {
            format!("same={same} different={different} mixed={mixed}")
        })
    });

    for c_num in [(-1i64, 1i64), (1, 2), (2, 1), (5, 1)] {
        let c_label = if c_num.1 == 1 {
            format!("{}", c_num.0)
        } else {
            format!("{}/{}", c_num.0, c_num.1)
        };
        h.run("section6", format!("correspondence round trip at class parameter {c_label}"), || {
            let c = S::from_fraction(c_num.0, c_num.1);
            for (label, t) in [
                ("rank-one model", build_d4::<S>()),
                ("family b=7/2", build_gb(&S::from_fraction(7, 2))),
            ] {
                let moved = core(from_class_one(&t, &c))?;
                expect(moved.check().member_a, || {
                    format!("the image of {label} fails its membership conditions")
                })?;
                let back = core(to_class_one(&moved))?;
                expect(
                    back.u == t.u && back.v == t.v && back.c.scalar_eq(&t.c),
                    || format!("round trip is not the identity on {label}"),
                )?;
            }
            Ok(())
        });
    }

    h.run("section6", "the nilpotent-v enumeration covers both classes", || {
        let enumeration = core(crate::construct::enumerate_nilpotent_v_dim2(
            &LieAlgebra::abelian(2),
            &standard_structure(2),
            &S::one(),
        ))?;
        for (b, t) in &enumeration.family_samples {
            let verdict = core(classify_dim4(t))?;
            expect(
                matches!(&verdict.class, Dim4Class::FamilyGb(found) if found.scalar_eq(b)),
                || format!("family sample b={} misclassified", render_scalar(b)),
            )?;
        }
        let rank_one = enumeration
            .rank_one
            .as_ref()
            .ok_or_else(|| "the rank-one representative is missing".to_string())?;
        let verdict = core(classify_dim4(rank_one))?;
        expect(matches!(verdict.class, Dim4Class::D4), || {
            "the rank-one representative misclassified".to_string()
        })
    });
}

fn section7<S: Scalar>(h: &mut Harness) {
    for n in 1..=5usize {
        h.run("section7", format!("block builder at {n} blocks yields a valid unimodular product"), || {
            let t = core(build_dim::<S>(n))?;
            expect(t.check().member_a, || {
                "membership residuals are nonzero".to_string()
            })?;
            let trace = core(t.u.trace())?;
            expect(trace.scalar_eq(&S::from_int(-(n as i64))), || {
                format!("trace(u) = {}", render_scalar(&trace))
            })?;
            expect(t.c.scalar_eq(&S::from_int(n as i64)), || {
                format!("class parameter is {}", render_scalar(&t.c))
            })?;
            let (alg, herm) = core(t.semidirect())?;
            expect(alg.dim() == 2 * n + 2, || format!("product dim {}", alg.dim()))?;
            let suite = core(structural_theorem_suite(&alg, &herm))?;
            for (name, flag) in [
                ("integrable_lck", &suite.integrable_lck),
                ("unimodular", &suite.unimodular),
                ("solvable", &suite.solvable),
            ] {
                expect(flag.holds(), || format!("{name}: {}", flag.label()))?;
            }
            for claim in &suite.claims {
                expect(claim.flag.holds(), || {
                    format!("claim '{}': {}", claim.name, claim.flag.label())
                })?;
            }
            expect(
                suite.derived_series.last().is_some_and(|d| *d == 0)
                    && suite.derived_series.len() <= 4,
                || format!("derived series dims {:?}", suite.derived_series),
            )
        });
    }

    h.run("section7", "the one-block builder reproduces the rank-one model", || {
        let built = core(build_dim::<S>(1))?;
        let model = build_d4::<S>();
        expect(
            built.u == model.u && built.v == model.v && built.c.scalar_eq(&model.c),
            || "the one-block instance differs from the model".to_string(),
        )
    });
}

/// Run the suite (optionally a single section, by key).
pub fn run_suite<S: Scalar>(only: Option<&str>) -> crate::error::Result<VerifyReport> {
    if let Some(o) = only {
        if !SECTION_KEYS.contains(&o) {
            return Err(Error::Invalid(format!(
                "unknown section '{o}'; valid keys: {}",
                SECTION_KEYS.join(", ")
            )));
        }
    }
    let mut h = Harness {
        only: only.map(|s| s.to_string()),
        checks: Vec::new(),
    };
    section2::<S>(&mut h);
    section3::<S>(&mut h);
    section4::<S>(&mut h);
    section5::<S>(&mut h);
    section6::<S>(&mut h);
    section7::<S>(&mut h);
    Ok(VerifyReport { checks: h.checks })
}
