//! End-to-end acceptance suite.
//!
//! Eight guarantees, exercised over the golden examples, randomized valid
//! instances in several dimensions, and search-generated members. All
//! assertions are exact: residuals are compared to zero, parameters are
//! compared bit-for-bit, and nothing is accepted within a tolerance.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lck::analysis::{
    fundamental_form, hermitian_flag, lck_residual_given_lee, lee_data, structural_theorem_suite,
    theorem_delta_residual, theorem_deta_check,
};
use lck::construct::{
    build_d4, build_dim, build_gb, build_nonabelian_example, classify_dim4, from_class_one,
    to_class_one, triples_isomorphic_dim4, Dim4Class, KahlerTriple,
};
use lck::forms::{differential, interior_j, KForm};
use lck::geometry::levi_civita;
use lck::hermitian::standard_structure;
use lck::lie::LieAlgebra;
use lck::linalg::{basis_vector, Matrix};
use lck::scalar::{render_scalar, Rat, Scalar};
use lck::search::{search_bilinear, ConstraintSystem};
use lck::verify::run_suite;

fn r(n: i64) -> Rat {
    Rat::from_int(n)
}

fn rq(num: i64, den: i64) -> Rat {
    Rat::from_fraction(num, den)
}

fn rand_rat(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rat {
    rq(rng.random_range(-span..=span), rng.random_range(1..=max_den))
}

fn rand_nonzero_rat(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rat {
    loop {
        let x = rand_rat(rng, span, max_den);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random invertible matrix with small rational entries; deterministic under
/// the caller's seeded generator.
fn random_invertible(rng: &mut ChaCha8Rng, dim: usize) -> Matrix<Rat> {
    loop {
        let m = Matrix::from_fn(dim, dim, |_, _| rand_rat(rng, 2, 2));
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Exact plane rotation through the rational point `t` on the circle:
/// columns are orthonormal and the matrix commutes with the standard `J`,
/// so conjugating by it preserves the standard Hermitian pair.
fn rational_rotation(t: &Rat) -> Matrix<Rat> {
    let t2 = t.clone() * t.clone();
    let den = Rat::one() + t2.clone();
    let cos = (Rat::one() - t2) / den.clone();
    let sin = (r(2) * t.clone()) / den;
    Matrix::from_rows(vec![vec![cos.clone(), -sin.clone()], vec![sin, cos]])
        .expect("rows are square")
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix<Rat> {
    rational_rotation(&rand_rat(rng, 6, 6))
}

/// The one-form dual to the first product generator. Every product built
/// from the membership conditions satisfies `dΩ = θ ∧ Ω` with exactly this
/// `θ`, so comparing against it tests the geometric predicate even when the
/// conditions are deliberately broken.
fn model_lee_form(dim: usize) -> KForm<Rat> {
    let mut coeffs = vec![Rat::zero(); dim];
    coeffs[0] = Rat::one();
    KForm::one_form(&coeffs)
}

/// Labeled golden members: the rank-one model, four family members, the
/// four- and six-dimensional balanced products, and the non-abelian-base
/// example.
fn corpus() -> Vec<(&'static str, KahlerTriple<Rat>)> {
    vec![
        ("rank-one model", build_d4::<Rat>()),
        ("family b=0", build_gb(&r(0))),
        ("family b=1", build_gb(&r(1))),
        ("family b=-2", build_gb(&r(-2))),
        ("family b=7/2", build_gb(&rq(7, 2))),
        ("balanced n=2", build_dim(2).expect("balanced block product exists")),
        ("balanced n=3", build_dim(3).expect("balanced block product exists")),
        ("non-abelian base", build_nonabelian_example::<Rat>()),
    ]
}

/// Canonical content key for a member: class parameter plus every matrix
/// entry, rendered exactly. Two members collide iff they are the same triple.
fn triple_key(t: &KahlerTriple<Rat>) -> String {
    let mut parts = vec![render_scalar(&t.c)];
    for m in [&t.u, &t.v] {
        for i in 0..t.h_alg.dim() {
            for j in 0..t.h_alg.dim() {
                parts.push(render_scalar(m.at(i, j)));
            }
        }
    }
    parts.join("|")
}

// ---------------------------------------------------------------------------
// 1. The built-in verification suite passes, and the rank-one model reports
//    the golden predicate line.
// ---------------------------------------------------------------------------

#[test]
fn builtin_verification_suite_passes_and_golden_flags_match() {
    let report = run_suite::<Rat>(None).expect("known section keys");
    assert!(report.passed(), "verification suite failed:\n{}", report.render());

    let (alg, herm) = build_d4::<Rat>()
        .semidirect()
        .expect("the rank-one model instantiates");
    let suite = structural_theorem_suite(&alg, &herm).expect("suite runs");
    assert!(suite.hermitian.holds(), "hermitian should hold");
    assert!(suite.kaehler.fails(), "kahler should fail");
    assert!(suite.lck.holds(), "lck should hold");
    assert!(suite.vaisman.fails(), "vaisman should fail");
    assert!(suite.integrable_lck.holds(), "integrable_lck should hold");
    assert!(suite.unimodular.holds(), "unimodular should hold");
    assert!(suite.solvable.holds(), "solvable should hold");

    for (label, triple) in corpus() {
        assert!(triple.check().member_h, "{label} should satisfy the conditions");
    }
}

// ---------------------------------------------------------------------------
// 2. The two structural identities — the codifferential formula for δθ and
//    the dη product formula — hold with exactly zero residual on the corpus
//    and on more than one hundred distinct search-generated members.
// ---------------------------------------------------------------------------

#[test]
fn twisted_differential_identities_hold_on_corpus_and_search_results() {
    let mut products = Vec::new();
    for (label, triple) in corpus() {
        let pair = triple.semidirect().expect("corpus members instantiate");
        products.push((label.to_string(), pair));
    }

    // Disjoint pools: distinct class parameters cannot produce equal triples,
    // and within a pool the search already deduplicates.
    let pools: [(Rat, u64); 11] = [
        (r(1), 4242),
        (r(2), 777),
        (rq(1, 2), 31),
        (r(-1), 99),
        (r(3), 5),
        (r(-2), 6),
        (rq(5, 3), 7),
        (rq(3, 2), 8),
        (rq(-1, 2), 9),
        (r(4), 10),
        (r(5), 12),
    ];
    let mut seen = BTreeSet::new();
    for (c, seed) in pools {
        let sys = ConstraintSystem::new(LieAlgebra::abelian(2), standard_structure(2), c)
            .expect("abelian plane system");
        let outcome = search_bilinear(&sys, 150, seed, 1e-9).expect("search runs");
        for triple in outcome.triples {
            assert!(
                triple.check().member_a,
                "search may only return exactly verified members"
            );
            if seen.insert(triple_key(&triple)) {
                let pair = triple.semidirect().expect("members instantiate");
                products.push((format!("search c={}", render_scalar(&triple.c)), pair));
            }
        }
    }
    assert!(
        seen.len() >= 100,
        "expected at least 100 distinct search-generated members, got {}",
        seen.len()
    );

    for (label, (alg, herm)) in &products {
        let delta = theorem_delta_residual(alg, herm)
            .unwrap_or_else(|e| panic!("{label}: delta residual computes: {e}"));
        assert!(delta.is_zero(), "{label}: codifferential identity residual {delta:?}");
        let deta = theorem_deta_check(alg, herm)
            .unwrap_or_else(|e| panic!("{label}: deta check computes: {e}"));
        assert!(
            deta.both_zero(),
            "{label}: dη identity fails (form coefficient {}, bracket coefficient {})",
            render_scalar(&deta.form_coefficient),
            render_scalar(&deta.bracket_coefficient),
        );
    }
}

// ---------------------------------------------------------------------------
// 3. Each membership condition tracks its geometric predicate in both
//    directions: break exactly one condition and exactly the matching
//    geometric property fails; keep them all and every property holds.
// ---------------------------------------------------------------------------

#[test]
fn each_membership_condition_tracks_its_geometric_predicate() {
    let plane = LieAlgebra::<Rat>::abelian(2);
    let herm2 = standard_structure::<Rat>(2);
    let id = Matrix::<Rat>::identity(2);
    let reflect = Matrix::from_rows(vec![vec![r(1), r(0)], vec![r(0), r(-1)]]).unwrap();
    let zero = Matrix::<Rat>::zeros(2, 2);
    let minus_half = id.scale(&rq(-1, 2));
    let mut cases = 0usize;

    // u = −(1/2)Id + γ·diag(1,−1) keeps both adjoint conditions (the
    // reflection anticommutes with J) but no longer commutes with J, so only
    // the integrability condition breaks, and with it only integrability of
    // the product complex structure.
    for gamma in [r(1), r(-1), r(2), r(-2), r(3), r(-3), rq(1, 2), rq(-1, 2), rq(5, 2), rq(3, 2)] {
        let u = minus_half.add(&reflect.scale(&gamma));
        let t = KahlerTriple::new(plane.clone(), herm2.clone(), u, zero.clone(), r(1))
            .expect("shape-valid data");
        let rep = t.check();
        assert!(!rep.integrability_residual.is_zero(), "γ={}", render_scalar(&gamma));
        assert!(rep.u_compat_residual.is_zero() && rep.v_compat_residual.is_zero());
        assert!(rep.bracket_residual.is_zero());
        assert!(!rep.member_h);

        let (alg, herm) = t.semidirect().expect("products instantiate regardless");
        assert!(
            hermitian_flag(&alg, &herm).fails(),
            "broken integrability must surface as a non-integrable product"
        );
        let lck_residual = lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim()))
            .expect("residual computes");
        assert!(
            lck_residual.is_zero(),
            "adjoint conditions intact, so dΩ = θ∧Ω must still hold"
        );
        cases += 1;
    }

    // u = α·Id with α ≠ −1/2 commutes with J and keeps v = 0, so only the
    // u-adjoint condition breaks, and with it only the conformal closure
    // dΩ = θ∧Ω.
    for alpha in [r(0), r(1), r(-1), r(2), rq(-3, 2)] {
        let t = KahlerTriple::new(plane.clone(), herm2.clone(), id.scale(&alpha), zero.clone(), r(1))
            .expect("shape-valid data");
        let rep = t.check();
        assert!(!rep.u_compat_residual.is_zero(), "α={}", render_scalar(&alpha));
        assert!(rep.integrability_residual.is_zero() && rep.v_compat_residual.is_zero());
        assert!(!rep.member_h);

        let (alg, herm) = t.semidirect().expect("products instantiate regardless");
        assert!(hermitian_flag(&alg, &herm).holds());
        let lck_residual = lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim()))
            .expect("residual computes");
        assert!(!lck_residual.is_zero(), "broken u-adjoint must break dΩ = θ∧Ω");
        cases += 1;
    }

    // v = δ·Id breaks only the v-adjoint condition (taking u = −(1/2)Id and
    // c = 0 keeps the bracket and integrability conditions intact), and with
    // it only the conformal closure.
    for delta in [r(1), r(-1), r(2), r(-2), rq(1, 2)] {
        let t = KahlerTriple::new(
            plane.clone(),
            herm2.clone(),
            minus_half.clone(),
            id.scale(&delta),
            r(0),
        )
        .expect("shape-valid data");
        let rep = t.check();
        assert!(!rep.v_compat_residual.is_zero(), "δ={}", render_scalar(&delta));
        assert!(rep.integrability_residual.is_zero() && rep.u_compat_residual.is_zero());
        assert!(rep.bracket_residual.is_zero());
        assert!(!rep.member_h);

        let (alg, herm) = t.semidirect().expect("products instantiate regardless");
        assert!(hermitian_flag(&alg, &herm).holds());
        let lck_residual = lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim()))
            .expect("residual computes");
        assert!(!lck_residual.is_zero(), "broken v-adjoint must break dΩ = θ∧Ω");
        cases += 1;
    }
    assert_eq!(cases, 20);

    // The positive direction on every corpus member: all conditions hold and
    // all predicates hold, including the conformal closure against the model
    // Lee form.
    for (label, triple) in corpus() {
        assert!(triple.check().member_h, "{label}");
        let (alg, herm) = triple.semidirect().expect("members instantiate");
        assert!(hermitian_flag(&alg, &herm).holds(), "{label}");
        let lck_residual = lck_residual_given_lee(&alg, &herm, &model_lee_form(alg.dim()))
            .expect("residual computes");
        assert!(lck_residual.is_zero(), "{label}");
    }
}

// ---------------------------------------------------------------------------
// 4. Two hundred randomized balanced block products (dimensions 4 through
//    10, random blocks, random invertible base-basis changes) all satisfy
//    the conditions, have tr(u) = −n, and are unimodular and solvable with
//    every structural claim verified.
// ---------------------------------------------------------------------------

#[test]
fn balanced_block_products_are_unimodular_solvable_with_verified_claims() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260819);
    let mut total = 0usize;
    for (n, count) in [(1usize, 80usize), (2, 60), (3, 40), (4, 20)] {
        let c = r(n as i64);
        for _ in 0..count {
            let mut acc: Option<KahlerTriple<Rat>> = None;
            for _ in 0..n {
                let base = if rng.random_range(0..4) == 0 {
                    build_d4::<Rat>()
                } else {
                    build_gb(&rand_rat(&mut rng, 9, 9))
                };
                let block = from_class_one(&base, &c).expect("class moves to c = n");
                acc = Some(match acc {
                    None => block,
                    Some(sum) => sum.direct_sum(&block).expect("equal class parameters"),
                });
            }
            let assembled = acc.expect("n >= 1");
            let s = random_invertible(&mut rng, 2 * n);
            let t = assembled
                .change_h_basis(&s)
                .expect("membership is basis-independent");

            let rep = t.check();
            assert!(rep.member_a, "block product must stay a member");
            assert!(
                t.u.trace().expect("square").scalar_eq(&r(-(n as i64))),
                "tr(u) must equal −n"
            );

            let (alg, herm) = t.semidirect().expect("members instantiate");
            let suite = structural_theorem_suite(&alg, &herm).expect("suite runs");
            assert!(suite.unimodular.holds());
            assert!(suite.solvable.holds());
            assert!(
                suite.derived_series.len() <= 4 && suite.derived_series.last() == Some(&0),
                "derived series must reach zero within three steps: {:?}",
                suite.derived_series
            );
            for claim in &suite.claims {
                assert!(
                    claim.flag.holds(),
                    "claim '{}' fails on a balanced product of {} blocks",
                    claim.name,
                    n
                );
            }
            total += 1;
        }
    }
    assert_eq!(total, 200);
}

// ---------------------------------------------------------------------------
// 5. Classification in dimension four is basis-change invariant and returns
//    the family parameter bit-for-bit; isomorphism coincides with literal
//    parameter equality.
// ---------------------------------------------------------------------------

#[test]
fn classification_recovers_parameters_bit_exactly_under_basis_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    for round in 0..100 {
        let b = rand_rat(&mut rng, 30, 12);
        let s = if round % 2 == 0 {
            random_rotation(&mut rng)
        } else {
            random_invertible(&mut rng, 2)
        };
        let t = build_gb(&b).change_h_basis(&s).expect("valid basis change");
        match classify_dim4(&t).expect("members classify").class {
            Dim4Class::FamilyGb(found) => {
                assert!(found.scalar_eq(&b));
                assert_eq!(
                    render_scalar(&found),
                    render_scalar(&b),
                    "recovered parameter must be bit-identical"
                );
            }
            Dim4Class::D4 => panic!("family member classified as the rank-one model"),
        }
    }

    for _ in 0..10 {
        let s = random_invertible(&mut rng, 2);
        let t = build_d4::<Rat>().change_h_basis(&s).expect("valid basis change");
        assert!(matches!(
            classify_dim4(&t).expect("members classify").class,
            Dim4Class::D4
        ));
    }

    for _ in 0..20 {
        let b1 = rand_rat(&mut rng, 9, 6);
        let b2 = rand_rat(&mut rng, 9, 6);
        let t1 = build_gb(&b1)
            .change_h_basis(&random_rotation(&mut rng))
            .expect("valid basis change");
        let t2 = build_gb(&b2)
            .change_h_basis(&random_invertible(&mut rng, 2))
            .expect("valid basis change");
        assert_eq!(
            triples_isomorphic_dim4(&t1, &t2).expect("classifiable"),
            b1.scalar_eq(&b2),
            "isomorphism must coincide with parameter equality (b1={}, b2={})",
            render_scalar(&b1),
            render_scalar(&b2)
        );
        let t1_again = build_gb(&b1)
            .change_h_basis(&random_invertible(&mut rng, 2))
            .expect("valid basis change");
        assert!(triples_isomorphic_dim4(&t1, &t1_again).expect("classifiable"));
    }

    assert!(!triples_isomorphic_dim4(&build_gb(&r(0)), &build_d4()).expect("classifiable"));
}

// ---------------------------------------------------------------------------
// 6. Moving a member between class parameters and back is the identity,
//    bit-for-bit, on fifty randomized members and four target parameters.
// ---------------------------------------------------------------------------

#[test]
fn class_parameter_correspondence_round_trips_bit_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let targets = [r(-1), rq(1, 2), r(2), r(5)];
    let mut trips = 0usize;
    for k in 0..50 {
        let base = if k % 7 == 0 {
            build_d4::<Rat>()
        } else {
            build_gb(&rand_rat(&mut rng, 9, 9))
        };
        let base = if k % 2 == 0 {
            base.change_h_basis(&random_rotation(&mut rng))
                .expect("valid basis change")
        } else {
            base
        };
        let c = &targets[k % targets.len()];

        let moved = from_class_one(&base, c).expect("correspondence moves forward");
        assert!(moved.check().member_a, "image must be a member");
        assert!(moved.c.scalar_eq(c));

        let back = to_class_one(&moved).expect("correspondence moves back");
        assert!(
            back.u == base.u && back.v == base.v && back.c.scalar_eq(&base.c),
            "round trip must reproduce the original matrices bit-for-bit"
        );

        let again = from_class_one(&back, c).expect("correspondence moves forward");
        assert!(again.u == moved.u && again.v == moved.v && again.c.scalar_eq(&moved.c));
        trips += 1;
    }
    assert_eq!(trips, 50);
}

// ---------------------------------------------------------------------------
// 7. The non-abelian-base example separates the general theory from the
//    unimodular theory: it satisfies the conditions and is integrable, yet
//    fails unimodularity, and its derived subalgebra is strictly smaller
//    than the Lee-orthogonal complement.
// ---------------------------------------------------------------------------

#[test]
fn non_unimodular_member_separates_the_unimodular_theory() {
    let t = build_nonabelian_example::<Rat>();
    let rep = t.check();
    assert!(rep.member_h, "the example satisfies the general conditions");
    assert!(!rep.h_abelian, "its base is genuinely non-abelian");
    assert!(!rep.member_a, "so it lies outside the abelian-base class");

    let (alg, herm) = t.semidirect().expect("the example instantiates");
    let suite = structural_theorem_suite(&alg, &herm).expect("suite runs");
    assert!(suite.integrable_lck.holds());
    assert!(suite.unimodular.fails(), "tr ad must not vanish identically");
    assert!(
        alg.trace_ad(&basis_vector(alg.dim(), 0)).scalar_eq(&r(-2)),
        "the Lee vector direction carries trace −2"
    );

    let lee = lee_data(&alg, &herm).expect("Lee data exists");
    assert!(!lee.lee_vanishes(), "the Lee form is non-zero");
    // Lee-orthogonal complement has codimension one; the derived subalgebra
    // here is two-dimensional, strictly smaller — the unimodular conclusion
    // "derived subalgebra equals the Lee-orthogonal complement" genuinely
    // needs unimodularity.
    assert_eq!(alg.dim(), 4);
    assert_eq!(
        suite.derived_series.get(1),
        Some(&2),
        "derived subalgebra must be two-dimensional"
    );
    let equality_claim = suite
        .claims
        .iter()
        .find(|c| c.name.contains("derived subalgebra equals the Lee-orthogonal complement"));
    if let Some(claim) = equality_claim {
        assert!(
            !claim.flag.holds(),
            "the unimodular-only conclusion must not hold here"
        );
    }
}

// ---------------------------------------------------------------------------
// 8. Infrastructure identities on two hundred randomized instances: the
//    differential squares to zero, the canonical connection is torsion-free
//    and metric, and the Lee contraction identities hold — in random bases.
// ---------------------------------------------------------------------------

#[test]
fn differential_connection_and_contraction_identities_on_random_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(777_000_001);
    let mut count = 0usize;
    while count < 200 {
        let pick = rng.random_range(0..20);
        let template: KahlerTriple<Rat> = match pick {
            0..=5 => build_gb(&rand_rat(&mut rng, 9, 9)),
            6..=8 => build_d4(),
            9..=10 => build_nonabelian_example(),
            11..=13 => {
                let b = rand_rat(&mut rng, 9, 9);
                let c = rand_nonzero_rat(&mut rng, 5, 5);
                from_class_one(&build_gb(&b), &c).expect("class moves")
            }
            14..=17 => build_dim(2).expect("balanced product exists"),
            _ => build_dim(3).expect("balanced product exists"),
        };
        let (alg0, herm0) = template.semidirect().expect("members instantiate");
        let s = random_invertible(&mut rng, alg0.dim());
        let alg = alg0.change_basis(&s).expect("basis change preserves the bracket laws");
        let herm = herm0.change_basis(&s).expect("basis change preserves compatibility");
        let dim = alg.dim();

        // d ∘ d = 0 on every basis dual and on a random one-form.
        for k in 0..dim {
            let dual = KForm::one_form(&basis_vector::<Rat>(dim, k));
            let dd = differential(&alg, &differential(&alg, &dual).expect("d computes"))
                .expect("d computes");
            assert!(dd.is_zero(), "d²(e^{k}) ≠ 0 in a changed basis");
        }
        let coeffs: Vec<Rat> = (0..dim).map(|_| rand_rat(&mut rng, 5, 4)).collect();
        let alpha = KForm::one_form(&coeffs);
        let dd = differential(&alg, &differential(&alg, &alpha).expect("d computes"))
            .expect("d computes");
        assert!(dd.is_zero(), "d² ≠ 0 on a random one-form");

        // The canonical connection is torsion-free and metric-compatible.
        let lc = levi_civita(&alg, &herm).expect("connection computes");
        assert_eq!(lc.torsion_violation(&alg), None);
        assert_eq!(lc.metric_compat_violation(&herm), None);

        // Lee contraction identities: i_U Ω = −η, i_V Ω = θ, i_J dη = 0.
        let lee = lee_data(&alg, &herm).expect("Lee data computes");
        let omega = fundamental_form(&herm);
        assert!(
            omega
                .interior_vector(&lee.u)
                .expect("contraction computes")
                .add(&lee.eta)
                .is_zero(),
            "i_U Ω must equal −η"
        );
        assert!(
            omega
                .interior_vector(&lee.v)
                .expect("contraction computes")
                .sub(&lee.theta)
                .is_zero(),
            "i_V Ω must equal θ"
        );
        let d_eta = differential(&alg, &lee.eta).expect("d computes");
        assert!(
            interior_j(&herm, &d_eta).expect("J-contraction computes").is_zero(),
            "i_J dη must vanish"
        );
        count += 1;
    }
    assert_eq!(count, 200);
}
