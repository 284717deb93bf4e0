//! File format for algebras and triples: structured JSON documents whose
//! numeric entries are exact rational strings (`"p/q"`, or `"p"` for
//! integers), so files never carry binary-float round-off. Loaders validate
//! shape and field contents first (parse-class errors), then hand off to the
//! core constructors, which re-check every mathematical invariant
//! (invariant-class errors); [`crate::error::Error::is_parse_error`]
//! separates the two classes for exit-code mapping.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{Flag, LeeData, StructureReport};
use crate::construct::KahlerTriple;
use crate::error::{Error, Result};
use crate::hermitian::HermitianStructure;
use crate::lie::{BracketRow, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::{parse_scalar, render_scalar, Scalar};

/// One term `coeff · e_k` of a bracket expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketTerm {
    pub k: usize,
    pub coeff: String,
}

/// The expansion of `[e_i, e_j]` for one basis pair with `i < j`; pairs not
/// listed have zero bracket, and `j < i` pairs are implied by antisymmetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<BracketTerm>,
}

/// A metric Lie algebra with complex structure, as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketRecord>,
    pub metric: Vec<Vec<String>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<String>>,
}

/// A Kähler base with a derivation pair and class parameter, as stored on
/// disk; `n` is the complex dimension of the base (`h.dim = 2n`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleDocument {
    pub h: AlgebraDocument,
    pub u: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
    pub c: String,
    pub n: usize,
}

fn doc_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Document {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// Parse a square array of rational strings, attributing failures to `field`.
pub fn parse_string_matrix<S: Scalar>(
    field: &str,
    rows: &[Vec<String>],
    dim: usize,
) -> Result<Matrix<S>> {
    if rows.len() != dim {
        return Err(doc_err(
            field,
            format!("expected {dim} rows, found {}", rows.len()),
        ));
    }
    let mut m = Matrix::zeros(dim, dim);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(doc_err(
                field,
                format!("row {r} has {} entries, expected {dim}", row.len()),
            ));
        }
        for (c, text) in row.iter().enumerate() {
            m.set(r, c, parse_scalar::<S>(text)?);
        }
    }
    Ok(m)
}

fn render_string_matrix<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| render_scalar(m.at(r, c))).collect())
        .collect()
}

/// Default basis names `e0, e1, …`.
pub fn default_basis_names(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("e{i}")).collect()
}

/// Basis names for a semidirect product built over a base of dimension `2n`:
/// the two new directions first, then the base directions. For `n = 1` the
/// base pair is written `X, JX`; larger bases use `X1, JX1, X2, JX2, …`.
pub fn semidirect_basis_names(base_dim: usize) -> Vec<String> {
    let mut names = vec!["U".to_string(), "V".to_string()];
    if base_dim == 2 {
        names.push("X".to_string());
        names.push("JX".to_string());
    } else {
        for k in 0..base_dim / 2 {
            names.push(format!("X{}", k + 1));
            names.push(format!("JX{}", k + 1));
        }
    }
    names
}

impl AlgebraDocument {
    /// Capture a live instance. `basis` falls back to `e0, e1, …` when not
    /// provided; only nonzero brackets of `i < j` pairs are stored.
    pub fn from_instance<S: Scalar>(
        alg: &LieAlgebra<S>,
        herm: &HermitianStructure<S>,
        basis: Option<Vec<String>>,
    ) -> Self {
        let dim = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let terms: Vec<BracketTerm> = alg
                    .bracket_basis(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, coeff)| !coeff.is_zero())
                    .map(|(k, coeff)| BracketTerm {
                        k,
                        coeff: render_scalar(coeff),
                    })
                    .collect();
                if !terms.is_empty() {
                    brackets.push(BracketRecord { i, j, terms });
                }
            }
        }
        AlgebraDocument {
            dim,
            basis: basis.unwrap_or_else(|| default_basis_names(dim)),
            brackets,
            metric: render_string_matrix(herm.g()),
            j: render_string_matrix(herm.j()),
        }
    }

    /// Field-level validation: shapes, index ranges, and rational syntax.
    /// Mathematical invariants are left to the core constructors.
    fn validate_fields(&self) -> Result<()> {
        if self.basis.len() != self.dim {
            return Err(doc_err(
                "basis",
                format!(
                    "expected {} names, found {}",
                    self.dim,
                    self.basis.len()
                ),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (pos, rec) in self.brackets.iter().enumerate() {
            if rec.i >= rec.j {
                return Err(doc_err(
                    "brackets",
                    format!(
                        "record {pos} has i = {}, j = {}; brackets are stored only for i < j",
                        rec.i, rec.j
                    ),
                ));
            }
            if rec.j >= self.dim {
                return Err(doc_err(
                    "brackets",
                    format!(
                        "record {pos} addresses basis index {} in dimension {}",
                        rec.j, self.dim
                    ),
                ));
            }
            if !seen.insert((rec.i, rec.j)) {
                return Err(doc_err(
                    "brackets",
                    format!("duplicate record for pair ({}, {})", rec.i, rec.j),
                ));
            }
            for term in &rec.terms {
                if term.k >= self.dim {
                    return Err(doc_err(
                        "brackets",
                        format!(
                            "record {pos} has a term with k = {} in dimension {}",
                            term.k, self.dim
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Build the validated in-memory pair. Parse-class problems (shape,
    /// ranges, rational syntax) surface as document/parse errors; Jacobi,
    /// metric, and complex-structure violations surface as the core errors.
    pub fn instantiate<S: Scalar>(&self) -> Result<(LieAlgebra<S>, HermitianStructure<S>)> {
        self.validate_fields()?;
        let mut entries: Vec<BracketRow<S>> = Vec::new();
        for rec in &self.brackets {
            let mut terms = Vec::new();
            for term in &rec.terms {
                terms.push((term.k, parse_scalar::<S>(&term.coeff)?));
            }
            entries.push((rec.i, rec.j, terms));
        }
        let g = parse_string_matrix::<S>("metric", &self.metric, self.dim)?;
        let j = parse_string_matrix::<S>("J", &self.j, self.dim)?;
        let alg = LieAlgebra::from_bracket_table(self.dim, &entries)?;
        let herm = HermitianStructure::new(g, j)?;
        Ok((alg, herm))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| doc_err("algebra document", e.to_string()))
    }
}

impl TripleDocument {
    pub fn from_triple<S: Scalar>(t: &KahlerTriple<S>, basis: Option<Vec<String>>) -> Self {
        TripleDocument {
            h: AlgebraDocument::from_instance(&t.h_alg, &t.h_herm, basis),
            u: render_string_matrix(&t.u),
            v: render_string_matrix(&t.v),
            c: render_scalar(&t.c),
            n: t.n,
        }
    }

    pub fn instantiate<S: Scalar>(&self) -> Result<KahlerTriple<S>> {
        if self.h.dim != 2 * self.n {
            return Err(doc_err(
                "n",
                format!("n = {} but h.dim = {}; need h.dim = 2n", self.n, self.h.dim),
            ));
        }
        let u = parse_string_matrix::<S>("u", &self.u, self.h.dim)?;
        let v = parse_string_matrix::<S>("v", &self.v, self.h.dim)?;
        let c = parse_scalar::<S>(&self.c)?;
        let (alg, herm) = self.h.instantiate::<S>()?;
        KahlerTriple::new(alg, herm, u, v, c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| doc_err("triple document", e.to_string()))
    }
}

fn flag_text(flag: &Flag) -> String {
    match flag {
        Flag::Holds => "yes".to_string(),
        Flag::Fails(w) => format!(
            "no   witness at ({}): residual {}",
            w.indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            w.residual
        ),
        Flag::NotApplicable(reason) => format!("not applicable — {reason}"),
    }
}

fn flag_json(flag: &Flag) -> serde_json::Value {
    match flag {
        Flag::Holds => json!({ "status": "holds" }),
        Flag::Fails(w) => json!({
            "status": "fails",
            "witness": { "indices": w.indices, "residual": w.residual },
        }),
        Flag::NotApplicable(reason) => json!({
            "status": "not_applicable",
            "reason": reason,
        }),
    }
}

fn one_form_coefficients<S: Scalar>(form: &crate::forms::KForm<S>) -> Vec<String> {
    (0..form.dim())
        .map(|i| render_scalar(&form.get(&[i])))
        .collect()
}

fn lee_json<S: Scalar>(lee: &LeeData<S>) -> serde_json::Value {
    json!({
        "n": lee.n,
        "theta": one_form_coefficients(&lee.theta),
        "eta": one_form_coefficients(&lee.eta),
        "U": lee.u.iter().map(render_scalar).collect::<Vec<_>>(),
        "V": lee.v.iter().map(render_scalar).collect::<Vec<_>>(),
        "norm_sq": render_scalar(&lee.norm_sq),
    })
}

/// One flag per line, witnesses inline, followed by the Lee data summary,
/// derived series, and structural claims.
pub fn render_report_text<S: Scalar>(report: &StructureReport<S>) -> String {
    let mut out = String::new();
    match report.n {
        Some(n) => out.push_str(&format!("dim = {}  (n = {n})\n", report.dim)),
        None => out.push_str(&format!("dim = {}\n", report.dim)),
    }
    for (name, flag) in [
        ("hermitian", &report.hermitian),
        ("kahler", &report.kaehler),
        ("lck", &report.lck),
        ("vaisman", &report.vaisman),
        ("integrable_lck", &report.integrable_lck),
        ("lcs_first_kind", &report.lcs_first_kind),
        ("gauduchon", &report.gauduchon),
        ("unimodular", &report.unimodular),
        ("solvable", &report.solvable),
    ] {
        out.push_str(&format!("{name:<15} {}\n", flag_text(flag)));
    }
    if let Some(lee) = &report.lee {
        out.push_str(&format!(
            "lee form:       theta = [{}], |theta|^2 = {}\n",
            one_form_coefficients(&lee.theta).join(", "),
            render_scalar(&lee.norm_sq)
        ));
        out.push_str(&format!(
            "anti-lee form:  eta = [{}]\n",
            one_form_coefficients(&lee.eta).join(", ")
        ));
    }
    if let Some(dt) = &report.delta_theta {
        out.push_str(&format!("delta theta = {}\n", render_scalar(dt)));
    }
    out.push_str(&format!(
        "derived series dims: {}\n",
        report
            .derived_series
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    if !report.claims.is_empty() {
        out.push_str("structural claims:\n");
        for claim in &report.claims {
            out.push_str(&format!("  {:<38} {}\n", claim.name, flag_text(&claim.flag)));
        }
    }
    out
}

pub fn render_report_json<S: Scalar>(report: &StructureReport<S>) -> serde_json::Value {
    json!({
        "dim": report.dim,
        "n": report.n,
        "flags": {
            "hermitian": flag_json(&report.hermitian),
            "kahler": flag_json(&report.kaehler),
            "lck": flag_json(&report.lck),
            "vaisman": flag_json(&report.vaisman),
            "integrable_lck": flag_json(&report.integrable_lck),
            "lcs_first_kind": flag_json(&report.lcs_first_kind),
            "gauduchon": flag_json(&report.gauduchon),
            "unimodular": flag_json(&report.unimodular),
            "solvable": flag_json(&report.solvable),
        },
        "lee": report.lee.as_ref().map(lee_json),
        "delta_theta": report.delta_theta.as_ref().map(render_scalar),
        "derived_series": report.derived_series,
        "claims": report
            .claims
            .iter()
            .map(|c| json!({ "name": c.name, "outcome": flag_json(&c.flag) }))
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::structural_theorem_suite;
    use crate::construct::{build_d4, build_gb};
    use crate::scalar::Rat;

    fn rq(n: i64, d: i64) -> Rat {
        Rat::from_fraction(n, d)
    }

    #[test]
    fn algebra_document_round_trips_bit_exactly() {
        let t = build_d4::<Rat>();
        let product = t.semidirect().unwrap();
        let doc = AlgebraDocument::from_instance(
            &product.0,
            &product.1,
            Some(semidirect_basis_names(2)),
        );
        let text = doc.to_json_string();
        let back = AlgebraDocument::from_json_str(&text).unwrap();
        assert_eq!(doc, back);
        let (alg, herm) = back.instantiate::<Rat>().unwrap();
        assert_eq!(alg, product.0);
        assert_eq!(herm, product.1);
        assert_eq!(back.basis, vec!["U", "V", "X", "JX"]);
    }

    #[test]
    fn triple_document_round_trips_bit_exactly() {
        let t = build_gb(&rq(-7, 3));
        let doc = TripleDocument::from_triple(&t, None);
        let text = doc.to_json_string();
        let back = TripleDocument::from_json_str(&text).unwrap();
        assert_eq!(doc, back);
        let t2 = back.instantiate::<Rat>().unwrap();
        assert_eq!(t2.u, t.u);
        assert_eq!(t2.v, t.v);
        assert_eq!(t2.c, t.c);
    }

    #[test]
    fn field_validation_precedes_mathematical_validation() {
        let t = build_d4::<Rat>();
        let mut doc = TripleDocument::from_triple(&t, None);
        doc.n = 3;
        let err = doc.instantiate::<Rat>().unwrap_err();
        assert!(err.is_parse_error(), "wrong n should be a document error");

        let mut doc = TripleDocument::from_triple(&t, None);
        doc.c = "1/0".to_string();
        let err = doc.instantiate::<Rat>().unwrap_err();
        assert!(err.is_parse_error(), "zero denominator is a parse error");

        let mut doc = TripleDocument::from_triple(&t, None);
        doc.u[0][0] = "not-a-number".to_string();
        assert!(doc.instantiate::<Rat>().unwrap_err().is_parse_error());
    }

    #[test]
    fn invariant_violations_are_not_parse_errors() {
        let t = build_d4::<Rat>();
        let (alg, herm) = t.semidirect().unwrap();
        let mut doc =
            AlgebraDocument::from_instance(&alg, &herm, Some(semidirect_basis_names(2)));
        // Corrupt one structure constant so the Jacobi identity fails.
        doc.brackets[0].terms[0].coeff = "2".to_string();
        let err = doc.instantiate::<Rat>().unwrap_err();
        assert!(!err.is_parse_error(), "Jacobi failure is invariant-class");
        assert!(matches!(err, Error::Jacobi { .. }));
    }

    #[test]
    fn bracket_records_reject_bad_indices_and_duplicates() {
        let t = build_d4::<Rat>();
        let (alg, herm) = t.semidirect().unwrap();
        let good = AlgebraDocument::from_instance(&alg, &herm, None);

        let mut swapped = good.clone();
        let (i, j) = (swapped.brackets[0].i, swapped.brackets[0].j);
        swapped.brackets[0].i = j;
        swapped.brackets[0].j = i;
        assert!(swapped.instantiate::<Rat>().unwrap_err().is_parse_error());

        let mut out_of_range = good.clone();
        out_of_range.brackets[0].terms[0].k = 99;
        assert!(out_of_range
            .instantiate::<Rat>()
            .unwrap_err()
            .is_parse_error());

        let mut duplicated = good.clone();
        let rec = duplicated.brackets[0].clone();
        duplicated.brackets.push(rec);
        assert!(duplicated
            .instantiate::<Rat>()
            .unwrap_err()
            .is_parse_error());
    }

    #[test]
    fn report_renderings_cover_all_flag_states() {
        let t = build_d4::<Rat>();
        let (alg, herm) = t.semidirect().unwrap();
        let report = structural_theorem_suite(&alg, &herm).unwrap();
        let text = render_report_text(&report);
        assert!(text.contains("hermitian"));
        assert!(text.contains("kahler"));
        assert!(text.contains("witness at (0, 2, 3)"));
        assert!(text.contains("derived series dims: 4 3 1 0"));
        let value = render_report_json(&report);
        assert_eq!(value["flags"]["kahler"]["status"], "fails");
        assert_eq!(value["flags"]["lck"]["status"], "holds");
        assert_eq!(
            value["flags"]["kahler"]["witness"]["indices"],
            json!([0, 2, 3])
        );
        assert_eq!(value["lee"]["norm_sq"], "1");
        assert_eq!(value["delta_theta"], "0");
    }
}
