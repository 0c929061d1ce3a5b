//! JSON document shapes for command output.
//!
//! Arbitrary-precision values are emitted as decimal strings so documents
//! stay exact regardless of magnitude; nothing is ever rounded.

use serde::Serialize;
use uqlat::exact::{FieldMatrix, IntMatrix};
use uqlat::lattice::LatticeVector;
use uqlat::obstruction::{CertifyReport, RankCertificate, StageReport, Verdict};
use uqlat::FieldElem;

/// `(p + q·√d)/den` as `[p, q, den]` decimal strings.
pub fn elem_triple(e: &FieldElem) -> [String; 3] {
    [e.p().to_string(), e.q().to_string(), e.den().to_string()]
}

/// Coordinates as `[a, b]` decimal-string pairs meaning `a + b·ω_d`.
pub fn vector_doc(v: &LatticeVector) -> Vec<[String; 2]> {
    v.coords()
        .iter()
        .map(|c| [c.a().to_string(), c.b().to_string()])
        .collect()
}

pub fn int_matrix_doc(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.at(i, j).to_string()).collect())
        .collect()
}

pub fn field_matrix_doc(m: &FieldMatrix) -> Vec<Vec<[String; 3]>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| elem_triple(m.at(i, j))).collect())
        .collect()
}

#[derive(Serialize)]
pub struct FieldInfoDoc {
    pub d: i64,
    pub discriminant: i64,
    pub congruence: String,
    pub omega: String,
    pub omega_conj: String,
}

#[derive(Serialize)]
pub struct RepresentDoc {
    pub found: bool,
    pub witnesses: Vec<Vec<[String; 2]>>,
}

#[derive(Serialize)]
pub struct UniversalCheckDoc {
    pub targets_checked: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<[String; 2]>,
}

#[derive(Serialize)]
pub struct ThresholdDoc {
    pub n: u64,
    pub coefficients: [String; 4],
    pub certified_threshold: String,
    pub minimal_threshold: String,
    pub quartic_at_threshold: String,
}

#[derive(Serialize)]
pub struct FuzzDoc {
    pub iterations: u64,
    pub seed: u64,
    pub violations: Vec<u64>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct StageDoc {
    pub stage: String,
    pub passed: bool,
    pub detail: String,
}

impl From<&StageReport> for StageDoc {
    fn from(s: &StageReport) -> Self {
        StageDoc {
            stage: s.stage.to_string(),
            passed: s.passed,
            detail: s.detail.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct RankCertificateDoc {
    /// Exact determinant as `[p, q, den]` meaning `(p + q·√d)/den`.
    pub determinant: [String; 3],
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds_hold: Option<bool>,
}

impl From<&RankCertificate> for RankCertificateDoc {
    fn from(c: &RankCertificate) -> Self {
        RankCertificateDoc {
            determinant: elem_triple(&c.determinant),
            verdict: c.verdict.to_string(),
            lower_bound: c.lower_bound.as_ref().map(elem_triple),
            upper_bound: c.upper_bound.as_ref().map(elem_triple),
            bounds_hold: c.bounds_hold,
        }
    }
}

#[derive(Serialize)]
pub struct CertifyDoc {
    pub d: i64,
    pub discriminant: i64,
    pub below_threshold: bool,
    pub decomposition_hypothesis_met: bool,
    pub stages: Vec<StageDoc>,
    pub verdict: String,
    /// The canonical quadruple (selected from the k-vectors) and the
    /// escalation quadruple, as coordinate lists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<VectorsDoc>,
    /// The `√Δ_d·a + ε` split of the full 15×15 canonical Gram matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlocksDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RankCertificateDoc>,
}

#[derive(Serialize)]
pub struct VectorsDoc {
    pub canonical: Vec<Vec<[String; 2]>>,
    pub escalation: Vec<Vec<[String; 2]>>,
}

#[derive(Serialize)]
pub struct DecompositionDoc {
    pub integer_part: Vec<Vec<String>>,
    pub remainder: Vec<Vec<[String; 3]>>,
}

#[derive(Serialize)]
pub struct BlocksDoc {
    pub a: Vec<Vec<String>>,
    pub b: Vec<Vec<String>>,
    pub c: Vec<Vec<String>>,
    pub d: Vec<Vec<[String; 3]>>,
}

pub fn certify_doc(report: &CertifyReport) -> CertifyDoc {
    let verdict = if let Some(stage) = report.failed_stage() {
        format!("hypothesis-failure at {stage}")
    } else {
        match report.certificate.as_ref().map(|c| c.verdict) {
            Some(Verdict::Independent) if report.below_threshold => {
                "independent (below-threshold: certificate not implied by the rank obstruction)"
                    .to_string()
            }
            Some(Verdict::Independent) => "independent".to_string(),
            Some(Verdict::Inconclusive) => "inconclusive".to_string(),
            None => "incomplete".to_string(),
        }
    };
    let vectors = match (&report.quadruple, &report.extraction, &report.escalation) {
        (Some(quad), Some(extraction), Some(esc)) => {
            let kvecs: Vec<_> = extraction.vectors.values().collect();
            Some(VectorsDoc {
                canonical: quad.iter().map(|&i| vector_doc(kvecs[i])).collect(),
                escalation: esc
                    .indices
                    .iter()
                    .map(|&i| vector_doc(&esc.vectors[i]))
                    .collect(),
            })
        }
        _ => None,
    };
    CertifyDoc {
        d: report.d,
        discriminant: report.discriminant,
        below_threshold: report.below_threshold,
        decomposition_hypothesis_met: report.decomposition_hypothesis_met,
        stages: report.stages.iter().map(StageDoc::from).collect(),
        verdict,
        vectors,
        decomposition: report.decomposition.as_ref().map(|dec| DecompositionDoc {
            integer_part: int_matrix_doc(dec.integer_part()),
            remainder: field_matrix_doc(dec.remainder()),
        }),
        blocks: report.blocks.as_ref().map(|b| BlocksDoc {
            a: int_matrix_doc(b.block_a()),
            b: int_matrix_doc(b.block_b()),
            c: int_matrix_doc(b.block_c()),
            d: field_matrix_doc(b.block_d()),
        }),
        certificate: report.certificate.as_ref().map(RankCertificateDoc::from),
    }
}
