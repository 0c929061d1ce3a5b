//! The rank-certificate pipeline: extract vectors representing the canonical
//! targets `m_k + k·ω_d`, split their Gram matrix into `√Δ_d·a + ε`, select
//! an independent quadruple from the integer part, constrain the cross inner
//! products, assemble the 8×8 Gram matrix, and certify linear independence
//! by exact determinant positivity.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::bounds::perturbation_coefficient;
use crate::error::{Error, Result};
use crate::exact::{FieldMatrix, IntMatrix};
use crate::lattice::{Lattice, LatticeVector};
use crate::qfield::{AlgInt, Embedding, FieldElem, QuadField};
use crate::represent::represents;
use crate::universal::{escalate_independent_quadruple, z_represents, EscalationResult};

/// A Gram matrix over `O_F` written as `√Δ_d·a + ε` with integer `a`.
///
/// The integer coefficient of each entry is its `ω_d`-coordinate (rounded to
/// the nearest integer for half-integral entries), which makes the remainder
/// `ε = G − √Δ_d·a` exactly reconstructible, and small under the first
/// embedding whenever the entries have small conjugates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramDecomposition {
    field: QuadField,
    a: IntMatrix,
    eps: FieldMatrix,
}

impl GramDecomposition {
    pub fn field(&self) -> QuadField {
        self.field
    }

    /// The integer matrix of `√Δ_d`-coefficients.
    pub fn integer_part(&self) -> &IntMatrix {
        &self.a
    }

    /// The exact remainder matrix `ε`.
    pub fn remainder(&self) -> &FieldMatrix {
        &self.eps
    }

    /// `√Δ_d·a + ε`, which equals the decomposed input exactly.
    pub fn reconstruct(&self) -> FieldMatrix {
        let sqrt_delta = self.field.sqrt_delta();
        FieldMatrix::from_fn(self.field, self.a.dim(), |i, j| {
            let coeff = FieldElem::new(
                self.field,
                self.a.at(i, j).clone(),
                BigInt::zero(),
                BigInt::from(1),
            );
            &(&coeff * &sqrt_delta) + self.eps.at(i, j)
        })
    }

    /// All remainders strictly below 1 in absolute value under the first
    /// embedding.
    pub fn remainder_small(&self) -> bool {
        let one = FieldElem::one(self.field);
        let minus_one = -&one;
        let n = self.eps.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = self.eps.at(i, j);
                e.cmp_at(&one, Embedding::First) == Ordering::Less
                    && e.cmp_at(&minus_one, Embedding::First) == Ordering::Greater
            })
        })
    }

    /// `|a_ij|² ≤ (i+1)(j+1)` for all entries, the canonical-family bound.
    pub fn integer_part_within_sqrt_bound(&self) -> bool {
        let n = self.a.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let a = self.a.at(i, j);
                a * a <= BigInt::from(((i + 1) * (j + 1)) as u64)
            })
        })
    }
}

/// Splits each entry `g = r + s·ω_d` of a Gram matrix into
/// `√Δ_d·a + ε` with `a` the nearest integer to `s` (exactly `s` itself on
/// `O_F` entries) and `ε = g − √Δ_d·a`.
///
/// Total on any matrix over the field; the reconstruction is always exact.
pub fn decompose_gram(g: &FieldMatrix) -> GramDecomposition {
    let field = g.field();
    let sqrt_delta = field.sqrt_delta();
    let n = g.dim();
    let a = IntMatrix::from_fn(n, |i, j| g.at(i, j).omega_coord().round().to_integer());
    let eps = FieldMatrix::from_fn(field, n, |i, j| {
        let coeff = FieldElem::new(field, a.at(i, j).clone(), BigInt::zero(), BigInt::from(1));
        g.at(i, j) - &(&coeff * &sqrt_delta)
    });
    GramDecomposition { field, a, eps }
}

/// Witnesses of the canonical targets `m_k + k·ω_d`, `k = 1..=15`.
#[derive(Debug, Clone)]
pub struct KVectorExtraction {
    /// `k ↦ v_k` with `Q(v_k) = m_k + k·ω_d`.
    pub vectors: BTreeMap<u32, LatticeVector>,
    /// Values of `k` whose target the lattice does not represent.
    pub missing: Vec<u32>,
}

impl KVectorExtraction {
    pub fn complete(&self) -> bool {
        self.missing.is_empty()
    }

    /// The canonical targets themselves.
    pub fn target(field: QuadField, k: u32) -> AlgInt {
        AlgInt::new(field, field.omega_floor(k as i64), BigInt::from(k))
    }
}

/// Finds, for each `k = 1..=15`, a vector of norm `m_k + k·ω_d`.
/// Unrepresentable targets are reported per `k` rather than failing the
/// whole extraction: such a lattice simply fails the universality
/// hypothesis.
pub fn extract_kvectors(l: &Lattice) -> Result<KVectorExtraction> {
    let field = l.field();
    let mut vectors = BTreeMap::new();
    let mut missing = Vec::new();
    for k in 1..=15u32 {
        let target = KVectorExtraction::target(field, k);
        match represents(l, &target)? {
            Some(w) => {
                vectors.insert(k, w.vector);
            }
            None => missing.push(k),
        }
    }
    Ok(KVectorExtraction { vectors, missing })
}

/// Picks four indices whose 4×4 minor of the decomposition's integer part
/// has determinant at least 1.
///
/// Requires every principal pattern of size ≤ 4 of the integer part to be
/// positive semidefinite (a consequence of the lattice being positive
/// definite when the discriminant is large enough); a violation is reported
/// as a hypothesis failure. The fast path follows the canonical selection —
/// `v_1, v_2`, then `v_3` or `v_6` according to `a_12`, then `v_h` for an
/// `h ≤ 15` the ternary integer form misses — and falls back to exhaustive
/// search over 4-subsets.
pub fn select_quadruple(dec: &GramDecomposition) -> Result<[usize; 4]> {
    let a = dec.integer_part();
    let n = a.dim();
    if n < 4 {
        return Err(Error::BadParameter(
            "need at least four vectors to select a quadruple".into(),
        ));
    }

    // hypothesis: every pattern of size ≤ 4 is PSD
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    subsets_up_to_four(n, &mut subsets);
    for idx in &subsets {
        if a.principal_minor(idx).det().is_negative() {
            return Err(Error::HypothesisViolation(format!(
                "integer-part pattern {idx:?} has negative determinant"
            )));
        }
    }

    if let Some(q) = fast_path(a) {
        return Ok(q);
    }
    for idx in subsets.iter().filter(|s| s.len() == 4) {
        if a.principal_minor(idx).det().is_positive() {
            return Ok([idx[0], idx[1], idx[2], idx[3]]);
        }
    }
    Err(Error::NoQualifyingQuadruple)
}

fn subsets_up_to_four(n: usize, out: &mut Vec<Vec<usize>>) {
    for i in 0..n {
        out.push(vec![i]);
        for j in (i + 1)..n {
            out.push(vec![i, j]);
            for k in (j + 1)..n {
                out.push(vec![i, j, k]);
                for l in (k + 1)..n {
                    out.push(vec![i, j, k, l]);
                }
            }
        }
    }
}

/// The canonical-family selection; `None` when any of its guarantees fails
/// on the given data, in which case the exhaustive fallback takes over.
fn fast_path(a: &IntMatrix) -> Option<[usize; 4]> {
    if a.dim() < 15 {
        return None;
    }
    let a12 = a.at(0, 1);
    let third = if a12.abs() == BigInt::from(1) {
        2 // v_3
    } else if a12.is_zero() {
        5 // v_6
    } else {
        return None;
    };
    let triple = [0usize, 1, third];
    let minor3 = a.principal_minor(&triple);
    if !minor3.det().is_positive() {
        return None;
    }
    // an h ≤ 15 the ternary form misses; the 15-criterion guarantees one
    // exists for any positive definite ternary over Z
    let g3 = minor3.to_rational();
    let h = (1..=15u32).find(|&h| matches!(z_represents(&g3, h), Ok(false)))?;
    let fourth = (h - 1) as usize;
    if triple.contains(&fourth) {
        return None;
    }
    let quad = [triple[0], triple[1], triple[2], fourth];
    let mut sorted = quad;
    sorted.sort_unstable();
    if a.principal_minor(&sorted).det().is_positive() {
        Some(sorted)
    } else {
        None
    }
}

/// Cross inner products `B(v'_i, w_j)` between the selected quadruple and
/// the escalation quadruple, with integrality and range classification.
#[derive(Debug, Clone)]
pub struct CijScanReport {
    /// The exact 4×4 cross Gram matrix.
    pub cross: FieldMatrix,
    /// Present when every entry is a rational integer.
    pub c_matrix: Option<IntMatrix>,
    /// Entries that are integral but outside `[−4, 3]`.
    pub out_of_range: Vec<(usize, usize)>,
    /// Entries that are not rational integers.
    pub non_integral: Vec<(usize, usize)>,
    /// Non-integral entries whose square exceeds `Q(v_i)·Q(w_j)` under the
    /// first embedding — impossible in a positive definite lattice, and the
    /// exact form of the contradiction that forces integrality above the
    /// threshold.
    pub pd_contradictions: Vec<(usize, usize)>,
    /// Non-integral entries with first-embedding magnitude at least
    /// `√Δ_d/2 − 1`, the size a nonzero ω-coordinate forces.
    pub large_first_embedding: Vec<(usize, usize)>,
}

impl CijScanReport {
    /// Integral and in range everywhere.
    pub fn clean(&self) -> bool {
        self.c_matrix.is_some() && self.out_of_range.is_empty()
    }
}

/// Computes and classifies the cross Gram between the two families.
pub fn cij_scan(
    l: &Lattice,
    quad: &[LatticeVector],
    ints: &[LatticeVector],
) -> Result<CijScanReport> {
    assert_eq!(quad.len(), 4, "expected the selected quadruple");
    assert_eq!(ints.len(), 4, "expected the escalation quadruple");
    let field = l.field();
    let mut cross = FieldMatrix::zeros(field, 4);
    let mut non_integral = Vec::new();
    let mut out_of_range = Vec::new();
    let mut pd_contradictions = Vec::new();
    let mut large_first_embedding = Vec::new();
    let mut ints_ok = true;
    let lo = FieldElem::from_int(field, -4);
    let hi = FieldElem::from_int(field, 3);
    // √Δ/2 − 1
    let half_sqrt_delta_less_one = &field
        .sqrt_delta()
        .scale_rational(&num_rational::BigRational::new(1.into(), 2.into()))
        - &FieldElem::one(field);
    for i in 0..4 {
        for j in 0..4 {
            let c = l.bilinear(&quad[i], &ints[j])?;
            let integral = c.as_rational().map(|r| r.is_integer()) == Some(true);
            if integral {
                if c.cmp_at(&lo, Embedding::First) == Ordering::Less
                    || c.cmp_at(&hi, Embedding::First) == Ordering::Greater
                {
                    out_of_range.push((i, j));
                }
            } else {
                ints_ok = false;
                non_integral.push((i, j));
                // Q(v_i)·Q(w_j) − c² < 0 under the first embedding?
                let prod = &l.quad(&quad[i])? * &l.quad(&ints[j])?;
                let gap = &prod - &(&c * &c);
                if gap.sign_at(Embedding::First) == Ordering::Less {
                    pd_contradictions.push((i, j));
                }
                let abs_c = if c.sign_at(Embedding::First) == Ordering::Less {
                    -&c
                } else {
                    c.clone()
                };
                if abs_c.cmp_at(&half_sqrt_delta_less_one, Embedding::First)
                    != Ordering::Less
                {
                    large_first_embedding.push((i, j));
                }
            }
            cross.set(i, j, c);
        }
    }
    let c_matrix = ints_ok.then(|| {
        IntMatrix::from_fn(4, |i, j| {
            cross
                .at(i, j)
                .as_rational()
                .expect("checked integral")
                .to_integer()
        })
    });
    Ok(CijScanReport {
        cross,
        c_matrix,
        out_of_range,
        non_integral,
        pd_contradictions,
        large_first_embedding,
    })
}

/// The four blocks of the assembled 8×8 Gram matrix
/// `√Δ_d·blockdiag(A, 0) + [[D, C], [Cᵀ, B]]`.
#[derive(Debug, Clone)]
pub struct EightBlock {
    field: QuadField,
    a: IntMatrix,
    b: IntMatrix,
    c: IntMatrix,
    d: FieldMatrix,
}

impl EightBlock {
    /// Validates the block invariants: `A`, `B` symmetric positive definite
    /// integer matrices with entries bounded by 15; `C` integral with
    /// entries in `[−4, 3]`; `D` symmetric with first-embedding magnitude
    /// at most 15.
    pub fn new(
        field: QuadField,
        a: IntMatrix,
        b: IntMatrix,
        c: IntMatrix,
        d: FieldMatrix,
    ) -> Result<EightBlock> {
        for m in [&a, &b, &c] {
            if m.dim() != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    got: m.dim(),
                });
            }
        }
        if d.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: d.dim(),
            });
        }
        let fifteen = BigInt::from(15);
        for (which, m) in [(0, &a), (1, &b)] {
            if !m.is_symmetric() {
                return Err(Error::NotSymmetric {
                    row: which,
                    col: which,
                });
            }
            for i in 0..4 {
                for j in 0..4 {
                    if m.at(i, j).abs() > fifteen {
                        return Err(Error::EntryExceedsBound { row: i, col: j });
                    }
                }
            }
            if !m.to_field(field).is_positive_definite()? {
                return Err(Error::NotPositiveDefinite { pivot_index: which });
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let v = c.at(i, j);
                if v < &BigInt::from(-4) || v > &BigInt::from(3) {
                    return Err(Error::EntryExceedsBound { row: i, col: j });
                }
            }
        }
        if !d.is_symmetric() {
            return Err(Error::NotSymmetric { row: 0, col: 1 });
        }
        let hi = FieldElem::from_int(field, 15);
        let lo = -&hi;
        for i in 0..4 {
            for j in 0..4 {
                let e = d.at(i, j);
                if e.cmp_at(&hi, Embedding::First) == Ordering::Greater
                    || e.cmp_at(&lo, Embedding::First) == Ordering::Less
                {
                    return Err(Error::EntryExceedsBound { row: i, col: j });
                }
            }
        }
        Ok(EightBlock { field, a, b, c, d })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn block_a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn block_b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn block_c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn block_d(&self) -> &FieldMatrix {
        &self.d
    }

    /// The assembled symmetric 8×8 matrix over the field.
    pub fn assembled(&self) -> FieldMatrix {
        let sqrt_delta = self.field.sqrt_delta();
        FieldMatrix::from_fn(self.field, 8, |i, j| match (i < 4, j < 4) {
            (true, true) => {
                let coeff = FieldElem::new(
                    self.field,
                    self.a.at(i, j).clone(),
                    BigInt::zero(),
                    BigInt::from(1),
                );
                &(&coeff * &sqrt_delta) + self.d.at(i, j)
            }
            (true, false) => FieldElem::new(
                self.field,
                self.c.at(i, j - 4).clone(),
                BigInt::zero(),
                BigInt::from(1),
            ),
            (false, true) => FieldElem::new(
                self.field,
                self.c.at(j, i - 4).clone(),
                BigInt::zero(),
                BigInt::from(1),
            ),
            (false, false) => FieldElem::new(
                self.field,
                self.b.at(i - 4, j - 4).clone(),
                BigInt::zero(),
                BigInt::from(1),
            ),
        })
    }
}

/// Rank verdict from an exact determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Determinant strictly positive under the first embedding: the eight
    /// vectors are linearly independent.
    Independent,
    /// Nonpositive determinant: no rank conclusion.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Independent => write!(f, "independent"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Exact determinant of an assembled 8×8 Gram matrix together with the
/// perturbation bounds around it.
#[derive(Debug, Clone)]
pub struct RankCertificate {
    pub determinant: FieldElem,
    pub verdict: Verdict,
    /// Refined lower / upper bound polynomials evaluated at `x = √Δ_d`
    /// (`k = s = 4`, `N = 15`); present when the block invariants held.
    pub lower_bound: Option<FieldElem>,
    pub upper_bound: Option<FieldElem>,
    /// Whether `lower ≤ det ≤ upper` under the first embedding.
    pub bounds_hold: Option<bool>,
}

impl RankCertificate {
    fn from_determinant(det: FieldElem) -> RankCertificate {
        let verdict = if det.sign_at(Embedding::First) == Ordering::Greater {
            Verdict::Independent
        } else {
            Verdict::Inconclusive
        };
        RankCertificate {
            determinant: det,
            verdict,
            lower_bound: None,
            upper_bound: None,
            bounds_hold: None,
        }
    }
}

/// Computes the exact determinant of the assembled matrix and the bound
/// chain with `k = s = 4`, `N = 15` at `x = √Δ_d`; the verdict is
/// `Independent` exactly when the determinant is positive under the first
/// embedding.
pub fn assemble_and_certify(blk: &EightBlock) -> RankCertificate {
    let field = blk.field();
    let m = blk.assembled();
    let det = m.det();

    let lead = blk.block_a().det() * blk.block_b().det();
    let x = field.sqrt_delta();
    // lead·x⁴ ± Σ_{l<4} c_l·x^l
    let mut xpow = FieldElem::one(field);
    let mut sum = FieldElem::zero(field);
    for l in 0..4u32 {
        let c =
            perturbation_coefficient(4, 4, l, &BigInt::from(15)).expect("fixed in-domain parameters");
        let c = FieldElem::new(field, c, BigInt::zero(), BigInt::from(1));
        sum = &sum + &(&c * &xpow);
        xpow = &xpow * &x;
    }
    let lead = FieldElem::new(field, lead, BigInt::zero(), BigInt::from(1));
    let lead_term = &lead * &xpow;
    let lower = &lead_term - &sum;
    let upper = &lead_term + &sum;
    let bounds_hold = lower.cmp_at(&det, Embedding::First) != Ordering::Greater
        && det.cmp_at(&upper, Embedding::First) != Ordering::Greater;

    let mut cert = RankCertificate::from_determinant(det);
    cert.lower_bound = Some(lower);
    cert.upper_bound = Some(upper);
    cert.bounds_hold = Some(bounds_hold);
    cert
}

/// Pipeline stages of [`certify_no_rank7`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineStage {
    Escalation,
    Extraction,
    Decomposition,
    Selection,
    CijScan,
    Assembly,
}

impl fmt::Display for PipelineStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PipelineStage::Escalation => "escalation",
            PipelineStage::Extraction => "extraction",
            PipelineStage::Decomposition => "decomposition",
            PipelineStage::Selection => "selection",
            PipelineStage::CijScan => "cij-scan",
            PipelineStage::Assembly => "assembly",
        };
        write!(f, "{name}")
    }
}

/// Outcome of one stage.
#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: PipelineStage,
    pub passed: bool,
    pub detail: String,
}

/// Full report of the certificate pipeline on one lattice.
#[derive(Debug, Clone)]
pub struct CertifyReport {
    pub d: i64,
    pub discriminant: i64,
    /// The discriminant does not exceed the square of the rank-obstruction
    /// threshold; conclusions are then labeled, never asserted.
    pub below_threshold: bool,
    /// Whether `Δ_d` exceeds `(4·4!·4!·15⁴)²`, the bound under which the
    /// canonical decomposition obeys its entry bounds.
    pub decomposition_hypothesis_met: bool,
    pub stages: Vec<StageReport>,
    pub escalation: Option<EscalationResult>,
    pub extraction: Option<KVectorExtraction>,
    pub decomposition: Option<GramDecomposition>,
    pub quadruple: Option<[usize; 4]>,
    pub cij: Option<CijScanReport>,
    pub blocks: Option<EightBlock>,
    pub certificate: Option<RankCertificate>,
}

impl CertifyReport {
    /// The first failed stage, if any.
    pub fn failed_stage(&self) -> Option<PipelineStage> {
        self.stages.iter().find(|s| !s.passed).map(|s| s.stage)
    }

    /// All stages ran and the determinant came out positive.
    pub fn certified_independent(&self) -> bool {
        self.failed_stage().is_none()
            && self
                .certificate
                .as_ref()
                .is_some_and(|c| c.verdict == Verdict::Independent)
    }
}

/// The square of the classic rank-obstruction threshold.
fn threshold_squared() -> BigInt {
    let t: BigInt = "29524500000005".parse().unwrap();
    &t * &t
}

/// `(4·4!·4!·15⁴)²`, the canonical-decomposition hypothesis bound.
fn decomposition_hypothesis_squared() -> BigInt {
    let t = BigInt::from(4) * BigInt::from(24) * BigInt::from(24) * BigInt::from(15).pow(4);
    &t * &t
}

/// Runs the whole pipeline on `l` and reports every stage.
///
/// On desk-scale fields the discriminant sits far below the obstruction
/// threshold, so the verdict is labeled `below_threshold` and hypothesis
/// failures are expected outcomes rather than errors; above the threshold a
/// clean run certifies that the eight constructed vectors are linearly
/// independent, hence `rank(l) ≥ 8`.
pub fn certify_no_rank7(l: &Lattice) -> CertifyReport {
    let field = l.field();
    let delta = BigInt::from(field.discriminant());
    let mut report = CertifyReport {
        d: field.d(),
        discriminant: field.discriminant(),
        below_threshold: delta <= threshold_squared(),
        decomposition_hypothesis_met: delta > decomposition_hypothesis_squared(),
        stages: Vec::new(),
        escalation: None,
        extraction: None,
        decomposition: None,
        quadruple: None,
        cij: None,
        blocks: None,
        certificate: None,
    };
    let strict = !report.below_threshold;

    // 1. escalation: integer norms 1..15 and an independent quadruple
    let esc = match escalate_independent_quadruple(l) {
        Ok(esc) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Escalation,
                passed: true,
                detail: format!("independent quadruple at indices {:?}", esc.indices),
            });
            esc
        }
        Err(e) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Escalation,
                passed: false,
                detail: e.to_string(),
            });
            return report;
        }
    };
    report.escalation = Some(esc);

    // 2. extraction of the canonical k-vectors
    let extraction = match extract_kvectors(l) {
        Ok(x) => x,
        Err(e) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Extraction,
                passed: false,
                detail: e.to_string(),
            });
            return report;
        }
    };
    let complete = extraction.complete();
    report.stages.push(StageReport {
        stage: PipelineStage::Extraction,
        passed: complete,
        detail: if complete {
            "all fifteen canonical targets represented".into()
        } else {
            format!("unrepresented targets at k = {:?}", extraction.missing)
        },
    });
    report.extraction = Some(extraction);
    if !complete {
        return report;
    }

    // 3. decomposition of the 15×15 Gram matrix
    let kvecs: Vec<LatticeVector> = report
        .extraction
        .as_ref()
        .unwrap()
        .vectors
        .values()
        .cloned()
        .collect();
    let gram15 = match l.gram_of(&kvecs) {
        Ok(g) => g,
        Err(e) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Decomposition,
                passed: false,
                detail: e.to_string(),
            });
            return report;
        }
    };
    let dec = decompose_gram(&gram15);
    let mut notes = Vec::new();
    let mut dec_ok = true;
    if dec.reconstruct() != gram15 {
        dec_ok = false;
        notes.push("reconstruction mismatch".to_string());
    }
    let diag_canonical =
        (0..15).all(|i| dec.integer_part().at(i, i) == &BigInt::from(i as u64 + 1));
    if !diag_canonical {
        notes.push("integer-part diagonal differs from 1..15".to_string());
    }
    let small = dec.remainder_small();
    let within = dec.integer_part_within_sqrt_bound();
    if !small {
        notes.push("some remainder is not below 1 in magnitude".to_string());
    }
    if !within {
        notes.push("some integer coefficient exceeds sqrt(i*j)".to_string());
    }
    if report.decomposition_hypothesis_met && (!small || !within || !diag_canonical) {
        dec_ok = false;
    }
    report.stages.push(StageReport {
        stage: PipelineStage::Decomposition,
        passed: dec_ok,
        detail: if notes.is_empty() {
            "exact decomposition with canonical bounds".into()
        } else {
            notes.join("; ")
        },
    });
    report.decomposition = Some(dec);
    if !dec_ok {
        return report;
    }

    // 4. quadruple selection on the integer part
    let quad_idx = match select_quadruple(report.decomposition.as_ref().unwrap()) {
        Ok(q) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Selection,
                passed: true,
                detail: format!("selected k = {:?}", q.map(|i| i + 1)),
            });
            q
        }
        Err(e) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Selection,
                passed: false,
                detail: e.to_string(),
            });
            return report;
        }
    };
    report.quadruple = Some(quad_idx);
    let quad_vecs: Vec<LatticeVector> = quad_idx.iter().map(|&i| kvecs[i].clone()).collect();
    let esc = report.escalation.as_ref().unwrap();
    let int_vecs: Vec<LatticeVector> = esc
        .indices
        .iter()
        .map(|&i| esc.vectors[i].clone())
        .collect();

    // 5. cross inner products
    let cij = match cij_scan(l, &quad_vecs, &int_vecs) {
        Ok(c) => c,
        Err(e) => {
            report.stages.push(StageReport {
                stage: PipelineStage::CijScan,
                passed: false,
                detail: e.to_string(),
            });
            return report;
        }
    };
    let cij_pass = cij.clean() || !strict;
    report.stages.push(StageReport {
        stage: PipelineStage::CijScan,
        passed: cij_pass,
        detail: if cij.clean() {
            "all cross products are rational integers in [-4, 3]".into()
        } else {
            format!(
                "non-integral at {:?}, out of range at {:?} (observed, not asserted, below threshold)",
                cij.non_integral, cij.out_of_range
            )
        },
    });
    let cij_clean = cij.clean();
    report.cij = Some(cij);
    if !cij_pass {
        return report;
    }

    // 6. assembly and certification
    let eight: Vec<LatticeVector> = quad_vecs.iter().chain(int_vecs.iter()).cloned().collect();
    let true_gram = match l.gram_of(&eight) {
        Ok(g) => g,
        Err(e) => {
            report.stages.push(StageReport {
                stage: PipelineStage::Assembly,
                passed: false,
                detail: e.to_string(),
            });
            return report;
        }
    };
    let det = true_gram.det();
    let dec = report.decomposition.as_ref().unwrap();
    let assembly_detail;
    let mut assembly_ok = true;
    if cij_clean {
        let a4 = dec.integer_part().principal_minor(&quad_idx);
        let d4 = FieldMatrix::from_fn(field, 4, |i, j| {
            dec.remainder().at(quad_idx[i], quad_idx[j]).clone()
        });
        let c4 = report.cij.as_ref().unwrap().c_matrix.clone().unwrap();
        match EightBlock::new(field, a4, esc.gram4.clone(), c4, d4) {
            Ok(blk) => {
                let matches = blk.assembled() == true_gram;
                let cert = assemble_and_certify(&blk);
                assembly_detail = format!(
                    "det = {}; block assembly {} the direct Gram matrix; bounds hold: {:?}",
                    cert.determinant,
                    if matches { "matches" } else { "DIFFERS FROM" },
                    cert.bounds_hold
                );
                if !matches {
                    assembly_ok = false;
                }
                report.blocks = Some(blk);
                report.certificate = Some(cert);
            }
            Err(e) => {
                if strict {
                    report.stages.push(StageReport {
                        stage: PipelineStage::Assembly,
                        passed: false,
                        detail: format!("block invariants: {e}"),
                    });
                    return report;
                }
                assembly_detail =
                    format!("block invariants not met below threshold ({e}); determinant only");
                report.certificate = Some(RankCertificate::from_determinant(det.clone()));
            }
        }
    } else {
        assembly_detail = "cross block not integral; determinant only".to_string();
        report.certificate = Some(RankCertificate::from_determinant(det.clone()));
    }
    report.stages.push(StageReport {
        stage: PipelineStage::Assembly,
        passed: assembly_ok,
        detail: assembly_detail,
    });
    report
}
