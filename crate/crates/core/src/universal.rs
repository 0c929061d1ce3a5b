//! Universality machinery: the finite criterion sets over `Z`, truncated
//! universality over `O_F`, escalation to four linearly independent vectors,
//! and a small-candidate search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, RatCholesky, RatMatrix};
use crate::lattice::{Lattice, LatticeVector};
use crate::parallel::par_map;
use crate::qfield::{AlgInt, QuadField};
use crate::represent::{represents, walk_level_set, Witness};

/// Which finite criterion theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionKind {
    /// Classic lattices: representing 1..=15 suffices.
    Classic15,
    /// Non-classic lattices: representing 1..=290 suffices.
    Nonclassic290,
}

/// A finite set of positive integer targets whose representability decides
/// universality over `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionSet {
    kind: CriterionKind,
    targets: Vec<u32>,
}

impl CriterionSet {
    pub fn classic15() -> Self {
        CriterionSet {
            kind: CriterionKind::Classic15,
            targets: (1..=15).collect(),
        }
    }

    pub fn nonclassic290() -> Self {
        CriterionSet {
            kind: CriterionKind::Nonclassic290,
            targets: (1..=290).collect(),
        }
    }

    pub fn kind(&self) -> CriterionKind {
        self.kind
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }
}

/// Does the `Z`-lattice with Gram matrix `g` represent `n`?
///
/// Plain integer-form enumeration on the level set `xᵀgx = n`.
pub fn z_represents(g: &RatMatrix, n: u32) -> Result<bool> {
    let chol = RatCholesky::decompose(g)?;
    let budget = BigRational::from(BigInt::from(n));
    let mut found = false;
    walk_level_set(&chol, &budget, None, &mut |_y| {
        found = true;
        true
    });
    Ok(found)
}

/// First element of the criterion set not represented by `g`, if any.
///
/// Validates the integrality regime of the criterion: integral entries for
/// the classic criterion, integral diagonal with half-integral off-diagonal
/// entries for the non-classic one.
pub fn z_first_failure(g: &RatMatrix, crit: &CriterionSet) -> Result<Option<u32>> {
    let n = g.dim();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..n {
        for j in 0..n {
            let e = g.at(i, j);
            let ok = match crit.kind {
                CriterionKind::Classic15 => e.is_integer(),
                CriterionKind::Nonclassic290 => {
                    if i == j {
                        e.is_integer()
                    } else {
                        (e / &half).is_integer()
                    }
                }
            };
            if !ok {
                return Err(Error::ClassicalityViolation { row: i, col: j });
            }
        }
    }
    let flags = par_map(crit.targets(), |&t| z_represents(g, t));
    for (i, f) in flags.into_iter().enumerate() {
        if !f? {
            return Ok(Some(crit.targets()[i]));
        }
    }
    Ok(None)
}

/// True iff the `Z`-lattice with Gram `g` represents every target of the
/// criterion set.
pub fn z_universal(g: &RatMatrix, crit: &CriterionSet) -> Result<bool> {
    Ok(z_first_failure(g, crit)?.is_none())
}

/// Result of checking every totally positive integer up to a trace bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityReport {
    pub targets_checked: usize,
    /// Least unrepresented element in `(trace, b)` order, if any.
    pub first_failure: Option<AlgInt>,
}

impl UniversalityReport {
    pub fn pass(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Verifies that `l` represents every totally positive integer of trace at
/// most `tr_max`. A pass is a truncated verification, not a universality
/// proof; a failure is definitive.
pub fn universal_up_to(l: &Lattice, tr_max: i64) -> Result<UniversalityReport> {
    let targets = l.field().totally_positive_up_to(tr_max);
    let found = par_map(&targets, |t| represents(l, t).map(|w| w.is_some()));
    let mut first_failure = None;
    for (i, f) in found.into_iter().enumerate() {
        if !f? {
            first_failure = Some(targets[i].clone());
            break;
        }
    }
    Ok(UniversalityReport {
        targets_checked: targets.len(),
        first_failure,
    })
}

/// Four linearly independent vectors culled from witnesses of the norms
/// `1..=15`, together with their integer Gram matrix.
#[derive(Debug, Clone)]
pub struct EscalationResult {
    /// Witness of norm `k` at position `k - 1`.
    pub vectors: Vec<LatticeVector>,
    /// The 15×15 integer Gram matrix of the witnesses.
    pub gram15: IntMatrix,
    /// Zero-based indices (into `vectors`) of the chosen quadruple.
    pub indices: [usize; 4],
    /// 4×4 Gram of the quadruple; positive determinant.
    pub gram4: IntMatrix,
}

/// Picks a witness `v_n` with `Q(v_n) = n` for each `n = 1..=15`, checks the
/// sublattice they span is integral, and extracts four linearly independent
/// vectors by greedy rank extension (falling back to exhaustive 4-subset
/// search).
///
/// When the discriminant exceeds `4·15²` integrality is guaranteed; it is
/// checked unconditionally and a failure is reported as an error.
pub fn escalate_independent_quadruple(l: &Lattice) -> Result<EscalationResult> {
    let field = l.field();
    let mut vectors = Vec::with_capacity(15);
    for n in 1..=15u32 {
        match represents(l, &field.from_int(n as i64))? {
            Some(Witness { vector }) => vectors.push(vector),
            None => return Err(Error::MissingNorm(n)),
        }
    }
    let span = l.integral_span(&vectors)?;
    if let Some((i, j, _)) = span.counterexample {
        return Err(Error::IntegralityFailure { i, j });
    }
    let gram_f = l.gram_of(&vectors)?;
    let gram15 = IntMatrix::from_fn(15, |i, j| {
        gram_f
            .at(i, j)
            .as_rational()
            .expect("integral span checked")
            .to_integer()
    });

    let indices = independent_quadruple(&gram15)?;
    let gram4 = gram15.principal_minor(&indices);
    Ok(EscalationResult {
        vectors,
        gram15,
        indices: [indices[0], indices[1], indices[2], indices[3]],
        gram4,
    })
}

/// Greedy rank extension on the PSD integer Gram matrix: a subset is
/// independent iff its principal minor has positive determinant. Falls back
/// to exhaustive search over 4-subsets.
fn independent_quadruple(gram: &IntMatrix) -> Result<Vec<usize>> {
    let n = gram.dim();
    let mut chosen: Vec<usize> = Vec::new();
    for idx in 0..n {
        let mut cand = chosen.clone();
        cand.push(idx);
        if gram.principal_minor(&cand).det().is_positive() {
            chosen = cand;
            if chosen.len() == 4 {
                return Ok(chosen);
            }
        }
    }
    // exhaustive fallback
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for e in (c + 1)..n {
                    let cand = vec![a, b, c, e];
                    if gram.principal_minor(&cand).det().is_positive() {
                        return Ok(cand);
                    }
                }
            }
        }
    }
    Err(Error::NoIndependentQuadruple)
}

/// All diagonal classic lattices `⟨a_1, …, a_rank⟩` with totally positive
/// `a_i` of trace at most `coeff_bound` (taken in non-decreasing enumeration
/// order) that pass `universal_up_to(·, tr_max)`.
pub fn search_candidates(
    field: QuadField,
    rank: usize,
    coeff_bound: i64,
    tr_max: i64,
) -> Result<Vec<Lattice>> {
    if rank == 0 || rank > 4 {
        return Err(Error::BadParameter("rank must be between 1 and 4".into()));
    }
    if coeff_bound > 10 {
        return Err(Error::BadParameter(
            "coefficient trace bound must be at most 10".into(),
        ));
    }
    let pool = field.totally_positive_up_to(coeff_bound);
    let mut out = Vec::new();
    let mut stack: Vec<usize> = vec![0; rank];
    // non-decreasing index tuples over the pool
    #[allow(clippy::too_many_arguments)]
    fn rec(
        pool: &[AlgInt],
        field: QuadField,
        rank: usize,
        tr_max: i64,
        start: usize,
        stack: &mut Vec<usize>,
        depth: usize,
        out: &mut Vec<Lattice>,
    ) -> Result<()> {
        if depth == rank {
            let diag: Vec<AlgInt> = stack.iter().map(|&i| pool[i].clone()).collect();
            let l = Lattice::diagonal(field, &diag, true)?;
            if universal_up_to(&l, tr_max)?.pass() {
                out.push(l);
            }
            return Ok(());
        }
        for i in start..pool.len() {
            stack[depth] = i;
            rec(pool, field, rank, tr_max, i, stack, depth + 1, out)?;
        }
        Ok(())
    }
    rec(&pool, field, rank, tr_max, 0, &mut stack, 0, &mut out)?;
    Ok(out)
}
