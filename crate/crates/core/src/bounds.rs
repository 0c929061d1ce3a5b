//! The determinant perturbation bound chain, exhaustive trace lower bound
//! checks, and the two explicit discriminant thresholds.
//!
//! For `A ∈ M_k`, `B ∈ M_{k+s}` with all entries bounded by `N > 1` in
//! absolute value and `x > 0`, the determinant of `blockdiag(A, 0)·x + B`
//! is a degree-`k` polynomial in `x` whose lower coefficients admit the
//! exact combinatorial bound computed by [`perturbation_coefficient`]; chaining
//! those bounds sandwiches the determinant between four explicit
//! polynomials. The rank-certificate threshold is exactly the point where
//! the lower sandwich polynomial with leading coefficient 1 turns positive.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::RatMatrix;
use crate::qfield::QuadField;
use crate::rng::SplitMix64;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// The exact bound on the coefficient of `x^l` in
/// `det(blockdiag(A, 0)·x + B)`:
/// `C(k, l) · k!·(k+s−l)!/(k−l)! · N^{k+s}`.
pub fn perturbation_coefficient(k: u32, s: u32, l: u32, n_bound: &BigInt) -> Result<BigInt> {
    if l > k {
        return Err(Error::BadParameter(format!("l = {l} exceeds k = {k}")));
    }
    if n_bound <= &BigInt::one() {
        return Err(Error::BadParameter("N must exceed 1".into()));
    }
    let perms_i = binomial(k, l);
    let perms_j = factorial(k) * factorial(k + s - l) / factorial(k - l);
    Ok(perms_i * perms_j * n_bound.pow(k + s))
}

/// The evaluated five-term inequality chain around one exact determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundChain {
    pub k: usize,
    pub s: usize,
    pub n_bound: BigInt,
    pub x: BigRational,
    pub det_value: BigRational,
    pub outer_lower: BigRational,
    pub inner_lower: BigRational,
    pub inner_upper: BigRational,
    pub outer_upper: BigRational,
}

impl BoundChain {
    /// Whether the full chain holds.
    ///
    /// The two inner comparisons are always `≤`. The outer comparisons are
    /// strict for `k ≥ 2`; at `k = 1` the crude count equals the refined one
    /// term by term, so the outer and inner polynomials coincide and the
    /// comparison degenerates to equality.
    pub fn holds(&self) -> bool {
        let inner_ok = self.inner_lower <= self.det_value && self.det_value <= self.inner_upper;
        let outer_ok = if self.k >= 2 {
            self.outer_lower < self.inner_lower && self.inner_upper < self.outer_upper
        } else {
            self.outer_lower <= self.inner_lower && self.inner_upper <= self.outer_upper
        };
        inner_ok && outer_ok
    }
}

/// Evaluates `det(blockdiag(A, 0)·x + B)` exactly along with all four bound
/// polynomials of the chain.
///
/// `a` is `k×k`, `b` is `(k+s)×(k+s)` with `k ≥ 1`, every entry of both must
/// lie in `[−N, N]`, `N > 1`, `x > 0`.
pub fn bound_chain(
    a: &RatMatrix,
    b: &RatMatrix,
    x: &BigRational,
    n_bound: &BigInt,
) -> Result<BoundChain> {
    let k = a.dim();
    let ks = b.dim();
    if k == 0 || ks < k {
        return Err(Error::BadParameter(
            "need k >= 1 and B at least k x k".into(),
        ));
    }
    if n_bound <= &BigInt::one() {
        return Err(Error::BadParameter("N must exceed 1".into()));
    }
    if !x.is_positive() {
        return Err(Error::BadParameter("x must be positive".into()));
    }
    let s = ks - k;
    let nb = BigRational::from(n_bound.clone());
    for (m, rows, cols) in [(a, k, k), (b, ks, ks)] {
        for i in 0..rows {
            for j in 0..cols {
                if m.at(i, j).abs() > nb {
                    return Err(Error::EntryExceedsBound { row: i, col: j });
                }
            }
        }
    }

    // det(B_4), the bottom-right s×s block of B; 1 when s = 0.
    let det_b4 = if s == 0 {
        BigRational::one()
    } else {
        RatMatrix::from_fn(s, |i, j| b.at(k + i, k + j).clone()).det()
    };
    let lead = a.det() * det_b4;

    let shifted = RatMatrix::from_fn(ks, |i, j| {
        if i < k && j < k {
            a.at(i, j) * x + b.at(i, j)
        } else {
            b.at(i, j).clone()
        }
    });
    let det_value = shifted.det();

    let mut xpow = BigRational::one();
    let mut inner_sum = BigRational::zero();
    let mut geometric = BigRational::zero();
    for l in 0..k {
        inner_sum +=
            BigRational::from(perturbation_coefficient(k as u32, s as u32, l as u32, n_bound)?) * &xpow;
        geometric += &xpow;
        xpow *= x;
    }
    // xpow is now x^k
    let lead_term = &lead * &xpow;
    let crude = BigRational::from(
        factorial(k as u32) * factorial((k + s) as u32) * n_bound.pow((k + s) as u32),
    ) * geometric;

    Ok(BoundChain {
        k,
        s,
        n_bound: n_bound.clone(),
        x: x.clone(),
        det_value,
        outer_lower: &lead_term - &crude,
        inner_lower: &lead_term - &inner_sum,
        inner_upper: &lead_term + &inner_sum,
        outer_upper: &lead_term + &crude,
    })
}

/// Outcome of a seeded bound-chain fuzzing run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub iterations: u64,
    pub seed: u64,
    /// Iteration indices at which the chain failed (expected empty).
    pub violations: Vec<u64>,
}

impl FuzzReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs `iters` seeded random chain instances: `k ≤ 4`, `s ≤ 4`, integer
/// entries in `[−N, N]` with `N ∈ 2..=15`, rational `x ∈ (0, 10¹⁶]`.
/// Deterministic for a fixed seed.
pub fn run_bound_chain_fuzz(iters: u64, seed: u64) -> FuzzReport {
    let mut rng = SplitMix64::new(seed);
    let mut violations = Vec::new();
    for it in 0..iters {
        let k = 1 + rng.below(4) as usize;
        let s = rng.below(5) as usize;
        let n = 2 + rng.below(14) as i64;
        let a = random_entries(&mut rng, k, n);
        let b = random_entries(&mut rng, k + s, n);
        let x = BigRational::new(
            BigInt::from(1 + rng.below(10_000_000_000_000_000)),
            BigInt::from(1 + rng.below(1000)),
        );
        let chain =
            bound_chain(&a, &b, &x, &BigInt::from(n)).expect("generated instance is in-domain");
        if !chain.holds() {
            violations.push(it);
        }
    }
    FuzzReport {
        iterations: iters,
        seed,
        violations,
    }
}

fn random_entries(rng: &mut SplitMix64, dim: usize, n: i64) -> RatMatrix {
    RatMatrix::from_fn(dim, |_, _| {
        BigRational::from(BigInt::from(rng.range_i64(-n, n)))
    })
}

/// One violation found by [`trace_bound_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceBoundViolation {
    pub a: i64,
    pub b: i64,
    /// Which inequality failed: trace of a totally positive element, or
    /// trace of a square.
    pub trace_of_square: bool,
}

/// Exhaustive scan report for the trace lower bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceBoundReport {
    pub field_d: i64,
    pub box_bound: i64,
    pub violations: Vec<TraceBoundViolation>,
    /// Minimum trace over totally positive `a + bω` with `b ≠ 0` in the box.
    pub min_trace: Option<BigInt>,
    /// Minimum `tr(β²)` over `β = a + bω` with `b ≠ 0` in the box.
    pub min_trace_of_square: Option<BigInt>,
}

impl TraceBoundReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Confirms exhaustively that every totally positive `α = a + bω ∉ Z` with
/// `|a|, |b| ≤ box` satisfies `tr(α)² ≥ Δ`, and every `β ∉ Z` in the box
/// satisfies `2·tr(β²) ≥ Δ`. All comparisons exact.
pub fn trace_bound_check(field: QuadField, box_bound: i64) -> TraceBoundReport {
    let delta = BigInt::from(field.discriminant());
    let mut violations = Vec::new();
    let mut min_trace: Option<BigInt> = None;
    let mut min_sq: Option<BigInt> = None;
    for a in -box_bound..=box_bound {
        for b in -box_bound..=box_bound {
            if b == 0 {
                continue;
            }
            let x = field.int(a, b);
            if x.is_totally_positive() {
                let t = x.trace();
                if &t * &t < delta {
                    violations.push(TraceBoundViolation {
                        a,
                        b,
                        trace_of_square: false,
                    });
                }
                if min_trace.as_ref().is_none_or(|m| &t < m) {
                    min_trace = Some(t);
                }
            }
            let tsq = (&x * &x).trace();
            if 2 * &tsq < delta {
                violations.push(TraceBoundViolation {
                    a,
                    b,
                    trace_of_square: true,
                });
            }
            if min_sq.as_ref().is_none_or(|m| &tsq < m) {
                min_sq = Some(tsq);
            }
        }
    }
    TraceBoundReport {
        field_d: field.d(),
        box_bound,
        violations,
        min_trace,
        min_trace_of_square: min_sq,
    }
}

/// The quartic positivity threshold for a criterion bound `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub n: u64,
    /// Coefficients `c_0..c_3` of `x⁴ − c_3x³ − c_2x² − c_1x − c_0`.
    pub coefficients: [BigInt; 4],
    /// `c_3 + 5`, the conservative bound from which positivity is
    /// certified term by term.
    pub certified_threshold: BigInt,
    /// The true least integer from which the quartic stays positive.
    pub minimal_threshold: BigInt,
    /// Value of the quartic at `certified_threshold` (positive).
    pub quartic_at_threshold: BigInt,
}

/// Computes the quartic `x⁴ − Σ c_l·x^l` with
/// `c_l = perturbation_coefficient(4, 4, l, N)` and certifies exactly that it is
/// positive for every real `x ≥ c_3 + 5`:
/// for `x ≥ T` we have `x⁴ − c_3x³ ≥ 5x³` and
/// `5x³ ≥ (5T − c_2 − c_1/T − c_0/T²)x² > 0` once `5T³ > c_2T² + c_1T + c_0`
/// holds, which is verified as a single exact integer inequality. The least
/// integer threshold is then located by binary search.
pub fn threshold_polynomial(n: u64) -> Result<ThresholdReport> {
    if n <= 1 {
        return Err(Error::BadParameter(
            "criterion bound N must exceed 1".into(),
        ));
    }
    let nb = BigInt::from(n);
    let c: Vec<BigInt> = (0..4)
        .map(|l| perturbation_coefficient(4, 4, l, &nb))
        .collect::<Result<_>>()?;
    let quartic = |x: &BigInt| -> BigInt {
        x.pow(4) - &c[3] * x.pow(3) - &c[2] * x.pow(2) - &c[1] * x - &c[0]
    };
    let certified = &c[3] + BigInt::from(5);

    // Exact certificate that the quartic is positive on [certified, ∞).
    let dominance = BigInt::from(5) * certified.pow(3) > &c[2] * certified.pow(2) + &c[1] * &certified + &c[0];
    let at_certified = quartic(&certified);
    if !dominance || !at_certified.is_positive() {
        return Err(Error::BadParameter(format!(
            "positivity certificate failed for N = {n}"
        )));
    }
    debug_assert!(!quartic(&c[3]).is_positive());

    // The quartic has a single positive root, so positivity at an integer is
    // monotone from the minimal threshold on.
    let mut lo = BigInt::one();
    let mut hi = certified.clone();
    while lo < hi {
        let mid = (&lo + &hi) / 2;
        if quartic(&mid).is_positive() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    debug_assert!(quartic(&lo).is_positive());
    debug_assert!(!quartic(&(&lo - 1)).is_positive());

    Ok(ThresholdReport {
        n,
        coefficients: [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()],
        certified_threshold: certified,
        minimal_threshold: lo,
        quartic_at_threshold: at_certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        let two = BigInt::from(2);
        // k=4, s=4, l=3: 11520 before the N-power
        assert_eq!(
            perturbation_coefficient(4, 4, 3, &two).unwrap(),
            BigInt::from(11520) * two.pow(8)
        );
        // k=4, s=4, l=0: 8! = 40320
        assert_eq!(
            perturbation_coefficient(4, 4, 0, &two).unwrap(),
            BigInt::from(40320) * two.pow(8)
        );
        // k=s=1, l=1: k!·s!·N² = 4 at N=2
        assert_eq!(perturbation_coefficient(1, 1, 1, &two).unwrap(), BigInt::from(4));
        assert!(perturbation_coefficient(2, 0, 3, &two).is_err());
        assert!(perturbation_coefficient(2, 0, 1, &BigInt::one()).is_err());
    }

    #[test]
    fn coefficient_stays_below_crude_count() {
        for k in 1..=4u32 {
            for s in 0..=4u32 {
                for l in 0..k {
                    for n in [2u32, 7, 15] {
                        let nb = BigInt::from(n);
                        let refined = perturbation_coefficient(k, s, l, &nb).unwrap();
                        let crude = factorial(k) * factorial(k + s) * nb.pow(k + s);
                        assert!(refined <= crude, "k={k} s={s} l={l}");
                        if k >= 2 && l == 0 {
                            assert!(refined < crude);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chain_s_zero_identity_block() {
        // s = 0, B = 0, A = I_k: determinant is x^k
        for k in 1..=4usize {
            let a = RatMatrix::identity(k);
            let b = RatMatrix::from_fn(k, |_, _| BigRational::zero());
            let x = BigRational::from(BigInt::from(10));
            let chain = bound_chain(&a, &b, &x, &BigInt::from(2)).unwrap();
            assert_eq!(
                chain.det_value,
                BigRational::from(BigInt::from(10).pow(k as u32))
            );
            assert!(chain.holds(), "k = {k}: {chain:?}");
        }
    }

    #[test]
    fn chain_hand_expanded_two_by_two() {
        // A = [2], B = [[0,1],[1,1]]: det = 2x·1 − 1 = 19 at x = 10
        let a = RatMatrix::from_int_rows(&[vec![2]]);
        let b = RatMatrix::from_int_rows(&[vec![0, 1], vec![1, 1]]);
        let x = BigRational::from(BigInt::from(10));
        let chain = bound_chain(&a, &b, &x, &BigInt::from(2)).unwrap();
        assert_eq!(chain.det_value, BigRational::from(BigInt::from(19)));
        assert!(chain.holds());
        // k = 1: the outer and inner bounds coincide
        assert_eq!(chain.outer_lower, chain.inner_lower);
    }

    #[test]
    fn chain_rejects_out_of_domain() {
        let a = RatMatrix::from_int_rows(&[vec![5]]);
        let b = RatMatrix::from_int_rows(&[vec![0]]);
        let x = BigRational::from(BigInt::from(10));
        assert_eq!(
            bound_chain(&a, &b, &x, &BigInt::from(2)).unwrap_err(),
            Error::EntryExceedsBound { row: 0, col: 0 }
        );
        let neg = BigRational::from(BigInt::from(-1));
        let a = RatMatrix::from_int_rows(&[vec![1]]);
        assert!(bound_chain(&a, &b, &neg, &BigInt::from(2)).is_err());
    }

    #[test]
    fn fuzz_short_run_is_clean_and_deterministic() {
        let r1 = run_bound_chain_fuzz(60, 0xfeed);
        let r2 = run_bound_chain_fuzz(60, 0xfeed);
        assert!(r1.pass(), "violations at {:?}", r1.violations);
        assert_eq!(r1, r2);
    }

    #[test]
    fn trace_bounds_small_fields() {
        let f2 = QuadField::new(2).unwrap();
        let rep = trace_bound_check(f2, 50);
        assert!(rep.pass());
        assert_eq!(rep.min_trace, Some(BigInt::from(4)));
        assert_eq!(rep.min_trace_of_square, Some(BigInt::from(4)));

        let f5 = QuadField::new(5).unwrap();
        let rep = trace_bound_check(f5, 50);
        assert!(rep.pass());
        assert_eq!(rep.min_trace_of_square, Some(BigInt::from(3))); // tr(ω²) = 3

        let vacuous = trace_bound_check(f5, 0);
        assert!(vacuous.pass());
        assert_eq!(vacuous.min_trace, None);
    }

    #[test]
    fn threshold_fifteen() {
        let rep = threshold_polynomial(15).unwrap();
        assert_eq!(
            rep.certified_threshold,
            "29524500000005".parse::<BigInt>().unwrap()
        );
        assert_eq!(
            rep.coefficients[3],
            BigInt::from(11520) * BigInt::from(15).pow(8)
        );
        assert!(rep.minimal_threshold <= rep.certified_threshold);
        assert!(rep.quartic_at_threshold.is_positive());
    }

    #[test]
    fn threshold_two_ninety() {
        let rep = threshold_polynomial(290).unwrap();
        assert_eq!(
            rep.certified_threshold,
            "576283867731072000000005".parse::<BigInt>().unwrap()
        );
        assert!(rep.minimal_threshold <= rep.certified_threshold);
    }

    #[test]
    fn threshold_rejects_degenerate_bound() {
        assert!(threshold_polynomial(1).is_err());
        assert!(threshold_polynomial(0).is_err());
    }

    #[test]
    fn quartic_negative_at_leading_coefficient() {
        for n in [15u64, 290] {
            let rep = threshold_polynomial(n).unwrap();
            let c3 = &rep.coefficients[3];
            let q = c3.pow(4)
                - &rep.coefficients[3] * c3.pow(3)
                - &rep.coefficients[2] * c3.pow(2)
                - &rep.coefficients[1] * c3
                - &rep.coefficients[0];
            assert!(q.is_negative());
        }
    }
}
