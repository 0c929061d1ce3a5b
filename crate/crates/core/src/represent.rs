//! Deciding whether a lattice represents a totally positive integer, with an
//! explicit witness, by complete enumeration of the trace-form ellipsoid.
//!
//! Any `x` with `Q(x) = t` satisfies `T(coords(x)) = tr(t)` for the rational
//! trace form `T`, so enumerating every integer point of that level set and
//! filtering by the exact condition `Q(x) = t` is a complete decision
//! procedure. All interval endpoints are handled by exact rational
//! comparisons: the admissible range of each coordinate is a contiguous
//! integer interval around the rational center, so it can be recovered by
//! outward scans without ever extracting a square root. Once every
//! ω-coordinate is fixed, the ω-part of `Q(x)` is an affine function of the
//! remaining variables (for rational Gram matrices), and a subtree is cut
//! whenever the target value is unreachable over the real relaxation of the
//! remaining ellipsoid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{RatCholesky, RatMatrix};
use crate::lattice::{Lattice, LatticeVector};
use crate::qfield::{AlgInt, Branch};

/// A vector certifying that a lattice represents a target.
///
/// Witnesses verify exactly on re-evaluation: `Q(vector) = target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub vector: LatticeVector,
}

/// Decides whether `l` represents `t`, returning the first witness in the
/// deterministic search order (ω-parts outermost, every coordinate interval
/// scanned in ascending order) if one exists.
///
/// `t = 0` is represented by the zero vector alone, since `l` is positive
/// definite. Any other target must be totally positive.
pub fn represents(l: &Lattice, t: &AlgInt) -> Result<Option<Witness>> {
    let mut found: Option<LatticeVector> = None;
    stream_representations(l, t, |v| {
        found = Some(v);
        true
    })?;
    Ok(found.map(|vector| Witness { vector }))
}

/// Up to `cap` witnesses in lexicographic order on flattened `(a, b)`
/// coordinates.
pub fn enumerate_representations(l: &Lattice, t: &AlgInt, cap: usize) -> Result<Vec<Witness>> {
    if cap == 0 {
        return Err(Error::BadParameter("cap must be at least 1".into()));
    }
    let mut all: Vec<LatticeVector> = Vec::new();
    stream_representations(l, t, |v| {
        all.push(v);
        false
    })?;
    all.sort_by_key(|v| v.flat_coords());
    all.dedup();
    all.truncate(cap);
    Ok(all.into_iter().map(|vector| Witness { vector }).collect())
}

/// Exhaustive scan over all coordinate vectors with `|a_i|, |b_i| ≤ box`.
///
/// Deliberately naive; this is the independent oracle the enumeration is
/// tested against. Returns the first witness in odometer order.
pub fn naive_represents(l: &Lattice, t: &AlgInt, box_bound: i64) -> Result<Option<Witness>> {
    assert_eq!(t.field(), l.field(), "target from a different field");
    let n = l.rank();
    let target = t.to_elem();
    let mut coords = vec![(-box_bound, -box_bound); n];
    loop {
        let v = LatticeVector::from_pairs(
            l.field(),
            &coords.iter().map(|&(a, b)| (a, b)).collect::<Vec<_>>(),
        );
        if l.quad(&v)? == target {
            return Ok(Some(Witness { vector: v }));
        }
        // odometer increment, least significant at the tail
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if coords[i].1 < box_bound {
                coords[i].1 += 1;
                break;
            }
            if coords[i].0 < box_bound {
                coords[i].0 += 1;
                coords[i].1 = -box_bound;
                break;
            }
            coords[i] = (-box_bound, -box_bound);
        }
    }
}

/// A safe coordinate box for the naive oracle: on the ellipsoid
/// `yᵀTy ≤ c` every coordinate satisfies `y_i² ≤ c·(T⁻¹)_ii`.
pub fn oracle_box(l: &Lattice, t: &AlgInt) -> i64 {
    let tf = l.trace_form();
    let inv = tf.inverse().expect("trace form is positive definite");
    let c = BigRational::from(t.trace());
    if !c.is_positive() {
        return 1;
    }
    let mut best = BigInt::zero();
    for i in 0..tf.dim() {
        let m = floor_sqrt_rational(&(&c * inv.at(i, i)));
        if m > best {
            best = m;
        }
    }
    i64::try_from(&best).expect("oracle box fits in i64").max(1)
}

/// `⌊√(r)⌋` for a nonnegative rational, exactly.
fn floor_sqrt_rational(r: &BigRational) -> BigInt {
    assert!(!r.is_negative());
    r.numer().div_floor(r.denom()).sqrt()
}

/// Streams every vector with `Q(x) = t` to `on_match`, in the deterministic
/// search order. `on_match` returns `true` to stop the search. Complete:
/// every integer point of the trace-form level set `T(y) = tr(t)` is
/// visited, and candidates are accepted by the exact condition `Q(x) = t`.
fn stream_representations(
    l: &Lattice,
    t: &AlgInt,
    mut on_match: impl FnMut(LatticeVector) -> bool,
) -> Result<()> {
    assert_eq!(t.field(), l.field(), "target from a different field");
    let field = l.field();
    let n = l.rank();
    if t.is_zero() {
        on_match(LatticeVector::zero(field, n));
        return Ok(());
    }
    if !t.is_totally_positive() {
        return Err(Error::TargetNotTotallyPositive);
    }

    let tf = l.trace_form();
    let budget = BigRational::from(t.trace());

    // Nesting order: all ω-parts (w) are fixed before any rational part (u),
    // and within each block larger diagonal entries go outermost so the
    // outer loops get the largest pivots.
    let mut uperm: Vec<usize> = (0..n).collect();
    uperm.sort_by(|&a, &b| tf.at(a, a).cmp(tf.at(b, b)));
    let mut wperm: Vec<usize> = (n..2 * n).collect();
    wperm.sort_by(|&a, &b| tf.at(a, a).cmp(tf.at(b, b)));
    let perm: Vec<usize> = uperm.into_iter().chain(wperm).collect();

    let permuted = RatMatrix::from_fn(2 * n, |i, j| tf.at(perm[i], perm[j]).clone());
    let chol = RatCholesky::decompose(&permuted)
        .expect("trace form of a positive definite lattice is positive definite");

    let gram_rational = l.gram().to_rational();
    let w_positions: Vec<usize> = (0..2 * n).filter(|&pos| perm[pos] >= n).collect();

    let prune = gram_rational.as_ref().map(|g| OmegaPrune {
        chol: &chol,
        perm: &perm,
        gram: g,
        rank: n,
        half_branch: field.branch() == Branch::Half,
        target_omega: BigRational::from(t.b().clone()),
    });

    let target = t.to_elem();
    let target_rational = t.is_rational();
    let mut err: Option<Error> = None;
    walk_level_set(&chol, &budget, prune.as_ref(), &mut |y| {
        let all_w_zero = w_positions.iter().all(|&pos| y[pos].is_zero());
        // With a rational Gram matrix and every ω-part zero, Q(x) is the
        // rational number tr(t)/2, which equals a rational target exactly;
        // the expensive re-evaluation is only needed off this fast path.
        let accept_fast = gram_rational.is_some() && all_w_zero;
        if accept_fast && !target_rational {
            return false;
        }
        let mut orig = vec![BigInt::zero(); 2 * n];
        for (pos, &idx) in perm.iter().enumerate() {
            orig[idx] = y[pos].clone();
        }
        let v = LatticeVector::from_trace_coords(field, &orig);
        if accept_fast {
            return on_match(v);
        }
        match l.quad(&v) {
            Ok(q) => q == target && on_match(v),
            Err(e) => {
                err = Some(e);
                true
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Feasibility cut applied once all ω-parts are fixed.
///
/// For a rational Gram matrix `g` the ω-coordinate of `Q(x)` restricted to
/// fixed `w` is the affine function `2⟨g·w, u⟩ + c_w` of the rational parts
/// (`c_w = wᵀ·g·w` on the `d ≡ 1 (mod 4)` branch, `0` otherwise). The
/// subtree below explores exactly `{u : q(u) ≤ rem}` for the residual
/// Cholesky quadratic `q`, so the subtree is infeasible whenever the
/// minimum of `q` over the hyperplane `ω-coordinate = target` exceeds
/// `rem`; that minimum is `(r − ℓ(c))² / ℓᵀM⁻¹ℓ` in closed rational form.
pub(crate) struct OmegaPrune<'a> {
    chol: &'a RatCholesky,
    perm: &'a [usize],
    gram: &'a RatMatrix,
    rank: usize,
    half_branch: bool,
    target_omega: BigRational,
}

impl OmegaPrune<'_> {
    /// Called right after the last ω-level was assigned; `true` means the
    /// subtree cannot contain a candidate.
    fn infeasible(&self, y: &[BigInt], rem: &BigRational) -> bool {
        let n = self.rank;
        // w by original coordinate index
        let mut w = vec![BigRational::zero(); n];
        for pos in n..2 * n {
            w[self.perm[pos] - n] = BigRational::from(y[pos].clone());
        }
        let mut gw = vec![BigRational::zero(); n];
        for (j, wj) in w.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            for (i, acc) in gw.iter_mut().enumerate() {
                *acc += self.gram.at(i, j) * wj;
            }
        }
        let mut c_w = BigRational::zero();
        if self.half_branch {
            for i in 0..n {
                if !w[i].is_zero() {
                    c_w += &w[i] * &gw[i];
                }
            }
        }
        // linear coefficients in permuted u coordinates
        let two = BigRational::from(BigInt::from(2));
        let lambda: Vec<BigRational> = (0..n).map(|pos| &two * &gw[self.perm[pos]]).collect();

        // center of the residual quadratic: U_u·c = −s_w
        let mut s_w = vec![BigRational::zero(); n];
        for (i, acc) in s_w.iter_mut().enumerate() {
            for pos in n..2 * n {
                let u = self.chol.upper(i, pos);
                if !u.is_zero() && !y[pos].is_zero() {
                    *acc += u * BigRational::from(y[pos].clone());
                }
            }
        }
        let mut center = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut v = -s_w[i].clone();
            for j in (i + 1)..n {
                let u = self.chol.upper(i, j);
                if !u.is_zero() && !center[j].is_zero() {
                    v -= u * &center[j];
                }
            }
            center[i] = v;
        }
        // z = U_uᵀ⁻¹·λ and the Rayleigh bound ℓᵀM⁻¹ℓ = Σ z_i²/p_i
        let mut z = vec![BigRational::zero(); n];
        for i in 0..n {
            let mut v = lambda[i].clone();
            for j in 0..i {
                let u = self.chol.upper(j, i);
                if !u.is_zero() && !z[j].is_zero() {
                    v -= u * &z[j];
                }
            }
            z[i] = v;
        }
        let mut spread = BigRational::zero();
        for i in 0..n {
            if !z[i].is_zero() {
                spread += &z[i] * &z[i] / &self.chol.pivots()[i];
            }
        }
        let mut at_center = BigRational::zero();
        for i in 0..n {
            if !lambda[i].is_zero() {
                at_center += &lambda[i] * &center[i];
            }
        }
        let gap = &(&self.target_omega - &c_w) - &at_center;
        &gap * &gap > rem * &spread
    }
}

/// Visits every integer point of `{y : yᵀTy = budget}` for the decomposed
/// form, calling `visit` with the permuted assignment. `visit` returns
/// `true` to stop early. Returns whether the walk was stopped.
pub(crate) fn walk_level_set(
    chol: &RatCholesky,
    budget: &BigRational,
    prune: Option<&OmegaPrune<'_>>,
    visit: &mut dyn FnMut(&[BigInt]) -> bool,
) -> bool {
    let n = chol.dim();
    if budget.is_negative() {
        return false;
    }
    if n == 0 {
        return if budget.is_zero() { visit(&[]) } else { false };
    }
    let mut y = vec![BigInt::zero(); n];
    descend(chol, n - 1, budget, prune, &mut y, visit)
}

fn descend(
    chol: &RatCholesky,
    level: usize,
    rem: &BigRational,
    prune: Option<&OmegaPrune<'_>>,
    y: &mut [BigInt],
    visit: &mut dyn FnMut(&[BigInt]) -> bool,
) -> bool {
    let n = chol.dim();
    // offset s = Σ_{j>level} U[level][j]·y_j
    let mut s = BigRational::zero();
    for j in (level + 1)..n {
        let u = chol.upper(level, j);
        if !u.is_zero() && !y[j].is_zero() {
            s += u * BigRational::from(y[j].clone());
        }
    }
    let pivot = &chol.pivots()[level];
    let one = BigRational::one();

    // The admissible integers form a contiguous interval around −s; the
    // nearest integer is admissible iff the interval is nonempty. The value
    // pivot·(m + s)² is stepped incrementally — moving m by ±1 changes it
    // by pivot·(±2(m + s) + 1) — and candidates are visited center-out
    // (…, c, c+1, c−1, c+2, …), so small coordinates come first.
    let center = (-&s).round().to_integer();
    let v0 = BigRational::from(center.clone()) + &s;
    let val0 = pivot * &v0 * &v0;
    if &val0 > rem {
        return false;
    }

    let mut handle = |m: &BigInt, val: &BigRational| -> bool {
        let rem2 = rem - val;
        y[level] = m.clone();
        if level == 0 {
            rem2.is_zero() && visit(y)
        } else {
            let cut = match prune {
                Some(p) if p.rank == level => p.infeasible(y, &rem2),
                _ => false,
            };
            !cut && descend(chol, level - 1, &rem2, prune, y, visit)
        }
    };

    if handle(&center, &val0) {
        return true;
    }
    let mut up = Some((center.clone() + 1, v0.clone(), {
        &val0 + pivot * &(&(&v0 + &v0) + &one)
    }));
    let mut down = Some((center - 1, v0.clone(), {
        &val0 + pivot * &(&one - &(&v0 + &v0))
    }));
    loop {
        match up.take() {
            Some((m, v, val)) if &val <= rem => {
                if handle(&m, &val) {
                    return true;
                }
                let v = v + &one;
                let next = &val + pivot * &(&(&v + &v) + &one);
                up = Some((m + 1, v, next));
            }
            _ => {}
        }
        match down.take() {
            Some((m, v, val)) if &val <= rem => {
                if handle(&m, &val) {
                    return true;
                }
                let v = v - &one;
                let next = &val + pivot * &(&one - &(&v + &v));
                down = Some((m - 1, v, next));
            }
            _ => {}
        }
        if up.is_none() && down.is_none() {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FieldMatrix;
    use crate::qfield::{FieldElem, QuadField};
    use crate::rng::SplitMix64;

    fn f5() -> QuadField {
        QuadField::new(5).unwrap()
    }

    #[test]
    fn unit_lattice_represents_one() {
        let f = f5();
        let l = Lattice::unit(f, 3);
        let w = represents(&l, &f.from_int(1)).unwrap().unwrap();
        assert_eq!(l.quad(&w.vector).unwrap(), FieldElem::one(f));
        // center-out search order makes the small witness canonical
        assert_eq!(w.vector, LatticeVector::from_ints(f, &[1, 0, 0]));
        // deterministic: the same witness on every run
        let again = represents(&l, &f.from_int(1)).unwrap().unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn zero_target_is_zero_vector() {
        let f = f5();
        let l = Lattice::unit(f, 2);
        let w = represents(&l, &AlgInt::zero(f)).unwrap().unwrap();
        assert!(w.vector.is_zero());
        let all = enumerate_representations(&l, &AlgInt::zero(f), 10).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn non_totally_positive_target_is_an_error() {
        let f = f5();
        let l = Lattice::unit(f, 3);
        let omega = f.int(0, 1);
        assert_eq!(
            represents(&l, &omega).unwrap_err(),
            Error::TargetNotTotallyPositive
        );
        // the naive oracle has no such signal: it simply finds nothing
        assert_eq!(naive_represents(&l, &omega, 2).unwrap(), None);
    }

    #[test]
    fn algebraic_identity_witness() {
        // 3 + 2√2 = (1 + √2)² in the rank-1 unit lattice over Q(√2)
        let f = QuadField::new(2).unwrap();
        let l = Lattice::unit(f, 1);
        let t = f.int(3, 2);
        let w = represents(&l, &t).unwrap().unwrap();
        assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
        let all = enumerate_representations(&l, &t, 10).unwrap();
        assert_eq!(all.len(), 2); // ±(1 + √2)
        assert_eq!(all[0].vector, all[1].vector.negated());
    }

    #[test]
    fn canonical_target_matches_oracle() {
        // target m_3 + 3ω = 2 + 3ω over d = 5
        let f = f5();
        let l = Lattice::unit(f, 3);
        let t = AlgInt::new(f, f.omega_floor(3), 3.into());
        assert_eq!(t, f.int(2, 3));
        let fast = represents(&l, &t).unwrap();
        let naive = naive_represents(&l, &t, 4).unwrap();
        assert_eq!(fast.is_some(), naive.is_some());
        if let Some(w) = fast {
            assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
        }
    }

    #[test]
    fn six_unit_witnesses() {
        let f = f5();
        let l = Lattice::unit(f, 3);
        let all = enumerate_representations(&l, &f.from_int(1), 100).unwrap();
        assert_eq!(all.len(), 6);
        for w in &all {
            assert_eq!(l.quad(&w.vector).unwrap(), FieldElem::one(f));
        }
        // lexicographic order on flattened coordinates
        assert_eq!(all[0].vector, LatticeVector::from_ints(f, &[-1, 0, 0]));
        let capped = enumerate_representations(&l, &f.from_int(1), 1).unwrap();
        assert_eq!(capped.len(), 1);
        assert_eq!(capped[0], all[0]);
        assert!(enumerate_representations(&l, &f.from_int(1), 0).is_err());
    }

    #[test]
    fn witnesses_come_in_sign_pairs() {
        let f = f5();
        let l = Lattice::unit(f, 2);
        for t in [f.from_int(2), f.int(1, 1), f.from_int(5)] {
            let all = enumerate_representations(&l, &t, 10_000).unwrap();
            for w in &all {
                assert!(all.iter().any(|w2| w2.vector == w.vector.negated()));
            }
        }
    }

    #[test]
    fn agrees_with_oracle_on_seeded_instances() {
        let mut rng = SplitMix64::new(0x5eed);
        let ds = [2i64, 3, 5, 6, 7];
        let mut checked = 0;
        while checked < 60 {
            let d = ds[rng.below(ds.len() as u64) as usize];
            let f = QuadField::new(d).unwrap();
            let rank = 1 + rng.below(3) as usize;
            let Some(l) = random_lattice(&mut rng, f, rank) else {
                continue;
            };
            let Some(t) = random_target(&mut rng, f, 12) else {
                continue;
            };
            let bound = oracle_box(&l, &t);
            if (2 * bound as u128 + 1).pow(2 * rank as u32) > 3_000_000 {
                continue;
            }
            let fast = represents(&l, &t).unwrap();
            let naive = naive_represents(&l, &t, bound).unwrap();
            assert_eq!(
                fast.is_some(),
                naive.is_some(),
                "disagreement: d={d} rank={rank} t={t}"
            );
            if let Some(w) = &fast {
                assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
            }
            if let Some(w) = &naive {
                assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
            }
            checked += 1;
        }
    }

    fn random_lattice(rng: &mut SplitMix64, f: QuadField, rank: usize) -> Option<Lattice> {
        // diagonally dominant integer + occasional ω entries stay PD often
        let mut m = FieldMatrix::zeros(f, rank);
        for i in 0..rank {
            for j in 0..=i {
                let e = if i == j {
                    f.int(1 + rng.range_i64(0, 3), 0).to_elem()
                } else {
                    f.int(rng.range_i64(-1, 1), rng.range_i64(0, 1)).to_elem()
                };
                m.set(i, j, e.clone());
                m.set(j, i, e);
            }
        }
        Lattice::new(f, m, true).ok()
    }

    fn random_target(rng: &mut SplitMix64, f: QuadField, tr_max: i64) -> Option<AlgInt> {
        let pool = f.totally_positive_up_to(tr_max);
        if pool.is_empty() {
            return None;
        }
        Some(pool[rng.below(pool.len() as u64) as usize].clone())
    }

    #[test]
    fn enumeration_complete_against_oracle_scan() {
        // the full witness list matches a brute-force box scan
        for d in [2i64, 5, 13] {
            let f = QuadField::new(d).unwrap();
            let l = Lattice::unit(f, 2);
            for t in f.totally_positive_up_to(8) {
                let all = enumerate_representations(&l, &t, 100_000).unwrap();
                let bound = oracle_box(&l, &t);
                let mut brute = Vec::new();
                for a1 in -bound..=bound {
                    for b1 in -bound..=bound {
                        for a2 in -bound..=bound {
                            for b2 in -bound..=bound {
                                let v = LatticeVector::from_pairs(f, &[(a1, b1), (a2, b2)]);
                                if l.quad(&v).unwrap() == t.to_elem() {
                                    brute.push(v);
                                }
                            }
                        }
                    }
                }
                brute.sort_by_key(|v| v.flat_coords());
                let got: Vec<LatticeVector> = all.into_iter().map(|w| w.vector).collect();
                assert_eq!(got, brute, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn rational_sublattice_prune_keeps_completeness() {
        // Over a large d the unit lattice only represents rational targets;
        // the pruned search must agree with the naive oracle on both kinds.
        let f = QuadField::new(1003).unwrap();
        let l = Lattice::unit(f, 2);
        // rational target: representable
        let t = f.from_int(5);
        let w = represents(&l, &t).unwrap().unwrap();
        assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
        // irrational canonical target: trace is large but the search is cut
        // off as soon as the ω-parts are forced to zero
        let t = AlgInt::new(f, f.omega_floor(1), 1.into());
        assert!(represents(&l, &t).unwrap().is_none());
    }

    #[test]
    fn affine_prune_agrees_with_unpruned_walk() {
        // the feasibility cut must never lose a representation: compare the
        // full witness lists against the naive oracle on fields of both
        // congruence branches where the ω-parts genuinely move
        for d in [13i64, 17] {
            let f = QuadField::new(d).unwrap();
            let l = Lattice::unit(f, 2);
            for t in f.totally_positive_up_to(10) {
                let all = enumerate_representations(&l, &t, 100_000).unwrap();
                let naive = naive_represents(&l, &t, oracle_box(&l, &t)).unwrap();
                assert_eq!(
                    naive.is_some(),
                    !all.is_empty(),
                    "d={d} t={t}: prune lost or invented a witness"
                );
            }
        }
    }

    #[test]
    fn affine_prune_full_sets_on_coupled_lattice() {
        // off-diagonal Gram entries make G·w nonzero on most subtrees, so
        // both branches of the feasibility cut get exercised; the full
        // witness set must still match a brute-force box scan exactly
        for d in [5i64, 13] {
            let f = QuadField::new(d).unwrap();
            let gram = FieldMatrix::new(
                f,
                2,
                vec![
                    FieldElem::from_int(f, 2),
                    FieldElem::from_int(f, 1),
                    FieldElem::from_int(f, 1),
                    FieldElem::from_int(f, 3),
                ],
            );
            let l = Lattice::new(f, gram, true).unwrap();
            for t in f.totally_positive_up_to(10) {
                let got: Vec<LatticeVector> = enumerate_representations(&l, &t, 100_000)
                    .unwrap()
                    .into_iter()
                    .map(|w| w.vector)
                    .collect();
                let bound = oracle_box(&l, &t);
                let mut brute = Vec::new();
                for a1 in -bound..=bound {
                    for b1 in -bound..=bound {
                        for a2 in -bound..=bound {
                            for b2 in -bound..=bound {
                                let v = LatticeVector::from_pairs(f, &[(a1, b1), (a2, b2)]);
                                if l.quad(&v).unwrap() == t.to_elem() {
                                    brute.push(v);
                                }
                            }
                        }
                    }
                }
                brute.sort_by_key(|v| v.flat_coords());
                assert_eq!(got, brute, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn non_classic_lattice_against_oracle() {
        // half-integral off-diagonal entries: Q(x) stays integral, and the
        // enumeration must agree with the naive oracle throughout
        for d in [5i64, 13] {
            let f = QuadField::new(d).unwrap();
            let half = FieldElem::new(f, 1.into(), 0.into(), 2.into());
            let gram = FieldMatrix::new(
                f,
                2,
                vec![
                    FieldElem::from_int(f, 1),
                    half.clone(),
                    half,
                    FieldElem::from_int(f, 2),
                ],
            );
            let l = Lattice::new(f, gram, false).unwrap();
            assert!(!l.is_classic());
            for t in f.totally_positive_up_to(8) {
                let fast = represents(&l, &t).unwrap();
                let naive = naive_represents(&l, &t, oracle_box(&l, &t)).unwrap();
                assert_eq!(fast.is_some(), naive.is_some(), "d={d} t={t}");
                if let Some(w) = fast {
                    assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
                }
            }
        }
    }
}
