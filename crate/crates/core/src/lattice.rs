//! Quadratic `O_F`-lattices: construction and validation, Gram matrices of
//! vector tuples, the rational trace form, and integrality of sublattices
//! spanned by small-norm vectors.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{FieldMatrix, RatMatrix};
use crate::qfield::{AlgInt, FieldElem, QuadField};

/// A free quadratic `O_F`-lattice of finite rank, described by a symmetric
/// Gram matrix over `Q(√d)`.
///
/// A classic lattice has all Gram entries in `O_F`; a non-classic one may
/// have half-integral off-diagonal entries but keeps an integral diagonal,
/// so that `Q(x) ∈ O_F` for every vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    field: QuadField,
    rank: usize,
    gram: FieldMatrix,
    classic: bool,
}

impl Lattice {
    /// Validates and builds a lattice. Rejects non-symmetric Gram data,
    /// indefinite forms (under either embedding), and entries violating the
    /// classic/non-classic integrality constraints.
    pub fn new(field: QuadField, gram: FieldMatrix, classic: bool) -> Result<Lattice> {
        assert_eq!(gram.field(), field, "Gram matrix field mismatch");
        let rank = gram.dim();
        if rank == 0 {
            return Err(Error::BadParameter(
                "lattice rank must be at least 1".into(),
            ));
        }
        for i in 0..rank {
            for j in 0..rank {
                let e = gram.at(i, j);
                let ok = if classic || i == j {
                    e.to_alg_int().is_some()
                } else {
                    e.is_half_integral()
                };
                if !ok {
                    return Err(Error::ClassicalityViolation { row: i, col: j });
                }
            }
        }
        if !gram.is_positive_definite()? {
            return Err(Error::NotPositiveDefinite { pivot_index: 0 });
        }
        Ok(Lattice {
            field,
            rank,
            gram,
            classic,
        })
    }

    /// The diagonal lattice `⟨a_1, …, a_n⟩`.
    pub fn diagonal(field: QuadField, diag: &[AlgInt], classic: bool) -> Result<Lattice> {
        let n = diag.len();
        let gram = FieldMatrix::from_fn(field, n, |i, j| {
            if i == j {
                diag[i].to_elem()
            } else {
                FieldElem::zero(field)
            }
        });
        Lattice::new(field, gram, classic)
    }

    /// The unit lattice `I_n` (sum of `n` squares).
    pub fn unit(field: QuadField, n: usize) -> Lattice {
        Lattice::new(field, FieldMatrix::identity(field, n), true)
            .expect("identity Gram is a valid classic lattice")
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &FieldMatrix {
        &self.gram
    }

    pub fn is_classic(&self) -> bool {
        self.classic
    }

    fn check_len(&self, v: &LatticeVector) -> Result<()> {
        if v.coords.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: v.coords.len(),
            });
        }
        Ok(())
    }

    /// `Q(x) = xᵀ·G·x`, evaluated exactly.
    pub fn quad(&self, x: &LatticeVector) -> Result<FieldElem> {
        self.bilinear(x, x)
    }

    /// `B(x, y) = xᵀ·G·y`, evaluated exactly.
    pub fn bilinear(&self, x: &LatticeVector, y: &LatticeVector) -> Result<FieldElem> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut acc = FieldElem::zero(self.field);
        for i in 0..self.rank {
            let xi = x.coords[i].to_elem();
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.rank {
                let yj = y.coords[j].to_elem();
                if yj.is_zero() {
                    continue;
                }
                acc = &acc + &(&(&xi * self.gram.at(i, j)) * &yj);
            }
        }
        Ok(acc)
    }

    /// Gram matrix `(B(v_i, v_j))` of a tuple of lattice vectors.
    pub fn gram_of(&self, vs: &[LatticeVector]) -> Result<FieldMatrix> {
        for v in vs {
            self.check_len(v)?;
        }
        let mut m = FieldMatrix::zeros(self.field, vs.len());
        for i in 0..vs.len() {
            for j in i..vs.len() {
                let b = self.bilinear(&vs[i], &vs[j])?;
                m.set(i, j, b.clone());
                m.set(j, i, b);
            }
        }
        Ok(m)
    }

    /// The rational trace form `T` on `Z^{2n}`: writing each coordinate as
    /// `u + w·ω_d`, `T(u, w) = tr(Q(x))`.
    ///
    /// Variables are ordered `(u_1, …, u_n, w_1, …, w_n)`. `T` is symmetric,
    /// rational and positive definite, and satisfies
    /// `T(coords(x)) = tr(Q(x))` exactly for every lattice vector `x`.
    pub fn trace_form(&self) -> RatMatrix {
        let n = self.rank;
        let omega = self.field.omega();
        let omega_sq = &omega * &omega;
        // Block entries: tr(G_ij), tr(G_ij·ω), tr(G_ij·ω²).
        RatMatrix::from_fn(2 * n, |r, c| {
            let (i, wi) = if r < n { (r, false) } else { (r - n, true) };
            let (j, wj) = if c < n { (c, false) } else { (c - n, true) };
            let g = self.gram.at(i, j);
            match (wi, wj) {
                (false, false) => g.trace(),
                (true, true) => (g * &omega_sq).trace(),
                _ => (g * &omega).trace(),
            }
        })
    }

    /// Checks that all pairwise inner products of the given vectors are
    /// rational integers.
    ///
    /// Every vector must already have a rational integer norm. Whenever the
    /// field discriminant exceeds `4·15²` and all norms lie in `[1, 15]`,
    /// integrality is guaranteed; below that the result simply reports what
    /// was found, including a counterexample pair if any.
    pub fn integral_span(&self, vs: &[LatticeVector]) -> Result<IntegralSpanReport> {
        for (index, v) in vs.iter().enumerate() {
            let q = self.quad(v)?;
            if q.as_rational().map(|r| r.is_integer()) != Some(true) {
                return Err(Error::NonIntegerNorm { index });
            }
        }
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                let b = self.bilinear(&vs[i], &vs[j])?;
                let integral = b.as_rational().map(|r| r.is_integer()) == Some(true);
                if !integral {
                    return Ok(IntegralSpanReport {
                        integral: false,
                        counterexample: Some((i, j, b)),
                    });
                }
            }
        }
        Ok(IntegralSpanReport {
            integral: true,
            counterexample: None,
        })
    }
}

/// Outcome of [`Lattice::integral_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralSpanReport {
    pub integral: bool,
    /// A pair `(i, j)` with non-integral `B(v_i, v_j)`, and the value.
    pub counterexample: Option<(usize, usize, FieldElem)>,
}

/// A lattice vector: one algebraic integer coordinate per basis element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: Vec<AlgInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<AlgInt>) -> Self {
        assert!(!coords.is_empty(), "empty vector");
        let f = coords[0].field();
        assert!(coords.iter().all(|c| c.field() == f), "mixed-field vector");
        LatticeVector { coords }
    }

    /// Vector with rational integer coordinates.
    pub fn from_ints(field: QuadField, coords: &[i64]) -> Self {
        LatticeVector::new(coords.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Vector from `(a, b)` pairs meaning `a + b·ω_d`.
    pub fn from_pairs(field: QuadField, pairs: &[(i64, i64)]) -> Self {
        LatticeVector::new(pairs.iter().map(|&(a, b)| field.int(a, b)).collect())
    }

    pub fn unit(field: QuadField, n: usize, i: usize) -> Self {
        let mut coords = vec![AlgInt::zero(field); n];
        coords[i] = field.from_int(1);
        LatticeVector::new(coords)
    }

    pub fn zero(field: QuadField, n: usize) -> Self {
        LatticeVector::new(vec![AlgInt::zero(field); n])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn coord(&self, i: usize) -> &AlgInt {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[AlgInt] {
        &self.coords
    }

    pub fn negated(&self) -> LatticeVector {
        LatticeVector::new(self.coords.iter().map(|c| -c).collect())
    }

    /// The flattened `(a_1, b_1, a_2, b_2, …)` coordinate list, the key used
    /// for the lexicographic witness order.
    pub fn flat_coords(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(2 * self.coords.len());
        for c in &self.coords {
            out.push(c.a().clone());
            out.push(c.b().clone());
        }
        out
    }

    /// Builds the vector whose `i`-th coordinate is `u_i + w_i·ω_d` from the
    /// trace-form variable layout `(u_1, …, u_n, w_1, …, w_n)`.
    pub fn from_trace_coords(field: QuadField, y: &[BigInt]) -> Self {
        let n = y.len() / 2;
        assert_eq!(y.len(), 2 * n);
        LatticeVector::new(
            (0..n)
                .map(|i| AlgInt::new(field, y[i].clone(), y[n + i].clone()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::Embedding;
    use crate::rng::SplitMix64;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use std::cmp::Ordering;

    fn f5() -> QuadField {
        QuadField::new(5).unwrap()
    }

    fn elem(field: QuadField, p: i64, q: i64, den: i64) -> FieldElem {
        FieldElem::new(field, p.into(), q.into(), den.into())
    }

    #[test]
    fn make_lattice_validation() {
        let f = f5();
        assert!(Lattice::new(f, FieldMatrix::identity(f, 3), true).is_ok());

        let indef = FieldMatrix::new(
            f,
            2,
            vec![
                FieldElem::one(f),
                elem(f, 2, 0, 1),
                elem(f, 2, 0, 1),
                FieldElem::one(f),
            ],
        );
        assert_eq!(
            Lattice::new(f, indef, true).unwrap_err(),
            Error::NotPositiveDefinite { pivot_index: 0 }
        );

        // ω/2 off-diagonal entry violates classicality for a classic lattice
        let half_omega = elem(f, 1, 1, 4);
        let m = FieldMatrix::new(
            f,
            2,
            vec![
                elem(f, 3, 0, 1),
                half_omega.clone(),
                half_omega.clone(),
                elem(f, 3, 0, 1),
            ],
        );
        assert_eq!(
            Lattice::new(f, m.clone(), true).unwrap_err(),
            Error::ClassicalityViolation { row: 0, col: 1 }
        );
        // ...but is allowed off-diagonally in a non-classic lattice
        assert!(Lattice::new(f, m, false).is_ok());

        // a non-classic lattice still needs an integral diagonal
        let bad_diag =
            FieldMatrix::new(f, 1, vec![FieldElem::new(f, 1.into(), 0.into(), 2.into())]);
        assert_eq!(
            Lattice::new(f, bad_diag, false).unwrap_err(),
            Error::ClassicalityViolation { row: 0, col: 0 }
        );
    }

    #[test]
    fn quad_and_bilinear_examples() {
        let f = f5();
        let l = Lattice::unit(f, 3);
        let x = LatticeVector::from_ints(f, &[1, 1, 1]);
        assert_eq!(l.quad(&x).unwrap(), elem(f, 3, 0, 1));

        // Q((ω,0,0)) = ω² = 1 + ω = (3+√5)/2
        let w = LatticeVector::from_pairs(f, &[(0, 1), (0, 0), (0, 0)]);
        assert_eq!(l.quad(&w).unwrap(), f.int(1, 1).to_elem());

        let e1 = LatticeVector::unit(f, 3, 0);
        let e2 = LatticeVector::unit(f, 3, 1);
        assert!(l.bilinear(&e1, &e2).unwrap().is_zero());

        let short = LatticeVector::from_ints(f, &[1, 1]);
        assert_eq!(
            l.quad(&short).unwrap_err(),
            Error::DimensionMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn gram_of_vectors_examples() {
        let f = f5();
        let l3 = Lattice::unit(f, 3);
        let e1 = LatticeVector::unit(f, 3, 0);
        let e2 = LatticeVector::unit(f, 3, 1);

        let g = l3.gram_of(&[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(g, FieldMatrix::identity(f, 2));

        let g = l3.gram_of(&[e1.clone(), e1.clone()]).unwrap();
        assert!(g.det().is_zero());
        assert!(g.is_positive_semidefinite().unwrap());

        let l2 = Lattice::unit(f, 2);
        let v = LatticeVector::from_ints(f, &[1, 1]);
        let e2 = LatticeVector::unit(f, 2, 1);
        let g = l2.gram_of(&[v, e2]).unwrap();
        assert_eq!(g.at(0, 0), &elem(f, 2, 0, 1));
        assert_eq!(g.at(0, 1), &FieldElem::one(f));
        assert_eq!(g.det(), FieldElem::one(f));
    }

    #[test]
    fn gram_det_detects_dependence() {
        // det(Gram) totally positive iff independent over F, zero iff dependent.
        let f = f5();
        let l = Lattice::unit(f, 3);
        let mut rng = SplitMix64::new(0x11a);
        for _ in 0..40 {
            let k = 1 + (rng.below(3) as usize);
            let vs: Vec<LatticeVector> = (0..k)
                .map(|_| {
                    LatticeVector::new(
                        (0..3)
                            .map(|_| f.int(rng.range_i64(-2, 2), rng.range_i64(-1, 1)))
                            .collect(),
                    )
                })
                .collect();
            let det = l.gram_of(&vs).unwrap().det();
            let indep = field_rank(f, &vs) == k;
            if indep {
                assert!(det.is_totally_positive());
            } else {
                assert!(det.is_zero());
            }
        }
    }

    /// Rank of a vector family over the field, by elimination on coordinates.
    fn field_rank(_field: QuadField, vs: &[LatticeVector]) -> usize {
        let mut rows: Vec<Vec<FieldElem>> = vs
            .iter()
            .map(|v| v.coords().iter().map(|c| c.to_elem()).collect())
            .collect();
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, pr);
            let pivot = rows[rank][c].clone();
            for r in (rank + 1)..rows.len() {
                if rows[r][c].is_zero() {
                    continue;
                }
                let factor = &rows[r][c] / &pivot;
                for cc in c..cols {
                    let v = &rows[r][cc] - &(&factor * &rows[rank][cc]);
                    rows[r][cc] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn trace_form_rank_one_examples() {
        let f2 = QuadField::new(2).unwrap();
        let l = Lattice::unit(f2, 1);
        let t = l.trace_form();
        assert_eq!(t, RatMatrix::from_int_rows(&[vec![2, 0], vec![0, 4]]));

        let f = f5();
        let l = Lattice::unit(f, 1);
        let t = l.trace_form();
        assert_eq!(t, RatMatrix::from_int_rows(&[vec![2, 1], vec![1, 3]]));
    }

    #[test]
    fn trace_form_contract_identity() {
        let mut rng = SplitMix64::new(0x77ace);
        for d in [2, 3, 5, 13] {
            let f = QuadField::new(d).unwrap();
            let gram = FieldMatrix::new(
                f,
                2,
                vec![
                    elem(f, 3, 0, 1),
                    f.int(0, 1).to_elem(),
                    f.int(0, 1).to_elem(),
                    elem(f, 9, 0, 1),
                ],
            );
            let l = match Lattice::new(f, gram, true) {
                Ok(l) => l,
                Err(_) => continue,
            };
            let t = l.trace_form();
            assert!(t.is_symmetric());
            for _ in 0..100 {
                let y: Vec<BigInt> = (0..4).map(|_| rng.range_i64(-5, 5).into()).collect();
                let x = LatticeVector::from_trace_coords(f, &y);
                let mut ty = BigRational::zero();
                for i in 0..4 {
                    for j in 0..4 {
                        ty += t.at(i, j)
                            * BigRational::from(y[i].clone())
                            * BigRational::from(y[j].clone());
                    }
                }
                assert_eq!(ty, l.quad(&x).unwrap().trace());
            }
        }
    }

    #[test]
    fn trace_form_is_positive_definite() {
        for d in [2, 5, 13] {
            let f = QuadField::new(d).unwrap();
            let l = Lattice::unit(f, 2);
            assert!(crate::exact::RatCholesky::decompose(&l.trace_form()).is_ok());
        }
    }

    #[test]
    fn integral_span_examples() {
        let f = f5();
        let l = Lattice::unit(f, 3);
        let e1 = LatticeVector::unit(f, 3, 0);
        let e2 = LatticeVector::unit(f, 3, 1);
        let rep = l.integral_span(&[e1, e2]).unwrap();
        assert!(rep.integral);

        // ω has norm ω², not a rational integer
        let w = LatticeVector::from_pairs(f, &[(0, 1), (0, 0), (0, 0)]);
        assert_eq!(
            l.integral_span(&[w]).unwrap_err(),
            Error::NonIntegerNorm { index: 0 }
        );
    }

    #[test]
    fn integral_span_small_norm_vectors_large_discriminant() {
        // Vectors of integer norm in [1,15] span integrally once Δ > 900.
        let mut hits = 0usize;
        for d in [1003, 1009, 1000003] {
            let f = QuadField::new(d).unwrap();
            assert!(f.discriminant() > 900);
            let mut rng = SplitMix64::new(d as u64);
            for _ in 0..20 {
                let g01 = f.int(rng.range_i64(-1, 1), 0).to_elem();
                let gram = FieldMatrix::new(
                    f,
                    2,
                    vec![
                        elem(f, 1 + rng.range_i64(0, 3), 0, 1),
                        g01.clone(),
                        g01,
                        elem(f, 5 + rng.range_i64(0, 5), 0, 1),
                    ],
                );
                let Ok(l) = Lattice::new(f, gram, true) else {
                    continue;
                };
                // every vector in a small box whose norm is an integer in [1, 15]
                let mut small = Vec::new();
                for a1 in -2..=2i64 {
                    for b1 in -1..=1i64 {
                        for a2 in -2..=2i64 {
                            for b2 in -1..=1i64 {
                                let v = LatticeVector::from_pairs(f, &[(a1, b1), (a2, b2)]);
                                let q = l.quad(&v).unwrap();
                                if let Some(r) = q.as_rational() {
                                    if r.is_integer()
                                        && r >= BigRational::one()
                                        && r <= BigRational::from(BigInt::from(15))
                                    {
                                        small.push(v);
                                    }
                                }
                            }
                        }
                    }
                }
                if small.len() >= 2 {
                    hits += 1;
                    let rep = l.integral_span(&small).unwrap();
                    assert!(
                        rep.integral,
                        "d={d} counterexample {:?}",
                        rep.counterexample
                    );
                }
            }
        }
        assert!(hits > 0, "test never exercised a nontrivial family");
    }

    #[test]
    fn gram_of_tuple_is_psd_both_embeddings() {
        let f = f5();
        let l = Lattice::unit(f, 2);
        let mut rng = SplitMix64::new(0x6a);
        for _ in 0..30 {
            let vs: Vec<LatticeVector> = (0..2)
                .map(|_| {
                    LatticeVector::new(
                        (0..2)
                            .map(|_| f.int(rng.range_i64(-2, 2), rng.range_i64(-1, 1)))
                            .collect(),
                    )
                })
                .collect();
            let g = l.gram_of(&vs).unwrap();
            assert!(g.is_positive_semidefinite().unwrap());
            let det = g.det();
            assert_ne!(det.sign_at(Embedding::First), Ordering::Less);
        }
    }
}
