//! Exact linear algebra over `Q` and `Q(√d)`: determinants, positive
//! (semi)definiteness certification under both embeddings, and a rational
//! LDLᵀ decomposition that drives the enumeration bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::qfield::{Embedding, FieldElem, QuadField};

/// A square matrix over `Q(√d)`. Pure rationals are the `q = 0` case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: QuadField,
    n: usize,
    entries: Vec<FieldElem>,
}

impl FieldMatrix {
    pub fn new(field: QuadField, n: usize, entries: Vec<FieldElem>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        for e in &entries {
            assert_eq!(e.field(), field, "entry from a different field");
        }
        FieldMatrix { field, n, entries }
    }

    pub fn from_fn(
        field: QuadField,
        n: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        FieldMatrix::new(field, n, entries)
    }

    pub fn identity(field: QuadField, n: usize) -> Self {
        FieldMatrix::from_fn(field, n, |i, j| {
            if i == j {
                FieldElem::one(field)
            } else {
                FieldElem::zero(field)
            }
        })
    }

    pub fn zeros(field: QuadField, n: usize) -> Self {
        FieldMatrix::from_fn(field, n, |_, _| FieldElem::zero(field))
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        assert_eq!(v.field(), self.field);
        self.entries[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.at(i, j) != self.at(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn require_symmetric(&self) -> Result<()> {
        match self.first_asymmetry() {
            Some((row, col)) => Err(Error::NotSymmetric { row, col }),
            None => Ok(()),
        }
    }

    /// Principal submatrix picked out by `idx` (rows and columns alike).
    pub fn principal_minor(&self, idx: &[usize]) -> FieldMatrix {
        FieldMatrix::from_fn(self.field, idx.len(), |i, j| {
            self.at(idx[i], idx[j]).clone()
        })
    }

    /// Exact determinant by Gaussian elimination over the field.
    pub fn det(&self) -> FieldElem {
        let mut m = self.entries.clone();
        let n = self.n;
        if n == 0 {
            return FieldElem::one(self.field);
        }
        let mut det = FieldElem::one(self.field);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m[r * n + col].is_zero());
            let Some(pr) = pivot_row else {
                return FieldElem::zero(self.field);
            };
            if pr != col {
                for j in 0..n {
                    m.swap(pr * n + j, col * n + j);
                }
                det = -&det;
            }
            let pivot = m[col * n + col].clone();
            det = &det * &pivot;
            for r in (col + 1)..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let factor = &m[r * n + col] / &pivot;
                for j in col..n {
                    let v = &m[r * n + j] - &(&factor * &m[col * n + j]);
                    m[r * n + j] = v;
                }
            }
        }
        det
    }

    /// Positive definiteness under both embeddings: by Sylvester's criterion
    /// every leading principal minor must be totally positive.
    pub fn is_positive_definite(&self) -> Result<bool> {
        self.require_symmetric()?;
        for k in 1..=self.n {
            let idx: Vec<usize> = (0..k).collect();
            if !self.principal_minor(&idx).det().is_totally_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Positive semidefiniteness under both embeddings.
    ///
    /// Up to dimension 8 all `2ⁿ − 1` principal minors are enumerated and
    /// required to be nonnegative under both embeddings; for larger matrices
    /// a pivoted symmetric elimination decides the same property per
    /// embedding without the exponential sweep.
    pub fn is_positive_semidefinite(&self) -> Result<bool> {
        self.require_symmetric()?;
        if self.n <= 8 {
            for mask in 1u32..(1 << self.n) {
                let idx: Vec<usize> = (0..self.n).filter(|i| mask & (1 << i) != 0).collect();
                let det = self.principal_minor(&idx).det();
                if det.sign_at(Embedding::First) == Ordering::Less
                    || det.sign_at(Embedding::Second) == Ordering::Less
                {
                    return Ok(false);
                }
            }
            Ok(true)
        } else {
            Ok(self.psd_by_elimination(Embedding::First)
                && self.psd_by_elimination(Embedding::Second))
        }
    }

    /// Symmetric pivoted elimination deciding PSD under one embedding.
    fn psd_by_elimination(&self, emb: Embedding) -> bool {
        let mut m = self.entries.clone();
        let n = self.n;
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            // A PSD matrix with a zero diagonal has a zero row; pick any
            // strictly positive diagonal pivot.
            let mut pivot = None;
            for (pos, &i) in active.iter().enumerate() {
                match m[i * n + i].sign_at(emb) {
                    Ordering::Less => return false,
                    Ordering::Greater => {
                        pivot = Some(pos);
                        break;
                    }
                    Ordering::Equal => {}
                }
            }
            let Some(pos) = pivot else {
                // All remaining diagonal entries are zero: PSD iff the
                // whole remaining block vanishes.
                return active
                    .iter()
                    .all(|&i| active.iter().all(|&j| m[i * n + j].is_zero()));
            };
            let p = active.remove(pos);
            let pivot_val = m[p * n + p].clone();
            for &i in &active {
                if m[i * n + p].is_zero() {
                    continue;
                }
                let fi = &m[i * n + p] / &pivot_val;
                for &j in &active {
                    let v = &m[i * n + j] - &(&fi * &m[p * n + j]);
                    m[i * n + j] = v;
                }
            }
        }
        true
    }

    /// All entries rational, as a rational matrix.
    pub fn to_rational(&self) -> Option<RatMatrix> {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for e in &self.entries {
            entries.push(e.as_rational()?);
        }
        Some(RatMatrix::new(self.n, entries))
    }
}

/// A square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        RatMatrix { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        RatMatrix::new(n, entries)
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        RatMatrix::from_fn(n, |i, j| BigRational::from(BigInt::from(rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix::from_fn(n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.at(i, j) != self.at(j, i))
    }

    /// Exact determinant by fraction-aware Gaussian elimination.
    pub fn det(&self) -> BigRational {
        let mut m = self.entries.clone();
        let n = self.n;
        if n == 0 {
            return BigRational::one();
        }
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if pr != col {
                for j in 0..n {
                    m.swap(pr * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = m[col * n + col].clone();
            det *= &pivot;
            for r in (col + 1)..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let factor = &m[r * n + col] / &pivot;
                for j in col..n {
                    let v = &m[r * n + j] - &factor * &m[col * n + j];
                    m[r * n + j] = v;
                }
            }
        }
        det
    }

    /// Exact inverse; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut inv = RatMatrix::identity(n).entries;
        for col in 0..n {
            let pr = (col..n).find(|&r| !m[r * n + col].is_zero())?;
            if pr != col {
                for j in 0..n {
                    m.swap(pr * n + j, col * n + j);
                    inv.swap(pr * n + j, col * n + j);
                }
            }
            let pivot = m[col * n + col].clone();
            for j in 0..n {
                m[col * n + j] /= &pivot;
                inv[col * n + j] /= &pivot;
            }
            for r in 0..n {
                if r == col || m[r * n + col].is_zero() {
                    continue;
                }
                let factor = m[r * n + col].clone();
                for j in 0..n {
                    let vm = &m[r * n + j] - &factor * &m[col * n + j];
                    m[r * n + j] = vm;
                    let vi = &inv[r * n + j] - &factor * &inv[col * n + j];
                    inv[r * n + j] = vi;
                }
            }
        }
        Some(RatMatrix::new(n, inv))
    }

    pub fn to_field(&self, field: QuadField) -> FieldMatrix {
        FieldMatrix::from_fn(field, self.n, |i, j| {
            FieldElem::from_rational(field, self.at(i, j))
        })
    }
}

/// Exact LDLᵀ decomposition of a symmetric positive definite rational
/// matrix: `M = Uᵀ·diag(pivots)·U` with `U` unit upper triangular.
#[derive(Debug, Clone)]
pub struct RatCholesky {
    n: usize,
    pivots: Vec<BigRational>,
    /// Row-major unit upper triangular factor.
    upper: Vec<BigRational>,
}

impl RatCholesky {
    /// Decomposes `m`, failing with the offending pivot index when `m` is
    /// not positive definite.
    pub fn decompose(m: &RatMatrix) -> Result<RatCholesky> {
        if let Some((row, col)) = m.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        let n = m.dim();
        let mut pivots: Vec<BigRational> = Vec::with_capacity(n);
        let mut upper = vec![BigRational::zero(); n * n];
        for j in 0..n {
            upper[j * n + j] = BigRational::one();
        }
        for j in 0..n {
            let mut pj = m.at(j, j).clone();
            for k in 0..j {
                let u = &upper[k * n + j];
                pj -= &pivots[k] * u * u;
            }
            if !pj.is_positive() {
                return Err(Error::NotPositiveDefinite { pivot_index: j });
            }
            for i in (j + 1)..n {
                let mut v = m.at(j, i).clone();
                for k in 0..j {
                    v -= &pivots[k] * &upper[k * n + j] * &upper[k * n + i];
                }
                upper[j * n + i] = v / &pj;
            }
            pivots.push(pj);
        }
        Ok(RatCholesky { n, pivots, upper })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &[BigRational] {
        &self.pivots
    }

    /// Entry `U[i][j]` of the unit upper triangular factor.
    pub fn upper(&self, i: usize, j: usize) -> &BigRational {
        &self.upper[i * self.n + j]
    }

    /// Rebuilds `Uᵀ·diag(p)·U`; exact by construction.
    pub fn reconstruct(&self) -> RatMatrix {
        RatMatrix::from_fn(self.n, |i, j| {
            let mut acc = BigRational::zero();
            for k in 0..=i.min(j) {
                acc += &self.pivots[k] * &self.upper[k * self.n + i] * &self.upper[k * self.n + j];
            }
            acc
        })
    }
}

/// A square matrix of arbitrary-precision integers with a fraction-free
/// Bareiss determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        IntMatrix { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        IntMatrix::new(n, entries)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        IntMatrix::from_fn(rows.len(), |i, j| BigInt::from(rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_fn(n, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn principal_minor(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(idx.len(), |i, j| self.at(idx[i], idx[j]).clone())
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..(n - 1) {
            if m[k * n + k].is_zero() {
                let Some(pr) = ((k + 1)..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.swap(pr * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_fn(self.n, |i, j| BigRational::from(self.at(i, j).clone()))
    }

    pub fn to_field(&self, field: QuadField) -> FieldMatrix {
        FieldMatrix::from_fn(field, self.n, |i, j| {
            FieldElem::new(field, self.at(i, j).clone(), BigInt::zero(), BigInt::one())
        })
    }
}
