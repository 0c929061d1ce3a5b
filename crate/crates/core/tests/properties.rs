//! Property tests over the public API: algebraic identities of the field
//! arithmetic, determinant multiplicativity, decomposition round-trips, the
//! bound chain, and witness soundness.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use uqlat::bounds::bound_chain;
use uqlat::exact::{FieldMatrix, RatCholesky, RatMatrix};
use uqlat::lattice::{Lattice, LatticeVector};
use uqlat::obstruction::decompose_gram;
use uqlat::qfield::{AlgInt, Embedding, FieldElem, QuadField};
use uqlat::represent::represents;

fn squarefree_d() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13, 17, 21, 29, 1003])
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(d in squarefree_d(), a in -1000i64..1000, b in -1000i64..1000) {
        let f = QuadField::new(d).unwrap();
        let x = f.int(a, b);
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(x.conj().trace(), x.trace());
        prop_assert_eq!(x.conj().norm(), x.norm());
    }

    #[test]
    fn ring_homomorphism_of_conjugation(
        d in squarefree_d(),
        a in -50i64..50, b in -50i64..50,
        c in -50i64..50, e in -50i64..50,
    ) {
        let f = QuadField::new(d).unwrap();
        let x = f.int(a, b);
        let y = f.int(c, e);
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        // norm is multiplicative
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn totally_positive_iff_both_embeddings(d in squarefree_d(), a in -100i64..100, b in -100i64..100) {
        let f = QuadField::new(d).unwrap();
        let x = f.int(a, b);
        let e = x.to_elem();
        let both = e.sign_at(Embedding::First) == std::cmp::Ordering::Greater
            && e.sign_at(Embedding::Second) == std::cmp::Ordering::Greater;
        prop_assert_eq!(x.is_totally_positive(), both);
        // and the sign of −x flips under both embeddings
        let n = -&e;
        prop_assert_eq!(n.sign_at(Embedding::First), e.sign_at(Embedding::First).reverse());
    }

    #[test]
    fn field_division_inverts_multiplication(
        d in squarefree_d(),
        p in -30i64..30, q in -30i64..30, den in 1i64..4,
        p2 in -30i64..30, q2 in -30i64..30, den2 in 1i64..4,
    ) {
        let f = QuadField::new(d).unwrap();
        let x = FieldElem::new(f, p.into(), q.into(), den.into());
        let y = FieldElem::new(f, p2.into(), q2.into(), den2.into());
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&(&x * &y) / &y), &x);
        prop_assert_eq!(&(&(&x - &y) + &y), &x);
    }

    #[test]
    fn omega_floor_puts_conjugate_in_unit_interval(d in squarefree_d(), k in 1i64..200) {
        let f = QuadField::new(d).unwrap();
        let target = AlgInt::new(f, f.omega_floor(k), k.into());
        prop_assert!(target.is_totally_positive());
        let conj = target.conj().to_elem();
        prop_assert_eq!(conj.sign_at(Embedding::First), std::cmp::Ordering::Greater);
        prop_assert_eq!(
            conj.cmp_at(&FieldElem::one(f), Embedding::First),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn determinant_is_multiplicative(
        d in prop::sample::select(vec![2i64, 5, 13]),
        n in 1usize..4,
        seed in any::<u64>(),
    ) {
        let f = QuadField::new(d).unwrap();
        let mut rng = uqlat::rng::SplitMix64::new(seed);
        let rand = |rng: &mut uqlat::rng::SplitMix64| {
            FieldMatrix::from_fn(f, n, |_, _| {
                FieldElem::new(f, rng.range_i64(-3, 3).into(), rng.range_i64(-2, 2).into(), 1.into())
            })
        };
        let a = rand(&mut rng);
        let b = rand(&mut rng);
        let prod = FieldMatrix::from_fn(f, n, |i, j| {
            let mut acc = FieldElem::zero(f);
            for k in 0..n {
                acc = &acc + &(a.at(i, k) * b.at(k, j));
            }
            acc
        });
        prop_assert_eq!(prod.det(), &a.det() * &b.det());
    }

    #[test]
    fn cholesky_reconstructs_gram_matrices(n in 1usize..5, seed in any::<u64>()) {
        // AᵀA + I is positive definite for any rational A
        let mut rng = uqlat::rng::SplitMix64::new(seed);
        let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.range_i64(-4, 4)).collect()).collect();
        let m = RatMatrix::from_fn(n, |i, j| {
            let dot: i64 = (0..n).map(|k| a[k][i] * a[k][j]).sum();
            BigRational::from(BigInt::from(dot + if i == j { 1 } else { 0 }))
        });
        let chol = RatCholesky::decompose(&m).unwrap();
        prop_assert_eq!(chol.reconstruct(), m);
    }

    #[test]
    fn gram_decomposition_roundtrips(
        d in squarefree_d(),
        n in 1usize..4,
        seed in any::<u64>(),
    ) {
        let f = QuadField::new(d).unwrap();
        let mut rng = uqlat::rng::SplitMix64::new(seed);
        let g = FieldMatrix::from_fn(f, n, |_, _| {
            f.int(rng.range_i64(-200, 200), rng.range_i64(-200, 200)).to_elem()
        });
        let dec = decompose_gram(&g);
        prop_assert_eq!(dec.reconstruct(), g);
    }

    #[test]
    fn bound_chain_holds_on_random_instances(
        k in 1usize..4,
        s in 0usize..4,
        nb in 2i64..8,
        xnum in 1i64..1_000_000,
        xden in 1i64..100,
        seed in any::<u64>(),
    ) {
        let mut rng = uqlat::rng::SplitMix64::new(seed);
        let a = RatMatrix::from_fn(k, |_, _| BigRational::from(BigInt::from(rng.range_i64(-nb, nb))));
        let b = RatMatrix::from_fn(k + s, |_, _| BigRational::from(BigInt::from(rng.range_i64(-nb, nb))));
        let x = BigRational::new(xnum.into(), xden.into());
        let chain = bound_chain(&a, &b, &x, &BigInt::from(nb)).unwrap();
        prop_assert!(chain.holds());
    }

    #[test]
    fn witnesses_verify_exactly(
        d in prop::sample::select(vec![2i64, 3, 5, 13]),
        diag in prop::collection::vec(1i64..4, 1..3),
        ti in 0usize..20,
    ) {
        let f = QuadField::new(d).unwrap();
        let diag: Vec<AlgInt> = diag.iter().map(|&v| f.from_int(v)).collect();
        let l = Lattice::diagonal(f, &diag, true).unwrap();
        let pool = f.totally_positive_up_to(8);
        prop_assume!(!pool.is_empty());
        let t = pool[ti % pool.len()].clone();
        if let Some(w) = represents(&l, &t).unwrap() {
            prop_assert_eq!(l.quad(&w.vector).unwrap(), t.to_elem());
            // the negation is also a witness
            prop_assert_eq!(l.quad(&w.vector.negated()).unwrap(), t.to_elem());
        }
    }

    #[test]
    fn trace_form_identity_on_random_vectors(
        d in squarefree_d(),
        coords in prop::collection::vec((-6i64..6, -6i64..6), 2),
    ) {
        let f = QuadField::new(d).unwrap();
        let l = Lattice::unit(f, 2);
        let tf = l.trace_form();
        let x = LatticeVector::from_pairs(f, &coords);
        let y: Vec<BigRational> = coords
            .iter()
            .map(|&(a, _)| BigRational::from(BigInt::from(a)))
            .chain(coords.iter().map(|&(_, b)| BigRational::from(BigInt::from(b))))
            .collect();
        let mut val = BigRational::from(BigInt::from(0));
        for i in 0..4 {
            for j in 0..4 {
                val += tf.at(i, j) * &y[i] * &y[j];
            }
        }
        prop_assert_eq!(val, l.quad(&x).unwrap().trace());
    }
}
