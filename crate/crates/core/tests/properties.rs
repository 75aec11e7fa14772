use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tuplesim::invariant::{echelon_invariant, randomized_similarity_test};
use tuplesim::reductions::{check_relations, commuting_cube_relations};
use tuplesim::subsets::{rank as subset_rank, unrank, Combinations};
use tuplesim::sylvester::verify_similarity;
use tuplesim::*;

const Q: Field = Field::Rationals;

fn f1009() -> Field {
    Field::prime(1009).unwrap()
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, rows * cols)
}

fn to_matrix(field: Field, rows: usize, cols: usize, v: &[i64]) -> ExactMatrix {
    ExactMatrix::from_fn(field, rows, cols, |i, j| field.from_i64(v[i * cols + j]))
}

fn shaped() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| (Just(r), Just(c), small_matrix(r, c)))
}

fn tuple_strategy(n: usize, p: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n * n * p)
}

fn to_tuple(field: Field, n: usize, p: usize, v: &[i64]) -> MatrixTuple {
    MatrixTuple::new(
        (0..p)
            .map(|l| to_matrix(field, n, n, &v[l * n * n..(l + 1) * n * n]))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_reduced((r, c, v) in shaped()) {
        let m = to_matrix(Q, r, c, &v);
        let e = m.rref();
        prop_assert!(e.is_reduced());
        let again = e.basis().rref();
        prop_assert_eq!(again.basis(), e.basis());
        prop_assert_eq!(again.pivots(), e.pivots());
        prop_assert_eq!(e.rank() + m.nullspace().len(), c);
    }

    #[test]
    fn rref_ignores_row_operations((r, c, v) in shaped(), seed in any::<u64>()) {
        let m = to_matrix(Q, r, c, &v);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ExactMatrix::random_invertible(Q, r, 3, &mut rng);
        prop_assert_eq!((&p * &m).rref(), m.rref());
    }

    #[test]
    fn nullspace_vectors_are_in_kernel((r, c, v) in shaped()) {
        for field in [Q, f1009()] {
            let m = to_matrix(field, r, c, &v);
            for z in m.nullspace() {
                let col = ExactMatrix::column(field, z).unwrap();
                prop_assert!(m.try_mul(&col).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn determinant_is_multiplicative(n in 1usize..=4, a in small_matrix(4, 4), b in small_matrix(4, 4)) {
        let a = to_matrix(Q, n, n, &a[..n * n]);
        let b = to_matrix(Q, n, n, &b[..n * n]);
        prop_assert_eq!((&a * &b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn inverse_round_trips(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in [Q, f1009()] {
            let s = ExactMatrix::random_invertible(field, n, 5, &mut rng);
            prop_assert_eq!(&s * &s.inverse().unwrap(), ExactMatrix::identity(field, n));
        }
    }

    #[test]
    fn vectorize_round_trips((r, c, v) in shaped()) {
        let m = to_matrix(Q, r, c, &v);
        let vec = m.vectorize();
        prop_assert_eq!(vec.shape(), (r * c, 1));
        if r == c {
            prop_assert_eq!(ExactMatrix::unvectorize(vec.entries(), Q).unwrap(), m);
        }
    }

    #[test]
    fn prime_field_axioms(a in 0u64..1009, b in 1u64..1009, c in 0u64..1009) {
        let f = f1009();
        let (a, b, c) = (f.from_i64(a as i64), f.from_i64(b as i64), f.from_i64(c as i64));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&b * &b.inv().unwrap()).is_one());
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn subset_ranking_round_trips(n in 0usize..10, k in 0usize..6, pick in any::<u64>()) {
        let total = tuplesim::subsets::binomial(n as u64, k as u64).unwrap();
        prop_assume!(total > 0);
        let r = (pick as u128) % total;
        let s = unrank(n, k, r).unwrap();
        prop_assert_eq!(subset_rank(n, &s), r);
        prop_assert_eq!(Combinations::starting_at(n, k, r).next(), Some(s));
    }

    #[test]
    fn monomial_positions_round_trip(n in 1usize..=2, p in 1usize..=3, r in 1usize..=4, pick in any::<u64>()) {
        let idx = BasisIndexer::new(n, p, r).unwrap();
        let pos = (pick as usize) % idx.len() + 1;
        let m = idx.monomial_at(pos).unwrap();
        prop_assert!(m.degree() <= r);
        prop_assert_eq!(idx.position(&m).unwrap(), pos);
    }

    #[test]
    fn polynomial_evaluation_is_a_homomorphism(
        fa in prop::collection::vec((0usize..4, -3i64..=3), 0..5),
        fb in prop::collection::vec((0usize..4, -3i64..=3), 0..5),
        point in prop::collection::vec(-3i64..=3, 4),
    ) {
        let build = |terms: &[(usize, i64)]| {
            let mut f = MultiPoly::constant(Q.from_i64(1));
            for &(v, c) in terms {
                f = f.add(&MultiPoly::var(Q, v).scale(&Q.from_i64(c)));
            }
            f
        };
        let (f, g) = (build(&fa), build(&fb));
        let x: Vec<FieldScalar> = point.iter().map(|&v| Q.from_i64(v)).collect();
        prop_assert_eq!(f.mul(&g).eval(&x), &f.eval(&x) * &g.eval(&x));
        prop_assert_eq!(f.add(&g).eval(&x), &f.eval(&x) + &g.eval(&x));
    }

    #[test]
    fn symbolic_operator_specializes(a in tuple_strategy(2, 2), y in tuple_strategy(2, 2)) {
        let a = to_tuple(Q, 2, 2, &a);
        let y = to_tuple(Q, 2, 2, &y);
        let sym = symbolic_l(&a);
        let l = build_l(&a, &y).unwrap();
        prop_assert_eq!(&sym.specialize(&y).unwrap(), l.matrix());
    }

    #[test]
    fn hom_dim_is_conjugation_invariant(n in 1usize..=3, p in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = MatrixTuple::random(Q, n, p, 3, &mut rng).unwrap();
        let b = MatrixTuple::random(Q, n, p, 3, &mut rng).unwrap();
        let s = ExactMatrix::random_invertible(Q, n, 3, &mut rng);
        prop_assert_eq!(hom_dim(&a, &b).unwrap(), hom_dim(&a.conjugate(&s).unwrap(), &b).unwrap());
        prop_assert_eq!(hom_dim(&a, &a).unwrap(), hom_dim(&a.conjugate(&s).unwrap(), &a).unwrap());
    }

    #[test]
    fn small_bundles_are_orbit_invariant(v in tuple_strategy(2, 1), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in [Q, f1009()] {
            let a = to_tuple(field, 2, 1, &v);
            let s = ExactMatrix::random_invertible(field, 2, 4, &mut rng);
            let b = a.conjugate(&s).unwrap();
            let (ea, eb) = (echelon_invariant(&a, None).unwrap(), echelon_invariant(&b, None).unwrap());
            prop_assert_eq!(ea.digest(), eb.digest());
        }
    }

    #[test]
    fn screen_never_separates_conjugates(n in 1usize..=3, p in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = MatrixTuple::random(Q, n, p, 3, &mut rng).unwrap();
        let b = a.conjugate(&ExactMatrix::random_invertible(Q, n, 3, &mut rng)).unwrap();
        prop_assert!(!randomized_similarity_test(&a, &b, 8, seed).unwrap().is_distinct());
    }

    #[test]
    fn certificates_verify(n in 1usize..=3, p in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = MatrixTuple::random(Q, n, p, 3, &mut rng).unwrap();
        let b = a.conjugate(&ExactMatrix::random_unimodular(Q, n, 6, &mut rng)).unwrap();
        if let Some(c) = find_similarity(&a, &b, 32, seed).unwrap() {
            prop_assert!(verify_similarity(&a, &b, &c.s).unwrap());
            prop_assert_eq!(a.conjugate(&c.s).unwrap(), b);
        }
    }

    #[test]
    fn rnf_is_a_class_function(n in 1usize..=4, v in small_matrix(4, 4), seed in any::<u64>()) {
        let a = to_matrix(Q, n, n, &v[..n * n]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = ExactMatrix::random_unimodular(Q, n, 6, &mut rng);
        let f = rnf(&a).unwrap();
        prop_assert_eq!(&rnf(&(&(&s * &a) * &s.inverse().unwrap())).unwrap(), &f);
        prop_assert_eq!(f.partition.iter().sum::<usize>(), n);
        for w in f.polys.windows(2) {
            prop_assert!(w[1].divides(&w[0]));
        }
        prop_assert!(f.polys.iter().all(|p| p.is_monic()));
        prop_assert_eq!(&rnf(&f.matrix).unwrap(), &f);
    }

    #[test]
    fn gelfand_ponomarev_satisfies_relations(n in 1usize..=3, x in small_matrix(3, 3), y in small_matrix(3, 3)) {
        let x = to_matrix(Q, n, n, &x[..n * n]);
        let y = to_matrix(Q, n, n, &y[..n * n]);
        let gp = gelfand_ponomarev(&x, &y).unwrap();
        prop_assert!(check_relations(&gp, &commuting_cube_relations()).unwrap());
    }

    #[test]
    fn general_pair_extends_six_tuples(n in 1usize..=2, v in tuple_strategy(2, 6)) {
        let t = to_tuple(Q, n, 6, &v[..n * n * 6]);
        prop_assert_eq!(general_tuple_to_pair(&t).unwrap(), tuple_to_pair(&t).unwrap());
    }

    #[test]
    fn rectangular_embedding_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n, p) = (2, 2, 2);
        let w = RectTuple::new(Q, m, n, (0..p).map(|_| ExactMatrix::random(Q, m, n, 3, &mut rng)).collect()).unwrap();
        let u = ExactMatrix::random_unimodular(Q, m, 4, &mut rng);
        let v = ExactMatrix::random_unimodular(Q, n, 4, &mut rng);
        let moved = embed_rectangular(&w.act(&u, &v).unwrap()).unwrap();
        let t = ExactMatrix::block_diag(Q, &[u, v]);
        prop_assert_eq!(embed_rectangular(&w).unwrap().conjugate(&t).unwrap(), moved);
    }
}
