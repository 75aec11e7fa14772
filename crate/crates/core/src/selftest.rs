//! Randomized identity suites over exact arithmetic.
//!
//! Instance `i` of every suite draws from its own ChaCha stream, so results
//! do not depend on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::field::Field;
use crate::matrix::{cauchy_binet_check, ExactMatrix};
use crate::reductions::{check_relations, commuting_cube_relations, gelfand_ponomarev};
use crate::sylvester::{build_l, conjugation_identity_check, hom_basis};
use crate::tuple::MatrixTuple;

const ENTRY_BOUND: i64 = 5;
const CHECK_PRIME: u64 = 1009;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<usize>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub cauchy_binet: usize,
    pub mixed_product: usize,
    pub conjugation: usize,
    pub dimension: usize,
    pub relations: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            cauchy_binet: 1000,
            mixed_product: 1000,
            conjugation: 200,
            dimension: 200,
            relations: 100,
            seed: 0,
        }
    }
}

pub fn instance_rng(seed: u64, suite: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.rotate_left(32));
    rng.set_stream(i as u64);
    rng
}

/// Alternates between Q and `F_1009` by instance parity.
fn field_for(i: usize) -> Field {
    if i.is_multiple_of(2) {
        Field::Rationals
    } else {
        Field::prime(CHECK_PRIME).expect("prime")
    }
}

fn run_suite(
    name: &'static str,
    count: usize,
    seed: u64,
    tag: u64,
    check: impl Fn(usize, &mut ChaCha8Rng) -> Result<bool> + Sync,
) -> SuiteReport {
    let failures = (0..count)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = instance_rng(seed, tag, i);
            !matches!(check(i, &mut rng), Ok(true))
        })
        .collect();
    SuiteReport {
        name,
        instances: count,
        failures,
    }
}

/// Cauchy-Binet for `r`-minors of random `m x k` times `k x q` products.
pub fn cauchy_binet_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = field_for(i);
    let (m, k, q) = (
        rng.gen_range(1..=4),
        rng.gen_range(1..=4),
        rng.gen_range(1..=4),
    );
    let r = rng.gen_range(1..=m.min(k).min(q));
    let a = ExactMatrix::random(f, m, k, ENTRY_BOUND, rng);
    let b = ExactMatrix::random(f, k, q, ENTRY_BOUND, rng);
    cauchy_binet_check(&a, &b, r)
}

/// `(A (x) B)(C (x) D) = AC (x) BD` and `vec(A X B) = (B^T (x) A) vec X`.
pub fn mixed_product_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = field_for(i);
    let mut dim = || rng.gen_range(1..=3usize);
    let (a1, a2, a3, b1, b2, b3) = (dim(), dim(), dim(), dim(), dim(), dim());
    let a = ExactMatrix::random(f, a1, a2, ENTRY_BOUND, rng);
    let c = ExactMatrix::random(f, a2, a3, ENTRY_BOUND, rng);
    let b = ExactMatrix::random(f, b1, b2, ENTRY_BOUND, rng);
    let d = ExactMatrix::random(f, b2, b3, ENTRY_BOUND, rng);
    let lhs = a.kron(&b).try_mul(&c.kron(&d))?;
    let rhs = a.try_mul(&c)?.kron(&b.try_mul(&d)?);
    let x = ExactMatrix::random(f, a2, b1, ENTRY_BOUND, rng);
    let axb = a.try_mul(&x)?.try_mul(&b)?;
    let vec_rhs = b.transpose().kron(&a).try_mul(&x.vectorize())?;
    Ok(lhs == rhs && axb.vectorize() == vec_rhs)
}

/// The conjugation identity relating `L(SAS^-1, Y)` and `L(A, Y)`.
pub fn conjugation_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = field_for(i);
    let (n, p) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
    let a = MatrixTuple::random(f, n, p, ENTRY_BOUND, rng)?;
    let y = MatrixTuple::random(f, n, p, ENTRY_BOUND, rng)?;
    let s = ExactMatrix::random_invertible(f, n, ENTRY_BOUND, rng);
    conjugation_identity_check(&a, &s, &y)
}

/// `n^2 = dim Hom + rank L`, with the hom basis checked directly: each
/// element intertwines, the elements are independent, and their count plus
/// the rank of `L^T` is `n^2`.
pub fn dimension_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = field_for(i);
    let (n, p) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let a = MatrixTuple::random(f, n, p, ENTRY_BOUND, rng)?;
    // half the time compare against a conjugate so Hom is nonzero
    let b = if rng.gen_bool(0.5) {
        a.conjugate(&ExactMatrix::random_invertible(f, n, ENTRY_BOUND, rng))?
    } else {
        MatrixTuple::random(f, n, p, ENTRY_BOUND, rng)?
    };
    let l = build_l(&a, &b)?;
    let basis = hom_basis(&a, &b)?;
    let intertwines = basis.iter().all(|z| {
        a.matrices()
            .iter()
            .zip(b.matrices())
            .all(|(ai, bi)| (z * ai) == (bi * z))
    });
    let independent = basis.is_empty() || {
        let vecs: Vec<ExactMatrix> = basis.iter().map(|z| z.vectorize().transpose()).collect();
        ExactMatrix::vstack(f, &vecs)?.rank() == basis.len()
    };
    Ok(intertwines && independent && basis.len() + l.matrix().transpose().rank() == n * n)
}

/// Gelfand-Ponomarev images satisfy the commutator and all cubic words.
pub fn relations_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let f = field_for(i);
    let n = rng.gen_range(1..=2);
    let x = ExactMatrix::random(f, n, n, ENTRY_BOUND, rng);
    let y = ExactMatrix::random(f, n, n, ENTRY_BOUND, rng);
    check_relations(&gelfand_ponomarev(&x, &y)?, &commuting_cube_relations())
}

pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteReport> {
    vec![
        run_suite(
            "cauchy-binet",
            cfg.cauchy_binet,
            cfg.seed,
            1,
            cauchy_binet_instance,
        ),
        run_suite(
            "mixed-product",
            cfg.mixed_product,
            cfg.seed,
            2,
            mixed_product_instance,
        ),
        run_suite(
            "conjugation-identity",
            cfg.conjugation,
            cfg.seed,
            3,
            conjugation_instance,
        ),
        run_suite(
            "dimension-formula",
            cfg.dimension,
            cfg.seed,
            4,
            dimension_instance,
        ),
        run_suite("relations", cfg.relations, cfg.seed, 5, relations_instance),
    ]
}
