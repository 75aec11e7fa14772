//! Shared inputs for the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tuplesim::{Field, MatrixTuple};

pub const BENCH_SEED: u64 = 17;

/// A reproducible random tuple in `V(n,p)` with entries in `[-3, 3]`.
pub fn random_tuple(field: Field, n: usize, p: usize) -> MatrixTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED);
    MatrixTuple::random(field, n, p, 3, &mut rng).expect("valid shape")
}

pub fn f1009() -> Field {
    Field::prime(1009).expect("prime")
}
