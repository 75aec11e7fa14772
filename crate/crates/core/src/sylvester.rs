//! The Sylvester operators `L(A, C): Z -> (Z A_i - C_i Z)_i`, homomorphism
//! spaces between the modules they define, and similarity certificates.
//!
//! With column-stacking vectorization the block for `i` is
//! `A_i^T (x) I_n - I_n (x) C_i`, so `ker L(A, C)` is exactly the space of
//! `Z` with `Z A_i = C_i Z` for every `i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::ExactMatrix;
use crate::tuple::MatrixTuple;

/// Coefficient range used for random combinations over Q.
pub const RANDOM_COEFF_BOUND: i64 = 5;

/// Default number of random trials for certificate search.
pub const DEFAULT_TRIALS: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterMatrix {
    matrix: ExactMatrix,
    source: MatrixTuple,
    target: MatrixTuple,
}

impl SylvesterMatrix {
    /// The `p n^2 x n^2` matrix.
    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &MatrixTuple {
        &self.source
    }

    pub fn target(&self) -> &MatrixTuple {
        &self.target
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// `L(A, C)` stacked over the tuple index.
pub fn build_l(a: &MatrixTuple, c: &MatrixTuple) -> Result<SylvesterMatrix> {
    a.check_compatible(c)?;
    let n = a.n();
    let field = a.field();
    let id = ExactMatrix::identity(field, n);
    let blocks: Vec<ExactMatrix> = a
        .matrices()
        .iter()
        .zip(c.matrices())
        .map(|(ai, ci)| &ai.transpose().kron(&id) - &id.kron(ci))
        .collect();
    Ok(SylvesterMatrix {
        matrix: ExactMatrix::vstack(field, &blocks)?,
        source: a.clone(),
        target: c.clone(),
    })
}

/// `dim Hom(M_A, M_B) = n^2 - rank L(A, B)`.
pub fn hom_dim(a: &MatrixTuple, b: &MatrixTuple) -> Result<usize> {
    let l = build_l(a, b)?;
    Ok(a.n() * a.n() - l.rank())
}

/// Canonical basis of `{Z : Z A_i = B_i Z for all i}`.
pub fn hom_basis(a: &MatrixTuple, b: &MatrixTuple) -> Result<Vec<ExactMatrix>> {
    let l = build_l(a, b)?;
    l.matrix
        .nullspace()
        .iter()
        .map(|v| ExactMatrix::unvectorize(v, a.field()))
        .collect()
}

/// An invertible `S` with `S A_i S^-1 = B_i`, plus the trial that found it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityCertificate {
    pub s: ExactMatrix,
    pub seed: u64,
    pub trial: usize,
}

/// Exact check that `S` is invertible and `S A_i = B_i S` for every `i`.
pub fn verify_similarity(a: &MatrixTuple, b: &MatrixTuple, s: &ExactMatrix) -> Result<bool> {
    a.check_compatible(b)?;
    if s.shape() != (a.n(), a.n()) {
        return Err(Error::ShapeMismatch(
            "certificate has the wrong size".into(),
        ));
    }
    if s.det()?.is_zero() {
        return Ok(false);
    }
    Ok(a.matrices()
        .iter()
        .zip(b.matrices())
        .all(|(ai, bi)| (s * ai) == (bi * s)))
}

/// Randomized search for a similarity certificate inside `Hom(M_A, M_B)`.
///
/// Draws `trials` random combinations of the hom basis and returns the first
/// invertible one, in trial order. `None` does not prove non-similarity.
pub fn find_similarity(
    a: &MatrixTuple,
    b: &MatrixTuple,
    trials: usize,
    seed: u64,
) -> Result<Option<SimilarityCertificate>> {
    let basis = hom_basis(a, b)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let field = a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<Vec<_>> = (0..trials)
        .map(|_| {
            basis
                .iter()
                .map(|_| random_coeff(field, &mut rng))
                .collect()
        })
        .collect();
    let found = coeffs.par_iter().enumerate().find_map_first(|(trial, cs)| {
        let mut s = ExactMatrix::zeros(field, a.n(), a.n());
        for (c, z) in cs.iter().zip(&basis) {
            if !c.is_zero() {
                s = &s + &z.scale(c);
            }
        }
        match verify_similarity(a, b, &s) {
            Ok(true) => Some(SimilarityCertificate { s, seed, trial }),
            _ => None,
        }
    });
    Ok(found)
}

fn random_coeff(field: Field, rng: &mut ChaCha8Rng) -> crate::field::FieldScalar {
    field.random(rng, RANDOM_COEFF_BOUND)
}

/// Checks `L(B,Y) = diag(T (x) I, ..) L(A,Y) (T^-1 (x) I)` with
/// `B = S A S^-1` and `T = (S^T)^-1`.
pub fn conjugation_identity_check(
    a: &MatrixTuple,
    s: &ExactMatrix,
    y: &MatrixTuple,
) -> Result<bool> {
    a.check_compatible(y)?;
    let field = a.field();
    let n = a.n();
    let t = s.transpose().inverse().map_err(|_| Error::SingularMatrix)?;
    let b = a.conjugate(s)?;
    let id = ExactMatrix::identity(field, n);
    let lhs = build_l(&b, y)?;
    let l_a = build_l(a, y)?;
    let t_block = t.kron(&id);
    let left = ExactMatrix::block_diag(field, &vec![t_block; a.p()]);
    let right = s.transpose().kron(&id);
    let rhs = left.try_mul(l_a.matrix())?.try_mul(&right)?;
    Ok(lhs.matrix() == &rhs)
}
