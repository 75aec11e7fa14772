//! Exact invariants, normal forms and certificates for simultaneous
//! similarity of matrix tuples `(A_1, .., A_p)` under
//! `T . A = (T A_1 T^-1, .., T A_p T^-1)`.

pub mod echelon;
pub mod error;
pub mod field;
pub mod invariant;
pub mod matrix;
pub mod normal_forms;
pub mod poly;
pub mod reductions;
pub mod selftest;
pub mod subsets;
pub mod sylvester;
pub mod tuple;

pub use echelon::{EchelonForm, RowReducer};
pub use error::{Error, Result};
pub use field::{Field, FieldScalar};
pub use invariant::{
    build_f, echelon_invariant, randomized_similarity_test, same_orbit, stratum_signature,
    symbolic_l, BundleComparison, InvariantBundle, MinorTable, ScreenVerdict, SymbolicSylvester,
};
pub use matrix::{cauchy_binet_check, ExactMatrix};
pub use normal_forms::{
    companion, invariant_factors, partition_stratum, rnf, RationalNormalForm, UniPoly,
};
pub use poly::{basis_size, minor_row_count, BasisIndexer, Monomial, MultiPoly, VarIndex};
pub use reductions::{
    check_relations, embed_rectangular, gelfand_ponomarev, general_tuple_to_pair, tuple_to_pair,
    Relation,
};
pub use sylvester::{
    build_l, conjugation_identity_check, find_similarity, hom_basis, hom_dim,
    SimilarityCertificate, SylvesterMatrix,
};
pub use tuple::{MatrixTuple, RectTuple};
