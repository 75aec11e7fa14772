//! The complete similarity invariant of a matrix tuple.
//!
//! For every `r` in `1..=n^2` the `r`-minors of the symbolic operator
//! `L(A, Y)` (with `Y` a tuple of indeterminates) are expanded into
//! coefficient rows over the graded monomial basis; the reduced row echelon
//! form `E(r, A)` of the stacked rows depends only on the orbit of `A`, and
//! the full list of them separates orbits.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::echelon::{EchelonForm, RowReducer};
use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::matrix::ExactMatrix;
use crate::poly::{minor_row_count, BasisIndexer, Monomial, MultiPoly, VarIndex};
use crate::subsets::{BinomialTable, Combinations};
use crate::sylvester::build_l;
use crate::tuple::MatrixTuple;

/// Coefficient range for random `Y` over Q.
pub const SCREEN_BOUND: i64 = 5;

/// Largest `L(n,p,r) * N(n,p,r)` cell count, over all levels, for which a
/// full bundle is considered affordable.
pub const DESK_SCALE_CELLS: u128 = 1_000_000;

/// `L(A, Y)` with `Y` symbolic: a `p n^2 x n^2` grid of affine-linear
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicSylvester {
    n: usize,
    p: usize,
    field: Field,
    entries: Vec<MultiPoly>,
}

impl SymbolicSylvester {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.p * self.n * self.n
    }

    pub fn cols(&self) -> usize {
        self.n * self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &MultiPoly {
        &self.entries[row * self.cols() + col]
    }

    /// Substitutes a concrete tuple for `Y`.
    pub fn specialize(&self, y: &MatrixTuple) -> Result<ExactMatrix> {
        if y.n() != self.n || y.p() != self.p || y.field() != self.field {
            return Err(Error::ShapeMismatch(
                "specialization tuple does not match".into(),
            ));
        }
        let point: Vec<FieldScalar> = (0..self.p * self.n * self.n)
            .map(|id| {
                let v = VarIndex::from_id(id, self.n);
                y.get(v.l - 1)[(v.s - 1, v.t - 1)].clone()
            })
            .collect();
        Ok(ExactMatrix::from_fn(
            self.field,
            self.rows(),
            self.cols(),
            |i, j| self.entry(i, j).eval(&point),
        ))
    }
}

/// Builds `L(A, Y)` with `Y` symbolic.
///
/// Row `(l, i, q)` and column `(j, r)` (blocks of `n`) hold
/// `A_l[j, i] [q = r] - [i = j] y_{q r, l}`.
pub fn symbolic_l(a: &MatrixTuple) -> SymbolicSylvester {
    let (n, p, field) = (a.n(), a.p(), a.field());
    let nn = n * n;
    let mut entries = Vec::with_capacity(p * nn * nn);
    for l in 0..p {
        for row in 0..nn {
            let (i, q) = (row / n, row % n);
            for col in 0..nn {
                let (j, r) = (col / n, col % n);
                let mut e = MultiPoly::zero(field);
                if q == r {
                    e.add_term(Monomial::one(), a.get(l)[(j, i)].clone());
                }
                if i == j {
                    let var = VarIndex {
                        s: q + 1,
                        t: r + 1,
                        l: l + 1,
                    }
                    .id(n);
                    e.add_term(Monomial::var(var), -field.one());
                }
                entries.push(e);
            }
        }
    }
    SymbolicSylvester {
        n,
        p,
        field,
        entries,
    }
}

/// All `r`-minors of a symbolic operator, indexed `[beta rank][alpha rank]`.
///
/// Minors are expanded along the last column of each column prefix, so the
/// partial minors for a prefix are shared by every column set extending it.
/// Each level is computed in parallel; the result does not depend on the
/// thread count.
fn all_minors(sym: &SymbolicSylvester, r: usize) -> Vec<Vec<MultiPoly>> {
    let rows = sym.rows();
    let cols = sym.cols();
    let table = BinomialTable::new(rows, r);
    let one = MultiPoly::constant(sym.field.one());

    // stack[j] holds minors for column prefix of length j + 1
    let mut prefix: Vec<usize> = Vec::new();
    let mut stack: Vec<Vec<MultiPoly>> = Vec::new();
    let mut out = Vec::new();

    for beta in Combinations::new(cols, r) {
        let common = prefix.iter().zip(&beta).take_while(|(a, b)| a == b).count();
        prefix.truncate(common);
        stack.truncate(common);
        for j in common..r {
            let c = beta[j];
            let size = j + 1;
            let count = table.get(rows, size);
            let level: Vec<MultiPoly> = {
                let prev = if j == 0 { None } else { Some(&stack[j - 1]) };
                (0..count)
                    .into_par_iter()
                    .map_init(
                        || (Vec::with_capacity(size), Vec::with_capacity(size)),
                        |(alpha, rest), rank| {
                            table.unrank(rows, size, rank, alpha);
                            let mut acc = MultiPoly::zero(sym.field);
                            for k in 0..size {
                                let entry = sym.entry(alpha[k], c);
                                if entry.is_zero() {
                                    continue;
                                }
                                rest.clear();
                                rest.extend(
                                    alpha
                                        .iter()
                                        .enumerate()
                                        .filter(|&(i, _)| i != k)
                                        .map(|(_, &x)| x),
                                );
                                let sub = match prev {
                                    None => &one,
                                    Some(prev) => &prev[table.rank(rows, rest)],
                                };
                                if sub.is_zero() {
                                    continue;
                                }
                                if (k + j) % 2 == 1 {
                                    acc.add_scaled_product(&entry.scale(&-sym.field.one()), sub);
                                } else {
                                    acc.add_scaled_product(entry, sub);
                                }
                            }
                            acc
                        },
                    )
                    .collect()
            };
            prefix.push(c);
            stack.push(level);
        }
        out.push(stack[r - 1].clone());
    }
    out
}

/// `F(r, A)`: coefficient rows of all `r`-minors of `L(A, Y)` in the graded
/// monomial basis, rows ordered lexicographically by `(alpha, beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTable {
    pub r: usize,
    pub matrix: ExactMatrix,
}

fn check_level(a: &MatrixTuple, r: usize) -> Result<()> {
    let nn = a.n() * a.n();
    if r == 0 || r > nn {
        return Err(Error::DegenerateInput(format!(
            "minor order {r} outside 1..={nn}"
        )));
    }
    Ok(())
}

/// Sparse coefficient rows of all `r`-minors, in `(alpha, beta)` order.
fn minor_rows(
    a: &MatrixTuple,
    sym: &SymbolicSylvester,
    r: usize,
) -> Result<Vec<Vec<(usize, FieldScalar)>>> {
    let indexer = BasisIndexer::new(a.n(), a.p(), r)?;
    let minors = all_minors(sym, r);
    let n_alpha = minors.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(n_alpha * minors.len());
    for alpha in 0..n_alpha {
        for per_beta in &minors {
            rows.push(indexer.sparse_row(&per_beta[alpha])?);
        }
    }
    Ok(rows)
}

pub fn build_f(r: usize, a: &MatrixTuple) -> Result<MinorTable> {
    check_level(a, r)?;
    let sym = symbolic_l(a);
    let cols = BasisIndexer::new(a.n(), a.p(), r)?.len();
    let rows = minor_rows(a, &sym, r)?;
    debug_assert_eq!(rows.len() as u128, minor_row_count(a.n(), a.p(), r)?);
    let mut m = ExactMatrix::zeros(a.field(), rows.len(), cols);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row {
            m[(i, j)] = x;
        }
    }
    Ok(MinorTable { r, matrix: m })
}

/// `E(r, A)`, streaming the minor rows straight into the row reducer.
pub fn echelon_level(a: &MatrixTuple, r: usize) -> Result<EchelonForm> {
    check_level(a, r)?;
    let sym = symbolic_l(a);
    echelon_level_with(a, &sym, r)
}

fn echelon_level_with(a: &MatrixTuple, sym: &SymbolicSylvester, r: usize) -> Result<EchelonForm> {
    let cols = BasisIndexer::new(a.n(), a.p(), r)?.len();
    let mut reducer = RowReducer::new(a.field(), cols);
    for row in minor_rows(a, sym, r)? {
        reducer.push_sparse(&row);
    }
    Ok(reducer.finish())
}

/// One level of the invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLevel {
    pub r: usize,
    pub echelon: EchelonForm,
}

/// `(E(1, A), .., E(r_max, A))` with ranks, pivot sets and a SHA-256 digest
/// of the canonical serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBundle {
    n: usize,
    p: usize,
    field: Field,
    levels: Vec<InvariantLevel>,
    canonical: String,
    digest: String,
}

/// Outcome of comparing two (possibly partial) bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BundleComparison {
    /// Levels differ at this `r`: the tuples are not similar.
    Distinct { r: usize },
    /// Complete bundles agree: the tuples are similar.
    Equal,
    /// All computed levels agree but at least one bundle is partial.
    Undecided { levels: usize },
}

impl InvariantBundle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn levels(&self) -> &[InvariantLevel] {
        &self.levels
    }

    /// Highest level computed.
    pub fn r_max(&self) -> usize {
        self.levels.len()
    }

    pub fn is_complete(&self) -> bool {
        self.levels.len() == self.n * self.n
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.echelon.rank()).collect()
    }

    /// The canonical text serialization.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    /// Lowercase hex SHA-256 of [`canonical`](Self::canonical).
    pub fn digest(&self) -> &str {
        &self.digest
    }

    /// Pivot sets `F_1, .., F_{n^2}` (1-based), identifying the stratum.
    pub fn stratum_signature(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_complete() {
            return Err(Error::PartialBundle {
                computed: self.r_max(),
                required: self.n * self.n,
            });
        }
        Ok(self.levels.iter().map(|l| l.echelon.pivot_set()).collect())
    }

    pub fn compare(&self, other: &Self) -> Result<BundleComparison> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.id(), other.field.id()));
        }
        if self.n != other.n || self.p != other.p {
            return Err(Error::ShapeMismatch(format!(
                "V({},{}) vs V({},{})",
                self.n, self.p, other.n, other.p
            )));
        }
        for (x, y) in self.levels.iter().zip(&other.levels) {
            if x.echelon != y.echelon {
                return Ok(BundleComparison::Distinct { r: x.r });
            }
        }
        if self.is_complete() && other.is_complete() {
            Ok(BundleComparison::Equal)
        } else {
            Ok(BundleComparison::Undecided {
                levels: self.r_max().min(other.r_max()),
            })
        }
    }
}

/// Canonical serialization: header `n p field r_max`; per level a line
/// `r rank pivots` (1-based, comma separated) followed by the nonzero rows of
/// `E(r, A)`, entries separated by single spaces.
fn serialize(n: usize, p: usize, field: Field, levels: &[InvariantLevel]) -> String {
    let mut out = String::new();
    writeln!(out, "{n} {p} {} {}", field.id(), levels.len()).unwrap();
    for level in levels {
        let pivots: Vec<String> = level
            .echelon
            .pivot_set()
            .iter()
            .map(ToString::to_string)
            .collect();
        writeln!(
            out,
            "{} {} {}",
            level.r,
            level.echelon.rank(),
            pivots.join(",")
        )
        .unwrap();
        let basis = level.echelon.basis();
        for i in 0..basis.rows() {
            let mut first = true;
            for x in basis.row(i) {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{x}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

/// Whether a full bundle for `V(n,p)` stays within [`DESK_SCALE_CELLS`].
pub fn full_bundle_feasible(n: usize, p: usize) -> bool {
    (1..=n * n).all(|r| {
        let rows = minor_row_count(n, p, r).unwrap_or(u128::MAX);
        let cols = crate::poly::basis_size(n, p, r).unwrap_or(u128::MAX);
        rows.saturating_mul(cols) <= DESK_SCALE_CELLS
    })
}

/// Computes `E(r, A)` for `r = 1..=r_max` (default `n^2`).
///
/// A bundle with `r_max < n^2` is partial: it can prove non-similarity but
/// never similarity.
pub fn echelon_invariant(a: &MatrixTuple, r_max: Option<usize>) -> Result<InvariantBundle> {
    let nn = a.n() * a.n();
    let r_max = r_max.unwrap_or(nn);
    if r_max == 0 || r_max > nn {
        return Err(Error::DegenerateInput(format!(
            "r_max = {r_max} outside 1..={nn}"
        )));
    }
    let sym = symbolic_l(a);
    let levels = (1..=r_max)
        .map(|r| {
            Ok(InvariantLevel {
                r,
                echelon: echelon_level_with(a, &sym, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let canonical = serialize(a.n(), a.p(), a.field(), &levels);
    let digest = hex::encode(Sha256::digest(canonical.as_bytes()));
    Ok(InvariantBundle {
        n: a.n(),
        p: a.p(),
        field: a.field(),
        levels,
        canonical,
        digest,
    })
}

/// Exact orbit test via complete bundles.
pub fn same_orbit(a: &MatrixTuple, b: &MatrixTuple) -> Result<bool> {
    a.check_compatible(b)?;
    let ba = echelon_invariant(a, None)?;
    let bb = echelon_invariant(b, None)?;
    same_orbit_bundles(&ba, &bb)
}

/// Orbit decision from precomputed bundles; both must be complete.
pub fn same_orbit_bundles(a: &InvariantBundle, b: &InvariantBundle) -> Result<bool> {
    for bundle in [a, b] {
        if !bundle.is_complete() {
            return Err(Error::PartialBundle {
                computed: bundle.r_max(),
                required: bundle.n * bundle.n,
            });
        }
    }
    Ok(a.compare(b)? == BundleComparison::Equal)
}

pub fn stratum_signature(a: &MatrixTuple) -> Result<Vec<Vec<usize>>> {
    echelon_invariant(a, None)?.stratum_signature()
}

/// Result of the rank screen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScreenVerdict {
    /// `rank L(A, Y) != rank L(B, Y)` at the witness: the tuples are not similar.
    Distinct {
        seed: u64,
        trial: usize,
        witness: MatrixTuple,
        rank_a: usize,
        rank_b: usize,
    },
    /// No probe separated the tuples; nothing is concluded.
    Consistent { seed: u64, trials: usize },
}

impl ScreenVerdict {
    pub fn is_distinct(&self) -> bool {
        matches!(self, ScreenVerdict::Distinct { .. })
    }
}

/// Probe tuple for a given trial: the zero tuple, then `A`, then `B`, then
/// uniformly random tuples.
fn screen_probe(
    a: &MatrixTuple,
    b: &MatrixTuple,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> MatrixTuple {
    match trial {
        0 => MatrixTuple::zero(a.field(), a.n(), a.p()).expect("valid shape"),
        1 => a.clone(),
        2 => b.clone(),
        _ => MatrixTuple::random(a.field(), a.n(), a.p(), SCREEN_BOUND, rng).expect("valid shape"),
    }
}

/// One-sided similarity screen: compares `rank L(A, Y)` and `rank L(B, Y)`
/// over `trials` probes. A rank difference proves non-similarity.
pub fn randomized_similarity_test(
    a: &MatrixTuple,
    b: &MatrixTuple,
    trials: usize,
    seed: u64,
) -> Result<ScreenVerdict> {
    a.check_compatible(b)?;
    if let Field::Prime(q) = a.field() {
        let need = 2 * (a.n() * a.n()) as u64;
        if q <= need {
            return Err(Error::DegenerateInput(format!(
                "screen needs q > 2 n^2 = {need}, got q = {q}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let y = screen_probe(a, b, trial, &mut rng);
        let rank_a = build_l(a, &y)?.rank();
        let rank_b = build_l(b, &y)?.rank();
        if rank_a != rank_b {
            return Ok(ScreenVerdict::Distinct {
                seed,
                trial,
                witness: y,
                rank_a,
                rank_b,
            });
        }
    }
    Ok(ScreenVerdict::Consistent { seed, trials })
}

/// Whether some row of `F(r, A)` has a nonzero coefficient on a degree-`r`
/// monomial.
pub fn has_degree_witness(table: &MinorTable, n: usize, p: usize) -> Result<bool> {
    let start = crate::poly::basis_size(n, p, table.r - 1)? as usize;
    let m = &table.matrix;
    Ok((0..m.rows()).any(|i| m.row(i)[start..].iter().any(|x| !x.is_zero())))
}
