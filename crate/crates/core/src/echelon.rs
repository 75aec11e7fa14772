//! Reduced row echelon forms and the incremental row reducer behind them.
//!
//! Pivoting is canonical: the pivot of each basis row is its first nonzero
//! column, so the result never depends on the order in which equivalent rows
//! arrive. Over `F_q` rows hold `u64` residues; over `Q` they are kept as
//! primitive integer vectors (content divided out after every elimination
//! step), in machine words until an entry outgrows `i64`, and only turned
//! into rationals when the form is finalized.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{self, Field, FieldScalar};
use crate::matrix::ExactMatrix;

/// A reduced row echelon form together with its pivot set.
///
/// Only the `rank` nonzero rows are stored; [`EchelonForm::to_matrix`] pads
/// back to the source shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EchelonForm {
    source_rows: usize,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl EchelonForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot columns, 0-based and strictly increasing.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Pivot set `F` in the 1-based convention of external formats.
    pub fn pivot_set(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p + 1).collect()
    }

    /// The nonzero rows (`rank x cols`).
    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn source_rows(&self) -> usize {
        self.source_rows
    }

    pub fn cols(&self) -> usize {
        self.basis.cols()
    }

    /// Full reduced matrix with the zero rows restored.
    pub fn to_matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(
            self.basis.field(),
            self.source_rows.max(self.rank()),
            self.cols(),
        );
        m.set_block(0, 0, &self.basis);
        m
    }

    /// Canonical kernel basis of the source matrix.
    pub fn nullspace(&self) -> Vec<Vec<FieldScalar>> {
        let field = self.basis.field();
        let cols = self.cols();
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![field.zero(); cols];
                v[free] = field.one();
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = -&self.basis[(i, free)];
                }
                v
            })
            .collect()
    }

    /// Checks every structural invariant of a reduced echelon form.
    pub fn is_reduced(&self) -> bool {
        let strictly_increasing = self.pivots.windows(2).all(|w| w[0] < w[1]);
        let rows_ok = self.pivots.iter().enumerate().all(|(i, &p)| {
            let row = self.basis.row(i);
            row[..p].iter().all(FieldScalar::is_zero)
                && row[p].is_one()
                && (0..self.rank()).all(|k| k == i || self.basis[(k, p)].is_zero())
        });
        strictly_increasing && rows_ok && self.basis.rows() == self.pivots.len()
    }
}

pub fn rref(m: &ExactMatrix) -> EchelonForm {
    let mut reducer = RowReducer::new(m.field(), m.cols());
    for i in 0..m.rows() {
        reducer.push(m.row(i));
    }
    reducer.finish()
}

pub fn rank(m: &ExactMatrix) -> usize {
    let mut reducer = RowReducer::new(m.field(), m.cols());
    for i in 0..m.rows() {
        reducer.push(m.row(i));
    }
    reducer.rank()
}

/// Streaming row reduction: rows are absorbed one at a time and only the
/// current echelon basis is kept in memory. `finish` yields exactly the RREF
/// of the stacked input.
///
/// Basis rows are sparse `(column, value)` lists sorted by column, which
/// keeps minor-coefficient rows (a handful of nonzeros each) cheap to reduce.
#[derive(Clone, Debug)]
pub enum RowReducer {
    Prime(ModReducer),
    Rational(RatReducer),
}

impl RowReducer {
    pub fn new(field: Field, cols: usize) -> Self {
        match field {
            Field::Rationals => RowReducer::Rational(RatReducer::new(cols)),
            Field::Prime(q) => RowReducer::Prime(ModReducer::new(q, cols)),
        }
    }

    /// Absorbs a dense row; returns whether the rank grew.
    pub fn push(&mut self, row: &[FieldScalar]) -> bool {
        let sparse: Vec<(usize, FieldScalar)> = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x.clone()))
            .collect();
        self.push_sparse(&sparse)
    }

    /// Absorbs a row given as `(column, value)` pairs with increasing
    /// columns; unset columns are zero.
    pub fn push_sparse(&mut self, entries: &[(usize, FieldScalar)]) -> bool {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        match self {
            RowReducer::Prime(r) => {
                let row = entries
                    .iter()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (*c as u32, x.as_prime().expect("prime-field entry")))
                    .collect();
                r.push(row)
            }
            RowReducer::Rational(r) => {
                let rats: Vec<(usize, &BigRational)> = entries
                    .iter()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (*c, x.as_rational().expect("rational entry")))
                    .collect();
                let lcm = rats
                    .iter()
                    .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
                let row = rats
                    .iter()
                    .map(|(c, x)| (*c as u32, x.numer() * (&lcm / x.denom())))
                    .collect();
                r.push_integer(row)
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            RowReducer::Prime(r) => r.pivots.len(),
            RowReducer::Rational(r) => r.pivots.len(),
        }
    }

    pub fn rows_seen(&self) -> usize {
        match self {
            RowReducer::Prime(r) => r.seen,
            RowReducer::Rational(r) => r.seen,
        }
    }

    pub fn finish(self) -> EchelonForm {
        match self {
            RowReducer::Prime(r) => r.finish(),
            RowReducer::Rational(r) => r.finish(),
        }
    }
}

/// Position at which a row with pivot `p` is inserted to keep `pivots` sorted.
fn insertion_point(pivots: &[usize], p: usize) -> usize {
    pivots.partition_point(|&x| x < p)
}

/// Lookup from column to the basis row owning it as pivot.
#[derive(Clone, Debug)]
struct PivotIndex {
    owner: Vec<Option<u32>>,
}

impl PivotIndex {
    fn new(cols: usize) -> Self {
        PivotIndex {
            owner: vec![None; cols],
        }
    }

    /// Re-indexes after inserting a row at `at`.
    fn insert(&mut self, pivots: &[usize], at: usize) {
        for (i, &p) in pivots.iter().enumerate().skip(at) {
            self.owner[p] = Some(i as u32);
        }
    }

    fn get(&self, col: u32) -> Option<usize> {
        self.owner[col as usize].map(|i| i as usize)
    }
}

type SparseMod = Vec<(u32, u64)>;

#[derive(Clone, Debug)]
pub struct ModReducer {
    q: u64,
    cols: usize,
    seen: usize,
    pivots: Vec<usize>,
    index: PivotIndex,
    basis: Vec<SparseMod>,
}

/// `dst - factor * src` over `F_q`, merged in column order.
fn mod_axpy(q: u64, dst: &[(u32, u64)], src: &[(u32, u64)], factor: u64) -> SparseMod {
    let neg = q - factor;
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i]);
            i += 1;
        } else if take_src {
            out.push((src[j].0, field::mul_mod(neg, src[j].1, q)));
            j += 1;
        } else {
            let v = field::add_mod(dst[i].1, field::mul_mod(neg, src[j].1, q), q);
            if v != 0 {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl ModReducer {
    pub fn new(q: u64, cols: usize) -> Self {
        ModReducer {
            q,
            cols,
            seen: 0,
            pivots: Vec::new(),
            index: PivotIndex::new(cols),
            basis: Vec::new(),
        }
    }

    /// Eliminates every basis pivot from `row`.
    fn reduce(&self, mut row: SparseMod) -> SparseMod {
        let mut k = 0;
        while k < row.len() {
            let (col, f) = row[k];
            match self.index.get(col) {
                Some(b) => {
                    // basis rows vanish left of their pivot, so row[..k] is untouched
                    row = mod_axpy(self.q, &row, &self.basis[b], f);
                }
                None => k += 1,
            }
        }
        row
    }

    pub fn push(&mut self, row: SparseMod) -> bool {
        self.seen += 1;
        let mut row = self.reduce(row);
        let Some(&(lead, lead_val)) = row.first() else {
            return false;
        };
        let inv = field::inv_mod(lead_val, self.q);
        for (_, x) in row.iter_mut() {
            *x = field::mul_mod(*x, inv, self.q);
        }
        let at = insertion_point(&self.pivots, lead as usize);
        self.pivots.insert(at, lead as usize);
        self.basis.insert(at, row);
        self.index.insert(&self.pivots, at);
        true
    }

    fn finish(mut self) -> EchelonForm {
        let r = self.pivots.len();
        for i in (0..r).rev() {
            let mut row = std::mem::take(&mut self.basis[i]);
            let mut k = 1;
            while k < row.len() {
                let (col, f) = row[k];
                match self.index.get(col) {
                    Some(b) => row = mod_axpy(self.q, &row, &self.basis[b], f),
                    None => k += 1,
                }
            }
            self.basis[i] = row;
        }
        let q = self.q;
        let mut m = ExactMatrix::zeros(Field::Prime(q), r, self.cols);
        for (i, row) in self.basis.iter().enumerate() {
            for &(c, v) in row {
                m[(i, c as usize)] = FieldScalar::Prime {
                    value: v,
                    modulus: q,
                };
            }
        }
        EchelonForm {
            source_rows: self.seen,
            basis: m,
            pivots: self.pivots,
        }
    }
}

/// Sparse integer row; `Small` as long as every entry fits in `i64`.
#[derive(Clone, Debug)]
enum IntRow {
    Small(Vec<(u32, i64)>),
    Big(Vec<(u32, BigInt)>),
}

impl IntRow {
    fn from_big(row: Vec<(u32, BigInt)>) -> Self {
        let small: Option<Vec<(u32, i64)>> = row
            .iter()
            .map(|(c, x)| x.to_i64().map(|v| (*c, v)))
            .collect();
        match small {
            Some(s) => IntRow::Small(s),
            None => IntRow::Big(row),
        }
    }

    fn to_big(&self) -> Vec<(u32, BigInt)> {
        match self {
            IntRow::Small(s) => s.iter().map(|&(c, v)| (c, BigInt::from(v))).collect(),
            IntRow::Big(b) => b.clone(),
        }
    }

    fn len(&self) -> usize {
        match self {
            IntRow::Small(s) => s.len(),
            IntRow::Big(b) => b.len(),
        }
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn col(&self, k: usize) -> u32 {
        match self {
            IntRow::Small(s) => s[k].0,
            IntRow::Big(b) => b[k].0,
        }
    }

    fn value(&self, k: usize) -> BigInt {
        match self {
            IntRow::Small(s) => BigInt::from(s[k].1),
            IntRow::Big(b) => b[k].1.clone(),
        }
    }

    /// Divides out the content and makes the leading entry positive.
    fn make_primitive(&mut self) {
        match self {
            IntRow::Small(s) => {
                if s.is_empty() {
                    return;
                }
                let mut g: u64 = 0;
                for &(_, x) in s.iter() {
                    g = gcd_u64(g, x.unsigned_abs());
                    if g == 1 {
                        break;
                    }
                }
                let neg = s[0].1 < 0;
                if g == 1 && !neg {
                    return;
                }
                // g <= |x| for some x, so it fits in i64 unless x == i64::MIN
                if g > i64::MAX as u64 {
                    *self = IntRow::Big(self.to_big());
                    return self.make_primitive();
                }
                let d = if neg { -(g as i64) } else { g as i64 };
                for (_, x) in s.iter_mut() {
                    *x /= d;
                }
            }
            IntRow::Big(b) => {
                make_primitive_big(b);
                if b.iter().all(|(_, x)| x.bits() < 63) {
                    *self = IntRow::from_big(std::mem::take(b));
                }
            }
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn make_primitive_big(row: &mut [(u32, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Sparse merge computing `dst * a - src * m`.
fn combine<T: Clone>(
    dst: &[(u32, T)],
    src: &[(u32, T)],
    mut scale_dst: impl FnMut(&T) -> Option<T>,
    mut scale_src: impl FnMut(&T) -> Option<T>,
    mut both: impl FnMut(&T, &T) -> Option<Option<T>>,
) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push((dst[i].0, scale_dst(&dst[i].1)?));
            i += 1;
        } else if take_src {
            out.push((src[j].0, scale_src(&src[j].1)?));
            j += 1;
        } else {
            if let Some(v) = both(&dst[i].1, &src[j].1)? {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Cancels `dst`'s entry `dst_p` in the pivot column of `src` (whose first
/// entry is its pivot): `dst * (src_p / g) - src * (dst_p / g)`.
fn int_eliminate(dst: &IntRow, src: &IntRow, k: usize) -> IntRow {
    if let (IntRow::Small(d), IntRow::Small(s)) = (dst, src) {
        let (dp, sp) = (d[k].1 as i128, s[0].1 as i128);
        let g = gcd_u64(dp.unsigned_abs() as u64, sp.unsigned_abs() as u64) as i128;
        let (a, m) = (sp / g, dp / g);
        let fit = |v: i128| i64::try_from(v).ok();
        let out = combine(
            d,
            s,
            |x| fit(*x as i128 * a),
            |y| fit(-(*y as i128) * m),
            |x, y| {
                let v = fit(*x as i128 * a - *y as i128 * m)?;
                Some((v != 0).then_some(v))
            },
        );
        if let Some(out) = out {
            return IntRow::Small(out);
        }
    }
    let (d, s) = (dst.to_big(), src.to_big());
    let (dp, sp) = (&d[k].1, &s[0].1);
    let g = dp.gcd(sp);
    let a = sp / &g;
    let m = dp / &g;
    let out = combine(
        &d,
        &s,
        |x| Some(x * &a),
        |y| Some(-(y * &m)),
        |x, y| {
            let v = x * &a - y * &m;
            Some((!v.is_zero()).then_some(v))
        },
    )
    .expect("big arithmetic cannot overflow");
    IntRow::Big(out)
}

#[derive(Clone, Debug)]
pub struct RatReducer {
    cols: usize,
    seen: usize,
    pivots: Vec<usize>,
    index: PivotIndex,
    /// Primitive integer rows with positive pivot entry.
    basis: Vec<IntRow>,
}

impl RatReducer {
    pub fn new(cols: usize) -> Self {
        RatReducer {
            cols,
            seen: 0,
            pivots: Vec::new(),
            index: PivotIndex::new(cols),
            basis: Vec::new(),
        }
    }

    /// Absorbs an integer row (any row scaling is irrelevant to the span).
    pub fn push_integer(&mut self, row: Vec<(u32, BigInt)>) -> bool {
        self.seen += 1;
        let row: Vec<(u32, BigInt)> = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut row = IntRow::from_big(row);
        if row.is_empty() {
            return false;
        }
        row.make_primitive();
        let mut k = 0;
        while k < row.len() {
            match self.index.get(row.col(k)) {
                Some(b) => {
                    row = int_eliminate(&row, &self.basis[b], k);
                    if row.is_empty() {
                        return false;
                    }
                    row.make_primitive();
                }
                None => k += 1,
            }
        }
        let lead = row.col(0) as usize;
        let at = insertion_point(&self.pivots, lead);
        self.pivots.insert(at, lead);
        self.basis.insert(at, row);
        self.index.insert(&self.pivots, at);
        true
    }

    fn finish(mut self) -> EchelonForm {
        let r = self.pivots.len();
        for i in (0..r).rev() {
            let mut row = std::mem::replace(&mut self.basis[i], IntRow::Small(Vec::new()));
            let mut k = 1;
            while k < row.len() {
                match self.index.get(row.col(k)) {
                    Some(b) => {
                        row = int_eliminate(&row, &self.basis[b], k);
                        row.make_primitive();
                    }
                    None => k += 1,
                }
            }
            self.basis[i] = row;
        }
        let mut m = ExactMatrix::zeros(Field::Rationals, r, self.cols);
        for (i, row) in self.basis.iter().enumerate() {
            let lead = row.value(0);
            for k in 0..row.len() {
                m[(i, row.col(k) as usize)] =
                    FieldScalar::Rational(BigRational::new(row.value(k), lead.clone()));
            }
        }
        EchelonForm {
            source_rows: self.seen,
            basis: m,
            pivots: self.pivots,
        }
    }
}
