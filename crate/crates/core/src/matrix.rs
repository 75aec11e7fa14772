//! Dense exact matrices over a [`Field`].
//!
//! Indices in this API are 0-based; textual formats and pivot sets printed
//! for users are 1-based.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::echelon::{self, EchelonForm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::subsets::Combinations;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                debug_assert_eq!(v.field(), field);
                data.push(v);
            }
        }
        ExactMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from row-major data; every entry must belong to `field`.
    pub fn from_vec(
        field: Field,
        rows: usize,
        cols: usize,
        data: Vec<FieldScalar>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(field.id(), bad.field().id()));
        }
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn column(field: Field, entries: Vec<FieldScalar>) -> Result<Self> {
        let n = entries.len();
        Self::from_vec(field, n, 1, entries)
    }

    pub fn diagonal(field: Field, diag: &[FieldScalar]) -> Self {
        let n = diag.len();
        Self::from_fn(field, n, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                field.zero()
            }
        })
    }

    /// Entries uniform in `[-bound, bound]` over Q, uniform over `F_q`.
    pub fn random<R: Rng + ?Sized>(
        field: Field,
        rows: usize,
        cols: usize,
        bound: i64,
        rng: &mut R,
    ) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng, bound))
    }

    /// Random invertible matrix, obtained by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        bound: i64,
        rng: &mut R,
    ) -> Self {
        loop {
            let m = Self::random(field, n, n, bound, rng);
            if !m.det().expect("square").is_zero() {
                return m;
            }
        }
    }

    /// Random integer matrix with determinant ±1: a product of random
    /// elementary shears and sign flips.
    pub fn random_unimodular<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        steps: usize,
        rng: &mut R,
    ) -> Self {
        let mut m = Self::identity(field, n);
        if n < 2 {
            if rng.gen_bool(0.5) {
                m = -&m;
            }
            return m;
        }
        for _ in 0..steps {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = field.from_i64(rng.gen_range(-2..=2));
            // row_i += c * row_j
            for k in 0..n {
                let v = &m[(i, k)] + &(&c * &m[(j, k)]);
                m[(i, k)] = v;
            }
        }
        if rng.gen_bool(0.5) {
            for k in 0..n {
                let v = -&m[(0, k)];
                m[(0, k)] = v;
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| {
            self[(j, i)].clone()
        })
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.id(), other.field.id()));
        }
        Ok(())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(&FieldScalar, &FieldScalar) -> FieldScalar,
    ) -> Result<Self> {
        self.check_field(rhs)?;
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Kronecker product `[a_ij B]`, shape `(ms) x (nt)`.
    pub fn kron(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "kron across fields");
        let (m, n) = self.shape();
        let (s, t) = rhs.shape();
        Self::from_fn(self.field, m * s, n * t, |row, col| {
            let (i, q) = (row / s, row % s);
            let (j, r) = (col / t, col % t);
            &self[(i, j)] * &rhs[(q, r)]
        })
    }

    /// Stacks the columns top to bottom into an `n^2 x 1` column.
    pub fn vectorize(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|ij| self[ij].clone())
            .collect();
        ExactMatrix {
            field: self.field,
            rows: self.rows * self.cols,
            cols: 1,
            data,
        }
    }

    /// Inverse of [`vectorize`](Self::vectorize) for square results.
    pub fn unvectorize(v: &[FieldScalar], field: Field) -> Result<Self> {
        let n = (v.len() as f64).sqrt().round() as usize;
        if n * n != v.len() || n == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} is not a nonzero square",
                v.len()
            )));
        }
        Ok(Self::from_fn(field, n, n, |i, j| v[j * n + i].clone()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Self) {
        assert!(row0 + block.rows <= self.rows && col0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row0 + i, col0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.field, rows, cols, |i, j| {
            self[(row0 + i, col0 + j)].clone()
        })
    }

    pub fn block_diag(field: Field, blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn vstack(field: Field, blocks: &[Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols || b.field != field) {
            return Err(Error::DimensionMismatch(
                "vstack of incompatible blocks".into(),
            ));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<FieldScalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "det of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det = &det * &p;
            let p_inv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] * &p_inv;
                for j in col..n {
                    let v = &a[r * n + j] - &(&factor * &a[col * n + j]);
                    a[r * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    /// `det M[alpha, beta]` for strictly increasing 0-based index sets.
    pub fn minor(&self, alpha: &[usize], beta: &[usize]) -> Result<FieldScalar> {
        if alpha.len() != beta.len() {
            return Err(Error::SubsetShapeMismatch(format!(
                "|alpha| = {} but |beta| = {}",
                alpha.len(),
                beta.len()
            )));
        }
        let increasing = |s: &[usize], bound: usize| {
            s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&i| i < bound)
        };
        if !increasing(alpha, self.rows) || !increasing(beta, self.cols) {
            return Err(Error::SubsetShapeMismatch(
                "index sets must be strictly increasing and in range".into(),
            ));
        }
        self.submatrix(alpha, beta).det()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(self.field, n));
        let e = aug.rref();
        if e.rank() < n || e.pivots()[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(e.basis().block(0, n, n, n))
    }

    pub fn rref(&self) -> EchelonForm {
        echelon::rref(self)
    }

    pub fn rank(&self) -> usize {
        echelon::rank(self)
    }

    /// Canonical kernel basis: one vector per free column, in increasing
    /// column order, with that free variable set to 1.
    pub fn nullspace(&self) -> Vec<Vec<FieldScalar>> {
        self.rref().nullspace()
    }

    /// Parses the text format: `rows cols` then row-major exact literals.
    pub fn parse_text(field: Field, text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        if rows == 0 || cols == 0 {
            return Err(Error::DegenerateInput(format!("{rows}x{cols} matrix")));
        }
        let data = tokens
            .map(|t| field.parse_scalar(t))
            .collect::<Result<Vec<_>>>()?;
        if data.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Self::from_vec(field, rows, cols, data)
    }

    /// Serializes to the text format (one matrix row per line).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = FieldScalar;
    fn index(&self, (i, j): (usize, usize)) -> &FieldScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    /// Panics on shape mismatch; use [`ExactMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix product shapes")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix sum shapes")
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix difference shapes")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&-self.field.one())
    }
}

/// Checks the Cauchy-Binet identity for all `r`-minors of `A B`:
/// `det (AB)[a,b] = sum_g det A[a,g] det B[g,b]`.
pub fn cauchy_binet_check(a: &ExactMatrix, b: &ExactMatrix, r: usize) -> Result<bool> {
    let c = a.try_mul(b)?;
    let (m, n, q) = (a.rows(), a.cols(), b.cols());
    if r == 0 || r > m.min(n).min(q) {
        return Err(Error::DimensionMismatch(format!(
            "r = {r} outside 1..=min({m},{n},{q})"
        )));
    }
    let gammas: Vec<Vec<usize>> = Combinations::new(n, r).collect();
    let b_minors: Vec<Vec<FieldScalar>> = gammas
        .iter()
        .map(|g| {
            Combinations::new(q, r)
                .map(|beta| b.minor(g, &beta))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    for alpha in Combinations::new(m, r) {
        let a_minors: Vec<FieldScalar> = gammas
            .iter()
            .map(|g| a.minor(&alpha, g))
            .collect::<Result<_>>()?;
        for (bi, beta) in Combinations::new(q, r).enumerate() {
            let lhs = c.minor(&alpha, &beta)?;
            let rhs = a_minors
                .iter()
                .zip(&b_minors)
                .fold(a.field().zero(), |acc, (am, bm)| &acc + &(am * &bm[bi]));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn two_by_two_minor() {
        let m = ExactMatrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        assert_eq!(m.minor(&[0, 1], &[0, 1]).unwrap(), Q.from_i64(-2));
        assert_eq!(m.minor(&[1], &[1]).unwrap(), Q.from_i64(4));
        let i3 = ExactMatrix::identity(Q, 3);
        assert_eq!(i3.minor(&[0, 1], &[0, 1]).unwrap(), Q.one());
    }

    #[test]
    fn minor_rejects_bad_subsets() {
        let m = ExactMatrix::identity(Q, 3);
        assert!(matches!(
            m.minor(&[0, 1], &[0]),
            Err(Error::SubsetShapeMismatch(_))
        ));
        assert!(matches!(
            m.minor(&[1, 0], &[0, 1]),
            Err(Error::SubsetShapeMismatch(_))
        ));
        assert!(matches!(
            m.minor(&[0, 3], &[0, 1]),
            Err(Error::SubsetShapeMismatch(_))
        ));
    }

    #[test]
    fn kron_diag_layout() {
        let d = ExactMatrix::from_i64(Q, &[&[1, 0], &[0, 2]]);
        let b = ExactMatrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let k = d.kron(&b);
        let expected = ExactMatrix::from_i64(
            Q,
            &[&[1, 2, 0, 0], &[3, 4, 0, 0], &[0, 0, 2, 4], &[0, 0, 6, 8]],
        );
        assert_eq!(k, expected);
        assert_eq!(ExactMatrix::identity(Q, 1).kron(&b), b);
    }

    #[test]
    fn vectorize_stacks_columns() {
        let x = ExactMatrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let v = x.vectorize();
        let lits: Vec<String> = v.entries().iter().map(ToString::to_string).collect();
        assert_eq!(lits, ["1", "3", "2", "4"]);
        assert_eq!(ExactMatrix::unvectorize(v.entries(), Q).unwrap(), x);
        let i2 = ExactMatrix::identity(Q, 2).vectorize();
        assert_eq!(i2, ExactMatrix::from_i64(Q, &[&[1], &[0], &[0], &[1]]));
    }

    #[test]
    fn cauchy_binet_small_cases() {
        let i2 = ExactMatrix::identity(Q, 2);
        assert!(cauchy_binet_check(&i2, &i2, 1).unwrap());
        let a = ExactMatrix::from_i64(Q, &[&[1, 0], &[0, 0]]);
        assert!(cauchy_binet_check(&a, &i2, 2).unwrap());
        assert!(cauchy_binet_check(&a, &i2, 3).is_err());
    }

    #[test]
    fn inverse_and_singular() {
        let m = ExactMatrix::from_i64(Q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, ExactMatrix::identity(Q, 2));
        let s = ExactMatrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn text_format_round_trip() {
        let text = "2 2\n1 -1/2\n0 3\n";
        let m = ExactMatrix::parse_text(Q, text).unwrap();
        assert_eq!(m.to_text(), text);
        assert!(ExactMatrix::parse_text(Q, "2 2\n1 2 3").is_err());
        assert!(matches!(
            ExactMatrix::parse_text(Q, "0 2\n"),
            Err(Error::DegenerateInput(_))
        ));
    }
}
