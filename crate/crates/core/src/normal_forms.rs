//! Rational (Frobenius) normal form of a single matrix.
//!
//! Invariant factors come from the Smith normal form of `xI - A` over `k[x]`.
//! Companion blocks put the negated coefficients in the last column with ones
//! on the subdiagonal, so `companion(x^2) = [[0,0],[1,0]]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::matrix::ExactMatrix;
use crate::sylvester::{find_similarity, SimilarityCertificate};
use crate::tuple::MatrixTuple;

/// Dense univariate polynomial, coefficients from the constant term upward.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldScalar>,
}

impl UniPoly {
    pub fn zero(field: Field) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FieldScalar) -> Self {
        Self::new(c.field(), vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn new(field: Field, mut coeffs: Vec<FieldScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Parses a coefficient list such as `[-6, 5, 1]` or `-6 5 1`.
    pub fn parse(field: Field, text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
        let coeffs = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| field.parse_scalar(t.trim_matches('"')))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, coeffs))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldScalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, i: usize) -> FieldScalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            self.field,
            (0..len).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            self.field,
            (0..len).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.field, out)
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().and_then(|c| c.inv()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] * &inv;
            if !c.is_zero() {
                let shift = top - dd;
                for (k, b) in d.coeffs.iter().enumerate() {
                    rem[shift + k] = &rem[shift + k] - &(&c * b);
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        (Self::new(self.field, quot), Self::new(self.field, rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Scaled to lead coefficient one; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.lead().and_then(|c| c.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &FieldScalar) -> FieldScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Coefficients as exact literals, constant term first.
    pub fn literal(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => {}
                _ => write!(f, "({c})")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Companion matrix of a monic polynomial of degree at least one.
pub fn companion(p: &UniPoly) -> Result<ExactMatrix> {
    let d = p.degree().ok_or(Error::NotMonic)?;
    if d == 0 || !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = p.field();
    let mut m = ExactMatrix::zeros(field, d, d);
    for i in 1..d {
        m[(i, i - 1)] = field.one();
    }
    for i in 0..d {
        m[(i, d - 1)] = -&p.coeffs()[i];
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalNormalForm {
    /// Nonconstant invariant factors, `P_{i+1} | P_i`.
    pub polys: Vec<UniPoly>,
    pub matrix: ExactMatrix,
    pub partition: Vec<usize>,
}

impl RationalNormalForm {
    /// Similarity certificate `S` with `S A S^-1 = matrix`, found and verified
    /// by [`find_similarity`].
    pub fn certificate(
        &self,
        a: &ExactMatrix,
        trials: usize,
        seed: u64,
    ) -> Result<Option<SimilarityCertificate>> {
        let ta = MatrixTuple::new(vec![a.clone()])?;
        let tr = MatrixTuple::new(vec![self.matrix.clone()])?;
        find_similarity(&ta, &tr, trials, seed)
    }
}

/// Invariant factors of `A`, largest first, units dropped.
pub fn invariant_factors(a: &ExactMatrix) -> Result<Vec<UniPoly>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let field = a.field();
    let n = a.rows();
    let x = UniPoly::x(field);
    let mut m: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = UniPoly::constant(-&a[(i, j)]);
                    if i == j {
                        c.add(&x)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let diag = smith_diagonal(&mut m);
    let mut polys: Vec<UniPoly> = diag.into_iter().filter(|d| d.degree() != Some(0)).collect();
    polys.reverse();
    Ok(polys)
}

/// Reduces `m` in place to Smith form and returns its monic diagonal,
/// in increasing divisibility order.
#[allow(clippy::needless_range_loop)]
fn smith_diagonal(m: &mut [Vec<UniPoly>]) -> Vec<UniPoly> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        while let Some((pi, pj)) = min_degree_entry(m, k) {
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, _) = m[i][k].div_rem(&m[k][k]);
                for j in k..n {
                    let t = q.mul(&m[k][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
                clean &= m[i][k].is_zero();
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, _) = m[k][j].div_rem(&m[k][k]);
                for row in m.iter_mut().skip(k) {
                    let t = q.mul(&row[k]);
                    row[j] = row[j].sub(&t);
                }
                clean &= m[k][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !m[k][k].divides(&m[i][j])));
            match bad {
                Some(i) => {
                    for j in k..n {
                        m[k][j] = m[k][j].add(&m[i][j]);
                    }
                }
                None => break,
            }
        }
        diag.push(m[k][k].monic());
    }
    diag
}

#[allow(clippy::needless_range_loop)]
fn min_degree_entry(m: &[Vec<UniPoly>], k: usize) -> Option<(usize, usize)> {
    let n = m.len();
    let mut best: Option<(usize, usize, usize)> = None;
    for i in k..n {
        for j in k..n {
            if let Some(d) = m[i][j].degree() {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn rnf(a: &ExactMatrix) -> Result<RationalNormalForm> {
    let polys = invariant_factors(a)?;
    let blocks = polys.iter().map(companion).collect::<Result<Vec<_>>>()?;
    let partition = polys.iter().map(|p| p.degree().unwrap_or(0)).collect();
    Ok(RationalNormalForm {
        matrix: ExactMatrix::block_diag(a.field(), &blocks),
        polys,
        partition,
    })
}

/// `(deg P_1, .., deg P_r)`, a partition of `n`.
pub fn partition_stratum(a: &ExactMatrix) -> Result<Vec<usize>> {
    Ok(rnf(a)?.partition)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn char_poly_at(m: &ExactMatrix, c: i64) -> FieldScalar {
        let n = m.rows();
        let ci = ExactMatrix::identity(Q, n).scale(&Q.from_i64(c));
        (&ci - m).det().unwrap()
    }

    #[test]
    fn division() {
        let p = UniPoly::from_i64(Q, &[6, -5, 1]);
        let (q, r) = p.div_rem(&UniPoly::from_i64(Q, &[-2, 1]));
        assert_eq!(q, UniPoly::from_i64(Q, &[-3, 1]));
        assert!(r.is_zero());
        let (_, r) = p.div_rem(&UniPoly::from_i64(Q, &[0, 1]));
        assert_eq!(r, UniPoly::from_i64(Q, &[6]));
        assert_eq!(p.to_string(), "x^2 + (-5)x + 6");
        assert_eq!(UniPoly::parse(Q, "[6, -5, 1]").unwrap(), p);
    }

    #[test]
    fn companions() {
        assert_eq!(
            companion(&UniPoly::from_i64(Q, &[-7, 1])).unwrap(),
            ExactMatrix::from_i64(Q, &[&[7]])
        );
        assert_eq!(
            companion(&UniPoly::from_i64(Q, &[0, 0, 1])).unwrap(),
            ExactMatrix::from_i64(Q, &[&[0, 0], &[1, 0]])
        );
        let p = UniPoly::from_i64(Q, &[6, -5, 1]);
        let c = companion(&p).unwrap();
        for x in -3..4 {
            assert_eq!(char_poly_at(&c, x), p.eval(&Q.from_i64(x)));
        }
        assert_eq!(
            companion(&UniPoly::from_i64(Q, &[1, 2])),
            Err(Error::NotMonic)
        );
        assert_eq!(companion(&UniPoly::from_i64(Q, &[1])), Err(Error::NotMonic));
    }

    #[test]
    fn identity_and_zero() {
        let f = rnf(&ExactMatrix::identity(Q, 2)).unwrap();
        assert_eq!(f.polys, vec![UniPoly::from_i64(Q, &[-1, 1]); 2]);
        assert_eq!(f.partition, vec![1, 1]);
        assert_eq!(
            partition_stratum(&ExactMatrix::zeros(Q, 2, 2)).unwrap(),
            vec![1, 1]
        );
        assert_eq!(
            partition_stratum(&ExactMatrix::identity(Q, 4)).unwrap(),
            vec![1; 4]
        );
    }

    #[test]
    fn cyclic_examples() {
        let n = ExactMatrix::from_i64(Q, &[&[0, 0], &[1, 0]]);
        let f = rnf(&n).unwrap();
        assert_eq!(f.polys, vec![UniPoly::from_i64(Q, &[0, 0, 1])]);
        assert_eq!(f.matrix, n);
        let d = ExactMatrix::from_i64(Q, &[&[1, 0], &[0, 2]]);
        assert_eq!(
            rnf(&d).unwrap().polys,
            vec![UniPoly::from_i64(Q, &[2, -3, 1])]
        );
        let j = ExactMatrix::from_i64(Q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(partition_stratum(&j).unwrap(), vec![3]);
    }

    #[test]
    fn mixed_blocks_and_certificate() {
        // diag(J_2(1), 1, 2): factors (x-1)^2 (x-2), x-1
        let a = ExactMatrix::from_i64(
            Q,
            &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2]],
        );
        let f = rnf(&a).unwrap();
        assert_eq!(f.partition, vec![3, 1]);
        assert!(f.polys[1].divides(&f.polys[0]));
        let cert = f.certificate(&a, 32, 7).unwrap().unwrap();
        assert_eq!(&(&cert.s * &a) * &cert.s.inverse().unwrap(), f.matrix);
    }

    #[test]
    fn prime_field() {
        let f7 = Field::prime(7).unwrap();
        let a = ExactMatrix::from_i64(f7, &[&[0, 1], &[-1, 0]]);
        assert_eq!(
            rnf(&a).unwrap().polys,
            vec![UniPoly::from_i64(f7, &[1, 0, 1])]
        );
    }
}
