//! Sparse polynomials in the `p n^2` variables `y_{s,t,l}` and the graded
//! monomial basis used for coefficient rows.
//!
//! Variable order is `(l, s, t)` ascending: `y_{s,t,l}` has linear id
//! `(l-1) n^2 + (s-1) n + (t-1)`. Basis positions (1-based) list the constant
//! monomial first, then all degree-1 monomials, then degree 2, and so on;
//! inside one degree monomials are sorted lexicographically by exponent
//! vector in the variable order, larger exponents of earlier variables first
//! (so `y_1^2, y_1 y_2, .., y_2^2, ..`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::subsets::binomial;

/// A variable `y_{s,t,l}` with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarIndex {
    pub s: usize,
    pub t: usize,
    pub l: usize,
}

impl VarIndex {
    pub fn new(s: usize, t: usize, l: usize, n: usize, p: usize) -> Result<Self> {
        if !(1..=n).contains(&s) || !(1..=n).contains(&t) || !(1..=p).contains(&l) {
            return Err(Error::DimensionMismatch(format!(
                "variable y_({s},{t},{l}) outside n = {n}, p = {p}"
            )));
        }
        Ok(VarIndex { s, t, l })
    }

    /// 0-based position in the variable order.
    pub fn id(&self, n: usize) -> usize {
        (self.l - 1) * n * n + (self.s - 1) * n + (self.t - 1)
    }

    pub fn from_id(id: usize, n: usize) -> Self {
        let nn = n * n;
        VarIndex {
            l: id / nn + 1,
            s: (id % nn) / n + 1,
            t: id % n + 1,
        }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y_{}{},{}", self.s, self.t, self.l)
    }
}

/// A monomial stored as the nondecreasing list of its variable ids (one entry
/// per unit of exponent). Ordering is degree first, then lexicographic on the
/// list, which is exactly the basis order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    vars: Vec<u16>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(id: usize) -> Self {
        Monomial {
            vars: vec![id as u16],
        }
    }

    /// From `(variable id, exponent)` pairs; zero exponents are dropped.
    pub fn from_exponents(exps: &[(usize, u32)]) -> Self {
        let mut vars: Vec<u16> = exps
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v as u16, e as usize))
            .collect();
        vars.sort_unstable();
        Monomial { vars }
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    /// Sparse exponent map as `(variable id, exponent)` in variable order.
    pub fn exponents(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &v in &self.vars {
            match out.last_mut() {
                Some((last, e)) if *last == v as usize => *e += 1,
                _ => out.push((v as usize, 1)),
            }
        }
        out
    }

    pub fn var_ids(&self) -> &[u16] {
        &self.vars
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            if self.vars[i] <= other.vars[j] {
                vars.push(self.vars[i]);
                i += 1;
            } else {
                vars.push(other.vars[j]);
                j += 1;
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { vars }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vars
            .len()
            .cmp(&other.vars.len())
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    terms: BTreeMap<Monomial, FieldScalar>,
}

impl MultiPoly {
    pub fn zero(field: Field) -> Self {
        MultiPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldScalar) -> Self {
        let mut p = Self::zero(c.field());
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(field: Field, id: usize) -> Self {
        let mut p = Self::zero(field);
        p.add_term(Monomial::var(id), field.one());
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        MultiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// `self += factor * other`.
    pub fn add_scaled_product(&mut self, factor: &Self, other: &Self) {
        for (m1, c1) in &factor.terms {
            for (m2, c2) in &other.terms {
                self.add_term(m1.mul(m2), c1 * c2);
            }
        }
    }

    /// Evaluates at a point given by variable id.
    pub fn eval(&self, point: &[FieldScalar]) -> FieldScalar {
        self.terms.iter().fold(self.field.zero(), |acc, (m, c)| {
            let v = m
                .var_ids()
                .iter()
                .fold(c.clone(), |acc, &id| &acc * &point[id as usize]);
            &acc + &v
        })
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        MultiPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

fn check_sizes(n: usize, p: usize) -> Result<()> {
    if n == 0 || p == 0 {
        return Err(Error::DegenerateInput(format!("n = {n}, p = {p}")));
    }
    Ok(())
}

/// Number of monomials of degree exactly `d` in `vars` variables.
fn multichoose(vars: u64, d: u64) -> u128 {
    if vars == 0 {
        return u128::from(d == 0);
    }
    binomial(vars + d - 1, d).expect("binomial overflow")
}

/// `N(n,p,r) = sum_{l=0}^{r} C(p n^2 + l - 1, l)`, the number of monomials of
/// degree at most `r`.
pub fn basis_size(n: usize, p: usize, r: usize) -> Result<u128> {
    check_sizes(n, p)?;
    let vars = (p * n * n) as u64;
    Ok((0..=r as u64).map(|l| multichoose(vars, l)).sum())
}

/// `L(n,p,r) = C(p n^2, r) C(n^2, r)`, the number of `r`-minors of a
/// `p n^2 x n^2` matrix.
pub fn minor_row_count(n: usize, p: usize, r: usize) -> Result<u128> {
    check_sizes(n, p)?;
    if r == 0 {
        return Err(Error::DegenerateInput("minor order 0".into()));
    }
    let nn = (n * n) as u64;
    Ok(binomial(p as u64 * nn, r as u64).expect("overflow")
        * binomial(nn, r as u64).expect("overflow"))
}

/// Bijection between monomials of degree `<= r_max` and basis positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisIndexer {
    n: usize,
    p: usize,
    r_max: usize,
    vars: usize,
    /// `offsets[d]` = number of monomials of degree `< d`.
    offsets: Vec<usize>,
    /// `table[k][j]` = number of degree-`j` monomials in the last `k` variables.
    table: Vec<Vec<usize>>,
}

impl BasisIndexer {
    pub fn new(n: usize, p: usize, r_max: usize) -> Result<Self> {
        check_sizes(n, p)?;
        let vars = p * n * n;
        if vars > u16::MAX as usize {
            return Err(Error::DegenerateInput(format!(
                "{vars} variables exceed the supported count"
            )));
        }
        let total = basis_size(n, p, r_max)?;
        if total > usize::MAX as u128 {
            return Err(Error::DegenerateInput("basis too large".into()));
        }
        let table: Vec<Vec<usize>> = (0..=vars)
            .map(|k| {
                (0..=r_max)
                    .map(|j| multichoose(k as u64, j as u64) as usize)
                    .collect()
            })
            .collect();
        let mut offsets = vec![0usize];
        for d in 0..=r_max {
            offsets.push(offsets[d] + table[vars][d]);
        }
        Ok(BasisIndexer {
            n,
            p,
            r_max,
            vars,
            offsets,
            table,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    /// `N(n, p, r_max)`.
    pub fn len(&self) -> usize {
        self.offsets[self.r_max + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 0-based column index of `m`.
    pub fn index_of(&self, m: &Monomial) -> Result<usize> {
        let d = m.degree();
        if d > self.r_max {
            return Err(Error::DegreeOverflow {
                degree: d,
                max: self.r_max,
            });
        }
        let mut rank = 0;
        let mut lo = 0usize;
        for (i, &v) in m.var_ids().iter().enumerate() {
            let v = v as usize;
            assert!(v < self.vars, "variable id out of range");
            let rest = d - i - 1;
            // sequences that agree so far but put a smaller variable here
            for u in lo..v {
                rank += self.table[self.vars - u][rest];
            }
            lo = v;
        }
        Ok(self.offsets[d] + rank)
    }

    /// 1-based basis position of `m`.
    pub fn position(&self, m: &Monomial) -> Result<usize> {
        self.index_of(m).map(|i| i + 1)
    }

    /// Monomial at a 1-based position.
    pub fn monomial_at(&self, position: usize) -> Option<Monomial> {
        if position == 0 || position > self.len() {
            return None;
        }
        let idx = position - 1;
        let d = (0..=self.r_max).find(|&d| idx < self.offsets[d + 1])?;
        let mut rank = idx - self.offsets[d];
        let mut vars = Vec::with_capacity(d);
        let mut lo = 0usize;
        for i in 0..d {
            let rest = d - i - 1;
            let mut v = lo;
            loop {
                let count = self.table[self.vars - v][rest];
                if rank < count {
                    break;
                }
                rank -= count;
                v += 1;
            }
            vars.push(v as u16);
            lo = v;
        }
        Some(Monomial { vars })
    }

    /// Dense coefficient vector of `f` in this basis.
    pub fn coefficient_row(&self, f: &MultiPoly) -> Result<Vec<FieldScalar>> {
        let mut row = vec![f.field().zero(); self.len()];
        for (idx, c) in self.sparse_row(f)? {
            row[idx] = c;
        }
        Ok(row)
    }

    /// `(0-based column, coefficient)` pairs in increasing column order.
    pub fn sparse_row(&self, f: &MultiPoly) -> Result<Vec<(usize, FieldScalar)>> {
        f.terms()
            .map(|(m, c)| Ok((self.index_of(m)?, c.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_size(3, 2, 0).unwrap(), 1);
        assert_eq!(basis_size(2, 2, 1).unwrap(), 9);
        assert_eq!(basis_size(2, 2, 4).unwrap(), 495);
        assert_eq!(basis_size(2, 3, 4).unwrap(), 1820);
        assert!(matches!(
            basis_size(0, 2, 1),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn minor_row_counts() {
        assert_eq!(minor_row_count(1, 1, 1).unwrap(), 1);
        assert_eq!(minor_row_count(2, 2, 4).unwrap(), 70);
        assert_eq!(minor_row_count(2, 2, 2).unwrap(), 168);
        assert_eq!(minor_row_count(3, 2, 9).unwrap(), 48620);
    }

    #[test]
    fn first_positions() {
        let idx = BasisIndexer::new(2, 2, 3).unwrap();
        assert_eq!(idx.position(&Monomial::one()).unwrap(), 1);
        assert_eq!(idx.position(&Monomial::var(0)).unwrap(), 2);
        assert_eq!(idx.position(&Monomial::var(7)).unwrap(), 9);
        // y_1^2 is the first degree-2 monomial
        assert_eq!(
            idx.position(&Monomial::from_exponents(&[(0, 2)])).unwrap(),
            10
        );
        assert_eq!(
            idx.position(&Monomial::from_exponents(&[(0, 1), (1, 1)]))
                .unwrap(),
            11
        );
        let tiny = BasisIndexer::new(1, 1, 1).unwrap();
        assert_eq!(tiny.len(), 2);
        assert_eq!(tiny.monomial_at(1), Some(Monomial::one()));
        assert_eq!(tiny.monomial_at(2), Some(Monomial::var(0)));
    }

    #[test]
    fn degree_overflow() {
        let idx = BasisIndexer::new(1, 1, 1).unwrap();
        let m = Monomial::from_exponents(&[(0, 2)]);
        assert_eq!(
            idx.position(&m),
            Err(Error::DegreeOverflow { degree: 2, max: 1 })
        );
    }

    #[test]
    fn var_order_is_l_s_t() {
        let n = 2;
        assert_eq!(VarIndex { s: 1, t: 1, l: 1 }.id(n), 0);
        assert_eq!(VarIndex { s: 1, t: 2, l: 1 }.id(n), 1);
        assert_eq!(VarIndex { s: 2, t: 1, l: 1 }.id(n), 2);
        assert_eq!(VarIndex { s: 1, t: 1, l: 2 }.id(n), 4);
        for id in 0..12 {
            assert_eq!(VarIndex::from_id(id, n).id(n), id);
        }
        assert!(VarIndex::new(3, 1, 1, 2, 1).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let a = MultiPoly::var(Q, 0);
        let b = MultiPoly::var(Q, 1);
        let one = MultiPoly::constant(Q.one());
        assert_eq!(a.add(&MultiPoly::zero(Q)), a);
        let ab = a.mul(&b);
        assert_eq!(ab.num_terms(), 1);
        assert_eq!(
            ab.coeff(&Monomial::from_exponents(&[(0, 1), (1, 1)])),
            Q.one()
        );
        let prod = one.add(&a).mul(&one.sub(&a));
        let expected = one.sub(&a.mul(&a));
        assert_eq!(prod, expected);
        assert_eq!(prod.degree(), Some(2));
    }

    #[test]
    fn coefficient_rows() {
        let idx = BasisIndexer::new(1, 1, 1).unwrap();
        assert_eq!(
            idx.coefficient_row(&MultiPoly::zero(Q)).unwrap(),
            vec![Q.zero(), Q.zero()]
        );
        let c = MultiPoly::constant(Q.from_i64(5));
        assert_eq!(
            idx.coefficient_row(&c).unwrap(),
            vec![Q.from_i64(5), Q.zero()]
        );
        let f = MultiPoly::constant(Q.from_i64(3)).sub(&MultiPoly::var(Q, 0));
        assert_eq!(
            idx.coefficient_row(&f).unwrap(),
            vec![Q.from_i64(3), Q.from_i64(-1)]
        );
    }
}
