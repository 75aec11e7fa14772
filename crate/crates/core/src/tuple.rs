//! Matrix tuples `(A_1, .., A_p)` and their JSON representation.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::matrix::ExactMatrix;

/// An element of `V(n,p)`: `p` square `n x n` matrices over one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixTuple {
    field: Field,
    n: usize,
    matrices: Vec<ExactMatrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<ExactMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::DegenerateInput("p = 0".into()));
        };
        let (field, n) = (first.field(), first.rows());
        if n == 0 {
            return Err(Error::DegenerateInput("n = 0".into()));
        }
        for m in &matrices {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.id(), m.field().id()));
            }
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "expected {n}x{n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(MatrixTuple { field, n, matrices })
    }

    pub fn zero(field: Field, n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::DegenerateInput(format!("n = {n}, p = {p}")));
        }
        Self::new(vec![ExactMatrix::zeros(field, n, n); p])
    }

    pub fn random<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        p: usize,
        bound: i64,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::DegenerateInput(format!("n = {n}, p = {p}")));
        }
        Self::new(
            (0..p)
                .map(|_| ExactMatrix::random(field, n, n, bound, rng))
                .collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[ExactMatrix] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> &ExactMatrix {
        &self.matrices[i]
    }

    /// Errors unless both tuples live in the same `V(n,p)` over the same field.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.id(), other.field.id()));
        }
        if self.n != other.n || self.p() != other.p() {
            return Err(Error::ShapeMismatch(format!(
                "V({},{}) vs V({},{})",
                self.n,
                self.p(),
                other.n,
                other.p()
            )));
        }
        Ok(())
    }

    /// `(S A_1 S^-1, .., S A_p S^-1)`.
    pub fn conjugate(&self, s: &ExactMatrix) -> Result<Self> {
        if s.shape() != (self.n, self.n) || s.field() != self.field {
            return Err(Error::ShapeMismatch(
                "conjugating matrix has the wrong shape".into(),
            ));
        }
        let s_inv = s.inverse()?;
        Self::new(self.matrices.iter().map(|a| &(s * a) * &s_inv).collect())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(TupleJson {
            n: self.n,
            p: self.p(),
            field: self.field.id(),
            matrices: self.matrices.iter().map(matrix_to_json).collect(),
            m: None,
        })
        .expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: TupleJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let field: Field = raw.field.parse()?;
        if raw.n == 0 || raw.p == 0 {
            return Err(Error::DegenerateInput(format!(
                "n = {}, p = {}",
                raw.n, raw.p
            )));
        }
        if raw.matrices.len() != raw.p {
            return Err(Error::WrongTupleLength {
                expected: raw.p,
                actual: raw.matrices.len(),
            });
        }
        let ms = raw
            .matrices
            .iter()
            .map(|m| matrix_from_json(field, m, raw.n, raw.n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ms)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[derive(Serialize, Deserialize)]
struct TupleJson {
    n: usize,
    p: usize,
    field: String,
    matrices: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
}

pub fn matrix_to_json(m: &ExactMatrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| Value::String(x.to_string()))
                .collect()
        })
        .collect()
}

fn scalar_from_json(field: Field, v: &Value) -> Result<FieldScalar> {
    match v {
        Value::String(s) => field.parse_scalar(s),
        Value::Number(num) if num.is_i64() || num.is_u64() => field.parse_scalar(&num.to_string()),
        other => Err(Error::Parse(format!(
            "matrix entries must be integers or exact string literals, got {other}"
        ))),
    }
}

pub fn matrix_from_json(
    field: Field,
    rows: &[Vec<Value>],
    r: usize,
    c: usize,
) -> Result<ExactMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::ShapeMismatch(format!("expected a {r}x{c} matrix")));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|v| scalar_from_json(field, v))
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_vec(field, r, c, data)
}

/// An element of `W(m,n,p)`: `p` rectangular `m x n` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectTuple {
    field: Field,
    m: usize,
    n: usize,
    matrices: Vec<ExactMatrix>,
}

impl RectTuple {
    pub fn new(field: Field, m: usize, n: usize, matrices: Vec<ExactMatrix>) -> Result<Self> {
        if m == 0 || n == 0 || matrices.is_empty() {
            return Err(Error::DegenerateInput(format!(
                "m = {m}, n = {n}, p = {}",
                matrices.len()
            )));
        }
        for a in &matrices {
            if a.field() != field {
                return Err(Error::FieldMismatch(field.id(), a.field().id()));
            }
            if a.shape() != (m, n) {
                return Err(Error::ShapeMismatch(format!(
                    "expected {m}x{n}, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(RectTuple {
            field,
            m,
            n,
            matrices,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[ExactMatrix] {
        &self.matrices
    }

    /// `(U A_1 V^-1, .., U A_p V^-1)`.
    pub fn act(&self, u: &ExactMatrix, v: &ExactMatrix) -> Result<Self> {
        let v_inv = v.inverse()?;
        let ms = self
            .matrices
            .iter()
            .map(|a| u.try_mul(a)?.try_mul(&v_inv))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.field, self.m, self.n, ms)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "p": self.p(),
            "field": self.field.id(),
            "matrices": self.matrices.iter().map(matrix_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: TupleJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let field: Field = raw.field.parse()?;
        let m = raw
            .m
            .ok_or_else(|| Error::Parse("missing field `m`".into()))?;
        if raw.matrices.len() != raw.p {
            return Err(Error::WrongTupleLength {
                expected: raw.p,
                actual: raw.matrices.len(),
            });
        }
        if m == 0 || raw.n == 0 || raw.p == 0 {
            return Err(Error::DegenerateInput(format!(
                "m = {m}, n = {}, p = {}",
                raw.n, raw.p
            )));
        }
        let ms = raw
            .matrices
            .iter()
            .map(|a| matrix_from_json(field, a, m, raw.n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, m, raw.n, ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":2,"p":1,"field":"q","matrices":[[["1/2",0],["3","-4"]]]}"#;
        let t = MatrixTuple::parse_json(text).unwrap();
        assert_eq!(t.get(0)[(0, 0)].to_string(), "1/2");
        assert_eq!(MatrixTuple::from_json(&t.to_json()).unwrap(), t);
        assert!(t.to_json().get("m").is_none());
    }

    #[test]
    fn rejects_bad_tuples() {
        let degenerate = r#"{"n":0,"p":1,"field":"q","matrices":[[]]}"#;
        assert!(matches!(
            MatrixTuple::parse_json(degenerate),
            Err(Error::DegenerateInput(_))
        ));
        let float = r#"{"n":1,"p":1,"field":"q","matrices":[[[0.5]]]}"#;
        assert!(matches!(
            MatrixTuple::parse_json(float),
            Err(Error::Parse(_))
        ));
        let short = r#"{"n":1,"p":2,"field":"q","matrices":[[[1]]]}"#;
        assert!(matches!(
            MatrixTuple::parse_json(short),
            Err(Error::WrongTupleLength { .. })
        ));
        assert!(matches!(
            MatrixTuple::new(vec![]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn rect_json() {
        let text = r#"{"m":1,"n":2,"p":1,"field":"fp:7","matrices":[[[1,9]]]}"#;
        let r = RectTuple::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(r.matrices()[0][(0, 1)].as_prime(), Some(2));
        assert_eq!(RectTuple::from_json(&r.to_json()).unwrap(), r);
    }
}
