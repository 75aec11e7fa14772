//! Orbit-preserving embeddings: rectangular tuples into square tuples,
//! `(p-1)(p-2)`-tuples into pairs, and pairs into commuting nilpotent pairs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::tuple::{MatrixTuple, RectTuple};

/// `B_i = [[0, A_i], [0, 0]]`, then `[[I_m, 0], [0, 0]]` and `[[0, 0], [0, I_n]]`.
pub fn embed_rectangular(w: &RectTuple) -> Result<MatrixTuple> {
    let (m, n, field) = (w.m(), w.n(), w.field());
    if m == 0 || n == 0 || w.p() == 0 {
        return Err(Error::DegenerateInput(format!(
            "m = {m}, n = {n}, p = {}",
            w.p()
        )));
    }
    let mut out = Vec::with_capacity(w.p() + 2);
    for a in w.matrices() {
        let mut b = ExactMatrix::zeros(field, m + n, m + n);
        b.set_block(0, m, a);
        out.push(b);
    }
    let mut e = ExactMatrix::zeros(field, m + n, m + n);
    e.set_block(0, 0, &ExactMatrix::identity(field, m));
    out.push(e);
    let mut f = ExactMatrix::zeros(field, m + n, m + n);
    f.set_block(m, m, &ExactMatrix::identity(field, n));
    out.push(f);
    MatrixTuple::new(out)
}

type Block = (usize, usize);

/// Block positions (0-based) of the `x` and `y` labels for `p x p` blocks:
/// `x_ij` with `i > j + 1` and `y_ij` with `j > i + 1`, each in lex order.
pub fn pair_label_positions(p: usize) -> (Vec<Block>, Vec<Block>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..p {
        for j in 0..p {
            if i > j + 1 {
                xs.push((i, j));
            }
            if j > i + 1 {
                ys.push((i, j));
            }
        }
    }
    (xs, ys)
}

/// Six-tuple `(x31, x41, x42, y13, y14, y24)` to a pair of `4n x 4n` matrices.
pub fn tuple_to_pair(x: &MatrixTuple) -> Result<MatrixTuple> {
    if x.p() != 6 {
        return Err(Error::WrongTupleLength {
            expected: 6,
            actual: x.p(),
        });
    }
    pair_from_blocks(x, 4)
}

/// The block-pair construction for any tuple of length `(p-1)(p-2)`, `p >= 3`.
pub fn general_tuple_to_pair(x: &MatrixTuple) -> Result<MatrixTuple> {
    let len = x.p();
    let mut p = 3;
    while (p - 1) * (p - 2) < len {
        p += 1;
    }
    if (p - 1) * (p - 2) != len {
        return Err(Error::WrongTupleLength {
            expected: (p - 1) * (p - 2),
            actual: len,
        });
    }
    pair_from_blocks(x, p)
}

fn pair_from_blocks(x: &MatrixTuple, p: usize) -> Result<MatrixTuple> {
    let (n, field) = (x.n(), x.field());
    let id = ExactMatrix::identity(field, n);
    let mut lower = ExactMatrix::zeros(field, p * n, p * n);
    let mut upper = ExactMatrix::zeros(field, p * n, p * n);
    for i in 0..p - 1 {
        lower.set_block((i + 1) * n, i * n, &id);
        upper.set_block(i * n, (i + 1) * n, &id);
    }
    let (xs, ys) = pair_label_positions(p);
    let mut labels = x.matrices().iter();
    for (i, j) in xs {
        lower.set_block(i * n, j * n, labels.next().expect("length checked"));
    }
    for (i, j) in ys {
        upper.set_block(i * n, j * n, labels.next().expect("length checked"));
    }
    MatrixTuple::new(vec![lower, upper])
}

/// The commuting pair `(A(X,Y), B(X,Y))` of `4n x 4n` matrices whose
/// degree-3 products all vanish.
pub fn gelfand_ponomarev(x: &ExactMatrix, y: &ExactMatrix) -> Result<MatrixTuple> {
    if !x.is_square() || x.shape() != y.shape() {
        return Err(Error::ShapeMismatch(format!(
            "expected two square matrices of equal size, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    if x.field() != y.field() {
        return Err(Error::FieldMismatch(x.field().id(), y.field().id()));
    }
    let (n, field) = (x.rows(), x.field());
    let id = ExactMatrix::identity(field, n);
    let mut a = ExactMatrix::zeros(field, 4 * n, 4 * n);
    a.set_block(n, 0, &id);
    a.set_block(3 * n, n, &id);
    a.set_block(3 * n, 2 * n, x);
    let mut b = ExactMatrix::zeros(field, 4 * n, 4 * n);
    b.set_block(2 * n, 0, &id);
    b.set_block(3 * n, n, x);
    b.set_block(3 * n, 2 * n, y);
    MatrixTuple::new(vec![a, b])
}

/// A noncommutative relation in the tuple entries. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// The product `T_{w_0} T_{w_1} ..`.
    Word(Vec<usize>),
    /// `uv - vu` for two words.
    Commutator(Vec<usize>, Vec<usize>),
}

impl Relation {
    fn max_index(&self) -> Option<usize> {
        match self {
            Relation::Word(w) => w.iter().copied().max(),
            Relation::Commutator(u, v) => u.iter().chain(v).copied().max(),
        }
    }
}

/// Letters `a`, `b`, .. name tuple entries: `aab` is a word, `[a,b]` a commutator.
impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn word(s: &str) -> Result<Vec<usize>> {
            s.trim()
                .chars()
                .map(|c| match c {
                    'a'..='z' => Ok(c as usize - 'a' as usize),
                    _ => Err(Error::Parse(format!("bad letter {c:?} in relation word"))),
                })
                .collect()
        }
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (u, v) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("commutator needs two words: {s}")))?;
            Ok(Relation::Commutator(word(u)?, word(v)?))
        } else {
            Ok(Relation::Word(word(s)?))
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters =
            |w: &[usize]| -> String { w.iter().map(|&i| (b'a' + i as u8) as char).collect() };
        match self {
            Relation::Word(w) => write!(f, "{}", letters(w)),
            Relation::Commutator(u, v) => write!(f, "[{},{}]", letters(u), letters(v)),
        }
    }
}

/// All `p^d` words of length `d`, in lex order.
pub fn all_words(p: usize, d: usize) -> Vec<Relation> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w: Vec<usize>| {
                (0..p).map(move |i| {
                    let mut w = w.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Relation::Word).collect()
}

/// The commutator `[a,b]` together with every word of length three in two letters.
pub fn commuting_cube_relations() -> Vec<Relation> {
    let mut rels = vec![Relation::Commutator(vec![0], vec![1])];
    rels.extend(all_words(2, 3));
    rels
}

fn eval_word(t: &MatrixTuple, w: &[usize]) -> ExactMatrix {
    w.iter()
        .fold(ExactMatrix::identity(t.field(), t.n()), |acc, &i| {
            &acc * t.get(i)
        })
}

/// True iff every relation evaluates to the zero matrix on `t`.
pub fn check_relations(t: &MatrixTuple, relations: &[Relation]) -> Result<bool> {
    for r in relations {
        if let Some(i) = r.max_index() {
            if i >= t.p() {
                return Err(Error::BadWordIndex {
                    index: i,
                    len: t.p(),
                });
            }
        }
    }
    Ok(relations.iter().all(|r| match r {
        Relation::Word(w) => eval_word(t, w).is_zero(),
        Relation::Commutator(u, v) => {
            let (mu, mv) = (eval_word(t, u), eval_word(t, v));
            &mu * &mv == &mv * &mu
        }
    }))
}
