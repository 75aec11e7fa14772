//! Base fields: the rationals and prime fields `F_q`.
//!
//! A [`FieldScalar`] always knows which field it lives in. Rationals are kept
//! in lowest terms with a positive denominator (guaranteed by
//! `num_rational::BigRational`); prime-field elements are canonical
//! representatives in `[0, q)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The base field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Modulus used when `fp` is requested without an explicit prime (2^31 - 1).
    pub const DEFAULT_PRIME: u64 = 2_147_483_647;

    /// Largest accepted modulus; keeps products inside `u128` comfortably.
    pub const MAX_PRIME: u64 = 1 << 62;

    pub fn prime(q: u64) -> Result<Field> {
        if q > Self::MAX_PRIME || !is_prime(q) {
            return Err(Error::InvalidPrime(q));
        }
        Ok(Field::Prime(q))
    }

    /// Canonical textual id: `q` or `fp:<prime>`.
    pub fn id(&self) -> String {
        match self {
            Field::Rationals => "q".to_string(),
            Field::Prime(q) => format!("fp:{q}"),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(q) => Some(*q),
        }
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        match self {
            Field::Rationals => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(q) => FieldScalar::Prime {
                value: reduce_i128(v as i128, *q),
                modulus: *q,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldScalar {
        match self {
            Field::Rationals => FieldScalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(q) => FieldScalar::Prime {
                value: reduce_bigint(v, *q),
                modulus: *q,
            },
        }
    }

    /// `num / den`; fails if `den` vanishes in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldScalar> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            Field::Rationals => Ok(FieldScalar::Rational(BigRational::new(
                num.clone(),
                den.clone(),
            ))),
            Field::Prime(_) => {
                let d = self.from_bigint(den);
                let inv = d.inv().ok_or_else(|| {
                    Error::Parse(format!("denominator {den} vanishes in {}", self.id()))
                })?;
                Ok(&self.from_bigint(num) * &inv)
            }
        }
    }

    /// Parses an exact literal: an integer or `a/b`.
    pub fn parse_scalar(&self, s: &str) -> Result<FieldScalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar literal {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
                self.from_ratio(&num, &den)
            }
            None => {
                let v = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
        }
    }

    /// Uniform element: integers in `[-bound, bound]` over Q, uniform over `F_q`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> FieldScalar {
        match self {
            Field::Rationals => self.from_i64(rng.gen_range(-bound..=bound)),
            Field::Prime(q) => FieldScalar::Prime {
                value: rng.gen_range(0..*q),
                modulus: *q,
            },
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `q`, `fp` (default prime) and `fp:<prime>`.
    fn from_str(s: &str) -> Result<Field> {
        match s.trim() {
            "q" | "Q" => Ok(Field::Rationals),
            "fp" => Ok(Field::Prime(Field::DEFAULT_PRIME)),
            other => {
                let q = other
                    .strip_prefix("fp:")
                    .and_then(|q| q.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown field {other:?}")))?;
                Field::prime(q)
            }
        }
    }
}

/// An exact element of `Q` or `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rationals,
            FieldScalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(r.recip()),
            FieldScalar::Prime { value, modulus } => FieldScalar::Prime {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(r) => Some(r),
            FieldScalar::Prime { .. } => None,
        }
    }

    pub fn as_prime(&self) -> Option<u64> {
        match self {
            FieldScalar::Rational(_) => None,
            FieldScalar::Prime { value, .. } => Some(*value),
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

fn field_clash(a: &FieldScalar, b: &FieldScalar) -> ! {
    panic!("arithmetic across fields: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (
                FieldScalar::Prime {
                    value: a,
                    modulus: q,
                },
                FieldScalar::Prime {
                    value: b,
                    modulus: q2,
                },
            ) if q == q2 => FieldScalar::Prime {
                value: add_mod(*a, *b, *q),
                modulus: *q,
            },
            _ => field_clash(self, rhs),
        }
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a - b),
            (
                FieldScalar::Prime {
                    value: a,
                    modulus: q,
                },
                FieldScalar::Prime {
                    value: b,
                    modulus: q2,
                },
            ) if q == q2 => FieldScalar::Prime {
                value: sub_mod(*a, *b, *q),
                modulus: *q,
            },
            _ => field_clash(self, rhs),
        }
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (
                FieldScalar::Prime {
                    value: a,
                    modulus: q,
                },
                FieldScalar::Prime {
                    value: b,
                    modulus: q2,
                },
            ) if q == q2 => FieldScalar::Prime {
                value: mul_mod(*a, *b, *q),
                modulus: *q,
            },
            _ => field_clash(self, rhs),
        }
    }
}

impl<'a> Div<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldScalar) -> FieldScalar {
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { value, modulus } => FieldScalar::Prime {
                value: sub_mod(0, *value, *modulus),
                modulus: *modulus,
            },
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

// ---- modular helpers -------------------------------------------------------

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(q));
    pow_mod(a, q - 2, q)
}

pub(crate) fn reduce_i128(v: i128, q: u64) -> u64 {
    v.rem_euclid(q as i128) as u64
}

pub(crate) fn reduce_bigint(v: &BigInt, q: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(q));
    r.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rationals;
        let a = q.parse_scalar("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        let b = q.parse_scalar("3/2").unwrap();
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn prime_field_canonical() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1).as_prime(), Some(6));
        assert_eq!(f.parse_scalar("1/2").unwrap().as_prime(), Some(4));
        let x = f.from_i64(3);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert!(f.parse_scalar("1/7").is_err());
    }

    #[test]
    fn field_ids_round_trip() {
        for s in ["q", "fp:1009", "fp:2147483647"] {
            let f: Field = s.parse().unwrap();
            assert_eq!(f.id(), s);
        }
        assert_eq!(
            "fp".parse::<Field>().unwrap(),
            Field::Prime(Field::DEFAULT_PRIME)
        );
        assert!("fp:1000".parse::<Field>().is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(Field::DEFAULT_PRIME));
        assert!(is_prime(1009));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime(4_611_686_018_427_387_847)); // largest prime below 2^62
    }

    #[test]
    #[should_panic]
    fn mixed_fields_panic() {
        let _ = Field::Rationals.one() + Field::Prime(5).one();
    }
}
