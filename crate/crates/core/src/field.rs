//! Exact scalar arithmetic.
//!
//! Two kinds of field sit behind one [`Scalar`] type: prime fields GF(p) with
//! `p < 2^16` (residues kept in native words) and the rationals (arbitrary
//! precision). Every scalar remembers its field, so mixing fields is a
//! detectable error rather than silent garbage.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    /// GF(p). Construct through [`FieldSpec::prime`] so primality is checked.
    Prime(u32),
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !(2..MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::NotAPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn gf2() -> FieldSpec {
        FieldSpec::Prime(2)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    /// Number of elements for a finite field.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(u64::from(*p)),
            FieldSpec::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Prime {
                value: 0,
                modulus: *p,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Prime {
                value: 1 % *p,
                modulus: *p,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(i64::from(*p)) as u32,
                modulus: *p,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Residue `r` of GF(p) (reduced mod p). Panics on the rational field.
    pub fn residue(&self, r: u64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Prime {
                value: (r % u64::from(*p)) as u32,
                modulus: *p,
            },
            FieldSpec::Rational => panic!("residue() called on the rational field"),
        }
    }

    /// Parses a scalar literal: an integer for GF(p) (reduced mod p), an
    /// integer or `a/b` for the rationals.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar(text.to_string());
        match self {
            FieldSpec::Prime(p) => {
                let n = BigInt::from_str(text).map_err(|_| bad())?;
                let r = n.mod_floor_u32(*p);
                Ok(Scalar::Prime {
                    value: r,
                    modulus: *p,
                })
            }
            FieldSpec::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (text, "1"),
                };
                if den.starts_with(['+', '-']) {
                    return Err(bad());
                }
                let num = BigInt::from_str(num).map_err(|_| bad())?;
                let den = BigInt::from_str(den).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
        }
    }

    /// All elements of a finite field in residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Prime(p) => Some(
                (0..*p)
                    .map(|v| Scalar::Prime {
                        value: v,
                        modulus: *p,
                    })
                    .collect(),
            ),
            FieldSpec::Rational => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

trait ModFloor {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloor for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        u32::try_from(r).expect("residue fits in u32")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element in canonical form.
///
/// Prime-field residues live in `0..p`; rationals are fully reduced with a
/// positive denominator (maintained by `BigRational`). Equal scalars therefore
/// compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Prime { value: u32, modulus: u32 },
    Rational(BigRational),
}

/// Arithmetic operation selector for [`Scalar::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Prime { modulus, .. } => FieldSpec::Prime(*modulus),
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Prime { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    /// Residue of a prime-field element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field().to_string(),
                right: other.field().to_string(),
            })
        }
    }

    pub fn apply(&self, op: ArithOp, other: &Scalar) -> Result<Scalar> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: (a + b) % p,
                modulus: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: (a + p - b) % p,
                modulus: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: a * b % p,
                modulus: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p = u64::from(p);
    let mut base = u64::from(base) % p;
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

// Operator impls panic on mixed fields; the checked_* methods are the
// fallible surface. Internal linear algebra only ever combines scalars of a
// single, already validated field.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// True when the rational value is negative; always false in GF(p).
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}
