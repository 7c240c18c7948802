//! Exact ground fields: prime fields GF(p) with p < 2^16, and the rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A ground field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    /// GF(p) for a prime p < 2^16.
    Prime(u32),
    /// The rational numbers.
    Rational,
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !(2..1 << 16).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!("GF({p}): modulus must be a prime below 65536")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp { v: 0, p: *p },
            Field::Rational => Scalar::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp { v: n.rem_euclid(*p as i64) as u32, p: *p },
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// The fraction `num/den`; fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::InvalidField(format!("{num}/{den} has a zero denominator in {self}")));
        }
        Ok(self.from_i64(num) * d.inv())
    }

    /// Sign `(-1)^k` as a field element.
    pub fn sign(&self, k: usize) -> Scalar {
        if k.is_multiple_of(2) {
            self.one()
        } else {
            -self.one()
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Rational => write!(f, "QQ"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        match t {
            "QQ" | "Q" | "rationals" => return Ok(Field::Rational),
            _ => {}
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidField(format!("unrecognised field `{t}` (expected GF(p) or QQ)")))?;
        let p: u32 = inner.trim().parse().map_err(|_| Error::InvalidField(format!("bad modulus in `{t}`")))?;
        Field::prime(p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Both operands of a binary operation must live in
/// the same field; mixing fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { v: u32, p: u32 },
    Q(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Q(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => {
                assert!(*v != 0, "inverse of zero in GF({p})");
                Scalar::Fp { v: pow_mod(*v, p - 2, *p), p: *p }
            }
            Scalar::Q(q) => {
                assert!(!q.is_zero(), "inverse of zero rational");
                Scalar::Q(q.recip())
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Bit size of numerator plus denominator; 0 for prime-field elements.
    pub fn height_bits(&self) -> u64 {
        match self {
            Scalar::Fp { .. } => 0,
            Scalar::Q(q) => q.numer().bits() + q.denom().bits(),
        }
    }

    /// The element as a small integer, when it is one (prime fields report the
    /// symmetric representative).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Fp { v, p } => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative_looking(&self) -> bool {
        match self {
            Scalar::Fp { .. } => self.to_i64().map(|v| v < 0).unwrap_or(false),
            Scalar::Q(q) => q.is_negative(),
        }
    }
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { .. } => write!(f, "{}", self.to_i64().unwrap()),
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp { v: (a + b) % p, p: *p },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp { v: (a + p - b) % p, p: *p },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Scalar::Fp { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if *p == *q => *a = (*a + b) % *p,
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => mismatch(self, rhs),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if *p == *q => *a = (*a + *p - b) % *p,
            (Scalar::Q(a), Scalar::Q(b)) => *a -= b,
            _ => mismatch(self, rhs),
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!("GF(2)".parse::<Field>().unwrap(), Field::Prime(2));
        assert_eq!(" GF( 3 ) ".parse::<Field>().unwrap(), Field::Prime(3));
        assert_eq!("QQ".parse::<Field>().unwrap(), Field::Rational);
        assert!("GF(4)".parse::<Field>().is_err());
        assert!("GF(65537)".parse::<Field>().is_err());
        assert!("RR".parse::<Field>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(65521);
        let a = f.from_i64(-1);
        assert_eq!(a.to_i64(), Some(-1));
        let b = &a * &a;
        assert!(b.is_one());
        let x = f.from_i64(12345);
        assert!((&x * &x.inv()).is_one());
        assert_eq!(x.pow(65520), f.one());
    }

    #[test]
    fn char_two_signs_collapse() {
        let f = Field::Prime(2);
        assert_eq!(f.sign(1), f.sign(0));
        assert!(f.from_i64(2).is_zero());
    }

    #[test]
    fn rationals_are_exact() {
        let f = Field::Rational;
        let h = f.from_fraction(1, 2).unwrap();
        let t = f.from_fraction(1, 3).unwrap();
        assert_eq!(&h + &t, f.from_fraction(5, 6).unwrap());
        assert_eq!(h.to_string(), "1/2");
        assert!(f.from_fraction(1, 0).is_err());
        assert!(Field::Prime(3).from_fraction(1, 3).is_err());
    }
}
