//! Exact Gaussian rationals `ℚ(i)`.
//!
//! Every parameter of the algebras and modules in this crate (the pair
//! `(a, b)`, `λ`, `α`, the h-coefficients, structure constants) lives in this
//! field. Both components are kept in lowest terms with a positive
//! denominator, so equality is structural.
//!
//! Components that fit in an `i64` are stored inline and combined through
//! `i128` intermediates; anything larger is promoted to a [`BigRational`]
//! and demoted again as soon as it fits.

use std::fmt;
use std::hash::Hash;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Rat {
    /// Numerator and positive denominator, coprime, numerator never `i64::MIN`.
    Small(i64, i64),
    /// Only used when the value does not fit `Small`.
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        let (mut x, mut y) = (a as u64, b as u64);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        return x as u128;
    }
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rat {
    const ZERO: Rat = Rat::Small(0, 1);
    const ONE: Rat = Rat::Small(1, 1);

    fn from_i128(mut n: i128, mut d: i128) -> Rat {
        debug_assert!(d != 0);
        if n == 0 {
            return Rat::ZERO;
        }
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
        if g != 1 {
            n /= g;
            d /= g;
        }
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n) && fits(d) {
            Rat::Small(n as i64, d as i64)
        } else {
            Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))
        }
    }

    fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(r) => r.is_negative(),
        }
    }

    fn add(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(a, 1), Rat::Small(b, 1)) => match a.checked_add(*b) {
                Some(s) if s != i64::MIN => Rat::Small(s, 1),
                _ => Rat::from_i128(*a as i128 + *b as i128, 1),
            },
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if b == d {
                    Rat::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                    Rat::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rat::from_big(self.to_big() + other.to_big()),
        }
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(r) => Rat::from_big(-r),
        }
    }

    fn mul(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(0, _), _) | (_, Rat::Small(0, _)) => Rat::ZERO,
            (Rat::Small(a, 1), Rat::Small(b, 1)) => match a.checked_mul(*b) {
                Some(p) if p != i64::MIN => Rat::Small(p, 1),
                _ => Rat::from_i128(*a as i128 * *b as i128, 1),
            },
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() * other.to_big()),
        }
    }

    fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => {
                let s = n.signum();
                Some(Rat::Small(s * d, n.abs()))
            }
            Rat::Big(r) => Some(Rat::from_big(r.recip())),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rat::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// An element `re + im·i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: Rat,
    im: Rat,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Scalar {
        Scalar {
            re: Rat::from_big(re),
            im: Rat::from_big(im),
        }
    }

    pub fn zero() -> Scalar {
        Scalar {
            re: Rat::ZERO,
            im: Rat::ZERO,
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            re: Rat::ONE,
            im: Rat::ZERO,
        }
    }

    /// The imaginary unit.
    pub fn i() -> Scalar {
        Scalar {
            re: Rat::ZERO,
            im: Rat::ONE,
        }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar {
            re: Rat::from_i128(n as i128, 1),
            im: Rat::ZERO,
        }
    }

    /// The real rational `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: Rat::from_i128(num as i128, den as i128),
            im: Rat::ZERO,
        }
    }

    /// `re + im·i` from two real rationals given as `(num, den)` pairs.
    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Scalar {
        assert!(re.1 != 0 && im.1 != 0, "zero denominator");
        Scalar {
            re: Rat::from_i128(re.0 as i128, re.1 as i128),
            im: Rat::from_i128(im.0 as i128, im.1 as i128),
        }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// `re² + im²`, as a real scalar.
    pub fn norm_sqr(&self) -> Scalar {
        Scalar {
            re: self.re.mul(&self.re).add(&self.im.mul(&self.im)),
            im: Rat::ZERO,
        }
    }

    /// The integer value, if this scalar is a (small) real integer.
    pub fn to_i64(&self) -> Option<i64> {
        match (&self.re, &self.im) {
            (Rat::Small(n, 1), Rat::Small(0, _)) => Some(*n),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.im.is_zero() {
            let re = self.re.inv().ok_or(Error::DivisionByZero)?;
            return Ok(Scalar { re, im: Rat::ZERO });
        }
        // (x - yi) / (x² + y²)
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let n_inv = n.inv().ok_or(Error::DivisionByZero)?;
        Ok(Scalar {
            re: self.re.mul(&n_inv),
            im: self.im.neg().mul(&n_inv),
        })
    }

    /// `self^m` for any integer `m`; `x^0 = 1` even for `x = 0`.
    pub fn pow(&self, m: i64) -> Result<Scalar> {
        if m < 0 {
            return Ok(self.inv()?.pow_u(m.unsigned_abs()));
        }
        Ok(self.pow_u(m as u64))
    }

    fn pow_u(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Sign used when writing this scalar as a signed term: a real or purely
    /// imaginary scalar with negative component is written as `- |x|`.
    pub(crate) fn term_parts(&self) -> (bool, String) {
        if self.im.is_zero() {
            if self.re.is_negative() {
                (true, self.re.neg().to_string())
            } else {
                (false, self.re.to_string())
            }
        } else if self.re.is_zero() {
            let (neg, abs) = if self.im.is_negative() {
                (true, self.im.neg())
            } else {
                (false, self.im.clone())
            };
            if abs.is_one() {
                (neg, "i".to_string())
            } else {
                (neg, format!("{abs}i"))
            }
        } else {
            (false, format!("({self})"))
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar {
            re: Rat::from_big(r),
            im: Rat::ZERO,
        }
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from(BigRational::from_integer(n))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re.add(&rhs.re),
            im: if self.im.is_zero() {
                rhs.im.clone()
            } else if rhs.im.is_zero() {
                self.im.clone()
            } else {
                self.im.add(&rhs.im)
            },
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Scalar {
                re: self.re.mul(&rhs.re),
                im: Rat::ZERO,
            },
            (true, false) => Scalar {
                re: self.re.mul(&rhs.re),
                im: self.re.mul(&rhs.im),
            },
            (false, true) => Scalar {
                re: self.re.mul(&rhs.re),
                im: self.im.mul(&rhs.re),
            },
            (false, false) => Scalar {
                re: self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im).neg()),
                im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
            },
        }
    }
}

/// Panics on division by zero, like integer division; use
/// [`Scalar::checked_div`] when the divisor may vanish.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| &acc + &x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| &acc * &x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, v: &Rat| -> fmt::Result {
            if v.is_one() {
                write!(f, "i")
            } else if *v == Rat::Small(-1, 1) {
                write!(f, "-i")
            } else {
                write!(f, "{v}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => imag(f, &self.im),
            (false, false) => {
                write!(f, "{}", self.re)?;
                if self.im.is_negative() {
                    write!(f, "-")?;
                    imag(f, &self.im.neg())
                } else {
                    write!(f, "+")?;
                    imag(f, &self.im)
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cursor over the scalar grammar
/// `real | imag | real ('+'|'-') imagAbs`.
struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ScalarParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn sign(&mut self) -> bool {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a digit"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }

    /// `nat ('/' nat)?`
    fn rational(&mut self) -> Result<BigRational> {
        let num = self.nat()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.nat()?;
            if den.is_zero() {
                return Err(Error::syntax(at, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    /// `(nat ('/' nat)?)? 'i'` without sign.
    fn imag_abs(&mut self) -> Result<BigRational> {
        let value = if self.peek() == Some(b'i') {
            BigRational::one()
        } else {
            self.rational()?
        };
        if self.peek() != Some(b'i') {
            return Err(Error::syntax(self.pos, "expected 'i'"));
        }
        self.pos += 1;
        Ok(value)
    }

    fn parse(mut self) -> Result<Scalar> {
        let neg = self.sign();
        let apply = |neg: bool, v: BigRational| if neg { -v } else { v };
        if self.peek() == Some(b'i') {
            self.pos += 1;
            self.finish()?;
            return Ok(Scalar::new(BigRational::zero(), apply(neg, BigRational::one())));
        }
        let first = self.rational()?;
        if self.peek() == Some(b'i') {
            self.pos += 1;
            self.finish()?;
            return Ok(Scalar::new(BigRational::zero(), apply(neg, first)));
        }
        let re = apply(neg, first);
        if self.peek().is_none() {
            return Ok(Scalar::from(re));
        }
        let neg_im = match self.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => return Err(Error::syntax(self.pos, "expected '+', '-' or end of input")),
        };
        self.pos += 1;
        let im = apply(neg_im, self.imag_abs()?);
        self.finish()?;
        Ok(Scalar::new(re, im))
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(Error::syntax(self.pos, "unexpected trailing input"))
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `2`, `-1/2`, `i`, `-1/2i`, `3/4-2i`. Surrounding whitespace
    /// is ignored; inner whitespace is not allowed.
    fn from_str(s: &str) -> Result<Scalar> {
        let trimmed = s.trim_start();
        let offset = s.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        ScalarParser {
            src: trimmed.as_bytes(),
            pos: 0,
        }
        .parse()
        .map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos: pos + offset,
                msg,
            },
            other => other,
        })
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct ScalarVisitor;

impl Visitor<'_> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a Gaussian rational such as \"3/4-2i\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::from(BigInt::from(v)))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s("1+i") + s("1-i"), Scalar::int(2));
        assert_eq!(s("3/4-2i") + Scalar::zero(), s("3/4-2i"));
        assert_eq!(Scalar::ratio(1, 3) + Scalar::ratio(1, 6), Scalar::ratio(1, 2));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(s("1+i") * s("1-i"), Scalar::int(2));
        assert_eq!(s("-7/3+2i") * Scalar::one(), s("-7/3+2i"));
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::int(-1));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Scalar::int(2).inv().unwrap(), Scalar::ratio(1, 2));
        assert_eq!(Scalar::i().inv().unwrap(), s("-i"));
        assert_eq!(Scalar::ratio(3, 4).inv().unwrap(), Scalar::ratio(4, 3));
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(Scalar::int(2).pow(-3).unwrap(), Scalar::ratio(1, 8));
        assert_eq!(s("5-i").pow(0).unwrap(), Scalar::one());
        assert_eq!(Scalar::ratio(-1, 2).pow(2).unwrap(), Scalar::ratio(1, 4));
        assert_eq!(Scalar::zero().pow(-1), Err(Error::DivisionByZero));
        assert_eq!(Scalar::zero().pow(0).unwrap(), Scalar::one());
    }

    #[test]
    fn parse_examples() {
        let x = s("3/4-2i");
        assert_eq!(x.re(), BigRational::new(3.into(), 4.into()));
        assert_eq!(x.im(), BigRational::from_integer((-2).into()));
        assert!(s("0").is_zero());
        assert_eq!(s("-1/2i").to_string(), "-1/2i");
        assert_eq!(s("i"), Scalar::i());
        assert_eq!(s("-i"), -Scalar::i());
        assert_eq!(s("1+i").to_string(), "1+i");
        assert_eq!(s("6/4").to_string(), "3/2");
        assert_eq!(s(" 2 ").to_string(), "2");
    }

    #[test]
    fn parse_errors_carry_position() {
        assert_eq!(
            "1/0".parse::<Scalar>(),
            Err(Error::syntax(2, "zero denominator"))
        );
        assert!(matches!("3/4x".parse::<Scalar>(), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!("".parse::<Scalar>(), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!("2i+1".parse::<Scalar>(), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!("1+2".parse::<Scalar>(), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!("  1+".parse::<Scalar>(), Err(Error::Syntax { pos: 4, .. })));
    }

    #[test]
    fn promotes_and_demotes_big_values() {
        let big = Scalar::int(i64::MAX) * Scalar::int(i64::MAX);
        assert_eq!(big.to_string(), "85070591730234615847396907784232501249");
        let back = &big / &Scalar::int(i64::MAX);
        assert_eq!(back, Scalar::int(i64::MAX));
        assert_eq!(back.to_i64(), Some(i64::MAX));
        let tiny = Scalar::ratio(1, i64::MAX).pow(3).unwrap();
        assert_eq!(&tiny * &Scalar::int(i64::MAX).pow(3).unwrap(), Scalar::one());
        assert_eq!(tiny.pow(-1).unwrap().inv().unwrap(), tiny);
        assert_eq!(-Scalar::int(i64::MAX) - Scalar::one(), Scalar::from(BigInt::from(i64::MIN)));
    }

    fn small_rational() -> impl Strategy<Value = (i64, i64)> {
        (-40i64..40, 1i64..12)
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (small_rational(), small_rational()).prop_map(|(re, im)| Scalar::complex(re, im))
    }

    fn big_scalar() -> impl Strategy<Value = Scalar> {
        (scalar(), 0u32..4).prop_map(|(x, e)| {
            let scale = Scalar::int(1 << 40).pow(e as i64).unwrap();
            &x * &scale
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in big_scalar(), y in scalar(), z in big_scalar()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert!((&x - &x).is_zero());
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn pow_is_additive_in_exponent(x in scalar(), m in -8i64..=8, n in -8i64..=8) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(x.pow(m + n).unwrap(), &x.pow(m).unwrap() * &x.pow(n).unwrap());
        }

        #[test]
        fn parse_format_round_trip(x in big_scalar()) {
            let text = x.to_string();
            prop_assert_eq!(text.parse::<Scalar>().unwrap(), x);
        }
    }
}
