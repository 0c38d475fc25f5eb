//! Exact scalars: arbitrary-precision rationals and residues modulo a word-sized prime.
//!
//! A [`FieldSpec`] names the field; a [`Scalar`] carries enough of it to detect
//! mixing elements of different fields. Both are always in canonical form, so
//! derived equality and hashing are semantic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rationals,
    Prime(u64),
}

/// The scalar field K: either the rationals or GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(Kind);

impl FieldSpec {
    pub const QQ: FieldSpec = FieldSpec(Kind::Rationals);

    pub fn rationals() -> Self {
        Self::QQ
    }

    /// GF(p). The modulus must be a prime below 2^32 so residue products fit a `u64`.
    pub fn prime(p: u64) -> Result<Self> {
        if p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rationals => None,
            Kind::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.0 {
            Kind::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Kind::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `num / den` as a field element.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parses `"a"` or `"a/b"`; over GF(p) the value is reduced modulo p.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let s = text.trim();
        let parse_int = |part: &str| -> Result<BigInt> {
            part.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::parse("scalar", text, e.to_string()))
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (parse_int(n)?, parse_int(d)?),
            None => (parse_int(s)?, BigInt::one()),
        };
        match self.0 {
            Kind::Rationals => {
                if den.is_zero() {
                    return Err(Error::parse("scalar", text, "zero denominator"));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Kind::Prime(p) => {
                let reduce = |v: &BigInt| -> Scalar {
                    let m = BigInt::from(p);
                    let r = ((v % &m) + &m) % &m;
                    let value = u64::try_from(r).expect("residue below modulus");
                    Scalar::Residue { value, modulus: p }
                };
                let d = reduce(&den);
                if d.is_zero() {
                    return Err(Error::parse(
                        "scalar",
                        text,
                        format!("denominator vanishes modulo {p}"),
                    ));
                }
                reduce(&num).checked_div(&d)
            }
        }
    }

    /// All elements of a finite field, `0, 1, ..., p-1`.
    pub fn elements(&self) -> Result<impl Iterator<Item = Scalar>> {
        match self.0 {
            Kind::Rationals => Err(Error::NotFinite(*self)),
            Kind::Prime(p) => Ok((0..p).map(move |value| Scalar::Residue { value, modulus: p })),
        }
    }

    /// Uniform over GF(p); over QQ, numerator in `[-9, 9]` and denominator in `[1, 9]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self.0 {
            Kind::Rationals => {
                let num = rng.gen_range(-9i64..=9);
                let den = rng.gen_range(1i64..=9);
                Scalar::Rational(BigRational::new(num.into(), den.into()))
            }
            Kind::Prime(p) => Scalar::Residue {
                value: rng.gen_range(0..p),
                modulus: p,
            },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub(crate) fn check(&self, s: &Scalar) -> Result<()> {
        if s.field() == *self {
            Ok(())
        } else {
            Err(Error::FieldMismatch(*self, s.field()))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rationals => write!(f, "QQ"),
            Kind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "QQ" {
            return Ok(Self::QQ);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse("field", s, "expected \"QQ\" or \"GF(p)\""))?;
        let p = inner
            .trim()
            .parse::<u64>()
            .map_err(|e| Error::parse("field", s, e.to_string()))?;
        FieldSpec::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Always in lowest terms with a positive denominator.
    Rational(BigRational),
    /// `value < modulus`.
    Residue { value: u64, modulus: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic; fails on field mismatch or division by zero.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => return a.checked_div(b),
    })
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::QQ,
            Scalar::Residue { modulus, .. } => FieldSpec(Kind::Prime(*modulus)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if self.field() != rhs.field() {
            return Err(Error::FieldMismatch(self.field(), rhs.field()));
        }
        Ok(self * &rhs.inverse()?)
    }

    /// Residue value for GF(p) elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Residue {
                value: (a + b) % p,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Residue {
                value: (a + p - b) % p,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Residue {
                value: a * b % p,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

/// Panics on a zero divisor; use [`Scalar::checked_div`] for untrusted input.
impl Div for &Scalar {
    type Output = Scalar;

    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rational_addition_is_exact() {
        let q = FieldSpec::QQ;
        let s = scalar_arith(
            &q.ratio(1, 2).unwrap(),
            &q.ratio(1, 3).unwrap(),
            ArithOp::Add,
        );
        assert_eq!(s.unwrap(), q.ratio(5, 6).unwrap());
    }

    #[test]
    fn residue_product_reduces() {
        let f = gf(5);
        assert_eq!(&f.from_i64(3) * &f.from_i64(4), f.from_i64(2));
    }

    #[test]
    fn inverses() {
        let q = FieldSpec::QQ;
        assert_eq!(
            q.ratio(2, 3).unwrap().inverse().unwrap(),
            q.ratio(3, 2).unwrap()
        );
        assert_eq!(gf(7).from_i64(3).inverse().unwrap(), gf(7).from_i64(5));
        for f in [q, gf(2), gf(7)] {
            assert_eq!(f.one().inverse().unwrap(), f.one());
        }
        for x in gf(7).elements().unwrap().skip(1) {
            assert!((&x * &x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(FieldSpec::QQ.zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(gf(3).zero().inverse(), Err(Error::DivisionByZero));
        let r = scalar_arith(&gf(3).one(), &gf(3).zero(), ArithOp::Div);
        assert_eq!(r, Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let r = scalar_arith(&gf(3).one(), &gf(5).one(), ArithOp::Add);
        assert!(matches!(r, Err(Error::FieldMismatch(..))));
        let r = scalar_arith(&FieldSpec::QQ.one(), &gf(5).one(), ArithOp::Mul);
        assert!(matches!(r, Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn prime_check() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(65_537).is_ok());
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::prime(9), Err(Error::NotPrime(9)));
        assert!(FieldSpec::prime((1u64 << 32) + 15).is_err());
    }

    #[test]
    fn text_forms() {
        assert_eq!("QQ".parse::<FieldSpec>().unwrap(), FieldSpec::QQ);
        assert_eq!("GF(7)".parse::<FieldSpec>().unwrap(), gf(7));
        assert_eq!(gf(7).to_string(), "GF(7)");
        assert!("GF(8)".parse::<FieldSpec>().is_err());
        assert!("RR".parse::<FieldSpec>().is_err());

        let q = FieldSpec::QQ;
        assert_eq!(q.parse_scalar("-6/4").unwrap().to_string(), "-3/2");
        assert_eq!(q.parse_scalar("4/-2").unwrap().to_string(), "-2");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("x").is_err());
        assert_eq!(gf(5).parse_scalar("-1").unwrap().to_string(), "4");
        assert_eq!(gf(5).parse_scalar("1/2").unwrap(), gf(5).from_i64(3));
        assert!(gf(5).parse_scalar("1/5").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..50).prop_map(|(n, d)| FieldSpec::QQ.ratio(n, d).unwrap())
    }

    fn arb_gf7() -> impl Strategy<Value = Scalar> {
        (0i64..7).prop_map(|v| gf(7).from_i64(v))
    }

    fn field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) {
        assert_eq!(&(a + b) + c, a + &(b + c));
        assert_eq!(&(a * b) * c, a * &(b * c));
        assert_eq!(a + b, b + a);
        assert_eq!(a * b, b * a);
        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        assert!((a + &(-a)).is_zero());
        assert_eq!(&(a - b) + b, *a);
        if !a.is_zero() {
            assert!((a * &a.inverse().unwrap()).is_one());
        }
    }

    proptest! {
        #[test]
        fn rationals_satisfy_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            field_axioms(&a, &b, &c);
        }

        #[test]
        fn gf7_satisfies_field_axioms(a in arb_gf7(), b in arb_gf7(), c in arb_gf7()) {
            field_axioms(&a, &b, &c);
        }

        #[test]
        fn rational_display_roundtrips(a in arb_rational()) {
            prop_assert_eq!(FieldSpec::QQ.parse_scalar(&a.to_string()).unwrap(), a);
        }
    }
}
