//! Exact scalars: rationals and elements `a + b*sqrt(d)` of a real quadratic field.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot mix sqrt({0}) and sqrt({1})")]
    FieldMismatch(u32, u32),
    #[error("invalid radicand {0}: must be a squarefree integer > 1")]
    InvalidRadicand(u32),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Element `rational + radical*sqrt(radicand)` with `radical != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    rational: Rational,
    radical: Rational,
    radicand: u32,
}

impl QuadExt {
    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn radical_part(&self) -> &Rational {
        &self.radical
    }

    pub fn radicand(&self) -> u32 {
        self.radicand
    }
}

/// An exact scalar. Values whose radical part vanishes are always stored as `Rational`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    QuadExt(QuadExt),
}

fn is_squarefree(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u32;
    while p.saturating_mul(p) <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar::Rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Rational(r)
    }

    /// `a + b*sqrt(d)`, canonicalised to a rational when `b == 0`.
    pub fn quad(a: Rational, b: Rational, d: u32) -> Result<Self, ScalarError> {
        if !is_squarefree(d) {
            return Err(ScalarError::InvalidRadicand(d));
        }
        Ok(Self::quad_unchecked(a, b, d))
    }

    fn quad_unchecked(a: Rational, b: Rational, d: u32) -> Self {
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::QuadExt(QuadExt {
                rational: a,
                radical: b,
                radicand: d,
            })
        }
    }

    /// `sqrt(d)` for squarefree `d > 1`.
    pub fn sqrt(d: u32) -> Result<Self, ScalarError> {
        Self::quad(Rational::zero(), Rational::one(), d)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::QuadExt(_) => None,
        }
    }

    /// Radicand of the field this value lives in, if it is irrational.
    pub fn radicand(&self) -> Option<u32> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::QuadExt(q) => Some(q.radicand),
        }
    }

    fn parts(&self) -> (&Rational, Option<(&Rational, u32)>) {
        match self {
            Scalar::Rational(r) => (r, None),
            Scalar::QuadExt(q) => (&q.rational, Some((&q.radical, q.radicand))),
        }
    }

    fn common_radicand(&self, other: &Self) -> Result<Option<u32>, ScalarError> {
        match (self.radicand(), other.radicand()) {
            (Some(a), Some(b)) if a != b => Err(ScalarError::FieldMismatch(a, b)),
            (Some(a), _) | (None, Some(a)) => Ok(Some(a)),
            (None, None) => Ok(None),
        }
    }

    fn split(&self) -> (Rational, Rational) {
        match self {
            Scalar::Rational(r) => (r.clone(), Rational::zero()),
            Scalar::QuadExt(q) => (q.rational.clone(), q.radical.clone()),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a + b));
        }
        let d = self.common_radicand(other)?.unwrap_or(0);
        let (a1, b1) = self.split();
        let (a2, b2) = other.split();
        Ok(Self::quad_unchecked(a1 + a2, b1 + b2, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a * b));
        }
        let d = self.common_radicand(other)?.unwrap_or(0);
        let (a1, b1) = self.split();
        let (a2, b2) = other.split();
        let dr = Rational::from_integer(BigInt::from(d));
        let rational = &a1 * &a2 + &b1 * &b2 * dr;
        let radical = a1 * b2 + b1 * a2;
        Ok(Self::quad_unchecked(rational, radical, d))
    }

    /// Multiplicative inverse; `(a + b r)^-1 = (a - b r) / (a^2 - d b^2)`.
    pub fn try_inv(&self) -> Result<Self, ScalarError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::QuadExt(q) => {
                let dr = Rational::from_integer(BigInt::from(q.radicand));
                let norm = &q.rational * &q.rational - &q.radical * &q.radical * dr;
                Ok(Self::quad_unchecked(
                    &q.rational / &norm,
                    -(&q.radical / &norm),
                    q.radicand,
                ))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_mul(&other.try_inv()?)
    }

    pub fn neg_ref(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::QuadExt(q) => Scalar::QuadExt(QuadExt {
                rational: -&q.rational,
                radical: -&q.radical,
                radicand: q.radicand,
            }),
        }
    }

    /// Complex conjugation. All supported fields are real, so this is the identity.
    pub fn conj(&self) -> Self {
        self.clone()
    }

    /// Exact sign of a real scalar.
    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Rational(r) => r.cmp(&Rational::zero()),
            Scalar::QuadExt(q) => {
                let sa = q.rational.cmp(&Rational::zero());
                let sb = q.radical.cmp(&Rational::zero());
                if sa == Ordering::Equal || sa == sb {
                    return sb;
                }
                // Opposite signs: compare a^2 with d b^2.
                let dr = Rational::from_integer(BigInt::from(q.radicand));
                let lhs = &q.rational * &q.rational;
                let rhs = &q.radical * &q.radical * dr;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar arithmetic failed: {e}"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, rad) = self.parts();
        match rad {
            None => f.write_str(&fmt_rational(a)),
            Some((b, d)) => {
                let sign = if b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}*sqrt({})", fmt_rational(a), sign, fmt_rational(&b.abs()), d)
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Parses `coef*sqrt(d)`, `sqrt(d)` or `-sqrt(d)`.
fn parse_radical_term(s: &str) -> Option<(Rational, u32)> {
    let s = s.trim();
    let idx = s.find("sqrt(")?;
    let inner = s[idx + 5..].strip_suffix(')')?;
    let d: u32 = inner.trim().parse().ok()?;
    let coef = s[..idx].trim();
    let coef = coef.strip_suffix('*').map(str::trim).unwrap_or(coef);
    let c = match coef {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        c => parse_rational(c)?,
    };
    Some((c, d))
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let t = s.trim();
        if !t.contains("sqrt") {
            return parse_rational(t).map(Scalar::Rational).ok_or_else(err);
        }
        // Split off the radical term at the last top-level ` + ` / ` - ` separator,
        // falling back to a bare radical term.
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && t[..i].ends_with(' '))
            .map(|(i, _)| i)
            .last();
        let (a, b, d) = match split {
            Some(i) => {
                let a = parse_rational(&t[..i]).ok_or_else(err)?;
                let (b, d) = parse_radical_term(&t[i + 1..]).ok_or_else(err)?;
                let b = if t.as_bytes()[i] == b'-' { -b } else { b };
                (a, b, d)
            }
            None => {
                let (b, d) = parse_radical_term(t).ok_or_else(err)?;
                (Rational::zero(), b, d)
            }
        };
        Scalar::quad(a, b, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn s3() -> Scalar {
        Scalar::sqrt(3).unwrap()
    }

    #[test]
    fn sqrt3_squared_is_three() {
        assert_eq!(&s3() * &s3(), Scalar::from_int(3));
    }

    #[test]
    fn inverse_of_one_plus_sqrt3() {
        let x = Scalar::one() + s3();
        let inv = x.try_inv().unwrap();
        assert_eq!(&x * &inv, Scalar::one());
        assert_eq!(inv.to_string(), "-1/2 + 1/2*sqrt(3)");
    }

    #[test]
    fn canonicalises_zero_radical() {
        let x = s3() - s3();
        assert!(matches!(x, Scalar::Rational(_)));
        assert!(x.is_zero());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = s3();
        let b = Scalar::sqrt(2).unwrap();
        assert_eq!(a.try_add(&b), Err(ScalarError::FieldMismatch(3, 2)));
        assert_eq!(a.try_mul(&b), Err(ScalarError::FieldMismatch(3, 2)));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Scalar::one().try_div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn non_squarefree_radicand_rejected() {
        assert_eq!(Scalar::sqrt(4), Err(ScalarError::InvalidRadicand(4)));
        assert_eq!(Scalar::sqrt(12), Err(ScalarError::InvalidRadicand(12)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_frac(-3, 6).to_string(), "-1/2");
        assert_eq!(Scalar::from_int(7).to_string(), "7");
        let x = Scalar::from_frac(1, 2) - Scalar::from_frac(3, 2) * s3();
        assert_eq!(x.to_string(), "1/2 - 3/2*sqrt(3)");
        assert_eq!((-s3()).to_string(), "0 - 1*sqrt(3)");
    }

    #[test]
    fn parse_forms() {
        let cases: Vec<(&str, Scalar)> = vec![
            ("5", Scalar::from_int(5)),
            ("-2/4", Scalar::from_frac(-1, 2)),
            ("sqrt(3)", s3()),
            ("-sqrt(3)", -s3()),
            ("1/2*sqrt(3)", Scalar::from_frac(1, 2) * s3()),
            ("1 + 2*sqrt(3)", Scalar::one() + Scalar::from_int(2) * s3()),
            ("-1 - 2*sqrt(3)", -Scalar::one() - Scalar::from_int(2) * s3()),
        ];
        for (text, value) in cases {
            assert_eq!(text.parse::<Scalar>().unwrap(), value, "{text}");
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn signum_is_exact() {
        assert_eq!((Scalar::from_int(2) - s3()).signum(), Ordering::Greater);
        assert_eq!((Scalar::from_int(1) - s3()).signum(), Ordering::Less);
        assert_eq!((s3() - Scalar::from_int(2)).signum(), Ordering::Less);
        assert_eq!(Scalar::zero().signum(), Ordering::Equal);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (arb_rational(), arb_rational()).prop_map(|(a, b)| Scalar::quad(a, b, 3).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.try_inv().unwrap(), Scalar::one());
            }
        }

        #[test]
        fn display_parse_round_trip(a in arb_scalar()) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<Scalar>().unwrap(), a);
        }

        #[test]
        fn signum_matches_product(a in arb_scalar(), b in arb_scalar()) {
            let expected = match (a.signum(), b.signum()) {
                (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
                (x, y) if x == y => Ordering::Greater,
                _ => Ordering::Less,
            };
            prop_assert_eq!((&a * &b).signum(), expected);
        }
    }
}
