//! Exact scalars over the rationals or a prime field.
//!
//! A [`Scalar`] does not know its own field; every arithmetic operation goes
//! through the [`FieldSpec`] that produced it. Residues are stored reduced in
//! `0..p`, rationals in lowest terms, so derived equality is field equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Largest supported characteristic. Residue products are formed in `u128`.
pub const MAX_CHARACTERISTIC: u64 = u32::MAX as u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

/// The base field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, Error> {
        if p > MAX_CHARACTERISTIC || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldSpec::Prime(p) => Scalar::Residue(n.rem_euclid(*p as i64) as u64),
        }
    }

    fn reduce_bigint(p: u64, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(p));
        r.to_u64().expect("residue fits in u64")
    }

    /// `num / den` as an element of this field; fails when `den` vanishes in it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, Error> {
        match self {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    return Err(Error::InvalidScalar("zero denominator".into()));
                }
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            FieldSpec::Prime(p) => {
                let d = Self::reduce_bigint(*p, den);
                if d == 0 {
                    return Err(Error::InvalidScalar(format!(
                        "denominator {den} is zero modulo {p}"
                    )));
                }
                let n = Self::reduce_bigint(*p, num);
                let inv = self.inv(&Scalar::Residue(d)).expect("nonzero residue");
                Ok(self.mul(&Scalar::Residue(n), &inv))
            }
        }
    }

    fn mismatch(&self) -> ! {
        panic!("scalar does not belong to field {self}")
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => self.mismatch(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            _ => self.mismatch(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => self.mismatch(),
        }
    }

    /// `acc + a * b`, the inner step of every contraction.
    pub fn mul_add(&self, acc: &Scalar, a: &Scalar, b: &Scalar) -> Scalar {
        if self.is_zero(a) || self.is_zero(b) {
            return acc.clone();
        }
        self.add(acc, &self.mul(a, b))
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(x.recip()))
                }
            }
            (FieldSpec::Prime(p), Scalar::Residue(x)) => {
                if *x == 0 {
                    return None;
                }
                let g = (*x as i64).extended_gcd(&(*p as i64));
                Some(Scalar::Residue(g.x.rem_euclid(*p as i64) as u64))
            }
            _ => self.mismatch(),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Residue(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(x) => x.is_one(),
            Scalar::Residue(x) => *x == 1,
        }
    }

    pub fn belongs(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime(p), Scalar::Residue(x)) => x < p,
            _ => false,
        }
    }

    /// Canonical literal: `n` or `n/d` for rationals, the residue in `0..p` otherwise.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(x) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Residue(x) => x.to_string(),
        }
    }

    /// Parses an integer or fraction literal. Decimal points and exponents are rejected.
    pub fn parse(&self, literal: &str) -> Result<Scalar, Error> {
        let bad = || Error::InvalidScalar(format!("`{literal}` is not an integer or fraction literal"));
        let parse_int = |s: &str| -> Result<BigInt, Error> {
            let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse::<BigInt>().map_err(|_| bad())
        };
        let (num, den) = match literal.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_negative() || d.starts_with('+') {
                    return Err(bad());
                }
                (parse_int(n)?, den)
            }
            None => (parse_int(literal)?, BigInt::one()),
        };
        self.from_ratio(&num, &den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" => Ok(FieldSpec::Rationals),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidField(format!("unknown field `{s}`")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F5: FieldSpec = FieldSpec::Prime(5);

    #[test]
    fn prime_field_requires_prime() {
        assert!(FieldSpec::prime(7).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(9).is_err());
    }

    #[test]
    fn residue_inverse() {
        let three = F5.from_i64(3);
        assert_eq!(F5.inv(&three), Some(F5.from_i64(2)));
        assert_eq!(F5.inv(&F5.zero()), None);
    }

    #[test]
    fn literals_round_trip() {
        let q = FieldSpec::Rationals;
        let half = q.parse("-2/4").unwrap();
        assert_eq!(q.format(&half), "-1/2");
        assert_eq!(F5.format(&F5.parse("1/2").unwrap()), "3");
        assert_eq!(F5.format(&F5.parse("-1").unwrap()), "4");
        assert!(q.parse("1.5").is_err());
        assert!(q.parse("1e3").is_err());
        assert!(q.parse("1/0").is_err());
        assert!(F5.parse("1/10").is_err());
    }

    #[test]
    fn field_spec_strings() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("fp:5".parse::<FieldSpec>().unwrap(), F5);
        assert!("fp:6".parse::<FieldSpec>().is_err());
        assert_eq!(F5.to_string(), "fp:5");
    }

    fn field_axioms(field: FieldSpec, a: i64, b: i64, c: i64, d: i64) {
        let x = field.from_ratio(&a.into(), &(d.abs() + 1).into()).unwrap();
        let y = field.from_i64(b);
        let z = field.from_i64(c);
        assert_eq!(field.add(&x, &y), field.add(&y, &x));
        assert_eq!(field.mul(&x, &y), field.mul(&y, &x));
        assert_eq!(
            field.add(&field.add(&x, &y), &z),
            field.add(&x, &field.add(&y, &z))
        );
        assert_eq!(
            field.mul(&field.mul(&x, &y), &z),
            field.mul(&x, &field.mul(&y, &z))
        );
        assert_eq!(
            field.mul(&x, &field.add(&y, &z)),
            field.add(&field.mul(&x, &y), &field.mul(&x, &z))
        );
        assert!(field.is_zero(&field.add(&x, &field.neg(&x))));
        if let Some(xi) = field.inv(&x) {
            assert!(field.is_one(&field.mul(&x, &xi)));
        } else {
            assert!(field.is_zero(&x));
        }
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in 0i64..20) {
            field_axioms(FieldSpec::Rationals, a, b, c, d);
        }

        #[test]
        fn prime_field_axioms(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in 0i64..20) {
            let d = if (d + 1) % 7 == 0 { d + 1 } else { d };
            field_axioms(FieldSpec::Prime(7), a, b, c, d);
        }
    }
}
