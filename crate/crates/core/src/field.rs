//! Exact scalars: residues modulo a prime and arbitrary-precision rationals.
//!
//! Every [`Scalar`] carries its [`FieldSpec`]. Residues are kept in `[0, p)` and
//! rationals are kept reduced with a positive denominator, so derived equality
//! and hashing coincide with field equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CullisError, Result};

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

/// Deterministic trial-division primality test, adequate for moduli below 2^32.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(CullisError::InvalidPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match *self {
            FieldSpec::Prime(p) => Some(p),
            FieldSpec::Rational => None,
        }
    }

    /// True when the field has more than `k` elements.
    pub fn larger_than(&self, k: usize) -> bool {
        self.size().is_none_or(|q| q > k as u64)
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            FieldSpec::Prime(p) => Scalar::Residue { value: 0, p },
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// `+1` or `-1` as a field element.
    pub fn sign(&self, s: i8) -> Scalar {
        if s < 0 {
            -self.one()
        } else {
            self.one()
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Prime(p) => {
                let m = BigInt::from(p);
                let r = ((v % &m) + &m) % &m;
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    p,
                }
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
        }
    }

    /// Builds `num / den` in this field.
    pub fn fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(CullisError::Parse("zero denominator".into()));
        }
        match self {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::Prime(_) => {
                let d = self.from_bigint(den);
                if d.is_zero() {
                    return Err(CullisError::Parse(format!(
                        "denominator {den} vanishes in {self}"
                    )));
                }
                Ok(self.from_bigint(num) * d.inv()?)
            }
        }
    }

    /// Parses a decimal integer or a `num/den` fraction.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| CullisError::Parse(format!("not a scalar: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => self.fraction(&int(n)?, &int(d)?),
            None => Ok(self.from_bigint(&int(s)?)),
        }
    }

    /// All elements of a finite field in increasing residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            FieldSpec::Prime(p) => Some((0..p).map(|value| Scalar::Residue { value, p }).collect()),
            FieldSpec::Rational => None,
        }
    }

    /// The element with residue index `i` in a finite field.
    pub fn element(&self, i: u64) -> Scalar {
        match *self {
            FieldSpec::Prime(p) => Scalar::Residue { value: i % p, p },
            FieldSpec::Rational => self.from_i64(i as i64),
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

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue { value: u64, p: u64 },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Residue { p, .. } => FieldSpec::Prime(*p),
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(CullisError::ZeroInverse);
        }
        Ok(match self {
            Scalar::Residue { value, p } => Scalar::Residue {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
        })
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

    /// Maps the value into another field (reducing rationals modulo `p`).
    pub fn to_field(&self, target: FieldSpec) -> Result<Scalar> {
        match (self, target) {
            (_, t) if t == self.field() => Ok(self.clone()),
            (Scalar::Residue { value, .. }, t) => Ok(t.from_i64(*value as i64)),
            (Scalar::Rational(r), t) => t.fraction(r.numer(), r.denom()),
        }
    }

    /// Residue value; `None` over the rationals.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    fn check_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between scalars of different fields"
        );
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                let s = a + b;
                Scalar::Residue {
                    value: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: if a >= b { a - b } else { a + p - b },
                p: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: a * b % p,
                p: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Residue { value, p } => Scalar::Residue {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
            Scalar::Rational(r) => Scalar::Rational(-r),
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
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
        impl<'a> $atr<&'a Scalar> for Scalar {
            fn $am(&mut self, rhs: &Scalar) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $atr<Scalar> for Scalar {
            fn $am(&mut self, rhs: Scalar) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

forward_owned!(Add, add, AddAssign, add_assign);
forward_owned!(Sub, sub, SubAssign, sub_assign);
forward_owned!(Mul, mul, MulAssign, mul_assign);


#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::sample::{random_scalar, seeded};

    fn any_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![Just(FieldSpec::Prime(2)), Just(FieldSpec::Prime(3)), Just(FieldSpec::Prime(101)), Just(FieldSpec::Rational)]
    }

    proptest! {
        #[test]
        fn field_axioms(f in any_field(), seed in any::<u64>()) {
            let mut rng = seeded(seed);
            let (a, b, c) = (random_scalar(&mut rng, f), random_scalar(&mut rng, f), random_scalar(&mut rng, f));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a - &a, f.zero());
            if a.is_zero() {
                prop_assert!(a.inv().is_err());
            } else {
                prop_assert_eq!(&a * &a.inv().unwrap(), f.one());
            }
            if let Some(p) = f.size() {
                prop_assert_eq!(a.pow(p), a);
            }
        }
    }
}
