//! Exact coefficient fields: the rationals or a prime field `F_p`.
//!
//! A [`Scalar`] carries its field with it, so values can be combined without a
//! context object. Combining scalars from different fields is a programming
//! error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// A prime field; rejects non-primes and moduli that would overflow `u64`
    /// products.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar(Repr::Q(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => Scalar(Repr::Fp {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            }),
        }
    }

    /// `num / den` in this field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: "zero denominator".into(),
            });
        }
        match self {
            Field::Rational => Ok(Scalar(Repr::Q(BigRational::new(num.clone(), den.clone())))),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let n = num.mod_floor(&m).to_u64().unwrap_or(0);
                let d = den.mod_floor(&m).to_u64().unwrap_or(0);
                if d == 0 {
                    return Err(Error::InvalidField(format!(
                        "denominator {den} vanishes modulo {p}"
                    )));
                }
                Ok(Scalar(Repr::Fp {
                    value: mul_mod(n, pow_mod(d, p - 2, p), p),
                    modulus: p,
                }))
            }
        }
    }

    /// Parses `"3"`, `"-2"`, `"1/2"` or `"-7/3"`.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse {
            line: 0,
            column: 0,
            message: format!("invalid coefficient `{text}`"),
        };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }

    /// `Q` or `Fp:<p>`.
    pub fn name(self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("Fp:{p}"),
        }
    }

    /// Parses `Q` or `Fp:<prime>`.
    pub fn parse_name(text: &str) -> Result<Field> {
        let text = text.trim();
        if text == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = text.strip_prefix("Fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidField(format!("bad prime in `{text}`")))?;
            return Field::prime(p);
        }
        Err(Error::InvalidField(format!("unknown field `{text}`")))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Q(_) => Field::Rational,
            Repr::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_zero(),
            Repr::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_one(),
            Repr::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Q(q) => Scalar(Repr::Q(q.recip())),
            Repr::Fp { value, modulus } => Scalar(Repr::Fp {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        })
    }

    pub fn scale_i64(&self, n: i64) -> Scalar {
        self * &self.field().from_i64(n)
    }

    /// The rational value, when the field is `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(q) => Some(q),
            Repr::Fp { .. } => None,
        }
    }

    /// True for a strictly negative rational. Prime field elements are never
    /// negative; this only drives sign-aware printing.
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_negative(),
            Repr::Fp { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

fn field_mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed coefficient fields {} and {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a + b)),
            (Repr::Fp { value: a, modulus: p }, Repr::Fp { value: b, modulus: q }) if p == q => {
                Scalar(Repr::Fp {
                    value: (a + b) % p,
                    modulus: *p,
                })
            }
            _ => field_mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a * b)),
            (Repr::Fp { value: a, modulus: p }, Repr::Fp { value: b, modulus: q }) if p == q => {
                Scalar(Repr::Fp {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                })
            }
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(a) => Scalar(Repr::Q(-a)),
            Repr::Fp { value, modulus } => Scalar(Repr::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
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

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = Field::Rational;
        let half = q.parse_scalar("1/2").unwrap();
        let third = q.parse_scalar("-1/3").unwrap();
        assert_eq!((&half + &third).to_string(), "1/6");
        assert_eq!((&half * &third).to_string(), "-1/6");
        assert_eq!(third.inverse().unwrap().to_string(), "-3");
        assert!(q.zero().inverse().is_none());
    }

    #[test]
    fn prime_field_wraps() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!((&three * &three).to_string(), "2");
        assert_eq!((-&three).to_string(), "4");
        assert_eq!(f.parse_scalar("1/2").unwrap().to_string(), "4");
        assert!((&three * &three.inverse().unwrap()).is_one());
    }

    #[test]
    fn field_names_round_trip() {
        assert_eq!(Field::parse_name("Q").unwrap(), Field::Rational);
        assert_eq!(Field::parse_name("Fp:5").unwrap(), Field::Prime(5));
        assert!(Field::parse_name("Fp:6").is_err());
        assert!(Field::parse_name("R").is_err());
        assert_eq!(Field::Prime(5).name(), "Fp:5");
    }

    #[test]
    #[should_panic(expected = "mixed coefficient fields")]
    fn mixing_fields_panics() {
        let _ = &Field::Rational.one() + &Field::Prime(3).one();
    }
}
