//! Distance values: exact rationals or tolerant decimals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default equality tolerance for decimal-mode spaces.
pub const DEFAULT_EPS: f64 = 1e-9;

/// How distances of a space are represented and compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericMode {
    /// Arbitrary precision rationals, all comparisons exact.
    Rational,
    /// Binary floating point; two values are equal iff they differ by at most `eps`.
    Decimal { eps: f64 },
}

impl NumericMode {
    pub fn decimal() -> Self {
        NumericMode::Decimal { eps: DEFAULT_EPS }
    }

    pub fn eps(&self) -> f64 {
        match self {
            NumericMode::Rational => 0.0,
            NumericMode::Decimal { eps } => *eps,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, NumericMode::Rational)
    }

    pub fn zero(&self) -> DistanceValue {
        match self {
            NumericMode::Rational => DistanceValue::Rational(BigRational::zero()),
            NumericMode::Decimal { .. } => DistanceValue::Decimal(0.0),
        }
    }

    /// Converts `v` into this mode's representation.
    pub fn coerce(&self, v: &DistanceValue) -> DistanceValue {
        match (self, v) {
            (NumericMode::Rational, DistanceValue::Rational(_)) => v.clone(),
            (NumericMode::Rational, DistanceValue::Decimal(x)) => DistanceValue::Rational(
                BigRational::from_float(*x).unwrap_or_else(BigRational::zero),
            ),
            (NumericMode::Decimal { .. }, _) => DistanceValue::Decimal(v.to_f64()),
        }
    }

    /// `a == b` under this mode's tolerance.
    pub fn eq(&self, a: &DistanceValue, b: &DistanceValue) -> bool {
        match self {
            NumericMode::Rational => a.cmp(b) == Ordering::Equal,
            NumericMode::Decimal { eps } => (a.to_f64() - b.to_f64()).abs() <= *eps,
        }
    }

    /// `a <= b` under this mode's tolerance.
    pub fn le(&self, a: &DistanceValue, b: &DistanceValue) -> bool {
        match self {
            NumericMode::Rational => a <= b,
            NumericMode::Decimal { eps } => a.to_f64() <= b.to_f64() + *eps,
        }
    }

    /// `a < b` strictly, i.e. not `b <= a`.
    pub fn lt(&self, a: &DistanceValue, b: &DistanceValue) -> bool {
        !self.le(b, a)
    }

    pub fn parse(&self, token: &str) -> Result<DistanceValue, ParseValueError> {
        match self {
            NumericMode::Rational => parse_rational(token).map(DistanceValue::Rational),
            NumericMode::Decimal { .. } => token
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(DistanceValue::Decimal)
                .ok_or_else(|| ParseValueError(token.to_string())),
        }
    }
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::Rational => write!(f, "rational"),
            NumericMode::Decimal { eps } => write!(f, "decimal(eps={eps:e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a number: {0:?}")]
pub struct ParseValueError(pub String);

/// A single distance. Mixed comparisons fall back to `f64`.
#[derive(Debug, Clone)]
pub enum DistanceValue {
    Rational(BigRational),
    Decimal(f64),
}

impl DistanceValue {
    pub fn from_int(v: i64) -> Self {
        DistanceValue::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        DistanceValue::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            DistanceValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            DistanceValue::Decimal(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DistanceValue::Rational(r) => r.is_zero(),
            DistanceValue::Decimal(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            DistanceValue::Rational(r) => r.is_negative(),
            DistanceValue::Decimal(x) => *x < 0.0,
        }
    }

    pub fn half(&self) -> Self {
        match self {
            DistanceValue::Rational(r) => {
                DistanceValue::Rational(r / BigRational::from_integer(BigInt::from(2)))
            }
            DistanceValue::Decimal(x) => DistanceValue::Decimal(x / 2.0),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        match self {
            DistanceValue::Rational(r) => {
                DistanceValue::Rational(r * BigRational::from_integer(BigInt::from(k)))
            }
            DistanceValue::Decimal(x) => DistanceValue::Decimal(x * k as f64),
        }
    }

    /// `self / k` for a positive integer `k`.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k > 0);
        match self {
            DistanceValue::Rational(r) => {
                DistanceValue::Rational(r / BigRational::from_integer(BigInt::from(k)))
            }
            DistanceValue::Decimal(x) => DistanceValue::Decimal(x / k as f64),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, DistanceValue::Rational(_))
    }
}

fn binop(
    a: &DistanceValue,
    b: &DistanceValue,
    exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
    float: impl FnOnce(f64, f64) -> f64,
) -> DistanceValue {
    match (a, b) {
        (DistanceValue::Rational(x), DistanceValue::Rational(y)) => {
            DistanceValue::Rational(exact(x, y))
        }
        _ => DistanceValue::Decimal(float(a.to_f64(), b.to_f64())),
    }
}

impl Add for &DistanceValue {
    type Output = DistanceValue;
    fn add(self, rhs: Self) -> DistanceValue {
        binop(self, rhs, |x, y| x + y, |x, y| x + y)
    }
}

impl Sub for &DistanceValue {
    type Output = DistanceValue;
    fn sub(self, rhs: Self) -> DistanceValue {
        binop(self, rhs, |x, y| x - y, |x, y| x - y)
    }
}

impl Add for DistanceValue {
    type Output = DistanceValue;
    fn add(self, rhs: Self) -> DistanceValue {
        &self + &rhs
    }
}

impl Sub for DistanceValue {
    type Output = DistanceValue;
    fn sub(self, rhs: Self) -> DistanceValue {
        &self - &rhs
    }
}

impl Ord for DistanceValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DistanceValue::Rational(x), DistanceValue::Rational(y)) => x.cmp(y),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl PartialOrd for DistanceValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for DistanceValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DistanceValue {}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            DistanceValue::Rational(r) => {
                // Terminating decimals print as decimals, everything else as p/q.
                let mut den = r.denom().clone();
                let two = BigInt::from(2);
                let five = BigInt::from(5);
                let mut digits = 0usize;
                while (&den % &two).is_zero() {
                    den /= &two;
                    digits += 1;
                }
                let mut fives = 0usize;
                while (&den % &five).is_zero() {
                    den /= &five;
                    fives += 1;
                }
                if den.is_one() {
                    let places = digits.max(fives);
                    let scaled = r * BigRational::from_integer(BigInt::from(10).pow(places as u32));
                    let int = scaled.to_integer();
                    let neg = int.is_negative();
                    let s = int.abs().to_string();
                    let s = format!("{:0>width$}", s, width = places + 1);
                    let (head, tail) = s.split_at(s.len() - places);
                    write!(f, "{}{}.{}", if neg { "-" } else { "" }, head, tail)
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            DistanceValue::Decimal(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for DistanceValue {
    type Err = ParseValueError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(DistanceValue::Rational)
    }
}

/// Parses integers, fractions `p/q`, decimals and scientific notation into an exact rational.
pub fn parse_rational(token: &str) -> Result<BigRational, ParseValueError> {
    let err = || ParseValueError(token.to_string());
    let t = token.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = t[pos + 1..].parse().map_err(|_| err())?;
            (&t[..pos], exp)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| err())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}
