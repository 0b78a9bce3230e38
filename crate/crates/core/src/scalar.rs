//! Exact-or-float scalars.
//!
//! Structural data (symmetric bases, Lie generators, conjugators) is carried
//! as exact rationals. Evaluating a one-parameter family at a real parameter
//! (`exp`, `cos`, `sinh`, ...) is the only way a [`Scalar::Float`] comes into
//! existence, and once an operand is a float the result is a float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Absolute threshold under which a float is treated as zero by structural
/// decisions (rank, span membership, sign of a coordinate).
pub const FLOAT_ZERO: f64 = 1e-10;

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    /// Exact zero, or a float within [`FLOAT_ZERO`] of zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= FLOAT_ZERO,
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one()).is_zero()
    }

    /// -1, 0 or 1; floats inside the zero band report 0.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        match self {
            Scalar::Exact(r) => {
                if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Float(x) => {
                if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn recip(&self) -> Self {
        Scalar::one() / self.clone()
    }

    pub fn powi(&self, n: i32) -> Self {
        let mut out = Scalar::one();
        let base = if n < 0 { self.recip() } else { self.clone() };
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Square root of a non-negative scalar. Exact when numerator and
    /// denominator are both perfect squares.
    pub fn sqrt(&self) -> Self {
        match self {
            Scalar::Exact(r) if !r.is_negative() => {
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Scalar::Exact(BigRational::new(n, d))
                } else {
                    Scalar::Float(self.to_f64().sqrt())
                }
            }
            _ => Scalar::Float(self.to_f64().sqrt()),
        }
    }

    fn transcendental(&self, at_zero: i64, f: fn(f64) -> f64) -> Self {
        match self {
            Scalar::Exact(r) if r.is_zero() => Scalar::int(at_zero),
            _ => Scalar::Float(f(self.to_f64())),
        }
    }

    pub fn exp(&self) -> Self {
        self.transcendental(1, f64::exp)
    }

    pub fn cos(&self) -> Self {
        self.transcendental(1, f64::cos)
    }

    pub fn sin(&self) -> Self {
        self.transcendental(0, f64::sin)
    }

    pub fn cosh(&self) -> Self {
        self.transcendental(1, f64::cosh)
    }

    pub fn sinh(&self) -> Self {
        self.transcendental(0, f64::sinh)
    }

    /// Natural log; exact only for `ln 1 = 0`.
    pub fn ln(&self) -> Self {
        if let Scalar::Exact(r) = self {
            if r.is_one() {
                return Scalar::zero();
            }
        }
        Scalar::Float(self.to_f64().ln())
    }

    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) if tol == 0.0 => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }

    /// Total order on the real value (floats compared as f64).
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                &self $op &rhs
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => {
                if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15 {
                    write!(f, "{x:.1}")
                } else {
                    write!(f, "{x}")
                }
            }
        }
    }
}

/// Largest accepted decimal exponent magnitude in literals.
const MAX_EXPONENT: u32 = 400;

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (neg, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(if all.is_empty() {
        "0"
    } else {
        &all
    })
    .ok()?);
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut scale: i64 = -(frac_part.len() as i64);
    if let Some(e) = exponent {
        let (eneg, edigits) = match e.as_bytes().first()? {
            b'-' => (true, &e[1..]),
            b'+' => (false, &e[1..]),
            _ => (false, e),
        };
        if edigits.is_empty() || edigits.len() > 4 || !edigits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let ev: i64 = edigits.parse().ok()?;
        scale += if eneg { -ev } else { ev };
    }
    if scale.unsigned_abs() > u64::from(MAX_EXPONENT) + 64 {
        return None;
    }
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if neg { -value } else { value })
}

impl FromStr for Scalar {
    type Err = ParseError;

    /// Integers, `p/q` rationals and decimals (optionally with exponent) all
    /// parse to exact rationals.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let bad = || ParseError::BadNumber(s.chars().take(40).collect());
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_decimal(p.trim()).ok_or_else(bad)?;
            let q = parse_decimal(q.trim()).ok_or_else(bad)?;
            if !p.is_integer() || !q.is_integer() {
                return Err(bad());
            }
            if q.is_zero() {
                return Err(ParseError::ZeroDenominator);
            }
            return Ok(Scalar::Exact(p / q));
        }
        parse_decimal(s).map(Scalar::Exact).ok_or_else(bad)
    }
}
