use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

use crate::error::Error;

/// An exact rational scalar.
///
/// Arithmetic never rounds. Overflow of the underlying `i128` numerator or
/// denominator panics; inputs of any realistic size stay far from that bound.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(Ratio<i128>);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Ratio::new_raw(0, 1));
    pub const ONE: Scalar = Scalar(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Scalar {
        assert!(denom != 0, "zero denominator");
        Scalar(Ratio::new(numer, denom))
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar(Ratio::from_integer(v as i128))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(self) -> Scalar {
        Scalar(self.0.abs())
    }

    pub fn max(self, other: Scalar) -> Scalar {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Scalar) -> Scalar {
        std::cmp::min(self, other)
    }

    /// Lossy view for display and plotting only.
    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from_int(v as i64)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0.checked_add(&rhs.0).expect("scalar overflow"))
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0.checked_sub(&rhs.0).expect("scalar overflow"))
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0.checked_mul(&rhs.0).expect("scalar overflow"))
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar(self.0.checked_div(&rhs.0).expect("scalar overflow"))
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = *self + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = *self - rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |acc, x| acc + *x)
    }
}

/// Integers print bare, everything else as `num/den`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses integers (`-12`), fractions (`7/2`) and finite decimals with an
/// optional exponent (`-1.25`, `3e2`). Decimals are converted exactly.
/// Infinities and NaN are rejected.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || Error::ParseScalar(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((num, den)) = t.split_once('/') {
            let num: i128 = num.trim().parse().map_err(|_| err())?;
            let den: i128 = den.trim().parse().map_err(|_| err())?;
            if den == 0 {
                return Err(err());
            }
            return Ok(Scalar::new(num, den));
        }
        parse_decimal(t).ok_or_else(err)
    }
}

fn parse_decimal(t: &str) -> Option<Scalar> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer.checked_mul(10)?.checked_add((b - b'0') as i128)?;
    }
    let scale = exp.checked_sub(frac_part.len() as i32)?;
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    let mut value = if scale >= 0 {
        Ratio::from_integer(numer.checked_mul(pow)?)
    } else {
        Ratio::new(numer, pow)
    };
    if neg {
        value = -value;
    }
    Some(Scalar(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_forms() {
        assert_eq!("-12".parse::<Scalar>().unwrap(), Scalar::from_int(-12));
        assert_eq!("7/2".parse::<Scalar>().unwrap(), Scalar::new(7, 2));
        assert_eq!("-0.25".parse::<Scalar>().unwrap(), Scalar::new(-1, 4));
        assert_eq!("0.1".parse::<Scalar>().unwrap(), Scalar::new(1, 10));
        assert_eq!("1.5e2".parse::<Scalar>().unwrap(), Scalar::from_int(150));
        assert_eq!("25e-2".parse::<Scalar>().unwrap(), Scalar::new(1, 4));
        assert_eq!("+3".parse::<Scalar>().unwrap(), Scalar::from_int(3));
    }

    #[test]
    fn rejects_non_finite_and_garbage() {
        for bad in ["-inf", "inf", "NaN", "", "1/0", "1.2.3", "abc", "-", "."] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(Scalar::new(6, 4).to_string(), "3/2");
        assert_eq!(Scalar::new(-8, 4).to_string(), "-2");
        assert_eq!(Scalar::ZERO.to_string(), "0");
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = Scalar::new(1, 3);
        assert_eq!(third + third + third, Scalar::ONE);
        assert_eq!((Scalar::from_int(3) - Scalar::new(1, 2)) * Scalar::from_int(2), Scalar::from_int(5));
        assert_eq!(Scalar::from_int(-4).abs(), Scalar::from_int(4));
    }
}
