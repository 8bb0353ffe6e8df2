//! Exact-or-float scalar values shared by every module.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

/// Absolute slack used for floating-point inequality checks.
pub const DEFAULT_INEQ_TOL: f64 = 1e-9;

/// Convergence threshold of the value-iteration solver.
pub const DEFAULT_CONV_TOL: f64 = 1e-12;

/// A value that is either an exact rational or a double.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => rational_to_f64(r),
            Number::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    /// "p/q" for exact values, `None` for floats.
    pub fn exact_string(&self) -> Option<String> {
        self.as_exact().map(format_rational)
    }

    /// Exact comparison when both sides are exact, float comparison otherwise.
    pub fn compare(&self, other: &Number) -> Option<Ordering> {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => f.write_str(&format_rational(r)),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Number::Exact(r) => s.serialize_str(&format_rational(r)),
            Number::Float(x) => s.serialize_f64(*x),
        }
    }
}

/// Always prints as "p/q", including integers ("0/1", "3/1").
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        return x;
    }
    // Ratio::to_f64 can give up on very wide operands; fall back to shifting.
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn pow2(exp: u32) -> BigUint {
    BigUint::one() << exp as usize
}

/// The rational `num / 2^exp`.
pub fn dyadic_ratio(num: BigInt, exp: u32) -> BigRational {
    BigRational::new(num, BigInt::from(pow2(exp)))
}

pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn abs_rational(r: &BigRational) -> BigRational {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}

/// True iff `x` is a finite integer-valued double in `1..=64`.
pub(crate) fn small_positive_integer(x: f64) -> Option<u32> {
    if x.is_finite() && x.fract() == 0.0 && (1.0..=64.0).contains(&x) {
        Some(x as u32)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_print_as_fractions() {
        let r = BigRational::new(BigInt::from(6), BigInt::from(8));
        assert_eq!(format_rational(&r), "3/4");
        assert_eq!(format_rational(&BigRational::from_integer(BigInt::from(0))), "0/1");
    }

    #[test]
    fn mixed_comparison_falls_back_to_float() {
        let a = Number::Exact(dyadic_ratio(BigInt::from(1), 2));
        let b = Number::Float(0.3);
        assert_eq!(a.compare(&b), Some(Ordering::Less));
    }
}
