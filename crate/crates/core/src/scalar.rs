//! Dual-backend scalar arithmetic: exact rationals for polynomial data,
//! IEEE doubles for everything else.
//!
//! Operations stay exact as long as both operands are exact; mixing an
//! exact value with a float demotes the result to a float. This is the
//! automatic chooser used throughout the crate: canonical frames with
//! rational coefficients keep exact Levi matrices, while transcendental
//! coefficients fall back to doubles at the point of evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

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

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        })
    }

    pub fn powi(&self, n: i32) -> Option<Scalar> {
        if n < 0 && self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(r.pow(n)),
            Scalar::Float(x) => Scalar::Float(x.powi(n)),
        })
    }

    /// Square root, staying exact when the operand is a perfect rational square.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if r.is_negative() {
                    return None;
                }
                if let (Some(n), Some(d)) = (exact_int_sqrt(r.numer()), exact_int_sqrt(r.denom()))
                {
                    Some(Scalar::Exact(BigRational::new(n, d)))
                } else {
                    Some(Scalar::Float(rational_to_f64(r).sqrt()))
                }
            }
            Scalar::Float(x) => {
                if *x < 0.0 {
                    None
                } else {
                    Some(Scalar::Float(x.sqrt()))
                }
            }
        }
    }

    /// Exact equality for exact pairs, bitwise f64 equality otherwise.
    pub fn eq_exact(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated parts for out-of-range big ints.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn exact_int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                assert!(!b.is_zero(), "exact division by zero");
                Scalar::Exact(a / b)
            }
            (a, b) => Scalar::Float(a.to_f64() / b.to_f64()),
        }
    }
}

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
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r.clone()),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let s = &a + &b;
        assert!(s.is_exact());
        assert!(s.eq_exact(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn mixed_arithmetic_demotes() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::from_f64(0.5);
        assert!(!(&a * &b).is_exact());
    }

    #[test]
    fn exact_sqrt_of_perfect_square() {
        let s = Scalar::ratio(9, 4).sqrt().unwrap();
        assert!(s.is_exact());
        assert!(s.eq_exact(&Scalar::ratio(3, 2)));
        let t = Scalar::from_int(2).sqrt().unwrap();
        assert!(!t.is_exact());
        assert!((t.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn negative_powers_of_zero_rejected() {
        assert!(Scalar::zero().powi(-1).is_none());
        assert!(Scalar::from_int(2).powi(-2).unwrap().eq_exact(&Scalar::ratio(1, 4)));
    }
}
