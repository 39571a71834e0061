//! Double-double scalar for the finite-N oracle.
//!
//! `twofloat::TwoFloat` supplies the arithmetic, but its TwoFloat/TwoFloat quotient
//! drops the residual term and is only accurate to double precision, and its
//! `epsilon()` reports the smallest normal f64. `DoubleDouble` delegates
//! everything else and repairs those two.

use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, Num, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// About 106 significant bits, backed by `twofloat::TwoFloat`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble(pub TwoFloat);

impl DoubleDouble {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble(TwoFloat::from(x))
    }
}

impl From<DoubleDouble> for f64 {
    fn from(x: DoubleDouble) -> f64 {
        f64::from(x.0)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.0.hi(), self.0.lo())
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble(-self.0)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident) => {
        impl $tr for DoubleDouble {
            type Output = Self;
            #[inline]
            fn $f(self, rhs: Self) -> Self {
                DoubleDouble($tr::$f(self.0, rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Rem, rem);

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q = self.0 / rhs.0;
        if !q.is_valid() || q.hi() == 0.0 {
            return DoubleDouble(q);
        }
        // One correction step against the exact residual.
        let r = self.0 - q * rhs.0;
        DoubleDouble(q + r / rhs.0.hi())
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble(TwoFloat::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble(TwoFloat::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(DoubleDouble::from)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(f64::from(self.0))
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        TwoFloat::from_i64(n).map(DoubleDouble)
    }
    fn from_u64(n: u64) -> Option<Self> {
        TwoFloat::from_u64(n).map(DoubleDouble)
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(DoubleDouble::from(x))
    }
}

impl num_traits::NumCast for DoubleDouble {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        n.to_f64().map(<DoubleDouble as From<f64>>::from)
    }
}

macro_rules! consts {
    ($($f:ident),*) => {
        $(#[inline] fn $f() -> Self { DoubleDouble(<TwoFloat as FloatConst>::$f()) })*
    };
}

impl FloatConst for DoubleDouble {
    consts!(
        E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_2_PI, FRAC_2_SQRT_PI, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6,
        FRAC_PI_8, LN_10, LN_2, LOG10_E, LOG2_E, PI, SQRT_2
    );
}

macro_rules! unary {
    ($($f:ident),*) => {
        $(#[inline] fn $f(self) -> Self { DoubleDouble(<TwoFloat as Float>::$f(self.0)) })*
    };
}

macro_rules! predicate {
    ($($f:ident),*) => {
        $(#[inline] fn $f(self) -> bool { <TwoFloat as Float>::$f(self.0) })*
    };
}

macro_rules! constant {
    ($($f:ident),*) => {
        $(#[inline] fn $f() -> Self { DoubleDouble(<TwoFloat as Float>::$f()) })*
    };
}

impl Float for DoubleDouble {
    constant!(nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, max_value);
    predicate!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);
    unary!(
        floor, ceil, round, trunc, fract, abs, signum, exp, exp2, ln, log2, log10, cbrt, sin, cos, tan,
        asin, acos, atan, exp_m1, ln_1p, sinh, cosh, tanh, asinh, acosh, atanh
    );

    fn epsilon() -> Self {
        DoubleDouble::from(f64::EPSILON * f64::EPSILON)
    }

    fn classify(self) -> FpCategory {
        self.0.hi().classify()
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn powf(self, n: Self) -> Self {
        (self.ln() * n).exp()
    }

    fn sqrt(self) -> Self {
        if self.0.hi() <= 0.0 {
            return DoubleDouble(self.0.sqrt());
        }
        // Newton step on the hardware estimate keeps the full width.
        let x = DoubleDouble::from(self.0.hi().sqrt());
        (x + self / x) * DoubleDouble::from(0.5)
    }

    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }

    fn max(self, other: Self) -> Self {
        if self >= other || other.is_nan() {
            self
        } else {
            other
        }
    }

    fn min(self, other: Self) -> Self {
        if self <= other || other.is_nan() {
            self
        } else {
            other
        }
    }

    #[allow(deprecated)]
    fn abs_sub(self, other: Self) -> Self {
        (self - other).max(Self::zero())
    }

    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }

    fn atan2(self, other: Self) -> Self {
        DoubleDouble(self.0.atan2(other.0))
    }

    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }

    fn integer_decode(self) -> (u64, i16, i8) {
        self.0.hi().integer_decode()
    }
}
