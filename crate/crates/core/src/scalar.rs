//! Scalar traits shared by the exact and floating-point code paths.
//!
//! The operator algebra, the polynomial types, the graded oracle matrix and the
//! oscillator layer are all written against these traits so that the same code
//! runs over Gaussian rationals, plain rationals, `f64` and `Complex<f64>`.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring element.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn from_i64(n: i64) -> Self;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `self * n`.
    fn times_int(&self, n: i64) -> Self {
        self.clone() * Self::from_i64(n)
    }
}

/// Rings that contain a square root of −1.
pub trait ImaginaryUnit: Scalar {
    fn imag_unit() -> Self;

    /// `self * n * i^k` without building intermediate values where possible.
    fn times_int_ipow(&self, n: i64, k: u32) -> Self {
        let mut v = self.times_int(n);
        for _ in 0..(k % 4) {
            v = v * Self::imag_unit();
        }
        v
    }
}

/// A field. `checked_inv` returns `None` exactly when the element is
/// (numerically) zero.
pub trait Field: Scalar + Div<Output = Self> {
    fn checked_inv(&self) -> Option<Self>;

    /// Zero test used by elimination; exact types compare with zero, floating
    /// types use a small absolute threshold.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Magnitude used to rank pivot candidates.
    fn pivot_weight(&self) -> f64;
}

/// An ordered field used by the oscillator layer.
pub trait Real: Field + PartialOrd {
    /// Values `<= tolerance()` count as non-positive in positivity tests.
    fn tolerance() -> Self;
    fn to_f64(&self) -> f64;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn abs(&self) -> Self;
    /// Whether arithmetic on this type is exact.
    fn is_exact() -> bool;
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn from_i64(n: i64) -> Self {
                n as $t
            }
        }
        impl Field for $t {
            fn checked_inv(&self) -> Option<Self> {
                if self.is_negligible() {
                    None
                } else {
                    Some(1.0 / *self)
                }
            }
            fn is_negligible(&self) -> bool {
                <$t>::abs(*self) <= $tol
            }
            fn pivot_weight(&self) -> f64 {
                <$t>::abs(*self) as f64
            }
        }
        impl Real for $t {
            fn tolerance() -> Self {
                $tol
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-6);

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl Field for BigRational {
    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn pivot_weight(&self) -> f64 {
        ToPrimitive::to_f64(self).map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

impl Real for BigRational {
    fn tolerance() -> Self {
        Self::zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl ImaginaryUnit for Complex64 {
    fn imag_unit() -> Self {
        Complex64::i()
    }
}

impl Field for Complex64 {
    fn checked_inv(&self) -> Option<Self> {
        if self.is_negligible() {
            None
        } else {
            Some(self.inv())
        }
    }
    fn is_negligible(&self) -> bool {
        self.norm() <= 1e-12
    }
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}
