//! Exact complex numbers with rational real and imaginary parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::ParseError;
use crate::scalar::{Field, ImaginaryUnit, Scalar};

/// `re + im·i` with arbitrary-precision rational parts, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `num/den` on the real axis. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        let d = rhs.norm_sqr();
        if d.is_zero() {
            return None;
        }
        let num = self * &rhs.conj();
        Some(Self::new(num.re / &d, num.im / d))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Largest absolute numerator or denominator among the two parts.
    pub fn height(&self) -> BigInt {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()]
            .into_iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }

    /// Multiply by `i^k`.
    pub fn mul_ipow(&self, k: u32) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self::new(-self.im.clone(), self.re.clone()),
            2 => -self.clone(),
            _ => Self::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// The fixed `(<re>)+(<im>)i` form used by the operator serialization.
    pub fn to_serial(&self) -> String {
        format!("({})+({})i", self.re, self.im)
    }

    pub fn from_serial(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::new(s, "expected `(<re>)+(<im>)i`");
        let body = s.strip_prefix('(').ok_or_else(bad)?;
        let (re, rest) = body.split_once(")+(").ok_or_else(bad)?;
        let im = rest.strip_suffix(")i").ok_or_else(bad)?;
        let re: BigRational = re.parse().map_err(|_| bad())?;
        let im: BigRational = im.parse().map_err(|_| bad())?;
        let v = Self::new(re, im);
        if v.to_serial() != s {
            return Err(ParseError::new(s, "rational not in lowest terms"));
        }
        Ok(v)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Compact human form: `3`, `-1/2`, `2i`, `-i`, `1+2i`, `1/2-3/4i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parse a real rational literal: `3`, `-7/2`, `0.25`, `-1.5e-3` (decimals
/// are converted exactly).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Whether a literal is written as a decimal (`.` or exponent) rather than
/// an integer or fraction.
pub fn is_decimal_literal(s: &str) -> bool {
    s.contains('.') || s.contains(['e', 'E'])
}

impl FromStr for GaussianRational {
    type Err = ParseError;

    /// Accepts `2i`, `-1`, `3/7i`, `1+2i`, `-1/2-3i`, `i`, `-i`, `0.5i`.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| ParseError::new(input, msg);
        if s.is_empty() {
            return Err(err("empty number"));
        }
        let Some(body) = s.strip_suffix('i') else {
            let re = parse_rational(&s).ok_or_else(|| err("invalid rational"))?;
            return Ok(Self::real(re));
        };
        // split into real and imaginary parts at the last sign that is not
        // leading and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for p in (1..bytes.len()).rev() {
            if (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E') {
                split = Some(p);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(p) => (&body[..p], &body[p..]),
            None => ("", body),
        };
        let im = match im_s {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other).ok_or_else(|| err("invalid imaginary part"))?,
        };
        let re = if re_s.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_s).ok_or_else(|| err("invalid real part"))?
        };
        Ok(Self::new(re, im))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero; use [`GaussianRational::checked_div`] to
    /// handle it.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for GaussianRational {
    fn mul_assign(&mut self, rhs: Self) {
        *self = &*self * &rhs;
    }
}

impl Scalar for GaussianRational {
    fn from_i64(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    fn times_int(&self, n: i64) -> Self {
        let n = BigRational::from_integer(n.into());
        Self::new(&self.re * &n, &self.im * &n)
    }
}

impl ImaginaryUnit for GaussianRational {
    fn imag_unit() -> Self {
        Self::i()
    }

    fn times_int_ipow(&self, n: i64, k: u32) -> Self {
        self.times_int(n).mul_ipow(k)
    }
}

impl Field for GaussianRational {
    fn checked_inv(&self) -> Option<Self> {
        Self::one().checked_div(self)
    }

    fn pivot_weight(&self) -> f64 {
        self.to_complex64().norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(g("2i"), GaussianRational::from_ints(0, 2));
        assert_eq!(g("-1"), GaussianRational::from_ints(-1, 0));
        assert_eq!(g("3/7i"), GaussianRational::new(BigRational::zero(), BigRational::new(3.into(), 7.into())));
        assert_eq!(g("1+2i"), GaussianRational::from_ints(1, 2));
        assert_eq!(g("-1/2-3i").re, BigRational::new((-1).into(), 2.into()));
        assert_eq!(g("-i"), GaussianRational::from_ints(0, -1));
        assert_eq!(g("0.06i").im, BigRational::new(3.into(), 50.into()));
        assert_eq!(g("1e-2"), GaussianRational::ratio(1, 100));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn display_round_trips_through_parse() {
        for s in ["0", "3", "-1/2", "2i", "-i", "i", "1+2i", "1/2-3/4i"] {
            assert_eq!(g(s).to_string(), s);
        }
    }

    #[test]
    fn lowest_terms_and_division() {
        let a = GaussianRational::new(BigRational::new(2.into(), 4.into()), BigRational::zero());
        assert_eq!(a, GaussianRational::ratio(1, 2));
        let q = g("1+i").checked_div(&g("1-i")).unwrap();
        assert_eq!(q, g("i"));
        assert!(g("1").checked_div(&GaussianRational::zero()).is_none());
    }

    #[test]
    fn serial_form_is_strict() {
        let z = g("-3/4+2i");
        assert_eq!(z.to_serial(), "(-3/4)+(2)i");
        assert_eq!(GaussianRational::from_serial("(-3/4)+(2)i").unwrap(), z);
        assert!(GaussianRational::from_serial("(-6/8)+(2)i").is_err());
        assert!(GaussianRational::from_serial("-3/4+2i").is_err());
    }

    #[test]
    fn mul_ipow_matches_repeated_multiplication() {
        let z = g("2-3i");
        let mut w = z.clone();
        for k in 0..8 {
            assert_eq!(z.mul_ipow(k), w);
            w *= g("i");
        }
    }
}
